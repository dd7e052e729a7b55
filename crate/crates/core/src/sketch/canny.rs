//! Canny edge detection: Gaussian smoothing, Sobel gradients, non-maximum
//! suppression and double-threshold hysteresis.

use super::SketchError;
use crate::raster::{BinaryImage, GrayImage};

const SIGMA: f64 = 1.4;

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    for v in &mut k {
        *v /= sum;
    }
    k
}

/// Separable Gaussian blur with clamped borders, returning f64 samples.
fn gaussian_blur(img: &GrayImage, sigma: f64) -> Vec<f64> {
    let (w, h) = (img.width as isize, img.height as isize);
    let k = gaussian_kernel(sigma);
    let r = (k.len() / 2) as isize;
    let mut tmp = vec![0.0; (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (i, &kv) in k.iter().enumerate() {
                acc += kv * img.get_clamped(x + i as isize - r, y) as f64;
            }
            tmp[(y * w + x) as usize] = acc;
        }
    }
    let mut out = vec![0.0; (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (i, &kv) in k.iter().enumerate() {
                let sy = (y + i as isize - r).clamp(0, h - 1);
                acc += kv * tmp[(sy * w + x) as usize];
            }
            out[(y * w + x) as usize] = acc;
        }
    }
    out
}

/// Standard Canny over a grayscale image. `low`/`high` threshold the raw
/// Sobel gradient magnitude of the smoothed image.
pub fn canny_edges(img: &GrayImage, low: f64, high: f64) -> Result<BinaryImage, SketchError> {
    if !(low > 0.0) || low >= high {
        return Err(SketchError::InvalidThresholds { low, high });
    }
    let (w, h) = (img.width, img.height);
    let blurred = gaussian_blur(img, SIGMA);
    let at = |x: isize, y: isize| -> f64 {
        let cx = x.clamp(0, w as isize - 1);
        let cy = y.clamp(0, h as isize - 1);
        blurred[cy as usize * w + cx as usize]
    };

    let mut mag = vec![0.0f64; w * h];
    let mut gx = vec![0.0f64; w * h];
    let mut gy = vec![0.0f64; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let dx = at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1)
                - at(x - 1, y - 1)
                - 2.0 * at(x - 1, y)
                - at(x - 1, y + 1);
            let dy = at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1)
                - at(x - 1, y - 1)
                - 2.0 * at(x, y - 1)
                - at(x + 1, y - 1);
            let i = y as usize * w + x as usize;
            gx[i] = dx;
            gy[i] = dy;
            mag[i] = dx.hypot(dy);
        }
    }

    // Non-maximum suppression along the quantized gradient direction.
    let mut thin = vec![0.0f64; w * h];
    for y in 1..h.saturating_sub(1) {
        for x in 1..w.saturating_sub(1) {
            let i = y * w + x;
            let m = mag[i];
            if m == 0.0 {
                continue;
            }
            let mut angle = gy[i].atan2(gx[i]).to_degrees();
            if angle < 0.0 {
                angle += 180.0;
            }
            let (n1, n2) = if !(22.5..157.5).contains(&angle) {
                (mag[i - 1], mag[i + 1])
            } else if angle < 67.5 {
                (mag[i - w - 1], mag[i + w + 1])
            } else if angle < 112.5 {
                (mag[i - w], mag[i + w])
            } else {
                (mag[i - w + 1], mag[i + w - 1])
            };
            if m >= n1 && m >= n2 {
                thin[i] = m;
            }
        }
    }

    // Hysteresis: seed from strong pixels, grow through weak ones.
    let mut out = BinaryImage::new(w, h);
    let mut stack = Vec::new();
    for i in 0..w * h {
        if thin[i] >= high && !out.data[i] {
            out.data[i] = true;
            stack.push(i);
            while let Some(j) = stack.pop() {
                let (jx, jy) = ((j % w) as isize, (j / w) as isize);
                for dy in -1..=1isize {
                    for dx in -1..=1isize {
                        let (nx, ny) = (jx + dx, jy + dy);
                        if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                            continue;
                        }
                        let n = ny as usize * w + nx as usize;
                        if !out.data[n] && thin[n] >= low {
                            out.data[n] = true;
                            stack.push(n);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_has_no_edges() {
        let img = GrayImage::filled(32, 32, 128);
        let out = canny_edges(&img, 50.0, 150.0).unwrap();
        assert_eq!(out.count_on(), 0);
    }

    #[test]
    fn rejects_bad_thresholds() {
        let img = GrayImage::filled(8, 8, 0);
        assert!(canny_edges(&img, 150.0, 50.0).is_err());
        assert!(canny_edges(&img, 50.0, 50.0).is_err());
        assert!(canny_edges(&img, 0.0, 50.0).is_err());
    }

    #[test]
    fn filled_square_yields_boundary_ring() {
        let mut img = GrayImage::filled(64, 64, 255);
        for y in 20..44 {
            for x in 20..44 {
                img.set(x, y, 0);
            }
        }
        let out = canny_edges(&img, 50.0, 150.0).unwrap();
        assert!(out.count_on() > 0);
        // The true boundary is the ring of square pixels adjacent to
        // white. Every edge pixel must lie within 1 px of it, and every
        // boundary side must be represented within 1 px.
        let on_boundary = |x: usize, y: usize| -> bool {
            let inside = |x: usize, y: usize| (20..44).contains(&x) && (20..44).contains(&y);
            if !inside(x, y) {
                return false;
            }
            [(x as isize - 1, y as isize), (x as isize + 1, y as isize), (x as isize, y as isize - 1), (x as isize, y as isize + 1)]
                .iter()
                .any(|&(nx, ny)| !(20..44).contains(&(nx as usize)) || !(20..44).contains(&(ny as usize)))
        };
        for (x, y) in out.on_pixels() {
            let near = (-1..=1).any(|dy: isize| {
                (-1..=1).any(|dx: isize| {
                    let (nx, ny) = (x as isize + dx, y as isize + dy);
                    nx >= 0 && ny >= 0 && on_boundary(nx as usize, ny as usize)
                })
            });
            assert!(near, "edge pixel ({x},{y}) far from square boundary");
        }
        // Completeness probe: boundary midpoints covered within 1 px.
        for probe in [(32usize, 20usize), (32, 43), (20, 32), (43, 32)] {
            let covered = (-1..=1).any(|dy: isize| {
                (-1..=1).any(|dx: isize| {
                    out.get_checked(probe.0 as isize + dx, probe.1 as isize + dy)
                })
            });
            assert!(covered, "boundary near {probe:?} missed");
        }
    }

    #[test]
    fn single_pixel_impulse_is_contained() {
        let mut img = GrayImage::filled(32, 32, 255);
        img.set(16, 16, 0);
        let out = canny_edges(&img, 50.0, 150.0).unwrap();
        for (x, y) in out.on_pixels() {
            assert!(
                (15..=17).contains(&x) && (15..=17).contains(&y),
                "response at ({x},{y}) outside the impulse 8-neighborhood"
            );
        }
    }
}
