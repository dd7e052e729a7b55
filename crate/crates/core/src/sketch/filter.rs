//! Median filtering and adaptive binarization.

use super::SketchError;
use crate::raster::{BinaryImage, GrayImage};

/// Median filter with clamped-border replication. The kernel must be odd
/// and no larger than the smaller image side.
pub fn median_filter(img: &GrayImage, kernel: usize) -> Result<GrayImage, SketchError> {
    if kernel < 3 || kernel % 2 == 0 {
        return Err(SketchError::InvalidKernel(kernel));
    }
    if kernel > img.width.min(img.height) {
        return Err(SketchError::InvalidKernel(kernel));
    }
    let r = (kernel / 2) as isize;
    let mut out = GrayImage::filled(img.width, img.height, 0);
    let mut window = Vec::with_capacity(kernel * kernel);
    for y in 0..img.height as isize {
        for x in 0..img.width as isize {
            window.clear();
            for dy in -r..=r {
                for dx in -r..=r {
                    window.push(img.get_clamped(x + dx, y + dy));
                }
            }
            let mid = window.len() / 2;
            let (_, median, _) = window.select_nth_unstable(mid);
            out.set(x as usize, y as usize, *median);
        }
    }
    Ok(out)
}

/// Summed-area table with one extra row/column of zeros.
fn integral(img: &GrayImage) -> Vec<u64> {
    let (w, h) = (img.width, img.height);
    let stride = w + 1;
    let mut sat = vec![0u64; stride * (h + 1)];
    for y in 0..h {
        let mut row_sum = 0u64;
        for x in 0..w {
            row_sum += img.get(x, y) as u64;
            sat[(y + 1) * stride + (x + 1)] = sat[y * stride + (x + 1)] + row_sum;
        }
    }
    sat
}

/// Adaptive mean threshold: a pixel is on (dark stroke) iff its luminance
/// is below the local window mean minus `offset`. Windows are clamped to
/// the image, and the mean is taken over the clamped intersection.
pub fn adaptive_binarize(
    img: &GrayImage,
    window: usize,
    offset: f64,
) -> Result<BinaryImage, SketchError> {
    if window < 3 || window % 2 == 0 {
        return Err(SketchError::InvalidKernel(window));
    }
    let sat = integral(img);
    let stride = img.width + 1;
    let r = (window / 2) as isize;
    let mut out = BinaryImage::new(img.width, img.height);
    for y in 0..img.height as isize {
        let y0 = (y - r).max(0) as usize;
        let y1 = ((y + r) as usize).min(img.height - 1);
        for x in 0..img.width as isize {
            let x0 = (x - r).max(0) as usize;
            let x1 = ((x + r) as usize).min(img.width - 1);
            let sum = sat[(y1 + 1) * stride + (x1 + 1)] + sat[y0 * stride + x0]
                - sat[y0 * stride + (x1 + 1)]
                - sat[(y1 + 1) * stride + x0];
            let count = ((y1 + 1 - y0) * (x1 + 1 - x0)) as f64;
            let mean = sum as f64 / count;
            let v = img.get(x as usize, y as usize) as f64;
            out.set(x as usize, y as usize, v < mean - offset);
        }
    }
    Ok(out)
}
