//! Border following, morphological closing and outer-contour filling for
//! foreground mask extraction.

use super::{SketchError, ViewMask};
use crate::raster::BinaryImage;

/// One pass of 3x3 dilation followed by 3x3 erosion; bridges single-pixel
/// breaks in edge chains without growing clean strokes.
pub fn morphological_close(img: &BinaryImage) -> BinaryImage {
    let (w, h) = (img.width as isize, img.height as isize);
    let mut dilated = BinaryImage::new(img.width, img.height);
    for y in 0..h {
        for x in 0..w {
            let mut any = false;
            'scan: for dy in -1..=1 {
                for dx in -1..=1 {
                    if img.get_checked(x + dx, y + dy) {
                        any = true;
                        break 'scan;
                    }
                }
            }
            dilated.set(x as usize, y as usize, any);
        }
    }
    let mut out = BinaryImage::new(img.width, img.height);
    for y in 0..h {
        for x in 0..w {
            let mut all = true;
            'scan: for dy in -1..=1 {
                for dx in -1..=1 {
                    if !dilated.get_checked(x + dx, y + dy) {
                        all = false;
                        break 'scan;
                    }
                }
            }
            out.set(x as usize, y as usize, all);
        }
    }
    out
}

/// Pixels of `mask` that touch the background (its one-pixel boundary ring).
pub fn mask_boundary(mask: &BinaryImage) -> BinaryImage {
    let mut out = BinaryImage::new(mask.width, mask.height);
    for y in 0..mask.height as isize {
        for x in 0..mask.width as isize {
            if !mask.get_checked(x, y) {
                continue;
            }
            let edge = [(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)]
                .iter()
                .any(|&(nx, ny)| !mask.get_checked(nx, ny));
            out.set(x as usize, y as usize, edge);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BorderKind {
    Outer,
    Hole,
}

#[derive(Debug)]
struct Border {
    kind: BorderKind,
    parent: usize,
    pixels: Vec<(usize, usize)>,
}

/// Clockwise 8-neighborhood in image coordinates (y down).
const NEIGHBORS: [(isize, isize); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

fn dir_index(from: (isize, isize), to: (isize, isize)) -> usize {
    let d = (to.0 - from.0, to.1 - from.1);
    NEIGHBORS.iter().position(|&n| n == d).expect("non-adjacent pixels")
}

/// Border following over a binary image. Returns every border with its
/// topological parent; border number 1 is the implicit image frame.
fn follow_borders(img: &BinaryImage) -> Vec<(usize, Border)> {
    let (w, h) = (img.width as isize, img.height as isize);
    // Working copy padded by a background frame; values follow the
    // in-place labeling scheme: 0 background, 1 unvisited foreground,
    // +n / -n border labels.
    let pw = (w + 2) as usize;
    let mut f = vec![0i32; pw * (h + 2) as usize];
    for y in 0..h {
        for x in 0..w {
            if img.get(x as usize, y as usize) {
                f[(y + 1) as usize * pw + (x + 1) as usize] = 1;
            }
        }
    }
    let at = |f: &Vec<i32>, x: isize, y: isize| f[y as usize * pw + x as usize];

    let mut borders: Vec<(usize, Border)> = Vec::new();
    let mut kinds: Vec<BorderKind> = vec![BorderKind::Hole, BorderKind::Hole]; // 0 unused, 1 = frame
    let mut parents: Vec<usize> = vec![0, 0];
    let mut nbd = 1usize;

    for y in 1..=h {
        let mut lnbd = 1usize;
        for x in 1..=w {
            let v = at(&f, x, y);
            if v == 0 {
                continue;
            }
            let mut start: Option<((isize, isize), BorderKind)> = None;
            if v == 1 && at(&f, x - 1, y) == 0 {
                start = Some(((x - 1, y), BorderKind::Outer));
            } else if v >= 1 && at(&f, x + 1, y) == 0 {
                if v > 1 {
                    lnbd = v as usize;
                }
                start = Some(((x + 1, y), BorderKind::Hole));
            }

            if let Some(((sx, sy), kind)) = start {
                nbd += 1;
                let border_id = nbd;
                let parent = match (kind, kinds[lnbd]) {
                    (BorderKind::Outer, BorderKind::Outer) => parents[lnbd],
                    (BorderKind::Outer, BorderKind::Hole) => lnbd,
                    (BorderKind::Hole, BorderKind::Outer) => lnbd,
                    (BorderKind::Hole, BorderKind::Hole) => parents[lnbd],
                };
                kinds.push(kind);
                parents.push(parent);

                let mut pixels = Vec::new();
                // 3.1: first nonzero neighbor clockwise from the start
                // direction.
                let start_dir = dir_index((x, y), (sx, sy));
                let mut found = None;
                for k in 0..8 {
                    let d = NEIGHBORS[(start_dir + k) % 8];
                    if at(&f, x + d.0, y + d.1) != 0 {
                        found = Some((x + d.0, y + d.1));
                        break;
                    }
                }
                match found {
                    None => {
                        // Isolated pixel.
                        f[y as usize * pw + x as usize] = -(border_id as i32);
                        pixels.push(((x - 1) as usize, (y - 1) as usize));
                        borders.push((border_id, Border { kind, parent, pixels }));
                    }
                    Some(p1) => {
                        let mut p2 = p1;
                        let mut p3 = (x, y);
                        loop {
                            // 3.3: counterclockwise scan from the element
                            // after p2 around p3.
                            let from = dir_index(p3, p2);
                            let mut examined_right_zero = false;
                            let mut p4 = None;
                            for k in 1..=8 {
                                let idx = (from + 8 - (k % 8)) % 8;
                                let d = NEIGHBORS[idx];
                                let q = (p3.0 + d.0, p3.1 + d.1);
                                if at(&f, q.0, q.1) != 0 {
                                    p4 = Some(q);
                                    break;
                                }
                                if d == (1, 0) {
                                    examined_right_zero = true;
                                }
                            }
                            let p4 = p4.expect("border following lost the contour");
                            // 3.4: label the current pixel.
                            let cell = &mut f[p3.1 as usize * pw + p3.0 as usize];
                            if examined_right_zero {
                                *cell = -(border_id as i32);
                            } else if *cell == 1 {
                                *cell = border_id as i32;
                            }
                            pixels.push(((p3.0 - 1) as usize, (p3.1 - 1) as usize));
                            // 3.5: stop when back at the start configuration.
                            if p4 == (x, y) && p3 == p1 {
                                break;
                            }
                            p2 = p3;
                            p3 = p4;
                        }
                        borders.push((border_id, Border { kind, parent, pixels }));
                    }
                }
            }
            let v = at(&f, x, y);
            if v != 1 {
                lnbd = v.unsigned_abs() as usize;
            }
        }
    }
    borders
}

/// Fill everything enclosed by `pixels` (the region not reachable from
/// outside), returning the filled pixel positions including the contour
/// itself.
fn fill_contour(pixels: &[(usize, usize)], width: usize, height: usize) -> Vec<(usize, usize)> {
    let min_x = pixels.iter().map(|p| p.0).min().unwrap();
    let max_x = pixels.iter().map(|p| p.0).max().unwrap();
    let min_y = pixels.iter().map(|p| p.1).min().unwrap();
    let max_y = pixels.iter().map(|p| p.1).max().unwrap();
    // Local grid with a one-cell margin so the outside flood surrounds
    // the contour.
    let lw = max_x - min_x + 3;
    let lh = max_y - min_y + 3;
    let mut wall = vec![false; lw * lh];
    for &(x, y) in pixels {
        wall[(y - min_y + 1) * lw + (x - min_x + 1)] = true;
    }
    let mut outside = vec![false; lw * lh];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for x in 0..lw {
        for y in [0, lh - 1] {
            if !wall[y * lw + x] && !outside[y * lw + x] {
                outside[y * lw + x] = true;
                stack.push((x, y));
            }
        }
    }
    for y in 0..lh {
        for x in [0, lw - 1] {
            if !wall[y * lw + x] && !outside[y * lw + x] {
                outside[y * lw + x] = true;
                stack.push((x, y));
            }
        }
    }
    // 4-connected background flood: it cannot slip through the diagonal
    // steps of an 8-connected contour.
    while let Some((x, y)) = stack.pop() {
        let push = |nx: usize, ny: usize, outside: &mut Vec<bool>, stack: &mut Vec<(usize, usize)>| {
            let i = ny * lw + nx;
            if !wall[i] && !outside[i] {
                outside[i] = true;
                stack.push((nx, ny));
            }
        };
        if x > 0 {
            push(x - 1, y, &mut outside, &mut stack);
        }
        if x + 1 < lw {
            push(x + 1, y, &mut outside, &mut stack);
        }
        if y > 0 {
            push(x, y - 1, &mut outside, &mut stack);
        }
        if y + 1 < lh {
            push(x, y + 1, &mut outside, &mut stack);
        }
    }
    let mut filled = Vec::new();
    for ly in 1..lh - 1 {
        for lx in 1..lw - 1 {
            if !outside[ly * lw + lx] {
                let (x, y) = (lx + min_x - 1, ly + min_y - 1);
                if x < width && y < height {
                    filled.push((x, y));
                }
            }
        }
    }
    filled
}

/// Extract the foreground mask: close the edge map, follow its borders,
/// keep the outermost contours (those whose parent is the image frame)
/// and fill them. Inner contours are engulfed by the fill, matching the
/// outermost-edge foreground rule.
///
/// A contour with no strict interior (an open stroke, or a feature too
/// thin to enclose area) does not count as fillable; if every outermost
/// contour is like that the edge map has no closed region.
pub fn extract_mask(edges: &BinaryImage) -> Result<ViewMask, SketchError> {
    if edges.count_on() == 0 {
        return Err(SketchError::NoContour);
    }
    let closed = morphological_close(edges);
    if closed.count_on() == 0 {
        return Err(SketchError::NoContour);
    }
    let borders = follow_borders(&closed);
    let mut mask = BinaryImage::new(edges.width, edges.height);
    let mut any_closed = false;
    for (_, border) in &borders {
        if border.kind != BorderKind::Outer || border.parent != 1 {
            continue;
        }
        let filled = fill_contour(&border.pixels, edges.width, edges.height);
        let mut distinct = border.pixels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if filled.len() > distinct.len() {
            any_closed = true;
            for (x, y) in filled {
                mask.set(x, y, true);
            }
        }
    }
    if !any_closed {
        return Err(SketchError::NoClosedContour);
    }
    Ok(ViewMask { mask })
}
