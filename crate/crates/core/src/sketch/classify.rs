//! Solid/dashed stroke classification from pixel continuity along the
//! primitive's ideal raster path, and erasure of dashed strokes.

use super::{Classification, ClassifyParams, SketchError, StrokeKind, StrokePrimitive};
use crate::raster::BinaryImage;

/// Bresenham raster of a line segment, endpoints inclusive.
pub fn bresenham(p0: (i32, i32), p1: (i32, i32)) -> Vec<(i32, i32)> {
    let (mut x0, mut y0) = p0;
    let (x1, y1) = p1;
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    let mut out = Vec::new();
    loop {
        out.push((x0, y0));
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
    out
}

/// Midpoint-circle raster ordered by angle so run/gap statistics follow
/// the circumference.
pub fn midpoint_circle(center: (i32, i32), radius: i32) -> Vec<(i32, i32)> {
    let (cx, cy) = center;
    let mut pts = Vec::new();
    let mut x = radius;
    let mut y = 0;
    let mut err = 1 - radius;
    while x >= y {
        for &(px, py) in &[
            (x, y),
            (y, x),
            (-y, x),
            (-x, y),
            (-x, -y),
            (-y, -x),
            (y, -x),
            (x, -y),
        ] {
            pts.push((cx + px, cy + py));
        }
        y += 1;
        if err < 0 {
            err += 2 * y + 1;
        } else {
            x -= 1;
            err += 2 * (y - x) + 1;
        }
    }
    pts.sort_by(|a, b| {
        let aa = ((a.1 - cy) as f64).atan2((a.0 - cx) as f64);
        let ab = ((b.1 - cy) as f64).atan2((b.0 - cx) as f64);
        aa.total_cmp(&ab).then(a.cmp(b))
    });
    pts.dedup();
    pts
}

/// The ideal raster path of a primitive: Bresenham for lines, midpoint
/// raster for circles.
pub fn stroke_path(kind: &StrokeKind) -> Vec<(i32, i32)> {
    match *kind {
        StrokeKind::Line { p0, p1 } => bresenham(p0, p1),
        StrokeKind::Circle { center, radius } => midpoint_circle(center, radius),
    }
}

/// Support test tolerating a one-pixel lateral offset between the
/// detected primitive and the drawn stroke. Only the path pixel and its
/// two perpendicular neighbors count, so runs and gaps keep their exact
/// lengths along the path.
fn supported(edges: &BinaryImage, x: i32, y: i32, lateral: (i32, i32)) -> bool {
    edges.get_checked(x as isize, y as isize)
        || edges.get_checked((x + lateral.0) as isize, (y + lateral.1) as isize)
        || edges.get_checked((x - lateral.0) as isize, (y - lateral.1) as isize)
}

/// Unit-ish lateral direction for each path pixel: the segment normal for
/// lines, the radial direction for circles.
fn lateral_dir(kind: &StrokeKind, x: i32, y: i32) -> (i32, i32) {
    let (dx, dy) = match *kind {
        StrokeKind::Line { p0, p1 } => (-(p1.1 - p0.1) as f64, (p1.0 - p0.0) as f64),
        StrokeKind::Circle { center, .. } => ((x - center.0) as f64, (y - center.1) as f64),
    };
    let norm = (dx * dx + dy * dy).sqrt();
    if norm < 1e-9 {
        return (0, 0);
    }
    ((dx / norm).round() as i32, (dy / norm).round() as i32)
}

fn median_usize(values: &mut [usize]) -> usize {
    values.sort_unstable();
    values[values.len() / 2]
}

/// Walk the primitive's ideal path over the edge map, record alternating
/// (on-run, gap) lengths, and classify.
///
/// Dashed requires at least `min_dash_count` runs with a small median run
/// length and a non-trivial median gap; a single run covering at least
/// `solid_coverage` of the path is solid; anything ambiguous defaults to
/// solid so that real visible edges are never erased.
pub fn classify_stroke(
    prim: &StrokePrimitive,
    edges: &BinaryImage,
    params: &ClassifyParams,
) -> Result<StrokePrimitive, SketchError> {
    let path = stroke_path(&prim.kind);
    let in_bounds = path
        .iter()
        .filter(|&&(x, y)| {
            x >= 0 && y >= 0 && (x as usize) < edges.width && (y as usize) < edges.height
        })
        .count();
    if in_bounds == 0 {
        return Err(SketchError::OutOfBounds);
    }

    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut cur_on = 0usize;
    let mut cur_gap = 0usize;
    for &(x, y) in &path {
        if supported(edges, x, y, lateral_dir(&prim.kind, x, y)) {
            if cur_gap > 0 {
                // Close the previous (run, gap) pair.
                runs.push((cur_on, cur_gap));
                cur_on = 0;
                cur_gap = 0;
            }
            cur_on += 1;
        } else if cur_on > 0 {
            cur_gap += 1;
        }
    }
    if cur_on > 0 || cur_gap > 0 {
        runs.push((cur_on, cur_gap));
    }
    if runs.is_empty() {
        // Entirely unsupported path: one all-gap pair keeps the evidence
        // non-empty.
        runs.push((0, path.len()));
    }

    let mut on_runs: Vec<usize> = runs.iter().map(|r| r.0).filter(|&l| l > 0).collect();
    let mut gaps: Vec<usize> = runs.iter().map(|r| r.1).filter(|&g| g > 0).collect();

    let is_dashed = !on_runs.is_empty()
        && !gaps.is_empty()
        && on_runs.len() >= params.min_dash_count
        && median_usize(&mut on_runs) <= params.max_dash_len
        && median_usize(&mut gaps) >= params.min_gap;
    let longest_run = runs.iter().map(|r| r.0).max().unwrap_or(0);
    let confident_solid = longest_run as f64 >= params.solid_coverage * path.len() as f64;

    let classification = if is_dashed {
        Classification::Dashed
    } else {
        // Either one run covers nearly the whole path, or the evidence is
        // ambiguous; erasing a real edge costs more than keeping a hidden
        // one, so both cases stay solid.
        if !confident_solid {
            log::trace!("ambiguous stroke kept solid: runs {runs:?}");
        }
        Classification::Solid
    };

    Ok(StrokePrimitive { kind: prim.kind, classification: Some(classification), run_stats: runs })
}

/// Copy of `edges` with on-pixels within `erase_radius` of any dashed
/// primitive's path turned off.
pub fn remove_dashed(
    edges: &BinaryImage,
    prims: &[StrokePrimitive],
    params: &ClassifyParams,
) -> BinaryImage {
    let mut out = edges.clone();
    let r = params.erase_radius;
    let ri = r.ceil() as i32;
    for prim in prims.iter().filter(|p| p.is_dashed()) {
        for (x, y) in stroke_path(&prim.kind) {
            for dy in -ri..=ri {
                for dx in -ri..=ri {
                    if ((dx * dx + dy * dy) as f64).sqrt() <= r {
                        let (nx, ny) = ((x + dx) as isize, (y + dy) as isize);
                        if nx >= 0
                            && ny >= 0
                            && (nx as usize) < out.width
                            && (ny as usize) < out.height
                        {
                            out.set(nx as usize, ny as usize, false);
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draw(edges: &mut BinaryImage, pts: &[(i32, i32)]) {
        for &(x, y) in pts {
            if x >= 0 && y >= 0 && (x as usize) < edges.width && (y as usize) < edges.height {
                edges.set(x as usize, y as usize, true);
            }
        }
    }

    fn dashed_pattern(pts: &[(i32, i32)], on: usize, off: usize) -> Vec<(i32, i32)> {
        pts.iter()
            .enumerate()
            .filter(|(i, _)| i % (on + off) < on)
            .map(|(_, &p)| p)
            .collect()
    }

    #[test]
    fn fully_drawn_line_is_solid() {
        let mut edges = BinaryImage::new(256, 64);
        let prim = StrokePrimitive::line((10, 30), (209, 30));
        draw(&mut edges, &stroke_path(&prim.kind));
        let out = classify_stroke(&prim, &edges, &ClassifyParams::default()).unwrap();
        assert_eq!(out.classification, Some(Classification::Solid));
        assert_eq!(out.run_stats.len(), 1);
        assert_eq!(out.run_stats[0], (200, 0));
    }

    #[test]
    fn ten_on_ten_off_is_dashed() {
        let mut edges = BinaryImage::new(256, 64);
        let prim = StrokePrimitive::line((10, 30), (209, 30));
        let pts = dashed_pattern(&stroke_path(&prim.kind), 10, 10);
        draw(&mut edges, &pts);
        let out = classify_stroke(&prim, &edges, &ClassifyParams::default()).unwrap();
        assert_eq!(out.classification, Some(Classification::Dashed));
        // Ten (10, 10) pairs, the final run ending with the path.
        assert_eq!(out.run_stats.len(), 10);
        for (i, &(on, gap)) in out.run_stats.iter().enumerate() {
            assert_eq!(on, 10, "run {i}");
            if i + 1 < out.run_stats.len() {
                assert_eq!(gap, 10, "gap {i}");
            }
        }
    }

    #[test]
    fn single_small_dropout_stays_solid() {
        let mut edges = BinaryImage::new(256, 64);
        let prim = StrokePrimitive::line((10, 30), (209, 30));
        let pts: Vec<(i32, i32)> = stroke_path(&prim.kind)
            .into_iter()
            .filter(|&(x, _)| !(100..103).contains(&x))
            .collect();
        draw(&mut edges, &pts);
        let out = classify_stroke(&prim, &edges, &ClassifyParams::default()).unwrap();
        assert_eq!(out.classification, Some(Classification::Solid));
    }

    #[test]
    fn dashed_circle_is_classified() {
        let mut edges = BinaryImage::new(200, 200);
        let prim = StrokePrimitive::circle((100, 100), 60);
        let pts = dashed_pattern(&stroke_path(&prim.kind), 12, 8);
        draw(&mut edges, &pts);
        let out = classify_stroke(&prim, &edges, &ClassifyParams::default()).unwrap();
        assert_eq!(out.classification, Some(Classification::Dashed));
    }

    #[test]
    fn off_image_primitive_errors() {
        let edges = BinaryImage::new(64, 64);
        let prim = StrokePrimitive::line((-50, -10), (-10, -10));
        assert_eq!(
            classify_stroke(&prim, &edges, &ClassifyParams::default()),
            Err(SketchError::OutOfBounds)
        );
    }

    #[test]
    fn classification_is_deterministic() {
        let mut edges = BinaryImage::new(256, 64);
        let prim = StrokePrimitive::line((10, 30), (209, 30));
        let pts = dashed_pattern(&stroke_path(&prim.kind), 8, 6);
        draw(&mut edges, &pts);
        let a = classify_stroke(&prim, &edges, &ClassifyParams::default()).unwrap();
        let b = classify_stroke(&prim, &edges, &ClassifyParams::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn remove_dashed_without_dashes_is_identity() {
        let mut edges = BinaryImage::new(64, 64);
        for x in 5..60 {
            edges.set(x, 10, true);
        }
        let mut solid = StrokePrimitive::line((5, 10), (59, 10));
        solid.classification = Some(Classification::Solid);
        let out = remove_dashed(&edges, &[solid], &ClassifyParams::default());
        assert_eq!(out, edges);
    }

    #[test]
    fn remove_dashed_erases_only_the_dashed_stroke() {
        let mut edges = BinaryImage::new(128, 64);
        for x in 5..120 {
            edges.set(x, 10, true); // solid, far from the dashed one
            edges.set(x, 40, true); // dashed
        }
        let mut dashed = StrokePrimitive::line((5, 40), (119, 40));
        dashed.classification = Some(Classification::Dashed);
        let out = remove_dashed(&edges, &[dashed], &ClassifyParams::default());
        for x in 5..120 {
            assert!(out.get(x, 10), "solid pixel ({x},10) erased");
            assert!(!out.get(x, 40), "dashed pixel ({x},40) kept");
        }
        // Exact pixel-set difference.
        let expected: Vec<(usize, usize)> = (5..120).map(|x| (x, 10)).collect();
        let got: Vec<(usize, usize)> = out.on_pixels().collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn crossing_solid_survives_outside_erase_radius() {
        let mut edges = BinaryImage::new(64, 64);
        for i in 0..64 {
            edges.set(i, 32, true); // horizontal dashed path pixels
            edges.set(32, i, true); // vertical solid
        }
        let mut dashed = StrokePrimitive::line((0, 32), (63, 32));
        dashed.classification = Some(Classification::Dashed);
        let out = remove_dashed(&edges, &[dashed], &ClassifyParams::default());
        let mut surviving_vertical = 0;
        for y in 0..64 {
            if out.get(32, y) {
                surviving_vertical += 1;
                assert!((y as i32 - 32).abs() > 2, "pixel (32,{y}) inside erase radius survived");
            }
        }
        // Everything farther than 2 px from the dashed row survives.
        assert_eq!(surviving_vertical, 64 - 5);
    }

    #[test]
    fn removal_only_ever_clears_pixels() {
        let mut edges = BinaryImage::new(64, 64);
        for x in 0..64 {
            edges.set(x, 20, true);
        }
        let mut dashed = StrokePrimitive::line((0, 20), (63, 20));
        dashed.classification = Some(Classification::Dashed);
        let out = remove_dashed(&edges, &[dashed], &ClassifyParams::default());
        for (i, (&a, &b)) in out.data.iter().zip(edges.data.iter()).enumerate() {
            assert!(!a || b, "pixel {i} appeared from nowhere");
        }
    }
}
