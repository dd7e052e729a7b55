//! Hough-transform extraction of line segments and circles from a binary
//! edge map.

use super::{HoughCircleParams, HoughLineParams, StrokePrimitive};
use crate::raster::BinaryImage;

/// Detect line segments. Peaks of the (theta, rho) accumulator are walked
/// across the image; on-runs separated by gaps no larger than
/// `max_line_gap` are fused into segments, so a dashed stroke comes back
/// as a single segment for the classifier to judge. Pixels supporting an
/// accepted segment are consumed to suppress duplicate detections.
pub fn hough_lines(edges: &BinaryImage, params: &HoughLineParams) -> Vec<StrokePrimitive> {
    let (w, h) = (edges.width as isize, edges.height as isize);
    let n_theta = (180.0 / params.theta_step_deg).round() as usize;
    let rho_max = ((w * w + h * h) as f64).sqrt().ceil() as isize;
    let n_rho = (2 * rho_max + 1) as usize;

    let thetas: Vec<(f64, f64)> = (0..n_theta)
        .map(|t| {
            let rad = (t as f64 * params.theta_step_deg).to_radians();
            (rad.cos(), rad.sin())
        })
        .collect();

    let mut acc = vec![0u32; n_theta * n_rho];
    for (x, y) in edges.on_pixels() {
        for (t, &(c, s)) in thetas.iter().enumerate() {
            let rho = (x as f64 * c + y as f64 * s).round() as isize + rho_max;
            acc[t * n_rho + rho as usize] += 1;
        }
    }

    // Candidate peaks: local maxima above threshold, strongest first.
    let mut peaks: Vec<(u32, usize, usize)> = Vec::new();
    for t in 0..n_theta {
        for r in 0..n_rho {
            let v = acc[t * n_rho + r];
            if (v as usize) < params.threshold {
                continue;
            }
            let mut is_max = true;
            'nms: for dt in -3isize..=3 {
                for dr in -3isize..=3 {
                    if dt == 0 && dr == 0 {
                        continue;
                    }
                    // Theta wraps at 180 degrees with rho negated; plain
                    // clamping is enough for peak suppression here.
                    let nt = t as isize + dt;
                    let nr = r as isize + dr;
                    if nt < 0 || nr < 0 || nt >= n_theta as isize || nr >= n_rho as isize {
                        continue;
                    }
                    let nv = acc[nt as usize * n_rho + nr as usize];
                    if nv > v || (nv == v && (nt, nr) < (t as isize, r as isize)) {
                        is_max = false;
                        break 'nms;
                    }
                }
            }
            if is_max {
                peaks.push((v, t, r));
            }
        }
    }
    peaks.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut consumed = vec![false; (w * h) as usize];
    let mut out = Vec::new();

    for &(_, t, r) in &peaks {
        let (c, s) = thetas[t];
        let rho = (r as isize - rho_max) as f64;
        // Walk along the line direction (-sin, cos) through the image.
        let origin = (rho * c, rho * s);
        let dir = (-s, c);
        let t_span = (w + h) as f64;
        let mut segments: Vec<(Vec<usize>, (i32, i32), (i32, i32))> = Vec::new();
        let mut run: Option<(Vec<usize>, (i32, i32), (i32, i32))> = None;
        let mut gap = 0usize;

        let mut step = -t_span;
        while step <= t_span {
            let px = (origin.0 + step * dir.0).round() as isize;
            let py = (origin.1 + step * dir.1).round() as isize;
            step += 1.0;
            if px < 0 || py < 0 || px >= w || py >= h {
                continue;
            }
            // Supported if an unconsumed on-pixel sits on the ideal path
            // or one pixel to either side across it.
            let mut hit: Option<usize> = None;
            for (nx, ny) in [
                (px, py),
                (px + c.round() as isize, py + s.round() as isize),
                (px - c.round() as isize, py - s.round() as isize),
            ] {
                if nx < 0 || ny < 0 || nx >= w || ny >= h {
                    continue;
                }
                let idx = (ny * w + nx) as usize;
                if edges.data[idx] && !consumed[idx] {
                    hit = Some(idx);
                    break;
                }
            }
            match hit {
                Some(idx) => {
                    gap = 0;
                    let p = (px as i32, py as i32);
                    match &mut run {
                        Some((pixels, _, end)) => {
                            pixels.push(idx);
                            *end = p;
                        }
                        None => run = Some((vec![idx], p, p)),
                    }
                }
                None => {
                    if let Some(r) = &run {
                        gap += 1;
                        if gap > params.max_line_gap {
                            segments.push(r.clone());
                            run = None;
                            gap = 0;
                        }
                    }
                }
            }
        }
        if let Some(r) = run {
            segments.push(r);
        }

        for (pixels, p0, p1) in segments {
            let len = (((p1.0 - p0.0).pow(2) + (p1.1 - p0.1).pow(2)) as f64).sqrt();
            if len < params.min_line_length as f64 || pixels.len() < params.threshold {
                continue;
            }
            for idx in &pixels {
                consumed[*idx] = true;
            }
            out.push(StrokePrimitive::line(p0, p1));
        }
    }
    out
}

/// Detect circles by voting for centers along locally estimated edge
/// normals, then confirming radii against the ideal circumference.
/// Near-duplicate circles are merged.
pub fn hough_circles(edges: &BinaryImage, params: &HoughCircleParams) -> Vec<StrokePrimitive> {
    let (w, h) = (edges.width as isize, edges.height as isize);
    let on: Vec<(isize, isize)> =
        edges.on_pixels().map(|(x, y)| (x as isize, y as isize)).collect();
    if on.is_empty() {
        return Vec::new();
    }

    // Local tangent via neighborhood PCA; the normal is its perpendicular.
    let normal_of = |x: isize, y: isize| -> Option<(f64, f64)> {
        let mut pts = Vec::new();
        for dy in -3isize..=3 {
            for dx in -3isize..=3 {
                if edges.get_checked(x + dx, y + dy) {
                    pts.push((dx as f64, dy as f64));
                }
            }
        }
        if pts.len() < 3 {
            return None;
        }
        let n = pts.len() as f64;
        let (mx, my) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mx, my) = (mx / n, my / n);
        let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
        for (px, py) in &pts {
            sxx += (px - mx) * (px - mx);
            sxy += (px - mx) * (py - my);
            syy += (py - my) * (py - my);
        }
        // Leading eigenvector of the 2x2 scatter matrix.
        let trace = sxx + syy;
        let det = sxx * syy - sxy * sxy;
        let lambda = trace / 2.0 + ((trace * trace / 4.0 - det).max(0.0)).sqrt();
        let (tx, ty) = if sxy.abs() > 1e-12 {
            (lambda - syy, sxy)
        } else if sxx >= syy {
            (1.0, 0.0)
        } else {
            (0.0, 1.0)
        };
        let norm = (tx * tx + ty * ty).sqrt();
        if norm < 1e-12 {
            return None;
        }
        // Perpendicular of the tangent.
        Some((-ty / norm, tx / norm))
    };

    let mut acc = vec![0u32; (w * h) as usize];
    for &(x, y) in &on {
        if let Some((nx, ny)) = normal_of(x, y) {
            for sign in [-1.0, 1.0] {
                let mut r = params.min_radius as f64;
                while r <= params.max_radius as f64 {
                    let cx = (x as f64 + sign * r * nx).round() as isize;
                    let cy = (y as f64 + sign * r * ny).round() as isize;
                    if cx >= 0 && cy >= 0 && cx < w && cy < h {
                        acc[(cy * w + cx) as usize] += 1;
                    }
                    r += 1.0;
                }
            }
        }
    }

    // Center candidates: 5x5 local maxima above threshold.
    let mut centers: Vec<(u32, f64, f64)> = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = acc[(y * w + x) as usize];
            if (v as usize) < params.center_threshold {
                continue;
            }
            let mut is_max = true;
            'nms: for dy in -2isize..=2 {
                for dx in -2isize..=2 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w || ny >= h {
                        continue;
                    }
                    let nv = acc[(ny * w + nx) as usize];
                    if nv > v || (nv == v && (ny, nx) < (y, x)) {
                        is_max = false;
                        break 'nms;
                    }
                }
            }
            if !is_max {
                continue;
            }
            // Sub-pixel refinement: vote-weighted centroid of the 5x5 patch.
            let (mut sw, mut sx, mut sy) = (0.0, 0.0, 0.0);
            for dy in -2isize..=2 {
                for dx in -2isize..=2 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w || ny >= h {
                        continue;
                    }
                    let nv = acc[(ny * w + nx) as usize] as f64;
                    sw += nv;
                    sx += nv * nx as f64;
                    sy += nv * ny as f64;
                }
            }
            centers.push((v, sx / sw, sy / sw));
        }
    }
    centers.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));

    let mut circles: Vec<(f64, f64, f64, f64)> = Vec::new(); // (cx, cy, r, support)
    for &(_, cx, cy) in &centers {
        let max_bin = params.max_radius + 2;
        let mut hist = vec![0u32; max_bin + 1];
        for &(x, y) in &on {
            let d = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt().round() as usize;
            if d <= max_bin {
                hist[d] += 1;
            }
        }
        for r in params.min_radius..=params.max_radius {
            let support = hist[r - 1] + hist[r] + hist[r + 1];
            let needed = params.min_support * 2.0 * std::f64::consts::PI * r as f64;
            if (support as f64) < needed {
                continue;
            }
            // Refine radius as the weighted mean of the supporting bins.
            let wsum = (hist[r - 1] * (r as u32 - 1) + hist[r] * r as u32 + hist[r + 1] * (r as u32 + 1)) as f64;
            let rf = wsum / support as f64;
            circles.push((cx, cy, rf, support as f64));
        }
    }

    // Merge near-duplicates, keeping the better supported circle.
    circles.sort_by(|a, b| b.3.total_cmp(&a.3).then(a.0.total_cmp(&b.0)).then(a.1.total_cmp(&b.1)));
    let mut kept: Vec<(f64, f64, f64)> = Vec::new();
    for (cx, cy, r, _) in circles {
        let dup = kept.iter().any(|&(kx, ky, kr)| {
            ((kx - cx).powi(2) + (ky - cy).powi(2)).sqrt() <= params.merge_distance
                && (kr - r).abs() <= params.merge_distance
        });
        if !dup {
            kept.push((cx, cy, r));
        }
    }

    kept.into_iter()
        .map(|(cx, cy, r)| {
            StrokePrimitive::circle((cx.round() as i32, cy.round() as i32), r.round() as i32)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_edge_map_yields_no_lines_or_circles() {
        let edges = BinaryImage::new(64, 64);
        assert!(hough_lines(&edges, &HoughLineParams::default()).is_empty());
        assert!(hough_circles(&edges, &HoughCircleParams::default()).is_empty());
    }

    #[test]
    fn single_horizontal_run_is_one_line() {
        let mut edges = BinaryImage::new(256, 64);
        for x in 20..220 {
            edges.set(x, 30, true);
        }
        let lines = hough_lines(&edges, &HoughLineParams::default());
        assert_eq!(lines.len(), 1, "expected one line, got {lines:?}");
        if let super::super::StrokeKind::Line { p0, p1 } = lines[0].kind {
            let (lo, hi) = if p0.0 < p1.0 { (p0, p1) } else { (p1, p0) };
            assert!((lo.0 - 20).abs() <= 2 && (lo.1 - 30).abs() <= 2, "start {lo:?}");
            assert!((hi.0 - 219).abs() <= 2 && (hi.1 - 30).abs() <= 2, "end {hi:?}");
        } else {
            panic!("not a line");
        }
    }

    fn angle_of(p: &StrokePrimitive) -> f64 {
        match p.kind {
            super::super::StrokeKind::Line { p0, p1 } => {
                ((p1.1 - p0.1) as f64).atan2((p1.0 - p0.0) as f64).to_degrees()
            }
            _ => panic!("not a line"),
        }
    }

    #[test]
    fn perpendicular_runs_give_two_lines_ninety_degrees_apart() {
        let mut edges = BinaryImage::new(256, 256);
        for x in 20..220 {
            edges.set(x, 128, true);
        }
        for y in 20..220 {
            edges.set(128, y, true);
        }
        let lines = hough_lines(&edges, &HoughLineParams::default());
        assert_eq!(lines.len(), 2, "expected two lines, got {lines:?}");
        let mut diff = (angle_of(&lines[0]) - angle_of(&lines[1])).abs() % 180.0;
        if diff > 90.0 {
            diff = 180.0 - diff;
        }
        assert!((diff - 90.0).abs() <= 2.0, "angular difference {diff}");
    }

    #[test]
    fn dashed_run_fuses_into_single_segment() {
        let mut edges = BinaryImage::new(256, 64);
        let mut x = 10;
        while x < 210 {
            for i in 0..10 {
                if x + i < 210 {
                    edges.set(x + i, 30, true);
                }
            }
            x += 20;
        }
        let lines = hough_lines(&edges, &HoughLineParams::default());
        assert_eq!(lines.len(), 1, "dashes should fuse into one segment: {lines:?}");
    }

    fn rasterize_circle(edges: &mut BinaryImage, cx: f64, cy: f64, r: f64) {
        let steps = (2.0 * std::f64::consts::PI * r * 2.0).ceil() as usize;
        for i in 0..steps {
            let a = i as f64 / steps as f64 * std::f64::consts::TAU;
            let x = (cx + r * a.cos()).round() as isize;
            let y = (cy + r * a.sin()).round() as isize;
            if x >= 0 && y >= 0 && (x as usize) < edges.width && (y as usize) < edges.height {
                edges.set(x as usize, y as usize, true);
            }
        }
    }

    #[test]
    fn circle_is_recovered_within_two_pixels() {
        let mut edges = BinaryImage::new(200, 200);
        rasterize_circle(&mut edges, 100.0, 100.0, 50.0);
        let circles = hough_circles(&edges, &HoughCircleParams::default());
        assert_eq!(circles.len(), 1, "expected one circle, got {circles:?}");
        if let super::super::StrokeKind::Circle { center, radius } = circles[0].kind {
            assert!((center.0 - 100).abs() <= 2 && (center.1 - 100).abs() <= 2, "center {center:?}");
            assert!((radius - 50).abs() <= 2, "radius {radius}");
        }
    }

    #[test]
    fn square_produces_no_circles() {
        let mut edges = BinaryImage::new(200, 200);
        for i in 40..160 {
            edges.set(i, 40, true);
            edges.set(i, 159, true);
            edges.set(40, i, true);
            edges.set(159, i, true);
        }
        let circles = hough_circles(&edges, &HoughCircleParams::default());
        assert!(circles.is_empty(), "square misdetected as {circles:?}");
    }
}
