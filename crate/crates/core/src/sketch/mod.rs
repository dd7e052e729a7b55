//! Sketch cleanup: turns one raw raster view into a cleaned edge map with
//! dashed strokes removed, a binary foreground mask, and a colorized
//! reference image.

mod canny;
mod classify;
mod contour;
mod filter;
mod hough;

pub use canny::canny_edges;
pub use classify::{classify_stroke, remove_dashed, stroke_path};
pub use contour::{extract_mask, mask_boundary, morphological_close};
pub use filter::{adaptive_binarize, median_filter};
pub use hough::{hough_circles, hough_lines};

use crate::raster::{BinaryImage, ColorImage};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SketchError {
    #[error("kernel/window size {0} must be odd and >= 3")]
    InvalidKernel(usize),
    #[error("thresholds must satisfy 0 < low < high (got {low}, {high})")]
    InvalidThresholds { low: f64, high: f64 },
    #[error("primitive lies entirely outside the image")]
    OutOfBounds,
    #[error("no contour found in edge map")]
    NoContour,
    #[error("all contours are open; no fillable region")]
    NoClosedContour,
    #[error("image dimensions do not agree")]
    DimMismatch,
}

/// Geometry of a detected stroke.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StrokeKind {
    Line { p0: (i32, i32), p1: (i32, i32) },
    Circle { center: (i32, i32), radius: i32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Solid,
    Dashed,
}

/// A detected line segment or circle with its solid/dashed evidence.
///
/// `run_stats` holds alternating (on-run, following gap) lengths in pixels
/// along the primitive's ideal raster path; it is populated by
/// [`classify_stroke`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrokePrimitive {
    pub kind: StrokeKind,
    pub classification: Option<Classification>,
    pub run_stats: Vec<(usize, usize)>,
}

impl StrokePrimitive {
    pub fn line(p0: (i32, i32), p1: (i32, i32)) -> Self {
        Self { kind: StrokeKind::Line { p0, p1 }, classification: None, run_stats: Vec::new() }
    }

    pub fn circle(center: (i32, i32), radius: i32) -> Self {
        Self { kind: StrokeKind::Circle { center, radius }, classification: None, run_stats: Vec::new() }
    }

    pub fn is_dashed(&self) -> bool {
        self.classification == Some(Classification::Dashed)
    }
}

/// Binary foreground mask of one view: the union of filled outermost
/// contours.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewMask {
    pub mask: BinaryImage,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoughLineParams {
    /// Accumulator votes required to accept a line.
    pub threshold: usize,
    /// Minimum accepted segment length in pixels.
    pub min_line_length: usize,
    /// Largest on-pixel gap bridged while walking a detected line. Kept
    /// above typical dash gaps so a dashed stroke is recovered as one
    /// segment and left to the classifier.
    pub max_line_gap: usize,
    /// Angular resolution of the accumulator in degrees.
    pub theta_step_deg: f64,
}

impl Default for HoughLineParams {
    fn default() -> Self {
        Self { threshold: 50, min_line_length: 20, max_line_gap: 25, theta_step_deg: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoughCircleParams {
    pub min_radius: usize,
    pub max_radius: usize,
    /// Votes required in the center accumulator.
    pub center_threshold: usize,
    /// Fraction of the ideal circumference that must be supported by
    /// edge pixels.
    pub min_support: f64,
    /// Centers/radii closer than this are merged.
    pub merge_distance: f64,
}

impl Default for HoughCircleParams {
    fn default() -> Self {
        Self {
            min_radius: 10,
            max_radius: 300,
            center_threshold: 30,
            min_support: 0.45,
            merge_distance: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyParams {
    /// A stroke needs at least this many on-runs to count as dashed.
    pub min_dash_count: usize,
    /// Median on-run length must not exceed this for a dashed stroke.
    pub max_dash_len: usize,
    /// Median gap must be at least this for a dashed stroke.
    pub min_gap: usize,
    /// A single run covering this fraction of the path is solid.
    pub solid_coverage: f64,
    /// Pixels within this distance of a dashed path are erased.
    pub erase_radius: f64,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        Self { min_dash_count: 3, max_dash_len: 20, min_gap: 3, solid_coverage: 0.85, erase_radius: 2.0 }
    }
}

/// Fill, stroke and background colors for the reference image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Palette {
    pub fill: [f64; 3],
    pub stroke: [f64; 3],
    pub background: [f64; 3],
}

impl Default for Palette {
    fn default() -> Self {
        Self { fill: [0.6, 0.6, 0.6], stroke: [0.1, 0.1, 0.1], background: [1.0, 1.0, 1.0] }
    }
}

/// Produce the colorized reference image: background everywhere, fill
/// inside the mask, stroke on surviving edge pixels.
pub fn colorize(
    view_edges: &BinaryImage,
    mask: &ViewMask,
    palette: &Palette,
) -> Result<ColorImage, SketchError> {
    let (w, h) = (view_edges.width, view_edges.height);
    if mask.mask.width != w || mask.mask.height != h {
        return Err(SketchError::DimMismatch);
    }
    let mut out = ColorImage::filled(w, h, palette.background);
    for (i, pixel) in out.data.iter_mut().enumerate() {
        if mask.mask.data[i] {
            *pixel = palette.fill;
        }
        if view_edges.data[i] {
            *pixel = palette.stroke;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colorize_empty_inputs_yield_background() {
        let edges = BinaryImage::new(8, 6);
        let mask = ViewMask { mask: BinaryImage::new(8, 6) };
        let img = colorize(&edges, &mask, &Palette::default()).unwrap();
        assert!(img.data.iter().all(|&c| c == [1.0, 1.0, 1.0]));
    }

    #[test]
    fn colorize_full_mask_is_fill_except_strokes() {
        let mut edges = BinaryImage::new(4, 4);
        edges.set(1, 1, true);
        let mut mask = BinaryImage::new(4, 4);
        mask.data.fill(true);
        let palette = Palette { fill: [0.5, 0.5, 0.5], ..Default::default() };
        let img = colorize(&edges, &ViewMask { mask }, &palette).unwrap();
        assert_eq!(img.get(0, 0), [0.5, 0.5, 0.5]);
        assert_eq!(img.get(1, 1), palette.stroke);
    }

    #[test]
    fn colorize_square_mask_probes() {
        let edges = BinaryImage::new(10, 10);
        let mut mask = BinaryImage::new(10, 10);
        for y in 3..7 {
            for x in 3..7 {
                mask.set(x, y, true);
            }
        }
        let img = colorize(&edges, &ViewMask { mask }, &Palette::default()).unwrap();
        assert_eq!(img.get(5, 5), [0.6, 0.6, 0.6]);
        assert_eq!(img.get(0, 0), [1.0, 1.0, 1.0]);
    }

    #[test]
    fn colorize_rejects_dimension_mismatch() {
        let edges = BinaryImage::new(4, 4);
        let mask = ViewMask { mask: BinaryImage::new(5, 4) };
        assert_eq!(colorize(&edges, &mask, &Palette::default()), Err(SketchError::DimMismatch));
    }
}
