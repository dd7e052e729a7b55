//! Reconstruction of 3D CAD models from raster sketches with three
//! orthographic views (front, left, bottom).
//!
//! The pipeline stages are:
//!
//! 1. **Sketch cleanup** — median filtering, adaptive binarization, Canny
//!    edges, Hough line/circle extraction, solid/dashed stroke
//!    classification, dashed-stroke removal, contour-based mask extraction
//!    and colorization ([`sketch`]).
//! 2. **Camera placement** — exact intrinsics and world-to-camera
//!    extrinsics for the three orthographic views ([`camera`]).
//! 3. **Visual hull** — voxel carving from the three masks and Gaussian
//!    cloud initialization ([`hull`]).
//! 4. **Splatting optimization** — differentiable rasterization of 3D
//!    Gaussians, L1/D-SSIM/mask losses, analytic gradients, Adam loop
//!    ([`splat`]).
//! 5. **Evaluation** — normalization, multi-start ICP registration,
//!    Chamfer/Hausdorff/Earth Mover's distances ([`metrics`]).
//!
//! The [`pipeline`] module wires the stages end to end; [`fixture`]
//! generates synthetic three-view sketches with analytic ground truth.

pub mod camera;
pub mod cloud;
pub mod fixture;
pub mod hull;
pub mod metrics;
pub mod pipeline;
pub mod ply;
pub mod raster;
pub mod sketch;
pub mod splat;
