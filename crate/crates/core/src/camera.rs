//! Camera geometry for the three orthographic views.
//!
//! Builds exact intrinsic and extrinsic parameters for the front, left and
//! bottom views, converts between coordinate conventions, and projects
//! world points to pixels. The canonical pose constructor validates that
//! every camera actually looks at the origin and that the three optical
//! axes are mutually orthogonal; if the configured Euler/position table
//! fails that check it searches the admissible assignments and, as a last
//! resort, derives the positions from the viewing axes. The chosen
//! solution is reported so runs are auditable.

use nalgebra::{Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CameraError {
    #[error("no camera assignment satisfies the look-at and orthogonality constraints")]
    PoseConstructionFailed,
    #[error("extrinsic carries an unexpected convention tag for this operation")]
    UnknownConvention,
    #[error("point at depth {0} is behind the camera")]
    BehindCamera(f64),
    #[error("rotation matrix fails orthonormality: {0}")]
    NotARotation(String),
    #[error("camera distance must be positive, got {0}")]
    BadDistance(f64),
}

/// Euler angles in degrees, named for the axes they rotate about.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAnglesZyx {
    /// Rotation about z (degrees).
    pub alpha: f64,
    /// Rotation about y (degrees).
    pub beta: f64,
    /// Rotation about x (degrees).
    pub gamma: f64,
}

impl EulerAnglesZyx {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }
}

fn rot_z(deg: f64) -> Matrix3<f64> {
    let (s, c) = deg.to_radians().sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

fn rot_y(deg: f64) -> Matrix3<f64> {
    let (s, c) = deg.to_radians().sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

fn rot_x(deg: f64) -> Matrix3<f64> {
    let (s, c) = deg.to_radians().sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// A validated proper rotation (orthogonal, det = +1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix(Matrix3<f64>);

impl RotationMatrix {
    pub const ORTHONORMALITY_TOL: f64 = 1e-12;

    pub fn try_new(m: Matrix3<f64>) -> Result<Self, CameraError> {
        let gram = m.transpose() * m;
        let dev = (gram - Matrix3::identity()).abs().max();
        if dev > Self::ORTHONORMALITY_TOL {
            return Err(CameraError::NotARotation(format!("|R'R - I| = {dev:.3e}")));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > Self::ORTHONORMALITY_TOL {
            return Err(CameraError::NotARotation(format!("det = {det:.17}")));
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn transposed(&self) -> Self {
        Self(self.0.transpose())
    }

    /// Snap entries within `tol` of 0 or ±1 to those exact values.
    /// Only valid for rotations known to be axis-aligned.
    fn snap_axis_aligned(&self, tol: f64) -> Self {
        let snapped = self.0.map(|v| {
            if v.abs() < tol {
                0.0
            } else if (v - 1.0).abs() < tol {
                1.0
            } else if (v + 1.0).abs() < tol {
                -1.0
            } else {
                v
            }
        });
        Self(snapped)
    }
}

/// Composition order for a z/y/x Euler triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EulerComposition {
    /// `Rz(alpha) * Ry(beta) * Rx(gamma)` — the z-y'-x'' intrinsic reading.
    IntrinsicZyx,
    /// `Rx(gamma) * Ry(beta) * Rz(alpha)` — rotations applied about the
    /// fixed z, then y, then x axes.
    ExtrinsicZyx,
}

/// Rotation from Euler angles using the intrinsic z-y'-x'' composition.
pub fn rotation_from_euler(e: EulerAnglesZyx) -> RotationMatrix {
    rotation_from_euler_with(e, EulerComposition::IntrinsicZyx)
}

pub fn rotation_from_euler_with(e: EulerAnglesZyx, comp: EulerComposition) -> RotationMatrix {
    let m = match comp {
        EulerComposition::IntrinsicZyx => rot_z(e.alpha) * rot_y(e.beta) * rot_x(e.gamma),
        EulerComposition::ExtrinsicZyx => rot_x(e.gamma) * rot_y(e.beta) * rot_z(e.alpha),
    };
    RotationMatrix(m)
}

/// Whether an extrinsic maps camera coordinates to world coordinates or
/// the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    CamToWorld,
    WorldToCam,
}

/// Coordinate convention an extrinsic is expressed in. `Source` is the
/// convention view placements are authored in; `Target` is what the
/// renderer consumes (x right, y down, z toward the scene). The two are
/// axis-identical here, so the conversion flip defaults to the identity,
/// but the machinery accepts any proper diagonal ±1 flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConventionTag {
    Source,
    Target,
}

/// World-side axis flip applied when converting between conventions.
/// Diagonal entries must be ±1 with an even number of sign flips so the
/// rotation part stays proper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisFlip(pub [f64; 3]);

impl AxisFlip {
    pub const IDENTITY: AxisFlip = AxisFlip([1.0, 1.0, 1.0]);

    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_diagonal(&Vector3::new(self.0[0], self.0[1], self.0[2]))
    }

    pub fn is_proper(&self) -> bool {
        self.0.iter().all(|v| v.abs() == 1.0) && self.0.iter().product::<f64>() == 1.0
    }
}

impl Default for AxisFlip {
    fn default() -> Self {
        Self::IDENTITY
    }
}

/// Rigid camera transform with an explicit direction and convention tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrinsic {
    pub rotation: RotationMatrix,
    pub translation: Vector3<f64>,
    pub direction: Direction,
    pub convention: ConventionTag,
}

impl Extrinsic {
    pub fn identity(direction: Direction, convention: ConventionTag) -> Self {
        Self { rotation: RotationMatrix::identity(), translation: Vector3::zeros(), direction, convention }
    }

    /// The 4x4 homogeneous matrix with bottom row (0 0 0 1).
    pub fn homogeneous(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(self.rotation.matrix());
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        m
    }

    #[inline]
    pub fn apply(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation.matrix() * p + self.translation
    }
}

/// Extrinsic from parts; the 4x4 form has the rotation upper-left, the
/// translation in the right column and (0 0 0 1) below.
pub fn compose_extrinsic(
    r: RotationMatrix,
    t: Vector3<f64>,
    direction: Direction,
    convention: ConventionTag,
) -> Extrinsic {
    Extrinsic { rotation: r, translation: t, direction, convention }
}

/// Inverse transform `(R', -R't)` with the direction flipped.
pub fn invert_extrinsic(e: &Extrinsic) -> Extrinsic {
    let rt = e.rotation.transposed();
    let t = -(rt.matrix() * e.translation);
    Extrinsic {
        rotation: rt,
        translation: t,
        direction: match e.direction {
            Direction::CamToWorld => Direction::WorldToCam,
            Direction::WorldToCam => Direction::CamToWorld,
        },
        convention: e.convention,
    }
}

/// Re-tag an extrinsic under the other convention, applying the world-side
/// flip. With the identity flip this only changes the tag. Applying the
/// conversion twice returns the original transform.
pub fn convert_convention(e: &Extrinsic, to: ConventionTag, flip: AxisFlip) -> Result<Extrinsic, CameraError> {
    if !flip.is_proper() {
        return Err(CameraError::UnknownConvention);
    }
    if e.convention == to {
        return Ok(*e);
    }
    let f = flip.matrix();
    Ok(Extrinsic {
        rotation: RotationMatrix(f * e.rotation.matrix()),
        translation: f * e.translation,
        direction: e.direction,
        convention: to,
    })
}

/// Pinhole intrinsics in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intrinsic {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: usize,
    pub height: usize,
}

impl Intrinsic {
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(self.fx, 0.0, self.cx, 0.0, self.fy, self.cy, 0.0, 0.0, 1.0)
    }

    /// Rescale to a different image resolution, preserving the field of view.
    pub fn scaled_to(&self, width: usize, height: usize) -> Intrinsic {
        let sx = width as f64 / self.width as f64;
        let sy = height as f64 / self.height as f64;
        Intrinsic {
            fx: self.fx * sx,
            fy: self.fy * sy,
            cx: self.cx * sx,
            cy: self.cy * sy,
            width,
            height,
        }
    }
}

/// The fixed intrinsics shared by all three views: 1920x1080 with
/// fx = 2480 px, fy = 2080 px and the principal point at the center.
pub fn default_intrinsic() -> Intrinsic {
    Intrinsic { fx: 2480.0, fy: 2080.0, cx: 960.0, cy: 540.0, width: 1920, height: 1080 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ViewId {
    Front,
    Left,
    Bottom,
}

impl ViewId {
    pub const ALL: [ViewId; 3] = [ViewId::Front, ViewId::Left, ViewId::Bottom];

    pub fn name(&self) -> &'static str {
        match self {
            ViewId::Front => "front",
            ViewId::Left => "left",
            ViewId::Bottom => "bottom",
        }
    }
}

/// How camera-space points map to pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProjectionMode {
    Perspective,
    /// Parallel projection `u = scale * x + cx`; depth is kept for sorting.
    Orthographic { scale: f64 },
}

/// A fully resolved camera: intrinsics plus a world-to-camera extrinsic in
/// the target convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraPose {
    pub intrinsic: Intrinsic,
    pub extrinsic: Extrinsic,
    pub view_id: ViewId,
    pub mode: ProjectionMode,
}

impl CameraPose {
    /// Camera center in world coordinates.
    pub fn center(&self) -> Vector3<f64> {
        let inv = invert_extrinsic(&self.extrinsic);
        inv.translation
    }

    /// Optical axis direction in world coordinates (camera-local +z).
    pub fn optical_axis(&self) -> Vector3<f64> {
        let inv = invert_extrinsic(&self.extrinsic);
        inv.rotation.matrix() * Vector3::z()
    }

    /// Rescale the intrinsics to a new render resolution.
    pub fn scaled_to(&self, width: usize, height: usize) -> CameraPose {
        CameraPose { intrinsic: self.intrinsic.scaled_to(width, height), ..*self }
    }
}

/// Project a world point to pixel coordinates and camera depth.
pub fn project(p: &Vector3<f64>, pose: &CameraPose) -> Result<(f64, f64, f64), CameraError> {
    if pose.extrinsic.direction != Direction::WorldToCam
        || pose.extrinsic.convention != ConventionTag::Target
    {
        return Err(CameraError::UnknownConvention);
    }
    let pc = pose.extrinsic.apply(p);
    let depth = pc.z;
    if depth <= 0.0 {
        return Err(CameraError::BehindCamera(depth));
    }
    let k = &pose.intrinsic;
    match pose.mode {
        ProjectionMode::Perspective => {
            Ok((k.fx * pc.x / depth + k.cx, k.fy * pc.y / depth + k.cy, depth))
        }
        ProjectionMode::Orthographic { scale } => {
            Ok((scale * pc.x + k.cx, scale * pc.y + k.cy, depth))
        }
    }
}

/// Record of how the canonical poses were resolved, kept in run reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoseSolution {
    pub composition: EulerComposition,
    /// Index into the configured position list assigned to each of
    /// front/left/bottom, if the configured positions validated.
    pub position_assignment: Option<[usize; 3]>,
    /// True when positions were derived from the viewing axes because no
    /// assignment of the configured positions satisfied the look-at
    /// constraint.
    pub positions_derived: bool,
    pub description: String,
}

/// The three canonical poses plus the record of how they were obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalPoses {
    pub front: CameraPose,
    pub left: CameraPose,
    pub bottom: CameraPose,
    pub solution: PoseSolution,
}

impl CanonicalPoses {
    pub fn get(&self, id: ViewId) -> &CameraPose {
        match id {
            ViewId::Front => &self.front,
            ViewId::Left => &self.left,
            ViewId::Bottom => &self.bottom,
        }
    }

    pub fn as_array(&self) -> [&CameraPose; 3] {
        [&self.front, &self.left, &self.bottom]
    }
}

/// Configured Euler triples for front/left/bottom, in degrees.
pub const CANONICAL_EULER: [EulerAnglesZyx; 3] = [
    EulerAnglesZyx { alpha: 0.0, beta: 90.0, gamma: 90.0 },
    EulerAnglesZyx { alpha: 90.0, beta: 0.0, gamma: 0.0 },
    EulerAnglesZyx { alpha: 0.0, beta: 180.0, gamma: 90.0 },
];

/// Configured camera positions at unit distance, scaled by the requested
/// distance before validation.
pub const CANONICAL_POSITIONS: [[f64; 3]; 3] = [[0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];

const LOOK_AT_TOL: f64 = 1e-9;

/// Distance from the origin to the line through `point` along `axis`.
fn origin_line_distance(point: &Vector3<f64>, axis: &Vector3<f64>) -> f64 {
    point.cross(axis).norm() / axis.norm()
}

fn looks_at_origin(center: &Vector3<f64>, axis: &Vector3<f64>) -> bool {
    // The axis must pass through the origin and point from the camera
    // toward it.
    origin_line_distance(center, axis) < LOOK_AT_TOL && center.dot(axis) < 0.0
}

fn axes_mutually_orthogonal(axes: &[Vector3<f64>; 3]) -> bool {
    axes[0].dot(&axes[1]).abs() < LOOK_AT_TOL
        && axes[0].dot(&axes[2]).abs() < LOOK_AT_TOL
        && axes[1].dot(&axes[2]).abs() < LOOK_AT_TOL
}

/// Construct validated world-to-camera poses for the three orthographic
/// views, with every camera `distance` units from the origin and looking
/// at it.
///
/// The configured Euler/position table is validated first under the
/// intrinsic composition, then under the extrinsic one, then across all
/// six position assignments. If no assignment passes, positions are
/// derived as `-distance * axis` from the unique composition whose three
/// optical axes are mutually orthogonal. The returned [`PoseSolution`]
/// states exactly which path was taken.
pub fn canonical_poses(distance: f64) -> Result<CanonicalPoses, CameraError> {
    canonical_poses_with(distance, default_intrinsic(), ProjectionMode::Perspective)
}

pub fn canonical_poses_with(
    distance: f64,
    intrinsic: Intrinsic,
    mode: ProjectionMode,
) -> Result<CanonicalPoses, CameraError> {
    if !(distance > 0.0) {
        return Err(CameraError::BadDistance(distance));
    }

    let compositions = [EulerComposition::IntrinsicZyx, EulerComposition::ExtrinsicZyx];
    let permutations: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

    for comp in compositions {
        let rotations: Vec<RotationMatrix> = CANONICAL_EULER
            .iter()
            .map(|e| rotation_from_euler_with(*e, comp).snap_axis_aligned(1e-12))
            .collect();
        let axes: [Vector3<f64>; 3] = [
            rotations[0].matrix() * Vector3::z(),
            rotations[1].matrix() * Vector3::z(),
            rotations[2].matrix() * Vector3::z(),
        ];
        if !axes_mutually_orthogonal(&axes) {
            continue;
        }
        for perm in permutations {
            let centers: Vec<Vector3<f64>> = perm
                .iter()
                .map(|&i| Vector3::from(CANONICAL_POSITIONS[i]) * distance)
                .collect();
            let valid = (0..3).all(|i| looks_at_origin(&centers[i], &axes[i]));
            if valid {
                let desc = format!(
                    "{comp:?} composition with configured positions assigned {perm:?}"
                );
                return Ok(build_poses(
                    &rotations,
                    &centers,
                    intrinsic,
                    mode,
                    PoseSolution {
                        composition: comp,
                        position_assignment: Some(perm),
                        positions_derived: false,
                        description: desc,
                    },
                )?);
            }
        }
    }

    // No assignment of the configured positions validates. Fall back to
    // the composition with an orthogonal axis triad and place each camera
    // on its own viewing ray.
    for comp in compositions {
        let rotations: Vec<RotationMatrix> = CANONICAL_EULER
            .iter()
            .map(|e| rotation_from_euler_with(*e, comp).snap_axis_aligned(1e-12))
            .collect();
        let axes: [Vector3<f64>; 3] = [
            rotations[0].matrix() * Vector3::z(),
            rotations[1].matrix() * Vector3::z(),
            rotations[2].matrix() * Vector3::z(),
        ];
        if !axes_mutually_orthogonal(&axes) {
            continue;
        }
        let centers: Vec<Vector3<f64>> = axes.iter().map(|a| -a * distance).collect();
        let valid = (0..3).all(|i| looks_at_origin(&centers[i], &axes[i]));
        if valid {
            let desc = format!(
                "{comp:?} composition; positions derived from viewing axes \
                 (configured position table failed look-at validation)"
            );
            return Ok(build_poses(
                &rotations,
                &centers,
                intrinsic,
                mode,
                PoseSolution {
                    composition: comp,
                    position_assignment: None,
                    positions_derived: true,
                    description: desc,
                },
            )?);
        }
    }

    Err(CameraError::PoseConstructionFailed)
}

fn build_poses(
    rotations: &[RotationMatrix],
    centers: &[Vector3<f64>],
    intrinsic: Intrinsic,
    mode: ProjectionMode,
    solution: PoseSolution,
) -> Result<CanonicalPoses, CameraError> {
    let mut poses = Vec::with_capacity(3);
    for (i, view_id) in ViewId::ALL.into_iter().enumerate() {
        let cam_to_world = compose_extrinsic(
            rotations[i],
            centers[i],
            Direction::CamToWorld,
            ConventionTag::Source,
        );
        let converted = convert_convention(&cam_to_world, ConventionTag::Target, AxisFlip::IDENTITY)?;
        let world_to_cam = invert_extrinsic(&converted);
        poses.push(CameraPose { intrinsic, extrinsic: world_to_cam, view_id, mode });
    }
    Ok(CanonicalPoses { front: poses[0], left: poses[1], bottom: poses[2], solution })
}

/// JSON-serializable snapshot of a camera pose (row-major 4x4
/// world-to-camera matrix plus flattened intrinsics).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoseJson {
    pub view: String,
    pub world_to_cam: [[f64; 4]; 4],
    pub intrinsic: [f64; 9],
    pub width: usize,
    pub height: usize,
}

impl PoseJson {
    pub fn from_pose(pose: &CameraPose) -> Self {
        let m = pose.extrinsic.homogeneous();
        let mut rows = [[0.0; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                rows[r][c] = m[(r, c)];
            }
        }
        let k = pose.intrinsic.matrix();
        let mut kf = [0.0; 9];
        for r in 0..3 {
            for c in 0..3 {
                kf[r * 3 + c] = k[(r, c)];
            }
        }
        PoseJson {
            view: pose.view_id.name().to_string(),
            world_to_cam: rows,
            intrinsic: kf,
            width: pose.intrinsic.width,
            height: pose.intrinsic.height,
        }
    }

    pub fn to_pose(&self) -> Result<CameraPose, CameraError> {
        let mut r = Matrix3::zeros();
        for row in 0..3 {
            for col in 0..3 {
                r[(row, col)] = self.world_to_cam[row][col];
            }
        }
        let rotation = RotationMatrix::try_new(r)?;
        let translation = Vector3::new(
            self.world_to_cam[0][3],
            self.world_to_cam[1][3],
            self.world_to_cam[2][3],
        );
        let view_id = match self.view.as_str() {
            "front" => ViewId::Front,
            "left" => ViewId::Left,
            "bottom" => ViewId::Bottom,
            _ => return Err(CameraError::UnknownConvention),
        };
        Ok(CameraPose {
            intrinsic: Intrinsic {
                fx: self.intrinsic[0],
                fy: self.intrinsic[4],
                cx: self.intrinsic[2],
                cy: self.intrinsic[5],
                width: self.width,
                height: self.height,
            },
            extrinsic: Extrinsic {
                rotation,
                translation,
                direction: Direction::WorldToCam,
                convention: ConventionTag::Target,
            },
            view_id,
            mode: ProjectionMode::Perspective,
        })
    }
}
