//! Unordered 3D point sets used for hull export, model export and metric
//! evaluation.

use nalgebra::Vector3;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    pub points: Vec<Vector3<f64>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vector3<f64>>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Axis-aligned bounding box as (min, max); `None` when empty.
    pub fn bounding_box(&self) -> Option<(Vector3<f64>, Vector3<f64>)> {
        let first = *self.points.first()?;
        let mut lo = first;
        let mut hi = first;
        for p in &self.points {
            for i in 0..3 {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        Some((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounding_box_of_two_points() {
        let pc = PointCloud::new(vec![Vector3::new(1.0, -2.0, 3.0), Vector3::new(-1.0, 5.0, 0.0)]);
        let (lo, hi) = pc.bounding_box().unwrap();
        assert_eq!(lo, Vector3::new(-1.0, -2.0, 0.0));
        assert_eq!(hi, Vector3::new(1.0, 5.0, 3.0));
    }

    #[test]
    fn bounding_box_empty_is_none() {
        assert!(PointCloud::default().bounding_box().is_none());
    }
}
