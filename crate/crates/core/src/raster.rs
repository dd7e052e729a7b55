//! Row-major raster image types shared across the sketch pipeline.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RasterError {
    #[error("image dimensions {0}x{1} do not match {2}x{3}")]
    DimMismatch(usize, usize, usize, usize),
    #[error("zero-sized image ({0}x{1})")]
    Empty(usize, usize),
    #[error("data length {0} does not match {1}x{2}")]
    BadLength(usize, usize, usize),
}

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::Empty(width, height));
        }
        if data.len() != width * height {
            return Err(RasterError::BadLength(data.len(), width, height));
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self { width, height, data: vec![value; width * height] }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.data[y * self.width + x] = value;
    }

    /// Sample with clamped-border replication; coordinates may be negative
    /// or past the edge.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> u8 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.get(cx, cy)
    }
}

/// Binary image; `true` marks an on-pixel (stroke / edge / foreground).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self { width, height, data: vec![false; width * height] }
    }

    pub fn from_data(width: usize, height: usize, data: Vec<bool>) -> Result<Self, RasterError> {
        if data.len() != width * height {
            return Err(RasterError::BadLength(data.len(), width, height));
        }
        Ok(Self { width, height, data })
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn get_checked(&self, x: isize, y: isize) -> bool {
        if x < 0 || y < 0 || x >= self.width as isize || y >= self.height as isize {
            false
        } else {
            self.get(x as usize, y as usize)
        }
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.data[y * self.width + x] = value;
    }

    pub fn count_on(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    pub fn on_pixels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(move |(i, _)| (i % self.width, i / self.width))
    }

    /// Grayscale view with on-pixels mapped to `on_value` and off-pixels
    /// to `255 - on_value`'s complement (off pixels become the opposite
    /// extreme).
    pub fn to_gray(&self, on_value: u8, off_value: u8) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| if v { on_value } else { off_value }).collect(),
        }
    }
}

/// RGB image with channel values in [0, 1], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<[f64; 3]>,
}

impl ColorImage {
    pub fn filled(width: usize, height: usize, color: [f64; 3]) -> Self {
        Self { width, height, data: vec![color; width * height] }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> [f64; 3] {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, color: [f64; 3]) {
        self.data[y * self.width + x] = color;
    }

    pub fn same_dims(&self, other: &ColorImage) -> bool {
        self.width == other.width && self.height == other.height
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_rejects_bad_length() {
        assert!(GrayImage::new(4, 4, vec![0; 15]).is_err());
        assert!(GrayImage::new(0, 4, vec![]).is_err());
    }

    #[test]
    fn clamped_sampling_replicates_border() {
        let img = GrayImage::new(2, 2, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(img.get_clamped(-5, -5), 1);
        assert_eq!(img.get_clamped(10, 0), 2);
        assert_eq!(img.get_clamped(0, 10), 3);
        assert_eq!(img.get_clamped(10, 10), 4);
    }

    #[test]
    fn binary_on_pixels_enumerates_in_row_order() {
        let mut b = BinaryImage::new(3, 2);
        b.set(2, 0, true);
        b.set(0, 1, true);
        let on: Vec<_> = b.on_pixels().collect();
        assert_eq!(on, vec![(2, 0), (0, 1)]);
    }
}
