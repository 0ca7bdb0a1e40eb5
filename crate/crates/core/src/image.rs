//! In-memory image and label-map containers.

use crate::error::{Error, Result};

/// Row-major grayscale image with real-valued samples on the `[0, 255]` scale.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    /// Build an image from row-major samples. Samples are clipped to `[0, 255]`.
    pub fn from_vec(width: usize, height: usize, mut data: Vec<f64>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Dimension(format!(
                "{} samples for a {}x{} image",
                data.len(),
                width,
                height
            )));
        }
        for v in &mut data {
            *v = clip(*v);
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Self {
            width,
            height,
            data: vec![clip(value); width * height],
        }
    }

    /// Build an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(clip(f(x, y)));
            }
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Sample with coordinates clamped to the image (edge replication).
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.get(cx, cy)
    }

    /// Top-left `width`×`height` sub-image.
    pub fn crop(&self, width: usize, height: usize) -> Result<Self> {
        if width > self.width || height > self.height {
            return Err(Error::Dimension(format!(
                "cannot crop {}x{} to {}x{}",
                self.width, self.height, width, height
            )));
        }
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            let row = y * self.width;
            data.extend_from_slice(&self.data[row..row + width]);
        }
        Ok(Self { width, height, data })
    }

    /// Apply `f` to every sample, clipping the result.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| clip(f(v))).collect(),
        }
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

#[inline]
pub(crate) fn clip(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 255.0)
    }
}

/// Per-pixel region labels aligned with a [`GrayImage`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
}

impl LabelMap {
    pub fn from_vec(width: usize, height: usize, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != width * height {
            return Err(Error::Dimension(format!(
                "{} labels for a {}x{} map",
                labels.len(),
                width,
                height
            )));
        }
        Ok(Self {
            width,
            height,
            labels,
        })
    }

    pub fn uniform(width: usize, height: usize, label: u32) -> Self {
        Self {
            width,
            height,
            labels: vec![label; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    /// True when every label is 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.labels.iter().all(|&l| l <= 1)
    }

    pub fn crop(&self, width: usize, height: usize) -> Result<Self> {
        if width > self.width || height > self.height {
            return Err(Error::Dimension(format!(
                "cannot crop {}x{} label map to {}x{}",
                self.width, self.height, width, height
            )));
        }
        let mut labels = Vec::with_capacity(width * height);
        for y in 0..height {
            let row = y * self.width;
            labels.extend_from_slice(&self.labels[row..row + width]);
        }
        Ok(Self {
            width,
            height,
            labels,
        })
    }

    /// Scope labels to 6×6 blocks: `block_index * 2 + label`, with blocks
    /// numbered row-major from the top-left corner.
    ///
    /// Intended for binary (literal) maps; larger labels are scoped as well
    /// but are no longer of the `2 * block + bit` form.
    pub fn block_scoped(&self) -> Self {
        let blocks_x = self.width.div_ceil(crate::BLOCK);
        let mut labels = Vec::with_capacity(self.labels.len());
        for y in 0..self.height {
            for x in 0..self.width {
                let block = (y / crate::BLOCK) * blocks_x + x / crate::BLOCK;
                labels.push(block as u32 * 2 + self.get(x, y));
            }
        }
        Self {
            width: self.width,
            height: self.height,
            labels,
        }
    }
}
