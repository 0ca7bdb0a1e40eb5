//! Mean squared error and PSNR.

use std::fmt;

use crate::error::{Error, Result};
use crate::image::GrayImage;

pub const PEAK: f64 = 255.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub mse: f64,
    /// `f64::INFINITY` when `mse == 0`.
    pub psnr_db: f64,
}

impl QualityReport {
    pub fn is_infinite(&self) -> bool {
        self.psnr_db.is_infinite()
    }
}

/// Formats the PSNR with six decimals, or `inf` for identical images.
pub struct PsnrDisplay(pub f64);

impl fmt::Display for PsnrDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{:.6}", self.0)
        }
    }
}

pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    if a.dimensions() != b.dimensions() {
        return Err(Error::Dimension(format!(
            "{}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    let n = a.as_slice().len();
    if n == 0 {
        return Ok(0.0);
    }
    let sum: f64 = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / n as f64)
}

pub fn psnr_from_mse(mse: f64, peak: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak * peak / mse).log10()
    }
}

pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<QualityReport> {
    psnr_with_peak(a, b, PEAK)
}

pub fn psnr_with_peak(a: &GrayImage, b: &GrayImage, peak: f64) -> Result<QualityReport> {
    let mse = mse(a, b)?;
    Ok(QualityReport {
        mse,
        psnr_db: psnr_from_mse(mse, peak),
    })
}
