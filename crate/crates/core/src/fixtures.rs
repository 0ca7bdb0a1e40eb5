//! Deterministic synthetic test images: gradients, checkerboards, disks and
//! sectors with edges at many orientations.

use std::f64::consts::PI;

use crate::image::GrayImage;
use crate::pipeline::NamedImage;

pub const FIXTURE_SIZE: usize = 192;

fn disk(x: f64, y: f64, cx: f64, cy: f64, r: f64) -> bool {
    (x - cx).powi(2) + (y - cy).powi(2) <= r * r
}

/// Smooth gradient background with a bright and a dark disk.
pub fn gradient_disks(size: usize) -> GrayImage {
    let s = size as f64;
    GrayImage::from_fn(size, size, |x, y| {
        let (fx, fy) = (x as f64, y as f64);
        if disk(fx, fy, 0.35 * s, 0.4 * s, 0.22 * s) {
            220.0
        } else if disk(fx, fy, 0.72 * s, 0.68 * s, 0.17 * s) {
            30.0
        } else {
            60.0 + 120.0 * (fx + fy) / (2.0 * s)
        }
    })
}

/// Checkerboard rotated by 30 degrees.
pub fn rotated_checker(size: usize) -> GrayImage {
    let (sin, cos) = (PI / 6.0).sin_cos();
    let cell = size as f64 / 6.0;
    GrayImage::from_fn(size, size, |x, y| {
        let (fx, fy) = (x as f64 + 0.5, y as f64 + 0.5);
        let u = (fx * cos + fy * sin) / cell;
        let v = (-fx * sin + fy * cos) / cell;
        if (u.floor() as i64 + v.floor() as i64).rem_euclid(2) == 0 {
            50.0
        } else {
            200.0
        }
    })
}

/// Overlapping disks of several radii and intensities on a dark field.
pub fn disks(size: usize) -> GrayImage {
    let s = size as f64;
    let spots = [
        (0.25, 0.25, 0.18, 180.0),
        (0.7, 0.3, 0.14, 110.0),
        (0.5, 0.55, 0.2, 240.0),
        (0.3, 0.78, 0.12, 140.0),
        (0.78, 0.78, 0.16, 80.0),
    ];
    GrayImage::from_fn(size, size, |x, y| {
        let (fx, fy) = (x as f64, y as f64);
        spots
            .iter()
            .rev()
            .find(|&&(cx, cy, r, _)| disk(fx, fy, cx * s, cy * s, r * s))
            .map_or(20.0, |&(_, _, _, v)| v)
    })
}

/// Twelve constant sectors around the centre.
pub fn sectors(size: usize) -> GrayImage {
    let c = size as f64 / 2.0;
    GrayImage::from_fn(size, size, |x, y| {
        let a = (y as f64 + 0.5 - c).atan2(x as f64 + 0.5 - c) + PI;
        let sector = ((a / (2.0 * PI) * 12.0).floor() as usize).min(11);
        30.0 + 18.0 * ((sector * 5) % 12) as f64
    })
}

/// Tilted step edge over a gentle sinusoidal shading.
pub fn shaded_steps(size: usize) -> GrayImage {
    let s = size as f64;
    GrayImage::from_fn(size, size, |x, y| {
        let (fx, fy) = (x as f64, y as f64);
        let shade = 20.0 * (2.0 * PI * fx / s).sin() * (2.0 * PI * fy / s).cos();
        let step = if fy > 0.45 * fx + 0.2 * s { 170.0 } else { 70.0 };
        let band = if (fx - 0.8 * fy).abs() < 0.08 * s { 50.0 } else { 0.0 };
        step + shade + band
    })
}

/// The five fixtures at [`FIXTURE_SIZE`], in a fixed order.
pub fn synthetic_fixtures() -> Vec<NamedImage> {
    let size = FIXTURE_SIZE;
    [
        ("gradient-disks", gradient_disks(size)),
        ("rotated-checker", rotated_checker(size)),
        ("disks", disks(size)),
        ("sectors", sectors(size)),
        ("shaded-steps", shaded_steps(size)),
    ]
    .into_iter()
    .map(|(name, image)| NamedImage {
        name: name.to_string(),
        image,
    })
    .collect()
}
