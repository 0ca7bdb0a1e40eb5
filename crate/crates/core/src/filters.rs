//! Square box/median filtering and the shape-adaptive variable filter.
//!
//! Both filters work on the edge-replicated padding of the input and visit
//! each k×k window in row-major order. The adaptive filter keeps only the
//! window pixels whose label equals the label of the centre (anchor) pixel
//! and returns the mean or median of that candidate set. With
//! [`LabelScope::Block`] a candidate must also lie in the anchor's 6×6 block.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::{GrayImage, LabelMap};
use crate::BLOCK;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistic {
    Mean,
    Median,
}

impl Statistic {
    pub const ALL: [Statistic; 2] = [Statistic::Mean, Statistic::Median];

    pub fn as_str(self) -> &'static str {
        match self {
            Statistic::Mean => "mean",
            Statistic::Median => "median",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Statistic {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "mean" => Ok(Statistic::Mean),
            "median" => Ok(Statistic::Median),
            other => Err(format!("unknown statistic {other:?}")),
        }
    }
}

/// How labels are compared when selecting candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LabelScope {
    /// Plain label equality; same-bit pixels from neighbouring blocks qualify.
    #[default]
    Literal,
    /// Label equality and membership in the anchor's 6×6 block.
    Block,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterMode {
    Square,
    AdaptiveLiteral,
    AdaptiveBlock,
}

impl FilterMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterMode::Square => "square",
            FilterMode::AdaptiveLiteral => "adaptive-literal",
            FilterMode::AdaptiveBlock => "adaptive-block",
        }
    }

    pub fn scope(self) -> Option<LabelScope> {
        match self {
            FilterMode::Square => None,
            FilterMode::AdaptiveLiteral => Some(LabelScope::Literal),
            FilterMode::AdaptiveBlock => Some(LabelScope::Block),
        }
    }
}

impl FromStr for FilterMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "square" => Ok(FilterMode::Square),
            "adaptive-literal" => Ok(FilterMode::AdaptiveLiteral),
            "adaptive-block" => Ok(FilterMode::AdaptiveBlock),
            other => Err(format!("unknown filter mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterSpec {
    pub kernel: usize,
    pub statistic: Statistic,
    pub mode: FilterMode,
}

impl FilterSpec {
    pub fn validate(&self) -> Result<()> {
        check_kernel(self.kernel)
    }

    /// Run the filter. Adaptive modes need `labels`.
    pub fn apply(&self, img: &GrayImage, labels: Option<&LabelMap>) -> Result<GrayImage> {
        match (self.mode.scope(), labels) {
            (None, _) => box_filter(img, self.kernel, self.statistic),
            (Some(scope), Some(labels)) => {
                adaptive_filter(img, labels, self.kernel, self.statistic, scope)
            }
            (Some(_), None) => Err(Error::Parameter(format!(
                "{} filtering needs a label map",
                self.mode.as_str()
            ))),
        }
    }
}

pub fn check_kernel(k: usize) -> Result<()> {
    if k == 0 || k % 2 == 0 {
        return Err(Error::Parameter(format!(
            "kernel size must be odd and positive, got {k}"
        )));
    }
    Ok(())
}

/// Median with the midpoint convention for even counts.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Parameter("median of an empty set".into()));
    }
    let mut v = values.to_vec();
    Ok(median_in_place(&mut v))
}

fn median_in_place(v: &mut [f64]) -> f64 {
    let n = v.len();
    let mid = n / 2;
    let (lower, upper, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let below = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (below + upper) / 2.0
    }
}

/// Mean or median over the full k×k window.
pub fn box_filter(img: &GrayImage, k: usize, statistic: Statistic) -> Result<GrayImage> {
    check_kernel(k)?;
    let keys = vec![0u64; img.width() * img.height()];
    windowed(img, &keys, k, statistic)
}

/// Shape-adaptive filter: candidates are window pixels sharing the anchor's label.
pub fn adaptive_filter(
    img: &GrayImage,
    labels: &LabelMap,
    k: usize,
    statistic: Statistic,
    scope: LabelScope,
) -> Result<GrayImage> {
    check_kernel(k)?;
    if img.dimensions() != labels.dimensions() {
        return Err(Error::Dimension(format!(
            "image is {}x{} but labels are {}x{}",
            img.width(),
            img.height(),
            labels.width(),
            labels.height()
        )));
    }
    let keys = label_keys(labels, scope);
    windowed(img, &keys, k, statistic)
}

fn label_keys(labels: &LabelMap, scope: LabelScope) -> Vec<u64> {
    match scope {
        LabelScope::Literal => labels.as_slice().iter().map(|&l| l as u64).collect(),
        LabelScope::Block => {
            let (w, h) = labels.dimensions();
            let blocks_x = w.div_ceil(BLOCK) as u64;
            let mut keys = Vec::with_capacity(w * h);
            for y in 0..h {
                for x in 0..w {
                    let block = (y / BLOCK) as u64 * blocks_x + (x / BLOCK) as u64;
                    keys.push((block << 32) | labels.get(x, y) as u64);
                }
            }
            keys
        }
    }
}

/// Window offsets `(dx, dy)` of the candidate set at `(x, y)`, row-major.
pub fn candidate_offsets(
    labels: &LabelMap,
    x: usize,
    y: usize,
    k: usize,
    scope: LabelScope,
) -> Result<Vec<(isize, isize)>> {
    check_kernel(k)?;
    let keys = label_keys(labels, scope);
    let (w, h) = labels.dimensions();
    let key_at = |px: isize, py: isize| {
        let cx = px.clamp(0, w as isize - 1) as usize;
        let cy = py.clamp(0, h as isize - 1) as usize;
        keys[cy * w + cx]
    };
    let r = (k / 2) as isize;
    let anchor = key_at(x as isize, y as isize);
    let mut out = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if key_at(x as isize + dx, y as isize + dy) == anchor {
                out.push((dx, dy));
            }
        }
    }
    Ok(out)
}

/// Edge-replicate a row-major grid by `r` on every side.
fn pad<T: Copy>(src: &[T], w: usize, h: usize, r: usize) -> Vec<T> {
    let pw = w + 2 * r;
    let mut out = Vec::with_capacity(pw * (h + 2 * r));
    for py in 0..h + 2 * r {
        let y = py.saturating_sub(r).min(h - 1);
        let row = &src[y * w..(y + 1) * w];
        out.extend(std::iter::repeat_n(row[0], r));
        out.extend_from_slice(row);
        out.extend(std::iter::repeat_n(row[w - 1], r));
    }
    out
}

fn windowed(img: &GrayImage, keys: &[u64], k: usize, statistic: Statistic) -> Result<GrayImage> {
    let (w, h) = img.dimensions();
    if w == 0 || h == 0 {
        return Ok(img.clone());
    }
    let r = k / 2;
    let pw = w + 2 * r;
    let vals = pad(img.as_slice(), w, h, r);
    let keys = pad(keys, w, h, r);

    let mut out = vec![0.0; w * h];
    out.par_chunks_mut(w).enumerate().for_each_init(
        || Vec::with_capacity(k * k),
        |scratch, (y, row)| {
            for (x, o) in row.iter_mut().enumerate() {
                let anchor = keys[(y + r) * pw + x + r];
                scratch.clear();
                for wy in y..y + k {
                    let base = wy * pw + x;
                    let key_row = &keys[base..base + k];
                    let val_row = &vals[base..base + k];
                    for (&key, &v) in key_row.iter().zip(val_row) {
                        if key == anchor {
                            scratch.push(v);
                        }
                    }
                }
                *o = match statistic {
                    Statistic::Mean => {
                        let mut sum = 0.0;
                        for &v in scratch.iter() {
                            sum += v;
                        }
                        sum / scratch.len() as f64
                    }
                    Statistic::Median => median_in_place(scratch),
                };
            }
        },
    );
    GrayImage::from_vec(w, h, out)
}
