//! Reference implementations used as oracles. These deliberately avoid the
//! library's fast paths: plain nested loops over explicitly padded grids.

#![allow(dead_code)]

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varpix::{GrayImage, LabelMap, Mask, MaskSet, SelectionCriterion, Statistic};

pub struct TestRng(ChaCha8Rng);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.0.next_u64() % n
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Random real-valued image in [0, 255].
pub fn random_image(rng: &mut TestRng, w: usize, h: usize) -> GrayImage {
    GrayImage::from_fn(w, h, |_, _| rng.unit() * 255.0)
}

pub fn random_labels(rng: &mut TestRng, w: usize, h: usize, classes: u64) -> LabelMap {
    let labels = (0..w * h).map(|_| rng.below(classes) as u32).collect();
    LabelMap::from_vec(w, h, labels).unwrap()
}

fn padded<T: Copy>(w: usize, h: usize, r: usize, at: impl Fn(usize, usize) -> T) -> Vec<Vec<T>> {
    let mut rows = Vec::new();
    for py in 0..h + 2 * r {
        let sy = (py as isize - r as isize).clamp(0, h as isize - 1) as usize;
        let mut row = Vec::new();
        for px in 0..w + 2 * r {
            let sx = (px as isize - r as isize).clamp(0, w as isize - 1) as usize;
            row.push(at(sx, sy));
        }
        rows.push(row);
    }
    rows
}

fn naive_median(v: &mut [f64]) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Variable adaptive filtering, one pixel at a time: pad image and mask by
/// edge replication, take the k×k neighbourhood, keep entries whose mask value
/// equals the anchor's, reduce by mean or median. With `block_scoped`, the
/// mask value carries the source pixel's 6×6 block coordinates too.
pub fn naive_adaptive(
    img: &GrayImage,
    labels: &LabelMap,
    k: usize,
    statistic: Statistic,
    block_scoped: bool,
) -> Vec<f64> {
    let (w, h) = img.dimensions();
    let r = k / 2;
    let ip = padded(w, h, r, |x, y| img.get(x, y));
    let mp = padded(w, h, r, |x, y| {
        let block = if block_scoped { (x / 6, y / 6) } else { (0, 0) };
        (block, labels.get(x, y))
    });
    let mut out = Vec::with_capacity(w * h);
    for i in 0..h {
        for j in 0..w {
            let anchor = mp[i + r][j + r];
            let mut v = Vec::new();
            for p in 0..k {
                for q in 0..k {
                    if mp[i + p][j + q] == anchor {
                        v.push(ip[i + p][j + q]);
                    }
                }
            }
            out.push(match statistic {
                Statistic::Mean => v.iter().sum::<f64>() / v.len() as f64,
                Statistic::Median => naive_median(&mut v),
            });
        }
    }
    out
}

/// Full-window filter on the padded image.
pub fn naive_box(img: &GrayImage, k: usize, statistic: Statistic) -> Vec<f64> {
    let uniform = LabelMap::uniform(img.width(), img.height(), 0);
    naive_adaptive(img, &uniform, k, statistic, false)
}

/// Region means and squared error by a direct 36-cell loop.
pub fn brute_block(block: &[[f64; 6]; 6], mask: &Mask) -> ([[f64; 6]; 6], f64) {
    let mut sums = [0.0f64; 2];
    let mut counts = [0.0f64; 2];
    for r in 0..6 {
        for c in 0..6 {
            let bit = mask.region(r, c) as usize;
            sums[bit] += block[r][c];
            counts[bit] += 1.0;
        }
    }
    let means = [sums[0] / counts[0], sums[1] / counts[1]];
    let mut out = [[0.0; 6]; 6];
    let mut err = 0.0;
    for r in 0..6 {
        for c in 0..6 {
            out[r][c] = means[mask.region(r, c) as usize];
            err += (block[r][c] - out[r][c]).powi(2);
        }
    }
    (out, err)
}

/// Exhaustive mask choice with the lowest-index tie rule.
pub fn brute_select(block: &[[f64; 6]; 6], set: &MaskSet, criterion: SelectionCriterion) -> usize {
    let scores: Vec<f64> = set
        .iter()
        .map(|m| match criterion {
            SelectionCriterion::MinReconError => brute_block(block, m).1,
            SelectionCriterion::MinMeanDifference => {
                let (out, _) = brute_block(block, m);
                let mut means = [0.0; 2];
                for r in 0..6 {
                    for c in 0..6 {
                        means[m.region(r, c) as usize] = out[r][c];
                    }
                }
                (means[0] - means[1]).abs()
            }
        })
        .collect();
    let best = scores.iter().cloned().fold(f64::INFINITY, f64::min);
    scores.iter().position(|&s| s == best).unwrap()
}
