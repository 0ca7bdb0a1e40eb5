//! Square-pixel and variable-pixel image formation.
//!
//! Images are processed in 6×6 blocks. A square scan replaces each block by
//! its mean. A variable scan replaces each region of a two-region mask by the
//! region mean, either with one mask for the whole image (`scan_uniform`) or
//! with a per-block winner chosen from a mask set (`scan_parallel_fused`).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::{GrayImage, LabelMap};
use crate::maskkit::{Cells, Mask, MaskSet, CELLS};
use crate::BLOCK;

/// A 6×6 block of intensities, row-major.
pub type Block = [[f64; BLOCK]; BLOCK];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionCriterion {
    /// Minimize the squared reconstruction error of the region-mean block.
    #[default]
    MinReconError,
    /// Minimize `|mean(region 0) - mean(region 1)|`.
    MinMeanDifference,
}

impl SelectionCriterion {
    pub fn as_str(self) -> &'static str {
        match self {
            SelectionCriterion::MinReconError => "min-recon-error",
            SelectionCriterion::MinMeanDifference => "min-mean-difference",
        }
    }
}

impl std::str::FromStr for SelectionCriterion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "min-recon-error" => Ok(Self::MinReconError),
            "min-mean-difference" => Ok(Self::MinMeanDifference),
            other => Err(format!("unknown selection criterion {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    /// Piecewise constant within each block region.
    pub image: GrayImage,
    /// Literal (binary) region bits, tiled block by block.
    pub labels: LabelMap,
    /// Winning mask index per block, row-major; empty for square and uniform scans.
    pub chosen_masks: Vec<usize>,
    pub blocks_x: usize,
    pub blocks_y: usize,
}

impl ScanResult {
    /// Labels of the form `block_index * 2 + region_bit`.
    pub fn block_labels(&self) -> LabelMap {
        self.labels.block_scoped()
    }

    /// Crop image and labels to the top-left `width`×`height` area.
    pub fn crop(&self, width: usize, height: usize) -> Result<ScanResult> {
        Ok(ScanResult {
            image: self.image.crop(width, height)?,
            labels: self.labels.crop(width, height)?,
            chosen_masks: self.chosen_masks.clone(),
            blocks_x: self.blocks_x,
            blocks_y: self.blocks_y,
        })
    }
}

/// Edge-replicate the right and bottom borders up to the next multiple of 6.
pub fn pad_to_block_multiple(img: &GrayImage) -> GrayImage {
    let (w, h) = img.dimensions();
    let pw = w.div_ceil(BLOCK) * BLOCK;
    let ph = h.div_ceil(BLOCK) * BLOCK;
    if (pw, ph) == (w, h) {
        return img.clone();
    }
    GrayImage::from_fn(pw, ph, |x, y| img.get(x.min(w - 1), y.min(h - 1)))
}

/// Region-mean reconstruction of `block` under a partition that may leave
/// region 1 empty (the square case). Returns the output block and the sum of
/// squared deviations.
pub(crate) fn apply_partition(block: &Block, cells: &Cells) -> (Block, f64) {
    let means = region_means(block, cells);
    let mut out = [[0.0; BLOCK]; BLOCK];
    let mut err = 0.0;
    for r in 0..BLOCK {
        for c in 0..BLOCK {
            let v = means[cells[r][c] as usize];
            out[r][c] = v;
            let d = block[r][c] - v;
            err += d * d;
        }
    }
    (out, err)
}

fn region_means(block: &Block, cells: &Cells) -> [f64; 2] {
    let mut sum = [0.0; 2];
    let mut count = [0usize; 2];
    for r in 0..BLOCK {
        for c in 0..BLOCK {
            let bit = cells[r][c] as usize;
            sum[bit] += block[r][c];
            count[bit] += 1;
        }
    }
    let mean = |i: usize| {
        if count[i] == 0 {
            0.0
        } else {
            sum[i] / count[i] as f64
        }
    };
    [mean(0), mean(1)]
}

/// Replace each mask region by its mean; also returns the squared
/// reconstruction error over the 36 cells.
pub fn apply_mask_to_block(block: &Block, mask: &Mask) -> (Block, f64) {
    apply_partition(block, mask.cells())
}

/// Pick the best mask for `block`. Ties go to the lowest index.
pub fn select_mask(block: &Block, set: &MaskSet, criterion: SelectionCriterion) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, mask) in set.iter().enumerate() {
        let score = match criterion {
            SelectionCriterion::MinReconError => apply_mask_to_block(block, mask).1,
            SelectionCriterion::MinMeanDifference => {
                let [m0, m1] = region_means(block, mask.cells());
                (m0 - m1).abs()
            }
        };
        if score < best.1 {
            best = (i, score);
        }
    }
    best
}

pub fn extract_block(img: &GrayImage, bx: usize, by: usize) -> Block {
    let mut block = [[0.0; BLOCK]; BLOCK];
    for (r, row) in block.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = img.get(bx * BLOCK + c, by * BLOCK + r);
        }
    }
    block
}

fn check_block_multiple(img: &GrayImage) -> Result<(usize, usize)> {
    let (w, h) = img.dimensions();
    if w == 0 || h == 0 || w % BLOCK != 0 || h % BLOCK != 0 {
        return Err(Error::Dimension(format!(
            "{w}x{h} is not a nonzero multiple of {BLOCK}; pad first"
        )));
    }
    Ok((w / BLOCK, h / BLOCK))
}

/// Assemble a scan from per-block (output, region bits) pairs in row-major block order.
fn assemble(blocks_x: usize, blocks_y: usize, parts: &[(Block, Cells)]) -> (GrayImage, LabelMap) {
    let w = blocks_x * BLOCK;
    let h = blocks_y * BLOCK;
    let mut data = vec![0.0; w * h];
    let mut labels = vec![0u32; w * h];
    for (i, (block, cells)) in parts.iter().enumerate() {
        let (bx, by) = (i % blocks_x, i / blocks_x);
        for r in 0..BLOCK {
            let row = (by * BLOCK + r) * w + bx * BLOCK;
            for c in 0..BLOCK {
                data[row + c] = block[r][c];
                labels[row + c] = cells[r][c] as u32;
            }
        }
    }
    (
        GrayImage::from_vec(w, h, data).expect("dimensions match"),
        LabelMap::from_vec(w, h, labels).expect("dimensions match"),
    )
}

fn block_indices(blocks_x: usize, blocks_y: usize) -> impl IndexedParallelIterator<Item = (usize, usize)> {
    (0..blocks_x * blocks_y)
        .into_par_iter()
        .map(move |i| (i % blocks_x, i / blocks_x))
}

/// Square-pixel baseline: each 6×6 block replaced by its mean, labels all 0.
pub fn scan_square(img: &GrayImage) -> Result<ScanResult> {
    let (blocks_x, blocks_y) = check_block_multiple(img)?;
    let single = [[0u8; BLOCK]; BLOCK];
    let parts: Vec<(Block, Cells)> = block_indices(blocks_x, blocks_y)
        .map(|(bx, by)| (apply_partition(&extract_block(img, bx, by), &single).0, single))
        .collect();
    let (image, labels) = assemble(blocks_x, blocks_y, &parts);
    Ok(ScanResult {
        image,
        labels,
        chosen_masks: Vec::new(),
        blocks_x,
        blocks_y,
    })
}

/// Scan every block with the same mask.
pub fn scan_uniform(img: &GrayImage, mask: &Mask) -> Result<ScanResult> {
    let (blocks_x, blocks_y) = check_block_multiple(img)?;
    let parts: Vec<(Block, Cells)> = block_indices(blocks_x, blocks_y)
        .map(|(bx, by)| (apply_mask_to_block(&extract_block(img, bx, by), mask).0, *mask.cells()))
        .collect();
    let (image, labels) = assemble(blocks_x, blocks_y, &parts);
    Ok(ScanResult {
        image,
        labels,
        chosen_masks: Vec::new(),
        blocks_x,
        blocks_y,
    })
}

/// Run one uniform scan per mask, then keep, for every block, the block from
/// the scan whose mask `select_mask` picks.
pub fn scan_parallel_fused(
    img: &GrayImage,
    set: &MaskSet,
    criterion: SelectionCriterion,
) -> Result<ScanResult> {
    let (blocks_x, blocks_y) = check_block_multiple(img)?;
    if set.is_empty() {
        return Err(Error::Parameter("mask set is empty".into()));
    }
    let scans = set
        .masks()
        .par_iter()
        .map(|m| scan_uniform(img, m))
        .collect::<Result<Vec<_>>>()?;

    let chosen_masks: Vec<usize> = block_indices(blocks_x, blocks_y)
        .map(|(bx, by)| select_mask(&extract_block(img, bx, by), set, criterion).0)
        .collect();

    let parts: Vec<(Block, Cells)> = chosen_masks
        .iter()
        .enumerate()
        .map(|(i, &winner)| {
            let (bx, by) = (i % blocks_x, i / blocks_x);
            (extract_block(&scans[winner].image, bx, by), *set.masks()[winner].cells())
        })
        .collect();
    let (image, labels) = assemble(blocks_x, blocks_y, &parts);
    Ok(ScanResult {
        image,
        labels,
        chosen_masks,
        blocks_x,
        blocks_y,
    })
}

/// Pad, scan, and crop back to the input size. `set = None` gives the square scan.
pub fn scan_image(
    img: &GrayImage,
    set: Option<&MaskSet>,
    criterion: SelectionCriterion,
) -> Result<ScanResult> {
    let padded = pad_to_block_multiple(img);
    let scan = match set {
        Some(set) => scan_parallel_fused(&padded, set, criterion)?,
        None => scan_square(&padded)?,
    };
    scan.crop(img.width(), img.height())
}

/// Sum of squared errors of the square (single-region) representation.
pub fn square_recon_error(block: &Block) -> f64 {
    apply_partition(block, &[[0; BLOCK]; BLOCK]).1
}

pub fn block_mean(block: &Block) -> f64 {
    block.iter().flatten().sum::<f64>() / CELLS as f64
}
