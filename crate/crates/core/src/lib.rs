//! Variable-shaped pixel imaging.
//!
//! Images are scanned in 6×6 blocks, either as square block means or as
//! "variable pixels": each block is split by a two-region mask (triangular or
//! rectangular, four orientations each) and every region is replaced by its
//! mean. The crate also simulates sensor noise, filters scanned images with a
//! plain box/median window or with a shape-adaptive window restricted to the
//! anchor pixel's region, and scores the results by PSNR.
//!
//! ```
//! use varpix::{builtin_masks, scan_image, adaptive_filter, psnr, GrayImage,
//!              LabelScope, SelectionCriterion, Statistic};
//!
//! let img = GrayImage::from_fn(24, 24, |x, y| if x > y { 200.0 } else { 40.0 });
//! let scan = scan_image(&img, Some(&builtin_masks()), SelectionCriterion::MinReconError).unwrap();
//! let smooth = adaptive_filter(&scan.image, &scan.labels, 5, Statistic::Mean, LabelScope::Literal).unwrap();
//! assert!(psnr(&img, &smooth).unwrap().psnr_db > 20.0);
//! ```

pub mod error;
pub mod filters;
pub mod fixtures;
pub mod image;
pub mod imageio;
pub mod maskkit;
pub mod metrics;
pub mod noiselab;
pub mod pipeline;
pub mod scanner;

/// Side length of a scan block and of every mask.
pub const BLOCK: usize = 6;

pub use error::{Error, Result};
pub use filters::{
    adaptive_filter, box_filter, median, FilterMode, FilterSpec, LabelScope, Statistic,
};
pub use image::{GrayImage, LabelMap};
pub use maskkit::{builtin_masks, load_masks, save_masks, Mask, MaskSet, ShapeKind};
pub use metrics::{mse, psnr, QualityReport};
pub use noiselab::{add_gaussian, add_salt_pepper, add_speckle, Noise, NoiseKind, NoiseSpec};
pub use pipeline::{run_pipeline, Pipeline, PipelineConfig, PsnrRow};
pub use scanner::{
    apply_mask_to_block, pad_to_block_multiple, scan_image, scan_parallel_fused, scan_square,
    scan_uniform, select_mask, ScanResult, SelectionCriterion,
};
