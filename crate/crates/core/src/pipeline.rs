//! End-to-end experiment: scan, add noise, filter, and score against the
//! clean original.
//!
//! For every image and noise model three pipelines are scored, each with the
//! mean and the median statistic at every requested kernel size:
//!
//! * `square`: 6×6 block-mean scan, box filter;
//! * `variable`: fused variable-pixel scan, box filter;
//! * `variable-adaptive`: fused variable-pixel scan, shape-adaptive filter.
//!
//! Both scans are computed on the edge-padded image and cropped back before
//! noise is added. The square and variable images receive noise from the same
//! seed. PSNR is always measured against the original input.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filters::{adaptive_filter, box_filter, check_kernel, LabelScope, Statistic};
use crate::image::GrayImage;
use crate::imageio::{read_pgm, write_image, write_labelmap};
use crate::maskkit::{builtin_masks, MaskSet};
use crate::metrics::{psnr, PsnrDisplay};
use crate::noiselab::{NoiseKind, NoiseSpec};
use crate::scanner::{scan_image, SelectionCriterion};

pub const CSV_HEADER: &str = "image,noise,pipeline,statistic,kernel,psnr_db";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pipeline {
    Square,
    Variable,
    VariableAdaptive,
}

impl Pipeline {
    pub const ALL: [Pipeline; 3] = [Pipeline::Square, Pipeline::Variable, Pipeline::VariableAdaptive];

    pub fn as_str(self) -> &'static str {
        match self {
            Pipeline::Square => "square",
            Pipeline::Variable => "variable",
            Pipeline::VariableAdaptive => "variable-adaptive",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pipeline {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "square" => Ok(Pipeline::Square),
            "variable" => Ok(Pipeline::Variable),
            "variable-adaptive" => Ok(Pipeline::VariableAdaptive),
            other => Err(format!("unknown pipeline {other:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DumpOptions {
    pub dir: PathBuf,
    /// Write lossless raw dumps instead of quantized PGM files.
    pub raw: bool,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub masks: MaskSet,
    pub criterion: SelectionCriterion,
    pub noises: Vec<NoiseSpec>,
    pub kernels: Vec<usize>,
    pub statistics: Vec<Statistic>,
    pub scope: LabelScope,
    pub dump: Option<DumpOptions>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            masks: builtin_masks(),
            criterion: SelectionCriterion::default(),
            noises: NoiseKind::ALL
                .iter()
                .map(|&k| NoiseSpec::new(crate::noiselab::Noise::default_for(k), crate::noiselab::DEFAULT_SEED))
                .collect(),
            kernels: vec![5],
            statistics: Statistic::ALL.to_vec(),
            scope: LabelScope::Literal,
            dump: None,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.noises.is_empty() {
            return Err(Error::Parameter("no noise model requested".into()));
        }
        if self.kernels.is_empty() || self.statistics.is_empty() {
            return Err(Error::Parameter("no filter requested".into()));
        }
        for &k in &self.kernels {
            check_kernel(k)?;
        }
        for n in &self.noises {
            n.noise.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsnrRow {
    pub image: String,
    pub noise: NoiseKind,
    pub pipeline: Pipeline,
    pub statistic: Statistic,
    pub kernel: usize,
    pub psnr_db: f64,
}

impl PsnrRow {
    fn sort_key(&self) -> (&str, NoiseKind, usize, Pipeline, Statistic) {
        (&self.image, self.noise, self.kernel, self.pipeline, self.statistic)
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.image,
            self.noise,
            self.pipeline,
            self.statistic,
            self.kernel,
            PsnrDisplay(self.psnr_db)
        )
    }
}

#[derive(Debug, Clone)]
pub struct NamedImage {
    pub name: String,
    pub image: GrayImage,
}

/// Load PGM inputs. Directories contribute every `*.pgm` inside, sorted by name.
pub fn load_inputs(paths: &[PathBuf]) -> Result<Vec<NamedImage>> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    if files.is_empty() {
        return Err(Error::Parameter("no input images".into()));
    }
    files
        .iter()
        .map(|f| {
            Ok(NamedImage {
                name: image_name(f),
                image: read_pgm(f)?,
            })
        })
        .collect()
}

pub fn image_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".to_string())
}

fn dump_path(dump: &DumpOptions, stem: &str) -> PathBuf {
    dump.dir
        .join(format!("{stem}.{}", if dump.raw { "raw" } else { "pgm" }))
}

/// Score one image under every configured noise model, kernel and statistic.
pub fn evaluate_image(name: &str, original: &GrayImage, cfg: &PipelineConfig) -> Result<Vec<PsnrRow>> {
    if original.width() == 0 || original.height() == 0 {
        return Err(Error::Dimension(format!("{name} is empty")));
    }
    let square = scan_image(original, None, cfg.criterion)?;
    let variable = scan_image(original, Some(&cfg.masks), cfg.criterion)?;

    if let Some(dump) = &cfg.dump {
        write_image(&square.image, dump_path(dump, &format!("{name}_square")), dump.raw)?;
        write_image(&variable.image, dump_path(dump, &format!("{name}_variable")), dump.raw)?;
        write_labelmap(&variable.labels, dump.dir.join(format!("{name}_labels.txt")))?;
    }

    let mut rows = Vec::new();
    for spec in &cfg.noises {
        let noise = spec.noise.kind();
        let noisy_square = spec.apply(&square.image)?;
        let noisy_variable = spec.apply(&variable.image)?;
        if let Some(dump) = &cfg.dump {
            write_image(&noisy_square, dump_path(dump, &format!("{name}_{noise}_square_noisy")), dump.raw)?;
            write_image(&noisy_variable, dump_path(dump, &format!("{name}_{noise}_variable_noisy")), dump.raw)?;
        }
        for &kernel in &cfg.kernels {
            for &statistic in &cfg.statistics {
                for pipeline in Pipeline::ALL {
                    let filtered = match pipeline {
                        Pipeline::Square => box_filter(&noisy_square, kernel, statistic)?,
                        Pipeline::Variable => box_filter(&noisy_variable, kernel, statistic)?,
                        Pipeline::VariableAdaptive => adaptive_filter(
                            &noisy_variable,
                            &variable.labels,
                            kernel,
                            statistic,
                            cfg.scope,
                        )?,
                    };
                    if let Some(dump) = &cfg.dump {
                        let stem = format!("{name}_{noise}_{pipeline}_{statistic}_k{kernel}");
                        write_image(&filtered, dump_path(dump, &stem), dump.raw)?;
                    }
                    rows.push(PsnrRow {
                        image: name.to_string(),
                        noise,
                        pipeline,
                        statistic,
                        kernel,
                        psnr_db: psnr(original, &filtered)?.psnr_db,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Score every image; rows come back sorted by image, noise, kernel,
/// pipeline and statistic.
pub fn run_pipeline(images: &[NamedImage], cfg: &PipelineConfig) -> Result<Vec<PsnrRow>> {
    cfg.validate()?;
    if images.is_empty() {
        return Err(Error::Parameter("no input images".into()));
    }
    if let Some(dump) = &cfg.dump {
        fs::create_dir_all(&dump.dir)?;
    }
    let per_image = images
        .par_iter()
        .map(|img| evaluate_image(&img.name, &img.image, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<PsnrRow> = per_image.into_iter().flatten().collect();
    rows.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(rows)
}

pub fn write_csv(rows: &[PsnrRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv())?;
    }
    Ok(())
}

pub fn csv_string(rows: &[PsnrRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}
