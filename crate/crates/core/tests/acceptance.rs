//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Criterion 5 and 6 run on the ten standard test images when
//! `VARPIX_STANDARD_IMAGES` names a directory holding them as PGM files, and
//! on the five synthetic fixtures otherwise.

mod common;

use std::path::PathBuf;
use std::time::Instant;

use common::{naive_adaptive, random_image, random_labels, TestRng};
use varpix::fixtures::synthetic_fixtures;
use varpix::metrics::psnr_from_mse;
use varpix::noiselab::{Noise, NoiseKind, NoiseSpec, DEFAULT_SEED};
use varpix::pipeline::{evaluate_image, load_inputs, NamedImage, Pipeline, PipelineConfig};
use varpix::scanner::{extract_block, square_recon_error, block_mean};
use varpix::{
    adaptive_filter, add_gaussian, add_salt_pepper, add_speckle, apply_mask_to_block, box_filter,
    builtin_masks, metrics, scan_parallel_fused, select_mask, GrayImage, LabelMap, LabelScope,
    SelectionCriterion, Statistic,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn masks_suite() -> Outcome {
    let set = builtin_masks();
    let mut distinct = true;
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            distinct &= set.masks()[i].cells() != set.masks()[j].cells();
        }
    }
    let split = set.iter().all(|m| {
        let [a, b] = m.region_sizes();
        a + b == 36 && [a.min(b), a.max(b)] == [15, 21]
    });
    let connected = set.iter().all(|m| m.regions_connected());
    let orbit = set.iter().all(|m| m.rotate90().rotate90().rotate90().rotate90().cells() == m.cells());
    outcome(
        set.len() == 8 && distinct && split && connected && orbit,
        format!(
            "{} masks, distinct={distinct}, 15/21 split={split}, connected={connected}, rot^4=id={orbit}",
            set.len()
        ),
    )
}

fn scanner_oracle() -> Outcome {
    let start = Instant::now();
    let set = builtin_masks();
    let mut rng = TestRng::new(2024);
    let (mut equal, mut blocks, mut refined, mut max_mean_dev) = (true, 0usize, 0usize, 0.0f64);
    for _ in 0..10 {
        let img = random_image(&mut rng, 60, 60);
        let fused = scan_parallel_fused(&img, &set, SelectionCriterion::MinReconError).unwrap();
        for by in 0..10 {
            for bx in 0..10 {
                let block = extract_block(&img, bx, by);
                let (idx, err) = select_mask(&block, &set, SelectionCriterion::MinReconError);
                let (direct, _) = apply_mask_to_block(&block, &set.masks()[idx]);
                equal &= extract_block(&fused.image, bx, by) == direct;
                equal &= fused.chosen_masks[by * 10 + bx] == idx;
                blocks += 1;
                if err <= square_recon_error(&block) {
                    refined += 1;
                }
                max_mean_dev = max_mean_dev.max((block_mean(&direct) - block_mean(&block)).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        equal && refined == blocks && max_mean_dev <= 1e-9 && elapsed.as_secs_f64() < 1.0,
        format!(
            "fused==direct {equal}, refinement {refined}/{blocks}, max block-mean drift {max_mean_dev:.2e}, {:.0} ms",
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn filter_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = TestRng::new(77);
    let mut cases = 0;
    let mut mismatches = 0;
    for _ in 0..10 {
        let img = random_image(&mut rng, 64, 64);
        let labels = random_labels(&mut rng, 64, 64, 2);
        for k in [1, 3, 5, 7] {
            for stat in Statistic::ALL {
                for (scope, block) in [(LabelScope::Literal, false), (LabelScope::Block, true)] {
                    let fast = adaptive_filter(&img, &labels, k, stat, scope).unwrap();
                    let slow = naive_adaptive(&img, &labels, k, stat, block);
                    cases += 1;
                    if fast.as_slice() != slow.as_slice() {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    outcome(
        mismatches == 0,
        format!(
            "{}/{cases} configurations bit-identical to the reference, {:.2} s",
            cases - mismatches,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn degenerate_equivalences() -> Outcome {
    let mut rng = TestRng::new(99);
    let img = random_image(&mut rng, 40, 30);
    let uniform = LabelMap::uniform(40, 30, 1);
    let mut box_eq = true;
    let mut identity = true;
    for stat in Statistic::ALL {
        for k in [3, 5, 7] {
            box_eq &= adaptive_filter(&img, &uniform, k, stat, LabelScope::Literal).unwrap()
                == box_filter(&img, k, stat).unwrap();
        }
        let labels = random_labels(&mut rng, 40, 30, 2);
        for scope in [LabelScope::Literal, LabelScope::Block] {
            identity &= adaptive_filter(&img, &labels, 1, stat, scope).unwrap() == img;
        }
        identity &= box_filter(&img, 1, stat).unwrap() == img;
    }

    let flat = GrayImage::filled(50, 44, 123.0);
    let cfg = PipelineConfig {
        noises: vec![
            NoiseSpec::new(Noise::SaltPepper { density: 0.0 }, 1),
            NoiseSpec::new(Noise::Gaussian { sigma: 0.0 }, 1),
            NoiseSpec::new(Noise::Speckle { variance: 0.0 }, 1),
        ],
        kernels: vec![1, 3, 5, 7],
        ..PipelineConfig::default()
    };
    let mut constant = true;
    for scope in [LabelScope::Literal, LabelScope::Block] {
        let rows = evaluate_image("flat", &flat, &PipelineConfig { scope, ..cfg.clone() }).unwrap();
        constant &= rows.iter().all(|r| r.psnr_db.is_infinite());
    }
    outcome(
        box_eq && identity && constant,
        format!("uniform labels==box {box_eq}, k=1 identity {identity}, constant image infinite PSNR {constant}"),
    )
}

fn standard_images() -> Option<Vec<NamedImage>> {
    let dir = PathBuf::from(std::env::var_os("VARPIX_STANDARD_IMAGES")?);
    let images = load_inputs(&[dir]).ok()?;
    (images.len() >= 10).then_some(images)
}

fn evaluation_set() -> (Vec<NamedImage>, usize, &'static str) {
    match standard_images() {
        Some(images) => {
            let n = images.len();
            (images, (n * 8).div_ceil(10), "standard images")
        }
        None => (synthetic_fixtures(), 4, "synthetic fixtures"),
    }
}

fn psnr_of(rows: &[varpix::PsnrRow], noise: NoiseKind, kernel: usize, pipeline: Pipeline) -> f64 {
    rows.iter()
        .find(|r| r.noise == noise && r.kernel == kernel && r.pipeline == pipeline && r.statistic == Statistic::Mean)
        .expect("row present")
        .psnr_db
}

fn table_ordering(images: &[NamedImage], required: usize, label: &str) -> Outcome {
    let cfg = PipelineConfig {
        kernels: vec![5],
        statistics: vec![Statistic::Mean],
        ..PipelineConfig::default()
    };
    let mut pass = true;
    let mut parts = Vec::new();
    let results: Vec<_> = images
        .iter()
        .map(|im| evaluate_image(&im.name, &im.image, &cfg).unwrap())
        .collect();
    for noise in NoiseKind::ALL {
        let (mut full, mut var_over_square, mut adaptive_over_var) = (0, 0, 0);
        for rows in &results {
            let sq = psnr_of(rows, noise, 5, Pipeline::Square);
            let var = psnr_of(rows, noise, 5, Pipeline::Variable);
            let ad = psnr_of(rows, noise, 5, Pipeline::VariableAdaptive);
            var_over_square += (var > sq) as usize;
            adaptive_over_var += (ad > var) as usize;
            full += (ad > var && var > sq) as usize;
        }
        pass &= full >= required;
        parts.push(format!(
            "{noise} {full}/{n} (variable>square {var_over_square}, adaptive>variable {adaptive_over_var})",
            n = images.len()
        ));
    }
    outcome(pass, format!("{label}, need >= {required}: {}", parts.join("; ")))
}

fn kernel_size_claim(images: &[NamedImage], label: &str) -> Outcome {
    let cfg = PipelineConfig {
        kernels: vec![3, 7],
        statistics: vec![Statistic::Mean],
        ..PipelineConfig::default()
    };
    let results: Vec<_> = images
        .iter()
        .map(|im| evaluate_image(&im.name, &im.image, &cfg).unwrap())
        .collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for noise in NoiseKind::ALL {
        let mut wider = 0;
        for rows in &results {
            let gap = |k| {
                psnr_of(rows, noise, k, Pipeline::VariableAdaptive) - psnr_of(rows, noise, k, Pipeline::Variable)
            };
            wider += (gap(7) > gap(3)) as usize;
        }
        pass &= 2 * wider > images.len();
        parts.push(format!("{noise} {wider}/{}", images.len()));
    }
    outcome(pass, format!("{label}, gap(k=7) > gap(k=3): {}", parts.join("; ")))
}

fn noise_statistics() -> Outcome {
    let n = 512usize;
    let count = (n * n) as f64;
    let grey = GrayImage::filled(n, n, 128.0);
    let sp = add_salt_pepper(&grey, 0.05, DEFAULT_SEED).unwrap();
    let hits = sp.as_slice().iter().filter(|&&v| v != 128.0).count() as f64;
    let sigma = (count * 0.05 * 0.95).sqrt();
    let sp_ok = (hits - count * 0.05).abs() <= 4.0 * sigma;

    let g = add_gaussian(&grey, 10.0, DEFAULT_SEED).unwrap();
    let g_mean = g.as_slice().iter().sum::<f64>() / count;
    let g_ok = (g_mean - 128.0).abs() <= 4.0 * 10.0 / n as f64;

    let hundred = GrayImage::filled(n, n, 100.0);
    let s = add_speckle(&hundred, 0.04, DEFAULT_SEED).unwrap();
    let s_mean = s.as_slice().iter().sum::<f64>() / count;
    let s_sd = (s.as_slice().iter().map(|v| (v - s_mean).powi(2)).sum::<f64>() / (count - 1.0)).sqrt();
    let s_ok = (s_sd - 20.0).abs() <= 0.05 * 20.0;

    let det = add_salt_pepper(&grey, 0.05, DEFAULT_SEED).unwrap() == sp
        && add_gaussian(&grey, 10.0, DEFAULT_SEED).unwrap() == g
        && add_speckle(&hundred, 0.04, DEFAULT_SEED).unwrap() == s;
    outcome(
        sp_ok && g_ok && s_ok && det,
        format!(
            "s&p hits {hits} (expect {:.0} +/- {:.0}), gaussian mean {g_mean:.4}, speckle sd {s_sd:.3}, deterministic {det}",
            count * 0.05,
            4.0 * sigma
        ),
    )
}

fn metric_checks() -> Outcome {
    let peak = psnr_from_mse(1.0, 255.0);
    let mut rng = TestRng::new(4);
    let a = random_image(&mut rng, 16, 16);
    let b = random_image(&mut rng, 16, 16);
    let symmetric = metrics::psnr(&a, &b).unwrap() == metrics::psnr(&b, &a).unwrap();
    let zero = metrics::mse(&a, &a).unwrap() == 0.0;
    outcome(
        (peak - 48.1308).abs() <= 1e-3 && symmetric && zero,
        format!("psnr(mse=1) = {peak:.4} dB, symmetric {symmetric}, mse(a,a)=0 {zero}"),
    )
}

fn main() {
    let (images, required, label) = evaluation_set();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 mask suite", Box::new(masks_suite)),
        ("2 scanner oracle", Box::new(scanner_oracle)),
        ("3 adaptive filter oracle", Box::new(filter_oracle)),
        ("4 degenerate equivalences", Box::new(degenerate_equivalences)),
        ("5 table ordering", Box::new(|| table_ordering(&images, required, label))),
        ("6 kernel-size claim", Box::new(|| kernel_size_claim(&images, label))),
        ("7 noise statistics", Box::new(noise_statistics)),
        ("8 metrics", Box::new(metric_checks)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let result = check();
        if !result.pass {
            failed += 1;
        }
        println!(
            "[{}] criterion {name}: {}",
            if result.pass { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
