//! Command-line front end: `estimate`, `bench`, `stats` and `ideal`.
//!
//! Configuration precedence is flags over the optional JSON config file
//! over the defaults (16x16 blocks, +/-7 window, MAD). Every subcommand is
//! deterministic for fixed inputs and flags; the only randomness is the
//! seeded noise generator. Diagnostics go to stderr and the exit status is
//! nonzero unless all requested outputs were written.

use crate::error::{Error, Result};
use crate::eval::{nsp_ordering_holds, report_cost, run_benchmark};
use crate::frame::{CostKind, Frame, MotionVector, SearchConfig};
use crate::idealsim::{
    ansp, compare_with_reference, default_ring_partition, nsp_map, AnspWeights, RegionSpec,
};
use crate::ingest::{RawFormat, SequenceSource, SynthKind};
use crate::mvstats::{
    collect_conditional_samples, marginals, mv_histogram, normal_fit, posterior_conditional,
    prior_conditional, quarter_fold, regional_probs, ProbabilityTable,
};
use crate::patterns::{pattern_offsets, PatternKind};
use crate::reference_stats::{first_step_patterns, fixture_quarter, fixture_table};
use crate::search::{estimate_frame, estimate_frame_outcomes, with_threads, Algorithm};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "blockmatch",
    version,
    about = "Block-matching motion estimation: searches, statistics, ideal-surface simulation and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate one frame's motion field and dump per-block vectors.
    Estimate(EstimateArgs),
    /// Frame-by-frame comparison of algorithms against the full-search oracle.
    Bench(BenchArgs),
    /// Motion-vector probability statistics from full-search fields.
    Stats(StatsArgs),
    /// Ideal-surface search-point maps, averages and first-step efficiencies.
    Ideal(IdealArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Y4M input file.
    #[arg(long, value_name = "PATH")]
    y4m: Option<PathBuf>,
    /// Headerless planar YUV input file (requires --size).
    #[arg(long, value_name = "PATH")]
    raw: Option<PathBuf>,
    /// Frame size WxH for --raw and --synth.
    #[arg(long, value_name = "WxH")]
    size: Option<String>,
    /// Raw plane layout: 420 or y.
    #[arg(long, value_name = "FMT", default_value = "420")]
    fmt: String,
    /// Synthetic input: static | translate:DX,DY | noise.
    #[arg(long, value_name = "KIND")]
    synth: Option<String>,
    /// Synthetic frame count.
    #[arg(long, value_name = "N", default_value_t = 10)]
    frames: usize,
    /// Seed for the synthetic noise generator.
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
    /// Crop frames to the largest block-size multiple instead of rejecting.
    #[arg(long)]
    crop: bool,
}

#[derive(Args)]
struct ConfigArgs {
    /// Block size in pixels.
    #[arg(long, value_name = "N")]
    block: Option<usize>,
    /// Search range (half window) in pixels.
    #[arg(long, value_name = "N")]
    range: Option<i32>,
    /// Block distortion measure: mad or mse.
    #[arg(long, value_name = "KIND")]
    cost: Option<String>,
    /// Worker thread bound (0 = library default); results are identical for
    /// any value.
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
    /// Optional JSON config file ({"block":16,"range":7,"cost":"mad","threads":0}).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    config: ConfigArgs,
    /// Algorithm id.
    #[arg(long, default_value = "dcds")]
    alg: String,
    /// Index of the frame to estimate (its reference is the frame before).
    #[arg(long, default_value_t = 1)]
    frame: usize,
    /// Output CSV path (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Write the per-block step traces to this JSON file.
    #[arg(long, value_name = "PATH")]
    dump_trace: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    config: ConfigArgs,
    /// Comma-separated algorithm ids (default: the full suite).
    #[arg(long, value_name = "LIST")]
    alg: Option<String>,
    /// Output CSV path (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    config: ConfigArgs,
    /// Output directory for the table files.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Conditional distribution to compute: prior or posterior.
    #[arg(long, value_name = "MODE")]
    conditional: Option<String>,
    /// First-step point set: a pattern name (hcsp, cds-step1, cross5,
    /// square3, diamond-large, diamond-small, hex-h, hex-v) or
    /// offsets:DX,DY;DX,DY;...
    #[arg(long = "S", value_name = "SET", default_value = "cds-step1")]
    s_set: String,
    /// Prior condition: the step-1 best point, as DX,DY.
    #[arg(long, value_name = "DX,DY")]
    at: Option<String>,
    /// Posterior condition: true-vector region, as X0..X1,Y0..Y1 or DX,DY.
    #[arg(long = "in", value_name = "REGION")]
    region: Option<String>,
}

#[derive(Args)]
struct IdealArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Comma-separated algorithm ids to map.
    #[arg(long, default_value = "dcds")]
    alg: String,
    /// Emit the full-window map instead of the quarter window.
    #[arg(long)]
    full: bool,
    /// Output path: file for one algorithm, directory for several (stdout
    /// when omitted and a single algorithm is mapped).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Report the distribution-weighted average number of search points.
    #[arg(long)]
    ansp: bool,
    /// ANSP weights: uniform | fixture | a full-table JSON path.
    #[arg(long, value_name = "SPEC", default_value = "fixture")]
    weights: String,
    /// Region-file weighting: default | a region JSON path.
    #[arg(long, value_name = "PATH")]
    regions: Option<String>,
    /// Override the per-region masses (comma-separated, region order).
    #[arg(long, value_name = "LIST")]
    masses: Option<String>,
    /// Print the first-step search-efficiency table instead of maps.
    #[arg(long)]
    eta: bool,
    /// Distribution table for --eta: fixture | a full-table JSON path.
    #[arg(long, value_name = "SPEC", default_value = "fixture")]
    table: String,
}

#[derive(Deserialize, Default)]
struct FileConfig {
    block: Option<usize>,
    range: Option<i32>,
    cost: Option<CostKind>,
    threads: Option<usize>,
}

fn resolve_config(args: &ConfigArgs) -> Result<(SearchConfig, usize)> {
    let file: FileConfig = match &args.config {
        Some(path) => serde_json::from_reader(File::open(path)?)?,
        None => FileConfig::default(),
    };
    let cost_kind = match args.cost.as_deref() {
        Some("mad") => CostKind::Mad,
        Some("mse") => CostKind::Mse,
        Some(other) => {
            return Err(Error::InvalidArgument(format!(
                "unknown cost kind '{other}' (expected mad or mse)"
            )))
        }
        None => file.cost.unwrap_or_default(),
    };
    let cfg = SearchConfig {
        block_size: args.block.or(file.block).unwrap_or(16),
        search_range: args.range.or(file.range).unwrap_or(7),
        cost_kind,
    };
    cfg.validate()?;
    Ok((cfg, args.threads.or(file.threads).unwrap_or(0)))
}

fn parse_size(s: &str) -> Result<(usize, usize)> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::InvalidArgument(format!("bad size '{s}', expected WxH")))?;
    let parse = |v: &str| {
        v.parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("bad size '{s}', expected WxH")))
    };
    Ok((parse(w)?, parse(h)?))
}

fn parse_mv(s: &str) -> Result<MotionVector> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| Error::InvalidArgument(format!("bad vector '{s}', expected DX,DY")))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<i32>()
            .map_err(|_| Error::InvalidArgument(format!("bad vector '{s}', expected DX,DY")))
    };
    Ok(MotionVector::new(parse(x)?, parse(y)?))
}

fn resolve_source(input: &InputArgs) -> Result<SequenceSource> {
    let picked = [
        input.y4m.is_some(),
        input.raw.is_some(),
        input.synth.is_some(),
    ]
    .iter()
    .filter(|b| **b)
    .count();
    if picked != 1 {
        return Err(Error::InvalidArgument(
            "exactly one of --y4m, --raw, --synth is required".into(),
        ));
    }
    if let Some(path) = &input.y4m {
        return Ok(SequenceSource::Y4m { path: path.clone() });
    }
    let (width, height) = parse_size(input.size.as_deref().ok_or_else(|| {
        Error::InvalidArgument("--size WxH is required for --raw and --synth".into())
    })?)?;
    if let Some(path) = &input.raw {
        let format = match input.fmt.as_str() {
            "420" => RawFormat::Yuv420,
            "y" => RawFormat::YOnly,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown raw format '{other}' (expected 420 or y)"
                )))
            }
        };
        return Ok(SequenceSource::Raw {
            path: path.clone(),
            width,
            height,
            format,
        });
    }
    let kind = match input.synth.as_deref().unwrap() {
        "static" => SynthKind::Static,
        "noise" => SynthKind::Noise(input.seed),
        other => match other.strip_prefix("translate:") {
            Some(rest) => {
                let mv = parse_mv(rest)?;
                SynthKind::Translate(mv.dx, mv.dy)
            }
            None => {
                return Err(Error::InvalidArgument(format!(
                    "unknown synth kind '{other}' (static | translate:DX,DY | noise)"
                )))
            }
        },
    };
    Ok(SequenceSource::Synth {
        kind,
        width,
        height,
        frames: input.frames,
    })
}

/// Opens the input as a frame-at-a-time stream, applying --crop per frame
/// when requested; long sequences never reside in memory whole.
fn frames_of(input: &InputArgs, cfg: &SearchConfig) -> Result<impl Iterator<Item = Result<Frame>>> {
    let source = resolve_source(input)?;
    let crop = input.crop;
    let block_size = cfg.block_size;
    Ok(source.open()?.map(move |frame| {
        let frame = frame?;
        if crop {
            frame.crop_to_multiple(block_size)
        } else {
            Ok(frame)
        }
    }))
}

/// Consecutive `(reference, current)` frame pairs of a stream.
struct FramePairs<I: Iterator<Item = Result<Frame>>> {
    inner: I,
    prev: Option<Frame>,
}

impl<I: Iterator<Item = Result<Frame>>> FramePairs<I> {
    fn new(inner: I) -> Self {
        Self { inner, prev: None }
    }
}

impl<I: Iterator<Item = Result<Frame>>> Iterator for FramePairs<I> {
    type Item = Result<(Frame, Frame)>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let frame = match self.inner.next()? {
                Ok(f) => f,
                Err(e) => return Some(Err(e)),
            };
            match self.prev.replace(frame.clone()) {
                Some(reference) => return Some(Ok((reference, frame))),
                None => continue,
            }
        }
    }
}

fn parse_alg_list(list: &str) -> Result<Vec<Algorithm>> {
    list.split(',')
        .map(|s| Algorithm::parse(s.trim()))
        .collect()
}

fn named_point_set(name: &str) -> Result<Vec<MotionVector>> {
    let kind = match name {
        "hcsp" => PatternKind::Hcsp,
        "cds-step1" | "cross5" => PatternKind::Cross5,
        "square3" => PatternKind::Square3,
        "diamond-large" => PatternKind::DiamondLarge,
        "diamond-small" => PatternKind::DiamondSmall,
        "hex-h" => PatternKind::HexH,
        "hex-v" => PatternKind::HexV,
        other => {
            if let Some(rest) = other.strip_prefix("offsets:") {
                return rest.split(';').map(parse_mv).collect();
            }
            return Err(Error::InvalidArgument(format!(
                "unknown point set '{other}'"
            )));
        }
    };
    Ok(pattern_offsets(kind).iter().map(|p| p.offset).collect())
}

fn parse_region(spec: &str, range: i32) -> Result<Vec<MotionVector>> {
    if let Some((xs, ys)) = spec.split_once(',') {
        if let (Some((x0, x1)), Some((y0, y1))) = (xs.split_once(".."), ys.split_once("..")) {
            let p = |v: &str| {
                v.trim()
                    .parse::<i32>()
                    .map_err(|_| Error::InvalidArgument(format!("bad region '{spec}'")))
            };
            let (x0, x1, y0, y1) = (p(x0)?, p(x1)?, p(y0)?, p(y1)?);
            let mut cells = Vec::new();
            for dy in y0.min(y1)..=y0.max(y1) {
                for dx in x0.min(x1)..=x0.max(x1) {
                    if crate::frame::in_window(MotionVector::new(dx, dy), range) {
                        cells.push(MotionVector::new(dx, dy));
                    }
                }
            }
            return Ok(cells);
        }
        return Ok(vec![parse_mv(spec)?]);
    }
    Err(Error::InvalidArgument(format!(
        "bad region '{spec}', expected X0..X1,Y0..Y1 or DX,DY"
    )))
}

enum Output {
    Stdout(std::io::Stdout),
    File(BufWriter<File>),
}

impl Output {
    fn create(path: Option<&Path>) -> Result<Self> {
        Ok(match path {
            Some(p) => Output::File(BufWriter::new(File::create(p)?)),
            None => Output::Stdout(std::io::stdout()),
        })
    }
}

impl Write for Output {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        match self {
            Output::Stdout(s) => s.write(buf),
            Output::File(f) => f.write(buf),
        }
    }

    fn flush(&mut self) -> std::io::Result<()> {
        match self {
            Output::Stdout(s) => s.flush(),
            Output::File(f) => f.flush(),
        }
    }
}

fn cmd_estimate(args: &EstimateArgs) -> Result<()> {
    let (cfg, threads) = resolve_config(&args.config)?;
    let alg = Algorithm::parse(&args.alg)?;
    if args.frame == 0 {
        return Err(Error::InvalidArgument(
            "--frame 0 has no reference; pick a later frame".into(),
        ));
    }
    let pair = FramePairs::new(frames_of(&args.input, &cfg)?)
        .nth(args.frame - 1)
        .transpose()?
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "--frame {} out of range (the input ends earlier)",
                args.frame
            ))
        })?;
    let (reference, current) = (&pair.0, &pair.1);
    let outcomes = with_threads(threads, || {
        estimate_frame_outcomes(alg, current, reference, &cfg)
    })?;

    let cols = current.width() / cfg.block_size;
    let mut out = Output::create(args.out.as_deref())?;
    writeln!(out, "block_col,block_row,dx,dy,cost,nsp")?;
    for (i, o) in outcomes.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{:.6},{}",
            i % cols,
            i / cols,
            o.mv.dx,
            o.mv.dy,
            report_cost(o.final_cost, &cfg),
            o.nsp
        )?;
    }
    out.flush()?;

    if let Some(path) = &args.dump_trace {
        let traces: Vec<_> = outcomes
            .iter()
            .enumerate()
            .map(|(i, o)| {
                serde_json::json!({
                    "block_col": i % cols,
                    "block_row": i / cols,
                    "mv": o.mv,
                    "nsp": o.nsp,
                    "steps": o.trace,
                })
            })
            .collect();
        serde_json::to_writer_pretty(BufWriter::new(File::create(path)?), &traces)?;
    }

    let mean_cost = outcomes
        .iter()
        .map(|o| report_cost(o.final_cost, &cfg))
        .sum::<f64>()
        / outcomes.len() as f64;
    let mean_nsp = outcomes.iter().map(|o| o.nsp as f64).sum::<f64>() / outcomes.len() as f64;
    let summary = format!(
        "estimate alg={alg} frame={} blocks={} mean_cost={mean_cost:.6} mean_nsp={mean_nsp:.6}",
        args.frame,
        outcomes.len()
    );
    if args.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let (cfg, threads) = resolve_config(&args.config)?;
    let algs = match &args.alg {
        Some(list) => parse_alg_list(list)?,
        None => Algorithm::ALL.to_vec(),
    };
    let frames = frames_of(&args.input, &cfg)?;
    let report = with_threads(threads, || run_benchmark(frames, &algs, &cfg))?;
    let mut out = Output::create(args.out.as_deref())?;
    report.write_csv(&mut out)?;
    out.flush()?;

    match nsp_ordering_holds(&report) {
        Some(true) => eprintln!(
            "note: mean NSP ordering dcds < cds < full window holds ({:.3} < {:.3} < {})",
            report.mean_nsp(Algorithm::Dcds).unwrap(),
            report.mean_nsp(Algorithm::Cds).unwrap(),
            (2 * cfg.search_range + 1).pow(2)
        ),
        Some(false) => eprintln!(
            "warning: expected mean NSP ordering dcds < cds < full window does not hold ({:.3} vs {:.3})",
            report.mean_nsp(Algorithm::Dcds).unwrap(),
            report.mean_nsp(Algorithm::Cds).unwrap(),
        ),
        None => {}
    }
    Ok(())
}

fn write_file(
    dir: &Path,
    name: &str,
    body: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(dir.join(name))?);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

fn cmd_stats(args: &StatsArgs) -> Result<()> {
    let (cfg, threads) = resolve_config(&args.config)?;
    std::fs::create_dir_all(&args.out)?;

    let (fields, samples) = with_threads(threads, || -> Result<_> {
        let mut fields = Vec::new();
        let mut samples = Vec::new();
        let s_points = named_point_set(&args.s_set)?;
        for pair in FramePairs::new(frames_of(&args.input, &cfg)?) {
            let (reference, current) = pair?;
            fields.push(estimate_frame(Algorithm::Fs, &current, &reference, &cfg)?);
            if args.conditional.is_some() {
                samples.extend(collect_conditional_samples(
                    &current, &reference, &cfg, &s_points,
                )?);
            }
        }
        Ok((fields, samples))
    })?;
    if fields.is_empty() {
        return Err(Error::EmptyInput(
            "statistics need at least two frames".into(),
        ));
    }

    let table = mv_histogram(&fields, cfg.search_range)?;
    write_file(&args.out, "full.csv", |w| table.write_csv(w))?;
    write_file(&args.out, "full.json", |w| table.write_json(w))?;
    write_file(&args.out, "quarter.csv", |w| {
        quarter_fold(&table).write_csv(w)
    })?;
    let m = marginals(&table);
    write_file(&args.out, "marginals.csv", |w| m.write_csv(w))?;
    let p = regional_probs(&table)?;
    write_file(&args.out, "regional.csv", |w| {
        writeln!(w, "region,probability")?;
        writeln!(w, "square5,{:.6}", p.sq5)?;
        writeln!(w, "diamond5,{:.6}", p.diamond5)?;
        writeln!(w, "cross5,{:.6}", p.cross5)?;
        writeln!(w, "square3,{:.6}", p.sq3)?;
        writeln!(w, "flat-diamond,{:.6}", p.flat)?;
        Ok(())
    })?;
    write_file(&args.out, "fits.csv", |w| {
        writeln!(w, "marginal,mu,sigma,residual")?;
        for (name, data) in [("ax", &m.ax), ("ay", &m.ay)] {
            let fit = normal_fit(data)?;
            writeln!(
                w,
                "{name},{:.6},{:.6},{:.9}",
                fit.mu, fit.sigma, fit.residual
            )?;
        }
        Ok(())
    })?;

    if let Some(mode) = &args.conditional {
        let result = match mode.as_str() {
            "prior" => {
                let at = parse_mv(args.at.as_deref().ok_or_else(|| {
                    Error::InvalidArgument("--at DX,DY is required for --conditional prior".into())
                })?)?;
                prior_conditional(&samples, cfg.search_range, at)
            }
            "posterior" => {
                let spec = args.region.as_deref().ok_or_else(|| {
                    Error::InvalidArgument(
                        "--in REGION is required for --conditional posterior".into(),
                    )
                })?;
                let region = parse_region(spec, cfg.search_range)?;
                posterior_conditional(&samples, cfg.search_range, &region)
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown conditional mode '{other}' (prior | posterior)"
                )))
            }
        };
        match result {
            Ok(cond) => write_file(&args.out, "conditional.csv", |w| cond.write_csv(w))?,
            Err(Error::EmptyCondition(msg)) => {
                eprintln!("warning: {msg}; writing an empty conditional table");
                write_file(&args.out, "conditional.csv", |w| {
                    let side = 2 * cfg.search_range + 1;
                    let row = vec!["0.000000"; side as usize].join(",");
                    for _ in 0..side {
                        writeln!(w, "{row}")?;
                    }
                    Ok(())
                })?;
            }
            Err(e) => return Err(e),
        }
    }
    eprintln!(
        "stats: wrote tables for {} frame pairs to {}",
        fields.len(),
        args.out.display()
    );
    Ok(())
}

fn load_table(spec: &str) -> Result<ProbabilityTable> {
    match spec {
        "fixture" => Ok(fixture_table()),
        path => ProbabilityTable::from_json_reader(File::open(path)?),
    }
}

fn cmd_ideal(args: &IdealArgs) -> Result<()> {
    let (cfg, threads) = resolve_config(&args.config)?;
    let range = cfg.search_range;

    if args.eta {
        let table = load_table(&args.table)?;
        let mut out = Output::create(args.out.as_deref())?;
        writeln!(out, "pattern,points,mass,eta")?;
        for (name, pattern) in first_step_patterns() {
            let mass = table.mass_over(&pattern);
            let eta = mass / pattern.len() as f64;
            writeln!(out, "{name},{},{:.6},{:.6}", pattern.len(), mass, eta)?;
        }
        out.flush()?;
        return Ok(());
    }

    let algs = parse_alg_list(&args.alg)?;
    let maps = with_threads(threads, || {
        algs.iter()
            .map(|&alg| nsp_map(alg, range, !args.full))
            .collect::<Vec<_>>()
    });

    if args.ansp {
        let region_spec = match args.regions.as_deref() {
            Some("default") => Some(default_ring_partition(range)),
            Some(path) => Some(RegionSpec::from_json_reader(File::open(path)?)?),
            None => None,
        };
        let region_spec = match (region_spec, &args.masses) {
            (Some(mut spec), Some(list)) => {
                let masses: Vec<f64> = list
                    .split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::InvalidArgument(format!("bad mass '{v}'")))
                    })
                    .collect::<Result<_>>()?;
                if masses.len() != spec.regions.len() {
                    return Err(Error::RegionFile(format!(
                        "{} masses given for {} regions",
                        masses.len(),
                        spec.regions.len()
                    )));
                }
                for (region, mass) in spec.regions.iter_mut().zip(masses) {
                    region.mass = mass;
                }
                Some(spec)
            }
            (spec, _) => spec,
        };

        let quarter = fixture_quarter();
        let table = match (&region_spec, args.weights.as_str()) {
            (None, "uniform") | (None, "fixture") | (Some(_), _) => None,
            (None, path) => Some(load_table(path)?),
        };
        let mut out = Output::create(args.out.as_deref())?;
        writeln!(out, "algorithm,weights,ansp")?;
        for map in &maps {
            let (weights, label) = match (&region_spec, args.weights.as_str()) {
                (Some(spec), _) => (AnspWeights::Regions(spec), "regions"),
                (None, "uniform") => (AnspWeights::Uniform, "uniform"),
                (None, "fixture") => (AnspWeights::Quarter(&quarter), "fixture"),
                (None, path) => (AnspWeights::Table(table.as_ref().unwrap()), path),
            };
            writeln!(out, "{},{label},{:.6}", map.alg, ansp(map, weights)?)?;
        }
        out.flush()?;
        return Ok(());
    }

    // Map emission: one CSV per algorithm.
    if maps.len() > 1 {
        let dir = args.out.as_deref().ok_or_else(|| {
            Error::InvalidArgument("--out DIR is required when mapping several algorithms".into())
        })?;
        std::fs::create_dir_all(dir)?;
        for map in &maps {
            write_file(dir, &format!("{}.csv", map.alg), |w| map.write_csv(w))?;
            report_map(map);
        }
    } else {
        let map = &maps[0];
        let mut out = Output::create(args.out.as_deref())?;
        map.write_csv(&mut out)?;
        out.flush()?;
        report_map(map);
    }
    Ok(())
}

/// stderr report of convergence misses, reflection asymmetries and
/// reference-table differences.
fn report_map(map: &crate::idealsim::NspMap) {
    let misses = map.misses();
    if !misses.is_empty() {
        eprintln!(
            "note: {} of {} placements not recovered exactly by {}:",
            misses.len(),
            map.counts.len(),
            map.alg
        );
        for (truth, got) in misses {
            eprintln!("  true {truth} -> found {got}");
        }
    }
    if let Some(asym) = map.axis_asymmetries() {
        if !asym.is_empty() {
            eprintln!(
                "note: {} map breaks axis-reflection symmetry at {} positions (tie-order effects)",
                map.alg,
                asym.len()
            );
        }
    }
    if let Some(diffs) = compare_with_reference(map) {
        if diffs.is_empty() {
            eprintln!("note: {} map matches the reference table exactly", map.alg);
        } else {
            eprintln!(
                "note: {} map differs from the reference table at {} tie-sensitive entries:",
                map.alg,
                diffs.len()
            );
            for (dx, dy, ours, want) in diffs {
                eprintln!("  ({dx},{dy}): {ours} here, {want} in the reference");
            }
        }
    }
}

/// Parses argv and runs the selected subcommand; returns the process exit
/// status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message (help/version go to stdout).
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Estimate(args) => cmd_estimate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Ideal(args) => cmd_ideal(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
