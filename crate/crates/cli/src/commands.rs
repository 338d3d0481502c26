use std::fs;
use std::io::Write;
use std::path::Path;

use quatcomp::mask::{sample_mask, Mask, MaskSpec};
use quatcomp::media::{assim, psnr, qtensor_to_rgb, rgb_to_qtensor, save_tensor, FrameSequence, Metrics};
use quatcomp::qtdct::{sparsity_profile, QtdctContext};
use quatcomp::solver::{solve, zero_filled, Observation, SolverConfig};
use quatcomp::{synth, Quaternion, TransformSpec};
use serde::Serialize;

use crate::args::{MetricsArgs, RecoverArgs, SparsityArgs, SynthArgs, SynthKind};
use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn load_frames(dir: &Path) -> Result<FrameSequence> {
    FrameSequence::load_dir(dir).map_err(|e| CliError::core(format!("reading {}", dir.display()), e))
}

fn save_frames(seq: &FrameSequence, dir: &Path) -> Result<()> {
    seq.save_dir(dir).map_err(|e| CliError::core(format!("writing {}", dir.display()), e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

/// Writes to `path`, or to standard output when there is none.
fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, contents),
        None => std::io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::io("writing standard output", e)),
    }
}

fn solver_config(args: &RecoverArgs) -> SolverConfig {
    let mut cfg = SolverConfig::new(args.variant.into());
    cfg.rank = args.rank_trunc;
    cfg.lambda = args.lambda;
    cfg.beta1 = args.beta1;
    if let Some(rho) = args.rho {
        cfg.rho = rho;
    }
    cfg.beta_max = args.beta_max;
    cfg.eps_inner = args.tol_inner;
    cfg.eps_outer = args.tol_outer;
    cfg.max_inner = args.max_inner as usize;
    cfg.max_outer = args.max_outer as usize;
    cfg.log_eps = args.log_eps;
    cfg.seed = args.seed;
    cfg
}

pub fn recover(args: &RecoverArgs) -> Result<()> {
    let cfg = solver_config(args);
    let truth = load_frames(&args.input)?;
    let t = rgb_to_qtensor(&truth);
    let dims = t.dims();
    cfg.validate(dims).map_err(|e| CliError::core("solver settings", e))?;

    let mask = match &args.mask_file {
        Some(path) => {
            let m = Mask::load(path).map_err(|e| CliError::core(format!("reading {}", path.display()), e))?;
            if m.dims() != dims {
                return Err(CliError::Flag {
                    flag: "--mask-file",
                    reason: format!("mask is {:?} but the frames are {dims:?}", m.dims()),
                });
            }
            m
        }
        None => {
            let spec = MaskSpec::new(args.sr, args.seed).map_err(|e| CliError::core("mask", e))?;
            sample_mask(dims, &spec)
        }
    };
    let obs =
        Observation::new(&t, mask).map_err(|e| CliError::Flag { flag: "--sr", reason: e.to_string() })?;

    fs::create_dir_all(&args.output)
        .map_err(|e| CliError::io(format!("creating {}", args.output.display()), e))?;
    obs.mask().save(args.output.join("mask.qmsk")).map_err(|e| CliError::core("writing mask.qmsk", e))?;
    save_frames(&qtensor_to_rgb(&zero_filled(&obs)), &args.output.join("observed"))?;

    let spec = TransformSpec::dct(dims.2);
    let ctx = QtdctContext::new(dims);
    let (out, report) = solve(&obs, &cfg, &ctx, &spec).map_err(|e| CliError::core("recovery", e))?;

    let recovered = qtensor_to_rgb(&out);
    save_frames(&recovered, &args.output.join("frames"))?;

    let trace_path = args.output.join("trace.csv");
    let csv_err = |source| CliError::Csv { path: trace_path.display().to_string(), source };
    let mut w = csv::Writer::from_path(&trace_path).map_err(csv_err)?;
    for rec in &report.trace {
        w.serialize(rec).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io(format!("writing {}", trace_path.display()), e))?;

    let metrics = Metrics {
        schema: Metrics::SCHEMA,
        psnr: psnr(&truth, &recovered).map_err(|e| CliError::core("metrics", e))?,
        assim: assim(&truth, &recovered).map_err(|e| CliError::core("metrics", e))?,
        iterations: report.total_inner(),
        seconds: args.timing.then_some(report.elapsed.as_secs_f64()),
    };
    let json = metrics.to_json().map_err(|e| CliError::core("metrics", e))?;
    write_file(&args.output.join("metrics.json"), &json)?;

    if args.strict && report.iteration_limit {
        return Err(CliError::IterationLimit(report.total_inner()));
    }
    Ok(())
}

pub fn synth(args: &SynthArgs) -> Result<()> {
    let (h, w, f) = (args.height as usize, args.width as usize, args.frames as usize);
    let (seq, tensor) = match args.kind {
        SynthKind::Lowrank => {
            if args.rank == 0 || args.rank >= h.min(w) {
                return Err(CliError::Flag {
                    flag: "--rank",
                    reason: format!("must lie in 1..{}", h.min(w)),
                });
            }
            let spec = TransformSpec::dct(f);
            let t = synth::lowrank((h, w, f), args.rank, args.seed, &spec)
                .map_err(|e| CliError::core("synth", e))?;
            let shown = t.map(|q| Quaternion::pure(0.5 * (q.x + 1.0), 0.5 * (q.y + 1.0), 0.5 * (q.z + 1.0)));
            (qtensor_to_rgb(&shown), t)
        }
        SynthKind::Smooth => {
            let seq =
                synth::smooth_video(h, w, f, args.seed).map_err(|e| CliError::core("synth", e))?.quantized();
            let t = rgb_to_qtensor(&seq);
            (seq, t)
        }
    };
    save_frames(&seq, &args.output)?;
    save_tensor(&tensor, args.output.join("truth.qten")).map_err(|e| CliError::core("writing truth.qten", e))
}

#[derive(Serialize)]
struct BinRow {
    bin_left: f64,
    bin_right: f64,
    count: usize,
    cumulative_fraction: f64,
}

pub fn sparsity(args: &SparsityArgs) -> Result<()> {
    let seq = load_frames(&args.input)?;
    let t = rgb_to_qtensor(&seq);
    let s = QtdctContext::new(t.dims()).forward(&t).map_err(|e| CliError::core("transform", e))?;
    let profile = sparsity_profile(&s, args.bins as usize);
    let total = t.len() as f64;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut seen = 0;
    let csv_err = |source| CliError::Csv { path: "sparsity histogram".into(), source };
    for (b, &count) in profile.counts.iter().enumerate() {
        seen += count;
        w.serialize(BinRow {
            bin_left: profile.edges[b],
            bin_right: profile.edges[b + 1],
            count,
            cumulative_fraction: seen as f64 / total,
        })
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io("sparsity histogram", e.into_error()))?;
    emit(args.output.as_deref(), &String::from_utf8_lossy(&bytes))
}

#[derive(Serialize)]
struct Comparison {
    schema: u32,
    /// Decibels, or `"inf"` for identical sequences.
    psnr: serde_json::Value,
    assim: f64,
}

pub fn metrics(args: &MetricsArgs) -> Result<()> {
    let reference = load_frames(&args.reference)?;
    let test = load_frames(&args.test)?;
    let p = psnr(&reference, &test).map_err(|e| CliError::core("metrics", e))?;
    let cmp = Comparison {
        schema: Metrics::SCHEMA,
        psnr: if p.is_infinite() { "inf".into() } else { p.into() },
        assim: assim(&reference, &test).map_err(|e| CliError::core("metrics", e))?,
    };
    let json = serde_json::to_string_pretty(&cmp).expect("plain data serializes") + "\n";
    emit(args.output.as_deref(), &json)
}
