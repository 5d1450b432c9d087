//! Command-line front end.
//!
//! Every command writes one artifact carrying `"schema": "1"` and the echoed
//! [`RunConfig`]. JSON artifacts are single documents (JSON lines for
//! `word-ball`); CSV artifacts start with a `#` line holding the same header.
//! Output goes to `--output`, else to `$SNOWFLAKE_OUTPUT_DIR/<command>.<ext>`,
//! else to stdout.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{self, SweepSample};
use crate::embeddings::{self, DistanceMethod, GridSpec, ReprDistance};
use crate::error::{Error, Result};
use crate::group::{EmbeddingParams, GroupPoint};
use crate::integrate::{self, mc, McConfig};
use crate::lattice::{self, WordBall, DEFAULT_BUDGET};

pub const SCHEMA: &str = "1";
pub const OUTPUT_DIR_ENV: &str = "SNOWFLAKE_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "snowflake",
    version,
    about = "Snowflake embeddings of the Heisenberg group: distances, volumes and experiments"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Target exponent p >= 2; n = floor(p) and alpha are derived from it.
    #[arg(long, global = true, default_value_t = 2.5)]
    p: f64,
    /// Snowflake parameter in (0, 1).
    #[arg(long, global = true, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo sample budget.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    samples: u64,
    /// Absolute quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Volume of the Korányi unit ball in H_n and the exact value of the
    /// integral of N(z)^(-alpha p) over B_N(0, r).
    BallVolume {
        #[arg(long, default_value_t = 1.0)]
        r: f64,
    },
    /// Elements of the word ball B(r) of the discrete Heisenberg group with
    /// their word lengths, one JSON line each (|B(1)| = 5, |B(2)| = 17).
    WordBall {
        #[arg(long)]
        r: u32,
    },
    /// The n-point subset of the discrete Heisenberg group squeezed between
    /// two word balls, with the realized inner and outer radii.
    Xn {
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Monte Carlo estimate of the L_p norm to the power p of the kernel
    /// function z -> N(x^-1 z)^(-alpha) - N(z)^(-alpha), optionally restricted
    /// to B_N(0, K N(x)), where it is comparable to N(x)^((1-eps)p).
    KernelNorm {
        #[arg(long, value_parser = parse_point)]
        x: Coords,
        /// Restrict to B_N(0, K N(x)), K >= 1/3.
        #[arg(long)]
        k: Option<f64>,
    },
    /// Distance between the images of x and y under the Schrödinger cocycle
    /// embedding, which is comparable to d_N(x, y)^(1-eps).
    ReprDistance {
        #[arg(long, value_parser = parse_point)]
        x: Coords,
        #[arg(long, value_parser = parse_point)]
        y: Coords,
    },
    /// Pairwise table of d_N, d_N^(1-eps) and an embedding distance over
    /// random points of B_N(0, r) in H_n.
    DistanceMatrix {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Repr)]
        method: MethodArg,
    },
    /// Distortion of the representation embedding on the lattice point set
    /// X_count mapped into H_1, relative to d_N^(1-eps): the extremes of the
    /// ratio stay bounded.
    Distortion {
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Greedy covering and packing numbers of balls in the image of a lattice
    /// net of B_N(0, 1) under the representation embedding, against the
    /// doubling bound 2^(8/(1-eps)).
    Doubling {
        /// Net spacing; the net is (ih, jh, kh^2).
        #[arg(long, default_value_t = 0.0625)]
        h: f64,
        /// Comma-separated radii; defaults to a half and a quarter of the
        /// smallest image distance to the unit sphere.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
    },
    /// Ratio of the volumes of the image balls of radius 2r and r around the
    /// identity of H_1, which equals 2^(4/(1-eps)) by homogeneity.
    MeasureRatio {
        #[arg(long, default_value_t = 1.0)]
        r: f64,
    },
    /// Blow-up of the distortion as eps -> 0 over eps = 2^-from .. 2^-to: the
    /// fitted exponent of sup/inf against 1/eps is close to 1/p.
    SweepEpsilon {
        #[arg(long, default_value_t = 2)]
        from: i32,
        #[arg(long, default_value_t = 7)]
        to: i32,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 10.0)]
        r: f64,
    },
    /// Both sides of the lattice inequality bounding the central differences
    /// over B_n by the generator differences over B_21n, plus the harmonic-type
    /// sum behind the 1/eps lower bound on the distortion.
    LnInequality {
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Largest word ball, in elements.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Grid quadrature of ||g - sigma_lambda(u,v,w) g||^2 for the Gaussian g
    /// against 2 sqrt(pi) (1 - exp(-lambda(u^2+v^2)) cos(lambda w)).
    SchrodingerCheck {
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, value_parser = parse_point)]
        x: Coords,
    },
    /// Polynomial growth of word balls: least-squares exponent of log|B(r)|
    /// against log r over [r/4, r], close to 4.
    Growth {
        #[arg(long, default_value_t = 24)]
        r: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MethodArg {
    Repr,
    Kernel,
}

/// Comma-separated coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
struct Coords(Vec<f64>);

fn parse_point(s: &str) -> std::result::Result<Coords, String> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad coordinate {c:?}: {e}"))
        })
        .collect::<std::result::Result<_, _>>()
        .map(Coords)
}

/// Everything that determines a run. The worker count is not part of it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub p: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub samples: u64,
    pub tol: f64,
    /// Command-specific arguments.
    pub args: BTreeMap<String, Value>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

struct Artifact {
    body: Value,
    /// Rows for CSV output.
    table: Vec<Value>,
    /// `word-ball` writes one JSON line per row.
    lines: bool,
}

impl Artifact {
    fn single(body: impl Serialize) -> Result<Artifact> {
        let body = serde_json::to_value(body)?;
        let table = vec![body.clone()];
        Ok(Artifact {
            body,
            table,
            lines: false,
        })
    }

    fn with_table(body: impl Serialize, table: impl Serialize) -> Result<Artifact> {
        let table = match serde_json::to_value(table)? {
            Value::Array(rows) => rows,
            other => vec![other],
        };
        Ok(Artifact {
            body: serde_json::to_value(body)?,
            table,
            lines: false,
        })
    }
}

/// Runs the command line `argv` (including the program name) and returns the
/// process exit code: 0 on success, 2 on usage errors, 1 on budget or
/// convergence failures.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let config = run_config(&cli);
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.workers.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return 1;
        }
    };
    let outcome = pool.install(|| execute(&cli));
    let (artifact, failure) = match outcome {
        Ok(a) => (a, None),
        Err(e) => {
            let code = match e {
                Error::InvalidParameter(_) | Error::DimensionMismatch { .. } | Error::Parse(_) => 2,
                _ => 1,
            };
            if code == 2 {
                eprintln!("error: {e}");
                return 2;
            }
            let a = Artifact {
                body: Value::Null,
                table: Vec::new(),
                lines: false,
            };
            (a, Some(e))
        }
    };
    match emit(&config, &artifact, failure.as_ref()) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    }
    match failure {
        None => 0,
        Some(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run_config(cli: &Cli) -> RunConfig {
    let c = &cli.common;
    let mut args = BTreeMap::new();
    let mut put = |k: &str, v: Value| {
        args.insert(k.to_string(), v);
    };
    let name = match &cli.command {
        Command::BallVolume { r } => {
            put("r", json!(r));
            "ball-volume"
        }
        Command::WordBall { r } => {
            put("r", json!(r));
            "word-ball"
        }
        Command::Xn { count } => {
            put("count", json!(count));
            "xn"
        }
        Command::KernelNorm { x, k } => {
            put("x", json!(x));
            put("k", json!(k));
            "kernel-norm"
        }
        Command::ReprDistance { x, y } => {
            put("x", json!(x));
            put("y", json!(y));
            "repr-distance"
        }
        Command::DistanceMatrix { count, r, method } => {
            put("count", json!(count));
            put("r", json!(r));
            put("method", json!(method));
            "distance-matrix"
        }
        Command::Distortion { count } => {
            put("count", json!(count));
            "distortion"
        }
        Command::Doubling { h, radii } => {
            put("h", json!(h));
            put("radii", json!(radii));
            "doubling"
        }
        Command::MeasureRatio { r } => {
            put("r", json!(r));
            "measure-ratio"
        }
        Command::SweepEpsilon { from, to, pairs, r } => {
            put("from", json!(from));
            put("to", json!(to));
            put("pairs", json!(pairs));
            put("r", json!(r));
            "sweep-epsilon"
        }
        Command::LnInequality { n, budget } => {
            put("n", json!(n));
            put("budget", json!(budget));
            "ln-inequality"
        }
        Command::SchrodingerCheck { lambda, x } => {
            put("lambda", json!(lambda));
            put("x", json!(x));
            "schrodinger-check"
        }
        Command::Growth { r, budget } => {
            put("r", json!(r));
            put("budget", json!(budget));
            "growth"
        }
    };
    RunConfig {
        command: name.to_string(),
        p: c.p,
        epsilon: c.epsilon,
        seed: c.seed,
        samples: c.samples,
        tol: c.tol,
        args,
        output: c.output.clone(),
        format: c.format,
    }
}

/// A point of `H_1` as `u,v,w`, or of `H_n` in interleaved coordinates.
fn point(coords: &[f64], n: usize) -> Result<GroupPoint> {
    if coords.len() == 3 {
        GroupPoint::h1(coords[0], coords[1], coords[2]).embed_h1(n)
    } else if coords.len() == 2 * n + 1 {
        GroupPoint::from_interleaved(coords)
    } else {
        Err(Error::InvalidParameter(format!(
            "expected 3 or {} coordinates, got {}",
            2 * n + 1,
            coords.len()
        )))
    }
}

fn execute(cli: &Cli) -> Result<Artifact> {
    let c = &cli.common;
    let params = || EmbeddingParams::from_p_epsilon(c.p, c.epsilon);
    let mc_cfg = || McConfig::new(c.samples, c.seed);
    match &cli.command {
        Command::BallVolume { r } => {
            let params = params()?;
            let n = params.n();
            let beta = params.alpha() * params.p();
            Artifact::single(json!({
                "n": n,
                "volume": integrate::ball_volume(n)?,
                "beta": beta,
                "radius": r,
                "integral": integrate::ball_integral_exact(*r, beta, n)?,
                "abs_error": 0.0,
            }))
        }
        Command::WordBall { r } => {
            let ball = WordBall::build(*r, DEFAULT_BUDGET)?;
            let rows: Vec<Value> = ball
                .iter_with_distance()
                .map(|(g, d)| json!({"x": g.x, "y": g.y, "z": g.z, "d": d}))
                .collect();
            Ok(Artifact {
                body: Value::Null,
                table: rows,
                lines: true,
            })
        }
        Command::Xn { count } => {
            let set = lattice::build_xn(*count, DEFAULT_BUDGET)?;
            let rows: Vec<Value> = set
                .elements
                .iter()
                .zip(&set.lengths)
                .map(|(g, d)| json!({"x": g.x, "y": g.y, "z": g.z, "d": d}))
                .collect();
            Artifact::with_table(&set, rows)
        }
        Command::KernelNorm { x, k } => {
            let params = params()?;
            let x = point(&x.0, params.n())?;
            let est = match k {
                Some(k) => mc::mc_kernel_norm_ball(&x, *k, &params, &mc_cfg())?,
                None => mc::mc_kernel_norm(&x, &params, &mc_cfg())?,
            };
            Artifact::single(json!({
                "norm_p": est.mean,
                "std_error": est.std_error,
                "samples": est.samples,
                "koranyi_norm": x.koranyi_norm(),
            }))
        }
        Command::ReprDistance { x, y } => {
            let params = params()?;
            let (x, y) = (point(&x.0, params.n())?, point(&y.0, params.n())?);
            let d = ReprDistance::new(params, c.tol)?.distance(&x, &y)?;
            Artifact::single(json!({
                "distance": d.value,
                "abs_error": d.abs_error,
                "evaluations": d.evaluations,
                "d_N": x.koranyi_distance(&y)?,
            }))
        }
        Command::DistanceMatrix { count, r, method } => {
            let params = params()?;
            let points = analysis::sample::uniform_in_ball(params.n(), *r, *count, c.seed)?;
            let method = match method {
                MethodArg::Repr => DistanceMethod::Repr { tol: c.tol },
                MethodArg::Kernel => DistanceMethod::Kernel { cfg: mc_cfg() },
            };
            let rows = embeddings::distance_matrix(&points, &params, &method)?;
            Artifact::with_table(json!({"points": points, "rows": rows}), &rows)
        }
        Command::Distortion { count } => {
            let params = params()?;
            let set = lattice::build_xn(*count, DEFAULT_BUDGET)?;
            let points: Vec<GroupPoint> = set.elements.iter().map(|g| g.to_continuous()).collect();
            let snow = params.snowflake_exponent();
            let metric = ReprDistance::new(params, c.tol)?;
            let rep = analysis::distortion_report(
                &points,
                |a, b| Ok(a.koranyi_distance(b)?.powf(snow)),
                |a, b| Ok(metric.distance(a, b)?.value),
                ("d_N^(1-eps)", "repr_distance"),
            )?;
            Artifact::single(&rep)
        }
        Command::Doubling { h, radii } => {
            let params = params()?;
            let rep = analysis::image_doubling(&params, *h, radii.as_deref(), None)?;
            Artifact::with_table(&rep, &rep.trials)
        }
        Command::MeasureRatio { r } => {
            let params = params()?;
            let m = analysis::measure_ratio_check(&params, *r, &mc_cfg())?;
            Artifact::single(&m)
        }
        Command::SweepEpsilon { from, to, pairs, r } => {
            let sample = SweepSample {
                pairs: *pairs,
                radius: *r,
                seed: c.seed,
            };
            let rep = analysis::epsilon_sweep(
                &analysis::sweep::dyadic_epsilons(*from, *to),
                c.p,
                &sample,
            )?;
            Artifact::with_table(&rep, &rep.rows)
        }
        Command::LnInequality { n, budget } => {
            let params = params()?;
            let rep = analysis::ln_inequality_eval(*n, &params, c.tol, *budget)?;
            Artifact::single(&rep)
        }
        Command::SchrodingerCheck { lambda, x } => {
            let [u, v, w] = x.0[..] else {
                return Err(Error::InvalidParameter(format!(
                    "expected u,v,w, got {} coordinates",
                    x.0.len()
                )));
            };
            let grid = GridSpec::covering(*lambda, u, v);
            let oracle = embeddings::schrodinger_pairing_oracle(*lambda, u, v, w, &grid)?;
            let exact = embeddings::schrodinger::pairing_closed_form(*lambda, u, v, w);
            Artifact::single(json!({
                "oracle": oracle,
                "closed_form": exact,
                "abs_error": (oracle - exact).abs(),
                "grid": grid,
            }))
        }
        Command::Growth { r, budget } => {
            let fit = lattice::growth_fit(*r, *budget)?;
            let rows: Vec<Value> = fit
                .radii
                .iter()
                .zip(&fit.sizes)
                .map(|(r, s)| json!({"r": r, "size": s}))
                .collect();
            Artifact::with_table(&fit, rows)
        }
    }
}

fn destination(config: &RunConfig) -> Option<PathBuf> {
    if let Some(p) = &config.output {
        return Some(p.clone());
    }
    let dir = std::env::var_os(OUTPUT_DIR_ENV)?;
    let ext = match config.format {
        Format::Json if config.command == "word-ball" => "jsonl",
        Format::Json => "json",
        Format::Csv => "csv",
    };
    Some(PathBuf::from(dir).join(format!("{}.{ext}", config.command)))
}

fn emit(config: &RunConfig, artifact: &Artifact, failure: Option<&Error>) -> Result<()> {
    let bytes = render(config, artifact, failure)?;
    match destination(config) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(path, bytes)?;
        }
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

fn header(config: &RunConfig, failure: Option<&Error>) -> Result<Value> {
    let mut h = json!({"schema": SCHEMA, "config": config, "complete": failure.is_none()});
    if let Some(e) = failure {
        h["error"] = json!(e.to_string());
    }
    Ok(h)
}

fn render(config: &RunConfig, artifact: &Artifact, failure: Option<&Error>) -> Result<Vec<u8>> {
    let head = header(config, failure)?;
    let mut out = Vec::new();
    match config.format {
        Format::Json if artifact.lines && failure.is_none() => {
            for row in &artifact.table {
                let mut line = head.clone();
                line["row"] = row.clone();
                serde_json::to_writer(&mut out, &line)?;
                out.push(b'\n');
            }
        }
        Format::Json => {
            let mut doc = head;
            doc["result"] = artifact.body.clone();
            serde_json::to_writer_pretty(&mut out, &doc)?;
            out.push(b'\n');
        }
        Format::Csv => {
            out.extend_from_slice(b"# ");
            serde_json::to_writer(&mut out, &head)?;
            out.push(b'\n');
            write_table(&mut out, &artifact.table)?;
        }
    }
    Ok(out)
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn write_table(out: &mut Vec<u8>, rows: &[Value]) -> Result<()> {
    let Some(Value::Object(first)) = rows.first() else {
        return Ok(());
    };
    let keys: Vec<&String> = first.keys().collect();
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(keys.iter().map(|k| k.as_str()))
        .map_err(csv_err)?;
    for row in rows {
        w.write_record(keys.iter().map(|k| cell(&row[k.as_str()])))
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
