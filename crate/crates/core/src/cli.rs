//! Command-line runner: `toroidal verify ...`.
//!
//! Exit codes: 0 when every selected check passes, 1 on any failure, 2 when
//! the κ-spec is invalid, 64 on unparsable arguments or inputs.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kappa::{KappaRecord, KappaSpec, KappaValidation};
use crate::lattice::{MultiIndex, OrderScheme};
use crate::rational::{self, Rational};
use crate::realization::{Generator, Realization, RealizationParams};
use crate::verify::{run_suites, CheckConfig, CheckRecord, Suite};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID_KAPPA: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(name = "toroidal", version, about = "Exact checks of a free-field realization of toroidal sl(n+1)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the realization and run relation suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, clap::Args)]
pub struct VerifyArgs {
    /// Rank: the algebra is of type A_n, n >= 2.
    #[arg(long = "n")]
    pub n: usize,
    /// Number of extra loop variables; modes live in Z^{N+1}.
    #[arg(long = "N", default_value_t = 1)]
    pub big_n: usize,
    /// Order weights: `ones`, `ramp`, or a comma list of rationals.
    #[arg(long, default_value = "ones")]
    pub weights: String,
    /// `builtin:point-at-zero[:c0,c1,..]`, `builtin:positive-cone[:POINT=VALUES;..]`,
    /// `builtin:zero`, or a JSON file of {m, p, value} records.
    #[arg(long, default_value = "builtin:point-at-zero")]
    pub kappa: String,
    /// λ_0..λ_n as rationals; defaults to zeros.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Mode box radius.
    #[arg(long = "box", default_value_t = 1)]
    pub radius: i64,
    /// Box radius for the nested Serre commutators; defaults to --box.
    #[arg(long)]
    pub serre_box: Option<i64>,
    /// Vector count for the Serre suite; defaults to --vectors.
    #[arg(long)]
    pub serre_vectors: Option<usize>,
    /// Box radius for the lemma suite; defaults to min(--box, 1).
    #[arg(long)]
    pub lemma_box: Option<i64>,
    #[arg(long, default_value_t = 10)]
    pub vectors: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma list of suites, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Report file (JSON).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Print the term list of one generator mode, e.g. `F0:1,0`, and exit.
    #[arg(long, allow_hyphen_values = true)]
    pub dump_realization: Option<String>,
}

/// Fully resolved run configuration, as written into the report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub weights: Vec<String>,
    pub kappa_source: String,
    pub kappa: Vec<KappaRecord>,
    pub lambda: Vec<String>,
    #[serde(rename = "box")]
    pub radius: i64,
    pub vectors: usize,
    pub seed: u64,
    pub serre_box: i64,
    pub serre_vectors: usize,
    pub lemma_box: i64,
    pub suites: Vec<Suite>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub instances: u64,
    pub failures: u64,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub kappa_validation: KappaValidation,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
    pub records: Vec<CheckRecord>,
}

/// Parsed inputs ready to run.
pub struct Prepared {
    pub config: RunConfig,
    pub params: Option<RealizationParams>,
    pub spec: KappaSpec,
    pub scheme: OrderScheme,
    pub lambda: Vec<Rational>,
    pub suites: Vec<Suite>,
}

pub fn parse_weights(s: &str, dim: usize) -> Result<OrderScheme> {
    match s.trim() {
        "ones" => Ok(OrderScheme::all_ones(dim)),
        "ramp" => Ok(OrderScheme::ramp(dim)),
        other => {
            let w = rational::parse_list(other)?;
            if w.len() != dim {
                return Err(Error::Parse(format!("expected {dim} weights, got {}", w.len())));
            }
            OrderScheme::new(w).map_err(|e| Error::Parse(e.to_string()))
        }
    }
}

/// Resolves a κ source string. Structural problems are parse errors; cocycle
/// conditions failing is [`Error::InvalidKappa`].
pub fn parse_kappa(s: &str, scheme: &OrderScheme) -> Result<KappaSpec> {
    let dim = scheme.dim();
    let Some(rest) = s.strip_prefix("builtin:") else {
        let path = std::path::Path::new(s);
        if !path.exists() {
            return Err(Error::Parse(format!("kappa file {s} not found")));
        }
        return KappaSpec::load(path, dim).map_err(|e| match e {
            Error::Io(m) => Error::Parse(m),
            other => other,
        });
    };
    let (name, arg) = match rest.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (rest, None),
    };
    match name {
        "zero" => Ok(KappaSpec::new(dim)),
        "point-at-zero" => {
            let values = match arg {
                Some(a) => rational::parse_list(a)?,
                None => {
                    let mut v = vec![rational::zero(); dim];
                    v[0] = rational::one();
                    if dim > 1 {
                        v[1] = rational::int(-1);
                    }
                    v
                }
            };
            if values.len() != dim {
                return Err(Error::Parse(format!("point-at-zero needs {dim} values, got {}", values.len())));
            }
            KappaSpec::point_at_zero(values)
        }
        "positive-cone" => match arg {
            None => KappaSpec::positive_cone_example(scheme),
            Some(a) => {
                let mut rows = Vec::new();
                for part in a.split(';').map(str::trim).filter(|p| !p.is_empty()) {
                    let (m, v) = part
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("expected POINT=VALUES, got {part:?}")))?;
                    let m = MultiIndex::parse(m)?;
                    let v = rational::parse_list(v)?;
                    if m.dim() != dim || v.len() != dim {
                        return Err(Error::Parse(format!("positive-cone row {part:?} must have {dim} entries")));
                    }
                    rows.push((m, v));
                }
                KappaSpec::positive_cone(scheme, rows)
            }
        },
        other => Err(Error::Parse(format!("unknown builtin kappa {other:?}"))),
    }
}

/// Parses `G<r>:<m>`, e.g. `E1:0,1` or `b0:(1,-1)`.
pub fn parse_dump(s: &str, dim: usize) -> Result<(Generator, MultiIndex)> {
    let (g, m) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected GEN:MODE, got {s:?}")))?;
    let g = g.trim();
    let mut chars = g.chars();
    let kind = chars.next().ok_or_else(|| Error::Parse("empty generator".into()))?;
    let r: usize = chars
        .as_str()
        .parse()
        .map_err(|_| Error::Parse(format!("bad generator index in {g:?}")))?;
    let gen = match kind {
        'E' => Generator::E(r),
        'F' => Generator::F(r),
        'H' => Generator::H(r),
        'b' | 'B' => Generator::B(r),
        _ => return Err(Error::Parse(format!("unknown generator {g:?}"))),
    };
    let m = MultiIndex::parse(m)?;
    if m.dim() != dim {
        return Err(Error::Parse(format!("mode {m} must have {dim} entries")));
    }
    Ok((gen, m))
}

pub fn prepare(args: &VerifyArgs) -> Result<Prepared> {
    if args.n < 2 {
        return Err(Error::Parse("--n must be at least 2".into()));
    }
    if args.radius < 0 || args.vectors == 0 {
        return Err(Error::Parse("--box must be nonnegative and --vectors positive".into()));
    }
    let dim = args.big_n + 1;
    let scheme = parse_weights(&args.weights, dim)?;
    let lambda = match &args.lambda {
        Some(s) => rational::parse_list(s)?,
        None => vec![rational::zero(); args.n + 1],
    };
    if lambda.len() != args.n + 1 {
        return Err(Error::Parse(format!("--lambda needs {} values, got {}", args.n + 1, lambda.len())));
    }
    let suites = Suite::parse_list(&args.suite)?;
    let spec = parse_kappa(&args.kappa, &scheme)?;
    let serre_box = args.serre_box.unwrap_or(args.radius);
    let serre_vectors = args.serre_vectors.unwrap_or(args.vectors);
    let lemma_box = args.lemma_box.unwrap_or(args.radius.min(1));
    if serre_box < 0 || lemma_box < 0 || serre_vectors == 0 {
        return Err(Error::Parse("Serre and lemma settings must be nonnegative".into()));
    }
    let config = RunConfig {
        n: args.n,
        big_n: args.big_n,
        weights: scheme.weight_strings(),
        kappa_source: args.kappa.clone(),
        kappa: spec.to_records(),
        lambda: lambda.iter().map(rational::to_string).collect(),
        radius: args.radius,
        vectors: args.vectors,
        seed: args.seed,
        serre_box,
        serre_vectors,
        lemma_box,
        suites: suites.clone(),
    };
    Ok(Prepared {
        config,
        params: None,
        spec,
        scheme,
        lambda,
        suites,
    })
}

/// Radius of the box used to validate κ: large enough to see every support point.
fn validation_radius(spec: &KappaSpec, radius: i64) -> i64 {
    let support = spec
        .support()
        .flat_map(|(m, _)| m.coords().iter().map(|x| x.abs()).collect::<Vec<_>>())
        .max()
        .unwrap_or(0);
    radius.max(2).max(2 * support)
}

fn write_report(path: Option<&PathBuf>, report: &RunReport) -> std::result::Result<(), i32> {
    let text = serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    if let Some(p) = path {
        if let Err(e) = std::fs::write(p, text) {
            eprintln!("error: cannot write {}: {e}", p.display());
            return Err(EXIT_IO);
        }
    }
    Ok(())
}

fn usage_error(e: &Error) -> i32 {
    eprintln!("error: {e}");
    match e {
        Error::InvalidKappa(_) => EXIT_INVALID_KAPPA,
        _ => EXIT_USAGE,
    }
}

/// Runs `verify`, printing a summary to `out`; returns the exit code.
pub fn run_verify(args: &VerifyArgs, out: &mut dyn Write) -> i32 {
    let mut prep = match prepare(args) {
        Ok(p) => p,
        Err(e) => return usage_error(&e),
    };
    let vradius = validation_radius(&prep.spec, args.radius);
    let validation = match prep.spec.validate(&prep.scheme, vradius) {
        Ok(v) => v,
        Err(e) => return usage_error(&e),
    };
    if !validation.pass {
        let text = serde_json::to_string_pretty(&validation).expect("validation serializes");
        eprintln!("invalid kappa:\n{text}");
        let report = RunReport {
            config: prep.config,
            kappa_validation: validation,
            pass: false,
            summary: None,
            records: Vec::new(),
        };
        return write_report(args.output.as_ref(), &report).err().unwrap_or(EXIT_INVALID_KAPPA);
    }
    let params = match RealizationParams::new(args.n, prep.scheme.clone(), prep.spec.clone(), prep.lambda.clone()) {
        Ok(p) => p,
        Err(e) => return usage_error(&e),
    };
    prep.params = Some(params.clone());

    if let Some(d) = &args.dump_realization {
        let dumped = parse_dump(d, params.dim())
            .and_then(|(g, m)| Realization::new(params.clone())?.dump(g, &m));
        return match dumped {
            Ok(text) => {
                let _ = write!(out, "{text}");
                EXIT_PASS
            }
            Err(e) => usage_error(&e),
        };
    }

    let mut cfg = match CheckConfig::new(params, args.radius, args.vectors, args.seed) {
        Ok(c) => c,
        Err(e) => return usage_error(&e),
    };
    cfg.serre_radius = prep.config.serre_box;
    cfg.serre_vectors = prep.config.serre_vectors;
    cfg.lemma_radius = prep.config.lemma_box;

    let checked = match run_suites(&cfg, &prep.suites) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAIL;
        }
    };
    for r in &checked.records {
        let status = if r.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{status} {} ({} instances, {} failures)", r.id, r.instances, r.failure_count);
    }
    let _ = writeln!(out, "{}", if checked.pass { "PASS" } else { "FAIL" });
    let report = RunReport {
        config: prep.config,
        kappa_validation: validation,
        pass: checked.pass,
        summary: Some(Summary {
            instances: checked.total_instances(),
            failures: checked.total_failures(),
        }),
        records: checked.records,
    };
    if let Err(code) = write_report(args.output.as_ref(), &report) {
        return code;
    }
    if report.pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Entry point shared by the binary and the tests.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Verify(a) => run_verify(&a, out),
    }
}
