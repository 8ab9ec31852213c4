//! The `antinef` command-line tool.
//!
//! Every subcommand prints a [`Report`] on stdout. Exit codes: 0 on success,
//! 1 when a computation ran but a check failed, 2 on unusable input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use antinef_core::antinef::{ClosureOptions, Selection};
use antinef_core::blowup::BlowupPlan;
use antinef_core::graphfile::{self, GraphFile};
use antinef_core::lattice::Definiteness;
use antinef_core::random::{random_antinef, DEFAULT_MAX_COEFF};
use antinef_core::rational::{self, Rational};
use antinef_core::report::format_list;
use antinef_core::{
    antinef_closure_with, apply_plan, corpus, discrepancies, multiplier_divisor, realize, Divisor, Error, Report,
};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CORPUS_ENV: &str = "ANTINEF_CORPUS";
/// Prefix selecting a file from the bundled corpus instead of the filesystem.
pub const BUNDLED_PREFIX: &str = "corpus:";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "antinef", version, about = "Exact divisor computations on resolution graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// Graph file, or `corpus:NAME` for a bundled one.
    pub graph: String,
}

#[derive(Debug, Args)]
pub struct DivisorArg {
    /// Divisor name from the file, or an inline list such as `E1=1,L=2` (`0` for zero).
    pub divisor: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a graph, test definiteness, and compute discrepancies.
    Check(GraphArg),
    /// Print the dual basis of the exceptional lattice.
    DualBasis(GraphArg),
    /// Antinef closure of an integral divisor.
    Closure {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        divisor: DivisorArg,
        /// Include the step-by-step unloading trace.
        #[arg(long)]
        trace: bool,
        /// Add all needed copies of a curve in one step.
        #[arg(long)]
        fast: bool,
    },
    /// Antinef divisor of the multiplier ideal at exponent lambda.
    Multiplier {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        divisor: DivisorArg,
        #[arg(long, value_name = "P/Q")]
        lambda: String,
    },
    /// Blow up chains of free points over one curve.
    Blowup {
        #[command(flatten)]
        graph: GraphArg,
        /// Curve to blow up on.
        curve: String,
        /// Length of each chain.
        #[arg(long, default_value_t = 1)]
        length: usize,
        /// Number of distinct free points.
        #[arg(long, default_value_t = 1)]
        points: usize,
        /// Write the blown-up graph file here.
        #[arg(long, value_name = "PATH")]
        emit_graph: Option<PathBuf>,
    },
    /// Realize an antinef divisor as a multiplier ideal and verify the result.
    Realize {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        divisor: DivisorArg,
        /// Write the full certificate report here.
        #[arg(long, value_name = "PATH")]
        emit_certificate: Option<PathBuf>,
    },
    /// Realize seeded random divisors on every graph of a corpus.
    Batch {
        /// Corpus directory. Defaults to $ANTINEF_CORPUS, then the bundled corpus.
        dir: Option<PathBuf>,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A finished command: the report and the exit code it implies.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub code: i32,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, code: EXIT_OK }
    }

    fn verdict(report: Report, passed: bool) -> Self {
        let code = if passed { EXIT_OK } else { EXIT_CHECK_FAILED };
        Outcome { report, code }
    }
}

/// An input problem, reported on stderr with exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = std::result::Result<Outcome, InputError>;

/// Parses arguments and runs, writing the report to `out` and diagnostics
/// to `err`. Returns the exit code.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    run(cli, out, err)
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Check(g) => load(&g.graph).and_then(|f| cmd_check(&f)),
        Command::DualBasis(g) => load(&g.graph).and_then(|f| cmd_dual_basis(&f)),
        Command::Closure {
            graph,
            divisor,
            trace,
            fast,
        } => load(&graph.graph).and_then(|f| cmd_closure(&f, &divisor.divisor, trace, fast)),
        Command::Multiplier { graph, divisor, lambda } => {
            load(&graph.graph).and_then(|f| cmd_multiplier(&f, &divisor.divisor, &lambda))
        }
        Command::Blowup {
            graph,
            curve,
            length,
            points,
            emit_graph,
        } => load(&graph.graph).and_then(|f| cmd_blowup(&f, &curve, length, points, emit_graph.as_deref())),
        Command::Realize {
            graph,
            divisor,
            emit_certificate,
        } => load(&graph.graph).and_then(|f| cmd_realize(&f, &divisor.divisor, emit_certificate.as_deref())),
        Command::Batch { dir, samples, seed } => {
            let dir = dir.or_else(|| std::env::var_os(CORPUS_ENV).map(PathBuf::from));
            load_corpus(dir.as_deref()).map(|files| cmd_batch(&files, samples, seed, err))
        }
    };
    match result {
        Ok(outcome) => {
            let _ = out.write_all(outcome.report.render().as_bytes());
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

/// Reads a graph file, or a bundled one via `corpus:NAME`.
pub fn load(spec: &str) -> std::result::Result<GraphFile, InputError> {
    if let Some(name) = spec.strip_prefix(BUNDLED_PREFIX) {
        return corpus::bundled_file(name).ok_or_else(|| InputError(format!("no bundled graph named `{name}`")));
    }
    let text = fs::read_to_string(spec).map_err(|e| InputError(format!("{spec}: {e}")))?;
    graphfile::parse(&text).map_err(|e| InputError(format!("{spec}: {e}")))
}

/// `(file name, parse result)` pairs, sorted by file name.
pub fn load_corpus(
    dir: Option<&Path>,
) -> std::result::Result<Vec<(String, antinef_core::Result<GraphFile>)>, InputError> {
    match dir {
        Some(d) => corpus::load_dir(d).map_err(|e| InputError(format!("{}: {e}", d.display()))),
        None => Ok(corpus::BUNDLED
            .iter()
            .map(|(name, text)| (name.to_string(), graphfile::parse(text)))
            .collect()),
    }
}

/// Resolves a divisor argument: a name from the file, `0`, or an inline
/// `curve=value` list separated by commas or spaces.
pub fn resolve_divisor(file: &GraphFile, spec: &str) -> std::result::Result<Divisor, InputError> {
    if let Some(d) = file.divisor(spec) {
        return Ok(d.clone());
    }
    let model = &file.model;
    let spec = spec.trim();
    if spec == "0" {
        return Ok(model.zero_divisor());
    }
    if !spec.contains('=') {
        return Err(InputError(format!("no divisor named `{spec}`")));
    }
    let mut d = model.zero_divisor();
    for token in spec.split([',', ' ']).filter(|t| !t.is_empty()) {
        let (name, value) = token
            .split_once('=')
            .ok_or_else(|| InputError(format!("expected curve=value, got `{token}`")))?;
        let value = rational::parse(value).map_err(InputError::from)?;
        if let Some(i) = model.find_curve(name) {
            d.set_exc(i, value);
        } else if let Some(s) = model.find_strict(name) {
            d.set_strict(s, value);
        } else {
            return Err(InputError(format!("unknown curve `{name}`")));
        }
    }
    Ok(d)
}

fn find_curve(file: &GraphFile, name: &str) -> std::result::Result<usize, InputError> {
    file.model
        .find_curve(name)
        .ok_or_else(|| InputError(format!("unknown curve `{name}`")))
}

pub fn cmd_check(file: &GraphFile) -> CmdResult {
    let model = &file.model;
    let mut r = Report::new("check");
    r.write_model("model", model);
    r.push("divisors", file.divisors.len());
    match model.check_negative_definite() {
        Definiteness::NegativeDefinite => r.push("negative_definite", true),
        Definiteness::Indefinite { witness } => {
            r.push("negative_definite", false);
            r.push("witness", format_list(&witness));
            return Ok(Outcome::verdict(r, false));
        }
    }
    let d = discrepancies(model)?;
    r.write_rationals("b", &d.b);
    r.push("log_terminal", d.log_terminal);
    let offenders: Vec<String> = d.offenders.iter().map(|&i| model.curve_name(i)).collect();
    r.push("offenders", format_list(&offenders));
    Ok(Outcome::ok(r))
}

pub fn cmd_dual_basis(file: &GraphFile) -> CmdResult {
    let model = &file.model;
    let duals = model.dual_basis()?;
    let mut r = Report::new("dual-basis");
    r.write_model("model", model);
    let mut exact = true;
    for (i, d) in duals.iter().enumerate() {
        r.write_divisor(format!("dual.{}", model.curve_name(i)), model, d);
        let products = model.products(d)?;
        exact &= products.iter().enumerate().all(|(j, p)| {
            let want = if i == j {
                -Rational::from_integer(1.into())
            } else {
                Rational::default()
            };
            *p == want
        });
    }
    r.push("exact", exact);
    Ok(Outcome::verdict(r, exact))
}

pub fn cmd_closure(file: &GraphFile, divisor: &str, trace: bool, fast: bool) -> CmdResult {
    let model = &file.model;
    let d = resolve_divisor(file, divisor)?;
    let options = ClosureOptions {
        selection: Selection::Smallest,
        batched: fast,
    };
    let (closed, t) = antinef_closure_with(model, &d, options)?;
    let mut r = Report::new("closure");
    r.write_divisor("input", model, &d);
    r.write_divisor("closure", model, &closed);
    r.push("added", &t.initial_s);
    if trace {
        r.write_trace("trace", model, &t);
    }
    Ok(Outcome::ok(r))
}

pub fn cmd_multiplier(file: &GraphFile, divisor: &str, lambda: &str) -> CmdResult {
    let model = &file.model;
    let g = resolve_divisor(file, divisor)?;
    let lambda = rational::parse(lambda)?;
    let j = multiplier_divisor(model, &g, &lambda)?;
    let mut r = Report::new("multiplier");
    r.write_divisor("G", model, &g);
    r.push("lambda", &lambda);
    r.write_divisor("multiplier", model, &j);
    r.push("trivial", j.is_zero());
    Ok(Outcome::ok(r))
}

pub fn cmd_blowup(file: &GraphFile, curve: &str, length: usize, points: usize, emit: Option<&Path>) -> CmdResult {
    let model = &file.model;
    let i = find_curve(file, curve)?;
    let u = model.num_curves();
    let mut plan = BlowupPlan {
        points: vec![0; u],
        lengths: vec![0; u],
    };
    plan.points[i] = points;
    plan.lengths[i] = length;
    let result = apply_plan(model, &plan)?;
    let z = &*result.new_model;

    let mut r = Report::new("blowup");
    r.push("center", curve);
    r.push("points", points);
    r.push("length", length);
    r.write_model("model", z);
    r.write_divisor("K_sigma", z, &result.k_sigma);
    for (k, chain) in result.chains.iter().enumerate() {
        let names: Vec<String> = chain.curves.iter().map(|&c| z.curve_name(c)).collect();
        r.push(format!("chain.{}", k + 1), format_list(&names));
    }
    let mut pulled = Vec::new();
    for (name, d) in &file.divisors {
        let p = result.pullback.apply_checked(z, d)?;
        r.write_divisor(format!("pullback.{name}"), z, &p);
        pulled.push((name.clone(), p));
    }
    if let Some(path) = emit {
        let out = GraphFile {
            model: z.clone(),
            divisors: pulled,
        };
        fs::write(path, graphfile::serialize(&out)).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        r.push("graph_written", path.display());
    }
    Ok(Outcome::ok(r))
}

pub fn cmd_realize(file: &GraphFile, divisor: &str, emit: Option<&Path>) -> CmdResult {
    let model = &file.model;
    let f0 = resolve_divisor(file, divisor)?;
    let cert = realize(model, &f0)?;
    let mut r = Report::new("realize");
    r.write_certificate("certificate", &cert, false);
    if let Some(path) = emit {
        let mut full = Report::new("realize");
        full.write_certificate("certificate", &cert, true);
        fs::write(path, full.render()).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        r.push("certificate_written", path.display());
    }
    let passed = cert.verification.passed() && cert.f_prime == cert.f;
    Ok(Outcome::verdict(r, passed))
}

/// Realizes `samples` seeded random antinef divisors on each log terminal
/// graph. Timings go to `timings`, never into the report.
pub fn cmd_batch(
    files: &[(String, antinef_core::Result<GraphFile>)],
    samples: usize,
    seed: u64,
    timings: &mut dyn Write,
) -> Outcome {
    let mut r = Report::new("batch");
    r.push("samples", samples);
    r.push("seed", seed);
    let (mut cases, mut passed, mut skipped, mut errors) = (0usize, 0usize, 0usize, 0usize);
    let start = Instant::now();
    if samples > 0 {
        for (index, (name, parsed)) in files.iter().enumerate() {
            let key = format!("file.{name}");
            let file = match parsed {
                Ok(f) => f,
                Err(e) => {
                    errors += 1;
                    r.push(format!("{key}.status"), format!("error ({e})"));
                    continue;
                }
            };
            let model = &file.model;
            match discrepancies(model) {
                Err(e) => {
                    errors += 1;
                    r.push(format!("{key}.status"), format!("error ({e})"));
                    continue;
                }
                Ok(d) if !d.log_terminal => {
                    skipped += 1;
                    let i = d.offenders[0];
                    r.push(
                        format!("{key}.status"),
                        format!("skipped (not log terminal: b={} along {})", d.b[i], model.curve_name(i)),
                    );
                    continue;
                }
                Ok(_) => {}
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index as u64);
            let file_start = Instant::now();
            let mut file_passed = 0;
            for k in 1..=samples {
                cases += 1;
                let case_start = Instant::now();
                let row = random_antinef(model, &mut rng, DEFAULT_MAX_COEFF).and_then(|f0| {
                    let cert = realize(model, &f0)?;
                    Ok((f0, cert))
                });
                let value = match row {
                    Ok((f0, cert)) => {
                        let ok = cert.verification.passed() && cert.f_prime == cert.f;
                        if ok {
                            passed += 1;
                            file_passed += 1;
                        }
                        let failure = cert.verification.first_failure().map(|c| c.name).unwrap_or("none");
                        format!(
                            "{} F0=[{}] Z={} N={} lambda={} first_failure={}",
                            if ok { "pass" } else { "fail" },
                            antinef_core::report::format_divisor(model, &f0),
                            cert.blown_model().num_curves(),
                            cert.scale,
                            cert.lambda,
                            failure
                        )
                    }
                    Err(e) => format!("error ({e})"),
                };
                let _ = writeln!(
                    timings,
                    "{name} sample {k}: {:.3} ms",
                    case_start.elapsed().as_secs_f64() * 1e3
                );
                r.push(format!("{key}.sample.{k}"), value);
            }
            let _ = writeln!(timings, "{name}: {:.3} ms", file_start.elapsed().as_secs_f64() * 1e3);
            r.push(format!("{key}.status"), format!("ok ({file_passed}/{samples} passed)"));
        }
    }
    let _ = writeln!(timings, "total: {:.3} ms", start.elapsed().as_secs_f64() * 1e3);
    r.push("total.cases", cases);
    r.push("total.passed", passed);
    r.push("total.skipped_files", skipped);
    r.push("total.error_files", errors);
    Outcome::verdict(r, passed == cases && errors == 0)
}
