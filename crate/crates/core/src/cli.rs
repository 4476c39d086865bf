//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 domain error, 4 I/O error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::bounds::{self, BoundSpec, Mode, Variant};
use crate::measures::{self, MeasureKind, MeasureVector};
use crate::numfmt::fmt_g;
use crate::state_spec::{parse_number, StateSpec};
use crate::verify::{self, Axis, BetaGrid, Example, ExponentChoice, Tolerance, VerificationReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_IO: u8 = 4;

/// Environment variable supplying the default seed for `verify`.
pub const SEED_ENV: &str = "MONOGAMY_SEED";

/// `α` grid used by the monogamy suite.
pub const ALPHA_GRID: [f64; 8] = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

fn io_err(context: impl Into<String>) -> impl FnOnce(io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "monogamy",
    version,
    about = "Weighted monogamy and polygamy bounds on small multiqubit states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the one-vs-rest and pairwise values of a measure.
    ///
    /// States: `schmidt3:l0,l1,l2,l3,l4[,phi]`, `wclass:a,b,c`, `haar:2x2x2:SEED`.
    /// Numbers may be expressions such as `sqrt(6)/6`.
    Measure {
        #[arg(long)]
        state: String,
        /// concurrence, negativity_scren, screnoa or concurrence_assistance
        #[arg(long, default_value = "concurrence")]
        kind: MeasureKind,
    },
    /// Evaluate a weighted bound on a state and report the margin.
    Bound {
        #[arg(long)]
        state: String,
        #[arg(long, default_value = "concurrence")]
        kind: MeasureKind,
        /// monogamy (lower bound) or polygamy (upper bound)
        #[arg(long, default_value = "monogamy")]
        mode: Mode,
        /// Ratio parameter; defaults to the largest admissible value.
        #[arg(long, value_parser = parse_real)]
        a: Option<f64>,
        /// r for monogamy, s for polygamy
        #[arg(long, value_parser = parse_real)]
        base_exp: f64,
        /// alpha for monogamy, beta for polygamy
        #[arg(long, value_parser = parse_real)]
        target_exp: f64,
        /// ours, jfq, zjz1 or zjz2
        #[arg(long, default_value = "ours")]
        variant: String,
        /// Parameter p (or q) of zjz1
        #[arg(long, value_parser = parse_real, default_value = "0.5")]
        p: f64,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Write the bound surfaces of an example as CSV.
    Repro {
        example: ExampleArg,
        /// Output file, or `-` for stdout.
        #[arg(long, default_value = "-")]
        out: String,
        /// Target exponent axis as START:STOP:STEP (alpha or beta).
        #[arg(long)]
        target_range: Option<String>,
        /// Base exponent axis as START:STOP:STEP (r or s).
        #[arg(long)]
        base_range: Option<String>,
    },
    /// Run randomized verification suites and print a JSON summary.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Samples per family (scalar) or states (monogamy uses n/10 four-qubit states on top).
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 1)]
        seed: u64,
        /// Absolute tolerance override for every suite.
        #[arg(long, value_parser = parse_real)]
        tol: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleArg {
    Example1,
    Example2,
}

impl From<ExampleArg> for Example {
    fn from(e: ExampleArg) -> Self {
        match e {
            ExampleArg::Example1 => Example::Example1,
            ExampleArg::Example2 => Example::Example2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Scalar,
    Monogamy,
    Polygamy,
    Dominance,
    All,
}

fn parse_real(s: &str) -> Result<f64, String> {
    parse_number(s).map_err(|e| e.to_string())
}

fn parse_axis(name: &str, spec: &str) -> Result<Axis, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(CliError::Usage(format!(
            "{name} range must be START:STOP:STEP, got '{spec}'"
        )));
    };
    let num = |s: &str| parse_real(s).map_err(CliError::Usage);
    Ok(Axis::new(name, num(start)?, num(stop)?, num(step)?))
}

fn build_state(state: &str) -> Result<crate::states::PureState, CliError> {
    let spec: StateSpec = state
        .parse()
        .map_err(|e| CliError::Usage(format!("--state: {e}")))?;
    spec.build().map_err(domain)
}

fn compute_vector(state: &str, kind: MeasureKind) -> Result<MeasureVector, CliError> {
    let psi = build_state(state)?;
    measures::measure_vector(&psi, kind).map_err(domain)
}

fn fmt_list(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|&v| fmt_g(v)).collect();
    format!("[{}]", items.join(", "))
}

/// Runs a parsed command, writing normal output to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Measure { state, kind } => {
            let mv = compute_vector(&state, kind)?;
            writeln!(
                out,
                "kind: {}\none_vs_rest: {}\npairwise: {}",
                mv.kind,
                fmt_g(mv.one_vs_rest),
                fmt_list(&mv.pairwise)
            )
            .map_err(io_err("stdout"))?;
            Ok(EXIT_OK)
        }
        Command::Bound {
            state,
            kind,
            mode,
            a,
            base_exp,
            target_exp,
            variant,
            p,
            json,
        } => {
            let variant = match variant.parse::<Variant>().map_err(CliError::Usage)? {
                Variant::Zjz1(_) if !variant.contains(['(', ':']) => Variant::Zjz1(p),
                v => v,
            };
            let mv = compute_vector(&state, kind)?;
            let spec = BoundSpec {
                a,
                base_exp,
                target_exp,
                variant,
            };
            let report = bounds::bound_report(&mv, mode, &spec).map_err(domain)?;
            let text = if json {
                serde_json::to_string_pretty(&report).expect("report serializes")
            } else {
                let max_a = if report.max_admissible_a.is_finite() {
                    fmt_g(report.max_admissible_a)
                } else {
                    "inf".to_string()
                };
                format!(
                    "mode: {}\nkind: {}\nvariant: {}\na: {}\nbase_exp: {}\ntarget_exp: {}\nbound: {}\nmeasured: {}\nmargin: {}\nratio_condition_ok: {}\nmax_admissible_a: {}\nbase_relation_assumed: {}",
                    report.mode,
                    mv.kind,
                    report.variant,
                    fmt_g(report.a),
                    fmt_g(report.base_exp),
                    fmt_g(report.target_exp),
                    fmt_g(report.bound_value),
                    fmt_g(report.measured_value),
                    fmt_g(report.margin),
                    report.ratio_condition_ok,
                    max_a,
                    report.base_relation_assumed
                )
            };
            writeln!(out, "{text}").map_err(io_err("stdout"))?;
            Ok(EXIT_OK)
        }
        Command::Repro {
            example,
            out: path,
            target_range,
            base_range,
        } => {
            let example = Example::from(example);
            let mut grid = example.default_grid();
            if let Some(r) = target_range {
                grid.inner = parse_axis(&grid.inner.name.clone(), &r)?;
            }
            if let Some(r) = base_range {
                grid.outer = parse_axis(&grid.outer.name.clone(), &r)?;
            }
            let table = verify::dominance_scan(example, &grid).map_err(domain)?;
            let csv = table.to_csv();
            if path == "-" {
                out.write_all(csv.as_bytes()).map_err(io_err("stdout"))?;
            } else {
                let path = PathBuf::from(path);
                fs::write(&path, csv).map_err(io_err(format!("writing {}", path.display())))?;
            }
            let check = table.check(Tolerance::DOMINANCE);
            if !check.passed() {
                eprintln!(
                    "dominance check failed at {} of {} cells",
                    check.failures, check.total
                );
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            suite,
            n,
            seed,
            tol,
        } => {
            let (reports, combined) = run_verify(suite, n, seed, tol)?;
            let suites: serde_json::Map<String, serde_json::Value> = reports
                .iter()
                .map(|(name, r)| {
                    (
                        name.to_string(),
                        serde_json::to_value(r).expect("report serializes"),
                    )
                })
                .collect();
            let doc = json!({
                "seed": seed,
                "n": n,
                "suites": suites,
                "total": combined.total,
                "failures": combined.failures,
                "skipped": combined.skipped,
                "worst_margin": combined.worst_margin,
                "passed": combined.passed(),
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("summary serializes")
            )
            .map_err(io_err("stdout"))?;
            Ok(if combined.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            })
        }
    }
}

type NamedReports = Vec<(&'static str, VerificationReport)>;

/// Runs the selected suites; also returns the combined report.
pub fn run_verify(
    suite: Suite,
    n: usize,
    seed: u64,
    tol: Option<f64>,
) -> Result<(NamedReports, VerificationReport), CliError> {
    let pick = |default: Tolerance| tol.map_or(default, |t| Tolerance { abs: t, ..default });
    let wants = |s: Suite| suite == s || suite == Suite::All;
    let mut reports: NamedReports = Vec::new();
    if wants(Suite::Scalar) {
        reports.push((
            "scalar",
            verify::verify_scalar(n, seed, pick(Tolerance::SCALAR)),
        ));
    }
    if wants(Suite::Monogamy) {
        let tol = pick(Tolerance::STATES);
        let mut rep =
            verify::verify_monogamy_states(n, 3, seed, 2.0, &ALPHA_GRID, tol).map_err(domain)?;
        rep.merge(
            verify::verify_monogamy_states(n / 10, 4, seed.wrapping_add(1), 2.0, &ALPHA_GRID, tol)
                .map_err(domain)?,
        );
        reports.push(("monogamy", rep));
    }
    if wants(Suite::Polygamy) {
        let grid = BetaGrid::Span {
            points: 8,
            stop: 3.0,
        };
        let rep = verify::verify_polygamy_states(
            n,
            seed,
            ExponentChoice::PerSample,
            None,
            &grid,
            pick(Tolerance::STATES),
        )
        .map_err(domain)?;
        reports.push(("polygamy", rep));
    }
    if wants(Suite::Dominance) {
        let tol = pick(Tolerance::DOMINANCE);
        let mut rep = VerificationReport::new();
        for ex in [Example::Example1, Example::Example2] {
            rep.merge(
                verify::dominance_scan(ex, &ex.default_grid())
                    .map_err(domain)?
                    .check(tol),
            );
        }
        reports.push(("dominance", rep));
    }
    let mut combined = VerificationReport::new();
    for (_, r) in &reports {
        combined.merge(r.clone());
    }
    Ok((reports, combined))
}

/// Parses `args` and runs, printing errors to stderr. Returns the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(CliError::Io { source, .. }) if source.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (u8, String) {
        let mut buf = Vec::new();
        let code = main_with_args(
            std::iter::once("monogamy").chain(args.iter().copied()),
            &mut buf,
        );
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn measure_example1() {
        let (code, out) = run_args(&[
            "measure",
            "--state",
            "schmidt3:0.5,0.40824829,0.40824829,0.5,0.40824829",
            "--kind",
            "concurrence",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("one_vs_rest: 0.76376261"), "{out}");
        assert!(out.contains("pairwise: [0.40824829"), "{out}");
        let (_, exact) = run_args(&[
            "measure",
            "--state",
            "schmidt3:1/2,sqrt(6)/6,sqrt(6)/6,1/2,sqrt(6)/6",
        ]);
        assert!(
            exact.contains("one_vs_rest: 0.763762615826\npairwise: [0.408248290464, 0.5]"),
            "{exact}"
        );
    }

    #[test]
    fn measure_example2() {
        let (code, out) = run_args(&[
            "measure",
            "--state",
            "wclass:0.5,0.5,0.70710678",
            "--kind",
            "screnoa",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("one_vs_rest: 0.75000000"), "{out}");
        assert!(out.contains("pairwise: [0.25000000"), "{out}");
        let (_, exact) = run_args(&[
            "measure",
            "--state",
            "wclass:1/2,1/2,sqrt(2)/2",
            "--kind",
            "screnoa",
        ]);
        assert!(
            exact.contains("one_vs_rest: 0.75\npairwise: [0.25, 0.5]"),
            "{exact}"
        );
    }

    #[test]
    fn measure_errors() {
        assert_eq!(run_args(&["measure", "--state", "ghz:1"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["measure", "--state", "wclass:1,1"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["measure", "--state", "wclass:1,1,1"]).0,
            EXIT_DOMAIN
        );
        assert_eq!(
            run_args(&["measure", "--state", "haar:3x3x3:1"]).0,
            EXIT_DOMAIN
        );
        assert_eq!(
            run_args(&["measure", "--state", "haar:2x2x2:1", "--kind", "bogus"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn bound_example1() {
        let state = "schmidt3:1/2,sqrt(6)/6,sqrt(6)/6,1/2,sqrt(6)/6";
        let (code, out) = run_args(&[
            "bound",
            "--state",
            state,
            "--a",
            "1.22474487",
            "--base-exp",
            "2",
            "--target-exp",
            "1",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("bound: 0.6446878"), "{out}");
        assert!(out.contains("measured: 0.763762615826"), "{out}");
        let (_, jfq) = run_args(&[
            "bound",
            "--state",
            state,
            "--a",
            "1.22474487",
            "--base-exp",
            "2",
            "--target-exp",
            "1",
            "--variant",
            "jfq",
        ]);
        assert!(jfq.contains("bound: 0.6303346"), "{jfq}");
        let (_, auto) = run_args(&[
            "bound",
            "--state",
            state,
            "--base-exp",
            "2",
            "--target-exp",
            "1",
        ]);
        assert!(
            auto.contains("a: 1.5\n") && auto.contains("max_admissible_a: 1.5\n"),
            "{auto}"
        );
    }

    #[test]
    fn bound_errors_and_negative_margin() {
        let state = "schmidt3:1/2,sqrt(6)/6,sqrt(6)/6,1/2,sqrt(6)/6";
        assert_eq!(
            run_args(&[
                "bound",
                "--state",
                state,
                "--base-exp",
                "1",
                "--target-exp",
                "1"
            ])
            .0,
            EXIT_DOMAIN
        );
        // base relation assumed (and false): reported, not an error
        let (code, out) = run_args(&[
            "bound",
            "--state",
            "schmidt3:sqrt(1/2),0,0,0,sqrt(1/2)",
            "--mode",
            "polygamy",
            "--base-exp",
            "1",
            "--target-exp",
            "1",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("base_relation_assumed: true"), "{out}");
        assert!(out.contains("margin: -"), "{out}");
    }

    #[test]
    fn verify_scalar_zero() {
        let (code, out) = run_args(&["verify", "--suite", "scalar", "--n", "0", "--seed", "3"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["suites"]["scalar"]["total"], 0);
        assert_eq!(v["passed"], true);
        assert_eq!(run_args(&["verify", "--suite", "nope"]).0, EXIT_USAGE);
    }

    #[test]
    fn repro_to_stdout() {
        let (code, out) = run_args(&[
            "repro",
            "example1",
            "--target-range",
            "0:1:0.5",
            "--base-range",
            "2:3:1",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 1 + 3 * 2);
        assert_eq!(out.lines().next(), Some("alpha,r,Z1,Z2,Z3"));
        assert_eq!(
            run_args(&["repro", "example1", "--target-range", "0:1"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["repro", "example2", "--base-range", "0.2:0.4:0.1"]).0,
            EXIT_DOMAIN
        );
    }
}
