//! Command-line front end: parse groups and set specs, run verification
//! suites and sharpness sweeps, check dissociation, and emit JSON-lines or
//! CSV reports.
//!
//! Exit codes: 0 pass, 1 assertion or budget failure, 2 usage error,
//! 3 resource cap exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Print a line to stdout, tolerating a closed pipe (e.g. `lacuna ... | head`).
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

use lacuna_core::dissociation::{
    greedy_dissociated, is_dissociated, subspace, Dissociation, ScanOrder, SetMask,
};
use lacuna_core::group::GroupSpec;
use lacuna_core::harness::{
    run_suite, sharpness_sweep, to_csv, to_jsonl, ConstantsLedger, IneqFamily, Suite, SuiteConfig,
    SweepConfig, DEFAULT_BUDGET,
};
use lacuna_core::Error;

#[derive(Parser)]
#[command(
    name = "lacuna",
    version,
    about = "Verification laboratory for Fourier analysis on finite abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite.
    Verify {
        /// identities | spectra | chebotarev | uncertainty | inequalities | all
        #[arg(long)]
        suite: String,
        /// Group spec, e.g. `12`, `2,2,3`, `2^5`; default: the standard list.
        #[arg(long)]
        group: Option<String>,
        /// Restrict prime-driven suites to this prime.
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ratio budget for inequality records.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: f64,
        /// Random repetitions per group in identity batteries.
        #[arg(long, default_value_t = 50)]
        reps: usize,
        /// Multiplier on the pinned identity tolerances.
        #[arg(long, default_value_t = 1.0)]
        tol: f64,
        /// Write inequality records here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Jsonl)]
        format: Format,
    },
    /// Sweep one inequality family over seeded instances of a group.
    Sweep {
        /// rudin | chang | mu1 | higher-moment | conv-energy | level-set | bilinear
        #[arg(long)]
        ineq: String,
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: f64,
        /// Moment order for the rudin family.
        #[arg(long, default_value_t = 4)]
        p: u32,
        /// Convolution length for higher-moment / conv-energy.
        #[arg(long, default_value_t = 2)]
        l: usize,
        /// Fixed level for level-set; 0 picks half the observed max.
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// Fixed dissociated set (set spec) instead of random ones.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Jsonl)]
        format: Format,
    },
    /// Dissociation tooling.
    Dissoc {
        #[command(subcommand)]
        command: DissocCommand,
    },
}

#[derive(Subcommand)]
enum DissocCommand {
    /// Decide dissociativity; prints `dissociated` or a witness.
    Check {
        #[arg(long)]
        group: String,
        #[arg(long)]
        set: String,
    },
    /// Extract a greedy maximal dissociated subset.
    Greedy {
        #[arg(long)]
        group: String,
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "asc")]
        order: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Set spec mini-grammar: explicit index list `1,2,3`,
/// `random:<size>:<seed>`, `interval:<a>:<b>`, `subspace:<g1,g2,...>`.
fn parse_set(group: &GroupSpec, spec: &str) -> Result<SetMask, Error> {
    let bad = |reason: &str| Error::ParseSet {
        spec: spec.to_string(),
        reason: reason.to_string(),
    };
    if let Some(rest) = spec.strip_prefix("random:") {
        let (size, seed) = rest.split_once(':').ok_or_else(|| bad("want size:seed"))?;
        let size: usize = size.parse().map_err(|_| bad("bad size"))?;
        let seed: u64 = seed.parse().map_err(|_| bad("bad seed"))?;
        return SetMask::random(group.clone(), size, seed);
    }
    if let Some(rest) = spec.strip_prefix("interval:") {
        let (a, b) = rest.split_once(':').ok_or_else(|| bad("want a:b"))?;
        let a: usize = a.parse().map_err(|_| bad("bad endpoint"))?;
        let b: usize = b.parse().map_err(|_| bad("bad endpoint"))?;
        if a > b || b >= group.order() {
            return Err(bad("empty or out-of-range interval"));
        }
        let idx: Vec<usize> = (a..=b).collect();
        return SetMask::from_indices(group.clone(), &idx);
    }
    if let Some(rest) = spec.strip_prefix("subspace:") {
        let gens = parse_indices(group, rest).map_err(|_| bad("bad generator list"))?;
        return subspace(group, &gens);
    }
    let elems = parse_indices(group, spec).map_err(|_| bad("bad index list"))?;
    SetMask::from_indices(
        group.clone(),
        &elems.iter().map(|e| e.0).collect::<Vec<_>>(),
    )
}

fn parse_indices(
    group: &GroupSpec,
    list: &str,
) -> Result<Vec<lacuna_core::group::Element>, Error> {
    list.split(',')
        .map(|tok| {
            let idx: usize = tok.trim().parse().map_err(|_| Error::ParseSet {
                spec: list.to_string(),
                reason: format!("`{tok}` is not an index"),
            })?;
            group.element(idx)
        })
        .collect()
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::ParseGroup { .. }
        | Error::ParseSet { .. }
        | Error::UnknownSuite(_)
        | Error::UnknownInequality(_)
        | Error::Precondition(_)
        | Error::IndexOutOfRange { .. }
        | Error::NotPrime(_)
        | Error::BadGroupShape(_) => 2,
        Error::DissociationCap { .. } | Error::MatrixCap { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_for(&err))
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Verify {
            suite,
            group,
            p,
            seed,
            budget,
            reps,
            tol,
            out,
            format,
        } => {
            let suite = Suite::parse(&suite)?;
            let cfg = SuiteConfig {
                group: group.as_deref().map(GroupSpec::parse).transpose()?,
                prime: p,
                seed,
                budget,
                reps,
                tol_scale: tol,
            };
            let outcome = run_suite(suite, &cfg)?;
            for check in &outcome.checks {
                out!("{}", check.render());
            }
            if let Some(path) = out {
                write_reports(&path, format, &outcome.reports)?;
            }
            let failed = outcome.checks.iter().filter(|c| !c.pass).count()
                + outcome.reports.iter().filter(|r| !r.pass).count();
            if outcome.pass {
                out!(
                    "suite PASS ({} checks, {} records)",
                    outcome.checks.len(),
                    outcome.reports.len()
                );
                Ok(0)
            } else {
                out!("suite FAIL ({failed} failing)");
                Ok(1)
            }
        }
        Command::Sweep {
            ineq,
            group,
            instances,
            seed,
            budget,
            p,
            l,
            r,
            lambda,
            out,
            format,
        } => {
            let family = IneqFamily::parse(&ineq)?;
            let group = GroupSpec::parse(&group)?;
            let fixed_lambda = lambda
                .as_deref()
                .map(|s| parse_set(&group, s))
                .transpose()?;
            let cfg = SweepConfig {
                family,
                group,
                instances,
                seed,
                budget,
                moment_p: p,
                conv_l: l,
                level_r: r,
                fixed_lambda,
            };
            let outcome = sharpness_sweep(&cfg)?;
            write_reports(&out, format, &outcome.reports)?;

            // running empirical constants, merged by max
            let ledger_path = out
                .parent()
                .map(|d| d.join("constants.json"))
                .unwrap_or_else(|| PathBuf::from("constants.json"));
            let mut ledger = ConstantsLedger::load(&ledger_path)?;
            ledger.observe_all(&outcome.reports);
            ledger.save(&ledger_path)?;

            out!(
                "{} records, max ratio {:.6}, empirical constant {:.6}",
                outcome.reports.len(),
                outcome.max_ratio,
                outcome.empirical_constant
            );
            out!("top ratios:");
            for rec in outcome.reports.iter().take(5) {
                out!(
                    "  {:<14} {:<10} ratio={:<12.6} lhs={:<14.6e} rhs_core={:<14.6e} {}",
                    rec.name,
                    rec.variant.as_deref().unwrap_or("-"),
                    rec.ratio,
                    rec.lhs,
                    rec.rhs_core,
                    rec.instance
                );
            }
            let failing: Vec<_> = outcome.reports.iter().filter(|r| !r.pass).collect();
            if failing.is_empty() {
                Ok(0)
            } else {
                out!("{} records over budget:", failing.len());
                for rec in failing.iter().take(10) {
                    out!("  ratio={:.6} {}", rec.ratio, rec.instance);
                }
                Ok(1)
            }
        }
        Command::Dissoc { command } => match command {
            DissocCommand::Check { group, set } => {
                let group = GroupSpec::parse(&group)?;
                let mask = parse_set(&group, &set)?;
                match is_dissociated(&mask)? {
                    Dissociation::Dissociated => out!("dissociated"),
                    Dissociation::Witness(eps) => {
                        let signs: Vec<String> = eps
                            .iter()
                            .map(|&e| match e {
                                1 => "+1".to_string(),
                                -1 => "-1".to_string(),
                                _ => "0".to_string(),
                            })
                            .collect();
                        out!("witness: {}", signs.join(" "));
                    }
                }
                Ok(0)
            }
            DissocCommand::Greedy {
                group,
                set,
                order,
                seed,
            } => {
                let group = GroupSpec::parse(&group)?;
                let mask = parse_set(&group, &set)?;
                let order = match order.as_str() {
                    "asc" => ScanOrder::Ascending,
                    "desc" => ScanOrder::Descending,
                    "shuffle" => ScanOrder::Shuffled(seed),
                    other => {
                        return Err(Error::ParseSet {
                            spec: other.to_string(),
                            reason: "order must be asc, desc or shuffle".into(),
                        })
                    }
                };
                let chosen = greedy_dissociated(&mask, order);
                let idx: Vec<String> = chosen
                    .elements()
                    .iter()
                    .map(|e| e.0.to_string())
                    .collect();
                out!("{}", idx.join(","));
                Ok(0)
            }
        },
    }
}

fn write_reports(
    path: &PathBuf,
    format: Format,
    reports: &[lacuna_core::harness::InequalityReport],
) -> Result<(), Error> {
    let body = match format {
        Format::Jsonl => to_jsonl(reports)?,
        Format::Csv => to_csv(reports),
    };
    std::fs::write(path, body)?;
    Ok(())
}
