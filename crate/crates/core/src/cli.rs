//! Batch command-line front end.
//!
//! Exit codes: 0 on success (including informational checks of unstable
//! chains), 1 when a sweep finds a violation or a numeric check fails, 2 on
//! usage errors or inputs that do not meet a command's preconditions.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::chain::{
    enumerate_chains, hitchin_invariants, is_admissible, multiplicities, tail_slopes, three_term_holds,
    Admissibility, ChainHiggsBundle, EnumerationParams, MultiplicityProfile, RootSequence, StabilityReport,
    ThreeTermCheck,
};
use crate::error::Error;
use crate::filtered::{
    filtered_degree_bundle, filtered_degree_rep, rank1_degrees, rank1_jump, rank1_residue_angle,
    residue_rep_to_connection, residue_rep_to_higgs, slope_bundle, FilteredBundleData, FilteredJumpData, Jump,
    ResidueBlockData, SideResidue,
};
use crate::harmonic::{FiniteDiffScheme, UpperHalfPoint};
use crate::metric_checks::{run_suite, MetricCheck, MetricSuiteConfig};
use crate::pairing::{build_matching, verify_certificate, MatchingCertificate, PairingError};
use crate::ratio::{self, parse_rational, Rational};
use crate::sweep::{sweep, SweepParams, SweepReport};

pub const WORKERS_ENV: &str = "HIGGS_THREETERM_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "higgs-threeterm", version, about = "Chain-type Higgs bundles and the three-term inequality")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep normalized chains and check the three-term inequality on every stable one.
    Enumerate {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value_t = 8)]
        max_rise: i64,
        #[arg(long, default_value_t = 10)]
        root_bound: i64,
        #[arg(long, env = WORKERS_ENV, default_value_t = 1)]
        workers: usize,
        /// List the chains instead of sweeping.
        #[arg(long)]
        list: bool,
        /// With --list, include admissible chains that are not stable.
        #[arg(long, requires = "list")]
        include_unstable: bool,
    },
    /// Admissibility, stability, multiplicities and the three-term inequality for one chain.
    Check {
        #[arg(long, allow_hyphen_values = true)]
        roots: String,
    },
    /// Matching certificates for a stable admissible chain.
    Pair {
        #[arg(long, allow_hyphen_values = true)]
        roots: String,
        /// Only this height; defaults to every realized height.
        #[arg(long, allow_hyphen_values = true)]
        height: Option<i64>,
    },
    /// Translate a residue block from the representation side.
    Translate {
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// The rank-one filtered character (χ^a, b) of PSL_2(Z).
    Rank1 {
        #[arg(long)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Filtered degree (and slope, on the bundle side).
    FilteredDegree {
        #[arg(long, value_enum)]
        side: SideArg,
        /// One cusp's jumps as `value:dim,value:dim`; repeat for more cusps.
        #[arg(long, allow_hyphen_values = true)]
        jumps: Vec<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        base_degree: String,
        #[arg(long)]
        rank: Option<u32>,
    },
    /// Numeric checks of the inclusion-representation harmonic metric.
    VerifyMetric {
        /// Sample point `x+yi`; repeatable. Overrides the random grid.
        #[arg(long, allow_hyphen_values = true)]
        tau: Vec<String>,
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
        #[arg(long, default_value_t = 1e-3)]
        nested_h: f64,
        /// Replace every residual tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value_t = 20)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Rep,
    Bundle,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub roots: RootSequence,
    pub admissible: bool,
    pub admissibility: Admissibility,
    pub stable: bool,
    pub stability: StabilityReport,
    pub multiplicities: MultiplicityProfile,
    pub three_term: ThreeTermCheck,
    /// Present only for admissible chains.
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_vec_rational")]
    pub hitchin_invariants: Option<Vec<Rational>>,
}

mod opt_vec_rational {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => ratio::vec_as_string::serialize(v, s),
            None => s.serialize_none(),
        }
    }
}

pub fn check_report(roots: RootSequence) -> CheckReport {
    let admissibility = is_admissible(&roots);
    let hitchin = ChainHiggsBundle::new(roots.clone()).ok().map(|b| hitchin_invariants(&b));
    let profile = multiplicities(&roots);
    let stability = tail_slopes(&roots);
    CheckReport {
        stable: stability.verdict.is_stable(),
        admissible: admissibility.admissible,
        admissibility,
        stability,
        three_term: three_term_holds(&profile),
        multiplicities: profile,
        hitchin_invariants: hitchin,
        roots,
    }
}

#[derive(Debug, Serialize)]
pub struct TranslateReport {
    pub representation: ResidueBlockData,
    pub connection: SideResidue,
    pub higgs: SideResidue,
}

#[derive(Debug, Serialize)]
pub struct Rank1Report {
    pub a: i64,
    #[serde(with = "ratio::as_string")]
    pub b: Rational,
    #[serde(with = "ratio::as_string")]
    pub jump: Rational,
    #[serde(with = "ratio::as_string")]
    pub unfiltered_degree: Rational,
    #[serde(with = "ratio::as_string")]
    pub filtered_degree: Rational,
    #[serde(with = "ratio::as_string")]
    pub residue_angle: Rational,
}

#[derive(Debug, Serialize)]
pub struct DegreeReport {
    pub side: &'static str,
    #[serde(with = "ratio::as_string")]
    pub degree: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct PairReport {
    pub roots: RootSequence,
    pub certificates: Vec<MatchingCertificate>,
    pub verified: bool,
}

enum Outcome {
    Pass(String),
    Fail(String),
}

struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn parse_jumps(spec: &str) -> Result<Vec<Jump>, Usage> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (v, d) = item
                .split_once(':')
                .ok_or_else(|| Usage(format!("jump {item:?} is not value:dim")))?;
            let dim = d.trim().parse().map_err(|_| Usage(format!("bad dimension in {item:?}")))?;
            Ok(Jump::new(parse_rational(v)?, dim))
        })
        .collect()
}

fn csv_line(fields: &[String]) -> String {
    fields.join(",") + "\n"
}

fn execute(cli: &Cli) -> Result<Outcome, Usage> {
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::Enumerate { n_min, n_max, max_rise, root_bound, workers, list, include_unstable } => {
            if *list {
                let params = EnumerationParams {
                    n_min: *n_min,
                    n_max: *n_max,
                    max_rise: *max_rise,
                    root_bound: *root_bound,
                    require_stable: !include_unstable,
                };
                let chains: Vec<RootSequence> = enumerate_chains(params)?.collect();
                let text = if csv {
                    chains
                        .iter()
                        .map(|c| format!("\"{}\"\n", c.roots().iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
                        .collect()
                } else {
                    serde_json::to_string(&chains).expect("serializes") + "\n"
                };
                return Ok(Outcome::Pass(text));
            }
            let params = SweepParams { n_min: *n_min, n_max: *n_max, max_rise: *max_rise, root_bound: *root_bound };
            let report = sweep(params, *workers)?;
            let text = if csv { sweep_csv(&report) } else { to_json(&report) };
            Ok(if report.pass { Outcome::Pass(text) } else { Outcome::Fail(text) })
        }
        Command::Check { roots } => {
            let report = check_report(roots.parse()?);
            let text = if csv {
                let s = &report.stability;
                let mut out = csv_line(&["roots", "admissible", "total_slope", "verdict", "three_term_holds"].map(String::from));
                out += &csv_line(&[
                    format!("\"{}\"", report.roots.roots().iter().map(i64::to_string).collect::<Vec<_>>().join(",")),
                    report.admissible.to_string(),
                    s.total_slope.to_string(),
                    serde_json::to_value(s.verdict).expect("serializes")["kind"].as_str().unwrap_or("").to_string(),
                    report.three_term.holds.to_string(),
                ]);
                out
            } else {
                to_json(&report)
            };
            Ok(Outcome::Pass(text))
        }
        Command::Pair { roots, height } => {
            let roots: RootSequence = roots.parse()?;
            let heights: Vec<i64> = match height {
                Some(h) => vec![*h],
                None => multiplicities(&roots).heights().collect(),
            };
            let mut certificates = Vec::new();
            for h in heights {
                match build_matching(&roots, h) {
                    Ok(c) => certificates.push(c),
                    Err(PairingError::Hypothesis(e)) => return Err(e.into()),
                    Err(e @ PairingError::Counterexample(_)) => return Ok(Outcome::Fail(format!("{e}\n"))),
                }
            }
            let verified = certificates.iter().all(|c| verify_certificate(&roots, c).valid);
            let text = if csv {
                let mut out = csv_line(&["height", "source", "target", "label"].map(String::from));
                for c in &certificates {
                    for p in &c.pairs {
                        out += &csv_line(&[c.height.to_string(), p.source.to_string(), p.target.to_string(), p.label.to_string()]);
                    }
                }
                out
            } else if height.is_some() {
                to_json(&certificates[0])
            } else {
                to_json(&PairReport { roots, certificates, verified })
            };
            Ok(if verified { Outcome::Pass(text) } else { Outcome::Fail(text) })
        }
        Command::Translate { beta, u, v } => {
            let blk = ResidueBlockData::new(parse_rational(beta)?, parse_rational(u)?, parse_rational(v)?)?;
            let report = TranslateReport {
                representation: blk,
                connection: residue_rep_to_connection(&blk),
                higgs: residue_rep_to_higgs(&blk),
            };
            let text = if csv {
                let mut out = csv_line(&["side", "jump", "eig_re", "eig_im"].map(String::from));
                for (side, r) in [("connection", report.connection), ("higgs", report.higgs)] {
                    out += &csv_line(&[side.into(), r.jump.to_string(), r.eigenvalue.re.to_string(), r.eigenvalue.im.to_string()]);
                }
                out
            } else {
                to_json(&report)
            };
            Ok(Outcome::Pass(text))
        }
        Command::Rank1 { a, b } => {
            let b = parse_rational(b)?;
            let degrees = rank1_degrees(*a, b)?;
            let report = Rank1Report {
                a: *a,
                b,
                jump: rank1_jump(*a, b)?,
                unfiltered_degree: degrees.unfiltered,
                filtered_degree: degrees.filtered,
                residue_angle: rank1_residue_angle(*a)?,
            };
            let text = if csv {
                csv_line(&["a", "b", "jump", "unfiltered_degree", "filtered_degree", "residue_angle"].map(String::from))
                    + &csv_line(&[
                        report.a.to_string(),
                        report.b.to_string(),
                        report.jump.to_string(),
                        report.unfiltered_degree.to_string(),
                        report.filtered_degree.to_string(),
                        report.residue_angle.to_string(),
                    ])
            } else {
                to_json(&report)
            };
            Ok(Outcome::Pass(text))
        }
        Command::FilteredDegree { side, jumps, base_degree, rank } => {
            let cusps = jumps.iter().map(|j| parse_jumps(j)).collect::<Result<Vec<_>, _>>()?;
            let report = match side {
                SideArg::Rep => DegreeReport {
                    side: "representation",
                    degree: filtered_degree_rep(&FilteredJumpData::representation(cusps)?)?,
                    slope: None,
                },
                SideArg::Bundle => {
                    let rank = rank.ok_or_else(|| Usage("--rank is required for the bundle side".into()))?;
                    let data = FilteredBundleData::new(parse_rational(base_degree)?, rank, FilteredJumpData::bundle(cusps)?)?;
                    DegreeReport {
                        side: "bundle",
                        degree: filtered_degree_bundle(&data),
                        slope: Some(slope_bundle(&data).to_string()),
                    }
                }
            };
            let text = if csv {
                csv_line(&["side", "degree", "slope"].map(String::from))
                    + &csv_line(&[report.side.into(), report.degree.to_string(), report.slope.clone().unwrap_or_default()])
            } else {
                to_json(&report)
            };
            Ok(Outcome::Pass(text))
        }
        Command::VerifyMetric { tau, h, nested_h, tolerance, grid, seed } => {
            let mut cfg = if tau.is_empty() {
                MetricSuiteConfig::grid(*grid, *seed)
            } else {
                MetricSuiteConfig::at_points(tau.iter().map(|t| t.parse()).collect::<Result<Vec<UpperHalfPoint>, _>>()?)
            };
            cfg.step = FiniteDiffScheme::new(*h)?;
            cfg.nested_step = FiniteDiffScheme::new(*nested_h)?;
            cfg.tolerance = *tolerance;
            let checks: Vec<MetricCheck> = run_suite(&cfg)?;
            let pass = checks.iter().all(|c| c.pass);
            let text = if csv {
                let mut out = csv_line(&["check_name", "max_residual", "tolerance", "pass"].map(String::from));
                for c in &checks {
                    out += &csv_line(&[c.check_name.clone(), format!("{:e}", c.max_residual), format!("{:e}", c.tolerance), c.pass.to_string()]);
                }
                out
            } else {
                to_json(&checks)
            };
            Ok(if pass { Outcome::Pass(text) } else { Outcome::Fail(text) })
        }
    }
}

fn sweep_csv(report: &SweepReport) -> String {
    let mut out = csv_line(
        &[
            "n",
            "generated",
            "admissible",
            "stable",
            "marginal",
            "unstable",
            "unstable_three_term_failures",
            "certificates_verified",
        ]
        .map(String::from),
    );
    for h in &report.histograms {
        let c = &h.counts;
        out += &csv_line(&[
            h.n.to_string(),
            c.generated.to_string(),
            c.admissible.to_string(),
            c.stable.to_string(),
            c.marginal.to_string(),
            c.unstable.to_string(),
            c.unstable_three_term_failures.to_string(),
            c.certificates_verified.to_string(),
        ]);
    }
    out
}

/// Parses `args` (program name first), runs the command and writes its
/// report to `--out` or `stdout`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 2;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };

    let (text, code) = match execute(&cli) {
        Ok(Outcome::Pass(t)) => (t, 0),
        Ok(Outcome::Fail(t)) => (t, 1),
        Err(Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 2;
        }
    };

    let written = match &cli.out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(text.as_bytes())),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return 2;
    }
    code
}

pub fn main_with_std() -> i32 {
    run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock())
}
