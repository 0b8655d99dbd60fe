//! `s2det` command-line front end. Reports are JSON on stdout (or `--output`).
//!
//! Exit status: 0 ok, 1 invariant violated (report carries the counterexample),
//! 2 usage or input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use s2det::error::Error;
use s2det::geometry::assert_vanishing;
use s2det::io::{
    instance_to_json, matrix_to_json, parse_instance, parse_partition, parse_points,
    points_to_json, witness_to_json,
};
use s2det::linalg::det_at;
use s2det::oracle::{committed_golden, generate_golden, GoldenValues};
use s2det::partitions::{is_cycle_free, partition_to_tensor, survey_exhaustive, survey_samples};
use s2det::verify::{run_all, VerifyConfig};
use s2det::{build_a, build_at, build_ed, build_mk, det_s2, FieldSpec};

#[derive(Parser)]
#[command(name = "s2det", version, about = "Exact det^S2 computations over Q and GF(p)")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// det^S2 of a JSON instance.
    Compute {
        #[arg(long)]
        input: PathBuf,
        /// Use A_t with block `t` omitted instead of A_1.
        #[arg(long)]
        omit: Option<usize>,
    },
    /// Print the canonical tensor E_d and its determinant.
    Ed {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        prime: Option<u64>,
    },
    #[command(subcommand)]
    Partition(PartitionCmd),
    /// Geometric witness for the difference tensor of 2d points.
    Geom {
        #[arg(long)]
        points: PathBuf,
    },
    /// Seeded property suites.
    Verify {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Work over GF(prime); rational if omitted.
        #[arg(long)]
        prime: Option<u64>,
    },
    #[command(subcommand)]
    Oracle(OracleCmd),
    #[command(subcommand)]
    Matrix(MatrixCmd),
}

#[derive(Subcommand)]
enum PartitionCmd {
    /// Cycle-freeness against det^S2 != 0 for one partition.
    Check {
        #[arg(long)]
        input: PathBuf,
        /// Evaluate the determinant over GF(prime) instead of Q.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Agreement table over sampled (or all) partitions.
    Survey(SurveyArgs),
}

#[derive(Args)]
struct SurveyArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, required_unless_present = "exhaustive")]
    samples: Option<usize>,
    #[arg(long, required_unless_present = "exhaustive")]
    seed: Option<u64>,
    #[arg(long)]
    prime: u64,
    /// Enumerate every partition instead of sampling.
    #[arg(long)]
    exhaustive: bool,
    /// Allow the d=3 enumeration (3^15 partitions).
    #[arg(long = "override")]
    allow_large: bool,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Recompute the golden values with the slow oracles.
    Regen {
        #[arg(long, default_value = "crates/core/golden/golden.json")]
        golden: PathBuf,
        /// Compare against the file instead of rewriting it.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Subcommand)]
enum MatrixCmd {
    /// Dump a system matrix of an instance.
    Dump {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::A)]
        which: Which,
        /// Block index for `at` and `mk`.
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    A,
    At,
    Mk,
}

/// A report and whether it records a violation.
struct Outcome {
    report: Value,
    violated: bool,
}

impl Outcome {
    fn ok(report: Value) -> Outcome {
        Outcome {
            report,
            violated: false,
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn field_from(prime: Option<u64>) -> Result<FieldSpec, Error> {
    prime.map_or(Ok(FieldSpec::rational()), FieldSpec::prime)
}

fn run(cmd: Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Compute { input, omit } => {
            let t = parse_instance(&read(&input)?)?;
            let det = match omit {
                Some(k) => det_at(&t, k)?,
                None => det_s2(&t),
            };
            Ok(Outcome::ok(json!({ "det": det, "nonzero": !det.is_zero() })))
        }
        Command::Ed { d, prime } => {
            let t = build_ed(d, field_from(prime)?)?;
            let det = det_s2(&t);
            Ok(Outcome::ok(json!({
                "instance": instance_to_json(&t),
                "det": det,
                "nonzero": !det.is_zero(),
            })))
        }
        Command::Partition(PartitionCmd::Check { input, prime }) => {
            let p = parse_partition(&read(&input)?)?;
            let field = field_from(prime)?;
            let cycles = is_cycle_free(&p);
            let det = det_s2(&partition_to_tensor(&p, field));
            let agrees = cycles.cycle_free != det.is_zero();
            Ok(Outcome {
                report: json!({
                    "cycle_free": cycles.cycle_free,
                    "homogeneous": p.is_homogeneous(),
                    "det": det,
                    "agrees": agrees,
                }),
                violated: !agrees,
            })
        }
        Command::Partition(PartitionCmd::Survey(a)) => {
            let report = if a.exhaustive {
                let progress = |done: usize, total: usize| {
                    if done % 16 == 0 || done == total {
                        eprintln!("survey: {done}/{total} chunks");
                    }
                };
                survey_exhaustive(a.d, a.prime, a.allow_large, Some(&progress))?
            } else {
                let samples = a.samples.expect("clap enforces --samples");
                let seed = a.seed.expect("clap enforces --seed");
                survey_samples(a.d, samples, seed, a.prime)?
            };
            let violated = report.table.disagreements() > 0;
            Ok(Outcome {
                report: serde_json::to_value(&report).expect("serializable"),
                violated,
            })
        }
        Command::Geom { points } => {
            let c = parse_points(&read(&points)?)?;
            match assert_vanishing(&c) {
                Ok(rep) => Ok(Outcome::ok(json!({
                    "det": rep.det,
                    "witness": witness_to_json(&rep.witness.witness),
                    "case": rep.witness.case,
                }))),
                Err(e @ Error::Invariant(_)) => Ok(Outcome {
                    report: json!({ "error": e.to_string(), "points": points_to_json(&c) }),
                    violated: true,
                }),
                Err(e) => Err(e),
            }
        }
        Command::Verify {
            d,
            trials,
            seed,
            prime,
        } => {
            let cfg = VerifyConfig {
                d,
                trials,
                seed,
                field: field_from(prime)?,
            };
            let report = run_all(&cfg)?;
            Ok(Outcome {
                violated: !report.passed,
                report: serde_json::to_value(&report).expect("serializable"),
            })
        }
        Command::Oracle(OracleCmd::Regen { golden, check }) => regen(&golden, check),
        Command::Matrix(MatrixCmd::Dump { input, which, k }) => {
            let t = parse_instance(&read(&input)?)?;
            let need_k = || k.ok_or_else(|| Error::Input("--k is required for this matrix".into()));
            let m = match which {
                Which::A => build_a(&t),
                Which::At => build_at(&t, need_k()?)?,
                Which::Mk => build_mk(&t, need_k()?)?,
            };
            Ok(Outcome::ok(matrix_to_json(&m)))
        }
    }
}

fn regen(path: &Path, check: bool) -> Result<Outcome, Error> {
    let fresh = generate_golden()?;
    let fresh_json = serde_json::to_string_pretty(&fresh).expect("serializable") + "\n";
    if !check {
        std::fs::write(path, &fresh_json)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
        return Ok(Outcome::ok(json!({ "written": path.display().to_string(), "golden": fresh })));
    }
    let on_disk: GoldenValues = if path.exists() {
        serde_json::from_str(&read(path)?)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?
    } else {
        committed_golden()
    };
    let matches = on_disk == fresh;
    Ok(Outcome {
        report: json!({ "matches": matches, "committed": on_disk, "recomputed": fresh }),
        violated: !matches,
    })
}

fn emit(out: Option<&Path>, v: &Value) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.output.clone();
    match run(cli.command) {
        Ok(o) => {
            if let Err(e) = emit(out.as_deref(), &o.report) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if o.violated { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_invariant_violation() {
                let _ = emit(out.as_deref(), &json!({ "error": e.to_string() }));
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
