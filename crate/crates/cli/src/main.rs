use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mckay_core::chambers::{bc_map, chambers_value, enumerate_chambers_in_f, surjectivity_report, walls};
use mckay_core::components::{report_csv, report_value, DEFAULT_BUDGET};
use mckay_core::cyclic_oracle::{cross_check, partitions, residue_character};
use mckay_core::groups::{build_group, group_text, group_value, GroupSpec};
use mckay_core::mckay::{graph_value, size, to_dot, RootDatum};
use mckay_core::repspace::jordan::{fixed_point_decompose, hilbert_point, rebuilds_exactly};
use mckay_core::repspace::run_lab;
use mckay_core::weyl::{default_bound, dominant_witness, orbit_witness, weight};
use mckay_core::McKayError;

const EXIT_VALIDATION: u8 = 1;
const EXIT_CHECK_FAILED: u8 = 2;

#[derive(Parser)]
#[command(name = "mckay", version, about = "McKay quiver combinatorics and chamber geometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Character table of a group (cyclic:<l>, bd:<m>, 2T, 2O, 2I).
    Group {
        spec: String,
        #[arg(long)]
        json: bool,
    },
    /// McKay graph and affine type.
    Graph {
        spec: String,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Weight, size and a witness word of a dimension vector.
    Weight {
        spec: String,
        #[arg(short = 'd', value_delimiter = ',', allow_hyphen_values = true, required = true)]
        d: Vec<i64>,
    },
    /// Component indices of size n.
    Components {
        spec: String,
        #[arg(short = 'n')]
        n: i64,
        /// Every size from 0 to n.
        #[arg(long)]
        all_sizes: bool,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Chambers of the cone F for size n.
    Chambers {
        spec: String,
        #[arg(short = 'n')]
        n: i64,
        #[arg(long, default_value_t = 12)]
        bound: usize,
        /// Also report a component index mapping onto each chamber.
        #[arg(long)]
        surjectivity: bool,
    },
    /// Chamber attached to a component index.
    Bc {
        spec: String,
        #[arg(short = 'd', value_delimiter = ',', required = true)]
        d: Vec<i64>,
    },
    /// Run a verification suite; exits with status 2 if any check fails.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Cyclic,
    Repspace,
    Jordan,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(short = 'l')]
    l: Option<u32>,
    #[arg(short = 'n')]
    n: Option<usize>,
    /// Group for the repspace suite instead of cyclic:<l>.
    #[arg(long)]
    group: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

enum Failure {
    Validation(String),
    Check(String),
}

impl From<McKayError> for Failure {
    fn from(e: McKayError) -> Self {
        Failure::Validation(format!("error[{}]: {e}", e.code()))
    }
}

type Outcome = Result<String, Failure>;

fn datum(spec: &str) -> Result<RootDatum, Failure> {
    Ok(RootDatum::for_spec(spec.parse::<GroupSpec>()?)?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("plain data") + "\n"
}

fn budget() -> Result<u64, Failure> {
    match std::env::var("MCKAY_BUDGET") {
        Ok(s) => s
            .parse()
            .map_err(|_| Failure::Validation(format!("error[InvalidParameter]: MCKAY_BUDGET={s} is not a count"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn check_dims(d: &[i64], r: &RootDatum) -> Result<(), Failure> {
    if d.len() != r.rank() {
        return Err(McKayError::DimensionMismatch(format!("{} entries for {} vertices", d.len(), r.rank())).into());
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Group { spec, json } => {
            let g = build_group(spec.parse()?)?;
            Ok(if json { pretty(&group_value(&g)) } else { group_text(&g) })
        }
        Command::Graph { spec, dot, json } => {
            let r = datum(&spec)?;
            if dot {
                return Ok(to_dot(&r.graph));
            }
            if json {
                return Ok(pretty(&graph_value(&r)));
            }
            let mut out = format!("{} type {} delta {:?}\n", r.graph.spec, r.affine_type, r.delta);
            for row in &r.graph.mult {
                out.push_str(&format!("{row:?}\n"));
            }
            Ok(out)
        }
        Command::Weight { spec, d } => {
            let r = datum(&spec)?;
            check_dims(&d, &r)?;
            let (word, route) = match orbit_witness(&d, &r, default_bound(&d, &r)) {
                Ok(w) => (w, "shortest"),
                Err(McKayError::BoundExceeded(_)) => (dominant_witness(&d, &r), "greedy"),
                Err(e) => return Err(e.into()),
            };
            Ok(pretty(&json!({
                "d": d,
                "weight": weight(&d, &r),
                "size": size(&d, &r),
                "witness_word": word,
                "witness_route": route,
            })))
        }
        Command::Components { spec, n, all_sizes, json: _, csv } => {
            let r = datum(&spec)?;
            let ns: Vec<i64> = if all_sizes { (0..=n.max(0)).collect() } else { vec![n] };
            if n < 0 {
                return Err(McKayError::InvalidParameter(format!("n = {n} must be nonnegative")).into());
            }
            let b = budget()?;
            if csv {
                Ok(report_csv(&r, &ns, b)?)
            } else {
                Ok(pretty(&report_value(&r, &ns, b)?))
            }
        }
        Command::Chambers { spec, n, bound, surjectivity } => {
            let r = datum(&spec)?;
            let en = enumerate_chambers_in_f(&r, n, bound)?;
            let mut v = chambers_value(&r, &en);
            if surjectivity {
                let rep = surjectivity_report(&r, n, bound)?;
                v["surjectivity"] = serde_json::to_value(&rep).expect("plain data");
            }
            Ok(pretty(&v))
        }
        Command::Bc { spec, d } => {
            let r = datum(&spec)?;
            check_dims(&d, &r)?;
            let b = bc_map(&d, &r)?;
            let ws = walls(&r, b.signature.n)?;
            let mut v = serde_json::to_value(&b).expect("plain data");
            v["walls"] = serde_json::to_value(&ws).expect("plain data");
            Ok(pretty(&v))
        }
        Command::Verify(args) => verify(args),
    }
}

fn require<T>(x: Option<T>, flag: &str) -> Result<T, Failure> {
    x.ok_or_else(|| Failure::Validation(format!("error[InvalidParameter]: this suite needs {flag}")))
}

fn verify(args: VerifyArgs) -> Outcome {
    match args.suite {
        Suite::Cyclic => {
            let l = require(args.l, "-l")? as usize;
            let n = require(args.n, "-n")?;
            if l < 2 {
                return Err(McKayError::InvalidParameter(format!("cyclic suite needs ℓ ≥ 2, got {l}")).into());
            }
            let mut sizes = Vec::new();
            let mut passed = true;
            for m in 0..=n {
                let rep = cross_check(l, m)?;
                passed &= rep.all_passed();
                sizes.push(json!({"n": m, "items": rep.items}));
            }
            finish(json!({"suite": "cyclic", "l": l, "max_n": n, "passed": passed, "sizes": sizes}), passed)
        }
        Suite::Repspace => {
            let spec: GroupSpec = match (&args.group, args.l) {
                (Some(g), _) => g.parse()?,
                (None, Some(l)) => GroupSpec::Cyclic(l),
                (None, None) => return Err(Failure::Validation("error[InvalidParameter]: give -l or --group".into())),
            };
            spec.validate()?;
            let rep = run_lab(spec, args.seed, args.samples)?;
            let passed = rep.passed;
            finish(serde_json::to_value(&rep).expect("plain data"), passed)
        }
        Suite::Jordan => {
            let l = require(args.l, "-l")? as usize;
            let n = require(args.n, "-n")?;
            if l == 0 {
                return Err(McKayError::InvalidParameter("ℓ must be positive".into()).into());
            }
            let mut failures = Vec::new();
            let mut checked = 0;
            for m in 0..=n {
                for lam in partitions(m) {
                    let p = hilbert_point(&lam);
                    let data = fixed_point_decompose(&p, l)?;
                    checked += 1;
                    if data.d_sigma != residue_character(&lam, l) || !rebuilds_exactly(&p, &data) {
                        failures.push(lam.0.clone());
                    }
                }
            }
            let passed = failures.is_empty();
            finish(
                json!({"suite": "jordan", "l": l, "max_n": n, "points": checked, "failures": failures, "passed": passed}),
                passed,
            )
        }
    }
}

fn finish(v: Value, passed: bool) -> Outcome {
    if passed {
        Ok(pretty(&v))
    } else {
        Err(Failure::Check(pretty(&v)))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Check(report)) => {
            print!("{report}");
            eprintln!("verification failed");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
    }
}
