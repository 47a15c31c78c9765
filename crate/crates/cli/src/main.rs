//! `tropkit`: batch front-end to the exact polyhedral kernel.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tropkit_core::algebra::{hilbert_function, poincare_check, volume_polynomial, PolytopeBasis};
use tropkit_core::fan::{
    stable_intersection_number, weighted_equivalent, weighted_sum, ShiftPolicy, WeightedFan,
};
use tropkit_core::lattice::{Int, Rat};
use tropkit_core::polytope::{mixed_volume, LatticePolytope, DEFAULT_ENUMERATION_BUDGET};
use tropkit_core::tropical::{
    bkk_count, bkk_via_fans, newton_polytope, parse_laurent, parse_laurent_in,
    tropical_hypersurface, LaurentPolynomial,
};
use tropkit_core::{Error, ErrorClass};

use tropkit::io;
use tropkit::svg::{self, Figure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Svg,
}

#[derive(Parser, Debug)]
#[command(
    name = "tropkit",
    version,
    about = "Exact Newton polytopes, mixed volumes, balanced fans and tropical intersection"
)]
struct Cli {
    /// Seed for generic shift sampling.
    #[arg(long, env = "TROPKIT_SEED", default_value_t = 0, global = true)]
    seed: u64,
    /// Number of independent generic shifts that must agree.
    #[arg(long = "verify-shifts", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    verify_shifts: u64,
    /// Lattice point budget for enumeration oracles.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Inputs given as `--polytope`, `--fan` or `--basis` are file paths, `-` for
/// standard input, or inline JSON. Polynomials are Laurent expressions such as
/// `"x^-1 + 3*y^2 + g"`, inline polynomial JSON, or `@path`.
#[derive(Subcommand, Debug)]
enum Command {
    /// Newton polytope of a Laurent polynomial.
    Newton {
        polynomial: String,
        /// Number of variables (default: the largest one used).
        #[arg(long)]
        vars: Option<usize>,
    },
    /// Minkowski sum of polytopes.
    Minkowski {
        #[arg(long = "polytope", required = true)]
        polytopes: Vec<String>,
    },
    /// Exact volume, optionally checked by lattice point counting.
    Volume {
        #[arg(long)]
        polytope: String,
        #[arg(long)]
        oracle: bool,
    },
    /// Mixed volume of n polytopes in ℝⁿ.
    Mixedvol {
        #[arg(long = "polytope", required = true)]
        polytopes: Vec<String>,
    },
    /// Normal fan of a full-dimensional polytope.
    Normalfan {
        #[arg(long)]
        polytope: String,
    },
    /// Weighted sum of primitive inward facet normals.
    PascalCheck {
        #[arg(long)]
        polytope: String,
    },
    /// Whether a weighted fan satisfies the balancing condition.
    BalanceCheck {
        #[arg(long)]
        fan: String,
    },
    /// Tropical hypersurface of a Laurent polynomial as a weighted fan.
    Tropical {
        polynomial: String,
        #[arg(long)]
        vars: Option<usize>,
    },
    /// Generic number of solutions in the torus of a square system.
    Bkk {
        #[arg(required = true)]
        polynomials: Vec<String>,
        /// Also compute the count as a tropical intersection number.
        #[arg(long)]
        via_fans: bool,
    },
    /// Stable intersection number of two balanced fans of complementary dimension.
    TropIntersect {
        #[arg(long = "fan", num_args = 1, required = true)]
        fans: Vec<String>,
    },
    /// Whether two weighted fans agree as weight functions on ℝⁿ.
    Equiv {
        #[arg(long = "fan", num_args = 1, required = true)]
        fans: Vec<String>,
    },
    /// Sum of weighted fans of the same dimension.
    FanSum {
        #[arg(long = "fan", num_args = 1, required = true)]
        fans: Vec<String>,
    },
    /// Hilbert function of the algebra of a polytope basis.
    Hilbert {
        #[arg(long)]
        basis: String,
    },
}

/// Settings shared by all commands.
struct RunConfig {
    seed: u64,
    shift_verifications: usize,
    enumeration_budget: u64,
    output: Option<PathBuf>,
    format: Format,
}

impl RunConfig {
    fn policy(&self) -> ShiftPolicy {
        ShiftPolicy {
            seed: self.seed,
            verifications: self.shift_verifications,
        }
    }
}

enum Failure {
    Kernel(Error),
    Usage(String),
    Output(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Kernel(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Kernel(e) => match e.class() {
                ErrorClass::Domain => 1,
                ErrorClass::Parse => 2,
                ErrorClass::Resource => 3,
            },
            Failure::Usage(_) => 2,
            Failure::Output(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Kernel(e) => e.to_string(),
            Failure::Usage(m) => format!("usage error: {m}"),
            Failure::Output(m) => format!("output error: {m}"),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

struct Report {
    json: Value,
    text: String,
    figure: Option<Figure>,
}

fn read_source(arg: &str) -> Outcome<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("cannot read standard input: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))
}

fn load_polytope(arg: &str) -> Outcome<LatticePolytope> {
    Ok(io::polytope_from_json(&io::parse_json(&read_source(
        arg,
    )?)?)?)
}

fn load_fan(arg: &str) -> Outcome<WeightedFan> {
    Ok(io::weighted_fan_from_json(&io::parse_json(&read_source(
        arg,
    )?)?)?)
}

fn load_polynomial(arg: &str, vars: Option<usize>) -> Outcome<LaurentPolynomial> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?,
        None => arg.to_string(),
    };
    if text.trim_start().starts_with('{') {
        let f = io::polynomial_from_json(&io::parse_json(&text)?)?;
        return match vars {
            Some(n) => Ok(f.in_vars(n)?),
            None => Ok(f),
        };
    }
    Ok(match vars {
        Some(n) => parse_laurent_in(&text, n)?,
        None => parse_laurent(&text)?,
    })
}

fn polytope_report(p: LatticePolytope) -> Report {
    let mut text = format!(
        "dimension {} in ambient dimension {}\n",
        p.dim(),
        p.ambient_dim()
    );
    for v in p.vertices() {
        let _ = writeln!(text, "vertex {v}");
    }
    Report {
        json: io::polytope_to_json(&p),
        text,
        figure: Some(Figure::Polytope(p)),
    }
}

fn weighted_fan_report(f: WeightedFan) -> Report {
    let mut text = format!(
        "{}-dimensional weighted fan in ambient dimension {}\n",
        f.dim(),
        f.ambient_dim()
    );
    for (c, w) in f.support_cones() {
        let _ = writeln!(text, "weight {w} on {c}");
    }
    let labelled = f
        .support_cones()
        .any(|(_, w)| *w != Rat::from_integer(Int::from(1)));
    Report {
        json: io::weighted_fan_to_json(&f),
        text,
        figure: Some(Figure::Fan { fan: f, labelled }),
    }
}

fn value_report(json: Value, text: String) -> Report {
    Report {
        json,
        text,
        figure: None,
    }
}

fn integral_json(r: &Rat) -> Value {
    if r.is_integer() {
        io::int_to_json(&r.to_integer())
    } else {
        io::rat_to_json(r)
    }
}

fn two<'a>(items: &'a [String], what: &str) -> Outcome<(&'a str, &'a str)> {
    match items {
        [a, b] => Ok((a, b)),
        _ => Err(Failure::Usage(format!(
            "expected exactly two {what}, got {}",
            items.len()
        ))),
    }
}

fn run(command: &Command, config: &RunConfig) -> Outcome<Report> {
    Ok(match command {
        Command::Newton { polynomial, vars } => {
            polytope_report(newton_polytope(&load_polynomial(polynomial, *vars)?))
        }
        Command::Minkowski { polytopes } => {
            let mut ps = polytopes.iter().map(|p| load_polytope(p));
            let first = ps.next().expect("clap requires one polytope")?;
            let sum = ps.try_fold(first, |acc, p| {
                acc.minkowski_sum(&p?).map_err(Failure::from)
            })?;
            polytope_report(sum)
        }
        Command::Volume { polytope, oracle } => {
            let p = load_polytope(polytope)?;
            let v = p.volume();
            let mut json = json!({ "volume": io::rat_to_json(&v) });
            let mut text = format!("volume {v}\n");
            if *oracle {
                let o = p.volume_ehrhart_oracle(config.enumeration_budget)?;
                json["ehrhart_oracle"] = io::rat_to_json(&o);
                json["agree"] = json!(o == v);
                let _ = writeln!(
                    text,
                    "lattice point oracle {o} ({})",
                    if o == v { "agrees" } else { "DISAGREES" }
                );
            }
            value_report(json, text)
        }
        Command::Mixedvol { polytopes } => {
            let ps = polytopes
                .iter()
                .map(|p| load_polytope(p))
                .collect::<Outcome<Vec<_>>>()?;
            let v = mixed_volume(&ps)?;
            value_report(
                json!({ "mixed_volume": io::rat_to_json(&v) }),
                format!("mixed volume {v}\n"),
            )
        }
        Command::Normalfan { polytope } => {
            let fan = load_polytope(polytope)?.normal_fan()?;
            let maximal = fan.maximal_cones();
            let mut text = format!(
                "complete fan with {} maximal cones in ambient dimension {}\n",
                maximal.len(),
                fan.ambient_dim()
            );
            for c in &maximal {
                let _ = writeln!(text, "{c}");
            }
            let n = fan.ambient_dim();
            let one = Rat::from_integer(Int::from(1));
            let weighted = WeightedFan::from_cones(
                n,
                n,
                maximal.into_iter().map(|c| (c, one.clone())).collect(),
            )?;
            Report {
                json: io::fan_to_json(&fan),
                text,
                figure: Some(Figure::Fan {
                    fan: weighted,
                    labelled: false,
                }),
            }
        }
        Command::PascalCheck { polytope } => {
            let residual = load_polytope(polytope)?.pascal_residual()?;
            let ok = residual.is_zero();
            value_report(
                json!({ "residual": io::vector_to_json(&residual), "ok": ok }),
                format!(
                    "residual {residual}: {}\n",
                    if ok { "ok" } else { "NONZERO" }
                ),
            )
        }
        Command::BalanceCheck { fan } => {
            let balanced = load_fan(fan)?.is_balanced();
            value_report(
                json!({ "balanced": balanced }),
                format!("{}\n", if balanced { "balanced" } else { "not balanced" }),
            )
        }
        Command::Tropical { polynomial, vars } => weighted_fan_report(
            tropical_hypersurface(&load_polynomial(polynomial, *vars)?)?.weighted,
        ),
        Command::Bkk {
            polynomials,
            via_fans,
        } => {
            let n = polynomials.len();
            let fs = polynomials
                .iter()
                .map(|f| load_polynomial(f, Some(n)))
                .collect::<Outcome<Vec<_>>>()?;
            let count = bkk_count(&fs)?;
            let mut json = json!({ "count": integral_json(&count) });
            let mut text = format!("generic number of solutions {count}\n");
            if *via_fans {
                let t = bkk_via_fans(&fs, config.policy())?;
                json["via_fans"] = integral_json(&t);
                let _ = writeln!(text, "tropical intersection number {t}");
            }
            value_report(json, text)
        }
        Command::TropIntersect { fans } => {
            let (a, b) = two(fans, "fans")?;
            let v = stable_intersection_number(&load_fan(a)?, &load_fan(b)?, config.policy())?;
            value_report(
                json!({ "intersection_number": io::rat_to_json(&v) }),
                format!("intersection number {v}\n"),
            )
        }
        Command::Equiv { fans } => {
            let (a, b) = two(fans, "fans")?;
            let eq = weighted_equivalent(&load_fan(a)?, &load_fan(b)?)?;
            value_report(
                json!({ "equivalent": eq }),
                format!("{}\n", if eq { "equivalent" } else { "not equivalent" }),
            )
        }
        Command::FanSum { fans } => {
            let mut fs = fans.iter().map(|f| load_fan(f));
            let first = fs.next().expect("clap requires one fan")?;
            let sum = fs.try_fold(first, |acc, f| {
                weighted_sum(&acc, &f?).map_err(Failure::from)
            })?;
            weighted_fan_report(sum)
        }
        Command::Hilbert { basis } => {
            let ps = io::basis_from_json(&io::parse_json(&read_source(basis)?)?)?;
            let p = volume_polynomial(&PolytopeBasis::new(ps)?)?;
            let h = hilbert_function(&p)?;
            let ok = poincare_check(&h);
            value_report(
                json!({ "hilbert": h.values, "poincare": ok, "volume_polynomial": io::homogeneous_to_json(&p) }),
                format!(
                    "volume polynomial {p}\nhilbert function {:?}\npoincare duality {}\n",
                    h.values,
                    if ok { "holds" } else { "FAILS" }
                ),
            )
        }
    })
}

fn render(report: Report, format: Format) -> Outcome<String> {
    Ok(match format {
        Format::Json => io::to_pretty(&report.json),
        Format::Text => report.text,
        Format::Svg => match &report.figure {
            Some(f) => svg::render(f)?,
            None => {
                return Err(Failure::Usage(
                    "this command has no diagram; use --format json or text".into(),
                ))
            }
        },
    })
}

fn emit(body: &str, config: &RunConfig) -> Outcome<()> {
    match &config.output {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::Output(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| Failure::Output(format!("cannot write to standard output: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = RunConfig {
        seed: cli.seed,
        shift_verifications: usize::try_from(cli.verify_shifts).unwrap_or(usize::MAX),
        enumeration_budget: cli.budget,
        output: cli.out,
        format: cli.format,
    };
    let result = run(&cli.command, &config)
        .and_then(|r| render(r, config.format))
        .and_then(|body| emit(&body, &config));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tropkit: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
