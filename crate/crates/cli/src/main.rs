use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rank3ribbon::characters::{galois_type, solve_characters, CharValue};
use rank3ribbon::classify::{
    audit_case3b_grid, audit_rank3_rings, audit_star_associativity, classify_all, enumerate_star_solutions,
    landau_bound, raw_star_solutions, unit_fraction_solutions, ClassifyConfig, MAX_LANDAU_CLASSES,
};
use rank3ribbon::exactnum::MAX_PRECISION;
use rank3ribbon::exec::configure_threads;
use rank3ribbon::fusion::{
    canonicalize, check_based_axioms, fp_dimensions, global_fp_dim, make_rank3_ring, make_z3_ring, FusionRing,
    Rank3Params,
};
use rank3ribbon::premodular::{search_ribbon_data, SearchConfig};
use rank3ribbon::{Error, Execution};

#[derive(Parser, Debug)]
#[command(name = "rank3ribbon", version, about = "Rank-3 fusion rings admitting ribbon structure")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (default: logical cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a ring, check the axioms, solve its characters.
    Ring {
        #[arg(long, required_unless_present = "z3", conflicts_with = "z3")]
        params: Option<Rank3Params>,
        /// Use the group ring of Z/3.
        #[arg(long)]
        z3: bool,
    },
    /// List canonical solutions of k^2 + l^2 = lm + kn + 1.
    Enumerate {
        #[arg(long)]
        bound: u32,
    },
    /// Search dimension and twist data with a verified S-matrix.
    Search {
        #[arg(long, required_unless_present = "z3", conflicts_with = "z3")]
        params: Option<Rank3Params>,
        #[arg(long)]
        z3: bool,
        #[command(flatten)]
        numeric: Numeric,
    },
    /// Run every branch filter on all rings up to a bound.
    Classify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        bound: u32,
        /// Attach witnesses to every ring.
        #[arg(long)]
        witness_all: bool,
        #[command(flatten)]
        numeric: Numeric,
    },
    /// Desk-scale audits of intermediate claims.
    #[command(subcommand)]
    Audit(Audit),
}

#[derive(Args, Debug)]
struct Numeric {
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u32).range(1..=1000))]
    max_twist_order: u32,
    #[arg(long, default_value_t = 1e-9, value_parser = parse_tol)]
    tol: f64,
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(53..=MAX_PRECISION as i64))]
    precision_bits: u32,
}

impl Numeric {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            max_twist_order: self.max_twist_order,
            tol: self.tol,
            precision_bits: self.precision_bits,
            exec: Execution::default(),
        }
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t.is_finite() && t > 0.0 && t < 1.0 {
        Ok(t)
    } else {
        Err("tolerance must lie in (0, 1)".into())
    }
}

#[derive(Subcommand, Debug)]
enum Audit {
    /// (*) holds exactly when the K(k,l,m,n) table is associative.
    StarAssoc {
        #[arg(long)]
        bound: u32,
    },
    /// Brute-force rank-3 based rings against the two known families.
    Rank3Rings {
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=3))]
        coeff_bound: u32,
    },
    /// The Case 3b identity has no solution on the integer grid.
    Case3bGrid {
        #[arg(long)]
        smax: u32,
        #[arg(long)]
        tmax: u32,
    },
    /// Largest group order with the given number of conjugacy classes.
    Landau {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_LANDAU_CLASSES as i64))]
        classes: u32,
    },
}

enum Failure {
    Usage(String),
    Compute(&'static str, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e.kind(), e.to_string())
    }
}

fn ring_of(params: Option<Rank3Params>, z3: bool) -> Result<FusionRing, Failure> {
    match (params, z3) {
        (_, true) => Ok(make_z3_ring()),
        (Some(p), false) => Ok(make_rank3_ring(&p)?),
        (None, false) => Err(Failure::Usage("either --params or --z3 is required".into())),
    }
}

fn dim_json(v: &CharValue) -> Value {
    match v.to_integer() {
        Some(z) => z.to_string().parse::<i64>().map(Value::from).unwrap_or_else(|_| json!(z.to_string())),
        None => v.to_json(),
    }
}

fn ring_report(ring: &FusionRing) -> Result<Value, Failure> {
    let axioms = check_based_axioms(ring.structure_constants(), ring.duals());
    let system = solve_characters(ring)?;
    let gt = galois_type(&system);
    let params = ring.params();
    let dims: Vec<Value> = system.fp().values().iter().map(dim_json).collect();
    let fp: Vec<Value> = fp_dimensions(ring).into_iter().map(|d| dim_json(&CharValue::Real(d))).collect();
    Ok(json!({
        "params": params.map(|p| p.tuple()),
        "canonical": params.map(|p| canonicalize(&p).tuple()),
        "ring": ring.to_json(),
        "axioms": serde_json::to_value(&axioms).expect("axiom report serializes"),
        "characters": system.to_json(),
        "galois": gt.tag.to_string(),
        "galois_orbits": gt.orbits,
        "dims": dims,
        "fp_dimensions": fp,
        "global_fp_dim": dim_json(&CharValue::Real(global_fp_dim(ring))),
    }))
}

enum Output {
    Json(Value),
    Text(String),
}

fn require_json(format: Format, what: &str) -> Result<(), Failure> {
    if format == Format::Table {
        return Err(Failure::Usage(format!("--format table is not available for {what}")));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Ring { params, z3 } => {
            require_json(cli.format, "ring")?;
            Ok(Output::Json(ring_report(&ring_of(*params, *z3)?)?))
        }
        Command::Enumerate { bound } => {
            let sols = enumerate_star_solutions(*bound);
            if cli.format == Format::Table {
                let mut s = String::from("k  l  m  n\n");
                for p in &sols {
                    let _ = writeln!(s, "{:<2} {:<2} {:<2} {}", p.k, p.l, p.m, p.n);
                }
                return Ok(Output::Text(s));
            }
            Ok(Output::Json(json!({
                "bound": bound,
                "raw_count": raw_star_solutions(*bound).len(),
                "count": sols.len(),
                "solutions": sols.iter().map(|p| p.tuple()).collect::<Vec<_>>(),
            })))
        }
        Command::Search { params, z3, numeric } => {
            let ring = ring_of(*params, *z3)?;
            let system = solve_characters(&ring)?;
            let cfg = numeric.config();
            let witnesses = search_ribbon_data(&system, &cfg)?;
            if cli.format == Format::Table {
                let mut s = format!("{ring}\n{} witnesses (twist order <= {})\n", witnesses.len(), cfg.max_twist_order);
                for w in &witnesses {
                    let _ = writeln!(s, "dims #{}  {}  {}", w.dims_index, w.twists, w.structure_class);
                }
                return Ok(Output::Text(s));
            }
            Ok(Output::Json(json!({
                "ring": ring.params().map_or_else(|| json!("Z/3"), |p| json!(p.tuple())),
                "config": {
                    "max_twist_order": cfg.max_twist_order,
                    "tol": cfg.tol,
                    "precision_bits": cfg.precision_bits,
                },
                "count": witnesses.len(),
                "witnesses": witnesses.iter().map(|w| w.to_json()).collect::<Vec<_>>(),
            })))
        }
        Command::Classify { bound, witness_all, numeric } => {
            let cfg = ClassifyConfig {
                bound: *bound,
                search: numeric.config(),
                witness_all: *witness_all,
            };
            let report = classify_all(&cfg)?;
            Ok(match cli.format {
                Format::Json => Output::Json(report.to_json()),
                Format::Table => Output::Text(report.render_table()),
            })
        }
        Command::Audit(audit) => {
            require_json(cli.format, "audit")?;
            Ok(Output::Json(match audit {
                Audit::StarAssoc { bound } => audit_star_associativity(*bound, Execution::default()).to_json(),
                Audit::Rank3Rings { coeff_bound } => audit_rank3_rings(*coeff_bound, Execution::default()).to_json(),
                Audit::Case3bGrid { smax, tmax } => json!(audit_case3b_grid(*smax, *tmax)),
                Audit::Landau { classes } => json!({
                    "classes": classes,
                    "bound": landau_bound(*classes)?,
                    "solutions": unit_fraction_solutions(*classes)?,
                }),
            }))
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Compute("io", format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = configure_threads(t as usize) {
            eprintln!("{}", json!({"error": {"kind": "threads", "detail": e}}));
            return ExitCode::from(1);
        }
    }
    let result = run(&cli).and_then(|o| {
        let text = match o {
            Output::Json(v) => serde_json::to_string_pretty(&v).expect("json renders") + "\n",
            Output::Text(s) => s,
        };
        emit(&cli.out, &text)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(kind, detail)) => {
            eprintln!("{}", json!({"error": {"kind": kind, "detail": detail}}));
            ExitCode::from(1)
        }
    }
}
