//! `qbic`: classify q-bic forms, count points and linear subspaces on their
//! hypersurfaces, evaluate closed forms, and run the verification suite.
//!
//! Exit codes: 0 success, 1 parse or input error, 2 ambiguous
//! classification, 3 enumeration range exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qbic_core::builtins::builtin;
use qbic_core::error::Error;
use qbic_core::fano::{count_isotropic, line_count_report};
use qbic_core::forms::{classify, QBicForm};
use qbic_core::formulas;
use qbic_core::geometry::{count_points, hypersurface_points, is_cone_point, is_singular_point};
use qbic_core::hermitian::extension_field;
use qbic_core::io::read_form;
use qbic_core::suite::{run_suite, Status, SuiteConfig};

#[derive(Parser)]
#[command(
    name = "qbic",
    version,
    about = "q-bic forms and hypersurfaces over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormSource {
    /// Gram matrix JSON file.
    #[arg(long, conflicts_with = "builtin")]
    gram: Option<PathBuf>,
    /// Builtin form: fermat, hermitian-curve, hermitian-surface, ddl-curve,
    /// standard:<signature>, family:point:<t>, family:n4-degeneration:<t>.
    #[arg(long)]
    builtin: Option<String>,
    /// q for builtin forms.
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Projective dimension n for builtins that need it (fermat).
    #[arg(long)]
    n: Option<usize>,
}

impl FormSource {
    fn load(&self) -> Result<QBicForm, Error> {
        match (&self.gram, &self.builtin) {
            (Some(path), _) => read_form(path),
            (None, Some(name)) => builtin(name, self.q, self.n),
            (None, None) => Err(Error::Parse(
                "one of --gram or --builtin is required".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Points,
    Lines,
    Planes,
}

#[derive(Subcommand)]
enum Command {
    /// Print the geometric type of a form.
    Classify {
        #[command(flatten)]
        source: FormSource,
        /// Also print a JSON record.
        #[arg(long)]
        json: bool,
    },
    /// Count points, lines or planes of the hypersurface over GF(q^(2m)).
    Count {
        kind: Kind,
        #[command(flatten)]
        source: FormSource,
        /// Extension degree m.
        #[arg(long, default_value_t = 1)]
        ext: u32,
        /// Add incidence data as JSON.
        #[arg(long)]
        report: bool,
    },
    /// Run every check within range and report.
    VerifySuite {
        /// Comma-separated values of q.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        q: Vec<u32>,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print closed-form values and consistency verdicts as JSON.
    Formulas {
        #[arg(long, default_value_t = 10)]
        max_q: i64,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::AmbiguousMatch(_) => 2,
        Error::RangeExceeded(_) => 3,
        _ => 1,
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("QBIC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn cmd_classify(source: &FormSource, json: bool) -> Result<(), Error> {
    let f = source.load()?;
    let t = classify(&f)?;
    println!("{t}");
    if json {
        let rec = json!({
            "type": t.to_string(),
            "dim": f.dim(),
            "rank": f.rank(),
            "field": f.ctx().descriptor(),
            "e": f.e(),
            "profile": f.invariant_profile(),
        });
        println!("{rec}");
    }
    Ok(())
}

fn cmd_count(kind: Kind, source: &FormSource, ext: u32, report: bool) -> Result<(), Error> {
    let f = source.load()?;
    match kind {
        Kind::Points => {
            let total = count_points(&f, ext)?;
            println!("{total}");
            if report {
                let g = f.extend_to(&extension_field(&f, ext)?)?;
                let pts = hypersurface_points(&g)?;
                let mut singular = 0;
                let mut cone = 0;
                for p in &pts {
                    singular += is_singular_point(&g, p)? as u64;
                    cone += is_cone_point(&g, p)? as u64;
                }
                println!(
                    "{}",
                    json!({"field_order": g.ctx().order(), "points": total, "singular_points": singular, "cone_points": cone})
                );
            }
        }
        Kind::Lines => {
            if report {
                let rep = line_count_report(&f, ext)?;
                println!("{}", rep.total);
                println!("{}", serde_json::to_string(&rep)?);
            } else {
                println!("{}", count_isotropic(&f, 1, ext)?);
            }
        }
        Kind::Planes => {
            let total = count_isotropic(&f, 2, ext)?;
            println!("{total}");
            if report {
                println!("{}", json!({"planes": total, "set_theoretic": true}));
            }
        }
    }
    Ok(())
}

fn cmd_verify(q: &[u32], max_n: usize, seed: u64, out: Option<&PathBuf>) -> Result<bool, Error> {
    let report = run_suite(&SuiteConfig {
        qs: q.to_vec(),
        max_n,
        seed,
    });
    for c in &report.checks {
        let tag = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::SkippedRange => "skip",
        };
        println!("{tag:4} {:50} {} ms  {}", c.name, c.runtime_ms, c.computed);
    }
    println!(
        "{} passed, {} failed, {} skipped",
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::SkippedRange)
    );
    if let Some(path) = out {
        std::fs::write(path, report.to_json())?;
    }
    Ok(report.all_passed())
}

fn formula_table(max_q: i64) -> Result<Value, Error> {
    let mut rows = Vec::new();
    for q in 2..=max_q.max(2) {
        let (c1, c2, chi) = formulas::chern_and_chi(q);
        let betti = formulas::betti_s(q);
        let plucker: Vec<Value> = (4..=8)
            .map(|n| {
                let (a, b) = formulas::fano_plucker_degree(q, n)?;
                Ok(json!({"n": n, "schubert": a.to_string(), "closed_form": b.to_string(), "agree": a == b}))
            })
            .collect::<Result<_, Error>>()?;
        let hermitian: Vec<Value> = (2..=5u32)
            .map(|n| {
                let (pts, maximal) = formulas::hermitian_count_formulas(q, n);
                json!({"n": n, "points": pts.to_string(), "maximal_isotropic": maximal.to_string()})
            })
            .collect();
        let mut row = json!({
            "q": q,
            "c1_squared": c1.to_string(),
            "c2": c2.to_string(),
            "chi": chi.to_string(),
            "noether": chi.clone() * 12 == c1.clone() + c2.clone(),
            "betti_s": betti.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            "fano_surface_points": formulas::zeta_point_count(&formulas::ZetaSpec::FanoSurface { q }, 1).to_string(),
            "plucker_degree": plucker,
            "hermitian_counts": hermitian,
        });
        if q <= u32::MAX as i64 && qbic_core::gf::is_prime(q as u32) {
            let (h0, h1, h2) = formulas::cohomology_dims(q as u32)?;
            row["cohomology"] = json!({
                "h0": h0.to_string(), "h1": h1.to_string(), "h2": h2.to_string(),
                "euler_consistent": h0 - h1 + h2 == chi,
            });
            let (l, r) = formulas::binomial_identity_h0cf(q);
            row["binomial_identity"] =
                json!({"lhs": l.to_string(), "rhs": r.to_string(), "holds": l == r});
        }
        rows.push(row);
    }
    Ok(json!({"schema": 1, "rows": rows}))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    let result = match &cli.command {
        Command::Classify { source, json } => cmd_classify(source, *json).map(|_| true),
        Command::Count {
            kind,
            source,
            ext,
            report,
        } => cmd_count(*kind, source, *ext, *report).map(|_| true),
        Command::VerifySuite {
            q,
            max_n,
            seed,
            json,
        } => cmd_verify(q, *max_n, *seed, json.as_ref()),
        Command::Formulas { max_q } => formula_table(*max_q).map(|v| {
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            true
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
