//! `qmt`: parse, evaluate, measure, prove and check string diagrams.
//!
//! Exit codes: 0 success, 1 semantic failure (unprovable, rejected, law
//! violation), 2 input error.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qmt::cartesian::{parse_cart, phi_translate, phi_tuple, CartSignature, CartTerm};
use qmt::certify::{
    check_with, from_json, parse_certificate, prove_matrix_order, prove_tv_general, render_certificate, theory_hint,
    to_json, CertifyError, Certificate, CheckOptions,
};
use qmt::diagram::{parse, print, Term};
use qmt::distance::{tv, TvMethod};
use qmt::quantale::QuantaleValue;
use qmt::selftest::{self, Suite};
use qmt::semantics::{Distribution, Matrix};
use qmt::theory::{builtin_by_name, load_theory, scalar_grid, Model, QuantTheory, TheoryError};
use qmt::Rational;

/// Directory searched for `<name>.thy` when `--theory` is not a builtin.
const THEORY_DIR_ENV: &str = "QMT_THEORY_DIR";

#[derive(Parser, Debug)]
#[command(name = "qmt", version, about = "Quantitative symmetric monoidal theories")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Sum,
    Sup,
    Coupling,
    All,
}

impl Method {
    fn methods(self) -> Vec<TvMethod> {
        match self {
            Method::Sum => vec![TvMethod::Sum],
            Method::Sup => vec![TvMethod::Sup],
            Method::Coupling => vec![TvMethod::Coupling],
            Method::All => TvMethod::ALL.to_vec(),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and typecheck a term, printing its normal rendering and type.
    Parse {
        #[arg(long, short)]
        theory: String,
        term: String,
    },
    /// Evaluate a term to its matrix.
    Eval {
        #[arg(long, short)]
        theory: String,
        term: String,
        /// Also write the matrix as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Distance between two terms or matrix literals such as `[[1/2], [1/2]]`.
    Dist {
        #[arg(long, short)]
        theory: String,
        lhs: String,
        rhs: String,
        #[arg(long, value_enum, default_value_t = Method::Sum)]
        method: Method,
    },
    /// Build a certificate for `lhs ≤ rhs` (preorder theories) or
    /// `lhs =_tvmax rhs` (total-variation theories).
    Prove {
        #[arg(long, short)]
        theory: String,
        lhs: String,
        rhs: String,
        /// Write the certificate here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Validate a certificate file (text or JSON) and print its root bound.
    Check {
        file: PathBuf,
        /// Defaults to the file's `# theory` line.
        #[arg(long, short)]
        theory: Option<String>,
        /// Accept REFL leaves the theory cannot decide, listing them.
        #[arg(long)]
        assume_refl: bool,
    },
    /// Check every axiom of a theory on the scalar grid.
    Axioms {
        #[arg(long, short)]
        theory: String,
    },
    /// Translate cartesian terms to monoidal diagrams over `copy`/`del`.
    Translate {
        /// Operations with arities, e.g. `f:2,g:1`.
        #[arg(long, value_delimiter = ',')]
        ops: Vec<String>,
        /// Context size; defaults to the largest variable index.
        #[arg(long)]
        ctx: Option<usize>,
        #[arg(required = true)]
        terms: Vec<String>,
    },
    /// Run the seeded property suites.
    Selftest {
        /// quantale, semantics, distance, certify, cartesian or all.
        #[arg(default_value = "all")]
        scope: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

enum Failure {
    Input(anyhow::Error),
    Semantic(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Semantic(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

fn input(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Input(e.into())
}

fn semantic(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Semantic(e.into())
}

/// Unprovable judgments, rejections and law violations are semantic;
/// everything else came from bad input.
fn classify(e: CertifyError) -> Failure {
    match e {
        CertifyError::Rejected { .. } | CertifyError::NotDerivable { .. } => semantic(e),
        other => input(other),
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Input(e) | Failure::Semantic(e)) = &f;
            eprintln!("error: {e:#}");
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let fmt = cli.format;
    match cli.command {
        Command::Parse { theory, term } => cmd_parse(&resolve_theory(&theory)?, &term, fmt),
        Command::Eval { theory, term, csv } => cmd_eval(&resolve_theory(&theory)?, &term, csv.as_deref(), fmt),
        Command::Dist { theory, lhs, rhs, method } => cmd_dist(&resolve_theory(&theory)?, &lhs, &rhs, method, fmt),
        Command::Prove { theory, lhs, rhs, output } => {
            cmd_prove(&resolve_theory(&theory)?, &lhs, &rhs, output.as_deref(), fmt)
        }
        Command::Check { file, theory, assume_refl } => cmd_check(&file, theory.as_deref(), assume_refl, fmt),
        Command::Axioms { theory } => cmd_axioms(&resolve_theory(&theory)?, fmt),
        Command::Translate { ops, ctx, terms } => cmd_translate(&ops, ctx, &terms, fmt),
        Command::Selftest { scope, seed } => cmd_selftest(&scope, seed, fmt),
    }
}

/// A builtin name, a path to a theory file, or a name found in
/// `$QMT_THEORY_DIR`.
fn resolve_theory(name: &str) -> Result<QuantTheory, Failure> {
    let path = Path::new(name);
    if name.ends_with(".thy") || path.components().count() > 1 {
        return load_theory(path).map_err(input);
    }
    match builtin_by_name(name) {
        Ok(t) => Ok(t),
        Err(TheoryError::UnknownTheory(_)) => {
            let dir = std::env::var_os(THEORY_DIR_ENV)
                .ok_or_else(|| input(anyhow!("unknown theory `{name}` (set {THEORY_DIR_ENV} to search a directory)")))?;
            let file = Path::new(&dir).join(format!("{name}.thy"));
            if !file.exists() {
                return Err(input(anyhow!("unknown theory `{name}`: no builtin and no {}", file.display())));
            }
            load_theory(&file).map_err(input)
        }
        Err(e) => Err(input(e)),
    }
}

fn parse_term(theory: &QuantTheory, text: &str) -> Result<Term, Failure> {
    parse(text, &theory.signature).map_err(|e| {
        let caret = e.span().map(|s| format!("\n  {text}\n  {}{}", " ".repeat(s.start), "^".repeat((s.end - s.start).max(1))));
        input(anyhow!("{e}{}", caret.unwrap_or_default()))
    })
}

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(fmt: Format, text: impl FnOnce() -> String, value: impl FnOnce() -> serde_json::Value) {
    match fmt {
        Format::Text => out(&(text() + "\n")),
        Format::Json => out(&(serde_json::to_string_pretty(&value()).expect("json values serialize") + "\n")),
    }
}

fn cmd_parse(theory: &QuantTheory, text: &str, fmt: Format) -> Outcome {
    let t = parse_term(theory, text)?;
    let (n, m) = t.ty();
    emit(fmt, || format!("{}\n{n} → {m}", print(&t)), || json!({ "term": print(&t), "arity": n, "coarity": m }));
    Ok(())
}

fn cmd_eval(theory: &QuantTheory, text: &str, csv: Option<&Path>, fmt: Format) -> Outcome {
    let t = parse_term(theory, text)?;
    let m = theory.eval(&t).map_err(input)?;
    if let Some(path) = csv {
        fs::write(path, m.to_csv()).with_context(|| format!("writing {}", path.display())).map_err(input)?;
    }
    emit(fmt, || m.to_string(), || serde_json::to_value(&m).expect("matrices serialize"));
    Ok(())
}

/// A term, or a matrix literal when the text starts with `[`.
fn operand(theory: &QuantTheory, text: &str) -> Result<Matrix, Failure> {
    if text.trim_start().starts_with('[') {
        Matrix::parse(text).map_err(input)
    } else {
        theory.eval(&parse_term(theory, text)?).map_err(input)
    }
}

fn column_distributions(m: &Matrix) -> Result<Vec<Distribution>, Failure> {
    (0..m.cols()).map(|j| Distribution::new(m.column(j)).map_err(input)).collect()
}

fn cmd_dist(theory: &QuantTheory, lhs: &str, rhs: &str, method: Method, fmt: Format) -> Outcome {
    let (a, b) = (operand(theory, lhs)?, operand(theory, rhs)?);
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(input(anyhow!("shapes differ: {}×{} vs {}×{}", a.rows(), a.cols(), b.rows(), b.cols())));
    }
    if theory.model != Model::StochasticTv {
        let d = match theory.model {
            Model::MatrixOrder => QuantaleValue::Boolean(a.first_violation(&b).map_err(input)?.is_none()),
            _ if a == b => theory.quantale.top(),
            _ => theory.quantale.bottom(),
        };
        emit(fmt, || d.to_string(), || json!({ "distance": d.to_string() }));
        return Ok(());
    }
    let (xs, ys) = (column_distributions(&a)?, column_distributions(&b)?);
    let mut values: Vec<(TvMethod, Rational)> = Vec::new();
    for m in method.methods() {
        let mut worst = Rational::zero();
        for (x, y) in xs.iter().zip(&ys) {
            worst = worst.max(tv(x, y, m).map_err(input)?);
        }
        values.push((m, worst));
    }
    let agree = values.iter().all(|(_, v)| *v == values[0].1);
    emit(
        fmt,
        || match values.as_slice() {
            [(_, v)] => v.to_string(),
            _ => {
                let mut lines: Vec<String> = values.iter().map(|(m, v)| format!("{:<8} {v}", m.name())).collect();
                lines.push(if agree { "agree".into() } else { "DISAGREE".into() });
                lines.join("\n")
            }
        },
        || {
            let per: serde_json::Map<String, serde_json::Value> =
                values.iter().map(|(m, v)| (m.name().to_string(), json!(v.to_string()))).collect();
            json!({ "distance": values[0].1.to_string(), "methods": per, "agree": agree })
        },
    );
    if agree {
        Ok(())
    } else {
        Err(semantic(anyhow!("tv formulations disagree")))
    }
}

fn cmd_prove(theory: &QuantTheory, lhs: &str, rhs: &str, output: Option<&Path>, fmt: Format) -> Outcome {
    let (f, g) = (parse_term(theory, lhs)?, parse_term(theory, rhs)?);
    let cert = match theory.model {
        Model::MatrixOrder => prove_matrix_order(theory, &f, &g),
        Model::StochasticTv => prove_tv_general(theory, &f, &g),
        _ => return Err(input(anyhow!("`{}` has no certificate generator; use a preorder or tv theory", theory.name))),
    }
    .map_err(classify)?;
    let root = check_with(&cert, theory, CheckOptions::default()).map_err(classify)?.eps;
    let body = match fmt {
        Format::Text => render_certificate(&cert, Some(&theory.name)),
        Format::Json => to_json(&cert) + "\n",
    };
    match output {
        Some(path) => {
            fs::write(path, body).with_context(|| format!("writing {}", path.display())).map_err(input)?;
            emit(fmt, || root.to_string(), || json!({ "eps": root.to_string(), "file": path.display().to_string() }));
        }
        None => {
            out(&body);
            eprintln!("root ε: {root}");
        }
    }
    Ok(())
}

fn read_certificate(text: &str, theory: &QuantTheory) -> Result<Certificate, CertifyError> {
    if text.trim_start().starts_with('{') {
        from_json(text, theory)
    } else {
        parse_certificate(text, theory)
    }
}

fn cmd_check(file: &Path, theory: Option<&str>, assume_refl: bool, fmt: Format) -> Outcome {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display())).map_err(input)?;
    let name = match theory {
        Some(t) => t.to_string(),
        None => theory_hint(&text)
            .ok_or_else(|| input(anyhow!("{} has no `# theory` line; pass --theory", file.display())))?,
    };
    let theory = resolve_theory(&name)?;
    let cert = read_certificate(&text, &theory).map_err(input)?;
    let report = check_with(&cert, &theory, CheckOptions { assume_refl }).map_err(classify)?;
    emit(
        fmt,
        || {
            let mut out = report.eps.to_string();
            for t in &report.trusted {
                out.push_str(&format!("\ntrusted REFL at {}: {} = {}", t.path, t.lhs, t.rhs));
            }
            out
        },
        || json!({ "eps": report.eps.to_string(), "nodes": report.nodes, "trusted": report.trusted }),
    );
    Ok(())
}

fn cmd_axioms(theory: &QuantTheory, fmt: Format) -> Outcome {
    let report = theory.soundness_report(&scalar_grid()).map_err(input)?;
    let failed = report.iter().filter(|c| !c.holds).count();
    let args = |a: &[Rational]| {
        if a.is_empty() {
            String::new()
        } else {
            format!("[{}]", a.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        }
    };
    emit(
        fmt,
        || {
            let mut lines: Vec<String> = report
                .iter()
                .map(|c| {
                    let status = if c.holds { "ok  " } else { "FAIL" };
                    format!("{status} {}{} {}", c.label, args(&c.args), c.detail).trim_end().to_string()
                })
                .collect();
            lines.push(format!("{} instances, {failed} failed", report.len()));
            lines.join("\n")
        },
        || {
            let items: Vec<_> = report
                .iter()
                .map(|c| json!({ "label": c.label, "args": args(&c.args), "holds": c.holds, "detail": c.detail }))
                .collect();
            json!({ "theory": theory.name, "instances": items, "failed": failed })
        },
    );
    if failed == 0 {
        Ok(())
    } else {
        Err(semantic(anyhow!("{failed} axiom instances fail in the model")))
    }
}

fn cart_signature(ops: &[String]) -> Result<CartSignature, Failure> {
    let mut sig = CartSignature::new();
    for op in ops.iter().filter(|o| !o.trim().is_empty()) {
        let (name, arity) = op.split_once(':').ok_or_else(|| input(anyhow!("expected `name:arity`, got `{op}`")))?;
        let arity: usize = arity.trim().parse().map_err(|_| input(anyhow!("bad arity in `{op}`")))?;
        sig.declare(name.trim(), arity).map_err(input)?;
    }
    Ok(sig)
}

fn cmd_translate(ops: &[String], ctx: Option<usize>, texts: &[String], fmt: Format) -> Outcome {
    let sig = cart_signature(ops)?;
    let terms: Vec<CartTerm> = texts.iter().map(|t| parse_cart(t, &sig).map_err(input)).collect::<Result<_, _>>()?;
    let k = ctx.unwrap_or_else(|| terms.iter().filter_map(|t| t.max_var()).map(|v| v + 1).max().unwrap_or(0));
    let d = match terms.as_slice() {
        [t] => phi_translate(t, k),
        ts => phi_tuple(ts, k),
    }
    .map_err(input)?;
    let (n, m) = d.ty();
    emit(fmt, || format!("{}\n{n} → {m}", print(&d)), || json!({ "term": print(&d), "arity": n, "coarity": m }));
    Ok(())
}

fn cmd_selftest(scope: &str, seed: u64, fmt: Format) -> Outcome {
    let suites = Suite::parse_scope(scope).map_err(|e| input(anyhow!(e)))?;
    let reports = selftest::run(&suites, seed);
    let passed = reports.iter().all(|r| r.passed());
    emit(
        fmt,
        || {
            let mut lines = Vec::new();
            for r in &reports {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                lines.push(format!("{status} {} (seed {}, {} ms)", r.suite, r.seed, r.millis));
                for c in &r.checks {
                    let mark = if c.passed { "ok  " } else { "FAIL" };
                    lines.push(format!("  {mark} {}: {}", c.name, c.detail));
                }
            }
            lines.join("\n")
        },
        || serde_json::to_value(&reports).expect("reports serialize"),
    );
    if passed {
        Ok(())
    } else {
        Err(semantic(anyhow!("self-test failures")))
    }
}
