//! Command-line front end: parse presentation or extension files, dispatch
//! to the pipelines, and print deterministic reports.
//!
//! Exit codes: 0 with a report on standard output, 1 on domain errors (the
//! structured error name from the failing module is printed), 2 on usage,
//! file, or input-parse errors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use ptscheme::{
    analyze_extension, build_truncated_system, builtin_catalog, catalog_entry, enumerate_points,
    find_stabilization, multilinearize, parse_extension, parse_presentation,
    sigma_permutation_report, CatalogEntry, FieldSpec, ParseError, PolyMatrix, Presentation,
    QaError, QuantumAffineParams, Scalar, SchemeError, SkewPbwError,
};

#[derive(Parser)]
#[command(
    name = "ptscheme",
    version,
    about = "Point-module parametrization data of graded algebras and skew PBW extensions",
    propagate_version = true
)]
struct Cli {
    /// Bound the worker thread count (default: machine parallelism).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the multilinearized form of every relation in a presentation.
    Multilinearize {
        /// Presentation file (.alg).
        file: PathBuf,
        /// Emit the machine-readable report.
        #[arg(long)]
        json: bool,
    },
    /// Enumerate the truncated point scheme X_m over F_p.
    Scheme {
        /// Presentation file (.alg).
        file: PathBuf,
        /// Prime modulus of the enumeration field.
        #[arg(long)]
        p: u32,
        /// Truncation length (at least 1).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        /// Emit the machine-readable report.
        #[arg(long)]
        json: bool,
    },
    /// Search for an empirical stabilization degree m0 over F_p.
    Stabilize {
        /// Presentation file (.alg).
        file: PathBuf,
        /// Prime modulus of the enumeration field.
        #[arg(long)]
        p: u32,
        /// Largest truncation length to test (at least 1).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m_max: u32,
        /// Emit the machine-readable report.
        #[arg(long)]
        json: bool,
    },
    /// Report F, G, the variety E, and the successor permutation of a
    /// multiparameter quantum affine space.
    Qaffine {
        /// Presentation file (.alg), or inline parameters like
        /// "q12=2,q13=6,q23=3" (rational values such as 1/2 are accepted).
        input: String,
        /// Prime modulus for the permutation report.
        #[arg(long)]
        p: u32,
        /// Emit the machine-readable report.
        #[arg(long)]
        json: bool,
    },
    /// Run the full point-module analysis of a skew PBW extension file.
    Skewpbw {
        /// Extension file (.ext).
        file: PathBuf,
        /// Prime modulus of the enumeration field.
        #[arg(long)]
        p: u32,
        /// Largest truncation length for the stabilization search.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m_max: u32,
        /// Emit the machine-readable report.
        #[arg(long)]
        json: bool,
    },
    /// List the built-in extension catalog, or show one entry in full.
    Catalog {
        /// Entry name; omit to list every entry.
        name: Option<String>,
        /// Emit the machine-readable report.
        #[arg(long)]
        json: bool,
    },
}

/// Usage errors exit 2, domain errors exit 1; both carry a printable message.
enum CliError {
    Usage(String),
    Domain(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> CliError {
        CliError::Domain(e.to_string())
    }
}

impl From<QaError> for CliError {
    fn from(e: QaError) -> CliError {
        CliError::Domain(e.to_string())
    }
}

impl From<SkewPbwError> for CliError {
    fn from(e: SkewPbwError) -> CliError {
        CliError::Domain(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::Domain(format!("Serialization: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // A zero count falls back to machine parallelism, matching rayon.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli.command) {
        Ok(mut out) => {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Multilinearize { file, json } => cmd_multilinearize(&file, json),
        Command::Scheme { file, p, m, json } => cmd_scheme(&file, p, m, json),
        Command::Stabilize { file, p, m_max, json } => cmd_stabilize(&file, p, m_max, json),
        Command::Qaffine { input, p, json } => cmd_qaffine(&input, p, json),
        Command::Skewpbw { file, p, m_max, json } => cmd_skewpbw(&file, p, m_max, json),
        Command::Catalog { name, json } => cmd_catalog(name.as_deref(), json),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read `{}`: {e}", path.display())))
}

fn load_presentation(path: &Path) -> Result<Presentation, CliError> {
    Ok(parse_presentation(&read_input(path)?)?)
}

/// Validate a `--p` value up front so a bad modulus is a usage error.
fn checked_prime(p: u32) -> Result<u32, CliError> {
    FieldSpec::prime_field(p as u64).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(p)
}

fn cmd_multilinearize(file: &Path, json: bool) -> Result<String, CliError> {
    let pres = load_presentation(file)?;
    let names = pres.var_names();
    let rendered: Vec<String> = pres
        .relations()
        .iter()
        .map(|r| Ok(multilinearize(r)?.render(names)))
        .collect::<Result<_, CliError>>()?;
    if json {
        let value = json!({
            "field": pres.field().to_string(),
            "var_names": names,
            "relations": pres.relations().iter().map(|r| r.render(names)).collect::<Vec<_>>(),
            "multilinearized": rendered,
        });
        return Ok(serde_json::to_string_pretty(&value)?);
    }
    if rendered.is_empty() {
        return Ok(format!(
            "no relations: every point of the free algebra survives ({} variables over {})",
            pres.n(),
            pres.field()
        ));
    }
    let lines: Vec<String> =
        rendered.iter().enumerate().map(|(k, g)| format!("g{} = {}", k + 1, g)).collect();
    Ok(lines.join("\n"))
}

fn cmd_scheme(file: &Path, p: u32, m: u32, json: bool) -> Result<String, CliError> {
    let p = checked_prime(p)?;
    let pres = load_presentation(file)?;
    let sys = build_truncated_system(&pres, m, true)?;
    let points = enumerate_points(&sys, p)?;
    if json {
        let value = json!({
            "p": p,
            "m": m,
            "n": pres.n(),
            "var_names": pres.var_names(),
            "equations": sys.render().lines().collect::<Vec<_>>(),
            "count": points.len(),
            "points": points.iter().map(|t| t.residue_rows()).collect::<Vec<_>>(),
        });
        return Ok(serde_json::to_string_pretty(&value)?);
    }
    let mut out = format!("X_{} over F_{}: {} point(s)\n", m, p, points.len());
    let eqs = sys.render();
    if eqs.is_empty() {
        out.push_str("no equations in this truncation\n");
    } else {
        out.push_str(&eqs);
        out.push('\n');
    }
    out.push_str("points:\n");
    for t in &points {
        out.push_str(&format!("  {t}\n"));
    }
    Ok(out)
}

fn cmd_stabilize(file: &Path, p: u32, m_max: u32, json: bool) -> Result<String, CliError> {
    let p = checked_prime(p)?;
    let pres = load_presentation(file)?;
    let report = find_stabilization(&pres, p, m_max)?;
    if json {
        return Ok(serde_json::to_string_pretty(&report)?);
    }
    Ok(report.render())
}

fn cmd_qaffine(input: &str, p: u32, json: bool) -> Result<String, CliError> {
    let p = checked_prime(p)?;
    // Inline parameter tables contain `=`; file names do not.
    let (params, names) = if input.contains('=') {
        let params = parse_inline_params(input)?;
        let names = params.default_names();
        (params, names)
    } else {
        let pres = load_presentation(Path::new(input))?;
        let names = pres.var_names().to_vec();
        (QuantumAffineParams::from_presentation(&pres)?, names)
    };
    let f = params.build_f();
    let g = params.build_g();
    let e = params.variety_e();
    let sigma = sigma_permutation_report(&params, p)?;
    if json {
        let value = json!({
            "n": params.n(),
            "field": params.field().to_string(),
            "p": p,
            "var_names": names,
            "q": params
                .entries()
                .map(|((i, j), v)| json!([i, j, v.to_string()]))
                .collect::<Vec<_>>(),
            "f": matrix_rows(&f, &names),
            "g": matrix_rows(&g, &names),
            "e_is_zero_ideal": e.is_zero_ideal(),
            "e_generators": e
                .generators()
                .iter()
                .map(|gen| gen.render(&names))
                .collect::<Vec<_>>(),
            "sigma": sigma,
        });
        return Ok(serde_json::to_string_pretty(&value)?);
    }
    let mut out =
        format!("quantum affine {}-space over {}\n", params.n(), params.field());
    for ((i, j), v) in params.entries() {
        out.push_str(&format!("  q[{i},{j}] = {v}\n"));
    }
    out.push_str("relation matrix F (rows follow pairs (i,j), i < j, slot 0):\n");
    out.push_str(&f.render(&names));
    out.push_str("\nrelation matrix G (same rows, slot 1):\n");
    out.push_str(&g.render(&names));
    out.push('\n');
    out.push_str(&e.render(&names));
    out.push_str(&sigma.render());
    Ok(out)
}

fn matrix_rows(m: &PolyMatrix, names: &[String]) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.at(r, c).render(names)).collect())
        .collect()
}

/// Parse "q12=2,q13=6,q23=3" into rational parameters; the variable count is
/// the largest index mentioned.
fn parse_inline_params(s: &str) -> Result<QuantumAffineParams, CliError> {
    let bad = |msg: String| CliError::Usage(format!("inline parameters: {msg}"));
    let mut q = BTreeMap::new();
    let mut n = 2usize;
    for part in s.split(',') {
        let part = part.trim();
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| bad(format!("`{part}` is not of the form qIJ=value")))?;
        let digits = key
            .trim()
            .strip_prefix('q')
            .filter(|d| d.len() == 2 && d.chars().all(|c| c.is_ascii_digit()))
            .ok_or_else(|| bad(format!("`{}` is not qIJ with single digits I < J", key.trim())))?;
        let i: u32 = digits[..1].parse().expect("checked digit");
        let j: u32 = digits[1..].parse().expect("checked digit");
        if !(1 <= i && i < j) {
            return Err(bad(format!("indices in `{}` must satisfy 1 <= I < J", key.trim())));
        }
        let scalar = parse_rational_literal(value.trim())
            .ok_or_else(|| bad(format!("`{}` is not an integer or a/b rational", value.trim())))?;
        if q.insert((i, j), scalar).is_some() {
            return Err(bad(format!("duplicate parameter q[{i},{j}]")));
        }
        n = n.max(j as usize);
    }
    QuantumAffineParams::new(FieldSpec::Rationals, n, q)
        .map_err(|e| CliError::Usage(format!("inline parameters: {e}")))
}

/// "17", "-3", or "a/b" over the rationals.
fn parse_rational_literal(s: &str) -> Option<Scalar> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    Scalar::rational(num, den).ok()
}

fn cmd_skewpbw(file: &Path, p: u32, m_max: u32, json: bool) -> Result<String, CliError> {
    let p = checked_prime(p)?;
    let pres = parse_extension(&read_input(file)?)?;
    let report = analyze_extension(&pres, p, m_max)?;
    if json {
        return Ok(serde_json::to_string_pretty(&report)?);
    }
    Ok(report.render())
}

fn cmd_catalog(name: Option<&str>, json: bool) -> Result<String, CliError> {
    match name {
        None => {
            if json {
                let value = builtin_catalog().iter().map(entry_json).collect::<Vec<_>>();
                return Ok(serde_json::to_string_pretty(&value)?);
            }
            let mut out = String::from("built-in extension catalog:\n");
            for entry in builtin_catalog() {
                out.push_str(&entry.describe());
            }
            Ok(out)
        }
        Some(name) => {
            let entry = catalog_entry(name)?;
            if json {
                let mut value = entry_json(entry);
                value["template"] = json!(entry.body_template());
                if entry.has_defaults() {
                    let pres = entry.instantiate(&BTreeMap::new())?;
                    value["instantiated"] = json!(pres.render());
                }
                return Ok(serde_json::to_string_pretty(&value)?);
            }
            let mut out = entry.describe();
            out.push_str("template:\n");
            out.push_str(entry.body_template());
            if entry.has_defaults() {
                let pres = entry.instantiate(&BTreeMap::new())?;
                out.push_str("instantiated with defaults:\n");
                out.push_str(&pres.render());
            }
            Ok(out)
        }
    }
}

fn entry_json(entry: &CatalogEntry) -> serde_json::Value {
    json!({
        "name": entry.name,
        "summary": entry.summary,
        "constants": entry
            .constants
            .iter()
            .map(|(name, default)| json!({ "name": name, "default": default }))
            .collect::<Vec<_>>(),
    })
}
