//! Command-line front end.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{self, CatalogError, INSTANTIATE_LIMIT};
use crate::engine::{self, EngineError};
use crate::formulas::FormulaError;
use crate::mlgroup::MlGroup;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "gk-genus", version, about = "Genus spectra of Galois subfields of the GK function fields K_n")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// write the report here instead of standard output
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, short, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Genera of the Galois subfields of K_n over F_{q^(2n)}
    Spectrum {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
    },
    /// Check every closed form against brute force for one q
    Verify {
        #[arg(long)]
        q: u64,
    },
    /// List the subgroup family instances for one q
    Catalog {
        #[arg(long)]
        q: u64,
    },
    /// Reproduce the reference table of genera
    Table,
    /// Count the elements of M_l by fixed-point type
    Classify {
        #[arg(long)]
        q: u64,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Catalog(
                CatalogError::NotPrimePower(_) | CatalogError::UnsupportedClass(_) | CatalogError::TooLarge(_),
            )
            | EngineError::Formula(FormulaError::EvenN(_) | FormulaError::NotPrimePower(_)) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Check(other.to_string()),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        EngineError::from(e).into()
    }
}

fn validate_q(q: u64) -> Result<(), Failure> {
    catalog::check_supported(q).map(|_| ()).map_err(|e| Failure::Usage(e.to_string()))
}

fn validate_n(n: u32) -> Result<(), Failure> {
    if n % 2 == 0 {
        return Err(Failure::Usage(format!("n = {n} must be odd")));
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialisable")
}

/// Parses `args` (including the program name) and runs the command, writing
/// the report to `out` (or the output file) and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    let (text, pass) = match dispatch(&cli) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "check failed: {msg}");
            return EXIT_CHECK_FAILED;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| e.to_string()),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    if pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn dispatch(cli: &Cli) -> Result<(String, bool), Failure> {
    match cli.command {
        Command::Spectrum { q, n } => {
            validate_q(q)?;
            validate_n(n)?;
            let rep = engine::spectrum(q, n)?;
            let text = match cli.format {
                Format::Json => rep.to_json(),
                Format::Csv => rep.to_csv(),
                Format::Text => rep.to_text(),
            };
            Ok((text, true))
        }
        Command::Verify { q } => {
            validate_q(q)?;
            if q > INSTANTIATE_LIMIT {
                return Err(Failure::Usage(format!("verification needs q <= {INSTANTIATE_LIMIT}")));
            }
            let rep = engine::verify_all(q)?;
            let text = match cli.format {
                Format::Json => rep.to_json(),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for c in &rep.checks {
                        w.serialize(c).expect("in-memory write");
                    }
                    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
                }
                Format::Text => {
                    let mut t = rep.to_text();
                    if cli.verbose > 0 {
                        for c in &rep.checks {
                            t.push_str(&format!("{} {} {}: {}\n", if c.pass { "ok  " } else { "FAIL" }, c.instance, c.name, c.detail));
                        }
                    }
                    t
                }
            };
            Ok((text, rep.pass))
        }
        Command::Catalog { q } => {
            validate_q(q)?;
            let list = catalog::enumerate_instances(q)?;
            let text = match cli.format {
                Format::Json => json(&list),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["family", "params", "order", "tame", "s"]).expect("in-memory write");
                    for i in &list {
                        let s = i.declared_s().map_or("oracle".to_string(), |s| s.to_string());
                        w.write_record([i.family.id(), i.param_string(), i.order.to_string(), i.tame.to_string(), s])
                            .expect("in-memory write");
                    }
                    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
                }
                Format::Text => {
                    let mut t = String::new();
                    for i in &list {
                        t.push_str(&format!(
                            "{:<8} {:<40} order {:>8} {}  {}\n",
                            i.family.id(),
                            i.param_string(),
                            i.order,
                            if i.tame { "tame" } else { "wild" },
                            i.family.description()
                        ));
                    }
                    t.push_str(&format!("{} instances\n", list.len()));
                    t
                }
            };
            Ok((text, true))
        }
        Command::Table => table(cli),
        Command::Classify { q } => {
            validate_q(q)?;
            if q > INSTANTIATE_LIMIT {
                return Err(Failure::Usage(format!("classification needs q <= {INSTANTIATE_LIMIT}")));
            }
            classify(cli, q)
        }
    }
}

#[derive(Serialize)]
struct TableLine {
    field: String,
    q: u64,
    n: u32,
    expected: usize,
    found: usize,
    missing: Vec<u64>,
    pass: bool,
    witnesses: BTreeMap<u64, String>,
}

fn table(cli: &Cli) -> Result<(String, bool), Failure> {
    let rows = engine::golden_table();
    let mut analyses = BTreeMap::new();
    let mut lines = Vec::new();
    for row in &rows {
        if !analyses.contains_key(&row.q) {
            analyses.insert(row.q, engine::analyze(row.q)?);
        }
        let rep = engine::spectrum_from(&analyses[&row.q], row.n)?;
        let check = engine::check_table_with(&rep, &row.genera);
        let witnesses = check
            .hits
            .iter()
            .filter_map(|h| h.witness.as_ref().map(|w| (h.genus, w.witness())))
            .collect();
        lines.push(TableLine {
            field: row.field.clone(),
            q: row.q,
            n: row.n,
            expected: row.genera.len(),
            found: row.genera.len() - check.missing().len(),
            missing: check.missing(),
            pass: check.pass,
            witnesses,
        });
    }
    let pass = lines.iter().all(|l| l.pass);
    let text = match cli.format {
        Format::Json => json(&lines),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["field", "q", "n", "expected", "found", "pass"]).expect("in-memory write");
            for l in &lines {
                w.write_record([
                    l.field.clone(),
                    l.q.to_string(),
                    l.n.to_string(),
                    l.expected.to_string(),
                    l.found.to_string(),
                    if l.pass { "PASS" } else { "FAIL" }.to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Text => {
            let mut t = String::new();
            for l in &lines {
                t.push_str(&format!(
                    "{:<10} q={:<3} n={}  {:>2}/{:<2}  {}\n",
                    l.field,
                    l.q,
                    l.n,
                    l.found,
                    l.expected,
                    if l.pass { "PASS" } else { "FAIL" }
                ));
                if !l.missing.is_empty() {
                    t.push_str(&format!("           missing: {:?}\n", l.missing));
                }
                if cli.verbose > 0 {
                    for (g, w) in &l.witnesses {
                        t.push_str(&format!("           {g:>10}  {w}\n"));
                    }
                }
            }
            t
        }
    };
    Ok((text, pass))
}

#[derive(Serialize)]
struct ClassRow {
    kind: String,
    order: u64,
    fixed_on_line: usize,
    fixed_on_curve: usize,
    count: usize,
}

fn classify(cli: &Cli, q: u64) -> Result<(String, bool), Failure> {
    use crate::group::Group;
    let ml = MlGroup::new(q).map_err(|e| Failure::Usage(e.to_string()))?;
    let id = ml.identity();
    let mut counts: BTreeMap<(String, u64, usize, usize), usize> = BTreeMap::new();
    let mut consistent = true;
    for g in ml.all_elements().into_iter().filter(|&g| g != id) {
        let tag = ml.classify(&g).map_err(|e| Failure::Check(e.to_string()))?;
        consistent &= tag.fixed_on_curve == tag.kind.fixed_on_curve(q);
        *counts.entry((format!("{:?}", tag.kind), tag.order, tag.fixed_on_line, tag.fixed_on_curve)).or_insert(0) +=
            1;
    }
    let rows: Vec<ClassRow> = counts
        .into_iter()
        .map(|((kind, order, fixed_on_line, fixed_on_curve), count)| ClassRow {
            kind,
            order,
            fixed_on_line,
            fixed_on_curve,
            count,
        })
        .collect();
    let total: usize = rows.iter().map(|r| r.count).sum();
    let pass = consistent && total as u64 == ml.order() - 1;
    let text = match cli.format {
        Format::Json => json(&serde_json::json!({ "q": q, "total": total, "classes": rows })),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Text => {
            let mut by_kind: BTreeMap<&str, usize> = BTreeMap::new();
            let mut t = String::new();
            for r in &rows {
                *by_kind.entry(&r.kind).or_insert(0) += r.count;
                t.push_str(&format!(
                    "{:<3} order {:>4}  fixes {:>3} on Z=0, {:>4} on the curve: {}\n",
                    r.kind, r.order, r.fixed_on_line, r.fixed_on_curve, r.count
                ));
            }
            for (k, c) in by_kind {
                t.push_str(&format!("type {k}: {c}\n"));
            }
            t.push_str(&format!("total {total}\n"));
            t
        }
    };
    Ok((text, pass))
}
