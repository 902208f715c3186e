//! Genus spectra: every catalog instance is evaluated (closed form where one
//! exists, brute force for small `q`), cross-checked, and lifted to the
//! subgroups of `Aut(K_n)` it induces.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::gcd;
use crate::catalog::{self, Catalog, CatalogError, INSTANTIATE_LIMIT};
use crate::family::{Family, FamilyInstance};
use crate::formulas::{self, FormulaError, GenusN};
use crate::group::Subgroup;
use crate::mlgroup::MlElement;

pub const REPORT_VERSION: u32 = 1;

const TABLE_DATA: &str = include_str!("../data/genus_table.json");

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("closed form and brute force disagree for {inst}: {detail}")]
    Mismatch { inst: String, detail: String },
    #[error("wild instance {0} has no closed form")]
    MissingFormula(String),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Formula,
    Oracle,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    GenusComplete,
    ConstructedOnly,
}

/// Invariants of one realised instance of a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceData {
    #[serde(skip)]
    pub instance: FamilyInstance,
    pub family: String,
    pub params: BTreeMap<String, u64>,
    pub variant: usize,
    pub order: u64,
    pub tame: bool,
    pub g_bar: u64,
    pub n: u64,
    pub n1: u64,
    pub n2: u64,
    pub s: u64,
    pub provenance: Provenance,
}

/// The invariants of every instance for one `q`.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub q: u64,
    /// tame families were skipped (no explicit groups for this `q`)
    pub partial: bool,
    pub instances: Vec<InstanceData>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusRecord {
    pub q: u64,
    pub n: u32,
    pub family: String,
    pub params: BTreeMap<String, u64>,
    pub variant: usize,
    pub g_bar: u64,
    #[serde(rename = "N")]
    pub n_orbits: u64,
    pub s: u64,
    pub t: u64,
    pub m_over_t: u64,
    pub g_l: u64,
    pub order_l: u64,
    pub provenance: Provenance,
    pub completeness: Completeness,
}

impl GenusRecord {
    /// Recomputes `g_L` from the stored fields.
    pub fn recompute(&self) -> Result<u64, FormulaError> {
        formulas::lift_genus(self.g_bar, self.n_orbits, self.m_over_t)
    }

    pub fn witness(&self) -> String {
        let params = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",");
        format!("{}({params})#{} t={}", self.family, self.variant, self.t)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub version: u32,
    pub q: u64,
    pub n: u32,
    pub m: u64,
    /// the constructed genera are the full spectrum of Galois subfields
    pub complete: bool,
    /// tame families were omitted
    pub partial: bool,
    pub note: String,
    pub genera: Vec<u64>,
    pub records: Vec<GenusRecord>,
}

impl SpectrumReport {
    /// First record, in report order, realising `genus`.
    pub fn witness(&self, genus: u64) -> Option<&GenusRecord> {
        self.records.iter().find(|r| r.g_l == genus)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// One row per genus with its witness.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["genus", "family", "params", "variant", "t", "g_bar", "N", "s", "m_over_t", "order_L"])
            .expect("in-memory write");
        for &g in &self.genera {
            let r = self.witness(g).expect("every genus has a witness");
            let params = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
            w.write_record([
                g.to_string(),
                r.family.clone(),
                params,
                r.variant.to_string(),
                r.t.to_string(),
                r.g_bar.to_string(),
                r.n_orbits.to_string(),
                r.s.to_string(),
                r.m_over_t.to_string(),
                r.order_l.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "q = {}, n = {}, m = {}, complete = {}, partial = {}\n{} genera from {} records\n",
            self.q,
            self.n,
            self.m,
            self.complete,
            self.partial,
            self.genera.len(),
            self.records.len()
        );
        for &g in &self.genera {
            let r = self.witness(g).expect("witness");
            out.push_str(&format!("{g:>12}  {}\n", r.witness()));
        }
        out
    }
}

/// `gcd(q+1, n) = 1` for a supported `q`.
pub fn is_complete(q: u64, n: u32) -> bool {
    catalog::check_supported(q).is_ok() && gcd(q + 1, n as u64) == 1
}

fn formula_for(inst: &FamilyInstance) -> Result<Option<GenusN>, FormulaError> {
    formulas::genus_n(inst)
}

struct Evaluated {
    data: InstanceData,
    checks: Vec<Check>,
}

/// Computes the invariants of one explicit group, comparing them with the
/// closed form where there is one.
fn evaluate_group(
    cat: &Catalog,
    inst: &FamilyInstance,
    variant: usize,
    h: &Subgroup<MlElement>,
    formula: Option<GenusN>,
) -> Evaluated {
    let ml = cat.ml();
    let counts = ml.orbit_counts(h);
    let (n1, n2) = (counts.n1 as u64, counts.n2 as u64);
    let n = n1 + n2;
    let s = cat.s_of(h);
    let mut checks = Vec::new();
    let name = format!("{inst}#{variant}");
    checks.push(Check::new(&name, "order", h.order() as u64 == inst.order, format!("{}", h.order())));
    if let Some(ds) = inst.declared_s() {
        checks.push(Check::new(&name, "s", ds == s, format!("declared {ds}, oracle {s}")));
    }
    match ml.burnside_orbit_count(h) {
        Ok(b) => checks.push(Check::new(&name, "burnside", b as u64 == n, format!("burnside {b}, union-find {n}"))),
        Err(e) => checks.push(Check::new(&name, "burnside", false, e.to_string())),
    }
    let mut g_bar = None;
    if inst.tame {
        match ml.tame_quotient_genus(h) {
            Ok(g) => {
                g_bar = Some(g as u64);
                let nt = formulas::n_from_tame(inst.q, inst.order, g as u64);
                checks.push(Check::new(
                    &name,
                    "tame-N",
                    nt.as_ref().ok() == Some(&n),
                    format!("from genus {nt:?}, orbits {n}"),
                ));
                if let Some(fm) = formula {
                    checks.push(Check::new(
                        &name,
                        "tame-genus",
                        fm.g_bar == g as u64,
                        format!("formula {}, oracle {g}", fm.g_bar),
                    ));
                }
            }
            Err(e) => checks.push(Check::new(&name, "tame-genus", false, e.to_string())),
        }
    }
    if let Some(fm) = formula {
        let ok = fm.n_orbits == n && fm.n1 == n1 && fm.n2 == n2;
        checks.push(Check::new(
            &name,
            "N",
            ok,
            format!("formula {}+{}={}, oracle {n1}+{n2}={n}", fm.n1, fm.n2, fm.n_orbits),
        ));
        if g_bar.is_none() {
            g_bar = Some(fm.g_bar);
        }
    }
    let provenance = if formula.is_some() { Provenance::Both } else { Provenance::Oracle };
    let data = InstanceData {
        instance: inst.clone(),
        family: inst.family.id(),
        params: inst.params.clone(),
        variant,
        order: inst.order,
        tame: inst.tame,
        g_bar: g_bar.unwrap_or(u64::MAX),
        n,
        n1,
        n2,
        s,
        provenance,
    };
    Evaluated { data, checks }
}

fn evaluate_instance(cat: &Catalog, inst: &FamilyInstance) -> Result<Vec<Evaluated>, EngineError> {
    let formula = formula_for(inst)?;
    if !inst.tame && formula.is_none() {
        return Err(EngineError::MissingFormula(inst.to_string()));
    }
    let groups = cat.instantiate(inst)?;
    Ok(groups.iter().enumerate().map(|(v, h)| evaluate_group(cat, inst, v, h, formula)).collect())
}

/// Invariants of every instance.  With `q <= 25` each instance is built and
/// every closed form is checked against brute force, aborting on the first
/// disagreement; above that only the closed forms are used.
pub fn analyze(q: u64) -> Result<Analysis, EngineError> {
    let instances = catalog::enumerate_instances(q)?;
    if q > INSTANTIATE_LIMIT {
        let mut out = Vec::new();
        for inst in instances {
            if let Some(fm) = formula_for(&inst)? {
                out.push(formula_only(&inst, fm));
            }
        }
        return Ok(Analysis { q, partial: true, instances: out });
    }
    let cat = Catalog::new(q)?;
    let evaluated: Vec<Vec<Evaluated>> =
        instances.par_iter().map(|inst| evaluate_instance(&cat, inst)).collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for ev in evaluated.into_iter().flatten() {
        if let Some(bad) = ev.checks.iter().find(|c| !c.pass) {
            return Err(EngineError::Mismatch { inst: bad.instance.clone(), detail: format!("{}: {}", bad.name, bad.detail) });
        }
        out.push(ev.data);
    }
    Ok(Analysis { q, partial: false, instances: out })
}

fn formula_only(inst: &FamilyInstance, fm: GenusN) -> InstanceData {
    InstanceData {
        instance: inst.clone(),
        family: inst.family.id(),
        params: inst.params.clone(),
        variant: 0,
        order: inst.order,
        tame: inst.tame,
        g_bar: fm.g_bar,
        n: fm.n_orbits,
        n1: fm.n1,
        n2: fm.n2,
        s: inst.declared_s().unwrap_or(0),
        provenance: Provenance::Formula,
    }
}

/// Lifts an analysis to the spectrum over `F_{q^(2n)}`.
pub fn spectrum_from(analysis: &Analysis, n: u32) -> Result<SpectrumReport, EngineError> {
    let q = analysis.q;
    let m = formulas::m_of(q, n)?;
    let bound = formulas::maximal_genus_bound(q, n);
    let per_instance: Vec<Vec<GenusRecord>> = analysis
        .instances
        .par_iter()
        .filter(|d| d.s > 0)
        .map(|d| -> Result<Vec<GenusRecord>, EngineError> {
            let mut recs = Vec::new();
            for adm in formulas::admissible_cm_orders(q, n, d.s)? {
                let m_over_t = m / adm.t;
                let g_l = formulas::lift_genus(d.g_bar, d.n, m_over_t)?;
                if d.tame {
                    let alt = formulas::lift_genus_tame(q, d.g_bar, d.order, m_over_t)?;
                    if alt != g_l {
                        return Err(EngineError::Mismatch {
                            inst: d.instance.to_string(),
                            detail: format!("tame lift {alt} vs general lift {g_l}"),
                        });
                    }
                }
                if g_l as u128 > bound {
                    return Err(EngineError::Mismatch {
                        inst: d.instance.to_string(),
                        detail: format!("genus {g_l} exceeds the maximal bound {bound}"),
                    });
                }
                recs.push(GenusRecord {
                    q,
                    n,
                    family: d.family.clone(),
                    params: d.params.clone(),
                    variant: d.variant,
                    g_bar: d.g_bar,
                    n_orbits: d.n,
                    s: d.s,
                    t: adm.t,
                    m_over_t,
                    g_l,
                    order_l: d.order * adm.t,
                    provenance: d.provenance,
                    completeness: if adm.genus_complete {
                        Completeness::GenusComplete
                    } else {
                        Completeness::ConstructedOnly
                    },
                });
            }
            Ok(recs)
        })
        .collect::<Result<_, _>>()?;
    let mut records: Vec<GenusRecord> = per_instance.into_iter().flatten().collect();
    records.sort_by(|a, b| {
        let fa = Family::from_id(&a.family).map(|f| (f.is_even(), f.type_number()));
        let fb = Family::from_id(&b.family).map(|f| (f.is_even(), f.type_number()));
        (fa, &a.params, a.variant, a.t).cmp(&(fb, &b.params, b.variant, b.t))
    });
    let mut genera: Vec<u64> = records.iter().map(|r| r.g_l).collect();
    genera.sort_unstable();
    genera.dedup();
    let complete = is_complete(q, n);
    let note = format!(
        "all genera constructed from the subgroup catalog, new or not; {}{}",
        if complete { "gcd(q+1, n) = 1, so the list is complete" } else { "gcd(q+1, n) > 1, so the list may be incomplete" },
        if analysis.partial { "; q too large for explicit groups, so only families with a closed form for g_bar, N and s are included" } else { "" }
    );
    Ok(SpectrumReport { version: REPORT_VERSION, q, n, m, complete, partial: analysis.partial, note, genera, records })
}

pub fn spectrum(q: u64, n: u32) -> Result<SpectrumReport, EngineError> {
    formulas::m_of(q, n)?;
    spectrum_from(&analyze(q)?, n)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableRow {
    pub field: String,
    pub q: u64,
    pub n: u32,
    pub genera: Vec<u64>,
}

/// The reference table of genera shipped with the crate.
pub fn golden_table() -> Vec<TableRow> {
    serde_json::from_str(TABLE_DATA).expect("embedded table parses")
}

#[derive(Clone, Debug, Serialize)]
pub struct TableHit {
    pub genus: u64,
    pub witness: Option<GenusRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableCheck {
    pub q: u64,
    pub n: u32,
    pub hits: Vec<TableHit>,
    pub pass: bool,
}

impl TableCheck {
    pub fn missing(&self) -> Vec<u64> {
        self.hits.iter().filter(|h| h.witness.is_none()).map(|h| h.genus).collect()
    }
}

pub fn check_table_with(report: &SpectrumReport, expected: &[u64]) -> TableCheck {
    let hits: Vec<TableHit> =
        expected.iter().map(|&g| TableHit { genus: g, witness: report.witness(g).cloned() }).collect();
    let pass = hits.iter().all(|h| h.witness.is_some());
    TableCheck { q: report.q, n: report.n, hits, pass }
}

pub fn check_table(q: u64, n: u32, expected: &[u64]) -> Result<TableCheck, EngineError> {
    Ok(check_table_with(&spectrum(q, n)?, expected))
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub instance: String,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(instance: &str, name: &str, pass: bool, detail: String) -> Self {
        Check { instance: instance.into(), name: name.into(), pass, detail }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErratumOutcome {
    pub id: String,
    pub family: String,
    pub displayed: String,
    pub used: String,
    pub instances: usize,
    /// brute force agreed with the expression in use on every instance
    pub confirmed: bool,
    /// brute force disagreed with the displayed expression on some instance
    pub displayed_refuted: bool,
    pub examples: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub version: u32,
    pub q: u64,
    pub instances: usize,
    pub checks: Vec<Check>,
    pub failures: Vec<Check>,
    pub errata: Vec<ErratumOutcome>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "q = {}: {} instances, {} checks, {} failures\n",
            self.q,
            self.instances,
            self.checks.len(),
            self.failures.len()
        );
        for f in &self.failures {
            out.push_str(&format!("FAIL {} {}: {}\n", f.instance, f.name, f.detail));
        }
        for e in &self.errata {
            out.push_str(&format!(
                "erratum {}: {} instances, used expression {}, displayed expression {}\n",
                e.id,
                e.instances,
                if e.confirmed { "confirmed" } else { "NOT confirmed" },
                if e.displayed_refuted { "refuted" } else { "not refuted" }
            ));
        }
        out.push_str(if self.pass { "PASS\n" } else { "FAIL\n" });
        out
    }
}

/// Runs every structural and formula-versus-brute-force check for one `q`,
/// collecting failures instead of stopping at the first one.
pub fn verify_all(q: u64) -> Result<VerificationReport, EngineError> {
    let instances = catalog::enumerate_instances(q)?;
    let cat = Catalog::new(q)?;
    let results: Vec<(FamilyInstance, Result<Vec<Evaluated>, String>)> = instances
        .par_iter()
        .map(|inst| (inst.clone(), evaluate_instance(&cat, inst).map_err(|e| e.to_string())))
        .collect();
    let mut checks = Vec::new();
    let mut errata: BTreeMap<&'static str, ErratumOutcome> = formulas::errata()
        .into_iter()
        .map(|e| {
            (
                e.id,
                ErratumOutcome {
                    id: e.id.into(),
                    family: e.family,
                    displayed: e.displayed.into(),
                    used: e.used.into(),
                    instances: 0,
                    confirmed: true,
                    displayed_refuted: false,
                    examples: Vec::new(),
                },
            )
        })
        .collect();
    for (inst, res) in &results {
        match res {
            Ok(evs) => {
                for ev in evs {
                    for id in formulas::errata_for(inst) {
                        let entry = errata.get_mut(id).expect("known erratum");
                        entry.instances += 1;
                        let n_ok = ev.checks.iter().filter(|c| c.name == "N").all(|c| c.pass);
                        entry.confirmed &= n_ok;
                        if let Some(shown) = formulas::displayed_n(inst) {
                            if shown != num_rational::Ratio::from_integer(ev.data.n as i128) {
                                entry.displayed_refuted = true;
                                if entry.examples.len() < 4 {
                                    entry.examples.push(format!("{inst}: displayed {shown}, brute force {}", ev.data.n));
                                }
                            }
                        }
                    }
                    checks.extend(ev.checks.iter().cloned());
                }
            }
            Err(e) => checks.push(Check::new(&inst.to_string(), "instantiate", false, e.clone())),
        }
    }
    let failures: Vec<Check> = checks.iter().filter(|c| !c.pass).cloned().collect();
    let errata: Vec<ErratumOutcome> = errata.into_values().filter(|e| e.instances > 0).collect();
    let pass = failures.is_empty() && errata.iter().all(|e| e.confirmed);
    Ok(VerificationReport { version: REPORT_VERSION, q, instances: results.len(), checks, failures, errata, pass })
}
