//! Acceptance suite: one line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the log.  A
//! criterion may report FAIL only when every shortfall matches the list of
//! known unreachable table entries below and the reason is re-derived here;
//! anything else makes the binary exit non-zero.

use std::collections::BTreeMap;
use std::process::ExitCode;

use gk_genus::arith;
use gk_genus::autkn::AutKn;
use gk_genus::catalog::{self, Catalog};
use gk_genus::engine::{self, Analysis};
use gk_genus::family::Family;
use gk_genus::formulas::{self, FormulaError};
use gk_genus::group::{self, Group};
use gk_genus::mlgroup::MlGroup;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EVEN_QS: [u64; 3] = [4, 8, 16];
const ODD_QS: [u64; 4] = [5, 9, 13, 25];
const SWEEP_QS: [u64; 9] = [2, 4, 5, 8, 9, 13, 16, 17, 25];
const SWEEP_NS: [u32; 4] = [3, 5, 7, 9];
const SEED: u64 = 0x6b5f_2024;

/// Table entries no subgroup of `Aut(K_n)` produces; see `Reason`.
const KNOWN_UNREACHABLE: [(u64, u32, u64); 7] =
    [(4, 5, 204), (5, 3, 80), (5, 3, 160), (5, 3, 482), (9, 7, 658), (9, 7, 387562), (9, 7, 11239956)];

enum Outcome {
    Pass(String),
    /// failing, with every shortfall explained
    KnownFail(String),
    Fail(String),
}

enum Reason {
    /// obtained only with `|L ∩ C_m| = t` where `gcd(s t, m) != t`
    InadmissibleT { inst: String, s: u64, t: u64 },
    /// obtained only from a displayed orbit count that brute force refutes
    DisplayedN { inst: String, displayed: i128, actual: u64, t: u64 },
}

impl std::fmt::Display for Reason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Reason::InadmissibleT { inst, s, t } => {
                write!(f, "needs {inst} with t = {t}, but gcd(s t, m) != t for s = {s}")
            }
            Reason::DisplayedN { inst, displayed, actual, t } => {
                write!(f, "{inst} with t = {t} and N = {displayed}, but brute force gives N = {actual}")
            }
        }
    }
}

struct Ctx {
    analyses: BTreeMap<u64, Analysis>,
}

impl Ctx {
    fn analysis(&mut self, q: u64) -> &Analysis {
        self.analyses.entry(q).or_insert_with(|| engine::analyze(q).expect("analysis"))
    }
}

fn explain(a: &Analysis, n: u32, genus: u64) -> Option<Reason> {
    let m = formulas::m_of(a.q, n).ok()?;
    for d in &a.instances {
        for t in arith::divisors(m) {
            if formulas::lift_genus(d.g_bar, d.n, m / t).ok() == Some(genus) && arith::gcd(d.s * t, m) != t {
                return Some(Reason::InadmissibleT { inst: d.instance.to_string(), s: d.s, t });
            }
        }
        let Some(shown) = formulas::displayed_n(&d.instance) else { continue };
        if !shown.is_integer() || *shown.numer() == d.n as i128 {
            continue;
        }
        let shown = *shown.numer();
        for adm in formulas::admissible_cm_orders(a.q, n, d.s).ok()? {
            if formulas::lift_genus(d.g_bar, shown as u64, m / adm.t).ok() == Some(genus) {
                return Some(Reason::DisplayedN { inst: d.instance.to_string(), displayed: shown, actual: d.n, t: adm.t });
            }
        }
    }
    None
}

fn criterion_1(ctx: &mut Ctx) -> Outcome {
    let rows = engine::golden_table();
    let mut missing_all = Vec::new();
    let mut lines = Vec::new();
    let mut passed = 0;
    for row in &rows {
        let rep = engine::spectrum_from(ctx.analysis(row.q), row.n).expect("spectrum");
        let check = engine::check_table_with(&rep, &row.genera);
        if check.pass {
            passed += 1;
        }
        for g in check.missing() {
            missing_all.push((row.q, row.n, g));
            let why = explain(ctx.analysis(row.q), row.n, g);
            let text = why.as_ref().map_or("unexplained".to_string(), |r| r.to_string());
            lines.push(format!("    {} genus {g}: {text}", row.field));
            if why.is_none() {
                return Outcome::Fail(format!("{} genus {g} missing with no explanation", row.field));
            }
        }
    }
    let head = format!("{passed}/{} rows reproduced", rows.len());
    if missing_all.is_empty() {
        return Outcome::Pass(head);
    }
    if missing_all != KNOWN_UNREACHABLE {
        return Outcome::Fail(format!("{head}; unexpected shortfall {missing_all:?}"));
    }
    Outcome::KnownFail(format!("{head}; {} listed genera unreachable\n{}", missing_all.len(), lines.join("\n")))
}

fn criterion_2(ctx: &mut Ctx) -> Outcome {
    let rep = engine::spectrum_from(ctx.analysis(4), 5).expect("spectrum");
    let named = rep.records.iter().find(|r| {
        r.family == Family::EvenElementaryAbelian.id()
            && r.params.get("f") == Some(&1)
            && r.params.get("w") == Some(&1)
            && r.t == 41
    });
    let Some(rec) = named else { return Outcome::Fail("no type-1 record with f=1, w=1, t=41".into()) };
    if (rec.g_bar, rec.n_orbits, rec.g_l) != (2, 33, 72) {
        return Outcome::Fail(format!("record has g_bar={} N={} g={}", rec.g_bar, rec.n_orbits, rec.g_l));
    }
    // rebuild the witness from scratch
    let cat = Catalog::new(4).expect("catalog");
    let inst = catalog::enumerate_instances(4)
        .expect("instances")
        .into_iter()
        .find(|i| i.family == Family::EvenElementaryAbelian && i.get("f") == Some(1) && i.get("w") == Some(1))
        .expect("instance");
    for h in cat.instantiate(&inst).expect("groups") {
        let n = cat.ml().orbit_counts(&h).total() as u64;
        // wild group: genus from the closed form, N counted on the curve
        let g_bar = formulas::genus_n(&inst).expect("formula").expect("type 1 has a formula").g_bar;
        let lifted = formulas::lift_genus(g_bar, n, 205 / 41);
        if (g_bar, n, lifted.as_ref().ok()) != (2, 33, Some(&72)) {
            return Outcome::Fail(format!("direct construction gives g_bar={g_bar} N={n} g={lifted:?}"));
        }
    }
    Outcome::Pass("72 = lift(g_bar=2, N=33, m/t=5) from E_2 x C_1, rebuilt directly".into())
}

fn criteria_3_and_4() -> (Outcome, Outcome) {
    let (mut n_checks, mut g_checks) = (0, 0);
    let mut n_bad = Vec::new();
    let mut g_bad = Vec::new();
    let mut errata = Vec::new();
    for q in EVEN_QS.into_iter().chain(ODD_QS) {
        let rep = engine::verify_all(q).expect("verification");
        for c in &rep.checks {
            match c.name.as_str() {
                "N" => {
                    n_checks += 1;
                    if !c.pass {
                        n_bad.push(format!("{} {}", c.instance, c.detail));
                    }
                }
                "tame-genus" => {
                    g_checks += 1;
                    if !c.pass {
                        g_bad.push(format!("{} {}", c.instance, c.detail));
                    }
                }
                "instantiate" if !c.pass => n_bad.push(format!("{} {}", c.instance, c.detail)),
                _ => {}
            }
        }
        for e in rep.errata.iter().filter(|e| e.instances > 0) {
            if !e.confirmed {
                n_bad.push(format!("erratum {} not confirmed at q={q}", e.id));
            }
            errata.push(format!("{}@{q}", e.id));
        }
    }
    let c3 = if n_bad.is_empty() {
        Outcome::Pass(format!("{n_checks} instances agree; proof-side expressions confirmed: {}", errata.join(" ")))
    } else {
        Outcome::Fail(n_bad.join("; "))
    };
    let c4 = if g_bad.is_empty() {
        Outcome::Pass(format!("{g_checks} tame instances agree"))
    } else {
        Outcome::Fail(g_bad.join("; "))
    };
    (c3, c4)
}

fn criterion_5(ctx: &mut Ctx) -> Outcome {
    let mut count = 0;
    for q in EVEN_QS.into_iter().chain(ODD_QS).chain([2, 17]) {
        let a = ctx.analysis(q);
        for d in a.instances.iter().filter(|d| d.tame) {
            let n_t = formulas::n_from_tame(q, d.order, d.g_bar);
            if n_t != Ok(d.n) {
                return Outcome::Fail(format!("{}: N from genus {n_t:?}, orbits {}", d.instance, d.n));
            }
            for n in [3, 5, 7] {
                let m = formulas::m_of(q, n).unwrap();
                for adm in formulas::admissible_cm_orders(q, n, d.s).unwrap() {
                    let tame = formulas::lift_genus_tame(q, d.g_bar, d.order, m / adm.t);
                    let general = formulas::lift_genus(d.g_bar, d.n, m / adm.t);
                    if tame.is_err() || tame != general {
                        return Outcome::Fail(format!("{} n={n} t={}: {tame:?} vs {general:?}", d.instance, adm.t));
                    }
                    count += 1;
                }
            }
        }
    }
    Outcome::Pass(format!("{count} (instance, n, t) lifts agree"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut count = 0;
    for (q, n) in [(2, 3), (2, 5), (4, 3)] {
        let aut = AutKn::new(q, n).expect("Aut(K_n)");
        let all = aut.all_elements();
        let mut sample = vec![
            group::closure(&aut, &[]).unwrap(),
            aut.c_m(),
            aut.s_ell(),
            group::closure(&aut, &[aut.s_ell().generators(), aut.c_m().generators()].concat()).unwrap(),
            group::closure(&aut, &aut.full_group_generators()).unwrap(),
        ];
        for _ in 0..20 {
            let k = rng.gen_range(1..=2);
            let gens: Vec<_> = (0..k).map(|_| all[rng.gen_range(0..all.len())]).collect();
            sample.push(group::closure(&aut, &gens).unwrap());
        }
        for l in &sample {
            let spec = match aut.triple_of(l) {
                Ok(s) => s,
                Err(e) => return Outcome::Fail(format!("({q},{n}) |L|={}: {e}", l.order())),
            };
            let back = match aut.group_from_triple(&spec) {
                Ok(b) => b,
                Err(e) => return Outcome::Fail(format!("({q},{n}) |L|={}: {e}", l.order())),
            };
            let image = |h: &group::Subgroup<_>| {
                let mut v: Vec<_> = h.elements().iter().map(|g| aut.pi(g)).collect();
                v.sort();
                v.dedup();
                v
            };
            let rho = |h: &group::Subgroup<_>| {
                let mut v: Vec<_> = h.elements().iter().map(|g| aut.rho(g)).collect();
                v.sort();
                v.dedup();
                v
            };
            let kernel =
                |h: &group::Subgroup<_>| h.elements().iter().filter(|g| aut.pi(g) == aut.ml().identity()).count();
            if image(&back) != image(l) || rho(&back) != rho(l) || kernel(&back) != kernel(l) {
                return Outcome::Fail(format!("({q},{n}) |L|={}: reconstruction differs", l.order()));
            }
            count += 1;
        }
    }
    Outcome::Pass(format!("{count} subgroups reconstructed"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let mut notes = Vec::new();
    for q in [2, 4, 5, 8, 9, 13] {
        let ml = MlGroup::new(q).expect("M_l");
        let all = ml.all_elements();
        if all.len() as u64 != (q * q * q - q) * (q + 1) || ml.s_ell().order() as u64 != q * q * q - q {
            return Outcome::Fail(format!("order identity fails at q={q}"));
        }
        let id = ml.identity();
        for g in all.iter().filter(|&&g| g != id) {
            let tag = match ml.classify(g) {
                Ok(t) => t,
                Err(e) => return Outcome::Fail(format!("q={q}: {e}")),
            };
            let brute = ml.fixed_points_on_h_brute(g);
            if brute != tag.kind.fixed_on_curve(q) || brute != tag.fixed_on_curve {
                return Outcome::Fail(format!("q={q} {g:?}: type {:?} but {brute} fixed points", tag.kind));
            }
        }
        for _ in 0..50 {
            let k = rng.gen_range(1..=2);
            let gens: Vec<_> = (0..k).map(|_| all[rng.gen_range(0..all.len())]).collect();
            let h = group::closure(&ml, &gens).expect("closure");
            let b = ml.burnside_orbit_count(&h).expect("Burnside");
            if b != ml.orbit_counts(&h).total() {
                return Outcome::Fail(format!("q={q}: Burnside {b} differs from the orbit count"));
            }
        }
        notes.push(format!("q={q}"));
    }
    for (q, n) in [(2, 3), (2, 5), (4, 3)] {
        let aut = AutKn::new(q, n).expect("Aut(K_n)");
        let full = group::closure(&aut, &aut.full_group_generators()).unwrap();
        if full.order() as u64 != q * (q * q - 1) * (q.pow(n) + 1) {
            return Outcome::Fail(format!("|Aut(K_{n})| wrong at q={q}"));
        }
        if aut.s_ell().order() as u64 != q * q * q - q || full.order() as u64 != aut.ml().order() * aut.m() {
            return Outcome::Fail(format!("|S_l| or |M_l| m wrong at q={q}"));
        }
    }
    Outcome::Pass(format!("classification, Burnside and orders exact at {}", notes.join(" ")))
}

fn criterion_8(ctx: &mut Ctx) -> Outcome {
    let mut genera = 0usize;
    let mut formulas_checked = 0usize;
    for q in SWEEP_QS {
        for inst in catalog::enumerate_instances(q).expect("instances") {
            match formulas::genus_n(&inst) {
                Ok(_) => formulas_checked += 1,
                Err(e @ (FormulaError::NonIntegral { .. } | FormulaError::Negative { .. })) => {
                    return Outcome::Fail(format!("{inst}: {e}"))
                }
                Err(_) => {}
            }
        }
        for n in SWEEP_NS {
            let rep = match engine::spectrum_from(ctx.analysis(q), n) {
                Ok(r) => r,
                Err(e) => return Outcome::Fail(format!("q={q} n={n}: {e}")),
            };
            let bound = formulas::maximal_genus_bound(q, n);
            for r in &rep.records {
                if r.g_l as u128 > bound || r.recompute() != Ok(r.g_l) {
                    return Outcome::Fail(format!("q={q} n={n}: record {} gives {}", r.witness(), r.g_l));
                }
            }
            genera += rep.records.len();
        }
    }
    Outcome::Pass(format!("{genera} lifted genera and {formulas_checked} closed forms integral and within bounds"))
}

fn main() -> ExitCode {
    let mut ctx = Ctx { analyses: BTreeMap::new() };
    let (c3, c4) = criteria_3_and_4();
    let results = [
        ("table reproduction", criterion_1(&mut ctx)),
        ("spot lift of genus 72", criterion_2(&mut ctx)),
        ("formula N equals orbit count", c3),
        ("formula genus equals tame quotient genus", c4),
        ("tame and general lift agree", criterion_5(&mut ctx)),
        ("triple round trip", criterion_6()),
        ("structural suites", criterion_7()),
        ("integrality sweep", criterion_8(&mut ctx)),
    ];
    let mut ok = true;
    for (i, (name, outcome)) in results.iter().enumerate() {
        let (tag, text) = match outcome {
            Outcome::Pass(t) => ("PASS", t),
            Outcome::KnownFail(t) => ("FAIL", t),
            Outcome::Fail(t) => {
                ok = false;
                ("FAIL", t)
            }
        };
        println!("criterion {} {name}: {tag}: {text}", i + 1);
    }
    let known = results.iter().filter(|(_, o)| matches!(o, Outcome::KnownFail(_))).count();
    if known > 0 {
        println!("{known} criterion failing for documented reasons (see README)");
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
