use std::sync::OnceLock;

use gk_genus::arith;
use gk_genus::autkn::AutKn;
use gk_genus::engine::{self, Analysis};
use gk_genus::formulas;
use gk_genus::gf::FieldCtx;
use gk_genus::group::{self, Group};
use gk_genus::mlgroup::MlGroup;
use proptest::prelude::*;

const SUPPORTED: [u64; 9] = [2, 4, 5, 8, 9, 13, 16, 17, 25];

fn field(i: usize) -> &'static FieldCtx {
    static FIELDS: OnceLock<Vec<FieldCtx>> = OnceLock::new();
    &FIELDS.get_or_init(|| {
        [(2, 4), (3, 2), (5, 2), (3, 4), (13, 2), (2, 8)]
            .into_iter()
            .map(|(p, k)| FieldCtx::new(p, k).unwrap())
            .collect()
    })[i]
}

fn ml(q: u64) -> &'static MlGroup {
    static GROUPS: OnceLock<Vec<MlGroup>> = OnceLock::new();
    GROUPS
        .get_or_init(|| [4, 5, 9].into_iter().map(|q| MlGroup::new(q).unwrap()).collect())
        .iter()
        .find(|g| g.q() == q)
        .unwrap()
}

fn analysis(q: u64) -> &'static Analysis {
    static ANALYSES: OnceLock<Vec<Analysis>> = OnceLock::new();
    ANALYSES
        .get_or_init(|| [4, 5, 9].into_iter().map(|q| engine::analyze(q).unwrap()).collect())
        .iter()
        .find(|a| a.q == q)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(i in 0usize..6, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = field(i);
        let n = f.cardinality();
        let (a, b, c) = (f.exp(a % n), f.exp(b % n), f.from_int((c % 1000) as i64));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        prop_assert_eq!(f.sub(f.add(a, c), c), a);
        let p = f.characteristic();
        prop_assert_eq!(f.pow(f.add(a, c), p), f.add(f.pow(a, p), f.pow(c, p)));
        prop_assert_eq!(f.pow(a, n - 1), f.one());
    }

    #[test]
    fn subgroup_orders_divide_and_burnside_holds(qi in 0usize..3, seeds in prop::collection::vec(any::<usize>(), 1..3)) {
        let g = ml([4, 5, 9][qi]);
        let all = g.all_elements();
        let gens: Vec<_> = seeds.iter().map(|s| all[s % all.len()]).collect();
        let h = group::closure(g, &gens).unwrap();
        prop_assert_eq!(g.order() % h.order() as u64, 0);
        prop_assert!(group::is_closed(g, &h));
        prop_assert_eq!(g.burnside_orbit_count(&h).unwrap(), g.orbit_counts(&h).total());
        let s = h.elements().iter().map(|x| x.tau).collect::<std::collections::BTreeSet<_>>().len() as u64;
        prop_assert_eq!((g.q() + 1) % s, 0);
    }

    #[test]
    fn ml_group_laws(qi in 0usize..3, i in any::<usize>(), j in any::<usize>(), k in any::<usize>()) {
        let g = ml([4, 5, 9][qi]);
        let all = g.all_elements();
        let (a, b, c) = (all[i % all.len()], all[j % all.len()], all[k % all.len()]);
        prop_assert_eq!(g.compose(g.compose(a, b), c), g.compose(a, g.compose(b, c)));
        prop_assert_eq!(g.compose(a, g.inverse(a)), g.identity());
        prop_assert!(g.is_valid(&g.compose(a, b)));
        prop_assert_eq!(g.det_rho(&g.compose(a, b)), g.field().mul(g.det_rho(&a), g.det_rho(&b)));
    }

    #[test]
    fn pi_and_rho_are_homomorphisms(i in any::<usize>(), j in any::<usize>()) {
        static AUT: OnceLock<AutKn> = OnceLock::new();
        let aut = AUT.get_or_init(|| AutKn::new(4, 3).unwrap());
        let all = aut.all_elements();
        let (a, b) = (all[i % all.len()], all[j % all.len()]);
        let ab = aut.compose(a, b);
        prop_assert_eq!(aut.pi(&ab), aut.ml().compose(aut.pi(&a), aut.pi(&b)));
        prop_assert_eq!(aut.rho(&ab), aut.big_field().mul(aut.rho(&a), aut.rho(&b)));
        let l = group::closure(aut, &[a, b]).unwrap();
        let kernel = l.elements().iter().filter(|g| aut.pi(g) == aut.ml().identity()).count();
        let image: std::collections::BTreeSet<_> = l.elements().iter().map(|g| aut.pi(g)).collect();
        prop_assert_eq!(l.order(), image.len() * kernel);
    }

    #[test]
    fn tame_lift_agrees_with_general_lift(qi in 0usize..3, idx in any::<usize>(), ni in 0usize..5) {
        let a = analysis([4, 5, 9][qi]);
        let tame: Vec<_> = a.instances.iter().filter(|d| d.tame).collect();
        let d = tame[idx % tame.len()];
        let n = [3, 5, 7, 9, 11][ni];
        let m = formulas::m_of(a.q, n).unwrap();
        let bound = formulas::maximal_genus_bound(a.q, n);
        for adm in formulas::admissible_cm_orders(a.q, n, d.s).unwrap() {
            let g = formulas::lift_genus(d.g_bar, formulas::n_from_tame(a.q, d.order, d.g_bar).unwrap(), m / adm.t).unwrap();
            prop_assert_eq!(formulas::lift_genus_tame(a.q, d.g_bar, d.order, m / adm.t).unwrap(), g);
            prop_assert!(g as u128 <= bound);
            prop_assert!(g >= d.g_bar);
        }
    }

    #[test]
    fn coprime_n_admits_every_divisor(qi in 0usize..9, ni in 0usize..6) {
        let q = SUPPORTED[qi];
        let n = [3, 5, 7, 9, 11, 13][ni];
        prop_assume!(arith::gcd(q + 1, n as u64) == 1);
        let m = formulas::m_of(q, n).unwrap();
        for s in arith::divisors(q + 1) {
            let ts: Vec<u64> = formulas::admissible_cm_orders(q, n, s).unwrap().into_iter().map(|a| a.t).collect();
            prop_assert_eq!(ts, arith::divisors(m));
        }
    }

    #[test]
    fn admissible_orders_realise_the_construction(qi in 0usize..9, ni in 0usize..4) {
        // t is admissible iff some cyclic L_0 of order r = s t has |L_0^m| = s and |L_0 ∩ mu_m| = t
        let q = SUPPORTED[qi];
        let n = [3, 5, 7, 9][ni];
        let m = formulas::m_of(q, n).unwrap();
        let qn1 = q.pow(n) + 1;
        for s in arith::divisors(q + 1) {
            let got: Vec<u64> = formulas::admissible_cm_orders(q, n, s).unwrap().into_iter().map(|a| a.t).collect();
            let mut want: Vec<u64> = arith::divisors(qn1)
                .into_iter()
                .filter(|r| r / arith::gcd(*r, m) == s)
                .map(|r| arith::gcd(r, m))
                .collect();
            want.sort_unstable();
            want.dedup();
            prop_assert_eq!(got, want);
        }
    }
}

#[test]
fn spectra_are_sorted_and_deterministic() {
    let a = engine::spectrum(5, 5).unwrap();
    let b = engine::spectrum(5, 5).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.genera.windows(2).all(|w| w[0] < w[1]));
    for r in &a.records {
        assert_eq!(r.recompute(), Ok(r.g_l));
    }
}
