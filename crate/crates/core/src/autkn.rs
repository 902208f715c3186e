//! The automorphism group of `K_n` as triples `(a, c, xi)` acting by
//!
//! ```text
//! | a   c^q xi^m  0  |
//! | c   a^q xi^m  0  |
//! | 0   0         xi |
//! ```
//!
//! together with the restriction map `pi` to `M_l`, the character `rho` and
//! the correspondence between subgroups `L` and triples `(L_0, L_1, bar L)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::arith;
use crate::gf::{Embedding, FfElem, FieldCtx, GfError};
use crate::group::{self, Group, GroupError, Subgroup};
use crate::hermitian::HermitianError;
use crate::mlgroup::{MlElement, MlGroup};

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AutKnElement {
    /// In `F_{q^2}`.
    pub a: FfElem,
    /// In `F_{q^2}`.
    pub c: FfElem,
    /// In `mu_{q^n+1}`, inside `F_{q^{2n}}`.
    pub xi: FfElem,
}

impl fmt::Debug for AutKnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{:?},{:?},{:?}>", self.a, self.c, self.xi)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AutKnError {
    #[error("n = {0} must be odd and positive")]
    EvenN(u32),
    #[error(transparent)]
    Curve(#[from] HermitianError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("triple violates the hypotheses: {0}")]
    Hypothesis(String),
}

pub struct AutKn {
    ml: MlGroup,
    n: u32,
    m: u64,
    big: FieldCtx,
    emb: Embedding,
    /// `mu_{q^n+1}` in `F_{q^{2n}}`.
    xi_group: Vec<FfElem>,
    /// `mu_{q+1}` of the big field, keyed by repr, mapped to the small field.
    pull: HashMap<u64, FfElem>,
}

impl fmt::Debug for AutKn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AutKn").field("q", &self.q()).field("n", &self.n).finish()
    }
}

impl AutKn {
    pub fn new(q: u64, n: u32) -> Result<Self, AutKnError> {
        if n % 2 == 0 {
            return Err(AutKnError::EvenN(n));
        }
        let ml = MlGroup::new(q)?;
        let small = ml.field();
        let big = FieldCtx::new(small.characteristic(), small.degree() * n)?;
        let emb = small.embedding_into(&big)?;
        let qn1 = q.pow(n) + 1;
        let m = qn1 / (q + 1);
        let xi_group = big.roots_of_unity(qn1)?;
        let mut pull = HashMap::new();
        for &t in ml.mu() {
            pull.insert(emb.embed(&big, t)?.repr(), t);
        }
        Ok(AutKn { ml, n, m, big, emb, xi_group, pull })
    }

    pub fn q(&self) -> u64 {
        self.ml.q()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `m = (q^n + 1)/(q + 1)`.
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn ml(&self) -> &MlGroup {
        &self.ml
    }

    pub fn big_field(&self) -> &FieldCtx {
        &self.big
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    /// `|Aut(K_n)| = q(q^2 - 1)(q^n + 1)`.
    pub fn order(&self) -> u64 {
        let q = self.q();
        q * (q * q - 1) * (q.pow(self.n) + 1)
    }

    /// `mu_{q^n+1}`, starting with 1.
    pub fn xi_group(&self) -> &[FfElem] {
        &self.xi_group
    }

    /// `xi^m` as an element of `mu_{q+1}` in `F_{q^2}`.
    pub fn xi_to_tau(&self, xi: FfElem) -> FfElem {
        let t = self.big.pow(xi, self.m);
        *self.pull.get(&t.repr()).expect("xi^m lies in mu_{q+1}")
    }

    pub fn element(&self, a: FfElem, c: FfElem, xi: FfElem) -> Result<AutKnElement, AutKnError> {
        let f = self.ml.field();
        let h = self.ml.hermitian();
        f.try_check(a)?;
        f.try_check(c)?;
        self.big.try_check(xi)?;
        let q = self.q();
        if f.sub(h.norm(a), h.norm(c)) != f.one() || self.big.pow(xi, q.pow(self.n) + 1) != self.big.one() {
            return Err(GroupError::InvalidElement(format!("({a:?},{c:?},{xi:?})")).into());
        }
        Ok(AutKnElement { a, c, xi })
    }

    pub fn try_compose(&self, g: AutKnElement, h: AutKnElement) -> Result<AutKnElement, AutKnError> {
        let f = self.ml.field();
        for e in [g.a, g.c, h.a, h.c] {
            f.try_check(e)?;
        }
        self.big.try_check(g.xi)?;
        self.big.try_check(h.xi)?;
        Ok(self.compose(g, h))
    }

    /// Restriction to the Hermitian function field.
    pub fn pi(&self, g: &AutKnElement) -> MlElement {
        MlElement { a: g.a, c: g.c, tau: self.xi_to_tau(g.xi) }
    }

    pub fn rho(&self, g: &AutKnElement) -> FfElem {
        g.xi
    }

    /// `(1, 0, xi)`.
    pub fn kernel_element(&self, xi: FfElem) -> AutKnElement {
        let f = self.ml.field();
        AutKnElement { a: f.one(), c: f.zero(), xi }
    }

    /// Lifts `[a, c, tau]` to `(a, c, xi)` for a given `xi` with `xi^m = tau`.
    pub fn lift(&self, g: &MlElement, xi: FfElem) -> Option<AutKnElement> {
        (self.xi_to_tau(xi) == g.tau).then_some(AutKnElement { a: g.a, c: g.c, xi })
    }

    /// `C_m = ker pi`.
    pub fn c_m(&self) -> Subgroup<AutKnElement> {
        let gen = self.big.pow(self.xi_group[1 % self.xi_group.len()], self.q() + 1);
        group::closure(self, &[self.kernel_element(gen)]).expect("cyclic")
    }

    /// `S_l`, embedded as `{(a, c, 1)}`.
    pub fn s_ell(&self) -> Subgroup<AutKnElement> {
        let gens: Vec<_> = self
            .ml
            .s_ell_generators()
            .iter()
            .map(|g| AutKnElement { a: g.a, c: g.c, xi: self.big.one() })
            .collect();
        group::closure(self, &gens).expect("S_l fits")
    }

    pub fn full_group_generators(&self) -> Vec<AutKnElement> {
        let mut gens: Vec<_> = self
            .ml
            .s_ell_generators()
            .iter()
            .map(|g| AutKnElement { a: g.a, c: g.c, xi: self.big.one() })
            .collect();
        gens.push(self.kernel_element(self.xi_group[1 % self.xi_group.len()]));
        gens
    }

    /// Every element, in sorted order.
    pub fn all_elements(&self) -> Vec<AutKnElement> {
        let mut out = Vec::with_capacity(self.order() as usize);
        for g in self.ml.s_ell().elements() {
            for &xi in &self.xi_group {
                out.push(AutKnElement { a: g.a, c: g.c, xi });
            }
        }
        out.sort();
        out
    }

    pub fn is_in_s_ell_times_c_m(&self, g: &AutKnElement) -> bool {
        self.big.pow(g.xi, self.m) == self.big.one()
    }

    pub fn triple_of(&self, l: &Subgroup<AutKnElement>) -> Result<TripleSpec, AutKnError> {
        let l0: BTreeSet<FfElem> = l.elements().iter().map(|g| g.xi).collect();
        let l1_elems: Vec<_> = l.elements().iter().copied().filter(|g| self.is_in_s_ell_times_c_m(g)).collect();
        let l1 = group::subgroup_from_elements(self, l1_elems)?;
        let bar: Vec<MlElement> = l.elements().iter().map(|g| self.pi(g)).collect();
        let bar_l = group::subgroup_from_elements(&self.ml, bar)?;
        let lm_order = l.elements().iter().filter(|g| self.pi(g) == self.ml.identity()).count();
        let r = l0.len() as u64;
        let s = r / arith::gcd(r, self.m);
        let spec = TripleSpec { r, s, l0: l0.into_iter().collect(), l1, bar_l, lm_order };
        self.check_identities(&spec)?;
        Ok(spec)
    }

    /// The three identities relating a triple; all must hold for a triple
    /// coming from a subgroup.
    fn check_identities(&self, spec: &TripleSpec) -> Result<(), AutKnError> {
        let f = self.ml.field();
        let det_image: BTreeSet<FfElem> = spec.bar_l.elements().iter().map(|g| g.tau).collect();
        let l0_m: BTreeSet<FfElem> = spec.l0.iter().map(|&xi| self.xi_to_tau(xi)).collect();
        if det_image != l0_m {
            return Err(AutKnError::Hypothesis("determinant image differs from L_0^m".into()));
        }
        if det_image.len() as u64 != spec.s {
            return Err(AutKnError::Hypothesis("s differs from r/gcd(r,m)".into()));
        }
        let bar_cap_s: BTreeSet<MlElement> =
            spec.bar_l.elements().iter().copied().filter(|g| g.tau == f.one()).collect();
        let pi_l1: BTreeSet<MlElement> = spec.l1.elements().iter().map(|g| self.pi(g)).collect();
        if bar_cap_s != pi_l1 {
            return Err(AutKnError::Hypothesis("bar L meets S_l outside pi(L_1)".into()));
        }
        let rho_l1: BTreeSet<FfElem> = spec.l1.elements().iter().map(|g| g.xi).collect();
        let l0_mu_m: BTreeSet<FfElem> =
            spec.l0.iter().copied().filter(|&xi| self.big.pow(xi, self.m) == self.big.one()).collect();
        if rho_l1 != l0_mu_m {
            return Err(AutKnError::Hypothesis("rho(L_1) differs from L_0 meet mu_m".into()));
        }
        Ok(())
    }

    /// Whether `L_1 ∩ C_m` is all of `L_0 ∩ mu_m`, the extra hypothesis under
    /// which every choice of coset representatives closes up.
    pub fn kernel_hypothesis_holds(&self, spec: &TripleSpec) -> bool {
        let kernel_part: BTreeSet<FfElem> = spec
            .l1
            .elements()
            .iter()
            .filter(|g| self.pi(g) == self.ml.identity())
            .map(|g| g.xi)
            .collect();
        let l0_mu_m: BTreeSet<FfElem> =
            spec.l0.iter().copied().filter(|&xi| self.big.pow(xi, self.m) == self.big.one()).collect();
        kernel_part == l0_mu_m
    }

    /// Rebuilds a subgroup as the union of cosets `g_1^i L_1`, `0 <= i < s`.
    ///
    /// `g_1` is the first element over `bar L` (in sorted order) with
    /// `rho = eta` and `det = eta^m` for which the cosets close up.  Under
    /// [`AutKn::kernel_hypothesis_holds`] the first candidate always works;
    /// otherwise the scan still succeeds for triples read off a subgroup.
    pub fn group_from_triple(&self, spec: &TripleSpec) -> Result<Subgroup<AutKnElement>, AutKnError> {
        self.check_identities(spec)?;
        let r = spec.l0.len() as u64;
        let eta = spec
            .l0
            .iter()
            .copied()
            .find(|&x| self.big.order(x) == r)
            .ok_or_else(|| AutKnError::Hypothesis("L_0 is not cyclic".into()))?;
        let zeta = self.xi_to_tau(eta);
        let s = self.ml.field().order(zeta) as usize;
        if s == 1 {
            return Ok(spec.l1.clone());
        }
        let target = s * spec.l1.order();
        for b in spec.bar_l.elements().iter().filter(|g| g.tau == zeta) {
            let g1 = AutKnElement { a: b.a, c: b.c, xi: eta };
            let mut gens = spec.l1.generators().to_vec();
            gens.push(g1);
            let Ok(l) = group::closure_with_limit(self, &gens, target) else {
                continue;
            };
            if l.order() == target && spec.l1.is_subset_of(&l) {
                return Ok(l);
            }
        }
        Err(AutKnError::Hypothesis("no coset representative closes up".into()))
    }
}


impl Group for AutKn {
    type Elem = AutKnElement;

    fn identity(&self) -> AutKnElement {
        let f = self.ml.field();
        AutKnElement { a: f.one(), c: f.zero(), xi: self.big.one() }
    }

    fn compose(&self, g: AutKnElement, h: AutKnElement) -> AutKnElement {
        let f = self.ml.field();
        let herm = self.ml.hermitian();
        let t1 = self.xi_to_tau(g.xi);
        let a = f.add(f.mul(g.a, h.a), f.mul(t1, f.mul(herm.conj(g.c), h.c)));
        let c = f.add(f.mul(g.c, h.a), f.mul(t1, f.mul(herm.conj(g.a), h.c)));
        AutKnElement { a, c, xi: self.big.mul(g.xi, h.xi) }
    }

    fn inverse(&self, g: AutKnElement) -> AutKnElement {
        let inv = self.ml.inverse(self.pi(&g));
        let xi = self.big.inv(g.xi).expect("xi is a root of unity");
        AutKnElement { a: inv.a, c: inv.c, xi }
    }
}

/// The invariants `(L_0, L_1, bar L)` of a subgroup `L` of `Aut(K_n)`.
#[derive(Debug, Clone)]
pub struct TripleSpec {
    /// `|L_0|`.
    pub r: u64,
    /// `|L_0^m|`, the order of the determinant image of `bar L`.
    pub s: u64,
    /// `L_0 = rho(L)`, sorted.
    pub l0: Vec<FfElem>,
    /// `L_1 = L meet (S_l x C_m)`.
    pub l1: Subgroup<AutKnElement>,
    pub bar_l: Subgroup<MlElement>,
    /// `|L meet C_m|`.
    pub lm_order: usize,
}

impl TripleSpec {
    /// The triple `L_0 = mu_r`, `bar L` given, `L_1 = (bar L meet S_l) x (L_0 meet mu_m)`.
    pub fn standard(aut: &AutKn, bar_l: &Subgroup<MlElement>, r: u64) -> Result<Self, AutKnError> {
        let big = aut.big_field();
        let l0 = big.roots_of_unity(r)?;
        let f = aut.ml().field();
        let mut gens: Vec<AutKnElement> = bar_l
            .elements()
            .iter()
            .filter(|g| g.tau == f.one())
            .map(|g| AutKnElement { a: g.a, c: g.c, xi: big.one() })
            .collect();
        let mu_m: Vec<FfElem> = l0.iter().copied().filter(|&x| big.pow(x, aut.m()) == big.one()).collect();
        gens.extend(mu_m.iter().map(|&x| aut.kernel_element(x)));
        let l1 = group::closure(aut, &gens)?;
        let mut l0 = l0;
        l0.sort();
        let s = r / arith::gcd(r, aut.m());
        Ok(TripleSpec { r, s, l0, lm_order: mu_m.len(), l1, bar_l: bar_l.clone() })
    }
}
