//! Parameter ranges of the subgroup families of `M_l` and explicit
//! generator recipes realising each instance for small `q`.

use std::collections::{BTreeMap, HashSet};
use std::sync::OnceLock;

use thiserror::Error;

use crate::arith::{self, gcd, lcm};
use crate::family::{DetRule, Family, FamilyInstance};
use crate::gf::FfElem;
use crate::group::{self, Group, GroupError, Subgroup};
use crate::hermitian::HermitianError;
use crate::mlgroup::{Mat2, MlElement, MlGroup};

/// Largest `q` for which groups are built explicitly.
pub const INSTANTIATE_LIMIT: u64 = 25;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {0} is 3 mod 4: no complete subgroup list is available for this class")]
    UnsupportedClass(u64),
    #[error("explicit subgroups are only built for q <= {INSTANTIATE_LIMIT}, got q = {0}")]
    TooLarge(u64),
    #[error("recipe for {inst} failed: {reason}")]
    Recipe { inst: String, reason: String },
    #[error("structural check for {inst} failed: {reason}")]
    Structure { inst: String, reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Curve(#[from] HermitianError),
}

/// Rejects `q` outside the two supported congruence classes.
pub fn check_supported(q: u64) -> Result<(u64, u32), CatalogError> {
    let (p, h) = arith::prime_power(q).ok_or(CatalogError::NotPrimePower(q))?;
    if p != 2 && q % 4 != 1 {
        return Err(CatalogError::UnsupportedClass(q));
    }
    Ok((p, h))
}

/// A subgroup `K` of `Z_n x Z_n` in Hermite normal form: generated by
/// `(a, b)` and `(0, d)` with `a | n`, `d | n`, `0 <= b < d`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub d: u64,
}

impl Lattice {
    pub fn all(n: u64) -> Vec<Lattice> {
        let divs = arith::divisors(n);
        let mut out = Vec::new();
        for &a in &divs {
            for &d in &divs {
                for b in 0..d {
                    if ((n / a) * b) % d == 0 {
                        out.push(Lattice { n, a, b, d });
                    }
                }
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        (self.n / self.a) * (self.n / self.d)
    }

    pub fn contains(&self, x: u64, y: u64) -> bool {
        let (x, y) = (x % self.n, y % self.n);
        if x % self.a != 0 {
            return false;
        }
        let i = x / self.a;
        let shift = (i * self.b) % self.n;
        ((y + self.n - shift) % self.n) % self.d == 0
    }

    /// Invariant under exchanging the two coordinates.
    pub fn swap_invariant(&self) -> bool {
        self.contains(self.b, self.a) && self.contains(self.d, 0)
    }

    /// `|K ∩ {(x, x)}|`
    pub fn diagonal_order(&self) -> u64 {
        (0..self.n).filter(|&x| self.contains(x, x)).count() as u64
    }

    /// `|K ∩ {(x, 0)}|`
    pub fn first_axis_order(&self) -> u64 {
        (0..self.n).filter(|&x| self.contains(x, 0)).count() as u64
    }

    pub fn generators(&self) -> [(u64, u64); 2] {
        [(self.a % self.n, self.b), (0, self.d % self.n)]
    }
}

/// Coset representatives `(u, v)` for swaps `s0 * diag(eps^u, eps^v)`
/// extending a swap-invariant `K` to a group with `K` of index two, taken up
/// to conjugation by diagonal elements.
pub fn triangle_swaps(k: &Lattice, odd: bool) -> Vec<(u64, u64)> {
    let n = k.n;
    let half = if odd { n / 2 } else { 0 };
    let mut covered = vec![false; (n * n) as usize];
    let mut out = Vec::new();
    let ka: Vec<(u64, u64)> = {
        let mut v = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if k.contains(x, y) {
                    v.push((x, y));
                }
            }
        }
        v
    };
    for u in 0..n {
        for v in 0..n {
            if covered[(u * n + v) as usize] {
                continue;
            }
            for &(kx, ky) in &ka {
                for x in 0..n {
                    let cu = (u + kx + x) % n;
                    let cv = (v + ky + n - x) % n;
                    covered[(cu * n + cv) as usize] = true;
                }
            }
            let c = (u + v + half) % n;
            if k.contains(c, c) {
                out.push((u, v));
            }
        }
    }
    out
}

/// `(e, a, w)` of a transitive triangle group from the lattice of its
/// pointwise part.
pub fn triangle_invariants(k: &Lattice) -> (u64, u64, u64) {
    (k.order(), k.first_axis_order(), k.diagonal_order())
}

fn inst(family: Family, q: u64, params: &[(&str, u64)], order: u64, det: DetRule) -> FamilyInstance {
    FamilyInstance::new(family, q, params, order, det)
}

/// Every family instance for the given `q`.
pub fn enumerate_instances(q: u64) -> Result<Vec<FamilyInstance>, CatalogError> {
    let (p, h) = check_supported(q)?;
    let mut out = Vec::new();
    let m1 = DetRule::MultipleOfW(1);
    let m2 = DetRule::MultipleOfW(2);
    if p == 2 {
        let ws = arith::divisors(q + 1);
        let fam = Family::EvenElementaryAbelian;
        for f in 1..=h {
            for &w in &ws {
                out.push(inst(fam, q, &[("f", f as u64), ("w", w)], (1 << f) * w, m1));
            }
        }
        for &w in &ws {
            if h % 2 == 0 || w % 3 != 0 {
                out.push(inst(Family::EvenSl22, q, &[("w", w)], 6 * w, m1));
            }
        }
        if h % 2 == 1 {
            for &w in ws.iter().filter(|&&w| w % 3 == 0) {
                let k = arith::valuation(w, 3) as u64;
                out.push(inst(Family::EvenSl22Thrice, q, &[("k", k), ("w", w)], 6 * w, m1));
            }
        }
        for f in (2..=h).filter(|f| h % f == 0) {
            let pf = 1u64 << f;
            for &w in &ws {
                out.push(inst(Family::EvenSl2f, q, &[("f", f as u64), ("w", w)], pf * (pf * pf - 1) * w, m1));
            }
        }
        for t in arith::divisors(q - 1) {
            for &w in &ws {
                out.push(inst(Family::EvenDihedral, q, &[("t", t), ("w", w)], 2 * t * w, m1));
            }
        }
        if h % 2 == 0 {
            for &w in &ws {
                out.push(inst(Family::EvenA5, q, &[("w", w)], 60 * w, m1));
            }
            for &w in &ws {
                out.push(inst(Family::EvenA4, q, &[("w", w)], 12 * w, m1));
            }
        }
        for f in 1..=h {
            let pf = 1u64 << f;
            for d in arith::divisors(gcd(pf - 1, q - 1)).into_iter().filter(|&d| d > 1) {
                for &w in &ws {
                    out.push(inst(Family::EvenBorel, q, &[("d", d), ("f", f as u64), ("w", w)], pf * d * w, m1));
                }
            }
        }
        for d in arith::divisors(q - 1) {
            for &w in &ws {
                out.push(inst(Family::EvenCyclic, q, &[("d", d), ("w", w)], d * w, m1));
            }
        }
        for &t in &ws {
            for &w in &ws {
                let params = [("a", gcd(t, w)), ("e", t * w), ("t", t), ("w", w)];
                out.push(inst(Family::EvenTriangleTransitive, q, &params, 2 * t * w, DetRule::Oracle));
            }
        }
        for k in Lattice::all(q + 1) {
            let params = [("e", k.order()), ("ka", k.a), ("kb", k.b), ("kd", k.d), ("w", k.diagonal_order())];
            out.push(inst(Family::EvenTrianglePointwise, q, &params, k.order(), DetRule::Oracle));
        }
        return Ok(out);
    }

    let half = (q + 1) / 2;
    let ws = arith::divisors(half);
    if (q * q - 1) % 5 == 0 {
        for &w in &ws {
            out.push(inst(Family::OddSl25, q, &[("w", w)], 120 * w, m1));
        }
    }
    if p >= 5 && (q - 1) % 8 == 0 {
        for &w in &ws {
            out.push(inst(Family::OddG48, q, &[("w", w)], 48 * w, m1));
        }
    }
    if p >= 5 {
        for &w in &ws {
            // SL(2,3) x C_w is realised for every w; the twisted copy needs an
            // element of order 3 in Z_1 to glue to SL(2,3)/Q_8
            out.push(inst(Family::OddSl23, q, &[("twist", 0), ("w", w)], 24 * w, m1));
            if w % 3 != 0 && half % 3 == 0 {
                out.push(inst(Family::OddSl23, q, &[("twist", 1), ("w", w)], 24 * w, DetRule::MultipleOfW(3)));
            }
        }
        let v3 = arith::valuation(half, 3);
        for k in 2..=v3 {
            for &w in ws.iter().filter(|&&w| arith::valuation(w, 3) == k - 1) {
                out.push(inst(Family::OddQ8C3k, q, &[("k", k as u64), ("w", w)], 24 * w, DetRule::MultipleOfW(3)));
            }
        }
    }
    for d in arith::divisors(q * q - 1).into_iter().filter(|d| (q + 1) % d != 0) {
        out.push(inst(Family::OddCyclic, q, &[("d", d)], d, DetRule::Oracle));
    }
    for d in arith::divisors((q - 1) / 2).into_iter().filter(|&d| d > 1) {
        for &w in &ws {
            out.push(inst(Family::OddDicyclic, q, &[("d", d), ("w", w)], 4 * d * w, m1));
        }
    }
    for k in (1..=h).filter(|k| h % k == 0) {
        let pk = p.pow(k);
        let base = pk * (pk * pk - 1);
        for &w in &ws {
            out.push(inst(Family::OddSl2Sub, q, &[("k", k as u64), ("w", w)], base * w, m1));
        }
        if (h / k) % 2 == 0 {
            for &w in &ws {
                out.push(inst(Family::OddTl, q, &[("k", k as u64), ("w", w)], 2 * base * w, m1));
            }
        }
    }
    if p >= 5 && (q - 1) % 8 != 0 {
        for &w in &ws {
            out.push(inst(Family::OddGl23, q, &[("w", w)], 48 * w, m2));
        }
    }
    for d in arith::divisors(q - 1).into_iter().filter(|&d| d > 2) {
        for &w in &ws {
            out.push(inst(Family::OddDihedral, q, &[("d", d), ("w", w)], 2 * d * w, m2));
        }
    }
    for m in arith::divisors((q - 1) / 2).into_iter().filter(|m| ((q - 1) / 4) % m != 0) {
        for &w in &ws {
            out.push(inst(Family::OddHatDic, q, &[("m", m), ("w", w)], 8 * m * w, m2));
        }
    }
    for k in (1..=h).filter(|k| h % k == 0 && (h / k) % 2 == 1) {
        let pk = p.pow(k);
        for &w in &ws {
            out.push(inst(Family::OddSuPm, q, &[("k", k as u64), ("w", w)], 2 * pk * (pk * pk - 1) * w, m2));
        }
    }
    for k in Lattice::all(q + 1) {
        let params = [("e", k.order()), ("ka", k.a), ("kb", k.b), ("kd", k.d), ("w", k.diagonal_order())];
        out.push(inst(Family::OddTrianglePointwise, q, &params, k.order(), DetRule::Oracle));
    }
    if q <= INSTANTIATE_LIMIT {
        for k in Lattice::all(q + 1).into_iter().filter(|k| k.swap_invariant()) {
            let (e, a, w) = triangle_invariants(&k);
            for (su, sv) in triangle_swaps(&k, true) {
                let params =
                    [("a", a), ("e", e), ("ka", k.a), ("kb", k.b), ("kd", k.d), ("su", su), ("sv", sv), ("w", w)];
                out.push(inst(Family::OddTriangleTransitive, q, &params, 2 * e, DetRule::Oracle));
            }
        }
    }
    for mu in arith::divisors(q * q - 1) {
        for u in 0..=h {
            if point_stabilizer_realizable(q, mu, u) {
                let params = [("mu", mu), ("u", u as u64)];
                out.push(inst(Family::OddPointStabilizer, q, &params, mu * p.pow(u), DetRule::Oracle));
            }
        }
    }
    Ok(out)
}

/// `(E' ⋊ C_mu)` exists iff `E'` can be a module over the field generated
/// by the multipliers `lambda^(q+1)`, i.e. iff the degree of that field
/// divides `u`.
pub fn point_stabilizer_realizable(q: u64, mu: u64, u: u32) -> bool {
    let Some((p, h)) = arith::prime_power(q) else { return false };
    if u > h || (q * q - 1) % mu != 0 {
        return false;
    }
    u % multiplier_degree(p, mu / gcd(mu, q + 1)) == 0
}

/// Degree over `F_p` of the field generated by a root of unity of order `e`.
fn multiplier_degree(p: u64, e: u64) -> u32 {
    let mut j = 1;
    let mut x = p % e.max(1);
    if e <= 1 {
        return 1;
    }
    while x != 1 {
        x = (x * p) % e;
        j += 1;
    }
    j
}

/// Builds explicit groups for instances.
pub struct Catalog {
    ml: MlGroup,
    p: u64,
    h: u32,
    fq: Vec<FfElem>,
    all: OnceLock<Vec<MlElement>>,
}

impl std::fmt::Debug for Catalog {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Catalog").field("q", &self.ml.q()).finish()
    }
}

impl Catalog {
    pub fn new(q: u64) -> Result<Self, CatalogError> {
        let (p, h) = check_supported(q)?;
        if q > INSTANTIATE_LIMIT {
            return Err(CatalogError::TooLarge(q));
        }
        let ml = MlGroup::new(q)?;
        let fq = ml.field().subfield_elements(q).map_err(HermitianError::from)?;
        Ok(Catalog { ml, p, h, fq, all: OnceLock::new() })
    }

    pub fn ml(&self) -> &MlGroup {
        &self.ml
    }

    pub fn q(&self) -> u64 {
        self.ml.q()
    }

    fn recipe_err(inst: &FamilyInstance, reason: impl Into<String>) -> CatalogError {
        CatalogError::Recipe { inst: inst.to_string(), reason: reason.into() }
    }

    fn structure_err(inst: &FamilyInstance, reason: impl Into<String>) -> CatalogError {
        CatalogError::Structure { inst: inst.to_string(), reason: reason.into() }
    }

    /// Element of `Z` of order `w`.
    fn central(&self, w: u64) -> MlElement {
        let q = self.q();
        self.ml.power(self.ml.center_generator(), (q + 1) / w)
    }

    /// Element of `F_{q^2}^*` of order `d`.
    fn root(&self, d: u64) -> FfElem {
        let f = self.ml.field();
        f.exp((f.cardinality() - 1) / d)
    }

    fn split(&self, m: Mat2) -> Result<MlElement, CatalogError> {
        Ok(self.ml.from_split(&m)?)
    }

    fn weyl(&self) -> Result<MlElement, CatalogError> {
        let f = self.ml.field();
        self.split([f.zero(), f.one(), f.neg(f.one()), f.zero()])
    }

    /// A determinant `-1` involution of `M_l` inverting the split torus.
    fn reflection(&self) -> Result<MlElement, CatalogError> {
        let f = self.ml.field();
        let q = self.q();
        let m1 = f.neg(f.one());
        let y = f
            .elements()
            .find(|&y| !y.is_zero() && f.pow(y, q - 1) == m1)
            .ok_or_else(|| CatalogError::Recipe { inst: "reflection".into(), reason: "no y".into() })?;
        self.split([f.zero(), f.inv(y).expect("nonzero"), y, f.zero()])
    }

    /// Greedy basis of an `F_{p^j}`-subspace of `F_q` of `F_p`-dimension `dim`,
    /// returned as the list of all its elements.
    fn subspace(&self, j: u32, dim: u32) -> Result<Vec<FfElem>, String> {
        let f = self.ml.field();
        if dim % j != 0 {
            return Err(format!("dimension {dim} is not a multiple of {j}"));
        }
        let scalars = f.subfield_elements(self.p.pow(j)).map_err(|e| e.to_string())?;
        let mut span: Vec<FfElem> = vec![f.zero()];
        let mut have: HashSet<FfElem> = span.iter().copied().collect();
        for &b in &self.fq {
            if span.len() as u64 == self.p.pow(dim) {
                break;
            }
            if have.contains(&b) {
                continue;
            }
            let mut next = Vec::with_capacity(span.len() * scalars.len());
            for &s in &span {
                for &c in &scalars {
                    next.push(f.add(s, f.mul(c, b)));
                }
            }
            span = next;
            have = span.iter().copied().collect();
        }
        if span.len() as u64 != self.p.pow(dim) {
            return Err("subspace construction overshot".into());
        }
        Ok(span)
    }

    fn unipotents(&self, vs: &[FfElem]) -> Vec<MlElement> {
        vs.iter().filter(|v| !v.is_zero()).map(|&v| self.ml.unipotent(v)).collect()
    }

    /// Quaternion units `i`, `j` in split coordinates plus `omega` of order 3.
    fn quaternion_units(&self) -> Result<(Mat2, Mat2, Mat2), String> {
        let f = self.ml.field();
        let m1 = f.neg(f.one());
        let (a, b) = self
            .fq
            .iter()
            .find_map(|&a| {
                let t = f.sub(m1, f.mul(a, a));
                let b = f.sqrt(t)?;
                self.fq.contains(&b).then_some((a, b))
            })
            .ok_or("no a^2 + b^2 = -1 in F_q")?;
        let i = [f.zero(), f.one(), m1, f.zero()];
        let j = [a, b, b, f.neg(a)];
        let k = crate::mlgroup::mat_mul(f, &i, &j);
        let half = f.inv(f.from_int(2)).map_err(|e| e.to_string())?;
        let mh = f.neg(half);
        let id = [f.one(), f.zero(), f.zero(), f.one()];
        let mut omega = [f.zero(); 4];
        for t in 0..4 {
            omega[t] = f.mul(mh, f.add(f.add(id[t], i[t]), f.add(j[t], k[t])));
        }
        Ok((i, j, omega))
    }

    fn quaternion_combo(&self, coeffs: [FfElem; 4], i: &Mat2, j: &Mat2) -> Mat2 {
        let f = self.ml.field();
        let k = crate::mlgroup::mat_mul(f, i, j);
        let id = [f.one(), f.zero(), f.zero(), f.one()];
        let mut out = [f.zero(); 4];
        for t in 0..4 {
            out[t] = f.add(
                f.add(f.mul(coeffs[0], id[t]), f.mul(coeffs[1], i[t])),
                f.add(f.mul(coeffs[2], j[t]), f.mul(coeffs[3], k[t])),
            );
        }
        out
    }

    /// Generators of the binary tetrahedral group inside `S_l`.
    fn binary_tetrahedral(&self) -> Result<Vec<MlElement>, String> {
        let (i, j, omega) = self.quaternion_units()?;
        [i, j, omega].iter().map(|m| self.split(*m).map_err(|e| e.to_string())).collect()
    }

    fn all_elements(&self) -> &[MlElement] {
        self.all.get_or_init(|| self.ml.all_elements())
    }

    /// All groups `H0 ∪ x H0` with `det x = tau`, `x ∉ H0` normalising `H0`
    /// and `x^2 ∈ H0`.
    fn index_two_extensions(
        &self,
        h0: &Subgroup<MlElement>,
        tau: FfElem,
    ) -> Result<Vec<Subgroup<MlElement>>, GroupError> {
        let ml = &self.ml;
        let mut found: Vec<Subgroup<MlElement>> = Vec::new();
        for &x in self.all_elements().iter().filter(|x| x.tau == tau) {
            if h0.contains(&x) || found.iter().any(|g| g.contains(&x)) {
                continue;
            }
            if !h0.contains(&ml.compose(x, x)) {
                continue;
            }
            let xi = ml.inverse(x);
            if h0.generators().iter().all(|&g| h0.contains(&ml.compose(ml.compose(x, g), xi))) {
                let mut gens = h0.generators().to_vec();
                gens.push(x);
                found.push(group::closure(ml, &gens)?);
            }
        }
        Ok(found)
    }

    fn close(&self, gens: &[MlElement]) -> Result<Subgroup<MlElement>, CatalogError> {
        Ok(group::closure(&self.ml, gens)?)
    }

    /// The element `diag(eps^x, eps^y)` of the pointwise triangle stabiliser.
    fn diag(&self, x: u64, y: u64) -> MlElement {
        let f = self.ml.field();
        let e = self.ml.eps();
        MlElement { a: f.pow(e, x), c: f.zero(), tau: f.pow(e, x + y) }
    }

    /// A fixed swap of `(1:0:0)` and `(0:1:0)`.
    fn base_swap(&self) -> Result<MlElement, CatalogError> {
        let f = self.ml.field();
        let m1 = f.neg(f.one());
        let herm = self.ml.hermitian();
        let c0 = f
            .elements()
            .find(|&c| herm.norm(c) == m1)
            .ok_or_else(|| CatalogError::Recipe { inst: "triangle".into(), reason: "no norm -1".into() })?;
        Ok(self.ml.element(f.zero(), c0, f.one())?)
    }

    fn lattice_group(&self, k: &Lattice, swap: Option<(u64, u64)>) -> Result<Subgroup<MlElement>, CatalogError> {
        let mut gens: Vec<MlElement> = k.generators().iter().map(|&(x, y)| self.diag(x, y)).collect();
        if let Some((u, v)) = swap {
            gens.push(self.ml.compose(self.base_swap()?, self.diag(u, v)));
        }
        self.close(&gens)
    }

    fn lattice_from(inst: &FamilyInstance) -> Lattice {
        Lattice { n: inst.q + 1, a: inst.param("ka"), b: inst.param("kb"), d: inst.param("kd") }
    }

    /// Explicit subgroups realising an instance; several entries when the
    /// recipe admits inequivalent choices.  Each is checked by
    /// [`Catalog::verify_structure`].
    pub fn instantiate(&self, inst: &FamilyInstance) -> Result<Vec<Subgroup<MlElement>>, CatalogError> {
        if inst.q != self.q() {
            return Err(Self::recipe_err(inst, "instance belongs to another q"));
        }
        let groups = self.build(inst)?;
        if groups.is_empty() {
            return Err(Self::recipe_err(inst, "no subgroup found"));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in groups {
            self.verify_structure(inst, &g)?;
            let counts = self.ml.orbit_counts(&g);
            if seen.insert((counts.orbit_sizes.clone(), counts.n1, self.s_of(&g))) {
                out.push(g);
            }
        }
        Ok(out)
    }

    fn build(&self, inst: &FamilyInstance) -> Result<Vec<Subgroup<MlElement>>, CatalogError> {
        let f = self.ml.field();
        let q = self.q();
        let w = inst.get("w").unwrap_or(1);
        let zw = self.central(w);
        let err = |r: String| Self::recipe_err(inst, r);
        let one = |mut gens: Vec<MlElement>| -> Result<Vec<Subgroup<MlElement>>, CatalogError> {
            gens.push(zw);
            Ok(vec![self.close(&gens)?])
        };
        match inst.family {
            Family::EvenElementaryAbelian => {
                let e = self.subspace(1, inst.param("f") as u32).map_err(err)?;
                one(self.unipotents(&e))
            }
            Family::EvenSl22 | Family::EvenSl22Thrice => one(vec![self.ml.unipotent(f.one()), self.weyl()?]),
            Family::EvenSl2f | Family::EvenA5 | Family::OddSl2Sub => {
                let k = match inst.family {
                    Family::EvenA5 => 2,
                    Family::EvenSl2f => inst.param("f") as u32,
                    _ => inst.param("k") as u32,
                };
                let sub = f.subfield_elements(self.p.pow(k)).map_err(|e| err(e.to_string()))?;
                let mut gens = self.unipotents(&sub);
                gens.push(self.weyl()?);
                one(gens)
            }
            Family::EvenDihedral => {
                let t = inst.param("t");
                one(vec![self.ml.torus(self.root(t)), self.weyl()?])
            }
            Family::EvenA4 => {
                let sub = f.subfield_elements(4).map_err(|e| err(e.to_string()))?;
                let mut gens = self.unipotents(&sub);
                gens.push(self.ml.torus(self.root(3)));
                one(gens)
            }
            Family::EvenBorel => {
                let fdim = inst.param("f") as u32;
                let g = gcd(fdim, self.h);
                let e = self.subspace(g, fdim).map_err(err)?;
                let mut gens = self.unipotents(&e);
                gens.push(self.ml.torus(self.root(inst.param("d"))));
                one(gens)
            }
            Family::EvenCyclic => one(vec![self.ml.torus(self.root(inst.param("d")))]),
            Family::EvenTriangleTransitive => {
                let (t, a) = (inst.param("t"), inst.param("a"));
                for k in Lattice::all(q + 1) {
                    if k.order() != t * w || !k.swap_invariant() || triangle_invariants(&k) != (t * w, a, w) {
                        continue;
                    }
                    if let Some(&s) = triangle_swaps(&k, false).first() {
                        return Ok(vec![self.lattice_group(&k, Some(s))?]);
                    }
                }
                Err(err("no triangle group with these invariants".into()))
            }
            Family::EvenTrianglePointwise | Family::OddTrianglePointwise => {
                Ok(vec![self.lattice_group(&Self::lattice_from(inst), None)?])
            }
            Family::OddTriangleTransitive => {
                let s = (inst.param("su"), inst.param("sv"));
                Ok(vec![self.lattice_group(&Self::lattice_from(inst), Some(s))?])
            }
            Family::OddSl25 | Family::OddG48 => {
                let (i, j, omega) = self.quaternion_units().map_err(err)?;
                let half = f.inv(f.from_int(2)).expect("odd characteristic");
                let extra = if inst.family == Family::OddSl25 {
                    let r5 = f.sqrt(f.from_int(5)).ok_or_else(|| err("5 is not a square".into()))?;
                    let phi = f.mul(half, f.add(f.one(), r5));
                    let phi_inv = f.sub(phi, f.one());
                    self.quaternion_combo([f.mul(half, phi), f.mul(half, phi_inv), half, f.zero()], &i, &j)
                } else {
                    let r2 = f.sqrt(f.from_int(2)).ok_or_else(|| err("2 is not a square".into()))?;
                    let s = f.inv(r2).expect("nonzero");
                    self.quaternion_combo([s, s, f.zero(), f.zero()], &i, &j)
                };
                let gens = [i, j, omega, extra].iter().map(|m| self.split(*m)).collect::<Result<Vec<_>, _>>()?;
                one(gens)
            }
            Family::OddSl23 | Family::OddQ8C3k => {
                let mut gens = self.binary_tetrahedral().map_err(err)?;
                let glue = match inst.family {
                    Family::OddSl23 if inst.param("twist") == 0 => None,
                    Family::OddSl23 => Some(3),
                    _ => Some(3u64.pow(inst.param("k") as u32)),
                };
                if let Some(order) = glue {
                    let omega = gens.pop().expect("omega is last");
                    gens.push(self.ml.compose(omega, self.central(order)));
                }
                if inst.family == Family::OddQ8C3k {
                    let k = inst.param("k") as u32;
                    gens.push(self.central(w / 3u64.pow(k - 1)));
                    return Ok(vec![self.close(&gens)?]);
                }
                one(gens)
            }
            Family::OddCyclic => Ok(vec![self.close(&[self.ml.torus(self.root(inst.param("d")))])?]),
            Family::OddDicyclic => {
                let d = inst.param("d");
                one(vec![self.ml.torus(self.root(2 * d)), self.weyl()?])
            }
            Family::OddDihedral => {
                let d = inst.param("d");
                one(vec![self.ml.torus(self.root(d)), self.reflection()?])
            }
            Family::OddTl | Family::OddSuPm | Family::OddGl23 => {
                let h0 = if inst.family == Family::OddGl23 {
                    self.close(&self.binary_tetrahedral().map_err(err)?)?
                } else {
                    let k = inst.param("k") as u32;
                    let sub = f.subfield_elements(self.p.pow(k)).map_err(|e| err(e.to_string()))?;
                    let mut gens = self.unipotents(&sub);
                    gens.push(self.weyl()?);
                    self.close(&gens)?
                };
                // TL(2,p^k) is the preimage of PGL(2,p^k) inside SL(2,q)
                let tau = if inst.family == Family::OddTl { f.one() } else { f.neg(f.one()) };
                let mut out = Vec::new();
                for ext in self.index_two_extensions(&h0, tau)? {
                    let mut gens = ext.generators().to_vec();
                    gens.push(zw);
                    out.push(self.close(&gens)?);
                }
                Ok(out)
            }
            Family::OddHatDic => {
                let m = inst.param("m");
                let alpha = self.ml.torus(self.root(4 * m));
                let target = self.ml.power(alpha, 2 * m);
                let conj = self.ml.power(alpha, 2 * m - 1);
                let mut out = Vec::new();
                for &xi in self.all_elements() {
                    if out.iter().any(|o: &Subgroup<MlElement>| o.contains(&xi)) {
                        continue;
                    }
                    if self.ml.compose(xi, xi) != target {
                        continue;
                    }
                    let xinv = self.ml.inverse(xi);
                    if self.ml.compose(self.ml.compose(xinv, alpha), xi) == conj {
                        out.push(self.close(&[alpha, xi, zw])?);
                    }
                }
                Ok(out)
            }
            Family::OddPointStabilizer => {
                let mu = inst.param("mu");
                let u = inst.param("u") as u32;
                let j = multiplier_degree(self.p, mu / gcd(mu, q + 1));
                let e = self.subspace(j, u).map_err(err)?;
                let mut gens = self.unipotents(&e);
                gens.push(self.ml.torus(self.root(mu)));
                Ok(vec![self.close(&gens)?])
            }
        }
    }

    /// Order of the image of `det_rho`.
    pub fn s_of(&self, h: &Subgroup<MlElement>) -> u64 {
        let taus: HashSet<FfElem> = h.elements().iter().map(|g| self.ml.det_rho(g)).collect();
        taus.len() as u64
    }

    fn is_central(&self, g: &MlElement) -> bool {
        g.c.is_zero() && g.tau == self.ml.field().mul(g.a, g.a)
    }

    /// `|H ∩ Z|` for even `q`, `|H ∩ Z_1|` for odd `q`.
    pub fn center_part(&self, h: &Subgroup<MlElement>) -> u64 {
        let f = self.ml.field();
        let q = self.q();
        h.elements()
            .iter()
            .filter(|g| self.is_central(g))
            .filter(|g| q % 2 == 0 || f.pow(g.a, (q + 1) / 2) == f.one())
            .count() as u64
    }

    fn order_stats(&self, h: &Subgroup<MlElement>) -> BTreeMap<u64, usize> {
        group::order_statistics(&self.ml, h).into_iter().collect()
    }

    /// Certifies an instantiated group: order, intersection with the centre,
    /// element orders or Sylow structure, and the triangle action.
    pub fn verify_structure(&self, inst: &FamilyInstance, h: &Subgroup<MlElement>) -> Result<(), CatalogError> {
        let bad = |r: String| Err(Self::structure_err(inst, r));
        if h.order() as u64 != inst.order {
            return bad(format!("order {} instead of {}", h.order(), inst.order));
        }
        let w = inst.get("w").unwrap_or(1);
        let tail = !matches!(
            inst.family,
            Family::EvenTriangleTransitive
                | Family::EvenTrianglePointwise
                | Family::OddTrianglePointwise
                | Family::OddTriangleTransitive
                | Family::OddCyclic
                | Family::OddPointStabilizer
        );
        if tail && self.center_part(h) != w {
            return bad(format!("meets the centre in {} elements, expected {w}", self.center_part(h)));
        }
        if let Some(x) = self.abstract_stats(inst) {
            let got = self.order_stats(h);
            let want = product_stats(&x, &cyclic_stats(w));
            if got != want {
                return bad(format!("element orders {got:?}, expected {want:?}"));
            }
        }
        let pgroup = match inst.family {
            Family::EvenElementaryAbelian | Family::EvenBorel => Some(inst.param("f") as u32),
            Family::OddPointStabilizer => Some(inst.param("u") as u32),
            _ => None,
        };
        if let Some(e) = pgroup {
            let sylow: Vec<MlElement> = h
                .elements()
                .iter()
                .copied()
                .filter(|&g| self.ml.power(g, self.p.pow(e)) == self.ml.identity())
                .collect();
            if sylow.len() as u64 != self.p.pow(e) || group::subgroup_from_elements(&self.ml, sylow).is_err() {
                return bad("Sylow p-subgroup is not normal of the expected order".into());
            }
        }
        if let Family::OddQ8C3k = inst.family {
            let two: Vec<MlElement> =
                h.elements().iter().copied().filter(|&g| self.ml.power(g, 8) == self.ml.identity()).collect();
            if two.len() != 8 {
                return bad("Sylow 2-subgroup is not a normal Q_8".into());
            }
        }
        match inst.family {
            Family::EvenTrianglePointwise | Family::OddTrianglePointwise => {
                if h.elements().iter().any(|g| !g.c.is_zero()) {
                    return bad("does not fix the triangle pointwise".into());
                }
            }
            Family::EvenTriangleTransitive | Family::OddTriangleTransitive => {
                let swaps = h.elements().iter().filter(|g| g.a.is_zero()).count();
                let diag = h.elements().iter().filter(|g| g.c.is_zero()).count();
                if swaps != diag || swaps + diag != h.order() {
                    return bad("not transitive on the two vertices on Z = 0".into());
                }
                let wz = h.elements().iter().filter(|g| self.is_central(g)).count() as u64;
                let t = h.order() as u64 / (2 * wz);
                let got = self.quotient_stats(h);
                let mut want = cyclic_stats(t);
                *want.entry(2).or_insert(0) += t as usize;
                if got != want {
                    return bad(format!("quotient by the centre is not dihedral of order {}", 2 * t));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Element orders of `H / (H ∩ Z)`.
    fn quotient_stats(&self, h: &Subgroup<MlElement>) -> BTreeMap<u64, usize> {
        let ml = &self.ml;
        let z: HashSet<MlElement> = h.elements().iter().copied().filter(|g| self.is_central(g)).collect();
        let mut seen: HashSet<MlElement> = HashSet::new();
        let mut out = BTreeMap::new();
        for &g in h.elements() {
            if seen.contains(&g) {
                continue;
            }
            for &c in &z {
                seen.insert(ml.compose(g, c));
            }
            let mut k = 1u64;
            let mut x = g;
            while !z.contains(&x) {
                x = ml.compose(x, g);
                k += 1;
            }
            *out.entry(k).or_insert(0) += 1;
        }
        out
    }

    fn abstract_stats(&self, inst: &FamilyInstance) -> Option<BTreeMap<u64, usize>> {
        let m = |v: &[(u64, usize)]| v.iter().copied().collect::<BTreeMap<_, _>>();
        Some(match inst.family {
            Family::EvenElementaryAbelian => m(&[(1, 1), (2, (1usize << inst.param("f")) - 1)]),
            Family::EvenSl22 | Family::EvenSl22Thrice => m(&[(1, 1), (2, 3), (3, 2)]),
            Family::EvenA4 => m(&[(1, 1), (2, 3), (3, 8)]),
            Family::EvenA5 => m(&[(1, 1), (2, 15), (3, 20), (5, 24)]),
            Family::EvenDihedral | Family::OddDihedral => {
                let t = inst.get("t").or(inst.get("d")).expect("rotation order");
                let mut s = cyclic_stats(t);
                *s.entry(2).or_insert(0) += t as usize;
                s
            }
            Family::OddDicyclic => {
                let d = inst.param("d");
                let mut s = cyclic_stats(2 * d);
                *s.entry(4).or_insert(0) += 2 * d as usize;
                s
            }
            Family::OddSl23 => m(&[(1, 1), (2, 1), (3, 8), (4, 6), (6, 8)]),
            Family::OddG48 => m(&[(1, 1), (2, 1), (3, 8), (4, 18), (6, 8), (8, 12)]),
            Family::OddSl25 => m(&[(1, 1), (2, 1), (3, 20), (4, 30), (5, 24), (6, 20), (10, 24)]),
            Family::EvenCyclic => cyclic_stats(inst.param("d")),
            Family::OddCyclic => cyclic_stats(inst.param("d")),
            _ => return None,
        })
    }
}

/// Element-order counts of `C_n`.
pub fn cyclic_stats(n: u64) -> BTreeMap<u64, usize> {
    arith::divisors(n).into_iter().map(|e| (e, arith::euler_phi(e) as usize)).collect()
}

/// Element-order counts of a direct product.
pub fn product_stats(a: &BTreeMap<u64, usize>, b: &BTreeMap<u64, usize>) -> BTreeMap<u64, usize> {
    let mut out = BTreeMap::new();
    for (&oa, &ca) in a {
        for (&ob, &cb) in b {
            *out.entry(lcm(oa, ob)).or_insert(0) += ca * cb;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q4_type_one_instances() {
        let all = enumerate_instances(4).unwrap();
        let t1: Vec<_> = all.iter().filter(|i| i.family == Family::EvenElementaryAbelian).collect();
        assert_eq!(t1.len(), 4);
        let mut orders: Vec<u64> = t1.iter().map(|i| i.order).collect();
        orders.sort();
        assert_eq!(orders, vec![2, 4, 10, 20]);
    }

    #[test]
    fn q3_mod_4_is_rejected() {
        assert!(matches!(enumerate_instances(7), Err(CatalogError::UnsupportedClass(7))));
        assert!(matches!(enumerate_instances(6), Err(CatalogError::NotPrimePower(6))));
    }

    #[test]
    fn lattice_counts() {
        // subgroups of Z_p x Z_p: p + 3
        assert_eq!(Lattice::all(5).len(), 8);
        assert_eq!(Lattice::all(13).len(), 16);
        for k in Lattice::all(6) {
            let n = (0..6).flat_map(|x| (0..6).map(move |y| (x, y))).filter(|&(x, y)| k.contains(x, y)).count();
            assert_eq!(n as u64, k.order());
        }
    }

    #[test]
    fn point_stabilizer_realizability() {
        assert!(point_stabilizer_realizable(25, 4, 1));
        assert!(!point_stabilizer_realizable(25, 24, 1));
        assert!(point_stabilizer_realizable(25, 24, 2));
        assert!(point_stabilizer_realizable(5, 24, 1));
    }

    #[test]
    fn spec_examples() {
        let cat = Catalog::new(4).unwrap();
        let e4 = FamilyInstance::new(Family::EvenElementaryAbelian, 4, &[("f", 2), ("w", 5)], 20, DetRule::MultipleOfW(1));
        let g = cat.instantiate(&e4).unwrap();
        assert_eq!(g[0].order(), 20);
        assert_eq!(cat.ml().orbit_counts(&g[0]).n1, 2);
        assert_eq!(cat.s_of(&g[0]), 5);

        let cat = Catalog::new(5).unwrap();
        let sl = enumerate_instances(5)
            .unwrap()
            .into_iter()
            .filter(|i| i.family == Family::OddSl2Sub)
            .map(|i| i.order)
            .collect::<Vec<_>>();
        assert_eq!(sl, vec![120, 360]);
        let z1 = cat.close(&[cat.central(3)]).unwrap();
        for g in z1.elements().iter().filter(|&&g| g != cat.ml().identity()) {
            assert_eq!(cat.ml().classify(g).unwrap().kind, crate::mlgroup::ElementType::A);
        }
    }

    #[test]
    fn every_instance_builds_at_small_q() {
        for q in [4, 5] {
            let cat = Catalog::new(q).unwrap();
            for inst in enumerate_instances(q).unwrap() {
                let gs = cat.instantiate(&inst).unwrap_or_else(|e| panic!("{e}"));
                for g in &gs {
                    if let Some(s) = inst.declared_s() {
                        assert_eq!(cat.s_of(g), s, "{inst}");
                    }
                }
            }
        }
    }
}
