//! The chord stabiliser `M_l` of the Hermitian curve, in the triple model
//! `[a, c, tau]` standing for the matrix
//!
//! ```text
//! | a   tau*c^q  0 |
//! | c   tau*a^q  0 |
//! | 0   0        1 |
//! ```
//!
//! with `a^(q+1) - c^(q+1) = 1` and `tau^(q+1) = 1`.  Besides composition this
//! module provides orbit counting on the rational points, the fixed-point
//! classification of elements and the tame Riemann-Hurwitz genus of a
//! quotient.

use std::fmt;

use serde::Serialize;

use crate::gf::{FfElem, FieldCtx};
use crate::group::{self, Group, GroupError, Subgroup};
use crate::hermitian::{Hermitian, HermitianError, HermitianPointSet, ProjPoint};

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MlElement {
    pub a: FfElem,
    pub c: FfElem,
    pub tau: FfElem,
}

impl fmt::Debug for MlElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?},{:?},{:?}]", self.a, self.c, self.tau)
    }
}

/// A 2x2 matrix, row major.
pub type Mat2 = [FfElem; 4];

/// Fixed-point type of a nontrivial element of `M_l`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ElementType {
    /// homology with centre off the curve and a chord as axis
    A,
    /// fixes a self-polar triangle with no vertex on the curve
    B1,
    /// fixes a triangle with two vertices on the curve
    B2,
    /// elation
    C,
    /// order `p*d`, fixing one curve point and one point off the curve
    E,
}

impl ElementType {
    /// Number of rational points of the curve fixed by an element of this type.
    pub fn fixed_on_curve(self, q: u64) -> usize {
        match self {
            ElementType::A => q as usize + 1,
            ElementType::B1 => 0,
            ElementType::B2 => 2,
            ElementType::C | ElementType::E => 1,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassTag {
    pub kind: ElementType,
    pub order: u64,
    /// Fixed `F_{q^2}`-points of the plane lying on the line `Z = 0`.
    pub fixed_on_line: usize,
    /// Fixed rational points of the curve.
    pub fixed_on_curve: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCounts {
    /// Orbits on the points of the curve on `Z = 0`.
    pub n1: usize,
    /// Orbits on the affine points.
    pub n2: usize,
    /// All orbit lengths, ascending.
    pub orbit_sizes: Vec<usize>,
}

impl OrbitCounts {
    pub fn total(&self) -> usize {
        self.n1 + self.n2
    }
}

/// Context for `M_l` over a fixed `q`: curve, point set and the conjugation
/// taking the split form of `SL(2,q)` into `S_l`.
pub struct MlGroup {
    herm: Hermitian,
    points: HermitianPointSet,
    mu: Vec<FfElem>,
    split: Mat2,
    split_inv: Mat2,
}

impl fmt::Debug for MlGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MlGroup").field("q", &self.q()).finish()
    }
}

impl MlGroup {
    pub fn new(q: u64) -> Result<Self, HermitianError> {
        let herm = Hermitian::new(q)?;
        let points = herm.points();
        let f = herm.field();
        let mu = f.roots_of_unity(q + 1)?;

        // delta with delta^q = -delta, then columns (1,1) and (x, w x) give
        // a basis in which the form becomes delta*(u1 v2^q - u2 v1^q)
        let delta = if herm.characteristic() == 2 {
            f.one()
        } else {
            f.exp((q + 1) / 2)
        };
        let w = mu[1];
        let x = f.div(herm.conj(delta), f.sub(w, f.one()))?;
        let split = [f.one(), x, f.one(), f.mul(w, x)];
        let split_inv = mat_inv(f, &split);
        Ok(MlGroup { herm, points, mu, split, split_inv })
    }

    pub fn q(&self) -> u64 {
        self.herm.q()
    }

    pub fn hermitian(&self) -> &Hermitian {
        &self.herm
    }

    pub fn field(&self) -> &FieldCtx {
        self.herm.field()
    }

    pub fn points(&self) -> &HermitianPointSet {
        &self.points
    }

    /// `mu_{q+1}`, starting with 1, then the primitive root `eps`.
    pub fn mu(&self) -> &[FfElem] {
        &self.mu
    }

    pub fn eps(&self) -> FfElem {
        self.mu[1 % self.mu.len()]
    }

    /// `|M_l| = (q^3 - q)(q + 1)`.
    pub fn order(&self) -> u64 {
        let q = self.q();
        (q * q * q - q) * (q + 1)
    }

    pub fn is_valid(&self, g: &MlElement) -> bool {
        let f = self.field();
        let h = &self.herm;
        [g.a, g.c, g.tau].iter().all(|e| f.try_check(*e).is_ok())
            && f.sub(h.norm(g.a), h.norm(g.c)) == f.one()
            && h.norm(g.tau) == f.one()
    }

    pub fn element(&self, a: FfElem, c: FfElem, tau: FfElem) -> Result<MlElement, GroupError> {
        let g = MlElement { a, c, tau };
        if self.is_valid(&g) {
            Ok(g)
        } else {
            Err(GroupError::InvalidElement(format!("{g:?}")))
        }
    }

    /// Composition with a context check on both operands.
    pub fn try_compose(&self, g: MlElement, h: MlElement) -> Result<MlElement, GroupError> {
        let id = self.field().id();
        if [g.a, g.c, g.tau, h.a, h.c, h.tau].iter().any(|e| e.ctx_id() != id) {
            return Err(GroupError::ContextMismatch);
        }
        Ok(self.compose(g, h))
    }

    /// The determinant character `[a, c, tau] -> tau`.
    pub fn det_rho(&self, g: &MlElement) -> FfElem {
        g.tau
    }

    /// Generator `[eps, 0, eps^2]` of the centre `Z`.
    pub fn center_generator(&self) -> MlElement {
        let f = self.field();
        let e = self.eps();
        MlElement { a: e, c: f.zero(), tau: f.mul(e, e) }
    }

    /// The scalar `lambda*I` (lambda in `mu_{q+1}`) as a triple.
    pub fn scalar(&self, lambda: FfElem) -> MlElement {
        let f = self.field();
        MlElement { a: lambda, c: f.zero(), tau: f.mul(lambda, lambda) }
    }

    pub fn center(&self) -> Subgroup<MlElement> {
        group::closure(self, &[self.center_generator()]).expect("cyclic of order q+1")
    }

    /// The subgroup of `Z` of odd order `(q+1)/2` (for odd `q`).
    pub fn z1(&self) -> Subgroup<MlElement> {
        let z = self.center_generator();
        let g = if self.q() % 2 == 1 { self.compose(z, z) } else { z };
        group::closure(self, &[g]).expect("cyclic")
    }

    /// `[-1, 0, -1]`.
    pub fn beta(&self) -> MlElement {
        let f = self.field();
        let m1 = f.neg(f.one());
        MlElement { a: m1, c: f.zero(), tau: m1 }
    }

    pub fn to_matrix(&self, g: &MlElement) -> Mat2 {
        let f = self.field();
        let h = &self.herm;
        [g.a, f.mul(g.tau, h.conj(g.c)), g.c, f.mul(g.tau, h.conj(g.a))]
    }

    /// Reads a 2x2 matrix back as a triple, checking that it preserves the
    /// Hermitian form.
    pub fn from_matrix(&self, m: &Mat2) -> Result<MlElement, GroupError> {
        let f = self.field();
        let tau = mat_det(f, m);
        let g = MlElement { a: m[0], c: m[2], tau };
        if !self.is_valid(&g) || self.to_matrix(&g) != *m {
            return Err(GroupError::InvalidElement(format!("matrix {m:?} is not unitary")));
        }
        Ok(g)
    }

    /// Transports a matrix written in the split basis (where `SL(2,q)`
    /// appears with entries in `F_q`) into `M_l`.
    pub fn from_split(&self, m: &Mat2) -> Result<MlElement, GroupError> {
        let f = self.field();
        let conj = mat_mul(f, &mat_mul(f, &self.split, m), &self.split_inv);
        self.from_matrix(&conj)
    }

    /// Inverse of [`MlGroup::from_split`].
    pub fn to_split(&self, g: &MlElement) -> Mat2 {
        let f = self.field();
        mat_mul(f, &mat_mul(f, &self.split_inv, &self.to_matrix(g)), &self.split)
    }

    /// The point of `Z = 0` fixed by the split Borel subgroup.
    pub fn split_base_point(&self) -> ProjPoint {
        let f = self.field();
        self.herm.point(self.split[0], self.split[2], f.zero()).expect("nonzero column")
    }

    /// Split-basis torus element `diag(lambda, lambda^(-q))`.
    pub fn torus(&self, lambda: FfElem) -> MlElement {
        let f = self.field();
        let inv = f.inv(self.herm.conj(lambda)).expect("nonzero torus parameter");
        self.from_split(&[lambda, f.zero(), f.zero(), inv]).expect("torus preserves the form")
    }

    /// Split-basis unipotent `[[1, v], [0, 1]]`, `v` in `F_q`.
    pub fn unipotent(&self, v: FfElem) -> MlElement {
        let f = self.field();
        self.from_split(&[f.one(), v, f.zero(), f.one()]).expect("v lies in F_q")
    }

    /// Generators of `S_l ~ SL(2,q)`.
    pub fn s_ell_generators(&self) -> Vec<MlElement> {
        let f = self.field();
        let q = self.q();
        let fq = f.subfield_elements(q).expect("F_q inside F_{q^2}");
        let mut gens: Vec<MlElement> =
            fq.iter().filter(|v| !v.is_zero()).map(|&v| self.unipotent(v)).collect();
        let weyl = [f.zero(), f.one(), f.neg(f.one()), f.zero()];
        gens.push(self.from_split(&weyl).expect("weyl element has determinant 1"));
        gens
    }

    pub fn s_ell(&self) -> Subgroup<MlElement> {
        group::closure(self, &self.s_ell_generators()).expect("S_l fits the closure bound")
    }

    pub fn full_group_generators(&self) -> Vec<MlElement> {
        let f = self.field();
        let mut g = self.s_ell_generators();
        g.push(self.center_generator());
        // the homology diag(1, eps) reaches every determinant
        g.push(MlElement { a: f.one(), c: f.zero(), tau: self.eps() });
        g
    }

    /// Every element of `M_l`, in sorted order.
    pub fn all_elements(&self) -> Vec<MlElement> {
        let f = self.field();
        let h = &self.herm;
        let mut by_norm: Vec<Vec<FfElem>> = vec![Vec::new(); f.cardinality() as usize];
        for c in f.elements() {
            by_norm[h.norm(c).repr() as usize].push(c);
        }
        let mut out = Vec::with_capacity(self.order() as usize);
        for a in f.elements() {
            let target = f.sub(h.norm(a), f.one());
            for &c in &by_norm[target.repr() as usize] {
                for &tau in &self.mu {
                    out.push(MlElement { a, c, tau });
                }
            }
        }
        out.sort();
        out
    }

    /// Image of the point with the given index.
    #[inline]
    pub fn act_index(&self, g: &MlElement, idx: usize) -> usize {
        let f = self.field();
        let pt = self.points.all()[idx];
        let tc = f.mul(g.tau, self.herm.conj(g.c));
        let ta = f.mul(g.tau, self.herm.conj(g.a));
        let x = f.add(f.mul(g.a, pt.x), f.mul(tc, pt.y));
        let y = f.add(f.mul(g.c, pt.x), f.mul(ta, pt.y));
        let out = if pt.z.is_zero() {
            let x = f.mul(x, f.inv(y).expect("image of a curve point at infinity"));
            self.points.index_on_line(x)
        } else {
            self.points.index_affine(x, y)
        };
        out.expect("M_l preserves the rational points of the curve")
    }

    pub fn act_point(&self, g: &MlElement, pt: &ProjPoint) -> ProjPoint {
        let f = self.field();
        let [m00, m01, m10, m11] = self.to_matrix(g);
        let x = f.add(f.mul(m00, pt.x), f.mul(m01, pt.y));
        let y = f.add(f.mul(m10, pt.x), f.mul(m11, pt.y));
        self.herm.point(x, y, pt.z).expect("invertible action")
    }

    pub fn permutation(&self, g: &MlElement) -> Vec<u32> {
        (0..self.points.len()).map(|i| self.act_index(g, i) as u32).collect()
    }

    pub fn orbit_counts(&self, h: &Subgroup<MlElement>) -> OrbitCounts {
        let n = self.points.len();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                let up = parent[parent[x as usize] as usize];
                parent[x as usize] = up;
                x = up;
            }
            x
        }
        for g in h.generators() {
            for i in 0..n {
                let j = self.act_index(g, i) as u32;
                let (ri, rj) = (find(&mut parent, i as u32), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj) as usize] = ri.min(rj);
                }
            }
        }
        let mut sizes = vec![0usize; n];
        for i in 0..n {
            let r = find(&mut parent, i as u32);
            sizes[r as usize] += 1;
        }
        let n_line = self.points.line_count();
        let mut n1 = 0;
        let mut n2 = 0;
        let mut orbit_sizes = Vec::new();
        for (i, &s) in sizes.iter().enumerate() {
            if s > 0 {
                if i < n_line {
                    n1 += 1;
                } else {
                    n2 += 1;
                }
                orbit_sizes.push(s);
            }
        }
        orbit_sizes.sort_unstable();
        OrbitCounts { n1, n2, orbit_sizes }
    }

    /// Number of rational curve points fixed by `g`, read off from the linear
    /// algebra of the 2x2 block.
    pub fn fixed_points_on_h(&self, g: &MlElement) -> usize {
        let f = self.field();
        let h = &self.herm;
        let m = self.to_matrix(g);
        let is_scalar = m[1].is_zero() && m[2].is_zero() && m[0] == m[3];
        if is_scalar {
            // scalars fix Z = 0 pointwise; the identity also fixes O2
            return if m[0] == f.one() {
                self.points.len()
            } else {
                self.points.line_count()
            };
        }
        // points (x:1:0) with (x,1) an eigenvector
        let on_line = self
            .points
            .o1()
            .iter()
            .filter(|pt| {
                let x = f.add(f.mul(m[0], pt.x), m[1]);
                let y = f.add(f.mul(m[2], pt.x), m[3]);
                x == f.mul(y, pt.x)
            })
            .count();
        // affine fixed points: kernel of A - I
        let r = [f.sub(m[0], f.one()), m[1], m[2], f.sub(m[3], f.one())];
        let det = f.sub(f.mul(r[0], r[3]), f.mul(r[1], r[2]));
        let affine = if !det.is_zero() {
            0
        } else {
            let (u, v) = if !r[0].is_zero() || !r[1].is_zero() { (r[0], r[1]) } else { (r[2], r[3]) };
            let (kx, ky) = (v, f.neg(u));
            if f.sub(h.norm(ky), h.norm(kx)).is_zero() {
                0
            } else {
                // (s kx, s ky, 1) is on the curve iff s^(q+1) = 1/(N(ky)-N(kx))
                (self.q() + 1) as usize
            }
        };
        on_line + affine
    }

    /// Same count by testing every rational point.
    pub fn fixed_points_on_h_brute(&self, g: &MlElement) -> usize {
        (0..self.points.len()).filter(|&i| self.act_index(g, i) == i).count()
    }

    /// Eigenvalues in `F_{q^2}` of the 2x2 block, with multiplicity.
    fn eigenvalues(&self, m: &Mat2) -> Vec<FfElem> {
        let f = self.field();
        let tr = f.add(m[0], m[3]);
        let det = mat_det(f, m);
        let disc_poly = |l: FfElem| f.add(f.sub(f.mul(l, l), f.mul(tr, l)), det);
        let mut roots: Vec<FfElem> = Vec::new();
        if f.characteristic() != 2 {
            let two = f.from_int(2);
            let disc = f.sub(f.mul(tr, tr), f.mul(f.from_int(4), det));
            if let Some(s) = f.sqrt(disc) {
                let half = f.inv(two).expect("odd characteristic");
                roots.push(f.mul(f.add(tr, s), half));
                roots.push(f.mul(f.sub(tr, s), half));
            }
        } else {
            for l in f.elements() {
                if disc_poly(l).is_zero() {
                    roots.push(l);
                }
            }
            if roots.len() == 1 {
                roots.push(roots[0]);
            }
        }
        roots.sort();
        roots
    }

    pub fn classify(&self, g: &MlElement) -> Result<ClassTag, GroupError> {
        if *g == self.identity() {
            return Err(GroupError::Identity);
        }
        let f = self.field();
        let h = &self.herm;
        let m = self.to_matrix(g);
        let one = f.one();
        let fixed_on_curve = self.fixed_points_on_h(g);
        let order = self.order_of(*g);
        let is_scalar = m[1].is_zero() && m[2].is_zero() && m[0] == m[3];
        let ev = self.eigenvalues(&m);
        let (kind, fixed_on_line) = if is_scalar {
            (ElementType::A, (f.cardinality() + 1) as usize)
        } else if ev.is_empty() {
            return Err(GroupError::Inconsistent(format!("{g:?} has no rational eigenvalue")));
        } else if ev[0] != ev[1] {
            if ev.contains(&one) {
                (ElementType::A, 2)
            } else {
                let iso = ev
                    .iter()
                    .filter(|&&l| {
                        let (x, y) = eigenvector(f, &m, l);
                        f.sub(h.norm(x), h.norm(y)).is_zero()
                    })
                    .count();
                match iso {
                    0 => (ElementType::B1, 2),
                    2 => (ElementType::B2, 2),
                    _ => {
                        return Err(GroupError::Inconsistent(format!(
                            "{g:?} fixes a triangle with one isotropic vertex on Z = 0"
                        )))
                    }
                }
            }
        } else if ev[0] == one {
            (ElementType::C, 1)
        } else {
            (ElementType::E, 1)
        };
        Ok(ClassTag { kind, order, fixed_on_line, fixed_on_curve })
    }

    /// `sum_{sigma in H} |Fix(sigma)| / |H|`, the orbit count by Burnside.
    pub fn burnside_orbit_count(&self, h: &Subgroup<MlElement>) -> Result<usize, GroupError> {
        let total: usize = h.elements().iter().map(|g| self.fixed_points_on_h(g)).sum();
        if total % h.order() != 0 {
            return Err(GroupError::Inconsistent("Burnside sum not divisible by |H|".into()));
        }
        Ok(total / h.order())
    }

    /// Genus of the quotient of the Hermitian curve by a tame subgroup.
    pub fn tame_quotient_genus(&self, h: &Subgroup<MlElement>) -> Result<u64, GroupError> {
        let p = self.herm.characteristic();
        let order = h.order();
        if order as u64 % p == 0 {
            return Err(GroupError::Wild { order, p });
        }
        let q = self.q() as i128;
        let id = self.identity();
        let ramification: i128 = h
            .elements()
            .iter()
            .filter(|&&g| g != id)
            .map(|g| self.fixed_points_on_h(g) as i128)
            .sum();
        let num = q * (q - 1) - 2 - ramification;
        let den = 2 * order as i128;
        if num % den != 0 || num / den + 1 < 0 {
            return Err(GroupError::Inconsistent(format!(
                "Riemann-Hurwitz gives non-integral genus for a group of order {order}"
            )));
        }
        Ok((1 + num / den) as u64)
    }
}

impl Group for MlGroup {
    type Elem = MlElement;

    fn identity(&self) -> MlElement {
        let f = self.field();
        MlElement { a: f.one(), c: f.zero(), tau: f.one() }
    }

    #[inline]
    fn compose(&self, g: MlElement, h: MlElement) -> MlElement {
        let f = self.field();
        let herm = &self.herm;
        let t1 = g.tau;
        let a = f.add(f.mul(g.a, h.a), f.mul(t1, f.mul(herm.conj(g.c), h.c)));
        let c = f.add(f.mul(g.c, h.a), f.mul(t1, f.mul(herm.conj(g.a), h.c)));
        MlElement { a, c, tau: f.mul(t1, h.tau) }
    }

    fn inverse(&self, g: MlElement) -> MlElement {
        let f = self.field();
        let herm = &self.herm;
        let ti = herm.conj(g.tau);
        MlElement { a: herm.conj(g.a), c: f.neg(f.mul(g.c, ti)), tau: ti }
    }
}

pub fn mat_mul(f: &FieldCtx, x: &Mat2, y: &Mat2) -> Mat2 {
    [
        f.add(f.mul(x[0], y[0]), f.mul(x[1], y[2])),
        f.add(f.mul(x[0], y[1]), f.mul(x[1], y[3])),
        f.add(f.mul(x[2], y[0]), f.mul(x[3], y[2])),
        f.add(f.mul(x[2], y[1]), f.mul(x[3], y[3])),
    ]
}

pub fn mat_det(f: &FieldCtx, x: &Mat2) -> FfElem {
    f.sub(f.mul(x[0], x[3]), f.mul(x[1], x[2]))
}

pub fn mat_inv(f: &FieldCtx, x: &Mat2) -> Mat2 {
    let d = f.inv(mat_det(f, x)).expect("invertible matrix");
    [f.mul(x[3], d), f.neg(f.mul(x[1], d)), f.neg(f.mul(x[2], d)), f.mul(x[0], d)]
}

/// A nonzero vector in the kernel of `m - l*I` (assumed singular).
fn eigenvector(f: &FieldCtx, m: &Mat2, l: FfElem) -> (FfElem, FfElem) {
    let r = [f.sub(m[0], l), m[1], m[2], f.sub(m[3], l)];
    let (u, v) = if !r[0].is_zero() || !r[1].is_zero() { (r[0], r[1]) } else { (r[2], r[3]) };
    (v, f.neg(u))
}
