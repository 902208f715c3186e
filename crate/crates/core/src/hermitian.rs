//! The Hermitian curve `Y^(q+1) = X^(q+1) - Z^(q+1)` over `F_{q^2}`, its
//! rational points and the unitary polarity of the plane.

use std::fmt;

use thiserror::Error;

use crate::arith;
use crate::gf::{FfElem, FieldCtx, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HermitianError {
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("the all-zero vector is not a projective point")]
    ZeroVector,
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A point of the projective plane, normalised so that the last nonzero
/// coordinate is 1.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    pub x: FfElem,
    pub y: FfElem,
    pub z: FfElem,
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}:{:?}:{:?})", self.x, self.y, self.z)
    }
}

/// A line `aX + bY + cZ = 0`, normalised like a point.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Line {
    pub a: FfElem,
    pub b: FfElem,
    pub c: FfElem,
}

/// Arithmetic context for the Hermitian curve over `F_{q^2}`.
#[derive(Debug)]
pub struct Hermitian {
    q: u64,
    p: u64,
    h: u32,
    field: FieldCtx,
}

impl Hermitian {
    pub fn new(q: u64) -> Result<Self, HermitianError> {
        let (p, h) = arith::prime_power(q).ok_or(HermitianError::NotPrimePower(q))?;
        let field = FieldCtx::new(p, 2 * h)?;
        Ok(Hermitian { q, p, h, field })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// `h` with `q = p^h`.
    pub fn exponent(&self) -> u32 {
        self.h
    }

    /// The field `F_{q^2}`.
    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    /// `x^q`, the involution of `F_{q^2}` over `F_q`.
    #[inline]
    pub fn conj(&self, x: FfElem) -> FfElem {
        self.field.pow(x, self.q)
    }

    /// `x^(q+1)`.
    #[inline]
    pub fn norm(&self, x: FfElem) -> FfElem {
        self.field.pow(x, self.q + 1)
    }

    /// `X^(q+1) - Y^(q+1) - Z^(q+1)` at the given coordinates.
    fn curve_form(&self, x: FfElem, y: FfElem, z: FfElem) -> FfElem {
        let f = &self.field;
        f.sub(f.sub(self.norm(x), self.norm(y)), self.norm(z))
    }

    pub fn point(&self, x: FfElem, y: FfElem, z: FfElem) -> Result<ProjPoint, HermitianError> {
        let [x, y, z] = self.normalize([x, y, z])?;
        Ok(ProjPoint { x, y, z })
    }

    pub fn line(&self, a: FfElem, b: FfElem, c: FfElem) -> Result<Line, HermitianError> {
        let [a, b, c] = self.normalize([a, b, c])?;
        Ok(Line { a, b, c })
    }

    fn normalize(&self, v: [FfElem; 3]) -> Result<[FfElem; 3], HermitianError> {
        for e in v {
            self.field.try_check(e)?;
        }
        let last = v.iter().rev().find(|e| !e.is_zero()).ok_or(HermitianError::ZeroVector)?;
        let inv = self.field.inv(*last)?;
        Ok(v.map(|e| self.field.mul(e, inv)))
    }

    pub fn is_on_curve(&self, pt: &ProjPoint) -> bool {
        self.curve_form(pt.x, pt.y, pt.z).is_zero()
    }

    pub fn is_on_line(&self, pt: &ProjPoint, l: &Line) -> bool {
        let f = &self.field;
        let s = f.add(f.add(f.mul(l.a, pt.x), f.mul(l.b, pt.y)), f.mul(l.c, pt.z));
        s.is_zero()
    }

    /// Polar line of a point with respect to the unitary polarity of the curve.
    pub fn polar_line(&self, pt: &ProjPoint) -> Line {
        let f = &self.field;
        self.line(f.neg(self.conj(pt.x)), self.conj(pt.y), self.conj(pt.z))
            .expect("a projective point has a nonzero coordinate")
    }

    /// Pole of a line; inverse of [`Hermitian::polar_line`].
    pub fn pole(&self, l: &Line) -> ProjPoint {
        let f = &self.field;
        // conjugation is an involution, so invert coordinate-wise
        self.point(f.neg(self.conj(l.a)), self.conj(l.b), self.conj(l.c))
            .expect("a line has a nonzero coefficient")
    }

    /// The line `Z = 0`.
    pub fn line_at_infinity(&self) -> Line {
        Line { a: self.field.zero(), b: self.field.zero(), c: self.field.one() }
    }

    /// The pole of `Z = 0`, namely `(0:0:1)`.
    pub fn pole_of_line_at_infinity(&self) -> ProjPoint {
        ProjPoint { x: self.field.zero(), y: self.field.zero(), z: self.field.one() }
    }

    /// The `F_{q^2}`-rational points of the curve, split by the line `Z = 0`.
    pub fn points(&self) -> HermitianPointSet {
        HermitianPointSet::enumerate(self)
    }
}

/// Rational points of the Hermitian curve, with `O1` (points on `Z = 0`)
/// stored first, followed by the affine points `O2`.
#[derive(Debug, Clone)]
pub struct HermitianPointSet {
    q: u64,
    field_size: u64,
    points: Vec<ProjPoint>,
    n_line: usize,
    line_index: Vec<u32>,
    affine_index: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl HermitianPointSet {
    pub fn enumerate(herm: &Hermitian) -> Self {
        let f = herm.field();
        let size = f.cardinality();
        let q = herm.q();
        let one = f.one();
        let zero = f.zero();

        let mut points = Vec::with_capacity((q * q * q + 1) as usize);
        let mut line_index = vec![ABSENT; size as usize];
        // (x:1:0) lies on the curve iff x^(q+1) = 1
        for x in f.roots_of_unity(q + 1).expect("q+1 divides q^2-1") {
            line_index[x.repr() as usize] = points.len() as u32;
            points.push(ProjPoint { x, y: one, z: zero });
        }
        points[..].sort();
        for (i, pt) in points.iter().enumerate() {
            line_index[pt.x.repr() as usize] = i as u32;
        }
        let n_line = points.len();

        // group y by norm so that x^(q+1) - y^(q+1) = 1 is solved by lookup
        let mut by_norm: Vec<Vec<FfElem>> = vec![Vec::new(); size as usize];
        for y in f.elements() {
            by_norm[herm.norm(y).repr() as usize].push(y);
        }
        let mut affine_index = vec![ABSENT; (size * size) as usize];
        for x in f.elements() {
            let target = f.sub(herm.norm(x), one);
            for &y in &by_norm[target.repr() as usize] {
                affine_index[(x.repr() * size + y.repr()) as usize] = points.len() as u32;
                points.push(ProjPoint { x, y, z: one });
            }
        }
        HermitianPointSet { q, field_size: size, points, n_line, line_index, affine_index }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn all(&self) -> &[ProjPoint] {
        &self.points
    }

    /// Points on the line `Z = 0` (`q+1` of them).
    pub fn o1(&self) -> &[ProjPoint] {
        &self.points[..self.n_line]
    }

    /// Affine points (`q^3 - q` of them).
    pub fn o2(&self) -> &[ProjPoint] {
        &self.points[self.n_line..]
    }

    pub fn line_count(&self) -> usize {
        self.n_line
    }

    /// Index of `(x:1:0)` in [`HermitianPointSet::all`].
    #[inline]
    pub fn index_on_line(&self, x: FfElem) -> Option<usize> {
        let i = self.line_index[x.repr() as usize];
        (i != ABSENT).then_some(i as usize)
    }

    /// Index of `(x:y:1)` in [`HermitianPointSet::all`].
    #[inline]
    pub fn index_affine(&self, x: FfElem, y: FfElem) -> Option<usize> {
        let i = self.affine_index[(x.repr() * self.field_size + y.repr()) as usize];
        (i != ABSENT).then_some(i as usize)
    }

    pub fn index_of(&self, pt: &ProjPoint) -> Option<usize> {
        if pt.z.is_zero() {
            if pt.y.repr() != 1 {
                return None;
            }
            self.index_on_line(pt.x)
        } else {
            self.index_affine(pt.x, pt.y)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_counts() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let h = Hermitian::new(q).unwrap();
            let pts = h.points();
            assert_eq!(pts.len() as u64, q * q * q + 1);
            assert_eq!(pts.o1().len() as u64, q + 1);
            assert_eq!(pts.o2().len() as u64, q * q * q - q);
            for (i, pt) in pts.all().iter().enumerate() {
                assert!(h.is_on_curve(pt));
                assert_eq!(pts.index_of(pt), Some(i));
            }
        }
    }

    #[test]
    fn enumeration_matches_exhaustive_search() {
        for q in [2, 3, 4] {
            let h = Hermitian::new(q).unwrap();
            let f = h.field();
            let mut brute = Vec::new();
            for x in f.elements() {
                for y in f.elements() {
                    for z in f.elements() {
                        if let Ok(pt) = h.point(x, y, z) {
                            if pt.x == x && pt.y == y && pt.z == z && h.is_on_curve(&pt) {
                                brute.push(pt);
                            }
                        }
                    }
                }
            }
            brute.sort();
            let mut ours = h.points().all().to_vec();
            ours.sort();
            assert_eq!(brute, ours);
        }
    }

    #[test]
    fn polarity_is_an_involution() {
        let h = Hermitian::new(4).unwrap();
        let f = h.field();
        for x in f.elements() {
            for y in f.elements().step_by(3) {
                let pt = h.point(x, y, f.one()).unwrap();
                assert_eq!(h.pole(&h.polar_line(&pt)), pt);
            }
        }
        assert_eq!(h.polar_line(&h.pole_of_line_at_infinity()), h.line_at_infinity());
    }

    #[test]
    fn curve_points_lie_on_their_tangent_polar() {
        let h = Hermitian::new(5).unwrap();
        for pt in h.points().all() {
            assert!(h.is_on_line(pt, &h.polar_line(pt)));
        }
        // an off-curve point is not on its polar
        let f = h.field();
        let p = h.point(f.zero(), f.zero(), f.one()).unwrap();
        assert!(!h.is_on_line(&p, &h.polar_line(&p)));
    }

    #[test]
    fn zero_vector_rejected() {
        let h = Hermitian::new(3).unwrap();
        let z = h.field().zero();
        assert_eq!(h.point(z, z, z), Err(HermitianError::ZeroVector));
        assert_eq!(Hermitian::new(6).unwrap_err(), HermitianError::NotPrimePower(6));
    }
}
