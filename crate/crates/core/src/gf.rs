//! Prime-power finite fields `GF(p^k)` with a canonical defining polynomial,
//! roots of unity and explicit subfield embeddings.
//!
//! Elements are stored in the polynomial basis, packed as a base-`p` integer:
//! digit `i` of [`FfElem::repr`] is the coefficient of `x^i`.  Small fields
//! carry exp/log tables for multiplication.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use thiserror::Error;

use crate::arith;

/// Largest field size accepted by [`FieldCtx::new`].
pub const MAX_FIELD_SIZE: u64 = 1 << 40;

/// Fields up to this size get exp/log tables.
const TABLE_LIMIT: u64 = 1 << 20;

/// Odd-characteristic fields up to this size also get a full addition table.
const ADD_TABLE_LIMIT: u64 = 1 << 10;

static NEXT_CTX_ID: AtomicU32 = AtomicU32::new(1);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field size {p}^{k} exceeds the supported bound 2^40")]
    TooLarge { p: u64, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different field contexts")]
    ContextMismatch,
    #[error("GF({sub}) does not embed in GF({sup})")]
    IncompatibleDegrees { sub: u64, sup: u64 },
    #[error("{d} does not divide the multiplicative group order {order}")]
    NotDivisor { d: u64, order: u64 },
    #[error("{q} is not a power of the characteristic {p}")]
    NotCharacteristicPower { q: u64, p: u64 },
    #[error("representation {0} is out of range")]
    BadRepr(u64),
}

/// An element of a finite field, tagged with the id of its owning [`FieldCtx`].
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FfElem {
    ctx: u32,
    repr: u64,
}

impl FfElem {
    /// Packed coefficient representation.
    #[inline]
    pub fn repr(self) -> u64 {
        self.repr
    }

    #[inline]
    pub fn ctx_id(self) -> u32 {
        self.ctx
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.repr == 0
    }
}

impl fmt::Debug for FfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.repr)
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
}

/// The field `F_p[x]/(f)` for the canonical irreducible `f` of degree `k`.
pub struct FieldCtx {
    id: u32,
    p: u64,
    k: u32,
    size: u64,
    modulus: Vec<u64>,
    primitive: u64,
    group_factors: Vec<u64>,
    tables: Option<Tables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl FieldCtx {
    /// Builds `GF(p^k)`.  The modulus is the smallest monic irreducible of
    /// degree `k` with coefficient vectors compared low-degree-first.
    pub fn new(p: u64, k: u32) -> Result<Self, GfError> {
        if !arith::is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if k == 0 {
            return Err(GfError::ZeroDegree);
        }
        let size = match p.checked_pow(k) {
            Some(s) if s <= MAX_FIELD_SIZE => s,
            _ => return Err(GfError::TooLarge { p, k }),
        };
        let modulus = canonical_modulus(p, k);
        let mut ctx = FieldCtx {
            id: NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed),
            p,
            k,
            size,
            modulus,
            primitive: 0,
            group_factors: arith::prime_factors(size - 1),
            tables: None,
        };
        ctx.primitive = ctx.find_primitive();
        if size <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn cardinality(&self) -> u64 {
        self.size
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    #[inline]
    pub fn zero(&self) -> FfElem {
        FfElem { ctx: self.id, repr: 0 }
    }

    #[inline]
    pub fn one(&self) -> FfElem {
        FfElem { ctx: self.id, repr: 1 }
    }

    /// The canonical primitive element (generator of the multiplicative group).
    pub fn primitive(&self) -> FfElem {
        self.wrap(self.primitive)
    }

    #[inline]
    fn wrap(&self, repr: u64) -> FfElem {
        FfElem { ctx: self.id, repr }
    }

    pub fn from_repr(&self, repr: u64) -> Result<FfElem, GfError> {
        if repr >= self.size {
            return Err(GfError::BadRepr(repr));
        }
        Ok(self.wrap(repr))
    }

    /// Builds an element from coefficients, constant term first.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FfElem {
        let mut repr = 0u64;
        let mut place = 1u64;
        for (i, &c) in coeffs.iter().enumerate() {
            if i as u32 >= self.k {
                break;
            }
            repr += (c % self.p) * place;
            place *= self.p;
        }
        self.wrap(repr)
    }

    pub fn coeffs(&self, x: FfElem) -> Vec<u64> {
        self.check(x);
        digits(x.repr, self.p, self.k)
    }

    /// Image of an integer under `Z -> F_p -> GF(p^k)`.
    pub fn from_int(&self, v: i64) -> FfElem {
        let p = self.p as i64;
        self.wrap(v.rem_euclid(p) as u64)
    }

    /// Sort key realising the coefficient-lexicographic order
    /// (constant coefficient most significant).
    pub fn lex_key(&self, x: FfElem) -> u64 {
        let mut key = 0u64;
        for d in digits(x.repr, self.p, self.k) {
            key = key * self.p + d;
        }
        key
    }

    /// All elements in packed-representation order.
    pub fn elements(&self) -> impl Iterator<Item = FfElem> + '_ {
        (0..self.size).map(move |r| self.wrap(r))
    }

    #[inline]
    fn check(&self, x: FfElem) {
        assert_eq!(x.ctx, self.id, "field element used with a foreign context");
    }

    pub fn try_check(&self, x: FfElem) -> Result<(), GfError> {
        if x.ctx == self.id {
            Ok(())
        } else {
            Err(GfError::ContextMismatch)
        }
    }

    #[inline]
    pub fn add(&self, a: FfElem, b: FfElem) -> FfElem {
        debug_assert!(a.ctx == self.id && b.ctx == self.id);
        self.wrap(self.add_repr(a.repr, b.repr))
    }

    #[inline]
    pub fn neg(&self, a: FfElem) -> FfElem {
        debug_assert!(a.ctx == self.id);
        if self.p == 2 {
            return a;
        }
        let mut out = 0;
        let mut place = 1;
        let mut v = a.repr;
        while v > 0 {
            let d = v % self.p;
            if d != 0 {
                out += (self.p - d) * place;
            }
            v /= self.p;
            place *= self.p;
        }
        self.wrap(out)
    }

    #[inline]
    pub fn sub(&self, a: FfElem, b: FfElem) -> FfElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FfElem, b: FfElem) -> FfElem {
        debug_assert!(a.ctx == self.id && b.ctx == self.id);
        if a.repr == 0 || b.repr == 0 {
            return self.zero();
        }
        match &self.tables {
            Some(t) => {
                let n = self.size - 1;
                let s = t.log[a.repr as usize] as u64 + t.log[b.repr as usize] as u64;
                let s = if s >= n { s - n } else { s };
                self.wrap(t.exp[s as usize] as u64)
            }
            None => self.wrap(self.poly_mul_repr(a.repr, b.repr)),
        }
    }

    pub fn inv(&self, a: FfElem) -> Result<FfElem, GfError> {
        self.try_check(a)?;
        if a.repr == 0 {
            return Err(GfError::DivisionByZero);
        }
        match &self.tables {
            Some(t) => {
                let n = self.size - 1;
                let l = t.log[a.repr as usize] as u64;
                Ok(self.wrap(t.exp[((n - l) % n) as usize] as u64))
            }
            None => Ok(self.pow(a, self.size - 2)),
        }
    }

    pub fn div(&self, a: FfElem, b: FfElem) -> Result<FfElem, GfError> {
        self.try_check(a)?;
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` by square-and-multiply (or a log lookup on tabled fields).
    pub fn pow(&self, a: FfElem, e: u64) -> FfElem {
        debug_assert!(a.ctx == self.id);
        if e == 0 {
            return self.one();
        }
        if a.repr == 0 {
            return self.zero();
        }
        if let Some(t) = &self.tables {
            let n = self.size - 1;
            let l = t.log[a.repr as usize] as u128 * (e as u128 % n as u128) % n as u128;
            return self.wrap(t.exp[l as usize] as u64);
        }
        let mut base = a;
        let mut acc = self.one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^e` for signed exponents; zero to a negative power is an error.
    pub fn pow_signed(&self, a: FfElem, e: i64) -> Result<FfElem, GfError> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// The map `x -> x^q` for `q` a power of the characteristic.
    pub fn frobenius(&self, x: FfElem, q: u64) -> Result<FfElem, GfError> {
        self.try_check(x)?;
        if !arith::is_power_of(q, self.p) {
            return Err(GfError::NotCharacteristicPower { q, p: self.p });
        }
        Ok(self.pow(x, q))
    }

    /// Discrete logarithm with respect to [`FieldCtx::primitive`].
    pub fn log(&self, x: FfElem) -> Option<u64> {
        if x.repr == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.log[x.repr as usize] as u64),
            None => {
                // Pohlig-Hellman would be the way to go; no caller needs logs in
                // untabled fields yet.
                let g = self.primitive();
                let mut acc = self.one();
                for i in 0..self.size - 1 {
                    if acc == x {
                        return Some(i);
                    }
                    acc = self.mul(acc, g);
                }
                None
            }
        }
    }

    /// `g^i` for the canonical primitive element `g`.
    pub fn exp(&self, i: u64) -> FfElem {
        let n = self.size - 1;
        match &self.tables {
            Some(t) => self.wrap(t.exp[(i % n) as usize] as u64),
            None => self.pow(self.primitive(), i % n),
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: FfElem) -> u64 {
        assert!(!x.is_zero(), "zero has no multiplicative order");
        let mut ord = self.size - 1;
        for &r in &self.group_factors {
            while ord % r == 0 && self.pow(x, ord / r).repr == 1 {
                ord /= r;
            }
        }
        ord
    }

    /// The `d`-th roots of unity, listed as `1, w, w^2, ...` where
    /// `w = g^((|F|-1)/d)`.
    pub fn roots_of_unity(&self, d: u64) -> Result<Vec<FfElem>, GfError> {
        let n = self.size - 1;
        if d == 0 || n % d != 0 {
            return Err(GfError::NotDivisor { d, order: n });
        }
        let w = self.exp(n / d);
        let mut out = Vec::with_capacity(d as usize);
        let mut acc = self.one();
        for _ in 0..d {
            out.push(acc);
            acc = self.mul(acc, w);
        }
        Ok(out)
    }

    /// Elements of the subfield of order `sub` (`sub` a power of `p` with
    /// matching degree), i.e. the solutions of `x^sub = x`.
    pub fn subfield_elements(&self, sub: u64) -> Result<Vec<FfElem>, GfError> {
        let n = self.size - 1;
        if !arith::is_power_of(sub, self.p) || n % (sub - 1) != 0 {
            return Err(GfError::IncompatibleDegrees { sub, sup: self.size });
        }
        let mut out = vec![self.zero()];
        out.extend(self.roots_of_unity(sub - 1)?);
        out.sort();
        Ok(out)
    }

    /// Square root, if one exists (odd characteristic, tabled fields use logs).
    pub fn sqrt(&self, x: FfElem) -> Option<FfElem> {
        if x.is_zero() {
            return Some(x);
        }
        if self.tables.is_some() && self.p != 2 {
            let l = self.log(x)?;
            return (l % 2 == 0).then(|| self.exp(l / 2));
        }
        self.elements().find(|&y| self.mul(y, y) == x)
    }

    /// Evaluates a polynomial with `F_p` coefficients (constant first) at `x`.
    pub fn eval_prime_poly(&self, coeffs: &[u64], x: FfElem) -> FfElem {
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, x), self.from_int(c as i64));
        }
        acc
    }

    /// Explicit embedding of `self` into `sup`.
    pub fn embedding_into(&self, sup: &FieldCtx) -> Result<Embedding, GfError> {
        Embedding::new(self, sup)
    }

    fn add_repr(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        if let Some(Some(add)) = self.tables.as_ref().map(|t| t.add.as_ref()) {
            return add[(a * self.size + b) as usize] as u64;
        }
        add_digits(a, b, self.p)
    }

    fn poly_mul_repr(&self, a: u64, b: u64) -> u64 {
        let p = self.p;
        let k = self.k as usize;
        let da = digits(a, p, self.k);
        let db = digits(b, p, self.k);
        let mut prod = vec![0u64; 2 * k];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // reduce by the monic modulus
        for deg in (k..2 * k).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let t = deg - k + i;
                prod[t] = (prod[t] + (p - c) * m) % p;
            }
        }
        undigits(&prod[..k], p)
    }

    fn find_primitive(&self) -> u64 {
        if self.size == 2 {
            return 1;
        }
        let n = self.size - 1;
        for j in 1..self.size {
            let repr = lex_index_to_repr(j, self.p, self.k);
            if repr == 0 {
                continue;
            }
            let x = self.wrap(repr);
            if self.group_factors.iter().all(|&r| self.pow(x, n / r).repr != 1) {
                return repr;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&self) -> Tables {
        let n = (self.size - 1) as usize;
        let mut exp = vec![0u32; n];
        let mut log = vec![0u32; self.size as usize];
        let mut acc = 1u64;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = acc as u32;
            log[acc as usize] = i as u32;
            acc = self.poly_mul_repr(acc, self.primitive);
        }
        let add = (self.p != 2 && self.size <= ADD_TABLE_LIMIT).then(|| {
            let s = self.size;
            let mut t = vec![0u32; (s * s) as usize];
            for a in 0..s {
                for b in 0..s {
                    t[(a * s + b) as usize] = add_digits(a, b, self.p) as u32;
                }
            }
            t
        });
        Tables { exp, log, add }
    }
}

fn digits(mut v: u64, p: u64, k: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(v % p);
        v /= p;
    }
    out
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn add_digits(mut a: u64, mut b: u64, p: u64) -> u64 {
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// Maps the `j`-th tuple of the low-degree-first lexicographic order to the
/// packed representation.
fn lex_index_to_repr(j: u64, p: u64, k: u32) -> u64 {
    let mut d = digits(j, p, k);
    d.reverse();
    undigits(&d, p)
}

fn canonical_modulus(p: u64, k: u32) -> Vec<u64> {
    let total = p.pow(k);
    // a nonzero constant term is necessary (except for x itself when k = 1),
    // and in this order the constant term is the leading digit
    let start = if k == 1 { 0 } else { total / p };
    for j in start..total {
        let mut f = digits(lex_index_to_repr(j, p, k), p, k);
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// An embedding `GF(p^a) -> GF(p^b)`, fixed by sending the generator `x` of
/// the small field to the smallest root of its modulus in the large one.
#[derive(Debug, Clone)]
pub struct Embedding {
    sub_id: u32,
    sup_id: u32,
    p: u64,
    sub_k: u32,
    root: FfElem,
    powers: Vec<FfElem>,
    table: Option<Vec<FfElem>>,
    inverse: Option<HashMap<u64, FfElem>>,
}

impl Embedding {
    pub fn new(sub: &FieldCtx, sup: &FieldCtx) -> Result<Self, GfError> {
        if sub.p != sup.p || sup.k % sub.k != 0 {
            return Err(GfError::IncompatibleDegrees { sub: sub.size, sup: sup.size });
        }
        let n_sup = sup.size - 1;
        let n_sub = sub.size - 1;
        let h = sup.exp(n_sup / n_sub);
        let mut candidates = vec![sup.zero()];
        let mut acc = sup.one();
        for _ in 0..n_sub {
            candidates.push(acc);
            acc = sup.mul(acc, h);
        }
        let root = candidates
            .into_iter()
            .filter(|&r| sup.eval_prime_poly(&sub.modulus, r).is_zero())
            .min_by_key(|&r| sup.lex_key(r))
            .expect("the modulus of a subfield splits in the extension");
        let mut powers = Vec::with_capacity(sub.k as usize);
        let mut acc = sup.one();
        for _ in 0..sub.k {
            powers.push(acc);
            acc = sup.mul(acc, root);
        }
        let mut emb = Embedding {
            sub_id: sub.id,
            sup_id: sup.id,
            p: sub.p,
            sub_k: sub.k,
            root,
            powers,
            table: None,
            inverse: None,
        };
        if sub.size <= TABLE_LIMIT {
            let table: Vec<FfElem> = sub.elements().map(|x| emb.compute(sup, x)).collect();
            let inverse = table
                .iter()
                .enumerate()
                .map(|(i, y)| (y.repr, sub.wrap(i as u64)))
                .collect();
            emb.table = Some(table);
            emb.inverse = Some(inverse);
        }
        Ok(emb)
    }

    /// Image of the generator `x` of the small field.
    pub fn root(&self) -> FfElem {
        self.root
    }

    fn compute(&self, sup: &FieldCtx, x: FfElem) -> FfElem {
        let d = digits(x.repr, self.p, self.sub_k);
        let mut acc = sup.zero();
        for (c, &pw) in d.iter().zip(&self.powers) {
            if *c != 0 {
                acc = sup.add(acc, sup.mul(sup.from_int(*c as i64), pw));
            }
        }
        acc
    }

    pub fn embed(&self, sup: &FieldCtx, x: FfElem) -> Result<FfElem, GfError> {
        if x.ctx != self.sub_id || sup.id != self.sup_id {
            return Err(GfError::ContextMismatch);
        }
        Ok(match &self.table {
            Some(t) => t[x.repr as usize],
            None => self.compute(sup, x),
        })
    }

    /// Preimage of an element lying in the image of the embedding.
    pub fn preimage(&self, y: FfElem) -> Option<FfElem> {
        if y.ctx != self.sup_id {
            return None;
        }
        self.inverse.as_ref()?.get(&y.repr).copied()
    }
}

/// Polynomials over `F_p`, coefficient vectors constant term first.
pub(crate) mod poly {
    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        crate::arith::pow_mod(a, p - 2, p)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let dr = r.len() - 1;
            let c = r[dr] * lead_inv % p;
            for (i, &mi) in m.iter().enumerate() {
                let t = dr - dm + i;
                r[t] = (r[t] + (p - c) * mi % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    pub fn pow_mod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(a, m, p);
        let mut acc = rem(&[1], m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    /// `x^(p^j) mod f`.
    fn frob_power_of_x(f: &[u64], p: u64, j: u32) -> Vec<u64> {
        let mut r = rem(&[0, 1], f, p);
        for _ in 0..j {
            r = pow_mod(&r, p, f, p);
        }
        r
    }

    /// Rabin's irreducibility test for a monic `f` of degree `k`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let k = (f.len() - 1) as u32;
        if k == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let x = [0u64, 1];
        if sub(&frob_power_of_x(f, p, k), &x, p) != Vec::<u64>::new() {
            return false;
        }
        for r in crate::arith::prime_factors(k as u64) {
            let t = sub(&frob_power_of_x(f, p, k / r as u32), &x, p);
            let g = gcd(f, &t, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent irreducibility oracle: trial division by every monic
    /// polynomial of degree 1..=k/2.
    fn irreducible_by_trial_division(f: &[u64], p: u64) -> bool {
        let k = f.len() - 1;
        for deg in 1..=k / 2 {
            for low in 0..p.pow(deg as u32) {
                let mut g = digits(low, p, deg as u32);
                g.push(1);
                if poly::rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn small_field_sizes() {
        assert_eq!(FieldCtx::new(2, 2).unwrap().cardinality(), 4);
        assert_eq!(FieldCtx::new(5, 2).unwrap().cardinality(), 25);
        let f = FieldCtx::new(2, 12).unwrap();
        assert_eq!(f.cardinality(), 4096);
        assert_eq!(4095 % 65, 0);
        assert_eq!(f.roots_of_unity(65).unwrap().len(), 65);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldCtx::new(4, 2).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(FieldCtx::new(3, 0).unwrap_err(), GfError::ZeroDegree);
        assert!(matches!(FieldCtx::new(2, 41), Err(GfError::TooLarge { .. })));
        assert!(matches!(FieldCtx::new(3, 26), Err(GfError::TooLarge { .. })));
    }

    #[test]
    fn modulus_is_canonical_and_irreducible() {
        for (p, k) in [(2, 1), (2, 2), (2, 3), (2, 4), (2, 6), (3, 2), (3, 4), (5, 2), (5, 4), (7, 2), (13, 2)] {
            let f = FieldCtx::new(p, k).unwrap();
            let again = FieldCtx::new(p, k).unwrap();
            assert_eq!(f.modulus(), again.modulus());
            assert!(irreducible_by_trial_division(f.modulus(), p), "GF({p}^{k})");
            // every lexicographically smaller monic candidate is reducible
            for j in 0..p.pow(k) {
                let mut g = digits(lex_index_to_repr(j, p, k), p, k);
                g.push(1);
                if g == f.modulus() {
                    break;
                }
                assert!(!irreducible_by_trial_division(&g, p));
            }
        }
        assert_eq!(FieldCtx::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn gf4_product_of_u_and_u_plus_one() {
        let f = FieldCtx::new(2, 2).unwrap();
        let u = f.from_coeffs(&[0, 1]);
        let u1 = f.from_coeffs(&[1, 1]);
        assert_eq!(f.mul(u, u1), f.one());
    }

    #[test]
    fn inverse_and_division() {
        let f = FieldCtx::new(5, 2).unwrap();
        for x in f.elements().skip(1) {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
        }
        assert_eq!(f.inv(f.zero()), Err(GfError::DivisionByZero));
        assert_eq!(f.div(f.one(), f.zero()), Err(GfError::DivisionByZero));
        let g = FieldCtx::new(5, 2).unwrap();
        assert_eq!(f.try_check(g.one()), Err(GfError::ContextMismatch));
    }

    #[test]
    fn frobenius_squared_is_identity_on_quadratic_extension() {
        for (p, k, q) in [(2, 4, 4), (5, 2, 5), (3, 4, 9), (13, 2, 13)] {
            let f = FieldCtx::new(p, k).unwrap();
            for x in f.elements() {
                let y = f.frobenius(f.frobenius(x, q).unwrap(), q).unwrap();
                assert_eq!(x, y);
            }
        }
        let f = FieldCtx::new(5, 2).unwrap();
        assert!(f.frobenius(f.one(), 6).is_err());
    }

    #[test]
    fn untabled_arithmetic_agrees_with_tables() {
        let f = FieldCtx::new(3, 4).unwrap();
        for a in f.elements().step_by(7) {
            for b in f.elements().step_by(5) {
                assert_eq!(f.mul(a, b).repr, f.poly_mul_repr(a.repr, b.repr));
            }
        }
    }

    #[test]
    fn roots_of_unity_examples() {
        let f25 = FieldCtx::new(5, 2).unwrap();
        assert_eq!(f25.roots_of_unity(6).unwrap().len(), 6);
        let f169 = FieldCtx::new(13, 2).unwrap();
        assert_eq!(f169.roots_of_unity(14).unwrap().len(), 14);
        let f64 = FieldCtx::new(2, 6).unwrap();
        let mu9 = f64.roots_of_unity(9).unwrap();
        assert_eq!(mu9[0], f64.one());
        assert!(mu9.iter().all(|&x| f64.pow(x, 9) == f64.one()));
        assert_eq!(mu9.iter().filter(|&&x| f64.order(x) == 9).count(), 6);
        assert!(f64.roots_of_unity(10).is_err());
    }

    #[test]
    fn cyclic_group_order_statistics() {
        for (p, k) in [(2, 4), (3, 2), (5, 2), (7, 2)] {
            let f = FieldCtx::new(p, k).unwrap();
            let n = f.cardinality() - 1;
            let mut counts: HashMap<u64, u64> = HashMap::new();
            for x in f.elements().skip(1) {
                *counts.entry(f.order(x)).or_default() += 1;
            }
            for d in arith::divisors(n) {
                assert_eq!(counts.get(&d).copied().unwrap_or(0), arith::euler_phi(d));
            }
        }
    }

    #[test]
    fn root_of_unity_intersections() {
        let f = FieldCtx::new(5, 2).unwrap();
        for d1 in arith::divisors(24) {
            for d2 in arith::divisors(24) {
                let a: std::collections::BTreeSet<_> = f.roots_of_unity(d1).unwrap().into_iter().collect();
                let b: std::collections::BTreeSet<_> = f.roots_of_unity(d2).unwrap().into_iter().collect();
                let c: std::collections::BTreeSet<_> =
                    f.roots_of_unity(arith::gcd(d1, d2)).unwrap().into_iter().collect();
                assert_eq!(a.intersection(&b).copied().collect::<std::collections::BTreeSet<_>>(), c);
            }
        }
    }

    #[test]
    fn embeddings() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        let f4096 = FieldCtx::new(2, 12).unwrap();
        let e = f4.embedding_into(&f4096).unwrap();
        assert_eq!(e.embed(&f4096, f4.zero()).unwrap(), f4096.zero());
        assert_eq!(e.embed(&f4096, f4.one()).unwrap(), f4096.one());
        for x in f4.elements().skip(1) {
            let y = e.embed(&f4096, x).unwrap();
            assert_eq!(f4096.pow(y, 3), f4096.one());
            assert_eq!(e.preimage(y), Some(x));
        }
        for a in f4.elements() {
            for b in f4.elements() {
                let ab = e.embed(&f4096, f4.mul(a, b)).unwrap();
                let prod = f4096.mul(e.embed(&f4096, a).unwrap(), e.embed(&f4096, b).unwrap());
                assert_eq!(ab, prod);
                let s = e.embed(&f4096, f4.add(a, b)).unwrap();
                assert_eq!(s, f4096.add(e.embed(&f4096, a).unwrap(), e.embed(&f4096, b).unwrap()));
            }
        }

        let f25 = FieldCtx::new(5, 2).unwrap();
        let f5_6 = FieldCtx::new(5, 6).unwrap();
        let e = f25.embedding_into(&f5_6).unwrap();
        let g = e.embed(&f5_6, f25.primitive()).unwrap();
        assert_eq!(f5_6.order(g), 24);

        let f8 = FieldCtx::new(2, 3).unwrap();
        assert!(f8.embedding_into(&f4096).is_ok());
        let f16 = FieldCtx::new(2, 4).unwrap();
        let f64 = FieldCtx::new(2, 6).unwrap();
        assert!(matches!(f16.embedding_into(&f64), Err(GfError::IncompatibleDegrees { .. })));
    }

    #[test]
    fn embedding_commutes_with_frobenius() {
        let f16 = FieldCtx::new(2, 4).unwrap();
        let f256 = FieldCtx::new(2, 8).unwrap();
        let e = f16.embedding_into(&f256).unwrap();
        for x in f16.elements() {
            let lhs = e.embed(&f256, f16.frobenius(x, 4).unwrap()).unwrap();
            let rhs = f256.frobenius(e.embed(&f256, x).unwrap(), 4).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn large_untabled_field() {
        let f = FieldCtx::new(2, 30).unwrap();
        let g = f.primitive();
        assert_eq!(f.order(g), (1 << 30) - 1);
        let x = f.from_repr(123_456_789).unwrap();
        assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
    }
}
