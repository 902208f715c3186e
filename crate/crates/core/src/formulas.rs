//! Closed forms for the genus of `H/bar L` and the number `N` of orbits on the
//! rational points, plus the lifting from `bar L` to subgroups of `Aut(K_n)`.
//!
//! Every expression is evaluated in exact rational arithmetic and must come out
//! integral; anything else is reported as an error rather than rounded.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, gcd};
use crate::family::{Family, FamilyInstance};

type Q = Ratio<i128>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("{what} evaluates to the non-integer {value}")]
    NonIntegral { what: String, value: String },
    #[error("{what} evaluates to the negative value {value}")]
    Negative { what: String, value: i128 },
    #[error("parameters outside the hypotheses: {0}")]
    Hypothesis(String),
    #[error("n = {0} must be odd")]
    EvenN(u32),
    #[error("s = {s} does not divide q+1 = {q1}")]
    SNotDivisor { s: u64, q1: u64 },
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusN {
    pub g_bar: u64,
    pub n_orbits: u64,
    pub n1: u64,
    pub n2: u64,
}

/// A displayed expression replaced by the one its own derivation produces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Erratum {
    pub id: &'static str,
    pub family: String,
    pub quantity: &'static str,
    pub displayed: &'static str,
    pub used: &'static str,
}

/// Known statement-versus-derivation discrepancies, each resolved in favour
/// of the derived expression.  The engine checks every one of them against
/// brute-force orbit counts.
pub fn errata() -> Vec<Erratum> {
    vec![
        Erratum {
            id: "sl22-thrice-n2",
            family: Family::EvenSl22Thrice.id(),
            quantity: "N",
            displayed: "(q+4)/6 + (q+1)(q^2-q-2)/w + (q+1)/w",
            used: "(q+4)/6 + (q+1)(q^2-q-2)/(6w) + (q+1)/w",
        },
        Erratum {
            id: "sl25-n2",
            family: Family::OddSl25.id(),
            quantity: "N",
            displayed: "N2 = q(q-1)(q+1)/(15w) when 5 ∤ w",
            used: "N2 = (q^3-q)/(120w) when 5 ∤ w",
        },
        Erratum {
            id: "supm-n2",
            family: Family::OddSuPm.id(),
            quantity: "N",
            displayed: "... + (q+1)gcd(p^k+1,w)/w + ...",
            used: "... + (q+1)gcd(p^k+1,w)/((p^k+1)w) + ...",
        },
    ]
}

/// Which errata a given instance relies on.
pub fn errata_for(inst: &FamilyInstance) -> Vec<&'static str> {
    match inst.family {
        Family::EvenSl22Thrice => vec!["sl22-thrice-n2"],
        Family::OddSl25 if inst.get("w").map_or(true, |w| w % 5 != 0) => vec!["sl25-n2"],
        Family::OddSuPm => vec!["supm-n2"],
        _ => Vec::new(),
    }
}

/// `N` as the displayed (uncorrected) expression would give it, for the
/// instances covered by [`errata`].
pub fn displayed_n(inst: &FamilyInstance) -> Option<Ratio<i128>> {
    let qi = inst.q as i128;
    let w = inst.get("w").unwrap_or(1) as i128;
    match inst.family {
        Family::EvenSl22Thrice => Some(r(qi + 4, 6) + r((qi + 1) * (qi * qi - qi - 2), w) + r(qi + 1, w)),
        Family::OddSl25 if w % 5 != 0 && (qi * qi - 1) % 5 == 0 => {
            let n1 = if (qi - 1) % 5 == 0 { r(qi + 99, 60) } else { r(qi + 51, 60) };
            Some(n1 + r(qi * (qi - 1) * (qi + 1), 15 * w))
        }
        Family::OddSuPm => {
            let (p, h) = arith::prime_power(inst.q)?;
            let k = inst.get("k")? as u32;
            if h % k != 0 || (h / k) % 2 == 0 {
                return None;
            }
            let pk = (p as i128).pow(k);
            Some(
                int(1)
                    + r(qi - pk, pk * (pk - 1) * (pk + 1))
                    + r((qi + 1) * gcd(pk + 1, w), w)
                    + r((qi * qi - qi - pk * (pk - 1)) * (qi + 1), 2 * pk * (pk * pk - 1) * w),
            )
        }
        _ => None,
    }
}

fn r(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

fn int(x: i128) -> Q {
    Q::from_integer(x)
}

fn integral(what: &str, v: Q) -> Result<u64, FormulaError> {
    if !v.is_integer() {
        return Err(FormulaError::NonIntegral { what: what.into(), value: v.to_string() });
    }
    let x = v.to_integer();
    if x < 0 {
        return Err(FormulaError::Negative { what: what.into(), value: x });
    }
    Ok(x as u64)
}

fn assemble(g: Q, n1: Q, n2: Q) -> Result<GenusN, FormulaError> {
    let g_bar = integral("genus", g)?;
    let n1 = integral("N1", n1)?;
    let n2 = integral("N2", n2)?;
    if n1 == 0 || n2 == 0 {
        return Err(FormulaError::Hypothesis("an orbit count vanished".into()));
    }
    Ok(GenusN { g_bar, n_orbits: n1 + n2, n1, n2 })
}

fn hyp(cond: bool, msg: &str) -> Result<(), FormulaError> {
    if cond {
        Ok(())
    } else {
        Err(FormulaError::Hypothesis(msg.into()))
    }
}

/// `m = (q^n + 1)/(q + 1)` for odd `n`.
pub fn m_of(q: u64, n: u32) -> Result<u64, FormulaError> {
    if n % 2 == 0 || n == 0 {
        return Err(FormulaError::EvenN(n));
    }
    let qn1 = q.pow(n) + 1;
    debug_assert_eq!(qn1 % (q + 1), 0);
    Ok(qn1 / (q + 1))
}

/// Genus and orbit counts for the wild families with even `q`.  Returns
/// `Ok(None)` for families handled by the brute-force oracle.
pub fn genus_n_even(inst: &FamilyInstance) -> Result<Option<GenusN>, FormulaError> {
    let q = inst.q;
    let (p, h) = arith::prime_power(q).ok_or(FormulaError::NotPrimePower(q))?;
    hyp(p == 2, "q must be even")?;
    let qi = q as i128;
    let w = inst.get("w").unwrap_or(1) as i128;
    hyp((q + 1) as i128 % w == 0, "w must divide q+1")?;
    let out = match inst.family {
        Family::EvenElementaryAbelian => {
            let f = inst.param("f") as u32;
            hyp(f >= 1 && f <= h, "need 1 <= f <= h")?;
            let pf = 1i128 << f;
            let g = r((qi + 1) * (qi - w - pf) + w * (pf + 1), 2 * pf * w);
            let n1 = r(qi, pf) + 1;
            let n2 = r(qi * (qi * qi - 1), pf * w);
            assemble(g, n1, n2)?
        }
        Family::EvenSl22 => {
            if h % 2 == 0 {
                let g = r(qi * qi - w * qi - 3 * qi + 4 * w - 4, 12 * w);
                let n1 = r(qi + 8, 6);
                let n2 = r(qi * (qi - 1) * (qi + 1), 6 * w);
                assemble(g, n1, n2)?
            } else {
                hyp(w % 3 != 0, "h odd requires 3 ∤ w")?;
                let g = r((qi + 1) * (qi - w - 4) + 9 * w, 12 * w);
                let n1 = r(qi + 4, 6);
                let n2 = r(qi * qi * qi - qi, 6 * w);
                assemble(g, n1, n2)?
            }
        }
        Family::EvenSl22Thrice => {
            hyp(h % 2 == 1 && w % 3 == 0, "needs h odd and 3 | w")?;
            let g = r((qi + 1) * (qi - w - 8) + 9 * w, 12 * w);
            let n1 = r(qi + 4, 6);
            let n2 = r(qi + 1, w) + r((qi + 1) * (qi * qi - qi - 2), 6 * w);
            assemble(g, n1, n2)?
        }
        Family::EvenSl2f => {
            let f = inst.param("f") as u32;
            hyp(f > 1 && h % f == 0, "need f > 1 and f | h")?;
            let pf = 1i128 << f;
            let denom = 2 * pf * (pf + 1) * (pf - 1) * w;
            let gw = gcd(pf + 1, w);
            if (h / f) % 2 == 1 {
                let g = r(
                    (qi + 1) * (qi - w - pf * (pf - 1) * gw - pf) + (pf + 1) * w * (pf * pf - pf + 1),
                    denom,
                );
                let n1 = int(1) + r(qi - pf, pf * (pf * pf - 1));
                let n2 = r((qi + 1) * gw, (pf + 1) * w)
                    + r((qi + 1) * (qi * (qi - 1) - pf * (pf - 1)), w * pf * (pf - 1) * (pf + 1));
                assemble(g, n1, n2)?
            } else {
                let g = r((qi + 1) * (qi - pf * pf - w) - w * (2 * pf * pf * pf - pf * pf - 2 * pf - 1), denom)
                    + 1;
                let n1 = int(2) + r(qi - pf * pf, pf * (pf * pf - 1));
                let n2 = r(qi * (qi - 1) * (qi + 1), pf * (pf * pf - 1) * w);
                assemble(g, n1, n2)?
            }
        }
        Family::EvenDihedral => {
            let t = inst.param("t") as i128;
            hyp((qi - 1) % t == 0, "t must divide q-1")?;
            let g = r(qi * qi - qi * w - qi * t + w * t + w - t - 1, 4 * t * w);
            let n1 = r(qi - 1 + 3 * t, 2 * t);
            let n2 = r(qi * (qi - 1) * (qi + 1), 2 * t * w);
            assemble(g, n1, n2)?
        }
        Family::EvenA5 => {
            hyp(h % 2 == 0, "h must be even")?;
            let delta = if (qi - 1) % 5 == 0 {
                w
            } else if w % 5 != 0 {
                0
            } else {
                qi + 1
            };
            let g = r((qi + 1) * (qi - w - 16) + 65 * w - 48 * delta, 120 * w);
            let (n1, n2) = if (qi - 1) % 5 == 0 {
                (int(2) + r(qi - 16, 60), r(qi * (qi - 1) * (qi + 1), 60 * w))
            } else if w % 5 != 0 {
                (int(1) + r(qi - 4, 60), r(qi * (qi - 1) * (qi + 1), 60 * w))
            } else {
                (int(1) + r(qi - 4, 60), r(qi + 1, w) * (r(qi * qi - qi - 12, 60) + 1))
            };
            assemble(g, n1, n2)?
        }
        Family::EvenA4 => {
            hyp(h % 2 == 0, "h must be even")?;
            let g = r(qi * qi - qi * w + 4 * w - 3 * qi - 4, 24 * w);
            let n1 = r(qi + 20, 12);
            let n2 = r(qi * qi * qi - qi, 12 * w);
            assemble(g, n1, n2)?
        }
        Family::EvenBorel => {
            let f = inst.param("f") as u32;
            let d = inst.param("d") as i128;
            let pf = 1i128 << f;
            hyp(f <= h && (pf - 1) % d == 0 && (qi - 1) % d == 0, "need d | gcd(2^f-1, q-1)")?;
            let g = r((qi + 1) * (qi - w - pf) + w * (pf + 1), 2 * pf * d * w);
            let n1 = r(qi - pf, pf * d) + 2;
            let n2 = r(qi * (qi * qi - 1), pf * d * w);
            assemble(g, n1, n2)?
        }
        Family::EvenTriangleTransitive => {
            let t = inst.param("t") as i128;
            hyp((qi + 1) % t == 0, "t must divide q+1")?;
            let a = gcd(t, w);
            let g = r((qi + 1) * (qi - 2 * a - w - t + 1) + 3 * t * w, 4 * t * w);
            let n1 = int(1) + r(qi - t + 1, 2 * t);
            let n2 = r((qi + 1) * a, t * w) + r((qi + 1) * (qi + 1) * (qi - 2), 2 * t * w);
            assemble(g, n1, n2)?
        }
        Family::EvenCyclic | Family::EvenTrianglePointwise => return Ok(None),
        _ => return Err(FormulaError::Hypothesis(format!("{} is not an even-q family", inst.family))),
    };
    Ok(Some(out))
}

/// Genus and orbit counts for the wild families with `q = 1 (mod 4)`.
/// Returns `Ok(None)` for tame families.
pub fn genus_n_q1mod4(inst: &FamilyInstance) -> Result<Option<GenusN>, FormulaError> {
    let q = inst.q;
    let (p, h) = arith::prime_power(q).ok_or(FormulaError::NotPrimePower(q))?;
    hyp(q % 4 == 1, "q must be 1 mod 4")?;
    let qi = q as i128;
    let w = inst.get("w").unwrap_or(1) as i128;
    let out = match inst.family {
        Family::OddSl25 => {
            if p != 3 {
                return Ok(None);
            }
            hyp((qi * qi - 1) % 5 == 0, "needs q^2 = 1 mod 5")?;
            let s_const = if (qi - 1) % 5 == 0 {
                2 * w
            } else if w % 5 != 0 {
                0
            } else {
                qi + 1
            };
            let g = r((qi + 1) * (qi - 21 - 2 * w) + 140 * w - 48 * s_const, 240 * w);
            let (n1, n2) = if (qi - 1) % 5 == 0 {
                (r(qi + 99, 60), r(qi * qi * qi - qi, 120 * w))
            } else if w % 5 != 0 {
                (r(qi + 51, 60), r(qi * qi * qi - qi, 120 * w))
            } else {
                (r(qi + 51, 60), r(qi + 1, 2 * w) + r((qi * qi - qi - 12) * (qi + 1), 120 * w))
            };
            assemble(g, n1, n2)?
        }
        Family::OddSl2Sub | Family::OddTl | Family::OddSuPm => {
            let k = inst.param("k") as u32;
            hyp(k >= 1 && h % k == 0, "k must divide h")?;
            let rr = h / k;
            let pk = (p as i128).pow(k);
            let pk2 = pk * pk;
            let gw = gcd(pk + 1, w);
            match inst.family {
                Family::OddSl2Sub => {
                    let g2 = gcd(rr as i128, 2);
                    let delta = (pk2 - 1) * (qi + 2)
                        + pk2
                        - 1
                        + qi
                        + 1
                        + pk * (pk + 1) * (pk - 3) * w
                        + pk * (pk - 1) * (pk - 1) * (g2 - 1)
                        + 2 * (pk2 - 1) * (w - 1)
                        + 2 * (w - 1) * (qi + 1)
                        + pk * (pk - 1) * (pk - 1) * (w - 1) * (g2 - 1)
                        + (gw - 1) * pk * (pk - 1) * (qi + 1) * (2 - g2);
                    let g = int(1) + r(qi * qi - qi - 2 - delta, 2 * pk * (pk2 - 1) * w);
                    let (n1, n2) = if rr % 2 == 0 {
                        (
                            int(2) + r(2 * (qi - pk2), pk * (pk - 1) * (pk + 1)),
                            r(qi * (qi - 1) * (qi + 1), pk * (pk2 - 1) * w),
                        )
                    } else {
                        (
                            int(1) + r(2 * (qi - pk), pk * (pk2 - 1)),
                            r((qi + 1) * gw, (pk + 1) * w)
                                + r((qi * qi - qi - pk * (pk - 1)) * (qi + 1), pk * (pk - 1) * (pk + 1) * w),
                        )
                    };
                    assemble(g, n1, n2)?
                }
                Family::OddTl => {
                    hyp(rr % 2 == 0, "h/k must be even")?;
                    let delta = (pk2 - 1) * (qi + 2)
                        + pk2
                        - 1
                        + qi
                        + 1
                        + pk * (pk + 1) * (pk - 3) * w
                        + pk * (pk - 1) * (pk - 1)
                        + 2 * (pk2 - 1) * (w - 1)
                        + 2 * (w - 1) * (qi + 1)
                        + pk * (pk - 1) * (pk - 1) * (w - 1)
                        + 2 * pk * (pk2 - 1) * w;
                    let g = int(1) + r(qi * qi - qi - 2 - delta, 4 * pk * (pk2 - 1) * w);
                    let n1 = int(2) + r(qi - pk2, pk * (pk2 - 1));
                    let n2 = r(qi * (qi - 1) * (qi + 1), 2 * pk * (pk2 - 1) * w);
                    assemble(g, n1, n2)?
                }
                _ => {
                    hyp(rr % 2 == 1, "h/k must be odd")?;
                    let delta = (qi + 1)
                        + pk * (pk + 1) * (pk - 3)
                        + (pk2 - 1) * (qi + 3)
                        + pk * (pk - 1) * (qi + 1)
                        + pk * (pk2 - 1)
                        + (2 * w - 2) * (qi + 1)
                        + 2 * (pk2 - 1) * (w - 1)
                        + 2 * pk * (pk + 1) * (pk - 2) * (w - 1)
                        + 2 * pk * (pk - 1) * (qi + 1) * (gw - 1);
                    let g = int(1) + r(qi * qi - qi - 2 - delta, 4 * pk * (pk2 - 1) * w);
                    let n1 = int(1) + r(qi - pk, pk * (pk - 1) * (pk + 1));
                    let n2 = r((qi + 1) * gw, (pk + 1) * w)
                        + r((qi * qi - qi - pk * (pk - 1)) * (qi + 1), 2 * pk * (pk2 - 1) * w);
                    assemble(g, n1, n2)?
                }
            }
        }
        Family::OddPointStabilizer => genus_n_point_stabilizer(q, inst.param("mu"), inst.param("u") as u32)?,
        f if f.is_even() => return Err(FormulaError::Hypothesis(format!("{f} is an even-q family"))),
        _ => return Ok(None),
    };
    Ok(Some(out))
}

/// Dispatches on the parity of `q`.
pub fn genus_n(inst: &FamilyInstance) -> Result<Option<GenusN>, FormulaError> {
    if inst.q % 2 == 0 {
        genus_n_even(inst)
    } else {
        genus_n_q1mod4(inst)
    }
}

/// Subgroups of order `mu * p^u` fixing a curve point on `Z = 0`.
pub fn genus_n_point_stabilizer(q: u64, mu: u64, u: u32) -> Result<GenusN, FormulaError> {
    let (p, h) = arith::prime_power(q).ok_or(FormulaError::NotPrimePower(q))?;
    hyp(u <= h, "u must not exceed h")?;
    hyp((q * q - 1) % mu == 0, "mu must divide q^2-1")?;
    let qi = q as i128;
    let mi = mu as i128;
    let d = gcd(qi + 1, mi);
    let pu = (p as i128).pow(u);
    let phu = (p as i128).pow(h - u);
    let g = r((qi + 1 - d) * (phu - 1), 2 * mi);
    let n_total = r(qi * (qi * qi - 1), pu * mi) + 2 + r(d * (qi - pu), pu * mi);
    let g_bar = integral("genus", g)?;
    let n = integral("N", n_total)?;
    // on the other q points of Z = 0 the group acts as x -> a x + b with b in
    // an F_p-space of size p^u and a of order mu/d; Burnside gives the rest
    let mu1 = mi / d;
    let n1 = integral("N1", int(1) + r(qi + (mu1 - 1) * pu, pu * mu1))?;
    if n1 >= n {
        return Err(FormulaError::Hypothesis("inconsistent orbit split".into()));
    }
    Ok(GenusN { g_bar, n_orbits: n, n1, n2: n - n1 })
}

/// `N` for a tame group from its genus.
pub fn n_from_tame(q: u64, order: u64, g_bar: u64) -> Result<u64, FormulaError> {
    let q = q as i128;
    let o = order as i128;
    let num = q * q * q + 1 + q * q - q - 2 - o * (2 * g_bar as i128 - 2);
    integral("tame N", r(num, o))
}

/// Genus of `K_n^L` from `g_bar`, `N` and `m/|L_m|`.
pub fn lift_genus(g_bar: u64, n: u64, m_over_t: u64) -> Result<u64, FormulaError> {
    let mt = m_over_t as i128;
    let num = mt * (2 * g_bar as i128 - 2) + n as i128 * (mt - 1);
    integral("lifted genus", int(1) + r(num, 2))
}

/// Tame form of [`lift_genus`].
pub fn lift_genus_tame(q: u64, g_bar: u64, order: u64, m_over_t: u64) -> Result<u64, FormulaError> {
    let q = q as i128;
    let mt = m_over_t as i128;
    let v = int(g_bar as i128) + r((q * q - 1) * (q + 1) * (mt - 1), 2 * order as i128);
    integral("tame lifted genus", v)
}

/// Upper bound for the genus of a maximal curve over `F_{q^{2n}}`.
pub fn maximal_genus_bound(q: u64, n: u32) -> u128 {
    let qn = (q as u128).pow(n);
    qn * (qn - 1) / 2
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibleT {
    pub t: u64,
    /// `gcd(s, m/t) = 1`: every genus reachable with this `|L_m|` is reached
    /// by the coset construction.
    pub genus_complete: bool,
}

/// Orders `t = |L_m|` realised by the coset construction with `L_0` cyclic of
/// order `s*t`.
pub fn admissible_cm_orders(q: u64, n: u32, s: u64) -> Result<Vec<AdmissibleT>, FormulaError> {
    if s == 0 || (q + 1) % s != 0 {
        return Err(FormulaError::SNotDivisor { s, q1: q + 1 });
    }
    let m = m_of(q, n)?;
    let qn1 = q.pow(n) + 1;
    Ok(arith::divisors(m)
        .into_iter()
        .filter(|&t| qn1 % (s * t) == 0 && arith::gcd(s * t, m) == t)
        .map(|t| AdmissibleT { t, genus_complete: arith::gcd(s, m / t) == 1 })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::DetRule;

    fn inst(family: Family, q: u64, params: &[(&str, u64)], order: u64) -> FamilyInstance {
        FamilyInstance::new(family, q, params, order, DetRule::MultipleOfW(1))
    }

    #[test]
    fn m_values() {
        assert_eq!(m_of(2, 3).unwrap(), 3);
        assert_eq!(m_of(4, 5).unwrap(), 205);
        assert_eq!(m_of(13, 5).unwrap(), 26521);
        assert_eq!(m_of(13, 5).unwrap() * 14, 13u64.pow(5) + 1);
        assert!(m_of(4, 2).is_err());
    }

    #[test]
    fn elementary_abelian_q4() {
        let a = genus_n_even(&inst(Family::EvenElementaryAbelian, 4, &[("f", 2), ("w", 5)], 20)).unwrap().unwrap();
        assert_eq!((a.g_bar, a.n_orbits, a.n1, a.n2), (0, 5, 2, 3));
        let b = genus_n_even(&inst(Family::EvenElementaryAbelian, 4, &[("f", 1), ("w", 1)], 2)).unwrap().unwrap();
        assert_eq!((b.g_bar, b.n_orbits, b.n1, b.n2), (2, 33, 3, 30));
    }

    #[test]
    fn dihedral_q4() {
        let d = genus_n_even(&inst(Family::EvenDihedral, 4, &[("t", 3), ("w", 1)], 6)).unwrap().unwrap();
        assert_eq!((d.g_bar, d.n_orbits, d.n1, d.n2), (0, 12, 2, 10));
    }

    #[test]
    fn point_stabilizer_examples() {
        let a = genus_n_point_stabilizer(25, 4, 1).unwrap();
        assert_eq!((a.g_bar, a.n_orbits), (12, 784));
        assert!(genus_n_point_stabilizer(25, 24, 1).is_err());
        let c = genus_n_point_stabilizer(5, 24, 1).unwrap();
        assert_eq!((c.g_bar, c.n_orbits), (0, 3));
    }

    #[test]
    fn tame_relations() {
        assert_eq!(n_from_tame(5, 1, 10).unwrap(), 126);
        assert_eq!(n_from_tame(4, 5, 0).unwrap(), 17);
        assert_eq!(n_from_tame(5, 3, 2).unwrap(), 46);
        assert_eq!(lift_genus_tame(4, 0, 5, 5).unwrap(), 30);
        assert_eq!(lift_genus(0, 17, 5).unwrap(), 30);
        assert_eq!(lift_genus_tame(4, 0, 5, 1).unwrap(), 0);
    }

    #[test]
    fn lifting_examples() {
        assert_eq!(lift_genus(7, 40, 1).unwrap(), 7);
        assert_eq!(lift_genus(10, 126, 21).unwrap(), 1450);
        assert_eq!(lift_genus(2, 33, 5).unwrap(), 72);
    }

    #[test]
    fn admissible_orders() {
        let ts = |q, n, s| -> Vec<u64> { admissible_cm_orders(q, n, s).unwrap().iter().map(|a| a.t).collect() };
        assert_eq!(ts(2, 3, 3), vec![3]);
        assert_eq!(ts(4, 5, 1), vec![1, 5, 41, 205]);
        assert_eq!(ts(4, 5, 5), vec![5, 205]);
        assert!(admissible_cm_orders(4, 5, 3).is_err());
    }

    #[test]
    fn sl2_subfield_group_is_s_ell_when_k_is_h() {
        // the whole of S_l at q = 5 has a single orbit on each of O1, O2
        let a = genus_n_q1mod4(&inst(Family::OddSl2Sub, 5, &[("k", 1), ("w", 1)], 120)).unwrap().unwrap();
        assert_eq!((a.g_bar, a.n_orbits), (0, 2));
    }

    #[test]
    fn tl_at_q25_gives_genus_zero() {
        let a = genus_n_q1mod4(&inst(Family::OddTl, 25, &[("k", 1), ("w", 1)], 240)).unwrap().unwrap();
        assert_eq!((a.g_bar, a.n_orbits), (0, 67));
        // lifted with t = 1 over F_{5^12}
        assert_eq!(lift_genus(a.g_bar, a.n_orbits, 601).unwrap(), 19500);
    }
}
