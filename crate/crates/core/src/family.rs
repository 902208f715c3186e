//! Subgroup families of `M_l` and their parameterised instances.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// One entry of the subgroup classification of `M_l`: eleven types for even
/// `q`, fifteen for `q = 1 (mod 4)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// `E_{2^f} x C_w`
    EvenElementaryAbelian,
    /// `SL(2,2) x C_w` with `h` even or `3 ∤ w`
    EvenSl22,
    /// `SL(2,2)`-quotient groups with `h` odd and `3 | w`
    EvenSl22Thrice,
    /// `SL(2,2^f) x C_w`, `f > 1`
    EvenSl2f,
    /// `D_{2t} x C_w`, `t | q-1`
    EvenDihedral,
    EvenA5,
    EvenA4,
    /// `(E_{2^f} ⋊ C_d) x C_w`
    EvenBorel,
    /// `C_d x C_w`, `d | q-1`
    EvenCyclic,
    /// fixes a self-polar triangle, swapping two vertices
    EvenTriangleTransitive,
    /// fixes a self-polar triangle pointwise
    EvenTrianglePointwise,
    /// `SL(2,5) x C_w`
    OddSl25,
    /// binary octahedral `x C_w`
    OddG48,
    /// `SL(2,3) x C_w`
    OddSl23,
    /// `(Q_8 ⋊ C_{3^k}) x C_{w/3^{k-1}}`
    OddQ8C3k,
    /// `C_d`, `d | q^2-1`, `d ∤ q+1`
    OddCyclic,
    /// `Dic_d x C_w`
    OddDicyclic,
    /// `SL(2,p^k) x C_w`
    OddSl2Sub,
    /// `TL(2,p^k) x C_w`, `h/k` even
    OddTl,
    /// `(SL(2,3) ⋊ C_2) x C_w`
    OddGl23,
    /// `D_{2d} x C_w`
    OddDihedral,
    /// `(Dic_m ⋊ C_2) x C_w`
    OddHatDic,
    /// `SU^±(2,p^k) x C_w`, `h/k` odd
    OddSuPm,
    OddTrianglePointwise,
    OddTriangleTransitive,
    /// subgroups fixing a point of the curve on `Z = 0`
    OddPointStabilizer,
}

impl Family {
    pub const EVEN: [Family; 11] = [
        Family::EvenElementaryAbelian,
        Family::EvenSl22,
        Family::EvenSl22Thrice,
        Family::EvenSl2f,
        Family::EvenDihedral,
        Family::EvenA5,
        Family::EvenA4,
        Family::EvenBorel,
        Family::EvenCyclic,
        Family::EvenTriangleTransitive,
        Family::EvenTrianglePointwise,
    ];

    pub const ODD: [Family; 15] = [
        Family::OddSl25,
        Family::OddG48,
        Family::OddSl23,
        Family::OddQ8C3k,
        Family::OddCyclic,
        Family::OddDicyclic,
        Family::OddSl2Sub,
        Family::OddTl,
        Family::OddGl23,
        Family::OddDihedral,
        Family::OddHatDic,
        Family::OddSuPm,
        Family::OddTrianglePointwise,
        Family::OddTriangleTransitive,
        Family::OddPointStabilizer,
    ];

    /// Position in its classification list, counted from 1.
    pub fn type_number(self) -> usize {
        if let Some(i) = Self::EVEN.iter().position(|&f| f == self) {
            return i + 1;
        }
        Self::ODD.iter().position(|&f| f == self).expect("every family is listed") + 1
    }

    pub fn is_even(self) -> bool {
        Self::EVEN.contains(&self)
    }

    /// Stable identifier such as `even-1` or `odd-15`.
    pub fn id(self) -> String {
        let side = if self.is_even() { "even" } else { "odd" };
        format!("{side}-{}", self.type_number())
    }

    pub fn from_id(id: &str) -> Option<Family> {
        Self::EVEN.iter().chain(Self::ODD.iter()).copied().find(|f| f.id() == id)
    }

    pub fn description(self) -> &'static str {
        match self {
            Family::EvenElementaryAbelian => "E_{2^f} x C_w",
            Family::EvenSl22 => "SL(2,2) x C_w",
            Family::EvenSl22Thrice => "SL(2,2) x C_w, h odd, 3 | w",
            Family::EvenSl2f => "SL(2,2^f) x C_w",
            Family::EvenDihedral => "D_2t x C_w",
            Family::EvenA5 => "A_5 x C_w",
            Family::EvenA4 => "A_4 x C_w",
            Family::EvenBorel => "(E_{2^f} : C_d) x C_w",
            Family::EvenCyclic => "C_d x C_w",
            Family::EvenTriangleTransitive => "self-polar triangle, transitive on two vertices",
            Family::EvenTrianglePointwise => "self-polar triangle, pointwise",
            Family::OddSl25 => "SL(2,5) x C_w",
            Family::OddG48 => "G_48 x C_w",
            Family::OddSl23 => "SL(2,3) x C_w",
            Family::OddQ8C3k => "(Q_8 : C_{3^k}) x C_{w/3^(k-1)}",
            Family::OddCyclic => "C_d",
            Family::OddDicyclic => "Dic_d x C_w",
            Family::OddSl2Sub => "SL(2,p^k) x C_w",
            Family::OddTl => "TL(2,p^k) x C_w",
            Family::OddGl23 => "(SL(2,3) : C_2) x C_w",
            Family::OddDihedral => "D_2d x C_w",
            Family::OddHatDic => "(Dic_m : C_2) x C_w",
            Family::OddSuPm => "SU±(2,p^k) x C_w",
            Family::OddTrianglePointwise => "self-polar triangle, pointwise",
            Family::OddTriangleTransitive => "self-polar triangle, transitive on two vertices",
            Family::OddPointStabilizer => "stabiliser of a point of the curve on Z = 0",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// How the order `s` of the determinant image is obtained.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DetRule {
    /// `s = k * w`
    MultipleOfW(u64),
    /// read off the constructed group
    Oracle,
}

/// A family together with concrete parameter values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyInstance {
    pub family: Family,
    pub q: u64,
    pub params: BTreeMap<String, u64>,
    /// `|bar L|`
    pub order: u64,
    pub tame: bool,
    pub det_rule: DetRule,
}

impl FamilyInstance {
    pub fn new(family: Family, q: u64, params: &[(&str, u64)], order: u64, det_rule: DetRule) -> Self {
        let p = crate::arith::prime_power(q).map(|(p, _)| p).unwrap_or(q);
        FamilyInstance {
            family,
            q,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            order,
            tame: order % p != 0,
            det_rule,
        }
    }

    /// Parameter value; panics on a name the family does not carry.
    pub fn param(&self, key: &str) -> u64 {
        *self
            .params
            .get(key)
            .unwrap_or_else(|| panic!("{} has no parameter {key}", self.family))
    }

    pub fn get(&self, key: &str) -> Option<u64> {
        self.params.get(key).copied()
    }

    /// Declared `s`, when the family has a closed rule.
    pub fn declared_s(&self) -> Option<u64> {
        match self.det_rule {
            DetRule::MultipleOfW(k) => Some(k * self.get("w").unwrap_or(1)),
            DetRule::Oracle => None,
        }
    }

    /// Compact `name=value` rendering of the parameters.
    pub fn param_string(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for FamilyInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family, self.param_string())
    }
}
