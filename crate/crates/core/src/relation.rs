//! Relation identifiers and the exchange functions each relation demands.
//!
//! A relation `F_L(u,v) X(u) Y(v) = F_R(u,v) Y(v) X(u)` between two single
//! vertex terms holds exactly when their exchange function equals
//! `F_R / F_L`. The centre is realized as `c = k`, so `u_± = u ± kħ/4`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::boson::Sign;
use crate::cartan::AlgebraData;
use crate::error::{Error, Result};
use crate::exchange::LinearFactorProduct;
use crate::scalar::{q, ShiftScalar, Q};
use crate::var::Var;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationId {
    Y1,
    Y2,
    Y3,
    Y4,
    Y5,
    Y6,
    Y7,
    Y8,
}

impl RelationId {
    pub const ALL: [RelationId; 8] = [
        RelationId::Y1,
        RelationId::Y2,
        RelationId::Y3,
        RelationId::Y4,
        RelationId::Y5,
        RelationId::Y6,
        RelationId::Y7,
        RelationId::Y8,
    ];

    pub fn number(self) -> usize {
        self as usize + 1
    }

    /// Relations between single-term `H` currents and `E` terms, checkable termwise.
    pub fn is_linear(self) -> bool {
        matches!(self, RelationId::Y1 | RelationId::Y2 | RelationId::Y3 | RelationId::Y4)
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y{}", self.number())
    }
}

impl FromStr for RelationId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n: usize = s
            .trim()
            .strip_prefix('y')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad relation {s:?}; expected y1..y8")))?;
        RelationId::ALL
            .get(n.wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::Parse(format!("bad relation {s:?}; expected y1..y8")))
    }
}

/// Parses a comma-separated list such as `y1,y3,y6`.
pub fn parse_relation_list(s: &str) -> Result<Vec<RelationId>> {
    let mut out: Vec<RelationId> = s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// `u_± - u = ±kħ/4` as a shift.
pub fn center_shift(sign: Sign) -> ShiftScalar {
    ShiftScalar::new(Q::from_integer(0.into()), q(sign.value(), 4))
}

/// `(k + g)/2` as a shift.
pub fn half_level(g: i64) -> ShiftScalar {
    ShiftScalar::new(q(g, 2), q(1, 2))
}

fn lin(shift: ShiftScalar) -> LinearFactorProduct {
    LinearFactorProduct::linear(Var::U, Var::V, shift)
}

/// `u - v + (constant + kcoef·k)ħ`.
fn lin_parts(constant: Q, kcoef: Q) -> LinearFactorProduct {
    lin(ShiftScalar::new(constant, kcoef))
}

/// Required exchange function of `H^{s1}_i(u)` past `H^{s2}_j(v)`.
///
/// Equal signs give `1`. For `(+,-)` the upper-sign reading of the two-sided
/// relation is used; the lower-sign reading is its reciprocal.
pub fn required_hh(alg: &AlgebraData, i: usize, s1: Sign, j: usize, s2: Sign) -> Result<LinearFactorProduct> {
    alg.check_a_index(i)?;
    alg.check_a_index(j)?;
    let b = alg.b_entry(i, j).clone();
    let half = q(1, 2);
    let lhs_rhs = |sgn: i64| {
        // (u_- - v_+ + sgn·B)(u_+ - v_- - sgn·B)
        lin_parts(&b * Q::from_integer(sgn.into()), -half.clone())
            .mul(&lin_parts(-&b * Q::from_integer(sgn.into()), half.clone()))
    };
    Ok(match (s1, s2) {
        (Sign::Plus, Sign::Plus) | (Sign::Minus, Sign::Minus) => LinearFactorProduct::one(),
        (Sign::Plus, Sign::Minus) => lhs_rhs(-1).div(&lhs_rhs(1)),
        (Sign::Minus, Sign::Plus) => {
            // H^-_i(u) H^+_j(v) = F(v,u)^{-1} H^+_j(v) H^-_i(u)
            let f = required_hh(alg, j, Sign::Plus, i, Sign::Minus)?;
            swap_vars(&f).inv()
        }
    })
}

/// `H^{h}_i(u) E^{e}_j(v) = R E^{e}_j(v) H^{h}_i(u)`.
pub fn required_he(alg: &AlgebraData, i: usize, h: Sign, j: usize, e: Sign) -> Result<LinearFactorProduct> {
    alg.check_a_index(i)?;
    alg.check_a_index(j)?;
    let b = alg.b_entry(i, j).clone();
    // H^+: u_± with E^±; H^-: u_∓ with E^±
    let cs = match h {
        Sign::Plus => center_shift(e),
        Sign::Minus => center_shift(e.flip()),
    };
    let sb = &b * Q::from_integer(e.value().into());
    let num = lin(&cs + &ShiftScalar::constant(sb.clone()));
    let den = lin(&cs - &ShiftScalar::constant(sb));
    Ok(num.div(&den))
}

/// `E^±_i(u) E^±_j(v) = (u-v±Bħ)/(u-v∓Bħ) E^±_j(v) E^±_i(u)`.
pub fn required_ee(alg: &AlgebraData, i: usize, j: usize, sign: Sign) -> Result<LinearFactorProduct> {
    alg.check_a_index(i)?;
    alg.check_a_index(j)?;
    let sb = alg.b_entry(i, j) * Q::from_integer(sign.value().into());
    Ok(lin(ShiftScalar::constant(sb.clone())).div(&lin(ShiftScalar::constant(-sb))))
}

/// Renames `u ↔ v`.
pub fn swap_vars(p: &LinearFactorProduct) -> LinearFactorProduct {
    let mut out = LinearFactorProduct::one();
    let sw = |v: Var| match v {
        Var::U => Var::V,
        Var::V => Var::U,
        other => other,
    };
    for (f, e) in p.factors() {
        out.insert(sw(f.x), sw(f.y), f.shift.clone(), e.clone());
    }
    if !p.sign_exponent().is_zero() {
        let mut s = LinearFactorProduct::one();
        // (-1)^e carried over as ((u - v) / (v - u))^e
        s.insert(Var::U, Var::V, ShiftScalar::zero(), p.sign_exponent().clone());
        s.insert(Var::V, Var::U, ShiftScalar::zero(), -p.sign_exponent());
        out = out.mul(&s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::KPoly;

    #[test]
    fn parse_relations() {
        assert_eq!("y6".parse::<RelationId>().unwrap(), RelationId::Y6);
        assert!("y0".parse::<RelationId>().is_err());
        assert!("y9".parse::<RelationId>().is_err());
        assert_eq!(
            parse_relation_list("y3,y1,y3").unwrap(),
            vec![RelationId::Y1, RelationId::Y3]
        );
        assert_eq!(RelationId::Y7.to_string(), "y7");
    }

    #[test]
    fn y2_sl2_factor() {
        // [(u_- - v_+ - ħ)(u_+ - v_- + ħ)] / [(u_- - v_+ + ħ)(u_+ - v_- - ħ)]
        let d = AlgebraData::new(2).unwrap();
        let r = required_hh(&d, 1, Sign::Plus, 1, Sign::Minus).unwrap();
        let f = |c: i64, k: i64| lin(ShiftScalar::ratio(c, 1, k, 2));
        let expected = f(-1, -1).mul(&f(1, 1)).div(&f(1, -1).mul(&f(-1, 1)));
        assert_eq!(r, expected);
        assert_eq!(r.factor_count(), 4);
    }

    #[test]
    fn zero_b_gives_one() {
        let d = AlgebraData::new(4).unwrap();
        assert!(required_he(&d, 1, Sign::Plus, 3, Sign::Plus).unwrap().is_one());
        assert!(required_ee(&d, 1, 3, Sign::Minus).unwrap().is_one());
        assert!(required_hh(&d, 1, Sign::Plus, 3, Sign::Minus).unwrap().is_one());
    }

    #[test]
    fn reversed_hh_is_consistent() {
        let d = AlgebraData::new(3).unwrap();
        let a = required_hh(&d, 1, Sign::Plus, 2, Sign::Minus).unwrap();
        let b = required_hh(&d, 2, Sign::Minus, 1, Sign::Plus).unwrap();
        // antisymmetry: R_{XY}(u,v) R_{YX}(v,u) = 1
        assert!(a.mul(&swap_vars(&b)).is_one());
    }

    #[test]
    fn swap_preserves_sign_bookkeeping() {
        let mut p = LinearFactorProduct::one();
        p.insert(Var::V, Var::U, ShiftScalar::constant(q(1, 2)), KPoly::one());
        let back = swap_vars(&swap_vars(&p));
        assert_eq!(back, p);
    }
}
