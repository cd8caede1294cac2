//! Exact scalars: rationals, the coefficient ring `Q[t, 1/t]` with `t = k + g`,
//! and ħ-shift multipliers of the form `α + βk`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Exact rational number used everywhere in the crate.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Returns the value as an `i64` if it is an integer that fits.
pub fn q_to_i64(x: &Q) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.numer().clone()).ok()
}

/// Element of `Q[t, 1/t]` where `t = k + g` is the shifted level.
///
/// Every coefficient appearing inside a field combination, and every
/// contraction exponent, lives in this ring: the only denominators that the
/// construction ever introduces are powers of `k + g`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct KPoly {
    /// power of `t` -> coefficient; zero coefficients are never stored.
    terms: BTreeMap<i32, Q>,
}

impl KPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(0, c)
    }

    /// `c · t^power`.
    pub fn monomial(power: i32, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(power, c);
        }
        Self { terms }
    }

    /// `t = k + g` itself.
    pub fn t() -> Self {
        Self::monomial(1, Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_const().map_or(false, |c| c.is_one())
    }

    /// The value, if it does not depend on `k`.
    pub fn as_const(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// The value as an integer, if it is a `k`-independent integer.
    pub fn as_integer(&self) -> Option<i64> {
        self.as_const().as_ref().and_then(q_to_i64)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(p, v)| (*p, v * c)).collect(),
        }
    }

    /// Evaluates at a numeric level `k` for dual Coxeter number `g`.
    pub fn eval(&self, k: &Q, g: i64) -> Result<Q, Error> {
        let t = k + qi(g);
        if t.is_zero() && self.terms.keys().any(|p| *p < 0) {
            return Err(Error::CriticalLevel);
        }
        let mut acc = Q::zero();
        for (p, c) in &self.terms {
            acc += c * pow_q(&t, *p);
        }
        Ok(acc)
    }

    /// Reduces a constant integer part modulo 2; used for `(-1)^e` bookkeeping.
    pub fn reduce_parity(&self) -> Self {
        let mut out = self.clone();
        if let Some(c) = out.terms.get(&0).cloned() {
            if c.is_integer() {
                let r = c.numer().mod_floor(&BigInt::from(2));
                if r.is_zero() {
                    out.terms.remove(&0);
                } else {
                    out.terms.insert(0, Q::one());
                }
            }
        }
        out
    }

    /// Renders with `t` written as `(k+g)`.
    pub fn display_with(&self, g: i64) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (p, c) in &self.terms {
            let base = format!("(k+{g})");
            let s = match *p {
                0 => fmt_q(c),
                1 => format!("{}*{base}", fmt_q(c)),
                p => format!("{}*{base}^{p}", fmt_q(c)),
            };
            parts.push(s);
        }
        parts.join(" + ")
    }
}

pub fn pow_q(x: &Q, p: i32) -> Q {
    let mut acc = Q::one();
    for _ in 0..p.unsigned_abs() {
        acc *= x;
    }
    if p < 0 {
        acc.recip()
    } else {
        acc
    }
}

impl From<Q> for KPoly {
    fn from(c: Q) -> Self {
        KPoly::constant(c)
    }
}

impl Add for &KPoly {
    type Output = KPoly;
    fn add(self, rhs: &KPoly) -> KPoly {
        let mut terms = self.terms.clone();
        for (p, c) in &rhs.terms {
            let e = terms.entry(*p).or_insert_with(Q::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(p);
            }
        }
        KPoly { terms }
    }
}

impl Sub for &KPoly {
    type Output = KPoly;
    fn sub(self, rhs: &KPoly) -> KPoly {
        self + &(-rhs)
    }
}

impl Neg for &KPoly {
    type Output = KPoly;
    fn neg(self) -> KPoly {
        KPoly {
            terms: self.terms.iter().map(|(p, c)| (*p, -c)).collect(),
        }
    }
}

impl Mul for &KPoly {
    type Output = KPoly;
    fn mul(self, rhs: &KPoly) -> KPoly {
        let mut out = KPoly::zero();
        for (p1, c1) in &self.terms {
            for (p2, c2) in &rhs.terms {
                out = &out + &KPoly::monomial(p1 + p2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| match *p {
                0 => fmt_q(c),
                1 => format!("{}*t", fmt_q(c)),
                p => format!("{}*t^{p}", fmt_q(c)),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Multiplier of ħ of the form `constant + kcoef·k`.
///
/// All argument shifts of the construction have this shape, including
/// `u± = u ± ħc/4` once the centre acts as `c = k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ShiftScalar {
    pub constant: Q,
    pub kcoef: Q,
}

impl Default for ShiftScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl ShiftScalar {
    pub fn new(constant: Q, kcoef: Q) -> Self {
        Self { constant, kcoef }
    }

    pub fn zero() -> Self {
        Self::new(Q::zero(), Q::zero())
    }

    pub fn constant(c: Q) -> Self {
        Self::new(c, Q::zero())
    }

    /// `(c_num/c_den) + (k_num/k_den)·k`, a convenience for literal shifts.
    pub fn ratio(c_num: i64, c_den: i64, k_num: i64, k_den: i64) -> Self {
        Self::new(q(c_num, c_den), q(k_num, k_den))
    }

    /// `k + g` as a shift.
    pub fn level_shift(g: i64) -> Self {
        Self::new(qi(g), Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.kcoef.is_zero()
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(&self.constant * c, &self.kcoef * c)
    }

    pub fn eval(&self, k: &Q) -> Q {
        &self.constant + &self.kcoef * k
    }
}

impl Add for &ShiftScalar {
    type Output = ShiftScalar;
    fn add(self, rhs: &ShiftScalar) -> ShiftScalar {
        ShiftScalar::new(&self.constant + &rhs.constant, &self.kcoef + &rhs.kcoef)
    }
}

impl Sub for &ShiftScalar {
    type Output = ShiftScalar;
    fn sub(self, rhs: &ShiftScalar) -> ShiftScalar {
        ShiftScalar::new(&self.constant - &rhs.constant, &self.kcoef - &rhs.kcoef)
    }
}

impl Neg for &ShiftScalar {
    type Output = ShiftScalar;
    fn neg(self) -> ShiftScalar {
        ShiftScalar::new(-&self.constant, -&self.kcoef)
    }
}

impl fmt::Display for ShiftScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.constant.is_zero(), self.kcoef.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", fmt_q(&self.constant)),
            (true, false) => write!(f, "{}k", fmt_q(&self.kcoef)),
            (false, false) => {
                let sign = if self.kcoef.is_negative() { "-" } else { "+" };
                write!(f, "{}{}{}k", fmt_q(&self.constant), sign, fmt_q(&self.kcoef.abs()))
            }
        }
    }
}
