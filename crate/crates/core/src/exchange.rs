//! Wick calculus for normal-ordered exponentials of free bosons.
//!
//! Contractions are multiples of `log(x - y + sħ)`; exchanging two
//! normal-ordered exponentials therefore produces a product of linear
//! factors raised to exponents in `Q[k, 1/(k+g)]`. Products are purely
//! formal and never evaluated at a pole.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::boson::{pairing, FieldAtom, FieldCombo};
use crate::cartan::AlgebraData;
use crate::error::{Error, Result};
use crate::scalar::{fmt_q, KPoly, ShiftScalar, Q};
use crate::var::Var;

/// `Σ κ · log(x - y + shift·ħ)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ContractionValue {
    terms: BTreeMap<ShiftScalar, KPoly>,
}

impl ContractionValue {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&KPoly, &ShiftScalar)> {
        self.terms.iter().map(|(s, k)| (k, s))
    }

    fn add_term(&mut self, kappa: KPoly, shift: ShiftScalar) {
        let e = self.terms.entry(shift.clone()).or_default();
        *e = &*e + &kappa;
        if e.is_zero() {
            self.terms.remove(&shift);
        }
    }

    pub fn scale(&self, c: &KPoly) -> Self {
        let mut out = Self::default();
        for (s, k) in &self.terms {
            out.add_term(k * c, s.clone());
        }
        out
    }
}

/// `⟨F(x) G(y)⟩` for single atoms: only the annihilation half of `F`
/// (shift `B`) and the creation half of `G` (shift `C`) contribute, giving
/// `κ log(x - y + (B - C)ħ)`.
pub fn contract_atoms(alg: &AlgebraData, f: &FieldAtom, x: Var, g: &FieldAtom, y: Var) -> Result<ContractionValue> {
    if x == y {
        return Err(Error::SameVariable);
    }
    let mut out = ContractionValue::default();
    if let (Some(b), Some(c)) = (f.part.plus_shift(), g.part.minus_shift()) {
        let kappa = pairing(alg, f.symbol, g.symbol);
        if !kappa.is_zero() {
            out.add_term(kappa, b - c);
        }
    }
    Ok(out)
}

/// Bilinear extension of [`contract_atoms`].
pub fn contract_combos(alg: &AlgebraData, f: &FieldCombo, x: Var, g: &FieldCombo, y: Var) -> Result<ContractionValue> {
    if x == y {
        return Err(Error::SameVariable);
    }
    let mut out = ContractionValue::default();
    for (fs, b, fc) in f.plus_parts() {
        for (gs, c, gc) in g.minus_parts() {
            let kappa = pairing(alg, fs, gs);
            if kappa.is_zero() {
                continue;
            }
            out.add_term(&(&kappa * fc) * gc, b - c);
        }
    }
    Ok(out)
}

/// The linear factor `x - y + shift·ħ`, always stored with `x < y`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearFactor {
    pub x: Var,
    pub y: Var,
    pub shift: ShiftScalar,
}

impl fmt::Display for LinearFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift.is_zero() {
            write!(f, "({}-{})", self.x, self.y)
        } else {
            write!(f, "({}-{}+({})ħ)", self.x, self.y, self.shift)
        }
    }
}

/// `(-1)^sign · Π (x - y + sħ)^e`, canonical: zero exponents pruned,
/// orientation normalized, sign exponent reduced mod 2 when integral.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinearFactorProduct {
    factors: BTreeMap<LinearFactor, KPoly>,
    sign: KPoly,
}

impl LinearFactorProduct {
    pub fn one() -> Self {
        Self::default()
    }

    /// The single factor `(x - y + shift·ħ)`.
    pub fn linear(x: Var, y: Var, shift: ShiftScalar) -> Self {
        let mut p = Self::one();
        p.insert(x, y, shift, KPoly::one());
        p
    }

    /// `exp(Σ κ log(x - y + sħ))`.
    pub fn from_contraction(cv: &ContractionValue, x: Var, y: Var) -> Self {
        let mut p = Self::one();
        for (k, s) in cv.terms() {
            p.insert(x, y, s.clone(), k.clone());
        }
        p
    }

    /// Multiplies by `(x - y + shift·ħ)^exponent`.
    pub fn insert(&mut self, x: Var, y: Var, shift: ShiftScalar, exponent: KPoly) {
        if exponent.is_zero() {
            return;
        }
        let key = if x < y {
            LinearFactor { x, y, shift }
        } else {
            // (y' - x' + s) with y' > x': rewrite as -(x' - y' - s)
            self.sign = (&self.sign + &exponent).reduce_parity();
            LinearFactor { x: y, y: x, shift: -&shift }
        };
        let e = self.factors.entry(key.clone()).or_default();
        *e = &*e + &exponent;
        if e.is_zero() {
            self.factors.remove(&key);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (f, e) in &other.factors {
            out.insert(f.x, f.y, f.shift.clone(), e.clone());
        }
        out.sign = (&out.sign + &other.sign).reduce_parity();
        out
    }

    pub fn inv(&self) -> Self {
        Self {
            factors: self.factors.iter().map(|(f, e)| (f.clone(), -e)).collect(),
            sign: (-&self.sign).reduce_parity(),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, n: i64) -> Self {
        let c = KPoly::constant(Q::from_integer(n.into()));
        Self {
            factors: self
                .factors
                .iter()
                .filter(|_| n != 0)
                .map(|(f, e)| (f.clone(), e * &c))
                .collect(),
            sign: (&self.sign * &c).reduce_parity(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.sign.is_zero()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&LinearFactor, &KPoly)> {
        self.factors.iter()
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn sign_exponent(&self) -> &KPoly {
        &self.sign
    }

    /// Errors unless every exponent is a `k`-independent integer.
    pub fn require_integral(&self) -> Result<()> {
        for (f, e) in &self.factors {
            if e.as_integer().is_none() {
                return Err(Error::NonIntegralExponent {
                    factor: f.to_string(),
                    exponent: e.to_string(),
                });
            }
        }
        if !self.sign.is_zero() && self.sign.as_integer().is_none() {
            return Err(Error::NonIntegralExponent {
                factor: "(-1)".into(),
                exponent: self.sign.to_string(),
            });
        }
        Ok(())
    }

    /// Specializes `k`: each factor becomes `x - y + c` with `c = shift(k)·ħ`.
    /// Factors that coincide after specialization are merged.
    pub fn specialize(&self, k: &Q, hbar: &Q) -> Result<SpecializedProduct> {
        self.require_integral()?;
        let mut factors: BTreeMap<(Var, Var, Q), i64> = BTreeMap::new();
        for (f, e) in &self.factors {
            let c = f.shift.eval(k) * hbar;
            let e = e.as_integer().expect("checked integral");
            *factors.entry((f.x, f.y, c)).or_default() += e;
        }
        factors.retain(|_, e| *e != 0);
        let negative = self.sign.as_integer().map_or(false, |s| s.rem_euclid(2) == 1);
        Ok(SpecializedProduct { factors, negative })
    }
}

impl fmt::Display for LinearFactorProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        if !self.sign.is_zero() {
            parts.push(format!("(-1)^[{}]", self.sign));
        }
        for (lf, e) in &self.factors {
            match e.as_const() {
                Some(c) if c.is_one() => parts.push(lf.to_string()),
                Some(c) => parts.push(format!("{lf}^{}", fmt_q(&c))),
                None => parts.push(format!("{lf}^[{e}]")),
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// A factor product with `k` and `ħ` specialized to numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializedProduct {
    /// `(x, y, c) -> e` meaning `(x - y + c)^e`.
    pub factors: BTreeMap<(Var, Var, Q), i64>,
    pub negative: bool,
}

impl SpecializedProduct {
    /// Splits into `(numerator, denominator)` polynomial factor lists, with the
    /// overall sign folded into the numerator's scalar.
    pub fn split(&self) -> (Vec<(Var, Var, Q, u32)>, Vec<(Var, Var, Q, u32)>, Q) {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for ((x, y, c), e) in &self.factors {
            if *e > 0 {
                num.push((*x, *y, c.clone(), *e as u32));
            } else {
                den.push((*x, *y, c.clone(), (-*e) as u32));
            }
        }
        let s = if self.negative { -Q::one() } else { Q::one() };
        (num, den, s)
    }
}

/// Exchange function `R` with `:e^F(x): :e^G(y): = R(x, y) :e^G(y): :e^F(x):`,
/// `R = exp(⟨F(x) G(y)⟩ - ⟨G(y) F(x)⟩)`.
pub fn exchange_factor(alg: &AlgebraData, f: &FieldCombo, x: Var, g: &FieldCombo, y: Var) -> Result<LinearFactorProduct> {
    let fg = contract_combos(alg, f, x, g, y)?;
    let gf = contract_combos(alg, g, y, f, x)?;
    let forward = LinearFactorProduct::from_contraction(&fg, x, y);
    let backward = LinearFactorProduct::from_contraction(&gf, y, x);
    Ok(forward.div(&backward))
}

/// Natural-order function: `:e^F(x): :e^G(y): = exp(⟨F(x) G(y)⟩) :e^{F+G}:`.
pub fn ordering_factor(alg: &AlgebraData, f: &FieldCombo, x: Var, g: &FieldCombo, y: Var) -> Result<LinearFactorProduct> {
    Ok(LinearFactorProduct::from_contraction(&contract_combos(alg, f, x, g, y)?, x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boson::{bc_full, hatted_a, hatted_bc, AVariant, BosonSymbol, FieldPart, Sign};
    use crate::scalar::{q, qi};
    use proptest::prelude::*;

    const U: Var = Var::U;
    const V: Var = Var::V;

    fn alg(n: usize) -> AlgebraData {
        AlgebraData::new(n).unwrap()
    }

    fn s(c: Q) -> ShiftScalar {
        ShiftScalar::constant(c)
    }

    #[test]
    fn contraction_of_a_atoms() {
        let d = alg(2);
        let b = ShiftScalar::ratio(1, 3, 0, 1);
        let c = ShiftScalar::ratio(-1, 2, 1, 1);
        let f = FieldAtom::new(
            BosonSymbol::A(1),
            FieldPart::Full {
                minus: ShiftScalar::zero(),
                plus: b.clone(),
            },
        );
        let g = FieldAtom::new(
            BosonSymbol::A(1),
            FieldPart::Full {
                minus: c.clone(),
                plus: ShiftScalar::zero(),
            },
        );
        let cv = contract_atoms(&d, &f, U, &g, V).unwrap();
        let terms: Vec<_> = cv.terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, &KPoly::t());
        assert_eq!(terms[0].1, &(&b - &c));
    }

    #[test]
    fn contraction_vanishing_cases() {
        let d = alg(2);
        let b = FieldAtom::new(BosonSymbol::B(1, 2), FieldPart::PlusHalf(ShiftScalar::zero()));
        let c = FieldAtom::new(BosonSymbol::C(1, 2), FieldPart::MinusHalf(ShiftScalar::zero()));
        assert!(contract_atoms(&d, &b, U, &c, V).unwrap().is_zero());
        let b2 = FieldAtom::new(BosonSymbol::B(1, 2), FieldPart::PlusHalf(ShiftScalar::zero()));
        assert!(contract_atoms(&d, &b, U, &b2, V).unwrap().is_zero());
        assert_eq!(contract_atoms(&d, &b, U, &b2, U), Err(Error::SameVariable));
    }

    #[test]
    fn aapn_closed_form_sl2() {
        let d = alg(2);
        let p = hatted_a(&d, 1, Sign::Plus, AVariant::Standard).unwrap();
        let m = hatted_a(&d, 1, Sign::Minus, AVariant::Standard).unwrap();
        let r = exchange_factor(&d, &p, U, &m, V).unwrap();
        let mut want = LinearFactorProduct::one();
        want.insert(U, V, s(qi(-1)), KPoly::one());
        want.insert(U, V, ShiftScalar::ratio(3, 1, 1, 1), KPoly::one());
        want.insert(U, V, s(qi(1)), KPoly::constant(qi(-1)));
        want.insert(U, V, ShiftScalar::ratio(1, 1, 1, 1), KPoly::constant(qi(-1)));
        assert_eq!(r, want);
    }

    #[test]
    fn bhat_plus_minus_exchange() {
        let d = alg(3);
        let p = hatted_bc(BosonSymbol::B(1, 2), Sign::Plus).unwrap();
        let m = hatted_bc(BosonSymbol::B(1, 2), Sign::Minus).unwrap();
        let r = exchange_factor(&d, &p, U, &m, V).unwrap();
        let mut want = LinearFactorProduct::one();
        want.insert(U, V, ShiftScalar::zero(), KPoly::constant(qi(2)));
        want.insert(U, V, s(qi(-1)), KPoly::constant(qi(-1)));
        want.insert(U, V, s(qi(1)), KPoly::constant(qi(-1)));
        assert_eq!(r, want);
        let other = hatted_bc(BosonSymbol::B(1, 3), Sign::Minus).unwrap();
        assert!(exchange_factor(&d, &p, U, &other, V).unwrap().is_one());
    }

    #[test]
    fn bc_full_self_contraction_cancels() {
        let d = alg(2);
        let bc = bc_full(&d, 1, 2).unwrap();
        assert!(contract_combos(&d, &bc, U, &bc, V).unwrap().is_zero());
    }

    #[test]
    fn orientation_flip_tracks_sign() {
        let mut p = LinearFactorProduct::one();
        p.insert(V, U, s(q(1, 2)), KPoly::one());
        let mut want = LinearFactorProduct::one();
        want.insert(U, V, s(q(-1, 2)), KPoly::one());
        assert_ne!(p, want);
        assert_eq!(p.sign_exponent(), &KPoly::one());
        let mut sq = p.clone();
        sq = sq.mul(&p);
        let mut want2 = LinearFactorProduct::one();
        want2.insert(U, V, s(q(-1, 2)), KPoly::constant(qi(2)));
        assert_eq!(sq, want2);
    }

    #[test]
    fn non_integral_exponent_is_reported() {
        let mut p = LinearFactorProduct::one();
        p.insert(U, V, ShiftScalar::zero(), KPoly::constant(q(1, 2)));
        assert!(matches!(p.require_integral(), Err(Error::NonIntegralExponent { .. })));
        let mut t = LinearFactorProduct::one();
        t.insert(U, V, ShiftScalar::zero(), KPoly::t());
        assert!(t.require_integral().is_err());
    }

    fn arb_combo() -> impl Strategy<Value = FieldCombo> {
        proptest::collection::vec((0usize..5, -2i64..3, -2i64..3, 0usize..3, -3i64..4), 0..5).prop_map(|atoms| {
            let mut c = FieldCombo::new();
            for (sym, a, b, part, coef) in atoms {
                let sym = [
                    BosonSymbol::A(1),
                    BosonSymbol::A(2),
                    BosonSymbol::B(1, 2),
                    BosonSymbol::C(1, 3),
                    BosonSymbol::B(2, 3),
                ][sym];
                let (a, b) = (ShiftScalar::constant(q(a, 2)), ShiftScalar::ratio(b, 2, 1, 4));
                let part = match part {
                    0 => FieldPart::MinusHalf(a),
                    1 => FieldPart::PlusHalf(b),
                    _ => FieldPart::Full { minus: a, plus: b },
                };
                c.add_atom(FieldAtom::new(sym, part), KPoly::constant(qi(coef)));
            }
            c
        })
    }

    proptest! {
        #[test]
        fn exchange_is_antisymmetric(f in arb_combo(), g in arb_combo()) {
            let d = alg(3);
            let r1 = exchange_factor(&d, &f, U, &g, V).unwrap();
            let r2 = exchange_factor(&d, &g, V, &f, U).unwrap();
            prop_assert!(r1.mul(&r2).is_one());
        }

        #[test]
        fn contraction_is_bilinear(f in arb_combo(), g in arb_combo(), c in -4i64..5) {
            let d = alg(3);
            let c = KPoly::constant(qi(c));
            let base = contract_combos(&d, &f, U, &g, V).unwrap();
            let scaled = contract_combos(&d, &f.scale(&c), U, &g, V).unwrap();
            prop_assert_eq!(scaled, base.scale(&c));
        }
    }
}
