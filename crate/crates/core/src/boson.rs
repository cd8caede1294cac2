//! Heisenberg generators, shifted half/full fields and their linear
//! combinations, normal-ordered vertex terms and currents.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_traits::One;
use serde::Serialize;

use crate::cartan::AlgebraData;
use crate::error::{Error, Result};
use crate::scalar::{fmt_q, pow_q, q, KPoly, ShiftScalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BosonKind {
    A,
    B,
    C,
}

/// One of the `N^2 - 1` Heisenberg families: `a^i`, `b^{ij}`, `c^{ij}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BosonSymbol {
    A(usize),
    B(usize, usize),
    C(usize, usize),
}

impl BosonSymbol {
    pub fn a(alg: &AlgebraData, i: usize) -> Result<Self> {
        alg.check_a_index(i)?;
        Ok(Self::A(i))
    }

    pub fn b(alg: &AlgebraData, i: usize, j: usize) -> Result<Self> {
        alg.check_pair(i, j)?;
        Ok(Self::B(i, j))
    }

    pub fn c(alg: &AlgebraData, i: usize, j: usize) -> Result<Self> {
        alg.check_pair(i, j)?;
        Ok(Self::C(i, j))
    }

    pub fn kind(&self) -> BosonKind {
        match self {
            Self::A(_) => BosonKind::A,
            Self::B(..) => BosonKind::B,
            Self::C(..) => BosonKind::C,
        }
    }

    /// Every symbol of the algebra in canonical order.
    pub fn all(alg: &AlgebraData) -> Vec<Self> {
        let mut out: Vec<Self> = (1..alg.n).map(Self::A).collect();
        for i in 1..=alg.n {
            for j in i + 1..=alg.n {
                out.push(Self::B(i, j));
            }
        }
        for i in 1..=alg.n {
            for j in i + 1..=alg.n {
                out.push(Self::C(i, j));
            }
        }
        out
    }
}

impl fmt::Display for BosonSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::A(i) => write!(f, "a({i})"),
            Self::B(i, j) => write!(f, "b({i},{j})"),
            Self::C(i, j) => write!(f, "c({i},{j})"),
        }
    }
}

/// Structure constant `κ` with `[X_n, Y_m] = κ n δ_{n+m,0}` and `[p_X, q_Y] = κ`.
pub fn pairing(alg: &AlgebraData, x: BosonSymbol, y: BosonSymbol) -> KPoly {
    use BosonSymbol::*;
    match (x, y) {
        (A(i), A(j)) => KPoly::monomial(1, alg.b_entry(i, j).clone()),
        (B(i, j), B(k, l)) if (i, j) == (k, l) => KPoly::constant(-Q::one()),
        (C(i, j), C(k, l)) if (i, j) == (k, l) => KPoly::one(),
        _ => KPoly::zero(),
    }
}

/// `[X_n, Y_m]` for nonzero mode numbers.
pub fn mode_commutator(alg: &AlgebraData, x: BosonSymbol, n: i64, y: BosonSymbol, m: i64) -> KPoly {
    if n + m != 0 {
        return KPoly::zero();
    }
    pairing(alg, x, y).scale(&Q::from_integer(n.into()))
}

/// `[p_X, q_Y]`.
pub fn zero_mode_pairing(alg: &AlgebraData, x: BosonSymbol, y: BosonSymbol) -> KPoly {
    pairing(alg, x, y)
}

/// Which half of `X(u; A, B)` an atom carries. Shifts multiply ħ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FieldPart {
    /// `X_-(u; A)`: creation modes and `q_X`.
    MinusHalf(ShiftScalar),
    /// `X_+(u; B)`: annihilation modes and `log(u + Bħ) p_X`.
    PlusHalf(ShiftScalar),
    /// `X(u; A, B)`.
    Full { minus: ShiftScalar, plus: ShiftScalar },
}

impl FieldPart {
    pub fn plus_shift(&self) -> Option<&ShiftScalar> {
        match self {
            Self::PlusHalf(b) | Self::Full { plus: b, .. } => Some(b),
            Self::MinusHalf(_) => None,
        }
    }

    pub fn minus_shift(&self) -> Option<&ShiftScalar> {
        match self {
            Self::MinusHalf(a) | Self::Full { minus: a, .. } => Some(a),
            Self::PlusHalf(_) => None,
        }
    }

    /// The same part evaluated at `u + sħ`.
    pub fn shifted(&self, s: &ShiftScalar) -> Self {
        match self {
            Self::MinusHalf(a) => Self::MinusHalf(a + s),
            Self::PlusHalf(b) => Self::PlusHalf(b + s),
            Self::Full { minus, plus } => Self::Full {
                minus: minus + s,
                plus: plus + s,
            },
        }
    }
}

impl fmt::Display for FieldPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MinusHalf(a) => write!(f, "minus({a})"),
            Self::PlusHalf(b) => write!(f, "plus({b})"),
            Self::Full { minus, plus } => write!(f, "full({minus},{plus})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FieldAtom {
    pub symbol: BosonSymbol,
    pub part: FieldPart,
}

impl FieldAtom {
    pub fn new(symbol: BosonSymbol, part: FieldPart) -> Self {
        Self { symbol, part }
    }
}

/// Linear combination of field atoms with coefficients in `Q[k, 1/(k+g)]`.
///
/// Atoms are kept in a `BTreeMap`, so the representation is canonical:
/// equal combinations compare equal regardless of construction order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldCombo {
    terms: BTreeMap<FieldAtom, KPoly>,
}

impl FieldCombo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(atom: FieldAtom, coef: KPoly) -> Self {
        let mut c = Self::new();
        c.add_atom(atom, coef);
        c
    }

    pub fn add_atom(&mut self, atom: FieldAtom, coef: KPoly) {
        let e = self.terms.entry(atom.clone()).or_default();
        *e = &*e + &coef;
        if e.is_zero() {
            self.terms.remove(&atom);
        }
    }

    pub fn add(&self, other: &FieldCombo) -> FieldCombo {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_atom(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &FieldCombo) -> FieldCombo {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldCombo {
        self.scale(&KPoly::constant(-Q::one()))
    }

    pub fn scale(&self, c: &KPoly) -> FieldCombo {
        let mut out = FieldCombo::new();
        for (a, v) in &self.terms {
            out.add_atom(a.clone(), v * c);
        }
        out
    }

    /// Substitutes `u -> u + sħ` in every atom.
    pub fn shifted(&self, s: &ShiftScalar) -> FieldCombo {
        let mut out = FieldCombo::new();
        for (a, v) in &self.terms {
            out.add_atom(FieldAtom::new(a.symbol, a.part.shifted(s)), v.clone());
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FieldAtom, &KPoly)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, atom: &FieldAtom) -> KPoly {
        self.terms.get(atom).cloned().unwrap_or_default()
    }

    /// `(symbol, shift B, coefficient)` for every annihilation half present.
    pub fn plus_parts(&self) -> impl Iterator<Item = (BosonSymbol, &ShiftScalar, &KPoly)> {
        self.terms
            .iter()
            .filter_map(|(a, c)| a.part.plus_shift().map(|s| (a.symbol, s, c)))
    }

    /// `(symbol, shift A, coefficient)` for every creation half present.
    pub fn minus_parts(&self) -> impl Iterator<Item = (BosonSymbol, &ShiftScalar, &KPoly)> {
        self.terms
            .iter()
            .filter_map(|(a, c)| a.part.minus_shift().map(|s| (a.symbol, s, c)))
    }

    /// Net coefficient of `q_X` per symbol; nonzero entries shift momentum sectors.
    pub fn q_content(&self) -> BTreeMap<BosonSymbol, KPoly> {
        net(self.minus_parts())
    }

    /// Net coefficient of `p_X` per symbol.
    pub fn p_content(&self) -> BTreeMap<BosonSymbol, KPoly> {
        net(self.plus_parts())
    }

    /// True if every atom is on an `a`-boson.
    pub fn only_a_fields(&self) -> bool {
        self.terms.keys().all(|a| a.symbol.kind() == BosonKind::A)
    }

    /// One line per atom: `symbol part coefficient`.
    pub fn dump(&self, g: i64) -> String {
        let mut s = String::new();
        for (a, c) in &self.terms {
            let _ = writeln!(s, "{} {} {}", a.symbol, a.part, c.display_with(g));
        }
        s
    }
}

fn net<'a>(it: impl Iterator<Item = (BosonSymbol, &'a ShiftScalar, &'a KPoly)>) -> BTreeMap<BosonSymbol, KPoly> {
    let mut out: BTreeMap<BosonSymbol, KPoly> = BTreeMap::new();
    for (s, _, c) in it {
        let e = out.entry(s).or_default();
        *e = &*e + c;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Choice of bosonization for the hatted `a`-fields. Both choices produce
/// the same exchange relation between `exp(â_+)` and `exp(â_-)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Default)]
pub enum AVariant {
    #[default]
    Standard,
    Alternate,
}

/// `X̂_±(u) = ∓(X_±(u; -1/2) - X_±(u; 1/2))` for `X = b^{ij}, c^{ij}`.
pub fn hatted_bc(symbol: BosonSymbol, sign: Sign) -> Result<FieldCombo> {
    if symbol.kind() == BosonKind::A {
        return Err(Error::WrongKind(format!("hatted b/c field requested for {symbol}")));
    }
    let half = q(1, 2);
    let part = |s: Q| match sign {
        Sign::Plus => FieldPart::PlusHalf(ShiftScalar::constant(s)),
        Sign::Minus => FieldPart::MinusHalf(ShiftScalar::constant(s)),
    };
    let mp = Q::from_integer((-sign.value()).into());
    let mut c = FieldCombo::new();
    c.add_atom(FieldAtom::new(symbol, part(-half.clone())), KPoly::constant(mp.clone()));
    c.add_atom(FieldAtom::new(symbol, part(half)), KPoly::constant(-mp));
    Ok(c)
}

/// `â^i_±(u)` in either bosonization.
///
/// The standard minus half and the alternate plus half pair the free index
/// `i` with the summed index `l` in the shift `B_{il}`; this is the only
/// index placement for which `exp(â_+) exp(â_-)` reproduces the stated
/// four-factor exchange function.
pub fn hatted_a(alg: &AlgebraData, i: usize, sign: Sign, variant: AVariant) -> Result<FieldCombo> {
    alg.check_a_index(i)?;
    let g = alg.g;
    let level = ShiftScalar::level_shift(g);
    let half_level = level.scale(&q(1, 2));
    let tinv = KPoly::monomial(-1, Q::one());
    let r = alg.rank();
    let mut c = FieldCombo::new();
    match (variant, sign) {
        (AVariant::Standard, Sign::Plus) => {
            c.add_atom(FieldAtom::new(BosonSymbol::A(i), FieldPart::PlusHalf(ShiftScalar::zero())), KPoly::one());
            c.add_atom(FieldAtom::new(BosonSymbol::A(i), FieldPart::PlusHalf(level)), KPoly::constant(-Q::one()));
        }
        (AVariant::Standard, Sign::Minus) => {
            for j in 1..=r {
                for l in 1..=r {
                    let w = tinv.scale(alg.binv_entry(j, l));
                    if w.is_zero() {
                        continue;
                    }
                    let s = ShiftScalar::constant(alg.b_entry(i, l).clone());
                    c.add_atom(FieldAtom::new(BosonSymbol::A(j), FieldPart::MinusHalf(s.clone())), w.clone());
                    c.add_atom(FieldAtom::new(BosonSymbol::A(j), FieldPart::MinusHalf(-&s)), -&w);
                }
            }
        }
        (AVariant::Alternate, Sign::Plus) => {
            for j in 1..=r {
                for l in 1..=r {
                    let w = tinv.scale(alg.binv_entry(l, j));
                    if w.is_zero() {
                        continue;
                    }
                    let s = ShiftScalar::constant(alg.b_entry(i, l).clone());
                    c.add_atom(FieldAtom::new(BosonSymbol::A(j), FieldPart::PlusHalf(&half_level - &s)), w.clone());
                    c.add_atom(FieldAtom::new(BosonSymbol::A(j), FieldPart::PlusHalf(&half_level + &s)), -&w);
                }
            }
        }
        (AVariant::Alternate, Sign::Minus) => {
            c.add_atom(FieldAtom::new(BosonSymbol::A(i), FieldPart::MinusHalf(half_level.clone())), KPoly::one());
            c.add_atom(
                FieldAtom::new(BosonSymbol::A(i), FieldPart::MinusHalf(-&half_level)),
                KPoly::constant(-Q::one()),
            );
        }
    }
    Ok(c)
}

/// `(b + c)^{ij}(u) = b^{ij}(u; 0, 0) + c^{ij}(u; 0, 0)`.
pub fn bc_full(alg: &AlgebraData, i: usize, j: usize) -> Result<FieldCombo> {
    alg.check_pair(i, j)?;
    let part = FieldPart::Full {
        minus: ShiftScalar::zero(),
        plus: ShiftScalar::zero(),
    };
    let mut c = FieldCombo::new();
    c.add_atom(FieldAtom::new(BosonSymbol::B(i, j), part.clone()), KPoly::one());
    c.add_atom(FieldAtom::new(BosonSymbol::C(i, j), part), KPoly::one());
    Ok(c)
}

/// `(b + c)^{ij}` with the convention `b^{ii} = c^{ii} = 0`.
pub fn bc_full_or_zero(alg: &AlgebraData, i: usize, j: usize) -> Result<FieldCombo> {
    if i == j {
        Ok(FieldCombo::new())
    } else {
        bc_full(alg, i, j)
    }
}

/// Scalar prefactor `coef · ħ^hbar_power`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Prefactor {
    pub coef: Q,
    pub hbar_power: i32,
}

impl Prefactor {
    pub fn one() -> Self {
        Self {
            coef: Q::one(),
            hbar_power: 0,
        }
    }

    pub fn over_hbar(coef: Q) -> Self {
        Self { coef, hbar_power: -1 }
    }

    pub fn eval(&self, hbar: &Q) -> Q {
        &self.coef * pow_q(hbar, self.hbar_power)
    }
}

impl fmt::Display for Prefactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hbar_power {
            0 => write!(f, "{}", fmt_q(&self.coef)),
            p => write!(f, "{} hbar^{}", fmt_q(&self.coef), p),
        }
    }
}

/// `prefactor · :exp(combo):`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexTerm {
    pub prefactor: Prefactor,
    pub combo: FieldCombo,
}

impl VertexTerm {
    pub fn new(prefactor: Prefactor, combo: FieldCombo) -> Self {
        Self { prefactor, combo }
    }

    pub fn shifted(&self, s: &ShiftScalar) -> Self {
        Self::new(self.prefactor.clone(), self.combo.shifted(s))
    }
}

/// Finite sum of vertex terms, stored in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CurrentExpr {
    terms: Vec<VertexTerm>,
}

impl CurrentExpr {
    pub fn new(mut terms: Vec<VertexTerm>) -> Self {
        terms.sort();
        Self { terms }
    }

    pub fn terms(&self) -> &[VertexTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn shifted(&self, s: &ShiftScalar) -> Self {
        Self::new(self.terms.iter().map(|t| t.shifted(s)).collect())
    }

    /// Text dump used by golden files: a `term` header per vertex term
    /// followed by one indented line per atom.
    pub fn dump(&self, g: i64) -> String {
        let mut s = String::new();
        for t in &self.terms {
            let _ = writeln!(s, "term {}", t.prefactor);
            for line in t.combo.dump(g).lines() {
                let _ = writeln!(s, "  {line}");
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;
    use proptest::prelude::*;

    fn alg(n: usize) -> AlgebraData {
        AlgebraData::new(n).unwrap()
    }

    #[test]
    fn commutator_table() {
        let d = alg(2);
        let a1 = BosonSymbol::A(1);
        let b12 = BosonSymbol::B(1, 2);
        let v = mode_commutator(&d, a1, 2, a1, -2);
        assert_eq!(v.eval(&qi(0), 2).unwrap(), qi(4)); // 2(k+2) at k=0
        assert_eq!(v, KPoly::monomial(1, qi(2)));
        assert_eq!(mode_commutator(&d, b12, 3, b12, -3), KPoly::constant(qi(-3)));
        assert!(mode_commutator(&d, a1, 2, b12, -2).is_zero());
        assert!(mode_commutator(&d, a1, 2, a1, -3).is_zero());
    }

    #[test]
    fn zero_mode_table() {
        let d = alg(3);
        assert_eq!(
            zero_mode_pairing(&d, BosonSymbol::A(1), BosonSymbol::A(2)),
            KPoly::monomial(1, q(-1, 2))
        );
        assert!(zero_mode_pairing(&d, BosonSymbol::C(1, 3), BosonSymbol::C(1, 3)).is_one());
        assert!(zero_mode_pairing(&d, BosonSymbol::B(1, 2), BosonSymbol::C(1, 2)).is_zero());
        assert_eq!(
            zero_mode_pairing(&d, BosonSymbol::B(2, 3), BosonSymbol::B(2, 3)),
            KPoly::constant(qi(-1))
        );
    }

    #[test]
    fn symbol_ranges() {
        let d = alg(3);
        assert!(BosonSymbol::b(&d, 1, 3).is_ok());
        assert!(BosonSymbol::b(&d, 2, 2).is_err());
        assert!(BosonSymbol::c(&d, 3, 4).is_err());
        assert!(BosonSymbol::a(&d, 3).is_err());
        assert_eq!(BosonSymbol::all(&d).len(), 8);
    }

    #[test]
    fn hatted_b_plus_and_c_minus() {
        let b = hatted_bc(BosonSymbol::B(1, 2), Sign::Plus).unwrap();
        let plus = |s: Q| FieldAtom::new(BosonSymbol::B(1, 2), FieldPart::PlusHalf(ShiftScalar::constant(s)));
        assert_eq!(b.coefficient(&plus(q(-1, 2))), KPoly::constant(qi(-1)));
        assert_eq!(b.coefficient(&plus(q(1, 2))), KPoly::one());
        assert_eq!(b.len(), 2);

        let c = hatted_bc(BosonSymbol::C(1, 2), Sign::Minus).unwrap();
        let minus = |s: Q| FieldAtom::new(BosonSymbol::C(1, 2), FieldPart::MinusHalf(ShiftScalar::constant(s)));
        assert_eq!(c.coefficient(&minus(q(-1, 2))), KPoly::one());
        assert_eq!(c.coefficient(&minus(q(1, 2))), KPoly::constant(qi(-1)));

        let bm = hatted_bc(BosonSymbol::B(1, 2), Sign::Minus).unwrap();
        assert!(bm.q_content().is_empty());
        assert!(hatted_bc(BosonSymbol::A(1), Sign::Plus).is_err());
    }

    #[test]
    fn hatted_a_sl2() {
        let d = alg(2);
        let p = hatted_a(&d, 1, Sign::Plus, AVariant::Standard).unwrap();
        let a1 = BosonSymbol::A(1);
        assert_eq!(p.coefficient(&FieldAtom::new(a1, FieldPart::PlusHalf(ShiftScalar::zero()))), KPoly::one());
        assert_eq!(
            p.coefficient(&FieldAtom::new(a1, FieldPart::PlusHalf(ShiftScalar::level_shift(2)))),
            KPoly::constant(qi(-1))
        );
        let m = hatted_a(&d, 1, Sign::Minus, AVariant::Standard).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(
            m.coefficient(&FieldAtom::new(a1, FieldPart::MinusHalf(ShiftScalar::constant(qi(1))))),
            KPoly::monomial(-1, qi(1))
        );
        assert_eq!(
            m.coefficient(&FieldAtom::new(a1, FieldPart::MinusHalf(ShiftScalar::constant(qi(-1))))),
            KPoly::monomial(-1, qi(-1))
        );
    }

    #[test]
    fn hatted_a_sl3_minus_touches_both_a_fields() {
        let d = alg(3);
        let m = hatted_a(&d, 1, Sign::Minus, AVariant::Standard).unwrap();
        let syms: Vec<_> = m.iter().map(|(a, _)| a.symbol).collect();
        assert!(syms.contains(&BosonSymbol::A(1)));
        assert!(syms.contains(&BosonSymbol::A(2)));
        // shifts ±B_11 = ±1 and ±B_12 = ∓1/2 on both a-fields
        assert_eq!(m.len(), 8);
        assert!(hatted_a(&d, 3, Sign::Plus, AVariant::Standard).is_err());
    }

    #[test]
    fn hatted_fields_are_momentum_neutral() {
        for n in 2..=4 {
            let d = alg(n);
            for i in 1..n {
                for v in [AVariant::Standard, AVariant::Alternate] {
                    for s in [Sign::Plus, Sign::Minus] {
                        let c = hatted_a(&d, i, s, v).unwrap();
                        assert!(c.q_content().is_empty() && c.p_content().is_empty());
                    }
                }
            }
            for sym in BosonSymbol::all(&d).into_iter().filter(|s| s.kind() != BosonKind::A) {
                for s in [Sign::Plus, Sign::Minus] {
                    let c = hatted_bc(sym, s).unwrap();
                    assert!(c.q_content().is_empty() && c.p_content().is_empty());
                }
            }
        }
    }

    #[test]
    fn bc_full_atoms() {
        let d = alg(2);
        let c = bc_full(&d, 1, 2).unwrap();
        assert_eq!(c.len(), 2);
        let full = FieldPart::Full {
            minus: ShiftScalar::zero(),
            plus: ShiftScalar::zero(),
        };
        assert!(c.coefficient(&FieldAtom::new(BosonSymbol::B(1, 2), full.clone())).is_one());
        assert!(c.coefficient(&FieldAtom::new(BosonSymbol::C(1, 2), full)).is_one());
        assert!(bc_full(&d, 2, 2).is_err());
        assert!(bc_full_or_zero(&d, 2, 2).unwrap().is_empty());
    }

    fn arb_atom() -> impl Strategy<Value = (FieldAtom, i64)> {
        (0usize..3, -3i64..4, 0usize..3, -5i64..6).prop_map(|(kind, shift, part, coef)| {
            let sym = match kind {
                0 => BosonSymbol::A(1),
                1 => BosonSymbol::B(1, 2),
                _ => BosonSymbol::C(1, 2),
            };
            let s = ShiftScalar::constant(q(shift, 2));
            let part = match part {
                0 => FieldPart::MinusHalf(s),
                1 => FieldPart::PlusHalf(s),
                _ => FieldPart::Full {
                    minus: s.clone(),
                    plus: s,
                },
            };
            (FieldAtom::new(sym, part), coef)
        })
    }

    proptest! {
        #[test]
        fn canonical_form_ignores_insertion_order(atoms in proptest::collection::vec(arb_atom(), 0..8)) {
            let mut fwd = FieldCombo::new();
            for (a, c) in &atoms {
                fwd.add_atom(a.clone(), KPoly::constant(qi(*c)));
            }
            let mut rev = FieldCombo::new();
            for (a, c) in atoms.iter().rev() {
                rev.add_atom(a.clone(), KPoly::constant(qi(*c)));
            }
            prop_assert_eq!(&fwd, &rev);
            prop_assert!(fwd.sub(&rev).is_empty());
            prop_assert!(fwd.iter().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn commutator_antisymmetry(n in 1i64..6, kind in 0usize..3) {
            let d = AlgebraData::new(3).unwrap();
            let x = [BosonSymbol::A(1), BosonSymbol::B(1, 3), BosonSymbol::C(2, 3)][kind];
            let y = [BosonSymbol::A(2), BosonSymbol::B(1, 3), BosonSymbol::C(2, 3)][kind];
            let lhs = mode_commutator(&d, x, n, y, -n);
            let rhs = mode_commutator(&d, y, -n, x, n);
            prop_assert_eq!(lhs, -&rhs);
        }
    }
}
