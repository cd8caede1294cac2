//! Relation checks on Fock-space matrix elements.
//!
//! Each side of a relation is evaluated in the region of its own operator
//! order, multiplied by its polynomial factor, and the two are subtracted.
//! A relation holds on a sample when that difference vanishes on every
//! certified cell. For the `E⁺E⁻` commutator the difference is compared with
//! formal deltas times `H` matrix elements.

use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::boson::{CurrentExpr, Sign, VertexTerm};
use crate::currents::{build_e, build_h, BuildOptions};
use crate::error::{Error, Result};
use crate::exchange::{exchange_factor, LinearFactorProduct};
use crate::fock::{FockSpace, FockState, MatrixElements, Monomial, OracleConfig};
use crate::relation::{center_shift, required_ee, required_he, required_hh, RelationId};
use crate::scalar::{fmt_q, Q};
use crate::series::{delta_times, Certificate, GenSeries, Laurent};
use crate::var::Var;

/// Outcome of one relation instance over the whole state sample.
#[derive(Clone, Debug, Serialize)]
pub struct OracleOutcome {
    pub relation: RelationId,
    pub label: String,
    pub indices: Vec<usize>,
    pub passed: bool,
    /// Largest-magnitude certified residual coefficient, as `p/q`.
    pub residual: String,
    /// Certified cells compared, summed over bra/ket pairs.
    pub cells: usize,
    /// Certified cells where the left side itself is nonzero.
    pub support: usize,
    pub kets: usize,
    pub millis: u128,
    pub first_failure: Option<String>,
}

/// Which kets and bras to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Sample {
    /// The full state sample.
    #[default]
    Full,
    /// Generic-sector vacuum only.
    Vacuum,
}

/// Oracle bound to a Fock space and a current construction.
pub struct Oracle {
    space: FockSpace,
    opts: BuildOptions,
    sample: Sample,
}

struct Tally {
    residual: Q,
    cells: usize,
    support: usize,
    kets: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            residual: Q::zero(),
            cells: 0,
            support: 0,
            kets: 0,
            failure: None,
        }
    }

    fn record(&mut self, diff: &GenSeries, cert: &Certificate, lhs: Option<&GenSeries>, context: impl FnOnce() -> String) {
        let (r, n) = diff.residual(cert);
        self.cells += n;
        if let Some(l) = lhs {
            self.support += l.certified_cells(cert).filter(|(_, x)| !x.is_zero()).count();
        }
        if !r.is_zero() && self.failure.is_none() {
            self.failure = Some(context());
        }
        if r.abs() > self.residual.abs() {
            self.residual = r;
        }
    }

    fn finish(self, relation: RelationId, label: String, indices: Vec<usize>, start: Instant) -> OracleOutcome {
        OracleOutcome {
            relation,
            label,
            indices,
            passed: self.residual.is_zero() && self.cells > 0,
            residual: fmt_q(&self.residual),
            cells: self.cells,
            support: self.support,
            kets: self.kets,
            millis: start.elapsed().as_millis(),
            first_failure: self.failure,
        }
    }
}

/// Multiplies `s` by `Π (x - y + c)^p` and reports the degrees used.
fn apply_factors(s: &GenSeries, factors: &[(Var, Var, Q, u32)]) -> GenSeries {
    let mut out = s.clone();
    for (x, y, c, p) in factors {
        for _ in 0..*p {
            out = out.mul_linear(x.index(), Some(y.index()), c);
        }
    }
    out
}

fn factor_degrees(factors: &[(Var, Var, Q, u32)], nvars: usize) -> (Vec<i64>, i64) {
    let mut deg = vec![0i64; nvars];
    let mut total = 0i64;
    for (x, y, _, p) in factors {
        deg[x.index()] += *p as i64;
        deg[y.index()] += *p as i64;
        total += *p as i64;
    }
    (deg, total)
}

impl Oracle {
    pub fn new(cfg: OracleConfig, opts: BuildOptions) -> Result<Self> {
        Ok(Self {
            space: FockSpace::new(cfg)?,
            opts,
            sample: Sample::Full,
        })
    }

    pub fn with_sample(mut self, sample: Sample) -> Self {
        self.sample = sample;
        self
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    fn h(&self, i: usize, s: Sign) -> Result<CurrentExpr> {
        build_h(self.space.algebra(), i, s, self.opts)
    }

    fn e(&self, i: usize, s: Sign) -> Result<CurrentExpr> {
        build_e(self.space.algebra(), i, s, self.opts)
    }

    fn kets_and_bras(&self, currents: &[&CurrentExpr]) -> (Vec<FockState>, Vec<Monomial>) {
        let touched = self.space.touched(currents);
        match self.sample {
            Sample::Full => (self.space.state_sample(&touched), self.space.low_states(&touched)),
            Sample::Vacuum => (
                vec![FockState {
                    sector: self.space.generic_sector(),
                    mono: Monomial::vacuum(),
                }],
                vec![Monomial::vacuum()],
            ),
        }
    }

    /// `X(u) Y(v) = R(u,v) Y(v) X(u)` checked as `den·⟨XY⟩ − num·⟨YX⟩ = 0`.
    fn exchange_check(
        &self,
        x: &CurrentExpr,
        y: &CurrentExpr,
        r: &LinearFactorProduct,
        tally: &mut Tally,
    ) -> Result<()> {
        let cfg = self.space.config();
        let sp = r.specialize(&cfg.k, &cfg.hbar)?;
        let (num, den, sign) = sp.split();
        let (dn, tn) = factor_degrees(&num, 2);
        let (dd, td) = factor_degrees(&den, 2);
        let (kets, bras) = self.kets_and_bras(&[x, y]);
        for ket in &kets {
            let m1 = self.space.evaluate_word(&[(x, 0), (y, 1)], 2, ket, &bras)?;
            let m2 = self.space.evaluate_word(&[(y, 1), (x, 0)], 2, ket, &bras)?;
            tally.kets += 1;
            for key in keys(&m1, &m2) {
                let (a, ca) = entry_or_zero(&m1, &key, 2, cfg.window);
                let (b, cb) = entry_or_zero(&m2, &key, 2, cfg.window);
                let lhs = apply_factors(&a, &den);
                let rhs = apply_factors(&b, &num).scale(&sign);
                let cert = ca.after_polynomial(&dd, td).intersect(&cb.after_polynomial(&dn, tn));
                tally.record(&lhs.sub(&rhs), &cert, Some(&a), || {
                    format!("ket {} bra {}", self.space.describe(ket), self.space.describe(&key))
                });
            }
        }
        Ok(())
    }

    /// `[E⁺_i(u), E⁻_j(v)]` against `(1/ħ) δ_ij (δ(u₋−v₊)H⁺_i(v₊) − δ(u₊−v₋)H⁻_i(v₋))`.
    fn delta_check(&self, i: usize, j: usize, tally: &mut Tally) -> Result<()> {
        let cfg = self.space.config().clone();
        let (lo, hi) = cfg.window;
        let ep = self.e(i, Sign::Plus)?;
        let em = self.e(j, Sign::Minus)?;
        let hp = self.h(i, Sign::Plus)?.shifted(&center_shift(Sign::Plus));
        let hm = self.h(i, Sign::Minus)?.shifted(&center_shift(Sign::Minus));
        // H matrix elements are needed below the window for the delta products
        let wide = FockSpace::new(OracleConfig {
            window: (lo - (hi - lo) - 4, hi),
            ..cfg.clone()
        })?;
        let k4 = &cfg.k / Q::from_integer(2.into());
        let c_plus = &k4 * &cfg.hbar; // u - v - kħ/2
        let c_minus = -&c_plus; // u - v + kħ/2
        let inv_h = Q::one() / &cfg.hbar;
        let (kets, bras) = self.kets_and_bras(&[&ep, &em, &hp, &hm]);
        for ket in &kets {
            let m1 = self.space.evaluate_word(&[(&ep, 0), (&em, 1)], 2, ket, &bras)?;
            let m2 = self.space.evaluate_word(&[(&em, 1), (&ep, 0)], 2, ket, &bras)?;
            let (h1, h2) = if i == j {
                (
                    Some(wide.evaluate_word(&[(&hp, 1)], 2, ket, &bras)?),
                    Some(wide.evaluate_word(&[(&hm, 1)], 2, ket, &bras)?),
                )
            } else {
                (None, None)
            };
            tally.kets += 1;
            for key in keys(&m1, &m2) {
                let (a, ca) = entry_or_zero(&m1, &key, 2, cfg.window);
                let (b, cb) = entry_or_zero(&m2, &key, 2, cfg.window);
                let diff = a.sub(&b);
                let cert = ca.intersect(&cb);
                let alpha = delta_coset(&diff);
                let mut rhs = GenSeries::new(2, lo, hi);
                if let (Some(h1), Some(h2)) = (&h1, &h2) {
                    for (hme, c, sgn) in [(h1, &c_plus, Q::one()), (h2, &c_minus, -Q::one())] {
                        if let Some(e) = hme.get(&key) {
                            for f in univariate_parts(&e.series, 1, hi)? {
                                let d = delta_times(&alpha, c, &f, 0, 1, 2, lo, hi)?;
                                rhs.axpy(&(&sgn * &inv_h), &d);
                            }
                        }
                    }
                }
                tally.record(&diff.sub(&rhs), &cert, Some(&diff), || {
                    format!("ket {} bra {}", self.space.describe(ket), self.space.describe(&key))
                });
            }
        }
        Ok(())
    }

    /// Sum of the six Serre words, each expanded in its own operator order.
    fn serre_check(&self, i: usize, j: usize, s: Sign, tally: &mut Tally) -> Result<()> {
        let cfg = self.space.config();
        let ei = self.e(i, s)?;
        let ej = self.e(j, s)?;
        let ai: Vec<_> = ei.terms().iter().map(|t| self.space.term_action(t)).collect::<Result<_>>()?;
        let aj: Vec<_> = ej.terms().iter().map(|t| self.space.term_action(t)).collect::<Result<_>>()?;
        // variables: u1 = 0, u2 = 1, v = 2
        let words: Vec<(Q, [usize; 3], [bool; 3])> = {
            let mut w = Vec::new();
            for (a, b) in [(0usize, 1usize), (1, 0)] {
                w.push((Q::one(), [a, b, 2], [false, false, true]));
                w.push((Q::from_integer((-2).into()), [a, 2, b], [false, true, false]));
                w.push((Q::one(), [2, a, b], [true, false, false]));
            }
            w
        };
        let (kets, bras) = self.kets_and_bras(&[&ei, &ej]);
        for ket in &kets {
            let mut total = MatrixElements::default();
            let mut first = None;
            for (coef, vars, is_j) in &words {
                let acts: Vec<Vec<_>> = is_j.iter().map(|&b| if b { aj.clone() } else { ai.clone() }).collect();
                let me = self.space.evaluate_actions(&acts, vars, 3, ket, &bras)?;
                for (bra, e) in &me.entries {
                    total.add(bra.clone(), e.series.scale(coef), e.cert.clone());
                }
                first.get_or_insert(me);
            }
            tally.kets += 1;
            // support counts cells where the first word alone is nonzero
            let first = first.unwrap_or_default();
            for (bra, e) in &total.entries {
                tally.record(&e.series, &e.cert, first.get(bra).map(|f| &f.series), || {
                    format!("ket {} bra {}", self.space.describe(ket), self.space.describe(bra))
                });
            }
            let _ = cfg;
        }
        Ok(())
    }

    /// Runs one relation for one index pair (and both signs where relevant).
    pub fn verify(&self, rel: RelationId, i: usize, j: usize) -> Result<Vec<OracleOutcome>> {
        let alg = self.space.algebra();
        alg.check_a_index(i)?;
        alg.check_a_index(j)?;
        let mut out = Vec::new();
        let signs = [Sign::Plus, Sign::Minus];
        match rel {
            RelationId::Y1 => {
                for s in signs {
                    let start = Instant::now();
                    let mut t = Tally::new();
                    self.exchange_check(&self.h(i, s)?, &self.h(j, s)?, &LinearFactorProduct::one(), &mut t)?;
                    out.push(t.finish(rel, format!("H{} H{}", s.symbol(), s.symbol()), vec![i, j], start));
                }
            }
            RelationId::Y2 => {
                let start = Instant::now();
                let mut t = Tally::new();
                let r = required_hh(alg, i, Sign::Plus, j, Sign::Minus)?;
                self.exchange_check(&self.h(i, Sign::Plus)?, &self.h(j, Sign::Minus)?, &r, &mut t)?;
                out.push(t.finish(rel, "H+ H-".into(), vec![i, j], start));
            }
            RelationId::Y3 | RelationId::Y4 => {
                let h = if rel == RelationId::Y3 { Sign::Plus } else { Sign::Minus };
                for e in signs {
                    let start = Instant::now();
                    let mut t = Tally::new();
                    let r = required_he(alg, i, h, j, e)?;
                    self.exchange_check(&self.h(i, h)?, &self.e(j, e)?, &r, &mut t)?;
                    out.push(t.finish(rel, format!("H{} E{}", h.symbol(), e.symbol()), vec![i, j], start));
                }
            }
            RelationId::Y5 | RelationId::Y8 => {
                if rel == RelationId::Y8 && i.abs_diff(j) <= 1 {
                    return Err(Error::IndexOutOfRange(format!("(y8) needs |i-j| > 1, got ({i},{j})")));
                }
                for s in signs {
                    let start = Instant::now();
                    let mut t = Tally::new();
                    let r = if rel == RelationId::Y8 {
                        LinearFactorProduct::one()
                    } else {
                        required_ee(alg, i, j, s)?
                    };
                    self.exchange_check(&self.e(i, s)?, &self.e(j, s)?, &r, &mut t)?;
                    out.push(t.finish(rel, format!("E{} E{}", s.symbol(), s.symbol()), vec![i, j], start));
                }
            }
            RelationId::Y6 => {
                let start = Instant::now();
                let mut t = Tally::new();
                self.delta_check(i, j, &mut t)?;
                out.push(t.finish(rel, "[E+, E-]".into(), vec![i, j], start));
            }
            RelationId::Y7 => {
                if i.abs_diff(j) != 1 {
                    return Err(Error::IndexOutOfRange(format!("(y7) needs |i-j| = 1, got ({i},{j})")));
                }
                for s in signs {
                    let start = Instant::now();
                    let mut t = Tally::new();
                    self.serre_check(i, j, s, &mut t)?;
                    out.push(t.finish(rel, format!("Serre E{}", s.symbol()), vec![i, j], start));
                }
            }
        }
        Ok(out)
    }

    /// Index pairs a relation applies to.
    pub fn index_pairs(&self, rel: RelationId) -> Vec<(usize, usize)> {
        let r = self.space.algebra().rank();
        let mut out = Vec::new();
        for i in 1..=r {
            for j in 1..=r {
                let ok = match rel {
                    RelationId::Y7 => i.abs_diff(j) == 1,
                    RelationId::Y8 => i.abs_diff(j) > 1,
                    _ => true,
                };
                if ok {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Termwise cross-check: every `E` (or `H⁻`) term `t` against `H⁺_i`,
    /// using the exchange engine's factor for that exact pair of terms.
    pub fn cross_engine(&self, rel: RelationId, i: usize, j: usize) -> Result<Vec<OracleOutcome>> {
        let alg = self.space.algebra();
        let hp = self.h(i, Sign::Plus)?;
        let partners: Vec<(String, CurrentExpr)> = match rel {
            RelationId::Y2 => vec![("H+ H-".into(), self.h(j, Sign::Minus)?)],
            RelationId::Y3 => vec![
                ("H+ E+".into(), self.e(j, Sign::Plus)?),
                ("H+ E-".into(), self.e(j, Sign::Minus)?),
            ],
            other => {
                return Err(Error::Config(format!("cross-engine check covers y2 and y3, not {other}")));
            }
        };
        let x_term: &VertexTerm = &hp.terms()[0];
        let mut out = Vec::new();
        for (label, y) in partners {
            let start = Instant::now();
            let mut t = Tally::new();
            for term in y.terms() {
                let r = exchange_factor(alg, &x_term.combo, Var::U, &term.combo, Var::V)?;
                let single = CurrentExpr::new(vec![term.clone()]);
                self.exchange_check(&hp, &single, &r, &mut t)?;
            }
            out.push(t.finish(rel, format!("{label} termwise"), vec![i, j], start));
        }
        Ok(out)
    }
}

fn keys(a: &MatrixElements, b: &MatrixElements) -> BTreeSet<FockState> {
    a.entries.keys().chain(b.entries.keys()).cloned().collect()
}

fn entry_or_zero(m: &MatrixElements, key: &FockState, nvars: usize, window: (i64, i64)) -> (GenSeries, Certificate) {
    match m.get(key) {
        Some(e) => (e.series.clone(), e.cert.clone()),
        None => (GenSeries::new(nvars, window.0, window.1), Certificate::window(nvars, window.0)),
    }
}

/// Coset of `u` carried by the delta terms: the `u`-base of a part whose
/// bases add up to an integer (delta terms live on `e_u + e_v ∈ ℤ`).
fn delta_coset(s: &GenSeries) -> Q {
    let mut found: Vec<Q> = s
        .bases()
        .filter(|b| (&b[0] + &b[1]).is_integer())
        .map(|b| b[0].clone())
        .collect();
    found.sort();
    found.dedup();
    found.into_iter().next().unwrap_or_else(Q::zero)
}

/// Splits a series depending only on `var` into univariate pieces, one per coset.
fn univariate_parts(s: &GenSeries, var: usize, top: i64) -> Result<Vec<Laurent>> {
    let (lo, hi) = s.window();
    let mut by_base: std::collections::BTreeMap<Q, Laurent> = std::collections::BTreeMap::new();
    for b in s.bases() {
        if b.iter().enumerate().any(|(a, x)| a != var && !x.is_zero()) {
            return Err(Error::WrongKind("expected a series in one variable".into()));
        }
        by_base
            .entry(b[var].clone())
            .or_insert_with(|| Laurent::zero_with(b[var].clone(), top.min(hi), lo));
    }
    for (e, x) in s.nonzero() {
        let (base, off) = crate::series::split_exponent(&e[var]);
        if e.iter().enumerate().any(|(a, y)| a != var && !y.is_zero()) {
            return Err(Error::WrongKind("expected a series in one variable".into()));
        }
        let l = by_base.get_mut(&base).expect("base registered");
        l.set(off, &x);
    }
    Ok(by_base.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn oracle(n: usize, k: i64, sample: Sample) -> Oracle {
        Oracle::new(
            OracleConfig {
                n,
                k: qi(k),
                level: 2,
                window: (-5, 5),
                ..OracleConfig::default()
            },
            BuildOptions::default(),
        )
        .unwrap()
        .with_sample(sample)
    }

    #[test]
    fn y1_sl2_vacuum() {
        let o = oracle(2, 1, Sample::Vacuum);
        for r in o.verify(RelationId::Y1, 1, 1).unwrap() {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn y5_sl2_vacuum() {
        let o = oracle(2, 1, Sample::Vacuum);
        for r in o.verify(RelationId::Y5, 1, 1).unwrap() {
            assert!(r.passed, "{r:?}");
            assert!(r.support > 0);
        }
    }

    #[test]
    fn y6_sl2_vacuum() {
        let o = oracle(2, 2, Sample::Vacuum);
        for r in o.verify(RelationId::Y6, 1, 1).unwrap() {
            assert!(r.passed, "{r:?}");
            assert!(r.support > 0);
        }
    }

    #[test]
    fn wrong_factor_is_caught() {
        let o = oracle(2, 1, Sample::Vacuum);
        let alg = o.space().algebra().clone();
        let e = o.e(1, Sign::Plus).unwrap();
        let wrong = required_ee(&alg, 1, 1, Sign::Minus).unwrap();
        let mut t = Tally::new();
        o.exchange_check(&e, &e, &wrong, &mut t).unwrap();
        assert!(!t.residual.is_zero());
    }
}
