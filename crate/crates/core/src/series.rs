//! Exact truncated series with rational exponents.
//!
//! Every exponent is `base + n` with `base ∈ [0, 1)` fixed per variable and
//! `n` an integer. [`Laurent`] is a descending univariate series that knows
//! how far down its coefficients are exact; [`GenSeries`] is a multivariate
//! series on a fixed integer window, stored densely per coset.
//!
//! Coefficients are held as GMP rationals internally; the public interface
//! speaks [`Q`].

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use rug::integer::Order;
use rug::{Assign, Integer, Rational};

use crate::error::{Error, Result};
use crate::scalar::{fmt_q, Q};

type R = Rational;

fn int_to_rug(x: &BigInt) -> Integer {
    if let Ok(v) = i64::try_from(x) {
        return Integer::from(v);
    }
    let (sign, mag) = x.to_bytes_le();
    let i = Integer::from_digits(&mag, Order::Lsf);
    if sign == Sign::Minus {
        -i
    } else {
        i
    }
}

fn int_from_rug(x: &Integer) -> BigInt {
    if let Some(v) = x.to_i64() {
        return BigInt::from(v);
    }
    let mag: Vec<u8> = x.to_digits(Order::Lsf);
    let sign = if *x < 0 { Sign::Minus } else { Sign::Plus };
    BigInt::from_bytes_le(sign, &mag)
}

fn to_r(x: &Q) -> R {
    R::from((int_to_rug(x.numer()), int_to_rug(x.denom())))
}

fn to_q(x: &R) -> Q {
    Q::new(int_from_rug(x.numer()), int_from_rug(x.denom()))
}

fn is_zero_r(x: &R) -> bool {
    x.cmp0() == std::cmp::Ordering::Equal
}

/// Splits a rational exponent into `(frac, floor)` with `frac ∈ [0, 1)`.
pub fn split_exponent(x: &Q) -> (Q, i64) {
    let fl = x.numer().div_floor(x.denom());
    let fl_i = i64::try_from(fl.clone()).expect("exponent fits in i64");
    (x - Q::from_integer(fl), fl_i)
}

/// `Σ_{i} coef[i] · x^{base + top - i}`, exact for exponents `≥ base + floor`.
/// A terminating series (a polynomial) is exact everywhere: its coefficients
/// below the stored range are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    pub base: Q,
    pub top: i64,
    coef: Vec<R>,
    terminates: bool,
}

impl Laurent {
    pub fn zero_with(base: Q, top: i64, floor: i64) -> Self {
        let len = (top - floor + 1).max(0) as usize;
        Self {
            base,
            top,
            coef: vec![R::new(); len],
            terminates: false,
        }
    }

    pub fn constant(c: Q, _floor: i64) -> Self {
        let mut s = Self::zero_with(Q::zero(), 0, 0);
        s.coef[0] = to_r(&c);
        s.terminates = true;
        s
    }

    /// Whether every coefficient below the stored range is zero.
    pub fn terminates(&self) -> bool {
        self.terminates
    }

    /// Lowest offset at which the series is known exactly; `i64::MIN` for a
    /// terminating series.
    pub fn exact_floor(&self) -> i64 {
        if self.terminates {
            i64::MIN
        } else {
            self.floor()
        }
    }

    /// Lowest integer offset whose coefficient is exact.
    pub fn floor(&self) -> i64 {
        self.top - self.coef.len() as i64 + 1
    }

    fn get_r(&self, e: i64) -> Option<Option<&R>> {
        if e > self.top {
            Some(None)
        } else if e < self.floor() {
            self.terminates.then_some(None)
        } else {
            Some(Some(&self.coef[(self.top - e) as usize]))
        }
    }

    /// Coefficient at `base + e`; zero above `top`, `None` below the floor.
    pub fn get(&self, e: i64) -> Option<Q> {
        self.get_r(e).map(|x| x.map(to_q).unwrap_or_else(Q::zero))
    }

    /// Sets the coefficient at `base + e`, which must lie in `[floor, top]`.
    pub fn set(&mut self, e: i64, x: &Q) {
        assert!(e <= self.top && e >= self.floor(), "offset {e} outside stored range");
        let idx = (self.top - e) as usize;
        self.coef[idx] = to_r(x);
    }

    pub fn is_zero(&self) -> bool {
        self.coef.iter().all(is_zero_r)
    }

    /// `(x + c)^λ` expanded for `|x| > |c|`, exact down to `floor`.
    pub fn binomial(c: &Q, lambda: &Q, floor: i64) -> Self {
        let (base, top) = split_exponent(lambda);
        let mut s = Self::zero_with(base, top, floor.min(top));
        let c = to_r(c);
        let lam = to_r(lambda);
        let mut b = R::from(1);
        let mut cp = R::from(1);
        for m in 0..s.coef.len() {
            s.coef[m] = R::from(&b * &cp);
            let m = m as i64;
            b *= R::from(&lam - m);
            b /= m + 1;
            cp *= &c;
            if is_zero_r(&b) {
                s.coef.truncate(m as usize + 1);
                s.terminates = true;
                break;
            }
        }
        s
    }

    /// `(x + c)^n` for an integer `n`, exact down to `floor`.
    pub fn power(c: &Q, n: i64, floor: i64) -> Self {
        Self::binomial(c, &Q::from_integer(n.into()), floor)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let c = to_r(c);
        Self {
            base: self.base.clone(),
            top: self.top,
            coef: self.coef.iter().map(|x| R::from(x * &c)).collect(),
            terminates: self.terminates,
        }
    }

    /// Product; the result is exact wherever both inputs are.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_trunc(other, i64::MIN)
    }

    /// Product computed only for integer offsets `≥ min_offset` (relative to
    /// the product's own base).
    pub fn mul_trunc(&self, other: &Self, min_offset: i64) -> Self {
        let bsum = &self.base + &other.base;
        let (base, carry) = split_exponent(&bsum);
        let top = self.top + other.top;
        let exact = match (self.terminates, other.terminates) {
            (true, true) => self.floor() + other.floor(),
            (true, false) => other.floor() + self.top,
            (false, true) => self.floor() + other.top,
            (false, false) => (self.floor() + other.top).max(other.floor() + self.top),
        };
        let floor = exact.max(min_offset.saturating_sub(carry));
        let mut out = Self::zero_with(base, top + carry, floor + carry);
        out.terminates = self.terminates && other.terminates && floor == exact;
        let len = out.coef.len();
        let mut tmp = R::new();
        for (i, a) in self.coef.iter().enumerate() {
            if i >= len {
                break;
            }
            if is_zero_r(a) {
                continue;
            }
            for (j, b) in other.coef.iter().enumerate().take(len - i) {
                if !is_zero_r(b) {
                    tmp.assign(a * b);
                    out.coef[i + j] += &tmp;
                }
            }
        }
        out
    }

    /// Sum of two series in the same coset; exact down to the higher floor.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.base, other.base, "adding series from different cosets");
        let top = self.top.max(other.top);
        let floor = match (self.terminates, other.terminates) {
            (true, true) => self.floor().min(other.floor()),
            (true, false) => other.floor(),
            (false, true) => self.floor(),
            (false, false) => self.floor().max(other.floor()),
        };
        let mut out = Self::zero_with(self.base.clone(), top, floor);
        out.terminates = self.terminates && other.terminates;
        for e in floor..=top {
            let slot = &mut out.coef[(top - e) as usize];
            if let Some(Some(x)) = self.get_r(e) {
                *slot += x;
            }
            if let Some(Some(x)) = other.get_r(e) {
                *slot += x;
            }
        }
        out
    }

    /// Raises `self` to a non-negative integer power.
    pub fn pow(&self, n: u32, floor: i64) -> Self {
        let mut acc = Self::constant(Q::from_integer(1.into()), floor);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Lower bounds on exponents inside which a series is exact:
/// `e_a ≥ lo[a]` for each variable and `Σ_{a∈S} e_a ≥ bound` for each sum.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub lo: Vec<Q>,
    pub sums: Vec<(Vec<usize>, Q)>,
}

impl Certificate {
    pub fn window(nvars: usize, lo: i64) -> Self {
        Self {
            lo: vec![Q::from_integer(lo.into()); nvars],
            sums: Vec::new(),
        }
    }

    pub fn contains(&self, e: &[Q]) -> bool {
        self.lo.iter().zip(e).all(|(l, x)| x >= l)
            && self
                .sums
                .iter()
                .all(|(vars, b)| vars.iter().map(|&a| &e[a]).fold(Q::zero(), |s, x| s + x) >= *b)
    }

    /// Region where both certificates hold.
    pub fn intersect(&self, other: &Self) -> Self {
        let lo = self
            .lo
            .iter()
            .zip(&other.lo)
            .map(|(a, b)| a.max(b).clone())
            .collect();
        let mut sums = self.sums.clone();
        for s in &other.sums {
            if !sums.contains(s) {
                sums.push(s.clone());
            }
        }
        Self { lo, sums }
    }

    /// Certificate after multiplying by a polynomial with per-variable
    /// degrees `deg` and total degree `total`.
    pub fn after_polynomial(&self, deg: &[i64], total: i64) -> Self {
        let lo = self
            .lo
            .iter()
            .zip(deg)
            .map(|(l, d)| l + Q::from_integer((*d).into()))
            .collect();
        let sums = self
            .sums
            .iter()
            .map(|(vars, b)| {
                let d: i64 = vars.iter().map(|&a| deg[a]).sum::<i64>().min(total);
                (vars.clone(), b + Q::from_integer(d.into()))
            })
            .collect();
        Self { lo, sums }
    }
}

/// Multivariate series on the integer window `[lo, hi]` per variable.
/// Each coset (vector of bases) holds a dense row-major array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSeries {
    nvars: usize,
    lo: i64,
    hi: i64,
    parts: BTreeMap<Vec<Q>, Vec<R>>,
}

impl GenSeries {
    pub fn new(nvars: usize, lo: i64, hi: i64) -> Self {
        assert!(lo <= hi);
        Self {
            nvars,
            lo,
            hi,
            parts: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    fn width(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    fn cells(&self) -> usize {
        self.width().pow(self.nvars as u32)
    }

    /// Cosets present, including all-zero ones.
    pub fn bases(&self) -> impl Iterator<Item = &Vec<Q>> {
        self.parts.keys()
    }

    /// Makes sure a coset is present (possibly all zero).
    pub fn touch(&mut self, base: &[Q]) {
        self.part_mut(base);
    }

    fn part_mut(&mut self, base: &[Q]) -> &mut Vec<R> {
        let cells = self.cells();
        self.parts.entry(base.to_vec()).or_insert_with(|| vec![R::new(); cells])
    }

    fn index(&self, offs: &[i64]) -> Option<usize> {
        let w = self.width() as i64;
        let mut idx = 0i64;
        for &o in offs {
            if o < self.lo || o > self.hi {
                return None;
            }
            idx = idx * w + (o - self.lo);
        }
        Some(idx as usize)
    }

    fn offsets(&self, mut idx: usize) -> Vec<i64> {
        let w = self.width();
        let mut out = vec![0i64; self.nvars];
        for a in (0..self.nvars).rev() {
            out[a] = (idx % w) as i64 + self.lo;
            idx /= w;
        }
        out
    }

    fn exponents(&self, base: &[Q], idx: usize) -> Vec<Q> {
        self.offsets(idx)
            .iter()
            .zip(base)
            .map(|(o, b)| b + Q::from_integer((*o).into()))
            .collect()
    }

    /// Adds `c · Π_a x_a^{base_a + offs_a}`; silently ignores offsets outside the window.
    pub fn add_term(&mut self, base: &[Q], offs: &[i64], c: &Q) {
        if let Some(i) = self.index(offs) {
            let part = self.part_mut(base);
            part[i] += to_r(c);
        }
    }

    /// Coefficient at a full rational exponent vector.
    pub fn coeff(&self, e: &[Q]) -> Q {
        let split: Vec<(Q, i64)> = e.iter().map(split_exponent).collect();
        let base: Vec<Q> = split.iter().map(|(b, _)| b.clone()).collect();
        let offs: Vec<i64> = split.iter().map(|(_, o)| *o).collect();
        match (self.parts.get(&base), self.index(&offs)) {
            (Some(p), Some(i)) => to_q(&p[i]),
            _ => Q::zero(),
        }
    }

    /// Adds `scale · Π_a f_a(x_a)` for univariate factors in variable order.
    pub fn add_outer(&mut self, factors: &[&Laurent], scale: &Q) -> Result<()> {
        assert_eq!(factors.len(), self.nvars);
        let mut acc = GenSeries::new(self.nvars, self.lo, self.hi);
        acc.add_term(&vec![Q::zero(); self.nvars], &vec![0; self.nvars], scale);
        for (a, f) in factors.iter().enumerate() {
            if f.exact_floor() > self.lo {
                return Err(Error::TruncationExceeded(format!(
                    "series exact only down to offset {} but window starts at {}",
                    f.floor(),
                    self.lo
                )));
            }
            let mut next = GenSeries::new(self.nvars, self.lo, self.hi);
            acc.mul_univariate_into(a, f, &mut next);
            acc = next;
        }
        self.add_assign(&acc);
        Ok(())
    }

    /// `target += self · f(x_var)`, for `self` constant in `x_var`.
    pub fn mul_univariate_into(&self, var: usize, f: &Laurent, target: &mut GenSeries) {
        let (lo, hi) = (self.lo, self.hi);
        let slice: Vec<(i64, &R)> = (lo..=hi)
            .filter_map(|e| match f.get_r(e) {
                Some(Some(x)) if !is_zero_r(x) => Some((e, x)),
                _ => None,
            })
            .collect();
        let w = target.width() as i64;
        let stride = w.pow((self.nvars - 1 - var) as u32);
        let mut tmp = R::new();
        for (base, p) in &self.parts {
            let mut nb = base.clone();
            nb[var] = f.base.clone();
            let dst = target.part_mut(&nb);
            for (i, x) in p.iter().enumerate() {
                if is_zero_r(x) {
                    continue;
                }
                // cell i has offset 0 in `var`; moving to offset e adds e·stride
                for (e, y) in &slice {
                    let j = i as i64 + e * stride;
                    tmp.assign(x * *y);
                    dst[j as usize] += &tmp;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!((self.nvars, self.lo, self.hi), (other.nvars, other.lo, other.hi));
        for (b, p) in &other.parts {
            let mine = self.part_mut(b);
            for (x, y) in mine.iter_mut().zip(p) {
                if !is_zero_r(y) {
                    *x += y;
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: &Q, other: &Self) {
        assert_eq!((self.nvars, self.lo, self.hi), (other.nvars, other.lo, other.hi));
        let c = to_r(c);
        for (b, p) in &other.parts {
            let mine = self.part_mut(b);
            for (x, y) in mine.iter_mut().zip(p) {
                if !is_zero_r(y) {
                    *x += R::from(&c * y);
                }
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(&Q::from_integer((-1).into()), other);
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let c = to_r(c);
        let mut out = self.clone();
        for p in out.parts.values_mut() {
            for x in p.iter_mut() {
                *x *= &c;
            }
        }
        out
    }

    /// Multiplies by `x_a - x_b + c` (`b = None` gives `x_a + c`).
    pub fn mul_linear(&self, a: usize, b: Option<usize>, c: &Q) -> Self {
        let c = to_r(c);
        let mut out = Self::new(self.nvars, self.lo, self.hi);
        for (base, p) in &self.parts {
            let mut dst = vec![R::new(); p.len()];
            for (i, x) in p.iter().enumerate() {
                if is_zero_r(x) {
                    continue;
                }
                let offs = self.offsets(i);
                dst[i] += R::from(&c * x);
                let mut up = offs.clone();
                up[a] += 1;
                if let Some(j) = self.index(&up) {
                    dst[j] += x;
                }
                if let Some(b) = b {
                    let mut up = offs;
                    up[b] += 1;
                    if let Some(j) = self.index(&up) {
                        dst[j] -= x;
                    }
                }
            }
            out.parts.insert(base.clone(), dst);
        }
        out
    }

    /// Nonzero coefficients as `(exponents, value)`, in canonical order.
    pub fn nonzero(&self) -> Vec<(Vec<Q>, Q)> {
        let mut out = Vec::new();
        for (base, p) in &self.parts {
            for (i, x) in p.iter().enumerate() {
                if !is_zero_r(x) {
                    out.push((self.exponents(base, i), to_q(x)));
                }
            }
        }
        out
    }

    /// Every stored cell `(exponents, value)` that lies inside `cert`.
    pub fn certified_cells<'a>(&'a self, cert: &'a Certificate) -> impl Iterator<Item = (Vec<Q>, Q)> + 'a {
        self.parts.iter().flat_map(move |(base, p)| {
            p.iter().enumerate().filter_map(move |(i, x)| {
                let e = self.exponents(base, i);
                cert.contains(&e).then(|| (e, to_q(x)))
            })
        })
    }

    /// Largest-magnitude coefficient inside `cert` and the number of cells checked.
    pub fn residual(&self, cert: &Certificate) -> (Q, usize) {
        let mut best = Q::zero();
        let mut n = 0;
        for (base, p) in &self.parts {
            for (i, x) in p.iter().enumerate() {
                if !cert.contains(&self.exponents(base, i)) {
                    continue;
                }
                n += 1;
                if !is_zero_r(x) {
                    let x = to_q(x);
                    if x.abs() > best.abs() {
                        best = x;
                    }
                }
            }
        }
        (best, n)
    }

    /// Certified cells holding a nonzero value.
    pub fn certified_support(&self, cert: &Certificate) -> usize {
        let mut n = 0;
        for (base, p) in &self.parts {
            for (i, x) in p.iter().enumerate() {
                if !is_zero_r(x) && cert.contains(&self.exponents(base, i)) {
                    n += 1;
                }
            }
        }
        n
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(|p| p.iter().all(is_zero_r))
    }

    /// Human-readable listing of the nonzero coefficients.
    pub fn dump(&self, names: &[&str]) -> String {
        let mut lines = Vec::new();
        for (e, x) in self.nonzero() {
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .map(|(p, n)| format!("{n}^{}", fmt_q(p)))
                .collect();
            lines.push(format!("{} {}", fmt_q(&x), mono.join(" ")));
        }
        lines.join("\n")
    }
}

/// Additive formal delta in the coset `α` of `u`:
/// `δ^{(α)}(u - v - c) = Σ_n u^{α-n-1} (v+c)^{n-α}`, restricted to the window.
/// It is the difference of the two expansions of `u^α (v+c)^{-α} / (u - v - c)`,
/// is annihilated by `u - v - c`, and reduces to `Σ_n u^{-n-1}(v+c)^n` at `α = 0`.
/// Multiplied by a univariate `f(v)` (variable indices `u`, `v`).
pub fn delta_times(
    alpha: &Q,
    c: &Q,
    f: &Laurent,
    u: usize,
    v: usize,
    nvars: usize,
    lo: i64,
    hi: i64,
) -> Result<GenSeries> {
    let mut out = GenSeries::new(nvars, lo, hi);
    let mut base = vec![Q::zero(); nvars];
    base[u] = alpha.clone();
    // e_u = α - n - 1 ∈ α + [lo, hi]
    for eu in lo..=hi {
        let n = -eu - 1;
        let expo = Q::from_integer(n.into()) - alpha;
        let floor = lo - 2 * (hi - lo + 2).max(0) - f.top.abs() - 4;
        let g = Laurent::binomial(c, &expo, floor).mul(f);
        if g.exact_floor() > lo {
            return Err(Error::TruncationExceeded(format!("delta coefficient at u-offset {eu}")));
        }
        base[v] = g.base.clone();
        out.touch(&base);
        for ev in lo..=hi {
            let x = g.get(ev).expect("checked floor");
            if !x.is_zero() {
                let mut offs = vec![0i64; nvars];
                offs[u] = eu;
                offs[v] = ev;
                out.add_term(&base, &offs, &x);
            }
        }
    }
    Ok(out)
}

/// Expansion of `1/(u - v - c)` in the region `|u| > |v|` (`u_first`) or `|v| > |u|`.
pub fn inverse_linear(c: &Q, u_first: bool, u: usize, v: usize, nvars: usize, lo: i64, hi: i64) -> GenSeries {
    let mut out = GenSeries::new(nvars, lo, hi);
    let zero = vec![Q::zero(); nvars];
    out.touch(&zero);
    let span = (hi - lo + 1).max(1);
    for m in 0..=(2 * span + hi.abs() + lo.abs()) {
        // |u|>|v|: Σ_m (v+c)^m u^{-m-1};  |v|>|u|: -Σ_m u^m (v+c)^{-m-1}
        let (eu, pw, sign) = if u_first {
            (-m - 1, m, Q::one())
        } else {
            (m, -m - 1, -Q::one())
        };
        if eu < lo || eu > hi {
            continue;
        }
        let g = Laurent::power(c, pw, lo - 1);
        for ev in lo..=hi {
            if let Some(x) = g.get(ev) {
                if !x.is_zero() {
                    let mut offs = vec![0i64; nvars];
                    offs[u] = eu;
                    offs[v] = ev;
                    out.add_term(&zero, &offs, &(&sign * &x));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn exponent_split() {
        assert_eq!(split_exponent(&q(-1, 3)), (q(2, 3), -1));
        assert_eq!(split_exponent(&qi(4)), (qi(0), 4));
        assert_eq!(split_exponent(&q(7, 2)), (q(1, 2), 3));
    }

    #[test]
    fn binomial_inverse_pair() {
        // (x+1)^{1/2} (x+1)^{-1/2} = 1 down to the floor
        let a = Laurent::binomial(&qi(1), &q(1, 2), -10);
        let b = Laurent::binomial(&qi(1), &q(-1, 2), -10);
        let p = a.mul(&b);
        assert_eq!(p.base, qi(0));
        for e in p.floor()..=p.top {
            assert_eq!(p.get(e).unwrap(), if e == 0 { qi(1) } else { qi(0) }, "e={e}");
        }
    }

    #[test]
    fn terminating_factor_keeps_floor() {
        // (x+1)^2 is exact everywhere, so multiplying it into a series
        // truncated at -10 only costs the polynomial's degree
        let p = Laurent::binomial(&qi(1), &qi(2), -10);
        assert!(p.terminates());
        assert_eq!(p.get(-50), Some(qi(0)));
        let s = Laurent::binomial(&qi(1), &qi(-1), -10);
        let prod = p.mul(&s);
        assert!(!prod.terminates());
        assert_eq!(prod.floor(), -8);
        // (x+1)^2/(x+1) = x+1
        for e in prod.floor()..=prod.top {
            let want = if e == 0 || e == 1 { qi(1) } else { qi(0) };
            assert_eq!(prod.get(e).unwrap(), want, "e={e}");
        }
    }

    #[test]
    fn polynomial_power() {
        let p = Laurent::power(&qi(2), 3, -5);
        // (x+2)^3 = x^3 + 6x^2 + 12x + 8
        assert_eq!(p.get(3).unwrap(), qi(1));
        assert_eq!(p.get(2).unwrap(), qi(6));
        assert_eq!(p.get(1).unwrap(), qi(12));
        assert_eq!(p.get(0).unwrap(), qi(8));
        assert_eq!(p.get(-1).unwrap(), qi(0));
    }

    #[test]
    fn region_difference_of_simple_pole() {
        let lo = -6;
        let hi = 6;
        let r1 = inverse_linear(&qi(0), true, 0, 1, 2, lo, hi);
        let r2 = inverse_linear(&qi(0), false, 0, 1, 2, lo, hi);
        let d = r1.sub(&r2);
        for (e, x) in d.nonzero() {
            assert_eq!(&e[0] + &e[1], qi(-1));
            assert_eq!(x, qi(1));
        }
        assert_eq!(d.nonzero().len(), 12);
        let delta = delta_times(&qi(0), &qi(0), &Laurent::constant(qi(1), lo - 20), 0, 1, 2, lo, hi).unwrap();
        assert_eq!(delta, d);
    }

    #[test]
    fn delta_is_annihilated() {
        let lo = -5;
        let hi = 5;
        for alpha in [qi(0), q(1, 3)] {
            let c = q(3, 2);
            let d = delta_times(&alpha, &c, &Laurent::constant(qi(1), lo - 20), 0, 1, 2, lo, hi).unwrap();
            let z = d.mul_linear(0, Some(1), &-c.clone());
            let cert = Certificate::window(2, lo).after_polynomial(&[1, 1], 1);
            let (res, n) = z.residual(&cert);
            assert!(n > 50);
            assert_eq!(res, qi(0), "alpha={alpha}");
        }
    }

    #[test]
    fn delta_substitution() {
        // δ(u-v-c)·u^2 = δ(u-v-c)·(v+c)^2
        let (lo, hi) = (-6, 6);
        let c = q(1, 2);
        let one = Laurent::constant(qi(1), lo - 20);
        let d = delta_times(&qi(0), &c, &one, 0, 1, 2, lo, hi).unwrap();
        let lhs = d.mul_linear(0, None, &qi(0)).mul_linear(0, None, &qi(0));
        let rhs = delta_times(&qi(0), &c, &Laurent::power(&c, 2, lo - 20), 0, 1, 2, lo, hi).unwrap();
        let cert = Certificate::window(2, lo).after_polynomial(&[2, 0], 2);
        let (res, n) = lhs.sub(&rhs).residual(&cert);
        assert!(n > 50);
        assert_eq!(res, qi(0));
    }

    #[test]
    fn outer_product_and_coeff() {
        let mut s = GenSeries::new(2, -2, 2);
        let f = Laurent::power(&qi(1), 1, -4); // x + 1
        let g = Laurent::binomial(&qi(0), &q(1, 3), -4); // y^{1/3}
        s.add_outer(&[&f, &g], &qi(2)).unwrap();
        assert_eq!(s.coeff(&[qi(1), q(1, 3)]), qi(2));
        assert_eq!(s.coeff(&[qi(0), q(1, 3)]), qi(2));
        assert_eq!(s.coeff(&[qi(0), qi(0)]), qi(0));
        assert_eq!(s.nonzero().len(), 2);
    }

    #[test]
    fn certificate_logic() {
        let c = Certificate {
            lo: vec![qi(-3), qi(-3)],
            sums: vec![(vec![0], qi(-2))],
        };
        assert!(c.contains(&[qi(-2), qi(-3)]));
        assert!(!c.contains(&[qi(-3), qi(0)]));
        let d = c.after_polynomial(&[1, 1], 1);
        assert_eq!(d.lo, vec![qi(-2), qi(-2)]);
        assert_eq!(d.sums, vec![(vec![0], qi(-1))]);
    }
}
