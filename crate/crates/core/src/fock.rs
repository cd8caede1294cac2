//! Truncated Fock-space evaluation of vertex-operator words.
//!
//! States are monomials in creation modes over a momentum sector. A vertex
//! term acts as `e^{X_-} e^{X_+}`: the annihilation half is a translation of
//! the creation variables, the zero-mode factor multiplies by
//! `Π (x + Bħ)^{c·l}`, and the creation half multiplies by a truncated
//! exponential. Products are evaluated right to left with intermediate states
//! cut at level `L`; each result carries a [`Certificate`] describing where
//! the cut cannot have changed a coefficient.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::boson::{pairing, BosonSymbol, CurrentExpr, VertexTerm};
use crate::cartan::AlgebraData;
use crate::error::{Error, Result};
use crate::scalar::{fmt_q, q, qi, Q};
use crate::series::{split_exponent, Certificate, GenSeries, Laurent};

/// A non-integer rational with denominator in `3..=13` and modulus below 2.
fn fractional(rng: &mut StdRng) -> Q {
    let d = rng.gen_range(3..=13i64);
    loop {
        let n = rng.gen_range(-2 * d + 1..2 * d);
        if n % d != 0 {
            return q(n, d);
        }
    }
}

/// Numerical parameters of an oracle run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub n: usize,
    pub k: Q,
    pub hbar: Q,
    /// Truncation level `L` for intermediate states.
    pub level: usize,
    /// Integer exponent window per variable.
    pub window: (i64, i64),
    pub momenta: Momenta,
    /// Draws the non-integer momenta at random instead of the fixed defaults.
    pub seed: Option<u64>,
}

/// Momentum sector the state sample is built on.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Momenta {
    /// Unrelated non-integer rationals for every zero mode.
    Generic,
    /// Generic `a` momenta with `b = 1`, `c = 2` (integers, off the degenerate origin).
    #[default]
    Lattice,
    /// One value per boson, in [`FockSpace::bosons`] order.
    Explicit(Vec<Q>),
}

impl fmt::Display for Momenta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Momenta::Generic => f.write_str("generic"),
            Momenta::Lattice => f.write_str("lattice"),
            Momenta::Explicit(v) => write!(f, "[{}]", v.iter().map(fmt_q).collect::<Vec<_>>().join(",")),
        }
    }
}

impl std::str::FromStr for Momenta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(Momenta::Generic),
            "lattice" => Ok(Momenta::Lattice),
            _ => {
                let body = s
                    .strip_prefix('[')
                    .and_then(|b| b.strip_suffix(']'))
                    .ok_or_else(|| Error::Parse(format!("bad momenta {s:?}; expected generic|lattice|[l1,l2,...]")))?;
                body.split(',').map(|x| crate::scalar::parse_rational(x.trim())).collect::<Result<_>>().map(Momenta::Explicit)
            }
        }
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            n: 3,
            k: Q::one(),
            hbar: Q::one(),
            level: 3,
            window: (-8, 8),
            momenta: Momenta::Lattice,
            seed: None,
        }
    }
}

/// `(boson index, mode number n)` standing for `X_{-n}`.
pub type Mode = (u8, u8);

/// Sorted multiset of creation modes applied to a sector vacuum.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<Mode>);

impl Monomial {
    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    pub fn from_modes(mut modes: Vec<Mode>) -> Self {
        modes.sort_unstable();
        Self(modes)
    }

    pub fn modes(&self) -> &[Mode] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.iter().map(|m| m.1 as usize).sum()
    }

    fn merge(&self, other: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Monomial::from_modes(v)
    }

    /// Distinct modes with multiplicities.
    fn grouped(&self) -> Vec<(Mode, u32)> {
        let mut out: Vec<(Mode, u32)> = Vec::new();
        for &m in &self.0 {
            match out.last_mut() {
                Some((last, c)) if *last == m => *c += 1,
                _ => out.push((m, 1)),
            }
        }
        out
    }
}

/// Momentum eigenvalues `l_X`, indexed like [`FockSpace::bosons`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sector(pub Vec<Q>);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState {
    pub sector: Sector,
    pub mono: Monomial,
}

/// A vertex term with `k` and `ħ` substituted, ready to act on states.
#[derive(Clone, Debug)]
pub struct TermAction {
    prefactor: Q,
    /// `(boson, Bħ, c)` for each annihilation half.
    plus: Vec<(usize, Q, Q)>,
    /// Momentum shift applied by the `q` parts.
    qshift: Vec<Q>,
    /// Powers `β, β², ..., β^L` of the translation `X_{-n} → X_{-n} + β`
    /// coming from the annihilation half.
    beta: BTreeMap<Mode, Vec<Laurent>>,
    /// Truncated `exp(Σ γ X_{-n})` from the creation half.
    creation: Vec<(Monomial, Laurent)>,
}

impl TermAction {
    pub fn qshift(&self) -> &[Q] {
        &self.qshift
    }
}

/// Bosons, pairings and the numerical configuration.
#[derive(Clone, Debug)]
pub struct FockSpace {
    alg: AlgebraData,
    cfg: OracleConfig,
    bosons: Vec<BosonSymbol>,
    pair: Vec<Vec<Q>>,
}

impl FockSpace {
    pub fn new(cfg: OracleConfig) -> Result<Self> {
        let alg = AlgebraData::new(cfg.n)?;
        if cfg.window.0 > 0 || cfg.window.1 < 0 {
            return Err(Error::Config(format!(
                "window [{}, {}] must contain 0",
                cfg.window.0, cfg.window.1
            )));
        }
        if cfg.level == 0 {
            return Err(Error::Config("truncation level must be at least 1".into()));
        }
        if cfg.hbar.is_zero() {
            return Err(Error::Config("hbar must be nonzero".into()));
        }
        let bosons = BosonSymbol::all(&alg);
        if bosons.len() > u8::MAX as usize || cfg.level > u8::MAX as usize {
            return Err(Error::Config("too many bosons or too high a level".into()));
        }
        if let Momenta::Explicit(v) = &cfg.momenta {
            if v.len() != bosons.len() {
                return Err(Error::Config(format!("{} momenta given for {} bosons", v.len(), bosons.len())));
            }
        }
        let mut pair = vec![vec![Q::zero(); bosons.len()]; bosons.len()];
        for (i, x) in bosons.iter().enumerate() {
            for (j, y) in bosons.iter().enumerate() {
                pair[i][j] = pairing(&alg, *x, *y).eval(&cfg.k, alg.g)?;
            }
        }
        Ok(Self {
            alg,
            cfg,
            bosons,
            pair,
        })
    }

    pub fn config(&self) -> &OracleConfig {
        &self.cfg
    }

    pub fn algebra(&self) -> &AlgebraData {
        &self.alg
    }

    pub fn bosons(&self) -> &[BosonSymbol] {
        &self.bosons
    }

    pub fn boson_index(&self, s: BosonSymbol) -> Result<usize> {
        self.bosons
            .iter()
            .position(|b| *b == s)
            .ok_or_else(|| Error::IndexOutOfRange(format!("{s} is not a boson of sl_{}", self.alg.n)))
    }

    /// Lowest offset computed for descending series. The margin below the
    /// window absorbs creation polynomials (degree `≤ L`) and positive
    /// zero-mode degrees; products never compute below what they need, so
    /// the margin is cheap.
    fn floor(&self) -> i64 {
        self.cfg.window.0 - self.cfg.level as i64 - 16
    }

    /// Generic rational momenta used as the default sector.
    /// Base sector of the state sample, as selected by [`OracleConfig::momenta`].
    pub fn generic_sector(&self) -> Sector {
        if let Momenta::Explicit(v) = &self.cfg.momenta {
            return Sector(v.clone());
        }
        let lattice = self.cfg.momenta == Momenta::Lattice;
        let mut rng = self.cfg.seed.map(StdRng::seed_from_u64);
        let mut draw = |fallback: Q| match rng.as_mut() {
            Some(r) => fractional(r),
            None => fallback,
        };
        let mut b = 0i64;
        Sector(
            self.bosons
                .iter()
                .map(|s| match s {
                    BosonSymbol::A(i) => draw(q(*i as i64, 5) + q(1, 7)),
                    BosonSymbol::B(..) if lattice => qi(1),
                    BosonSymbol::C(..) if lattice => qi(2),
                    BosonSymbol::B(..) => {
                        b += 1;
                        draw(q(1, 3) + q(b, 11))
                    }
                    BosonSymbol::C(..) => {
                        b += 1;
                        draw(q(-1, 4) + q(b, 13))
                    }
                })
                .collect(),
        )
    }

    /// Momentum offsets `(b, c)` of the mixed-momentum ket: integers when
    /// the base `b`/`c` momenta are, so the sample stays on that lattice.
    fn mixed_shift(&self) -> (Q, Q) {
        let base = self.generic_sector();
        let integral = self
            .bosons
            .iter()
            .zip(&base.0)
            .all(|(s, l)| matches!(s, BosonSymbol::A(_)) || l.is_integer());
        if integral {
            (qi(1), qi(-2))
        } else {
            (q(1, 2), q(-1, 3))
        }
    }

    pub fn vacuum_sector(&self) -> Sector {
        Sector(vec![Q::zero(); self.bosons.len()])
    }

    pub fn term_action(&self, t: &VertexTerm) -> Result<TermAction> {
        let k = &self.cfg.k;
        let hb = &self.cfg.hbar;
        let g = self.alg.g;
        let nb = self.bosons.len();
        let lvl = self.cfg.level as i64;
        let floor = self.floor();

        let mut plus = Vec::new();
        for (s, shift, c) in t.combo.plus_parts() {
            let c = c.eval(k, g)?;
            if !c.is_zero() {
                plus.push((self.boson_index(s)?, shift.eval(k) * hb, c));
            }
        }
        let mut minus = Vec::new();
        for (s, shift, c) in t.combo.minus_parts() {
            let c = c.eval(k, g)?;
            if !c.is_zero() {
                minus.push((self.boson_index(s)?, shift.eval(k) * hb, c));
            }
        }

        let mut qshift = vec![Q::zero(); nb];
        for (x, _, c) in &minus {
            for (y, l) in qshift.iter_mut().enumerate() {
                *l += c * &self.pair[y][*x];
            }
        }

        let mut beta: BTreeMap<Mode, Vec<Laurent>> = BTreeMap::new();
        for n in 1..=lvl {
            for y in 0..nb {
                let mut acc: Option<Laurent> = None;
                for (x, b, c) in &plus {
                    let w = c * &self.pair[*x][y];
                    if w.is_zero() {
                        continue;
                    }
                    let term = Laurent::power(b, -n, floor).scale(&-w);
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.add(&term),
                    });
                }
                if let Some(a) = acc.filter(|a| !a.is_zero()) {
                    let reps = (self.cfg.level as i64 / n) as usize;
                    let mut pows = vec![a.clone()];
                    for _ in 1..reps {
                        let next = pows.last().expect("nonempty").mul(&a);
                        pows.push(next);
                    }
                    beta.insert((y as u8, n as u8), pows);
                }
            }
        }

        let mut gamma: Vec<(Mode, Laurent)> = Vec::new();
        for n in 1..=lvl {
            for x in 0..nb {
                let mut acc: Option<Laurent> = None;
                for (s, a, c) in &minus {
                    if *s != x {
                        continue;
                    }
                    let term = Laurent::power(a, n, floor).scale(&(c / Q::from_integer(n.into())));
                    acc = Some(match acc {
                        None => term,
                        Some(p) => p.add(&term),
                    });
                }
                if let Some(p) = acc.filter(|p| !p.is_zero()) {
                    gamma.push(((x as u8, n as u8), p));
                }
            }
        }
        let mut creation = Vec::new();
        build_creation(&gamma, 0, self.cfg.level, Monomial::vacuum(), Laurent::constant(Q::one(), floor), floor, &mut creation);

        Ok(TermAction {
            prefactor: t.prefactor.eval(hb),
            plus,
            qshift,
            beta,
            creation,
        })
    }

    /// `Π_B (x + Bħ)^{Σ c l_X}` on a sector, with its total exponent.
    fn zero_mode(&self, ta: &TermAction, sector: &Sector) -> (Laurent, Q) {
        let mut by_shift: BTreeMap<Q, Q> = BTreeMap::new();
        for (x, b, c) in &ta.plus {
            *by_shift.entry(b.clone()).or_insert_with(Q::zero) += c * &sector.0[*x];
        }
        // positive degrees raise the product's floor, so start lower
        let lift: i64 = by_shift.values().map(|l| split_exponent(l).1.max(0)).sum();
        let floor = self.floor() - lift;
        let mut z = Laurent::constant(Q::one(), floor);
        let mut total = Q::zero();
        for (b, lam) in by_shift {
            if lam.is_zero() {
                continue;
            }
            total += &lam;
            z = z.mul(&Laurent::binomial(&b, &lam, floor));
        }
        (z, total)
    }

    fn shifted_sector(&self, ta: &TermAction, sector: &Sector) -> Sector {
        Sector(sector.0.iter().zip(&ta.qshift).map(|(l, d)| l + d).collect())
    }

    /// `⟨·| term(x) |state⟩` for every output monomial of level `≤ max_level`
    /// (and in `only`, if given), with the zero-mode factor `z` of the input
    /// sector already computed. Coefficients are exact from the window start up.
    fn act(
        &self,
        ta: &TermAction,
        z: &Laurent,
        mono: &Monomial,
        max_level: usize,
        only: Option<&[Monomial]>,
    ) -> Vec<(Monomial, Laurent)> {
        let lo = self.cfg.window.0;
        let need = lo - max_level as i64;
        // translation of the creation variables
        let mut subs: Vec<(Vec<Mode>, Laurent)> = vec![(Vec::new(), z.scale(&ta.prefactor))];
        for (mode, mult) in mono.grouped() {
            let pows = ta.beta.get(&mode);
            let mut next = Vec::new();
            for (kept, coef) in &subs {
                for j in (0..=mult).rev() {
                    let removed = mult - j;
                    let coef = match (removed, pows) {
                        (0, _) => coef.clone(),
                        (_, None) => break,
                        (r, Some(p)) => coef.mul_trunc(&p[r as usize - 1], need).scale(&binom(mult, j)),
                    };
                    let mut kept = kept.clone();
                    kept.extend(std::iter::repeat(mode).take(j as usize));
                    next.push((kept, coef));
                }
            }
            subs = next;
        }
        let mut out: BTreeMap<Monomial, Laurent> = BTreeMap::new();
        for (kept, coef) in subs {
            let kept = Monomial::from_modes(kept);
            let room = match max_level.checked_sub(kept.level()) {
                Some(r) => r,
                None => continue,
            };
            for (p, poly) in &ta.creation {
                if p.level() > room {
                    continue;
                }
                let m = kept.merge(p);
                if only.is_some_and(|o| !o.contains(&m)) {
                    continue;
                }
                let c = coef.mul_trunc(poly, lo);
                match out.get_mut(&m) {
                    Some(acc) => *acc = acc.add(&c),
                    None => {
                        out.insert(m, c);
                    }
                }
            }
        }
        out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Evaluates one term path `ops[0](x_{v0}) ops[1](x_{v1}) ... |ket⟩` against
    /// the given bra monomials in the resulting sector.
    pub fn evaluate_path(
        &self,
        ops: &[(&TermAction, usize)],
        nvars: usize,
        ket: &FockState,
        bras: &[Monomial],
    ) -> Result<PathResult> {
        let actions: Vec<Vec<TermAction>> = ops.iter().map(|(t, _)| vec![(*t).clone()]).collect();
        let vars: Vec<usize> = ops.iter().map(|o| o.1).collect();
        let mut r = self.walk(&actions, &vars, nvars, ket, bras)?;
        Ok(r.pop().expect("one path"))
    }

    /// All term paths of a word, sharing work between paths with a common
    /// right-hand part.
    fn walk(
        &self,
        actions: &[Vec<TermAction>],
        vars: &[usize],
        nvars: usize,
        ket: &FockState,
        bras: &[Monomial],
    ) -> Result<Vec<PathResult>> {
        let (lo, hi) = self.cfg.window;
        let level = self.cfg.level;
        let max_bra = bras.iter().map(Monomial::level).max().unwrap_or(0);
        if ket.mono.level() > level || max_bra > level {
            return Err(Error::TruncationExceeded(format!(
                "sample states above truncation level {level}"
            )));
        }
        let mut one = GenSeries::new(nvars, lo, hi);
        one.add_term(&vec![Q::zero(); nvars], &vec![0; nvars], &Q::one());
        let mut states = BTreeMap::new();
        states.insert(ket.mono.clone(), one);
        let ctx = Walk {
            actions,
            vars,
            nvars,
            bras,
            max_bra,
        };
        self.descend(
            &ctx,
            actions.len(),
            states,
            ket.sector.clone(),
            vec![Q::zero(); nvars],
            vec![Q::zero(); actions.len()],
        )
    }

    fn descend(
        &self,
        w: &Walk<'_>,
        pos: usize,
        states: BTreeMap<Monomial, GenSeries>,
        sector: Sector,
        base: Vec<Q>,
        lambdas: Vec<Q>,
    ) -> Result<Vec<PathResult>> {
        let (lo, hi) = self.cfg.window;
        let level = self.cfg.level;
        if pos == 0 {
            let mut states = states;
            let mut entries = Vec::with_capacity(w.bras.len());
            for bra in w.bras {
                let mut s = states.remove(bra).unwrap_or_else(|| GenSeries::new(w.nvars, lo, hi));
                s.touch(&base);
                let mut cert = Certificate::window(w.nvars, lo);
                let slack = qi(bra.level() as i64 - level as i64);
                let mut prefix = Q::zero();
                let mut vars = Vec::new();
                for b in 0..w.actions.len().saturating_sub(1) {
                    prefix += &lambdas[b];
                    vars.push(w.vars[b]);
                    cert.sums.push((vars.clone(), &prefix + &slack));
                }
                entries.push((bra.clone(), s, cert));
            }
            return Ok(vec![PathResult { sector, entries }]);
        }
        let idx = pos - 1;
        let var = w.vars[idx];
        let cap = if idx == 0 { w.max_bra } else { level };
        let only = (idx == 0).then_some(w.bras);
        let branches: Vec<Vec<PathResult>> = w.actions[idx]
            .par_iter()
            .map(|ta| {
                let (z, lam) = self.zero_mode(ta, &sector);
                let mut base = base.clone();
                base[var] = split_exponent(&lam).0;
                let mut lambdas = lambdas.clone();
                lambdas[idx] = lam;
                let mut next: BTreeMap<Monomial, GenSeries> = BTreeMap::new();
                for (mono, coef) in &states {
                    for (m2, f) in self.act(ta, &z, mono, cap, only) {
                        if f.exact_floor() > lo {
                            return Err(Error::TruncationExceeded(format!(
                                "operator series exact only down to {} (window starts at {lo})",
                                f.floor()
                            )));
                        }
                        let acc = next.entry(m2).or_insert_with(|| GenSeries::new(w.nvars, lo, hi));
                        coef.mul_univariate_into(var, &f, acc);
                    }
                }
                self.descend(w, idx, next, self.shifted_sector(ta, &sector), base, lambdas)
            })
            .collect::<Result<_>>()?;
        Ok(branches.into_iter().flatten().collect())
    }

    /// Matrix elements of a word of currents, summed over all term paths.
    pub fn evaluate_word(
        &self,
        word: &[(&CurrentExpr, usize)],
        nvars: usize,
        ket: &FockState,
        bras: &[Monomial],
    ) -> Result<MatrixElements> {
        let actions: Vec<Vec<TermAction>> = word
            .iter()
            .map(|(c, _)| c.terms().iter().map(|t| self.term_action(t)).collect())
            .collect::<Result<_>>()?;
        self.evaluate_actions(&actions, &word.iter().map(|w| w.1).collect::<Vec<_>>(), nvars, ket, bras)
    }

    /// As [`Self::evaluate_word`] with pre-built term actions per position.
    pub fn evaluate_actions(
        &self,
        actions: &[Vec<TermAction>],
        vars: &[usize],
        nvars: usize,
        ket: &FockState,
        bras: &[Monomial],
    ) -> Result<MatrixElements> {
        let results = self.walk(actions, vars, nvars, ket, bras)?;
        let mut me = MatrixElements::default();
        for r in results {
            for (bra, s, cert) in r.entries {
                me.add(FockState { sector: r.sector.clone(), mono: bra }, s, cert);
            }
        }
        Ok(me)
    }

    /// Bosons touched by any term of the given currents.
    pub fn touched(&self, currents: &[&CurrentExpr]) -> Vec<usize> {
        let mut out: Vec<usize> = currents
            .iter()
            .flat_map(|c| c.terms())
            .flat_map(|t| t.combo.iter().map(|(a, _)| a.symbol))
            .filter_map(|s| self.boson_index(s).ok())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Vacuum plus `X_{-1}`, `X_{-1}^2`, `X_{-2}` for each listed boson.
    pub fn low_states(&self, bosons: &[usize]) -> Vec<Monomial> {
        let mut out = vec![Monomial::vacuum()];
        for &x in bosons {
            let x = x as u8;
            out.push(Monomial::from_modes(vec![(x, 1)]));
            if self.cfg.level >= 2 {
                out.push(Monomial::from_modes(vec![(x, 1), (x, 1)]));
                out.push(Monomial::from_modes(vec![(x, 2)]));
            }
        }
        out
    }

    /// Ket sample: low states over the generic sector, plus one vacuum with
    /// shifted `b`/`c` momenta for every touched `(b, c)` pair.
    pub fn state_sample(&self, bosons: &[usize]) -> Vec<FockState> {
        let sector = self.generic_sector();
        let (db, dc) = self.mixed_shift();
        let mut out: Vec<FockState> = self
            .low_states(bosons)
            .into_iter()
            .map(|mono| FockState {
                sector: sector.clone(),
                mono,
            })
            .collect();
        for &x in bosons {
            if let BosonSymbol::B(i, j) = self.bosons[x] {
                if let Ok(y) = self.boson_index(BosonSymbol::C(i, j)) {
                    if bosons.contains(&y) {
                        let mut s = sector.clone();
                        s.0[x] += &db;
                        s.0[y] += &dc;
                        out.push(FockState {
                            sector: s,
                            mono: Monomial::vacuum(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn describe(&self, state: &FockState) -> String {
        let modes: Vec<String> = state
            .mono
            .modes()
            .iter()
            .map(|(x, n)| format!("{}_{{-{n}}}", self.bosons[*x as usize]))
            .collect();
        let ls: Vec<String> = state.sector.0.iter().map(fmt_q).collect();
        format!("{}|{}>", modes.join(" "), ls.join(","))
    }
}

fn binom(n: u32, k: u32) -> Q {
    let mut r = Q::one();
    for i in 0..k {
        r = r * Q::from_integer((n - i).into()) / Q::from_integer((i + 1).into());
    }
    r
}

fn build_creation(
    gamma: &[(Mode, Laurent)],
    start: usize,
    room: usize,
    mono: Monomial,
    coef: Laurent,
    floor: i64,
    out: &mut Vec<(Monomial, Laurent)>,
) {
    out.push((mono.clone(), coef.clone()));
    for (idx, (mode, g)) in gamma.iter().enumerate().skip(start) {
        let n = mode.1 as usize;
        let mut m = mono.clone();
        let mut c = coef.clone();
        let mut mult = 0u32;
        let mut used = 0usize;
        while used + n <= room {
            used += n;
            mult += 1;
            m = m.merge(&Monomial::from_modes(vec![*mode]));
            c = c.mul(g).scale(&(Q::one() / Q::from_integer(mult.into())));
            build_creation(gamma, idx + 1, room - used, m.clone(), c.clone(), floor, out);
        }
    }
}

struct Walk<'a> {
    actions: &'a [Vec<TermAction>],
    vars: &'a [usize],
    nvars: usize,
    bras: &'a [Monomial],
    max_bra: usize,
}

/// One term path's contribution, per bra.
#[derive(Clone, Debug)]
pub struct PathResult {
    pub sector: Sector,
    pub entries: Vec<(Monomial, GenSeries, Certificate)>,
}

/// Matrix element and its certificate.
#[derive(Clone, Debug)]
pub struct Entry {
    pub series: GenSeries,
    pub cert: Certificate,
}

/// `⟨bra| word |ket⟩` for every bra, keyed by bra state.
#[derive(Clone, Debug, Default)]
pub struct MatrixElements {
    pub entries: BTreeMap<FockState, Entry>,
}

impl MatrixElements {
    pub fn add(&mut self, bra: FockState, s: GenSeries, cert: Certificate) {
        match self.entries.get_mut(&bra) {
            Some(e) => {
                e.series.add_assign(&s);
                e.cert = e.cert.intersect(&cert);
            }
            None => {
                self.entries.insert(bra, Entry { series: s, cert });
            }
        }
    }

    pub fn get(&self, bra: &FockState) -> Option<&Entry> {
        self.entries.get(bra)
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ls: Vec<String> = self.0.iter().map(fmt_q).collect();
        write!(f, "[{}]", ls.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boson::{FieldAtom, FieldCombo, FieldPart, Prefactor};
    use crate::scalar::{KPoly, ShiftScalar};

    fn space(n: usize, level: usize) -> FockSpace {
        FockSpace::new(OracleConfig {
            n,
            level,
            window: (-6, 6),
            ..OracleConfig::default()
        })
        .unwrap()
    }

    fn single(sym: BosonSymbol, part: FieldPart, c: i64) -> VertexTerm {
        VertexTerm::new(Prefactor::one(), FieldCombo::single(FieldAtom::new(sym, part), KPoly::constant(qi(c))))
    }

    #[test]
    fn q_shift_lowers_b_momentum() {
        let sp = space(2, 2);
        let t = single(BosonSymbol::B(1, 2), FieldPart::MinusHalf(ShiftScalar::zero()), 1);
        let ta = sp.term_action(&t).unwrap();
        let b = sp.boson_index(BosonSymbol::B(1, 2)).unwrap();
        assert_eq!(ta.qshift()[b], qi(-1));
        let c = sp.boson_index(BosonSymbol::C(1, 2)).unwrap();
        assert_eq!(ta.qshift()[c], qi(0));
    }

    #[test]
    fn annihilation_on_vacuum_is_zero_mode_only() {
        let sp = space(2, 2);
        let b = sp.boson_index(BosonSymbol::B(1, 2)).unwrap();
        let t = single(BosonSymbol::B(1, 2), FieldPart::PlusHalf(ShiftScalar::constant(q(1, 2))), 1);
        let ta = sp.term_action(&t).unwrap();
        let mut sector = sp.vacuum_sector();
        sector.0[b] = q(1, 3);
        let ket = FockState {
            sector,
            mono: Monomial::vacuum(),
        };
        let me = sp.evaluate_path(&[(&ta, 0)], 1, &ket, &[Monomial::vacuum()]).unwrap();
        // (x + 1/2)^{1/3}
        let s = &me.entries[0].1;
        assert_eq!(s.coeff(&[q(1, 3)]), qi(1));
        assert_eq!(s.coeff(&[q(-2, 3)]), q(1, 6));
    }

    #[test]
    fn two_point_function_of_b() {
        // ⟨0| :e^{b(u)}: :e^{-b(v)}: |0⟩ at zero momentum = (u - v)^{-1}... up to sign:
        // ⟨b_+(u) b_-(v)⟩ = -log(u - v), so e^{⟨b(u),-b(v)⟩} = u - v.
        let sp = space(2, 3);
        let full = FieldPart::Full {
            minus: ShiftScalar::zero(),
            plus: ShiftScalar::zero(),
        };
        let x = sp.term_action(&single(BosonSymbol::B(1, 2), full.clone(), 1)).unwrap();
        let y = sp.term_action(&single(BosonSymbol::B(1, 2), full, -1)).unwrap();
        let ket = FockState {
            sector: sp.vacuum_sector(),
            mono: Monomial::vacuum(),
        };
        let r = sp.evaluate_path(&[(&x, 0), (&y, 1)], 2, &ket, &[Monomial::vacuum()]).unwrap();
        let (_, s, _) = &r.entries[0];
        // zero modes: e^{-q_b} raises l_b by 1, then u^{l_b} = u
        assert_eq!(s.coeff(&[qi(1), qi(0)]), qi(1));
        assert_eq!(s.coeff(&[qi(0), qi(1)]), qi(-1));
        assert_eq!(s.nonzero().len(), 2);
    }

    #[test]
    fn creation_table_is_exponential() {
        let sp = space(2, 3);
        let t = single(BosonSymbol::C(1, 2), FieldPart::MinusHalf(ShiftScalar::zero()), 2);
        let ta = sp.term_action(&t).unwrap();
        // levels ≤ 3 in one boson: partitions of 0..3 → 1 + 1 + 2 + 3
        assert_eq!(ta.creation.len(), 7);
        let c = sp.boson_index(BosonSymbol::C(1, 2)).unwrap() as u8;
        let sq = ta
            .creation
            .iter()
            .find(|(m, _)| *m == Monomial::from_modes(vec![(c, 1), (c, 1)]))
            .unwrap();
        // (2x)^2/2! = 2x^2
        assert_eq!(sq.1.get(2).unwrap(), qi(2));
    }

    #[test]
    fn sample_has_mixed_momentum_states() {
        let sp = space(2, 2);
        let all: Vec<usize> = (0..sp.bosons().len()).collect();
        let s = sp.state_sample(&all);
        assert_eq!(s.len(), 1 + 3 * 3 + 1);
        assert!(s.iter().any(|st| st.sector != sp.generic_sector()));
    }
}
