//! Uniform check records and the suite runners that produce them.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::boson::{AVariant, Sign};
use crate::cartan::AlgebraData;
use crate::correspondence::correspond_all;
use crate::currents::{reduce_to_n2, BuildOptions, CurrentKind, EnReading};
use crate::error::{Error, Result};
use crate::fock::{Momenta, OracleConfig};
use crate::oracle::{Oracle, OracleOutcome};
use crate::relation::RelationId;
use crate::scalar::{fmt_q, Q};
use crate::symbolic::{self, bundled_candidates, check_screening_candidate, variant_invariance, verify_linear_suite, verify_ope_lemma, OpeLemma};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    OpeLemmas,
    VariantInvariance,
    LinearRelations,
    N2Reduction,
    OracleRelations,
    CrossEngine,
    Correspondence,
    ScreeningCheck,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::OpeLemmas,
        Suite::VariantInvariance,
        Suite::LinearRelations,
        Suite::N2Reduction,
        Suite::OracleRelations,
        Suite::CrossEngine,
        Suite::Correspondence,
        Suite::ScreeningCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OpeLemmas => "ope-lemmas",
            Suite::VariantInvariance => "variant-invariance",
            Suite::LinearRelations => "linear-relations",
            Suite::N2Reduction => "n2-reduction",
            Suite::OracleRelations => "oracle-relations",
            Suite::CrossEngine => "cross-engine",
            Suite::Correspondence => "correspondence",
            Suite::ScreeningCheck => "screening-check",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "oracle" {
            return Ok(Suite::OracleRelations);
        }
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::Parse(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

/// Verdict of one check. Only `Fail` makes a run fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A symbolic term check that needs the oracle.
    Deferred,
    /// A screening candidate that does not satisfy both OPEs.
    Obstructed,
    /// An oracle check with no certified cells in its window.
    Inconclusive,
}

impl Verdict {
    /// Whether the record keeps a run from passing.
    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fail | Verdict::Inconclusive)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Deferred => "deferred",
            Verdict::Obstructed => "obstructed",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Everything a run depends on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub n: usize,
    pub k: Q,
    pub hbar: Q,
    pub level: usize,
    pub window: (i64, i64),
    /// Truncation and window for the three-variable Serre check.
    pub serre_level: usize,
    pub serre_window: (i64, i64),
    pub variant: AVariant,
    pub en_reading: EnReading,
    pub momenta: Momenta,
    /// Relations to run; empty means all that apply to the suite.
    pub relations: Vec<RelationId>,
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let o = OracleConfig::default();
        Self {
            n: o.n,
            k: o.k,
            hbar: o.hbar,
            level: o.level,
            window: o.window,
            serre_level: 2,
            serre_window: (-5, 5),
            variant: AVariant::Standard,
            en_reading: EnReading::default(),
            momenta: o.momenta,
            relations: Vec::new(),
            seed: None,
        }
    }
}

impl RunConfig {
    pub fn build_options(&self) -> BuildOptions {
        BuildOptions {
            variant: self.variant,
            en_reading: self.en_reading,
        }
    }

    pub fn oracle_config(&self, rel: RelationId) -> OracleConfig {
        let (level, window) = if rel == RelationId::Y7 {
            (self.serre_level, self.serre_window)
        } else {
            (self.level, self.window)
        };
        OracleConfig {
            n: self.n,
            k: self.k.clone(),
            hbar: self.hbar.clone(),
            level,
            window,
            momenta: self.momenta.clone(),
            seed: self.seed,
        }
    }

    fn wants(&self, rel: RelationId) -> bool {
        self.relations.is_empty() || self.relations.contains(&rel)
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            n: self.n,
            k: fmt_q(&self.k),
            hbar: fmt_q(&self.hbar),
            level: self.level,
            window: [self.window.0, self.window.1],
            variant: self.variant.to_string(),
            en_reading: self.en_reading.to_string(),
            momenta: self.momenta.to_string(),
            seed: self.seed,
        }
    }
}

/// The configuration as written into every record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: String,
    pub hbar: String,
    #[serde(rename = "L")]
    pub level: usize,
    pub window: [i64; 2],
    pub variant: String,
    pub en_reading: String,
    pub momenta: String,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub relation: String,
    pub indices: Vec<usize>,
    pub config: ConfigEcho,
    pub verdict: Verdict,
    /// Exact residual: `p/q` for oracle checks, a factor ratio for symbolic ones.
    pub residual: String,
    pub millis: u128,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl CheckRecord {
    pub fn line(&self) -> String {
        let idx: Vec<String> = self.indices.iter().map(usize::to_string).collect();
        let mut s = format!(
            "{:<10} {:<16} {:<28} ({:<5}) residual {}  {} ms",
            self.verdict.to_string().to_uppercase(),
            self.suite,
            self.relation,
            idx.join(","),
            self.residual,
            self.millis
        );
        if !self.detail.is_empty() {
            s.push_str("  ");
            s.push_str(&self.detail);
        }
        s
    }
}

fn pass_fail(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Runs one suite under `cfg`, in a fixed order.
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let echo = cfg.echo();
    let record = |relation: String, indices: Vec<usize>, verdict, residual: String, millis, detail: String| CheckRecord {
        suite,
        relation,
        indices,
        config: echo.clone(),
        verdict,
        residual,
        millis,
        detail,
    };
    let mut out = Vec::new();
    match suite {
        Suite::OpeLemmas => {
            for lemma in OpeLemma::ALL {
                let start = Instant::now();
                let rep = verify_ope_lemma(lemma, cfg.n)?;
                let ms = start.elapsed().as_millis();
                for c in &rep.checks {
                    out.push(record(lemma.to_string(), c.index_list.clone(), pass_fail(c.pass), c.ratio.clone(), ms, format!("computed {}", c.computed)));
                }
            }
        }
        Suite::VariantInvariance => {
            let start = Instant::now();
            let rep = variant_invariance(cfg.n, cfg.en_reading)?;
            let detail = match rep.mismatches.first() {
                Some(m) => m.clone(),
                None => format!("{} term pairs", rep.pairs_checked),
            };
            let residual = rep.mismatches.len().to_string();
            out.push(record("exchange-factors".into(), vec![], pass_fail(rep.pass()), residual, start.elapsed().as_millis(), detail));
        }
        Suite::LinearRelations => {
            for rel in RelationId::ALL.into_iter().filter(|r| r.is_linear() && cfg.wants(*r)) {
                let start = Instant::now();
                let reps = verify_linear_suite(rel, cfg.n, cfg.build_options())?;
                let ms = start.elapsed().as_millis();
                for rep in reps {
                    let verdict = match rep.verdict() {
                        symbolic::Verdict::Pass => Verdict::Pass,
                        symbolic::Verdict::Fail => Verdict::Fail,
                        symbolic::Verdict::DeferredToOracle => Verdict::Deferred,
                    };
                    let deferred: Vec<&str> = rep.deferred_terms().map(|t| t.label.as_str()).collect();
                    let residual = rep.deferred_terms().next().map_or_else(|| "1".to_string(), |t| t.ratio.clone());
                    let detail = if deferred.is_empty() {
                        format!("{} terms", rep.terms.len())
                    } else {
                        format!("deferred: {}", deferred.join(" "))
                    };
                    out.push(record(rel.to_string(), vec![rep.i, rep.j], verdict, residual, ms, detail));
                }
            }
        }
        Suite::N2Reduction => {
            for variant in [AVariant::Standard, AVariant::Alternate] {
                for kind in [CurrentKind::H(Sign::Plus), CurrentKind::H(Sign::Minus), CurrentKind::E(Sign::Plus), CurrentKind::E(Sign::Minus)] {
                    let start = Instant::now();
                    let rep = reduce_to_n2(kind, variant)?;
                    let residual = if rep.pass { "0" } else { "structural" };
                    out.push(record(format!("{kind} {variant}"), vec![1], pass_fail(rep.pass), residual.into(), start.elapsed().as_millis(), String::new()));
                }
            }
        }
        Suite::OracleRelations | Suite::CrossEngine => {
            let rels: Vec<RelationId> = if suite == Suite::CrossEngine {
                vec![RelationId::Y2, RelationId::Y3]
            } else {
                RelationId::ALL.to_vec()
            };
            for rel in rels.into_iter().filter(|r| cfg.wants(*r)) {
                let oracle = Oracle::new(cfg.oracle_config(rel), cfg.build_options())?;
                let mut rel_echo = echo.clone();
                rel_echo.level = oracle.space().config().level;
                let w = oracle.space().config().window;
                rel_echo.window = [w.0, w.1];
                for (i, j) in oracle.index_pairs(rel) {
                    let outcomes = if suite == Suite::CrossEngine {
                        oracle.cross_engine(rel, i, j)?
                    } else {
                        oracle.verify(rel, i, j)?
                    };
                    for o in outcomes {
                        let mut r = oracle_record(suite, o);
                        r.config = rel_echo.clone();
                        out.push(r);
                    }
                }
            }
        }
        Suite::Correspondence => {
            let start = Instant::now();
            let reps = correspond_all()?;
            let ms = start.elapsed().as_millis();
            for rep in reps {
                let ratio = rep.variants.iter().flat_map(|v| v.terms.iter()).map(|t| t.ratio.clone()).next().unwrap_or_default();
                out.push(record(
                    format!("({}) -> {}", rep.q_relation, rep.y_relation),
                    vec![],
                    pass_fail(rep.matched()),
                    ratio,
                    ms,
                    rep.notes.join("; "),
                ));
            }
        }
        Suite::ScreeningCheck => {
            let alg = AlgebraData::new(cfg.n)?;
            for i in 1..cfg.n {
                for cand in bundled_candidates(&alg, i)? {
                    let start = Instant::now();
                    let rep = check_screening_candidate(&alg, i, &cand)?;
                    let verdict = if rep.success() { Verdict::Pass } else { Verdict::Obstructed };
                    let first = &rep.residuals[0];
                    let residual = format!("[{}] / [{}]", first.with_a_minus, first.with_a_plus);
                    let detail = format!(
                        "{} ({}): positive-frequency half {}, negative-frequency half {}",
                        cand.name,
                        cand.variant,
                        if rep.plus_half_ok() { "ok" } else { "obstructed" },
                        if rep.minus_half_ok() { "ok" } else { "obstructed" },
                    );
                    out.push(record("screening".into(), vec![i], verdict, residual, start.elapsed().as_millis(), detail));
                }
            }
        }
    }
    Ok(out)
}

fn oracle_record(suite: Suite, o: OracleOutcome) -> CheckRecord {
    let mut detail = format!("{} cells, support {}, {} kets", o.cells, o.support, o.kets);
    if let Some(f) = &o.first_failure {
        detail.push_str(", first failure at ");
        detail.push_str(f);
    }
    let verdict = if o.cells == 0 {
        detail.push_str("; nothing certified inside the window, widen it or lower the momenta");
        Verdict::Inconclusive
    } else {
        pass_fail(o.passed)
    };
    CheckRecord {
        suite,
        relation: format!("{} {}", o.relation, o.label),
        indices: o.indices,
        config: RunConfig::default().echo(),
        verdict,
        residual: o.residual,
        millis: o.millis,
        detail,
    }
}

/// `true` when no record failed.
pub fn all_passed(records: &[CheckRecord]) -> bool {
    !records.iter().any(|r| r.verdict.is_failure())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    #[test]
    fn empty_window_is_inconclusive() {
        let cfg = RunConfig {
            n: 2,
            relations: vec![RelationId::Y5],
            momenta: Momenta::Explicit(vec![qi(1), qi(7), qi(9)]),
            ..RunConfig::default()
        };
        let recs = run_suite(Suite::OracleRelations, &cfg).unwrap();
        let em = recs.iter().find(|r| r.relation == "y5 E- E-").unwrap();
        assert_eq!(em.verdict, Verdict::Inconclusive);
        assert!(!all_passed(&recs));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("oracle".parse::<Suite>().unwrap(), Suite::OracleRelations);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn ope_lemma_records() {
        let cfg = RunConfig { n: 3, ..RunConfig::default() };
        let recs = run_suite(Suite::OpeLemmas, &cfg).unwrap();
        assert!(all_passed(&recs));
        let aapn: Vec<_> = recs.iter().filter(|r| r.relation == "aapn").collect();
        assert_eq!(aapn.len(), 4);
        assert_eq!(aapn[1].indices, vec![1, 2]);
        assert!(aapn.iter().all(|r| r.residual == "1"));
    }

    #[test]
    fn screening_never_succeeds() {
        let cfg = RunConfig { n: 3, ..RunConfig::default() };
        let recs = run_suite(Suite::ScreeningCheck, &cfg).unwrap();
        assert!(!recs.is_empty());
        assert!(recs.iter().all(|r| r.verdict == Verdict::Obstructed));
        assert!(all_passed(&recs));
    }

    #[test]
    fn oracle_records_echo_serre_window() {
        let cfg = RunConfig { n: 2, k: qi(1), relations: vec![RelationId::Y7, RelationId::Y2], ..RunConfig::default() };
        let recs = run_suite(Suite::OracleRelations, &cfg).unwrap();
        // no adjacent pairs at N = 2, so only y2 runs
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].relation, "y2 H+ H-");
        assert_eq!(recs[0].config.window, [-8, 8]);
        let json = serde_json::to_string(&recs[0]).unwrap();
        for key in ["\"suite\":\"oracle-relations\"", "\"relation\"", "\"indices\":[1,1]", "\"verdict\":\"pass\"", "\"residual\":\"0\"", "\"millis\"", "\"N\":2"] {
            assert!(json.contains(key), "{key} missing in {json}");
        }
    }
}
