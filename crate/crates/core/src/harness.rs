//! Seeded Monte-Carlo experiment runner and report emission.
//!
//! Trials are embarrassingly parallel: the rng substream of trial `t` is
//! derived from the master seed by a fixed SplitMix64 mix indexed by `t`
//! (generator stream `2t`, tester stream `2t+1`), so parallel and serial
//! execution aggregate to identical statistics and the whole report is a
//! pure function of the configuration.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance::{exact_distance_with_budget, DEFAULT_EDGE_BUDGET};
use crate::error::{Error, Result};
use crate::family::{
    dno_family, full_family, junta_family, random_family, read_family, star_family, ExplicitFamily,
    FamilyOracle, Junta,
};
use crate::rat::Rat;
use crate::testers::{
    canonical_sample_size, canonical_tester, density_tester, disjoint_pair_tester,
    junta_sample_size, junta_tester, TesterReport, Verdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TesterKind {
    Canonical,
    Junta,
    Density,
    DisjointPair,
}

impl TesterKind {
    pub fn name(&self) -> &'static str {
        match self {
            TesterKind::Canonical => "canonical",
            TesterKind::Junta => "junta",
            TesterKind::Density => "density",
            TesterKind::DisjointPair => "disjoint-pair",
        }
    }
}

impl std::str::FromStr for TesterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(TesterKind::Canonical),
            "junta" => Ok(TesterKind::Junta),
            "density" => Ok(TesterKind::Density),
            "disjoint-pair" => Ok(TesterKind::DisjointPair),
            other => Err(Error::InvalidParameter(format!("unknown tester {other:?}"))),
        }
    }
}

/// Instance source for one experiment. Star and full fall back to
/// predicate oracles past the bitmap cap; dno and random draw a fresh
/// instance per trial from the trial's generator substream.
#[derive(Debug, Clone)]
pub enum GeneratorSpec {
    Star { center: u32 },
    Junta { junta: Junta },
    Full,
    Dno { eps: Rat },
    Random { p: Rat },
    File { path: PathBuf },
}

impl GeneratorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::Star { .. } => "star",
            GeneratorSpec::Junta { .. } => "junta",
            GeneratorSpec::Full => "full",
            GeneratorSpec::Dno { .. } => "dno",
            GeneratorSpec::Random { .. } => "random",
            GeneratorSpec::File { .. } => "file",
        }
    }

    fn is_per_trial(&self) -> bool {
        matches!(
            self,
            GeneratorSpec::Dno { .. } | GeneratorSpec::Random { .. }
        )
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n: u32,
    pub k: u32,
    pub eps: Rat,
    pub eps1: Option<Rat>,
    pub eps2: Option<Rat>,
    pub tester: TesterKind,
    pub generator: GeneratorSpec,
    /// Explicit query budget; when absent the tester's sample-size formula
    /// applies (canonical: r and c; junta: j; density: ceil(12/eps2);
    /// disjoint-pair: ceil(1/eps)).
    pub m: Option<u64>,
    pub r: Option<u32>,
    pub c: Option<f64>,
    pub j: Option<u32>,
    pub trials: u64,
    pub seed: u64,
    pub validate: bool,
    pub edge_budget: u64,
}

impl ExperimentConfig {
    pub fn new(n: u32, k: u32, eps: Rat, tester: TesterKind, generator: GeneratorSpec) -> Self {
        ExperimentConfig {
            n,
            k,
            eps,
            eps1: None,
            eps2: None,
            tester,
            generator,
            m: None,
            r: None,
            c: None,
            j: None,
            trials: 1,
            seed: 0,
            validate: false,
            edge_budget: DEFAULT_EDGE_BUDGET,
        }
    }

    /// Resolves the per-trial sample budget from the explicit `m` or the
    /// tester's formula.
    pub fn resolve_m(&self) -> Result<u64> {
        if let Some(m) = self.m {
            return Ok(m);
        }
        match self.tester {
            TesterKind::Canonical => {
                canonical_sample_size(self.r.unwrap_or(2), self.eps, self.c.unwrap_or(1.0), self.k)
            }
            TesterKind::Junta => {
                let eps2 = self.require_eps2()?;
                junta_sample_size(eps2, self.j.unwrap_or(1), self.n)
            }
            TesterKind::Density => {
                let eps2 = self.require_eps2()?;
                if eps2.is_zero() {
                    return Err(Error::InvalidParameter(
                        "density tester requires eps2 > 0".into(),
                    ));
                }
                let m = (12u128 * u128::from(eps2.den())).div_ceil(u128::from(eps2.num()));
                u64::try_from(m).map_err(|_| Error::Overflow("sample size exceeds u64".into()))
            }
            TesterKind::DisjointPair => {
                if self.eps.is_zero() {
                    return Err(Error::InvalidParameter(
                        "disjoint-pair tester requires eps > 0".into(),
                    ));
                }
                Ok(self.eps.den().div_ceil(self.eps.num()))
            }
        }
    }

    fn require_eps2(&self) -> Result<Rat> {
        self.eps2
            .ok_or_else(|| Error::InvalidParameter("this tester requires --eps2".into()))
    }
}

/// Classification of one instance against `eps * C(n,k)`, with the exact
/// distance attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub distance: u64,
    pub far: bool,
}

/// Exact-oracle classification: far iff `distance > eps * C(n,k)`, decided
/// in integer arithmetic.
pub fn validate_instance(family: &ExplicitFamily, eps: Rat) -> Result<Validation> {
    validate_instance_with_budget(family, eps, DEFAULT_EDGE_BUDGET)
}

pub fn validate_instance_with_budget(
    family: &ExplicitFamily,
    eps: Rat,
    edge_budget: u64,
) -> Result<Validation> {
    let distance = exact_distance_with_budget(family, edge_budget)?;
    Ok(Validation {
        distance,
        far: eps.count_exceeds(distance, family.universe_size()),
    })
}

/// Aggregated outcome of a trial batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub trials: u64,
    pub rejections: u64,
    pub acceptances: u64,
    pub rejection_rate: Rat,
    pub wilson_interval: (f64, f64),
    pub mean_queries: Rat,
    /// Minimum exact distance among validated instances (the binding
    /// certificate when instances vary per trial).
    pub validated_distance: Option<u64>,
    /// "certified" when every instance passed the exact oracle within
    /// budget, "uncertified" when any run exceeded it or used a predicate
    /// oracle, "skipped" when validation was off.
    pub certification: String,
}

/// SplitMix64 of `master + index * golden`; the documented substream mix.
pub fn substream_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 95% Wilson score interval for `successes / trials`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.96f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let margin = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (
        ((center - margin) / denom).clamp(0.0, 1.0),
        ((center + margin) / denom).clamp(0.0, 1.0),
    )
}

enum Instance {
    Explicit(ExplicitFamily),
    StarPredicate { n: u32, k: u32, center: u32 },
    FullPredicate { n: u32, k: u32 },
}

impl Instance {
    fn oracle(&self) -> Result<FamilyOracle<'_>> {
        match self {
            Instance::Explicit(f) => Ok(FamilyOracle::from_family(f)),
            Instance::StarPredicate { n, k, center } => FamilyOracle::star(*n, *k, *center),
            Instance::FullPredicate { n, k } => FamilyOracle::full(*n, *k),
        }
    }
}

fn build_instance(cfg: &ExperimentConfig, generator_seed: u64) -> Result<Instance> {
    let (n, k) = (cfg.n, cfg.k);
    match &cfg.generator {
        GeneratorSpec::Star { center } => match star_family(n, k, *center) {
            Ok(f) => Ok(Instance::Explicit(f)),
            Err(Error::Budget(_)) => Ok(Instance::StarPredicate {
                n,
                k,
                center: *center,
            }),
            Err(e) => Err(e),
        },
        GeneratorSpec::Full => match full_family(n, k) {
            Ok(f) => Ok(Instance::Explicit(f)),
            Err(Error::Budget(_)) => Ok(Instance::FullPredicate { n, k }),
            Err(e) => Err(e),
        },
        GeneratorSpec::Junta { junta } => Ok(Instance::Explicit(junta_family(n, k, junta)?)),
        GeneratorSpec::Dno { eps } => {
            let mut rng = ChaCha8Rng::seed_from_u64(generator_seed);
            Ok(Instance::Explicit(dno_family(n, k, *eps, &mut rng)?))
        }
        GeneratorSpec::Random { p } => {
            let mut rng = ChaCha8Rng::seed_from_u64(generator_seed);
            Ok(Instance::Explicit(random_family(n, k, *p, &mut rng)?))
        }
        GeneratorSpec::File { path } => {
            let f = read_family(path)?;
            if f.n() != n || f.k() != k {
                return Err(Error::InvalidParameter(format!(
                    "family file is over ({},{}), run asked for ({n},{k})",
                    f.n(),
                    f.k()
                )));
            }
            Ok(Instance::Explicit(f))
        }
    }
}

fn run_tester(
    cfg: &ExperimentConfig,
    oracle: &mut FamilyOracle,
    m: u64,
    seed: u64,
) -> Result<TesterReport> {
    match cfg.tester {
        TesterKind::Canonical => canonical_tester(oracle, m, seed),
        TesterKind::Junta => junta_tester(
            oracle,
            cfg.eps1.unwrap_or(Rat::ZERO),
            cfg.require_eps2()?,
            cfg.j.unwrap_or(1),
            m,
            seed,
        ),
        TesterKind::Density => density_tester(oracle, cfg.require_eps2()?, m, seed),
        TesterKind::DisjointPair => disjoint_pair_tester(oracle, m, seed),
    }
}

struct TrialOutcome {
    rejected: bool,
    queries: u64,
    validation: Option<Validation>,
    over_budget: bool,
}

/// Runs `cfg.trials` independent trials. Deterministic generators share one
/// instance; dno and random draw a fresh instance per trial. With
/// `validate`, every explicit instance is classified by the exact oracle;
/// instances past the edge budget (or predicate-backed) leave the batch
/// uncertified rather than failing.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<TrialStats> {
    if cfg.trials < 1 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let m = cfg.resolve_m()?;
    let shared = if cfg.generator.is_per_trial() {
        None
    } else {
        Some(build_instance(cfg, substream_seed(cfg.seed, u64::MAX))?)
    };
    let shared_validation: Option<(Option<Validation>, bool)> = match (&shared, cfg.validate) {
        (Some(instance), true) => Some(validate_one(cfg, instance)?),
        _ => None,
    };

    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| -> Result<TrialOutcome> {
            let local;
            let instance = match &shared {
                Some(i) => i,
                None => {
                    local = build_instance(cfg, substream_seed(cfg.seed, 2 * t))?;
                    &local
                }
            };
            let mut oracle = instance.oracle()?;
            let report = run_tester(cfg, &mut oracle, m, substream_seed(cfg.seed, 2 * t + 1))?;
            let (validation, over_budget) = match (&shared_validation, cfg.validate) {
                (Some(v), _) => *v,
                (None, true) => validate_one(cfg, instance)?,
                (None, false) => (None, false),
            };
            Ok(TrialOutcome {
                rejected: report.verdict == Verdict::Reject,
                queries: report.queries_used,
                validation,
                over_budget,
            })
        })
        .collect::<Result<_>>()?;

    let rejections = outcomes.iter().filter(|o| o.rejected).count() as u64;
    let total_queries: u64 = outcomes.iter().map(|o| o.queries).sum();
    let validated_distance = outcomes
        .iter()
        .filter_map(|o| o.validation.map(|v| v.distance))
        .min();
    let certification = if !cfg.validate {
        "skipped"
    } else if outcomes
        .iter()
        .all(|o| o.validation.is_some() && !o.over_budget)
    {
        "certified"
    } else {
        "uncertified"
    };
    Ok(TrialStats {
        trials: cfg.trials,
        rejections,
        acceptances: cfg.trials - rejections,
        rejection_rate: Rat::new_raw(rejections, cfg.trials)?,
        wilson_interval: wilson_interval(rejections, cfg.trials),
        mean_queries: Rat::new_raw(total_queries, cfg.trials)?,
        validated_distance,
        certification: certification.to_string(),
    })
}

fn validate_one(cfg: &ExperimentConfig, instance: &Instance) -> Result<(Option<Validation>, bool)> {
    match instance {
        Instance::Explicit(f) => match validate_instance_with_budget(f, cfg.eps, cfg.edge_budget) {
            Ok(v) => Ok((Some(v), false)),
            Err(Error::Budget(_)) => Ok((None, true)),
            Err(e) => Err(e),
        },
        _ => Ok((None, true)),
    }
}

/// One report row: configuration echo plus aggregated statistics. Rationals
/// appear as a 6-digit decimal string alongside exact numerator and
/// denominator fields; there are no timing fields, so emission is bit-exact
/// for a fixed flag vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: u32,
    pub k: u32,
    pub tester: String,
    pub generator: String,
    pub eps: String,
    pub eps_num: u64,
    pub eps_den: u64,
    pub eps2: Option<String>,
    pub eps2_num: Option<u64>,
    pub eps2_den: Option<u64>,
    pub m: u64,
    pub trials: u64,
    pub seed: u64,
    pub rejections: u64,
    pub acceptances: u64,
    pub rejection_rate: String,
    pub rejection_rate_num: u64,
    pub rejection_rate_den: u64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub mean_queries: String,
    pub mean_queries_num: u64,
    pub mean_queries_den: u64,
    pub validated_distance: Option<u64>,
    pub certification: String,
}

impl ReportRow {
    pub fn new(cfg: &ExperimentConfig, stats: &TrialStats) -> Result<Self> {
        Ok(ReportRow {
            n: cfg.n,
            k: cfg.k,
            tester: cfg.tester.name().to_string(),
            generator: cfg.generator.name().to_string(),
            eps: cfg.eps.to_decimal6(),
            eps_num: cfg.eps.num(),
            eps_den: cfg.eps.den(),
            eps2: cfg.eps2.map(|e| e.to_decimal6()),
            eps2_num: cfg.eps2.map(|e| e.num()),
            eps2_den: cfg.eps2.map(|e| e.den()),
            m: cfg.resolve_m()?,
            trials: stats.trials,
            seed: cfg.seed,
            rejections: stats.rejections,
            acceptances: stats.acceptances,
            rejection_rate: stats.rejection_rate.to_decimal6(),
            rejection_rate_num: stats.rejection_rate.num(),
            rejection_rate_den: stats.rejection_rate.den(),
            wilson_lo: stats.wilson_interval.0,
            wilson_hi: stats.wilson_interval.1,
            mean_queries: stats.mean_queries.to_decimal6(),
            mean_queries_num: stats.mean_queries.num(),
            mean_queries_den: stats.mean_queries.den(),
            validated_distance: stats.validated_distance,
            certification: stats.certification.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

const CSV_HEADER: &str = "n,k,tester,generator,eps,eps_num,eps_den,eps2,eps2_num,eps2_den,m,\
trials,seed,rejections,acceptances,rejection_rate,rejection_rate_num,rejection_rate_den,\
wilson_lo,wilson_hi,mean_queries,mean_queries_num,mean_queries_den,validated_distance,certification";

fn opt_cell<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

/// Renders rows with stable column/key order. CSV prints Wilson bounds with
/// six digits; JSON keeps full-precision floats so parsing the emitted text
/// recovers the rows exactly.
pub fn emit_report(rows: &[ReportRow], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("report rows serialize");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for r in rows {
                let cells = [
                    r.n.to_string(),
                    r.k.to_string(),
                    r.tester.clone(),
                    r.generator.clone(),
                    r.eps.clone(),
                    r.eps_num.to_string(),
                    r.eps_den.to_string(),
                    opt_cell(&r.eps2),
                    opt_cell(&r.eps2_num),
                    opt_cell(&r.eps2_den),
                    r.m.to_string(),
                    r.trials.to_string(),
                    r.seed.to_string(),
                    r.rejections.to_string(),
                    r.acceptances.to_string(),
                    r.rejection_rate.clone(),
                    r.rejection_rate_num.to_string(),
                    r.rejection_rate_den.to_string(),
                    format!("{:.6}", r.wilson_lo),
                    format!("{:.6}", r.wilson_hi),
                    r.mean_queries.clone(),
                    r.mean_queries_num.to_string(),
                    r.mean_queries_den.to_string(),
                    opt_cell(&r.validated_distance),
                    r.certification.clone(),
                ];
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
    }
}

pub fn write_report(rows: &[ReportRow], format: ReportFormat, path: &Path) -> Result<()> {
    let text = emit_report(rows, format);
    let mut file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(text.as_bytes()).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
