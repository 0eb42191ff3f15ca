//! The four testers, their sample-size calculators, and the intersecting
//! junta enumerator.
//!
//! Every tester is non-adaptive by construction: all query points are drawn
//! from the seeded generator before the first oracle answer is read, so the
//! queried rank multiset is a function of `(seed, n, k, m)` alone. The
//! canonical and disjoint-pair testers are one-sided: a reject always
//! carries a witness pair of disjoint members.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{
    elements_disjoint, rank, sample_disjoint_pair, sample_ksubset, KSubset,
};
use crate::error::{Error, Result};
use crate::family::{FamilyOracle, Junta};
use crate::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

/// Estimated deviation of the sampled family from one junta: `alpha` is the
/// fraction of samples answered 1 that fall outside the junta, kept with
/// denominator equal to the sample count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JuntaEstimate {
    pub junta: Junta,
    pub alpha: Rat,
}

/// Outcome of one tester run.
#[derive(Debug, Clone)]
pub struct TesterReport {
    pub verdict: Verdict,
    pub queries_used: u64,
    pub budget: u64,
    /// Ranks of a violating pair: both answered 1 and disjoint. Present only
    /// on rejections by the one-sided testers.
    pub witness: Option<(u64, u64)>,
    /// Queried ranks in query order.
    pub samples: Vec<u64>,
    pub seed: u64,
    /// Recorded for the tolerant junta tester; the algorithm never reads it.
    pub eps1: Option<Rat>,
    /// The junta minimizing alpha, for diagnostics (junta tester only).
    pub best_junta: Option<JuntaEstimate>,
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws m uniform k-subsets, queries all of them, and rejects iff two
/// sampled sets with answer 1 are disjoint. Accepts every intersecting
/// family with probability 1.
pub fn canonical_tester(oracle: &mut FamilyOracle, m: u64, seed: u64) -> Result<TesterReport> {
    let (n, k) = (oracle.n(), oracle.k());
    let mut rng = rng_for(seed);
    let draws: Vec<KSubset> = (0..m)
        .map(|_| sample_ksubset(oracle.table(), n, k, &mut rng))
        .collect::<Result<_>>()?;
    let mut samples = Vec::with_capacity(draws.len());
    let mut answers = Vec::with_capacity(draws.len());
    for s in &draws {
        samples.push(rank(oracle.table(), s));
        answers.push(oracle.query(s)?);
    }
    let mut witness = None;
    'scan: for i2 in 1..draws.len() {
        if !answers[i2] {
            continue;
        }
        for i1 in 0..i2 {
            if answers[i1] && elements_disjoint(draws[i1].elements(), draws[i2].elements()) {
                witness = Some((samples[i1], samples[i2]));
                break 'scan;
            }
        }
    }
    Ok(TesterReport {
        verdict: if witness.is_some() {
            Verdict::Reject
        } else {
            Verdict::Accept
        },
        queries_used: oracle.queries_used(),
        budget: m,
        witness,
        samples,
        seed,
        eps1: None,
        best_junta: None,
    })
}

/// Sample size for the canonical tester: `ceil(12/eps)` for `r = 2`
/// (where the analysis needs `eps >= 2 (k^2/n)^2`), and
/// `ceil(c * 3^(r^2) * ln k / eps)` for `r >= 3` with a caller-supplied
/// constant `c`, since the analysis does not make its constant explicit.
pub fn canonical_sample_size(r: u32, eps: Rat, c: f64, k: u32) -> Result<u64> {
    if eps.is_zero() {
        return Err(Error::InvalidParameter(
            "sample size requires eps > 0".into(),
        ));
    }
    if r < 2 {
        return Err(Error::InvalidParameter(
            "canonical sample size requires r >= 2".into(),
        ));
    }
    if r == 2 {
        let num = 12u128 * u128::from(eps.den());
        let m = num.div_ceil(u128::from(eps.num()));
        return u64::try_from(m).map_err(|_| Error::Overflow("sample size exceeds u64".into()));
    }
    if c.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidParameter("sample size requires c > 0".into()));
    }
    if k < 2 {
        return Err(Error::InvalidParameter(
            "sample size for r >= 3 requires k >= 2".into(),
        ));
    }
    let exponent = r
        .checked_mul(r)
        .ok_or_else(|| Error::Overflow("r^2 exceeds u32".into()))?;
    let value = c * 3f64.powi(exponent as i32) * f64::from(k).ln() / eps.to_f64();
    let m = value.ceil();
    if !m.is_finite() || m >= u64::MAX as f64 {
        return Err(Error::Overflow("sample size exceeds u64".into()));
    }
    Ok(m as u64)
}

/// Sample size for the tolerant junta tester:
/// `ceil(12 (j ln n + 2^j + 2) / eps2)`.
pub fn junta_sample_size(eps2: Rat, j: u32, n: u32) -> Result<u64> {
    if eps2.is_zero() {
        return Err(Error::InvalidParameter(
            "sample size requires eps2 > 0".into(),
        ));
    }
    if n < 1 {
        return Err(Error::InvalidParameter(
            "sample size requires n >= 1".into(),
        ));
    }
    if j > 20 {
        return Err(Error::InvalidParameter(
            "junta sample size requires j <= 20".into(),
        ));
    }
    let inner = f64::from(j) * f64::from(n).ln() + 2f64.powi(j as i32) + 2.0;
    let m = (12.0 * inner / eps2.to_f64()).ceil();
    if !m.is_finite() || m >= u64::MAX as f64 {
        return Err(Error::Overflow("sample size exceeds u64".into()));
    }
    Ok(m as u64)
}

/// Enumeration guard: `C(n,j) * 2^(2^j)` candidate trace families.
const JUNTA_ENUM_BUDGET: u64 = 1 << 23;

/// Yields, for every j-subset `J` of `[n]` and every intersecting-certified
/// trace family `S` over `J` (empty trace excluded, traces pairwise
/// intersecting, the empty family allowed), the junta `(J, S)`. Ordered by
/// `J` lexicographically, then by trace-set mask.
pub fn enumerate_intersecting_juntas(n: u32, j: u32) -> Result<Vec<Junta>> {
    if j > 4 {
        return Err(Error::InvalidParameter(
            "junta enumeration requires j <= 4".into(),
        ));
    }
    let choose = choose_u64(n, j);
    let candidates = choose.saturating_mul(1u64 << (1u32 << j));
    if candidates > JUNTA_ENUM_BUDGET {
        return Err(Error::Budget(format!(
            "junta enumeration would scan {candidates} trace families (cap {JUNTA_ENUM_BUDGET})"
        )));
    }

    // Valid trace-set masks over 2^j trace bitmasks: bit t set means trace t
    // is admitted. The empty trace (t = 0) is never admitted; admitted
    // traces must pairwise intersect as bitmasks.
    let trace_space = 1u32 << j;
    let mut valid_sets: Vec<Vec<u16>> = Vec::new();
    'sets: for s in 0u32..(1 << trace_space) {
        if s & 1 != 0 {
            continue;
        }
        let traces: Vec<u16> = (0..trace_space)
            .filter(|t| s >> t & 1 == 1)
            .map(|t| t as u16)
            .collect();
        for (i, &t1) in traces.iter().enumerate() {
            for &t2 in &traces[i..] {
                if t1 & t2 == 0 {
                    continue 'sets;
                }
            }
        }
        valid_sets.push(traces);
    }

    let mut out = Vec::new();
    for coords in coordinate_subsets(n, j) {
        for traces in &valid_sets {
            out.push(Junta::from_masks(coords.clone(), traces.clone()));
        }
    }
    Ok(out)
}

fn choose_u64(n: u32, j: u32) -> u64 {
    if j > n {
        return 0;
    }
    let mut acc = 1u64;
    for i in 0..u64::from(j) {
        acc = acc * (u64::from(n) - i) / (i + 1);
    }
    acc
}

fn coordinate_subsets(n: u32, j: u32) -> Vec<Vec<u32>> {
    if j == 0 {
        return vec![Vec::new()];
    }
    if j > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (1..=j).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic combination
        let j = j as usize;
        let mut i = j;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != n - (j - 1 - i) as u32 {
                break;
            }
        }
        cur[i] += 1;
        for t in (i + 1)..j {
            cur[t] = cur[t - 1] + 1;
        }
    }
}

/// Tolerant two-sided tester: estimates, for every intersecting j-junta,
/// the fraction `alpha_J` of samples that are in the family but outside the
/// junta, and accepts iff some junta satisfies `alpha_J <= eps2/2`. `eps1`
/// is recorded in the report but never read by the algorithm.
pub fn junta_tester(
    oracle: &mut FamilyOracle,
    eps1: Rat,
    eps2: Rat,
    j: u32,
    m: u64,
    seed: u64,
) -> Result<TesterReport> {
    if !eps1.lt_one() || !eps2.lt_one() {
        return Err(Error::InvalidParameter(
            "junta tester requires eps1, eps2 in [0,1)".into(),
        ));
    }
    if u128::from(eps1.num()) * u128::from(eps2.den())
        > u128::from(eps2.num()) * u128::from(eps1.den())
    {
        return Err(Error::InvalidParameter(
            "junta tester requires eps1 <= eps2".into(),
        ));
    }
    let (n, k) = (oracle.n(), oracle.k());
    let juntas = enumerate_intersecting_juntas(n, j)?;
    let mut rng = rng_for(seed);
    let draws: Vec<KSubset> = (0..m)
        .map(|_| sample_ksubset(oracle.table(), n, k, &mut rng))
        .collect::<Result<_>>()?;
    let mut samples = Vec::with_capacity(draws.len());
    let mut positives: Vec<&KSubset> = Vec::new();
    for s in &draws {
        samples.push(rank(oracle.table(), s));
        if oracle.query(s)? {
            positives.push(s);
        }
    }

    let mut accept = m == 0;
    let mut best: Option<(u64, &Junta)> = None;
    for junta in &juntas {
        let escapes = positives
            .iter()
            .filter(|s| !junta.admits(s.elements()))
            .count() as u64;
        if best.is_none_or(|(b, _)| escapes < b) {
            best = Some((escapes, junta));
        }
        if m > 0 && eps2.fraction_le_half(escapes, m) {
            accept = true;
        }
    }
    let best_junta = match best {
        Some((escapes, junta)) if m > 0 => Some(JuntaEstimate {
            junta: junta.clone(),
            alpha: Rat::new_raw(escapes, m)?,
        }),
        _ => None,
    };
    Ok(TesterReport {
        verdict: if accept {
            Verdict::Accept
        } else {
            Verdict::Reject
        },
        queries_used: oracle.queries_used(),
        budget: m,
        witness: None,
        samples,
        seed,
        eps1: Some(eps1),
        best_junta,
    })
}

/// Two-sided density tester: accepts iff the sampled density is at most
/// `eps2/2`. Valid for the tolerant problem whenever
/// `eps2 >= 4 (eps1 + k/n)`.
pub fn density_tester(
    oracle: &mut FamilyOracle,
    eps2: Rat,
    m: u64,
    seed: u64,
) -> Result<TesterReport> {
    if !eps2.lt_one() {
        return Err(Error::InvalidParameter(
            "density tester requires eps2 in [0,1)".into(),
        ));
    }
    let (n, k) = (oracle.n(), oracle.k());
    let mut rng = rng_for(seed);
    let draws: Vec<KSubset> = (0..m)
        .map(|_| sample_ksubset(oracle.table(), n, k, &mut rng))
        .collect::<Result<_>>()?;
    let mut samples = Vec::with_capacity(draws.len());
    let mut ones = 0u64;
    for s in &draws {
        samples.push(rank(oracle.table(), s));
        if oracle.query(s)? {
            ones += 1;
        }
    }
    let accept = m == 0 || eps2.fraction_le_half(ones, m);
    Ok(TesterReport {
        verdict: if accept {
            Verdict::Accept
        } else {
            Verdict::Reject
        },
        queries_used: oracle.queries_used(),
        budget: m,
        witness: None,
        samples,
        seed,
        eps1: None,
        best_junta: None,
    })
}

/// Draws m uniform unordered disjoint pairs, queries both sides of each
/// (2m queries), and rejects iff some pair is answered (1,1). One-sided;
/// this is the tester of choice at `n = alpha * k`, where uniform samples
/// almost never contain disjoint pairs.
pub fn disjoint_pair_tester(oracle: &mut FamilyOracle, m: u64, seed: u64) -> Result<TesterReport> {
    let (n, k) = (oracle.n(), oracle.k());
    if n < 2 * k {
        return Err(Error::InvalidParameter(format!(
            "disjoint-pair tester requires n >= 2k, got n={n}, k={k}"
        )));
    }
    let mut rng = rng_for(seed);
    let pairs: Vec<(KSubset, KSubset)> = (0..m)
        .map(|_| sample_disjoint_pair(oracle.table(), n, k, &mut rng))
        .collect::<Result<_>>()?;
    let mut samples = Vec::with_capacity(2 * pairs.len());
    let mut witness = None;
    for (a, b) in &pairs {
        let (ra, rb) = (rank(oracle.table(), a), rank(oracle.table(), b));
        samples.push(ra);
        samples.push(rb);
        let fa = oracle.query(a)?;
        let fb = oracle.query(b)?;
        if fa && fb && witness.is_none() {
            witness = Some((ra, rb));
        }
    }
    Ok(TesterReport {
        verdict: if witness.is_some() {
            Verdict::Reject
        } else {
            Verdict::Accept
        },
        queries_used: oracle.queries_used(),
        budget: 2 * m,
        witness,
        samples,
        seed,
        eps1: None,
        best_junta: None,
    })
}
