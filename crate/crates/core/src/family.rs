//! Family representations and instance generators.
//!
//! An [`ExplicitFamily`] is a bitmap over all `C(n,k)` colex ranks and is the
//! ground-truth representation used by generators and exact oracles. A
//! [`FamilyOracle`] wraps a family (or a bare membership predicate) behind
//! the query-counting interface that testers are restricted to.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;

use crate::combinatorics::{elements_disjoint, rank, unrank, BinomialTable, ColexSubsets, KSubset};
use crate::error::{Error, Result};
use crate::rat::Rat;

/// Bitmap cap: explicit families refuse construction past 2^26 ranks unless
/// the override constructor is used.
pub const FAMILY_BITMAP_CAP: u64 = 1 << 26;

/// A family of k-subsets of `[n]` stored as a bitmap indexed by colex rank.
#[derive(Debug, Clone)]
pub struct ExplicitFamily {
    n: u32,
    k: u32,
    universe: u64,
    table: BinomialTable,
    bits: Vec<u64>,
    members: u64,
}

impl PartialEq for ExplicitFamily {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.bits == other.bits
    }
}

impl Eq for ExplicitFamily {}

fn validate_universe(n: u32, k: u32) -> Result<()> {
    if k < 1 || n < 2 * k {
        return Err(Error::InvalidParameter(format!(
            "family universe requires n >= 2k >= 2, got n={n}, k={k}"
        )));
    }
    Ok(())
}

impl ExplicitFamily {
    /// Empty family over the k-subsets of `[n]`. Enforces the bitmap cap.
    pub fn empty(n: u32, k: u32) -> Result<Self> {
        let fam = Self::empty_with_cap(n, k, FAMILY_BITMAP_CAP)?;
        Ok(fam)
    }

    /// Empty family with an explicit bitmap cap, for callers that opt in to
    /// larger instances.
    pub fn empty_with_cap(n: u32, k: u32, cap: u64) -> Result<Self> {
        validate_universe(n, k)?;
        let table = BinomialTable::new(n, k)?;
        let universe = table.binomial(n, k);
        if universe > cap {
            return Err(Error::Budget(format!(
                "C({n},{k}) = {universe} ranks exceed the bitmap cap {cap}"
            )));
        }
        let blocks = universe.div_ceil(64) as usize;
        Ok(ExplicitFamily {
            n,
            k,
            universe,
            table,
            bits: vec![0; blocks],
            members: 0,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `C(n,k)`: the number of possible members.
    pub fn universe_size(&self) -> u64 {
        self.universe
    }

    pub fn member_count(&self) -> u64 {
        self.members
    }

    pub fn table(&self) -> &BinomialTable {
        &self.table
    }

    pub fn contains_rank(&self, r: u64) -> bool {
        debug_assert!(r < self.universe);
        self.bits[(r / 64) as usize] >> (r % 64) & 1 == 1
    }

    pub fn contains(&self, s: &KSubset) -> Result<bool> {
        self.check_universe(s)?;
        Ok(self.contains_rank(rank(&self.table, s)))
    }

    pub fn insert_rank(&mut self, r: u64) {
        debug_assert!(r < self.universe);
        let block = (r / 64) as usize;
        let mask = 1u64 << (r % 64);
        if self.bits[block] & mask == 0 {
            self.bits[block] |= mask;
            self.members += 1;
        }
    }

    pub fn insert(&mut self, s: &KSubset) -> Result<()> {
        self.check_universe(s)?;
        self.insert_rank(rank(&self.table, s));
        Ok(())
    }

    fn check_universe(&self, s: &KSubset) -> Result<()> {
        if s.n() != self.n || s.k() != self.k {
            return Err(Error::UniverseMismatch {
                expected_n: self.n,
                expected_k: self.k,
                got_n: s.n(),
                got_k: s.k(),
            });
        }
        Ok(())
    }

    /// Member ranks in ascending order.
    pub fn member_ranks(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.members as usize);
        for (b, &word) in self.bits.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let bit = w.trailing_zeros() as u64;
                out.push(b as u64 * 64 + bit);
                w &= w - 1;
            }
        }
        out
    }

    /// Members as subsets, in rank order.
    pub fn member_sets(&self) -> Vec<KSubset> {
        self.member_ranks()
            .into_iter()
            .map(|r| unrank(&self.table, r, self.n, self.k).expect("stored rank in range"))
            .collect()
    }
}

/// All k-subsets of `[n]` that contain `center`: the extremal intersecting
/// family, of size `C(n-1,k-1)`.
pub fn star_family(n: u32, k: u32, center: u32) -> Result<ExplicitFamily> {
    if center < 1 || center > n {
        return Err(Error::InvalidParameter(format!(
            "star center {center} outside [1..{n}]"
        )));
    }
    let mut fam = ExplicitFamily::empty(n, k)?;
    for (idx, elems) in ColexSubsets::new(n, k)?.enumerate() {
        if elems.binary_search(&center).is_ok() {
            fam.insert_rank(idx as u64);
        }
    }
    debug_assert_eq!(fam.member_count(), fam.table.binomial(n - 1, k - 1));
    Ok(fam)
}

/// The full family of all k-subsets of `[n]`.
pub fn full_family(n: u32, k: u32) -> Result<ExplicitFamily> {
    let mut fam = ExplicitFamily::empty(n, k)?;
    for r in 0..fam.universe_size() {
        fam.insert_rank(r);
    }
    Ok(fam)
}

/// Membership by trace: a pair `(J, S)` of junta coordinates `J` and a
/// family `S` of admitted traces; a set belongs to the induced family iff
/// its intersection with `J` lies in `S`.
///
/// Traces are stored as bitmasks over the positions of `J`, so `J` is
/// limited to 16 coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Junta {
    coords: Vec<u32>,
    trace_masks: Vec<u16>,
}

impl Junta {
    /// Builds a junta from explicit trace subsets, each of which must be a
    /// subset of `coords`.
    pub fn new(coords: Vec<u32>, traces: &[Vec<u32>]) -> Result<Self> {
        if coords.len() > 16 {
            return Err(Error::InvalidParameter(
                "junta wider than 16 coordinates".into(),
            ));
        }
        for w in coords.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidParameter(
                    "junta coordinates must be strictly increasing".into(),
                ));
            }
        }
        if coords.first().is_some_and(|&c| c < 1) {
            return Err(Error::InvalidParameter(
                "junta coordinates are 1-based".into(),
            ));
        }
        let mut trace_masks = Vec::with_capacity(traces.len());
        for trace in traces {
            let mut mask = 0u16;
            for &e in trace {
                let pos = coords.iter().position(|&c| c == e).ok_or_else(|| {
                    Error::InvalidParameter(format!("trace element {e} is not a junta coordinate"))
                })?;
                mask |= 1 << pos;
            }
            if trace_masks.contains(&mask) {
                return Err(Error::InvalidParameter("duplicate trace in junta".into()));
            }
            trace_masks.push(mask);
        }
        trace_masks.sort_unstable();
        Ok(Junta {
            coords,
            trace_masks,
        })
    }

    pub(crate) fn from_masks(coords: Vec<u32>, trace_masks: Vec<u16>) -> Self {
        Junta {
            coords,
            trace_masks,
        }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    /// Admitted traces as element subsets, in mask order.
    pub fn traces(&self) -> Vec<Vec<u32>> {
        self.trace_masks
            .iter()
            .map(|&m| {
                self.coords
                    .iter()
                    .enumerate()
                    .filter(|(pos, _)| m >> pos & 1 == 1)
                    .map(|(_, &c)| c)
                    .collect()
            })
            .collect()
    }

    pub fn trace_count(&self) -> usize {
        self.trace_masks.len()
    }

    /// The junta certifies an intersecting induced family iff the empty
    /// trace is not admitted and every two admitted traces intersect. Any
    /// two sets whose traces share a coordinate intersect there, so this
    /// criterion is sound for every n and k.
    pub fn is_intersecting_certified(&self) -> bool {
        for (i, &t1) in self.trace_masks.iter().enumerate() {
            if t1 == 0 {
                return false;
            }
            for &t2 in &self.trace_masks[i..] {
                if t1 & t2 == 0 {
                    return false;
                }
            }
        }
        true
    }

    pub(crate) fn trace_mask_of(&self, elements: &[u32]) -> u16 {
        let mut mask = 0u16;
        for (pos, &c) in self.coords.iter().enumerate() {
            if elements.binary_search(&c).is_ok() {
                mask |= 1 << pos;
            }
        }
        mask
    }

    /// True iff the trace of `elements` on the junta coordinates is admitted.
    pub fn admits(&self, elements: &[u32]) -> bool {
        self.trace_masks
            .binary_search(&self.trace_mask_of(elements))
            .is_ok()
    }
}

/// The k-uniform family over `[n]` induced by a junta.
pub fn junta_family(n: u32, k: u32, junta: &Junta) -> Result<ExplicitFamily> {
    if junta.coords().last().is_some_and(|&c| c > n) {
        return Err(Error::InvalidParameter(format!(
            "junta coordinate beyond universe [1..{n}]"
        )));
    }
    let mut fam = ExplicitFamily::empty(n, k)?;
    for (idx, elems) in ColexSubsets::new(n, k)?.enumerate() {
        if junta.admits(&elems) {
            fam.insert_rank(idx as u64);
        }
    }
    Ok(fam)
}

/// Each rank is a member independently with probability `p`.
pub fn random_family<R: Rng>(n: u32, k: u32, p: Rat, rng: &mut R) -> Result<ExplicitFamily> {
    if !p.lt_one() && p.num() != p.den() {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0,1]")));
    }
    let mut fam = ExplicitFamily::empty(n, k)?;
    let p = p.to_f64();
    for r in 0..fam.universe_size() {
        if rng.gen_bool(p) {
            fam.insert_rank(r);
        }
    }
    Ok(fam)
}

// Matching construction: explicit adjacency with augmenting paths is used up
// to this many vertices; beyond it, sampling greedy only.
const EXPLICIT_MATCHING_CAP: u64 = 2048;
const MATCHING_RESTARTS: usize = 32;

/// A set of pairwise-disjoint unordered edges of the Kneser graph `K(n,k)`:
/// at least `target` pairs `{A,B}` with `A` and `B` disjoint and no set
/// appearing twice. For `n = 2k` this is the exact complement pairing.
///
/// Construction is a randomized greedy pass followed by augmenting-path
/// improvement, restarted up to a fixed budget; it is deterministic given
/// the rng state.
pub fn kneser_matching<R: Rng>(
    n: u32,
    k: u32,
    target: u64,
    rng: &mut R,
) -> Result<Vec<(KSubset, KSubset)>> {
    validate_universe(n, k)?;
    let table = BinomialTable::new(n, k)?;
    let universe = table.binomial(n, k);
    if target > universe / 2 {
        return Err(Error::InvalidParameter(format!(
            "matching target {target} exceeds floor(C({n},{k})/2) = {}",
            universe / 2
        )));
    }

    if n == 2 * k {
        // Every set is disjoint from exactly its complement.
        let mut pairs = Vec::with_capacity((universe / 2) as usize);
        for (idx, elems) in ColexSubsets::new(n, k)?.enumerate() {
            let complement: Vec<u32> = (1..=n)
                .filter(|e| elems.binary_search(e).is_err())
                .collect();
            let a = KSubset::new(n, elems)?;
            let b = KSubset::new(n, complement)?;
            if (idx as u64) < rank(&table, &b) {
                pairs.push((a, b));
            }
        }
        return Ok(pairs);
    }

    if universe <= EXPLICIT_MATCHING_CAP {
        explicit_matching(n, k, target, rng)
    } else {
        sampled_matching(n, k, target, &table, rng)
    }
}

fn explicit_matching<R: Rng>(
    n: u32,
    k: u32,
    target: u64,
    rng: &mut R,
) -> Result<Vec<(KSubset, KSubset)>> {
    let sets: Vec<Vec<u32>> = ColexSubsets::new(n, k)?.collect();
    let v = sets.len();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); v];
    for i in 0..v {
        for j in (i + 1)..v {
            if elements_disjoint(&sets[i], &sets[j]) {
                adj[i].push(j as u32);
                adj[j].push(i as u32);
            }
        }
    }

    const UNMATCHED: u32 = u32::MAX;
    let mut best: Vec<u32> = Vec::new();
    let mut best_pairs = 0u64;
    for _restart in 0..MATCHING_RESTARTS {
        let mut order: Vec<u32> = (0..v as u32).collect();
        shuffle(&mut order, rng);
        let mut mate = vec![UNMATCHED; v];
        // greedy pass
        for &u in &order {
            let u = u as usize;
            if mate[u] != UNMATCHED || adj[u].is_empty() {
                continue;
            }
            let start = rng.gen_range(0..adj[u].len());
            for t in 0..adj[u].len() {
                let w = adj[u][(start + t) % adj[u].len()] as usize;
                if mate[w] == UNMATCHED {
                    mate[u] = w as u32;
                    mate[w] = u as u32;
                    break;
                }
            }
        }
        // alternating-path improvement (no blossom handling; restarts make
        // up for paths missed through odd cycles)
        let mut improved = true;
        while improved {
            improved = false;
            for u in 0..v {
                if mate[u] == UNMATCHED && !adj[u].is_empty() {
                    let mut visited = vec![false; v];
                    if augment(u, &adj, &mut mate, &mut visited) {
                        improved = true;
                    }
                }
            }
        }
        let pairs = mate.iter().filter(|&&m| m != UNMATCHED).count() as u64 / 2;
        if pairs > best_pairs {
            best_pairs = pairs;
            best = mate;
        }
        if best_pairs >= target {
            break;
        }
    }
    if best_pairs < target {
        return Err(Error::InsufficientMatching {
            found: best_pairs,
            target,
        });
    }
    let mut out = Vec::with_capacity(best_pairs as usize);
    for (u, &m) in best.iter().enumerate() {
        if m != UNMATCHED && u < m as usize {
            let a = KSubset::new(n, sets[u].clone())?;
            let b = KSubset::new(n, sets[m as usize].clone())?;
            out.push((a, b));
        }
    }
    Ok(out)
}

// Alternating DFS that keeps the path simple by marking every touched
// vertex, so flips stay consistent on general (non-bipartite) graphs; paths
// through blossoms are missed, which the restarts absorb.
fn augment(u: usize, adj: &[Vec<u32>], mate: &mut [u32], visited: &mut [bool]) -> bool {
    const UNMATCHED: u32 = u32::MAX;
    visited[u] = true;
    for &w in &adj[u] {
        let w = w as usize;
        if visited[w] {
            continue;
        }
        if mate[w] == UNMATCHED {
            visited[w] = true;
            mate[w] = u as u32;
            mate[u] = w as u32;
            return true;
        }
        let m = mate[w] as usize;
        if visited[m] {
            continue;
        }
        visited[w] = true;
        if augment(m, adj, mate, visited) {
            mate[w] = u as u32;
            mate[u] = w as u32;
            return true;
        }
    }
    false
}

fn sampled_matching<R: Rng>(
    n: u32,
    k: u32,
    target: u64,
    table: &BinomialTable,
    rng: &mut R,
) -> Result<Vec<(KSubset, KSubset)>> {
    use std::collections::HashSet;
    let mut used: HashSet<u64> = HashSet::with_capacity(2 * target as usize);
    let mut pairs = Vec::with_capacity(target as usize);
    let budget = 256 * target + 4096;
    let mut attempts = 0u64;
    while (pairs.len() as u64) < target && attempts < budget {
        attempts += 1;
        let (a, b) = crate::combinatorics::sample_disjoint_pair(table, n, k, rng)?;
        let ra = rank(table, &a);
        let rb = rank(table, &b);
        if used.contains(&ra) || used.contains(&rb) {
            continue;
        }
        used.insert(ra);
        used.insert(rb);
        pairs.push((a, b));
    }
    if (pairs.len() as u64) < target {
        return Err(Error::InsufficientMatching {
            found: pairs.len() as u64,
            target,
        });
    }
    Ok(pairs)
}

// Fisher-Yates on u32 indices; rand's shuffle would do the same but this
// keeps the exact draw sequence under our control for goldens.
fn shuffle<R: Rng>(items: &mut [u32], rng: &mut R) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// The hard-instance generator: `N` pairs, with `N` the smallest integer
/// exceeding `eps * C(n,k)`, drawn uniformly from a matching of the Kneser
/// graph; the family holds exactly their `2N` member sets and is therefore
/// eps-far from intersecting. Also returns the planted pairs, which certify
/// the distance lower bound `N`.
pub fn dno_family_with_pairs<R: Rng>(
    n: u32,
    k: u32,
    eps: Rat,
    rng: &mut R,
) -> Result<(ExplicitFamily, Vec<(KSubset, KSubset)>)> {
    let mut fam = ExplicitFamily::empty(n, k)?;
    let universe = fam.universe_size();
    let eps_ge_inverse = u128::from(eps.num()) * u128::from(universe) >= u128::from(eps.den());
    if !eps_ge_inverse || !eps.lt_half() {
        return Err(Error::InvalidParameter(format!(
            "dno requires 1/C(n,k) <= eps < 1/2, got eps = {eps} with C = {universe}"
        )));
    }
    let planted = eps.floor_times(universe) + 1;
    let mut matching = kneser_matching(n, k, planted, rng)?;
    // uniform N-subset of the matching via partial Fisher-Yates
    let len = matching.len();
    for i in 0..planted as usize {
        let j = rng.gen_range(i..len);
        matching.swap(i, j);
    }
    matching.truncate(planted as usize);
    for (a, b) in &matching {
        fam.insert(a)?;
        fam.insert(b)?;
    }
    debug_assert_eq!(fam.member_count(), 2 * planted);
    Ok((fam, matching))
}

/// [`dno_family_with_pairs`] without the certificate.
pub fn dno_family<R: Rng>(n: u32, k: u32, eps: Rat, rng: &mut R) -> Result<ExplicitFamily> {
    Ok(dno_family_with_pairs(n, k, eps, rng)?.0)
}

/// Query-access wrapper over a family or membership predicate. Counts every
/// query and logs `(rank, answer)` pairs; testers may only see families
/// through this interface.
pub struct FamilyOracle<'a> {
    n: u32,
    k: u32,
    source: OracleSource<'a>,
    queries_used: u64,
    query_log: Vec<(u64, bool)>,
}

enum OracleSource<'a> {
    Explicit(&'a ExplicitFamily),
    Predicate {
        table: BinomialTable,
        pred: Box<dyn Fn(&KSubset) -> bool + Send + Sync + 'a>,
    },
}

impl<'a> FamilyOracle<'a> {
    pub fn from_family(family: &'a ExplicitFamily) -> Self {
        FamilyOracle {
            n: family.n(),
            k: family.k(),
            source: OracleSource::Explicit(family),
            queries_used: 0,
            query_log: Vec::new(),
        }
    }

    /// Oracle backed by a bare predicate; usable past the bitmap cap as long
    /// as `C(n,k)` itself fits in a u64 (ranks are still logged).
    pub fn from_predicate(
        n: u32,
        k: u32,
        pred: Box<dyn Fn(&KSubset) -> bool + Send + Sync + 'a>,
    ) -> Result<Self> {
        validate_universe(n, k)?;
        let table = BinomialTable::new(n, k)?;
        Ok(FamilyOracle {
            n,
            k,
            source: OracleSource::Predicate { table, pred },
            queries_used: 0,
            query_log: Vec::new(),
        })
    }

    /// Predicate-backed star family, for universes past the bitmap cap.
    pub fn star(n: u32, k: u32, center: u32) -> Result<Self> {
        if center < 1 || center > n {
            return Err(Error::InvalidParameter(format!(
                "star center {center} outside [1..{n}]"
            )));
        }
        Self::from_predicate(n, k, Box::new(move |s| s.contains(center)))
    }

    /// Predicate-backed full family.
    pub fn full(n: u32, k: u32) -> Result<Self> {
        Self::from_predicate(n, k, Box::new(|_| true))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn table(&self) -> &BinomialTable {
        match &self.source {
            OracleSource::Explicit(f) => f.table(),
            OracleSource::Predicate { table, .. } => table,
        }
    }

    pub fn queries_used(&self) -> u64 {
        self.queries_used
    }

    pub fn query_log(&self) -> &[(u64, bool)] {
        &self.query_log
    }

    /// Answers `f(s)`, incrementing the counter and appending to the log.
    pub fn query(&mut self, s: &KSubset) -> Result<bool> {
        if s.n() != self.n || s.k() != self.k {
            return Err(Error::UniverseMismatch {
                expected_n: self.n,
                expected_k: self.k,
                got_n: s.n(),
                got_k: s.k(),
            });
        }
        let (r, answer) = match &self.source {
            OracleSource::Explicit(f) => {
                let r = rank(f.table(), s);
                (r, f.contains_rank(r))
            }
            OracleSource::Predicate { table, pred } => (rank(table, s), pred(s)),
        };
        self.queries_used += 1;
        self.query_log.push((r, answer));
        Ok(answer)
    }
}

/// Writes the family file format: header `"n k"`, then one member per line
/// in rank order as space-separated increasing elements.
pub fn write_family_string(family: &ExplicitFamily) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", family.n(), family.k());
    for s in family.member_sets() {
        let _ = writeln!(out, "{}", s.to_text());
    }
    out
}

pub fn write_family(family: &ExplicitFamily, path: &Path) -> Result<()> {
    std::fs::write(path, write_family_string(family)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses the family file format. Lines starting with `#` and blank lines
/// are ignored; the first remaining line must be the `"n k"` header; every
/// later line is one member. Errors name the offending 1-based line.
pub fn read_family_string(text: &str) -> Result<ExplicitFamily> {
    let mut family: Option<ExplicitFamily> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match family.as_mut() {
            None => {
                let mut parts = line.split_whitespace();
                let n: u32 = parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| bad_line(lineno, "malformed header, expected \"n k\""))?;
                let k: u32 = parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| bad_line(lineno, "malformed header, expected \"n k\""))?;
                if parts.next().is_some() {
                    return Err(bad_line(lineno, "malformed header, expected \"n k\""));
                }
                let fam = ExplicitFamily::empty(n, k).map_err(|e| match e {
                    Error::Budget(msg) => Error::Budget(msg),
                    other => bad_line(lineno, &other.to_string()),
                })?;
                family = Some(fam);
            }
            Some(fam) => {
                let mut elems = Vec::with_capacity(fam.k() as usize);
                for tok in line.split_whitespace() {
                    let e: u32 = tok
                        .parse()
                        .map_err(|_| bad_line(lineno, &format!("bad element {tok:?}")))?;
                    elems.push(e);
                }
                if elems.len() != fam.k() as usize {
                    return Err(bad_line(
                        lineno,
                        &format!("expected {} elements, found {}", fam.k(), elems.len()),
                    ));
                }
                let s =
                    KSubset::new(fam.n(), elems).map_err(|e| bad_line(lineno, &e.to_string()))?;
                if fam.contains(&s).expect("universe checked") {
                    return Err(bad_line(
                        lineno,
                        &format!("duplicate member {}", s.to_text()),
                    ));
                }
                fam.insert(&s).expect("universe checked");
            }
        }
    }
    family.ok_or_else(|| bad_line(1, "missing header line \"n k\""))
}

pub fn read_family(path: &Path) -> Result<ExplicitFamily> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_family_string(&text)
}

fn bad_line(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}
