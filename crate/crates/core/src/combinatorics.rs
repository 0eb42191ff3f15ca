//! Exact binomial arithmetic, colexicographic ranking of k-subsets, and
//! uniform sampling of sets and disjoint pairs.
//!
//! Subsets of `[n] = {1,..,n}` are indexed by their colexicographic rank:
//! for a set with elements `e_1 < .. < e_k`,
//! `rank = sum_i C(e_i - 1, i)` with `i = 1..k`. Unranking is a greedy
//! descent on the same sum, so uniform sampling reduces to drawing a uniform
//! index in `[0, C(n,k))` and unranking it.

use rand::Rng;

use crate::error::{Error, Result};

/// Pascal-triangle table of exact binomials `C(a,b)` for `a <= n_max`,
/// `b <= min(a, k_max)`. Construction fails loudly if any stored entry
/// leaves the u64 range; there is no silent wraparound.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    n_max: u32,
    k_max: u32,
    rows: Vec<Vec<u64>>,
}

impl BinomialTable {
    pub fn new(n_max: u32, k_max: u32) -> Result<Self> {
        let k_max = k_max.min(n_max);
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n_max as usize + 1);
        for a in 0..=n_max {
            let width = a.min(k_max) as usize + 1;
            let mut row = vec![0u64; width];
            row[0] = 1;
            for b in 1..width {
                let above = rows[a as usize - 1].get(b).copied().unwrap_or(0);
                row[b] = rows[a as usize - 1][b - 1]
                    .checked_add(above)
                    .ok_or_else(|| Error::Overflow(format!("C({a},{b}) exceeds the u64 range")))?;
            }
            rows.push(row);
        }
        Ok(BinomialTable { n_max, k_max, rows })
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    /// `C(n,k)` exactly; returns 0 for `k > n`.
    ///
    /// Panics if `n > n_max` or `k` is within `n` but beyond `k_max`; those
    /// are table-sizing bugs at the call site, not data errors.
    pub fn binomial(&self, n: u32, k: u32) -> u64 {
        if k > n {
            return 0;
        }
        assert!(
            n <= self.n_max,
            "binomial({n},{k}) beyond table n_max {}",
            self.n_max
        );
        assert!(
            k <= self.k_max || k == n,
            "binomial({n},{k}) beyond table k_max {}",
            self.k_max
        );
        if k == n {
            return 1;
        }
        self.rows[n as usize][k as usize]
    }
}

/// A k-element subset of `[n]`, stored as strictly increasing 1-based
/// elements. This is the universal query point of the testers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KSubset {
    n: u32,
    elements: Vec<u32>,
}

impl KSubset {
    pub fn new(n: u32, elements: Vec<u32>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidParameter("k-subset must be nonempty".into()));
        }
        if elements.len() as u64 > u64::from(n) {
            return Err(Error::InvalidParameter(format!(
                "k-subset of size {} in universe of size {n}",
                elements.len()
            )));
        }
        for (i, &e) in elements.iter().enumerate() {
            if e < 1 || e > n {
                return Err(Error::InvalidParameter(format!(
                    "element {e} outside universe [1..{n}]"
                )));
            }
            if i > 0 && elements[i - 1] >= e {
                return Err(Error::InvalidParameter(format!(
                    "elements not strictly increasing at {e}"
                )));
            }
        }
        Ok(KSubset { n, elements })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.elements.len() as u32
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn contains(&self, e: u32) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    /// Space-separated increasing elements, e.g. `"1 3 7"`. This is the text
    /// form used by the family file format.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        parts.join(" ")
    }
}

impl std::fmt::Display for KSubset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Colexicographic rank of `s` within all k-subsets of its universe.
pub fn rank(table: &BinomialTable, s: &KSubset) -> u64 {
    let mut r = 0u64;
    for (i, &e) in s.elements().iter().enumerate() {
        r += table.binomial(e - 1, i as u32 + 1);
    }
    r
}

/// Inverse of [`rank`]: the k-subset of `[n]` with the given colex index.
pub fn unrank(table: &BinomialTable, idx: u64, n: u32, k: u32) -> Result<KSubset> {
    let total = table.binomial(n, k);
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("unrank with k={k}, n={n}")));
    }
    if idx >= total {
        return Err(Error::InvalidParameter(format!(
            "rank {idx} out of range [0,{total}) for C({n},{k})"
        )));
    }
    let mut elements = vec![0u32; k as usize];
    let mut rem = idx;
    let mut upper = n;
    for pos in (1..=k).rev() {
        // Largest e with C(e-1, pos) <= rem.
        let mut e = upper;
        while table.binomial(e - 1, pos) > rem {
            e -= 1;
        }
        rem -= table.binomial(e - 1, pos);
        elements[pos as usize - 1] = e;
        upper = e - 1;
    }
    KSubset::new(n, elements)
}

/// True iff the two subsets share no element. Errors on mismatched universes.
pub fn are_disjoint(a: &KSubset, b: &KSubset) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::UniverseMismatch {
            expected_n: a.n(),
            expected_k: a.k(),
            got_n: b.n(),
            got_k: b.k(),
        });
    }
    Ok(elements_disjoint(a.elements(), b.elements()))
}

/// Two-pointer disjointness on sorted element slices.
pub fn elements_disjoint(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Uniform k-subset of `[n]`: a uniform colex index, unranked. Deterministic
/// given the rng state.
pub fn sample_ksubset<R: Rng>(
    table: &BinomialTable,
    n: u32,
    k: u32,
    rng: &mut R,
) -> Result<KSubset> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("sample with k={k}, n={n}")));
    }
    let total = table.binomial(n, k);
    let idx = rng.gen_range(0..total);
    unrank(table, idx, n, k)
}

/// Uniform unordered pair of disjoint k-subsets of `[n]`: the first set is a
/// uniform k-subset, the second a uniform k-subset of its complement.
pub fn sample_disjoint_pair<R: Rng>(
    table: &BinomialTable,
    n: u32,
    k: u32,
    rng: &mut R,
) -> Result<(KSubset, KSubset)> {
    if n < 2 * k {
        return Err(Error::InvalidParameter(format!(
            "no disjoint pair exists for n={n} < 2k={}",
            2 * k
        )));
    }
    let a = sample_ksubset(table, n, k, rng)?;
    let complement: Vec<u32> = (1..=n).filter(|e| !a.contains(*e)).collect();
    let idx = rng.gen_range(0..table.binomial(n - k, k));
    let within = unrank(table, idx, n - k, k)?;
    let b_elems: Vec<u32> = within
        .elements()
        .iter()
        .map(|&e| complement[e as usize - 1])
        .collect();
    let b = KSubset::new(n, b_elems)?;
    Ok((a, b))
}

/// All k-subsets of `[n]` in colexicographic (= rank) order.
pub fn all_ksubsets(table: &BinomialTable, n: u32, k: u32) -> Result<Vec<KSubset>> {
    let total = table.binomial(n, k);
    (0..total).map(|idx| unrank(table, idx, n, k)).collect()
}

/// Iterator over the k-subsets of `[n]` in colexicographic order, i.e. in
/// rank order, with O(k) work per step. Yielding position `i` gives the set
/// of rank `i`.
pub struct ColexSubsets {
    n: u32,
    current: Option<Vec<u32>>,
}

impl ColexSubsets {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!(
                "colex enumeration with k={k}, n={n}"
            )));
        }
        Ok(ColexSubsets {
            n,
            current: Some((1..=k).collect()),
        })
    }
}

impl Iterator for ColexSubsets {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut next = cur.clone();
        let mut advanced = false;
        for i in 0..k {
            let limit = if i + 1 < k { next[i + 1] } else { self.n + 1 };
            if next[i] + 1 < limit {
                next[i] += 1;
                for (j, slot) in next.iter_mut().enumerate().take(i) {
                    *slot = j as u32 + 1;
                }
                advanced = true;
                break;
            }
        }
        if advanced {
            self.current = Some(next);
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn binomial_values() {
        let t = BinomialTable::new(40, 3).unwrap();
        assert_eq!(t.binomial(5, 2), 10);
        assert_eq!(t.binomial(17, 0), 1);
        assert_eq!(t.binomial(40, 3), 9880);
        assert_eq!(t.binomial(2, 3), 0);
    }

    #[test]
    fn overflow_is_loud() {
        // C(68,34) exceeds u64; the full triangle must refuse.
        assert!(BinomialTable::new(68, 68).is_err());
        assert!(BinomialTable::new(67, 67).is_ok());
        // A bounded table sidesteps the huge central entries.
        let t = BinomialTable::new(120, 2).unwrap();
        assert_eq!(t.binomial(120, 2), 7140);
    }

    #[test]
    fn pascal_identity_everywhere() {
        let t = BinomialTable::new(30, 8).unwrap();
        for a in 2..=30u32 {
            for b in 1..=a.min(8) {
                assert_eq!(
                    t.binomial(a, b),
                    t.binomial(a - 1, b - 1) + t.binomial(a - 1, b)
                );
            }
        }
    }

    #[test]
    fn rank_examples() {
        let t = BinomialTable::new(12, 6).unwrap();
        let first = KSubset::new(5, vec![1, 2]).unwrap();
        assert_eq!(rank(&t, &first), 0);
        let last = KSubset::new(5, vec![4, 5]).unwrap();
        assert_eq!(rank(&t, &last), 9);
        let s = KSubset::new(5, vec![1, 3]).unwrap();
        assert_eq!(rank(&t, &s), 1);
    }

    #[test]
    fn unrank_examples() {
        let t = BinomialTable::new(12, 6).unwrap();
        assert_eq!(unrank(&t, 0, 6, 3).unwrap().elements(), &[1, 2, 3]);
        assert_eq!(unrank(&t, 19, 6, 3).unwrap().elements(), &[4, 5, 6]);
        assert_eq!(unrank(&t, 1, 5, 2).unwrap().elements(), &[1, 3]);
        assert!(unrank(&t, 20, 6, 3).is_err());
    }

    #[test]
    fn rank_unrank_identity_and_monotone() {
        let t = BinomialTable::new(12, 6).unwrap();
        for n in 2..=12u32 {
            for k in 1..=(n / 2) {
                let total = t.binomial(n, k);
                let mut prev: Option<Vec<u32>> = None;
                for idx in 0..total {
                    let s = unrank(&t, idx, n, k).unwrap();
                    assert_eq!(rank(&t, &s), idx);
                    // colex order: compare reversed element sequences
                    if let Some(p) = prev {
                        let mut a = p.clone();
                        let mut b = s.elements().to_vec();
                        a.reverse();
                        b.reverse();
                        assert!(a < b, "colex order violated at idx {idx}");
                    }
                    prev = Some(s.elements().to_vec());
                }
            }
        }
    }

    #[test]
    fn disjointness() {
        let a = KSubset::new(5, vec![1, 2]).unwrap();
        let b = KSubset::new(5, vec![3, 4]).unwrap();
        let c = KSubset::new(5, vec![2, 3]).unwrap();
        assert!(are_disjoint(&a, &b).unwrap());
        assert!(!are_disjoint(&a, &c).unwrap());
        assert!(!are_disjoint(&a, &a).unwrap());
        let other = KSubset::new(6, vec![3, 4]).unwrap();
        assert!(are_disjoint(&a, &other).is_err());
    }

    #[test]
    fn malformed_subsets_rejected() {
        assert!(KSubset::new(5, vec![2, 1]).is_err());
        assert!(KSubset::new(5, vec![1, 1]).is_err());
        assert!(KSubset::new(5, vec![0, 1]).is_err());
        assert!(KSubset::new(5, vec![5, 6]).is_err());
    }

    #[test]
    fn sampling_is_deterministic_given_seed() {
        let t = BinomialTable::new(10, 3).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            assert_eq!(
                sample_ksubset(&t, 10, 3, &mut r1).unwrap(),
                sample_ksubset(&t, 10, 3, &mut r2).unwrap()
            );
        }
    }

    #[test]
    fn sample_forced_cases() {
        let t = BinomialTable::new(4, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = sample_ksubset(&t, 2, 2, &mut rng).unwrap();
        assert_eq!(s.elements(), &[1, 2]);
        // n=2k: the partner is the forced complement
        for _ in 0..20 {
            let (a, b) = sample_disjoint_pair(&t, 4, 2, &mut rng).unwrap();
            assert!(are_disjoint(&a, &b).unwrap());
            let union: u32 = a.elements().iter().chain(b.elements()).sum();
            assert_eq!(union, 1 + 2 + 3 + 4);
        }
    }

    #[test]
    fn disjoint_pair_requires_room() {
        let t = BinomialTable::new(5, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_disjoint_pair(&t, 5, 3, &mut rng).is_err());
    }

    // Chi-square uniformity at significance 1e-3. Draw counts follow the
    // 1e4 * C(n,k) scale so the per-cell expectation is large.
    fn chi_square_uniform(counts: &[u64], draws: u64) -> f64 {
        let expected = draws as f64 / counts.len() as f64;
        counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum()
    }

    #[test]
    fn sample_ksubset_uniformity_chi_square() {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        let t = BinomialTable::new(8, 4).unwrap();
        for (n, k) in [(4u32, 2u32), (6, 2), (8, 3)] {
            let cells = t.binomial(n, k);
            let draws = 10_000 * cells;
            let mut counts = vec![0u64; cells as usize];
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            for _ in 0..draws {
                let s = sample_ksubset(&t, n, k, &mut rng).unwrap();
                counts[rank(&t, &s) as usize] += 1;
            }
            let stat = chi_square_uniform(&counts, draws);
            let crit = ChiSquared::new((cells - 1) as f64)
                .unwrap()
                .inverse_cdf(1.0 - 1e-3);
            assert!(stat < crit, "chi2 {stat} >= {crit} for (n,k)=({n},{k})");
        }
    }

    #[test]
    fn colex_iterator_matches_unrank() {
        let t = BinomialTable::new(9, 4).unwrap();
        for (n, k) in [(5u32, 2u32), (9, 4), (6, 1), (4, 4)] {
            let sets: Vec<Vec<u32>> = ColexSubsets::new(n, k).unwrap().collect();
            assert_eq!(sets.len() as u64, t.binomial(n, k));
            for (idx, elems) in sets.iter().enumerate() {
                assert_eq!(unrank(&t, idx as u64, n, k).unwrap().elements(), &elems[..]);
            }
        }
    }

    #[test]
    fn disjoint_pair_uniform_over_petersen_edges() {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        // The disjointness graph of all 2-subsets of [5] is the Petersen
        // graph; its 15 edges must be hit uniformly.
        let t = BinomialTable::new(5, 2).unwrap();
        let mut counts = std::collections::HashMap::new();
        let draws = 150_000u64;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..draws {
            let (a, b) = sample_disjoint_pair(&t, 5, 2, &mut rng).unwrap();
            let (ra, rb) = (rank(&t, &a), rank(&t, &b));
            let key = (ra.min(rb), ra.max(rb));
            *counts.entry(key).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 15);
        let values: Vec<u64> = counts.values().copied().collect();
        let stat = chi_square_uniform(&values, draws);
        let crit = ChiSquared::new(14.0).unwrap().inverse_cdf(1.0 - 1e-3);
        assert!(stat < crit, "chi2 {stat} >= {crit}");
    }
}
