//! Randomized testers for intersectingness of uniform set families,
//! together with the exact combinatorial oracles needed to validate them,
//! generators for intersecting and far instances, and a seeded Monte-Carlo
//! harness that estimates rejection rates at desk scale.
//!
//! A family of k-subsets of `[n]` is intersecting when every two members
//! share an element, and eps-far from intersecting when more than
//! `eps * C(n,k)` members must be removed to make it so. The testers in
//! [`testers`] decide between the two cases from query access alone; the
//! oracles in [`distance`] compute the exact distance on small instances so
//! that every statistical claim can be checked against ground truth.
//!
//! Randomness is fully reproducible: all sampling uses ChaCha8 seeded from a
//! 64-bit value, and the harness derives per-trial substreams with a
//! documented SplitMix64 mix, so reports are bit-stable for a fixed seed.

pub mod combinatorics;
pub mod distance;
pub mod error;
pub mod family;
pub mod harness;
pub mod rat;
pub mod testers;

pub use combinatorics::{
    all_ksubsets, are_disjoint, elements_disjoint, rank, sample_disjoint_pair, sample_ksubset,
    unrank, BinomialTable, ColexSubsets, KSubset,
};
pub use distance::{
    captures, cross_distance, exact_distance, matching_bounds, restriction, search_far_restriction,
    useful_sets, DisjointnessGraph, FarRestriction, RestrictionSpec,
};
pub use error::{Error, Result};
pub use family::{
    dno_family, dno_family_with_pairs, full_family, junta_family, kneser_matching, random_family,
    read_family, read_family_string, star_family, write_family, write_family_string,
    ExplicitFamily, FamilyOracle, Junta,
};
pub use harness::{
    emit_report, run_trials, validate_instance, wilson_interval, ExperimentConfig, GeneratorSpec,
    ReportFormat, ReportRow, TesterKind, TrialStats, Validation,
};
pub use rat::Rat;
pub use testers::{
    canonical_sample_size, canonical_tester, density_tester, disjoint_pair_tester,
    enumerate_intersecting_juntas, junta_sample_size, junta_tester, JuntaEstimate, TesterReport,
    Verdict,
};
