//! Exact set dissimilarities from the Tversky family, a triangle-inequality
//! verification engine, and a small sequence-clustering pipeline.
//!
//! # What's here
//!
//! * [`measures`] — the symmetric Tversky ratio dissimilarity `D_{α,β}` and
//!   the classical coefficients it interpolates (Jaccard, a set analogue of
//!   the normalized information distance, Sørensen–Dice, Szymkiewicz–Simpson
//!   overlap, the `J_p` family, the Steinhaus-style `Δ_{γ,s}`), all in exact
//!   rational arithmetic.
//! * [`verify`] — the closed-form metric-region predicate for `D_{α,β}`
//!   (`α ≤ 1/2`, `β ≥ 1/(1−α)`), exhaustive exact triangle checks over small
//!   power sets, constructive counterexamples outside the region, and the
//!   Gragera–Suppakitpaisarn relaxed-triangle constant.
//! * [`lz78`] / [`seqdist`] — LZ78 dictionaries with the Lempel–Ziv Jaccard
//!   distance, k-gram profile distances, and Levenshtein edit distance.
//! * [`cluster`] / [`newick`] — Ward-linkage dendrograms over labeled
//!   sequences, Newick output, and topology classification across a
//!   parameter sweep.
//! * [`fasta`] — input records for the pipeline.
//!
//! Everything is a pure function of its inputs; values are immutable after
//! construction and safe to share across threads. Long scans parallelize
//! internally with deterministic results.

pub mod cluster;
pub mod fasta;
pub mod lz78;
pub mod measures;
pub mod newick;
pub mod rational;
pub mod seqdist;
pub mod set;
pub mod verify;

pub use cluster::{
    alpha_sweep, ward_linkage, ClusterError, Dendrogram, DistanceMatrix, MergeStep, SweepInterval,
};
pub use fasta::{parse_fasta_str, read_fasta, FastaError, SequenceRecord};
pub use lz78::{lz78_dictionary, lzjd, LzDictionary};
pub use measures::{
    delta, dice_similarity, extend_with_empty, jaccard, jp_distance, nid_analogue,
    overlap_coefficient, pair_stats, steinhaus, strm, tversky, DistanceValue, Family, MeasureError,
    MeasureSpec,
};
pub use newick::{parse_newick, to_newick, to_newick_with_precision, NewickError};
pub use rational::{ParseRatError, Rat};
pub use seqdist::{kgram_profile, levenshtein, z_distance, KGramProfile};
pub use set::{set_from_bitmask, FiniteSet, PairStats, SetError, TriplePartition};
pub use verify::{
    check_triangle_exhaustive, counterexample_large_n, counterexample_small, epsilon_transform,
    estimate_rho, explore_jp_triangle, find_triangle_violation, gragera_rho, gragera_rho_exact,
    grid_to_csv, power_set, region_grid, region_predicate, Counterexample, JpExploration,
    RegionCell, RhoBound, VerifyError,
};
