//! The Tversky family of set dissimilarities and its named special cases.
//!
//! The central object is the symmetric Tversky ratio model (STRM)
//! dissimilarity
//!
//! ```text
//! D_{α,β}(X, Y) = β·(α·m + (1−α)·M) / (|X∩Y| + bias + β·(α·m + (1−α)·M))
//! ```
//!
//! with `m`/`M` the smaller/larger of the two set-difference sizes, together
//! with the classical coefficients it subsumes: the Jaccard distance at
//! (α, β) = (1/2, 2), a set analogue of the normalized information distance
//! at (0, 1), Sørensen–Dice at (1/2, 1), the `J_p` interpolation between the
//! first two, the asymmetric Tversky dissimilarity, the Szymkiewicz–Simpson
//! overlap coefficient, and the Steinhaus-style normalization `Δ_{γ,s}`.
//!
//! All values are exact rationals ([`Rat`]); every dissimilarity returns 0
//! at (∅, ∅).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::rational::Rat;
use crate::set::{FiniteSet, PairStats};

/// Largest accepted exponent for [`jp_distance`].
pub const MAX_JP_EXPONENT: u32 = 1024;

/// A boxed total set measure, as handed to the verification engine.
pub type SetMeasureFn<T> = Box<dyn Fn(&FiniteSet<T>, &FiniteSet<T>) -> Rat + Sync + Send>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MeasureError {
    /// The overlap coefficient divides by min(|X|, |Y|) and is undefined
    /// when exactly one operand is empty.
    #[error("overlap coefficient is undefined when exactly one operand is empty")]
    UndefinedValue,
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("measure {0} does not apply to atom sets")]
    NotASetMeasure(&'static str),
    #[error("measure {0} does not apply to sequences")]
    NotASequenceMeasure(&'static str),
    #[error("unknown measure family {0:?}")]
    UnknownFamily(String),
}

/// α·m + (1−α)·M for precomputed pair statistics.
fn weighted_diff(alpha: &Rat, stats: &PairStats) -> Rat {
    let one_minus = Rat::one() - alpha;
    alpha * Rat::from(stats.min_diff()) + one_minus * Rat::from(stats.max_diff())
}

/// Pairwise cardinalities of `(X, Y)`; the building block for every measure.
pub fn pair_stats<T: Ord>(x: &FiniteSet<T>, y: &FiniteSet<T>) -> PairStats {
    PairStats::compute(x, y)
}

/// Symmetric Tversky ratio dissimilarity `D_{α,β}` (with optional bias).
///
/// Domain: 0 ≤ α ≤ 1, β > 0, bias ≥ 0. Value in [0, 1]; 0 at (∅, ∅). The
/// ratio degenerates to 0/0 only at α = 1 with exactly one empty operand;
/// there the value is 1, the limit from α < 1.
pub fn strm<T: Ord>(
    alpha: &Rat,
    beta: &Rat,
    bias: &Rat,
    x: &FiniteSet<T>,
    y: &FiniteSet<T>,
) -> Rat {
    let stats = PairStats::compute(x, y);
    if stats.union() == 0 {
        return Rat::zero();
    }
    let num = beta * weighted_diff(alpha, &stats);
    let den = Rat::from(stats.intersection) + bias + &num;
    if den.is_zero() {
        return Rat::one();
    }
    num / den
}

/// Asymmetric Tversky dissimilarity `1 − |X∩Y| / (|X∩Y| + α|X\Y| + β|Y\X|)`.
///
/// Domain: α ≥ 0, β ≥ 0. When the denominator vanishes on a non-trivial pair
/// (possible only with α = β = 0 and disjoint operands) the value is 1, the
/// continuous extension from positive parameters.
pub fn tversky<T: Ord>(alpha: &Rat, beta: &Rat, x: &FiniteSet<T>, y: &FiniteSet<T>) -> Rat {
    let stats = PairStats::compute(x, y);
    if stats.union() == 0 {
        return Rat::zero();
    }
    let cap = Rat::from(stats.intersection);
    let den = &cap + alpha * Rat::from(stats.only_left) + beta * Rat::from(stats.only_right);
    if den.is_zero() {
        return Rat::one();
    }
    Rat::one() - cap / den
}

/// Jaccard distance `|X Δ Y| / |X ∪ Y|`; 0 at (∅, ∅).
pub fn jaccard<T: Ord>(x: &FiniteSet<T>, y: &FiniteSet<T>) -> Rat {
    let stats = PairStats::compute(x, y);
    if stats.union() == 0 {
        return Rat::zero();
    }
    Rat::from(stats.sym_diff()) / Rat::from(stats.union())
}

/// Set analogue of the normalized information distance:
/// `max(|X\Y|, |Y\X|) / max(|X|, |Y|)`; 0 at (∅, ∅).
pub fn nid_analogue<T: Ord>(x: &FiniteSet<T>, y: &FiniteSet<T>) -> Rat {
    let stats = PairStats::compute(x, y);
    if stats.union() == 0 {
        return Rat::zero();
    }
    // max(|X|, |Y|) = |X∩Y| + M
    Rat::from(stats.max_diff()) / Rat::from(stats.intersection + stats.max_diff())
}

/// The `J_p` interpolation between the Jaccard distance (p = 1) and the
/// normalized-information-distance analogue (p → ∞):
///
/// ```text
/// J_p(X, Y) = (2·(|Y\X|^p + |X\Y|^p) / (|X|^p + |Y|^p + |Y\X|^p + |X\Y|^p))^(1/p)
/// ```
///
/// For integer p the inner ratio is computed exactly and only the outer p-th
/// root is evaluated in floating point; for non-integer p the whole
/// expression is floating point. Domain: 1 ≤ p ≤ [`MAX_JP_EXPONENT`].
pub fn jp_distance<T: Ord>(p: &Rat, x: &FiniteSet<T>, y: &FiniteSet<T>) -> f64 {
    debug_assert!(*p >= Rat::one());
    let stats = PairStats::compute(x, y);
    if stats.union() == 0 {
        return 0.0;
    }
    if p.is_integer() {
        let exp = p
            .numer()
            .try_into()
            .ok()
            .filter(|&e: &u32| e <= MAX_JP_EXPONENT)
            .expect("integer p must lie in 1..=MAX_JP_EXPONENT");
        let ratio = jp_inner_ratio(exp, &stats);
        if exp == 1 {
            return ratio.to_f64();
        }
        return ratio.to_f64().powf(1.0 / f64::from(exp));
    }
    let pf = p.to_f64();
    let a = (stats.only_right as f64).powf(pf);
    let b = (stats.only_left as f64).powf(pf);
    let xl = (stats.left_len() as f64).powf(pf);
    let yl = (stats.right_len() as f64).powf(pf);
    (2.0 * (a + b) / (xl + yl + a + b)).powf(1.0 / pf)
}

/// Exact inner ratio of `J_p` for integer exponents.
fn jp_inner_ratio(exp: u32, stats: &PairStats) -> Rat {
    let pow = |n: usize| BigInt::from(n).pow(exp);
    let a = pow(stats.only_right);
    let b = pow(stats.only_left);
    let num = Rat::from(BigInt::from(2) * (&a + &b));
    let den = Rat::from(pow(stats.left_len()) + pow(stats.right_len()) + a + b);
    num / den
}

/// Sørensen–Dice similarity `2|X∩Y| / (|X| + |Y|)`; 1 at (∅, ∅).
pub fn dice_similarity<T: Ord>(x: &FiniteSet<T>, y: &FiniteSet<T>) -> Rat {
    let stats = PairStats::compute(x, y);
    if stats.union() == 0 {
        return Rat::one();
    }
    Rat::from(2 * stats.intersection) / Rat::from(stats.left_len() + stats.right_len())
}

/// Szymkiewicz–Simpson overlap coefficient `|X∩Y| / min(|X|, |Y|)`.
///
/// 1 at (∅, ∅) and whenever one operand contains the other; undefined when
/// exactly one operand is empty.
pub fn overlap_coefficient<T: Ord>(
    x: &FiniteSet<T>,
    y: &FiniteSet<T>,
) -> Result<Rat, MeasureError> {
    let stats = PairStats::compute(x, y);
    if stats.union() == 0 {
        return Ok(Rat::one());
    }
    let min_len = stats.left_len().min(stats.right_len());
    if min_len == 0 {
        return Err(MeasureError::UndefinedValue);
    }
    Ok(Rat::from(stats.intersection) / Rat::from(min_len))
}

/// The weighted set-difference size `α·m + (1−α)·M`.
///
/// Unlike the ratio measures this is unnormalized: its range is
/// [0, max cardinality]. Domain: 0 ≤ α ≤ 1.
pub fn delta<T: Ord>(alpha: &Rat, x: &FiniteSet<T>, y: &FiniteSet<T>) -> Rat {
    weighted_diff(alpha, &PairStats::compute(x, y))
}

/// The Steinhaus-style family `Δ_{γ,s} = (γm + M) / (|X∩Y| + s|X∪Y| + γm + M)`.
///
/// Domain: 0 ≤ γ ≤ 1, s ≥ 0. At s = 0, γ = 1 this is exactly the Jaccard
/// distance. Whether it is a metric for s > 0 is an open question; nothing
/// here assumes it is.
pub fn steinhaus<T: Ord>(gamma: &Rat, s: &Rat, x: &FiniteSet<T>, y: &FiniteSet<T>) -> Rat {
    let stats = PairStats::compute(x, y);
    if stats.union() == 0 {
        return Rat::zero();
    }
    let num = gamma * Rat::from(stats.min_diff()) + Rat::from(stats.max_diff());
    if num.is_zero() {
        return Rat::zero();
    }
    let den = Rat::from(stats.intersection) + s * Rat::from(stats.union()) + &num;
    num / den
}

/// Extends a measure defined on nonempty sets to one including ∅:
/// `d̂(∅, ∅) = 0`, `d̂(X, ∅) = d̂(∅, X) = 1`, pass-through otherwise.
///
/// Preserves metricity whenever `d` is a metric bounded by 2 on nonempty
/// sets; the bound is the caller's obligation.
pub fn extend_with_empty<T, F>(d: F) -> impl Fn(&FiniteSet<T>, &FiniteSet<T>) -> Rat
where
    T: Ord,
    F: Fn(&FiniteSet<T>, &FiniteSet<T>) -> Rat,
{
    move |x, y| match (x.is_empty(), y.is_empty()) {
        (true, true) => Rat::zero(),
        (true, false) | (false, true) => Rat::one(),
        (false, false) => d(x, y),
    }
}

/// A named dissimilarity with its parameters. Families that wrap a classical
/// similarity coefficient (`Dice`, `Overlap`) evaluate as the complement
/// dissimilarity in distance contexts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureSpec {
    /// Symmetric Tversky ratio dissimilarity `D_{α,β}`.
    Strm { alpha: Rat, beta: Rat, bias: Rat },
    /// Asymmetric Tversky dissimilarity `d^T_{α,β}`.
    Tversky { alpha: Rat, beta: Rat },
    /// Jaccard distance.
    Jaccard,
    /// Normalized-information-distance analogue.
    NidAnalogue,
    /// `J_p` interpolation (floating-point root).
    Jp { p: Rat },
    /// Sørensen–Dice dissimilarity (1 − Dice similarity).
    Dice,
    /// Szymkiewicz–Simpson dissimilarity (1 − overlap coefficient).
    Overlap,
    /// Weighted set-difference size `α·m + (1−α)·M`.
    Delta { alpha: Rat },
    /// Steinhaus-style family `Δ_{γ,s}`.
    Steinhaus { gamma: Rat, s: Rat },
    /// Lempel–Ziv Jaccard distance on byte sequences.
    Lzjd,
    /// Weighted k-gram profile difference `Z_{k,α}` on byte sequences.
    /// With `normalize` the Steinhaus-transformed variant is used instead
    /// of the raw gram count (requires α ≤ 1/2).
    ZGram {
        alpha: Rat,
        k: usize,
        normalize: bool,
    },
    /// Levenshtein edit distance on byte sequences.
    Edit,
}

/// An evaluated distance: exact rational wherever the underlying measure is
/// rational-valued, floating point for the `J_p` root.
#[derive(Clone, Debug, PartialEq)]
pub enum DistanceValue {
    Exact(Rat),
    Real(f64),
}

impl DistanceValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            DistanceValue::Exact(r) => r.to_f64(),
            DistanceValue::Real(v) => *v,
        }
    }
}

impl fmt::Display for DistanceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceValue::Exact(r) => write!(f, "{} ({})", r, r.decimal(12)),
            DistanceValue::Real(v) => write!(f, "{v}"),
        }
    }
}

impl MeasureSpec {
    /// Family tag as used on the command line.
    pub fn family(&self) -> &'static str {
        match self {
            MeasureSpec::Strm { .. } => "strm",
            MeasureSpec::Tversky { .. } => "tversky",
            MeasureSpec::Jaccard => "jaccard",
            MeasureSpec::NidAnalogue => "nid",
            MeasureSpec::Jp { .. } => "jp",
            MeasureSpec::Dice => "dice",
            MeasureSpec::Overlap => "overlap",
            MeasureSpec::Delta { .. } => "delta",
            MeasureSpec::Steinhaus { .. } => "steinhaus",
            MeasureSpec::Lzjd => "lzjd",
            MeasureSpec::ZGram { .. } => "zgram",
            MeasureSpec::Edit => "edit",
        }
    }

    /// Checks the documented parameter domains.
    pub fn validate(&self) -> Result<(), MeasureError> {
        let unit = |name: &'static str, v: &Rat| {
            if v.is_negative() || *v > Rat::one() {
                Err(MeasureError::InvalidParameter {
                    name,
                    reason: format!("{v} is outside [0, 1]"),
                })
            } else {
                Ok(())
            }
        };
        let non_negative = |name: &'static str, v: &Rat| {
            if v.is_negative() {
                Err(MeasureError::InvalidParameter {
                    name,
                    reason: format!("{v} is negative"),
                })
            } else {
                Ok(())
            }
        };
        let positive = |name: &'static str, v: &Rat| {
            if !v.is_positive() {
                Err(MeasureError::InvalidParameter {
                    name,
                    reason: format!("{v} is not positive"),
                })
            } else {
                Ok(())
            }
        };
        match self {
            MeasureSpec::Strm { alpha, beta, bias } => {
                unit("alpha", alpha)?;
                positive("beta", beta)?;
                non_negative("bias", bias)
            }
            MeasureSpec::Tversky { alpha, beta } => {
                non_negative("alpha", alpha)?;
                non_negative("beta", beta)
            }
            MeasureSpec::Jp { p } => {
                if *p < Rat::one() || *p > Rat::from(i64::from(MAX_JP_EXPONENT)) {
                    return Err(MeasureError::InvalidParameter {
                        name: "p",
                        reason: format!("{p} is outside [1, {MAX_JP_EXPONENT}]"),
                    });
                }
                Ok(())
            }
            MeasureSpec::Delta { alpha } => unit("alpha", alpha),
            MeasureSpec::Steinhaus { gamma, s } => {
                unit("gamma", gamma)?;
                non_negative("s", s)
            }
            MeasureSpec::ZGram {
                alpha,
                k,
                normalize,
            } => {
                unit("alpha", alpha)?;
                if *k == 0 {
                    return Err(MeasureError::InvalidParameter {
                        name: "k",
                        reason: "k must be at least 1".to_string(),
                    });
                }
                if *normalize && *alpha > Rat::new(1, 2) {
                    return Err(MeasureError::InvalidParameter {
                        name: "alpha",
                        reason: format!("{alpha} > 1/2; the normalized variant needs alpha <= 1/2"),
                    });
                }
                Ok(())
            }
            MeasureSpec::Jaccard
            | MeasureSpec::NidAnalogue
            | MeasureSpec::Dice
            | MeasureSpec::Overlap
            | MeasureSpec::Lzjd
            | MeasureSpec::Edit => Ok(()),
        }
    }

    /// Evaluates the measure on two atom sets.
    pub fn set_distance<T: Ord>(
        &self,
        x: &FiniteSet<T>,
        y: &FiniteSet<T>,
    ) -> Result<DistanceValue, MeasureError> {
        use DistanceValue::{Exact, Real};
        match self {
            MeasureSpec::Strm { alpha, beta, bias } => Ok(Exact(strm(alpha, beta, bias, x, y))),
            MeasureSpec::Tversky { alpha, beta } => Ok(Exact(tversky(alpha, beta, x, y))),
            MeasureSpec::Jaccard => Ok(Exact(jaccard(x, y))),
            MeasureSpec::NidAnalogue => Ok(Exact(nid_analogue(x, y))),
            MeasureSpec::Jp { p } => Ok(Real(jp_distance(p, x, y))),
            MeasureSpec::Dice => Ok(Exact(Rat::one() - dice_similarity(x, y))),
            MeasureSpec::Overlap => Ok(Exact(Rat::one() - overlap_coefficient(x, y)?)),
            MeasureSpec::Delta { alpha } => Ok(Exact(delta(alpha, x, y))),
            MeasureSpec::Steinhaus { gamma, s } => Ok(Exact(steinhaus(gamma, s, x, y))),
            MeasureSpec::Lzjd | MeasureSpec::ZGram { .. } | MeasureSpec::Edit => {
                Err(MeasureError::NotASetMeasure(self.family()))
            }
        }
    }

    /// Evaluates the measure on two byte sequences.
    pub fn sequence_distance(&self, a: &[u8], b: &[u8]) -> Result<DistanceValue, MeasureError> {
        use DistanceValue::Exact;
        match self {
            MeasureSpec::Lzjd => Ok(Exact(crate::lz78::lzjd(a, b))),
            MeasureSpec::ZGram {
                alpha,
                k,
                normalize,
            } => Ok(Exact(if *normalize {
                crate::seqdist::z_distance_normalized(alpha, *k, a, b)
            } else {
                crate::seqdist::z_distance(alpha, *k, a, b)
            })),
            MeasureSpec::Edit => Ok(Exact(Rat::from(crate::seqdist::levenshtein(a, b)))),
            _ => Err(MeasureError::NotASequenceMeasure(self.family())),
        }
    }

    /// The rational parameters this family reads, for report echoing.
    pub fn rational_params(&self) -> Vec<(&'static str, &Rat)> {
        match self {
            MeasureSpec::Strm { alpha, beta, bias } => {
                vec![("alpha", alpha), ("beta", beta), ("bias", bias)]
            }
            MeasureSpec::Tversky { alpha, beta } => vec![("alpha", alpha), ("beta", beta)],
            MeasureSpec::Jp { p } => vec![("p", p)],
            MeasureSpec::Delta { alpha } => vec![("alpha", alpha)],
            MeasureSpec::Steinhaus { gamma, s } => vec![("gamma", gamma), ("s", s)],
            MeasureSpec::ZGram { alpha, .. } => vec![("alpha", alpha)],
            MeasureSpec::Jaccard
            | MeasureSpec::NidAnalogue
            | MeasureSpec::Dice
            | MeasureSpec::Overlap
            | MeasureSpec::Lzjd
            | MeasureSpec::Edit => Vec::new(),
        }
    }

    /// A total, exact set measure suitable for exhaustive verification.
    ///
    /// `Overlap` is rejected: its dissimilarity is undefined on pairs with
    /// exactly one empty operand, so it cannot be scanned over a power set.
    /// Sequence families and the floating-point `J_p` are rejected likewise.
    pub fn exact_set_fn<T: Ord>(&self) -> Result<SetMeasureFn<T>, MeasureError> {
        match self.clone() {
            MeasureSpec::Strm { alpha, beta, bias } => {
                Ok(Box::new(move |x, y| strm(&alpha, &beta, &bias, x, y)))
            }
            MeasureSpec::Tversky { alpha, beta } => {
                Ok(Box::new(move |x, y| tversky(&alpha, &beta, x, y)))
            }
            MeasureSpec::Jaccard => Ok(Box::new(|x, y| jaccard(x, y))),
            MeasureSpec::NidAnalogue => Ok(Box::new(|x, y| nid_analogue(x, y))),
            MeasureSpec::Dice => Ok(Box::new(|x, y| Rat::one() - dice_similarity(x, y))),
            MeasureSpec::Delta { alpha } => Ok(Box::new(move |x, y| delta(&alpha, x, y))),
            MeasureSpec::Steinhaus { gamma, s } => {
                Ok(Box::new(move |x, y| steinhaus(&gamma, &s, x, y)))
            }
            MeasureSpec::Overlap => Err(MeasureError::UndefinedValue),
            MeasureSpec::Jp { .. }
            | MeasureSpec::Lzjd
            | MeasureSpec::ZGram { .. }
            | MeasureSpec::Edit => Err(MeasureError::NotASetMeasure(self.family())),
        }
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureSpec::Strm { alpha, beta, bias } => {
                write!(f, "strm(alpha={alpha}, beta={beta}")?;
                if !bias.is_zero() {
                    write!(f, ", bias={bias}")?;
                }
                write!(f, ")")
            }
            MeasureSpec::Tversky { alpha, beta } => {
                write!(f, "tversky(alpha={alpha}, beta={beta})")
            }
            MeasureSpec::Jaccard => write!(f, "jaccard"),
            MeasureSpec::NidAnalogue => write!(f, "nid"),
            MeasureSpec::Jp { p } => write!(f, "jp(p={p})"),
            MeasureSpec::Dice => write!(f, "dice"),
            MeasureSpec::Overlap => write!(f, "overlap"),
            MeasureSpec::Delta { alpha } => write!(f, "delta(alpha={alpha})"),
            MeasureSpec::Steinhaus { gamma, s } => write!(f, "steinhaus(gamma={gamma}, s={s})"),
            MeasureSpec::Lzjd => write!(f, "lzjd"),
            MeasureSpec::ZGram {
                alpha,
                k,
                normalize,
            } => {
                write!(f, "zgram(alpha={alpha}, k={k}")?;
                if *normalize {
                    write!(f, ", normalized")?;
                }
                write!(f, ")")
            }
            MeasureSpec::Edit => write!(f, "edit"),
        }
    }
}

/// Family tags accepted by [`MeasureSpec`] builders and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Strm,
    Tversky,
    Jaccard,
    NidAnalogue,
    Jp,
    Dice,
    Overlap,
    Delta,
    Steinhaus,
    Lzjd,
    ZGram,
    Edit,
}

impl FromStr for Family {
    type Err = MeasureError;

    fn from_str(s: &str) -> Result<Family, MeasureError> {
        match s.to_ascii_lowercase().as_str() {
            "strm" => Ok(Family::Strm),
            "tversky" => Ok(Family::Tversky),
            "jaccard" | "j1" => Ok(Family::Jaccard),
            "nid" | "jinf" => Ok(Family::NidAnalogue),
            "jp" => Ok(Family::Jp),
            "dice" => Ok(Family::Dice),
            "overlap" => Ok(Family::Overlap),
            "delta" => Ok(Family::Delta),
            "steinhaus" => Ok(Family::Steinhaus),
            "lzjd" => Ok(Family::Lzjd),
            "zgram" | "zkgram" => Ok(Family::ZGram),
            "edit" | "levenshtein" => Ok(Family::Edit),
            other => Err(MeasureError::UnknownFamily(other.to_string())),
        }
    }
}
