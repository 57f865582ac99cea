//! Sequence distances for the clustering pipeline: weighted k-gram profile
//! differences and the Levenshtein edit distance.

use crate::measures::{delta, steinhaus};
use crate::rational::Rat;
use crate::set::FiniteSet;

/// The set of distinct length-`k` substrings of a sequence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KGramProfile {
    k: usize,
    grams: FiniteSet<Vec<u8>>,
}

impl KGramProfile {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn grams(&self) -> &FiniteSet<Vec<u8>> {
        &self.grams
    }

    pub fn len(&self) -> usize {
        self.grams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grams.is_empty()
    }
}

/// All distinct contiguous length-`k` substrings. A sequence shorter than
/// `k` has the empty profile. `k` must be at least 1.
pub fn kgram_profile(sequence: &[u8], k: usize) -> KGramProfile {
    assert!(k >= 1, "k must be at least 1");
    let grams = if sequence.len() < k {
        FiniteSet::new()
    } else {
        sequence.windows(k).map(<[u8]>::to_vec).collect()
    };
    KGramProfile { k, grams }
}

/// The weighted profile-difference distance
/// `Z_{k,α}(a, b) = α·min(|A|, |B|) + (1−α)·max(|A|, |B|)`
/// where `A` holds the k-grams of `a` missing from `b` and vice versa.
///
/// This is the weighted set-difference size applied to k-gram profiles, so
/// it satisfies the triangle inequality for α ≤ 1/2. It is a pseudometric on
/// sequences: distinct sequences can share a profile ("aab" and "aaab" both
/// have 2-gram profile {aa, ab}).
pub fn z_distance(alpha: &Rat, k: usize, a: &[u8], b: &[u8]) -> Rat {
    let pa = kgram_profile(a, k);
    let pb = kgram_profile(b, k);
    delta(alpha, pa.grams(), pb.grams())
}

/// Steinhaus-normalized variant of [`z_distance`]: the weighted difference
/// is replaced by the ratio `Δ_{γ,1}` on the two profiles with γ = α/(1−α),
/// giving a value in [0, 1] instead of a raw gram count.
///
/// Defined for α ≤ 1/2 (so that γ ≤ 1). Off by default in the pipeline; the
/// raw distance is what the clustering application describes.
pub fn z_distance_normalized(alpha: &Rat, k: usize, a: &[u8], b: &[u8]) -> Rat {
    assert!(
        *alpha <= Rat::new(1, 2),
        "normalized variant requires alpha <= 1/2"
    );
    let gamma = alpha / (Rat::one() - alpha);
    let pa = kgram_profile(a, k);
    let pb = kgram_profile(b, k);
    steinhaus(&gamma, &Rat::one(), pa.grams(), pb.grams())
}

/// Minimum number of single-symbol insertions, deletions and substitutions
/// transforming `a` into `b`. Two-row dynamic program over bytes.
pub fn levenshtein(a: &[u8], b: &[u8]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut diagonal = row[0];
        row[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let substitution = diagonal + usize::from(ca != cb);
            diagonal = row[j + 1];
            row[j + 1] = substitution.min(row[j] + 1).min(row[j + 1] + 1);
        }
    }
    row[b.len()]
}
