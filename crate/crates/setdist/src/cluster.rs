//! Distance matrices, Ward-linkage agglomerative clustering, and the
//! α-sweep that tracks how the tree topology changes with the weight
//! parameter of the k-gram distance.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::fasta::SequenceRecord;
use crate::measures::{MeasureError, MeasureSpec};
use crate::rational::Rat;

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("duplicate sequence label {0:?}")]
    DuplicateLabel(String),
    #[error("invalid distance matrix: {0}")]
    MatrixInvalid(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// A symmetric pairwise dissimilarity matrix with labeled rows.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    values: Vec<f64>, // row-major n×n
}

impl DistanceMatrix {
    /// Validates symmetry, a zero diagonal, and non-negative finite entries.
    pub fn new(labels: Vec<String>, values: Vec<f64>) -> Result<DistanceMatrix, ClusterError> {
        let n = labels.len();
        if values.len() != n * n {
            return Err(ClusterError::MatrixInvalid(format!(
                "{} labels but {} entries (need {})",
                n,
                values.len(),
                n * n
            )));
        }
        let mut seen = BTreeSet::new();
        for label in &labels {
            if !seen.insert(label) {
                return Err(ClusterError::DuplicateLabel(label.clone()));
            }
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(ClusterError::MatrixInvalid(format!(
                    "nonzero diagonal at row {i}"
                )));
            }
            for j in 0..n {
                let v = values[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(ClusterError::MatrixInvalid(format!(
                        "entry ({i},{j}) = {v} is negative or not finite"
                    )));
                }
                if v != values[j * n + i] {
                    return Err(ClusterError::MatrixInvalid(format!(
                        "asymmetry at ({i},{j}): {v} vs {}",
                        values[j * n + i]
                    )));
                }
            }
        }
        Ok(DistanceMatrix { labels, values })
    }

    /// Pairwise distances between labeled sequences under a sequence
    /// measure. Pairs are computed in parallel; the result does not depend
    /// on scheduling.
    pub fn from_sequences(
        records: &[SequenceRecord],
        measure: &MeasureSpec,
    ) -> Result<DistanceMatrix, ClusterError> {
        let n = records.len();
        if n < 2 {
            return Err(ClusterError::MatrixInvalid(
                "need at least two sequences".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for r in records {
            if !seen.insert(&r.id) {
                return Err(ClusterError::DuplicateLabel(r.id.clone()));
            }
        }
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let computed: Result<Vec<f64>, MeasureError> = pairs
            .par_iter()
            .map(|&(i, j)| {
                measure
                    .sequence_distance(&records[i].residues, &records[j].residues)
                    .map(|d| d.to_f64())
            })
            .collect();
        let computed = computed?;
        let mut values = vec![0.0; n * n];
        for (&(i, j), &d) in pairs.iter().zip(&computed) {
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
        DistanceMatrix::new(records.iter().map(|r| r.id.clone()).collect(), values)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.labels.len() + j]
    }

    /// CSV with a header row of labels; row label in the first column.
    pub fn to_csv(&self) -> String {
        let n = self.len();
        let mut out = String::new();
        out.push_str("label");
        for label in &self.labels {
            out.push(',');
            out.push_str(label);
        }
        out.push('\n');
        for i in 0..n {
            out.push_str(&self.labels[i]);
            for j in 0..n {
                out.push(',');
                out.push_str(&format!("{}", self.get(i, j)));
            }
            out.push('\n');
        }
        out
    }
}

/// One agglomeration step: `left` and `right` are node ids (leaves are
/// `0..n`, the i-th merge is node `n + i`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MergeStep {
    pub left: usize,
    pub right: usize,
    pub height: f64,
}

/// A rooted binary merge tree with heights and leaf labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Dendrogram {
    labels: Vec<String>,
    merges: Vec<MergeStep>,
}

impl Dendrogram {
    /// Structural validation: `n − 1` merges over distinct labels, every
    /// node used as a child exactly once, children created before parents.
    pub fn new(labels: Vec<String>, merges: Vec<MergeStep>) -> Result<Dendrogram, ClusterError> {
        let n = labels.len();
        if n == 0 {
            return Err(ClusterError::MatrixInvalid("no leaves".into()));
        }
        let mut seen = BTreeSet::new();
        for label in &labels {
            if !seen.insert(label) {
                return Err(ClusterError::DuplicateLabel(label.clone()));
            }
        }
        if merges.len() + 1 != n {
            return Err(ClusterError::MatrixInvalid(format!(
                "{} leaves need {} merges, got {}",
                n,
                n - 1,
                merges.len()
            )));
        }
        let mut used = vec![false; n + merges.len()];
        for (i, m) in merges.iter().enumerate() {
            let parent = n + i;
            for child in [m.left, m.right] {
                if child >= parent {
                    return Err(ClusterError::MatrixInvalid(format!(
                        "merge {i} references node {child} that does not precede it"
                    )));
                }
                if used[child] {
                    return Err(ClusterError::MatrixInvalid(format!(
                        "node {child} is a child of two merges"
                    )));
                }
                used[child] = true;
            }
            if !m.height.is_finite() || m.height < 0.0 {
                return Err(ClusterError::MatrixInvalid(format!(
                    "merge {i} has invalid height {}",
                    m.height
                )));
            }
        }
        Ok(Dendrogram { labels, merges })
    }

    pub fn n_leaves(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn merges(&self) -> &[MergeStep] {
        &self.merges
    }

    pub fn root(&self) -> usize {
        self.labels.len() + self.merges.len() - 1
    }

    /// Merge height of a node; leaves sit at height 0.
    pub fn height_of(&self, node: usize) -> f64 {
        if node < self.labels.len() {
            0.0
        } else {
            self.merges[node - self.labels.len()].height
        }
    }

    pub fn children(&self, node: usize) -> Option<(usize, usize)> {
        node.checked_sub(self.labels.len())
            .map(|i| (self.merges[i].left, self.merges[i].right))
    }

    /// Whether heights never decrease from children to parents. Ward
    /// linkage guarantees this; other inputs may not, and callers are
    /// expected to report violations rather than clamp them.
    pub fn is_height_monotone(&self) -> bool {
        self.merges.iter().enumerate().all(|(i, m)| {
            let parent = self.height_of(self.labels.len() + i);
            parent >= self.height_of(m.left) && parent >= self.height_of(m.right)
        })
    }

    /// Canonical topology string: leaf labels at the leaves, children
    /// sorted lexicographically, heights ignored. Two dendrograms are
    /// isomorphic as leaf-labeled topologies iff their canonical forms are
    /// equal.
    pub fn canonical_form(&self) -> String {
        self.canon(self.root())
    }

    fn canon(&self, node: usize) -> String {
        match self.children(node) {
            None => self.labels[node].clone(),
            Some((l, r)) => {
                let (a, b) = (self.canon(l), self.canon(r));
                if a <= b {
                    format!("({a},{b})")
                } else {
                    format!("({b},{a})")
                }
            }
        }
    }
}

/// Agglomerative clustering under the Ward criterion (squared-dissimilarity
/// convention).
///
/// The Lance–Williams recurrence runs on squared dissimilarities,
///
/// ```text
/// d²(k, i∪j) = ((nᵢ+nₖ)·d²(k,i) + (nⱼ+nₖ)·d²(k,j) − nₖ·d²(i,j)) / (nᵢ+nⱼ+nₖ)
/// ```
///
/// and reported merge heights are square roots of the merge values, so two
/// points at distance `d` merge at height `d`. Ties pick the smallest
/// (row, col) pair in the current matrix indexing, with the merged cluster
/// taking the row of the smaller index; the outcome is deterministic across
/// platforms and thread counts.
#[allow(clippy::needless_range_loop)] // (row, col) indices carry the tie-break order
pub fn ward_linkage(matrix: &DistanceMatrix) -> Result<Dendrogram, ClusterError> {
    let n = matrix.len();
    if n < 2 {
        return Err(ClusterError::MatrixInvalid(
            "need at least two observations".into(),
        ));
    }
    // Working matrix of squared dissimilarities between active clusters.
    let mut work: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| matrix.get(i, j).powi(2)).collect())
        .collect();
    let mut nodes: Vec<usize> = (0..n).collect();
    let mut sizes: Vec<usize> = vec![1; n];
    let mut merges: Vec<MergeStep> = Vec::with_capacity(n - 1);

    while nodes.len() > 1 {
        let m = nodes.len();
        let (mut pi, mut pj, mut best) = (0, 1, f64::INFINITY);
        for i in 0..m {
            for j in i + 1..m {
                if work[i][j] < best {
                    best = work[i][j];
                    pi = i;
                    pj = j;
                }
            }
        }
        let (vi, vj) = (nodes[pi], nodes[pj]);
        let (si, sj) = (sizes[vi], sizes[vj]);
        let new_id = n + merges.len();
        merges.push(MergeStep {
            left: vi,
            right: vj,
            height: best.sqrt(),
        });
        for k in 0..m {
            if k == pi || k == pj {
                continue;
            }
            let sk = sizes[nodes[k]] as f64;
            let updated = ((si as f64 + sk) * work[pi][k] + (sj as f64 + sk) * work[pj][k]
                - sk * best)
                / (si as f64 + sj as f64 + sk);
            work[pi][k] = updated;
            work[k][pi] = updated;
        }
        // Merged cluster takes position pi; drop row/column pj.
        nodes[pi] = new_id;
        sizes.push(si + sj);
        nodes.remove(pj);
        work.remove(pj);
        for row in &mut work {
            row.remove(pj);
        }
    }
    Dendrogram::new(matrix.labels().to_vec(), merges)
}

/// One maximal α-interval on which the Ward tree keeps a single topology.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepInterval {
    pub lo: Rat,
    pub hi: Rat,
    pub canonical: String,
    pub newick: String,
}

/// Builds the `Z_{k,α}` distance matrix and Ward tree for every α in the
/// grid, then coalesces adjacent grid points with equal leaf-labeled
/// topology into maximal intervals. `normalize` swaps in the
/// Steinhaus-transformed profile distance.
///
/// `alphas` must be non-empty and strictly increasing. Per-α pipelines run
/// in parallel; the segmentation is collected in grid order.
pub fn alpha_sweep(
    records: &[SequenceRecord],
    k: usize,
    alphas: &[Rat],
    normalize: bool,
) -> Result<Vec<SweepInterval>, ClusterError> {
    if alphas.is_empty() {
        return Err(ClusterError::MatrixInvalid("empty alpha grid".into()));
    }
    if alphas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ClusterError::MatrixInvalid(
            "alpha grid must be strictly increasing".into(),
        ));
    }
    let trees: Result<Vec<(String, String)>, ClusterError> = alphas
        .par_iter()
        .map(|alpha| {
            let measure = MeasureSpec::ZGram {
                alpha: alpha.clone(),
                k,
                normalize,
            };
            let matrix = DistanceMatrix::from_sequences(records, &measure)?;
            let tree = ward_linkage(&matrix)?;
            Ok((tree.canonical_form(), crate::newick::to_newick(&tree)))
        })
        .collect();
    let trees = trees?;

    let mut intervals: Vec<SweepInterval> = Vec::new();
    for (alpha, (canonical, newick)) in alphas.iter().zip(trees) {
        match intervals.last_mut() {
            Some(last) if last.canonical == canonical => last.hi = alpha.clone(),
            _ => intervals.push(SweepInterval {
                lo: alpha.clone(),
                hi: alpha.clone(),
                canonical,
                newick,
            }),
        }
    }
    Ok(intervals)
}
