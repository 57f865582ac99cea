//! Metricity checks for set dissimilarities.
//!
//! Three complementary tools:
//!
//! * a closed-form predicate for the exact parameter region where the
//!   symmetric Tversky dissimilarity `D_{α,β}` is a metric
//!   (`0 ≤ α ≤ 1/2` and `β ≥ 1/(1−α)`, boundary included);
//! * an exhaustive, exact triangle-inequality scan over the power set of a
//!   small ground set, returning the lexicographically first violating
//!   triple as a re-checkable certificate;
//! * constructive counterexample generators for every parameter point
//!   outside the region, including the family that needs unboundedly large
//!   ground sets when α > 1/2.
//!
//! All comparisons are exact rational arithmetic. The region boundary is
//! attained with equality, so no floating-point shortcut is sound here.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use thiserror::Error;

use crate::measures::{jp_distance, strm};
use crate::rational::Rat;
use crate::set::FiniteSet;

/// Cap for exhaustive scans: 8^6 ≈ 262k ordered subset triples.
pub const MAX_GROUND: u32 = 6;

/// Cap on the base-set size of the constructive large-n counterexample.
pub const MAX_CONSTRUCTION: i64 = 1_000_000;

/// Floating-point slack used by the exploratory (non-exact) triangle scan.
pub const FLOAT_SLACK: f64 = 1e-9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("ground-set size {0} exceeds the exhaustive-search cap of {MAX_GROUND}")]
    GroundTooLarge(u32),
    #[error("parameters outside this construction's regime: {0}")]
    NotInRegime(String),
    #[error("{0}")]
    DomainError(String),
    #[error("construction needs a base set of {0} elements, beyond the cap of {MAX_CONSTRUCTION}")]
    ConstructionTooLarge(BigInt),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// A certified triangle-inequality violation: `d(X,Y) > d(X,Z) + d(Z,Y)`.
///
/// The margin is stored exactly and is strictly positive by construction;
/// [`Counterexample::reverify`] recomputes all three distances from scratch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample<T: Ord> {
    pub x: FiniteSet<T>,
    pub y: FiniteSet<T>,
    pub z: FiniteSet<T>,
    pub d_xy: Rat,
    pub d_xz: Rat,
    pub d_zy: Rat,
    pub margin: Rat,
}

impl<T: Ord> Counterexample<T> {
    /// Builds a certificate when the distances witness a strict violation.
    pub fn try_new(
        x: FiniteSet<T>,
        y: FiniteSet<T>,
        z: FiniteSet<T>,
        d_xy: Rat,
        d_xz: Rat,
        d_zy: Rat,
    ) -> Option<Counterexample<T>> {
        let margin = &d_xy - &d_xz - &d_zy;
        if margin.is_positive() {
            Some(Counterexample {
                x,
                y,
                z,
                d_xy,
                d_xz,
                d_zy,
                margin,
            })
        } else {
            None
        }
    }

    /// Recomputes the three distances and checks them against the stored
    /// certificate, margin included.
    pub fn reverify<F>(&self, measure: F) -> bool
    where
        F: Fn(&FiniteSet<T>, &FiniteSet<T>) -> Rat,
    {
        let d_xy = measure(&self.x, &self.y);
        let d_xz = measure(&self.x, &self.z);
        let d_zy = measure(&self.z, &self.y);
        d_xy == self.d_xy
            && d_xz == self.d_xz
            && d_zy == self.d_zy
            && (&d_xy - &d_xz - &d_zy) == self.margin
            && self.margin.is_positive()
    }
}

impl<T: Ord + fmt::Display> Counterexample<T> {
    /// Line-delimited report block.
    pub fn report(&self) -> String {
        format!(
            "X: {}\nY: {}\nZ: {}\nd(X,Y): {} ({})\nd(X,Z): {} ({})\nd(Z,Y): {} ({})\nmargin: {} ({})\n",
            self.x,
            self.y,
            self.z,
            self.d_xy,
            self.d_xy.decimal(12),
            self.d_xz,
            self.d_xz.decimal(12),
            self.d_zy,
            self.d_zy.decimal(12),
            self.margin,
            self.margin.decimal(12),
        )
    }
}

impl Counterexample<i64> {
    /// Relabels all three sets by a common shift so every element is
    /// non-negative. Distances depend only on intersection and difference
    /// cardinalities, which relabeling preserves, so the certificate and its
    /// margin carry over unchanged.
    pub fn shifted_non_negative(&self) -> Counterexample<i64> {
        let min = self
            .x
            .iter()
            .chain(self.y.iter())
            .chain(self.z.iter())
            .min()
            .copied()
            .unwrap_or(0);
        let shift = if min < 0 { -min } else { 0 };
        let relabel = |s: &FiniteSet<i64>| s.iter().map(|e| e + shift).collect();
        Counterexample {
            x: relabel(&self.x),
            y: relabel(&self.y),
            z: relabel(&self.z),
            d_xy: self.d_xy.clone(),
            d_xz: self.d_xz.clone(),
            d_zy: self.d_zy.clone(),
            margin: self.margin.clone(),
        }
    }
}

/// Decimal bitmask encoding of a set of non-negative integers:
/// bit `i` set ⇔ `i` is an element.
pub fn set_bitmask(s: &FiniteSet<i64>) -> BigUint {
    let mut mask = BigUint::ZERO;
    for &e in s.iter() {
        assert!(e >= 0, "bitmask encoding needs non-negative elements");
        mask.set_bit(e as u64, true);
    }
    mask
}

/// The subsets of `{0, …, n−1}` in ascending bitmask order.
pub fn power_set(n: u32) -> Vec<FiniteSet<i64>> {
    (0..(1u64 << n)).map(crate::set::set_from_bitmask).collect()
}

/// All pairwise distances over a family, row-major.
fn pair_matrix<T, F>(sets: &[FiniteSet<T>], measure: &F) -> Vec<Rat>
where
    T: Ord + Sync,
    F: Fn(&FiniteSet<T>, &FiniteSet<T>) -> Rat + Sync,
{
    let s = sets.len();
    (0..s * s)
        .into_par_iter()
        .map(|idx| measure(&sets[idx / s], &sets[idx % s]))
        .collect()
}

/// Scans all ordered triples of the given family for a triangle-inequality
/// violation, in index order, and returns the first one found.
///
/// The scan is partitioned across threads, but the reported triple is the
/// global first regardless of scheduling.
pub fn find_triangle_violation<T, F>(sets: &[FiniteSet<T>], measure: F) -> Option<Counterexample<T>>
where
    T: Ord + Clone + Send + Sync,
    F: Fn(&FiniteSet<T>, &FiniteSet<T>) -> Rat + Sync,
{
    let s = sets.len();
    if s == 0 {
        return None;
    }
    let d = pair_matrix(sets, &measure);
    let total = s * s * s;
    (0..total).into_par_iter().find_map_first(|t| {
        let (i, rest) = (t / (s * s), t % (s * s));
        let (j, k) = (rest / s, rest % s);
        let lhs = &d[i * s + j];
        let rhs = &d[i * s + k] + &d[k * s + j];
        if *lhs > rhs {
            Counterexample::try_new(
                sets[i].clone(),
                sets[j].clone(),
                sets[k].clone(),
                d[i * s + j].clone(),
                d[i * s + k].clone(),
                d[k * s + j].clone(),
            )
        } else {
            None
        }
    })
}

/// Exhaustive exact triangle check over all subsets of `{0, …, n−1}`.
///
/// Returns the lexicographically first violating triple `(X, Y, Z)` under
/// ascending bitmask encoding, or `None` when the triangle inequality holds
/// on the whole power set.
pub fn check_triangle_exhaustive<F>(
    measure: F,
    n: u32,
) -> Result<Option<Counterexample<i64>>, VerifyError>
where
    F: Fn(&FiniteSet<i64>, &FiniteSet<i64>) -> Rat + Sync,
{
    if n > MAX_GROUND {
        return Err(VerifyError::GroundTooLarge(n));
    }
    Ok(find_triangle_violation(&power_set(n), measure))
}

/// The exact metric region of `D_{α,β}`: true iff `α ≤ 1/2` and
/// `β ≥ 1/(1−α)`, evaluated as `β(1−α) ≥ 1` to stay division-free.
///
/// Callers guarantee 0 ≤ α ≤ 1 and β > 0.
pub fn region_predicate(alpha: &Rat, beta: &Rat) -> bool {
    if alpha.is_negative() || *alpha > Rat::new(1, 2) {
        return false;
    }
    beta * (Rat::one() - alpha) >= Rat::one()
}

/// The three-point counterexample `X = {0}`, `Y = {1}`, `Z = {0, 1}`,
/// violating whenever `β < 1/(1−α)`:
/// `D(X,Y) = 1` while `D(X,Z) = D(Z,Y) = βᾱ/(1+βᾱ) < 1/2`.
pub fn counterexample_small(alpha: &Rat, beta: &Rat) -> Result<Counterexample<i64>, VerifyError> {
    if beta * (Rat::one() - alpha) >= Rat::one() {
        return Err(VerifyError::NotInRegime(format!(
            "beta >= 1/(1-alpha) at alpha={alpha}, beta={beta}; the unit triple does not violate"
        )));
    }
    let x: FiniteSet<i64> = [0].into();
    let y: FiniteSet<i64> = [1].into();
    let z: FiniteSet<i64> = [0, 1].into();
    let zero = Rat::zero();
    let d_xy = strm(alpha, beta, &zero, &x, &y);
    let d_xz = strm(alpha, beta, &zero, &x, &z);
    let d_zy = strm(alpha, beta, &zero, &z, &y);
    Counterexample::try_new(x, y, z, d_xy, d_xz, d_zy)
        .ok_or_else(|| VerifyError::NotInRegime("construction produced no strict violation".into()))
}

/// The growing-base counterexample for `α > 1/2`: with
/// `Z_n = {−(n−1), …, 0}`, `X_n = Z_n ∪ {2}`, `Y_n = Z_n ∪ {1}` and `n` the
/// least integer exceeding `βᾱ/(1−2ᾱ)`, the triple `(X_n, Y_n, Z_n)`
/// violates the triangle inequality.
pub fn counterexample_large_n(alpha: &Rat, beta: &Rat) -> Result<Counterexample<i64>, VerifyError> {
    if *alpha <= Rat::new(1, 2) {
        return Err(VerifyError::NotInRegime(format!(
            "alpha={alpha} <= 1/2; the growing-base construction needs alpha > 1/2"
        )));
    }
    let complement = Rat::one() - alpha; // ᾱ
    let threshold = beta * &complement / (Rat::one() - Rat::from(2i64) * &complement);
    let n_big = threshold.floor_int() + BigInt::from(1);
    let n: i64 = n_big
        .clone()
        .try_into()
        .ok()
        .filter(|&n| n <= MAX_CONSTRUCTION)
        .ok_or(VerifyError::ConstructionTooLarge(n_big))?;
    let base: FiniteSet<i64> = (-(n - 1)..=0).collect();
    let mut x = base.clone();
    x.insert(2);
    let mut y = base.clone();
    y.insert(1);
    let zero = Rat::zero();
    let d_xy = strm(alpha, beta, &zero, &x, &y);
    let d_xz = strm(alpha, beta, &zero, &x, &base);
    let d_zy = strm(alpha, beta, &zero, &base, &y);
    Counterexample::try_new(x, y, base, d_xy, d_xz, d_zy)
        .ok_or_else(|| VerifyError::NotInRegime("construction produced no strict violation".into()))
}

/// Number of elements in the base set the large-n construction would use.
pub fn large_n_base_size(alpha: &Rat, beta: &Rat) -> Result<BigInt, VerifyError> {
    if *alpha <= Rat::new(1, 2) {
        return Err(VerifyError::NotInRegime(format!(
            "alpha={alpha} <= 1/2; the growing-base construction needs alpha > 1/2"
        )));
    }
    let complement = Rat::one() - alpha;
    let threshold = beta * &complement / (Rat::one() - Rat::from(2i64) * &complement);
    Ok(threshold.floor_int() + BigInt::from(1))
}

/// The optimal relaxed-triangle constant for the asymmetric Tversky
/// dissimilarity: `ρ(α, β) = (1 + √(1/(αβ))) / 2`. Unbounded at αβ = 0.
pub fn gragera_rho(alpha: &Rat, beta: &Rat) -> Result<f64, VerifyError> {
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(VerifyError::DomainError(
            "rho is unbounded unless both alpha and beta are positive".into(),
        ));
    }
    let product = (alpha * beta).to_f64();
    Ok(0.5 * (1.0 + (1.0 / product).sqrt()))
}

/// Exact value of [`gragera_rho`] when `1/(αβ)` is the square of a rational
/// (always the case for α = β); `None` when the square root is irrational.
pub fn gragera_rho_exact(alpha: &Rat, beta: &Rat) -> Result<Option<Rat>, VerifyError> {
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(VerifyError::DomainError(
            "rho is unbounded unless both alpha and beta are positive".into(),
        ));
    }
    let product = alpha * beta;
    let exact_sqrt = |n: &BigUint| -> Option<BigUint> {
        let root = n.sqrt();
        (&root * &root == *n).then_some(root)
    };
    let sqrt_num = exact_sqrt(product.numer().magnitude());
    let sqrt_den = exact_sqrt(product.denom().magnitude());
    match (sqrt_num, sqrt_den) {
        (Some(sn), Some(sd)) => {
            // √(1/(αβ)) = sd/sn
            let root = Rat::from(BigInt::from(sd)) / Rat::from(BigInt::from(sn));
            Ok(Some((Rat::one() + root) / Rat::from(2i64)))
        }
        _ => Ok(None),
    }
}

/// Empirical relaxed-triangle constant over a small power set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RhoBound {
    Finite(Rat),
    /// Some triple has `d(X,Z) + d(Z,Y) = 0` with `d(X,Y) > 0`.
    Infinite,
}

impl fmt::Display for RhoBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhoBound::Finite(r) => write!(f, "{} ({})", r, r.decimal(12)),
            RhoBound::Infinite => write!(f, "inf"),
        }
    }
}

/// Maximum of `d(X,Y) / (d(X,Z) + d(Z,Y))` over ordered subset triples of
/// `{0, …, n−1}` whose midpoint `Z` differs from both endpoints.
///
/// A midpoint equal to an endpoint makes the ratio identically 1 for every
/// non-trivial measure, so no constant below 1 could ever be optimal; the
/// relaxed-triangle constant is about proper midpoints. Remaining triples
/// with a zero denominator are skipped when the numerator is zero too, and
/// dominate everything otherwise.
pub fn estimate_rho<F>(measure: F, n: u32) -> Result<RhoBound, VerifyError>
where
    F: Fn(&FiniteSet<i64>, &FiniteSet<i64>) -> Rat + Sync,
{
    if n > MAX_GROUND {
        return Err(VerifyError::GroundTooLarge(n));
    }
    let sets = power_set(n);
    let s = sets.len();
    let d = pair_matrix(&sets, &measure);
    let mut best = Rat::zero();
    for i in 0..s {
        for j in 0..s {
            let num = &d[i * s + j];
            for k in 0..s {
                if k == i || k == j {
                    continue;
                }
                let den = &d[i * s + k] + &d[k * s + j];
                if den.is_zero() {
                    if num.is_zero() {
                        continue;
                    }
                    return Ok(RhoBound::Infinite);
                }
                let ratio = num / &den;
                if ratio > best {
                    best = ratio;
                }
            }
        }
    }
    Ok(RhoBound::Finite(best))
}

/// The denominator-shift combinator: given pair functions `a` and `b` with
/// `b > 0 wherever a > 0`, builds `(x, y) ↦ a/(b + ε·a)` (0 where `a` is 0).
/// When `a/b` is a metric and ε > 0, the result is a metric again.
pub fn epsilon_transform<T, A, B>(
    a: A,
    b: B,
    epsilon: Rat,
) -> impl Fn(&FiniteSet<T>, &FiniteSet<T>) -> Rat
where
    T: Ord,
    A: Fn(&FiniteSet<T>, &FiniteSet<T>) -> Rat,
    B: Fn(&FiniteSet<T>, &FiniteSet<T>) -> Rat,
{
    move |x, y| {
        let av = a(x, y);
        if av.is_zero() {
            return Rat::zero();
        }
        let bv = b(x, y);
        &av / &(bv + &epsilon * &av)
    }
}

/// One grid point of the metric-region map.
#[derive(Clone, Debug)]
pub struct RegionCell {
    pub alpha: Rat,
    pub beta: Rat,
    pub predicted_metric: bool,
    pub observed_violation: Option<Counterexample<i64>>,
}

/// Classifies an `alpha_steps × beta_steps` grid over `[0,1] × (0, beta_max]`.
///
/// Predicted-metric cells are verified by the exhaustive scan at ground size
/// `n`; predicted-non-metric cells get a constructive counterexample (the
/// unit triple when `β < 1/(1−α)`, the growing-base triple when `α > 1/2`).
/// Grid points are exact rationals; cells never contradict the region
/// predicate unless the implementation itself is wrong, which is precisely
/// what downstream assertions check.
pub fn region_grid(
    alpha_steps: usize,
    beta_max: &Rat,
    beta_steps: usize,
    n: u32,
) -> Result<Vec<RegionCell>, VerifyError> {
    if n > MAX_GROUND {
        return Err(VerifyError::GroundTooLarge(n));
    }
    if alpha_steps < 2 {
        return Err(VerifyError::InvalidGrid(
            "alpha_steps must be at least 2".into(),
        ));
    }
    if beta_steps < 1 {
        return Err(VerifyError::InvalidGrid(
            "beta_steps must be at least 1".into(),
        ));
    }
    if !beta_max.is_positive() {
        return Err(VerifyError::InvalidGrid("beta_max must be positive".into()));
    }
    let mut points = Vec::with_capacity(alpha_steps * beta_steps);
    for i in 0..alpha_steps {
        let alpha = Rat::from(i) / Rat::from(alpha_steps - 1);
        for j in 1..=beta_steps {
            let beta = beta_max * Rat::from(j) / Rat::from(beta_steps);
            points.push((alpha.clone(), beta));
        }
    }
    points
        .into_par_iter()
        .map(|(alpha, beta)| classify_cell(alpha, beta, n))
        .collect()
}

fn classify_cell(alpha: Rat, beta: Rat, n: u32) -> Result<RegionCell, VerifyError> {
    let predicted = region_predicate(&alpha, &beta);
    let observed_violation = if predicted {
        let zero = Rat::zero();
        check_triangle_exhaustive(|x, y| strm(&alpha, &beta, &zero, x, y), n)?
    } else if &beta * (Rat::one() - &alpha) < Rat::one() {
        Some(counterexample_small(&alpha, &beta)?)
    } else {
        Some(counterexample_large_n(&alpha, &beta)?)
    };
    Ok(RegionCell {
        alpha,
        beta,
        predicted_metric: predicted,
        observed_violation,
    })
}

/// CSV rendering of a region grid.
///
/// Counterexample sets are relabeled to a non-negative ground set row by row
/// and written as decimal bitmasks.
pub fn grid_to_csv(cells: &[RegionCell]) -> String {
    let mut out = String::new();
    out.push_str("# metric-region grid for the symmetric Tversky dissimilarity\n");
    out.push_str("# alpha, beta and margin are exact rationals (p/q or integer)\n");
    out.push_str("# predicted: 1 iff alpha <= 1/2 and beta >= 1/(1-alpha)\n");
    out.push_str(
        "# X,Y,Z: decimal bitmask of the violating triple, bit i set <=> element i in the set\n",
    );
    out.push_str("# (triples are relabeled to non-negative elements; distances only depend on\n");
    out.push_str("#  intersection/difference cardinalities, which relabeling preserves)\n");
    out.push_str("alpha,beta,predicted,violated,X,Y,Z,margin\n");
    for cell in cells {
        match &cell.observed_violation {
            Some(ce) => {
                let ce = ce.shifted_non_negative();
                out.push_str(&format!(
                    "{},{},{},1,{},{},{},{}\n",
                    cell.alpha,
                    cell.beta,
                    u8::from(cell.predicted_metric),
                    set_bitmask(&ce.x),
                    set_bitmask(&ce.y),
                    set_bitmask(&ce.z),
                    ce.margin,
                ));
            }
            None => {
                out.push_str(&format!(
                    "{},{},{},0,,,,\n",
                    cell.alpha,
                    cell.beta,
                    u8::from(cell.predicted_metric),
                ));
            }
        }
    }
    out
}

/// A floating-point triangle violation from the exploratory scan.
#[derive(Clone, Debug)]
pub struct FloatViolation {
    pub x: FiniteSet<i64>,
    pub y: FiniteSet<i64>,
    pub z: FiniteSet<i64>,
    pub d_xy: f64,
    pub d_xz: f64,
    pub d_zy: f64,
    pub margin: f64,
}

/// Outcome of an exploratory `J_p` triangle scan. `J_p` for 1 < p < ∞ is only
/// conjectured to be a metric, so this reports findings without asserting.
#[derive(Clone, Debug)]
pub struct JpExploration {
    pub p: Rat,
    pub ground: u32,
    pub triples_checked: u64,
    pub slack: f64,
    pub violation: Option<FloatViolation>,
}

impl fmt::Display for JpExploration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "J_p exploration: p={}, ground={}, {} ordered triples, slack={:e}: ",
            self.p, self.ground, self.triples_checked, self.slack
        )?;
        match &self.violation {
            Some(v) => write!(
                f,
                "VIOLATION X={} Y={} Z={} d(X,Y)={} d(X,Z)={} d(Z,Y)={} margin={}",
                v.x, v.y, v.z, v.d_xy, v.d_xz, v.d_zy, v.margin
            ),
            None => write!(f, "no violation beyond slack"),
        }
    }
}

/// Exhaustively scans `J_p` over the power set of `{0, …, n−1}` in floating
/// point. A triple counts as violating only when the margin exceeds `slack`,
/// which filters out root-evaluation rounding noise.
pub fn explore_jp_triangle(p: &Rat, n: u32, slack: f64) -> Result<JpExploration, VerifyError> {
    if n > MAX_GROUND {
        return Err(VerifyError::GroundTooLarge(n));
    }
    let sets = power_set(n);
    let s = sets.len();
    let d: Vec<f64> = (0..s * s)
        .map(|idx| jp_distance(p, &sets[idx / s], &sets[idx % s]))
        .collect();
    let mut violation = None;
    'outer: for i in 0..s {
        for j in 0..s {
            for k in 0..s {
                let margin = d[i * s + j] - d[i * s + k] - d[k * s + j];
                if margin > slack {
                    violation = Some(FloatViolation {
                        x: sets[i].clone(),
                        y: sets[j].clone(),
                        z: sets[k].clone(),
                        d_xy: d[i * s + j],
                        d_xz: d[i * s + k],
                        d_zy: d[k * s + j],
                        margin,
                    });
                    break 'outer;
                }
            }
        }
    }
    Ok(JpExploration {
        p: p.clone(),
        ground: n,
        triples_checked: (s * s * s) as u64,
        slack,
        violation,
    })
}
