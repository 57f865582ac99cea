//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (visible with `--nocapture`). Exact criteria use rational
//! arithmetic with zero tolerance; the only floating-point tolerances are
//! the documented 0.05 band for J_64 vs J_∞ and the 1e-9 slack of the
//! exploratory J_p scan.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use setdist::measures::{
    delta, dice_similarity, jaccard, jp_distance, nid_analogue, strm, tversky,
};
use setdist::set::{set_from_bitmask, FiniteSet};
use setdist::verify::{
    check_triangle_exhaustive, counterexample_large_n, counterexample_small, estimate_rho,
    explore_jp_triangle, find_triangle_violation, gragera_rho, gragera_rho_exact, region_grid,
    region_predicate, RhoBound, FLOAT_SLACK,
};
use setdist::{
    alpha_sweep, levenshtein, lz78_dictionary, lzjd, parse_newick, read_fasta, to_newick,
    ward_linkage, DistanceMatrix, MeasureSpec, Rat,
};

fn rat(s: &str) -> Rat {
    s.parse().unwrap()
}

fn sample_fasta_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/sample_spike.fasta")
}

/// Criterion 1: on a 21×21 exact rational grid over [0,1] × (0,5], the
/// region predicate agrees with (a) an exhaustive n=4 triangle check on
/// predicted-metric cells and (b) constructive counterexamples (margin > 0,
/// re-verified from scratch) on predicted-non-metric cells. Single-threaded
/// runtime must stay under 60 s.
#[test]
fn criterion_01_main_theorem_region_grid() {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let start = Instant::now();
    let cells = pool
        .install(|| region_grid(21, &Rat::from(5i64), 21, 4))
        .unwrap();
    let elapsed = start.elapsed();

    assert_eq!(cells.len(), 441);
    let mut violated = 0;
    for cell in &cells {
        assert_eq!(
            cell.predicted_metric,
            region_predicate(&cell.alpha, &cell.beta),
            "grid stored a predicted flag inconsistent with the predicate"
        );
        match &cell.observed_violation {
            None => assert!(
                cell.predicted_metric,
                "predicted-non-metric cell ({}, {}) has no counterexample",
                cell.alpha, cell.beta
            ),
            Some(ce) => {
                violated += 1;
                assert!(
                    !cell.predicted_metric,
                    "predicted-metric cell ({}, {}) has a counterexample",
                    cell.alpha, cell.beta
                );
                assert!(ce.margin.is_positive());
                let zero = Rat::zero();
                assert!(
                    ce.reverify(|x, y| strm(&cell.alpha, &cell.beta, &zero, x, y)),
                    "counterexample at ({}, {}) failed re-verification",
                    cell.alpha,
                    cell.beta
                );
            }
        }
    }
    assert!(violated > 0);
    assert!(
        elapsed.as_secs() < 60,
        "single-threaded grid took {elapsed:?}, expected < 60 s"
    );
    println!(
        "criterion 01 (main-theorem region, 441 cells, {violated} violated, {:.2?} single-threaded): PASS",
        elapsed
    );
}

/// Criterion 2: the unit triple violates at (1/2, 2 − 1/1000) and attains
/// equality at exactly (1/2, 2). Zero tolerance, rational arithmetic.
#[test]
fn criterion_02_boundary_tightness() {
    let half = rat("1/2");
    let below = rat("1999/1000");
    let ce = counterexample_small(&half, &below).expect("just below the boundary must violate");
    assert_eq!(ce.x, [0].into());
    assert_eq!(ce.y, [1].into());
    assert_eq!(ce.z, [0, 1].into());
    assert!(ce.margin.is_positive());
    let zero = Rat::zero();
    assert!(ce.reverify(|x, y| strm(&half, &below, &zero, x, y)));

    // Exactly on the boundary: equality, not violation.
    let two = rat("2");
    let x: FiniteSet<i64> = [0].into();
    let y: FiniteSet<i64> = [1].into();
    let z: FiniteSet<i64> = [0, 1].into();
    let d_xy = strm(&half, &two, &zero, &x, &y);
    let d_xz = strm(&half, &two, &zero, &x, &z);
    let d_zy = strm(&half, &two, &zero, &z, &y);
    assert_eq!(d_xy, &d_xz + &d_zy, "boundary point must attain equality");
    assert!(counterexample_small(&half, &two).is_err());
    assert!(
        check_triangle_exhaustive(|a, b| strm(&half, &two, &zero, a, b), 4)
            .unwrap()
            .is_none()
    );
    println!("criterion 02 (boundary tightness at beta = 2 - 1/1000 vs 2): PASS");
}

/// Criterion 3: at (α, β) = (0.6, 3) the growing-base construction needs
/// exactly n = 7, its margin re-verifies positive, and the same construction
/// with n = 6 attains equality instead of violating.
#[test]
fn criterion_03_growing_base_scaling() {
    let (alpha, beta) = (rat("0.6"), rat("3"));
    let ce = counterexample_large_n(&alpha, &beta).unwrap();
    assert_eq!(ce.z.len(), 7, "base set must have exactly 7 elements");
    assert!(ce.margin.is_positive());
    let zero = Rat::zero();
    assert!(ce.reverify(|x, y| strm(&alpha, &beta, &zero, x, y)));

    // Independent check at n − 1 = 6: build the same triple by hand.
    let base: FiniteSet<i64> = (-5..=0).collect();
    let mut x = base.clone();
    x.insert(2);
    let mut y = base.clone();
    y.insert(1);
    let d_xy = strm(&alpha, &beta, &zero, &x, &y);
    let d_xz = strm(&alpha, &beta, &zero, &x, &base);
    let d_zy = strm(&alpha, &beta, &zero, &base, &y);
    let margin = &d_xy - &d_xz - &d_zy;
    assert!(!margin.is_positive(), "n = 6 must not violate");
    assert!(margin.is_zero(), "n = 6 sits exactly on the boundary");
    println!("criterion 03 (growing-base construction: n = 7 violates, n = 6 does not): PASS");
}

/// Criterion 4: extreme-point identities, exact over all 1024 pairs of
/// subsets of a 5-element universe.
#[test]
fn criterion_04_extreme_point_identities() {
    let zero = Rat::zero();
    let one = Rat::one();
    let half = rat("1/2");
    let gammas = [rat("1/2"), rat("1"), rat("2")];
    for xm in 0u64..32 {
        for ym in 0u64..32 {
            let x = set_from_bitmask(xm);
            let y = set_from_bitmask(ym);
            assert_eq!(jaccard(&x, &y), strm(&half, &rat("2"), &zero, &x, &y));
            assert_eq!(nid_analogue(&x, &y), strm(&rat("0"), &one, &zero, &x, &y));
            assert_eq!(
                &one - &dice_similarity(&x, &y),
                strm(&half, &one, &zero, &x, &y)
            );
            for gamma in &gammas {
                assert_eq!(
                    tversky(gamma, gamma, &x, &y),
                    strm(&half, &(Rat::from(2i64) * gamma), &zero, &x, &y)
                );
            }
        }
    }
    println!("criterion 04 (extreme-point identities on 1024 subset pairs): PASS");
}

/// Criterion 5: the symmetric-weight Tversky dissimilarity is a metric for
/// γ ∈ {1, 3/2, 2} (exhaustive n=4) and violates for γ ∈ {1/2, 3/4, 99/100}.
#[test]
fn criterion_05_tversky_metric_iff_gamma_at_least_one() {
    for gamma in [rat("1"), rat("3/2"), rat("2")] {
        let ce = check_triangle_exhaustive(|x, y| tversky(&gamma, &gamma, x, y), 4).unwrap();
        assert!(ce.is_none(), "tversky({gamma},{gamma}) violated at n=4");
    }
    for gamma in [rat("1/2"), rat("3/4"), rat("99/100")] {
        let ce = check_triangle_exhaustive(|x, y| tversky(&gamma, &gamma, x, y), 2)
            .unwrap()
            .unwrap_or_else(|| panic!("tversky({gamma},{gamma}) must violate"));
        assert!(ce.margin.is_positive());
        assert!(ce.reverify(|x, y| tversky(&gamma, &gamma, x, y)));
    }
    println!("criterion 05 (tversky(gamma,gamma) metric iff gamma >= 1): PASS");
}

/// Criterion 6: ρ(1,1) = 1 exactly, and the empirical relaxed-triangle
/// constant at n=4 never exceeds the closed form, compared as rationals.
///
/// KNOWN RED at α = 2: the closed form ½(1+√(1/(αβ))) is proved for weights
/// in (0, 1], where it is ≥ 1. Beyond that regime it drops below 1 and stops
/// being an upper bound — at α = β = 2 the proper-midpoint triple
/// X={0,2}, Y={0,1}, Z={0,1,2} already yields d(X,Y)/(d(X,Z)+d(Z,Y)) = 4/5,
/// exceeding the formula's 3/4 (the measure IS a metric there, so the true
/// optimal constant is 1). The assertion is kept as specified rather than
/// weakened; the failure below is the mathematical fact, not a bug.
#[test]
fn criterion_06_relaxed_triangle_constant() {
    assert_eq!(
        gragera_rho_exact(&rat("1"), &rat("1")).unwrap(),
        Some(Rat::one())
    );
    assert_eq!(gragera_rho(&rat("1"), &rat("1")).unwrap(), 1.0);
    let mut exceeded: Vec<String> = Vec::new();
    for alpha in [rat("1/4"), rat("1/2"), rat("1"), rat("2")] {
        let bound = gragera_rho_exact(&alpha, &alpha)
            .unwrap()
            .expect("alpha = beta always has an exact rho");
        let estimate = estimate_rho(|x, y| tversky(&alpha, &alpha, x, y), 4).unwrap();
        match estimate {
            RhoBound::Finite(r) => {
                println!(
                    "  alpha={alpha}: empirical rho {r} vs closed form {bound} ({})",
                    if r <= bound {
                        "within bound"
                    } else {
                        "EXCEEDS"
                    }
                );
                if r > bound {
                    exceeded.push(format!(
                        "alpha={alpha}: empirical {r} > closed form {bound}"
                    ));
                }
            }
            RhoBound::Infinite => panic!("empirical rho must stay finite at alpha={alpha}"),
        }
    }
    assert!(
        exceeded.is_empty(),
        "closed-form relaxed-triangle bound exceeded (expected for weights > 1, \
         where the formula falls below 1 and cannot bound any nonzero measure): {}",
        exceeded.join("; ")
    );
    println!("criterion 06 (empirical rho <= (1 + 1/alpha)/2, rational comparison): PASS");
}

/// Criterion 7: the weighted difference δ_α passes the exhaustive n=4 check
/// for α ∈ {0, 1/4, 1/2} and the unit triple violates for α ∈ {0.51, 3/4, 1}.
#[test]
fn criterion_07_weighted_difference_region() {
    for alpha in [rat("0"), rat("1/4"), rat("1/2")] {
        let ce = check_triangle_exhaustive(|x, y| delta(&alpha, x, y), 4).unwrap();
        assert!(ce.is_none(), "delta({alpha}) violated at n=4");
    }
    for alpha in [rat("0.51"), rat("3/4"), rat("1")] {
        let x: FiniteSet<i64> = [0].into();
        let y: FiniteSet<i64> = [1].into();
        let z: FiniteSet<i64> = [0, 1].into();
        let margin = delta(&alpha, &x, &y) - delta(&alpha, &x, &z) - delta(&alpha, &z, &y);
        // 1 − 2(1−α) = 2α − 1 > 0.
        assert_eq!(margin, Rat::from(2i64) * &alpha - Rat::one());
        assert!(margin.is_positive(), "delta({alpha}) must violate");
    }
    println!("criterion 07 (delta triangle region: alpha <= 1/2): PASS");
}

/// Criterion 8: metricity is upward closed in β along α = 1/3 — the
/// boundary 3/2 and everything above it passes at n=4.
#[test]
fn criterion_08_upward_closure_along_beta() {
    let third = rat("1/3");
    let zero = Rat::zero();
    for beta in [rat("3/2"), rat("2"), rat("5"), rat("10")] {
        let ce = check_triangle_exhaustive(|x, y| strm(&third, &beta, &zero, x, y), 4).unwrap();
        assert!(ce.is_none(), "strm(1/3, {beta}) violated at n=4");
    }
    println!("criterion 08 (upward closure in beta at alpha = 1/3): PASS");
}

/// Criterion 9: J_1 coincides with the Jaccard distance bit for bit;
/// J_64 approximates J_∞ within 0.05 on all 1024 subset pairs; the
/// exploratory scans for p ∈ {2, 3, 4} complete and report.
#[test]
fn criterion_09_jp_family() {
    let one = Rat::one();
    let p64 = rat("64");
    let mut worst: f64 = 0.0;
    for xm in 0u64..32 {
        for ym in 0u64..32 {
            let x = set_from_bitmask(xm);
            let y = set_from_bitmask(ym);
            assert_eq!(jp_distance(&one, &x, &y), jaccard(&x, &y).to_f64());
            let gap = (jp_distance(&p64, &x, &y) - nid_analogue(&x, &y).to_f64()).abs();
            worst = worst.max(gap);
        }
    }
    assert!(
        worst <= 0.05,
        "max |J_64 - J_inf| = {worst}, expected <= 0.05"
    );
    for p in [rat("2"), rat("3"), rat("4")] {
        let report = explore_jp_triangle(&p, 4, FLOAT_SLACK).unwrap();
        assert_eq!(report.triples_checked, 4096);
        println!("  {report}");
        if let Some(v) = &report.violation {
            println!("  NOTE: exploratory violation found: {v:?}");
        }
    }
    println!("criterion 09 (J_p: exact J_1, J_64 within 0.05 of J_inf (worst {worst:.4}), exploration reported): PASS");
}

/// Criterion 10: LZ78 dictionary and LZJD reference values, the exhaustive
/// triangle check over all binary strings of length ≤ 6 (deduplicated by
/// dictionary), and the pseudometric witness.
#[test]
fn criterion_10_lzjd() {
    let start = Instant::now();
    let dict = lz78_dictionary(b"abab");
    let expected: FiniteSet<Vec<u8>> = [b"a".to_vec(), b"b".to_vec(), b"ab".to_vec()].into();
    assert_eq!(dict.phrases(), &expected);
    let dict = lz78_dictionary(b"aaaa");
    let expected: FiniteSet<Vec<u8>> = [b"a".to_vec(), b"aa".to_vec()].into();
    assert_eq!(dict.phrases(), &expected);
    assert_eq!(lzjd(b"abab", b"aaaa"), rat("3/4"));

    // Every binary string of length <= 6; distances only depend on the
    // dictionary, so deduplication loses nothing.
    let mut strings: Vec<Vec<u8>> = vec![Vec::new()];
    for len in 1..=6u32 {
        for code in 0u32..(1 << len) {
            strings.push(
                (0..len)
                    .map(|i| if code >> i & 1 == 1 { b'b' } else { b'a' })
                    .collect(),
            );
        }
    }
    assert_eq!(strings.len(), 127);
    let unique: std::collections::BTreeSet<FiniteSet<Vec<u8>>> = strings
        .iter()
        .map(|s| lz78_dictionary(s).phrases().clone())
        .collect();
    let dicts: Vec<FiniteSet<Vec<u8>>> = unique.into_iter().collect();
    let violation = find_triangle_violation(&dicts, jaccard);
    assert!(violation.is_none(), "LZJD triangle inequality violated");

    assert_eq!(lzjd(b"a", b"aa"), Rat::zero());
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 300,
        "took {elapsed:?}, expected < 5 min"
    );
    println!(
        "criterion 10 (LZJD: examples, triangle over {} dictionaries from 127 strings in {:.2?}, pseudometric witness): PASS",
        dicts.len(),
        elapsed
    );
}

/// Criterion 11: the bundled corpus drives the whole pipeline — a valid
/// Newick tree that round-trips with identical canonical form, and a sweep
/// segmentation covering [0, 1/2] without gaps or overlaps.
#[test]
fn criterion_11_phylogeny_pipeline() {
    let records = read_fasta(sample_fasta_path()).unwrap();
    assert!(
        records.len() >= 8,
        "bundled corpus must have >= 8 sequences"
    );

    let measure = MeasureSpec::ZGram {
        alpha: rat("3/10"),
        k: 2,
        normalize: false,
    };
    let matrix = DistanceMatrix::from_sequences(&records, &measure).unwrap();
    let tree = ward_linkage(&matrix).unwrap();
    assert!(tree.is_height_monotone());
    let newick = to_newick(&tree);
    assert!(newick.ends_with(';'));
    let parsed = parse_newick(&newick).unwrap();
    assert_eq!(parsed.canonical_form(), tree.canonical_form());

    let step = rat("1/100");
    let alphas: Vec<Rat> = (0..=50).map(|i| Rat::new(i, 100)).collect();
    let intervals = alpha_sweep(&records, 2, &alphas, false).unwrap();
    assert!(!intervals.is_empty());
    assert_eq!(intervals.first().unwrap().lo, rat("0"));
    assert_eq!(intervals.last().unwrap().hi, rat("1/2"));
    for w in intervals.windows(2) {
        assert_eq!(
            w[1].lo,
            &w[0].hi + &step,
            "segmentation has a gap or overlap between [{}, {}] and [{}, {}]",
            w[0].lo,
            w[0].hi,
            w[1].lo,
            w[1].hi
        );
        assert_ne!(
            w[0].canonical, w[1].canonical,
            "adjacent intervals must differ"
        );
    }
    for iv in &intervals {
        assert!(iv.lo <= iv.hi);
    }
    println!(
        "criterion 11 (pipeline on {} sequences; newick round-trip; sweep gave {} interval(s)): PASS",
        records.len(),
        intervals.len()
    );
}

/// Criterion 12: the Levenshtein implementation agrees exactly with an
/// independent full-matrix dynamic program on 1000 random pairs.
#[test]
fn criterion_12_levenshtein_oracle() {
    // Reference: quadratic DP with the whole (n+1)×(m+1) table.
    fn reference(a: &[u8], b: &[u8]) -> usize {
        let (n, m) = (a.len(), b.len());
        let mut t = vec![vec![0usize; m + 1]; n + 1];
        for (i, row) in t.iter_mut().enumerate() {
            row[0] = i;
        }
        for (j, cell) in t[0].iter_mut().enumerate() {
            *cell = j;
        }
        for i in 1..=n {
            for j in 1..=m {
                let cost = usize::from(a[i - 1] != b[j - 1]);
                t[i][j] = (t[i - 1][j] + 1)
                    .min(t[i][j - 1] + 1)
                    .min(t[i - 1][j - 1] + cost);
            }
        }
        t[n][m]
    }

    let mut rng = StdRng::seed_from_u64(0x5e7d157);
    let alphabet = b"ACDEFGHIKLMNPQRSTVWY";
    for _ in 0..1000 {
        let la = rng.random_range(0..=20);
        let lb = rng.random_range(0..=20);
        let a: Vec<u8> = (0..la)
            .map(|_| alphabet[rng.random_range(0..alphabet.len())])
            .collect();
        let b: Vec<u8> = (0..lb)
            .map(|_| alphabet[rng.random_range(0..alphabet.len())])
            .collect();
        assert_eq!(levenshtein(&a, &b), reference(&a, &b));
    }
    println!("criterion 12 (levenshtein vs independent DP on 1000 random pairs): PASS");
}
