mod common;

use proptest::prelude::*;
use trig_approx::classes::{
    almost_monotone_constant, bounded_variation_constant, classify, mean_transform, Direction,
    FiniteSequence, Semantics, SequenceClass, Side,
};
use trig_approx::fourier::analyze;
use trig_approx::modulus::modulus_curve;
use trig_approx::periodic::{lp_norm, Grid, SampledPeriodicFunction};
use trig_approx::rates::{
    clause_check, error_curve, geometric_ns, loglog_fit, weighted_row_ratio, Clause,
    ClauseCheckConfig,
};
use trig_approx::summability::{
    kernel_smooth, make_family, matrix_mean, row_diagnostics, FamilyKind, SummabilityMatrixFamily,
    SummabilityRow,
};
use trig_approx::zoo::{zoo_function, ZooSpec};

fn family(s: &str) -> SummabilityMatrixFamily {
    make_family(FamilyKind::parse(s).unwrap()).unwrap()
}

fn sampled(spec: &str, n: usize) -> SampledPeriodicFunction {
    zoo_function(&spec.parse::<ZooSpec>().unwrap(), Grid::new(n).unwrap()).unwrap()
}

/// Nonnegative entries with a good share of exact zeros and ties.
fn sequence() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![
            1 => Just(0.0),
            1 => (1u32..8).prop_map(|k| f64::from(k) / 4.0),
            3 => 1e-3..10.0f64,
        ],
        1..48,
    )
}

fn semantics() -> impl Strategy<Value = Semantics> {
    prop_oneof![Just(Semantics::Free), Just(Semantics::Row)]
}

proptest! {
    #[test]
    fn constants_match_brute_force(v in sequence(), s in semantics()) {
        let c = FiniteSequence::new(v, s).unwrap();
        for seq in [c.clone(), mean_transform(&c)] {
            for d in [Direction::Decreasing, Direction::Increasing] {
                prop_assert_eq!(
                    almost_monotone_constant(&seq, d).k,
                    common::almost_monotone_brute(&seq, d)
                );
            }
            for side in [Side::Rest, Side::Head] {
                prop_assert_eq!(
                    bounded_variation_constant(&seq, side).k,
                    common::bounded_variation_brute(&seq, side)
                );
            }
        }
    }

    #[test]
    fn means_match_direct_sums(v in sequence()) {
        let c = FiniteSequence::free(v.clone()).unwrap();
        prop_assert_eq!(mean_transform(&c).values().to_vec(), common::running_means_brute(&v));
    }

    #[test]
    fn power_of_two_scaling_preserves_constants(v in sequence(), s in semantics(), e in -8i32..8) {
        let lambda = 2f64.powi(e);
        let c = FiniteSequence::new(v.clone(), s).unwrap();
        let scaled = FiniteSequence::new(v.iter().map(|x| x * lambda).collect(), s).unwrap();
        let (a, b) = (classify(&c), classify(&scaled));
        for class in SequenceClass::ALL {
            prop_assert_eq!(a.member(class), b.member(class), "{}", class);
            prop_assert_eq!(a.constant(class), b.constant(class), "{}", class);
        }
    }

    #[test]
    fn scaling_preserves_membership(v in sequence(), lambda in 0.01..100.0f64) {
        let c = FiniteSequence::free(v.clone()).unwrap();
        let scaled = FiniteSequence::free(v.iter().map(|x| x * lambda).collect()).unwrap();
        let (a, b) = (classify(&c), classify(&scaled));
        for class in SequenceClass::ALL {
            let (ka, kb) = (a.constant(class), b.constant(class));
            prop_assert_eq!(ka.is_finite(), kb.is_finite(), "{}", class);
            if ka.is_finite() && !matches!(class, SequenceClass::Nis | SequenceClass::Nds
                | SequenceClass::Nims | SequenceClass::Ndms) {
                prop_assert!((ka - kb).abs() <= 1e-12 * ka.max(1.0), "{} {} {}", class, ka, kb);
            }
        }
    }

    #[test]
    fn class_hierarchy(v in sequence(), s in semantics()) {
        use SequenceClass::*;
        let r = classify(&FiniteSequence::new(v, s).unwrap());
        for (small, big) in [(Nis, Amds), (Nds, Amis), (Nis, Nims), (Nds, Ndms), (Amds, Amdms), (Amis, Amims), (Rbvs, Amds)] {
            prop_assert!(!r.member(small) || r.member(big), "{} member but not {}", small, big);
        }
        for class in [Amds, Amis, Amdms, Amims] {
            prop_assert!(r.constant(class) >= 1.0);
        }
    }

    #[test]
    fn mean_constant_is_bounded_by_square(v in prop::collection::vec(1e-3..10.0f64, 1..48)) {
        use SequenceClass::*;
        let r = classify(&FiniteSequence::free(v).unwrap());
        for (base, mean) in [(Amds, Amdms), (Amis, Amims)] {
            let k = r.constant(base);
            prop_assert!(r.constant(mean) <= k.max(1.0).powi(2) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn matrix_mean_is_linear(seed_row in prop::collection::vec(0.0..1.0f64, 2..40), t in -3.0..3.0f64) {
        let n = seed_row.len() - 1;
        let row = SummabilityRow::new(n, seed_row).unwrap();
        let grid = Grid::new(256).unwrap();
        let f = sampled("square", 256);
        let g = sampled("weierstrass(0.5,5)", 256);
        let combo = SampledPeriodicFunction::new(
            grid,
            f.values().iter().zip(g.values()).map(|(a, b)| a + t * b).collect(),
            "combo",
        ).unwrap();
        let tf = matrix_mean(&analyze(&f, n).unwrap(), &row, grid).unwrap();
        let tg = matrix_mean(&analyze(&g, n).unwrap(), &row, grid).unwrap();
        let tc = matrix_mean(&analyze(&combo, n).unwrap(), &row, grid).unwrap();
        for j in 0..256 {
            let expected = tf.values()[j] + t * tg.values()[j];
            prop_assert!((tc.values()[j] - expected).abs() < 1e-11);
        }
    }
}

#[test]
fn finite_support_head_clause_breaks_increasing_chain() {
    // trailing zeros: head-bounded through the finite-support rule, not AMIS
    let r = classify(&FiniteSequence::free(vec![1.0, 0.0]).unwrap());
    assert!(r.member(SequenceClass::Hbvs));
    assert!(!r.member(SequenceClass::Amis));
}

#[test]
fn kernel_smoothing_matches_matrix_mean() {
    let n_grid = 128;
    let grid = Grid::new(n_grid).unwrap();
    let f = sampled("trig_poly(0.3; 1,0.5,-0.25; -1,0,2)", n_grid);
    for fam in ["cesaro", "norlund(k+1)", "identity"] {
        for n in [1, 4, 20] {
            let row = family(fam).row(n).unwrap();
            let smooth = kernel_smooth(&f, &row).unwrap();
            let mean = matrix_mean(&analyze(&f, n.max(3)).unwrap(), &row, grid).unwrap();
            for j in 0..n_grid {
                assert!(
                    (smooth.values()[j] - mean.values()[j]).abs() < 1e-10,
                    "{fam} n = {n} j = {j}"
                );
            }
        }
    }
}

#[test]
fn modulus_invariants_on_zoo() {
    let n = 1024;
    let deltas: Vec<f64> = (0..8)
        .map(|i| std::f64::consts::PI / 128.0 * f64::from(1u32 << i))
        .filter(|d| *d <= std::f64::consts::PI)
        .collect();
    for spec in [
        "sine(2)",
        "triangle",
        "square",
        "weierstrass(0.5,7)",
        "constant(1)",
    ] {
        let f = sampled(spec, n);
        for p in [1.0, 1.5, 2.0, 4.0] {
            // every aligned shift is examined, so the sup is exact on the grid
            let curve = modulus_curve(&f, p, &deltas, n / 2).unwrap();
            let bound = 2.0 * lp_norm(&f, p).unwrap().value + 1e-12;
            for w in curve.omegas.windows(2) {
                assert!(w[0] <= w[1], "{spec} p = {p}");
                // deltas double, so this is ω(2δ) ≤ 2ω(δ)
                assert!(w[1] <= 2.0 * w[0] + 1e-10, "{spec} p = {p}");
            }
            assert!(curve.omegas.iter().all(|&w| w <= bound));
        }
    }
}

#[test]
fn ratio_stays_bounded_when_mean_clause_holds() {
    for fam in ["cesaro", "norlund(k+1)", "norlund(2^k)"] {
        let family = family(fam);
        let report = clause_check(&family, 2.0, 0.5, &ClauseCheckConfig::new(1, 256)).unwrap();
        assert!(report.holds(Clause::I) || report.holds(Clause::II));
        let ratios: Vec<f64> = (1..=1024)
            .map(|n| weighted_row_ratio(&family.row(n).unwrap(), 0.5).unwrap())
            .collect();
        let early = ratios[..32].iter().cloned().fold(0.0, f64::max);
        let all = ratios.iter().cloned().fold(0.0, f64::max);
        assert!(all <= 2.0 * early, "{fam}: {all} vs {early}");
    }
}

#[test]
fn slopes_respect_verified_hypotheses() {
    let ns = geometric_ns(16, 512, 2);
    let cases = [
        ("cesaro", "weierstrass(0.5,8)", 2.0, 0.5, Clause::I),
        (
            "perturbed(cesaro,0.5)",
            "weierstrass(0.5,8)",
            2.0,
            0.5,
            Clause::II,
        ),
        ("norlund(k+1)", "square", 1.0, 1.0, Clause::VI),
        ("cesaro", "weierstrass(0.5,8)", 1.0, 0.5, Clause::V),
    ];
    for (fam, function, p, alpha, clause) in cases {
        let family = family(fam);
        let report = clause_check(&family, p, alpha, &ClauseCheckConfig::new(1, 512)).unwrap();
        assert!(
            report.holds(clause) && report.get(clause).applicable,
            "{fam} {clause}"
        );
        let curve = error_curve(&family, &sampled(function, 4096), p, &ns).unwrap();
        let slope = loglog_fit(&curve, 16).unwrap().slope;
        assert!(slope <= -alpha + 0.2, "{fam} {function}: slope {slope}");
    }
}

#[test]
fn diagnostics_track_closed_forms() {
    // norlund(k+1): (n+1) a_nn = 2(n+1)/(n+2)
    let fam = family("norlund(k+1)");
    for n in [1, 10, 500] {
        let d = row_diagnostics(&fam.row(n).unwrap());
        let expected = 2.0 * (n + 1) as f64 / (n + 2) as f64;
        assert!((d.tail_weight - expected).abs() < 1e-12);
    }
}
