use std::f64::consts::PI;

use poncelet_core::configurations::*;
use poncelet_core::constructions::{
    chain_iterate_joinmeet, complete_heptagon, construct_heptagon_p6,
};
use poncelet_core::projective::{conic_through_5, ProjLine, ProjPoint};
use poncelet_core::rp1::{RP1Point, StereoChart};
use poncelet_core::sample::{
    closing_polygons_rp1, map_near_identity, real_conic, separated_values,
};
use poncelet_core::GeometryError;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn on_circle(t: f64, r: f64) -> ProjPoint {
    ProjPoint::real(r * t.cos(), r * t.sin(), 1.0).unwrap()
}

fn regular(n: usize) -> PointRing {
    PointRing::new(
        (0..n)
            .map(|i| on_circle(2.0 * PI * i as f64 / n as f64, 1.0))
            .collect(),
    )
}

/// Chord of the unit circle between angles s and t.
fn chord(s: f64, t: f64) -> ProjLine {
    let m = (s + t) / 2.0;
    ProjLine::real(m.cos(), m.sin(), -((s - t) / 2.0).cos()).unwrap()
}

/// A Poncelet heptagon from the heptagon construction on a random conic.
fn heptagon(seed: u64) -> [ProjPoint; 7] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let conic = real_conic(&mut rng);
    let chart = StereoChart::for_conic(&conic).unwrap();
    let xs = separated_values(&mut rng, 5, 2.5, 0.3);
    let p: [ProjPoint; 5] = std::array::from_fn(|i| chart.lift(&RP1Point::affine(xs[i])));
    let (p6, _) = construct_heptagon_p6(&p, 0).unwrap();
    let six = [p[0], p[1], p[2], p[3], p[4], p6];
    let p7 = complete_heptagon(&six).unwrap();
    [p[0], p[1], p[2], p[3], p[4], p6, p7]
}

#[test]
fn star_chords_of_regular_heptagon() {
    let star = ring_join(&regular(7), 2).unwrap();
    for (i, l) in star.lines.iter().enumerate() {
        let t = 2.0 * PI / 7.0;
        assert!(l.distance(&chord(t * i as f64, t * (i + 2) as f64)) < 1e-12);
    }
}

#[test]
fn meet_of_adjacent_star_chords_is_inner_heptagon() {
    let inner = ring_meet(&ring_join(&regular(7), 2).unwrap(), 1).unwrap();
    let t = 2.0 * PI / 7.0;
    let r = (2.0 * PI / 7.0).cos() / (PI / 7.0).cos();
    for (i, q) in inner.points.iter().enumerate() {
        assert!(
            q.distance(&on_circle(t * i as f64 + t / 2.0, r)) < 1e-12,
            "{i}"
        );
    }
}

#[test]
fn zero_steps_are_rejected() {
    let p = regular(7);
    assert!(matches!(
        ring_join(&p, 7),
        Err(GeometryError::CoincidentElements(_))
    ));
    assert!(matches!(
        ring_join(&p, 0),
        Err(GeometryError::CoincidentElements(_))
    ));
    let l = ring_join(&p, 2).unwrap();
    assert!(matches!(
        ring_meet(&l, 14),
        Err(GeometryError::CoincidentElements(_))
    ));
}

#[test]
fn ring_operators_commute_with_rotation() {
    let p = PointRing::new(heptagon(3).to_vec());
    let mut rotated = p.points.clone();
    rotated.rotate_left(1);
    let rotated = PointRing::new(rotated);
    for a in 1..7 {
        let l = ring_join(&p, a).unwrap();
        let lr = ring_join(&rotated, a).unwrap();
        for i in 0..7 {
            assert!(lr.at(i).distance(l.at(i + 1)) < 1e-12);
        }
        for b in 1..7 {
            let q = ring_meet(&l, b).unwrap();
            let qr = ring_meet(&lr, b).unwrap();
            for i in 0..7 {
                assert!(qr.at(i).distance(q.at(i + 1)) < 1e-10);
            }
        }
    }
}

proptest! {
    #[test]
    fn meet_undoes_join(seed in any::<u64>(), n in 5usize..10, a in 1isize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs = separated_values(&mut rng, 2 * n, 3.0, 0.2);
        let p = PointRing::new((0..n).map(|i| ProjPoint::affine(xs[2 * i], xs[2 * i + 1])).collect());
        prop_assume!(ring_join(&p, a).is_ok());
        let l = ring_join(&p, a).unwrap();
        if let Ok(q) = ring_meet(&l, a) {
            for (i, x) in q.points.iter().enumerate() {
                prop_assert!(x.incidence(&l.lines[i]) < 1e-9);
            }
        }
    }
}

#[test]
fn grunbaum_rigby_from_constructed_heptagons() {
    let pattern = grunbaum_rigby_pattern();
    for seed in 0..20 {
        let p = PointRing::new(heptagon(seed).to_vec());
        let gr = grunbaum_rigby(&p, DEFAULT_INCIDENCE_TOL).unwrap();
        assert!(
            gr.fixed_point_residual < 1e-8,
            "{seed}: {}",
            gr.fixed_point_residual
        );
        let report = verify_n4(&gr.configuration);
        assert!(report.pass, "{seed}: {:?}", report.violations);
        assert_eq!((report.points, report.lines), (21, 21));
        assert_eq!(report.point_degree_histogram.get(&4), Some(&21));
        assert_eq!(gr.configuration.incidence, pattern);
    }
}

#[test]
fn grunbaum_rigby_from_regular_heptagon() {
    let gr = grunbaum_rigby(&regular(7), DEFAULT_INCIDENCE_TOL).unwrap();
    assert!(gr.fixed_point_residual < 1e-12);
    assert!(verify_n4(&gr.configuration).pass);
}

#[test]
fn grunbaum_rigby_fails_on_generic_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let xs = separated_values(&mut rng, 14, 3.0, 0.2);
    let p = PointRing::new(
        (0..7)
            .map(|i| ProjPoint::affine(xs[2 * i], xs[2 * i + 1]))
            .collect(),
    );
    let gr = grunbaum_rigby(&p, DEFAULT_INCIDENCE_TOL).unwrap();
    assert!(gr.fixed_point_residual > 1e-3);
    assert!(!verify_n4(&gr.configuration).pass);
}

#[test]
fn grunbaum_rigby_needs_seven_points() {
    assert!(matches!(
        grunbaum_rigby(&regular(8), 1e-7),
        Err(GeometryError::DegenerateInput(_))
    ));
}

#[test]
fn pattern_is_a_21_4_and_isomorphism_detects_changes() {
    let pattern = grunbaum_rigby_pattern();
    assert!(pattern
        .iter()
        .all(|r| r.iter().filter(|&&x| x).count() == 4));
    assert!((0..21).all(|j| pattern.iter().filter(|r| r[j]).count() == 4));

    // relabel points and lines by fixed permutations
    let perm = |k: usize| (5 * k + 3) % 21;
    let mut shuffled = vec![vec![false; 21]; 21];
    for i in 0..21 {
        for j in 0..21 {
            shuffled[perm(i)][(j * 8 + 1) % 21] = pattern[i][j];
        }
    }
    assert!(incidence_isomorphic(&pattern, &shuffled));

    let j1 = (0..21).find(|&j| pattern[0][j]).unwrap();
    let mut broken = pattern.clone();
    broken[0][j1] = false;
    assert!(!incidence_isomorphic(&pattern, &broken));
}

#[test]
fn deleting_a_point_leaves_four_deficient_lines() {
    let gr = grunbaum_rigby(&PointRing::new(heptagon(5).to_vec()), DEFAULT_INCIDENCE_TOL).unwrap();
    let cut = gr.configuration.without_point(3);
    let report = verify_n4(&cut);
    assert!(!report.pass);
    let deficient = report
        .violations
        .iter()
        .filter(|v| matches!(v, N4Violation::LineDegree { degree: 3, .. }))
        .count();
    assert_eq!(deficient, 4);
    assert!(report.violations.contains(&N4Violation::CountMismatch {
        points: 20,
        lines: 21
    }));
}

#[test]
fn empty_configuration_does_not_pass() {
    let report = verify_n4(&IncidenceConfiguration::new(vec![], vec![], 1e-7));
    assert!(!report.pass);
    assert!(report.violations.is_empty());
}

#[test]
fn verdict_is_projectively_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let gr = grunbaum_rigby(&PointRing::new(heptagon(6).to_vec()), DEFAULT_INCIDENCE_TOL).unwrap();
    let generic = grunbaum_rigby(&regular(7), DEFAULT_INCIDENCE_TOL)
        .unwrap()
        .configuration
        .without_point(0);
    for _ in 0..20 {
        let s = map_near_identity(&mut rng, 0.4);
        assert!(verify_n4(&gr.configuration.transformed(&s)).pass);
        assert!(!verify_n4(&generic.transformed(&s)).pass);
    }
}

#[test]
fn chain_trace_of_heptagon_is_a_colored_21_4() {
    for seed in 0..10 {
        let h = heptagon(100 + seed);
        let first6: [ProjPoint; 6] = std::array::from_fn(|i| h[i]);
        let conic = conic_through_5(&[h[0], h[1], h[2], h[3], h[4]]).unwrap();
        let run = chain_iterate_joinmeet(&first6, Some(&conic), 7).unwrap();
        let cfg = config_from_chain_trace(&run.trace, 7, DEFAULT_INCIDENCE_TOL).unwrap();
        let report = verify_n4(&cfg);
        assert!(report.pass, "{:?}", report.violations);
        assert_eq!(report.points, 21);
        assert!(incidence_isomorphic(
            &cfg.incidence,
            &grunbaum_rigby_pattern()
        ));
        let colors = color_report(&cfg).unwrap();
        assert!(colors.passed(1e-7), "{colors:?}");
    }
}

#[test]
fn chain_traces_of_longer_polygons_are_colored_3n_4() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let chart = StereoChart::standard();
    for n in [8, 9, 10] {
        let poly = loop {
            if let Some(p) = closing_polygons_rp1(&mut rng, n)
                .unwrap()
                .into_iter()
                .next()
            {
                break p;
            }
        };
        let x: [RP1Point; 6] = std::array::from_fn(|i| poly[i]);
        let run = chain_iterate_joinmeet(&chart.lift_all(&x), Some(chart.conic()), n).unwrap();
        let cfg = config_from_chain_trace(&run.trace, n, DEFAULT_INCIDENCE_TOL).unwrap();
        let report = verify_n4(&cfg);
        assert!(report.pass, "{n}: {:?}", report.violations);
        assert_eq!(report.points, 3 * n);
        assert!(color_report(&cfg).unwrap().passed(1e-7));
    }
}

#[test]
fn open_chain_is_not_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let conic = real_conic(&mut rng);
    let chart = StereoChart::for_conic(&conic).unwrap();
    let xs = separated_values(&mut rng, 6, 2.5, 0.3);
    let p: [ProjPoint; 6] = std::array::from_fn(|i| chart.lift(&RP1Point::affine(xs[i])));
    let run = chain_iterate_joinmeet(&p, Some(&conic), 7).unwrap();
    assert!(matches!(
        config_from_chain_trace(&run.trace, 7, DEFAULT_INCIDENCE_TOL),
        Err(GeometryError::NotClosed { .. })
    ));
    assert!(matches!(
        config_from_chain_trace(&run.trace, 9, DEFAULT_INCIDENCE_TOL),
        Err(GeometryError::DegenerateInput(_))
    ));
}
