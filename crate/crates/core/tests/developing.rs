use std::f64::consts::PI;

use acyclic_core::complex::{DeckGroup, Lift};
use acyclic_core::developing::{
    develop, develop_roundtrip, equivariant_placement_with, gauge_basis, lift_length_spread,
    rotation_angle, rotation_z, CoverPlacement, Representation,
};
use acyclic_core::zoo::{gen_lens, gen_s1xs2, gen_sphere3, gen_sphere4, lens_complex};
use acyclic_core::Error;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points(n: usize, d: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| DVector::from_fn(d, |_, _| rng.random_range(1.0..2.0)))
        .collect()
}

#[test]
fn sphere3_seed7_is_flat() {
    let g = gen_sphere3(7).unwrap();
    assert_eq!(g.state.placement.base.len(), 5);
    assert!(g.state.max_abs_omega().unwrap() <= 1e-11);
}

#[test]
fn lens_lifts_lie_on_rotated_circles() {
    let g = gen_lens(5, 1, 1, 3).unwrap();
    let p = &g.state.placement;
    let rot = rotation_z(2.0 * PI / 5.0);
    for v in 0..p.base.len() {
        let rho = p.base[v].rows(0, 2).norm();
        for j in 0..5 {
            let x = p.coords(Lift::new(v, j));
            let y = p.coords(Lift::new(v, j + 1));
            // oracle: explicit rotation about the z-axis
            assert!((&rot * &x - &y).norm() <= 1e-12 * x.norm().max(1.0));
            assert!((x.rows(0, 2).norm() - rho).abs() <= 1e-12 * rho);
        }
    }
    assert!(lift_length_spread(&g.state.complex, p) <= 1e-10);
}

#[test]
fn zero_length_edge_triggers_resample() {
    let c = lens_complex(2, 1).unwrap();
    let rep = Representation::SingleAxisCyclic { order: 2, index: 1 };
    let good = gen_lens(2, 1, 1, 11).unwrap().state.placement.base;
    let mut calls = 0;
    let mut sampler = |_: usize| {
        calls += 1;
        if calls == 1 {
            // two vertices on top of each other
            let mut bad = good.clone();
            bad[1] = bad[0].clone();
            bad
        } else {
            good.clone()
        }
    };
    let (p, m, attempts) = equivariant_placement_with(&c, &rep, &mut sampler).unwrap();
    assert_eq!(attempts, 2);
    assert!(m.sq_lengths.iter().all(|&l| l > 1e-6));
    assert_eq!(p.base, good);
}

#[test]
fn resampling_gives_up() {
    let c = lens_complex(5, 1).unwrap();
    let rep = Representation::SingleAxisCyclic { order: 5, index: 1 };
    let mut sampler = |_: usize| vec![DVector::from_vec(vec![1.0, 1.0, 1.0]); 2];
    assert_eq!(
        equivariant_placement_with(&c, &rep, &mut sampler).unwrap_err(),
        Error::ResampleExhausted(100)
    );
}

#[test]
fn develop_reproduces_placements() {
    let states = vec![
        gen_sphere3(7).unwrap().state,
        gen_sphere4(2).unwrap().state,
        gen_lens(2, 1, 1, 4).unwrap().state,
        gen_lens(5, 1, 1, 4).unwrap().state,
        gen_lens(7, 2, 3, 4).unwrap().state,
        gen_s1xs2(0.7, 1.3, 4).unwrap().state,
    ];
    for s in &states {
        let dev = develop_roundtrip(&s.complex, &s.placement, &s.metric).unwrap();
        assert!(dev <= 1e-8, "deviation {dev:e}");
    }
}

#[test]
fn perturbed_length_is_curved() {
    let s = gen_sphere3(7).unwrap().state;
    let mut m = s.metric.clone();
    let l = m.length(0) + 1e-3;
    m.sq_lengths[0] = l * l;
    assert!(matches!(
        develop(&s.complex, &m, 0),
        Err(Error::CurvedInput { .. })
    ));
}

#[test]
fn lens_cover_deck_is_rotation_by_two_pi_over_p() {
    let s = gen_lens(5, 1, 1, 2).unwrap().state;
    let dev = develop(&s.complex, &s.metric, 0).unwrap();
    assert!(dev.max_reentry <= 1e-8);
    let deck = dev.deck.unwrap();
    assert!((rotation_angle(&deck.rotation) - 2.0 * PI / 5.0).abs() <= 1e-8);
    // every lift of the 5-fold cover was reached
    assert_eq!(dev.coords.len(), 2 * 5);
}

#[test]
fn projective_space_cover_closes_after_two_copies() {
    let s = gen_lens(2, 1, 1, 6).unwrap().state;
    let dev = develop(&s.complex, &s.metric, 0).unwrap();
    assert!(dev.max_reentry <= 1e-8);
    assert!(dev.coords.keys().all(|l| l.copy == 0 || l.copy == 1));
    assert!((rotation_angle(&dev.deck.unwrap().rotation) - PI).abs() <= 1e-8);
}

#[test]
fn gauge_basis_sizes() {
    let six = random_points(6, 3, 1);
    let cyc = CoverPlacement::new(
        Representation::SingleAxisCyclic { order: 5, index: 1 },
        six.clone(),
    );
    assert_eq!(gauge_basis(&cyc, &cyc.rep).unwrap().len(), 6 + 5 + 5);
    let five = random_points(5, 3, 2);
    let triv = CoverPlacement::new(Representation::Trivial { dim: 3 }, five);
    assert_eq!(gauge_basis(&triv, &triv.rep).unwrap().len(), 9);
    let screw = CoverPlacement::new(
        Representation::CyclicInfinite {
            alpha: 0.7,
            shift: 1.3,
        },
        six,
    );
    let g = gauge_basis(&screw, &screw.rep).unwrap();
    assert_eq!(g.len(), 16 + 2);
    assert!(g.experimental());
}

#[test]
fn vertex_on_axis_is_gauge_degenerate() {
    let mut pts = random_points(3, 3, 5);
    pts[1][0] = 0.0;
    pts[1][1] = 0.0;
    let p = CoverPlacement::new(Representation::SingleAxisCyclic { order: 3, index: 1 }, pts);
    assert!(matches!(
        gauge_basis(&p, &p.rep),
        Err(Error::GaugeDegenerate(_))
    ));
}

#[test]
fn collinear_gauge_vertices_are_degenerate() {
    let pts = vec![
        DVector::from_vec(vec![0.0, 0.0, 0.0]),
        DVector::from_vec(vec![1.0, 1.0, 1.0]),
        DVector::from_vec(vec![2.0, 2.0, 2.0]),
        DVector::from_vec(vec![0.0, 1.0, 3.0]),
    ];
    let p = CoverPlacement::new(Representation::Trivial { dim: 3 }, pts);
    assert!(matches!(
        gauge_basis(&p, &p.rep),
        Err(Error::GaugeDegenerate(_))
    ));
}

#[test]
fn screw_representation_group() {
    let rep = Representation::CyclicInfinite {
        alpha: 0.7,
        shift: 1.3,
    };
    assert_eq!(rep.deck_group(), DeckGroup::Infinite);
    let s = gen_s1xs2(0.7, 1.3, 1).unwrap().state;
    assert!(s.max_abs_omega().unwrap() <= 1e-9);
}
