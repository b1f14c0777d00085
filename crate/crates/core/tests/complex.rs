use acyclic_core::complex::{CellId, DeckGroup, Lift, SimplicialPreComplex, Top};
use acyclic_core::homology::{first_homology, h1_order};
use acyclic_core::zoo::{
    gen_lens, gen_s1xs2, gen_sphere3, gen_sphere4, lens_complex, s1xs2_complex,
};
use acyclic_core::Error;

fn boundary(d: usize) -> Vec<(i8, Vec<usize>)> {
    (0..d + 2)
        .map(|i| {
            (
                if i % 2 == 0 { 1 } else { -1 },
                (0..d + 2).filter(|&v| v != i).collect(),
            )
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn boundary_of_4_simplex_counts() {
    let c = SimplicialPreComplex::build(3, &boundary(3)).unwrap();
    let expect: Vec<usize> = (1..=4).map(|k| binomial(5, k)).collect();
    assert_eq!(c.f_vector(), expect);
    assert_eq!(c.f_vector(), vec![5, 10, 10, 5]);
    assert_eq!(c.euler_characteristic(), 0);
}

#[test]
fn boundary_of_5_simplex_counts() {
    let c = SimplicialPreComplex::build(4, &boundary(4)).unwrap();
    assert_eq!(c.f_vector(), vec![6, 15, 20, 15, 6]);
    assert_eq!(c.euler_characteristic(), 2);
}

#[test]
fn pillow_is_accepted() {
    // two tetrahedra glued along all four faces
    let c =
        SimplicialPreComplex::build(3, &[(1, vec![0, 1, 2, 3]), (-1, vec![0, 1, 2, 3])]).unwrap();
    assert_eq!(c.num_tops(), 2);
    assert_eq!(c.num_cells(2), 4);
    for f in 0..4 {
        let inc = c.incidences(CellId::new(2, f));
        assert_eq!(inc.len(), 2);
        assert_ne!(inc[0].top, inc[1].top);
    }
    for e in 0..c.num_edges() {
        assert_eq!(c.hinge_cycle(CellId::new(1, e)).unwrap().len(), 2);
    }
}

#[test]
fn hinge_cycles_in_spheres() {
    let s3 = SimplicialPreComplex::build(3, &boundary(3)).unwrap();
    let e = s3.find_cell(&[Lift::base(0), Lift::base(1)]).unwrap();
    let cyc = s3.hinge_cycle(e).unwrap();
    assert_eq!(cyc.len(), 3);
    // consecutive entries share a triangle containing the edge
    for w in 0..cyc.len() {
        let a = cyc[w].top;
        let b = cyc[(w + 1) % cyc.len()].top;
        let shared: Vec<usize> = (0..5)
            .filter(|v| {
                s3.tops()[a].lifts.contains(&Lift::base(*v))
                    && s3.tops()[b].lifts.contains(&Lift::base(*v))
            })
            .collect();
        assert_eq!(shared.len(), 3);
        assert!(shared.contains(&0) && shared.contains(&1));
    }

    let s4 = SimplicialPreComplex::build(4, &boundary(4)).unwrap();
    let abc = s4
        .find_cell(&[Lift::base(0), Lift::base(1), Lift::base(2)])
        .unwrap();
    assert_eq!(s4.hinge_cycle(abc).unwrap().len(), 3);
    // every edge lies in exactly four 4-simplices
    for e in 0..s4.num_edges() {
        let verts = s4.cell_vertices(CellId::new(1, e));
        let count = s4
            .tops()
            .iter()
            .filter(|t| verts.iter().all(|v| t.lifts.contains(&Lift::base(*v))))
            .count();
        assert_eq!(count, 4);
    }
}

#[test]
fn hinge_cycle_length_matches_slot_count() {
    for c in [
        lens_complex(5, 1).unwrap(),
        lens_complex(7, 2).unwrap(),
        s1xs2_complex().unwrap(),
    ] {
        for h in 0..c.num_hinges() {
            let id = CellId::new(c.dim() - 2, h);
            assert_eq!(c.hinge_cycle(id).unwrap().len(), c.incidences(id).len());
        }
    }
}

#[test]
fn non_manifold_rejected() {
    let mut tops = boundary(3);
    tops.pop();
    assert!(matches!(
        SimplicialPreComplex::build(3, &tops),
        Err(Error::NonManifold { .. })
    ));
}

#[test]
fn orientation_clash_rejected() {
    let mut tops = boundary(3);
    tops[0].0 = -tops[0].0;
    assert!(matches!(
        SimplicialPreComplex::build(3, &tops),
        Err(Error::OrientationClash { .. })
    ));
}

#[test]
fn bad_arity_rejected() {
    let mut tops = boundary(3);
    tops[2].1.push(4);
    assert!(matches!(
        SimplicialPreComplex::build(3, &tops),
        Err(Error::BadArity { index: 2, .. })
    ));
    assert!(matches!(
        SimplicialPreComplex::build(3, &[]),
        Err(Error::Empty)
    ));
}

#[test]
fn fixed_cell_rejected() {
    // an edge from a lift to its own image under an order-2 action is fixed
    let tops = vec![Top::new(
        vec![
            Lift::new(0, 0),
            Lift::new(0, 1),
            Lift::new(1, 0),
            Lift::new(2, 0),
        ],
        1,
    )];
    let names = ["a", "b", "c"].map(String::from).to_vec();
    let r = SimplicialPreComplex::build_with_group(3, DeckGroup::Cyclic(2), names, tops);
    assert!(matches!(r, Err(Error::NonFreeAction(_))));
}

#[test]
fn generated_odd_dimensional_complexes_have_zero_euler_characteristic() {
    assert_eq!(
        gen_sphere3(1).unwrap().state.complex.euler_characteristic(),
        0
    );
    assert_eq!(
        gen_sphere4(1).unwrap().state.complex.euler_characteristic(),
        2
    );
    for (p, q) in [(2, 1), (3, 1), (5, 1), (5, 2), (7, 1), (7, 2), (7, 3)] {
        let c = &gen_lens(p, q, 1, 0).unwrap().state.complex;
        assert_eq!(c.euler_characteristic(), 0, "L({p},{q})");
    }
    assert_eq!(
        gen_s1xs2(0.7, 1.3, 0)
            .unwrap()
            .state
            .complex
            .euler_characteristic(),
        0
    );
}

#[test]
fn lens_first_homology_has_order_p() {
    for (p, q) in [
        (2, 1),
        (3, 1),
        (3, 2),
        (5, 1),
        (5, 2),
        (7, 1),
        (7, 2),
        (7, 3),
        (8, 3),
        (11, 3),
    ] {
        let c = lens_complex(p, q).unwrap();
        assert_eq!(h1_order(&c), Some(p as i64), "L({p},{q})");
    }
}

#[test]
fn s1xs2_first_homology_is_free() {
    let (free, torsion) = first_homology(&s1xs2_complex().unwrap());
    assert_eq!(free, 1);
    assert!(torsion.is_empty());
}

#[test]
fn sphere_homology_vanishes() {
    let c = SimplicialPreComplex::build(3, &boundary(3)).unwrap();
    assert_eq!(h1_order(&c), Some(1));
}
