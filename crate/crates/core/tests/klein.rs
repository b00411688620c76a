//! The Klein bottle through two independent routes: as gluing data (an
//! annulus whose cross-section identification swaps the two arcs) and as
//! the mapping torus of the circle reflection. Both must produce the same
//! homology, the same twisted ranks, and vanishing Novikov numbers for the
//! class dual to the cut.

use std::collections::BTreeMap;

use num::{BigInt, BigRational};

use novmorse::complex::{Cell, CellComplex};
use novmorse::fixtures;
use novmorse::gluing::{
    build_deformation_complex, cone_isomorphism_check, reconstruct_and_crosscheck,
    reconstruct_glued_complex, verify_gluing_identities, zero_evaluation_complex, CutData,
    CylinderPair, GluingData,
};
use novmorse::homology::{homology, Coefficients};
use novmorse::morse::{mapping_torus, vanishing_check};
use novmorse::twisted::{
    build_twisted_complex, evaluated_homology, integer_point, novikov_numbers,
};

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn ids(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

/// Annulus fundamental domain for the Klein bottle: cross-section circles
/// have two vertices (p, q) and two arcs both oriented p -> q, so that the
/// arc-swapping identification l(am) = bp, l(bm) = ap is cellular. The
/// collar is the retracted copy of N^+, so i_minus = l^{-1} after the
/// retraction and crosses the arcs while the cylinder bands run straight.
fn klein_gluing() -> GluingData {
    let domain = CellComplex::new(
        "klein-domain",
        vec![
            // N^- circle, collar circle, N^+ circle
            Cell::new("pm", 0, &[]),
            Cell::new("qm", 0, &[]),
            Cell::new("pr", 0, &[]),
            Cell::new("qr", 0, &[]),
            Cell::new("pp", 0, &[]),
            Cell::new("qp", 0, &[]),
            Cell::new("am", 1, &[("qm", 1), ("pm", -1)]),
            Cell::new("bm", 1, &[("qm", 1), ("pm", -1)]),
            Cell::new("ar", 1, &[("qr", 1), ("pr", -1)]),
            Cell::new("br", 1, &[("qr", 1), ("pr", -1)]),
            Cell::new("ap", 1, &[("qp", 1), ("pp", -1)]),
            Cell::new("bp", 1, &[("qp", 1), ("pp", -1)]),
            // longitudinal edges and the cylinder edges over the collar
            Cell::new("lp", 1, &[("pr", 1), ("pm", -1)]),
            Cell::new("lq", 1, &[("qr", 1), ("qm", -1)]),
            Cell::new("cp", 1, &[("pp", 1), ("pr", -1)]),
            Cell::new("cq", 1, &[("qp", 1), ("qr", -1)]),
            // left block faces and cylinder faces over the collar arcs
            Cell::new("fa", 2, &[("am", 1), ("lq", 1), ("ar", -1), ("lp", -1)]),
            Cell::new("fb", 2, &[("bm", 1), ("lq", 1), ("br", -1), ("lp", -1)]),
            Cell::new("ca", 2, &[("ar", 1), ("cq", 1), ("ap", -1), ("cp", -1)]),
            Cell::new("cb", 2, &[("br", 1), ("cq", 1), ("bp", -1), ("cp", -1)]),
        ],
    )
    .expect("klein domain");
    GluingData {
        domain,
        cuts: vec![CutData {
            n_minus: ids(&["pm", "qm", "am", "bm"]),
            n_plus: ids(&["pp", "qp", "ap", "bp"]),
            // the reflection swaps the arcs
            l: map(&[("pm", "pp"), ("qm", "qp"), ("am", "bp"), ("bm", "ap")]),
            r: ids(&["pr", "qr", "ar", "br"]),
            i_plus: map(&[("pr", "pr"), ("qr", "qr"), ("ar", "ar"), ("br", "br")]),
            i_minus: map(&[("pr", "pm"), ("qr", "qm"), ("ar", "bm"), ("br", "am")]),
            cylinders: vec![
                CylinderPair {
                    base: "pr".into(),
                    cell: "cp".into(),
                },
                CylinderPair {
                    base: "qr".into(),
                    cell: "cq".into(),
                },
                CylinderPair {
                    base: "ar".into(),
                    cell: "ca".into(),
                },
                CylinderPair {
                    base: "br".into(),
                    cell: "cb".into(),
                },
            ],
        }],
    }
}

/// Circle with two vertices and both arcs oriented the same way, so the
/// reflection (arc swap) is a cellular automorphism.
fn reflected_circle() -> (CellComplex, BTreeMap<String, String>) {
    let circle = CellComplex::new(
        "circle-two-arcs",
        vec![
            Cell::new("p", 0, &[]),
            Cell::new("q", 0, &[]),
            Cell::new("a", 1, &[("q", 1), ("p", -1)]),
            Cell::new("b", 1, &[("q", 1), ("p", -1)]),
        ],
    )
    .expect("two-arc circle");
    let flip = map(&[("p", "p"), ("q", "q"), ("a", "b"), ("b", "a")]);
    (circle, flip)
}

#[test]
fn klein_gluing_passes_the_full_verification() {
    let g = klein_gluing();
    g.validate().unwrap();
    let identities = verify_gluing_identities(&g, 1).unwrap();
    assert!(identities.passed, "{:?}", identities.violations);
    let cone = cone_isomorphism_check(&g, 1).unwrap();
    assert!(cone.composites_are_identity && cone.chain_maps_commute && cone.ranks_agree);
    // the deformation complex computes the annulus
    let d1 = build_deformation_complex(&g, 1).unwrap();
    assert_eq!(d1.homology_ranks(Coefficients::Q).unwrap(), vec![1, 1, 0]);
    for p in [2u64, 3, 5] {
        let (_, report) = zero_evaluation_complex(&g, Coefficients::Zp(p), None).unwrap();
        assert!(report.agree, "p={p}");
    }
}

#[test]
fn klein_two_route_ranks_including_the_jump_point() {
    let g = klein_gluing();
    // generic point: everything dies
    let report = reconstruct_and_crosscheck(&g, &integer_point(&[2])).unwrap();
    assert_eq!(report.direct_ranks, vec![0, 0, 0]);
    // a = 1 recovers the Betti numbers of the Klein bottle
    let report = reconstruct_and_crosscheck(&g, &integer_point(&[1])).unwrap();
    assert_eq!(report.direct_ranks, vec![1, 1, 0]);
    // a = -1 sits on the jump locus of the reflection; both routes must
    // still agree and dominate the generic ranks
    let report = reconstruct_and_crosscheck(&g, &integer_point(&[-1])).unwrap();
    assert_eq!(report.direct_ranks, vec![0, 1, 1]);
}

#[test]
fn glued_complex_is_the_klein_bottle() {
    let (glued, alpha) = reconstruct_glued_complex(&klein_gluing()).unwrap();
    assert_eq!(glued.euler_characteristic(), 0);
    let over_z = homology(&glued, Coefficients::Z).unwrap();
    assert_eq!(over_z.ranks, vec![1, 1, 0]);
    assert_eq!(over_z.torsion[1], vec!["2".to_string()]);
    // the cut-dual class has vanishing Novikov numbers
    let n = novikov_numbers(&glued, &alpha, None, 23, 3).unwrap();
    assert_eq!(n.b, vec![0, 0, 0]);
}

#[test]
fn mapping_torus_of_the_reflection_matches_the_gluing_route() {
    let (circle, flip) = reflected_circle();
    let (torus, alpha) = mapping_torus(&circle, &flip).unwrap();
    // same space through an unrelated construction: the Klein bottle again
    let over_z = homology(&torus, Coefficients::Z).unwrap();
    assert_eq!(over_z.ranks, vec![1, 1, 0]);
    assert_eq!(over_z.torsion[1], vec!["2".to_string()]);

    let twisted = build_twisted_complex(&torus, &alpha, None).unwrap();
    for a in [2i64, 3, 7] {
        assert_eq!(
            evaluated_homology(&twisted, &[rat(a)]).unwrap().ranks,
            vec![0, 0, 0]
        );
    }
    assert_eq!(
        evaluated_homology(&twisted, &[rat(1)]).unwrap().ranks,
        vec![1, 1, 0]
    );
    assert_eq!(
        evaluated_homology(&twisted, &[rat(-1)]).unwrap().ranks,
        vec![0, 1, 1]
    );

    // the reflection has no fixed cells of odd order issues: the suspension
    // flow still carries the class and the numbers vanish
    let flow = fixtures::suspension_flow(&circle, &flip);
    let report = vanishing_check(&flow, &torus, &alpha, 23, 3).unwrap();
    assert!(report.all_zero);
}
