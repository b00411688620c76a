//! Built-in example complexes, gluing data, flows, and Morse data. These are
//! embedded so that the example gallery and the verification suites need no
//! external files.

use std::collections::BTreeMap;

use num::{BigInt, BigRational};

use crate::complex::{Cell, CellComplex};
use crate::flow::CombinatorialFlow;
use crate::gluing::{CutData, CylinderPair, GluingData};

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn id_map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

fn ids(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn cylinders(pairs: &[(&str, &str)]) -> Vec<CylinderPair> {
    pairs
        .iter()
        .map(|(b, c)| CylinderPair {
            base: b.to_string(),
            cell: c.to_string(),
        })
        .collect()
}

/// One vertex, one loop edge.
pub fn circle() -> CellComplex {
    CellComplex::new(
        "circle",
        vec![
            Cell::new("v", 0, &[]),
            Cell::new("e", 1, &[("v", 1), ("v", -1)]),
        ],
    )
    .expect("builtin circle")
}

/// One vertex, two loops, one 2-cell attached along the commutator word.
pub fn torus() -> CellComplex {
    CellComplex::new(
        "torus",
        vec![
            Cell::new("v", 0, &[]),
            Cell::new("ea", 1, &[("v", 1), ("v", -1)]),
            Cell::new("eb", 1, &[("v", 1), ("v", -1)]),
            Cell::new("f", 2, &[("ea", 1), ("eb", 1), ("ea", -1), ("eb", -1)]),
        ],
    )
    .expect("builtin torus")
}

/// One vertex and one 2-cell with trivial attaching map.
pub fn sphere() -> CellComplex {
    CellComplex::new(
        "sphere",
        vec![Cell::new("v", 0, &[]), Cell::new("f", 2, &[])],
    )
    .expect("builtin sphere")
}

/// v, e, f with ∂f = 2e.
pub fn projective_plane() -> CellComplex {
    CellComplex::new(
        "projective-plane",
        vec![
            Cell::new("v", 0, &[]),
            Cell::new("e", 1, &[("v", 1), ("v", -1)]),
            Cell::new("f", 2, &[("e", 1), ("e", 1)]),
        ],
    )
    .expect("builtin projective plane")
}

pub fn interval() -> CellComplex {
    CellComplex::new(
        "interval",
        vec![
            Cell::new("v0", 0, &[]),
            Cell::new("v1", 0, &[]),
            Cell::new("e", 1, &[("v1", 1), ("v0", -1)]),
        ],
    )
    .expect("builtin interval")
}

pub fn point() -> CellComplex {
    CellComplex::new("point", vec![Cell::new("v", 0, &[])]).expect("builtin point")
}

pub fn two_points() -> CellComplex {
    CellComplex::new(
        "two-points",
        vec![Cell::new("p", 0, &[]), Cell::new("q", 0, &[])],
    )
    .expect("builtin two points")
}

pub(crate) fn square_cells() -> Vec<Cell> {
    vec![
        Cell::new("v00", 0, &[]),
        Cell::new("v10", 0, &[]),
        Cell::new("v01", 0, &[]),
        Cell::new("v11", 0, &[]),
        Cell::new("eb", 1, &[("v10", 1), ("v00", -1)]),
        Cell::new("et", 1, &[("v11", 1), ("v01", -1)]),
        Cell::new("el", 1, &[("v01", 1), ("v00", -1)]),
        Cell::new("er", 1, &[("v11", 1), ("v10", -1)]),
        Cell::new("f", 2, &[("eb", 1), ("er", 1), ("et", -1), ("el", -1)]),
    ]
}

/// A filled square: 4 vertices, 4 edges, 1 face.
pub fn square() -> CellComplex {
    CellComplex::new("square", square_cells()).expect("builtin square")
}

/// The circle cut at one point: the fundamental domain is an interval
/// [v0, v1] with a collar vertex va and the cylinder edge e1 joining va to
/// the far end v1 = l(v0).
pub fn circle_gluing() -> GluingData {
    let domain = CellComplex::new(
        "circle-domain",
        vec![
            Cell::new("v0", 0, &[]),
            Cell::new("va", 0, &[]),
            Cell::new("v1", 0, &[]),
            Cell::new("e0", 1, &[("va", 1), ("v0", -1)]),
            Cell::new("e1", 1, &[("v1", 1), ("va", -1)]),
        ],
    )
    .expect("builtin circle gluing domain");
    GluingData {
        domain,
        cuts: vec![CutData {
            n_minus: ids(&["v0"]),
            n_plus: ids(&["v1"]),
            l: id_map(&[("v0", "v1")]),
            r: ids(&["va"]),
            i_plus: id_map(&[("va", "va")]),
            i_minus: id_map(&[("va", "v0")]),
            cylinders: cylinders(&[("va", "e1")]),
        }],
    }
}

/// The torus cut along two circles meeting at one point: the fundamental
/// domain is a square subdivided by the two collar lines (x = a and y = a),
/// nine vertices, twelve edges, four faces. Cut 1 runs left-to-right, cut 2
/// bottom-to-top; the NE corner face is a cylinder over a cylinder.
pub fn torus_gluing() -> GluingData {
    let domain = CellComplex::new(
        "torus-domain",
        vec![
            Cell::new("v00", 0, &[]),
            Cell::new("va0", 0, &[]),
            Cell::new("v10", 0, &[]),
            Cell::new("v0a", 0, &[]),
            Cell::new("vaa", 0, &[]),
            Cell::new("v1a", 0, &[]),
            Cell::new("v01", 0, &[]),
            Cell::new("va1", 0, &[]),
            Cell::new("v11", 0, &[]),
            // horizontal edges, bottom / middle / top rows
            Cell::new("hb0", 1, &[("va0", 1), ("v00", -1)]),
            Cell::new("hb1", 1, &[("v10", 1), ("va0", -1)]),
            Cell::new("hm0", 1, &[("vaa", 1), ("v0a", -1)]),
            Cell::new("hm1", 1, &[("v1a", 1), ("vaa", -1)]),
            Cell::new("ht0", 1, &[("va1", 1), ("v01", -1)]),
            Cell::new("ht1", 1, &[("v11", 1), ("va1", -1)]),
            // vertical edges, left / middle / right columns
            Cell::new("vl0", 1, &[("v0a", 1), ("v00", -1)]),
            Cell::new("vl1", 1, &[("v01", 1), ("v0a", -1)]),
            Cell::new("vm0", 1, &[("vaa", 1), ("va0", -1)]),
            Cell::new("vm1", 1, &[("va1", 1), ("vaa", -1)]),
            Cell::new("vr0", 1, &[("v1a", 1), ("v10", -1)]),
            Cell::new("vr1", 1, &[("v11", 1), ("v1a", -1)]),
            // faces, as attaching words; fse and fne are oriented as
            // cylinders over vm0 and vm1, fnw as a cylinder over hm0
            Cell::new(
                "fsw",
                2,
                &[("hb0", 1), ("vm0", 1), ("hm0", -1), ("vl0", -1)],
            ),
            Cell::new(
                "fse",
                2,
                &[("vm0", 1), ("hm1", 1), ("vr0", -1), ("hb1", -1)],
            ),
            Cell::new(
                "fnw",
                2,
                &[("hm0", 1), ("vm1", 1), ("ht0", -1), ("vl1", -1)],
            ),
            Cell::new(
                "fne",
                2,
                &[("vm1", 1), ("ht1", 1), ("vr1", -1), ("hm1", -1)],
            ),
        ],
    )
    .expect("builtin torus gluing domain");
    GluingData {
        domain,
        cuts: vec![
            CutData {
                n_minus: ids(&["v00", "v0a", "v01", "vl0", "vl1"]),
                n_plus: ids(&["v10", "v1a", "v11", "vr0", "vr1"]),
                l: id_map(&[
                    ("v00", "v10"),
                    ("v0a", "v1a"),
                    ("v01", "v11"),
                    ("vl0", "vr0"),
                    ("vl1", "vr1"),
                ]),
                r: ids(&["va0", "vaa", "va1", "vm0", "vm1"]),
                i_plus: id_map(&[
                    ("va0", "va0"),
                    ("vaa", "vaa"),
                    ("va1", "va1"),
                    ("vm0", "vm0"),
                    ("vm1", "vm1"),
                ]),
                i_minus: id_map(&[
                    ("va0", "v00"),
                    ("vaa", "v0a"),
                    ("va1", "v01"),
                    ("vm0", "vl0"),
                    ("vm1", "vl1"),
                ]),
                cylinders: cylinders(&[
                    ("va0", "hb1"),
                    ("vaa", "hm1"),
                    ("va1", "ht1"),
                    ("vm0", "fse"),
                    ("vm1", "fne"),
                ]),
            },
            CutData {
                n_minus: ids(&["v00", "va0", "v10", "hb0", "hb1"]),
                n_plus: ids(&["v01", "va1", "v11", "ht0", "ht1"]),
                l: id_map(&[
                    ("v00", "v01"),
                    ("va0", "va1"),
                    ("v10", "v11"),
                    ("hb0", "ht0"),
                    ("hb1", "ht1"),
                ]),
                r: ids(&["v0a", "vaa", "v1a", "hm0", "hm1"]),
                i_plus: id_map(&[
                    ("v0a", "v0a"),
                    ("vaa", "vaa"),
                    ("v1a", "v1a"),
                    ("hm0", "hm0"),
                    ("hm1", "hm1"),
                ]),
                i_minus: id_map(&[
                    ("v0a", "v00"),
                    ("vaa", "va0"),
                    ("v1a", "v10"),
                    ("hm0", "hb0"),
                    ("hm1", "hb1"),
                ]),
                cylinders: cylinders(&[
                    ("v0a", "vl1"),
                    ("vaa", "vm1"),
                    ("v1a", "vr1"),
                    ("hm0", "fnw"),
                ]),
            },
        ],
    }
}

/// Gradient flow on the circle with two rest points: two orbit segments
/// from N to S whose cocycle integrals differ (rational proxies of 3π and
/// π). Carries a nontrivial class yet is gradient-like.
pub fn ex31_flow() -> CombinatorialFlow {
    CombinatorialFlow::new(
        &[("N", true), ("S", true)],
        &[("N", "S", vec![rat(3)]), ("N", "S", vec![rat(1)])],
        &[vec!["N"], vec!["S"]],
    )
    .expect("builtin example 3.1 flow")
}

/// Three rest points on a circle joined into a directed cycle, each step
/// gaining 2/3 (rational proxy of 2π/3). Carries a nontrivial class and is
/// not gradient-like.
pub fn ex32_flow() -> CombinatorialFlow {
    CombinatorialFlow::new(
        &[("A", true), ("B", true), ("C", true)],
        &[
            ("A", "B", vec![ratio(2, 3)]),
            ("B", "C", vec![ratio(2, 3)]),
            ("C", "A", vec![ratio(2, 3)]),
        ],
        &[vec!["A"], vec!["B"], vec!["C"]],
    )
    .expect("builtin example 3.2 flow")
}

/// Fixed-point-free suspension flow of a cellular automorphism: one node
/// per vertex of the base, one edge v -> f(v) gaining 1 (a full turn around
/// the fiber direction). The Morse family is empty.
pub fn suspension_flow(base: &CellComplex, f: &BTreeMap<String, String>) -> CombinatorialFlow {
    let nodes: Vec<(String, bool)> = base
        .cells_of_dim(0)
        .iter()
        .map(|c| (c.id.clone(), false))
        .collect();
    let node_refs: Vec<(&str, bool)> = nodes.iter().map(|(id, f)| (id.as_str(), *f)).collect();
    let edges: Vec<(String, String)> = base
        .cells_of_dim(0)
        .iter()
        .map(|c| {
            (
                c.id.clone(),
                f.get(&c.id).cloned().unwrap_or_else(|| c.id.clone()),
            )
        })
        .collect();
    let edge_refs: Vec<(&str, &str, Vec<BigRational>)> = edges
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str(), vec![rat(1)]))
        .collect();
    CombinatorialFlow::new(&node_refs, &edge_refs, &[]).expect("suspension flow")
}
