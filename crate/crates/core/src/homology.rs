//! Cellular homology over Z, Q, and Z/p via Smith normal form.

use std::collections::BTreeSet;

use num::BigInt;
use serde::Serialize;

use crate::complex::CellComplex;
use crate::error::{Error, Result};
use crate::matrix::{is_prime, smith_normal_form, IntMatrix};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Coefficients {
    Z,
    Q,
    Zp(u64),
}

impl std::fmt::Display for Coefficients {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coefficients::Z => write!(f, "Z"),
            Coefficients::Q => write!(f, "Q"),
            Coefficients::Zp(p) => write!(f, "Z/{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    pub coefficients: Coefficients,
    /// Free rank per degree 0..=dim (field dimension for Q and Z/p).
    pub ranks: Vec<usize>,
    /// Torsion divisors per degree; only populated over Z.
    pub torsion: Vec<Vec<String>>,
}

impl HomologyResult {
    pub fn euler(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(q, &r)| if q % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }
}

/// Homology of a validated complex. Over Z the result carries torsion
/// divisors as well; `Zp` requires a prime modulus.
pub fn homology(complex: &CellComplex, coefficients: Coefficients) -> Result<HomologyResult> {
    if let Coefficients::Zp(p) = coefficients {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
    }
    let Some(dim) = complex.dim() else {
        return Ok(HomologyResult {
            coefficients,
            ranks: vec![],
            torsion: vec![],
        });
    };
    let matrices: Vec<IntMatrix> = (0..=dim + 1).map(|q| complex.boundary_matrix(q)).collect();
    Ok(homology_of_matrices(
        &matrices,
        complex_counts(complex, dim),
        coefficients,
    ))
}

fn complex_counts(complex: &CellComplex, dim: usize) -> Vec<usize> {
    (0..=dim).map(|q| complex.cell_count(q)).collect()
}

/// Shared rank bookkeeping: `matrices[q]` is ∂_q (the q = 0 entry is the
/// empty map), `counts[q]` the number of q-cells.
pub(crate) fn homology_of_matrices(
    matrices: &[IntMatrix],
    counts: Vec<usize>,
    coefficients: Coefficients,
) -> HomologyResult {
    let dim = counts.len().saturating_sub(1);
    let degrees: Vec<usize> = (0..=dim + 1).collect();
    match coefficients {
        Coefficients::Zp(p) => {
            let ranks_d: Vec<usize> =
                par::map_collect(&degrees, |&q| matrices.get(q).map_or(0, |m| m.rank_mod(p)));
            let ranks = (0..=dim)
                .map(|q| counts[q] - ranks_d[q] - ranks_d.get(q + 1).copied().unwrap_or(0))
                .collect();
            HomologyResult {
                coefficients,
                ranks,
                torsion: vec![Vec::new(); dim + 1],
            }
        }
        Coefficients::Q | Coefficients::Z => {
            let snfs: Vec<_> =
                par::map_collect(&degrees, |&q| matrices.get(q).map(smith_normal_form));
            let rank_of = |q: usize| snfs.get(q).and_then(|s| s.as_ref()).map_or(0, |s| s.rank);
            let ranks: Vec<usize> = (0..=dim)
                .map(|q| counts[q] - rank_of(q) - rank_of(q + 1))
                .collect();
            let torsion: Vec<Vec<String>> = (0..=dim)
                .map(|q| {
                    if coefficients == Coefficients::Q {
                        return Vec::new();
                    }
                    snfs.get(q + 1)
                        .and_then(|s| s.as_ref())
                        .map_or(Vec::new(), |s| {
                            s.divisors
                                .iter()
                                .filter(|d| **d > BigInt::from(1))
                                .map(|d| d.to_string())
                                .collect()
                        })
                })
                .collect();
            HomologyResult {
                coefficients,
                ranks,
                torsion,
            }
        }
    }
}

/// Homology of the pair `(complex, sub)`: the quotient chain complex of a
/// boundary-closed subcomplex.
pub fn relative_homology(
    complex: &CellComplex,
    sub: &BTreeSet<String>,
    coefficients: Coefficients,
) -> Result<HomologyResult> {
    let quotient = complex.quotient(sub)?;
    homology(&quotient, coefficients)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Cell;
    use crate::fixtures;

    fn ranks(c: &CellComplex, k: Coefficients) -> Vec<usize> {
        homology(c, k).unwrap().ranks
    }

    #[test]
    fn circle_over_z() {
        let h = homology(&fixtures::circle(), Coefficients::Z).unwrap();
        assert_eq!(h.ranks, vec![1, 1]);
        assert!(h.torsion.iter().all(|t| t.is_empty()));
    }

    #[test]
    fn projective_plane() {
        let rp2 = fixtures::projective_plane();
        let h = homology(&rp2, Coefficients::Z).unwrap();
        assert_eq!(h.ranks, vec![1, 0, 0]);
        assert_eq!(h.torsion, vec![vec![], vec!["2".to_string()], vec![]]);
        assert_eq!(ranks(&rp2, Coefficients::Zp(2)), vec![1, 1, 1]);
        assert_eq!(ranks(&rp2, Coefficients::Zp(3)), vec![1, 0, 0]);
    }

    #[test]
    fn torus_over_q() {
        assert_eq!(ranks(&fixtures::torus(), Coefficients::Q), vec![1, 2, 1]);
    }

    #[test]
    fn sphere_over_z() {
        assert_eq!(ranks(&fixtures::sphere(), Coefficients::Z), vec![1, 0, 1]);
    }

    #[test]
    fn non_prime_modulus_rejected() {
        assert!(matches!(
            homology(&fixtures::circle(), Coefficients::Zp(4)),
            Err(Error::NotPrime(4))
        ));
    }

    #[test]
    fn relative_interval_rel_endpoint() {
        let interval = fixtures::interval();
        let sub = ["v0"].iter().map(|s| s.to_string()).collect();
        let h = relative_homology(&interval, &sub, Coefficients::Q).unwrap();
        assert_eq!(h.ranks, vec![0, 0]);
    }

    #[test]
    fn relative_square_rel_opposite_edges() {
        let square = fixtures::square();
        let sub: BTreeSet<String> = ["eb", "et", "v00", "v10", "v01", "v11"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let h = relative_homology(&square, &sub, Coefficients::Q).unwrap();
        assert_eq!(h.ranks, vec![0, 1, 0]);
    }

    #[test]
    fn relative_to_empty_is_absolute() {
        let torus = fixtures::torus();
        let h = relative_homology(&torus, &BTreeSet::new(), Coefficients::Q).unwrap();
        assert_eq!(h.ranks, ranks(&torus, Coefficients::Q));
    }

    #[test]
    fn empty_complex_all_degrees_vacuous() {
        let empty = CellComplex::new("empty", vec![]).unwrap();
        let h = homology(&empty, Coefficients::Z).unwrap();
        assert!(h.ranks.is_empty());
        assert_eq!(h.euler(), 0);
    }

    #[test]
    fn euler_from_cells_equals_alternating_betti() {
        for c in [
            fixtures::circle(),
            fixtures::torus(),
            fixtures::sphere(),
            fixtures::projective_plane(),
            fixtures::interval(),
            fixtures::square(),
        ] {
            let h = homology(&c, Coefficients::Q).unwrap();
            assert_eq!(c.euler_characteristic(), h.euler(), "complex {}", c.name);
        }
    }

    #[test]
    fn two_cell_circle() {
        // two vertices, two edges forming a circle
        let c = CellComplex::new(
            "circle2",
            vec![
                Cell::new("p", 0, &[]),
                Cell::new("q", 0, &[]),
                Cell::new("e1", 1, &[("q", 1), ("p", -1)]),
                Cell::new("e2", 1, &[("p", 1), ("q", -1)]),
            ],
        )
        .unwrap();
        assert_eq!(ranks(&c, Coefficients::Z), vec![1, 1]);
    }
}
