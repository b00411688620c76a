//! Local systems of free abelian groups, given by their monodromy: an
//! invertible integer matrix per non-tree 1-cell. Tree edges (and any edge
//! left unlisted) act as the identity.

use std::collections::BTreeMap;

use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::CellComplex;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MonodromyRep {
    pub k: usize,
    #[serde(default)]
    pub edges: BTreeMap<String, Vec<Vec<i64>>>,
}

impl MonodromyRep {
    pub fn trivial(k: usize) -> Self {
        MonodromyRep {
            k,
            edges: BTreeMap::new(),
        }
    }

    pub fn new(k: usize, edges: &[(&str, Vec<Vec<i64>>)]) -> Self {
        MonodromyRep {
            k,
            edges: edges
                .iter()
                .map(|(e, m)| (e.to_string(), m.clone()))
                .collect(),
        }
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn validate(&self, complex: &CellComplex) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("fiber rank k must be >= 1".into()));
        }
        for (edge, rows) in &self.edges {
            let cell = complex.cell(edge)?;
            if cell.dim != 1 {
                return Err(Error::InvalidParameter(format!(
                    "monodromy assigned to `{edge}` which is a {}-cell",
                    cell.dim
                )));
            }
            if rows.len() != self.k || rows.iter().any(|r| r.len() != self.k) {
                return Err(Error::InvalidParameter(format!(
                    "monodromy matrix for `{edge}` is not {0}x{0}",
                    self.k
                )));
            }
            let det = self.matrix(edge).determinant();
            if !det.abs().is_one() {
                return Err(Error::NotUnimodular {
                    edge: edge.clone(),
                    det: det.to_string(),
                });
            }
        }
        Ok(())
    }

    /// The transport operator of an edge; identity when unlisted.
    pub fn matrix(&self, edge: &str) -> IntMatrix {
        match self.edges.get(edge) {
            Some(rows) => {
                let mut m = IntMatrix::zeros(self.k, self.k);
                for (i, row) in rows.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        m.set(i, j, BigInt::from(*v));
                    }
                }
                m
            }
            None => IntMatrix::identity(self.k),
        }
    }

    pub fn is_trivial(&self) -> bool {
        let id = IntMatrix::identity(self.k);
        self.edges.keys().all(|e| self.matrix(e) == id)
    }
}

/// Integer inverse of a unimodular matrix, by the adjugate.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let n = m.rows();
    if n != m.cols() {
        return Err(Error::Internal("inverse of non-square matrix".into()));
    }
    let det = m.determinant();
    if !det.abs().is_one() {
        return Err(Error::Internal(format!(
            "matrix is not unimodular (det = {det})"
        )));
    }
    let mut inv = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // cofactor C_{j,i} for the adjugate transpose
            let mut minor = IntMatrix::zeros(n - 1, n - 1);
            let mut mi = 0;
            for r in 0..n {
                if r == j {
                    continue;
                }
                let mut mj = 0;
                for c in 0..n {
                    if c == i {
                        continue;
                    }
                    minor.set(mi, mj, m.get(r, c).clone());
                    mj += 1;
                }
                mi += 1;
            }
            let mut cof = if n == 1 {
                BigInt::one()
            } else {
                minor.determinant()
            };
            if (i + j) % 2 == 1 {
                cof = -cof;
            }
            inv.set(i, j, &cof * &det); // det = ±1, so this divides by det
        }
    }
    debug_assert!({
        let prod = m.mul(&inv);
        let mut ok = true;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                };
                ok &= *prod.get(i, j) == expect;
            }
        }
        ok
    });
    Ok(inv)
}
