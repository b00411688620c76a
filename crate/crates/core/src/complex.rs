//! Finite cell complexes with integer incidence coefficients.
//!
//! A cell's boundary is stored as an ordered list of `(cell id, coefficient)`
//! pairs. Repeats are allowed: the collapsed signed sum is the boundary
//! operator, while the list order doubles as attaching data where twisting
//! needs it (a 1-cell lists its head with +1 and its tail with -1, a 2-cell
//! lists its attaching word in unit steps). Homology only ever looks at the
//! collapsed sums.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub boundary: Vec<(String, i64)>,
}

impl Cell {
    pub fn new(id: &str, dim: usize, boundary: &[(&str, i64)]) -> Self {
        Cell {
            id: id.to_string(),
            dim,
            boundary: boundary.iter().map(|(c, k)| (c.to_string(), *k)).collect(),
        }
    }

    /// Collapsed boundary: signed sums per referenced cell, zeros dropped.
    pub fn collapsed_boundary(&self) -> BTreeMap<String, i64> {
        let mut out: BTreeMap<String, i64> = BTreeMap::new();
        for (c, k) in &self.boundary {
            let e = out.entry(c.clone()).or_insert(0);
            *e += k;
            if *e == 0 {
                out.remove(c);
            }
        }
        out
    }
}

/// One check failure found by [`validate_cells`].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ValidationFailure {
    pub cell: String,
    pub degree: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub name: String,
    pub passed: bool,
    pub degrees_checked: usize,
    pub failures: Vec<ValidationFailure>,
}

/// Check the chain-complex axioms on raw cell data: unique ids, boundary
/// references one dimension down, empty boundaries for 0-cells, and an exact
/// ∂∘∂ = 0 in every degree.
pub fn validate_cells(name: &str, cells: &[Cell]) -> ValidationReport {
    let mut failures = Vec::new();
    let mut by_id: BTreeMap<&str, &Cell> = BTreeMap::new();
    for cell in cells {
        if by_id.insert(&cell.id, cell).is_some() {
            failures.push(ValidationFailure {
                cell: cell.id.clone(),
                degree: cell.dim,
                reason: "duplicate cell id".into(),
            });
        }
    }
    for cell in cells {
        if cell.dim == 0 && !cell.boundary.is_empty() {
            failures.push(ValidationFailure {
                cell: cell.id.clone(),
                degree: 0,
                reason: "0-cell with nonempty boundary".into(),
            });
            continue;
        }
        for (face, _) in &cell.boundary {
            match by_id.get(face.as_str()) {
                None => failures.push(ValidationFailure {
                    cell: cell.id.clone(),
                    degree: cell.dim,
                    reason: format!("boundary references unknown cell `{face}`"),
                }),
                Some(f) if f.dim + 1 != cell.dim => failures.push(ValidationFailure {
                    cell: cell.id.clone(),
                    degree: cell.dim,
                    reason: format!(
                        "boundary cell `{face}` has dimension {}, expected {}",
                        f.dim,
                        cell.dim.saturating_sub(1)
                    ),
                }),
                _ => {}
            }
        }
    }
    let max_dim = cells.iter().map(|c| c.dim).max().unwrap_or(0);
    if failures.is_empty() {
        // ∂(∂ c) must vanish cell by cell
        for cell in cells {
            if cell.dim < 2 {
                continue;
            }
            let mut dd: BTreeMap<String, i64> = BTreeMap::new();
            for (face, k) in cell.collapsed_boundary() {
                for (sub, k2) in by_id[face.as_str()].collapsed_boundary() {
                    let e = dd.entry(sub).or_insert(0);
                    *e += k * k2;
                }
            }
            if dd.values().any(|&v| v != 0) {
                failures.push(ValidationFailure {
                    cell: cell.id.clone(),
                    degree: cell.dim,
                    reason: "∂∘∂ != 0".into(),
                });
            }
        }
    }
    ValidationReport {
        name: name.to_string(),
        passed: failures.is_empty(),
        degrees_checked: max_dim + 1,
        failures,
    }
}

/// A validated finite cell complex. Immutable after construction.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CellComplex {
    pub name: String,
    pub cells: Vec<Cell>,
    #[serde(skip)]
    index: BTreeMap<String, usize>,
    /// Cell indices per dimension, ascending id inside each degree.
    #[serde(skip)]
    by_dim: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawComplex {
    name: String,
    cells: Vec<Cell>,
}

impl<'de> Deserialize<'de> for CellComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawComplex::deserialize(d)?;
        CellComplex::new(&raw.name, raw.cells).map_err(serde::de::Error::custom)
    }
}

impl CellComplex {
    pub fn new(name: &str, mut cells: Vec<Cell>) -> Result<Self> {
        let report = validate_cells(name, &cells);
        if !report.passed {
            let first = &report.failures[0];
            return Err(Error::InvalidComplex {
                name: name.to_string(),
                reason: format!(
                    "{} (cell `{}`, degree {}){}",
                    first.reason,
                    first.cell,
                    first.degree,
                    if report.failures.len() > 1 {
                        format!(" and {} more failures", report.failures.len() - 1)
                    } else {
                        String::new()
                    }
                ),
            });
        }
        // deterministic matrix bases: ascending id within each dimension
        cells.sort_by(|a, b| (a.dim, &a.id).cmp(&(b.dim, &b.id)));
        let index: BTreeMap<String, usize> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.clone(), i))
            .collect();
        let max_dim = cells.iter().map(|c| c.dim).max().map_or(0, |d| d + 1);
        let mut by_dim = vec![Vec::new(); max_dim];
        for (i, c) in cells.iter().enumerate() {
            by_dim[c.dim].push(i);
        }
        Ok(CellComplex {
            name: name.to_string(),
            cells,
            index,
            by_dim,
        })
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("complex serialization")
    }

    /// Re-run the construction-time checks and return the full report.
    pub fn validation_report(&self) -> ValidationReport {
        validate_cells(&self.name, &self.cells)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Largest cell dimension; None for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn cell(&self, id: &str) -> Result<&Cell> {
        self.index
            .get(id)
            .map(|&i| &self.cells[i])
            .ok_or_else(|| Error::UnknownCell(id.into()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Cells of the given dimension, ascending id.
    pub fn cells_of_dim(&self, dim: usize) -> Vec<&Cell> {
        match self.by_dim.get(dim) {
            Some(idxs) => idxs.iter().map(|&i| &self.cells[i]).collect(),
            None => Vec::new(),
        }
    }

    pub fn cell_count(&self, dim: usize) -> usize {
        self.by_dim.get(dim).map_or(0, |v| v.len())
    }

    /// Matrix of ∂_q : C_q -> C_{q-1}, rows indexed by (q-1)-cells and
    /// columns by q-cells, both ascending by id.
    pub fn boundary_matrix(&self, q: usize) -> IntMatrix {
        let cols = self.cells_of_dim(q);
        let rows = if q == 0 {
            Vec::new()
        } else {
            self.cells_of_dim(q - 1)
        };
        let row_index: BTreeMap<&str, usize> = rows
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.as_str(), i))
            .collect();
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (j, cell) in cols.iter().enumerate() {
            for (face, k) in cell.collapsed_boundary() {
                let i = row_index[face.as_str()];
                m.add_to(i, j, &BigInt::from(k));
            }
        }
        m
    }

    /// Σ (-1)^q #q-cells.
    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .map(|c| if c.dim % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    /// Checks that `ids` names a boundary-closed set of cells.
    pub fn check_subcomplex(&self, ids: &BTreeSet<String>) -> Result<()> {
        for id in ids {
            let cell = self.cell(id)?;
            for (face, _) in cell.collapsed_boundary() {
                if !ids.contains(&face) {
                    return Err(Error::NotBoundaryClosed(id.clone(), face));
                }
            }
        }
        Ok(())
    }

    /// The quotient complex: cells of `sub` are collapsed away and surviving
    /// boundaries drop references into `sub`. `sub` must be boundary-closed.
    pub fn quotient(&self, sub: &BTreeSet<String>) -> Result<CellComplex> {
        self.check_subcomplex(sub)?;
        let cells: Vec<Cell> = self
            .cells
            .iter()
            .filter(|c| !sub.contains(&c.id))
            .map(|c| Cell {
                id: c.id.clone(),
                dim: c.dim,
                boundary: c
                    .boundary
                    .iter()
                    .filter(|(f, _)| !sub.contains(f))
                    .cloned()
                    .collect(),
            })
            .collect();
        CellComplex::new(&format!("{}/{}", self.name, sub.len()), cells)
    }

    /// The subcomplex spanned by `ids` (which must be boundary-closed),
    /// keeping ids and boundaries verbatim.
    pub fn subcomplex(&self, name: &str, ids: &BTreeSet<String>) -> Result<CellComplex> {
        self.check_subcomplex(ids)?;
        let cells: Vec<Cell> = self
            .cells
            .iter()
            .filter(|c| ids.contains(&c.id))
            .cloned()
            .collect();
        CellComplex::new(name, cells)
    }

    /// Tail and head vertex of a 1-cell, read off its signed boundary list.
    /// The list must contain exactly one -1 entry (tail) and one +1 entry
    /// (head); a loop lists the same vertex twice with opposite signs.
    pub fn edge_endpoints(&self, id: &str) -> Result<(String, String)> {
        let cell = self.cell(id)?;
        if cell.dim != 1 {
            return Err(Error::MissingEndpoints(id.into()));
        }
        let mut tail = None;
        let mut head = None;
        for (v, k) in &cell.boundary {
            match k {
                1 if head.is_none() => head = Some(v.clone()),
                -1 if tail.is_none() => tail = Some(v.clone()),
                _ => return Err(Error::MissingEndpoints(id.into())),
            }
        }
        match (tail, head) {
            (Some(t), Some(h)) => Ok((t, h)),
            _ => Err(Error::MissingEndpoints(id.into())),
        }
    }

    /// The attaching word of a 2-cell: its boundary list read in order, all
    /// coefficients ±1, consecutive steps sharing endpoints, closing up.
    pub fn attaching_word(&self, id: &str) -> Result<Vec<(String, bool)>> {
        let cell = self.cell(id)?;
        if cell.dim != 2 {
            return Err(Error::MissingAttachingWord(id.into()));
        }
        let mut word = Vec::new();
        for (edge, k) in &cell.boundary {
            match k {
                1 => word.push((edge.clone(), true)),
                -1 => word.push((edge.clone(), false)),
                _ => return Err(Error::MissingAttachingWord(id.into())),
            }
        }
        // contiguity and closure
        let mut at: Option<String> = None;
        let mut start: Option<String> = None;
        for (edge, fwd) in &word {
            let (tail, head) = self.edge_endpoints(edge)?;
            let (from, to) = if *fwd { (tail, head) } else { (head, tail) };
            if let Some(pos) = &at {
                if *pos != from {
                    return Err(Error::MissingAttachingWord(id.into()));
                }
            } else {
                start = Some(from);
            }
            at = Some(to);
        }
        if let (Some(s), Some(e)) = (&start, &at) {
            if s != e {
                return Err(Error::MissingAttachingWord(id.into()));
            }
        }
        Ok(word)
    }

    /// Lowest vertex id reachable from `id` through iterated boundaries.
    pub fn anchor_vertex(&self, id: &str) -> Result<String> {
        let mut frontier = vec![id.to_string()];
        let mut seen = BTreeSet::new();
        let mut best: Option<String> = None;
        while let Some(c) = frontier.pop() {
            if !seen.insert(c.clone()) {
                continue;
            }
            let cell = self.cell(&c)?;
            if cell.dim == 0 {
                if best.as_ref().is_none_or(|b| c < *b) {
                    best = Some(c);
                }
                continue;
            }
            for (face, _) in &cell.boundary {
                frontier.push(face.clone());
            }
        }
        best.ok_or_else(|| Error::Internal(format!("cell `{id}` has no vertex in its closure")))
    }

    /// All cells in the closure of `id`, including `id` itself.
    pub fn closure(&self, id: &str) -> Result<BTreeSet<String>> {
        let mut out = BTreeSet::new();
        let mut frontier = vec![id.to_string()];
        while let Some(c) = frontier.pop() {
            if !out.insert(c.clone()) {
                continue;
            }
            for (face, _) in &self.cell(&c)?.boundary {
                frontier.push(face.clone());
            }
        }
        Ok(out)
    }
}

/// The product ∂_q · ∂_{q+1} for every meaningful q; all must vanish.
/// Redundant with construction-time validation, by matrix product.
pub fn boundary_squares(complex: &CellComplex) -> Vec<(usize, bool)> {
    let Some(dim) = complex.dim() else {
        return Vec::new();
    };
    (1..dim.max(1))
        .filter(|&q| q < dim)
        .map(|q| {
            let dq = complex.boundary_matrix(q);
            let dq1 = complex.boundary_matrix(q + 1);
            (q, dq.mul(&dq1).is_zero())
        })
        .collect()
}

pub fn chain_is_zero(chain: &BTreeMap<String, BigInt>) -> bool {
    chain.values().all(|v| v.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn minimal_circle_passes() {
        let report = validate_cells(
            "circle",
            &[
                Cell::new("v", 0, &[]),
                Cell::new("e", 1, &[("v", 1), ("v", -1)]),
            ],
        );
        assert!(report.passed);
    }

    #[test]
    fn empty_complex_passes() {
        let report = validate_cells("empty", &[]);
        assert!(report.passed);
        let c = CellComplex::new("empty", vec![]).unwrap();
        assert_eq!(c.euler_characteristic(), 0);
        assert_eq!(c.dim(), None);
    }

    #[test]
    fn flipped_incidence_fails_naming_the_face() {
        // square-based torus cell structure with one sign of ∂f broken
        let mut cells = fixtures::square_cells();
        for cell in &mut cells {
            if cell.id == "f" {
                for entry in &mut cell.boundary {
                    if entry.0 == "er" {
                        entry.1 = -entry.1;
                    }
                }
            }
        }
        let report = validate_cells("square-broken", &cells);
        assert!(!report.passed);
        assert!(report
            .failures
            .iter()
            .any(|f| f.cell == "f" && f.degree == 2));
        assert!(CellComplex::new("square-broken", cells).is_err());
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(fixtures::circle().euler_characteristic(), 0);
        assert_eq!(fixtures::torus().euler_characteristic(), 0);
        assert_eq!(fixtures::sphere().euler_characteristic(), 2);
    }

    #[test]
    fn quotient_interval_by_both_endpoints() {
        let interval = fixtures::interval();
        let sub: BTreeSet<String> = ["v0", "v1"].iter().map(|s| s.to_string()).collect();
        let q = interval.quotient(&sub).unwrap();
        assert_eq!(q.cell_count(0), 0);
        assert_eq!(q.cell_count(1), 1);
        // lone 1-cell with empty boundary: H_1 has rank 1
        let h = crate::homology::homology(&q, crate::homology::Coefficients::Q).unwrap();
        assert_eq!(h.ranks, vec![0, 1]);
    }

    #[test]
    fn quotient_by_empty_and_by_self() {
        let c = fixtures::circle();
        let empty = BTreeSet::new();
        let q = c.quotient(&empty).unwrap();
        assert_eq!(q.cells.len(), c.cells.len());
        let all: BTreeSet<String> = c.cells.iter().map(|x| x.id.clone()).collect();
        let trivial = c.quotient(&all).unwrap();
        assert!(trivial.is_empty());
    }

    #[test]
    fn subcomplex_closure_enforced() {
        let interval = fixtures::interval();
        let not_closed: BTreeSet<String> = ["e"].iter().map(|s| s.to_string()).collect();
        assert!(matches!(
            interval.check_subcomplex(&not_closed),
            Err(Error::NotBoundaryClosed(_, _))
        ));
    }

    #[test]
    fn endpoints_and_words() {
        let torus = fixtures::torus();
        assert_eq!(
            torus.edge_endpoints("ea").unwrap(),
            ("v".into(), "v".into())
        );
        let word = torus.attaching_word("f").unwrap();
        assert_eq!(
            word,
            vec![
                ("ea".to_string(), true),
                ("eb".to_string(), true),
                ("ea".to_string(), false),
                ("eb".to_string(), false)
            ]
        );
    }

    #[test]
    fn json_round_trip_matches_format() {
        let json = r#"{
            "name": "circle",
            "cells": [
                {"id": "v", "dim": 0, "boundary": []},
                {"id": "e", "dim": 1, "boundary": [["v", 1], ["v", -1]]}
            ]
        }"#;
        let c = CellComplex::from_json(json).unwrap();
        assert_eq!(c.cell_count(1), 1);
        let again = CellComplex::from_json(&c.to_json()).unwrap();
        assert_eq!(c, again);
    }
}
