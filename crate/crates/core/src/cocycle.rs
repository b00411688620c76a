//! Cellular 1-cocycles with integer s-vector values.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::CellComplex;
use crate::error::{Error, Result};

/// An integer s-vector per oriented 1-cell. Edges missing from `values`
/// carry the zero vector; reversing an edge negates its value.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CellularCocycle {
    pub s: usize,
    #[serde(default)]
    pub values: BTreeMap<String, Vec<i64>>,
}

impl CellularCocycle {
    pub fn new(s: usize, values: &[(&str, Vec<i64>)]) -> Self {
        CellularCocycle {
            s,
            values: values
                .iter()
                .map(|(e, v)| (e.to_string(), v.clone()))
                .collect(),
        }
    }

    pub fn zero(s: usize) -> Self {
        CellularCocycle {
            s,
            values: BTreeMap::new(),
        }
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn value(&self, edge: &str) -> Vec<i64> {
        self.values
            .get(edge)
            .cloned()
            .unwrap_or_else(|| vec![0; self.s])
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.iter().all(|&x| x == 0))
    }

    /// Checks rank consistency, that listed edges are 1-cells of `complex`,
    /// and the cocycle condition: the signed sum of values over the boundary
    /// of every 2-cell vanishes componentwise.
    pub fn validate(&self, complex: &CellComplex) -> Result<()> {
        if self.s == 0 {
            return Err(Error::InvalidParameter(
                "cocycle rank s must be >= 1".into(),
            ));
        }
        for (edge, v) in &self.values {
            let cell = complex.cell(edge)?;
            if cell.dim != 1 {
                return Err(Error::InvalidParameter(format!(
                    "cocycle assigns a value to `{edge}` which is a {}-cell",
                    cell.dim
                )));
            }
            if v.len() != self.s {
                return Err(Error::CocycleRankMismatch {
                    edge: edge.clone(),
                    got: v.len(),
                    expected: self.s,
                });
            }
        }
        for cell in complex.cells_of_dim(2) {
            let mut sum = vec![0i64; self.s];
            for (edge, k) in cell.collapsed_boundary() {
                for (acc, v) in sum.iter_mut().zip(self.value(&edge)) {
                    *acc += k * v;
                }
            }
            if let Some(component) = sum.iter().position(|&x| x != 0) {
                return Err(Error::CocycleViolation {
                    cell: cell.id.clone(),
                    component,
                });
            }
        }
        Ok(())
    }

    /// Signed sum of values along a contiguous oriented edge path. Each step
    /// is `(edge id, forward?)`.
    pub fn integrate(&self, complex: &CellComplex, path: &[(String, bool)]) -> Result<Vec<i64>> {
        let mut at: Option<String> = None;
        let mut total = vec![0i64; self.s];
        for (step, (edge, forward)) in path.iter().enumerate() {
            let (tail, head) = complex.edge_endpoints(edge)?;
            let (from, to) = if *forward { (tail, head) } else { (head, tail) };
            if let Some(pos) = &at {
                if *pos != from {
                    return Err(Error::NonContiguousPath {
                        step,
                        edge: edge.clone(),
                    });
                }
            }
            at = Some(to);
            let sign = if *forward { 1 } else { -1 };
            for (acc, v) in total.iter_mut().zip(self.value(edge)) {
                *acc += sign * v;
            }
        }
        Ok(total)
    }

    /// Decides whether the cocycle is a coboundary δg and returns the witness
    /// 0-cochain when it is. The test integrates over a spanning forest and
    /// checks every non-tree edge; a cocycle is a coboundary exactly when it
    /// vanishes on a cycle basis of the 1-skeleton.
    pub fn coboundary_witness(
        &self,
        complex: &CellComplex,
    ) -> Result<Option<BTreeMap<String, Vec<i64>>>> {
        self.validate(complex)?;
        let gauge = Gauge::build(complex, self)?;
        for edge in complex.cells_of_dim(1) {
            let (tail, head) = complex.edge_endpoints(&edge.id)?;
            let expected: Vec<i64> = gauge.potential[&head]
                .iter()
                .zip(&gauge.potential[&tail])
                .map(|(h, t)| h - t)
                .collect();
            if expected != self.value(&edge.id) {
                return Ok(None);
            }
        }
        Ok(Some(gauge.potential))
    }

    /// The cocycle α + δg. The witness convention matches
    /// [`Self::coboundary_witness`]: δg(e) = g(head) - g(tail).
    pub fn add_coboundary(
        &self,
        complex: &CellComplex,
        g: &BTreeMap<String, Vec<i64>>,
    ) -> Result<CellularCocycle> {
        let zero = vec![0i64; self.s];
        let mut values = BTreeMap::new();
        for edge in complex.cells_of_dim(1) {
            let (tail, head) = complex.edge_endpoints(&edge.id)?;
            let gh = g.get(&head).unwrap_or(&zero);
            let gt = g.get(&tail).unwrap_or(&zero);
            let v: Vec<i64> = self
                .value(&edge.id)
                .iter()
                .zip(gh.iter().zip(gt))
                .map(|(a, (h, t))| a + h - t)
                .collect();
            values.insert(edge.id.clone(), v);
        }
        Ok(CellularCocycle { s: self.s, values })
    }
}

/// Spanning-forest gauge for basepoint transport: a deterministic lowest-id
/// spanning forest of the 1-skeleton and the α-potential of every vertex
/// (integral along the tree path from its component's root).
pub(crate) struct Gauge {
    pub tree_edges: BTreeSet<String>,
    pub potential: BTreeMap<String, Vec<i64>>,
}

impl Gauge {
    pub fn build(complex: &CellComplex, alpha: &CellularCocycle) -> Result<Gauge> {
        let vertices: Vec<String> = complex
            .cells_of_dim(0)
            .iter()
            .map(|c| c.id.clone())
            .collect();
        let vidx: BTreeMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut parent: Vec<usize> = (0..vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut tree_edges = BTreeSet::new();
        let mut adjacency: BTreeMap<usize, Vec<(String, usize, bool)>> = BTreeMap::new();
        for edge in complex.cells_of_dim(1) {
            let (tail, head) = complex.edge_endpoints(&edge.id)?;
            let (t, h) = (vidx[tail.as_str()], vidx[head.as_str()]);
            let (rt, rh) = (find(&mut parent, t), find(&mut parent, h));
            if rt != rh {
                parent[rt] = rh;
                tree_edges.insert(edge.id.clone());
                adjacency
                    .entry(t)
                    .or_default()
                    .push((edge.id.clone(), h, true));
                adjacency
                    .entry(h)
                    .or_default()
                    .push((edge.id.clone(), t, false));
            }
        }
        // integrate out from the lowest-id root of each component
        let mut potential: BTreeMap<String, Vec<i64>> = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if potential.contains_key(v) {
                continue;
            }
            // ids ascend, so the first unseen vertex of a component is its root
            potential.insert(v.clone(), vec![0; alpha.s]);
            let mut stack = vec![i];
            while let Some(u) = stack.pop() {
                let gu = potential[&vertices[u]].clone();
                for (edge, w, forward) in adjacency.get(&u).cloned().unwrap_or_default() {
                    if potential.contains_key(&vertices[w]) {
                        continue;
                    }
                    let sign = if forward { 1 } else { -1 };
                    let gw: Vec<i64> = gu
                        .iter()
                        .zip(alpha.value(&edge))
                        .map(|(g, a)| g + sign * a)
                        .collect();
                    potential.insert(vertices[w].clone(), gw);
                    stack.push(w);
                }
            }
        }
        Ok(Gauge {
            tree_edges,
            potential,
        })
    }

    /// Tree-path-corrected holonomy exponent of an edge: the α-integral of
    /// (tree path to tail) · edge · (reverse tree path from head).
    pub fn holonomy(
        &self,
        alpha: &CellularCocycle,
        edge: &str,
        tail: &str,
        head: &str,
    ) -> Vec<i64> {
        self.potential[tail]
            .iter()
            .zip(&self.potential[head])
            .zip(alpha.value(edge))
            .map(|((t, h), a)| t + a - h)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Cell;
    use crate::fixtures;

    fn path(steps: &[(&str, bool)]) -> Vec<(String, bool)> {
        steps.iter().map(|(e, f)| (e.to_string(), *f)).collect()
    }

    #[test]
    fn integrate_circle() {
        let c = fixtures::circle();
        let alpha = CellularCocycle::new(1, &[("e", vec![1])]);
        assert_eq!(alpha.integrate(&c, &path(&[("e", true)])).unwrap(), vec![1]);
        assert_eq!(
            alpha.integrate(&c, &path(&[("e", false)])).unwrap(),
            vec![-1]
        );
    }

    #[test]
    fn integrate_torus_rank_two() {
        let t = fixtures::torus();
        let alpha = CellularCocycle::new(2, &[("ea", vec![1, 0]), ("eb", vec![0, 1])]);
        alpha.validate(&t).unwrap();
        assert_eq!(
            alpha
                .integrate(&t, &path(&[("ea", true), ("eb", true)]))
                .unwrap(),
            vec![1, 1]
        );
    }

    #[test]
    fn non_contiguous_rejected() {
        let c = fixtures::interval();
        let alpha = CellularCocycle::new(1, &[("e", vec![5])]);
        let err = alpha
            .integrate(&c, &path(&[("e", true), ("e", true)]))
            .unwrap_err();
        assert!(matches!(err, Error::NonContiguousPath { step: 1, .. }));
    }

    #[test]
    fn coboundary_decision() {
        let circle = fixtures::circle();
        let alpha = CellularCocycle::new(1, &[("e", vec![1])]);
        assert!(alpha.coboundary_witness(&circle).unwrap().is_none());

        let interval = fixtures::interval();
        let beta = CellularCocycle::new(1, &[("e", vec![5])]);
        let g = beta
            .coboundary_witness(&interval)
            .unwrap()
            .expect("coboundary");
        assert_eq!(g["v0"], vec![0]);
        assert_eq!(g["v1"], vec![5]);
    }

    #[test]
    fn two_cell_circle_balanced_values() {
        let c = crate::complex::CellComplex::new(
            "circle2",
            vec![
                Cell::new("v1", 0, &[]),
                Cell::new("v2", 0, &[]),
                Cell::new("e1", 1, &[("v2", 1), ("v1", -1)]),
                Cell::new("e2", 1, &[("v1", 1), ("v2", -1)]),
            ],
        )
        .unwrap();
        let alpha = CellularCocycle::new(1, &[("e1", vec![3]), ("e2", vec![-3])]);
        let g = alpha
            .coboundary_witness(&c)
            .unwrap()
            .expect("cycle sums vanish");
        // δg really is α
        for e in ["e1", "e2"] {
            let (tail, head) = c.edge_endpoints(e).unwrap();
            assert_eq!(g[&head][0] - g[&tail][0], alpha.value(e)[0]);
        }
    }

    #[test]
    fn cocycle_condition_enforced() {
        let t = fixtures::torus();
        // values that do not cancel around the commutator word are fine
        // (the collapsed boundary is zero), but on the square they are not
        let alpha = CellularCocycle::new(1, &[("ea", vec![1])]);
        alpha.validate(&t).unwrap();

        let sq = fixtures::square();
        let bad = CellularCocycle::new(1, &[("eb", vec![1])]);
        assert!(matches!(
            bad.validate(&sq),
            Err(Error::CocycleViolation { .. })
        ));
    }

    #[test]
    fn loop_integral_invariant_under_coboundary() {
        let t = fixtures::torus();
        let alpha = CellularCocycle::new(2, &[("ea", vec![1, 0]), ("eb", vec![0, 1])]);
        let mut g = BTreeMap::new();
        g.insert("v".to_string(), vec![7, -3]);
        let shifted = alpha.add_coboundary(&t, &g).unwrap();
        let loop_path = path(&[("ea", true), ("eb", true), ("ea", false), ("eb", false)]);
        assert_eq!(
            alpha.integrate(&t, &loop_path).unwrap(),
            shifted.integrate(&t, &loop_path).unwrap()
        );
    }
}
