//! Combinatorial flows: weighted digraphs with designated fixed nodes and
//! Morse sets, carrying exact-rational cocycle integrals on their edges.
//!
//! An edge stands for an orbit segment and its weight vector for the
//! cocycle integral along it. In a finite graph, boundedness of all chain
//! integrals is equivalent to every directed cycle balancing to zero, which
//! is what the classifier decides: a cycle with nonzero total weight is a
//! drift witness, a zero-weight cycle is a periodic-orbit witness, and an
//! acyclic graph is gradient-like with an explicit decreasing potential.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowEdge {
    pub from: String,
    pub to: String,
    pub weight: Vec<BigRational>,
}

impl FlowEdge {
    /// Coordinate-sum scalarization used by the carrying conditions.
    pub fn scalar(&self) -> BigRational {
        self.weight.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialFlow {
    pub nodes: Vec<String>,
    pub fixed: BTreeSet<String>,
    pub edges: Vec<FlowEdge>,
    pub morse_sets: Vec<BTreeSet<String>>,
    /// Weight vector rank.
    pub s: usize,
}

#[derive(Serialize, Deserialize)]
struct RawNode {
    id: String,
    #[serde(default)]
    fixed: bool,
}

#[derive(Serialize, Deserialize)]
struct RawEdge {
    from: String,
    to: String,
    w: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RawFlow {
    nodes: Vec<RawNode>,
    edges: Vec<RawEdge>,
    #[serde(default)]
    morse_sets: Vec<Vec<String>>,
}

impl CombinatorialFlow {
    pub fn new(
        nodes: &[(&str, bool)],
        edges: &[(&str, &str, Vec<BigRational>)],
        morse_sets: &[Vec<&str>],
    ) -> Result<Self> {
        let flow = CombinatorialFlow {
            nodes: nodes.iter().map(|(id, _)| id.to_string()).collect(),
            fixed: nodes
                .iter()
                .filter(|(_, f)| *f)
                .map(|(id, _)| id.to_string())
                .collect(),
            edges: edges
                .iter()
                .map(|(a, b, w)| FlowEdge {
                    from: a.to_string(),
                    to: b.to_string(),
                    weight: w.clone(),
                })
                .collect(),
            morse_sets: morse_sets
                .iter()
                .map(|set| set.iter().map(|s| s.to_string()).collect())
                .collect(),
            s: edges.first().map_or(1, |(_, _, w)| w.len()),
        };
        flow.validate()?;
        Ok(flow)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let raw: RawFlow = serde_json::from_str(json)?;
        let mut edges = Vec::new();
        for e in &raw.edges {
            let mut weight = Vec::new();
            for w in &e.w {
                let r: BigRational = w
                    .parse()
                    .map_err(|_| Error::InvalidFlow(format!("bad rational weight `{w}`")))?;
                weight.push(r);
            }
            edges.push(FlowEdge {
                from: e.from.clone(),
                to: e.to.clone(),
                weight,
            });
        }
        let flow = CombinatorialFlow {
            nodes: raw.nodes.iter().map(|n| n.id.clone()).collect(),
            fixed: raw
                .nodes
                .iter()
                .filter(|n| n.fixed)
                .map(|n| n.id.clone())
                .collect(),
            edges,
            morse_sets: raw
                .morse_sets
                .iter()
                .map(|s| s.iter().cloned().collect())
                .collect(),
            s: raw.edges.first().map_or(1, |e| e.w.len()),
        };
        flow.validate()?;
        Ok(flow)
    }

    pub fn to_json(&self) -> String {
        let raw = RawFlow {
            nodes: self
                .nodes
                .iter()
                .map(|id| RawNode {
                    id: id.clone(),
                    fixed: self.fixed.contains(id),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    from: e.from.clone(),
                    to: e.to.clone(),
                    w: e.weight.iter().map(|w| w.to_string()).collect(),
                })
                .collect(),
            morse_sets: self
                .morse_sets
                .iter()
                .map(|s| s.iter().cloned().collect())
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("flow serialization")
    }

    pub fn validate(&self) -> Result<()> {
        let ids: BTreeSet<&String> = self.nodes.iter().collect();
        if ids.len() != self.nodes.len() {
            return Err(Error::InvalidFlow("duplicate node ids".into()));
        }
        for e in &self.edges {
            if !ids.contains(&e.from) || !ids.contains(&e.to) {
                return Err(Error::InvalidFlow(format!(
                    "edge {} -> {} references an unknown node",
                    e.from, e.to
                )));
            }
            if e.weight.len() != self.s {
                return Err(Error::InvalidFlow(format!(
                    "edge {} -> {} has {} weight components, expected {}",
                    e.from,
                    e.to,
                    e.weight.len(),
                    self.s
                )));
            }
            if e.from == e.to && self.fixed.contains(&e.from) {
                return Err(Error::InvalidFlow(format!(
                    "self-loop on fixed node `{}`",
                    e.from
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for set in &self.morse_sets {
            for n in set {
                if !ids.contains(n) {
                    return Err(Error::InvalidFlow(format!("morse set references `{n}`")));
                }
                if !seen.insert(n.clone()) {
                    return Err(Error::InvalidFlow(format!(
                        "node `{n}` appears in two morse sets"
                    )));
                }
            }
        }
        Ok(())
    }

    fn node_index(&self) -> BTreeMap<&str, usize> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect()
    }

    fn in_morse_set(&self, node: &str) -> Option<usize> {
        self.morse_sets.iter().position(|s| s.contains(node))
    }

    /// Rescale all weights by a positive constant (for invariance checks).
    pub fn rescaled(&self, c: &BigRational) -> CombinatorialFlow {
        let mut out = self.clone();
        for e in &mut out.edges {
            for w in &mut e.weight {
                *w *= c;
            }
        }
        out
    }

    /// Shift weights by the coboundary of a node potential g:
    /// w(e) += g(to) - g(from), componentwise.
    pub fn with_coboundary(&self, g: &BTreeMap<String, Vec<BigRational>>) -> CombinatorialFlow {
        let zero = vec![BigRational::zero(); self.s];
        let mut out = self.clone();
        for e in &mut out.edges {
            let gt = g.get(&e.to).unwrap_or(&zero);
            let gf = g.get(&e.from).unwrap_or(&zero);
            for ((w, t), f) in e.weight.iter_mut().zip(gt).zip(gf) {
                *w += t - f;
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MorseDecomposition {
    /// Strongly connected classes in flow order (sources first), each
    /// sorted by node id.
    pub classes: Vec<Vec<String>>,
    /// Condensation edges as (from class, to class) indices.
    pub order: Vec<(usize, usize)>,
}

/// Strongly connected components of the edge relation with the condensation
/// partial order oriented by flow direction.
pub fn morse_decomposition(flow: &CombinatorialFlow) -> MorseDecomposition {
    let idx = flow.node_index();
    let n = flow.nodes.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in &flow.edges {
        adj[idx[e.from.as_str()]].push(idx[e.to.as_str()]);
    }
    let comp = tarjan_scc(&adj);
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);

    let mut cedges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for e in &flow.edges {
        let (a, b) = (comp[idx[e.from.as_str()]], comp[idx[e.to.as_str()]]);
        if a != b {
            cedges.insert((a, b));
        }
    }
    let mut members: Vec<Vec<String>> = vec![Vec::new(); ncomp];
    for (i, node) in flow.nodes.iter().enumerate() {
        members[comp[i]].push(node.clone());
    }
    for m in &mut members {
        m.sort();
    }
    // Kahn order, lowest member id first for determinism
    let mut indeg = vec![0usize; ncomp];
    for &(_, b) in &cedges {
        indeg[b] += 1;
    }
    let mut ready: Vec<usize> = (0..ncomp).filter(|&c| indeg[c] == 0).collect();
    let mut topo = Vec::new();
    while !ready.is_empty() {
        ready.sort_by(|&a, &b| members[a][0].cmp(&members[b][0]));
        let c = ready.remove(0);
        topo.push(c);
        for &(a, b) in &cedges {
            if a == c {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    ready.push(b);
                }
            }
        }
    }
    let position: BTreeMap<usize, usize> = topo.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let classes: Vec<Vec<String>> = topo.iter().map(|&c| members[c].clone()).collect();
    let order: Vec<(usize, usize)> = cedges
        .iter()
        .map(|&(a, b)| (position[&a], position[&b]))
        .collect();
    MorseDecomposition { classes, order }
}

/// Iterative Tarjan; returns the component index per node.
fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut counter = 0usize;
    let mut ncomp = 0usize;

    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(start, 0)];
        while let Some(&mut (v, ref mut edge_i)) = work.last_mut() {
            if *edge_i == 0 {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = adj[v].get(*edge_i) {
                *edge_i += 1;
                if index[w] == usize::MAX {
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CarryReport {
    pub verdict: bool,
    pub rho: String,
    pub lambda: String,
    /// Coboundary restriction and oscillation bound on each Morse set.
    pub condition1: ConditionReport,
    /// Connecting-path gain between Morse sets.
    pub condition2: ConditionReport,
    /// Positivity of cycles avoiding all Morse sets, by minimum cycle mean.
    pub condition3: ConditionReport,
}

struct MorseRestriction {
    coboundary_ok: bool,
    failing_set: Option<usize>,
    oscillation: BigRational,
}

/// Componentwise potential of the weights restricted to each Morse set,
/// plus the scalarized oscillation. Fails when an in-set cycle has nonzero
/// weight.
fn morse_restriction(flow: &CombinatorialFlow) -> MorseRestriction {
    let mut oscillation = BigRational::zero();
    for (si, set) in flow.morse_sets.iter().enumerate() {
        let inner: Vec<&FlowEdge> = flow
            .edges
            .iter()
            .filter(|e| set.contains(&e.from) && set.contains(&e.to))
            .collect();
        let mut beta: BTreeMap<&str, Vec<BigRational>> = BTreeMap::new();
        for root in set {
            if beta.contains_key(root.as_str()) {
                continue;
            }
            beta.insert(root.as_str(), vec![BigRational::zero(); flow.s]);
            let mut queue: VecDeque<&str> = VecDeque::new();
            queue.push_back(root.as_str());
            while let Some(u) = queue.pop_front() {
                for e in &inner {
                    let step: Option<(&str, i64)> = if e.from == u {
                        Some((e.to.as_str(), 1))
                    } else if e.to == u {
                        Some((e.from.as_str(), -1))
                    } else {
                        None
                    };
                    let Some((w, sign)) = step else { continue };
                    let expected: Vec<BigRational> = beta[u]
                        .iter()
                        .zip(&e.weight)
                        .map(|(b, x)| if sign > 0 { b + x } else { b - x })
                        .collect();
                    match beta.get(w) {
                        Some(existing) => {
                            if *existing != expected {
                                return MorseRestriction {
                                    coboundary_ok: false,
                                    failing_set: Some(si),
                                    oscillation,
                                };
                            }
                        }
                        None => {
                            beta.insert(w, expected);
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        let scalars: Vec<BigRational> = beta
            .values()
            .map(|v| v.iter().sum::<BigRational>())
            .collect();
        if let (Some(min), Some(max)) = (scalars.iter().min(), scalars.iter().max()) {
            let spread = max - min;
            if spread > oscillation {
                oscillation = spread;
            }
        }
    }
    MorseRestriction {
        coboundary_ok: true,
        failing_set: None,
        oscillation,
    }
}

/// Minimum total scalar weight over paths that leave one Morse set and
/// reach another with all intermediate nodes outside. `None` when no
/// connecting path exists; an unbounded-below minimum reports a negative
/// cycle instead.
fn min_connecting_weight(flow: &CombinatorialFlow) -> (Option<BigRational>, bool) {
    let outside_count = flow
        .nodes
        .iter()
        .filter(|n| flow.in_morse_set(n).is_none())
        .count();
    let mut dist: BTreeMap<&str, BigRational> = BTreeMap::new();
    for e in &flow.edges {
        if flow.in_morse_set(&e.from).is_some() && flow.in_morse_set(&e.to).is_none() {
            let w = e.scalar();
            match dist.get(e.to.as_str()) {
                Some(old) if *old <= w => {}
                _ => {
                    dist.insert(e.to.as_str(), w);
                }
            }
        }
    }
    let relax_edges: Vec<&FlowEdge> = flow
        .edges
        .iter()
        .filter(|e| flow.in_morse_set(&e.from).is_none() && flow.in_morse_set(&e.to).is_none())
        .collect();
    let mut negative_cycle = false;
    for round in 0..=outside_count {
        let mut changed = false;
        for e in &relax_edges {
            let Some(du) = dist.get(e.from.as_str()).cloned() else {
                continue;
            };
            let cand = &du + e.scalar();
            match dist.get(e.to.as_str()) {
                Some(old) if *old <= cand => {}
                _ => {
                    dist.insert(e.to.as_str(), cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        if round == outside_count {
            negative_cycle = true;
        }
    }
    let mut best: Option<BigRational> = None;
    for e in &flow.edges {
        if flow.in_morse_set(&e.to).is_none() {
            continue;
        }
        let cand = if let Some(from_set) = flow.in_morse_set(&e.from) {
            if Some(from_set) == flow.in_morse_set(&e.to) {
                continue; // an edge inside one Morse set is not connecting
            }
            Some(e.scalar())
        } else {
            dist.get(e.from.as_str()).map(|d| d + e.scalar())
        };
        if let Some(c) = cand {
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
    }
    (best, negative_cycle)
}

/// Karp's minimum cycle mean over the subgraph induced by nodes outside all
/// Morse sets. `None` when that subgraph is acyclic.
#[allow(clippy::needless_range_loop)] // the k/v walk tables read clearest indexed
pub(crate) fn min_outside_cycle_mean(flow: &CombinatorialFlow) -> Option<BigRational> {
    let outside: Vec<&String> = flow
        .nodes
        .iter()
        .filter(|n| flow.in_morse_set(n).is_none())
        .collect();
    if outside.is_empty() {
        return None;
    }
    let idx: BTreeMap<&str, usize> = outside
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let n = outside.len();
    let edges: Vec<(usize, usize, BigRational)> = flow
        .edges
        .iter()
        .filter_map(|e| {
            let a = idx.get(e.from.as_str())?;
            let b = idx.get(e.to.as_str())?;
            Some((*a, *b, e.scalar()))
        })
        .collect();
    // d[k][v] = min weight over walks of exactly k edges, started anywhere
    let mut d: Vec<Vec<Option<BigRational>>> = vec![vec![None; n]; n + 1];
    for v in 0..n {
        d[0][v] = Some(BigRational::zero());
    }
    for k in 1..=n {
        for &(a, b, ref w) in &edges {
            if let Some(da) = d[k - 1][a].clone() {
                let cand = da + w;
                if d[k][b].as_ref().is_none_or(|old| cand < *old) {
                    d[k][b] = Some(cand);
                }
            }
        }
    }
    let mut mcm: Option<BigRational> = None;
    for v in 0..n {
        let Some(dn) = d[n][v].clone() else { continue };
        let mut worst: Option<BigRational> = None;
        for k in 0..n {
            if let Some(dk) = d[k][v].clone() {
                let mean = (dn.clone() - dk) / BigRational::from(BigInt::from((n - k) as i64));
                if worst.as_ref().is_none_or(|w| mean > *w) {
                    worst = Some(mean);
                }
            }
        }
        if let Some(w) = worst {
            if mcm.as_ref().is_none_or(|m| w < *m) {
                mcm = Some(w);
            }
        }
    }
    mcm
}

/// Decides the three carrying conditions at the given parameters.
pub fn carries_cocycle(
    flow: &CombinatorialFlow,
    rho: &BigRational,
    lambda: &BigRational,
) -> Result<CarryReport> {
    if !rho.is_positive() {
        return Err(Error::InvalidParameter("rho must be positive".into()));
    }
    if lambda.is_negative() || *lambda >= BigRational::one() {
        return Err(Error::InvalidParameter("lambda must lie in [0, 1)".into()));
    }
    for fixed in &flow.fixed {
        if flow.in_morse_set(fixed).is_none() {
            return Err(Error::Precondition(format!(
                "fixed node `{fixed}` lies outside every Morse set"
            )));
        }
    }

    let restriction = morse_restriction(flow);
    let bound = lambda * rho;
    let cond1_ok = restriction.coboundary_ok && restriction.oscillation <= bound;
    let condition1 = ConditionReport {
        ok: cond1_ok,
        detail: match restriction.failing_set {
            Some(si) => format!("restriction to Morse set {si} is not a coboundary"),
            None => format!(
                "oscillation {} vs bound λρ = {}",
                restriction.oscillation, bound
            ),
        },
    };

    let (min_connect, negative_cycle) = min_connecting_weight(flow);
    let cond2_ok = !negative_cycle && min_connect.as_ref().is_none_or(|m| m >= rho);
    let condition2 = ConditionReport {
        ok: cond2_ok,
        detail: if negative_cycle {
            "connecting paths are unbounded below (negative cycle outside the Morse sets)".into()
        } else {
            match &min_connect {
                Some(m) => format!("minimum connecting weight {m} vs ρ = {rho}"),
                None => "no connecting paths".into(),
            }
        },
    };

    let mcm = min_outside_cycle_mean(flow);
    let cond3_ok = mcm.as_ref().is_none_or(|m| m >= rho);
    let condition3 = ConditionReport {
        ok: cond3_ok,
        detail: match &mcm {
            Some(m) => format!("minimum cycle mean {m} vs ρ = {rho}"),
            None => "no cycles outside the Morse sets".into(),
        },
    };

    Ok(CarryReport {
        verdict: cond1_ok && cond2_ok && cond3_ok,
        rho: rho.to_string(),
        lambda: lambda.to_string(),
        condition1,
        condition2,
        condition3,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DriftCycle {
    /// Node sequence; edges[i] runs from nodes[i] to nodes[(i+1) % len].
    pub nodes: Vec<String>,
    /// Edge indices into the flow's edge list.
    pub edges: Vec<usize>,
    /// Componentwise total weight, as strings.
    pub total: Vec<String>,
}

/// A simple directed cycle with nonzero total weight in some component, or
/// None when every cycle balances in all components. Detection runs a
/// negative-cycle search per weight component and sign.
pub fn find_drift_cycle(flow: &CombinatorialFlow) -> Option<DriftCycle> {
    for comp in 0..flow.s {
        for positive in [true, false] {
            if let Some(cycle) = signed_cycle_search(flow, comp, positive) {
                return Some(cycle);
            }
        }
    }
    None
}

/// Bellman-Ford negative-cycle extraction on weight component `comp`,
/// negated when searching for positive cycles.
fn signed_cycle_search(
    flow: &CombinatorialFlow,
    comp: usize,
    positive: bool,
) -> Option<DriftCycle> {
    let idx = flow.node_index();
    let n = flow.nodes.len();
    let mut dist = vec![BigRational::zero(); n];
    let mut pred: Vec<Option<usize>> = vec![None; n]; // incoming edge index
    let mut touched = None;
    for round in 0..=n {
        touched = None;
        for (ei, e) in flow.edges.iter().enumerate() {
            let w = if positive {
                -e.weight[comp].clone()
            } else {
                e.weight[comp].clone()
            };
            let (a, b) = (idx[e.from.as_str()], idx[e.to.as_str()]);
            let cand = dist[a].clone() + w;
            if cand < dist[b] {
                dist[b] = cand;
                pred[b] = Some(ei);
                touched = Some(b);
            }
        }
        touched?;
        if round == n {
            break;
        }
    }
    // walk predecessors until we are inside the cycle, then extract it
    let mut v = touched?;
    for _ in 0..n {
        v = idx[flow.edges[pred[v]?].from.as_str()];
    }
    let start = v;
    let mut cycle_edges = Vec::new();
    loop {
        let ei = pred[v]?;
        cycle_edges.push(ei);
        v = idx[flow.edges[ei].from.as_str()];
        if v == start {
            break;
        }
    }
    cycle_edges.reverse();
    let nodes: Vec<String> = cycle_edges
        .iter()
        .map(|&ei| flow.edges[ei].from.clone())
        .collect();
    let mut total = vec![BigRational::zero(); flow.s];
    for &ei in &cycle_edges {
        for (t, w) in total.iter_mut().zip(&flow.edges[ei].weight) {
            *t += w;
        }
    }
    debug_assert!(total.iter().any(|t| !t.is_zero()));
    Some(DriftCycle {
        nodes,
        edges: cycle_edges,
        total: total.iter().map(|t| t.to_string()).collect(),
    })
}

/// Any directed cycle at all, weight ignored.
fn some_cycle(flow: &CombinatorialFlow) -> Option<DriftCycle> {
    let idx = flow.node_index();
    let n = flow.nodes.len();
    let mut eadj: Vec<Vec<usize>> = vec![Vec::new(); n]; // outgoing edge indices
    let mut nadj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ei, e) in flow.edges.iter().enumerate() {
        eadj[idx[e.from.as_str()]].push(ei);
        nadj[idx[e.from.as_str()]].push(idx[e.to.as_str()]);
    }
    let comp = tarjan_scc(&nadj);
    for (ei, e) in flow.edges.iter().enumerate() {
        let (a, b) = (idx[e.from.as_str()], idx[e.to.as_str()]);
        if comp[a] != comp[b] {
            continue;
        }
        let finish = |edges: Vec<usize>| {
            let nodes: Vec<String> = edges
                .iter()
                .map(|&fi| flow.edges[fi].from.clone())
                .collect();
            let mut total = vec![BigRational::zero(); flow.s];
            for &fi in &edges {
                for (t, w) in total.iter_mut().zip(&flow.edges[fi].weight) {
                    *t += w;
                }
            }
            DriftCycle {
                nodes,
                edges,
                total: total.iter().map(|t| t.to_string()).collect(),
            }
        };
        if a == b {
            return Some(finish(vec![ei]));
        }
        // path from b back to a inside the class closes the cycle
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut queue = VecDeque::new();
        queue.push_back(b);
        'search: while let Some(u) = queue.pop_front() {
            for &fi in &eadj[u] {
                let t = idx[flow.edges[fi].to.as_str()];
                if comp[t] != comp[a] || pred[t].is_some() || t == b {
                    continue;
                }
                pred[t] = Some(fi);
                if t == a {
                    break 'search;
                }
                queue.push_back(t);
            }
        }
        pred[a]?;
        let mut back = Vec::new();
        let mut v = a;
        while v != b {
            let fi = pred[v].expect("path found");
            back.push(fi);
            v = idx[flow.edges[fi].from.as_str()];
        }
        back.reverse();
        let mut edges = vec![ei];
        edges.extend(back);
        return Some(finish(edges));
    }
    None
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub enum Verdict {
    GradientLike,
    NotGradientLike,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub enum Witness {
    /// Strictly decreasing along every edge between distinct nodes.
    Potential(BTreeMap<String, i64>),
    /// A directed cycle with nonzero total weight.
    Drift(DriftCycle),
    /// A directed cycle balancing to zero in every component: recurrence
    /// the cocycle cannot see.
    PeriodicOrbit(DriftCycle),
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub witness: Witness,
    /// Whether the carrying precondition was certified, and at which
    /// parameters (rho, lambda).
    pub certified: bool,
    pub certificate: Option<(String, String)>,
    pub caveat: Option<String>,
}

/// Attempts to certify the carrying precondition automatically: rho is the
/// smaller of the minimum connecting weight and the minimum outside cycle
/// mean, lambda the Morse oscillation divided by rho.
pub fn auto_certificate(flow: &CombinatorialFlow) -> Option<(BigRational, BigRational)> {
    for fixed in &flow.fixed {
        flow.in_morse_set(fixed)?;
    }
    // fall through: restrictions and bounds decide the certificate
    let restriction = morse_restriction(flow);
    if !restriction.coboundary_ok {
        return None;
    }
    let (min_connect, negative_cycle) = min_connecting_weight(flow);
    if negative_cycle {
        return None;
    }
    let mcm = min_outside_cycle_mean(flow);
    let rho = match (min_connect, mcm) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        // no constraints at all: any rho beyond the oscillation works
        (None, None) => {
            &restriction.oscillation * BigRational::from(BigInt::from(2)) + BigRational::one()
        }
    };
    if !rho.is_positive() || restriction.oscillation >= rho {
        return None;
    }
    let lambda = &restriction.oscillation / &rho;
    Some((rho, lambda))
}

/// Gradient-like classification. A drift cycle decides NotGradientLike; an
/// acyclic graph is GradientLike with a longest-path potential; a cycle
/// balancing to zero is recurrence the cocycle cannot see and yields
/// NotGradientLike with a periodic-orbit witness.
pub fn classify_gradient_like(flow: &CombinatorialFlow) -> Result<Classification> {
    let certificate = auto_certificate(flow);
    let certified = certificate.is_some();
    let caveat = (!certified).then(|| {
        "carrying precondition could not be certified; verdict is acyclicity-based".to_string()
    });
    let certificate = certificate.map(|(r, l)| (r.to_string(), l.to_string()));

    if let Some(drift) = find_drift_cycle(flow) {
        return Ok(Classification {
            verdict: Verdict::NotGradientLike,
            witness: Witness::Drift(drift),
            certified,
            certificate,
            caveat,
        });
    }
    if let Some(orbit) = some_cycle(flow) {
        return Ok(Classification {
            verdict: Verdict::NotGradientLike,
            witness: Witness::PeriodicOrbit(orbit),
            certified,
            certificate,
            caveat,
        });
    }
    let potential = lyapunov_potential(flow)?;
    Ok(Classification {
        verdict: Verdict::GradientLike,
        witness: Witness::Potential(potential),
        certified,
        certificate,
        caveat,
    })
}

/// Longest-path rank potential on an acyclic flow: g strictly decreases
/// along every edge between distinct nodes. A cycle is returned as the
/// error witness.
pub fn lyapunov_potential(flow: &CombinatorialFlow) -> Result<BTreeMap<String, i64>> {
    if let Some(cycle) = some_cycle(flow) {
        return Err(Error::Precondition(format!(
            "flow is not acyclic: cycle through {:?} with total weight {:?}",
            cycle.nodes, cycle.total
        )));
    }
    let idx = flow.node_index();
    let n = flow.nodes.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in &flow.edges {
        if e.from != e.to {
            adj[idx[e.from.as_str()]].push(idx[e.to.as_str()]);
        }
    }
    fn longest(v: usize, adj: &[Vec<usize>], rank: &mut Vec<Option<i64>>) -> i64 {
        if let Some(r) = rank[v] {
            return r;
        }
        let r = adj[v]
            .iter()
            .map(|&w| longest(w, adj, rank) + 1)
            .max()
            .unwrap_or(0);
        rank[v] = Some(r);
        r
    }
    let mut rank: Vec<Option<i64>> = vec![None; n];
    let mut out = BTreeMap::new();
    for (i, node) in flow.nodes.iter().enumerate() {
        out.insert(node.clone(), longest(i, &adj, &mut rank));
    }
    Ok(out)
}
