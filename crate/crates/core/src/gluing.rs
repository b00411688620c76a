//! Fundamental-domain gluing data and the deformation complexes built from
//! it.
//!
//! A gluing datum is a cell complex `X0` (the cut-open fundamental domain)
//! together with, per cut i: cross-sections N_i^- and N_i^+ identified by a
//! cellular isomorphism l_i, a collar R_i that is a retracted copy of N_i^-
//! (inclusion i_{i,+}, isomorphism i_{i,-} onto N_i^-), and the cylinder
//! cells joining R_i to N_i^+. Excising the cylinders stage by stage yields
//! the stage complexes N_{0,k}; the deformation complex D^k rebuilds X0 from
//! collar pieces and N_{0,k} through the theta/beta/beta' decomposition
//! maps, with a block lower-triangular differential.
//!
//! The twisted variant works over Z[t_1,...,t_s]: the basis drops every
//! N^+ cell and each boundary reference to one is rewritten as t_i times its
//! l_i-preimage, iterated through corners. Evaluating at a nonzero point
//! gives the glued space's twisted homology; evaluating at t = 0 gives the
//! positive complex whose ranks must agree with the relative homology of
//! (X_{0,s}, union of collars).

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, BigRational, Zero};
use serde::{Deserialize, Serialize};

use crate::cocycle::CellularCocycle;
use crate::complex::{Cell, CellComplex};
use crate::error::{Error, Result};
use crate::homology::{homology_of_matrices, relative_homology, Coefficients};
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::matrix::IntMatrix;
use crate::monodromy::MonodromyRep;
use crate::twisted;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CylinderPair {
    pub base: String,
    pub cell: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CutData {
    #[serde(rename = "N_minus")]
    pub n_minus: Vec<String>,
    #[serde(rename = "N_plus")]
    pub n_plus: Vec<String>,
    pub l: BTreeMap<String, String>,
    #[serde(rename = "R")]
    pub r: Vec<String>,
    pub i_plus: BTreeMap<String, String>,
    pub i_minus: BTreeMap<String, String>,
    pub cylinders: Vec<CylinderPair>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GluingData {
    pub domain: CellComplex,
    pub cuts: Vec<CutData>,
}

/// Orientation convention for the cylinder factor. `Standard` orients a
/// cylinder as base x I with the interval last; `Flipped` negates theta,
/// beta, and f consistently, which must leave every homology rank unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Standard,
    Flipped,
}

impl Orientation {
    fn sign(self) -> i64 {
        match self {
            Orientation::Standard => 1,
            Orientation::Flipped => -1,
        }
    }
}

pub type Chain = BTreeMap<String, i64>;

/// A chain as an explicit (cell, coefficient) list.
pub type ChainTerms = Vec<(String, i64)>;

fn add_term(chain: &mut Chain, cell: &str, coeff: i64) {
    if coeff == 0 {
        return;
    }
    let e = chain.entry(cell.to_string()).or_insert(0);
    *e += coeff;
    if *e == 0 {
        chain.remove(cell);
    }
}

fn chain_of(cell: &str, coeff: i64) -> Chain {
    let mut c = Chain::new();
    add_term(&mut c, cell, coeff);
    c
}

fn chain_add(into: &mut Chain, other: &Chain) {
    for (cell, k) in other {
        add_term(into, cell, *k);
    }
}

fn chain_scale(chain: &Chain, by: i64) -> Chain {
    if by == 0 {
        return Chain::new();
    }
    chain.iter().map(|(c, k)| (c.clone(), k * by)).collect()
}

impl GluingData {
    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("gluing serialization")
    }

    /// Number of cuts s.
    pub fn rank(&self) -> usize {
        self.cuts.len()
    }

    pub fn validate(&self) -> Result<()> {
        Engine::new(self, Orientation::Standard).map(|_| ())
    }
}

/// Validated stage structure and the decomposition maps.
struct Engine<'a> {
    g: &'a GluingData,
    sign: i64,
    /// m[k] = cells of the stage complex N_{0,k}; m[0] is all of X0.
    m: Vec<BTreeSet<String>>,
    /// bases[k-1] = B_k, the collar cells whose cylinders are excised at
    /// stage k, ascending id.
    bases: Vec<Vec<String>>,
    cyl: Vec<BTreeMap<String, String>>,
    cyl_inv: Vec<BTreeMap<String, String>>,
    n_plus_sets: Vec<BTreeSet<String>>,
    n_plus_all: BTreeSet<String>,
    l_inv: Vec<BTreeMap<String, String>>,
}

impl<'a> Engine<'a> {
    fn new(g: &'a GluingData, orientation: Orientation) -> Result<Self> {
        let s = g.cuts.len();
        if s == 0 {
            return Err(Error::InvalidGluing("at least one cut is required".into()));
        }
        let domain = &g.domain;
        let mut n_plus_sets = Vec::new();
        let mut l_inv = Vec::new();
        let mut cyl = Vec::new();
        let mut cyl_inv = Vec::new();
        for (idx, cut) in g.cuts.iter().enumerate() {
            let i = idx + 1;
            let nm: BTreeSet<String> = cut.n_minus.iter().cloned().collect();
            let np: BTreeSet<String> = cut.n_plus.iter().cloned().collect();
            let rr: BTreeSet<String> = cut.r.iter().cloned().collect();
            for set in [&nm, &np, &rr] {
                domain
                    .check_subcomplex(set)
                    .map_err(|e| Error::InvalidGluing(format!("cut {i}: {e}")))?;
            }
            if !nm.is_disjoint(&np) {
                return Err(Error::InvalidGluing(format!(
                    "cut {i}: N^- and N^+ intersect"
                )));
            }
            check_cellular_iso(domain, &cut.l, &nm, &np, &format!("cut {i} l"))?;
            check_cellular_iso(domain, &cut.i_minus, &rr, &nm, &format!("cut {i} i_minus"))?;
            for c in &rr {
                match cut.i_plus.get(c) {
                    Some(target) if target == c => {}
                    _ => {
                        return Err(Error::InvalidGluing(format!(
                        "cut {i}: i_plus must be the inclusion (identity on ids), broken at `{c}`"
                    )))
                    }
                }
            }
            let mut fwd = BTreeMap::new();
            let mut bwd = BTreeMap::new();
            for p in &cut.cylinders {
                let base = domain.cell(&p.base)?;
                let cell = domain.cell(&p.cell)?;
                if !rr.contains(&p.base) {
                    return Err(Error::InvalidGluing(format!(
                        "cut {i}: cylinder base `{}` is not in R",
                        p.base
                    )));
                }
                if cell.dim != base.dim + 1 {
                    return Err(Error::InvalidGluing(format!(
                        "cut {i}: cylinder `{}` over `{}` has dimension {}, expected {}",
                        p.cell,
                        p.base,
                        cell.dim,
                        base.dim + 1
                    )));
                }
                if fwd.insert(p.base.clone(), p.cell.clone()).is_some()
                    || bwd.insert(p.cell.clone(), p.base.clone()).is_some()
                {
                    return Err(Error::InvalidGluing(format!(
                        "cut {i}: duplicate cylinder entry for `{}`/`{}`",
                        p.base, p.cell
                    )));
                }
            }
            n_plus_sets.push(np);
            l_inv.push(cut.l.iter().map(|(a, b)| (b.clone(), a.clone())).collect());
            cyl.push(fwd);
            cyl_inv.push(bwd);
        }

        // derive the stage complexes by excision
        let mut m: Vec<BTreeSet<String>> =
            vec![domain.cells.iter().map(|c| c.id.clone()).collect()];
        let mut bases = Vec::new();
        for k in 1..=s {
            let mut next = m[k - 1].clone();
            for cell in cyl[k - 1].values() {
                if !next.remove(cell) {
                    return Err(Error::InvalidGluing(format!(
                        "cut {k}: cylinder cell `{cell}` was already excised or does not exist"
                    )));
                }
            }
            domain.check_subcomplex(&next).map_err(|e| {
                Error::InvalidGluing(format!("stage complex N_0,{k} is not boundary-closed: {e}"))
            })?;
            let mut expected: Vec<String> = g.cuts[k - 1]
                .r
                .iter()
                .filter(|c| next.contains(*c))
                .cloned()
                .collect();
            expected.sort();
            let mut got: Vec<String> = cyl[k - 1].keys().cloned().collect();
            got.sort();
            if got != expected {
                return Err(Error::InvalidGluing(format!(
                    "cut {k}: cylinder bases {got:?} do not match R ∩ N_0,{k} = {expected:?}"
                )));
            }
            // collar bases must be boundary-closed among themselves
            let base_set: BTreeSet<&String> = got.iter().collect();
            for b in &got {
                for (face, _) in domain.cell(b)?.collapsed_boundary() {
                    if !base_set.contains(&face) {
                        return Err(Error::InvalidGluing(format!(
                            "cut {k}: base set is not boundary-closed at `{b}` -> `{face}`"
                        )));
                    }
                }
            }
            bases.push(got);
            m.push(next);
        }

        let n_plus_all: BTreeSet<String> =
            n_plus_sets.iter().flat_map(|s| s.iter().cloned()).collect();

        let engine = Engine {
            g,
            sign: orientation.sign(),
            m,
            bases,
            cyl,
            cyl_inv,
            n_plus_sets,
            n_plus_all,
            l_inv,
        };

        // f_k must land in the stage complex
        for k in 1..=s {
            for b in &engine.bases[k - 1] {
                for cell in engine.f(k, b)?.keys() {
                    if !engine.m[k].contains(cell) {
                        return Err(Error::InvalidGluing(format!(
                            "cut {k}: f image of `{b}` leaves N_0,{k} at `{cell}`"
                        )));
                    }
                }
            }
        }
        Ok(engine)
    }

    fn rank(&self) -> usize {
        self.g.cuts.len()
    }

    fn dim_of(&self, cell: &str) -> usize {
        self.g.domain.cell(cell).map(|c| c.dim).unwrap_or(0)
    }

    fn d(&self, cell: &str) -> Chain {
        self.g
            .domain
            .cell(cell)
            .map(|c| c.collapsed_boundary().into_iter().collect())
            .unwrap_or_default()
    }

    fn d_chain(&self, chain: &Chain) -> Chain {
        let mut out = Chain::new();
        for (cell, k) in chain {
            chain_add(&mut out, &chain_scale(&self.d(cell), *k));
        }
        out
    }

    /// theta_k on a collar base of dimension q-1: (-1)^{q-1} times its
    /// cylinder cell.
    fn theta(&self, k: usize, base: &str) -> Result<Chain> {
        let cell = self.cyl[k - 1].get(base).ok_or_else(|| {
            Error::InvalidGluing(format!("`{base}` is not a stage-{k} cylinder base"))
        })?;
        let sign = if self.dim_of(base).is_multiple_of(2) {
            1
        } else {
            -1
        };
        Ok(chain_of(cell, sign * self.sign))
    }

    fn theta_chain(&self, k: usize, chain: &Chain) -> Result<Chain> {
        let mut out = Chain::new();
        for (cell, c) in chain {
            chain_add(&mut out, &chain_scale(&self.theta(k, cell)?, *c));
        }
        Ok(out)
    }

    /// beta_k collapses a stage-k cylinder cell to its base, zero otherwise.
    fn beta(&self, k: usize, cell: &str) -> Chain {
        match self.cyl_inv[k - 1].get(cell) {
            Some(base) => {
                let sign = if self.dim_of(base).is_multiple_of(2) {
                    1
                } else {
                    -1
                };
                chain_of(base, sign * self.sign)
            }
            None => Chain::new(),
        }
    }

    fn beta_chain(&self, k: usize, chain: &Chain) -> Chain {
        let mut out = Chain::new();
        for (cell, c) in chain {
            chain_add(&mut out, &chain_scale(&self.beta(k, cell), *c));
        }
        out
    }

    /// beta'_k kills stage-k cylinder cells and keeps everything else.
    fn beta_prime_chain(&self, k: usize, chain: &Chain) -> Chain {
        chain
            .iter()
            .filter(|(cell, _)| self.m[k].contains(*cell))
            .map(|(cell, c)| (cell.clone(), *c))
            .collect()
    }

    /// f_k = l_k ∘ (i_{k,-}) - i_{k,+} on collar bases.
    fn f(&self, k: usize, base: &str) -> Result<Chain> {
        let cut = &self.g.cuts[k - 1];
        let minus = cut.i_minus.get(base).ok_or_else(|| {
            Error::InvalidGluing(format!("cut {k}: i_minus undefined on `{base}`"))
        })?;
        let plus_side = cut
            .l
            .get(minus)
            .ok_or_else(|| Error::InvalidGluing(format!("cut {k}: l undefined on `{minus}`")))?;
        let mut out = chain_of(plus_side, self.sign);
        add_term(&mut out, base, -self.sign);
        Ok(out)
    }

    fn f_chain(&self, k: usize, chain: &Chain) -> Result<Chain> {
        let mut out = Chain::new();
        for (cell, c) in chain {
            chain_add(&mut out, &chain_scale(&self.f(k, cell)?, *c));
        }
        Ok(out)
    }

    /// The stage complex N_{0,k} as a standalone complex.
    fn stage_complex(&self, k: usize) -> Result<CellComplex> {
        self.g
            .domain
            .subcomplex(&format!("{}-stage-{k}", self.g.domain.name), &self.m[k])
    }

    /// Rewrites an N^+ cell as t_i times its l_i-preimage until it leaves
    /// every N^+.
    fn reduce(&self, cell: &str) -> Result<(Vec<i64>, String)> {
        let s = self.rank();
        let mut expo = vec![0i64; s];
        let mut current = cell.to_string();
        let mut steps = 0usize;
        loop {
            let Some(i) = (0..s).find(|&i| self.n_plus_sets[i].contains(&current)) else {
                return Ok((expo, current));
            };
            current = self.l_inv[i]
                .get(&current)
                .ok_or_else(|| {
                    Error::InvalidGluing(format!("l_{} has no preimage for `{current}`", i + 1))
                })?
                .clone();
            expo[i] += 1;
            steps += 1;
            if steps > s * s + s + 4 {
                return Err(Error::InvalidGluing(format!(
                    "reduction of `{cell}` does not terminate; cross-section identifications cycle"
                )));
            }
        }
    }
}

fn check_cellular_iso(
    domain: &CellComplex,
    map: &BTreeMap<String, String>,
    from: &BTreeSet<String>,
    to: &BTreeSet<String>,
    what: &str,
) -> Result<()> {
    if map.len() != from.len() || from.len() != to.len() {
        return Err(Error::InvalidGluing(format!(
            "{what}: not a bijection (size mismatch)"
        )));
    }
    let mut seen = BTreeSet::new();
    for (a, b) in map {
        if !from.contains(a) || !to.contains(b) || !seen.insert(b.clone()) {
            return Err(Error::InvalidGluing(format!(
                "{what}: not a bijection at `{a}`"
            )));
        }
        let ca = domain.cell(a)?;
        let cb = domain.cell(b)?;
        if ca.dim != cb.dim {
            return Err(Error::InvalidGluing(format!(
                "{what}: `{a}` -> `{b}` changes dimension"
            )));
        }
        // boundary-commuting with matching coefficients
        let mut mapped = Chain::new();
        for (face, k) in ca.collapsed_boundary() {
            let mf = map.get(&face).ok_or_else(|| {
                Error::InvalidGluing(format!("{what}: boundary cell `{face}` has no image"))
            })?;
            add_term(&mut mapped, mf, k);
        }
        let expect: Chain = cb.collapsed_boundary().into_iter().collect();
        if mapped != expect {
            return Err(Error::InvalidGluing(format!(
                "{what}: not cellular at `{a}`"
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdentityViolation {
    pub identity: u8,
    pub cell: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub stage: usize,
    /// Cylinder orientation convention the identities were checked under;
    /// the globally flipped convention satisfies them with f negated.
    pub orientation: String,
    pub cells_checked: usize,
    pub violations: Vec<IdentityViolation>,
    pub passed: bool,
}

/// Checks the five chain-map identities of the stage-k decomposition on
/// every basis cell:
///  (1) d∘theta + theta∘d = f                on collar bases
///  (2) beta∘d + d∘beta = 0                  on stage-(k-1) cells
///  (3) beta'∘d - d∘beta' = f∘beta           on stage-(k-1) cells
///  (4) d∘(theta,1) = (theta,1)∘d_cone       on cone basis elements
///  (5) (beta;beta')∘d = d_cone∘(beta;beta') on stage-(k-1) cells
pub fn verify_gluing_identities(g: &GluingData, k: usize) -> Result<IdentityReport> {
    verify_gluing_identities_oriented(g, k, Orientation::Standard)
}

pub fn verify_gluing_identities_oriented(
    g: &GluingData,
    k: usize,
    orientation: Orientation,
) -> Result<IdentityReport> {
    let engine = Engine::new(g, orientation)?;
    if k == 0 || k > engine.rank() {
        return Err(Error::StageOutOfRange(k, engine.rank()));
    }
    let mut violations = Vec::new();
    let mut checked = 0usize;

    for base in &engine.bases[k - 1] {
        checked += 1;
        // (1)
        let mut lhs = engine.d_chain(&engine.theta(k, base)?);
        chain_add(&mut lhs, &engine.theta_chain(k, &engine.d(base))?);
        if lhs != engine.f(k, base)? {
            violations.push(IdentityViolation {
                identity: 1,
                cell: base.clone(),
            });
        }
        // (4) on the collar part of the cone: d(theta e) = theta(-d e) + f e
        let mut rhs = engine.theta_chain(k, &chain_scale(&engine.d(base), -1))?;
        chain_add(&mut rhs, &engine.f(k, base)?);
        if engine.d_chain(&engine.theta(k, base)?) != rhs {
            violations.push(IdentityViolation {
                identity: 4,
                cell: base.clone(),
            });
        }
    }

    for cell in &engine.m[k - 1] {
        checked += 1;
        let x = chain_of(cell, 1);
        let dx = engine.d_chain(&x);
        // (2)
        let mut lhs = engine.beta_chain(k, &dx);
        chain_add(&mut lhs, &engine.d_chain(&engine.beta_chain(k, &x)));
        if !lhs.is_empty() {
            violations.push(IdentityViolation {
                identity: 2,
                cell: cell.clone(),
            });
        }
        // (3)
        let mut lhs = engine.beta_prime_chain(k, &dx);
        chain_add(
            &mut lhs,
            &chain_scale(&engine.d_chain(&engine.beta_prime_chain(k, &x)), -1),
        );
        if lhs != engine.f_chain(k, &engine.beta_chain(k, &x))? {
            violations.push(IdentityViolation {
                identity: 3,
                cell: cell.clone(),
            });
        }
        // (5): componentwise (beta∘d = -d∘beta, beta'∘d = f∘beta + d∘beta')
        let beta_dx = engine.beta_chain(k, &dx);
        let cone_first = chain_scale(&engine.d_chain(&engine.beta_chain(k, &x)), -1);
        let mut cone_second = engine.f_chain(k, &engine.beta_chain(k, &x))?;
        chain_add(
            &mut cone_second,
            &engine.d_chain(&engine.beta_prime_chain(k, &x)),
        );
        if beta_dx != cone_first || engine.beta_prime_chain(k, &dx) != cone_second {
            violations.push(IdentityViolation {
                identity: 5,
                cell: cell.clone(),
            });
        }
    }

    Ok(IdentityReport {
        stage: k,
        orientation: format!("{orientation:?}"),
        cells_checked: checked,
        passed: violations.is_empty(),
        violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeReport {
    pub stage: usize,
    pub composites_are_identity: bool,
    pub chain_maps_commute: bool,
    pub cone_ranks: Vec<usize>,
    pub target_ranks: Vec<usize>,
    pub ranks_agree: bool,
}

/// Cone check at stage k: (theta,1) and (beta;beta') must be mutually
/// inverse chain isomorphisms between cone(f_k) and the stage-(k-1)
/// complex, and their homology ranks must agree.
pub fn cone_isomorphism_check(g: &GluingData, k: usize) -> Result<ConeReport> {
    let engine = Engine::new(g, Orientation::Standard)?;
    if k == 0 || k > engine.rank() {
        return Err(Error::StageOutOfRange(k, engine.rank()));
    }
    let mut composites = true;

    // (theta,1)(beta;beta') = id on the stage-(k-1) complex
    for cell in &engine.m[k - 1] {
        let x = chain_of(cell, 1);
        let mut back = engine.theta_chain(k, &engine.beta_chain(k, &x))?;
        chain_add(&mut back, &engine.beta_prime_chain(k, &x));
        if back != x {
            composites = false;
        }
    }
    // (beta;beta')(theta,1) = id on the cone
    for base in &engine.bases[k - 1] {
        let th = engine.theta(k, base)?;
        if engine.beta_chain(k, &th) != chain_of(base, 1)
            || !engine.beta_prime_chain(k, &th).is_empty()
        {
            composites = false;
        }
    }
    for cell in &engine.m[k] {
        let x = chain_of(cell, 1);
        if !engine.beta_chain(k, &x).is_empty() || engine.beta_prime_chain(k, &x) != x {
            composites = false;
        }
    }

    let identities = verify_gluing_identities(g, k)?;
    let chain_maps_commute = identities
        .violations
        .iter()
        .all(|v| v.identity != 4 && v.identity != 5);

    let cone = assemble_integer_complex(&engine, k, &[k])?;
    let cone_ranks = cone.homology_ranks(Coefficients::Q)?;
    let target = engine.stage_complex(k - 1)?;
    let target_ranks = crate::homology::homology(&target, Coefficients::Q)?.ranks;
    let ranks_agree = padded_eq(&cone_ranks, &target_ranks);
    Ok(ConeReport {
        stage: k,
        composites_are_identity: composites,
        chain_maps_commute,
        cone_ranks,
        target_ranks,
        ranks_agree,
    })
}

fn padded_eq(a: &[usize], b: &[usize]) -> bool {
    let n = a.len().max(b.len());
    (0..n).all(|i| a.get(i).copied().unwrap_or(0) == b.get(i).copied().unwrap_or(0))
}

/// Basis label inside a deformation complex: collar summand 1..=k holding a
/// base cell, or 0 for the stage-complex summand.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BasisLabel {
    pub summand: usize,
    pub cell: String,
}

#[derive(Clone, Debug)]
pub struct DeformationComplex {
    pub k: usize,
    pub basis: Vec<Vec<BasisLabel>>,
    /// matrices[q]: D_q -> D_{q-1}; index 0 is the empty map.
    pub matrices: Vec<IntMatrix>,
}

impl DeformationComplex {
    pub fn homology_ranks(&self, coefficients: Coefficients) -> Result<Vec<usize>> {
        if let Coefficients::Zp(p) = coefficients {
            if !crate::matrix::is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        let counts: Vec<usize> = self.basis.iter().map(|b| b.len()).collect();
        Ok(homology_of_matrices(&self.matrices, counts, coefficients).ranks)
    }
}

struct AssembledInteger {
    basis: Vec<Vec<BasisLabel>>,
    matrices: Vec<IntMatrix>,
}

impl AssembledInteger {
    fn homology_ranks(&self, coefficients: Coefficients) -> Result<Vec<usize>> {
        let counts: Vec<usize> = self.basis.iter().map(|b| b.len()).collect();
        Ok(homology_of_matrices(&self.matrices, counts, coefficients).ranks)
    }
}

/// Shared block assembly over the integers. `summands` lists the collar
/// stages contributing C_{q-1} pieces in order; the last summand is the
/// stage complex N_{0,top}.
fn assemble_integer_complex(
    engine: &Engine,
    top: usize,
    summands: &[usize],
) -> Result<AssembledInteger> {
    let dim = engine.g.domain.dim().unwrap_or(0);
    let mut basis: Vec<Vec<BasisLabel>> = Vec::new();
    for q in 0..=dim {
        let mut layer = Vec::new();
        if q > 0 {
            for &n in summands {
                for cell in &engine.bases[n - 1] {
                    if engine.dim_of(cell) == q - 1 {
                        layer.push(BasisLabel {
                            summand: n,
                            cell: cell.clone(),
                        });
                    }
                }
            }
        }
        for cell in &engine.m[top] {
            if engine.dim_of(cell) == q {
                layer.push(BasisLabel {
                    summand: 0,
                    cell: cell.clone(),
                });
            }
        }
        basis.push(layer);
    }

    let index: Vec<BTreeMap<(usize, &str), usize>> = basis
        .iter()
        .map(|layer| {
            layer
                .iter()
                .enumerate()
                .map(|(i, l)| ((l.summand, l.cell.as_str()), i))
                .collect()
        })
        .collect();

    let mut matrices = Vec::new();
    for q in 0..=dim {
        let rows = if q == 0 { 0 } else { basis[q - 1].len() };
        let mut m = IntMatrix::zeros(rows, basis[q].len());
        if q == 0 {
            matrices.push(m);
            continue;
        }
        let write = |m: &mut IntMatrix, summand: usize, chain: &Chain, col: usize| -> Result<()> {
            for (cell, c) in chain {
                let &row = index[q - 1].get(&(summand, cell.as_str())).ok_or_else(|| {
                    Error::Internal(format!(
                        "block image `{cell}` missing from summand {summand} in degree {}",
                        q - 1
                    ))
                })?;
                m.add_to(row, col, &BigInt::from(*c));
            }
            Ok(())
        };
        for (col, label) in basis[q].iter().enumerate() {
            if label.summand == 0 {
                write(&mut m, 0, &engine.d(&label.cell), col)?;
                continue;
            }
            let n = label.summand;
            // diagonal: -d within the collar bases
            write(&mut m, n, &chain_scale(&engine.d(&label.cell), -1), col)?;
            // descending pipeline through the later stages
            let mut chain = engine.f(n, &label.cell)?;
            for &j in summands.iter().filter(|&&j| j > n) {
                write(&mut m, j, &engine.beta_chain(j, &chain), col)?;
                chain = engine.beta_prime_chain(j, &chain);
            }
            write(&mut m, 0, &chain, col)?;
        }
        matrices.push(m);
    }
    Ok(AssembledInteger { basis, matrices })
}

/// Builds the stage-k deformation complex with its block lower-triangular
/// differential and verifies d∘d = 0 exactly. A failed verification is an
/// internal inconsistency of the gluing data, never silently returned.
pub fn build_deformation_complex(g: &GluingData, k: usize) -> Result<DeformationComplex> {
    build_deformation_complex_oriented(g, k, Orientation::Standard)
}

pub fn build_deformation_complex_oriented(
    g: &GluingData,
    k: usize,
    orientation: Orientation,
) -> Result<DeformationComplex> {
    let engine = Engine::new(g, orientation)?;
    if k == 0 || k > engine.rank() {
        return Err(Error::StageOutOfRange(k, engine.rank()));
    }
    let summands: Vec<usize> = (1..=k).collect();
    let assembled = assemble_integer_complex(&engine, k, &summands)?;
    for q in 1..assembled.matrices.len() {
        if !assembled.matrices[q - 1]
            .mul(&assembled.matrices[q])
            .is_zero()
        {
            return Err(Error::Internal(format!(
                "deformation differential does not square to zero between degrees {} and {q}",
                q - 1
            )));
        }
    }
    Ok(DeformationComplex {
        k,
        basis: assembled.basis,
        matrices: assembled.matrices,
    })
}

/// beta_k / beta'_k split of a stage-(k-1) chain, with the exact
/// (theta_k, 1) reconstruction applied as a consistency check.
pub fn decompose_chain(
    g: &GluingData,
    k: usize,
    chain: &[(String, i64)],
) -> Result<(ChainTerms, ChainTerms)> {
    let engine = Engine::new(g, Orientation::Standard)?;
    if k == 0 || k > engine.rank() {
        return Err(Error::StageOutOfRange(k, engine.rank()));
    }
    let mut c = Chain::new();
    for (cell, coeff) in chain {
        if !engine.m[k - 1].contains(cell) {
            return Err(Error::ChainOutsideStage {
                cell: cell.clone(),
                stage: k - 1,
            });
        }
        add_term(&mut c, cell, *coeff);
    }
    let collar = engine.beta_chain(k, &c);
    let rest = engine.beta_prime_chain(k, &c);
    let mut rebuilt = engine.theta_chain(k, &collar)?;
    chain_add(&mut rebuilt, &rest);
    if rebuilt != c {
        return Err(Error::Internal(
            "decomposition does not reconstruct the chain; gluing data is inconsistent".into(),
        ));
    }
    Ok((collar.into_iter().collect(), rest.into_iter().collect()))
}

/// The fully excised deformation complex with Laurent entries: the basis
/// omits every N^+ cell and boundary references to them are rewritten as
/// t_i times their l_i-preimages. Entries only involve nonnegative powers.
pub struct TwistedGluingComplex {
    pub s: usize,
    pub basis: Vec<Vec<BasisLabel>>,
    pub matrices: Vec<LaurentMatrix>,
}

impl TwistedGluingComplex {
    /// Homology ranks of the evaluation at a nonzero rational point.
    pub fn evaluated_ranks(&self, at: &[BigRational]) -> Result<Vec<usize>> {
        if at.len() != self.s {
            return Err(Error::EvaluationRankMismatch {
                got: at.len(),
                expected: self.s,
            });
        }
        if let Some(i) = at.iter().position(|x| x.is_zero()) {
            return Err(Error::ZeroEvaluationPoint(i));
        }
        let ranks_d: Vec<usize> = self
            .matrices
            .iter()
            .map(|m| m.eval(at).expect("nonzero point").rank())
            .collect();
        Ok((0..self.basis.len())
            .map(|q| self.basis[q].len() - ranks_d[q] - ranks_d.get(q + 1).copied().unwrap_or(0))
            .collect())
    }
}

pub fn build_twisted_gluing_complex(g: &GluingData) -> Result<TwistedGluingComplex> {
    let engine = Engine::new(g, Orientation::Standard)?;
    let s = engine.rank();
    let dim = engine.g.domain.dim().unwrap_or(0);

    let mut basis: Vec<Vec<BasisLabel>> = Vec::new();
    for q in 0..=dim {
        let mut layer = Vec::new();
        if q > 0 {
            for n in 1..=s {
                for cell in &engine.bases[n - 1] {
                    if engine.dim_of(cell) == q - 1 && !engine.n_plus_all.contains(cell) {
                        layer.push(BasisLabel {
                            summand: n,
                            cell: cell.clone(),
                        });
                    }
                }
            }
        }
        for cell in &engine.m[s] {
            if engine.dim_of(cell) == q && !engine.n_plus_all.contains(cell) {
                layer.push(BasisLabel {
                    summand: 0,
                    cell: cell.clone(),
                });
            }
        }
        basis.push(layer);
    }
    let index: Vec<BTreeMap<(usize, &str), usize>> = basis
        .iter()
        .map(|layer| {
            layer
                .iter()
                .enumerate()
                .map(|(i, l)| ((l.summand, l.cell.as_str()), i))
                .collect()
        })
        .collect();

    let mut matrices = Vec::new();
    for q in 0..=dim {
        let rows = if q == 0 { 0 } else { basis[q - 1].len() };
        let mut m = LaurentMatrix::zeros(s, rows, basis[q].len());
        if q == 0 {
            matrices.push(m);
            continue;
        }
        let write =
            |m: &mut LaurentMatrix, summand: usize, chain: &Chain, col: usize| -> Result<()> {
                for (cell, c) in chain {
                    let (expo, reduced) = engine.reduce(cell)?;
                    let &row = index[q - 1]
                        .get(&(summand, reduced.as_str()))
                        .ok_or_else(|| {
                            Error::InvalidGluing(format!(
                                "reduced cell `{reduced}` missing from summand {summand}; \
                             identifications are not deck-equivariant"
                            ))
                        })?;
                    let mono = LaurentPoly::monomial(s, &expo, BigInt::from(*c));
                    m.add_to(row, col, &mono);
                }
                Ok(())
            };
        for (col, label) in basis[q].iter().enumerate() {
            if label.summand == 0 {
                write(&mut m, 0, &engine.d(&label.cell), col)?;
                continue;
            }
            let n = label.summand;
            write(&mut m, n, &chain_scale(&engine.d(&label.cell), -1), col)?;
            let mut chain = engine.f(n, &label.cell)?;
            for j in n + 1..=s {
                write(&mut m, j, &engine.beta_chain(j, &chain), col)?;
                chain = engine.beta_prime_chain(j, &chain);
            }
            write(&mut m, 0, &chain, col)?;
        }
        matrices.push(m);
    }

    for q in 1..matrices.len() {
        if !matrices[q - 1].mul(&matrices[q]).is_zero() {
            return Err(Error::Internal(format!(
                "twisted gluing differential does not square to zero between degrees {} and {q}",
                q - 1
            )));
        }
    }
    Ok(TwistedGluingComplex { s, basis, matrices })
}

/// The t = 0 complex over a field: N^+ cells are annihilated and the
/// surviving blocks come from the negative inclusion terms alone.
pub struct PositiveComplex {
    pub basis: Vec<Vec<BasisLabel>>,
    pub matrices: Vec<IntMatrix>,
    pub fiber_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroEvaluationReport {
    pub coefficients: Coefficients,
    pub positive_ranks: Vec<usize>,
    pub relative_ranks: Vec<usize>,
    pub agree: bool,
}

/// Evaluates the twisted gluing complex at t = 0 over Z/p (or Q) and checks
/// the ranks against the independently computed relative homology of
/// (X_{0,s}, union of collars). Disagreement is a hard failure.
pub fn zero_evaluation_complex(
    g: &GluingData,
    coefficients: Coefficients,
    rep: Option<&MonodromyRep>,
) -> Result<(PositiveComplex, ZeroEvaluationReport)> {
    if let Coefficients::Zp(p) = coefficients {
        if !crate::matrix::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
    }
    let fiber_rank = match rep {
        None => 1,
        Some(r) => {
            if !r.is_trivial() {
                return Err(Error::InvalidParameter(
                    "the zero-evaluation complex supports local systems pulled back from the \
                     glued space, which trivialize over the fundamental domain; pass a trivial \
                     monodromy (identity matrices) of the desired rank"
                        .into(),
                ));
            }
            r.k
        }
    };
    let engine = Engine::new(g, Orientation::Standard)?;
    let s = engine.rank();
    let twisted = build_twisted_gluing_complex(g)?;
    let matrices: Vec<IntMatrix> = twisted
        .matrices
        .iter()
        .map(|m| m.eval_zero())
        .collect::<Result<_>>()?;
    for q in 1..matrices.len() {
        if !matrices[q - 1].mul(&matrices[q]).is_zero() {
            return Err(Error::Internal(
                "positive complex differential does not square to zero".into(),
            ));
        }
    }
    let counts: Vec<usize> = twisted.basis.iter().map(|b| b.len()).collect();
    let base_ranks = homology_of_matrices(&matrices, counts, coefficients).ranks;
    let positive_ranks: Vec<usize> = base_ranks.iter().map(|r| r * fiber_rank).collect();

    // independent side: relative homology of (X_{0,s}, union of collars)
    let stage = engine.stage_complex(s)?;
    let np_in_stage: BTreeSet<String> = engine
        .n_plus_all
        .iter()
        .filter(|c| engine.m[s].contains(*c))
        .cloned()
        .collect();
    let x0s = stage.quotient(&np_in_stage)?;
    let collars: BTreeSet<String> = g
        .cuts
        .iter()
        .flat_map(|cut| cut.r.iter())
        .filter(|c| x0s.contains(c))
        .cloned()
        .collect();
    let rel = relative_homology(&x0s, &collars, coefficients)?;
    let relative_ranks: Vec<usize> = rel.ranks.iter().map(|r| r * fiber_rank).collect();
    let agree = padded_eq(&positive_ranks, &relative_ranks);
    let report = ZeroEvaluationReport {
        coefficients,
        positive_ranks: positive_ranks.clone(),
        relative_ranks: relative_ranks.clone(),
        agree,
    };
    if !agree {
        return Err(Error::Internal(format!(
            "zero-evaluation ranks {positive_ranks:?} disagree with relative homology \
             {relative_ranks:?} over {coefficients}"
        )));
    }
    Ok((
        PositiveComplex {
            basis: twisted.basis,
            matrices,
            fiber_rank,
        },
        report,
    ))
}

/// Reassembles the glued space: N^+ cells are identified with their
/// l-preimages and dropped, and every boundary reference is rewritten
/// accordingly, keeping attaching-word order. The returned cocycle is dual
/// to the cuts: component i is 1 exactly on the stage-i cylinder edges.
pub fn reconstruct_glued_complex(g: &GluingData) -> Result<(CellComplex, CellularCocycle)> {
    let engine = Engine::new(g, Orientation::Standard)?;
    let s = engine.rank();
    let mut cells = Vec::new();
    for cell in &g.domain.cells {
        if engine.n_plus_all.contains(&cell.id) {
            continue;
        }
        let mut boundary = Vec::new();
        for (face, k) in &cell.boundary {
            let (_, reduced) = engine.reduce(face)?;
            boundary.push((reduced, *k));
        }
        cells.push(Cell {
            id: cell.id.clone(),
            dim: cell.dim,
            boundary,
        });
    }
    let glued = CellComplex::new(&format!("{}-glued", g.domain.name), cells)?;

    let mut values: BTreeMap<String, Vec<i64>> = BTreeMap::new();
    for i in 1..=s {
        for (base, cell) in &engine.cyl[i - 1] {
            if engine.dim_of(base) != 0 {
                continue;
            }
            let (_, edge) = engine.reduce(cell)?;
            let entry = values.entry(edge).or_insert_with(|| vec![0; s]);
            entry[i - 1] = 1;
        }
    }
    let alpha = CellularCocycle { s, values };
    alpha.validate(&glued)?;
    Ok((glued, alpha))
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub at: Vec<String>,
    pub direct_ranks: Vec<usize>,
    pub glued_ranks: Vec<usize>,
    pub agree: bool,
}

/// Evaluates twisted homology through both routes at the same point: the
/// direct route twists the reassembled complex by the cut-dual cocycle,
/// the gluing route evaluates the excised deformation complex. Exact rank
/// agreement is required.
pub fn reconstruct_and_crosscheck(g: &GluingData, at: &[BigRational]) -> Result<CrosscheckReport> {
    let (glued, alpha) = reconstruct_glued_complex(g)?;
    let direct = twisted::build_twisted_complex(&glued, &alpha, None)?;
    let direct_ranks = twisted::evaluated_homology(&direct, at)?.ranks;
    let gluing_route = build_twisted_gluing_complex(g)?;
    let glued_ranks = gluing_route.evaluated_ranks(at)?;
    let agree = padded_eq(&direct_ranks, &glued_ranks);
    let report = CrosscheckReport {
        at: at.iter().map(|x| x.to_string()).collect(),
        direct_ranks,
        glued_ranks,
        agree,
    };
    if !agree {
        return Err(Error::Internal(format!(
            "twisted ranks disagree between routes: direct {:?} vs glued {:?} at {:?}",
            report.direct_ranks, report.glued_ranks, report.at
        )));
    }
    Ok(report)
}
