//! Twisted (Novikov) chain complexes: boundary operators over the Laurent
//! ring Z[t_1^{±1},...,t_s^{±1}], evaluation homology, and Novikov numbers
//! as generic ranks.
//!
//! The twisting of a boundary entry is the holonomy monomial picked up by
//! transporting the cell's basepoint lift to the face's, in the free abelian
//! cover classified by the cocycle class. Transport is gauged by the
//! deterministic lowest-id spanning forest: 1-cells twist by their
//! tree-corrected holonomy, 2-cells by an exact walk along their attaching
//! word, higher cells by anchor-vertex paths inside their closure. The built
//! operator is always verified to square to zero as an exact
//! Laurent-polynomial identity.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cocycle::{CellularCocycle, Gauge};
use crate::complex::CellComplex;
use crate::error::{Error, Result};
use crate::homology::{Coefficients, HomologyResult};
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::matrix::{is_prime, IntMatrix};
use crate::monodromy::{unimodular_inverse, MonodromyRep};
use crate::par;

/// Boundary operators with Laurent-polynomial entries (k x k blocks when a
/// monodromy representation is attached).
pub struct TwistedComplex {
    pub vars: usize,
    /// Fiber rank of the attached local system (1 when none).
    pub block: usize,
    /// Cell ids per degree, ascending; these index the matrix blocks.
    pub cells: Vec<Vec<String>>,
    /// `matrices[q]` is ∂_q for q >= 1; entry (f·k+r, c·k+s) is the (r,s)
    /// component of the block coupling face f to cell c.
    pub matrices: Vec<LaurentMatrix>,
    /// Monomial shift applied per degree when clearing to nonnegative powers.
    pub normalization: Vec<Vec<i64>>,
}

impl TwistedComplex {
    pub fn dim(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn boundary(&self, q: usize) -> Option<&LaurentMatrix> {
        self.matrices.get(q)
    }
}

struct Walker<'a> {
    complex: &'a CellComplex,
    alpha: &'a CellularCocycle,
    gauge: Gauge,
    /// Cache of edge transport operators and their inverses.
    transports: BTreeMap<String, (IntMatrix, IntMatrix)>,
    block: usize,
}

impl<'a> Walker<'a> {
    fn new(
        complex: &'a CellComplex,
        alpha: &'a CellularCocycle,
        rep: Option<&'a MonodromyRep>,
    ) -> Result<Self> {
        let gauge = Gauge::build(complex, alpha)?;
        let block = rep.map_or(1, |r| r.k);
        let mut transports = BTreeMap::new();
        if let Some(rep) = rep {
            for edge in complex.cells_of_dim(1) {
                let m = if gauge.tree_edges.contains(&edge.id) {
                    IntMatrix::identity(rep.k)
                } else {
                    rep.matrix(&edge.id)
                };
                let inv = unimodular_inverse(&m)?;
                transports.insert(edge.id.clone(), (m, inv));
            }
        }
        Ok(Walker {
            complex,
            alpha,
            gauge,
            transports,
            block,
        })
    }

    fn holonomy(&self, edge: &str) -> Result<Vec<i64>> {
        let (tail, head) = self.complex.edge_endpoints(edge)?;
        Ok(self.gauge.holonomy(self.alpha, edge, &tail, &head))
    }

    fn transport(&self, edge: &str, forward: bool) -> IntMatrix {
        match self.transports.get(edge) {
            Some((m, inv)) => {
                if forward {
                    m.clone()
                } else {
                    inv.clone()
                }
            }
            None => IntMatrix::identity(self.block),
        }
    }

    /// Twisted boundary of a 1-cell: head picks up t^{h(e)} · Θ(e), tail -1.
    fn edge_blocks(&self, edge: &str) -> Result<Vec<(String, LaurentPoly, IntMatrix)>> {
        let s = self.alpha.s;
        let (tail, head) = self.complex.edge_endpoints(edge)?;
        let h = self.holonomy(edge)?;
        let mut out = vec![(
            head,
            LaurentPoly::monomial(s, &h, BigInt::one()),
            self.transport(edge, true),
        )];
        out.push((
            tail,
            LaurentPoly::constant(s, -BigInt::one()),
            IntMatrix::identity(self.block),
        ));
        Ok(out)
    }

    /// Walk a 2-cell's attaching word, accumulating deck offset and holonomy.
    fn face_blocks(&self, face: &str) -> Result<Vec<(String, LaurentPoly, IntMatrix)>> {
        let s = self.alpha.s;
        match self.complex.attaching_word(face) {
            Ok(word) => {
                let mut offset = vec![0i64; s];
                let mut hol = IntMatrix::identity(self.block);
                let mut out = Vec::new();
                for (edge, forward) in word {
                    let h = self.holonomy(&edge)?;
                    if forward {
                        out.push((
                            edge.clone(),
                            LaurentPoly::monomial(s, &offset, BigInt::one()),
                            hol.clone(),
                        ));
                        for (o, d) in offset.iter_mut().zip(&h) {
                            *o += d;
                        }
                        hol = hol.mul(&self.transport(&edge, true));
                    } else {
                        for (o, d) in offset.iter_mut().zip(&h) {
                            *o -= d;
                        }
                        hol = hol.mul(&self.transport(&edge, false));
                        out.push((
                            edge.clone(),
                            LaurentPoly::monomial(s, &offset, -BigInt::one()),
                            hol.clone(),
                        ));
                    }
                }
                Ok(out)
            }
            Err(_) => {
                // No unit attaching word. Fine only when nothing twists over
                // this cell's closure.
                self.untwisted_blocks_if_flat(face)
            }
        }
    }

    /// Anchor transport for cells of dimension >= 3: the monomial of an
    /// incidence pair comes from a path between anchor vertices inside the
    /// closure of the cell. This is only enough information when incidences
    /// do not cancel in pairs, so boundary lists with collapsing repeats are
    /// rejected; the final d∘d = 0 check gates everything else.
    fn anchor_blocks(&self, id: &str) -> Result<Vec<(String, LaurentPoly, IntMatrix)>> {
        let s = self.alpha.s;
        let cell = self.complex.cell(id)?;
        let collapsed = cell.collapsed_boundary();
        let listed: i64 = cell.boundary.iter().map(|(_, k)| k.abs()).sum();
        let surviving: i64 = collapsed.values().map(|k| k.abs()).sum();
        if listed != surviving {
            return Err(Error::MissingAttachingWord(id.to_string()));
        }
        let anchor_c = self.complex.anchor_vertex(id)?;
        let closure = self.complex.closure(id)?;
        let mut out = Vec::new();
        for (face, k) in collapsed {
            let anchor_f = self.complex.anchor_vertex(&face)?;
            let (expo, hol) = self.path_holonomy(&closure, &anchor_c, &anchor_f)?;
            let m: Vec<i64> = self.gauge.potential[&anchor_c]
                .iter()
                .zip(&expo)
                .zip(&self.gauge.potential[&anchor_f])
                .map(|((g_c, e), g_f)| g_c + e - g_f)
                .collect();
            out.push((face, LaurentPoly::monomial(s, &m, BigInt::from(k)), hol));
        }
        Ok(out)
    }

    fn untwisted_blocks_if_flat(&self, id: &str) -> Result<Vec<(String, LaurentPoly, IntMatrix)>> {
        let s = self.alpha.s;
        let closure = self.complex.closure(id)?;
        let id_block = IntMatrix::identity(self.block);
        for c in &closure {
            if self.complex.cell(c)?.dim != 1 {
                continue;
            }
            if self.alpha.value(c).iter().any(|&x| x != 0) || self.transport(c, true) != id_block {
                return Err(Error::MissingAttachingWord(id.to_string()));
            }
        }
        let cell = self.complex.cell(id)?;
        Ok(cell
            .collapsed_boundary()
            .into_iter()
            .map(|(face, k)| {
                (
                    face,
                    LaurentPoly::constant(s, BigInt::from(k)),
                    id_block.clone(),
                )
            })
            .collect())
    }

    /// BFS path between two vertices using only edges whose closure lies in
    /// `within`; returns the α-integral and transport along it.
    fn path_holonomy(
        &self,
        within: &std::collections::BTreeSet<String>,
        from: &str,
        to: &str,
    ) -> Result<(Vec<i64>, IntMatrix)> {
        let s = self.alpha.s;
        if from == to {
            return Ok((vec![0; s], IntMatrix::identity(self.block)));
        }
        let mut state: BTreeMap<String, (Vec<i64>, IntMatrix)> = BTreeMap::new();
        state.insert(
            from.to_string(),
            (vec![0; s], IntMatrix::identity(self.block)),
        );
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(from.to_string());
        let edges: Vec<&crate::complex::Cell> = self
            .complex
            .cells_of_dim(1)
            .into_iter()
            .filter(|e| within.contains(&e.id))
            .collect();
        while let Some(u) = queue.pop_front() {
            if u == to {
                return Ok(state[&u].clone());
            }
            let (acc, hol) = state[&u].clone();
            for edge in &edges {
                let (tail, head) = self.complex.edge_endpoints(&edge.id)?;
                let next = if tail == u {
                    Some((head.clone(), true))
                } else if head == u {
                    Some((tail.clone(), false))
                } else {
                    None
                };
                let Some((w, forward)) = next else { continue };
                if state.contains_key(&w) {
                    continue;
                }
                let sign = if forward { 1 } else { -1 };
                let step: Vec<i64> = acc
                    .iter()
                    .zip(self.alpha.value(&edge.id))
                    .map(|(a, v)| a + sign * v)
                    .collect();
                let h = hol.mul(&self.transport(&edge.id, forward));
                state.insert(w.clone(), (step, h));
                queue.push_back(w);
            }
        }
        Err(Error::Internal(format!(
            "no path from `{from}` to `{to}` inside the closure; cannot transport"
        )))
    }
}

/// Assemble the twisted chain complex of `complex` with respect to `alpha`
/// and an optional local system. The untwisted operator is recovered at
/// α ≡ 0 with no (or trivial) system attached.
pub fn build_twisted_complex(
    complex: &CellComplex,
    alpha: &CellularCocycle,
    rep: Option<&MonodromyRep>,
) -> Result<TwistedComplex> {
    alpha.validate(complex)?;
    if let Some(rep) = rep {
        rep.validate(complex)?;
    }
    let walker = Walker::new(complex, alpha, rep)?;
    let k = walker.block;
    let s = alpha.s;
    let dim = complex.dim().unwrap_or(0);

    let cells: Vec<Vec<String>> = (0..=dim)
        .map(|q| {
            complex
                .cells_of_dim(q)
                .iter()
                .map(|c| c.id.clone())
                .collect()
        })
        .collect();
    let mut matrices = Vec::new();
    let mut normalization = Vec::new();
    for q in 0..=dim {
        let rows_cells = if q == 0 { &[][..] } else { &cells[q - 1][..] };
        let row_index: BTreeMap<&str, usize> = rows_cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();
        let mut m = LaurentMatrix::zeros(s, rows_cells.len() * k, cells[q].len() * k);
        for (j, id) in cells[q].iter().enumerate() {
            if q == 0 {
                continue;
            }
            let blocks = match q {
                1 => walker.edge_blocks(id)?,
                2 => walker.face_blocks(id)?,
                _ => walker.anchor_blocks(id)?,
            };
            for (face, mono, hol) in blocks {
                let i = row_index[face.as_str()];
                // blocks store the transpose of the holonomy: composing
                // boundaries applies the accumulated group element on the
                // left of the next boundary (module order), and transposed
                // blocks realize that order under ordinary matrix product
                for r in 0..k {
                    for c in 0..k {
                        let coeff = hol.get(c, r);
                        if coeff.is_zero() {
                            continue;
                        }
                        let term = mono.mul(&LaurentPoly::constant(s, coeff.clone()));
                        m.add_to(i * k + r, j * k + c, &term);
                    }
                }
            }
        }
        normalization.push(m.normalize_nonnegative());
        matrices.push(m);
    }

    let twisted = TwistedComplex {
        vars: s,
        block: k,
        cells,
        matrices,
        normalization,
    };
    // the chain axiom, as an exact polynomial identity
    for q in 1..twisted.matrices.len() {
        let prod = twisted.matrices[q - 1].mul(&twisted.matrices[q]);
        if !prod.is_zero() {
            return Err(Error::Internal(format!(
                "twisted boundary does not square to zero between degrees {} and {q}; \
                 attaching data is inconsistent with the cocycle or monodromy",
                q - 1
            )));
        }
    }
    Ok(twisted)
}

/// Ranks of the homology of the evaluated complex at a point with nonzero
/// coordinates, over the exact rationals.
pub fn evaluated_homology(twisted: &TwistedComplex, at: &[BigRational]) -> Result<HomologyResult> {
    if at.len() != twisted.vars {
        return Err(Error::EvaluationRankMismatch {
            got: at.len(),
            expected: twisted.vars,
        });
    }
    if let Some(i) = at.iter().position(|x| x.is_zero()) {
        return Err(Error::ZeroEvaluationPoint(i));
    }
    let degrees: Vec<usize> = (0..twisted.cells.len()).collect();
    let ranks_d: Vec<usize> = par::map_collect(&degrees, |&q| {
        twisted
            .matrices
            .get(q)
            .map_or(0, |m| m.eval(at).expect("nonzero point").rank())
    });
    let ranks: Vec<usize> = (0..twisted.cells.len())
        .map(|q| {
            twisted.cells[q].len() * twisted.block
                - ranks_d[q]
                - ranks_d.get(q + 1).copied().unwrap_or(0)
        })
        .collect();
    Ok(HomologyResult {
        coefficients: Coefficients::Q,
        ranks,
        torsion: vec![],
    })
}

pub fn integer_point(coords: &[i64]) -> Vec<BigRational> {
    coords
        .iter()
        .map(|&c| BigRational::from(BigInt::from(c)))
        .collect()
}

/// Novikov numbers with the evaluation points that produced them.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct NovikovNumbers {
    pub b: Vec<usize>,
    /// One evaluation point per trial, coordinates are random primes.
    pub points: Vec<Vec<i64>>,
    pub agreement: bool,
    pub retried: bool,
    pub seed: u64,
    pub trials: usize,
}

fn random_prime(rng: &mut ChaCha8Rng) -> i64 {
    loop {
        let candidate = rng.gen_range(1_000u64..=1_000_000);
        if is_prime(candidate) {
            return candidate as i64;
        }
    }
}

fn draw_points(rng: &mut ChaCha8Rng, s: usize, trials: usize) -> Vec<Vec<i64>> {
    (0..trials)
        .map(|_| (0..s).map(|_| random_prime(rng)).collect())
        .collect()
}

/// Generic ranks of twisted homology: evaluate at `trials` random rational
/// points (prime coordinates) and require agreement. Ranks can only jump on
/// a proper subvariety, so the generic value is the minimum; agreement
/// across trials certifies that no point landed on it. One disagreement
/// triggers a retry with fresh points, a second is an error.
pub fn novikov_numbers(
    complex: &CellComplex,
    alpha: &CellularCocycle,
    rep: Option<&MonodromyRep>,
    seed: u64,
    trials: usize,
) -> Result<NovikovNumbers> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let twisted = build_twisted_complex(complex, alpha, rep)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut retried = false;
    loop {
        let points = draw_points(&mut rng, twisted.vars, trials);
        let ranks: Vec<Vec<usize>> = par::map_collect(&points, |p| {
            evaluated_homology(&twisted, &integer_point(p))
                .expect("nonzero prime point")
                .ranks
        });
        if ranks.windows(2).all(|w| w[0] == w[1]) {
            return Ok(NovikovNumbers {
                b: ranks.into_iter().next().unwrap_or_default(),
                points,
                agreement: true,
                retried,
                seed,
                trials,
            });
        }
        if retried {
            return Err(Error::TrialsDisagree);
        }
        retried = true;
    }
}

/// An evaluation point whose coordinates are nonzero multiples of a prime p,
/// so that every integer polynomial vanishing at it has free term divisible
/// by p.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AdmissibleEvaluation {
    pub a: Vec<i64>,
    pub p: u64,
}

impl AdmissibleEvaluation {
    pub fn point(&self) -> Vec<BigRational> {
        integer_point(&self.a)
    }
}

pub fn admissible_evaluation(p: u64, s: usize, seed: u64) -> Result<AdmissibleEvaluation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if s == 0 {
        return Err(Error::InvalidParameter("rank s must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = (0..s)
        .map(|_| {
            let k = rng.gen_range(1..=999i64);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            sign * k * p as i64
        })
        .collect();
    Ok(AdmissibleEvaluation { a, p })
}
