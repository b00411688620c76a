//! Multivariate Laurent polynomials over the integers, and matrices of them.
//!
//! These are the entries of twisted boundary operators. Terms are kept in a
//! sorted map from exponent vectors to coefficients so that equality,
//! display, and evaluation are deterministic.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, RatMatrix};

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    pub fn zero(vars: usize) -> Self {
        LaurentPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: BigInt) -> Self {
        let mut p = LaurentPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    pub fn one(vars: usize) -> Self {
        LaurentPoly::constant(vars, BigInt::one())
    }

    /// c * t_1^{e_1} ... t_s^{e_s}
    pub fn monomial(vars: usize, exponents: &[i64], c: BigInt) -> Self {
        assert_eq!(exponents.len(), vars);
        let mut p = LaurentPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exponents.to_vec(), c);
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_assign(&mut self, other: &LaurentPoly) {
        assert_eq!(self.vars, other.vars);
        for (e, c) in &other.terms {
            let entry = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                self.terms.remove(e);
            }
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_assign(&other.neg());
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.vars, other.vars);
        let mut out = LaurentPoly::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let entry = out.terms.entry(e.clone()).or_insert_with(BigInt::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    out.terms.remove(&e);
                }
            }
        }
        out
    }

    /// Multiply by the monomial t^shift.
    pub fn shift(&self, shift: &[i64]) -> LaurentPoly {
        assert_eq!(shift.len(), self.vars);
        LaurentPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum exponent over all terms, None when zero.
    pub fn min_exponents(&self) -> Option<Vec<i64>> {
        let mut min: Option<Vec<i64>> = None;
        for e in self.terms.keys() {
            match &mut min {
                None => min = Some(e.clone()),
                Some(m) => {
                    for (mi, ei) in m.iter_mut().zip(e) {
                        *mi = (*mi).min(*ei);
                    }
                }
            }
        }
        min
    }

    /// Exact evaluation at a point with all coordinates nonzero.
    pub fn eval(&self, at: &[BigRational]) -> BigRational {
        assert_eq!(at.len(), self.vars);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = BigRational::from(c.clone());
            for (x, &k) in at.iter().zip(e) {
                term *= rational_pow(x, k);
            }
            acc += term;
        }
        acc
    }

    /// Evaluation at t = 0. Only legal when every exponent is nonnegative;
    /// returns the constant term.
    pub fn eval_zero(&self) -> Result<BigInt> {
        for e in self.terms.keys() {
            if e.iter().any(|&k| k < 0) {
                return Err(Error::Internal(format!(
                    "evaluation at t=0 of a Laurent entry with negative exponent: {self}"
                )));
            }
        }
        Ok(self
            .terms
            .get(&vec![0; self.vars])
            .cloned()
            .unwrap_or_else(BigInt::zero))
    }
}

fn rational_pow(x: &BigRational, k: i64) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    let p = x.pow(k.unsigned_abs() as u32 as i32);
    if k > 0 {
        p
    } else {
        p.recip()
    }
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| {
                    let var = if self.vars == 1 {
                        "t".to_string()
                    } else {
                        format!("t{}", i + 1)
                    };
                    if k == 1 {
                        var
                    } else {
                        format!("{var}^{k}")
                    }
                })
                .collect();
            let mono = mono.join("*");
            let piece = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else {
                format!("{c}*{mono}")
            };
            if first {
                write!(f, "{piece}")?;
                first = false;
            } else if let Some(rest) = piece.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {piece}")?;
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

/// Dense matrix with Laurent-polynomial entries.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    vars: usize,
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(vars: usize, rows: usize, cols: usize) -> Self {
        LaurentMatrix {
            vars,
            rows,
            cols,
            entries: vec![LaurentPoly::zero(vars); rows * cols],
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        assert_eq!(p.vars(), self.vars);
        self.entries[i * self.cols + j] = p;
    }

    pub fn add_to(&mut self, i: usize, j: usize, p: &LaurentPoly) {
        self.entries[i * self.cols + j].add_assign(p);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn mul(&self, other: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = LaurentMatrix::zeros(self.vars, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let prod = a.mul(b);
                        out.add_to(i, j, &prod);
                    }
                }
            }
        }
        out
    }

    /// Clear negative exponents by multiplying the whole matrix with one
    /// monomial per variable. Returns the applied shift. Ranks at nonzero
    /// evaluation points are unchanged, and so is d∘d = 0.
    pub fn normalize_nonnegative(&mut self) -> Vec<i64> {
        let mut shift = vec![0i64; self.vars];
        for p in &self.entries {
            if let Some(min) = p.min_exponents() {
                for (s, m) in shift.iter_mut().zip(&min) {
                    *s = (*s).min(*m);
                }
            }
        }
        if shift.iter().all(|&s| s >= 0) {
            return vec![0; self.vars];
        }
        let applied: Vec<i64> = shift.iter().map(|&s| if s < 0 { -s } else { 0 }).collect();
        for p in &mut self.entries {
            *p = p.shift(&applied);
        }
        applied
    }

    pub fn eval(&self, at: &[BigRational]) -> Result<RatMatrix> {
        if at.len() != self.vars {
            return Err(Error::EvaluationRankMismatch {
                got: at.len(),
                expected: self.vars,
            });
        }
        if let Some(i) = at.iter().position(|x| x.is_zero()) {
            return Err(Error::ZeroEvaluationPoint(i));
        }
        let mut m = RatMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).eval(at));
            }
        }
        Ok(m)
    }

    pub fn eval_zero(&self) -> Result<IntMatrix> {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).eval_zero()?);
            }
        }
        Ok(m)
    }
}

impl std::fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "LaurentMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn tm1(e: i64, c: i64) -> LaurentPoly {
        LaurentPoly::monomial(1, &[e], BigInt::from(c))
    }

    #[test]
    fn arithmetic_and_display() {
        let t_minus_1 = {
            let mut p = tm1(1, 1);
            p.add_assign(&tm1(0, -1));
            p
        };
        assert_eq!(t_minus_1.to_string(), "-1 + t");
        let sq = t_minus_1.mul(&t_minus_1);
        assert_eq!(sq.to_string(), "1 - 2*t + t^2");
        assert!(t_minus_1.sub(&t_minus_1).is_zero());
    }

    #[test]
    fn evaluation() {
        let mut p = tm1(-1, 1); // t^{-1}
        p.add_assign(&tm1(1, 1)); // + t
        let two = BigRational::from(BigInt::from(2));
        // 1/2 + 2 = 5/2
        assert_eq!(
            p.eval(&[two]),
            BigRational::new(BigInt::from(5), BigInt::from(2))
        );
        assert!(p.eval_zero().is_err());
        assert_eq!(tm1(0, 7).eval_zero().unwrap(), BigInt::from(7));
        assert_eq!(tm1(2, 7).eval_zero().unwrap(), BigInt::from(0));
    }

    #[test]
    fn normalization_preserves_rank_at_nonzero_points() {
        let mut m = LaurentMatrix::zeros(1, 1, 2);
        m.set(0, 0, tm1(-2, 3));
        m.set(0, 1, tm1(1, 1));
        let mut n = m.clone();
        let shift = n.normalize_nonnegative();
        assert_eq!(shift, vec![2]);
        let a = [BigRational::from(BigInt::from(5))];
        assert_eq!(m.eval(&a).unwrap().rank(), n.eval(&a).unwrap().rank());
        assert!(n.eval_zero().is_ok());
    }
}
