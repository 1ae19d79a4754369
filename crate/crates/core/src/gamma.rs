//! Matrix gamma, reciprocal gamma, beta, and Pochhammer symbols.
//!
//! Gamma-type functions are evaluated spectrally (scalar kernel on the
//! eigenvalues, similarity transform back). The beta function's primary path
//! is the product Gamma(P) Gamma(Q) Gamma^-1(P+Q); the defining integral is
//! exposed separately as a quadrature cross-check.

use crate::error::{Error, Result};
use crate::matrix::{C64, SquareMatrix};
use crate::{eigen, scalar, transforms};

/// Relative commutator defect above which a pair is rejected as non-commuting.
pub const COMMUTE_TOL: f64 = 1e-10;

/// Gamma(A) for positive stable A.
pub fn matrix_gamma(a: &SquareMatrix) -> Result<SquareMatrix> {
    let spec = eigen::spectrum(a)?;
    if spec.min_re <= 0.0 {
        return Err(Error::NotPositiveStable(spec.min_re));
    }
    eigen::matrix_function(a, scalar::gamma)
}

/// Entire reciprocal gamma: defined for every square matrix.
pub fn reciprocal_gamma(a: &SquareMatrix) -> Result<SquareMatrix> {
    eigen::matrix_function(a, scalar::reciprocal_gamma)
}

/// Beta(P, Q) = Gamma(P) Gamma(Q) Gamma^-1(P+Q) for commuting positive stable P, Q.
pub fn matrix_beta(p: &SquareMatrix, q: &SquareMatrix) -> Result<SquareMatrix> {
    let defect = p.commutator_defect(q);
    if defect > COMMUTE_TOL {
        return Err(Error::NonCommuting(defect));
    }
    let gp = matrix_gamma(p)?;
    let gq = matrix_gamma(q)?;
    let gpq_inv = reciprocal_gamma(&(p + q))?;
    Ok(&(&gp * &gq) * &gpq_inv)
}

/// Quadrature cross-check of the beta integral over [0, 1].
pub fn matrix_beta_quadrature(p: &SquareMatrix, q: &SquareMatrix, nodes: usize) -> Result<SquareMatrix> {
    let id = SquareMatrix::identity(p.dim());
    let (value, _err) = transforms::beta_transform(&|_| Ok(id.clone()), p, q, nodes)?;
    Ok(value)
}

/// Cache of matrix Pochhammer symbols (A)_0 .. (A)_K.
#[derive(Debug, Clone)]
pub struct PochhammerCache {
    pub base: SquareMatrix,
    pub terms: Vec<SquareMatrix>,
}

impl PochhammerCache {
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, k: usize) -> &SquareMatrix {
        &self.terms[k]
    }
}

/// (A)_0 = I, (A)_{k+1} = (A)_k (A + kI).
pub fn pochhammer(a: &SquareMatrix, k_max: usize) -> PochhammerCache {
    let mut terms = Vec::with_capacity(k_max + 1);
    terms.push(SquareMatrix::identity(a.dim()));
    for k in 0..k_max {
        let shifted = a.add_scalar(C64::new(k as f64, 0.0));
        let next = &terms[k] * &shifted;
        terms.push(next);
    }
    PochhammerCache { base: a.clone(), terms }
}

/// Invertibility check used for the shift condition `A + nI invertible`.
pub fn shift_invertible(a: &SquareMatrix, n: usize) -> bool {
    a.add_scalar(C64::new(n as f64, 0.0)).invertibility_margin() > 1e-12
}
