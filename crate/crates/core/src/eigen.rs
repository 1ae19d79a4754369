//! Complex eigendecomposition and spectral matrix functions.
//!
//! The solver reduces to upper Hessenberg form with Givens similarities, runs
//! an explicitly shifted QR iteration (Wilkinson shifts, deflation on small
//! subdiagonals) to reach triangular Schur form, and recovers eigenvectors by
//! back substitution. Matrix functions f(A) are evaluated spectrally as
//! V f(D) V^-1; generators elsewhere keep eigenvector bases well conditioned,
//! and an explicit condition guard rejects anything close to defective.


use crate::error::{Error, Result};
use crate::matrix::{C64, SquareMatrix};

/// Eigenvalues of a matrix together with the extreme real parts.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues with multiplicity, sorted by (Re, Im).
    pub eigenvalues: Vec<C64>,
    /// Largest real part over the spectrum.
    pub max_re: f64,
    /// Smallest real part over the spectrum.
    pub min_re: f64,
}

/// `A = V diag(values) V^-1` with a condition estimate for `V`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<C64>,
    pub vectors: SquareMatrix,
    pub vectors_inv: SquareMatrix,
    pub condition: f64,
}

const MAX_SWEEPS_PER_EIGENVALUE: usize = 80;

#[derive(Clone, Copy)]
struct Givens {
    c: f64,
    s: C64,
    p: usize,
    q: usize,
}

impl Givens {
    fn zeroing(f: C64, g: C64, p: usize, q: usize) -> Self {
        let gn = g.norm();
        if gn == 0.0 {
            return Self { c: 1.0, s: C64::new(0.0, 0.0), p, q };
        }
        let fn_ = f.norm();
        if fn_ == 0.0 {
            return Self { c: 0.0, s: g.conj() / gn, p, q };
        }
        let r = (fn_ * fn_ + gn * gn).sqrt();
        let c = fn_ / r;
        let s = (f / fn_) * g.conj() / r;
        Self { c, s, p, q }
    }

    fn apply_left(&self, m: &mut SquareMatrix, col_from: usize, col_to: usize) {
        for j in col_from..col_to {
            let a = m[(self.p, j)];
            let b = m[(self.q, j)];
            m[(self.p, j)] = self.c * a + self.s * b;
            m[(self.q, j)] = -self.s.conj() * a + self.c * b;
        }
    }

    fn apply_right_h(&self, m: &mut SquareMatrix, row_from: usize, row_to: usize) {
        for i in row_from..row_to {
            let a = m[(i, self.p)];
            let b = m[(i, self.q)];
            m[(i, self.p)] = self.c * a + self.s.conj() * b;
            m[(i, self.q)] = -self.s * a + self.c * b;
        }
    }
}

/// Reduce to upper Hessenberg form by a unitary similarity, accumulating `q`
/// so that on return `a_in = q * h * q^H`.
fn hessenberg(h: &mut SquareMatrix, q: &mut SquareMatrix) {
    let n = h.dim();
    for j in 0..n.saturating_sub(2) {
        for i in (j + 2)..n {
            if h[(i, j)].norm() == 0.0 {
                continue;
            }
            let g = Givens::zeroing(h[(j + 1, j)], h[(i, j)], j + 1, i);
            g.apply_left(h, j, n);
            g.apply_right_h(h, 0, n);
            g.apply_right_h(q, 0, n);
            h[(i, j)] = C64::new(0.0, 0.0);
        }
    }
}

fn wilkinson_shift(h: &SquareMatrix, hi: usize) -> C64 {
    if hi == 0 {
        return h[(0, 0)];
    }
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let delta = (a - d) * 0.5;
    let sq = (delta * delta + b * c).sqrt();
    // Pick the root closer to the trailing entry.
    let mu1 = d + delta + sq;
    let mu2 = d + delta - sq;
    if (mu1 - d).norm() < (mu2 - d).norm() { mu1 } else { mu2 }
}

/// Schur triangularization: on return `h` is upper triangular and
/// `a_in = q * h * q^H`. `q` must come in as the Hessenberg accumulation.
fn schur_iterate(h: &mut SquareMatrix, q: &mut SquareMatrix) -> Result<()> {
    let n = h.dim();
    let eps = f64::EPSILON;
    let scale = h.norm().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut total_sweeps = 0usize;
    let mut sweeps_here = 0usize;
    let budget = MAX_SWEEPS_PER_EIGENVALUE * n;
    loop {
        // Deflate converged subdiagonals at the bottom of the active block.
        while hi > 0 {
            let sub = h[(hi, hi - 1)].norm();
            let local = h[(hi - 1, hi - 1)].norm() + h[(hi, hi)].norm();
            if sub <= eps * local.max(eps * scale) {
                h[(hi, hi - 1)] = C64::new(0.0, 0.0);
                hi -= 1;
                sweeps_here = 0;
            } else {
                break;
            }
        }
        if hi == 0 {
            return Ok(());
        }
        // Find the top of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= eps * local.max(eps * scale) {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }

        if total_sweeps > budget {
            return Err(Error::EigenFailure(total_sweeps));
        }
        total_sweeps += 1;
        sweeps_here += 1;

        let mut mu = wilkinson_shift(h, hi);
        if sweeps_here % 16 == 0 {
            // Exceptional shift to break rare shift cycles.
            mu = h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0);
        }

        // Explicit shifted QR step on the active block.
        for i in lo..=hi {
            h[(i, i)] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let g = Givens::zeroing(h[(k, k)], h[(k + 1, k)], k, k + 1);
            g.apply_left(h, k, n);
            h[(k + 1, k)] = C64::new(0.0, 0.0);
            rotations.push(g);
        }
        for g in &rotations {
            g.apply_right_h(h, 0, (g.q + 2).min(n));
            g.apply_right_h(q, 0, n);
        }
        for i in lo..=hi {
            h[(i, i)] += mu;
        }
    }
}

fn schur(m: &SquareMatrix) -> Result<(SquareMatrix, SquareMatrix)> {
    if !m.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entries".into()));
    }
    let mut h = m.clone();
    let mut q = SquareMatrix::identity(m.dim());
    if m.dim() > 1 {
        hessenberg(&mut h, &mut q);
        schur_iterate(&mut h, &mut q)?;
    }
    Ok((h, q))
}

/// Eigenvalues with multiplicity plus M(A) = max Re and m(A) = min Re.
pub fn spectrum(m: &SquareMatrix) -> Result<Spectrum> {
    let (t, _) = schur(m)?;
    let mut eigenvalues: Vec<C64> = (0..m.dim()).map(|i| t[(i, i)]).collect();
    eigenvalues.sort_by(|a, b| {
        a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
    });
    let max_re = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let min_re = eigenvalues.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    Ok(Spectrum { eigenvalues, max_re, min_re })
}

/// True iff every eigenvalue has strictly positive real part.
pub fn is_positive_stable(m: &SquareMatrix) -> Result<bool> {
    Ok(spectrum(m)?.min_re > 0.0)
}

/// Full eigendecomposition. Eigenvectors come from back substitution on the
/// Schur factor; nearly defective input surfaces as a huge condition number.
pub fn eigendecompose(m: &SquareMatrix) -> Result<EigenDecomposition> {
    let n = m.dim();
    if n == 1 {
        let id = SquareMatrix::identity(1);
        return Ok(EigenDecomposition {
            values: vec![m[(0, 0)]],
            vectors: id.clone(),
            vectors_inv: id,
            condition: 1.0,
        });
    }
    let (t, q) = schur(m)?;
    let values: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let t_scale = t.norm().max(f64::MIN_POSITIVE);
    let mut vectors = SquareMatrix::zeros(n);
    for k in 0..n {
        let mut y = vec![C64::new(0.0, 0.0); n];
        y[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = C64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                s += t[(i, j)] * y[j];
            }
            let mut den = t[(i, i)] - values[k];
            if den.norm() < f64::EPSILON * t_scale {
                den = C64::new(f64::EPSILON * t_scale, 0.0);
            }
            y[i] = -s / den;
        }
        // Rotate back to the original basis and normalize the column.
        let mut norm = 0.0f64;
        let mut col = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for j in 0..=k {
                s += q[(i, j)] * y[j];
            }
            col[i] = s;
            norm += s.norm_sqr();
        }
        let norm = norm.sqrt().max(f64::MIN_POSITIVE);
        for i in 0..n {
            vectors[(i, k)] = col[i] / norm;
        }
    }
    let vectors_inv = vectors
        .inverse()
        .map_err(|_| Error::IllConditionedEigenbasis(f64::INFINITY))?;
    let condition = vectors.norm() * vectors_inv.norm();
    Ok(EigenDecomposition { values, vectors, vectors_inv, condition })
}

impl EigenDecomposition {
    /// `V diag(f(lambda_i)) V^-1`.
    pub fn apply(&self, mut f: impl FnMut(C64) -> C64) -> SquareMatrix {
        let n = self.vectors.dim();
        let mut vd = SquareMatrix::zeros(n);
        for j in 0..n {
            let fj = f(self.values[j]);
            for i in 0..n {
                vd[(i, j)] = self.vectors[(i, j)] * fj;
            }
        }
        &vd * &self.vectors_inv
    }
}

/// Condition threshold above which spectral function evaluation is refused.
pub const MAX_FUNCTION_CONDITION: f64 = 1e6;

/// Evaluate a scalar function on a matrix through its eigensystem.
pub fn matrix_function(m: &SquareMatrix, f: impl FnMut(C64) -> C64) -> Result<SquareMatrix> {
    let decomp = eigendecompose(m)?;
    if decomp.condition > MAX_FUNCTION_CONDITION {
        return Err(Error::IllConditionedEigenbasis(decomp.condition));
    }
    Ok(decomp.apply(f))
}

/// `t^A = exp(A ln t)` for real `t > 0`.
pub fn matrix_power(t: f64, a: &SquareMatrix) -> Result<SquareMatrix> {
    if !(t > 0.0) {
        return Err(Error::DomainError(format!("matrix power base must be > 0, got {t}")));
    }
    let lnt = t.ln();
    matrix_function(a, |lambda| (lambda * lnt).exp())
}

/// `w^A = exp(A Log w)` with the principal logarithm; rejects the cut (-inf, 0].
pub fn complex_power(w: C64, a: &SquareMatrix) -> Result<SquareMatrix> {
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(Error::BranchCut(w));
    }
    let logw = w.ln();
    matrix_function(a, |lambda| (lambda * logw).exp())
}
