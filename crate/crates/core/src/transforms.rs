//! Numerical integral operators: the beta transform, Laplace transform,
//! Erdelyi-Kober pair, Riemann-Liouville integrals, and the termwise
//! (formal) fractional-derivative rules.
//!
//! Matrix-power weights t^(A-I) are handled by diagonalizing the commuting
//! parameters once and giving every eigen-row its own Gauss-Jacobi rule with
//! the exact real exponents. The remaining integrand is then analytic, so
//! the rules converge spectrally; imaginary parts of eigenvalues are folded
//! into the integrand as unimodular factors. Folding everything but the
//! minimal real part into the integrand instead converges only algebraically
//! once the spectrum has any spread, which cannot reach 1e-8 at desk scale.
//!
//! Weyl-type operators on entire integrands diverge as integrals; they are
//! implemented termwise on series coefficients, which is what the identities
//! under test actually assert.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hyper::HyperParams;
use crate::matrix::{C64, SquareMatrix};
use crate::quad::QuadratureRule;
use crate::series::{ExponentOffset, MatrixPowerSeries};
use crate::{eigen, scalar};

/// A commuting pair reduced to a shared eigenbasis.
pub struct CommutingDiag {
    pub vectors: SquareMatrix,
    pub vectors_inv: SquareMatrix,
    pub a_eigs: Vec<C64>,
    pub b_eigs: Vec<C64>,
}

const DIAG_TOL: f64 = 1e-8;

/// Diagonalize commuting `a` and `b` in one basis. Falls back to the
/// eigenbasis of `a + xi b` when `a` alone has clustered eigenvalues.
pub fn simultaneous_diag(a: &SquareMatrix, b: &SquareMatrix) -> Result<CommutingDiag> {
    let defect = a.commutator_defect(b);
    if defect > crate::gamma::COMMUTE_TOL {
        return Err(Error::NonCommuting(defect));
    }
    for xi in [0.0f64, 0.137, 0.311] {
        let probe = if xi == 0.0 { a.clone() } else { &a.clone() + &b.scale_re(xi) };
        let decomp = match eigen::eigendecompose(&probe) {
            Ok(d) => d,
            Err(_) => continue,
        };
        if decomp.condition > eigen::MAX_FUNCTION_CONDITION {
            continue;
        }
        let da = &(&decomp.vectors_inv * a) * &decomp.vectors;
        let db = &(&decomp.vectors_inv * b) * &decomp.vectors;
        let off = |m: &SquareMatrix| -> f64 {
            let mut worst: f64 = 0.0;
            for i in 0..m.dim() {
                for j in 0..m.dim() {
                    if i != j {
                        worst = worst.max(m[(i, j)].norm());
                    }
                }
            }
            worst / m.norm().max(f64::MIN_POSITIVE)
        };
        if off(&da) < DIAG_TOL && off(&db) < DIAG_TOL {
            let a_eigs = (0..a.dim()).map(|i| da[(i, i)]).collect();
            let b_eigs = (0..a.dim()).map(|i| db[(i, i)]).collect();
            return Ok(CommutingDiag {
                vectors: decomp.vectors,
                vectors_inv: decomp.vectors_inv,
                a_eigs,
                b_eigs,
            });
        }
    }
    Err(Error::IllConditionedEigenbasis(f64::INFINITY))
}

type MatrixFn<'a> = &'a dyn Fn(f64) -> Result<SquareMatrix>;

/// Shared core: `int_0^1 t^(A-I) (1-t)^(B-I) f(t) dt` by per-row Jacobi rules.
fn weighted_unit_integral(
    f: MatrixFn,
    diag: &CommutingDiag,
    nodes: usize,
) -> Result<SquareMatrix> {
    let n = diag.vectors.dim();
    let mut rows = SquareMatrix::zeros(n);
    for i in 0..n {
        let (a_i, b_i) = (diag.a_eigs[i], diag.b_eigs[i]);
        if a_i.re <= 0.0 || b_i.re <= 0.0 {
            return Err(Error::NotPositiveStable(a_i.re.min(b_i.re)));
        }
        let rule = QuadratureRule::gauss_jacobi(nodes, b_i.re - 1.0, a_i.re - 1.0)?;
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let ft = f(*t)?;
            let transformed = &(&diag.vectors_inv * &ft) * &diag.vectors;
            // Residual unimodular factors from imaginary exponent parts.
            let phase = Complex64::new(0.0, a_i.im * t.ln() + b_i.im * (1.0 - t).ln()).exp();
            for j in 0..n {
                rows[(i, j)] += transformed[(i, j)] * phase * *w;
            }
        }
    }
    Ok(&(&diag.vectors * &rows) * &diag.vectors_inv)
}

/// Beta transform `int_0^1 t^(A-I) (1-t)^(B-I) f(t) dt` for positive stable
/// commuting A, B. Returns the value and a quadrature error estimate from a
/// node-refinement comparison.
pub fn beta_transform(
    f: MatrixFn,
    a: &SquareMatrix,
    b: &SquareMatrix,
    nodes: usize,
) -> Result<(SquareMatrix, f64)> {
    let sa = eigen::spectrum(a)?;
    let sb = eigen::spectrum(b)?;
    if sa.min_re <= 0.0 || sb.min_re <= 0.0 {
        return Err(Error::NotPositiveStable(sa.min_re.min(sb.min_re)));
    }
    let diag = simultaneous_diag(a, b)?;
    let coarse = weighted_unit_integral(f, &diag, nodes)?;
    let fine = weighted_unit_integral(f, &diag, nodes + 16)?;
    let err = (&fine - &coarse).norm() / fine.norm().max(1.0);
    Ok((fine, err))
}

/// Laplace transform of a smooth matrix-valued integrand on [0, cutoff],
/// geometric Legendre panels plus an analytic tail bound at the cutoff.
pub fn laplace_transform(
    f: MatrixFn,
    s: C64,
    cutoff: f64,
    panel_nodes: usize,
) -> Result<(SquareMatrix, f64)> {
    if !(s.re > 0.0) {
        return Err(Error::DomainError("Laplace transform needs Re(s) > 0".into()));
    }
    if !(cutoff > 0.0) {
        return Err(Error::DomainError("cutoff must be positive".into()));
    }
    let base = QuadratureRule::gauss_legendre(panel_nodes.max(8))?;
    let mut acc: Option<SquareMatrix> = None;
    let mut lo = 0.0f64;
    let mut hi = 1.0f64.min(cutoff);
    loop {
        for (u, w) in base.nodes.iter().zip(&base.weights) {
            let t = lo + (hi - lo) * u;
            let v = f(t)?.scale((-s * t).exp() * (hi - lo) * *w);
            acc = Some(match acc {
                None => v,
                Some(a) => &a + &v,
            });
        }
        if hi >= cutoff {
            break;
        }
        lo = hi;
        hi = (hi * 2.0).min(cutoff);
    }
    // Tail estimate assuming sub-exponential growth past the cutoff:
    // |f(T)| e^(-Re(s) T) / Re(s), doubled for slack.
    let tail = 2.0 * f(cutoff)?.norm() * (-s.re * cutoff).exp() / s.re;
    Ok((acc.expect("at least one panel"), tail))
}

/// Laplace transform with a matrix-power weight:
/// `int_0^inf e^(-st) t^(P-I) g(t) dt`, per-row Jacobi on [0, 1] for the
/// endpoint and geometric Legendre panels up to `cutoff` beyond it.
pub fn laplace_power_transform(
    p: &SquareMatrix,
    g: MatrixFn,
    s: C64,
    cutoff: f64,
    nodes: usize,
) -> Result<(SquareMatrix, f64)> {
    let sp = eigen::spectrum(p)?;
    if sp.min_re <= 0.0 {
        return Err(Error::NotPositiveStable(sp.min_re));
    }
    // Diagonalize P alone (second slot unused: pass P itself).
    let diag = simultaneous_diag(p, p)?;
    let n = p.dim();
    let run = |nodes: usize| -> Result<SquareMatrix> {
        let mut rows = SquareMatrix::zeros(n);
        let base = QuadratureRule::gauss_legendre(nodes)?;
        for i in 0..n {
            let p_i = diag.a_eigs[i];
            // Singular panel [0, 1]: weight t^(p_i - 1).
            let rule = QuadratureRule::gauss_jacobi(nodes, 0.0, p_i.re - 1.0)?;
            for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                let gt = &(&diag.vectors_inv * &g(*t)?) * &diag.vectors;
                let phase = Complex64::new(0.0, p_i.im * t.ln()).exp();
                let factor = (-s * *t).exp() * phase * *w;
                for j in 0..n {
                    rows[(i, j)] += gt[(i, j)] * factor;
                }
            }
            // Smooth panels [1, cutoff].
            let mut lo = 1.0f64;
            let mut hi = 2.0f64.min(cutoff);
            while lo < cutoff {
                for (u, w) in base.nodes.iter().zip(&base.weights) {
                    let t = lo + (hi - lo) * u;
                    let gt = &(&diag.vectors_inv * &g(t)?) * &diag.vectors;
                    let tp = Complex64::new(0.0, 0.0) + (p_i - 1.0) * t.ln();
                    let factor = (-s * t).exp() * tp.exp() * (hi - lo) * *w;
                    for j in 0..n {
                        rows[(i, j)] += gt[(i, j)] * factor;
                    }
                }
                lo = hi;
                hi = (hi * 2.0).min(cutoff);
            }
        }
        Ok(&(&diag.vectors * &rows) * &diag.vectors_inv)
    };
    let coarse = run(nodes)?;
    let fine = run(nodes + 12)?;
    let err = (&fine - &coarse).norm() / fine.norm().max(1.0);
    Ok((fine, err))
}

/// Left Erdelyi-Kober operator
/// `E^(alpha,eta) f (x) = x^(-eta-alpha)/Gamma(alpha) int_0^x (x-t)^(alpha-1) t^eta f(t) dt`,
/// mapped to [0, 1] so both endpoint exponents sit in the Jacobi weight.
pub fn erdelyi_kober_left(
    f: MatrixFn,
    alpha: f64,
    eta: f64,
    x: f64,
    nodes: usize,
) -> Result<SquareMatrix> {
    if !(alpha > 0.0) || !(x > 0.0) {
        return Err(Error::SingularityUnresolved(format!(
            "left operator needs alpha > 0 and x > 0, got alpha={alpha}, x={x}"
        )));
    }
    if eta <= -1.0 {
        return Err(Error::SingularityUnresolved(format!("eta = {eta} <= -1")));
    }
    let rule = QuadratureRule::gauss_jacobi(nodes, alpha - 1.0, eta)?;
    let g = scalar::gamma(C64::new(alpha, 0.0));
    let mut int = rule.integrate_matrix(&mut |u| f(x * u))?;
    int = int.scale(1.0 / g);
    Ok(int)
}

/// Right Erdelyi-Kober operator
/// `K^(-alpha,eta) f (x) = x^eta/Gamma(alpha) int_x^inf (t-x)^(alpha-1) t^(-eta-alpha) f(t) dt`,
/// with the substitution t = x/u mapping [x, inf) onto (0, 1].
pub fn erdelyi_kober_right(
    f: MatrixFn,
    alpha: f64,
    eta: f64,
    x: f64,
    nodes: usize,
) -> Result<SquareMatrix> {
    if !(alpha > 0.0) || !(x > 0.0) {
        return Err(Error::SingularityUnresolved(format!(
            "right operator needs alpha > 0 and x > 0, got alpha={alpha}, x={x}"
        )));
    }
    if eta <= 0.0 {
        return Err(Error::DivergentIntegral(format!(
            "right operator diverges for eta = {eta} <= 0"
        )));
    }
    let run = |nodes: usize| -> Result<SquareMatrix> {
        let rule = QuadratureRule::gauss_jacobi(nodes, alpha - 1.0, eta - 1.0)?;
        rule.integrate_matrix(&mut |u| f(x / u))
    };
    let coarse = run(nodes)?;
    let fine = run(nodes + 16)?;
    let disagreement = (&fine - &coarse).norm() / fine.norm().max(1.0);
    if disagreement > 1e-7 {
        return Err(Error::DivergentIntegral(format!(
            "integrand grows too fast at infinity (refinement disagreement {disagreement:.3e})"
        )));
    }
    let g = scalar::gamma(C64::new(alpha, 0.0));
    Ok(fine.scale(1.0 / g))
}

/// Riemann-Liouville integral `I^mu f (x) = 1/Gamma(mu) int_0^x (x-t)^(mu-1) f(t) dt`.
pub fn rl_integral(f: MatrixFn, mu: f64, x: f64, nodes: usize) -> Result<SquareMatrix> {
    if !(mu > 0.0) || !(x > 0.0) {
        return Err(Error::SingularityUnresolved(format!(
            "needs mu > 0 and x > 0, got mu={mu}, x={x}"
        )));
    }
    let rule = QuadratureRule::gauss_jacobi(nodes, mu - 1.0, 0.0)?;
    let g = scalar::gamma(C64::new(mu, 0.0));
    let int = rule.integrate_matrix(&mut |u| f(x * u))?;
    Ok(int.scale(x.powf(mu) / g))
}

/// Left-sided RL integral on [b, x].
pub fn rl_integral_left(
    f: MatrixFn,
    alpha: f64,
    b: f64,
    x: f64,
    nodes: usize,
) -> Result<SquareMatrix> {
    if !(alpha > 0.0) || !(x > b) {
        return Err(Error::SingularityUnresolved(format!(
            "needs alpha > 0 and x > b, got alpha={alpha}, b={b}, x={x}"
        )));
    }
    let rule = QuadratureRule::gauss_jacobi(nodes, alpha - 1.0, 0.0)?;
    let g = scalar::gamma(C64::new(alpha, 0.0));
    let int = rule.integrate_matrix(&mut |u| f(b + (x - b) * u))?;
    Ok(int.scale((x - b).powf(alpha) / g))
}

/// Right-sided RL integral on [x, c].
pub fn rl_integral_right(
    f: MatrixFn,
    alpha: f64,
    x: f64,
    c: f64,
    nodes: usize,
) -> Result<SquareMatrix> {
    if !(alpha > 0.0) || !(c > x) {
        return Err(Error::SingularityUnresolved(format!(
            "needs alpha > 0 and c > x, got alpha={alpha}, x={x}, c={c}"
        )));
    }
    let rule = QuadratureRule::gauss_jacobi(nodes, 0.0, alpha - 1.0)?;
    let g = scalar::gamma(C64::new(alpha, 0.0));
    let int = rule.integrate_matrix(&mut |u| f(x + (c - x) * u))?;
    Ok(int.scale((c - x).powf(alpha) / g))
}

/// Which termwise fractional rule to apply to a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FracVariant {
    /// Left RL derivative in x - b.
    RlLeft,
    /// Right RL derivative in c - x.
    RlRight,
    /// Weyl derivative; carries the principal branch of (-1)^alpha.
    Weyl,
    /// Classical RL derivative.
    Classical,
    /// Weyl integral rule x^k -> x^(alpha+k) / (alpha)_k.
    WeylIntegral,
}

/// Apply the fractional monomial rule termwise to a pFq series.
///
/// Derivative variants map x^k to Gamma(k+1)/Gamma(k+1-alpha) x^(k-alpha);
/// the Weyl derivative additionally carries e^(i pi alpha), the principal
/// value of (-1)^alpha. The Weyl integral maps x^k to x^(alpha+k)/(alpha)_k.
/// These are coefficient maps: the defining [x, inf) integrals diverge on
/// entire integrands and the identities under test are termwise.
pub fn fractional_derivative_formal(
    params: &HyperParams,
    alpha: f64,
    variant: FracVariant,
    k_max: usize,
) -> Result<MatrixPowerSeries> {
    let base = MatrixPowerSeries::from_pfq(params, k_max)?;
    let offset = match variant {
        FracVariant::WeylIntegral => ExponentOffset::from_scalar(C64::new(alpha, 0.0)),
        _ => ExponentOffset::from_scalar(C64::new(-alpha, 0.0)),
    };
    let branch = if variant == FracVariant::Weyl {
        Complex64::new(0.0, std::f64::consts::PI * alpha).exp()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut coeffs = Vec::with_capacity(k_max + 1);
    let mut factorial = 1.0f64;
    for (k, c) in base.coeffs().iter().enumerate() {
        if k > 0 {
            factorial *= k as f64;
        }
        let factor = match variant {
            FracVariant::WeylIntegral => {
                let poch = scalar::pochhammer(C64::new(alpha, 0.0), k);
                if poch.norm() == 0.0 {
                    return Err(Error::SingularShift(format!("(alpha)_{k} vanishes")));
                }
                1.0 / poch
            }
            _ => branch * factorial * scalar::reciprocal_gamma(C64::new(k as f64 + 1.0 - alpha, 0.0)),
        };
        coeffs.push(c.scale(factor));
    }
    MatrixPowerSeries::new(offset, coeffs)
}
