//! Gaussian quadrature rules used as integral-representation oracles.
//!
//! Jacobi rules carry the endpoint weight t^beta (1-t)^alpha on [0, 1], so
//! algebraic endpoint singularities sit in the weight and the remaining
//! integrand stays analytic. Nodes and weights come from the Golub-Welsch
//! eigenproblem of the Jacobi recurrence; every constructed rule is validated
//! against the analytically known moments of its weight before use.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{C64, SquareMatrix};
use crate::scalar;

/// Which weight a rule integrates against.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleKind {
    /// Weight 1 on [0, 1].
    GaussLegendre,
    /// Weight t^beta (1-t)^alpha on [0, 1]; both exponents > -1.
    GaussJacobi { alpha: f64, beta: f64 },
    /// Weight e^-t on [0, cutoff], composed from Legendre panels.
    TruncatedExponential { cutoff: f64 },
}

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

const VALIDATION_DEGREE: usize = 20;
const VALIDATION_RTOL: f64 = 1e-12;

/// QL with implicit shifts on a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal, `e[i]` couples i and i+1, and `z` is updated as the
/// first row of the accumulated eigenvector matrix (all Golub-Welsch needs).
fn tridiag_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::EigenFailure(iter));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Jacobi-recurrence Golub-Welsch on [-1, 1] with weight (1-x)^a (1+x)^b.
fn jacobi_nodes_weights(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::DomainError("rule needs at least one node".into()));
    }
    if a <= -1.0 || b <= -1.0 {
        return Err(Error::DomainError(format!(
            "Jacobi exponents must exceed -1, got alpha={a}, beta={b}"
        )));
    }
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    let apb = a + b;
    d[0] = (b - a) / (apb + 2.0);
    for k in 1..n {
        let kf = k as f64;
        let denom = (2.0 * kf + apb) * (2.0 * kf + apb + 2.0);
        d[k] = (b * b - a * a) / denom;
        let beta_k = if k == 1 {
            // (1 + a + b) cancels; this form stays finite for a + b = -1.
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + apb).powi(2) * (3.0 + apb))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + apb)
                / ((2.0 * kf + apb).powi(2) * (2.0 * kf + apb + 1.0) * (2.0 * kf + apb - 1.0))
        };
        e[k - 1] = beta_k.sqrt();
    }
    let mut z = vec![0.0f64; n];
    z[0] = 1.0;
    tridiag_ql(&mut d, &mut e, &mut z)?;
    // Total mass 2^(a+b+1) B(a+1, b+1).
    let mu0 = 2.0f64.powf(apb + 1.0)
        * (scalar::gamma(C64::new(a + 1.0, 0.0)) * scalar::gamma(C64::new(b + 1.0, 0.0))
            / scalar::gamma(C64::new(apb + 2.0, 0.0)))
        .re;
    let mut pairs: Vec<(f64, f64)> =
        d.iter().zip(&z).map(|(&x, &q)| (x, mu0 * q * q)).collect();
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    Ok(pairs.into_iter().unzip())
}

impl QuadratureRule {
    /// n-point rule for t^beta (1-t)^alpha on [0, 1].
    pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        let (xs, ws) = jacobi_nodes_weights(n, alpha, beta)?;
        let scale = 2.0f64.powf(-(alpha + beta + 1.0));
        let nodes: Vec<f64> = xs.iter().map(|x| (x + 1.0) / 2.0).collect();
        let weights: Vec<f64> = ws.iter().map(|w| w * scale).collect();
        let rule = Self { kind: RuleKind::GaussJacobi { alpha, beta }, nodes, weights };
        rule.validate()?;
        Ok(rule)
    }

    /// n-point rule for weight 1 on [0, 1].
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        let mut rule = Self::gauss_jacobi(n, 0.0, 0.0)?;
        rule.kind = RuleKind::GaussLegendre;
        Ok(rule)
    }

    /// Composite rule for e^-t on [0, cutoff], geometric Legendre panels.
    pub fn truncated_exponential(cutoff: f64, panel_nodes: usize) -> Result<Self> {
        if !(cutoff > 0.0) {
            return Err(Error::DomainError("cutoff must be positive".into()));
        }
        let base = Self::gauss_legendre(panel_nodes.max(8))?;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut lo = 0.0f64;
        let mut hi = 1.0f64.min(cutoff);
        loop {
            for (t, w) in base.nodes.iter().zip(&base.weights) {
                let x = lo + (hi - lo) * t;
                nodes.push(x);
                weights.push(w * (hi - lo) * (-x).exp());
            }
            if hi >= cutoff {
                break;
            }
            lo = hi;
            hi = (hi * 2.0).min(cutoff);
        }
        let rule = Self { kind: RuleKind::TruncatedExponential { cutoff }, nodes, weights };
        rule.validate()?;
        Ok(rule)
    }

    fn moments(&self, up_to: usize) -> Vec<f64> {
        match self.kind {
            RuleKind::GaussLegendre => {
                (0..=up_to).map(|k| 1.0 / (k as f64 + 1.0)).collect()
            }
            RuleKind::GaussJacobi { alpha, beta } => {
                let mut out = Vec::with_capacity(up_to + 1);
                let m0 = (scalar::gamma(C64::new(beta + 1.0, 0.0))
                    * scalar::gamma(C64::new(alpha + 1.0, 0.0))
                    / scalar::gamma(C64::new(alpha + beta + 2.0, 0.0)))
                .re;
                out.push(m0);
                for k in 0..up_to {
                    let kf = k as f64;
                    let next = out[k] * (beta + kf + 1.0) / (alpha + beta + kf + 2.0);
                    out.push(next);
                }
                out
            }
            RuleKind::TruncatedExponential { cutoff } => {
                // m_k = k! (1 - e^-T sum_{j<=k} T^j/j!), the lower incomplete gamma.
                let mut out = Vec::with_capacity(up_to + 1);
                let et = (-cutoff).exp();
                let mut acc = 0.0f64;
                let mut term = 1.0f64;
                let mut factorial = 1.0f64;
                for k in 0..=up_to {
                    if k > 0 {
                        factorial *= k as f64;
                        term *= cutoff / k as f64;
                    }
                    acc += term;
                    out.push(factorial * (1.0 - et * acc));
                }
                out
            }
        }
    }

    /// Check node-weight sums against the weight moments, degrees <= 20.
    fn validate(&self) -> Result<()> {
        let deg = VALIDATION_DEGREE.min(2 * self.nodes.len() - 1);
        let want = self.moments(deg);
        for (k, want_k) in want.iter().enumerate() {
            let got: f64 = self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(t, w)| w * t.powi(k as i32))
                .sum();
            let rel = (got - want_k).abs() / want_k.abs().max(f64::MIN_POSITIVE);
            if rel > VALIDATION_RTOL {
                return Err(Error::QuadratureError { estimate: rel, tolerance: VALIDATION_RTOL });
            }
        }
        Ok(())
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> C64) -> C64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(*t) * *w;
        }
        acc
    }

    pub fn integrate_matrix(
        &self,
        f: &mut dyn FnMut(f64) -> Result<SquareMatrix>,
    ) -> Result<SquareMatrix> {
        let mut acc: Option<SquareMatrix> = None;
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(*t)?.scale_re(*w);
            acc = Some(match acc {
                None => v,
                Some(a) => &a + &v,
            });
        }
        acc.ok_or_else(|| Error::DomainError("empty quadrature rule".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomial_and_exp() {
        let rule = QuadratureRule::gauss_legendre(20).unwrap();
        let got = rule.integrate(|t| C64::new(t * t * t, 0.0));
        assert!((got.re - 0.25).abs() < 1e-14);
        let got = rule.integrate(|t| C64::new(t.exp(), 0.0));
        assert!((got.re - (std::f64::consts::E - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn jacobi_handles_endpoint_singularities() {
        // int_0^1 t^-0.5 (1-t)^-0.5 dt = pi.
        let rule = QuadratureRule::gauss_jacobi(12, -0.5, -0.5).unwrap();
        let got = rule.integrate(|_| C64::new(1.0, 0.0));
        assert!((got.re - std::f64::consts::PI).abs() < 1e-13);
        // With f = t it is pi/2.
        let got = rule.integrate(|t| C64::new(t, 0.0));
        assert!((got.re - std::f64::consts::PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn jacobi_beta_moment() {
        // int t^1.3 (1-t)^0.7 dt = B(2.3, 1.7).
        let rule = QuadratureRule::gauss_jacobi(16, 0.7, 1.3).unwrap();
        let got = rule.integrate(|_| C64::new(1.0, 0.0)).re;
        let want = (scalar::gamma(C64::new(2.3, 0.0)) * scalar::gamma(C64::new(1.7, 0.0))
            / scalar::gamma(C64::new(4.0, 0.0)))
        .re;
        assert!((got - want).abs() / want < 1e-13);
    }

    #[test]
    fn jacobi_is_exponentially_accurate_on_analytic_integrands() {
        let rule = QuadratureRule::gauss_jacobi(40, -0.3, -0.6).unwrap();
        // int_0^1 t^-0.6 (1-t)^-0.3 cos(3t) dt, reference from a 200-node rule.
        let reference = QuadratureRule::gauss_jacobi(200, -0.3, -0.6)
            .unwrap()
            .integrate(|t| C64::new((3.0 * t).cos(), 0.0));
        let got = rule.integrate(|t| C64::new((3.0 * t).cos(), 0.0));
        assert!((got - reference).norm() < 1e-13);
    }

    #[test]
    fn truncated_exponential_rule() {
        let rule = QuadratureRule::truncated_exponential(40.0, 24).unwrap();
        let got = rule.integrate(|_| C64::new(1.0, 0.0)).re;
        assert!((got - 1.0).abs() < 1e-12);
        let got = rule.integrate(|t| C64::new(t, 0.0)).re;
        assert!((got - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_exponents_rejected() {
        assert!(QuadratureRule::gauss_jacobi(10, -1.0, 0.0).is_err());
        assert!(QuadratureRule::gauss_jacobi(10, 0.0, -1.2).is_err());
    }
}
