//! Generalized hypergeometric matrix functions pFq and growth diagnostics.
//!
//! Terms are generated by the ratio recurrence
//! `U_{s+1} = U_s (prod_i A_i + sI) (prod_j (B_j + sI)^-1) / (s+1)`,
//! never by fresh factorials. Convergence is declared once a window of
//! consecutive term norms falls below the absolute tolerance; matrix term
//! norms can dip non-monotonically at small s, so a single small term is not
//! trusted.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{C64, SquareMatrix};

/// Parameter lists of a pFq instance. All matrices must share the dimension
/// and pairwise commute; this is validated once at construction.
#[derive(Debug, Clone)]
pub struct HyperParams {
    numerators: Vec<SquareMatrix>,
    denominators: Vec<SquareMatrix>,
    dim: usize,
}

impl HyperParams {
    pub fn new(numerators: Vec<SquareMatrix>, denominators: Vec<SquareMatrix>) -> Result<Self> {
        let dim = numerators
            .first()
            .or_else(|| denominators.first())
            .map(|m| m.dim())
            .ok_or_else(|| Error::DomainError("pFq needs at least one parameter".into()))?;
        let all: Vec<&SquareMatrix> = numerators.iter().chain(denominators.iter()).collect();
        for m in &all {
            if m.dim() != dim {
                return Err(Error::ShapeMismatch(format!("{} vs {}", m.dim(), dim)));
            }
        }
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                let defect = all[i].commutator_defect(all[j]);
                if defect > crate::gamma::COMMUTE_TOL {
                    return Err(Error::NonCommuting(defect));
                }
            }
        }
        Ok(Self { numerators, denominators, dim })
    }

    /// Convenience constructor for dim-1 instances from complex scalars.
    pub fn scalar(numerators: &[C64], denominators: &[C64]) -> Result<Self> {
        Ok(Self {
            numerators: numerators.iter().map(|&z| SquareMatrix::scalar(1, z)).collect(),
            denominators: denominators.iter().map(|&z| SquareMatrix::scalar(1, z)).collect(),
            dim: 1,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn numerators(&self) -> &[SquareMatrix] {
        &self.numerators
    }

    pub fn denominators(&self) -> &[SquareMatrix] {
        &self.denominators
    }

    /// Shift every parameter by `k` (A -> A + kI), as contiguous relations do.
    pub fn shift_all(&self, k: f64) -> Self {
        let s = |m: &SquareMatrix| m.add_scalar(C64::new(k, 0.0));
        Self {
            numerators: self.numerators.iter().map(s).collect(),
            denominators: self.denominators.iter().map(s).collect(),
            dim: self.dim,
        }
    }
}

/// Stopping controls for series evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub abs_tol: f64,
    pub tail_window: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { max_terms: 400, abs_tol: 1e-14, tail_window: 3 }
    }
}

impl SeriesControl {
    pub fn validate(&self) -> Result<()> {
        if self.tail_window < 1 || self.max_terms < self.tail_window || !(self.abs_tol > 0.0) {
            return Err(Error::DomainError(format!(
                "invalid series control: max_terms={} abs_tol={} tail_window={}",
                self.max_terms, self.abs_tol, self.tail_window
            )));
        }
        Ok(())
    }
}

/// Converged partial sum with the tail bound actually achieved.
#[derive(Debug, Clone)]
pub struct PfqValue {
    pub value: SquareMatrix,
    pub terms_used: usize,
    pub tail_bound: f64,
}

fn advance_coefficient(
    u: &SquareMatrix,
    params: &HyperParams,
    s: usize,
) -> Result<SquareMatrix> {
    let sh = C64::new(s as f64, 0.0);
    let mut next = u.clone();
    for a in &params.numerators {
        next = &next * &a.add_scalar(sh);
    }
    for b in &params.denominators {
        let shifted = b.add_scalar(sh);
        if shifted.invertibility_margin() <= 1e-12 {
            return Err(Error::SingularDenominator(format!("B + {s}I")));
        }
        next = next.div_right(&shifted)?;
    }
    Ok(next.scale_re(1.0 / (s as f64 + 1.0)))
}

/// Evaluate pFq(params; z) by the term recurrence.
pub fn eval_pfq(params: &HyperParams, z: C64, ctrl: &SeriesControl) -> Result<PfqValue> {
    ctrl.validate()?;
    let mut u = SquareMatrix::identity(params.dim);
    let mut sum = SquareMatrix::zeros(params.dim);
    let mut zpow = Complex64::new(1.0, 0.0);
    let mut window = 0usize;
    let mut last_norm = f64::INFINITY;
    for s in 0..ctrl.max_terms {
        let term = u.scale(zpow);
        sum = &sum + &term;
        last_norm = term.norm();
        if last_norm < ctrl.abs_tol {
            window += 1;
            if window >= ctrl.tail_window {
                return Ok(PfqValue { value: sum, terms_used: s + 1, tail_bound: last_norm });
            }
        } else {
            window = 0;
        }
        u = advance_coefficient(&u, params, s)?;
        zpow *= z;
    }
    Err(Error::Nonconvergence { max_terms: ctrl.max_terms, last_term: last_norm })
}

/// Exact coefficients U_0..U_K of the series.
pub fn pfq_coefficients(params: &HyperParams, k_max: usize) -> Result<Vec<SquareMatrix>> {
    let mut coeffs = Vec::with_capacity(k_max + 1);
    coeffs.push(SquareMatrix::identity(params.dim));
    for s in 0..k_max {
        let next = advance_coefficient(&coeffs[s], params, s)?;
        coeffs.push(next);
    }
    Ok(coeffs)
}

/// Sampled order and type trajectories of an entire pFq.
///
/// The lim sups of the defining formulas are reported as sampled sequences;
/// desk-scale s cannot certify a limit, and the trajectories converge only at
/// a log rate, which is why downstream checks use wide tolerances.
#[derive(Debug, Clone)]
pub struct OrderTypeEstimate {
    /// (s, ln ||U_s||) for every sampled index.
    pub log_norms: Vec<(usize, f64)>,
    /// (s, rho_hat(s)) with rho_hat(s) = s ln s / ln(1/||U_s||).
    pub order_samples: Vec<(usize, f64)>,
    /// (s, tau_hat(s)) at the reference order used (1/2 for 1F2).
    pub type_samples: Vec<(usize, f64)>,
    /// Reference order used for the type samples.
    pub rho_reference: f64,
}

impl OrderTypeEstimate {
    /// Recompute the type trajectory for a different reference order.
    pub fn type_samples_with(&self, rho: f64) -> Vec<(usize, f64)> {
        self.log_norms
            .iter()
            .map(|&(s, ln)| {
                let tau = (s as f64) * (rho * ln / s as f64).exp() / (std::f64::consts::E * rho);
                (s, tau)
            })
            .collect()
    }
}

/// Sample rho_hat and tau_hat on a grid of term indices.
///
/// Coefficient norms are tracked in log space (norm-rescaled recurrence), so
/// sampling indices in the hundreds does not underflow.
pub fn order_type_estimate(
    params: &HyperParams,
    s_grid: &[usize],
    rho_reference: f64,
) -> Result<OrderTypeEstimate> {
    let &s_max = s_grid.iter().max().ok_or_else(|| {
        Error::DomainError("order/type estimate needs a non-empty sample grid".into())
    })?;
    let mut u = SquareMatrix::identity(params.dim);
    let mut log_norm = 0.0f64;
    let mut samples = Vec::with_capacity(s_grid.len());
    for s in 0..=s_max {
        if s_grid.contains(&s) {
            let n = u.norm();
            if n == 0.0 {
                return Err(Error::DegenerateSeries(s));
            }
            samples.push((s, log_norm + n.ln()));
        }
        if s < s_max {
            u = advance_coefficient(&u, params, s)?;
            let n = u.norm();
            if n == 0.0 {
                return Err(Error::DegenerateSeries(s + 1));
            }
            log_norm += n.ln();
            u = u.scale_re(1.0 / n);
        }
    }
    let order_samples = samples
        .iter()
        .map(|&(s, ln)| {
            let sf = s as f64;
            (s, sf * sf.ln() / (-ln))
        })
        .collect();
    let est = OrderTypeEstimate {
        log_norms: samples,
        order_samples,
        type_samples: Vec::new(),
        rho_reference,
    };
    let type_samples = est.type_samples_with(rho_reference);
    Ok(OrderTypeEstimate { type_samples, ..est })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn one_f_two(a: f64, b: f64, cc: f64) -> HyperParams {
        HyperParams::scalar(&[c(a, 0.0)], &[c(b, 0.0), c(cc, 0.0)]).unwrap()
    }

    #[test]
    fn value_at_zero_is_identity() {
        let p = one_f_two(1.0, 1.5, 2.0);
        let v = eval_pfq(&p, c(0.0, 0.0), &SeriesControl::default()).unwrap();
        assert!(v.value.approx_eq(&SquareMatrix::identity(1), 1e-15));
    }

    #[test]
    fn parameter_cancellation() {
        // 1F2 with A = B reduces to 0F1(-; C; z).
        let a = SquareMatrix::from_real(2, &[1.1, 0.4, 0.0, 0.9]).unwrap();
        let cc = &(&a * &a).scale_re(0.3) + &SquareMatrix::scalar(2, c(1.2, 0.0));
        let p12 = HyperParams::new(vec![a.clone()], vec![a.clone(), cc.clone()]).unwrap();
        let p01 = HyperParams::new(vec![], vec![cc]).unwrap();
        let z = c(0.8, 0.3);
        let v1 = eval_pfq(&p12, z, &SeriesControl::default()).unwrap().value;
        let v2 = eval_pfq(&p01, z, &SeriesControl::default()).unwrap().value;
        assert!((&v1 - &v2).norm() < 1e-12);
    }

    #[test]
    fn scalar_series_against_direct_sum() {
        // 1F2(1; 1.5, 2; 0.7) summed naively with fresh Pochhammers.
        let z = 0.7f64;
        let (a, b, cc) = (1.0f64, 1.5, 2.0);
        let mut direct = 0.0f64;
        for k in 0..60usize {
            let mut t = 1.0f64;
            for j in 0..k {
                let jf = j as f64;
                t *= (a + jf) / ((b + jf) * (cc + jf));
            }
            for j in 1..=k {
                t /= j as f64;
            }
            direct += t * z.powi(k as i32);
        }
        let p = one_f_two(a, b, cc);
        let v = eval_pfq(&p, c(z, 0.0), &SeriesControl::default()).unwrap();
        assert!((v.value[(0, 0)].re - direct).abs() < 1e-12);
    }

    #[test]
    fn coefficients_of_unit_parameter_instances() {
        // 1F1(1; 1) is the exponential series: U_k = 1/k!.
        let p = HyperParams::scalar(&[c(1.0, 0.0)], &[c(1.0, 0.0)]).unwrap();
        let coeffs = pfq_coefficients(&p, 6).unwrap();
        let mut factorial = 1.0f64;
        for (k, u) in coeffs.iter().enumerate() {
            if k > 0 {
                factorial *= k as f64;
            }
            assert!((u[(0, 0)].re - 1.0 / factorial).abs() < 1e-14);
        }
        // 1F2(1; 1, 1) cancels to 0F1(-; 1): U_k = 1/(k!)^2.
        let p = one_f_two(1.0, 1.0, 1.0);
        let coeffs = pfq_coefficients(&p, 6).unwrap();
        let mut factorial = 1.0f64;
        for (k, u) in coeffs.iter().enumerate() {
            if k > 0 {
                factorial *= k as f64;
            }
            assert!((u[(0, 0)].re - 1.0 / (factorial * factorial)).abs() < 1e-14);
        }
    }

    #[test]
    fn polynomial_truncation() {
        // Numerator -2I kills coefficients past k = 2.
        let a = SquareMatrix::scalar(2, c(-2.0, 0.0));
        let b = SquareMatrix::scalar(2, c(1.3, 0.0));
        let d = SquareMatrix::scalar(2, c(1.9, 0.0));
        let p = HyperParams::new(vec![a], vec![b, d]).unwrap();
        let coeffs = pfq_coefficients(&p, 5).unwrap();
        assert!(coeffs[3].is_zero(1e-15));
        assert!(coeffs[5].is_zero(1e-15));
    }

    #[test]
    fn termination_within_budget() {
        let p = one_f_two(2.2, 1.1, 0.7);
        let v = eval_pfq(&p, c(10.0, 0.0), &SeriesControl::default()).unwrap();
        assert!(v.terms_used <= 200, "used {} terms", v.terms_used);
    }

    #[test]
    fn nonconvergence_is_reported() {
        let p = one_f_two(1.0, 1.2, 1.4);
        let ctrl = SeriesControl { max_terms: 4, ..Default::default() };
        assert!(matches!(
            eval_pfq(&p, c(3.0, 0.0), &ctrl),
            Err(Error::Nonconvergence { .. })
        ));
    }

    #[test]
    fn order_estimate_drifts_to_half() {
        let p = one_f_two(1.0, 1.3, 1.7);
        let est = order_type_estimate(&p, &[100, 300, 500], 0.5).unwrap();
        let rho_500 = est.order_samples.last().unwrap().1;
        assert!((rho_500 - 0.5).abs() < 0.1, "rho(500) = {rho_500}");
        let tau_500 = est.type_samples.last().unwrap().1;
        assert!((tau_500 - 2.0).abs() < 0.5, "tau(500) = {tau_500}");
    }

    #[test]
    fn order_estimator_distinguishes_exp() {
        // 1F1(1;1) is the exponential series: order 1, type 1. This pins the
        // estimator's normalization before trusting it on matrix 1F2 output.
        let p = HyperParams::scalar(&[c(1.0, 0.0)], &[c(1.0, 0.0)]).unwrap();
        let est = order_type_estimate(&p, &[100, 300, 500], 1.0).unwrap();
        // The trajectory converges at a log rate; assert the drift toward 1
        // and a clear separation from the order-1/2 band of 1F2.
        let rho_100 = est.order_samples[0].1;
        let rho_500 = est.order_samples.last().unwrap().1;
        assert!(rho_500 < rho_100, "not drifting down: {rho_100} -> {rho_500}");
        assert!((rho_500 - 1.0).abs() < 0.25, "rho = {rho_500}");
        assert!(rho_500 > 0.9);
        let tau = est.type_samples.last().unwrap().1;
        assert!((tau - 1.0).abs() < 0.25, "tau = {tau}");
    }

    #[test]
    fn degenerate_series_detected() {
        let p = one_f_two(-3.0, 1.3, 1.7);
        assert!(matches!(
            order_type_estimate(&p, &[10, 50], 0.5),
            Err(Error::DegenerateSeries(_))
        ));
    }

    #[test]
    fn noncommuting_params_rejected() {
        let x = SquareMatrix::from_real(2, &[1.0, 1.0, 0.0, 2.0]).unwrap();
        let y = SquareMatrix::from_real(2, &[1.0, 0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            HyperParams::new(vec![x], vec![y]),
            Err(Error::NonCommuting(_))
        ));
    }
}
