//! Young's matrix functions, Bessel matrix functions, their mutual
//! expansions, and the third-order Young differential equation.
//!
//! The definition gives Y_A two printed expressions (a prefactored 1F2 and a
//! reciprocal-gamma sum); evaluation computes both and reports their
//! agreement, so every call doubles as a self-check. At A = 0 the function
//! reduces to cos x and at A = I to sin x, which the tests pin down.

use crate::error::{Error, Result};
use crate::gamma::{matrix_gamma, pochhammer, reciprocal_gamma, shift_invertible};
use crate::hyper::{HyperParams, SeriesControl};
use crate::matrix::{C64, SquareMatrix};
use crate::series::{
    ExponentOffset, MatrixPowerSeries, OpFactor, OperatorSpec, OperatorTerm, operator_residual,
};
use crate::{eigen, hyper};

/// Parameter of the Young family.
#[derive(Debug, Clone)]
pub struct YoungParams {
    pub a: SquareMatrix,
}

impl YoungParams {
    pub fn new(a: SquareMatrix) -> Result<Self> {
        let half_a1 = a.add_scalar(C64::new(1.0, 0.0)).scale_re(0.5);
        let half_a2 = a.add_scalar(C64::new(2.0, 0.0)).scale_re(0.5);
        for (name, m) in [("(A+I)/2", &half_a1), ("(A+2I)/2", &half_a2)] {
            for k in 0..4usize {
                if !shift_invertible(m, k) {
                    return Err(Error::SingularShift(format!("{name} + {k}I")));
                }
            }
        }
        Ok(Self { a })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

/// Y_A(x) together with the agreement between its two printed forms.
#[derive(Debug, Clone)]
pub struct YoungValue {
    pub value: SquareMatrix,
    /// Relative disagreement between the 1F2 form and the sum form.
    pub consistency: f64,
}

fn young_hyper_params(a: &SquareMatrix) -> Result<HyperParams> {
    let dim = a.dim();
    HyperParams::new(
        vec![SquareMatrix::identity(dim)],
        vec![
            a.add_scalar(C64::new(1.0, 0.0)).scale_re(0.5),
            a.add_scalar(C64::new(2.0, 0.0)).scale_re(0.5),
        ],
    )
}

/// Y_A(x) = x^A Gamma^-1(A+I) 1F2(I; (A+I)/2, (A+2I)/2; -x^2/4), with the
/// reciprocal-gamma sum form evaluated alongside as a cross-check.
pub fn young_y(p: &YoungParams, x: f64, ctrl: &SeriesControl) -> Result<YoungValue> {
    if !(x > 0.0) {
        return Err(Error::DomainError(format!("Young function needs x > 0, got {x}")));
    }
    let a = &p.a;
    let params = young_hyper_params(a)?;
    let z = C64::new(-x * x / 4.0, 0.0);
    let f = hyper::eval_pfq(&params, z, ctrl)?;
    let xa = eigen::matrix_power(x, a)?;
    let ga_inv = reciprocal_gamma(&a.add_scalar(C64::new(1.0, 0.0)))?;
    let form1 = &(&xa * &ga_inv) * &f.value;

    // Sum form: x^A sum_k (-1)^k Gamma^-1(A+(2k+1)I) x^(2k).
    let mut acc = SquareMatrix::zeros(p.dim());
    let mut window = 0usize;
    let mut converged = false;
    for k in 0..ctrl.max_terms {
        let g = reciprocal_gamma(&a.add_scalar(C64::new(2.0 * k as f64 + 1.0, 0.0)))?;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = g.scale_re(sign * x.powi(2 * k as i32));
        acc = &acc + &term;
        if term.norm() < ctrl.abs_tol {
            window += 1;
            if window >= ctrl.tail_window {
                converged = true;
                break;
            }
        } else {
            window = 0;
        }
    }
    if !converged {
        return Err(Error::Nonconvergence { max_terms: ctrl.max_terms, last_term: f64::NAN });
    }
    let form2 = &xa * &acc;
    let consistency = (&form1 - &form2).norm() / form1.norm().max(f64::MIN_POSITIVE);
    Ok(YoungValue { value: form1, consistency })
}

/// Bessel matrix function J_A(x) = Gamma^-1(A+I) (x/2)^A 0F1(-; A+I; -x^2/4).
pub fn bessel_j_matrix(a: &SquareMatrix, x: f64) -> Result<SquareMatrix> {
    if !(x > 0.0) {
        return Err(Error::DomainError(format!("Bessel function needs x > 0, got {x}")));
    }
    let shifted = a.add_scalar(C64::new(1.0, 0.0));
    for k in 0..4usize {
        if !shift_invertible(&shifted, k) {
            return Err(Error::SingularShift(format!("A + I + {k}I")));
        }
    }
    let params = HyperParams::new(vec![], vec![shifted.clone()])?;
    let f = hyper::eval_pfq(&params, C64::new(-x * x / 4.0, 0.0), &SeriesControl::default())?;
    let prefactor = eigen::matrix_power(x / 2.0, a)?;
    let g = reciprocal_gamma(&shifted)?;
    Ok(&(&g * &prefactor) * &f.value)
}

/// Which Bessel/Young mutual expansion to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionVariant {
    /// Y_A as a Bessel sum, orders (A+2kI)/2.
    V439,
    /// Y_A as a Bessel sum, orders (A+(2k-1)I)/2.
    V440,
    /// J_{A/2} as a Young sum.
    V441,
    /// J_{(A-I)/2} as a Young sum.
    V442,
}

/// Partial sum of an expansion with the error trajectory against the
/// directly evaluated target.
#[derive(Debug, Clone)]
pub struct ExpansionReport {
    pub partial: SquareMatrix,
    pub target: SquareMatrix,
    /// Relative error after including term k, for k = 0..k_max.
    pub errors: Vec<f64>,
}

/// Evaluate a Young/Bessel mutual expansion up to `k_max` terms.
///
/// `printed` selects the form exactly as stated; the corrected variants fix
/// the stray x^(2k) factor in the first expansion and the (2x) exponent in
/// the last one.
pub fn young_expansion(
    variant: ExpansionVariant,
    printed: bool,
    p: &YoungParams,
    x: f64,
    k_max: usize,
    ctrl: &SeriesControl,
) -> Result<ExpansionReport> {
    if !(x > 0.0 && x < 4.0) {
        return Err(Error::DomainError(format!("expansions are checked on 0 < x < 4, got {x}")));
    }
    let a = &p.a;
    let dim = p.dim();
    let one = C64::new(1.0, 0.0);
    let target = match variant {
        ExpansionVariant::V439 | ExpansionVariant::V440 => young_y(p, x, ctrl)?.value,
        ExpansionVariant::V441 => bessel_j_matrix(&a.scale_re(0.5), x)?,
        ExpansionVariant::V442 => bessel_j_matrix(&a.add_scalar(-one).scale_re(0.5), x)?,
    };
    let ga_inv = reciprocal_gamma(&a.add_scalar(one))?;
    let poch_half_am = pochhammer(&a.add_scalar(-one).scale_re(0.5), k_max); // ((A-I)/2)_k
    let poch_half_a = pochhammer(&a.scale_re(0.5), k_max); // (A/2)_k
    let poch_a1 = pochhammer(&a.add_scalar(one), 2 * k_max); // (A+I)_2k
    let mut acc = SquareMatrix::zeros(dim);
    let mut errors = Vec::with_capacity(k_max + 1);
    let mut k_fact = 1.0f64;
    for k in 0..=k_max {
        if k > 0 {
            k_fact *= k as f64;
        }
        let kf = k as f64;
        let term = match variant {
            ExpansionVariant::V439 => {
                let order = a.add_scalar(C64::new(2.0 * kf, 0.0)).scale_re(0.5);
                let twox = eigen::matrix_power(2.0 * x, &order)?;
                let g = matrix_gamma(&a.add_scalar(C64::new(2.0 * kf + 2.0, 0.0)).scale_re(0.5))?;
                let j = bessel_j_matrix(&order, x)?;
                let t = &(&(&twox * poch_half_am.term(k)) * &ga_inv) * &g;
                let t = &t.div_right(poch_a1.term(2 * k))? * &j;
                let scale = if printed { x.powi(2 * k as i32) } else { 1.0 };
                t.scale_re(scale / k_fact)
            }
            ExpansionVariant::V440 => {
                let order = a.add_scalar(C64::new(2.0 * kf - 1.0, 0.0)).scale_re(0.5);
                let expo = a.add_scalar(C64::new(2.0 * kf + 1.0, 0.0)).scale_re(0.5);
                let twox = eigen::matrix_power(2.0 * x, &expo)?;
                let g = matrix_gamma(&expo)?;
                let j = bessel_j_matrix(&order, x)?;
                let t = &(&(&twox * poch_half_a.term(k)) * &ga_inv) * &g;
                let t = &t.div_right(poch_a1.term(2 * k))? * &j;
                t.scale_re(0.5 / k_fact)
            }
            ExpansionVariant::V441 => {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let twox = eigen::matrix_power(2.0 * x, &a.scale_re(-0.5))?;
                let g_half_inv =
                    reciprocal_gamma(&a.add_scalar(C64::new(2.0, 0.0)).scale_re(0.5))?;
                let g_big = matrix_gamma(&a.add_scalar(C64::new(2.0 * kf + 1.0, 0.0)))?;
                let y = young_y(&YoungParams::new(a.add_scalar(C64::new(2.0 * kf, 0.0)))?, x, ctrl)?
                    .value;
                let t = &(&(&twox * poch_half_am.term(k)) * &g_half_inv) * &g_big;
                let t = &t.div_right(poch_a1.term(2 * k))? * &y;
                t.scale_re(sign / k_fact)
            }
            ExpansionVariant::V442 => {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let expo = if printed {
                    a.scale_re(-0.5)
                } else {
                    a.add_scalar(one).scale_re(-0.5)
                };
                let twox = eigen::matrix_power(2.0 * x, &expo)?;
                let g_half_inv = reciprocal_gamma(&a.add_scalar(one).scale_re(0.5))?;
                let g_big = matrix_gamma(&a.add_scalar(C64::new(2.0 * kf + 1.0, 0.0)))?;
                let y = young_y(&YoungParams::new(a.add_scalar(C64::new(2.0 * kf, 0.0)))?, x, ctrl)?
                    .value;
                let t = &(&(&twox * poch_half_a.term(k)) * &g_half_inv) * &g_big;
                let t = &t.div_right(poch_a1.term(2 * k))? * &y;
                t.scale_re(2.0 * sign / k_fact)
            }
        };
        acc = &acc + &term;
        errors.push((&acc - &target).norm() / target.norm().max(f64::MIN_POSITIVE));
    }
    Ok(ExpansionReport { partial: acc, target, errors })
}

/// Formal series of Y_A: offset A, coefficient (-1)^j Gamma^-1(A+(2j+1)I) at
/// even index 2j, zero at odd indices.
pub fn young_series(a: &SquareMatrix, k_order: usize) -> Result<MatrixPowerSeries> {
    let dim = a.dim();
    let mut coeffs = Vec::with_capacity(k_order + 1);
    for k in 0..=k_order {
        if k % 2 == 1 {
            coeffs.push(SquareMatrix::zeros(dim));
        } else {
            let j = (k / 2) as f64;
            let g = reciprocal_gamma(&a.add_scalar(C64::new(2.0 * j + 1.0, 0.0)))?;
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            coeffs.push(g.scale_re(sign));
        }
    }
    MatrixPowerSeries::new(ExponentOffset::from_matrix(a.clone()), coeffs)
}

/// The Young equation operator. `scaled` selects the printed
/// x^3 Y''' + (2I-A) x^2 Y'' + x^3 Y' + (2I-A) x^2 Y form; otherwise the
/// prose form with the common x^2 divided out.
pub fn young_ode_operator(a: &SquareMatrix, scaled: bool) -> OperatorSpec {
    let two_minus_a = &SquareMatrix::scalar(a.dim(), C64::new(2.0, 0.0)) - a;
    let p = if scaled { (3i64, 2i64) } else { (1, 0) };
    OperatorSpec::new(vec![
        OperatorTerm::new(vec![
            OpFactor::PowZ(p.0),
            OpFactor::Derivative,
            OpFactor::Derivative,
            OpFactor::Derivative,
        ]),
        OperatorTerm::new(vec![
            OpFactor::Const(two_minus_a.clone()),
            OpFactor::PowZ(p.1),
            OpFactor::Derivative,
            OpFactor::Derivative,
        ]),
        OperatorTerm::new(vec![OpFactor::PowZ(p.0), OpFactor::Derivative]),
        OperatorTerm::new(vec![OpFactor::Const(two_minus_a), OpFactor::PowZ(p.1)]),
    ])
}

/// Formal residual of the Young ODE on the Y_A series, testing both the
/// x^2-scaled printed form and the prose form.
pub fn young_ode_residual(a: &SquareMatrix, k_order: usize) -> Result<f64> {
    let series = young_series(a, k_order)?;
    let (r_scaled, _) = operator_residual(&series, &young_ode_operator(a, true))?;
    let (r_prose, _) = operator_residual(&series, &young_ode_operator(a, false))?;
    Ok(r_scaled.max(r_prose))
}

/// The intermediate equation for W = Gamma(A+I) x^-A Y_A:
/// x^2 W''' + 2(A+I) x W'' + (x^2 I + A(A+I)) W' + 2x W = 0.
pub fn young_w_operator(a: &SquareMatrix) -> OperatorSpec {
    let id = SquareMatrix::identity(a.dim());
    let a1 = &a.clone() + &id;
    OperatorSpec::new(vec![
        OperatorTerm::new(vec![
            OpFactor::PowZ(2),
            OpFactor::Derivative,
            OpFactor::Derivative,
            OpFactor::Derivative,
        ]),
        OperatorTerm::new(vec![
            OpFactor::Const(a1.scale_re(2.0)),
            OpFactor::PowZ(1),
            OpFactor::Derivative,
            OpFactor::Derivative,
        ]),
        OperatorTerm::new(vec![OpFactor::PowZ(2), OpFactor::Derivative]),
        OperatorTerm::new(vec![OpFactor::Const(&a.clone() * &a1), OpFactor::Derivative]),
        OperatorTerm::new(vec![OpFactor::Scalar(C64::new(2.0, 0.0)), OpFactor::PowZ(1)]),
    ])
}

/// Series in x of W = 1F2(I; (A+I)/2, (A+2I)/2; -x^2/4), offset zero.
pub fn young_w_series(a: &SquareMatrix, k_order: usize) -> Result<MatrixPowerSeries> {
    let params = young_hyper_params(a)?;
    let u = crate::hyper::pfq_coefficients(&params, k_order / 2)?;
    let dim = a.dim();
    let mut coeffs = Vec::with_capacity(k_order + 1);
    for k in 0..=k_order {
        if k % 2 == 1 {
            coeffs.push(SquareMatrix::zeros(dim));
        } else {
            let j = k / 2;
            let scale = (-0.25f64).powi(j as i32);
            coeffs.push(u[j].scale_re(scale));
        }
    }
    MatrixPowerSeries::new(ExponentOffset::zero(), coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn scalar_young(a: f64) -> YoungParams {
        YoungParams::new(SquareMatrix::from_real(1, &[a]).unwrap()).unwrap()
    }

    #[test]
    fn young_zero_order_is_cosine() {
        // Both printed forms give Y_0(x) = cos x.
        let p = scalar_young(0.0);
        for &x in &[0.4f64, 1.3, 2.7] {
            let v = young_y(&p, x, &SeriesControl::default()).unwrap();
            assert!(v.consistency < 1e-12);
            assert!(
                (v.value[(0, 0)] - c(x.cos(), 0.0)).norm() < 1e-13,
                "x={x}: {} vs {}",
                v.value[(0, 0)],
                x.cos()
            );
        }
    }

    #[test]
    fn young_first_order_is_sine() {
        let p = scalar_young(1.0);
        for &x in &[0.5f64, 1.9] {
            let v = young_y(&p, x, &SeriesControl::default()).unwrap();
            assert!((v.value[(0, 0)] - c(x.sin(), 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn young_w_at_first_order_is_sinc() {
        // W = Gamma(A+I) x^-A Y_A; at A = I this is sin(x)/x,
        // with x^(2j) coefficient (-1)^j/(2j+1)!.
        let a = SquareMatrix::from_real(1, &[1.0]).unwrap();
        let w = young_w_series(&a, 12).unwrap();
        for j in 0..=5usize {
            let k = 2 * j;
            let got = w.coeffs()[k][(0, 0)].re;
            let mut fact = 1.0f64;
            for m in 2..=(k + 1) {
                fact *= m as f64;
            }
            let want = (if j % 2 == 0 { 1.0 } else { -1.0 }) / fact;
            assert!((got - want).abs() < 1e-14, "k={k}: {got} vs {want}");
        }
    }

    #[test]
    fn young_tends_to_one_at_origin() {
        let p = scalar_young(0.0);
        let v = young_y(&p, 1e-6, &SeriesControl::default()).unwrap();
        assert!((v.value[(0, 0)] - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn young_forms_agree_on_random_matrix() {
        let a = SquareMatrix::from_real(2, &[0.7, 0.4, 0.0, 1.2]).unwrap();
        let p = YoungParams::new(a).unwrap();
        let v = young_y(&p, 1.3, &SeriesControl::default()).unwrap();
        assert!(v.consistency < 1e-10, "consistency {:e}", v.consistency);
    }

    #[test]
    fn bessel_matches_classical_values() {
        let zero = SquareMatrix::from_real(1, &[0.0]).unwrap();
        let v = bessel_j_matrix(&zero, 1.0).unwrap();
        assert!((v[(0, 0)].re - 0.765_197_686_557_966_6).abs() < 1e-10);
        // J_{1/2}(x) = sqrt(2/(pi x)) sin x.
        let half = SquareMatrix::from_real(1, &[0.5]).unwrap();
        for &x in &[0.7f64, 1.9, 3.1] {
            let v = bessel_j_matrix(&half, x).unwrap();
            let want = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin();
            assert!((v[(0, 0)].re - want).abs() < 1e-10 * want.abs().max(1.0), "x={x}");
        }
        let v = bessel_j_matrix(&zero, 1e-8).unwrap();
        assert!((v[(0, 0)].re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn young_ode_scalar_closed_forms() {
        // A = 0 (cos x) and A = I (sin x) satisfy the printed equation.
        for a in [0.0f64, 1.0] {
            let m = SquareMatrix::from_real(1, &[a]).unwrap();
            let r = young_ode_residual(&m, 30).unwrap();
            assert!(r < 1e-12, "A={a}: residual {r:e}");
        }
    }

    #[test]
    fn young_ode_random_matrix() {
        let a = SquareMatrix::from_real(2, &[0.8, 0.5, 0.0, 1.4]).unwrap();
        let r = young_ode_residual(&a, 30).unwrap();
        assert!(r < 1e-10, "residual {r:e}");
    }

    #[test]
    fn w_equation_annihilates_w_series() {
        let a = SquareMatrix::from_real(2, &[0.9, 0.3, 0.0, 1.5]).unwrap();
        let w = young_w_series(&a, 24).unwrap();
        let (r, _) = operator_residual(&w, &young_w_operator(&a)).unwrap();
        assert!(r < 1e-12, "residual {r:e}");
    }

    #[test]
    fn expansion_440_converges_to_young() {
        // Correct as printed.
        let p = scalar_young(1.0);
        let rep =
            young_expansion(ExpansionVariant::V440, true, &p, 0.8, 15, &SeriesControl::default())
                .unwrap();
        let last = *rep.errors.last().unwrap();
        assert!(last < 1e-6, "error {last:e}");
    }

    #[test]
    fn expansion_439_printed_fails_corrected_passes() {
        let p = scalar_young(1.0);
        let printed =
            young_expansion(ExpansionVariant::V439, true, &p, 0.8, 15, &SeriesControl::default())
                .unwrap();
        let corrected =
            young_expansion(ExpansionVariant::V439, false, &p, 0.8, 15, &SeriesControl::default())
                .unwrap();
        assert!(*corrected.errors.last().unwrap() < 1e-6);
        assert!(*printed.errors.last().unwrap() > 1e-3);
    }
}
