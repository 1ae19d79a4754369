//! Bateman matrix polynomials B_n and J_n, matrix Laguerre polynomials, and
//! the two-index hyper-Bessel function their generating relations use.
//!
//! B_n is always evaluated by its terminating series (n+1 exact terms), never
//! by a recurrence, so the recurrence identities in the catalog stay
//! independent checks.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gamma::{matrix_gamma, pochhammer, reciprocal_gamma, shift_invertible};
use crate::hyper::HyperParams;
use crate::matrix::{C64, SquareMatrix};
use crate::series::{ExponentOffset, MatrixPowerSeries};
use crate::{eigen, hyper};

/// Parameter pair (A, B) of the Bateman families.
#[derive(Debug, Clone)]
pub struct BatemanParams {
    pub a: SquareMatrix,
    pub b: SquareMatrix,
}

impl BatemanParams {
    /// Validates commutativity and the shift condition on A+I and B+I.
    pub fn new(a: SquareMatrix, b: SquareMatrix) -> Result<Self> {
        let defect = a.commutator_defect(&b);
        if defect > crate::gamma::COMMUTE_TOL {
            return Err(Error::NonCommuting(defect));
        }
        for (name, m) in [("A+I", &a), ("B+I", &b)] {
            let shifted = m.add_scalar(C64::new(1.0, 0.0));
            for k in 0..4usize {
                if !shift_invertible(&shifted, k) {
                    return Err(Error::SingularShift(format!("{name} + {k}I")));
                }
            }
        }
        Ok(Self { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Parameters shifted by (da, db): (A + da I, B + db I).
    pub fn shifted(&self, da: f64, db: f64) -> Self {
        Self {
            a: self.a.add_scalar(C64::new(da, 0.0)),
            b: self.b.add_scalar(C64::new(db, 0.0)),
        }
    }
}

/// Series coefficients of B_n: U_k = (-n)_k / k! [(A+I)_k]^-1 [(B+I)_k]^-1,
/// identically zero past k = n.
pub fn bateman_b_coefficients(
    n: usize,
    p: &BatemanParams,
    k_max: usize,
) -> Result<Vec<SquareMatrix>> {
    let dim = p.dim();
    let mut coeffs = Vec::with_capacity(k_max + 1);
    let mut u = SquareMatrix::identity(dim);
    for k in 0..=k_max {
        coeffs.push(u.clone());
        if k == k_max {
            break;
        }
        if k >= n {
            u = SquareMatrix::zeros(dim);
            continue;
        }
        let factor = (k as f64 - n as f64) / (k as f64 + 1.0);
        let sa = p.a.add_scalar(C64::new(k as f64 + 1.0, 0.0));
        let sb = p.b.add_scalar(C64::new(k as f64 + 1.0, 0.0));
        for (name, s) in [("A", &sa), ("B", &sb)] {
            if s.invertibility_margin() <= 1e-12 {
                return Err(Error::SingularShift(format!("{name} + {}I", k + 1)));
            }
        }
        u = u.scale_re(factor).div_right(&sa)?.div_right(&sb)?;
    }
    Ok(coeffs)
}

/// B_n^{A,B}(z) = 1F2(-nI; A+I, B+I; z), an exact degree-n polynomial.
pub fn bateman_b(n: usize, p: &BatemanParams, z: C64) -> Result<SquareMatrix> {
    let coeffs = bateman_b_coefficients(n, p, n)?;
    let mut acc = SquareMatrix::zeros(p.dim());
    let mut zpow = Complex64::new(1.0, 0.0);
    for c in &coeffs {
        acc = &acc + &c.scale(zpow);
        zpow *= z;
    }
    Ok(acc)
}

/// B_n as a formal series (offset 0) for operator checks.
pub fn bateman_b_series(n: usize, p: &BatemanParams, k_max: usize) -> Result<MatrixPowerSeries> {
    let coeffs = bateman_b_coefficients(n, p, k_max)?;
    MatrixPowerSeries::new(ExponentOffset::zero(), coeffs)
}

/// J_n^{A,B}(z): the gamma-ratio prefactor times z^A 1F2(-nI; A+I, B+A/2+I; z^2).
pub fn bateman_j(n: usize, p: &BatemanParams, z: C64) -> Result<SquareMatrix> {
    let half_a = p.a.scale_re(0.5);
    let hab = &half_a + &p.b; // A/2 + B
    for k in 0..4usize {
        if !shift_invertible(&hab.add_scalar(C64::new(1.0, 0.0)), k) {
            return Err(Error::SingularShift(format!("A/2 + B + I + {k}I")));
        }
    }
    let nf = n as f64;
    let gn = matrix_gamma(&hab.add_scalar(C64::new(nf + 1.0, 0.0)))?;
    let ga_inv = reciprocal_gamma(&p.a.add_scalar(C64::new(1.0, 0.0)))?;
    let gh_inv = reciprocal_gamma(&hab.add_scalar(C64::new(1.0, 0.0)))?;
    let zpow = eigen::complex_power(z, &p.a)?;
    let inner_params = BatemanParams { a: p.a.clone(), b: &p.b + &half_a };
    let series = bateman_b(n, &inner_params, z * z)?;
    let mut factorial = 1.0f64;
    for k in 2..=n.max(1) {
        factorial *= k as f64;
    }
    let prefactor = &(&gn * &ga_inv) * &gh_inv;
    Ok(&(&prefactor.scale_re(1.0 / factorial) * &zpow) * &series)
}

/// Matrix Laguerre polynomial with the standard normalization:
/// L_n^{(A)}(x) = sum_k (-1)^k/(k!(n-k)!) (A+I)_n [(A+I)_k]^-1 x^k.
pub fn laguerre_l(n: usize, a: &SquareMatrix, x: C64) -> Result<SquareMatrix> {
    let shifted = a.add_scalar(C64::new(1.0, 0.0));
    for k in 0..=n {
        if !shift_invertible(&shifted, k) {
            return Err(Error::SingularShift(format!("A + I + {k}I")));
        }
    }
    let poch = pochhammer(&shifted, n);
    let top = poch.term(n).clone();
    let mut acc = SquareMatrix::zeros(a.dim());
    let mut xpow = Complex64::new(1.0, 0.0);
    let mut k_fact = 1.0f64;
    for k in 0..=n {
        if k > 0 {
            k_fact *= k as f64;
            xpow *= x;
        }
        let mut nk_fact = 1.0f64;
        for j in 2..=(n - k) {
            nk_fact *= j as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = top.div_right(poch.term(k))?.scale(xpow * sign / (k_fact * nk_fact));
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Two-index hyper-Bessel function (Delerue normalization):
/// J_{A,B}(w) = (w/3)^{A+B} Gamma^-1(A+I) Gamma^-1(B+I) 0F2(-; A+I, B+I; -(w/3)^3).
pub fn hyper_bessel_j2(a: &SquareMatrix, b: &SquareMatrix, w: C64) -> Result<SquareMatrix> {
    let third = w / 3.0;
    let prefactor = eigen::complex_power(third, &(a + b))?;
    let ga = reciprocal_gamma(&a.add_scalar(C64::new(1.0, 0.0)))?;
    let gb = reciprocal_gamma(&b.add_scalar(C64::new(1.0, 0.0)))?;
    let params = HyperParams::new(
        vec![],
        vec![a.add_scalar(C64::new(1.0, 0.0)), b.add_scalar(C64::new(1.0, 0.0))],
    )?;
    let f = hyper::eval_pfq(&params, -(third * third * third), &Default::default())?;
    Ok(&(&(&prefactor * &ga) * &gb) * &f.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn scalar_params(a: f64, b: f64) -> BatemanParams {
        BatemanParams::new(
            SquareMatrix::from_real(1, &[a]).unwrap(),
            SquareMatrix::from_real(1, &[b]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn b0_is_identity() {
        let p = scalar_params(0.4, 0.9);
        let v = bateman_b(0, &p, c(2.3, 1.0)).unwrap();
        assert!((v[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn b1_matches_initial_condition() {
        // B_1 = I - (A+I)^-1 (B+I)^-1 z.
        let a = SquareMatrix::from_real(2, &[0.5, 0.2, 0.0, 0.8]).unwrap();
        let b = &(&a * &a).scale_re(0.4) + &SquareMatrix::scalar(2, c(0.3, 0.0));
        let p = BatemanParams::new(a.clone(), b.clone()).unwrap();
        let z = c(1.4, -0.6);
        let got = bateman_b(1, &p, z).unwrap();
        let ai = a.add_scalar(c(1.0, 0.0)).inverse().unwrap();
        let bi = b.add_scalar(c(1.0, 0.0)).inverse().unwrap();
        let want = &SquareMatrix::identity(2) - &(&ai * &bi).scale(z);
        assert!((&got - &want).norm() < 1e-13);
    }

    #[test]
    fn b2_printed_value_at_scalar_zero_params() {
        // A = B = 0, z = 1: 1 - 2 + 1/4 = -3/4.
        let p = scalar_params(0.0, 0.0);
        let v = bateman_b(2, &p, c(1.0, 0.0)).unwrap();
        assert!((v[(0, 0)] - c(-0.75, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn degree_is_exactly_n() {
        let p = scalar_params(0.3, 0.7);
        for n in [0usize, 1, 3, 6] {
            let coeffs = bateman_b_coefficients(n, &p, n + 3).unwrap();
            assert!(coeffs[n].norm() > 1e-12, "leading coefficient vanished at n={n}");
            for k in (n + 1)..=(n + 3) {
                assert!(coeffs[k].is_zero(1e-15));
            }
        }
    }

    #[test]
    fn j_relation_to_b_via_sqrt_argument() {
        // J_n^{A, B - A/2}(sqrt z) = Gamma(B+nI+I)/n! Gamma^-1(A+I) Gamma^-1(B+I)
        //                            z^(A/2) B_n^{A,B}(z).
        let a = SquareMatrix::from_real(2, &[0.6, 0.3, 0.0, 1.0]).unwrap();
        let b = &(&a * &a).scale_re(0.2) + &SquareMatrix::scalar(2, c(0.9, 0.0));
        let p = BatemanParams::new(a.clone(), b.clone()).unwrap();
        let z = c(1.7, 0.4);
        for n in 0..=6usize {
            let shifted = BatemanParams { a: a.clone(), b: &b - &a.scale_re(0.5) };
            let lhs = bateman_j(n, &shifted, z.sqrt()).unwrap();
            let mut nf = 1.0f64;
            for k in 2..=n.max(1) {
                nf *= k as f64;
            }
            let gb = matrix_gamma(&b.add_scalar(c(n as f64 + 1.0, 0.0))).unwrap();
            let ga_inv = reciprocal_gamma(&a.add_scalar(c(1.0, 0.0))).unwrap();
            let gb_inv = reciprocal_gamma(&b.add_scalar(c(1.0, 0.0))).unwrap();
            let zpow = eigen::complex_power(z, &a.scale_re(0.5)).unwrap();
            let bn = bateman_b(n, &p, z).unwrap();
            let rhs = &(&(&(&gb.scale_re(1.0 / nf) * &ga_inv) * &gb_inv) * &zpow) * &bn;
            let defect = (&lhs - &rhs).norm() / rhs.norm().max(1e-30);
            assert!(defect < 1e-9, "n={n}: defect {defect:e}");
        }
    }

    #[test]
    fn j0_scalar_unit_case() {
        let p = scalar_params(0.0, 0.0);
        let v = bateman_j(0, &p, c(1.0, 0.0)).unwrap();
        assert!((v[(0, 0)] - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn j_scalar_reduction_direct_formula() {
        // Direct scalar evaluation at n = 3.
        let (a, b) = (0.7f64, 1.1f64);
        let p = scalar_params(a, b);
        let z = 0.9f64;
        let got = bateman_j(3, &p, c(z, 0.0)).unwrap()[(0, 0)];
        let h = 0.5 * a + b;
        let g = |x: f64| crate::scalar::gamma(c(x, 0.0)).re;
        let mut series = 0.0f64;
        for k in 0..=3usize {
            let mut poch_n = 1.0f64; // (-3)_k
            for j in 0..k {
                poch_n *= -3.0 + j as f64;
            }
            let mut pa = 1.0f64;
            let mut ph = 1.0f64;
            let mut kf = 1.0f64;
            for j in 0..k {
                pa *= a + 1.0 + j as f64;
                ph *= h + 1.0 + j as f64;
                kf *= (j + 1) as f64;
            }
            series += poch_n * (z * z).powi(k as i32) / (kf * pa * ph);
        }
        let want = g(h + 4.0) / 6.0 / (g(a + 1.0) * g(h + 1.0)) * z.powf(a) * series;
        assert!((got.re - want).abs() < 1e-12 * want.abs(), "{} vs {want}", got.re);
    }

    #[test]
    fn laguerre_classical_values() {
        let zero = SquareMatrix::from_real(1, &[0.0]).unwrap();
        let v = laguerre_l(0, &zero, c(0.7, 0.0)).unwrap();
        assert!((v[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        let v = laguerre_l(1, &zero, c(0.7, 0.0)).unwrap();
        assert!((v[(0, 0)] - c(0.3, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn laguerre_three_term_recurrence() {
        // (n+1) L_{n+1} = (2n + a + 1 - x) L_n - (n + a) L_{n-1}.
        let a = 0.5f64;
        let am = SquareMatrix::from_real(1, &[a]).unwrap();
        let x = 1.3f64;
        let l = |n: usize| laguerre_l(n, &am, c(x, 0.0)).unwrap()[(0, 0)].re;
        for n in 1..=3usize {
            let nf = n as f64;
            let lhs = (nf + 1.0) * l(n + 1);
            let rhs = (2.0 * nf + a + 1.0 - x) * l(n) - (nf + a) * l(n - 1);
            assert!((lhs - rhs).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn hyper_bessel_reduces_to_0f2() {
        // Gamma(A+I)Gamma(B+I)(w/3)^(-(A+B)) J_{A,B}(w) = 0F2(-; A+I, B+I; -(w/3)^3).
        let a = SquareMatrix::from_real(1, &[0.4]).unwrap();
        let b = SquareMatrix::from_real(1, &[0.9]).unwrap();
        let w = c(1.2, 0.5);
        let j = hyper_bessel_j2(&a, &b, w).unwrap();
        let params = HyperParams::scalar(&[], &[c(1.4, 0.0), c(1.9, 0.0)]).unwrap();
        let third = w / 3.0;
        let f = hyper::eval_pfq(&params, -(third * third * third), &Default::default()).unwrap();
        let ga = crate::scalar::gamma(c(1.4, 0.0));
        let gb = crate::scalar::gamma(c(1.9, 0.0));
        let back = j[(0, 0)] * ga * gb * third.powc(-c(1.3, 0.0));
        assert!((back - f.value[(0, 0)]).norm() < 1e-12);
    }
}
