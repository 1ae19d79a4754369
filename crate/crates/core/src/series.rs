//! Truncated formal power series with matrix coefficients.
//!
//! A series is `z^alpha * sum_k c_k z^k` where the exponent offset alpha is
//! `s*I + M` for a complex scalar s and an optional matrix part M commuting
//! with every coefficient. All arithmetic is exact on retained coefficients,
//! which makes these series the oracle of record for termwise identities:
//! an identity that holds formally leaves residuals at roundoff level.
//!
//! Differential operators are sums of factor chains over
//! {theta-shifts, d/dz, z^m, constant matrices}; factors apply right-to-left.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hyper::HyperParams;
use crate::matrix::{C64, SquareMatrix};

const OFFSET_EQ_TOL: f64 = 1e-9;
const OPERATOR_COMMUTE_TOL: f64 = 1e-8;

/// Exponent offset alpha = scalar * I + matrix.
#[derive(Debug, Clone)]
pub struct ExponentOffset {
    pub scalar: C64,
    pub matrix: Option<SquareMatrix>,
}

impl ExponentOffset {
    pub fn zero() -> Self {
        Self { scalar: C64::new(0.0, 0.0), matrix: None }
    }

    pub fn from_scalar(s: C64) -> Self {
        Self { scalar: s, matrix: None }
    }

    pub fn from_matrix(m: SquareMatrix) -> Self {
        Self { scalar: C64::new(0.0, 0.0), matrix: Some(m) }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.norm() == 0.0 && self.matrix.is_none()
    }

    fn shifted(&self, ds: C64) -> Self {
        Self { scalar: self.scalar + ds, matrix: self.matrix.clone() }
    }

    fn matrix_part_eq(&self, other: &Self) -> bool {
        match (&self.matrix, &other.matrix) {
            (None, None) => true,
            (Some(a), Some(b)) => a.approx_eq(b, OFFSET_EQ_TOL * (1.0 + a.norm())),
            _ => false,
        }
    }
}

/// `z^alpha sum c_k z^k`, truncated after `coeffs.len()` terms.
#[derive(Debug, Clone)]
pub struct MatrixPowerSeries {
    dim: usize,
    offset: ExponentOffset,
    coeffs: Vec<SquareMatrix>,
}

impl MatrixPowerSeries {
    pub fn new(offset: ExponentOffset, coeffs: Vec<SquareMatrix>) -> Result<Self> {
        let dim = coeffs
            .first()
            .map(|c| c.dim())
            .ok_or_else(|| Error::DomainError("series needs at least one coefficient".into()))?;
        for c in &coeffs {
            if c.dim() != dim {
                return Err(Error::ShapeMismatch("coefficient dims differ".into()));
            }
        }
        if let Some(m) = &offset.matrix {
            if m.dim() != dim {
                return Err(Error::ShapeMismatch("offset dim differs from coefficients".into()));
            }
            for c in &coeffs {
                if !c.is_zero(1e-300) && m.commutator_defect(c) > OPERATOR_COMMUTE_TOL {
                    return Err(Error::NonCommuting(m.commutator_defect(c)));
                }
            }
        }
        Ok(Self { dim, offset, coeffs })
    }

    pub fn zero(dim: usize, len: usize) -> Self {
        Self {
            dim,
            offset: ExponentOffset::zero(),
            coeffs: vec![SquareMatrix::zeros(dim); len.max(1)],
        }
    }

    /// The pFq series around z = 0 (offset 0), truncated at order `k_max`.
    pub fn from_pfq(params: &HyperParams, k_max: usize) -> Result<Self> {
        let coeffs = crate::hyper::pfq_coefficients(params, k_max)?;
        Self::new(ExponentOffset::zero(), coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn offset(&self) -> &ExponentOffset {
        &self.offset
    }

    pub fn coeffs(&self) -> &[SquareMatrix] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn truncate(mut self, len: usize) -> Self {
        self.coeffs.truncate(len.max(1));
        self
    }

    /// Multiply each coefficient on the left by a commuting constant.
    pub fn mul_const(&self, m: &SquareMatrix) -> Result<Self> {
        self.check_commutes(m)?;
        let coeffs = self.coeffs.iter().map(|c| m * c).collect();
        Ok(Self { dim: self.dim, offset: self.offset.clone(), coeffs })
    }

    pub fn scale(&self, s: C64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.scale(s)).collect();
        Self { dim: self.dim, offset: self.offset.clone(), coeffs }
    }

    /// Multiply by z^m (m may be negative); exact via the offset.
    pub fn mul_zpow(&self, m: i64) -> Self {
        Self {
            dim: self.dim,
            offset: self.offset.shifted(C64::new(m as f64, 0.0)),
            coeffs: self.coeffs.clone(),
        }
    }

    /// Coefficient map c_k -> (k + alpha + shift) c_k: the operator theta + shift.
    pub fn theta_plus(&self, shift: &SquareMatrix) -> Result<Self> {
        self.check_commutes(shift)?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mut factor = shift.add_scalar(self.offset.scalar + k as f64);
                if let Some(m) = &self.offset.matrix {
                    factor = &factor + m;
                }
                &factor * c
            })
            .collect();
        Ok(Self { dim: self.dim, offset: self.offset.clone(), coeffs })
    }

    pub fn theta(&self) -> Self {
        self.theta_plus(&SquareMatrix::zeros(self.dim)).expect("zero shift commutes")
    }

    /// Exact termwise derivative. With a zero offset the truncation order
    /// drops by one; otherwise the offset absorbs the shift.
    pub fn derivative(&self) -> Self {
        if self.offset.is_zero() {
            if self.coeffs.len() == 1 {
                return Self::zero(self.dim, 1);
            }
            let coeffs = self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale_re(k as f64))
                .collect();
            Self { dim: self.dim, offset: ExponentOffset::zero(), coeffs }
        } else {
            let themed = self.theta();
            Self {
                dim: themed.dim,
                offset: themed.offset.shifted(C64::new(-1.0, 0.0)),
                coeffs: themed.coeffs,
            }
        }
    }

    fn check_commutes(&self, m: &SquareMatrix) -> Result<()> {
        if m.dim() != self.dim {
            return Err(Error::ShapeMismatch("constant dim differs from series".into()));
        }
        let mut worst: f64 = 0.0;
        if let Some(om) = &self.offset.matrix {
            worst = worst.max(m.commutator_defect(om));
        }
        for c in self.coeffs.iter().take(4) {
            if !c.is_zero(1e-300) {
                worst = worst.max(m.commutator_defect(c));
            }
        }
        if worst > OPERATOR_COMMUTE_TOL {
            return Err(Error::NonCommutingOperator(worst));
        }
        Ok(())
    }

    /// Align two series onto a common offset. Scalar offset parts may differ
    /// by an integer (resolved by shifting coefficients); anything else is a
    /// shape error, cross-exponent sums are rejected rather than approximated.
    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch("series dims differ".into()));
        }
        if !self.offset.matrix_part_eq(&other.offset) {
            return Err(Error::ShapeMismatch("series exponent matrix parts differ".into()));
        }
        let d = self.offset.scalar - other.offset.scalar;
        if d.im.abs() > OFFSET_EQ_TOL {
            return Err(Error::ShapeMismatch("series exponents differ non-integrally".into()));
        }
        let n = d.re.round();
        if (d.re - n).abs() > OFFSET_EQ_TOL {
            return Err(Error::ShapeMismatch("series exponents differ non-integrally".into()));
        }
        let n = n as i64;
        let shift_up = |s: &Self, by: usize| -> Self {
            let mut coeffs = vec![SquareMatrix::zeros(s.dim); by];
            coeffs.extend(s.coeffs.iter().cloned());
            Self { dim: s.dim, offset: s.offset.shifted(C64::new(-(by as f64), 0.0)), coeffs }
        };
        if n >= 0 {
            Ok((shift_up(self, n as usize), other.clone()))
        } else {
            Ok((self.clone(), shift_up(other, (-n) as usize)))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let len = a.coeffs.len().min(b.coeffs.len());
        let coeffs = (0..len).map(|k| &a.coeffs[k] + &b.coeffs[k]).collect();
        Ok(Self { dim: a.dim, offset: a.offset, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Cauchy product, truncated to the shorter operand's order.
    pub fn mul_series(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch("series dims differ".into()));
        }
        let len = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![SquareMatrix::zeros(self.dim); len];
        for n in 0..len {
            for i in 0..=n {
                let p = &self.coeffs[i] * &other.coeffs[n - i];
                coeffs[n] = &coeffs[n] + &p;
            }
        }
        let matrix = match (&self.offset.matrix, &other.offset.matrix) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(a + b),
        };
        let offset =
            ExponentOffset { scalar: self.offset.scalar + other.offset.scalar, matrix };
        Ok(Self { dim: self.dim, offset, coeffs })
    }
}

/// One multiplicative factor of an operator chain.
#[derive(Debug, Clone)]
pub enum OpFactor {
    /// theta*I + M (diagonal in the coefficient basis).
    ThetaPlus(SquareMatrix),
    /// theta + c for a complex scalar shift.
    ThetaPlusScalar(C64),
    /// d/dz.
    Derivative,
    /// Multiplication by z^m.
    PowZ(i64),
    /// Left multiplication by a commuting constant matrix.
    Const(SquareMatrix),
    /// Multiplication by a complex scalar.
    Scalar(C64),
}

/// A product of factors; `factors[last]` is applied first.
#[derive(Debug, Clone)]
pub struct OperatorTerm {
    pub factors: Vec<OpFactor>,
}

impl OperatorTerm {
    pub fn new(factors: Vec<OpFactor>) -> Self {
        Self { factors }
    }

    fn apply(&self, series: &MatrixPowerSeries) -> Result<MatrixPowerSeries> {
        let mut s = series.clone();
        for f in self.factors.iter().rev() {
            s = match f {
                OpFactor::ThetaPlus(m) => s.theta_plus(m)?,
                OpFactor::ThetaPlusScalar(c) => {
                    s.theta_plus(&SquareMatrix::scalar(s.dim(), *c))?
                }
                OpFactor::Derivative => s.derivative(),
                OpFactor::PowZ(m) => s.mul_zpow(*m),
                OpFactor::Const(m) => s.mul_const(m)?,
                OpFactor::Scalar(c) => s.scale(*c),
            };
        }
        Ok(s)
    }
}

/// A sum of operator terms.
#[derive(Debug, Clone)]
pub struct OperatorSpec {
    pub terms: Vec<OperatorTerm>,
}

impl OperatorSpec {
    pub fn new(terms: Vec<OperatorTerm>) -> Self {
        Self { terms }
    }

    /// `(theta - n)_k` as a factor chain.
    pub fn theta_pochhammer(n: f64, k: usize) -> Vec<OpFactor> {
        (0..k)
            .map(|j| OpFactor::ThetaPlusScalar(C64::new(-n + j as f64, 0.0)))
            .collect()
    }
}

/// Apply an operator (sum of factor chains) to a series.
pub fn apply_operator(
    series: &MatrixPowerSeries,
    op: &OperatorSpec,
) -> Result<MatrixPowerSeries> {
    let mut acc: Option<MatrixPowerSeries> = None;
    for term in &op.terms {
        let t = term.apply(series)?;
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t)?,
        });
    }
    acc.ok_or_else(|| Error::DomainError("empty operator".into()))
}

/// Residual of `op` applied to `series`, relative to the largest intermediate
/// term scale (cancellation-aware). Returns (residual, order compared).
pub fn operator_residual(series: &MatrixPowerSeries, op: &OperatorSpec) -> Result<(f64, usize)> {
    let mut parts = Vec::with_capacity(op.terms.len());
    let mut scale: f64 = 0.0;
    for term in &op.terms {
        let t = term.apply(series)?;
        scale = scale.max(t.max_coeff_norm());
        parts.push(t);
    }
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = acc.add(p)?;
    }
    let scale = scale.max(f64::MIN_POSITIVE);
    let residual = acc.max_coeff_norm() / scale;
    Ok((residual, acc.order()))
}

/// Outcome of a coefficientwise comparison.
#[derive(Debug, Clone)]
pub struct CompareReport {
    pub residual: f64,
    pub compared_order: usize,
    pub worst_index: usize,
    pub pass: bool,
}

/// Coefficientwise comparison relative to the larger coefficient scale.
pub fn compare(lhs: &MatrixPowerSeries, rhs: &MatrixPowerSeries, tol: f64) -> Result<CompareReport> {
    let (a, b) = lhs.aligned(rhs)?;
    let len = a.coeffs().len().min(b.coeffs().len());
    let scale = a.max_coeff_norm().max(b.max_coeff_norm()).max(f64::MIN_POSITIVE);
    let mut residual = 0.0f64;
    let mut worst_index = 0usize;
    for k in 0..len {
        let d = (&a.coeffs()[k] - &b.coeffs()[k]).norm() / scale;
        if d > residual {
            residual = d;
            worst_index = k;
        }
    }
    Ok(CompareReport { residual, compared_order: len - 1, worst_index, pass: residual <= tol })
}

/// Taylor coefficients in t of an analytic matrix-valued function, extracted
/// by trapezoidal contour integration on |t| = radius. The sample count is
/// doubled for an error estimate; disagreement beyond `stability_tol`
/// (relative to the coefficient scale) is reported as unstable.
pub fn bivariate_coefficient(
    gen_fn: &dyn Fn(C64) -> Result<SquareMatrix>,
    t_order: usize,
    radius: f64,
    samples: usize,
    stability_tol: f64,
) -> Result<Vec<SquareMatrix>> {
    let run = |n_samples: usize| -> Result<Vec<SquareMatrix>> {
        let mut values = Vec::with_capacity(n_samples);
        for j in 0..n_samples {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n_samples as f64;
            let t = Complex64::from_polar(radius, theta);
            values.push(gen_fn(t)?);
        }
        let dim = values[0].dim();
        let mut out = Vec::with_capacity(t_order + 1);
        for n in 0..=t_order {
            let mut c = SquareMatrix::zeros(dim);
            for (j, v) in values.iter().enumerate() {
                let theta = 2.0 * std::f64::consts::PI * (j as f64) * (n as f64)
                    / n_samples as f64;
                let w = Complex64::from_polar(1.0, -theta);
                c = &c + &v.scale(w);
            }
            out.push(c.scale(Complex64::new(1.0 / (n_samples as f64 * radius.powi(n as i32)), 0.0)));
        }
        Ok(out)
    };
    let coarse = run(samples)?;
    let fine = run(samples * 2)?;
    let scale = fine.iter().map(|c| c.norm()).fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);
    let mut disagreement = 0.0f64;
    for (a, b) in coarse.iter().zip(&fine) {
        disagreement = disagreement.max((a - b).norm() / scale);
    }
    if disagreement > stability_tol {
        return Err(Error::ExtractionUnstable(disagreement));
    }
    Ok(fine)
}
