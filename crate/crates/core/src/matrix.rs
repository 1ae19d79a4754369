//! Dense complex square matrices: the value type carried through the whole
//! library, with the arithmetic and solves everything else builds on.
//!
//! External JSON encoding (used by the CLI and any file format):
//! `{"dim": n, "entries": [[re, im], ...]}` in row-major order.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default absolute tolerance for entrywise equality comparisons.
pub const DEFAULT_EQ_TOL: f64 = 1e-10;

/// Dense complex square matrix, row-major storage.
#[derive(Clone)]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl SquareMatrix {
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dim must be >= 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for dim {}, got {}",
                dim * dim,
                dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// `c * I`.
    pub fn scalar(dim: usize, c: C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = c;
        }
        m
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Right division `self * m^-1`, via a transposed solve.
    pub fn div_right(&self, m: &Self) -> Result<Self> {
        let xt = m.transpose().solve(&self.transpose())?;
        Ok(xt.transpose())
    }

    /// Frobenius norm; the workhorse norm for all tolerance checks.
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm_max(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|&e| e * c).collect() }
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    /// `self + c*I`.
    pub fn add_scalar(&self, c: C64) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m[(i, i)] += c;
        }
        m
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.entries.iter().all(|z| z.norm() <= tol)
    }

    /// `||XY - YX|| / (||X|| ||Y||)`, the relative commutator defect.
    pub fn commutator_defect(&self, other: &Self) -> f64 {
        let xy = self * other;
        let yx = other * self;
        let scale = (self.norm() * other.norm()).max(f64::MIN_POSITIVE);
        (&xy - &yx).norm() / scale
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch(format!("{} vs {}", self.dim, other.dim)));
        }
        Ok(())
    }

    /// LU decomposition with partial pivoting. Returns (lu, perm, sign-tracking parity).
    fn lu(&self) -> Result<(Vec<C64>, Vec<usize>)> {
        let n = self.dim;
        let mut lu = self.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = lu[k * n + k].norm();
            for i in (k + 1)..n {
                let v = lu[i * n + k].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::SingularMatrix("LU factorization".into()));
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                for j in (k + 1)..n {
                    let sub = factor * lu[k * n + j];
                    lu[i * n + j] -= sub;
                }
            }
        }
        Ok((lu, perm))
    }

    /// Solve `self * X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        let n = self.dim;
        let (lu, perm) = self.lu()?;
        let mut x = Self::zeros(n);
        for col in 0..n {
            let mut y = vec![C64::new(0.0, 0.0); n];
            for i in 0..n {
                let mut s = rhs[(perm[i], col)];
                for j in 0..i {
                    s -= lu[i * n + j] * y[j];
                }
                y[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = y[i];
                for j in (i + 1)..n {
                    s -= lu[i * n + j] * x[(j, col)];
                }
                x[(i, col)] = s / lu[i * n + i];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.dim))
    }

    /// Cheap invertibility margin: `1 / (||A||_F ||A^-1||_F)`, a lower bound
    /// (up to dimension factors) on the smallest singular value relative to
    /// the largest. Returns 0.0 when the LU factorization breaks down.
    pub fn invertibility_margin(&self) -> f64 {
        match self.inverse() {
            Ok(inv) => {
                let p = self.norm() * inv.norm();
                if p.is_finite() && p > 0.0 {
                    1.0 / p
                } else {
                    0.0
                }
            }
            Err(_) => 0.0,
        }
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Add for &SquareMatrix {
    type Output = SquareMatrix;
    fn add(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in +");
        SquareMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &SquareMatrix {
    type Output = SquareMatrix;
    fn sub(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in -");
        SquareMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &SquareMatrix {
    type Output = SquareMatrix;
    fn neg(self) -> SquareMatrix {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in *");
        let n = self.dim;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrix(dim={})", self.dim)?;
        for i in 0..self.dim {
            write!(f, "  [")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for SquareMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SquareMatrix", 2)?;
        s.serialize_field("dim", &self.dim)?;
        let pairs: Vec<[f64; 2]> = self.entries.iter().map(|z| [z.re, z.im]).collect();
        s.serialize_field("entries", &pairs)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for SquareMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dim: usize,
            entries: Vec<[f64; 2]>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let entries = raw.entries.iter().map(|p| C64::new(p[0], p[1])).collect();
        SquareMatrix::new(raw.dim, entries).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_and_mul() {
        let a = SquareMatrix::from_fn(3, |i, j| c((i * 3 + j) as f64, (i as f64) - (j as f64)));
        let id = SquareMatrix::identity(3);
        assert!((&a * &id).approx_eq(&a, 1e-15));
        assert!((&id * &a).approx_eq(&a, 1e-15));
    }

    #[test]
    fn solve_roundtrip() {
        let a = SquareMatrix::new(
            2,
            vec![c(1.0, 1.0), c(2.0, -0.5), c(0.0, 3.0), c(4.0, 0.0)],
        )
        .unwrap();
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).approx_eq(&SquareMatrix::identity(2), 1e-12));
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = SquareMatrix::from_real(2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(a.inverse().is_err());
        assert_eq!(a.invertibility_margin(), 0.0);
    }

    #[test]
    fn json_encoding_matches_schema() {
        let a = SquareMatrix::new(1, vec![c(2.0, -1.0)]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"dim":1,"entries":[[2.0,-1.0]]}"#);
        let b: SquareMatrix = serde_json::from_str(&s).unwrap();
        assert!(a.approx_eq(&b, 0.0));
    }

    #[test]
    fn bad_entry_count_rejected() {
        assert!(SquareMatrix::new(2, vec![c(1.0, 0.0); 3]).is_err());
        assert!(SquareMatrix::new(0, vec![]).is_err());
    }

    #[test]
    fn commutator_defect_zero_for_polynomials() {
        let a = SquareMatrix::from_real(2, &[1.0, 2.0, 0.0, 3.0]).unwrap();
        let a2 = &a * &a;
        assert!(a.commutator_defect(&a2) < 1e-15);
    }
}
