//! Generators for families of pairwise-commuting matrices.
//!
//! Every identity in the catalog assumes commuting parameter matrices. The
//! generator manufactures them as scalar functions of one random
//! diagonalizable seed M = V D V^-1 with a well-conditioned eigenvector
//! basis: each member is V diag(target spectrum) V^-1, which by Lagrange
//! interpolation on the distinct seed eigenvalues is a low-degree polynomial
//! in M. Commutation is then exact up to roundoff while the members stay
//! dense and non-normal.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{C64, SquareMatrix};

/// A diagonalizable seed with a set of commuting members sharing its eigenbasis.
#[derive(Debug, Clone)]
pub struct CommutingFamily {
    /// The seed matrix M.
    pub seed: SquareMatrix,
    /// Members, each a scalar polynomial in the seed.
    pub members: Vec<SquareMatrix>,
    vectors: SquareMatrix,
    vectors_inv: SquareMatrix,
    member_spectra: Vec<Vec<C64>>,
}

/// Constraints for family generation.
#[derive(Debug, Clone)]
pub struct FamilyOptions {
    pub dim: usize,
    pub count: usize,
    /// Shift member eigenvalue real parts into `re_range` (positive stable).
    pub stable: bool,
    /// Force purely real spectra (quadrature-mode samplers want this).
    pub real_spectrum: bool,
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub max_condition: f64,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        Self {
            dim: 2,
            count: 2,
            stable: true,
            real_spectrum: false,
            re_range: (0.2, 3.0),
            im_range: (-0.5, 0.5),
            max_condition: 100.0,
        }
    }
}

const MAX_ATTEMPTS: usize = 64;
const MIN_EIGENVALUE_SEPARATION: f64 = 0.05;

fn sample_spectrum(rng: &mut impl Rng, opts: &FamilyOptions) -> Vec<C64> {
    loop {
        let eigs: Vec<C64> = (0..opts.dim)
            .map(|_| {
                let re = if opts.stable {
                    rng.gen_range(opts.re_range.0..opts.re_range.1)
                } else {
                    rng.gen_range(-opts.re_range.1..opts.re_range.1)
                };
                let im = if opts.real_spectrum {
                    0.0
                } else {
                    rng.gen_range(opts.im_range.0..opts.im_range.1)
                };
                C64::new(re, im)
            })
            .collect();
        let mut ok = true;
        for i in 0..eigs.len() {
            for j in (i + 1)..eigs.len() {
                if (eigs[i] - eigs[j]).norm() < MIN_EIGENVALUE_SEPARATION {
                    ok = false;
                }
            }
        }
        if ok {
            return eigs;
        }
    }
}

/// Generate `count` pairwise-commuting matrices of size `dim`.
pub fn commuting_family(rng: &mut impl Rng, opts: &FamilyOptions) -> Result<CommutingFamily> {
    if opts.dim == 0 || opts.count == 0 {
        return Err(Error::DomainError("dim and count must be >= 1".into()));
    }
    for _ in 0..MAX_ATTEMPTS {
        let vectors = if opts.dim == 1 {
            SquareMatrix::identity(1)
        } else {
            SquareMatrix::from_fn(opts.dim, |i, j| {
                let diag = if i == j { 1.5 } else { 0.0 };
                Complex64::new(
                    rng.gen_range(-1.0..1.0) + diag,
                    if opts.real_spectrum { 0.0 } else { rng.gen_range(-0.5..0.5) },
                )
            })
        };
        let vectors_inv = match vectors.inverse() {
            Ok(v) => v,
            Err(_) => continue,
        };
        if vectors.norm() * vectors_inv.norm() > opts.max_condition {
            continue;
        }
        let seed_spectrum = sample_spectrum(rng, opts);
        let assemble = |spec: &[C64]| -> SquareMatrix {
            &(&vectors * &SquareMatrix::diagonal(spec)) * &vectors_inv
        };
        let seed = assemble(&seed_spectrum);
        let mut members = Vec::with_capacity(opts.count);
        let mut member_spectra = Vec::with_capacity(opts.count);
        for _ in 0..opts.count {
            let spec = sample_spectrum(rng, opts);
            members.push(assemble(&spec));
            member_spectra.push(spec);
        }
        return Ok(CommutingFamily { seed, members, vectors, vectors_inv, member_spectra });
    }
    Err(Error::GenerationFailure(MAX_ATTEMPTS))
}

impl CommutingFamily {
    pub fn dim(&self) -> usize {
        self.seed.dim()
    }

    pub fn member(&self, i: usize) -> &SquareMatrix {
        &self.members[i]
    }

    pub fn member_spectrum(&self, i: usize) -> &[C64] {
        &self.member_spectra[i]
    }

    /// Build a further commuting member with the given spectrum.
    pub fn with_spectrum(&self, spectrum: &[C64]) -> SquareMatrix {
        assert_eq!(spectrum.len(), self.dim());
        &(&self.vectors * &SquareMatrix::diagonal(spectrum)) * &self.vectors_inv
    }

    /// Build a member whose eigenvalues are sampled from the given real range.
    pub fn sample_member(&self, rng: &mut impl Rng, re_range: (f64, f64)) -> SquareMatrix {
        let spec: Vec<C64> = (0..self.dim())
            .map(|_| C64::new(rng.gen_range(re_range.0..re_range.1), 0.0))
            .collect();
        self.with_spectrum(&spec)
    }

    /// Largest pairwise relative commutator defect over all members.
    pub fn max_commutator_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.members.len() {
            for j in (i + 1)..self.members.len() {
                worst = worst.max(self.members[i].commutator_defect(&self.members[j]));
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::is_positive_stable;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalars_at_dim_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let opts = FamilyOptions { dim: 1, count: 3, real_spectrum: true, ..Default::default() };
        let fam = commuting_family(&mut rng, &opts).unwrap();
        assert_eq!(fam.members.len(), 3);
        for m in &fam.members {
            assert!(m[(0, 0)].re > 0.0);
        }
    }

    #[test]
    fn stable_pair_commutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let opts = FamilyOptions { dim: 2, count: 2, ..Default::default() };
        let fam = commuting_family(&mut rng, &opts).unwrap();
        assert!(fam.max_commutator_defect() < 1e-12);
        for m in &fam.members {
            assert!(is_positive_stable(m).unwrap());
        }
    }

    #[test]
    fn all_pairs_commute_at_dim_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let opts = FamilyOptions { dim: 3, count: 4, ..Default::default() };
        let fam = commuting_family(&mut rng, &opts).unwrap();
        assert!(fam.max_commutator_defect() < 1e-12);
    }

    #[test]
    fn spectra_are_honored() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let opts = FamilyOptions { dim: 3, count: 1, ..Default::default() };
        let fam = commuting_family(&mut rng, &opts).unwrap();
        let spec = fam.member_spectrum(0).to_vec();
        let s = crate::eigen::spectrum(fam.member(0)).unwrap();
        let mut want = spec;
        want.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        for (got, want) in s.eigenvalues.iter().zip(&want) {
            assert!((got - want).norm() < 1e-9);
        }
    }
}
