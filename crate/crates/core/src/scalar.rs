//! Scalar special-function kernels applied on matrix spectra.
//!
//! The gamma kernel is the g=7, 9-term Lanczos approximation (coefficients as
//! circulated with the GNU Scientific Library), good to ~1e-13 relative for
//! Re(z) in (0, 50); arguments left of Re(z) = 1/2 go through the reflection
//! formula. The reciprocal kernel is entire: it returns exactly 0 at the
//! poles of gamma.

use num_complex::Complex64;

use crate::matrix::C64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_right(z: C64) -> C64 {
    // Valid for Re(z) >= 0.5.
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &p) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let sqrt_two_pi = (2.0 * std::f64::consts::PI).sqrt();
    sqrt_two_pi * t.powc(z + 0.5) * (-t).exp() * acc
}

/// Complex gamma function.
pub fn gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
        let pi = std::f64::consts::PI;
        let s = (pi * z).sin();
        if s.norm() == 0.0 {
            return C64::new(f64::INFINITY, 0.0);
        }
        pi / (s * lanczos_right(1.0 - z))
    } else {
        lanczos_right(z)
    }
}

/// Entire reciprocal gamma: 1/Gamma(z), exactly 0 at z = 0, -1, -2, ...
pub fn reciprocal_gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        let pi = std::f64::consts::PI;
        (pi * z).sin() * lanczos_right(1.0 - z) / pi
    } else {
        1.0 / lanczos_right(z)
    }
}

/// Rising factorial (z)_n computed by the running product.
pub fn pochhammer(z: C64, n: usize) -> C64 {
    let mut p = C64::new(1.0, 0.0);
    for k in 0..n {
        p *= z + k as f64;
    }
    p
}
