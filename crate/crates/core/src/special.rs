//! Classical gamma and beta functions on the complex plane.

use std::f64::consts::PI;

use num_complex::Complex64;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
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

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Whether `z` is within `tol` of a nonpositive integer.
pub fn near_gamma_pole(z: Complex64, tol: f64) -> bool {
    z.im.abs() <= tol && z.re <= tol && (z.re - z.re.round()).abs() <= tol
}

/// `ln Γ(z)` (principal branch of the Lanczos series), valid for `Re z ≥ 1/2`.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (z + 0.5) * t.ln() - t + LN_SQRT_2PI + x.ln()
}

/// Complex gamma function. Returns infinity at the poles.
pub fn gamma(z: Complex64) -> Complex64 {
    if near_gamma_pole(z, 0.0) {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    if z.im == 0.0 {
        return Complex64::new(gamma_real(z.re), 0.0);
    }
    if z.re < 0.5 {
        PI / ((PI * z).sin() * gamma(1.0 - z))
    } else {
        ln_gamma_right(z).exp()
    }
}

/// Real gamma function with reflection for negative arguments.
pub fn gamma_real(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_real(1.0 - x));
    }
    if x == x.round() && x <= 171.0 {
        // exact factorials for small integers
        return (1..x as u64).fold(1.0, |acc, k| acc * k as f64);
    }
    ln_gamma_right(Complex64::new(x, 0.0)).re.exp()
}

/// `ln |Γ(x)|` for real `x`.
pub fn ln_gamma_abs(x: f64) -> f64 {
    if x < 0.5 {
        (PI / (PI * x).sin().abs()).ln() - ln_gamma_abs(1.0 - x)
    } else {
        ln_gamma_right(Complex64::new(x, 0.0)).re
    }
}

/// Classical beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 && a + b > 20.0 {
        return (ln_gamma_abs(a) + ln_gamma_abs(b) - ln_gamma_abs(a + b)).exp();
    }
    gamma_real(a) * gamma_real(b) / gamma_real(a + b)
}

/// Classical rising factorial `(a)_n` for complex `a`.
pub fn rising(a: Complex64, n: u32) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (a + k as f64))
}

/// `Γ(a + n)/Γ(a)` for integer `n` in floating point.
pub fn gamma_ratio(a: f64, n: i64) -> f64 {
    if n >= 0 {
        (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
    } else {
        1.0 / (n..0).fold(1.0, |acc, k| acc * (a + k as f64))
    }
}
