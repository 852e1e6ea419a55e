//! Complex log-Gamma and Beta.

use std::f64::consts::PI;

use num_complex::Complex64;

// Lanczos coefficients for g = 7, n = 9.
const G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Distance below which an argument is treated as the integer it rounds to.
pub const POLE_TOL: f64 = 1e-12;

/// `z ∈ {0, −1, −2, …}` up to [`POLE_TOL`].
pub fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im.abs() <= POLE_TOL && z.re <= POLE_TOL && (z.re - z.re.round()).abs() <= POLE_TOL
}

/// `ln Γ(z)` for `z` away from the poles. The imaginary part is correct modulo
/// `2π`; only `exp` of sums of these values is meaningful.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_lanczos(Complex64::new(1.0, 0.0) - z)
    } else {
        ln_gamma_lanczos(z)
    }
}

fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut sum = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + k as f64);
    }
    let t = z + G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

// ln sin(πz) without overflow for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im > 5.0 {
        // sin(πz) = (i/2)·e^{−iπz}·(1 − e^{2iπz})
        let e = (2.0 * i * PI * z).exp();
        -i * PI * z + Complex64::new(0.5f64.ln(), PI / 2.0) + (1.0 - e).ln()
    } else if z.im < -5.0 {
        // sin(πz) = (−i/2)·e^{iπz}·(1 − e^{−2iπz})
        let e = (-2.0 * i * PI * z).exp();
        i * PI * z + Complex64::new(0.5f64.ln(), -PI / 2.0) + (1.0 - e).ln()
    } else {
        (PI * z).sin().ln()
    }
}

/// A value of a meromorphic function: finite, or a pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeroValue {
    Finite(Complex64),
    Pole,
}

impl MeroValue {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            MeroValue::Finite(v) => Some(v),
            MeroValue::Pole => None,
        }
    }

    pub fn is_pole(self) -> bool {
        matches!(self, MeroValue::Pole)
    }
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`, continued meromorphically.
///
/// Poles of the numerator that are cancelled by a pole of `Γ(a+b)` yield the
/// finite limit; a pole of `Γ(a+b)` alone yields zero.
pub fn beta(a: Complex64, b: Complex64) -> MeroValue {
    let pa = is_nonpositive_integer(a);
    let pb = is_nonpositive_integer(b);
    let ps = is_nonpositive_integer(a + b);
    match (i32::from(pa) + i32::from(pb) - i32::from(ps)).signum() {
        1 => MeroValue::Pole,
        -1 => MeroValue::Finite(Complex64::new(0.0, 0.0)),
        _ if pa || pb => {
            // One of the arguments is −n and the other a positive integer k:
            // B(−n, k) = (k−1)! / ((−n)(−n+1)…(−n+k−1)).
            let (n, k) = if pa { (a.re.round(), b.re.round()) } else { (b.re.round(), a.re.round()) };
            let k = k as i64;
            let mut value = 1.0;
            for j in 0..k {
                value *= (j.max(1)) as f64 / (n + j as f64);
            }
            // (k−1)! = Π_{j=1}^{k−1} j, folded into the loop above.
            MeroValue::Finite(Complex64::new(value, 0.0))
        }
        _ => MeroValue::Finite((ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()),
    }
}
