//! Hermite functions, associated Legendre functions and spherical harmonics.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Normalized Hermite function `h_n(ξ) = (2ⁿ n! √π)^{-1/2} H_n(ξ) e^{-ξ²/2}`.
pub fn hermite_function(n: usize, xi: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Associated Legendre function `P_l^m(x)` for `0 ≤ m ≤ l`, with the
/// Condon–Shortley phase.
pub fn assoc_legendre(l: usize, m: usize, x: f64) -> f64 {
    assert!(m <= l, "assoc_legendre needs m <= l");
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for i in 0..m {
        pmm *= -((2 * i + 1) as f64) * s;
    }
    if l == m {
        return pmm;
    }
    let mut p_prev = pmm;
    let mut p = x * (2 * m + 1) as f64 * pmm;
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * x * p - (ll + m - 1) as f64 * p_prev) / (ll - m) as f64;
        p_prev = p;
        p = next;
    }
    p
}

/// Orthonormal spherical harmonic `Y_lm(θ, φ)`.
pub fn spherical_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs() as usize;
    assert!(am <= l, "spherical_harmonic needs |m| <= l");
    let ratio: f64 = ((l - am + 1)..=(l + am)).map(|k| 1.0 / k as f64).product();
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * ratio).sqrt();
    let y = Complex64::from_polar(norm * assoc_legendre(l, am, theta.cos()), am as f64 * phi);
    if m >= 0 {
        y
    } else if am.is_multiple_of(2) {
        y.conj()
    } else {
        -y.conj()
    }
}
