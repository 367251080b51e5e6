//! Special functions used by the eigenfunction and kernel code.

use std::f64::consts::PI;

pub use statrs::function::gamma::{gamma, ln_gamma};

/// Pochhammer symbol (a)_n.
pub fn poch(a: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// Generalized Laguerre polynomial L_k^(α)(x) by three-term recurrence.
pub fn laguerre(k: usize, alpha: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Jacobi polynomial P_n^(α,β)(x) by three-term recurrence in n.
pub fn jacobi(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let mut prev = 1.0;
    let mut cur = (alpha + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let kf = k as f64;
        let c = 2.0 * kf + ab;
        let a1 = 2.0 * kf * (kf + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta);
        let a3 = 2.0 * (kf + alpha - 1.0) * (kf + beta - 1.0) * c;
        let next = (a2 * cur - a3 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// Legendre polynomial P_k(x).
pub fn legendre(k: usize, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * x * cur - jf * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized Hermite function ψ_ν(x) = (2^ν ν! √π)^{-1/2} H_ν(x) e^{-x²/2}.
pub fn hermite_function(nu: usize, x: f64) -> f64 {
    let mut prev = PI.powf(-0.25) * (-0.5 * x * x).exp();
    if nu == 0 {
        return prev;
    }
    let mut cur = 2f64.sqrt() * x * prev;
    for n in 1..nu {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Bessel function of the first kind J_ν(z) for ν > -1 and z ≥ 0.
///
/// Power series for small arguments, Miller's backward recurrence with the
/// Neumann-series normalization otherwise.
pub fn bessel_j(nu: f64, z: f64) -> f64 {
    assert!(nu > -1.0, "order must exceed -1");
    assert!(z >= 0.0, "argument must be non-negative");
    if z == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if z < 8.0 {
        return bessel_series(nu, z);
    }
    bessel_miller(nu, z)
}

fn bessel_series(nu: f64, z: f64) -> f64 {
    let q = -0.25 * z * z;
    let mut term = 1.0 / gamma(nu + 1.0);
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum * (0.5 * z).powf(nu)
}

fn bessel_miller(nu: f64, z: f64) -> f64 {
    // Work with orders nu + k; the fractional base order stays in (-1, 0].
    let start = (z + 40.0 + 10.0 * z.sqrt()).ceil() as usize;
    let mut jp1 = 0.0;
    let mut j = 1e-300;
    let mut vals = vec![0.0; start + 2];
    vals[start] = j;
    for k in (1..=start).rev() {
        let order = nu + k as f64;
        let jm1 = 2.0 * order / z * j - jp1;
        jp1 = j;
        j = jm1;
        vals[k - 1] = j;
        if j.abs() > 1e250 {
            for v in vals.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
            jp1 *= 1e-250;
            j *= 1e-250;
        }
    }
    // (z/2)^ν = Γ(ν+1) J_ν + Σ_{k≥1} (ν+2k) Γ(ν+k)/k! J_{ν+2k}
    let mut norm = gamma(nu + 1.0) * vals[0];
    let mut k = 1;
    while 2 * k <= start {
        let kf = k as f64;
        let w = (nu + 2.0 * kf) * (ln_gamma(nu + kf) - ln_gamma(kf + 1.0)).exp();
        norm += w * vals[2 * k];
        k += 1;
    }
    vals[0] * (0.5 * z).powf(nu) / norm
}

/// Confluent hypergeometric limit function ₀F₁(; b; x) for b > 0.
pub fn hyp0f1(b: f64, x: f64) -> f64 {
    if x >= -16.0 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..500 {
            let kf = k as f64;
            term *= x / ((b + kf) * (kf + 1.0));
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        return sum;
    }
    let z = 2.0 * (-x).sqrt();
    gamma(b) * (0.5 * z).powf(1.0 - b) * bessel_j(b - 1.0, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_half_orders_match_elementary_forms() {
        for &z in &[0.3, 2.0, 7.9, 8.1, 15.0, 40.0, 90.0] {
            let j_half = (2.0 / (PI * z)).sqrt() * z.sin();
            let j_mhalf = (2.0 / (PI * z)).sqrt() * z.cos();
            let j_3half = (2.0 / (PI * z)).sqrt() * (z.sin() / z - z.cos());
            assert!((bessel_j(0.5, z) - j_half).abs() < 1e-13, "z={z}");
            assert!((bessel_j(-0.5, z) - j_mhalf).abs() < 1e-13, "z={z}");
            assert!((bessel_j(1.5, z) - j_3half).abs() < 1e-13, "z={z}");
        }
    }

    #[test]
    fn bessel_integer_orders_reference_values() {
        // Reference values from an arbitrary-precision library.
        assert!((bessel_j(0.0, 10.0) - (-0.2459357644513483)).abs() < 1e-14);
        assert!((bessel_j(1.0, 10.0) - 0.04347274616886144).abs() < 1e-14);
        assert!((bessel_j(3.0, 25.0) - 0.1083430810615089).abs() < 1e-14);
        assert!((bessel_j(0.0, 2.5) - (-0.04838377646819799)).abs() < 1e-14);
    }

    #[test]
    fn hyp0f1_branches_agree() {
        for &b in &[0.5, 1.5, 2.0, 3.5] {
            let x = -16.0;
            let series = {
                let mut t = 1.0;
                let mut s = 1.0;
                for k in 0..200 {
                    let kf = k as f64;
                    t *= x / ((b + kf) * (kf + 1.0));
                    s += t;
                }
                s
            };
            let z = 2.0 * (-x).sqrt();
            let via_bessel = gamma(b) * (0.5 * z).powf(1.0 - b) * bessel_j(b - 1.0, z);
            assert!((series - via_bessel).abs() < 1e-11, "b={b}");
        }
    }

    #[test]
    fn orthogonal_polynomials_small_cases() {
        assert!((laguerre(2, 0.5, 1.3) - (0.5 * 1.3f64.powi(2) - 2.5 * 1.3 + 1.875)).abs() < 1e-14);
        assert!((legendre(3, 0.4) - 0.5 * (5.0 * 0.064 - 1.2)).abs() < 1e-15);
        let h2 = (4.0 * 0.7f64.powi(2) - 2.0) * (-0.245f64).exp() / (8.0 * PI.sqrt()).sqrt();
        assert!((hermite_function(2, 0.7) - h2).abs() < 1e-15);
    }
}
