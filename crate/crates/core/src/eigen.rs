//! Oscillator eigenfunctions, SU(1,1) Bargmann functions and the
//! eigenfunction expansions of the propagators.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{fourier, WaveGrid};
use crate::kernels::{ndim_green, radial_kernel};
use crate::model::ModelId;
use crate::quadrature::simpson;
use crate::special::{bessel_j, hermite_function, jacobi, laguerre, legendre, ln_gamma};

/// Quantum numbers N (principal), K (angular) in n dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OscillatorState {
    pub principal: usize,
    pub angular: usize,
    pub dim: usize,
}

impl OscillatorState {
    pub fn new(principal: usize, angular: usize, dim: usize) -> Result<Self> {
        if dim == 0 || angular > principal || !(principal - angular).is_multiple_of(2) {
            return Err(Error::InvalidQuantumNumbers(format!(
                "need N >= K with N - K even and n >= 1, got N = {principal}, K = {angular}, n = {dim}"
            )));
        }
        Ok(Self { principal, angular, dim })
    }

    /// k = (N − K)/2.
    pub fn radial_order(&self) -> usize {
        (self.principal - self.angular) / 2
    }

    /// j = K/2 + n/4 − 1.
    pub fn j(&self) -> f64 {
        self.angular as f64 / 2.0 + self.dim as f64 / 4.0 - 1.0
    }

    /// m = j + 1 + k.
    pub fn m(&self) -> f64 {
        self.j() + 1.0 + self.radial_order() as f64
    }
}

/// R_NK(r) = √(2k!/Γ((N+K+n)/2)) e^{−r²/2} r^K L_k^{K+n/2−1}(r²).
pub fn radial_wavefunction(state: &OscillatorState, r: f64) -> f64 {
    let k = state.radial_order();
    let kk = state.angular as f64;
    let n = state.dim as f64;
    let norm = (0.5 * (2f64.ln() + ln_gamma(k as f64 + 1.0) - ln_gamma((state.principal as f64 + kk + n) / 2.0))).exp();
    norm * (-0.5 * r * r).exp() * r.powi(state.angular as i32) * laguerre(k, kk + n / 2.0 - 1.0, r * r)
}

/// Normalized Hermite function ψ_ν(x).
pub fn hermite_wavefunction(nu: usize, x: f64) -> f64 {
    hermite_function(nu, x)
}

/// One-dimensional SU(1,1) basis function ψ_{jm}(x) = Y_K(x) R_NK(|x|) with
/// Y₀ = 1/√2 and Y₁ = sgn(x)/√2.  Equals (−1)^k ψ_N(x).
pub fn parity_wavefunction(principal: usize, x: f64) -> f64 {
    let state = OscillatorState { principal, angular: principal % 2, dim: 1 };
    let y = if state.angular == 0 { 1.0 } else { x.signum() };
    y / 2f64.sqrt() * radial_wavefunction(&state, x.abs())
}

/// Arguments of the Bargmann function v^j_{mm'}(μ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BargmannArgs {
    pub j: f64,
    pub m: f64,
    pub m_prime: f64,
    pub mu: f64,
}

/// Bargmann function v^j_{mm'}(μ) of the discrete series.
///
/// The terminating ₂F₁ is moved by a Pfaff transformation onto a Jacobi
/// polynomial with argument 1 − 2/cosh²(μ/2) ∈ [−1, 1), where the
/// recurrence is stable; the explicit alternating sum loses all digits
/// once k + k' reaches a few dozen.  With p = min(k, k'), q = |k − k'|:
/// v = (−1)^k √(Γ(2j+2+max) p!/(max! Γ(2j+2+p))) s^q c^{−q−2j−2} P_p^{(2j+1, q)}(1 − 2/c²),
/// s = sinh(μ/2), c = cosh(μ/2), and k = m − j − 1 always from the first index.
pub fn bargmann_v(args: &BargmannArgs) -> Result<f64> {
    let BargmannArgs { j, m, m_prime, mu } = *args;
    let kf = m - j - 1.0;
    let kpf = m_prime - j - 1.0;
    if !(j > -1.0) || kf < -1e-9 || kpf < -1e-9 || (kf - kf.round()).abs() > 1e-9 || (kpf - kpf.round()).abs() > 1e-9 {
        return Err(Error::InvalidQuantumNumbers(format!("need m, m' in j+1, j+2, ..., got j = {j}, m = {m}, m' = {m_prime}")));
    }
    let (k, kp) = (kf.round() as usize, kpf.round() as usize);
    let (lo, hi) = (k.min(kp), k.max(kp));
    let q = hi - lo;
    let s = (0.5 * mu).sinh();
    let c = (0.5 * mu).cosh();
    let b = 2.0 * j + 2.0;
    let ln_norm = 0.5 * (ln_gamma(b + hi as f64) + ln_gamma(lo as f64 + 1.0) - ln_gamma(hi as f64 + 1.0) - ln_gamma(b + lo as f64));
    let ln_c = -(q as f64 + b) * c.ln();
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let p = jacobi(lo, b - 1.0, q as f64, 1.0 - 2.0 / (c * c));
    Ok(sign * (ln_norm + ln_c).exp() * s.powi(q as i32) * p)
}

fn class_j(angular: usize) -> Result<f64> {
    match angular {
        0 => Ok(-0.75),
        1 => Ok(-0.25),
        _ => Err(Error::InvalidQuantumNumbers(format!("one-dimensional classes have K = 0 or 1, got {angular}"))),
    }
}

/// Bargmann matrix V[a][b] = v^j_{m_a m_b}(μ) for k_a, k_b < cutoff.
fn bargmann_matrix(j: f64, mu: f64, cutoff: usize) -> Result<Vec<Vec<f64>>> {
    (0..cutoff)
        .map(|a| {
            (0..cutoff)
                .map(|b| bargmann_v(&BargmannArgs { j, m: j + 1.0 + a as f64, m_prime: j + 1.0 + b as f64, mu }))
                .collect()
        })
        .collect()
}

fn class_overlaps(psi0: &WaveGrid, angular: usize, cutoff: usize) -> Result<Vec<Complex64>> {
    psi0.check_tails()?;
    let h = psi0.spacing();
    Ok((0..cutoff)
        .map(|k| {
            let nu = 2 * k + angular;
            psi0.values().iter().enumerate().map(|(i, v)| parity_wavefunction(nu, psi0.x(i)) * v).sum::<Complex64>() * h
        })
        .collect())
}

fn i_pow(p: i64) -> Complex64 {
    match p.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// c_m(t) = e^{−2imt} Σ_{m'} i^{m'−m} v^j_{m'm}(2t) ⟨ψ_{jm'}, ψ₀⟩ for the
/// class with angular number K ∈ {0, 1}, m = j+1 .. j+cutoff (M1 evolution).
pub fn expansion_coefficients(psi0: &WaveGrid, angular: usize, t: f64, cutoff: usize) -> Result<Vec<Complex64>> {
    let j = class_j(angular)?;
    let o = class_overlaps(psi0, angular, cutoff)?;
    let v = bargmann_matrix(j, 2.0 * t, cutoff)?;
    Ok((0..cutoff)
        .map(|a| {
            let m = j + 1.0 + a as f64;
            let s: Complex64 = (0..cutoff).map(|b| i_pow(b as i64 - a as i64) * v[b][a] * o[b]).sum();
            Complex64::from_polar(1.0, -2.0 * m * t) * s
        })
        .collect())
}

/// c_m(t) = Σ_{m'} (−i)^{m−m'} e^{−2im't} v^j_{m'm}(−2t) ⟨ψ_{jm'}, ψ₀⟩, the
/// dual expansion.  Summed as written it represents F₊ Gᵀ F₊⁻¹ with G the M1
/// propagator, i.e. the transposed kernel seen in the momentum picture.
/// Equivalently c(t)[ψ₀] = e^{−2imt} c^{M1}(−t)[U_osc(t) ψ₀] with U_osc the
/// harmonic oscillator evolution.
pub fn dual_expansion_coefficients(psi0: &WaveGrid, angular: usize, t: f64, cutoff: usize) -> Result<Vec<Complex64>> {
    let j = class_j(angular)?;
    let o = class_overlaps(psi0, angular, cutoff)?;
    let v = bargmann_matrix(j, -2.0 * t, cutoff)?;
    Ok((0..cutoff)
        .map(|a| {
            (0..cutoff)
                .map(|b| {
                    let mp = j + 1.0 + b as f64;
                    i_pow(-(a as i64 - b as i64)) * Complex64::from_polar(v[b][a], -2.0 * mp * t) * o[b]
                })
                .sum()
        })
        .collect())
}

/// Σ_K Σ_k c_k ψ_{j,m}(x) evaluated on a grid.
pub fn synthesize(half_width: f64, points: usize, coeffs: &[Vec<Complex64>; 2]) -> Result<WaveGrid> {
    WaveGrid::from_fn(half_width, points, |x| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (angular, cs) in coeffs.iter().enumerate() {
            for (k, c) in cs.iter().enumerate() {
                acc += c * parity_wavefunction(2 * k + angular, x);
            }
        }
        acc
    })
}

/// Truncated eigenfunction expansion of the M1 Green function,
/// Σ_{K} Σ_{k,k' < cutoff} e^{−2imt} i^{m'−m} v^j_{m'm}(2t) ψ_{jm}(x) ψ_{jm'}(y).
pub fn expanded_green(x: f64, y: f64, t: f64, cutoff: usize) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for angular in 0..2 {
        let j = class_j(angular)?;
        let v = bargmann_matrix(j, 2.0 * t, cutoff)?;
        let px: Vec<f64> = (0..cutoff).map(|k| parity_wavefunction(2 * k + angular, x)).collect();
        let py: Vec<f64> = (0..cutoff).map(|k| parity_wavefunction(2 * k + angular, y)).collect();
        for a in 0..cutoff {
            let m = j + 1.0 + a as f64;
            let phase = Complex64::from_polar(1.0, -2.0 * m * t);
            let inner: Complex64 = (0..cutoff).map(|b| i_pow(b as i64 - a as i64) * v[b][a] * py[b]).sum();
            acc += phase * px[a] * inner;
        }
    }
    Ok(acc)
}

/// max |(H₀ − ν − 1/2) ψ_ν| on the interior of a grid, H₀ = (−∂² + x²)/2 by
/// finite differences.
pub fn energy_check(nu: usize, half_width: f64, points: usize) -> Result<f64> {
    let g = WaveGrid::from_fn(half_width, points, |x| Complex64::new(hermite_function(nu, x), 0.0))?;
    let h0 = ModelId::Harmonic.coefficients().at(0.0);
    let hg = crate::evolution::apply_hamiltonian(&h0, &g);
    let e = nu as f64 + 0.5;
    let margin = points / 8;
    Ok((margin..points - margin).map(|i| (hg.values()[i] - e * g.values()[i]).norm()).fold(0.0, f64::max))
}

/// ⟨ψ_ν, F₊ψ_ν⟩ on a grid; the Hermite functions are Fourier eigenfunctions
/// with eigenvalue i^ν.
pub fn fourier_eigen_phase(nu: usize, half_width: f64, points: usize) -> Result<Complex64> {
    let g = WaveGrid::from_fn(half_width, points, |x| Complex64::new(hermite_function(nu, x), 0.0))?;
    g.inner(&fourier(&g, 1.0)?)
}

/// S₋₁(r, r') = (rr')^K / (2^{K+n/2−1} Γ(K+n/2)) ₀F₁(; K+n/2; −(rr')²/4).
pub fn hankel_kernel(angular: usize, dim: usize, r: f64, rp: f64) -> f64 {
    let b = angular as f64 + dim as f64 / 2.0;
    let z = r * rp;
    let lead = z.powi(angular as i32) / (2f64.powf(b - 1.0) * crate::special::gamma(b));
    lead * crate::special::hyp0f1(b, -z * z / 4.0)
}

/// max over sample radii of |(−1)^k R_NK(r) − ∫₀^∞ S₋₁(r, r') R_NK(r') r'^{n−1} dr'|,
/// the integral by composite Simpson on [0, 20] with 2000 intervals.
pub fn hankel_radial_check(principal: usize, angular: usize, dim: usize) -> Result<f64> {
    let state = OscillatorState::new(principal, angular, dim)?;
    let sign = if state.radial_order() % 2 == 0 { 1.0 } else { -1.0 };
    let mut worst: f64 = 0.0;
    for &r in &[0.25, 0.6, 1.0, 1.5, 2.2, 3.0] {
        let integral = simpson(
            |rp| hankel_kernel(angular, dim, r, rp) * radial_wavefunction(&state, rp) * rp.powi(dim as i32 - 1),
            0.0,
            20.0,
            2000,
        );
        worst = worst.max((sign * radial_wavefunction(&state, r) - integral).abs());
    }
    Ok(worst)
}

fn polar3(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != 3 || ys.len() != 3 {
        return Err(Error::DimensionMismatch { left: xs.len(), right: 3 });
    }
    let r = xs.iter().map(|v| v * v).sum::<f64>().sqrt();
    let rp = ys.iter().map(|v| v * v).sum::<f64>().sqrt();
    let cos = if r == 0.0 || rp == 0.0 { 0.0 } else { xs.iter().zip(ys).map(|(a, b)| a * b).sum::<f64>() / (r * rp) };
    Ok((r, rp, cos.clamp(-1.0, 1.0)))
}

/// Partial sum Σ_{K ≤ K_max} (2K+1)/(4π) P_K(cos γ) 𝒢^K(r, r', t) of the
/// hyperspherical expansion in three dimensions.
pub fn legendre_green(xs: &[f64], ys: &[f64], t: f64, k_max: usize) -> Result<Complex64> {
    let (r, rp, cos) = polar3(xs, ys)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=k_max {
        acc += (2.0 * k as f64 + 1.0) / (4.0 * PI) * legendre(k, cos) * radial_kernel(k, 3, r, rp, t)?;
    }
    Ok(acc)
}

/// |G(x, y, t) − legendre_green| in three dimensions for the M1 propagator.
pub fn legendre_sum_check(xs: &[f64], ys: &[f64], t: f64, k_max: usize) -> Result<f64> {
    let exact = ndim_green(ModelId::M1, xs, ys, t)?;
    Ok((exact - legendre_green(xs, ys, t, k_max)?).norm())
}

/// |e^{ix·y} − rr'(2π/(rr'))^{3/2} Σ_K i^K (2K+1)/(4π) P_K(cos γ) J_{K+1/2}(rr')|.
pub fn plane_wave_check(xs: &[f64], ys: &[f64], k_max: usize) -> Result<f64> {
    let (r, rp, cos) = polar3(xs, ys)?;
    let z = r * rp;
    let exact = Complex64::from_polar(1.0, z * cos);
    if z == 0.0 {
        return Ok((exact - 1.0).norm());
    }
    let lead = z * (2.0 * PI / z).powf(1.5);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=k_max {
        acc += i_pow(k as i64) * (2.0 * k as f64 + 1.0) / (4.0 * PI) * legendre(k, cos) * bessel_j(k as f64 + 0.5, z);
    }
    Ok((exact - lead * acc).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{apply_kernel, apply_quadratic};
    use crate::kernels::{green_kernel, Propagator};

    #[test]
    fn quantum_number_validation() {
        assert!(OscillatorState::new(3, 2, 1).is_err());
        assert!(OscillatorState::new(2, 3, 1).is_err());
        let s = OscillatorState::new(5, 1, 1).unwrap();
        assert_eq!(s.radial_order(), 2);
        assert!((s.j() + 0.25).abs() < 1e-15 && (s.m() - 2.75).abs() < 1e-15);
    }

    #[test]
    fn parity_basis_is_signed_hermite() {
        for nu in 0..12 {
            let k = nu / 2;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            for &x in &[-2.3, -0.4, 0.7, 1.9] {
                assert!((parity_wavefunction(nu, x) - sign * hermite_function(nu, x)).abs() < 1e-13, "{nu} {x}");
            }
        }
    }

    #[test]
    fn bargmann_reference_values() {
        // Independent arbitrary-precision evaluation of the hypergeometric form.
        let v = bargmann_v(&BargmannArgs { j: -0.25, m: 2.75, m_prime: 1.75, mu: 0.8 }).unwrap();
        assert!((v - (-0.564888246426073)).abs() < 1e-13, "{v}");
        let v = bargmann_v(&BargmannArgs { j: -0.75, m: 3.25, m_prime: 5.25, mu: 1.3 }).unwrap();
        assert!((v - 0.002982408760058325).abs() < 1e-13, "{v}");
    }

    #[test]
    fn bargmann_identity_at_zero() {
        for a in 0..6 {
            for b in 0..6 {
                let v = bargmann_v(&BargmannArgs { j: -0.75, m: 0.25 + a as f64, m_prime: 0.25 + b as f64, mu: 0.0 }).unwrap();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ground_state_coefficients_at_time_zero() {
        let g = WaveGrid::from_fn(12.0, 512, |x| Complex64::new(hermite_function(0, x), 0.0)).unwrap();
        let c = expansion_coefficients(&g, 0, 0.0, 6).unwrap();
        assert!((c[0] - 1.0).norm() < 1e-12);
        assert!(c[1..].iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn radial_checks() {
        assert!(hankel_radial_check(2, 0, 3).unwrap() < 1e-8);
        assert!(plane_wave_check(&[0.3, 0.5, -0.2], &[1.0, -0.4, 0.8], 30).unwrap() < 1e-12);
    }

    fn packet() -> WaveGrid {
        WaveGrid::from_fn(12.0, 512, |x| Complex64::from_polar((-(x - 0.7) * (x - 0.7) / 1.2).exp(), 0.3 * x)).unwrap()
    }

    fn expand(g: &WaveGrid, t: f64, dual: bool) -> WaveGrid {
        let f = if dual { dual_expansion_coefficients } else { expansion_coefficients };
        synthesize(12.0, 512, &[f(g, 0, t, 40).unwrap(), f(g, 1, t, 40).unwrap()]).unwrap()
    }

    #[test]
    fn expansion_matches_kernel_propagation() {
        let g = packet();
        let d = apply_kernel(&Propagator::Green(ModelId::M1), &g, 0.3).unwrap();
        assert!(expand(&g, 0.3, false).l2_distance(&d).unwrap() < 1e-10);
        let d = apply_kernel(&Propagator::Green(ModelId::M1), &g, 0.8).unwrap();
        assert!(expand(&g, 0.8, false).l2_distance(&d).unwrap() < 1e-5);
    }

    #[test]
    fn dual_expansion_is_fourier_conjugated_transpose() {
        let g = packet();
        let (q, _) = Propagator::Green(ModelId::M1).quadratic(0.5).unwrap();
        let inner = apply_quadratic(&q.transpose(), &fourier(&g, -1.0).unwrap()).unwrap();
        let d = fourier(&inner, 1.0).unwrap();
        assert!(expand(&g, 0.5, true).l2_distance(&d).unwrap() < 1e-9);
    }

    #[test]
    fn dual_expansion_reverses_time_through_the_oscillator() {
        let g = packet();
        let t = 0.4;
        let dual: Vec<_> = (0..2).map(|k| dual_expansion_coefficients(&g, k, t, 30).unwrap()).collect();
        let rotated = apply_kernel(&Propagator::Green(ModelId::Harmonic), &g, t).unwrap();
        for (angular, cs) in dual.iter().enumerate() {
            let j = class_j(angular).unwrap();
            let back = expansion_coefficients(&rotated, angular, -t, 30).unwrap();
            for (a, (c, b)) in cs.iter().zip(&back).enumerate() {
                let m = j + 1.0 + a as f64;
                // Class energies are 2m, so U_osc(t) rotates each overlap by e^{-2imt}.
                let expect = Complex64::from_polar(1.0, -2.0 * m * t) * b;
                assert!((c - expect).norm() < 1e-8, "{angular} {a} {c} {expect}");
            }
        }
    }

    #[test]
    fn ground_state_probability_is_conserved() {
        let g = WaveGrid::from_fn(12.0, 512, |x| Complex64::new(hermite_function(0, x), 0.0)).unwrap();
        let total: f64 = (0..2).flat_map(|k| expansion_coefficients(&g, k, 0.3, 40).unwrap()).map(|c| c.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-5, "{total}");
    }

    #[test]
    fn bargmann_lowest_weight_and_unitarity() {
        for &j in &[-0.75, -0.25, 0.5] {
            let v = bargmann_v(&BargmannArgs { j, m: j + 1.0, m_prime: j + 1.0, mu: 0.9 }).unwrap();
            assert!((v - (0.45f64).cosh().powf(-2.0 * j - 2.0)).abs() < 1e-14);
        }
        for &mu in &[0.3, 1.0] {
            let j = -0.25;
            for a in 0..5 {
                for b in 0..5 {
                    let s: f64 = (0..=60)
                        .map(|c| {
                            let v = |p: usize| bargmann_v(&BargmannArgs { j, m: j + 1.0 + p as f64, m_prime: j + 1.0 + c as f64, mu }).unwrap();
                            v(a) * v(b)
                        })
                        .sum();
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((s - expect).abs() < 1e-6, "{mu} {a} {b} {s}");
                }
            }
        }
    }

    #[test]
    fn bargmann_is_stable_at_high_order() {
        // The explicit alternating sum overflows to nonsense here; the Jacobi route stays bounded.
        let v = bargmann_v(&BargmannArgs { j: -0.75, m: 60.25, m_prime: 58.25, mu: 1.0 }).unwrap();
        assert!(v.is_finite() && v.abs() <= 1.0);
    }

    #[test]
    fn radial_normalization_and_orthogonality() {
        let r00 = OscillatorState::new(0, 0, 3).unwrap();
        let r20 = OscillatorState::new(2, 0, 3).unwrap();
        let norm = simpson(|r| radial_wavefunction(&r00, r).powi(2) * r * r, 0.0, 15.0, 3000);
        let ortho = simpson(|r| radial_wavefunction(&r00, r) * radial_wavefunction(&r20, r) * r * r, 0.0, 15.0, 3000);
        assert!((norm - 1.0).abs() < 1e-8 && ortho.abs() < 1e-8);
        let r = OscillatorState::new(5, 3, 2).unwrap();
        let norm = simpson(|x| radial_wavefunction(&r, x).powi(2) * x, 0.0, 15.0, 3000);
        assert!((norm - 1.0).abs() < 1e-8);
    }

    #[test]
    fn hermite_energies() {
        for nu in [0, 1, 4, 9] {
            assert!(energy_check(nu, 10.0, 2048).unwrap() < 1e-4, "{nu}");
        }
    }

    #[test]
    fn fourier_eigenvalues() {
        for nu in 0..8 {
            assert!((fourier_eigen_phase(nu, 12.0, 512).unwrap() - i_pow(nu as i64)).norm() < 1e-10);
        }
    }

    #[test]
    fn expanded_green_time_reversal_symmetry() {
        let a = expanded_green(0.4, -0.3, 0.3, 30).unwrap();
        let b = expanded_green(0.4, -0.3, -0.3, 30).unwrap().conj();
        assert!((a - b).norm() < 1e-12);
        let exact = green_kernel(ModelId::M1, 0.5, 0.3, 0.3).unwrap().value;
        assert!((expanded_green(0.5, 0.3, 0.3, 40).unwrap() - exact).norm() < 0.05);
    }

    #[test]
    fn hyperspherical_sums() {
        let x = [0.6, 0.8, 0.0];
        let c = 0.5f64.cos();
        let y = [0.8 * (c * 0.6 - 0.5f64.sin() * 0.8), 0.8 * (c * 0.8 + 0.5f64.sin() * 0.6), 0.0];
        assert!(legendre_sum_check(&x, &y, 0.4, 30).unwrap() < 1e-4);
        assert!(legendre_sum_check(&[0.0, 0.0, 1.2], &[0.0, 0.0, -0.7], 0.4, 30).unwrap() < 1e-4);
        assert!(plane_wave_check(&[1.0, 1.0, 0.5], &[0.8, -1.2, 0.9], 40).unwrap() < 1e-6);
        for (nn, kk, d) in [(0, 0, 3), (4, 0, 3), (3, 3, 2), (5, 1, 2)] {
            assert!(hankel_radial_check(nn, kk, d).unwrap() < 1e-6);
        }
    }
}
