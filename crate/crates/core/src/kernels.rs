//! Closed-form propagators, their alternative representations and the
//! x ↔ y duality between a Hamiltonian and its time-inverted partner.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::characteristic::{damped_frequency, eval_mu, mu1, mu2, mu3, mu4};
use crate::error::{Error, Result};
use crate::model::ModelId;
use crate::phase::{damped_symmetric_phase, green_phase, MU_FLOOR};
use crate::special::{gamma, hyp0f1};

/// A kernel value with the number of zeros of μ passed on the way from 0 to t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: Complex64,
    pub branch_index: u32,
}

/// A kernel of the form A · exp(i(αx² + βxy + γy²)) with real α, β, γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticKernel {
    pub amplitude: Complex64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl QuadraticKernel {
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        self.amplitude * Complex64::from_polar(1.0, self.alpha * (x * x) + self.gamma * (y * y) + self.beta * (x * y))
    }

    /// K†(x, y) = conj K(y, x).
    pub fn adjoint(&self) -> QuadraticKernel {
        QuadraticKernel { amplitude: self.amplitude.conj(), alpha: -self.gamma, beta: -self.beta, gamma: -self.alpha }
    }

    /// K(y, x).
    pub fn transpose(&self) -> QuadraticKernel {
        QuadraticKernel { amplitude: self.amplitude, alpha: self.gamma, beta: self.beta, gamma: self.alpha }
    }

    /// (2π)^{-1/2} e^{±ixy}.
    pub fn fourier(sign: f64) -> QuadraticKernel {
        QuadraticKernel { amplitude: Complex64::new((2.0 * PI).powf(-0.5), 0.0), alpha: 0.0, beta: sign.signum(), gamma: 0.0 }
    }
}

/// The two standing-wave kernels: `Plus` has denominator μ₁ and initial
/// data e^{ixy}/√(2π), `Minus` has denominator −μ₃ and initial data
/// e^{−ixy}/√(2π).  In x, `Plus` solves M1 and `Minus` solves M3; with x and
/// y exchanged they solve M4 and M2 respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Standing {
    Plus,
    Minus,
}

impl Standing {
    fn denominator(self, t: f64) -> f64 {
        match self {
            Standing::Plus => mu1(t),
            Standing::Minus => -mu3(t),
        }
    }
}

/// Integral operators appearing in the evolution identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Propagator {
    Green(ModelId),
    Standing(Standing),
    /// Damped oscillator in the symmetric gauge a = b = ω₀/2, c = d = −λ.
    DampedSymmetric { omega0: f64, lambda: f64 },
}

impl Propagator {
    /// Quadratic form of the kernel at time `t` and its branch index.
    pub fn quadratic(&self, t: f64) -> Result<(QuadraticKernel, u32)> {
        match *self {
            Propagator::Green(model) => {
                let p = green_phase(model, t)?;
                let mu = eval_mu(model, t)?.mu;
                let k = green_branch(model, t)?;
                let q = QuadraticKernel { amplitude: green_prefactor(mu, t, k), alpha: p.alpha, beta: p.beta, gamma: p.gamma };
                Ok((q, k))
            }
            Propagator::Standing(sign) => {
                let d = sign.denominator(t);
                if d.abs() <= MU_FLOOR {
                    return Err(Error::SingularTime { t, mu: d });
                }
                let k = count_sign_changes(|s| sign.denominator(s), t, scan_step(t, 1.0));
                let amp = Complex64::from_polar((2.0 * PI * d.abs()).powf(-0.5), -t.signum() * k as f64 * FRAC_PI_2);
                let (m2, m4) = (mu2(t), mu4(t));
                let q = match sign {
                    Standing::Plus => QuadraticKernel { amplitude: amp, alpha: -m4 / (2.0 * d), beta: 1.0 / d, gamma: -m2 / (2.0 * d) },
                    Standing::Minus => QuadraticKernel { amplitude: amp, alpha: -m2 / (2.0 * d), beta: -1.0 / d, gamma: -m4 / (2.0 * d) },
                };
                Ok((q, k))
            }
            Propagator::DampedSymmetric { omega0, lambda } => {
                let model = ModelId::damped(omega0, lambda)?;
                let p = damped_symmetric_phase(omega0, lambda, t)?;
                let mu = eval_mu(model, t)?.mu;
                let k = green_branch(model, t)?;
                let q = QuadraticKernel { amplitude: green_prefactor(mu, t, k), alpha: p.alpha, beta: p.beta, gamma: p.gamma };
                Ok((q, k))
            }
        }
    }

    pub fn eval(&self, x: f64, y: f64, t: f64) -> Result<KernelValue> {
        let (q, k) = self.quadratic(t)?;
        Ok(KernelValue { value: q.eval(x, y), branch_index: k })
    }
}

fn scan_step(t: f64, frequency: f64) -> f64 {
    (0.01f64).min(t.abs() / 100.0).min(0.05 / frequency)
}

/// Number of sign changes of `f` on (0, t] (or [t, 0)), counted on a
/// uniform scan with the given step.  The sign of f just after 0 is taken
/// to be sgn(t), so a change before the first sample also counts.
pub fn count_sign_changes<F: Fn(f64) -> f64>(f: F, t: f64, step: f64) -> u32 {
    if t == 0.0 {
        return 0;
    }
    let n = (t.abs() / step).ceil().max(1.0) as usize;
    let mut prev = t.signum();
    let mut count = 0;
    for i in 1..=n {
        let v = f(t * i as f64 / n as f64);
        if v != 0.0 && v.signum() != prev {
            count += 1;
            prev = v.signum();
        }
    }
    count
}

/// Sheet of the square root (2πiμ)^{1/2} reached by continuity from t = 0⁺.
pub fn green_branch(model: ModelId, t: f64) -> Result<u32> {
    model.validate()?;
    let freq = match model {
        ModelId::Damped { omega0, lambda } => damped_frequency(omega0, lambda),
        _ => 1.0,
    };
    Ok(count_sign_changes(|s| eval_mu(model, s).map(|st| st.mu).unwrap_or(0.0), t, scan_step(t, freq)))
}

/// (2πiμ)^{-1/2} on the sheet with `k` sign changes of μ.
pub fn green_prefactor(mu: f64, t: f64, k: u32) -> Complex64 {
    Complex64::from_polar((2.0 * PI * mu.abs()).powf(-0.5), -t.signum() * (FRAC_PI_4 + k as f64 * FRAC_PI_2))
}

/// Green function G(x, y, t) of `model`.
pub fn green_kernel(model: ModelId, x: f64, y: f64, t: f64) -> Result<KernelValue> {
    Propagator::Green(model).eval(x, y, t)
}

/// Standing-wave kernel K_±(x, y, t).
pub fn standing_kernel(sign: Standing, x: f64, y: f64, t: f64) -> Result<KernelValue> {
    Propagator::Standing(sign).eval(x, y, t)
}

/// Damped-oscillator Green function in the symmetric gauge.
pub fn damped_symmetric_kernel(omega0: f64, lambda: f64, x: f64, y: f64, t: f64) -> Result<KernelValue> {
    Propagator::DampedSymmetric { omega0, lambda }.eval(x, y, t)
}

fn principal_gaussian(den: f64, e_num: f64) -> Complex64 {
    // (2πi·den)^{-1/2} exp(e_num/(2i·den)), principal branch
    (Complex64::new(0.0, 2.0 * PI * den)).sqrt().inv() * (Complex64::new(0.0, -e_num / (2.0 * den))).exp()
}

/// The Green function of M1 or M3 written with Wronskians W(f, g) = fg' − f'g
/// of trigonometric and hyperbolic functions (principal square root, so only
/// valid before the first zero of μ).
pub fn wronskian_form_kernel(model: ModelId, x: f64, y: f64, t: f64) -> Result<Complex64> {
    let w = |f: fn(f64) -> f64, fp: fn(f64) -> f64, g: fn(f64) -> f64, gp: fn(f64) -> f64| f(t) * gp(t) - fp(t) * g(t);
    let neg_sin = |s: f64| -s.sin();
    let (den, num) = match model {
        ModelId::M1 => {
            let w_cos_cosh = w(f64::cos, neg_sin, f64::cosh, f64::sinh);
            let w_sin_cosh = w(f64::sin, f64::cos, f64::cosh, f64::sinh);
            let w_cos_sinh = w(f64::cos, neg_sin, f64::sinh, f64::cosh);
            (w_cos_cosh, w_sin_cosh * x * x + 2.0 * x * y - w_cos_sinh * y * y)
        }
        ModelId::M3 => {
            let w_sin_sinh = w(f64::sin, f64::cos, f64::sinh, f64::cosh);
            let w_cos_sinh = w(f64::cos, neg_sin, f64::sinh, f64::cosh);
            let w_sin_cosh = w(f64::sin, f64::cos, f64::cosh, f64::sinh);
            let w_sinh_sin = -w_sin_sinh;
            let g = Complex64::new(0.0, 2.0 * PI * w_sin_sinh).sqrt().inv();
            let e = (w_cos_sinh * x * x - 2.0 * x * y - w_sin_cosh * y * y) / w_sinh_sin;
            return Ok(g * Complex64::new(0.0, -e / 2.0).exp());
        }
        m => return Err(Error::InvalidModel(format!("no Wronskian form for {m}"))),
    };
    if den.abs() <= MU_FLOOR {
        return Err(Error::SingularTime { t, mu: den });
    }
    Ok(principal_gaussian(den, num))
}

/// A point on the pair of "clocks": z in the Euclidean and ζ in the
/// pseudo-Euclidean plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPair {
    pub z: Complex64,
    pub zeta: Complex64,
}

impl ContourPair {
    /// z = e^{it}, ζ = cosh t + i sinh t.
    pub fn modified_oscillator(t: f64) -> Self {
        Self { z: Complex64::from_polar(1.0, t), zeta: Complex64::new(t.cosh(), t.sinh()) }
    }

    pub fn free(t: f64) -> Self {
        Self { z: Complex64::new(1.0, 0.0), zeta: Complex64::new(1.0, t) }
    }

    pub fn harmonic(t: f64) -> Self {
        Self { z: Complex64::new(1.0, 0.0), zeta: Complex64::from_polar(1.0, t) }
    }
}

/// The symmetric complex form of the propagator,
/// (π(zζ − z*ζ*))^{-1/2} exp(((zζ + z*ζ*)x² − 4xy + (zζ* + z*ζ)y²) / (2(z*ζ* − zζ))).
pub fn complex_form_kernel(x: f64, y: f64, c: &ContourPair) -> Result<Complex64> {
    let (z, w) = (c.z, c.zeta);
    let d = z * w - (z * w).conj();
    if d.norm() <= 2.0 * MU_FLOOR {
        return Err(Error::SingularContour);
    }
    let num = (z * w + (z * w).conj()) * x * x - 4.0 * x * y + (z * w.conj() + z.conj() * w) * y * y;
    Ok((PI * d).sqrt().inv() * (num / (-2.0 * d)).exp())
}

/// Complex form of the M3 propagator, with ζ and ζ* exchanged.
pub fn complex_form_kernel_dual(x: f64, y: f64, c: &ContourPair) -> Result<Complex64> {
    let (z, w) = (c.z, c.zeta);
    let d = z * w.conj() - z.conj() * w;
    if d.norm() <= 2.0 * MU_FLOOR {
        return Err(Error::SingularContour);
    }
    let num = (z * w.conj() + z.conj() * w) * x * x - 4.0 * x * y + (z * w + (z * w).conj()) * y * y;
    Ok((PI * d).sqrt().inv() * (num / (-2.0 * d)).exp())
}

/// Real four-vector form with z = x₁ + ix₂ and ζ = x₃ + ix₄.
pub fn four_vector_kernel(x: f64, y: f64, v: [f64; 4]) -> Result<Complex64> {
    let den = v[0] * v[3] + v[1] * v[2];
    if den.abs() <= MU_FLOOR {
        return Err(Error::SingularContour);
    }
    let num = (x * x - y * y) * v[1] * v[3] + 2.0 * x * y - (x * x + y * y) * v[0] * v[2];
    Ok(principal_gaussian(den, num))
}

/// (x₁, x₂, x₃, x₄) from x₁' = −x₂, x₂' = x₁, x₃' = x₄, x₄' = x₃ with
/// initial data (1, 0, 1, 0), integrated by RK4.
pub fn four_vector_from_ode(t: f64, dt: f64) -> Result<[f64; 4]> {
    crate::ode::rk4(|_, v: &[f64; 4]| Ok([-v[1], v[0], v[3], v[2]]), 0.0, [1.0, 0.0, 1.0, 0.0], t, dt)
}

/// Short-time form (4πiε)^{-1/2} exp(i(x − y)²/(4ε)), ε = t³/3, of the M3
/// and M4 propagators.
pub fn small_time_kernel(x: f64, y: f64, t: f64) -> Complex64 {
    let eps = t.powi(3) / 3.0;
    Complex64::new(0.0, 4.0 * PI * eps).sqrt().inv() * Complex64::from_polar(1.0, (x - y).powi(2) / (4.0 * eps))
}

fn dims(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { left: xs.len(), right: ys.len() });
    }
    if xs.is_empty() {
        return Err(Error::DimensionMismatch { left: 0, right: 1 });
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// n-dimensional Green function in closed form: M1/M3 are G±, M2/M4 are
/// G± with the arguments exchanged.
pub fn ndim_green(model: ModelId, xs: &[f64], ys: &[f64], t: f64) -> Result<Complex64> {
    dims(xs, ys)?;
    let (sign, a, b) = match model {
        ModelId::M1 => (1.0, xs, ys),
        ModelId::M3 => (-1.0, xs, ys),
        ModelId::M2 => (1.0, ys, xs),
        ModelId::M4 => (-1.0, ys, xs),
        m => return Err(Error::InvalidModel(format!("no n-dimensional form for {m}"))),
    };
    let (s, c) = t.sin_cos();
    let (ch, sh) = (t.cosh(), t.sinh());
    let den = s * ch + sign * c * sh;
    if den.abs() <= MU_FLOOR {
        return Err(Error::SingularTime { t, mu: den });
    }
    let base = if sign > 0.0 { ModelId::M1 } else { ModelId::M3 };
    let k = green_branch(base, t)?;
    let (a2, b2, ab) = (dot(a, a), dot(b, b), dot(a, b));
    let num = sign * (a2 - b2) * s * sh + 2.0 * ab - (a2 + b2) * c * ch;
    let amp = green_prefactor(den, t, k).powi(xs.len() as i32);
    Ok(amp * Complex64::from_polar(1.0, -num / (2.0 * den)))
}

/// Product of one-dimensional Green functions over the coordinates.
pub fn ndim_green_product(model: ModelId, xs: &[f64], ys: &[f64], t: f64) -> Result<Complex64> {
    dims(xs, ys)?;
    let (q, _) = Propagator::Green(model).quadratic(t)?;
    Ok(xs.iter().zip(ys).map(|(&x, &y)| q.eval(x, y)).product())
}

/// n-dimensional standing-wave kernel K± in closed form.
pub fn ndim_standing(sign: Standing, xs: &[f64], ys: &[f64], t: f64) -> Result<Complex64> {
    dims(xs, ys)?;
    let pm = match sign {
        Standing::Plus => 1.0,
        Standing::Minus => -1.0,
    };
    let (s, c) = t.sin_cos();
    let (ch, sh) = (t.cosh(), t.sinh());
    let den = c * ch + pm * s * sh;
    if den.abs() <= MU_FLOOR {
        return Err(Error::SingularTime { t, mu: den });
    }
    let k = count_sign_changes(|r| sign.denominator(r), t, scan_step(t, 1.0));
    let (x2, y2, xy) = (dot(xs, xs), dot(ys, ys), dot(xs, ys));
    let num = (x2 + y2) * s * ch - pm * 2.0 * xy - pm * (x2 - y2) * c * sh;
    let amp = Complex64::from_polar((2.0 * PI * den.abs()).powf(-0.5), -t.signum() * k as f64 * FRAC_PI_2).powi(xs.len() as i32);
    Ok(amp * Complex64::from_polar(1.0, -num / (2.0 * den)))
}

/// Product of one-dimensional standing-wave kernels.
pub fn ndim_standing_product(sign: Standing, xs: &[f64], ys: &[f64], t: f64) -> Result<Complex64> {
    dims(xs, ys)?;
    let (q, _) = Propagator::Standing(sign).quadratic(t)?;
    Ok(xs.iter().zip(ys).map(|(&x, &y)| q.eval(x, y)).product())
}

/// Radial part 𝒢^K(r, r', t) of the n-dimensional M1 propagator in a
/// hyperspherical-harmonic expansion.  Requires μ₂(t) > 0.
pub fn radial_kernel(k: usize, n: usize, r: f64, rp: f64, t: f64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidQuantumNumbers("dimension must be at least 1".into()));
    }
    let mu = mu2(t);
    if mu <= MU_FLOOR {
        return Err(Error::SingularTime { t, mu });
    }
    let b = k as f64 + n as f64 / 2.0;
    let (s, c) = t.sin_cos();
    let (ch, sh) = (t.cosh(), t.sinh());
    let lead = Complex64::from_polar(1.0, -PI * (2.0 * k as f64 + n as f64) / 4.0) / (2f64.powf(b - 1.0) * gamma(b));
    let radial = (r * rp).powi(k as i32) / mu.powf(b);
    let phase = ((r * r + rp * rp) * c * ch - (r * r - rp * rp) * s * sh) / (2.0 * mu);
    let f = hyp0f1(b, -(r * rp).powi(2) / (4.0 * mu * mu));
    Ok(lead * radial * Complex64::from_polar(1.0, phase) * f)
}

/// Max deviation |G₁(x, y, t) − G₂(y, x, t)| over random
/// samples x, y ∈ [−3, 3], t ∈ [0.05, 2.2].
pub fn check_duality_symmetry(pair: (ModelId, ModelId), samples: usize, seed: u64) -> Result<f64> {
    let (m1, m2) = pair;
    if m1.dual() != Some(m2) {
        return Err(Error::InvalidModel(format!("{m1} and {m2} are not a dual pair")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = rng.gen_range(-3.0..3.0);
        let y = rng.gen_range(-3.0..3.0);
        let t = rng.gen_range(0.05..2.2);
        let g1 = green_kernel(m1, x, y, t)?.value;
        let g2 = green_kernel(m2, y, x, t)?.value;
        worst = worst.max((g1 - g2).norm());
    }
    Ok(worst)
}
