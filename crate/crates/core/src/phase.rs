//! Quadratic phases α, β, γ (and κ) of Green functions, of the general
//! two-parameter solution families and of the ε-regularized kernels.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::characteristic::{damped_frequency, eval_mu, mu4, CharacteristicState, WronskianBasis};
use crate::error::{Error, Result};
use crate::model::{CoefficientSet, ModelId};
use crate::quadrature::adaptive_simpson;

/// Below this |μ| a kernel is treated as singular.
pub const MU_FLOOR: f64 = 1e-12;

/// Coefficients of exp(i(αx² + βxy + γy² + κ)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseTriple {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub kappa: Option<f64>,
}

impl PhaseTriple {
    pub fn exponent(&self, x: f64, y: f64) -> f64 {
        // Summed so that swapping (x, α) with (y, γ) gives bit-identical results.
        self.alpha * (x * x) + self.gamma * (y * y) + self.beta * (x * y) + self.kappa.unwrap_or(0.0)
    }
}

fn trig(t: f64) -> (f64, f64, f64, f64) {
    let (s, c) = t.sin_cos();
    (c, s, t.cosh(), t.sinh())
}

fn check_mu(t: f64, mu: f64) -> Result<()> {
    if !(mu.abs() > MU_FLOOR) {
        return Err(Error::SingularTime { t, mu });
    }
    Ok(())
}

/// Phases of the Green function G = (2πiμ)^{-1/2} exp(i(αx² + βxy + γy²)).
pub fn green_phase(model: ModelId, t: f64) -> Result<PhaseTriple> {
    let st = eval_mu(model, t)?;
    let mu = st.mu;
    check_mu(t, mu)?;
    let (c, s, ch, sh) = trig(t);
    let (alpha, beta, gamma) = match model {
        ModelId::M1 => ((c * ch - s * sh) / (2.0 * mu), -1.0 / mu, (c * ch + s * sh) / (2.0 * mu)),
        ModelId::M2 => ((c * ch + s * sh) / (2.0 * mu), -1.0 / mu, (c * ch - s * sh) / (2.0 * mu)),
        ModelId::M3 => ((c * ch + s * sh) / (2.0 * mu), -1.0 / mu, (c * ch - s * sh) / (2.0 * mu)),
        ModelId::M4 => ((c * ch - s * sh) / (2.0 * mu), -1.0 / mu, (c * ch + s * sh) / (2.0 * mu)),
        ModelId::Free => (0.5 / t, -1.0 / t, 0.5 / t),
        ModelId::Harmonic => (c / (2.0 * s), -1.0 / s, c / (2.0 * s)),
        ModelId::Damped { omega0, lambda } => damped_phase(omega0, lambda, t),
    };
    Ok(PhaseTriple { t, alpha, beta, gamma, kappa: None })
}

/// Phases of the damped oscillator in the gauge a = (ω₀/2)e^{-2λt},
/// b = (ω₀/2)e^{2λt}, c = d = 0.
fn damped_phase(omega0: f64, lambda: f64, t: f64) -> (f64, f64, f64) {
    let w = damped_frequency(omega0, lambda);
    let (s, c) = (w * t).sin_cos();
    let alpha = (w * c - lambda * s) / (2.0 * omega0 * s) * (2.0 * lambda * t).exp();
    let beta = -w / (omega0 * s) * (lambda * t).exp();
    let den = w * c - lambda * s;
    let gamma = if den.abs() > 1e-8 {
        (w * w - omega0 * omega0 * s * s) / (2.0 * omega0 * s * den)
    } else {
        // removable zero of the denominator
        (w * c + lambda * s) / (2.0 * omega0 * s)
    };
    (alpha, beta, gamma)
}

/// Phases of the damped-oscillator Green function in the symmetric gauge
/// a = b = ω₀/2, c = d = −λ, including the antisymmetric λ(x² − y²)/(2ω₀)
/// term.
pub fn damped_symmetric_phase(omega0: f64, lambda: f64, t: f64) -> Result<PhaseTriple> {
    ModelId::damped(omega0, lambda)?;
    let w = damped_frequency(omega0, lambda);
    let (s, c) = (w * t).sin_cos();
    let mu = omega0 / w * (-lambda * t).exp() * s;
    check_mu(t, mu)?;
    let sym = w * c / (2.0 * omega0 * s);
    let anti = lambda / (2.0 * omega0);
    Ok(PhaseTriple { t, alpha: sym + anti, beta: -w / (omega0 * s), gamma: sym - anti, kappa: None })
}

/// α from the Riccati route α = μ'/(4aμ) − d/(2a), valid for any
/// coefficient set with a(t) ≠ 0.
pub fn riccati_alpha(set: &CoefficientSet, st: &CharacteristicState) -> f64 {
    let v = set.at(st.t);
    st.mu_prime / (4.0 * v.a * st.mu) - v.d / (2.0 * v.a)
}

/// γ by the integrated route
/// γ = a/(μμ') + d(0)/(2a(0)) − 4∫₀ᵗ aσ/μ'² dτ,
/// which needs a(0) ≠ 0 and μ' ≠ 0 on [0, t].
pub fn riccati_gamma(model: ModelId, t: f64) -> Result<f64> {
    let set = model.coefficients();
    let v0 = set.at(0.0);
    if v0.a == 0.0 {
        return Err(Error::InvalidModel(format!("{model}: a(0) = 0, integrated gamma route unavailable")));
    }
    let st = eval_mu(model, t)?;
    let v = set.at(t);
    let integrand = |tau: f64| {
        let vt = set.at(tau);
        let mp = eval_mu(model, tau).map(|s| s.mu_prime).unwrap_or(f64::NAN);
        vt.a * vt.sigma() / (mp * mp)
    };
    let integral = adaptive_simpson(integrand, 0.0, t, 1e-13);
    Ok(v.a / (st.mu * st.mu_prime) + v0.d / (2.0 * v0.a) - 4.0 * integral)
}

/// Initial data for the general two-parameter solution family.
///
/// `first` and `second` are the coefficients of μ in the model's
/// fundamental pair: M1 (c₁, c₂) for c₁μ₁ + c₂μ₂, M2 (c₂, c₃) for
/// c₂μ₂ + c₃μ₃, M3 (c₃, c₄) for c₃μ₃ + c₄μ₄ and M4 (c₁, c₄) for c₁μ₁ + c₄μ₄.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialSpan {
    pub first: f64,
    pub second: f64,
    pub beta0: f64,
    pub gamma0: f64,
    pub kappa0: f64,
}

impl InitialSpan {
    pub fn new(first: f64, second: f64, beta0: f64, gamma0: f64) -> Self {
        Self { first, second, beta0, gamma0, kappa0: 0.0 }
    }

    pub fn with_kappa0(mut self, kappa0: f64) -> Self {
        self.kappa0 = kappa0;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.first == 0.0 && self.second == 0.0 {
            return Err(Error::InvalidSpan("both span coefficients vanish".into()));
        }
        if ![self.first, self.second, self.beta0, self.gamma0, self.kappa0].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidSpan("non-finite initial data".into()));
        }
        Ok(())
    }
}

fn span_pair(model: ModelId) -> Result<(WronskianBasis, WronskianBasis)> {
    use WronskianBasis::*;
    Ok(match model {
        ModelId::M1 => (Y2, Y1),
        ModelId::M2 => (Y1, Y4),
        ModelId::M3 => (Y4, Y3),
        ModelId::M4 => (Y2, Y3),
        m => return Err(Error::InvalidModel(format!("{m} has no general solution family here"))),
    })
}

/// μ of the general family at time `t`.
pub fn span_characteristic(model: ModelId, span: &InitialSpan, t: f64) -> Result<CharacteristicState> {
    span.validate()?;
    let (p, q) = span_pair(model)?;
    let a = p.state(t);
    let b = q.state(t);
    let (c1, c2) = (span.first, span.second);
    Ok(CharacteristicState {
        t,
        mu: c1 * a.mu + c2 * b.mu,
        mu_prime: c1 * a.mu_prime + c2 * b.mu_prime,
        mu_double_prime: c1 * a.mu_double_prime + c2 * b.mu_double_prime,
    })
}

/// α, β, γ of the general solution family (κ is left unset; see [`kappa`]).
pub fn general_phase(model: ModelId, span: &InitialSpan, t: f64) -> Result<PhaseTriple> {
    let st = span_characteristic(model, span, t)?;
    let mu = st.mu;
    check_mu(t, mu)?;
    let (c, s, ch, sh) = trig(t);
    let (p, q) = (span.first, span.second);
    let (b0, g0) = (span.beta0, span.gamma0);
    let (alpha, beta, gamma) = match model {
        ModelId::M1 => {
            let (c1, c2) = (p, q);
            (
                (c * (c1 * sh + c2 * ch) - s * (c1 * ch + c2 * sh)) / (2.0 * mu),
                c1 * b0 / mu,
                g0 - c1 * b0 * b0 * (c * sh + s * ch) / (2.0 * mu),
            )
        }
        ModelId::M2 => {
            let (c2, c3) = (p, q);
            (
                (c * (c2 * ch - c3 * sh) + s * (c2 * sh + c3 * ch)) / (2.0 * mu),
                -c3 * b0 / mu,
                g0 + c3 * b0 * b0 * (c * sh + s * ch) / (2.0 * mu),
            )
        }
        ModelId::M3 => {
            let (c3, c4) = (p, q);
            (
                (s * (c3 * ch + c4 * sh) + c * (c3 * sh + c4 * ch)) / (2.0 * mu),
                -c3 * b0 / mu,
                g0 + c3 * b0 * b0 * mu4(t) / (2.0 * mu),
            )
        }
        ModelId::M4 => {
            let (c1, c4) = (p, q);
            (
                -(sh * (c1 * c + c4 * s) + ch * (c1 * s - c4 * c)) / (2.0 * mu),
                c1 * b0 / mu,
                g0 - c1 * b0 * b0 * mu4(t) / (2.0 * mu),
            )
        }
        _ => unreachable!("span_pair rejects other models"),
    };
    Ok(PhaseTriple { t, alpha, beta, gamma, kappa: None })
}

/// κ(t) for h = λμ'(t):
/// κ₀ − λ(μ^{1−s} − μ₀^{1−s})/(1−s) for s ≠ 1 and κ₀ − λ ln(μ/μ₀) for s = 1.
pub fn kappa(model: ModelId, span: &InitialSpan, s: f64, lambda: f64, t: f64) -> Result<f64> {
    if lambda == 0.0 {
        return Ok(span.kappa0);
    }
    if !(s >= 0.0) {
        return Err(Error::InvalidSpan(format!("nonlinearity exponent must be >= 0, got {s}")));
    }
    let mu0 = span_characteristic(model, span, 0.0)?.mu;
    let mu = span_characteristic(model, span, t)?.mu;
    if mu0 == 0.0 && s >= 1.0 {
        return Err(Error::DivergentPhase(format!("mu(0) = 0 with s = {s}")));
    }
    if (mu <= 0.0 || mu0 < 0.0) && s.fract() != 0.0 {
        return Err(Error::SingularTime { t, mu });
    }
    check_mu(t, mu)?;
    if s == 1.0 {
        return Ok(span.kappa0 - lambda * (mu / mu0).ln());
    }
    let p = 1.0 - s;
    Ok(span.kappa0 - lambda / p * (mu.powf(p) - mu0.powf(p)))
}

/// κ(t) = κ₀ − ∫₀ᵗ h(τ)/μ^s(τ) dτ by adaptive Simpson quadrature.
pub fn kappa_quadrature<H: Fn(f64) -> f64>(model: ModelId, span: &InitialSpan, s: f64, h: H, t: f64) -> Result<f64> {
    let mu0 = span_characteristic(model, span, 0.0)?.mu;
    if mu0 == 0.0 && s > 0.0 {
        return Err(Error::DivergentPhase("mu(0) = 0: integrand singular at t = 0".into()));
    }
    let integrand = |tau: f64| {
        let mu = span_characteristic(model, span, tau).map(|st| st.mu).unwrap_or(f64::NAN);
        h(tau) / mu.powf(s)
    };
    let v = adaptive_simpson(integrand, 0.0, t, 1e-12);
    if !v.is_finite() {
        return Err(Error::DivergentPhase("phase integral is not finite".into()));
    }
    Ok(span.kappa0 - v)
}

/// Phases of an ε-regularized kernel together with μ_ε and μ_ε'.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizedPhase {
    pub phase: PhaseTriple,
    pub mu_eps: f64,
    pub mu_eps_prime: f64,
}

/// Bilinear form of μ_ε/(2π): M1 εμ₁ + μ₂, M2 μ₂ − εμ₃, M3 μ₄ − εμ₃,
/// M4 μ₄ + εμ₁.
fn regularized_mu(model: ModelId, eps: f64, t: f64) -> Result<(f64, f64)> {
    use WronskianBasis::*;
    let (main, reg, sign) = match model {
        ModelId::M1 => (Y1, Y2, 1.0),
        ModelId::M2 => (Y1, Y4, -1.0),
        ModelId::M3 => (Y3, Y4, -1.0),
        ModelId::M4 => (Y3, Y2, 1.0),
        m => return Err(Error::InvalidModel(format!("{m} has no regularized kernel"))),
    };
    let a = main.state(t);
    let b = reg.state(t);
    Ok((a.mu + sign * eps * b.mu, a.mu_prime + sign * eps * b.mu_prime))
}

/// α_ε, β_ε, γ_ε and μ_ε of the regularized kernels, which tend to
/// δ_ε(x − y) = (2πiε)^{-1/2} e^{i(x−y)²/(2ε)} as t → 0.
pub fn regularized_phase(model: ModelId, eps: f64, t: f64) -> Result<RegularizedPhase> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidSpan(format!("regularization parameter must be >= 0, got {eps}")));
    }
    let (x, xp) = regularized_mu(model, eps, t)?;
    check_mu(t, x)?;
    let (c, s, ch, sh) = trig(t);
    let (alpha, beta, gamma) = match model {
        ModelId::M1 => {
            let den = 2.0 * x;
            (
                (c * (eps * sh + ch) - s * (eps * ch + sh)) / den,
                -1.0 / x,
                (c * (eps * sh + ch) + s * (eps * ch + sh)) / den,
            )
        }
        ModelId::M2 => {
            let den = 2.0 * x;
            (
                (c * (ch - eps * sh) + s * (sh + eps * ch)) / den,
                -1.0 / x,
                (c * (ch - eps * sh) - s * (sh + eps * ch)) / den,
            )
        }
        ModelId::M3 => {
            let den = 2.0 * x;
            (
                (s * (sh + eps * ch) + c * (ch - eps * sh)) / den,
                -1.0 / x,
                (c * (ch - eps * sh) - s * (sh + eps * ch)) / den,
            )
        }
        ModelId::M4 => {
            let den = 2.0 * x;
            (
                (c * (ch + eps * sh) - s * (sh + eps * ch)) / den,
                -1.0 / x,
                (c * (ch + eps * sh) + s * (sh + eps * ch)) / den,
            )
        }
        _ => unreachable!(),
    };
    Ok(RegularizedPhase {
        phase: PhaseTriple { t, alpha, beta, gamma, kappa: None },
        mu_eps: 2.0 * PI * x,
        mu_eps_prime: 2.0 * PI * xp,
    })
}

/// κ_ε(t) for the regularized kernel with h_ε = (λ/2π)μ_ε' and κ_ε(0) = 0.
///
/// With X = μ_ε/(2π): −λ/(2π)^s (X^{1−s} − ε^{1−s})/(1−s) for s < 1 and
/// −(λ/2π) ln(X/ε) for s = 1.
pub fn regularized_kappa(model: ModelId, eps: f64, s: f64, lambda: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidSpan(format!("regularized phase needs 0 <= s <= 1, got {s}")));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let (x, _) = regularized_mu(model, eps, t)?;
    if !(x > 0.0) {
        return Err(Error::SingularTime { t, mu: x });
    }
    if s == 1.0 {
        if eps == 0.0 {
            return Err(Error::DivergentPhase("s = 1 phase diverges as epsilon -> 0".into()));
        }
        return Ok(-lambda / (2.0 * PI) * (x / eps).ln());
    }
    let p = 1.0 - s;
    Ok(-lambda / (2.0 * PI).powf(s) * (x.powf(p) - eps.powf(p)) / p)
}

/// h(t) = exp(−∫₀ᵗ (c − 2d) dτ).
pub fn modulus_factor(set: &CoefficientSet, t: f64) -> f64 {
    let v0 = set.at(0.0).epsilon();
    if (0..=8).all(|k| set.at(t * k as f64 / 8.0).epsilon() == v0) {
        return (-v0 * t).exp();
    }
    (-adaptive_simpson(|tau| set.at(tau).epsilon(), 0.0, t, 1e-14)).exp()
}

/// Largest deviation in the symmetry criterion
/// 4(a₁b₁ − c₁d₁ + d₁²) = (4a₁a₂h² − μ'²)/μ² − 2εμ'/μ = 4(a₂b₂ − c₂d₂ + d₂²)
/// and, when τ₁ ≠ τ₂, in μ'/μ = 4(σ₁ − σ₂)/(τ₁ − τ₂).
///
/// `mu` is the Green characteristic function of the first equation.
pub fn check_duality_criterion(set1: &CoefficientSet, set2: &CoefficientSet, mu: &CharacteristicState) -> f64 {
    let t = mu.t;
    let p = set1.at(t);
    let q = set2.at(t);
    let h = modulus_factor(set1, t);
    let eps = p.epsilon();
    let ratio = mu.mu_prime / mu.mu;
    let e1 = 4.0 * (p.a * p.b - p.c * p.d + p.d * p.d);
    let e2 = (4.0 * p.a * q.a * h * h - mu.mu_prime * mu.mu_prime) / (mu.mu * mu.mu) - 2.0 * eps * ratio;
    let e3 = 4.0 * (q.a * q.b - q.c * q.d + q.d * q.d);
    let mut dev = (e1 - e2).abs().max((e2 - e3).abs());
    let dtau = p.tau() - q.tau();
    if dtau.abs() > 1e-9 {
        dev = dev.max((ratio - 4.0 * (p.sigma() - q.sigma()) / dtau).abs());
    }
    dev
}

/// |4a₁a₂ − μ'²| for a dual pair.
pub fn criterion_identity_residual(set1: &CoefficientSet, set2: &CoefficientSet, mu: &CharacteristicState) -> f64 {
    let p = set1.at(mu.t);
    let q = set2.at(mu.t);
    (4.0 * p.a * q.a - mu.mu_prime * mu.mu_prime).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m1_green_phase_reference() {
        let p = green_phase(ModelId::M1, 0.5).unwrap();
        assert!((p.beta + 1.0020875097216508).abs() < 1e-14);
    }

    #[test]
    fn green_phase_singular_at_zero() {
        assert!(matches!(green_phase(ModelId::M1, 0.0), Err(Error::SingularTime { .. })));
        assert!(matches!(green_phase(ModelId::M3, 0.0), Err(Error::SingularTime { .. })));
    }

    #[test]
    fn riccati_routes_agree_with_closed_forms() {
        for m in ModelId::CORE.into_iter().chain([ModelId::Harmonic, ModelId::Free, ModelId::Damped { omega0: 1.0, lambda: 0.1 }]) {
            for &t in &[0.3, 0.9, 1.7] {
                let st = eval_mu(m, t).unwrap();
                let p = green_phase(m, t).unwrap();
                let a = riccati_alpha(&m.coefficients(), &st);
                assert!((a - p.alpha).abs() < 1e-11 * (1.0 + a.abs()), "{m} {t}");
            }
        }
        for m in [ModelId::M1, ModelId::M2, ModelId::Harmonic, ModelId::Damped { omega0: 1.0, lambda: 0.1 }] {
            let t = 0.7;
            let g = riccati_gamma(m, t).unwrap();
            assert!((g - green_phase(m, t).unwrap().gamma).abs() < 1e-10, "{m}");
        }
    }

    #[test]
    fn damped_gamma_forms_agree() {
        let (w0, l) = (1.0, 0.1);
        let w = damped_frequency(w0, l);
        for &t in &[0.4, 1.3, 2.0] {
            let (_, _, g) = damped_phase(w0, l, t);
            let (s, c) = (w * t).sin_cos();
            assert!((g - (w * c + l * s) / (2.0 * w0 * s)).abs() < 1e-13);
        }
    }

    #[test]
    fn general_family_standing_wave_case() {
        // c₁ = 1, c₂ = 0, β₀ = 1, γ₀ = 0 is the standing-wave solution with
        // denominator μ₁.
        let t = 0.6;
        let p = general_phase(ModelId::M1, &InitialSpan::new(1.0, 0.0, 1.0, 0.0), t).unwrap();
        let m1 = crate::characteristic::mu1(t);
        let m2 = crate::characteristic::mu2(t);
        assert!((p.beta - 1.0 / m1).abs() < 1e-14);
        assert!((p.alpha + mu4(t) / (2.0 * m1)).abs() < 1e-14);
        assert!((p.gamma + m2 / (2.0 * m1)).abs() < 1e-14);
    }

    #[test]
    fn kappa_reference_and_quadrature() {
        let span = InitialSpan::new(1.0, 0.0, 1.0, 0.0);
        let k = kappa(ModelId::M1, &span, 0.5, 1.0, 1.0).unwrap();
        assert!((k + 0.7000946138193114).abs() < 1e-13);
        let k1 = kappa(ModelId::M1, &span, 1.0, 1.0, 1.0).unwrap();
        assert!((k1 + 0.6002792679833533).abs() < 1e-13);
        let h = |tau: f64| span_characteristic(ModelId::M1, &span, tau).unwrap().mu_prime;
        for (s, closed) in [(0.5, k), (1.0, k1)] {
            let kq = kappa_quadrature(ModelId::M1, &span, s, h, 1.0).unwrap();
            assert!((closed - kq).abs() < 1e-10);
        }
        assert_eq!(kappa(ModelId::M3, &span, 0.5, 0.0, 0.8).unwrap(), 0.0);
    }

    #[test]
    fn regularized_reference_value() {
        let k = regularized_kappa(ModelId::M1, 0.01, 1.0, 2.0 * PI, 0.5).unwrap();
        assert!((k + 4.61542834243474).abs() < 1e-12);
        assert!(matches!(regularized_kappa(ModelId::M1, 0.0, 1.0, 1.0, 0.5), Err(Error::DivergentPhase(_))));
    }

    #[test]
    fn regularized_reduces_to_green_at_zero_eps() {
        for m in ModelId::CORE {
            let r = regularized_phase(m, 0.0, 0.7).unwrap();
            let g = green_phase(m, 0.7).unwrap();
            assert!((r.phase.alpha - g.alpha).abs() < 1e-13);
            assert!((r.phase.beta - g.beta).abs() < 1e-13);
            assert!((r.phase.gamma - g.gamma).abs() < 1e-13);
        }
    }

    #[test]
    fn duality_criteria() {
        let pairs = [(ModelId::M1, ModelId::M2), (ModelId::M3, ModelId::M4), (ModelId::Harmonic, ModelId::Harmonic)];
        for (a, b) in pairs {
            for &t in &[0.2, 0.8, 1.5] {
                let st = eval_mu(a, t).unwrap();
                let dev = check_duality_criterion(&a.coefficients(), &b.coefficients(), &st);
                assert!(dev < 1e-12, "{a} {b} {t}: {dev}");
            }
        }
        let set = CoefficientSet::DampedSymmetric { omega0: 1.0, lambda: 0.1 };
        let st = eval_mu(ModelId::Damped { omega0: 1.0, lambda: 0.1 }, 1.1).unwrap();
        assert!(check_duality_criterion(&set, &set, &st) < 1e-12);
        let st = eval_mu(ModelId::M1, 0.4).unwrap();
        let r = criterion_identity_residual(&ModelId::M1.coefficients(), &ModelId::M2.coefficients(), &st);
        assert!(r < 1e-13);
    }
}
