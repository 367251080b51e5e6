//! Classical Hamiltonians H = ap² + bq² + 2dpq behind the characteristic
//! equations, the modified classical oscillators and the damped oscillator.

use serde::{Deserialize, Serialize};

use crate::characteristic::{eval_mu, CharacteristicIntegrator, CharacteristicState, WronskianBasis};
use crate::error::{Error, Result};
use crate::model::{CoefficientValues, ModelId};
use crate::ode::rk4;
use crate::phase::{green_phase, modulus_factor, PhaseTriple};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
    pub t: f64,
}

/// RK4 for q̇ = 2ap + 2dq, ṗ = −2bq − 2dp with the model's coefficients.
pub fn hamilton_flow(model: ModelId, start: PhasePoint, t: f64, dt: f64) -> Result<PhasePoint> {
    model.validate()?;
    if !(dt > 0.0) || !start.q.is_finite() || !start.p.is_finite() {
        return Err(Error::InvalidSpan(format!("need dt > 0 and a finite start, got dt = {dt}")));
    }
    let set = model.coefficients();
    let rhs = |s: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
        let v = set.at(s);
        let out = [2.0 * v.a * y[1] + 2.0 * v.d * y[0], -2.0 * v.b * y[0] - 2.0 * v.d * y[1]];
        if out.iter().all(|z| z.is_finite()) {
            Ok(out)
        } else {
            Err(Error::PoleCrossing { t: s, tau: f64::INFINITY, bound: f64::MAX })
        }
    };
    let [q, p] = rk4(rhs, start.t, [start.q, start.p], t, dt)?;
    Ok(PhasePoint { q, p, t })
}

/// The four modified classical oscillators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassicalEquation {
    /// q̈ + 2 tan t q̇ − 2q = 0
    Tan,
    /// q̈ − 2 tanh t q̇ + 2q = 0
    Tanh,
    /// q̈ − 2 cot t q̇ − 2q = 0
    Cot,
    /// q̈ − 2 coth t q̇ + 2q = 0
    Coth,
}

impl ClassicalEquation {
    pub const ALL: [ClassicalEquation; 4] =
        [ClassicalEquation::Tan, ClassicalEquation::Tanh, ClassicalEquation::Cot, ClassicalEquation::Coth];

    /// The quantum model whose Hamiltonian this is.
    pub fn model(self) -> ModelId {
        match self {
            ClassicalEquation::Tan => ModelId::M1,
            ClassicalEquation::Tanh => ModelId::M2,
            ClassicalEquation::Cot => ModelId::M3,
            ClassicalEquation::Coth => ModelId::M4,
        }
    }

    /// Fundamental pair {y_i, y_k}, i < k.
    pub fn fundamental_pair(self) -> (WronskianBasis, WronskianBasis) {
        use WronskianBasis::*;
        match self {
            ClassicalEquation::Tan => (Y1, Y2),
            ClassicalEquation::Tanh => (Y1, Y4),
            ClassicalEquation::Cot => (Y3, Y4),
            ClassicalEquation::Coth => (Y2, Y3),
        }
    }

    /// τ and σ of the form q̈ − τq̇ + 4σq = 0.
    pub fn tau(self, t: f64) -> f64 {
        match self {
            ClassicalEquation::Tan => -2.0 * t.tan(),
            ClassicalEquation::Tanh => 2.0 * t.tanh(),
            ClassicalEquation::Cot => 2.0 / t.tan(),
            ClassicalEquation::Coth => 2.0 / t.tanh(),
        }
    }

    pub fn sigma(self) -> f64 {
        match self {
            ClassicalEquation::Tan | ClassicalEquation::Cot => -0.5,
            ClassicalEquation::Tanh | ClassicalEquation::Coth => 0.5,
        }
    }
}

impl std::str::FromStr for ClassicalEquation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tan" | "ahc1" => Ok(ClassicalEquation::Tan),
            "tanh" | "ahc2" => Ok(ClassicalEquation::Tanh),
            "cot" | "ahc3" => Ok(ClassicalEquation::Cot),
            "coth" | "ahc4" => Ok(ClassicalEquation::Coth),
            _ => Err(Error::Parse(format!("unknown classical equation '{s}' (tan, tanh, cot, coth)"))),
        }
    }
}

/// c_a y_i(t) + c_b y_k(t) with value and derivative.
pub fn classical_state(eq: ClassicalEquation, c_a: f64, c_b: f64, t: f64) -> CharacteristicState {
    let (i, k) = eq.fundamental_pair();
    let (a, b) = (i.state(t), k.state(t));
    CharacteristicState {
        t,
        mu: c_a * a.mu + c_b * b.mu,
        mu_prime: c_a * a.mu_prime + c_b * b.mu_prime,
        mu_double_prime: c_a * a.mu_double_prime + c_b * b.mu_double_prime,
    }
}

pub fn classical_solution(eq: ClassicalEquation, c_a: f64, c_b: f64, t: f64) -> f64 {
    classical_state(eq, c_a, c_b, t).mu
}

/// max over `ts` of |RK4 − closed form| for c_a y_i + c_b y_k, integrating
/// from `t0` with closed-form initial data.
pub fn classical_rk4_deviation(eq: ClassicalEquation, c_a: f64, c_b: f64, t0: f64, ts: &[f64], dt: f64) -> Result<f64> {
    let start = classical_state(eq, c_a, c_b, t0);
    let integ = CharacteristicIntegrator { dt, ..Default::default() };
    let mut worst: f64 = 0.0;
    for &t in ts {
        let st = integ.integrate(|s| eq.tau(s), |_| eq.sigma(), t0, start.mu, start.mu_prime, t)?;
        worst = worst.max((st.mu - classical_solution(eq, c_a, c_b, t)).abs());
    }
    Ok(worst)
}

/// Terms of q̈ − (ȧ/a)q̇ + 4(ab − d² + (d/2)(ȧ/a − ḋ/d))q; the d·ḋ/d product
/// is taken as ḋ so that d = 0 is allowed.
fn hamiltonian_terms(v: &CoefficientValues, st: &CharacteristicState) -> [f64; 3] {
    let ra = v.da / v.a;
    let k = v.a * v.b - v.d * v.d + 0.5 * (v.d * ra - v.dd);
    [st.mu_double_prime, -ra * st.mu_prime, 4.0 * k * st.mu]
}

/// Relative residual of the model's characteristic function in the
/// eliminated Hamilton equation for q.
pub fn characteristic_from_hamiltonian(model: ModelId, t: f64) -> Result<f64> {
    let st = eval_mu(model, t)?;
    let v = model.coefficients().at(t);
    if v.a == 0.0 {
        return Err(Error::SingularTime { t, mu: st.mu });
    }
    let terms = hamiltonian_terms(&v, &st);
    let scale: f64 = terms.iter().map(|z| z.abs()).sum();
    let sum: f64 = terms.iter().sum();
    Ok(if scale == 0.0 { 0.0 } else { sum.abs() / scale })
}

/// |R_H − R_Q| / scale where R_H is the q-equation residual and R_Q the
/// quantum characteristic residual μ'' − τμ' + 4σμ, both on eval_mu.
pub fn quantization_consistency(model: ModelId, t: f64) -> Result<f64> {
    let st = eval_mu(model, t)?;
    let v = model.coefficients().at(t);
    if v.a == 0.0 {
        return Err(Error::SingularTime { t, mu: st.mu });
    }
    let h = hamiltonian_terms(&v, &st);
    let q = [st.mu_double_prime, -v.tau() * st.mu_prime, 4.0 * v.sigma() * st.mu];
    let scale: f64 = h.iter().chain(&q).map(|z| z.abs()).sum();
    let diff = h.iter().sum::<f64>() - q.iter().sum::<f64>();
    Ok(diff.abs() / scale.max(f64::MIN_POSITIVE))
}

/// Phases of the damped oscillator propagator.
pub fn damped_green_phase(omega0: f64, lambda: f64, t: f64) -> Result<PhaseTriple> {
    green_phase(ModelId::damped(omega0, lambda)?, t)
}

/// |β + h/μ| with h = exp(−∫(c − 2d)), the joint-solution form of β.
pub fn damped_beta_consistency(omega0: f64, lambda: f64, t: f64) -> Result<f64> {
    let model = ModelId::damped(omega0, lambda)?;
    let p = damped_green_phase(omega0, lambda, t)?;
    let mu = eval_mu(model, t)?.mu;
    Ok((p.beta + modulus_factor(&model.coefficients(), t) / mu).abs())
}
