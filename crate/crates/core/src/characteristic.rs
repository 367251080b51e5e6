//! Characteristic functions μ(t), the bilinear trigonometric–hyperbolic
//! basis they are built from, and an ODE route for cross-checking.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelId;
use crate::ode::rk4;

/// The products u_α v_β with u₁ = cos, u₂ = sin, v₁ = cosh, v₂ = sinh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Product {
    U1V1,
    U1V2,
    U2V1,
    U2V2,
}

impl Product {
    pub const ALL: [Product; 4] = [Product::U1V1, Product::U1V2, Product::U2V1, Product::U2V2];

    fn index(self) -> usize {
        self as usize
    }

    pub fn bilinear(self) -> Bilinear {
        let mut c = [0.0; 4];
        c[self.index()] = 1.0;
        Bilinear(c)
    }
}

/// A linear combination Σ c_k p_k of the four products, closed under d/dt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bilinear(pub [f64; 4]);

impl Bilinear {
    pub fn eval(&self, t: f64) -> f64 {
        let (u2, u1) = t.sin_cos();
        let (v1, v2) = (t.cosh(), t.sinh());
        let c = &self.0;
        c[0] * u1 * v1 + c[1] * u1 * v2 + c[2] * u2 * v1 + c[3] * u2 * v2
    }

    /// Exact derivative, using u₁' = −u₂, u₂' = u₁, v₁' = v₂, v₂' = v₁.
    pub fn derivative(&self) -> Bilinear {
        let [a, b, c, d] = self.0;
        Bilinear([b + c, a + d, d - a, c - b])
    }

    pub fn nth_derivative(&self, n: usize) -> Bilinear {
        (0..n).fold(*self, |acc, _| acc.derivative())
    }

    pub fn scale(&self, s: f64) -> Bilinear {
        Bilinear(self.0.map(|c| c * s))
    }

    pub fn add(&self, other: &Bilinear) -> Bilinear {
        let mut out = self.0;
        for (o, x) in out.iter_mut().zip(other.0) {
            *o += x;
        }
        Bilinear(out)
    }
}

/// The four Wronskians of {cos, sin} with {cosh, sinh}.
///
/// Y1 = u₁v₂ + u₂v₁, Y2 = u₁v₁ + u₂v₂, Y3 = u₂v₁ − u₁v₂, Y4 = u₂v₂ − u₁v₁.
/// In terms of the characteristic functions: Y1 = μ₂, Y2 = μ₁, Y3 = μ₄,
/// Y4 = μ₃.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WronskianBasis {
    Y1,
    Y2,
    Y3,
    Y4,
}

impl WronskianBasis {
    pub const ALL: [WronskianBasis; 4] =
        [WronskianBasis::Y1, WronskianBasis::Y2, WronskianBasis::Y3, WronskianBasis::Y4];

    pub fn bilinear(self) -> Bilinear {
        match self {
            WronskianBasis::Y1 => Bilinear([0.0, 1.0, 1.0, 0.0]),
            WronskianBasis::Y2 => Bilinear([1.0, 0.0, 0.0, 1.0]),
            WronskianBasis::Y3 => Bilinear([0.0, -1.0, 1.0, 0.0]),
            WronskianBasis::Y4 => Bilinear([-1.0, 0.0, 0.0, 1.0]),
        }
    }

    /// Value, first and second derivative at `t`.
    pub fn state(self, t: f64) -> CharacteristicState {
        let b = self.bilinear();
        let mu = match self {
            WronskianBasis::Y3 => mu4(t),
            _ => b.eval(t),
        };
        CharacteristicState {
            t,
            mu,
            mu_prime: b.derivative().eval(t),
            mu_double_prime: b.nth_derivative(2).eval(t),
        }
    }

    pub fn value(self, t: f64) -> f64 {
        self.state(t).mu
    }
}

/// μ and its first two derivatives at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicState {
    pub t: f64,
    pub mu: f64,
    pub mu_prime: f64,
    pub mu_double_prime: f64,
}

/// μ₁ = cos t cosh t + sin t sinh t.
pub fn mu1(t: f64) -> f64 {
    WronskianBasis::Y2.value(t)
}

/// μ₂ = cos t sinh t + sin t cosh t.
pub fn mu2(t: f64) -> f64 {
    WronskianBasis::Y1.value(t)
}

/// μ₃ = sin t sinh t − cos t cosh t.
pub fn mu3(t: f64) -> f64 {
    WronskianBasis::Y4.value(t)
}

/// μ₄ = sin t cosh t − cos t sinh t, summed as a power series near zero
/// where the closed form cancels.
pub fn mu4(t: f64) -> f64 {
    if t.abs() < 0.5 {
        // Σ_j (−1)^j 2^{2j+2} t^{4j+3} / (4j+3)!
        let t4 = t.powi(4);
        let mut term = 4.0 * t.powi(3) / 6.0;
        let mut sum = term;
        for j in 1..12 {
            let n = (4 * j) as f64;
            term *= -4.0 * t4 / ((n) * (n + 1.0) * (n + 2.0) * (n + 3.0));
            sum += term;
        }
        sum
    } else {
        WronskianBasis::Y3.bilinear().eval(t)
    }
}

/// Characteristic function of the Green function of `model`, normalized by
/// μ(0) = 0 and μ'(0) = 2a(0) (μ'(0) = 0 for M3 and M4, where a(0) = 0).
pub fn eval_mu(model: ModelId, t: f64) -> Result<CharacteristicState> {
    model.validate()?;
    let st = match model {
        ModelId::M1 | ModelId::M2 => WronskianBasis::Y1.state(t),
        ModelId::M3 | ModelId::M4 => WronskianBasis::Y3.state(t),
        ModelId::Free => CharacteristicState { t, mu: t, mu_prime: 1.0, mu_double_prime: 0.0 },
        ModelId::Harmonic => {
            let (s, c) = t.sin_cos();
            CharacteristicState { t, mu: s, mu_prime: c, mu_double_prime: -s }
        }
        ModelId::Damped { omega0, lambda } => {
            let w = damped_frequency(omega0, lambda);
            let (s, c) = (w * t).sin_cos();
            let e = omega0 / w * (-lambda * t).exp();
            CharacteristicState {
                t,
                mu: e * s,
                mu_prime: e * (w * c - lambda * s),
                mu_double_prime: e * ((lambda * lambda - w * w) * s - 2.0 * lambda * w * c),
            }
        }
    };
    Ok(st)
}

/// ω = √(ω₀² − λ²).
pub fn damped_frequency(omega0: f64, lambda: f64) -> f64 {
    (omega0 * omega0 - lambda * lambda).sqrt()
}

/// Fixed-step RK4 integrator for μ'' − τ(t)μ' + 4σ(t)μ = 0.
#[derive(Debug, Clone, Copy)]
pub struct CharacteristicIntegrator {
    pub dt: f64,
    /// Integration stops with `PoleCrossing` once |τ| exceeds this bound or
    /// 1/dt, whichever is smaller.
    pub tau_bound: f64,
}

impl Default for CharacteristicIntegrator {
    fn default() -> Self {
        Self { dt: 1e-4, tau_bound: 1e6 }
    }
}

impl CharacteristicIntegrator {
    /// Integrates from `t0` with μ(t0) = `mu0`, μ'(t0) = `mu0_prime` to `t1`.
    pub fn integrate<T, S>(&self, tau: T, sigma: S, t0: f64, mu0: f64, mu0_prime: f64, t1: f64) -> Result<CharacteristicState>
    where
        T: Fn(f64) -> f64,
        S: Fn(f64) -> f64,
    {
        let bound = self.tau_bound.min(1.0 / self.dt);
        let rhs = |t: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
            let ta = tau(t);
            if !(ta.abs() <= bound) {
                return Err(Error::PoleCrossing { t, tau: ta.abs(), bound });
            }
            Ok([y[1], ta * y[1] - 4.0 * sigma(t) * y[0]])
        };
        let [mu, mu_prime] = rk4(rhs, t0, [mu0, mu0_prime], t1, self.dt)?;
        let ta = tau(t1);
        Ok(CharacteristicState { t: t1, mu, mu_prime, mu_double_prime: ta * mu_prime - 4.0 * sigma(t1) * mu })
    }
}

/// Convenience wrapper: RK4 from t = 0.
pub fn integrate_characteristic<T, S>(tau: T, sigma: S, mu0: f64, mu0_prime: f64, t: f64, dt: f64) -> Result<CharacteristicState>
where
    T: Fn(f64) -> f64,
    S: Fn(f64) -> f64,
{
    CharacteristicIntegrator { dt, ..Default::default() }.integrate(tau, sigma, 0.0, mu0, mu0_prime, t)
}

/// W(f, g)(t) = f g' − f' g for two basis Wronskians.
pub fn wronskian_pair(f: WronskianBasis, g: WronskianBasis, t: f64) -> f64 {
    let a = f.state(t);
    let b = g.state(t);
    a.mu * b.mu_prime - a.mu_prime * b.mu
}

/// |p'''' + 4p| for a basis product, from the closed-form derivative map.
pub fn biharmonic_residual(p: Product, t: f64) -> f64 {
    let b = p.bilinear();
    (b.nth_derivative(4).eval(t) + 4.0 * b.eval(t)).abs()
}

/// The characteristic operators
/// L₁ = d² + 2(u₂/u₁)d − 2, L₂ = d² − 2(u₁/u₂)d − 2,
/// L₃ = d² − 2(v₂/v₁)d + 2, L₄ = d² − 2(v₁/v₂)d + 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharOperator {
    L1,
    L2,
    L3,
    L4,
}

impl CharOperator {
    pub const ALL: [CharOperator; 4] = [CharOperator::L1, CharOperator::L2, CharOperator::L3, CharOperator::L4];

    /// Applies the operator to a bilinear combination at time `t`.
    pub fn apply(self, f: &Bilinear, t: f64) -> f64 {
        let (u2, u1) = t.sin_cos();
        let (v1, v2) = (t.cosh(), t.sinh());
        let (first, constant) = match self {
            CharOperator::L1 => (2.0 * u2 / u1, -2.0),
            CharOperator::L2 => (-2.0 * u1 / u2, -2.0),
            CharOperator::L3 => (-2.0 * v2 / v1, 2.0),
            CharOperator::L4 => (-2.0 * v1 / v2, 2.0),
        };
        f.nth_derivative(2).eval(t) + first * f.derivative().eval(t) + constant * f.eval(t)
    }

    /// Tabulated action on a single product.
    pub fn tabulated(self, p: Product, t: f64) -> f64 {
        let (u2, u1) = t.sin_cos();
        let (v1, v2) = (t.cosh(), t.sinh());
        use Product::*;
        match (self, p) {
            (CharOperator::L1, U1V1) => -2.0 * v1 / u1,
            (CharOperator::L1, U1V2) => -2.0 * v2 / u1,
            (CharOperator::L1, U2V1) => 2.0 * v2 / u1,
            (CharOperator::L1, U2V2) => 2.0 * v1 / u1,
            (CharOperator::L2, U1V1) => -2.0 * v2 / u2,
            (CharOperator::L2, U1V2) => -2.0 * v1 / u2,
            (CharOperator::L2, U2V1) => -2.0 * v1 / u2,
            (CharOperator::L2, U2V2) => -2.0 * v2 / u2,
            (CharOperator::L3, U1V1) => 2.0 * u1 / v1,
            (CharOperator::L3, U1V2) => -2.0 * u2 / v1,
            (CharOperator::L3, U2V1) => 2.0 * u2 / v1,
            (CharOperator::L3, U2V2) => 2.0 * u1 / v1,
            (CharOperator::L4, U1V1) => 2.0 * u2 / v2,
            (CharOperator::L4, U1V2) => -2.0 * u1 / v2,
            (CharOperator::L4, U2V1) => -2.0 * u1 / v2,
            (CharOperator::L4, U2V2) => -2.0 * u2 / v2,
        }
    }

    /// The two basis Wronskians annihilated by this operator.
    pub fn kernel(self) -> [WronskianBasis; 2] {
        use WronskianBasis::*;
        match self {
            CharOperator::L1 => [Y2, Y1],
            CharOperator::L2 => [Y4, Y3],
            CharOperator::L3 => [Y1, Y4],
            CharOperator::L4 => [Y2, Y3],
        }
    }
}

/// Largest deviation in the half- and full-period shift relations between
/// (Y1, Y2) and (Y3, Y4) at time `t`.
pub fn shift_relation_residual(t: f64) -> f64 {
    use WronskianBasis::*;
    let (y1, y2, y3, y4) = (Y1.value(t), Y2.value(t), Y3.value(t), Y4.value(t));
    let (chp, shp) = (PI.cosh(), PI.sinh());
    let (chh, shh) = (FRAC_PI_2.cosh(), FRAC_PI_2.sinh());
    let mut worst: f64 = 0.0;
    for sg in [1.0, -1.0] {
        let full = [
            Y1.value(t + sg * PI) + chp * y1 + sg * shp * y2,
            Y2.value(t + sg * PI) + sg * shp * y1 + chp * y2,
        ];
        let half = [
            Y1.value(t + sg * FRAC_PI_2) + shh * y3 + sg * chh * y4,
            Y2.value(t + sg * FRAC_PI_2) + sg * chh * y3 + shh * y4,
        ];
        for r in full.iter().chain(half.iter()) {
            worst = worst.max(r.abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // Independent arbitrary-precision evaluations.
        assert!((mu2(1.0) - 1.933421496200713).abs() < 1e-14);
        assert!((mu2(0.5) - 0.9979168388974026).abs() < 1e-14);
        assert!((WronskianBasis::Y3.value(0.5) - 0.08330853252890416).abs() < 1e-15);
        assert!((WronskianBasis::Y4.value(0.5) + 0.7397584858994584).abs() < 1e-14);
        assert!((WronskianBasis::Y2.value(0.3) + WronskianBasis::Y3.value(0.3) - 1.1066412318048406).abs() < 1e-14);
        assert!((-mu3(0.7) - 0.4713131697031964).abs() < 1e-14);
    }

    #[test]
    fn m4_initial_data_and_small_time() {
        let s = eval_mu(ModelId::M4, 0.0).unwrap();
        assert_eq!((s.mu, s.mu_prime), (0.0, 0.0));
        let t = 1e-3;
        assert!((mu4(t) / (2.0 * t.powi(3) / 3.0) - 1.0).abs() < 1e-10);
        // series and closed form agree where both are accurate
        let t = 0.49;
        assert!((mu4(t) - WronskianBasis::Y3.bilinear().eval(t)).abs() < 1e-15);
    }

    #[test]
    fn wronskian_of_mu1_and_mu3() {
        let w = wronskian_pair(WronskianBasis::Y2, WronskianBasis::Y4, 0.3);
        assert!((w - 1.2012960555432766).abs() < 1e-14);
    }

    #[test]
    fn m1_second_derivative() {
        let s = eval_mu(ModelId::M1, 0.4).unwrap();
        assert!((s.mu_prime - 2.0 * 0.4f64.cos() * 0.4f64.cosh()).abs() < 1e-14);
        // (u₁v₂)'' = −2u₂v₁
        let d2 = Product::U1V2.bilinear().nth_derivative(2).eval(0.4);
        assert!((d2 + 2.0 * 0.4f64.sin() * 0.4f64.cosh()).abs() < 1e-15);
    }

    #[test]
    fn tabulated_operator_action() {
        for op in CharOperator::ALL {
            for p in Product::ALL {
                for &t in &[0.3, 0.9, 1.4, -0.7] {
                    let direct = op.apply(&p.bilinear(), t);
                    let table = op.tabulated(p, t);
                    assert!((direct - table).abs() < 1e-12 * (1.0 + table.abs()), "{op:?} {p:?} {t}");
                }
            }
            for y in op.kernel() {
                assert!(op.apply(&y.bilinear(), 0.8).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn shift_relations() {
        for &t in &[0.1, 0.37, 1.2, -2.0] {
            assert!(shift_relation_residual(t) < 1e-12 * 100.0, "{t}");
        }
    }

    #[test]
    fn rk4_reproduces_closed_form() {
        let tan = |t: f64| -2.0 * t.tan();
        let s = integrate_characteristic(tan, |_| -0.5, 0.0, 2.0, 1.0, 1e-4).unwrap();
        assert!((s.mu - 1.933421496200713).abs() < 1e-9);
        // the tan pole at π/2 trips the guard
        let err = integrate_characteristic(tan, |_| -0.5, 0.0, 2.0, 2.0, 1e-3).unwrap_err();
        assert!(matches!(err, Error::PoleCrossing { .. }));
    }
}
