use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The quadratic Hamiltonians handled by the crate.
///
/// M1..M4 are the trigonometric/hyperbolic modified oscillators, M2 and M4
/// being the time-inversion duals of M1 and M3.  `Damped` uses the gauge
/// a = (ω₀/2)e^{-2λt}, b = (ω₀/2)e^{2λt}, c = d = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model")]
pub enum ModelId {
    M1,
    M2,
    M3,
    M4,
    Free,
    Harmonic,
    Damped { omega0: f64, lambda: f64 },
}

impl ModelId {
    pub const CORE: [ModelId; 4] = [ModelId::M1, ModelId::M2, ModelId::M3, ModelId::M4];

    pub fn damped(omega0: f64, lambda: f64) -> Result<Self> {
        let m = ModelId::Damped { omega0, lambda };
        m.validate()?;
        Ok(m)
    }

    /// Underdamped parameters are required: ω₀ > λ ≥ 0.
    pub fn validate(&self) -> Result<()> {
        if let ModelId::Damped { omega0, lambda } = *self {
            if !(omega0.is_finite() && lambda.is_finite() && omega0 > lambda && lambda >= 0.0) {
                return Err(Error::InvalidModel(format!(
                    "damped oscillator needs omega0 > lambda >= 0, got omega0 = {omega0}, lambda = {lambda}"
                )));
            }
        }
        Ok(())
    }

    /// Partner whose Green function is obtained by exchanging x and y.
    pub fn dual(&self) -> Option<ModelId> {
        match self {
            ModelId::M1 => Some(ModelId::M2),
            ModelId::M2 => Some(ModelId::M1),
            ModelId::M3 => Some(ModelId::M4),
            ModelId::M4 => Some(ModelId::M3),
            ModelId::Free => Some(ModelId::Free),
            ModelId::Harmonic => Some(ModelId::Harmonic),
            ModelId::Damped { .. } => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelId::M1 => "M1",
            ModelId::M2 => "M2",
            ModelId::M3 => "M3",
            ModelId::M4 => "M4",
            ModelId::Free => "FREE",
            ModelId::Harmonic => "HARMONIC",
            ModelId::Damped { .. } => "DAMPED",
        }
    }

    pub fn coefficients(&self) -> CoefficientSet {
        CoefficientSet::Model(*self)
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelId::Damped { omega0, lambda } => write!(f, "DAMPED(omega0={omega0}, lambda={lambda})"),
            m => f.write_str(m.name()),
        }
    }
}

impl FromStr for ModelId {
    type Err = Error;

    /// Parses `M1`..`M4`, `FREE`, `HARMONIC` or `DAMPED:omega0:lambda`.
    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        let mut parts = upper.split(':');
        let head = parts.next().unwrap_or("");
        let m = match head {
            "M1" => ModelId::M1,
            "M2" => ModelId::M2,
            "M3" => ModelId::M3,
            "M4" => ModelId::M4,
            "FREE" => ModelId::Free,
            "HARMONIC" => ModelId::Harmonic,
            "DAMPED" => {
                let mut num = |what: &str| -> Result<f64> {
                    parts
                        .next()
                        .ok_or_else(|| Error::Parse(format!("DAMPED needs {what}, e.g. DAMPED:1:0.1")))?
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
                };
                let omega0 = num("omega0")?;
                let lambda = num("lambda")?;
                return ModelId::damped(omega0, lambda);
            }
            _ => return Err(Error::Parse(format!("unknown model '{s}'"))),
        };
        if parts.next().is_some() {
            return Err(Error::Parse(format!("model '{head}' takes no parameters")));
        }
        Ok(m)
    }
}

/// Coefficients a, b, c, d of a quadratic Hamiltonian and the derivatives
/// a', d' at a fixed time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientValues {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub da: f64,
    pub dd: f64,
}

impl CoefficientValues {
    /// τ = a'/a − 2c + 4d in μ'' − τμ' + 4σμ = 0.
    pub fn tau(&self) -> f64 {
        self.da / self.a - 2.0 * self.c + 4.0 * self.d
    }

    /// σ = ab − cd + d² + (d/2)(a'/a) − d'/2.
    pub fn sigma(&self) -> f64 {
        self.a * self.b - self.c * self.d + self.d * self.d + 0.5 * self.d * self.da / self.a
            - 0.5 * self.dd
    }

    /// ε = c − 2d, the exponent of the modulus factor h.
    pub fn epsilon(&self) -> f64 {
        self.c - 2.0 * self.d
    }

    /// The Hamiltonian seen in the momentum representation: (a, b, d) → (b, a, −d).
    ///
    /// Only meaningful when c = 2d; derivatives of the new coefficients are
    /// not tracked.
    pub fn momentum_swap(&self) -> CoefficientValues {
        CoefficientValues {
            a: self.b,
            b: self.a,
            c: -self.c,
            d: -self.d,
            da: f64::NAN,
            dd: f64::NAN,
        }
    }
}

/// Time-dependent coefficient functions of a quadratic Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientSet {
    Model(ModelId),
    /// Damped oscillator in the symmetric gauge a = b = ω₀/2, c = d = −λ.
    DampedSymmetric { omega0: f64, lambda: f64 },
}

impl CoefficientSet {
    pub fn at(&self, t: f64) -> CoefficientValues {
        let (s2, c2) = (2.0 * t).sin_cos();
        let (sh2, ch2) = ((2.0 * t).sinh(), (2.0 * t).cosh());
        match *self {
            CoefficientSet::Model(ModelId::M1) => {
                let c = t.cos();
                let s = t.sin();
                CoefficientValues { a: c * c, b: s * s, c: s2, d: 0.5 * s2, da: -s2, dd: c2 }
            }
            CoefficientSet::Model(ModelId::M2) => {
                let c = t.cosh();
                let s = t.sinh();
                CoefficientValues { a: c * c, b: s * s, c: -sh2, d: -0.5 * sh2, da: sh2, dd: -ch2 }
            }
            CoefficientSet::Model(ModelId::M3) => {
                let c = t.cos();
                let s = t.sin();
                CoefficientValues { a: s * s, b: c * c, c: -s2, d: -0.5 * s2, da: s2, dd: -c2 }
            }
            CoefficientSet::Model(ModelId::M4) => {
                let c = t.cosh();
                let s = t.sinh();
                CoefficientValues { a: s * s, b: c * c, c: sh2, d: 0.5 * sh2, da: sh2, dd: ch2 }
            }
            CoefficientSet::Model(ModelId::Free) => {
                CoefficientValues { a: 0.5, b: 0.0, c: 0.0, d: 0.0, da: 0.0, dd: 0.0 }
            }
            CoefficientSet::Model(ModelId::Harmonic) => {
                CoefficientValues { a: 0.5, b: 0.5, c: 0.0, d: 0.0, da: 0.0, dd: 0.0 }
            }
            CoefficientSet::Model(ModelId::Damped { omega0, lambda }) => {
                let e = (2.0 * lambda * t).exp();
                let a = 0.5 * omega0 / e;
                CoefficientValues { a, b: 0.5 * omega0 * e, c: 0.0, d: 0.0, da: -2.0 * lambda * a, dd: 0.0 }
            }
            CoefficientSet::DampedSymmetric { omega0, lambda } => CoefficientValues {
                a: 0.5 * omega0,
                b: 0.5 * omega0,
                c: -lambda,
                d: -lambda,
                da: 0.0,
                dd: 0.0,
            },
        }
    }
}
