//! Closed-form particular solutions of the nonlinear equation
//! iψ_t = Hψ + h(t)|ψ|^{2s}ψ and the ε-regularized family whose phase
//! diverges as ε → 0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{schrodinger_residual_with, Residual};
use crate::model::ModelId;
use crate::phase::{general_phase, kappa, regularized_kappa, regularized_phase, span_characteristic, InitialSpan};

/// Parameters of the particular solution; the coupling is h(t) = λμ'(t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NlsParams {
    pub s: f64,
    pub lambda: f64,
    pub phi: f64,
    pub span: InitialSpan,
    pub model: ModelId,
}

impl NlsParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.s >= 0.0) || !self.lambda.is_finite() || !self.phi.is_finite() {
            return Err(Error::InvalidSpan(format!("need s >= 0 and finite λ, φ; got s = {}, λ = {}", self.s, self.lambda)));
        }
        if !matches!(self.model, ModelId::M1 | ModelId::M2 | ModelId::M3 | ModelId::M4) {
            return Err(Error::InvalidModel(format!("{} has no particular solution family", self.model)));
        }
        Ok(())
    }

    /// h(t) = λμ'(t).
    pub fn coupling(&self, t: f64) -> Result<f64> {
        Ok(self.lambda * span_characteristic(self.model, &self.span, t)?.mu_prime)
    }
}

/// A span with μ(0) = 1 for each of M1–M4, used by the certification runs.
pub fn reference_span(model: ModelId) -> InitialSpan {
    let (p, q) = match model {
        ModelId::M2 => (0.3, -1.0),
        ModelId::M3 => (-1.0, 0.3),
        _ => (1.0, 0.3),
    };
    InitialSpan::new(p, q, 0.7, -0.2).with_kappa0(0.1)
}

/// Which equation the residual is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NlsForm {
    /// h(t)|ψ|^{2s}ψ.
    Nonlinear,
    /// The linear potential h(t)/μ^s(t).
    LinearPotential,
}

/// ψ = e^{iφ} μ^{−1/2} e^{i(αx² + βxy + γy² + κ)}.
pub fn nls_solution(params: &NlsParams, x: f64, y: f64, t: f64) -> Result<Complex64> {
    params.validate()?;
    let mu = span_characteristic(params.model, &params.span, t)?.mu;
    if params.lambda != 0.0 && params.s > 0.0 && mu <= 0.0 {
        // |ψ|^{2s} = |μ|^{-s} no longer equals μ^{-s}.
        return Err(Error::SingularTime { t, mu });
    }
    let p = general_phase(params.model, &params.span, t)?;
    let k = kappa(params.model, &params.span, params.s, params.lambda, t)?;
    let amp = Complex64::new(mu, 0.0).sqrt().inv();
    Ok(amp * Complex64::from_polar(1.0, params.phi + p.exponent(x, y) + k))
}

/// Finite-difference residual of ψ = nls_solution in the chosen form;
/// `steps` = (hx, ht) overrides the automatic step choice.
pub fn nls_residual(params: &NlsParams, form: NlsForm, x: f64, y: f64, t: f64, steps: Option<(f64, f64)>) -> Result<Residual> {
    let set = params.model.coefficients();
    let field = |xx: f64, tt: f64| nls_solution(params, xx, y, tt);
    let h = params.coupling(t)?;
    let extra = match form {
        NlsForm::Nonlinear => -h * field(x, t)?.norm().powf(2.0 * params.s),
        NlsForm::LinearPotential => {
            let mu = span_characteristic(params.model, &params.span, t)?.mu;
            -h / mu.powf(params.s)
        }
    };
    schrodinger_residual_with(&set, &field, x, t, Complex64::new(extra, 0.0), steps)
}

/// ψ = (iμ_ε)^{−1/2} e^{i(α_εx² + β_εxy + γ_εy² + κ_ε)}, which starts from
/// δ_ε(x − y) = (2πiε)^{−1/2} e^{i(x−y)²/(2ε)} at t = 0.
pub fn illposed_solution(model: ModelId, eps: f64, s: f64, lambda: f64, x: f64, y: f64, t: f64) -> Result<Complex64> {
    if eps == 0.0 && !(t > 0.0) {
        return Err(Error::SingularTime { t, mu: 0.0 });
    }
    if eps == 0.0 && s == 1.0 && lambda != 0.0 {
        return Err(Error::DivergentPhase("s = 1 phase has no ε → 0 limit".into()));
    }
    let r = regularized_phase(model, eps, t)?;
    let k = regularized_kappa(model, eps, s, lambda, t)?;
    let amp = (Complex64::i() * r.mu_eps).sqrt().inv();
    Ok(amp * Complex64::from_polar(1.0, r.phase.exponent(x, y) + k))
}

/// max over sample points x of |∫ G_ε(x, y, 0) e^{−y²} dy − e^{−x²}|, the
/// chirped integral summed by the trapezoid rule on a grid fine enough to
/// resolve the frequency |x − y|/ε out to |y| = 7.
pub fn delta_limit_error(model: ModelId, eps: f64) -> Result<f64> {
    let half = 7.0;
    let xs = [-0.8, 0.0, 0.35, 1.1];
    let wmax = (half + 1.1) / eps;
    let n = ((2.0 * half * wmax / 0.5).ceil() as usize).max(2000);
    let h = 2.0 * half / n as f64;
    let mut worst: f64 = 0.0;
    for &x in &xs {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..=n {
            let y = -half + i as f64 * h;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            acc += w * illposed_solution(model, eps, 0.0, 0.0, x, y, 0.0)? * (-y * y).exp();
        }
        worst = worst.max((acc * h - (-x * x).exp()).norm());
    }
    Ok(worst)
}

/// Log-spaced ε from `hi` down to `lo`, `per_decade` points per decade.
pub fn log_eps(hi: f64, lo: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).round() as usize;
    (0..=n).map(|k| hi * 10f64.powf(-(k as f64) * decades / n as f64)).collect()
}

/// κ_ε over an ε sequence, with the least-squares slope of κ_ε against
/// ln(1/ε) and the largest spread of κ_ε among ε ≤ 10ε_min.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceScan {
    pub rows: Vec<(f64, f64)>,
    pub slope: f64,
    pub cauchy_gap: f64,
}

impl DivergenceScan {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,kappa\n");
        for (e, k) in &self.rows {
            out.push_str(&format!("{e:e},{k:.17e}\n"));
        }
        out
    }
}

pub fn divergence_scan(model: ModelId, t: f64, s: f64, lambda: f64, eps: &[f64]) -> Result<DivergenceScan> {
    if eps.len() < 2 || eps.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidSpan("need at least two positive ε values".into()));
    }
    let rows = eps.iter().map(|&e| Ok((e, regularized_kappa(model, e, s, lambda, t)?))).collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|(e, _)| -e.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|(_, k)| *k).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let emin = eps.iter().cloned().fold(f64::INFINITY, f64::min);
    let tail: Vec<f64> = rows.iter().filter(|(e, _)| *e <= 10.0 * emin * (1.0 + 1e-12)).map(|(_, k)| *k).collect();
    let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(DivergenceScan { rows, slope: sxy / sxx, cauchy_gap: hi - lo })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characteristic::{mu1, mu2, mu3};
    use crate::kernels::green_kernel;
    use crate::phase::kappa_quadrature;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn trivial_start() {
        let p = NlsParams { s: 1.0, lambda: 0.0, phi: 0.4, span: InitialSpan::new(1.0, 0.0, 1.0, 0.5), model: ModelId::M1 };
        let v = nls_solution(&p, 0.3, -0.2, 0.0).unwrap();
        let g = general_phase(ModelId::M1, &p.span, 0.0).unwrap();
        assert!((v - Complex64::from_polar(1.0, 0.4 + g.exponent(0.3, -0.2))).norm() < 1e-14);
        let p = NlsParams { lambda: 1.0, ..p };
        let v = nls_solution(&p, 0.5, 0.2, 0.7).unwrap();
        assert!((v.norm() - mu1(0.7).powf(-0.5)).abs() < 1e-14);
    }

    #[test]
    fn residuals_vanish_for_every_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for model in ModelId::CORE {
            for &s in &[0.0, 0.5, 1.0] {
                for &lambda in &[0.0, 1.0] {
                    let params = NlsParams { s, lambda, phi: 0.2, span: reference_span(model), model };
                    let mut done = 0;
                    while done < 5 {
                        let t = rng.gen_range(0.05..1.0);
                        if span_characteristic(model, &params.span, t).unwrap().mu < 0.1 {
                            continue;
                        }
                        let (x, y) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                        for form in [NlsForm::Nonlinear, NlsForm::LinearPotential] {
                            let r = nls_residual(&params, form, x, y, t, None).unwrap().relative();
                            assert!(r < 1e-6, "{model} s={s} λ={lambda} {form:?} t={t} r={r}");
                        }
                        done += 1;
                    }
                }
            }
        }
    }

    #[test]
    fn kappa_closed_form_matches_quadrature_and_derivative() {
        for model in ModelId::CORE {
            let span = reference_span(model);
            for &s in &[0.0, 0.5, 1.0] {
                let params = NlsParams { s, lambda: 1.0, phi: 0.0, span, model };
                let closed = kappa(model, &span, s, 1.0, 0.6).unwrap();
                let quad = kappa_quadrature(model, &span, s, |t| params.coupling(t).unwrap(), 0.6).unwrap();
                assert!((closed - quad).abs() < 1e-8, "{model} {s}");
                let h = 1e-4;
                let dk = (kappa(model, &span, s, 1.0, 0.6 + h).unwrap() - kappa(model, &span, s, 1.0, 0.6 - h).unwrap()) / (2.0 * h);
                let mu = span_characteristic(model, &span, 0.6).unwrap().mu;
                assert!((dk + params.coupling(0.6).unwrap() / mu.powf(s)).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn illposed_family_endpoints() {
        // t = 0 reproduces the delta sequence exactly.
        let eps = 0.2;
        let v = illposed_solution(ModelId::M1, eps, 1.0, 1.0, 0.4, -0.1, 0.0).unwrap();
        let d = (Complex64::new(0.0, 2.0 * PI * eps)).sqrt().inv() * Complex64::from_polar(1.0, 0.25 / (2.0 * eps));
        assert!((v - d).norm() < 1e-13);
        // ε = 0, t > 0 is the Green function.
        let v = illposed_solution(ModelId::M1, 0.0, 0.0, 0.0, 0.7, 0.2, 0.5).unwrap();
        assert!((v - green_kernel(ModelId::M1, 0.7, 0.2, 0.5).unwrap().value).norm() < 1e-13);
        // M2 logarithmic phase.
        let k = regularized_kappa(ModelId::M2, 0.05, 1.0, 1.0, 0.4).unwrap();
        let expect = -(1.0 / (2.0 * PI)) * (mu2(0.4) / 0.05 - mu3(0.4)).ln();
        assert!((k - expect).abs() < 1e-13);
    }

    #[test]
    fn delta_sequence_limit() {
        assert!(delta_limit_error(ModelId::M1, 1e-3).unwrap() < 0.05);
    }

    #[test]
    fn log_divergence_and_convergence() {
        let eps = log_eps(1e-2, 1e-6, 4);
        assert_eq!(eps.len(), 17);
        for model in ModelId::CORE {
            let scan = divergence_scan(model, 0.5, 1.0, 2.0 * PI, &eps).unwrap();
            assert!((scan.slope + 1.0).abs() < 0.02, "{model} {}", scan.slope);
        }
        let scan = divergence_scan(ModelId::M1, 0.5, 0.5, 1.0, &log_eps(1e-2, 1e-14, 4)).unwrap();
        assert!(scan.cauchy_gap < 1e-6, "{}", scan.cauchy_gap);
        assert!(scan.to_csv().starts_with("eps,kappa\n1e-2,"));
    }
}
