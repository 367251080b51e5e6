//! The acceptance checks, shared by the `acceptance` test target and the
//! command-line `identities` report.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::characteristic::{biharmonic_residual, eval_mu, shift_relation_residual, CharOperator, Product};
use crate::classical::{classical_rk4_deviation, ClassicalEquation};
use crate::eigen::{expanded_green, expansion_coefficients, fourier_eigen_phase, hankel_radial_check, legendre_green, synthesize};
use crate::error::Result;
use crate::evolution::{
    apply_hamiltonian, apply_inverse, apply_kernel, diagram_check, interior_distance, ladder_apply, schrodinger_residual,
    semigroup_defect, DiagramIdentity, WaveGrid,
};
use crate::kernels::{check_duality_symmetry, green_kernel, ndim_green_product, Propagator};
use crate::model::ModelId;
use crate::nls::{divergence_scan, log_eps, nls_residual, reference_span, NlsForm, NlsParams};
use crate::phase::{check_duality_criterion, criterion_identity_residual, kappa, kappa_quadrature, span_characteristic};
use crate::special::hermite_function;

/// One line of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: String,
    /// The measured quantity compared against `tolerance`.
    pub value: f64,
    pub tolerance: f64,
    pub seconds: f64,
    pub budget_seconds: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} {}: value {:.3e} (tol {:.1e}), {:.2} s (budget {} s){}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.value,
            self.tolerance,
            self.seconds,
            self.budget_seconds,
            if self.detail.is_empty() { String::new() } else { format!("; {}", self.detail) }
        )
    }
}

/// Runs `body`, which returns (value, passed-by-value, detail), and times it.
fn timed<F>(id: u32, name: &str, tolerance: f64, budget: f64, body: F) -> CheckOutcome
where
    F: FnOnce() -> Result<(f64, bool, String)>,
{
    let start = Instant::now();
    let res = body();
    let seconds = start.elapsed().as_secs_f64();
    let (value, ok, detail) = match res {
        Ok(v) => v,
        Err(e) => (f64::NAN, false, format!("error: {e}")),
    };
    CheckOutcome {
        id,
        name: name.to_string(),
        value,
        tolerance,
        seconds,
        budget_seconds: budget,
        passed: ok && seconds < budget,
        detail,
    }
}

fn below(value: f64, tol: f64) -> bool {
    value.is_finite() && value < tol
}

fn gaussian(half_width: f64, points: usize, center: f64, k: f64) -> Result<WaveGrid> {
    WaveGrid::from_fn(half_width, points, |x| Complex64::from_polar((-(x - center).powi(2) / 2.0).exp() * PI.powf(-0.25), k * x))
}

/// 1. Green functions of M1–M4 solve their equations.
pub fn pde_residuals(seed: u64) -> CheckOutcome {
    let tol = 1e-6;
    timed(1, "Green function PDE residual, M1-M4", tol, 10.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for model in ModelId::CORE {
            let set = model.coefficients();
            for _ in 0..50 {
                let t = rng.gen_range(0.05..1.2);
                let x = rng.gen_range(-2.0..2.0);
                let y = rng.gen_range(-2.0..2.0);
                let field = |xx: f64, tt: f64| Ok(green_kernel(model, xx, y, tt)?.value);
                worst = worst.max(schrodinger_residual(&set, &field, x, t)?.relative());
            }
        }
        Ok((worst, below(worst, tol), "50 points per model".into()))
    })
}

/// 2. G_M1(x, y) = G_M2(y, x) and G_M3(x, y) = G_M4(y, x).
pub fn duality_symmetry(seed: u64) -> CheckOutcome {
    let tol = 1e-12;
    timed(2, "duality symmetry under x <-> y", tol, 1.0, || {
        let a = check_duality_symmetry((ModelId::M1, ModelId::M2), 1000, seed)?;
        let b = check_duality_symmetry((ModelId::M3, ModelId::M4), 1000, seed + 1)?;
        let v = a.max(b);
        Ok((v, below(v, tol), format!("M1/M2 {a:.1e}, M3/M4 {b:.1e}")))
    })
}

/// 3. 4a₁a₂ = μ'² and the symmetry criterion for both dual pairs.
pub fn criterion_identity(seed: u64) -> CheckOutcome {
    let tol = 1e-10;
    timed(3, "symmetry criterion identities", tol, 1.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for (m1, m2) in [(ModelId::M1, ModelId::M2), (ModelId::M3, ModelId::M4)] {
            let (s1, s2) = (m1.coefficients(), m2.coefficients());
            for _ in 0..100 {
                let t = rng.gen_range(0.05..1.2);
                let mu = eval_mu(m1, t)?;
                worst = worst.max(criterion_identity_residual(&s1, &s2, &mu)).max(check_duality_criterion(&s1, &s2, &mu));
            }
        }
        Ok((worst, below(worst, tol), "100 times per pair".into()))
    })
}

/// 4. U⁻¹(t)U(t)ψ₀ = ψ₀.
///
/// ψ₀ = π^{−1/4} e^{−x²/2} e^{−ix²/2}.  The unchirped ground state spreads
/// under M1 until it reaches |ψ| ~ 10⁻⁷ at x = ±12 by t = 0.8, which the
/// tail guard rejects; the converging chirp keeps every intermediate state
/// inside the grid.  The unchirped outcome is reported alongside.
pub fn operator_round_trip() -> CheckOutcome {
    let tol = 1e-4;
    timed(4, "operator round trip U^-1 U", tol, 30.0, || {
        let g = WaveGrid::from_fn(12.0, 1024, |x| Complex64::from_polar((-x * x / 2.0).exp() * PI.powf(-0.25), -x * x / 2.0))?;
        let mut worst: f64 = 0.0;
        let mut parts = Vec::new();
        for model in [ModelId::M1, ModelId::M3] {
            for &t in &[0.2, 0.5, 0.8] {
                let p = Propagator::Green(model);
                let d = apply_inverse(&p, &apply_kernel(&p, &g, t)?, t)?.l2_distance(&g)?;
                parts.push(format!("{model}@{t}: {d:.1e}"));
                worst = worst.max(d);
            }
        }
        let plain = gaussian(12.0, 1024, 0.0, 0.0)?;
        let p = Propagator::Green(ModelId::M1);
        let unchirped = match apply_kernel(&p, &plain, 0.8).and_then(|u| apply_inverse(&p, &u, 0.8)) {
            Ok(b) => format!("{:.1e}", b.l2_distance(&plain)?),
            Err(e) => format!("rejected ({e})"),
        };
        Ok((worst, below(worst, tol), format!("{}; unchirped ground state, M1@0.8: {unchirped}", parts.join(", "))))
    })
}

/// 5. The commutative diagram linking U, V, K, L and F.
pub fn commutative_diagram() -> CheckOutcome {
    let tol = 1e-4;
    timed(5, "commutative diagram U = K F^-1, V = F^-1 U F", tol, 30.0, || {
        let grids = [gaussian(12.0, 1024, 0.0, 0.0)?, gaussian(12.0, 1024, -0.6, 0.5)?];
        let mut named: f64 = 0.0;
        let mut all: f64 = 0.0;
        for g in &grids {
            for id in DiagramIdentity::ALL {
                let d = diagram_check(id, g, 0.4)?;
                all = all.max(d);
                if matches!(id, DiagramIdentity::UEqualsKFinv | DiagramIdentity::VEqualsFinvUF) {
                    named = named.max(d);
                }
            }
        }
        Ok((named, below(named, tol), format!("all 13 identities: max {all:.1e}")))
    })
}

/// 6. Hermite functions are Fourier eigenfunctions with eigenvalue i^N.
pub fn fourier_eigenphase() -> CheckOutcome {
    let tol = 1e-6;
    timed(6, "Fourier eigenphase i^N, N <= 10", tol, 5.0, || {
        let mut worst: f64 = 0.0;
        for n in 0..=10usize {
            let expect = Complex64::i().powu(n as u32);
            worst = worst.max((fourier_eigen_phase(n, 12.0, 1024)? - expect).norm());
        }
        Ok((worst, below(worst, tol), String::new()))
    })
}

/// 7. Truncated Bargmann expansion of the M1 Green function at a point.
pub fn eigen_expansion() -> CheckOutcome {
    let tol = 1e-3;
    timed(7, "Bargmann expansion of G_M1 at (0.5, 0.3, 0.3), cutoff 40", tol, 20.0, || {
        let exact = green_kernel(ModelId::M1, 0.5, 0.3, 0.3)?.value;
        let v = (expanded_green(0.5, 0.3, 0.3, 40)? - exact).norm();
        let trend: Vec<String> = [20usize, 60, 120]
            .iter()
            .map(|&c| Ok(format!("{c}: {:.1e}", (expanded_green(0.5, 0.3, 0.3, c)? - exact).norm())))
            .collect::<Result<_>>()?;
        // The same truncated series applied to a Gaussian converges spectrally.
        let g = gaussian(12.0, 512, 0.3, 0.2)?;
        let weak = synthesize(12.0, 512, &[expansion_coefficients(&g, 0, 0.3, 40)?, expansion_coefficients(&g, 1, 0.3, 40)?])?
            .l2_distance(&apply_kernel(&Propagator::Green(ModelId::M1), &g, 0.3)?)?;
        Ok((v, below(v, tol), format!("pointwise error by cutoff {}; on a Gaussian at cutoff 40: {weak:.1e}", trend.join(", "))))
    })
}

/// 8. Legendre sum of radial kernels against the product-form n = 3 kernel.
pub fn legendre_radial() -> CheckOutcome {
    let tol = 1e-4;
    timed(8, "Legendre/radial expansion, n = 3", tol, 10.0, || {
        let (c, s) = (0.5f64.cos(), 0.5f64.sin());
        let x = [1.0, 0.0, 0.0];
        let y = [0.8 * c, 0.8 * s, 0.0];
        let v = (legendre_green(&x, &y, 0.4, 30)? - ndim_green_product(ModelId::M1, &x, &y, 0.4)?).norm();
        Ok((v, below(v, tol), "r = 1, r' = 0.8, angle 0.5, t = 0.4, K <= 30".into()))
    })
}

/// 9. Radial functions are eigenfunctions of the S₋₁ Hankel transform.
pub fn hankel_identity() -> CheckOutcome {
    let tol = 1e-5;
    timed(9, "Hankel radial identity, N, K <= 4, n = 3", tol, 10.0, || {
        let mut worst: f64 = 0.0;
        for n in 0..=4 {
            for k in (n % 2..=n).step_by(2) {
                worst = worst.max(hankel_radial_check(n, k, 3)?);
            }
        }
        Ok((worst, below(worst, tol), String::new()))
    })
}

/// 10. Particular solutions of the nonlinear equation.
pub fn nls_certification(seed: u64) -> CheckOutcome {
    let tol = 1e-6;
    let kappa_tol = 1e-8;
    timed(10, "NLS residuals and closed-form phase", tol, 20.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        let mut kappa_worst: f64 = 0.0;
        for model in ModelId::CORE {
            let span = reference_span(model);
            for &s in &[0.0, 0.5, 1.0] {
                for &lambda in &[0.0, 1.0] {
                    let params = NlsParams { s, lambda, phi: 0.2, span, model };
                    let mut done = 0;
                    while done < 20 {
                        let t = rng.gen_range(0.05..1.0);
                        if span_characteristic(model, &span, t)?.mu < 0.1 {
                            continue;
                        }
                        let (x, y) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                        for form in [NlsForm::Nonlinear, NlsForm::LinearPotential] {
                            worst = worst.max(nls_residual(&params, form, x, y, t, None)?.relative());
                        }
                        done += 1;
                    }
                    let closed = kappa(model, &span, s, lambda, 0.7)?;
                    let quad = kappa_quadrature(model, &span, s, |t| params.coupling(t).unwrap_or(f64::NAN), 0.7)?;
                    kappa_worst = kappa_worst.max((closed - quad).abs());
                }
            }
        }
        Ok((worst, below(worst, tol) && below(kappa_worst, kappa_tol), format!("closed vs quadrature phase {kappa_worst:.1e} (tol {kappa_tol:.0e})")))
    })
}

/// 11. Logarithmic divergence of κ_ε for s = 1 and convergence for s = 1/2.
///
/// The slope of κ_ε against ln(1/ε) is −λ/(2π); the check is on its
/// distance from that value relative to λ/(2π).  κ_ε − κ₀ ~ √ε for s = 1/2,
/// so the last-decade spread only drops below 10⁻⁶ once ε reaches ~10⁻¹⁴.
pub fn illposedness() -> CheckOutcome {
    let tol = 0.02;
    let cauchy_tol = 1e-6;
    timed(11, "ill-posedness rate", tol, 5.0, || {
        let lambda = 2.0 * PI;
        let expect = -lambda / (2.0 * PI);
        let eps = log_eps(1e-2, 1e-6, 4);
        let mut slope_err: f64 = 0.0;
        let mut slopes = Vec::new();
        for model in ModelId::CORE {
            let scan = divergence_scan(model, 0.5, 1.0, lambda, &eps)?;
            slope_err = slope_err.max((scan.slope - expect).abs() / expect.abs());
            slopes.push(format!("{model} {:.4}", scan.slope));
        }
        let deep = divergence_scan(ModelId::M1, 0.5, 0.5, 1.0, &log_eps(1e-2, 1e-14, 4))?;
        let shallow = divergence_scan(ModelId::M1, 0.5, 0.5, 1.0, &eps)?;
        let ok = below(slope_err, tol) && below(deep.cauchy_gap, cauchy_tol);
        Ok((
            slope_err,
            ok,
            format!(
                "slopes {}; s = 1/2 last-decade spread {:.1e} down to 1e-14 (tol {cauchy_tol:.0e}), {:.1e} down to 1e-6",
                slopes.join(", "),
                deep.cauchy_gap,
                shallow.cauchy_gap
            ),
        ))
    })
}

/// 12. Bi-harmonic residual, characteristic-operator actions and shift relations.
pub fn wronskian_suite(seed: u64) -> CheckOutcome {
    let tol = 1e-10;
    timed(12, "Wronskian basis identities", tol, 2.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut bi, mut tab, mut shift): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for _ in 0..20 {
            let t = rng.gen_range(0.1..1.4);
            for p in Product::ALL {
                bi = bi.max(biharmonic_residual(p, t));
                for op in CharOperator::ALL {
                    tab = tab.max((op.apply(&p.bilinear(), t) - op.tabulated(p, t)).abs());
                }
            }
            shift = shift.max(shift_relation_residual(t));
        }
        let v = bi.max(tab).max(shift);
        Ok((v, below(v, tol), format!("bi-harmonic {bi:.1e}, operator table {tab:.1e}, shifts {shift:.1e}")))
    })
}

/// 13. Ladder form of H, classical fundamental solutions and the damped
///     propagator.
pub fn hamiltonian_suite() -> CheckOutcome {
    let tol = 1e-6;
    timed(13, "ladder form, classical solutions, damped propagator", tol, 20.0, || {
        let g = WaveGrid::from_fn(12.0, 2048, |x| Complex64::new(hermite_function(3, x) + 0.5 * hermite_function(0, x), 0.0))?;
        let mut ladder: f64 = 0.0;
        for m in ModelId::CORE {
            for &t in &[0.3, 0.7, 1.1] {
                let v = m.coefficients().at(t);
                ladder = ladder.max(interior_distance(&apply_hamiltonian(&v, &g), &ladder_apply(&v, &g), 8)?);
            }
        }
        let mut classical: f64 = 0.0;
        for eq in ClassicalEquation::ALL {
            classical = classical.max(classical_rk4_deviation(eq, 0.6, -0.4, 0.2, &[0.5, 0.9, 1.3], 1e-4)?);
        }
        let model = ModelId::damped(1.0, 0.3)?;
        let set = model.coefficients();
        let mut damped: f64 = 0.0;
        for &(x, y, t) in &[(0.4, -0.3, 0.7), (-1.2, 0.5, 1.5), (0.9, 1.1, 2.6)] {
            let field = |xx: f64, tt: f64| Ok(green_kernel(model, xx, y, tt)?.value);
            damped = damped.max(schrodinger_residual(&set, &field, x, t)?.relative());
        }
        let v = ladder.max(classical).max(damped);
        Ok((v, below(v, tol), format!("ladder {ladder:.1e}, classical {classical:.1e}, damped residual {damped:.1e}")))
    })
}

/// 14. Semigroup defect report: U(s)U(t − s) ≠ U(t) for the time-dependent
///     Hamiltonians.  Passes when the defect is produced and exceeds 10⁻⁴.
pub fn semigroup_report() -> CheckOutcome {
    let floor = 1e-4;
    timed(14, "semigroup defect at (s, t) = (0.3, 0.6)", floor, 30.0, || {
        let g = gaussian(12.0, 1024, 0.5, 0.4)?;
        let m1 = semigroup_defect(ModelId::M1, &g, 0.3, 0.6)?;
        let osc = semigroup_defect(ModelId::Harmonic, &g, 0.3, 0.6)?;
        Ok((m1, m1.is_finite() && m1 > floor, format!("M1 defect {m1:.3e}; harmonic control {osc:.1e}")))
    })
}

/// Runs every check with the default seeds.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        pde_residuals(11),
        duality_symmetry(12),
        criterion_identity(13),
        operator_round_trip(),
        commutative_diagram(),
        fourier_eigenphase(),
        eigen_expansion(),
        legendre_radial(),
        hankel_identity(),
        nls_certification(20),
        illposedness(),
        wronskian_suite(22),
        hamiltonian_suite(),
        semigroup_report(),
    ]
}
