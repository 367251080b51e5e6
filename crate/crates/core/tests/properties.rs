use std::str::FromStr;

use oscillaprop::characteristic::{Bilinear, WronskianBasis};
use oscillaprop::eigen::{bargmann_v, BargmannArgs};
use oscillaprop::evolution::WaveGrid;
use oscillaprop::kernels::green_kernel;
use oscillaprop::nls::reference_span;
use oscillaprop::phase::{kappa, kappa_quadrature, span_characteristic};
use oscillaprop::{Complex64, ModelId};
use proptest::prelude::*;

fn v(j: f64, k: usize, kp: usize, mu: f64) -> f64 {
    bargmann_v(&BargmannArgs { j, m: j + 1.0 + k as f64, m_prime: j + 1.0 + kp as f64, mu }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_are_closed_under_fourth_derivative(c in prop::array::uniform4(-3.0f64..3.0), t in -2.0f64..2.0) {
        let b = Bilinear(c);
        let r = b.nth_derivative(4).eval(t) + 4.0 * b.eval(t);
        prop_assert!(r.abs() < 1e-10 * (1.0 + b.eval(t).abs() + 10.0));
    }

    #[test]
    fn basis_state_matches_bilinear_derivatives(t in -1.5f64..1.5) {
        for y in WronskianBasis::ALL {
            let st = y.state(t);
            let b = y.bilinear();
            prop_assert!((st.mu_prime - b.derivative().eval(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn bargmann_index_swap_is_a_sign(j in prop::sample::select(vec![-0.75, -0.25, 0.25, 1.0]), k in 0usize..12, kp in 0usize..12, mu in -2.0f64..2.0) {
        let a = v(j, k, kp, mu);
        let b = v(j, kp, k, mu);
        let sign = if (k + kp) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() < 1e-13);
    }

    #[test]
    fn bargmann_group_law(j in prop::sample::select(vec![-0.75, -0.25]), k in 0usize..5, kp in 0usize..5, m1 in -0.6f64..0.6, m2 in -0.6f64..0.6) {
        // truncated product converges geometrically in tanh(|mu|/2)
        let sum: f64 = (0..120).map(|l| v(j, k, l, m1) * v(j, l, kp, m2)).sum();
        prop_assert!((sum - v(j, k, kp, m1 + m2)).abs() < 1e-10);
    }

    #[test]
    fn dual_kernels_are_transposes(x in -2.0f64..2.0, y in -2.0f64..2.0, t in 0.05f64..1.2) {
        for (a, b) in [(ModelId::M1, ModelId::M2), (ModelId::M3, ModelId::M4)] {
            let g1 = green_kernel(a, x, y, t).unwrap().value;
            let g2 = green_kernel(b, y, x, t).unwrap().value;
            prop_assert!((g1 - g2).norm() < 1e-12);
        }
    }

    #[test]
    fn kappa_closed_form_matches_quadrature(
        model in prop::sample::select(ModelId::CORE.to_vec()),
        s in prop::sample::select(vec![0.0, 0.5, 1.0, 2.0]),
        lambda in -1.5f64..1.5,
        t in 0.05f64..0.25,
    ) {
        let span = reference_span(model);
        let closed = kappa(model, &span, s, lambda, t).unwrap();
        let h = |tau: f64| lambda * span_characteristic(model, &span, tau).unwrap().mu_prime;
        let quad = kappa_quadrature(model, &span, s, h, t).unwrap();
        prop_assert!((closed - quad).abs() < 1e-8);
    }

    #[test]
    fn grid_csv_round_trip(exp in 6u32..9, seed in prop::array::uniform2(-1e3f64..1e3), half_width in 0.5f64..20.0) {
        let n = 1usize << exp;
        let vals: Vec<(f64, f64)> = (0..n).map(|j| (seed[0] * (j as f64 * 0.37).sin(), seed[1] / (1.0 + j as f64))).collect();
        let values: Vec<Complex64> = vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let g = WaveGrid::new(half_width, values).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let back = WaveGrid::read_csv(&buf[..]).unwrap();
        prop_assert_eq!(back.len(), g.len());
        prop_assert_eq!(back.values(), g.values());
        prop_assert!((back.half_width() - half_width).abs() < 1e-12 * half_width);
    }
}

#[test]
fn model_names_round_trip() {
    for m in [ModelId::M1, ModelId::M2, ModelId::M3, ModelId::M4, ModelId::Free, ModelId::Harmonic] {
        assert_eq!(ModelId::from_str(&m.to_string()).unwrap(), m);
    }
    assert_eq!(ModelId::from_str("damped:1:0.1").unwrap(), ModelId::Damped { omega0: 1.0, lambda: 0.1 });
}
