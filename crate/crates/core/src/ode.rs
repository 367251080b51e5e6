//! Fixed-step classical Runge–Kutta.

use crate::error::Result;

pub(crate) fn rk4<const N: usize, F>(mut f: F, t0: f64, y0: [f64; N], t1: f64, max_dt: f64) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let n = (span.abs() / max_dt).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut y = y0;
    let axpy = |y: &[f64; N], k: &[f64; N], s: f64| -> [f64; N] {
        let mut out = *y;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    for i in 0..n {
        let t = t0 + h * i as f64;
        let k1 = f(t, &y)?;
        let k2 = f(t + 0.5 * h, &axpy(&y, &k1, 0.5 * h))?;
        let k3 = f(t + 0.5 * h, &axpy(&y, &k2, 0.5 * h))?;
        let k4 = f(t + h, &axpy(&y, &k3, h))?;
        for j in 0..N {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    Ok(y)
}
