//! Wavefunctions on uniform grids: applying propagators and their inverses
//! by quadrature, the Fourier transform, a Crank–Nicolson reference solver
//! and finite-difference residuals.

use std::f64::consts::{PI, SQRT_2};
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{Propagator, QuadraticKernel};
use crate::model::{CoefficientSet, CoefficientValues, ModelId};

/// Relative amplitude allowed at the grid edges before an input is rejected.
pub const TAIL_THRESHOLD: f64 = 1e-10;

/// Samples ψ(x_j) at x_j = −L + 2Lj/N, j = 0..N.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveGrid {
    half_width: f64,
    values: Vec<Complex64>,
}

/// Metadata written next to a grid file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    #[serde(rename = "L")]
    pub half_width: f64,
    #[serde(rename = "N")]
    pub points: usize,
    pub t: f64,
    pub model: Option<String>,
}

impl WaveGrid {
    pub fn new(half_width: f64, values: Vec<Complex64>) -> Result<Self> {
        let n = values.len();
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!("half-width must be positive, got {half_width}")));
        }
        if n < 64 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("point count must be a power of two >= 64, got {n}")));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidGrid("non-finite sample".into()));
        }
        Ok(Self { half_width, values })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(half_width: f64, n: usize, f: F) -> Result<Self> {
        let h = 2.0 * half_width / n as f64;
        Self::new(half_width, (0..n).map(|j| f(-half_width + h * j as f64)).collect())
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.values.len() as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + self.spacing() * j as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.x(j)).collect()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    fn with_values(&self, values: Vec<Complex64>) -> WaveGrid {
        WaveGrid { half_width: self.half_width, values }
    }

    /// L² norm by the trapezoid rule.
    pub fn norm(&self) -> f64 {
        (self.spacing() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// ⟨self, other⟩ = ∫ conj(self) other dx.
    pub fn inner(&self, other: &WaveGrid) -> Result<Complex64> {
        self.same_shape(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.spacing())
    }

    pub fn l2_distance(&self, other: &WaveGrid) -> Result<f64> {
        self.same_shape(other)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok((s * self.spacing()).sqrt())
    }

    fn same_shape(&self, other: &WaveGrid) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { left: self.len(), right: other.len() });
        }
        if (self.half_width - other.half_width).abs() > 1e-12 * self.half_width {
            return Err(Error::InvalidGrid("grids have different half-widths".into()));
        }
        Ok(())
    }

    pub fn map<F: Fn(f64, Complex64) -> Complex64>(&self, f: F) -> WaveGrid {
        self.with_values(self.values.iter().enumerate().map(|(j, &v)| f(self.x(j), v)).collect())
    }

    /// Fails with `TailLeak` unless the edge samples are negligible.
    pub fn check_tails(&self) -> Result<()> {
        let max = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let n = self.len();
        let edge = [0, 1, n - 2, n - 1].iter().map(|&j| self.values[j].norm()).fold(0.0, f64::max);
        if edge > TAIL_THRESHOLD * max {
            return Err(Error::TailLeak { value: edge, threshold: TAIL_THRESHOLD * max });
        }
        Ok(())
    }

    /// Writes `x,re,im` CSV.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,re,im")?;
        for (j, v) in self.values.iter().enumerate() {
            writeln!(w, "{:e},{:e},{:e}", self.x(j), v.re, v.im)?;
        }
        Ok(())
    }

    /// Reads `x,re,im` CSV and checks that x is the standard uniform grid.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vals = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with(|c: char| c.is_ascii_alphabetic())) {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected 3 fields, got {}", lineno + 1, fields.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)));
            xs.push(num(fields[0])?);
            vals.push(Complex64::new(num(fields[1])?, num(fields[2])?));
        }
        if xs.is_empty() {
            return Err(Error::Parse("empty grid file".into()));
        }
        let half_width = -xs[0];
        let grid = WaveGrid::new(half_width, vals)?;
        let h = grid.spacing();
        for (j, &x) in xs.iter().enumerate() {
            if (x - grid.x(j)).abs() > 1e-9 * h.max(1.0) {
                return Err(Error::InvalidGrid(format!("point {j} at x = {x} is off the uniform grid")));
            }
        }
        Ok(grid)
    }

    pub fn meta(&self, t: f64, model: Option<&str>) -> GridMeta {
        GridMeta { half_width: self.half_width, points: self.len(), t, model: model.map(str::to_owned) }
    }
}

/// Largest wavenumber carrying spectral weight above `rel` of the peak.
fn bandwidth(values: &[Complex64], half_width: f64, rel: f64) -> f64 {
    let n = values.len();
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let peak = buf.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut kmax = 0usize;
    for (k, v) in buf.iter().enumerate() {
        if v.norm() > rel * peak {
            let kk = if k <= n / 2 { k } else { n - k };
            kmax = kmax.max(kk);
        }
    }
    PI * kmax as f64 / half_width
}

/// Trigonometric interpolation onto a grid `factor` times finer.
fn refine(values: &[Complex64], factor: usize) -> Vec<Complex64> {
    let n = values.len();
    if factor == 1 {
        return values.to_vec();
    }
    let m = n * factor;
    let mut planner = FftPlanner::new();
    let mut spec = values.to_vec();
    planner.plan_fft_forward(n).process(&mut spec);
    let mut padded = vec![Complex64::new(0.0, 0.0); m];
    let half = n / 2;
    padded[..half].copy_from_slice(&spec[..half]);
    padded[m - half + 1..].copy_from_slice(&spec[half + 1..]);
    padded[half] = spec[half] * 0.5;
    padded[m - half] = spec[half] * 0.5;
    planner.plan_fft_inverse(m).process(&mut padded);
    let s = 1.0 / n as f64;
    padded.iter().map(|v| v * s).collect()
}

/// ∫ K(x_j, y) ψ(y) dy on the grid points x_j for a quadratic-phase kernel.
///
/// The integrand is sampled on a trigonometrically refined copy of the input
/// whenever the kernel oscillates faster than the grid resolves, so the
/// trapezoid rule stays spectrally accurate.
pub fn apply_quadratic(kernel: &QuadraticKernel, grid: &WaveGrid) -> Result<WaveGrid> {
    grid.check_tails()?;
    let n = grid.len();
    let max = grid.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(grid.clone());
    }
    let lo = grid.values.iter().position(|v| v.norm() > 1e-17 * max).unwrap_or(0);
    let hi = grid.values.iter().rposition(|v| v.norm() > 1e-17 * max).unwrap_or(n - 1);
    let (ylo, yhi) = (grid.x(lo.saturating_sub(1)), grid.x((hi + 1).min(n - 1)));
    let xmax = grid.half_width;
    let bw = bandwidth(&grid.values, grid.half_width, 1e-15);
    let mut omega: f64 = 0.0;
    for y in [ylo, yhi] {
        for x in [-xmax, xmax] {
            omega = omega.max((2.0 * kernel.gamma * y + kernel.beta * x).abs());
        }
    }
    let needed = 2.0 * PI / (1.1 * (omega + bw) + 10.0);
    let h = grid.spacing();
    let factor = ((h / needed).ceil() as usize).max(1).next_power_of_two();
    let fine = refine(&grid.values, factor);
    let hf = h / factor as f64;
    let start = lo.saturating_sub(1) * factor;
    let end = ((hi + 1) * factor + 1).min(n * factor);
    let ys: Vec<f64> = (start..end).map(|j| -grid.half_width + hf * j as f64).collect();
    let weights: Vec<Complex64> = ys
        .iter()
        .zip(&fine[start..end])
        .map(|(&y, v)| v * Complex64::from_polar(hf, kernel.gamma * y * y))
        .collect();
    let out: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let x = grid.x(j);
            let step = Complex64::from_polar(1.0, kernel.beta * x * hf);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut rot = Complex64::new(1.0, 0.0);
            for (i, w) in weights.iter().enumerate() {
                if i % 64 == 0 {
                    rot = Complex64::from_polar(1.0, kernel.beta * x * ys[i]);
                }
                acc += w * rot;
                rot *= step;
            }
            acc * kernel.amplitude * Complex64::from_polar(1.0, kernel.alpha * x * x)
        })
        .collect();
    WaveGrid::new(grid.half_width, out)
}

/// ψ(x, t) = ∫ G(x, y, t) ψ(y, 0) dy.
pub fn apply_kernel(prop: &Propagator, grid: &WaveGrid, t: f64) -> Result<WaveGrid> {
    if t == 0.0 && matches!(prop, Propagator::Green(_) | Propagator::DampedSymmetric { .. }) {
        grid.check_tails()?;
        return Ok(grid.clone());
    }
    let (q, _) = prop.quadratic(t)?;
    apply_quadratic(&q, grid)
}

/// Inverse of [`apply_kernel`].  For propagators with time-reversal
/// symmetry the inverse kernel is G(y, x, −t); for the damped and
/// standing-wave kernels the Hermitian adjoint is used.
pub fn apply_inverse(prop: &Propagator, grid: &WaveGrid, t: f64) -> Result<WaveGrid> {
    if t == 0.0 && matches!(prop, Propagator::Green(_) | Propagator::DampedSymmetric { .. }) {
        grid.check_tails()?;
        return Ok(grid.clone());
    }
    let q = match prop {
        Propagator::Green(ModelId::Damped { .. }) | Propagator::DampedSymmetric { .. } | Propagator::Standing(_) => {
            prop.quadratic(t)?.0.adjoint()
        }
        Propagator::Green(_) => prop.quadratic(-t)?.0.transpose(),
    };
    apply_quadratic(&q, grid)
}

/// F±[ψ](x) = (2π)^{-1/2} ∫ e^{±ixy} ψ(y) dy by direct quadrature.
pub fn fourier(grid: &WaveGrid, sign: f64) -> Result<WaveGrid> {
    apply_quadratic(&QuadraticKernel::fourier(sign), grid)
}

/// Operator identities among U (M1 propagator), V (M3 propagator), the
/// standing-wave operators K (kernel K₊) and L (kernel K₋) and the Fourier
/// transform F with kernel e^{+ixy}/√(2π).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagramIdentity {
    /// U = K F⁻¹
    UEqualsKFinv,
    /// U = F L
    UEqualsFL,
    /// U = F V F⁻¹
    UEqualsFVFinv,
    /// V = L F
    VEqualsLF,
    /// V = F⁻¹ K
    VEqualsFinvK,
    /// V = F⁻¹ U F
    VEqualsFinvUF,
    /// U⁻¹ = F K⁻¹
    UinvEqualsFKinv,
    /// U⁻¹ = L⁻¹ F⁻¹
    UinvEqualsLinvFinv,
    /// V⁻¹ = F⁻¹ L⁻¹
    VinvEqualsFinvLinv,
    /// V⁻¹ = K⁻¹ F
    VinvEqualsKinvF,
    /// K = F L F
    KEqualsFLF,
    /// L = F⁻¹ K F⁻¹
    LEqualsFinvKFinv,
    /// K⁻¹ = F⁻¹ L⁻¹ F⁻¹
    KinvEqualsFinvLinvFinv,
}

impl DiagramIdentity {
    pub const ALL: [DiagramIdentity; 13] = [
        DiagramIdentity::UEqualsKFinv,
        DiagramIdentity::UEqualsFL,
        DiagramIdentity::UEqualsFVFinv,
        DiagramIdentity::VEqualsLF,
        DiagramIdentity::VEqualsFinvK,
        DiagramIdentity::VEqualsFinvUF,
        DiagramIdentity::UinvEqualsFKinv,
        DiagramIdentity::UinvEqualsLinvFinv,
        DiagramIdentity::VinvEqualsFinvLinv,
        DiagramIdentity::VinvEqualsKinvF,
        DiagramIdentity::KEqualsFLF,
        DiagramIdentity::LEqualsFinvKFinv,
        DiagramIdentity::KinvEqualsFinvLinvFinv,
    ];
}

#[derive(Clone, Copy)]
enum Op {
    U,
    V,
    K,
    L,
    F,
    Uinv,
    Vinv,
    Kinv,
    Linv,
    Finv,
}

fn apply_op(op: Op, g: &WaveGrid, t: f64) -> Result<WaveGrid> {
    let u = Propagator::Green(ModelId::M1);
    let v = Propagator::Green(ModelId::M3);
    let k = Propagator::Standing(crate::kernels::Standing::Plus);
    let l = Propagator::Standing(crate::kernels::Standing::Minus);
    match op {
        Op::U => apply_kernel(&u, g, t),
        Op::V => apply_kernel(&v, g, t),
        Op::K => apply_kernel(&k, g, t),
        Op::L => apply_kernel(&l, g, t),
        Op::F => fourier(g, 1.0),
        Op::Uinv => apply_inverse(&u, g, t),
        Op::Vinv => apply_inverse(&v, g, t),
        Op::Kinv => apply_inverse(&k, g, t),
        Op::Linv => apply_inverse(&l, g, t),
        Op::Finv => fourier(g, -1.0),
    }
}

/// Applies a product of operators; the rightmost acts first.
fn chain(ops: &[Op], g: &WaveGrid, t: f64) -> Result<WaveGrid> {
    ops.iter().rev().try_fold(g.clone(), |acc, &op| apply_op(op, &acc, t))
}

/// L² norm of the difference between both sides of an identity applied to
/// `grid` at time `t`.
pub fn diagram_check(id: DiagramIdentity, grid: &WaveGrid, t: f64) -> Result<f64> {
    use DiagramIdentity as D;
    use Op::*;
    let (lhs, rhs): (&[Op], &[Op]) = match id {
        D::UEqualsKFinv => (&[U], &[K, Finv]),
        D::UEqualsFL => (&[U], &[F, L]),
        D::UEqualsFVFinv => (&[U], &[F, V, Finv]),
        D::VEqualsLF => (&[V], &[L, F]),
        D::VEqualsFinvK => (&[V], &[Finv, K]),
        D::VEqualsFinvUF => (&[V], &[Finv, U, F]),
        D::UinvEqualsFKinv => (&[Uinv], &[F, Kinv]),
        D::UinvEqualsLinvFinv => (&[Uinv], &[Linv, Finv]),
        D::VinvEqualsFinvLinv => (&[Vinv], &[Finv, Linv]),
        D::VinvEqualsKinvF => (&[Vinv], &[Kinv, F]),
        D::KEqualsFLF => (&[K], &[F, L, F]),
        D::LEqualsFinvKFinv => (&[L], &[Finv, K, Finv]),
        D::KinvEqualsFinvLinvFinv => (&[Kinv], &[Finv, Linv, Finv]),
    };
    chain(lhs, grid, t)?.l2_distance(&chain(rhs, grid, t)?)
}

/// ‖U(s)U(t − s)ψ − U(t)ψ‖ for a Green propagator.
pub fn semigroup_defect(model: ModelId, grid: &WaveGrid, s: f64, t: f64) -> Result<f64> {
    let p = Propagator::Green(model);
    let two = apply_kernel(&p, &apply_kernel(&p, grid, t - s)?, s)?;
    two.l2_distance(&apply_kernel(&p, grid, t)?)
}

/// Crank–Nicolson solution of iψ_t = Hψ with second-order differences,
/// Dirichlet ends and H evaluated at the midpoint of each step.
pub fn crank_nicolson_oracle(set: &CoefficientSet, grid: &WaveGrid, t: f64, dt: f64) -> Result<WaveGrid> {
    if !(dt > 0.0) {
        return Err(Error::InvalidGrid(format!("time step must be positive, got {dt}")));
    }
    let n = grid.len();
    let h = grid.spacing();
    let xs = grid.points();
    let steps = (t.abs() / dt).ceil().max(1.0) as usize;
    let tau = t / steps as f64;
    let mut psi = grid.values.clone();
    let i = Complex64::i();
    let mut lower = vec![Complex64::new(0.0, 0.0); n];
    let mut diag = vec![Complex64::new(0.0, 0.0); n];
    let mut upper = vec![Complex64::new(0.0, 0.0); n];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    for s in 0..steps {
        let v = set.at(tau * (s as f64 + 0.5));
        // H_j = A ψ_{j−1} + B ψ_j + C ψ_{j+1}
        for j in 0..n {
            let x = xs[j];
            let off = -v.a / (h * h);
            let drift = i * v.c * x / (2.0 * h);
            lower[j] = off + drift;
            upper[j] = off - drift;
            diag[j] = 2.0 * v.a / (h * h) + v.b * x * x - i * v.d;
        }
        let half = i * (0.5 * tau);
        for j in 0..n {
            let mut hpsi = diag[j] * psi[j];
            if j > 0 {
                hpsi += lower[j] * psi[j - 1];
            }
            if j + 1 < n {
                hpsi += upper[j] * psi[j + 1];
            }
            rhs[j] = psi[j] - half * hpsi;
        }
        // Thomas algorithm on (I + iτ/2 H)
        let mut cp = vec![Complex64::new(0.0, 0.0); n];
        let mut dp = vec![Complex64::new(0.0, 0.0); n];
        let b0 = Complex64::new(1.0, 0.0) + half * diag[0];
        cp[0] = half * upper[0] / b0;
        dp[0] = rhs[0] / b0;
        for j in 1..n {
            let a = half * lower[j];
            let m = Complex64::new(1.0, 0.0) + half * diag[j] - a * cp[j - 1];
            cp[j] = half * upper[j] / m;
            dp[j] = (rhs[j] - a * dp[j - 1]) / m;
        }
        psi[n - 1] = dp[n - 1];
        for j in (0..n - 1).rev() {
            psi[j] = dp[j] - cp[j] * psi[j + 1];
        }
    }
    WaveGrid::new(grid.half_width, psi)
}

/// A residual together with the sum of magnitudes of the terms it cancels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub value: Complex64,
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.value.norm()
        } else {
            self.value.norm() / self.scale
        }
    }
}

/// Local oscillation rate max(|f'/f|, |f''/f|^{1/2}) probed by differences.
fn local_rate<F: Fn(f64) -> Result<Complex64>>(f: &F, at: f64) -> Result<f64> {
    let f0 = f(at)?;
    let mut delta = 1e-4 * (1.0 + at.abs());
    let mut rate = 0.0;
    for _ in 0..4 {
        let (p, m) = (f(at + delta)?, f(at - delta)?);
        let d1 = ((p - m) / (2.0 * delta) / f0).norm();
        let d2 = ((p - 2.0 * f0 + m) / (delta * delta) / f0).norm();
        rate = d1.max(d2.sqrt());
        if rate * delta < 0.05 {
            break;
        }
        delta = 0.01 / rate;
    }
    Ok(rate)
}

/// Step sizes for 4th-order differences: h ≈ 0.02 / (local rate), capped at 10⁻³.
pub fn suggest_steps<F: Fn(f64, f64) -> Result<Complex64>>(field: &F, x: f64, t: f64) -> Result<(f64, f64)> {
    let wx = local_rate(&|s| field(s, t), x)?;
    let wt = local_rate(&|s| field(x, s), t)?;
    let pick = |w: f64| if w > 0.0 { (0.02 / w).min(1e-3) } else { 1e-3 };
    Ok((pick(wx), pick(wt)))
}

fn d1<F: Fn(f64) -> Result<Complex64>>(f: &F, at: f64, h: f64) -> Result<Complex64> {
    Ok((f(at - 2.0 * h)? - 8.0 * f(at - h)? + 8.0 * f(at + h)? - f(at + 2.0 * h)?) / (12.0 * h))
}

fn d2<F: Fn(f64) -> Result<Complex64>>(f: &F, at: f64, h: f64) -> Result<Complex64> {
    Ok((-f(at - 2.0 * h)? + 16.0 * f(at - h)? - 30.0 * f(at)? + 16.0 * f(at + h)? - f(at + 2.0 * h)?) / (12.0 * h * h))
}

/// Finite-difference residual iψ_t + aψ_xx − bx²ψ + i(cxψ_x + dψ) + extra·ψ
/// for a field ψ(x, t).  `steps` overrides the automatic step choice.
pub fn schrodinger_residual_with<F>(set: &CoefficientSet, field: &F, x: f64, t: f64, extra: Complex64, steps: Option<(f64, f64)>) -> Result<Residual>
where
    F: Fn(f64, f64) -> Result<Complex64>,
{
    let (hx, ht) = match steps {
        Some(s) => s,
        None => suggest_steps(field, x, t)?,
    };
    let v = set.at(t);
    let psi = field(x, t)?;
    let i = Complex64::i();
    let fx = |s: f64| field(s, t);
    let ft = |s: f64| field(x, s);
    let terms = [
        i * d1(&ft, t, ht)?,
        v.a * d2(&fx, x, hx)?,
        -v.b * x * x * psi,
        i * v.c * x * d1(&fx, x, hx)?,
        i * v.d * psi,
        extra * psi,
    ];
    Ok(Residual { value: terms.iter().sum(), scale: terms.iter().map(|z| z.norm()).sum() })
}

/// Residual of the linear equation iψ_t = Hψ.
pub fn schrodinger_residual<F>(set: &CoefficientSet, field: &F, x: f64, t: f64) -> Result<Residual>
where
    F: Fn(f64, f64) -> Result<Complex64>,
{
    schrodinger_residual_with(set, field, x, t, Complex64::new(0.0, 0.0), None)
}

/// 4th-order first-derivative stencil with zero extension past the ends.
fn stencil_d1(v: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = v.len();
    let at = |j: isize| if j < 0 || j >= n as isize { Complex64::new(0.0, 0.0) } else { v[j as usize] };
    (0..n as isize).map(|j| (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * h)).collect()
}

fn stencil_d2(v: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = v.len();
    let at = |j: isize| if j < 0 || j >= n as isize { Complex64::new(0.0, 0.0) } else { v[j as usize] };
    (0..n as isize)
        .map(|j| (-at(j - 2) + 16.0 * at(j - 1) - 30.0 * at(j) + 16.0 * at(j + 1) - at(j + 2)) / (12.0 * h * h))
        .collect()
}

/// Hψ = −aψ'' + bx²ψ − i(cxψ' + dψ) with 4th-order stencils.
pub fn apply_hamiltonian(v: &CoefficientValues, grid: &WaveGrid) -> WaveGrid {
    let h = grid.spacing();
    let dpsi = stencil_d1(&grid.values, h);
    let ddpsi = stencil_d2(&grid.values, h);
    let i = Complex64::i();
    let out = (0..grid.len())
        .map(|j| {
            let x = grid.x(j);
            -v.a * ddpsi[j] + v.b * x * x * grid.values[j] - i * (v.c * x * dpsi[j] + v.d * grid.values[j])
        })
        .collect();
    grid.with_values(out)
}

/// Coefficients of H = D(AA† + A†A) + P A² + Q A†².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderCoefficients {
    pub diagonal: f64,
    pub lowering: Complex64,
    pub raising: Complex64,
}

/// D = (a + b)/2, P = (a − b + 2id)/2, Q = (a − b − 2id)/2 (requires c = 2d).
pub fn ladder_coefficients(v: &CoefficientValues) -> LadderCoefficients {
    LadderCoefficients {
        diagonal: 0.5 * (v.a + v.b),
        lowering: Complex64::new(0.5 * (v.a - v.b), v.d),
        raising: Complex64::new(0.5 * (v.a - v.b), -v.d),
    }
}

/// A = (∂ + x)/(i√2).
pub fn lower(grid: &WaveGrid) -> WaveGrid {
    let d = stencil_d1(&grid.values, grid.spacing());
    let s = Complex64::new(0.0, -1.0 / SQRT_2);
    grid.with_values((0..grid.len()).map(|j| s * (d[j] + grid.x(j) * grid.values[j])).collect())
}

/// A† = (∂ − x)/(i√2).
pub fn raise(grid: &WaveGrid) -> WaveGrid {
    let d = stencil_d1(&grid.values, grid.spacing());
    let s = Complex64::new(0.0, -1.0 / SQRT_2);
    grid.with_values((0..grid.len()).map(|j| s * (d[j] - grid.x(j) * grid.values[j])).collect())
}

/// Hψ evaluated in the ladder-operator form.
pub fn ladder_apply(v: &CoefficientValues, grid: &WaveGrid) -> WaveGrid {
    let c = ladder_coefficients(v);
    let a = lower(grid);
    let ad = raise(grid);
    let aad = lower(&ad);
    let ada = raise(&a);
    let aa = lower(&a);
    let adad = raise(&ad);
    let out = (0..grid.len())
        .map(|j| c.diagonal * (aad.values[j] + ada.values[j]) + c.lowering * aa.values[j] + c.raising * adad.values[j])
        .collect();
    grid.with_values(out)
}

/// L² difference between two grids ignoring `margin` points at each end.
pub fn interior_distance(a: &WaveGrid, b: &WaveGrid, margin: usize) -> Result<f64> {
    a.same_shape(b)?;
    let n = a.len();
    let s: f64 = (margin..n - margin).map(|j| (a.values[j] - b.values[j]).norm_sqr()).sum();
    Ok((s * a.spacing()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::hermite_function;

    fn ground(n: usize) -> WaveGrid {
        WaveGrid::from_fn(12.0, n, |x| Complex64::new(hermite_function(0, x), 0.0)).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(WaveGrid::new(12.0, vec![Complex64::new(0.0, 0.0); 100]).is_err());
        assert!(WaveGrid::new(-1.0, vec![Complex64::new(0.0, 0.0); 64]).is_err());
        let wide = WaveGrid::from_fn(2.0, 64, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(wide.check_tails(), Err(Error::TailLeak { .. })));
    }

    #[test]
    fn csv_round_trip() {
        let g = ground(64).map(|x, v| v * Complex64::from_polar(1.0, 0.3 * x));
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let back = WaveGrid::read_csv(&buf[..]).unwrap();
        assert!(g.l2_distance(&back).unwrap() < 1e-14);
    }

    #[test]
    fn fourier_of_ground_state_is_itself() {
        let g = ground(1024);
        let f = fourier(&g, 1.0).unwrap();
        assert!(f.l2_distance(&g).unwrap() < 1e-12);
        let back = fourier(&f, -1.0).unwrap();
        assert!(back.l2_distance(&g).unwrap() < 1e-12);
    }

    #[test]
    fn harmonic_ground_state_phase() {
        let g = ground(1024);
        let u = apply_kernel(&Propagator::Green(ModelId::Harmonic), &g, 1.0).unwrap();
        let expect = g.map(|_, v| v * Complex64::from_polar(1.0, -0.5));
        assert!(u.l2_distance(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn short_time_is_near_identity() {
        let g = ground(1024);
        let u = apply_kernel(&Propagator::Green(ModelId::M1), &g, 1e-3).unwrap();
        assert!(u.l2_distance(&g).unwrap() < 1e-3);
        let cn = crank_nicolson_oracle(&ModelId::M1.coefficients(), &g, 1e-3, 1e-5).unwrap();
        assert!(u.l2_distance(&cn).unwrap() < 1e-6);
    }

    #[test]
    fn crank_nicolson_harmonic_phase() {
        let g = ground(1024);
        let cn = crank_nicolson_oracle(&ModelId::Harmonic.coefficients(), &g, 1.0, 1e-3).unwrap();
        let overlap = g.inner(&cn).unwrap();
        assert!((overlap - Complex64::from_polar(1.0, -0.5)).norm() < 1e-4);
    }

    #[test]
    fn ladder_and_direct_hamiltonians_agree() {
        let g = WaveGrid::from_fn(12.0, 2048, |x| Complex64::new(hermite_function(3, x), 0.0)).unwrap();
        for m in ModelId::CORE {
            let v = m.coefficients().at(0.7);
            let d = interior_distance(&apply_hamiltonian(&v, &g), &ladder_apply(&v, &g), 8).unwrap();
            assert!(d < 1e-6, "{m}: {d}");
        }
    }

    #[test]
    fn momentum_representation_swaps_coefficients() {
        let g = WaveGrid::from_fn(12.0, 2048, |x| Complex64::new(hermite_function(2, x) + 0.3 * hermite_function(1, x), 0.0)).unwrap();
        let v = ModelId::M1.coefficients().at(0.6);
        let lhs = apply_hamiltonian(&v, &g);
        let chi = fourier(&g, -1.0).unwrap();
        let rhs = fourier(&apply_hamiltonian(&v.momentum_swap(), &chi), 1.0).unwrap();
        assert!(interior_distance(&lhs, &rhs, 8).unwrap() < 1e-6);
    }
}
