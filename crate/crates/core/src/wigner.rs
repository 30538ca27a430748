//! Wigner distributions on phase-space grids (ħ = 1, x = (a + a†)/√2).
//!
//! Grid values use the closed-form number-basis kernel
//!
//! ```text
//! W_{|m⟩⟨n|}(x, p) = (−1)^n / π · √(n!/m!) · (√2 (x − i p))^{m−n}
//!                    · L_n^{(m−n)}(2r²) · e^{−r²},   m ≥ n,  r² = x² + p²
//! ```
//!
//! evaluated through a normalized Laguerre recurrence that never forms a
//! factorial. Integrals over the grid use the trapezoidal rule.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::DensityOperator;
use crate::error::{Error, Result};
use crate::fock::FockKet;
use crate::output::sci;

/// Largest cutoff the kernel recurrence is used for.
pub const MAX_WIGNER_CUTOFF: usize = 60;

/// Uniform rectangular grid of quadrature values.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid {
    x: Vec<f64>,
    p: Vec<f64>,
}

fn check_axis(name: &str, axis: &[f64]) -> Result<f64> {
    if axis.len() < 3 {
        return Err(Error::InvalidGrid(format!("{name} axis needs at least 3 points")));
    }
    if axis.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid(format!("{name} axis has non-finite values")));
    }
    let h = axis[1] - axis[0];
    if h <= 0.0 {
        return Err(Error::InvalidGrid(format!("{name} axis must ascend")));
    }
    if axis.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-12) {
        return Err(Error::InvalidGrid(format!("{name} axis is not uniformly spaced")));
    }
    Ok(h)
}

fn linspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    let h = (max - min) / (points.max(2) - 1) as f64;
    (0..points).map(|i| min + i as f64 * h).collect()
}

fn trapezoid_weights(len: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; len];
    w[0] = 0.5 * h;
    w[len - 1] = 0.5 * h;
    w
}

impl PhaseSpaceGrid {
    pub fn new(x: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        check_axis("x", &x)?;
        check_axis("p", &p)?;
        Ok(PhaseSpaceGrid { x, p })
    }

    /// Square grid with the same axis for x and p.
    pub fn square(min: f64, max: f64, points: usize) -> Result<Self> {
        if max.is_nan() || min.is_nan() || max <= min {
            return Err(Error::InvalidGrid(format!("empty range [{min}, {max}]")));
        }
        let axis = linspace(min, max, points);
        Self::new(axis.clone(), axis)
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn dx(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    pub fn dp(&self) -> f64 {
        self.p[1] - self.p[0]
    }

    pub fn len(&self) -> usize {
        self.x.len() * self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Trapezoidal ∬ f dx dp over values stored row-major in x then p.
    fn integrate(&self, values: impl Fn(usize, usize) -> f64) -> f64 {
        let wx = trapezoid_weights(self.x.len(), self.dx());
        let wp = trapezoid_weights(self.p.len(), self.dp());
        wx.iter()
            .enumerate()
            .map(|(i, a)| a * wp.iter().enumerate().map(|(j, b)| b * values(i, j)).sum::<f64>())
            .sum()
    }

    fn index_of(axis: &[f64], v: f64) -> Option<usize> {
        let h = axis[1] - axis[0];
        let i = ((v - axis[0]) / h).round();
        if i < 0.0 || i as usize >= axis.len() {
            return None;
        }
        let i = i as usize;
        ((axis[i] - v).abs() < 1e-9).then_some(i)
    }
}

impl Default for PhaseSpaceGrid {
    /// x, p ∈ [−5, 5] with 201 points per axis.
    fn default() -> Self {
        Self::square(-5.0, 5.0, 201).expect("default grid is valid")
    }
}

/// W(x_i, p_j) on a grid, row-major in x then p.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    grid: PhaseSpaceGrid,
    values: Vec<f64>,
}

impl WignerGrid {
    pub fn new(grid: PhaseSpaceGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(WignerGrid { grid, values })
    }

    pub fn grid(&self) -> &PhaseSpaceGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// W at grid indices (i along x, j along p).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.p.len() + j]
    }

    /// W at a point lying on the grid.
    pub fn value_at(&self, x: f64, p: f64) -> Option<f64> {
        let i = PhaseSpaceGrid::index_of(&self.grid.x, x)?;
        let j = PhaseSpaceGrid::index_of(&self.grid.p, p)?;
        Some(self.get(i, j))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// ∬ W dx dp.
    pub fn integral(&self) -> f64 {
        self.grid.integrate(|i, j| self.get(i, j))
    }

    /// ∬ f(x, p) W dx dp.
    pub fn moment(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let (x, p) = (&self.grid.x, &self.grid.p);
        self.grid.integrate(|i, j| f(x[i], p[j]) * self.get(i, j))
    }

    /// Largest pointwise difference to another grid of the same shape.
    pub fn max_abs_diff(&self, other: &WignerGrid) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::ShapeMismatch("different phase-space grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Pointwise a·self + other.
    pub fn scaled_add(&self, a: f64, other: &WignerGrid) -> Result<WignerGrid> {
        if self.grid != other.grid {
            return Err(Error::ShapeMismatch("different phase-space grids".into()));
        }
        Ok(WignerGrid {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(s, o)| a * s + o)
                .collect(),
        })
    }

    /// `x,p,w` CSV, one row per point, x outer and p inner.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,p,w")?;
        for (i, x) in self.grid.x.iter().enumerate() {
            for (j, p) in self.grid.p.iter().enumerate() {
                writeln!(out, "{},{},{}", sci(*x), sci(*p), sci(self.get(i, j)))?;
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// Energy eigenfunction ψ_n(x) = (2^n n! √π)^{−1/2} H_n(x) e^{−x²/2}.
pub fn oscillator_wavefunction(n: usize, x: f64) -> f64 {
    oscillator_wavefunctions(n + 1, x)[n]
}

/// ψ_0(x), …, ψ_{count−1}(x) by the normalized three-term recurrence.
pub fn oscillator_wavefunctions(count: usize, x: f64) -> Vec<f64> {
    let mut psi = Vec::with_capacity(count);
    if count == 0 {
        return psi;
    }
    psi.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if count > 1 {
        psi.push(2f64.sqrt() * x * psi[0]);
    }
    for n in 2..count {
        let nf = n as f64;
        let next = (2.0 / nf).sqrt() * x * psi[n - 1] - ((nf - 1.0) / nf).sqrt() * psi[n - 2];
        psi.push(next);
    }
    psi
}

/// Scaled Laguerre values for one phase-space point:
/// `t[k][n] = √(n!/(n+k)!) u^{k/2} L_n^{(k)}(u) e^{−u/2}` with u = 2r².
struct Kernel {
    cutoff: usize,
    values: Vec<f64>,
}

impl Kernel {
    fn new(cutoff: usize) -> Self {
        Kernel {
            cutoff,
            values: vec![0.0; cutoff * cutoff],
        }
    }

    #[inline]
    fn t(&self, k: usize, n: usize) -> f64 {
        self.values[k * self.cutoff + n]
    }

    /// Fills the table for (x, p) and returns e^{−iθ} = (x − i p)/r.
    fn fill(&mut self, x: f64, p: f64) -> Complex64 {
        let r2 = x * x + p * p;
        let u = 2.0 * r2;
        let c = self.cutoff;
        let mut lead = (-0.5 * u).exp();
        for k in 0..c {
            if k > 0 {
                lead *= (u / k as f64).sqrt();
            }
            let row = &mut self.values[k * c..(k + 1) * c];
            let len = c - k;
            row[0] = lead;
            if len > 1 {
                row[1] = (1.0 + k as f64 - u) / ((k + 1) as f64).sqrt() * lead;
            }
            for n in 2..len {
                let (nf, kf) = (n as f64, k as f64);
                row[n] = (2.0 * nf - 1.0 + kf - u) / (nf * (nf + kf)).sqrt() * row[n - 1]
                    - ((nf - 1.0) * (nf - 1.0 + kf) / (nf * (nf + kf))).sqrt() * row[n - 2];
            }
        }
        if r2 > 0.0 {
            Complex64::new(x, -p) / r2.sqrt()
        } else {
            Complex64::new(1.0, 0.0)
        }
    }

    /// (1/π) Σ_{m,n} ρ_{mn} W_{|m⟩⟨n|} for a Hermitian ρ given through its
    /// lower triangle `rho(n + k, n)`. Returns (value, imaginary residue).
    fn evaluate(
        &self,
        phase: Complex64,
        rho: impl Fn(usize, usize) -> Complex64,
        upper: Option<&dyn Fn(usize, usize) -> Complex64>,
    ) -> (f64, f64) {
        let c = self.cutoff;
        let mut acc = 0.0;
        let mut residue: f64 = 0.0;
        let mut rot = Complex64::new(1.0, 0.0);
        for k in 0..c {
            for n in 0..c - k {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let base = sign * self.t(k, n);
                if k == 0 {
                    let d = rho(n, n);
                    acc += base * d.re;
                    residue += base * d.im;
                } else {
                    let kernel = rot * base;
                    let lower = rho(n + k, n) * kernel;
                    match upper {
                        // ρ_{n,n+k} W_{|n⟩⟨n+k|}, with W_{|n⟩⟨n+k|} = conj(W_{|n+k⟩⟨n|}).
                        Some(up) => {
                            let z = lower + up(n, n + k) * kernel.conj();
                            acc += z.re;
                            residue += z.im;
                        }
                        None => acc += 2.0 * lower.re,
                    }
                }
            }
            rot *= phase;
        }
        (acc / PI, residue.abs() / PI)
    }
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff > MAX_WIGNER_CUTOFF {
        return Err(Error::CutoffTooLarge {
            cutoff,
            limit: MAX_WIGNER_CUTOFF,
        });
    }
    Ok(())
}

fn evaluate_grid<F>(grid: &PhaseSpaceGrid, cutoff: usize, point: F) -> Result<WignerGrid>
where
    F: Fn(&Kernel, Complex64) -> (f64, f64) + Sync,
{
    let rows: Vec<(Vec<f64>, f64)> = grid
        .x
        .par_iter()
        .map(|&x| {
            let mut kernel = Kernel::new(cutoff);
            let mut worst: f64 = 0.0;
            let row = grid
                .p
                .iter()
                .map(|&p| {
                    let phase = kernel.fill(x, p);
                    let (v, residue) = point(&kernel, phase);
                    worst = worst.max(residue);
                    v
                })
                .collect();
            (row, worst)
        })
        .collect();
    let residue = rows.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    if residue > 1e-10 {
        return Err(Error::InvalidState(format!(
            "Wigner function has imaginary residue {residue:.2e}"
        )));
    }
    WignerGrid::new(grid.clone(), rows.into_iter().flat_map(|(r, _)| r).collect())
}

/// Wigner distribution of a pure (possibly unnormalized) ket; it integrates
/// to the ket's squared norm.
pub fn wigner_pure(ket: &FockKet, grid: &PhaseSpaceGrid) -> Result<WignerGrid> {
    check_cutoff(ket.cutoff())?;
    let c = ket.coeffs();
    evaluate_grid(grid, ket.cutoff(), |kernel, phase| {
        kernel.evaluate(phase, |m, n| c[m] * c[n].conj(), None)
    })
}

/// Sum of the Wigner distributions of unnormalized branch kets.
pub fn wigner_mixed(branches: &[FockKet], grid: &PhaseSpaceGrid) -> Result<WignerGrid> {
    let first = branches.first().ok_or(Error::Empty("branch list"))?;
    if branches.iter().any(|b| b.cutoff() != first.cutoff()) {
        return Err(Error::ShapeMismatch("branches with different cutoffs".into()));
    }
    let mut total = wigner_pure(first, grid)?;
    for b in &branches[1..] {
        total = wigner_pure(b, grid)?.scaled_add(1.0, &total)?;
    }
    Ok(total)
}

/// Σ ρ_{mn} W_{|m⟩⟨n|} for a single-mode density operator.
pub fn wigner_density(rho: &DensityOperator, grid: &PhaseSpaceGrid) -> Result<WignerGrid> {
    if rho.modes() != 1 {
        return Err(Error::ShapeMismatch("Wigner grids need a single-mode operator".into()));
    }
    let cutoff = rho.dim();
    check_cutoff(cutoff)?;
    let upper = |m: usize, n: usize| rho.single_mode_element(m, n);
    evaluate_grid(grid, cutoff, |kernel, phase| {
        kernel.evaluate(phase, |m, n| rho.single_mode_element(m, n), Some(&upper))
    })
}

/// ∬ (|W| − W)/2 dx dp.
pub fn negativity_volume(w: &WignerGrid) -> f64 {
    w.grid.integrate(|i, j| (-w.get(i, j)).max(0.0))
}

/// Parameters of `W = A exp[−(s x² + p²/s) / 2σ²]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianFit {
    #[serde(rename = "A")]
    pub amplitude: f64,
    pub s: f64,
    pub sigma: f64,
}

impl GaussianFit {
    pub fn evaluate(&self, x: f64, p: f64) -> f64 {
        self.amplitude * (-(self.s * x * x + p * p / self.s) / (2.0 * self.sigma * self.sigma)).exp()
    }

    /// The normalized surface with these parameters sampled on `grid`.
    pub fn surface(s: f64, sigma: f64, grid: &PhaseSpaceGrid) -> Result<WignerGrid> {
        let fit = GaussianFit {
            amplitude: 1.0 / (2.0 * PI * sigma * sigma),
            s,
            sigma,
        };
        let values = grid
            .x
            .iter()
            .flat_map(|&x| grid.p.iter().map(move |&p| fit.evaluate(x, p)))
            .collect();
        WignerGrid::new(grid.clone(), values)
    }

    /// Squeezing parameter ξ = ln √s.
    pub fn xi(&self) -> f64 {
        0.5 * self.s.ln()
    }

    /// Largest |W − fit| over the grid.
    pub fn residual(&self, w: &WignerGrid) -> f64 {
        let (x, p) = (w.grid.x(), w.grid.p());
        let np = p.len();
        w.values
            .iter()
            .enumerate()
            .map(|(idx, v)| (v - self.evaluate(x[idx / np], p[idx % np])).abs())
            .fold(0.0, f64::max)
    }
}

/// Moment fit of the Gaussian form: with quadrature variances V_x, V_p,
/// s = √(V_p / V_x), σ = (V_x V_p)^{1/4} and A = 1/(2πσ²). s > 1 means the
/// state is squeezed along x.
pub fn fit_gaussian(w: &WignerGrid) -> Result<GaussianFit> {
    let weight = w.integral();
    if weight.is_nan() || weight <= 0.0 {
        return Err(Error::Fit(format!("non-positive total weight {weight}")));
    }
    let mx = w.moment(|x, _| x) / weight;
    let mp = w.moment(|_, p| p) / weight;
    if mx.abs() > 0.05 || mp.abs() > 0.05 {
        return Err(Error::Fit(format!("distribution is not centered (mean {mx:.3}, {mp:.3})")));
    }
    let vx = w.moment(|x, _| (x - mx) * (x - mx)) / weight;
    let vp = w.moment(|_, p| (p - mp) * (p - mp)) / weight;
    if !(vx > 0.0 && vp > 0.0) {
        return Err(Error::Fit(format!("non-positive variance ({vx:.3e}, {vp:.3e})")));
    }
    let sigma = (vx * vp).powf(0.25);
    Ok(GaussianFit {
        amplitude: 1.0 / (2.0 * PI * sigma * sigma),
        s: (vp / vx).sqrt(),
        sigma,
    })
}
