//! Beam splitters, ordinary (traced) attenuation and heralded attenuation.
//!
//! The beam splitter maps input creation operators onto the outputs as
//!
//! ```text
//! a†  →  t a† + i r b†
//! b†  →  i r a† + t b†
//! ```
//!
//! Any other convention is reachable with [`phase_shift`]. Mode 0 of a
//! two-mode register produced by [`inject`] is the kept (transmitted) path
//! and mode 1 the auxiliary path that is traced out or heralded on.

use num_complex::Complex64;

use crate::density::DensityOperator;
use crate::error::{check_range, Error, Result};
use crate::fock::{increment, strides, FockKet, MultiModeKet};
use crate::math::{powi, LnFactorials};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Heralds less likely than this are reported as failures.
pub const HERALD_FLOOR: f64 = 1e-15;

/// Lossless two-mode beam splitter with real amplitudes t² + r² = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    t: f64,
    r: f64,
}

impl BeamSplitter {
    pub fn new(t: f64, r: f64) -> Result<Self> {
        check_range("t", t, 0.0, 1.0, "[0, 1]")?;
        check_range("r", r, 0.0, 1.0, "[0, 1]")?;
        if (t * t + r * r - 1.0).abs() > 1e-12 {
            return Err(Error::ParameterRange {
                name: "t^2 + r^2",
                value: t * t + r * r,
                range: "1 within 1e-12",
            });
        }
        Ok(BeamSplitter { t, r })
    }

    /// Splitter transmitting amplitude `t`, with r = √(1 − t²).
    pub fn with_transmission(t: f64) -> Result<Self> {
        check_range("t", t, 0.0, 1.0, "[0, 1]")?;
        Self::new(t, (1.0 - t * t).max(0.0).sqrt())
    }

    /// 50-50 splitter.
    pub fn balanced() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        BeamSplitter { t: h, r: h }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// The inverse transformation, `(t, −i r; −i r, t)`.
    pub fn adjoint(&self) -> Self {
        BeamSplitter {
            t: self.t,
            r: -self.r,
        }
    }

    /// The 2×2 mode-transformation matrix.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let t = Complex64::new(self.t, 0.0);
        let ir = I * self.r;
        [[t, ir], [ir, t]]
    }
}

/// A post-selected state and the probability of the herald that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldOutcome<S> {
    pub state: S,
    pub probability: f64,
}

fn check_probability(p: f64) -> Result<()> {
    if p < HERALD_FLOOR {
        return Err(Error::ZeroProbabilityHerald(p));
    }
    Ok(())
}

/// Photon-number amplitudes of the beam splitter: `amps(m, n)[a]` is
/// ⟨a, m+n−a| B |m, n⟩.
struct SplitterTable {
    cols: usize,
    amps: Vec<Vec<Complex64>>,
}

impl SplitterTable {
    fn new(bs: &BeamSplitter, rows: usize, cols: usize) -> Self {
        let lf = LnFactorials::new(rows + cols);
        let mut amps = Vec::with_capacity(rows * cols);
        for m in 0..rows {
            for n in 0..cols {
                let total = m + n;
                let mut out = vec![ZERO; total + 1];
                // (t a† + i r b†)^m (i r a† + t b†)^n: j photons of the first
                // factor and k of the second land in output mode a.
                for j in 0..=m {
                    for k in 0..=n {
                        let a = j + k;
                        let ln_mag = lf.binomial(m, j)
                            + lf.binomial(n, k)
                            + 0.5 * (lf.get(a) + lf.get(total - a) - lf.get(m) - lf.get(n));
                        let r_pow = m - j + k;
                        let real = ln_mag.exp() * powi(bs.t, j + n - k) * powi(bs.r, r_pow);
                        out[a] += I.powu(r_pow as u32) * real;
                    }
                }
                amps.push(out);
            }
        }
        SplitterTable { cols, amps }
    }

    #[inline]
    fn get(&self, m: usize, n: usize) -> &[Complex64] {
        &self.amps[m * self.cols + n]
    }
}

fn check_pair(modes: usize, i: usize, j: usize) -> Result<()> {
    for index in [i, j] {
        if index >= modes {
            return Err(Error::ModeIndex { index, modes });
        }
    }
    if i == j {
        return Err(Error::ShapeMismatch(format!(
            "beam splitter needs two distinct modes, got {i} twice"
        )));
    }
    Ok(())
}

/// Largest n_i + n_j carried by a nonzero coefficient.
fn max_pair_photons(state: &MultiModeKet, i: usize, j: usize) -> usize {
    let mut occ = vec![0usize; state.modes()];
    let mut best = 0;
    for c in state.coeffs() {
        if *c != ZERO {
            best = best.max(occ[i] + occ[j]);
        }
        increment(&mut occ, state.cutoffs());
    }
    best
}

/// Cutoff that holds every photon number a splitter on modes (i, j) can
/// produce from `state`.
pub fn splitter_cutoff(state: &MultiModeKet, i: usize, j: usize) -> usize {
    let c = state.cutoffs();
    c[i].max(c[j]).max(max_pair_photons(state, i, j) + 1)
}

/// Applies the beam splitter to modes `i` (first input/output port) and `j`
/// (second port) of a register. Both modes are resized to a common cutoff
/// large enough for the largest photon number the input carries on the
/// pair, so the map is exactly unitary.
pub fn apply_bs(state: &MultiModeKet, i: usize, j: usize, bs: &BeamSplitter) -> Result<MultiModeKet> {
    check_pair(state.modes(), i, j)?;
    apply_bs_with_cutoff(state, i, j, bs, splitter_cutoff(state, i, j))
}

/// As [`apply_bs`] with an explicit common output cutoff for modes i and j.
/// Fails if the cutoff would drop amplitude.
pub fn apply_bs_with_cutoff(
    state: &MultiModeKet,
    i: usize,
    j: usize,
    bs: &BeamSplitter,
    cutoff: usize,
) -> Result<MultiModeKet> {
    check_pair(state.modes(), i, j)?;
    let need = max_pair_photons(state, i, j) + 1;
    if cutoff < need {
        return Err(Error::ShapeMismatch(format!(
            "cutoff {cutoff} cannot hold {} photons on modes ({i}, {j})",
            need - 1
        )));
    }
    let in_cutoffs = state.cutoffs();
    let table = SplitterTable::new(bs, in_cutoffs[i], in_cutoffs[j]);
    let mut out_cutoffs = in_cutoffs.to_vec();
    out_cutoffs[i] = cutoff;
    out_cutoffs[j] = cutoff;
    let out_strides = strides(&out_cutoffs);
    let mut out = vec![ZERO; out_cutoffs.iter().product()];

    let mut occ = vec![0usize; state.modes()];
    for c in state.coeffs() {
        if *c != ZERO {
            let (m, n) = (occ[i], occ[j]);
            let base: usize = occ
                .iter()
                .zip(&out_strides)
                .enumerate()
                .filter(|(l, _)| *l != i && *l != j)
                .map(|(_, (o, s))| o * s)
                .sum();
            let total = m + n;
            for (a, amp) in table.get(m, n).iter().enumerate() {
                out[base + a * out_strides[i] + (total - a) * out_strides[j]] += c * amp;
            }
        }
        increment(&mut occ, in_cutoffs);
    }
    Ok(MultiModeKet::from_parts(out_cutoffs, out, state.is_normalized()))
}

/// Multiplies the coefficient of every |…, n, …⟩ (n photons in `mode`) by
/// e^{i n φ}.
pub fn phase_shift(state: &MultiModeKet, mode: usize, phi: f64) -> Result<MultiModeKet> {
    state.check_mode(mode)?;
    let phases: Vec<Complex64> = (0..state.cutoffs()[mode])
        .map(|n| Complex64::from_polar(1.0, n as f64 * phi))
        .collect();
    let mut occ = vec![0usize; state.modes()];
    let coeffs = state
        .coeffs()
        .iter()
        .map(|c| {
            let v = c * phases[occ[mode]];
            increment(&mut occ, state.cutoffs());
            v
        })
        .collect();
    Ok(MultiModeKet::from_parts(
        state.cutoffs().to_vec(),
        coeffs,
        state.is_normalized(),
    ))
}

/// Sends a single-mode state into port 0 of the splitter with vacuum in
/// port 1. Output cutoffs equal the input cutoff on both modes.
pub fn inject(ket: &FockKet, bs: &BeamSplitter) -> Result<MultiModeKet> {
    if !ket.is_normalized() {
        return Err(Error::InvalidState("inject expects a normalized ket".into()));
    }
    let cutoff = ket.cutoff();
    let lf = LnFactorials::new(cutoff);
    let mut out = vec![ZERO; cutoff * cutoff];
    for (n, c) in ket.coeffs().iter().enumerate() {
        if *c == ZERO {
            continue;
        }
        // (t a† + i r b†)^n |0,0⟩ / √n!
        for l in 0..=n {
            let amp = (0.5 * lf.binomial(n, l)).exp() * powi(bs.t, n - l) * powi(bs.r, l);
            out[(n - l) * cutoff + l] += c * I.powu(l as u32) * amp;
        }
    }
    MultiModeKet::new(vec![cutoff, cutoff], out)
}

/// Closed-form amplitude of |n_a, n_b⟩ after an even cat state of real
/// amplitude α meets the splitter.
pub fn cat_split_coefficient(alpha: f64, bs: &BeamSplitter, n_a: usize, n_b: usize) -> Complex64 {
    if (n_a + n_b) % 2 == 1 {
        return ZERO;
    }
    let lf = LnFactorials::new(n_a.max(n_b) + 1);
    let a2 = alpha * alpha;
    let ln_cosh = a2 + (0.5 * (1.0 + (-2.0 * a2).exp())).ln();
    let scale = (-0.5 * (lf.get(n_a) + lf.get(n_b)) - 0.5 * ln_cosh).exp();
    let real = powi(bs.t * alpha, n_a) * powi(bs.r * alpha, n_b) * scale;
    I.powu(n_b as u32) * real
}

/// Closed-form amplitude of |n_a, n_b⟩ after a single-mode squeezed vacuum
/// meets the splitter:
///
/// ```text
/// [(n_a+n_b+1) mod 2] · (n_a+n_b)! / ((n_a+n_b)/2)!
///   · (t q)^{n_a} (i r q)^{n_b} / √(n_a! n_b! cosh ξ),   q = √(−tanh ξ / 2)
/// ```
///
/// with q = i√(tanh ξ / 2) for ξ > 0.
pub fn smsv_split_coefficient(xi: f64, bs: &BeamSplitter, n_a: usize, n_b: usize) -> Complex64 {
    let total = n_a + n_b;
    if total % 2 == 1 {
        return ZERO;
    }
    let half = total / 2;
    let lf = LnFactorials::new(total + 1);
    let tanh = xi.tanh();
    let ln_scale = lf.get(total) - lf.get(half) - 0.5 * (lf.get(n_a) + lf.get(n_b)) - 0.5 * xi.cosh().ln();
    // q^{n_a + n_b}: phase from the chosen branch, magnitude (|tanh ξ| / 2)^half.
    let q_pow = if tanh == 0.0 {
        if total == 0 { Complex64::new(1.0, 0.0) } else { ZERO }
    } else {
        let q_phase = if tanh > 0.0 { I } else { Complex64::new(1.0, 0.0) };
        q_phase.powu(total as u32) * (half as f64 * (0.5 * tanh.abs()).ln()).exp()
    };
    q_pow * ln_scale.exp() * powi(bs.t, n_a) * powi(bs.r, n_b) * I.powu(n_b as u32)
}

fn require_two_modes(state: &MultiModeKet) -> Result<()> {
    if state.modes() != 2 {
        return Err(Error::ShapeMismatch(format!(
            "expected a two-mode register, got {} modes",
            state.modes()
        )));
    }
    Ok(())
}

/// Unnormalized component of mode 0 given `n_b` photons in mode 1:
/// Σ_{n_a} c(n_a, n_b) |n_a⟩.
pub fn branch(two_mode: &MultiModeKet, n_b: usize) -> Result<FockKet> {
    require_two_modes(two_mode)?;
    FockKet::unnormalized(two_mode.slice_mode(1, n_b)?)
}

/// Reduced operator of the modes not listed in `traced`, with each traced
/// occupation pattern weighted by `weight` (1 for an ordinary partial trace).
pub fn reduce<W>(state: &MultiModeKet, traced: &[usize], weight: W) -> Result<DensityOperator>
where
    W: Fn(&[usize]) -> f64,
{
    for &m in traced {
        state.check_mode(m)?;
    }
    let kept: Vec<usize> = (0..state.modes()).filter(|m| !traced.contains(m)).collect();
    if kept.is_empty() || kept.len() > 2 {
        return Err(Error::ShapeMismatch(format!(
            "reduction would leave {} modes; density operators cover one or two",
            kept.len()
        )));
    }
    let cutoffs = state.cutoffs();
    let kept_dims: Vec<usize> = kept.iter().map(|&m| cutoffs[m]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&m| cutoffs[m]).collect();
    let kept_size: usize = kept_dims.iter().product();
    let traced_size: usize = traced_dims.iter().product();
    let kept_strides = strides(&kept_dims);
    let traced_strides = strides(&traced_dims);

    let mut sub = vec![ZERO; traced_size * kept_size];
    let mut occ = vec![0usize; state.modes()];
    for c in state.coeffs() {
        let k: usize = kept.iter().zip(&kept_strides).map(|(&m, s)| occ[m] * s).sum();
        let t: usize = traced.iter().zip(&traced_strides).map(|(&m, s)| occ[m] * s).sum();
        sub[t * kept_size + k] = *c;
        increment(&mut occ, cutoffs);
    }

    let mut rho = DensityOperator::zeros(kept_dims)?;
    let mut t_occ = vec![0usize; traced.len()];
    for t in 0..traced_size {
        let w = weight(&t_occ);
        let v = &sub[t * kept_size..(t + 1) * kept_size];
        if w != 0.0 && v.iter().any(|z| *z != ZERO) {
            rho.add_projector(w, v);
        }
        increment(&mut t_occ, &traced_dims);
    }
    Ok(rho)
}

/// Partial trace over one mode of a two- or three-mode register:
/// ρ = Σ_n ⟨n|ψ⟩⟨ψ|n⟩.
pub fn trace_out(state: &MultiModeKet, mode: usize) -> Result<DensityOperator> {
    reduce(state, &[mode], |_| 1.0)
}

/// Noiseless attenuation output: keeps only the zero-photon branch of mode 1.
pub fn herald_zero(two_mode: &MultiModeKet) -> Result<HeraldOutcome<FockKet>> {
    let b0 = branch(two_mode, 0)?;
    let probability = b0.norm_sqr();
    check_probability(probability)?;
    let (state, _) = b0.normalize()?;
    Ok(HeraldOutcome { state, probability })
}

/// Applies ν^n̂ and renormalizes.
pub fn nu_to_n(ket: &FockKet, nu: f64) -> Result<HeraldOutcome<FockKet>> {
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::ParameterRange {
            name: "nu",
            value: nu,
            range: "(0, 1]",
        });
    }
    if !ket.is_normalized() {
        return Err(Error::InvalidState("nu_to_n expects a normalized ket".into()));
    }
    let scaled: Vec<Complex64> = ket
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c * powi(nu, n))
        .collect();
    let raw = FockKet::unnormalized(scaled)?;
    let probability = raw.norm_sqr();
    check_probability(probability)?;
    let (state, _) = raw.normalize()?;
    Ok(HeraldOutcome { state, probability })
}

/// Heralding on "no click" from a detector of efficiency η watching mode 1:
/// each branch with n_b photons survives with probability (1 − η)^{n_b}.
pub fn herald_noclick(two_mode: &MultiModeKet, eta: f64) -> Result<HeraldOutcome<DensityOperator>> {
    check_range("eta", eta, 0.0, 1.0, "[0, 1]")?;
    require_two_modes(two_mode)?;
    let miss = 1.0 - eta;
    let rho = reduce(two_mode, &[1], |occ| powi(miss, occ[0]))?;
    let probability = rho.weight();
    check_probability(probability)?;
    Ok(HeraldOutcome {
        state: rho.normalized()?,
        probability,
    })
}

/// ρ → B ρ B† on the two modes of a two-mode operator. The output cutoff
/// covers the largest total photon number in the support of ρ.
pub fn apply_bs_density(rho: &DensityOperator, bs: &BeamSplitter) -> Result<DensityOperator> {
    if rho.modes() != 2 {
        return Err(Error::ShapeMismatch("two-mode operator required".into()));
    }
    let dims = rho.dims();
    let cutoff = dims[0].max(dims[1]).max(rho.max_total_photons() + 1);
    rho.conjugate_by(vec![cutoff, cutoff], |v| {
        apply_bs_with_cutoff(v, 0, 1, bs, cutoff)
    })
}

/// Phase e^{i n φ} on `mode` of a two-mode operator.
pub fn phase_shift_density(rho: &DensityOperator, mode: usize, phi: f64) -> Result<DensityOperator> {
    rho.conjugate_by(rho.dims().to_vec(), |v| phase_shift(v, mode, phi))
}
