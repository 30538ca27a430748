//! Pure states in a truncated photon-number basis.
//!
//! Single-mode states are [`FockKet`]s, registers of two or more modes are
//! [`MultiModeKet`]s stored as a row-major coefficient tensor (last mode
//! fastest). Both carry an explicit normalization flag: heralding branches
//! are legitimately unnormalized and keep their raw amplitudes until a
//! herald outcome renormalizes them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::math::{ln_factorial, tail_start, LnFactorials};

/// Largest squared norm accepted for any ket.
pub const NORM_CEILING: f64 = 1.0 + 1e-12;
/// Tolerance for a ket to count as normalized.
pub const NORMALIZED_TOL: f64 = 1e-9;
/// Probability allowed in the top tenth of the retained photon numbers.
pub const TAIL_LIMIT: f64 = 1e-6;

/// Single-mode default cutoff.
pub const DEFAULT_CUTOFF: usize = 20;
/// Per-mode default cutoff for multimode registers.
pub const DEFAULT_MULTIMODE_CUTOFF: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Read access shared by single- and multimode kets.
pub trait Ket {
    /// Per-mode cutoffs.
    fn shape(&self) -> Vec<usize>;
    /// Coefficients in row-major order.
    fn amplitudes(&self) -> &[Complex64];
    fn is_normalized(&self) -> bool;

    fn norm_sqr(&self) -> f64 {
        self.amplitudes().iter().map(|c| c.norm_sqr()).sum()
    }
}

/// ⟨a|b⟩ for kets of identical shape.
pub fn overlap<K: Ket + ?Sized>(a: &K, b: &K) -> Result<Complex64> {
    let (sa, sb) = (a.shape(), b.shape());
    if sa != sb {
        return Err(Error::ShapeMismatch(format!(
            "overlap between shapes {sa:?} and {sb:?}"
        )));
    }
    Ok(a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .fold(ZERO, |acc, (x, y)| acc + x.conj() * y))
}

fn validate_amplitudes(coeffs: &[Complex64]) -> Result<f64> {
    if coeffs.is_empty() {
        return Err(Error::InvalidState("no coefficients".into()));
    }
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidState("non-finite coefficient".into()));
    }
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if norm > NORM_CEILING {
        return Err(Error::InvalidState(format!(
            "squared norm {norm} exceeds 1"
        )));
    }
    Ok(norm)
}

fn check_tail(tail: f64, cutoff: usize) -> Result<()> {
    if tail < TAIL_LIMIT {
        Ok(())
    } else {
        Err(Error::TailTooLarge {
            tail,
            limit: TAIL_LIMIT,
            cutoff,
        })
    }
}

fn renormalize(coeffs: &mut [Complex64]) {
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in coeffs.iter_mut() {
        *c /= norm;
    }
}

/// ln cosh(y) without overflow for large |y|.
fn ln_cosh(y: f64) -> f64 {
    let a = y.abs();
    a + (0.5 * (1.0 + (-2.0 * a).exp())).ln()
}

/// Single-mode pure state `Σ c_n |n⟩` for n < cutoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KetRecord", into = "KetRecord")]
pub struct FockKet {
    coeffs: Vec<Complex64>,
    normalized: bool,
}

impl FockKet {
    /// Wraps raw coefficients; the ket is labeled normalized when its squared
    /// norm is within 1e-9 of one.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        let norm = validate_amplitudes(&coeffs)?;
        Ok(FockKet {
            coeffs,
            normalized: (norm - 1.0).abs() < NORMALIZED_TOL,
        })
    }

    /// Wraps coefficients that are explicitly an unnormalized branch.
    pub fn unnormalized(coeffs: Vec<Complex64>) -> Result<Self> {
        validate_amplitudes(&coeffs)?;
        Ok(FockKet {
            coeffs,
            normalized: false,
        })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn vacuum(cutoff: usize) -> Result<Self> {
        Self::number(0, cutoff)
    }

    /// The number state |n⟩.
    pub fn number(n: usize, cutoff: usize) -> Result<Self> {
        if n >= cutoff {
            return Err(Error::PhotonNumber { n, cutoff });
        }
        let mut coeffs = vec![ZERO; cutoff];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self::new(coeffs)
    }

    /// Coherent state |α⟩ for real α, renormalized within the truncation.
    pub fn coherent(alpha: f64, cutoff: usize) -> Result<Self> {
        check_range("alpha", alpha, f64::MIN, f64::MAX, "the real line")?;
        check_cutoff(cutoff, 1)?;
        let ln_abs = alpha.abs().ln();
        let raw: Vec<Complex64> = (0..cutoff)
            .map(|n| {
                let mag = if alpha == 0.0 {
                    if n == 0 { 1.0 } else { 0.0 }
                } else {
                    (n as f64 * ln_abs - 0.5 * alpha * alpha - 0.5 * ln_factorial(n)).exp()
                };
                let sign = if alpha < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
                Complex64::new(sign * mag, 0.0)
            })
            .collect();
        Self::from_constructor(raw, false)
    }

    /// Even cat state (|α⟩ + |−α⟩)/N for real α. Odd coefficients are
    /// exactly zero.
    pub fn even_cat(alpha: f64, cutoff: usize) -> Result<Self> {
        check_range("alpha", alpha, f64::MIN, f64::MAX, "the real line")?;
        check_cutoff(cutoff, 1)?;
        let ln_abs = alpha.abs().ln();
        let ln_norm = 0.5 * ln_cosh(alpha * alpha);
        let raw: Vec<Complex64> = (0..cutoff)
            .map(|n| {
                if n % 2 == 1 {
                    return ZERO;
                }
                let mag = if alpha == 0.0 {
                    if n == 0 { 1.0 } else { 0.0 }
                } else {
                    (n as f64 * ln_abs - 0.5 * ln_factorial(n) - ln_norm).exp()
                };
                Complex64::new(mag, 0.0)
            })
            .collect();
        Self::from_constructor(raw, true)
    }

    /// Single-mode squeezed vacuum, squeezed along x for ξ > 0.
    pub fn smsv(xi: f64, cutoff: usize) -> Result<Self> {
        check_range("xi", xi, f64::MIN, f64::MAX, "the real line")?;
        check_cutoff(cutoff, 2)?;
        let tanh = xi.tanh();
        let ln_half_tanh = (0.5 * tanh.abs()).ln();
        let ln_norm = 0.5 * ln_cosh(xi);
        let table = LnFactorials::new(cutoff);
        let raw: Vec<Complex64> = (0..cutoff)
            .map(|m| {
                if m % 2 == 1 {
                    return ZERO;
                }
                let n = m / 2;
                let mag = if tanh == 0.0 {
                    if n == 0 { 1.0 } else { 0.0 }
                } else {
                    (0.5 * table.binomial(2 * n, n) + n as f64 * ln_half_tanh - ln_norm).exp()
                };
                // (−tanh ξ / 2)^n
                let sign = if tanh > 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
                Complex64::new(sign * mag, 0.0)
            })
            .collect();
        Self::from_constructor(raw, true)
    }

    /// `even_only` widens the tail window to the top two indices so that it
    /// always contains an index the state can occupy.
    fn from_constructor(mut raw: Vec<Complex64>, even_only: bool) -> Result<Self> {
        let cutoff = raw.len();
        let mut start = tail_start(cutoff);
        if even_only {
            start = start.min(cutoff.saturating_sub(2));
        }
        let tail: f64 = raw[start..].iter().map(|c| c.norm_sqr()).sum();
        check_tail(tail, cutoff)?;
        renormalize(&mut raw);
        Self::new(raw)
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        Ket::norm_sqr(self)
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Returns the renormalized ket together with the original squared norm.
    pub fn normalize(&self) -> Result<(FockKet, f64)> {
        let norm = self.norm_sqr();
        if norm <= 0.0 {
            return Err(Error::InvalidState("cannot normalize a zero ket".into()));
        }
        let scale = norm.sqrt();
        let coeffs = self.coeffs.iter().map(|c| c / scale).collect();
        Ok((FockKet::new(coeffs)?, norm))
    }

    /// Photon-number distribution |c_n|².
    pub fn probabilities(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }

    /// ⟨n̂⟩ of the renormalized state.
    pub fn mean_photon_number(&self) -> f64 {
        let norm = self.norm_sqr();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum::<f64>()
            / norm
    }

    pub fn overlap(&self, other: &FockKet) -> Result<Complex64> {
        overlap(self, other)
    }

    /// Pads with zeros or drops the highest photon numbers.
    pub fn with_cutoff(&self, cutoff: usize) -> Result<FockKet> {
        check_cutoff(cutoff, 1)?;
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(cutoff, ZERO);
        let norm = validate_amplitudes(&coeffs)?;
        Ok(FockKet {
            coeffs,
            normalized: self.normalized && (norm - 1.0).abs() < NORMALIZED_TOL,
        })
    }
}

impl Ket for FockKet {
    fn shape(&self) -> Vec<usize> {
        vec![self.coeffs.len()]
    }

    fn amplitudes(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn is_normalized(&self) -> bool {
        self.normalized
    }
}

fn check_cutoff(cutoff: usize, min: usize) -> Result<()> {
    if cutoff < min {
        return Err(Error::ParameterRange {
            name: "cutoff",
            value: cutoff as f64,
            range: if min == 1 { "cutoff >= 1" } else { "cutoff >= 2" },
        });
    }
    Ok(())
}

/// Pure state of k ≥ 2 modes as a row-major coefficient tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KetRecord", into = "KetRecord")]
pub struct MultiModeKet {
    cutoffs: Vec<usize>,
    coeffs: Vec<Complex64>,
    normalized: bool,
}

impl MultiModeKet {
    pub fn new(cutoffs: Vec<usize>, coeffs: Vec<Complex64>) -> Result<Self> {
        let norm = Self::validate(&cutoffs, &coeffs)?;
        Ok(MultiModeKet {
            cutoffs,
            coeffs,
            normalized: (norm - 1.0).abs() < NORMALIZED_TOL,
        })
    }

    pub fn unnormalized(cutoffs: Vec<usize>, coeffs: Vec<Complex64>) -> Result<Self> {
        Self::validate(&cutoffs, &coeffs)?;
        Ok(MultiModeKet {
            cutoffs,
            coeffs,
            normalized: false,
        })
    }

    fn validate(cutoffs: &[usize], coeffs: &[Complex64]) -> Result<f64> {
        if cutoffs.len() < 2 {
            return Err(Error::ShapeMismatch(format!(
                "a multimode ket needs at least 2 modes, got {}",
                cutoffs.len()
            )));
        }
        if cutoffs.contains(&0) {
            return Err(Error::ShapeMismatch("zero cutoff".into()));
        }
        let size: usize = cutoffs.iter().product();
        if size != coeffs.len() {
            return Err(Error::ShapeMismatch(format!(
                "cutoffs {cutoffs:?} need {size} coefficients, got {}",
                coeffs.len()
            )));
        }
        validate_amplitudes(coeffs)
    }

    /// |0,…,0⟩.
    pub fn vacuum(cutoffs: Vec<usize>) -> Result<Self> {
        let size: usize = cutoffs.iter().product();
        let mut coeffs = vec![ZERO; size];
        if size > 0 {
            coeffs[0] = Complex64::new(1.0, 0.0);
        }
        Self::new(cutoffs, coeffs)
    }

    /// Tensor product of single-mode kets, mode order as given.
    pub fn product(kets: &[&FockKet]) -> Result<Self> {
        let cutoffs: Vec<usize> = kets.iter().map(|k| k.cutoff()).collect();
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for ket in kets {
            coeffs = coeffs
                .iter()
                .flat_map(|a| ket.coeffs().iter().map(move |b| a * b))
                .collect();
        }
        let normalized = kets.iter().all(|k| k.is_normalized());
        let mut out = Self::new(cutoffs, coeffs)?;
        out.normalized &= normalized;
        Ok(out)
    }

    /// Two-mode squeezed vacuum `Σ (−tanh ξ)^n / cosh ξ |n⟩|n⟩`.
    pub fn tmsv(xi: f64, cutoff: usize) -> Result<Self> {
        check_range("xi", xi, f64::MIN, f64::MAX, "the real line")?;
        check_cutoff(cutoff, 1)?;
        let tanh = xi.tanh();
        let ln_norm = ln_cosh(xi);
        let mut coeffs = vec![ZERO; cutoff * cutoff];
        let mut tail = 0.0;
        for n in 0..cutoff {
            let mag = if tanh == 0.0 {
                if n == 0 { 1.0 } else { 0.0 }
            } else {
                (n as f64 * tanh.abs().ln() - ln_norm).exp()
            };
            let sign = if tanh > 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
            coeffs[n * cutoff + n] = Complex64::new(sign * mag, 0.0);
            if n >= tail_start(cutoff) {
                tail += mag * mag;
            }
        }
        check_tail(tail, cutoff)?;
        renormalize(&mut coeffs);
        Self::new(vec![cutoff, cutoff], coeffs)
    }

    pub fn modes(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        Ket::norm_sqr(self)
    }

    pub(crate) fn from_parts(cutoffs: Vec<usize>, coeffs: Vec<Complex64>, normalized: bool) -> Self {
        debug_assert_eq!(cutoffs.iter().product::<usize>(), coeffs.len());
        MultiModeKet {
            cutoffs,
            coeffs,
            normalized,
        }
    }

    /// Row-major strides.
    pub fn strides(&self) -> Vec<usize> {
        strides(&self.cutoffs)
    }

    /// Flat index of an occupation pattern.
    pub fn index_of(&self, occupation: &[usize]) -> Result<usize> {
        if occupation.len() != self.modes() {
            return Err(Error::ShapeMismatch(format!(
                "occupation {occupation:?} for a {}-mode ket",
                self.modes()
            )));
        }
        let mut idx = 0;
        for (&n, &c) in occupation.iter().zip(&self.cutoffs) {
            if n >= c {
                return Err(Error::PhotonNumber { n, cutoff: c });
            }
            idx = idx * c + n;
        }
        Ok(idx)
    }

    /// Coefficient of |n₁,…,n_k⟩; zero outside the truncation.
    pub fn get(&self, occupation: &[usize]) -> Complex64 {
        self.index_of(occupation)
            .map(|i| self.coeffs[i])
            .unwrap_or(ZERO)
    }

    /// Largest total photon number carried by a nonzero coefficient.
    pub fn max_total_photons(&self) -> usize {
        let mut best = 0;
        let mut occ = vec![0usize; self.modes()];
        for c in &self.coeffs {
            if *c != ZERO {
                best = best.max(occ.iter().sum());
            }
            increment(&mut occ, &self.cutoffs);
        }
        best
    }

    /// Pads with zeros or drops amplitudes beyond the new per-mode cutoffs.
    pub fn with_cutoffs(&self, cutoffs: &[usize]) -> Result<MultiModeKet> {
        if cutoffs.len() != self.modes() {
            return Err(Error::ShapeMismatch("mode count changes".into()));
        }
        let size: usize = cutoffs.iter().product();
        let mut coeffs = vec![ZERO; size];
        let mut occ = vec![0usize; self.modes()];
        let out_strides = strides(cutoffs);
        for c in &self.coeffs {
            if occ.iter().zip(cutoffs).all(|(n, c)| n < c) {
                let idx: usize = occ.iter().zip(&out_strides).map(|(n, s)| n * s).sum();
                coeffs[idx] = *c;
            }
            increment(&mut occ, &self.cutoffs);
        }
        let norm = validate_amplitudes(&coeffs)?;
        Ok(MultiModeKet {
            cutoffs: cutoffs.to_vec(),
            coeffs,
            normalized: self.normalized && (norm - 1.0).abs() < NORMALIZED_TOL,
        })
    }

    /// Appends a vacuum mode with cutoff 1 (it grows when a beam splitter
    /// couples light into it).
    pub fn with_vacuum_mode(&self) -> MultiModeKet {
        let mut cutoffs = self.cutoffs.clone();
        cutoffs.push(1);
        MultiModeKet {
            cutoffs,
            coeffs: self.coeffs.clone(),
            normalized: self.normalized,
        }
    }

    pub fn overlap(&self, other: &MultiModeKet) -> Result<Complex64> {
        overlap(self, other)
    }

    /// Projects `mode` onto |n⟩ and removes it, without renormalizing.
    /// The result must keep at least two modes; use
    /// [`crate::channels::branch`] for the two-mode case.
    pub fn project_mode(&self, mode: usize, n: usize) -> Result<MultiModeKet> {
        self.check_mode(mode)?;
        if self.modes() < 3 {
            return Err(Error::ShapeMismatch(
                "projection would leave a single mode; use branch".into(),
            ));
        }
        let coeffs = self.slice_mode(mode, n)?;
        let mut cutoffs = self.cutoffs.clone();
        cutoffs.remove(mode);
        Ok(MultiModeKet::from_parts(cutoffs, coeffs, false))
    }

    /// Coefficients with `mode` fixed to `n`, in row-major order of the
    /// remaining modes.
    pub(crate) fn slice_mode(&self, mode: usize, n: usize) -> Result<Vec<Complex64>> {
        let cutoff = self.cutoffs[mode];
        if n >= cutoff {
            return Err(Error::PhotonNumber { n, cutoff });
        }
        let inner: usize = self.cutoffs[mode + 1..].iter().product();
        let outer: usize = self.cutoffs[..mode].iter().product();
        let mut out = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            let base = (o * cutoff + n) * inner;
            out.extend_from_slice(&self.coeffs[base..base + inner]);
        }
        Ok(out)
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes() {
            return Err(Error::ModeIndex {
                index: mode,
                modes: self.modes(),
            });
        }
        Ok(())
    }

    /// Mean photon number in one mode, for the renormalized state.
    pub fn mean_photon_number(&self, mode: usize) -> Result<f64> {
        self.check_mode(mode)?;
        let mut occ = vec![0usize; self.modes()];
        let mut acc = 0.0;
        for c in &self.coeffs {
            acc += occ[mode] as f64 * c.norm_sqr();
            increment(&mut occ, &self.cutoffs);
        }
        Ok(acc / self.norm_sqr())
    }
}

impl Ket for MultiModeKet {
    fn shape(&self) -> Vec<usize> {
        self.cutoffs.clone()
    }

    fn amplitudes(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn is_normalized(&self) -> bool {
        self.normalized
    }
}

pub(crate) fn strides(cutoffs: &[usize]) -> Vec<usize> {
    let mut s = vec![1; cutoffs.len()];
    for i in (0..cutoffs.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * cutoffs[i + 1];
    }
    s
}

/// Advances a row-major occupation counter.
pub(crate) fn increment(occ: &mut [usize], cutoffs: &[usize]) {
    for i in (0..occ.len()).rev() {
        occ[i] += 1;
        if occ[i] < cutoffs[i] {
            return;
        }
        occ[i] = 0;
    }
}

/// JSON wire form shared by every ket:
/// `{ "modes", "cutoffs", "coeffs": [[re, im], ...], "normalized" }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KetRecord {
    pub modes: usize,
    pub cutoffs: Vec<usize>,
    pub coeffs: Vec<[f64; 2]>,
    pub normalized: bool,
}

impl KetRecord {
    fn amplitudes(&self) -> Result<Vec<Complex64>> {
        if self.modes != self.cutoffs.len() {
            return Err(Error::ShapeMismatch(format!(
                "modes = {} but {} cutoffs given",
                self.modes,
                self.cutoffs.len()
            )));
        }
        Ok(self
            .coeffs
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect())
    }

    fn check_flag(&self, normalized: bool) -> Result<()> {
        if self.normalized && !normalized {
            return Err(Error::InvalidState(
                "record is labeled normalized but its norm differs from 1".into(),
            ));
        }
        Ok(())
    }
}

fn record(cutoffs: Vec<usize>, coeffs: &[Complex64], normalized: bool) -> KetRecord {
    KetRecord {
        modes: cutoffs.len(),
        cutoffs,
        coeffs: coeffs.iter().map(|c| [c.re, c.im]).collect(),
        normalized,
    }
}

impl From<FockKet> for KetRecord {
    fn from(k: FockKet) -> Self {
        record(vec![k.cutoff()], &k.coeffs, k.normalized)
    }
}

impl TryFrom<KetRecord> for FockKet {
    type Error = Error;

    fn try_from(r: KetRecord) -> Result<Self> {
        if r.modes != 1 {
            return Err(Error::ShapeMismatch(format!(
                "expected a single-mode record, got {} modes",
                r.modes
            )));
        }
        let coeffs = r.amplitudes()?;
        if coeffs.len() != r.cutoffs[0] {
            return Err(Error::ShapeMismatch("coefficient count differs from cutoff".into()));
        }
        let ket = FockKet::new(coeffs)?;
        r.check_flag(ket.normalized)?;
        Ok(FockKet {
            normalized: r.normalized,
            ..ket
        })
    }
}

impl From<MultiModeKet> for KetRecord {
    fn from(k: MultiModeKet) -> Self {
        record(k.cutoffs.clone(), &k.coeffs, k.normalized)
    }
}

impl TryFrom<KetRecord> for MultiModeKet {
    type Error = Error;

    fn try_from(r: KetRecord) -> Result<Self> {
        let coeffs = r.amplitudes()?;
        let ket = MultiModeKet::new(r.cutoffs.clone(), coeffs)?;
        r.check_flag(ket.normalized)?;
        Ok(MultiModeKet {
            normalized: r.normalized,
            ..ket
        })
    }
}

/// Probability a coherent state of amplitude α puts in the tail window of
/// `cutoff`, before renormalization. Lets configuration checks predict a
/// constructor failure without building the state.
pub fn coherent_tail_mass(alpha: f64, cutoff: usize) -> f64 {
    (tail_start(cutoff)..cutoff)
        .map(|n| {
            if alpha == 0.0 {
                if n == 0 { 1.0 } else { 0.0 }
            } else {
                (2.0 * n as f64 * alpha.abs().ln() - alpha * alpha - ln_factorial(n)).exp()
            }
        })
        .sum()
}

/// ⟨α|β⟩ for real amplitudes, untruncated.
pub fn coherent_overlap_exact(alpha: f64, beta: f64) -> f64 {
    (-0.5 * (alpha - beta) * (alpha - beta)).exp()
}
