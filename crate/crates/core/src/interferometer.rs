//! Mach-Zehnder interferometer fed by a two-mode squeezed vacuum.
//!
//! The first balanced beam splitter turns the pair source into one squeezed
//! beam per arm. Each arm passes an attenuator that keeps amplitude κ and
//! couples √(1 − κ²) into an auxiliary mode; the auxiliary mode is traced,
//! heralded on zero photons, or weighted by a no-click detector of
//! efficiency η. A phase shift on one arm and a second balanced beam
//! splitter close the interferometer, and the curve records the probability
//! of exactly one photon in each output port.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channels::{
    apply_bs, apply_bs_density, phase_shift, phase_shift_density, BeamSplitter, HERALD_FLOOR,
};
use crate::density::DensityOperator;
use crate::error::{check_range, Error, Result};
use crate::fock::{FockKet, MultiModeKet};
use crate::math::powi;
use crate::output::sci;

/// Per-mode cutoff of the pair source.
pub const DEFAULT_MZI_CUTOFF: usize = 10;

/// How the auxiliary mode of each arm attenuator is resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArmResolution {
    /// Partial trace.
    Ordinary,
    /// Keep only runs with zero photons in both auxiliary modes.
    Heralded,
    /// Keep runs where neither auxiliary detector clicks; a detector of
    /// efficiency η misses n photons with probability (1 − η)^n.
    Efficiency { eta: f64 },
}

impl ArmResolution {
    fn weight(&self, lost: usize) -> f64 {
        match *self {
            ArmResolution::Ordinary => 1.0,
            ArmResolution::Heralded => (lost == 0) as u8 as f64,
            ArmResolution::Efficiency { eta } => powi(1.0 - eta, lost),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ArmResolution::Ordinary => "ordinary",
            ArmResolution::Heralded => "heralded",
            ArmResolution::Efficiency { .. } => "efficiency",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MziConfig {
    /// Squeezing of the pair source.
    pub xi: f64,
    /// Amplitude κ each arm attenuator keeps in the interferometer.
    pub keep: f64,
    pub resolution: ArmResolution,
    /// Number of phases, uniform on [0, 2π).
    pub phase_samples: usize,
    /// Per-mode cutoff of the pair source.
    pub cutoff: usize,
    /// Arm (0 or 1) carrying the phase shift.
    pub phase_arm: usize,
}

impl Default for MziConfig {
    fn default() -> Self {
        MziConfig {
            xi: 0.5,
            keep: std::f64::consts::FRAC_1_SQRT_2,
            resolution: ArmResolution::Ordinary,
            phase_samples: 64,
            cutoff: DEFAULT_MZI_CUTOFF,
            phase_arm: 1,
        }
    }
}

impl MziConfig {
    pub fn validate(&self) -> Result<()> {
        check_range("xi", self.xi, f64::MIN, f64::MAX, "the real line")?;
        check_range("keep", self.keep, 0.0, 1.0, "[0, 1]")?;
        if let ArmResolution::Efficiency { eta } = self.resolution {
            check_range("eta", eta, 0.0, 1.0, "[0, 1]")?;
        }
        if self.phase_samples < 8 {
            return Err(Error::ParameterRange {
                name: "phase_samples",
                value: self.phase_samples as f64,
                range: "at least 8",
            });
        }
        if self.phase_arm > 1 {
            return Err(Error::ModeIndex {
                index: self.phase_arm,
                modes: 2,
            });
        }
        Ok(())
    }

    pub fn with_resolution(&self, resolution: ArmResolution) -> Self {
        MziConfig {
            resolution,
            ..self.clone()
        }
    }

    /// φ_j = 2πj / phase_samples.
    pub fn phases(&self) -> Vec<f64> {
        (0..self.phase_samples)
            .map(|j| 2.0 * PI * j as f64 / self.phase_samples as f64)
            .collect()
    }
}

/// Output state conditioned on accepted heralds.
#[derive(Debug, Clone, PartialEq)]
pub struct MziOutput {
    pub state: DensityOperator,
    pub herald_probability: f64,
}

/// The interferometer up to the phase shift, which is all that depends on
/// the resolution of the auxiliary modes.
#[derive(Debug, Clone)]
pub struct Interferometer {
    config: MziConfig,
    arms: DensityOperator,
    herald_probability: f64,
}

/// Attenuates `arm` of a two-mode ket and returns the unnormalized branch
/// for every auxiliary photon number with nonzero weight.
fn attenuate(
    state: &MultiModeKet,
    arm: usize,
    splitter: &BeamSplitter,
    resolution: &ArmResolution,
) -> Result<Vec<(usize, MultiModeKet)>> {
    let coupled = apply_bs(&state.with_vacuum_mode(), arm, 2, splitter)?;
    (0..coupled.cutoffs()[2])
        .filter(|&l| resolution.weight(l) != 0.0)
        .map(|l| Ok((l, coupled.project_mode(2, l)?)))
        .collect()
}

impl Interferometer {
    pub fn new(config: MziConfig) -> Result<Self> {
        config.validate()?;
        let source = MultiModeKet::tmsv(config.xi, config.cutoff)?;
        let split = apply_bs(&source, 0, 1, &BeamSplitter::balanced())?;
        let attenuator = BeamSplitter::with_transmission(config.keep)?;
        let resolution = config.resolution;

        let mut arms = DensityOperator::zeros(split.cutoffs().to_vec())?;
        for (l, first) in attenuate(&split, 0, &attenuator, &resolution)? {
            for (m, both) in attenuate(&first, 1, &attenuator, &resolution)? {
                let w = resolution.weight(l + m);
                if w != 0.0 {
                    arms.add_projector(w, both.coeffs());
                }
            }
        }
        let herald_probability = arms.weight();
        if herald_probability < HERALD_FLOOR {
            return Err(Error::ZeroProbabilityHerald(herald_probability));
        }
        Ok(Interferometer {
            arms: arms.normalized()?,
            herald_probability,
            config,
        })
    }

    pub fn config(&self) -> &MziConfig {
        &self.config
    }

    /// Probability that the auxiliary modes give an accepted outcome.
    pub fn herald_probability(&self) -> f64 {
        self.herald_probability
    }

    /// Normalized two-mode state entering the phase shifter.
    pub fn arms(&self) -> &DensityOperator {
        &self.arms
    }

    /// Normalized two-mode state in the output ports at phase `phi`.
    pub fn output(&self, phi: f64) -> Result<DensityOperator> {
        let shifted = phase_shift_density(&self.arms, self.config.phase_arm, phi)?;
        apply_bs_density(&shifted, &BeamSplitter::balanced())
    }

    /// ⟨1,1|B P(φ) ρ P(φ)† B†|1,1⟩ evaluated as w†ρw with w = P(φ)† B†|1,1⟩,
    /// which has support on total photon number 2 only.
    pub fn coincidence(&self, phi: f64) -> Result<f64> {
        let one = FockKet::number(1, 2)?;
        let probe = MultiModeKet::product(&[&one, &one])?;
        let back = apply_bs(&probe, 0, 1, &BeamSplitter::balanced().adjoint())?;
        let w = phase_shift(&back, self.config.phase_arm, -phi)?;
        let support: Vec<([usize; 2], Complex64)> = (0..3)
            .map(|n| [n, 2 - n])
            .map(|occ| (occ, w.get(&occ)))
            .filter(|(_, a)| *a != Complex64::new(0.0, 0.0))
            .collect();
        let mut p = Complex64::new(0.0, 0.0);
        for (bra, a) in &support {
            for (ket, b) in &support {
                p += a.conj() * self.arms.element(bra, ket) * b;
            }
        }
        Ok(p.re)
    }

    pub fn sweep(&self) -> Result<InterferenceCurve> {
        let phi = self.config.phases();
        let probability = phi
            .par_iter()
            .map(|&p| self.coincidence(p))
            .collect::<Result<Vec<f64>>>()?;
        InterferenceCurve::new(phi, probability)
    }
}

pub fn mzi_output(config: &MziConfig, phi: f64) -> Result<MziOutput> {
    let mzi = Interferometer::new(config.clone())?;
    Ok(MziOutput {
        state: mzi.output(phi)?,
        herald_probability: mzi.herald_probability(),
    })
}

/// ⟨1,1|ρ|1,1⟩ for a normalized two-mode operator.
pub fn coincidence_probability(rho: &DensityOperator) -> Result<f64> {
    if rho.modes() != 2 {
        return Err(Error::ShapeMismatch("coincidences need a two-mode operator".into()));
    }
    if (rho.weight() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!(
            "operator has weight {}, expected 1",
            rho.weight()
        )));
    }
    Ok(rho.element(&[1, 1], &[1, 1]).re)
}

/// Coincidence probability per accepted event against the phase.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceCurve {
    phi: Vec<f64>,
    probability: Vec<f64>,
}

impl InterferenceCurve {
    pub fn new(phi: Vec<f64>, probability: Vec<f64>) -> Result<Self> {
        if phi.len() != probability.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} phases and {} probabilities",
                phi.len(),
                probability.len()
            )));
        }
        if let Some(p) = probability.iter().find(|p| !(-1e-12..=1.0 + 1e-12).contains(*p)) {
            return Err(Error::InvalidState(format!("coincidence probability {p} outside [0, 1]")));
        }
        Ok(InterferenceCurve { phi, probability })
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn probability(&self) -> &[f64] {
        &self.probability
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "phi,p_coincidence")?;
        for (phi, p) in self.phi.iter().zip(&self.probability) {
            writeln!(out, "{},{}", sci(*phi), sci(*p))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

pub fn phase_sweep(config: &MziConfig) -> Result<InterferenceCurve> {
    Interferometer::new(config.clone())?.sweep()
}

/// (max − min)/(max + min) over the samples; 0 for an identically zero curve.
pub fn visibility(curve: &InterferenceCurve) -> Result<f64> {
    if curve.is_empty() {
        return Err(Error::Empty("interference curve"));
    }
    let max = curve.probability.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = curve.probability.iter().copied().fold(f64::INFINITY, f64::min);
    if max + min == 0.0 {
        return Ok(0.0);
    }
    Ok((max - min) / (max + min))
}

/// One row per detector efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyPoint {
    pub eta: f64,
    pub visibility: f64,
    pub herald_probability: f64,
}

/// Visibility of the no-click-conditioned sweep for each η.
pub fn visibility_vs_efficiency(template: &MziConfig, etas: &[f64]) -> Result<Vec<EfficiencyPoint>> {
    etas.par_iter()
        .map(|&eta| {
            let mzi = Interferometer::new(template.with_resolution(ArmResolution::Efficiency { eta }))?;
            Ok(EfficiencyPoint {
                eta,
                visibility: visibility(&mzi.sweep()?)?,
                herald_probability: mzi.herald_probability(),
            })
        })
        .collect()
}

pub fn write_efficiency_csv<W: Write>(table: &[EfficiencyPoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "eta,visibility")?;
    for row in table {
        writeln!(out, "{},{}", sci(row.eta), sci(row.visibility))?;
    }
    Ok(())
}
