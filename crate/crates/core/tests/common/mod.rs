//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use fock_attenuation::channels::{apply_bs, phase_shift, reduce};
use fock_attenuation::interferometer::ArmResolution;
use fock_attenuation::{BeamSplitter, DensityOperator, FockKet, MultiModeKet};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Normalized ket with Gaussian-distributed complex amplitudes.
pub fn random_ket(rng: &mut ChaCha8Rng, cutoff: usize) -> FockKet {
    let raw: Vec<Complex64> = (0..cutoff)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    FockKet::new(raw.into_iter().map(|z| z / norm).collect()).unwrap()
}

/// ψ_n(x) from explicit physicists' Hermite polynomials and factorials.
pub fn hermite_wavefunction(n: usize, x: f64) -> f64 {
    let mut h = (1.0, 2.0 * x);
    let hn = match n {
        0 => 1.0,
        1 => h.1,
        _ => {
            for k in 1..n {
                h = (h.1, 2.0 * x * h.1 - 2.0 * k as f64 * h.0);
            }
            h.1
        }
    };
    hn * (-0.5 * x * x).exp() / (2f64.powi(n as i32) * factorial(n) * PI.sqrt()).sqrt()
}

/// W(x, p) = (1/2π) ∫ dy e^{−ipy} ψ*(x − y/2) ψ(x + y/2) by a Riemann sum on
/// y ∈ [−30, 30], step 0.05.
pub fn quadrature_wigner(coeffs: &[Complex64], x: f64, p: f64) -> f64 {
    let psi = |q: f64| -> Complex64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(n, cn)| cn * hermite_wavefunction(n, q))
            .sum()
    };
    let h = 0.05;
    let mut acc = c(0.0, 0.0);
    for i in -600..=600 {
        let y = i as f64 * h;
        acc += Complex64::from_polar(1.0, -p * y) * psi(x - 0.5 * y).conj() * psi(x + 0.5 * y);
    }
    (acc * h / (2.0 * PI)).re
}

/// |n⟩|0⟩ → (t a† + i r b†)^n |0,0⟩ / √n!, expanded term by term.
pub fn binomial_split(input: &[f64], t: f64, r: f64, n_a: usize, n_b: usize) -> Complex64 {
    let n = n_a + n_b;
    if n >= input.len() {
        return c(0.0, 0.0);
    }
    let amp = input[n] / factorial(n).sqrt()
        * binomial(n, n_b)
        * t.powi(n_a as i32)
        * r.powi(n_b as i32)
        * (factorial(n_a) * factorial(n_b)).sqrt();
    c(0.0, 1.0).powu(n_b as u32) * amp
}

/// Even cat coefficients 2e^{−α²/2} α^n / √n! / √(2(1 + e^{−2α²})) for even n.
pub fn cat_coefficients(alpha: f64, len: usize) -> Vec<f64> {
    let norm = (2.0 * (1.0 + (-2.0 * alpha * alpha).exp())).sqrt();
    (0..len)
        .map(|n| {
            if n % 2 == 1 {
                0.0
            } else {
                2.0 * (-0.5 * alpha * alpha).exp() * alpha.powi(n as i32) / factorial(n).sqrt() / norm
            }
        })
        .collect()
}

/// Squeezed vacuum coefficients √((2n)!)/(n! 2^n) (−tanh ξ)^n / √cosh ξ at 2n.
pub fn smsv_coefficients(xi: f64, len: usize) -> Vec<f64> {
    (0..len)
        .map(|m| {
            if m % 2 == 1 {
                return 0.0;
            }
            let n = m / 2;
            factorial(m).sqrt() / (factorial(n) * 2f64.powi(n as i32)) * (-xi.tanh()).powi(n as i32)
                / xi.cosh().sqrt()
        })
        .collect()
}

/// Interferometer with both auxiliary modes kept to the end: modes are
/// (arm 1, arm 2, aux 1, aux 2).
pub struct FourModeOracle {
    state: MultiModeKet,
    resolution: ArmResolution,
}

impl FourModeOracle {
    pub fn new(xi: f64, keep: f64, cutoff: usize, resolution: ArmResolution) -> Self {
        let bs = BeamSplitter::balanced();
        let att = BeamSplitter::with_transmission(keep).unwrap();
        let source = MultiModeKet::tmsv(xi, cutoff).unwrap();
        let mut s = apply_bs(&source, 0, 1, &bs).unwrap();
        s = apply_bs(&s.with_vacuum_mode(), 0, 2, &att).unwrap();
        s = apply_bs(&s.with_vacuum_mode(), 1, 3, &att).unwrap();
        FourModeOracle { state: s, resolution }
    }

    pub fn output(&self, phi: f64) -> DensityOperator {
        let s = phase_shift(&self.state, 1, phi).unwrap();
        let s = apply_bs(&s, 0, 1, &BeamSplitter::balanced()).unwrap();
        let res = self.resolution;
        let weight = move |occ: &[usize]| {
            let lost = occ[0] + occ[1];
            match res {
                ArmResolution::Ordinary => 1.0,
                ArmResolution::Heralded => (lost == 0) as u8 as f64,
                ArmResolution::Efficiency { eta } => (1.0 - eta).powi(lost as i32),
            }
        };
        reduce(&s, &[2, 3], weight).unwrap().normalized().unwrap()
    }

    pub fn coincidence(&self, phi: f64) -> f64 {
        self.output(phi).element(&[1, 1], &[1, 1]).re
    }

    /// Same probability read straight off the four-mode amplitudes:
    /// Σ_{l,m} w(l+m)|⟨1,1,l,m|ψ⟩|² / Σ_{l,m} w(l+m) Σ_{a,b}|⟨a,b,l,m|ψ⟩|².
    pub fn coincidence_direct(&self, phi: f64) -> f64 {
        let s = phase_shift(&self.state, 1, phi).unwrap();
        let s = apply_bs(&s, 0, 1, &BeamSplitter::balanced()).unwrap();
        let dims = s.cutoffs().to_vec();
        let (mut hit, mut total) = (0.0, 0.0);
        for (idx, amp) in s.coeffs().iter().enumerate() {
            let m = idx % dims[3];
            let l = (idx / dims[3]) % dims[2];
            let b = (idx / (dims[3] * dims[2])) % dims[1];
            let a = idx / (dims[3] * dims[2] * dims[1]);
            let w = match self.resolution {
                ArmResolution::Ordinary => 1.0,
                ArmResolution::Heralded => (l + m == 0) as u8 as f64,
                ArmResolution::Efficiency { eta } => (1.0 - eta).powi((l + m) as i32),
            };
            let p = w * amp.norm_sqr();
            total += p;
            if a == 1 && b == 1 {
                hit += p;
            }
        }
        hit / total
    }
}
