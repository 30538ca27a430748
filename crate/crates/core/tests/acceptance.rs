//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::f64::consts::{FRAC_1_PI, FRAC_1_SQRT_2};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::{binomial_split, cat_coefficients, quadrature_wigner, random_ket, smsv_coefficients, FourModeOracle};
use fock_attenuation::channels::{
    cat_split_coefficient, herald_noclick, herald_zero, inject, nu_to_n, smsv_split_coefficient, trace_out,
};
use fock_attenuation::interferometer::{visibility, visibility_vs_efficiency, ArmResolution, Interferometer, MziConfig};
use fock_attenuation::wigner::{fit_gaussian, negativity_volume, wigner_density, wigner_pure};
use fock_attenuation::{BeamSplitter, DensityOperator, FockKet, PhaseSpaceGrid, WignerGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ordinary visibility at ξ = 0.5, κ = √0.5, 64 phases, pinned by the
/// four-mode oracle.
const ORDINARY_VISIBILITY: f64 = 0.903525085118452;

const CUTOFF: usize = 20;
const ETAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn xi_smsv() -> f64 {
    3f64.sqrt().ln()
}

fn half() -> BeamSplitter {
    BeamSplitter::balanced()
}

fn smsv_baseline() -> Outcome {
    let w = wigner_pure(&FockKet::smsv(xi_smsv(), CUTOFF).unwrap(), &PhaseSpaceGrid::default()).unwrap();
    let fit = fit_gaussian(&w).unwrap();
    check(
        within(fit.s, 3.0, 0.02) && within(fit.sigma, 0.707, 0.005),
        format!("s = {:.5}, sigma = {:.5}", fit.s, fit.sigma),
    )
}

fn ordinary_fit() -> Outcome {
    let xi = xi_smsv();
    let split = inject(&FockKet::smsv(xi, CUTOFF).unwrap(), &half()).unwrap();
    let w = wigner_density(&trace_out(&split, 1).unwrap(), &PhaseSpaceGrid::default()).unwrap();
    let fit = fit_gaussian(&w).unwrap();
    // V' = t²V + r²/2 with V_x = e^{−2ξ}/2, V_p = e^{2ξ}/2.
    let vx = 0.5 * 0.5 * (-2.0 * xi).exp() + 0.25;
    let vp = 0.5 * 0.5 * (2.0 * xi).exp() + 0.25;
    let (s_pred, sigma_pred) = ((vp / vx).sqrt(), (vx * vp).powf(0.25));
    check(
        within(fit.sigma, 0.759, 0.005)
            && within(fit.s, 1.732, 0.02)
            && within(fit.s / s_pred, 1.0, 0.005)
            && within(fit.sigma / sigma_pred, 1.0, 0.005),
        format!(
            "s = {:.5} (loss channel {s_pred:.5}), sigma = {:.5} (loss channel {sigma_pred:.5})",
            fit.s, fit.sigma
        ),
    )
}

fn heralded_fit() -> Outcome {
    let xi = xi_smsv();
    let split = inject(&FockKet::smsv(xi, CUTOFF).unwrap(), &half()).unwrap();
    let state = herald_zero(&split).unwrap().state;
    let fit = fit_gaussian(&wigner_pure(&state, &PhaseSpaceGrid::default()).unwrap()).unwrap();
    // c₂/c₀ = −tanh ξ′ / √2 for a squeezed vacuum.
    let tanh_out = -(state.coeff(2) / state.coeff(0)).re * 2f64.sqrt();
    check(
        within(fit.sigma, 0.707, 0.005) && within(fit.s, 1.667, 0.02) && within(tanh_out, 0.5 * xi.tanh(), 1e-6),
        format!(
            "s = {:.5}, sigma = {:.5}, tanh xi' = {tanh_out:.9} vs {:.9}",
            fit.s,
            fit.sigma,
            0.5 * xi.tanh()
        ),
    )
}

fn heralded_cat() -> FockKet {
    let split = inject(&FockKet::even_cat(2.0, CUTOFF).unwrap(), &half()).unwrap();
    herald_zero(&split).unwrap().state
}

fn cat_equivalence() -> Outcome {
    let got = heralded_cat();
    let want = FockKet::even_cat(2f64.sqrt(), CUTOFF).unwrap();
    let fidelity = got.overlap(&want).unwrap().norm_sqr();
    let grid = PhaseSpaceGrid::default();
    let diff = wigner_pure(&got, &grid)
        .unwrap()
        .max_abs_diff(&wigner_pure(&want, &grid).unwrap())
        .unwrap();
    check(
        fidelity >= 1.0 - 1e-8 && diff <= 1e-6,
        format!("overlap^2 = 1 - {:.3e}, max |dW| = {diff:.3e}", 1.0 - fidelity),
    )
}

fn mzi_visibility() -> Outcome {
    let ordinary = MziConfig::default();
    let heralded = ordinary.with_resolution(ArmResolution::Heralded);
    let v_ord = visibility(&Interferometer::new(ordinary.clone()).unwrap().sweep().unwrap()).unwrap();
    let v_her = visibility(&Interferometer::new(heralded).unwrap().sweep().unwrap()).unwrap();

    let oracle = FourModeOracle::new(ordinary.xi, ordinary.keep, ordinary.cutoff, ArmResolution::Ordinary);
    let probs: Vec<f64> = ordinary.phases().iter().map(|&phi| oracle.coincidence_direct(phi)).collect();
    let (lo, hi) = probs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)));
    let v_oracle = (hi - lo) / (hi + lo);

    check(
        within(v_her, 1.0, 0.001)
            && within(v_ord, 0.90, 0.03)
            && within(v_ord, v_oracle, 1e-9)
            && within(v_ord, ORDINARY_VISIBILITY, 1e-9),
        format!("heralded V = {v_her:.6}, ordinary V = {v_ord:.12} (four-mode oracle {v_oracle:.12})"),
    )
}

fn efficiency() -> Outcome {
    let split = inject(&FockKet::even_cat(2.0, CUTOFF).unwrap(), &half()).unwrap();
    let top = herald_noclick(&split, 1.0).unwrap().state;
    let d_top = top
        .trace_distance(&DensityOperator::from_ket(&heralded_cat()).unwrap())
        .unwrap();
    let bottom = herald_noclick(&split, 0.0).unwrap().state;
    let d_bottom = bottom.trace_distance(&trace_out(&split, 1).unwrap()).unwrap();

    let grid = PhaseSpaceGrid::default();
    let negativity: Vec<f64> = ETAS
        .iter()
        .map(|&eta| {
            let rho = herald_noclick(&split, eta).unwrap().state;
            negativity_volume(&wigner_density(&rho, &grid).unwrap())
        })
        .collect();
    let vis: Vec<f64> = visibility_vs_efficiency(&MziConfig::default(), &ETAS)
        .unwrap()
        .iter()
        .map(|p| p.visibility)
        .collect();
    let monotone = |v: &[f64]| v.windows(2).all(|w| w[1] >= w[0]);
    check(
        d_top < 1e-10 && d_bottom < 1e-10 && monotone(&negativity) && monotone(&vis),
        format!(
            "D(eta=1) = {d_top:.2e}, D(eta=0) = {d_bottom:.2e}, negativity {}, visibility {}",
            fmt_list(&negativity),
            fmt_list(&vis)
        ),
    )
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", items.join(", "))
}

fn operator_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let cutoff = rng.gen_range(2..=20);
        let keep = rng.gen_range(0.05..=1.0);
        let k = random_ket(&mut rng, cutoff);
        let h = herald_zero(&inject(&k, &BeamSplitter::with_transmission(keep).unwrap()).unwrap()).unwrap();
        let d = nu_to_n(&k, keep).unwrap();
        worst = worst.max((h.probability - d.probability).abs());
        let phase = h.state.overlap(&d.state).unwrap();
        let phase = phase / phase.norm();
        for (a, b) in h.state.coeffs().iter().zip(d.state.coeffs()) {
            worst = worst.max((a * phase - b).norm());
        }
    }
    check(worst <= 1e-12, format!("100 random kets, worst deviation {worst:.2e}"))
}

fn splitter_coefficients() -> Outcome {
    let mut worst: f64 = 0.0;
    let bs = half();
    let (t, r) = (bs.t(), bs.r());
    for alpha in [1.0, 2.0] {
        let input = cat_coefficients(alpha, 17);
        let numeric = inject(&FockKet::even_cat(alpha, 60).unwrap(), &bs).unwrap();
        for n_a in 0..=16 {
            for n_b in 0..=16 - n_a {
                let closed = cat_split_coefficient(alpha, &bs, n_a, n_b);
                worst = worst.max((closed - binomial_split(&input, t, r, n_a, n_b)).norm());
                worst = worst.max((closed - numeric.get(&[n_a, n_b])).norm());
            }
        }
    }
    for xi in [0.3, 0.5493] {
        let input = smsv_coefficients(xi, 17);
        let numeric = inject(&FockKet::smsv(xi, 60).unwrap(), &bs).unwrap();
        for n_a in 0..=16 {
            for n_b in 0..=16 - n_a {
                let closed = smsv_split_coefficient(xi, &bs, n_a, n_b);
                worst = worst.max((closed - binomial_split(&input, t, r, n_a, n_b)).norm());
                worst = worst.max((closed - numeric.get(&[n_a, n_b])).norm());
            }
        }
    }
    check(worst <= 1e-12, format!("n_a + n_b <= 16, worst deviation {worst:.2e}"))
}

fn wigner_conformance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let probe = PhaseSpaceGrid::square(-3.0, 3.0, 7).unwrap();
    let mut worst_quad: f64 = 0.0;
    for _ in 0..20 {
        let k = random_ket(&mut rng, 12);
        let w = wigner_pure(&k, &probe).unwrap();
        for (i, &x) in probe.x().iter().enumerate() {
            for (j, &p) in probe.p().iter().enumerate() {
                worst_quad = worst_quad.max((w.get(i, j) - quadrature_wigner(k.coeffs(), x, p)).abs());
            }
        }
    }

    // Same 0.05 spacing as the default grid, widened so the α = 2 cat lobes
    // at x = ±2√2 are fully inside.
    let grid = PhaseSpaceGrid::square(-6.0, 6.0, 241).unwrap();
    let mut worst_norm: f64 = 0.0;
    for w in scenario_wigners(&grid) {
        worst_norm = worst_norm.max((w.integral() - 1.0).abs());
    }

    let one = wigner_pure(&FockKet::number(1, 4).unwrap(), &PhaseSpaceGrid::default()).unwrap();
    let w00 = one.value_at(0.0, 0.0).unwrap();
    check(
        worst_quad <= 1e-6 && worst_norm <= 1e-3 && within(w00, -FRAC_1_PI, 1e-8),
        format!(
            "quadrature {worst_quad:.2e}, normalization {worst_norm:.2e} on [-6, 6], W_1(0,0) + 1/pi = {:.2e}",
            w00 + FRAC_1_PI
        ),
    )
}

fn scenario_wigners(grid: &PhaseSpaceGrid) -> Vec<WignerGrid> {
    let mut out = Vec::new();
    for input in [FockKet::even_cat(2.0, CUTOFF).unwrap(), FockKet::smsv(xi_smsv(), CUTOFF).unwrap()] {
        let split = inject(&input, &BeamSplitter::with_transmission(FRAC_1_SQRT_2).unwrap()).unwrap();
        out.push(wigner_pure(&input, grid).unwrap());
        out.push(wigner_density(&trace_out(&split, 1).unwrap(), grid).unwrap());
        out.push(wigner_pure(&herald_zero(&split).unwrap().state, grid).unwrap());
        for eta in ETAS {
            out.push(wigner_density(&herald_noclick(&split, eta).unwrap().state, grid).unwrap());
        }
    }
    out.push(wigner_pure(&FockKet::vacuum(4).unwrap(), grid).unwrap());
    out.push(wigner_pure(&FockKet::number(1, 4).unwrap(), grid).unwrap());
    out
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("squeezed vacuum baseline fit", smsv_baseline),
        ("ordinary attenuation fit", ordinary_fit),
        ("noiseless attenuation fit", heralded_fit),
        ("cat equivalence", cat_equivalence),
        ("interferometer visibility", mzi_visibility),
        ("efficiency endpoints and monotonicity", efficiency),
        ("nu^n operator identity", operator_identity),
        ("closed-form splitter coefficients", splitter_coefficients),
        ("wigner engine conformance", wigner_conformance),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| Err(format!("panicked: {}", panic_text(&*e))));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {} {name}: {msg} ({secs:.1}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn panic_text(e: &(dyn std::any::Any + Send)) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown panic".into())
}
