//! Gaussian fits to a squeezed vacuum before and after attenuation.

use fock_attenuation::channels::{herald_zero, inject, trace_out};
use fock_attenuation::scenario::{smsv_herald_prediction, smsv_loss_prediction};
use fock_attenuation::wigner::{fit_gaussian, wigner_density, wigner_pure};
use fock_attenuation::{BeamSplitter, FockKet, GaussianFit, PhaseSpaceGrid};

fn show(label: &str, fit: &GaussianFit, predicted: Option<GaussianFit>) {
    print!("{label:<9} s {:.5}  sigma {:.5}", fit.s, fit.sigma);
    if let Some(p) = predicted {
        print!("   (predicted s {:.5}  sigma {:.5})", p.s, p.sigma);
    }
    println!();
}

fn main() -> fock_attenuation::Result<()> {
    let grid = PhaseSpaceGrid::default();
    let xi = 3f64.sqrt().ln();
    let keep = std::f64::consts::FRAC_1_SQRT_2;
    let input = FockKet::smsv(xi, 20)?;
    let split = inject(&input, &BeamSplitter::with_transmission(keep)?)?;

    show("input", &fit_gaussian(&wigner_pure(&input, &grid)?)?, None);
    let traced = fit_gaussian(&wigner_density(&trace_out(&split, 1)?, &grid)?)?;
    show("ordinary", &traced, Some(smsv_loss_prediction(xi, keep)));
    let heralded = fit_gaussian(&wigner_pure(&herald_zero(&split)?.state, &grid)?)?;
    show("heralded", &heralded, Some(smsv_herald_prediction(xi, keep)));
    Ok(())
}
