//! Even cat state through a 50-50 attenuator, traced versus heralded.

use fock_attenuation::channels::{herald_zero, inject, trace_out};
use fock_attenuation::wigner::{negativity_volume, wigner_density, wigner_pure};
use fock_attenuation::{BeamSplitter, FockKet, PhaseSpaceGrid};

fn main() -> fock_attenuation::Result<()> {
    let grid = PhaseSpaceGrid::default();
    let cat = FockKet::even_cat(2.0, 20)?;
    let split = inject(&cat, &BeamSplitter::balanced())?;

    let ordinary = trace_out(&split, 1)?;
    let heralded = herald_zero(&split)?;
    let target = FockKet::even_cat(2f64.sqrt(), 20)?;

    println!("input      negativity {:.6}", negativity_volume(&wigner_pure(&cat, &grid)?));
    println!(
        "ordinary   negativity {:.6}  purity {:.6}",
        negativity_volume(&wigner_density(&ordinary, &grid)?),
        ordinary.purity()
    );
    println!(
        "heralded   negativity {:.6}  probability {:.6}  overlap² with cat(√2) {:.12}",
        negativity_volume(&wigner_pure(&heralded.state, &grid)?),
        heralded.probability,
        heralded.state.overlap(&target)?.norm_sqr()
    );
    Ok(())
}
