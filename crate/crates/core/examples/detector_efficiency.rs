//! Imperfect no-click heralding: cat negativity and interferometer
//! visibility against detector efficiency.

use fock_attenuation::channels::{herald_noclick, inject};
use fock_attenuation::interferometer::{visibility_vs_efficiency, MziConfig};
use fock_attenuation::wigner::{negativity_volume, wigner_density};
use fock_attenuation::{BeamSplitter, FockKet, PhaseSpaceGrid};

fn main() -> fock_attenuation::Result<()> {
    let etas = [0.0, 0.25, 0.5, 0.75, 1.0];
    let grid = PhaseSpaceGrid::default();
    let split = inject(&FockKet::even_cat(2.0, 20)?, &BeamSplitter::balanced())?;
    let table = visibility_vs_efficiency(&MziConfig::default(), &etas)?;

    println!("eta   cat negativity  herald prob  mzi visibility");
    for (eta, point) in etas.iter().zip(&table) {
        let outcome = herald_noclick(&split, *eta)?;
        let negativity = negativity_volume(&wigner_density(&outcome.state, &grid)?);
        println!(
            "{eta:<5} {negativity:<15.6} {:<12.6} {:.6}",
            outcome.probability, point.visibility
        );
    }
    Ok(())
}
