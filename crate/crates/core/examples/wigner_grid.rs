//! Writes the Wigner grid of a single photon to CSV and prints a few values.

use std::f64::consts::FRAC_1_PI;

use fock_attenuation::wigner::{negativity_volume, wigner_pure};
use fock_attenuation::{FockKet, PhaseSpaceGrid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = PhaseSpaceGrid::square(-4.0, 4.0, 81)?;
    let w = wigner_pure(&FockKet::number(1, 4)?, &grid)?;
    println!("W(0,0)     {:.12}  (-1/pi = {:.12})", w.value_at(0.0, 0.0).unwrap(), -FRAC_1_PI);
    println!("integral   {:.8}", w.integral());
    println!("negativity {:.8}", negativity_volume(&w));

    let path = std::env::temp_dir().join("single_photon_wigner.csv");
    std::fs::write(&path, w.to_csv())?;
    println!("wrote {}", path.display());
    Ok(())
}
