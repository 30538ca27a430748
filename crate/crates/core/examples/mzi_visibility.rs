//! Coincidence fringes of the pair-source interferometer with lossy arms.

use fock_attenuation::interferometer::{phase_sweep, visibility, ArmResolution, MziConfig};

fn main() -> fock_attenuation::Result<()> {
    for resolution in [ArmResolution::Ordinary, ArmResolution::Heralded] {
        let config = MziConfig {
            resolution,
            ..MziConfig::default()
        };
        let curve = phase_sweep(&config)?;
        let peak = curve.probability().iter().copied().fold(0.0, f64::max);
        println!(
            "{:<9} visibility {:.15}  peak coincidence {:.6}",
            resolution.name(),
            visibility(&curve)?,
            peak
        );
    }
    Ok(())
}
