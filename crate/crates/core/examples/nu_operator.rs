//! Zero-photon heralding after a beam splitter acts as ν^n̂ on the input.

use fock_attenuation::channels::{herald_zero, inject, nu_to_n};
use fock_attenuation::{BeamSplitter, FockKet};

fn main() -> fock_attenuation::Result<()> {
    let keep = 0.6;
    for (name, ket) in [
        ("coherent(1.5)", FockKet::coherent(1.5, 25)?),
        ("even_cat(2)", FockKet::even_cat(2.0, 25)?),
        ("smsv(0.4)", FockKet::smsv(0.4, 25)?),
    ] {
        let heralded = herald_zero(&inject(&ket, &BeamSplitter::with_transmission(keep)?)?)?;
        let direct = nu_to_n(&ket, keep)?;
        println!(
            "{name:<14} p_herald {:.10}  p_direct {:.10}  1 - overlap² {:.2e}",
            heralded.probability,
            direct.probability,
            1.0 - heralded.state.overlap(&direct.state)?.norm_sqr()
        );
    }
    Ok(())
}
