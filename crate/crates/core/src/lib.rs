//! Truncated Fock-space simulation of optical attenuation.
//!
//! A beam splitter that dumps light into an auxiliary mode attenuates a
//! state. Tracing the auxiliary mode away ("ordinary" attenuation) leaks
//! which-path information and decoheres superpositions; accepting only runs
//! where the auxiliary mode holds zero photons ("noiseless" attenuation)
//! applies the operator ν^n̂ instead and preserves coherence.
//!
//! * [`fock`] and [`density`]: input states and mixed states.
//! * [`channels`]: beam splitter, partial traces, heralds.
//! * [`wigner`]: phase-space distributions, Gaussian fits, negativity.
//! * [`interferometer`]: Mach-Zehnder coincidence curves and visibility.
//! * [`scenario`]: the runnable scenarios behind the `fock-atten` binary.

pub mod channels;
pub mod density;
pub mod error;
pub mod fock;
pub mod interferometer;
pub mod math;
pub mod output;
pub mod scenario;
pub mod wigner;

pub use channels::{BeamSplitter, HeraldOutcome};
pub use density::DensityOperator;
pub use error::{Error, Result};
pub use fock::{overlap, FockKet, Ket, MultiModeKet};
pub use wigner::{GaussianFit, PhaseSpaceGrid, WignerGrid};
