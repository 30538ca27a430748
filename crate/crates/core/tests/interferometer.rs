mod common;

use approx::assert_abs_diff_eq;
use common::FourModeOracle;
use fock_attenuation::interferometer::{
    phase_sweep, visibility, visibility_vs_efficiency, ArmResolution, Interferometer, MziConfig,
};

fn small(resolution: ArmResolution) -> MziConfig {
    MziConfig {
        xi: 0.3,
        keep: 0.8,
        cutoff: 8,
        phase_samples: 16,
        ..MziConfig::default()
    }
    .with_resolution(resolution)
}

#[test]
fn output_matches_four_mode_oracle() {
    for resolution in [ArmResolution::Ordinary, ArmResolution::Heralded, ArmResolution::Efficiency { eta: 0.4 }] {
        let cfg = small(resolution);
        let mzi = Interferometer::new(cfg.clone()).unwrap();
        let oracle = FourModeOracle::new(cfg.xi, cfg.keep, cfg.cutoff, resolution);
        for phi in [0.0, 0.9, 2.5] {
            let want = oracle.output(phi);
            let got = mzi.output(phi).unwrap().with_dims(want.dims()).unwrap();
            assert!(got.trace_distance(&want).unwrap() < 1e-10, "{resolution:?} at {phi}");
            assert_abs_diff_eq!(mzi.coincidence(phi).unwrap(), oracle.coincidence_direct(phi), epsilon = 1e-12);
        }
    }
}

#[test]
fn efficiency_interpolates_between_the_two_modes() {
    let base = small(ArmResolution::Ordinary);
    let v_ord = visibility(&phase_sweep(&base).unwrap()).unwrap();
    let v_her = visibility(&phase_sweep(&base.with_resolution(ArmResolution::Heralded)).unwrap()).unwrap();
    let table = visibility_vs_efficiency(&base, &[0.0, 0.3, 0.6, 1.0]).unwrap();
    assert_abs_diff_eq!(table[0].visibility, v_ord, epsilon = 1e-12);
    assert_abs_diff_eq!(table[3].visibility, v_her, epsilon = 1e-12);
    assert_abs_diff_eq!(table[0].herald_probability, 1.0, epsilon = 1e-12);
    for w in table.windows(2) {
        assert!(w[1].visibility >= w[0].visibility);
        assert!(w[1].herald_probability <= w[0].herald_probability);
    }
}

#[test]
fn no_loss_gives_full_visibility_either_way() {
    for resolution in [ArmResolution::Ordinary, ArmResolution::Heralded] {
        let cfg = MziConfig { keep: 1.0, ..small(resolution) };
        let v = visibility(&phase_sweep(&cfg).unwrap()).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-9);
    }
}
