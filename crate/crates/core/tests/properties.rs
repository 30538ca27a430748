mod common;

use approx::assert_abs_diff_eq;
use common::c;
use fock_attenuation::channels::{apply_bs, branch, herald_noclick, herald_zero, inject, nu_to_n, trace_out};
use fock_attenuation::{overlap, BeamSplitter, FockKet, MultiModeKet};
use num_complex::Complex64;
use proptest::prelude::*;

fn amplitudes(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_len).prop_filter_map("zero vector", |v| {
        let raw: Vec<Complex64> = v.into_iter().map(|(re, im)| c(re, im)).collect();
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| raw.into_iter().map(|z| z / norm).collect())
    })
}

fn ket(max_len: usize) -> impl Strategy<Value = FockKet> {
    amplitudes(max_len).prop_map(|a| FockKet::new(a).unwrap())
}

fn two_mode() -> impl Strategy<Value = MultiModeKet> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(ca, cb)| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), ca * cb).prop_filter_map("zero vector", move |v| {
            let raw: Vec<Complex64> = v.into_iter().map(|(re, im)| c(re, im)).collect();
            let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            (norm > 1e-3).then(|| MultiModeKet::new(vec![ca, cb], raw.into_iter().map(|z| z / norm).collect()).unwrap())
        })
    })
}

fn splitter() -> impl Strategy<Value = BeamSplitter> {
    (0.0f64..=1.0).prop_map(|t| BeamSplitter::with_transmission(t).unwrap())
}

/// Removes the global phase that makes the largest amplitude real positive.
fn dephase(k: &FockKet) -> Vec<Complex64> {
    let big = k
        .coeffs()
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .unwrap();
    let phase = big / big.norm();
    k.coeffs().iter().map(|z| z / phase).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn overlap_is_conjugate_symmetric(a in amplitudes(10), b in amplitudes(10)) {
        let n = a.len().max(b.len());
        let pad = |mut v: Vec<Complex64>| { v.resize(n, c(0.0, 0.0)); FockKet::new(v).unwrap() };
        let (a, b) = (pad(a), pad(b));
        let ab = overlap(&a, &b).unwrap();
        let ba = overlap(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-14);
        prop_assert!(ab.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn splitter_is_unitary(state in two_mode(), bs in splitter()) {
        let out = apply_bs(&state, 0, 1, &bs).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!(out.is_normalized());
        let back = apply_bs(&out, 0, 1, &bs.adjoint()).unwrap();
        let back = back.with_cutoffs(state.cutoffs()).unwrap();
        let fidelity = back.overlap(&state).unwrap();
        prop_assert!((fidelity - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn herald_zero_is_nu_to_the_n(k in ket(15), keep in 0.05f64..=1.0) {
        let heralded = herald_zero(&inject(&k, &BeamSplitter::with_transmission(keep).unwrap()).unwrap());
        let direct = nu_to_n(&k, keep);
        match (heralded, direct) {
            (Ok(h), Ok(d)) => {
                prop_assert!((h.probability - d.probability).abs() < 1e-12);
                for (a, b) in dephase(&h.state).iter().zip(dephase(&d.state)) {
                    prop_assert!((a - b).norm() < 1e-12);
                }
            }
            (Err(_), Err(_)) => {}
            (h, d) => prop_assert!(false, "routes disagree: {h:?} vs {d:?}"),
        }
    }

    #[test]
    fn branches_are_complete(k in ket(12), bs in splitter()) {
        let split = inject(&k, &bs).unwrap();
        let total: f64 = (0..split.cutoffs()[1]).map(|n| branch(&split, n).unwrap().norm_sqr()).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let rho = trace_out(&split, 1).unwrap();
        prop_assert!((rho.weight() - 1.0).abs() < 1e-12);
        prop_assert!(rho.eigenvalues()[0] > -1e-10);
    }

    #[test]
    fn noclick_probability_falls_with_efficiency(k in ket(10), keep in 0.0f64..=1.0, a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let split = inject(&k, &BeamSplitter::with_transmission(keep).unwrap()).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let p_lo = herald_noclick(&split, lo).map(|o| o.probability);
        let p_hi = herald_noclick(&split, hi).map(|o| o.probability);
        if let (Ok(p_lo), Ok(p_hi)) = (p_lo, p_hi) {
            prop_assert!(p_lo >= p_hi - 1e-15);
        }
    }
}

#[test]
fn serialization_round_trips() {
    let k = FockKet::even_cat(1.0, 14).unwrap();
    let text = serde_json::to_string(&k).unwrap();
    let back: FockKet = serde_json::from_str(&text).unwrap();
    assert_eq!(back, k);
    assert!(serde_json::from_str::<FockKet>(r#"{"modes":1,"cutoffs":[2],"coeffs":[[1,0],[1,0]],"normalized":true}"#).is_err());
    let reg = MultiModeKet::tmsv(0.2, 6).unwrap();
    let back: MultiModeKet = serde_json::from_str(&serde_json::to_string(&reg).unwrap()).unwrap();
    assert_abs_diff_eq!(back.overlap(&reg).unwrap().re, 1.0, epsilon = 1e-15);
}
