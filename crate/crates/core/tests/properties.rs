use proptest::prelude::*;

use ptmoments::ensemble::{
    index_rng, negativity_noise_study, random_su2, sample_state, singlet_fidelity, twirl_to_werner, Ensemble, NoiseSpec,
};
use ptmoments::invariants::{makhlin_invariants, moments_via_invariants};
use ptmoments::io::{parse_state, state_to_json};
use ptmoments::measures::{bounds_from_witness, concurrence, negativity_from_moments, negativity_spectral, uwe};
use ptmoments::qmat::{bloch_compose, bloch_decompose, max_entry_diff, moments, partial_transpose, MomentSet};
use ptmoments::xstates::{xstate, xstate_concurrence, xstate_witness_factored, XStateParams};
use ptmoments::{DensityMatrix, NegativityMethod};

fn ensembles() -> impl Strategy<Value = Ensemble> {
    prop_oneof![
        Just(Ensemble::HilbertSchmidt),
        Just(Ensemble::Bures),
        Just(Ensemble::MixedRank)
    ]
}

fn state(ensemble: Ensemble, seed: u64) -> DensityMatrix {
    sample_state(ensemble, &mut index_rng(seed, 0))
}

#[test]
fn thousand_bloch_and_json_round_trips() {
    for i in 0..1000 {
        let rho = sample_state(Ensemble::MixedRank, &mut index_rng(77, i));
        let back = bloch_compose(&bloch_decompose(&rho)).unwrap();
        assert!(max_entry_diff(back.matrix(), rho.matrix()) < 1e-14);
        let parsed = parse_state(&state_to_json(&rho)).unwrap();
        assert_eq!(parsed, rho);
    }
}

#[test]
fn study_is_independent_of_worker_count() {
    let spec = NoiseSpec::new(1e-2, 99, Ensemble::MixedRank).unwrap();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = single.install(|| negativity_noise_study(500, &spec).unwrap());
    let b = negativity_noise_study(500, &spec).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn three_moment_paths_agree(ensemble in ensembles(), seed in any::<u64>()) {
        let rho = state(ensemble, seed);
        let direct = moments(&rho).as_array();
        let spectral = MomentSet::from_eigenvalues(&partial_transpose(&rho).eigenvalues()).as_array();
        let via = moments_via_invariants(&bloch_decompose(&rho)).as_array();
        for k in 0..4 {
            prop_assert!((direct[k] - spectral[k]).abs() < 1e-12);
            prop_assert!((direct[k] - via[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn local_unitaries_preserve_everything(ensemble in ensembles(), seed in any::<u64>()) {
        let rho = state(ensemble, seed);
        let mut rng = index_rng(seed, 1);
        let moved = rho.apply_local(&random_su2(&mut rng), &random_su2(&mut rng));
        let before = makhlin_invariants(&bloch_decompose(&rho)).as_array();
        let after = makhlin_invariants(&bloch_decompose(&moved)).as_array();
        for (a, b) in before.iter().zip(after) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        prop_assert!((negativity_spectral(&rho) - negativity_spectral(&moved)).abs() < 1e-12);
        prop_assert!((concurrence(&rho) - concurrence(&moved)).abs() < 1e-10);
    }

    #[test]
    fn witness_sign_tracks_entanglement(ensemble in ensembles(), seed in any::<u64>()) {
        let rho = state(ensemble, seed);
        let n = negativity_spectral(&rho);
        let w = uwe(&moments(&rho)).w;
        // rho^Gamma has at most one negative eigenvalue, so W < 0 exactly when N > 0
        prop_assert!(n <= 1e-9 || w > 0.0);
        prop_assert!(w <= 1e-12 || n > 0.0);
        prop_assert!(w <= 1.0 + 1e-12);
        let b = bounds_from_witness(w.min(1.0)).unwrap();
        prop_assert!(b.lower <= n + 1e-10 && n <= b.upper + 1e-10);
    }

    #[test]
    fn exact_moments_never_clamp(ensemble in ensembles(), seed in any::<u64>()) {
        let rho = state(ensemble, seed);
        let res = negativity_from_moments(&moments(&rho)).unwrap();
        prop_assert_eq!(res.method, NegativityMethod::QuarticExact);
        prop_assert!((res.value - negativity_spectral(&rho)).abs() < 1e-8);
    }

    #[test]
    fn twirl_is_idempotent(ensemble in ensembles(), seed in any::<u64>()) {
        let rho = state(ensemble, seed);
        let once = twirl_to_werner(&rho);
        let twice = twirl_to_werner(&once);
        prop_assert!(max_entry_diff(once.matrix(), twice.matrix()) < 1e-12);
        prop_assert!((singlet_fidelity(&once) - singlet_fidelity(&rho)).abs() < 1e-12);
    }

    #[test]
    fn xstate_closed_forms_match_numerics(
        weights in proptest::array::uniform4(0.01f64..1.0),
        db in (0.0f64..1.0, 0.0f64..1.0),
        phases in (0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU),
    ) {
        let total: f64 = weights.iter().sum();
        let [a, c, e, f] = weights.map(|x| x / total);
        let b = nalgebra::Complex::from_polar(db.1 * (a * f).sqrt(), phases.1);
        let d = nalgebra::Complex::from_polar(db.0 * (c * e).sqrt(), phases.0);
        let p = XStateParams { a, b, c, d, e, f };
        let rho = xstate(&p).unwrap();
        prop_assert!((xstate_concurrence(&p) - concurrence(&rho)).abs() < 1e-9);
        prop_assert!((xstate_witness_factored(&p) - uwe(&moments(&rho)).det_pt).abs() < 1e-13);
    }
}

#[test]
fn factored_witness_on_thousand_xstates() {
    use rand::Rng;
    let mut rng = index_rng(419, 0);
    for _ in 0..1000 {
        let w: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..1.0));
        let total: f64 = w.iter().sum();
        let [a, c, e, f] = w.map(|x| x / total);
        let b = nalgebra::Complex::from_polar(
            rng.gen_range(0.0..1.0) * (a * f).sqrt(),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let d = nalgebra::Complex::from_polar(
            rng.gen_range(0.0..1.0) * (c * e).sqrt(),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let p = XStateParams { a, b, c, d, e, f };
        let det = uwe(&moments(&xstate(&p).unwrap())).det_pt;
        assert!((xstate_witness_factored(&p) - det).abs() < 1e-14);
    }
}

#[test]
fn locc_gap_peaks_at_reference_point() {
    let (p_best, gap) = ptmoments::ensemble::locc_gap_argmax(1e-4);
    let p_ref = (3.0 * 17f64.sqrt() - 7.0) / 8.0;
    assert!((p_best - p_ref).abs() <= 1e-4, "{p_best} vs {p_ref}");
    assert!(gap > 0.0);
}

/// Characteristic polynomial of a Hermitian 4x4 from traces of powers
/// (Faddeev-LeVerrier), solved as the eigenvalues of its companion matrix.
fn companion_roots(h: &ptmoments::qmat::Matrix4c) -> Vec<f64> {
    let t: Vec<f64> = (1..=4).map(|k| h.pow(k as u32).trace().re).collect();
    let c1 = -t[0];
    let c2 = -(c1 * t[0] + t[1]) / 2.0;
    let c3 = -(c2 * t[0] + c1 * t[1] + t[2]) / 3.0;
    let c4 = -(c3 * t[0] + c2 * t[1] + c1 * t[2] + t[3]) / 4.0;
    #[rustfmt::skip]
    let comp = nalgebra::Matrix4::new(
        -c1, -c2, -c3, -c4,
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0,
    );
    let mut roots: Vec<f64> = comp.complex_eigenvalues().iter().map(|z| z.re).collect();
    roots.sort_by(f64::total_cmp);
    roots
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn eigenvalues_match_companion_oracle(ensemble in ensembles(), seed in any::<u64>()) {
        let pt = partial_transpose(&state(ensemble, seed));
        let ev = pt.eigenvalues();
        for (a, b) in ev.iter().zip(companion_roots(pt.matrix())) {
            prop_assert!((a - b).abs() < 1e-7, "{ev:?}");
        }
        prop_assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_structure(ensemble in ensembles(), seed in any::<u64>()) {
        let rho = state(ensemble, seed);
        let pt = partial_transpose(&rho);
        let back = pt.partial_transpose();
        prop_assert_eq!(back.matrix(), rho.matrix());
        prop_assert!((pt.trace() - 1.0).abs() < 1e-14);
        let ev = pt.eigenvalues();
        if negativity_spectral(&rho) > 1e-9 {
            prop_assert!(ev[0] < 0.0 && ev[1] > 0.0);
            prop_assert!(ev.iter().all(|x| x.abs() > 1e-12));
        }
        for (n, m) in moments(&rho).as_array().iter().zip(MomentSet::from_eigenvalues(&ev).as_array()) {
            prop_assert!((n - m).abs() < 1e-10);
        }
    }

    #[test]
    fn third_invariant_bounded_by_square_of_second(ensemble in ensembles(), seed in any::<u64>()) {
        let inv = makhlin_invariants(&bloch_decompose(&state(ensemble, seed)));
        prop_assert!(inv.i3 <= inv.i2 * inv.i2 + 1e-12);
    }
}
