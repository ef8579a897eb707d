use posmap::maps::{catalog, CatalogMap};
use posmap::matcore::random::{random_unit_vector, substream};
use posmap::matcore::{gell_mann_basis, pauli, Leg};
use posmap::measures::{
    average_marginal_entropy, classical_deviation, dcoef, dcoef_ladder, eof_upper, eof_upper_ladder, map_witness,
    negativity, ppt_test, MeasureOptions, MeasureReport, PptVerdict,
};
use posmap::states::{make_named, random_separable, DensityMatrix, StateFamily};
use proptest::prelude::*;

fn opts(restarts: usize, seed: u64) -> MeasureOptions {
    MeasureOptions {
        restarts,
        iters: 80,
        seed,
        ..Default::default()
    }
}

fn werner(p: f64) -> DensityMatrix {
    make_named(&StateFamily::Werner { p }).unwrap().state
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn witnesses_never_fire_on_separable_states(seed in any::<u64>(), d2 in 2usize..=3, m in 1usize..=6) {
        let (rho, cert) = random_separable(2, d2, m, seed).unwrap();
        prop_assert!(cert.barycenter_error(&rho) <= 1e-12);
        prop_assert_eq!(ppt_test(&rho).verdict, PptVerdict::Ppt);
        prop_assert!(negativity(&rho) <= 1e-12);
        for map in [CatalogMap::Transpose { d: 2 }, CatalogMap::Reduction { d: 2 }, CatalogMap::WernerHolevo { d: 2 }] {
            let w = map_witness(&rho, &catalog(&map).unwrap()).unwrap();
            prop_assert!(!w.entangled, "{:?} fired with {}", map, w.min_eigenvalue);
        }
    }

    #[test]
    fn pure_states_short_circuit(seed in any::<u64>(), d1 in 2usize..=3, d2 in 2usize..=3) {
        let psi = random_unit_vector(d1 * d2, &mut substream(seed, 0));
        let rho = DensityMatrix::pure(&psi, d1, d2).unwrap();
        let r = eof_upper(&rho, &opts(2, seed)).unwrap();
        prop_assert!((r.value - rho.restrict(Leg::First).entropy()).abs() <= 1e-9);
        prop_assert_eq!(r.restarts_used, 0);
    }

    #[test]
    fn witness_value_matches_ppt_for_transpose(seed in any::<u64>()) {
        let rho = make_named(&StateFamily::RandomDensity { d1: 2, d2: 2, rank: 3, seed }).unwrap().state;
        let w = map_witness(&rho, &catalog(&CatalogMap::Transpose { d: 2 }).unwrap()).unwrap();
        // transposing either leg gives the same spectrum
        prop_assert!((w.min_eigenvalue - ppt_test(&rho).min_eigenvalue).abs() <= 1e-10);
    }
}

#[test]
fn eof_is_non_increasing_in_restarts() {
    let rho = make_named(&StateFamily::RandomDensity {
        d1: 2,
        d2: 2,
        rank: 2,
        seed: 9,
    })
    .unwrap()
    .state;
    let mut previous = f64::INFINITY;
    for restarts in [1, 2, 4, 8, 16] {
        let v = eof_upper(&rho, &opts(restarts, 5)).unwrap().value;
        assert!(v <= previous, "restarts {restarts}: {v} > {previous}");
        previous = v;
    }
}

#[test]
fn dcoef_is_non_increasing_in_restarts() {
    let rho = werner(0.6);
    let mut previous = f64::INFINITY;
    for restarts in [1, 2, 4, 8] {
        let v = dcoef(&rho, &pauli::z(), &pauli::z(), &opts(restarts, 3)).unwrap().value;
        assert!(v <= previous, "restarts {restarts}: {v} > {previous}");
        previous = v;
    }
}

fn assert_ladder(reports: &[MeasureReport]) {
    for w in reports.windows(2) {
        assert!(w[1].value <= w[0].value, "{} > {}", w[1].value, w[0].value);
    }
}

#[test]
fn bounds_are_non_increasing_in_ensemble_size() {
    let rho = make_named(&StateFamily::RandomDensity {
        d1: 2,
        d2: 3,
        rank: 3,
        seed: 4,
    })
    .unwrap()
    .state;
    let ks = [3, 5, 9, 16];
    let eof = eof_upper_ladder(&rho, &ks, &opts(4, 1)).unwrap();
    assert_eq!(eof.len(), ks.len());
    assert_ladder(&eof);
    let d = dcoef_ladder(&rho, &pauli::x(), &gell_mann_basis(3)[7], &ks, &opts(4, 1)).unwrap();
    assert_ladder(&d);
    assert!(eof_upper_ladder(&rho, &[5, 3], &opts(1, 0)).is_err());
}

#[test]
fn certificates_decompose_the_state() {
    for seed in 0..4 {
        let rho = make_named(&StateFamily::RandomDensity {
            d1: 2,
            d2: 2,
            rank: 3,
            seed,
        })
        .unwrap()
        .state;
        let r = eof_upper(&rho, &opts(3, seed)).unwrap();
        let ens = r.ensemble().unwrap();
        assert!(ens.barycenter_error(&rho) <= 1e-9);
        assert!((average_marginal_entropy(ens) - r.value).abs() <= 1e-9);

        let r = dcoef(&rho, &pauli::y(), &pauli::x(), &opts(3, seed)).unwrap();
        let ens = r.ensemble().unwrap();
        assert!(ens.barycenter_error(&rho) <= 1e-9);
        assert!((classical_deviation(&rho, ens, &pauli::y(), &pauli::x()) - r.value).abs() <= 1e-9);
    }
}

#[test]
fn results_depend_only_on_the_seed() {
    let rho = werner(0.5);
    let a = eof_upper(&rho, &opts(6, 11)).unwrap();
    let b = eof_upper(&rho, &opts(6, 11)).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.to_json_string(), b.to_json_string());
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let c = pool.install(|| eof_upper(&rho, &opts(6, 11)).unwrap());
    assert_eq!(a.value.to_bits(), c.value.to_bits());
}

#[test]
fn warm_start_from_separable_certificate() {
    let (rho, cert) = random_separable(2, 3, 5, 7).unwrap();
    let o = MeasureOptions {
        k: Some(16),
        restarts: 1,
        warm_start: Some(cert),
        ..Default::default()
    };
    assert!(dcoef(&rho, &pauli::z(), &gell_mann_basis(3)[7], &o).unwrap().value <= 1e-3);
    assert!(eof_upper(&rho, &o).unwrap().value <= 0.02);
}

#[test]
fn werner_bound_tracks_concurrence_formula() {
    // Two-qubit Werner states: EoF is h((1 + √(1 − C²))/2) with C = max(0, (3p − 1)/2).
    let h = |x: f64| -> f64 { [x, 1.0 - x].iter().filter(|&&q| q > 0.0).map(|&q| -q * q.log2()).sum() };
    for p in [0.2, 0.5, 0.8] {
        let c = ((3.0 * p - 1.0) / 2.0f64).max(0.0);
        let exact = h((1.0 + (1.0 - c * c).sqrt()) / 2.0);
        let v = eof_upper(&werner(p), &opts(8, 0)).unwrap().value;
        assert!(v >= exact - 1e-9, "p={p}: bound {v} below exact {exact}");
        assert!(v <= exact + 0.05, "p={p}: bound {v} far above exact {exact}");
    }
}
