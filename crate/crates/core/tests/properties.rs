mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use sricci::complex::{SimplicialComplex, WeightAssignment};
use sricci::curvature::FaceCurvature;
use sricci::document::canonical_key;
use sricci::spectral::coboundary_matrix;
use sricci::transport::{kantorovich_dual, wasserstein, FaceMeasure};

use common::random_pure_2_complex;

fn random_complex(seed: u64, vertices: u64, facets: usize) -> SimplicialComplex {
    let mut rng = StdRng::seed_from_u64(seed);
    SimplicialComplex::build(&random_pure_2_complex(&mut rng, vertices, facets)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dispersion_measure_is_a_probability(seed in any::<u64>(), v in 4u64..8, f in 1usize..8, eps in 0.0f64..=1.0) {
        let k = random_complex(seed, v, f);
        let w = WeightAssignment::delta(&k).unwrap();
        let fc = FaceCurvature::new(&k, &w, 2).unwrap();
        for a in 0..fc.face_count() {
            let m = fc.dispersion_measure(a, eps).unwrap();
            prop_assert!((m.total() - 1.0).abs() < 1e-12);
            prop_assert!(m.iter().all(|(_, x)| x >= -1e-15));
        }
    }

    #[test]
    fn curvature_is_symmetric_and_bracketed(seed in any::<u64>(), v in 4u64..8, f in 2usize..8) {
        let k = random_complex(seed, v, f);
        let w = WeightAssignment::delta(&k).unwrap();
        let fc = FaceCurvature::new(&k, &w, 2).unwrap();
        for (a, b) in fc.adjacent_pairs() {
            let ab = fc.ricci(a, b).unwrap();
            let ba = fc.ricci(b, a).unwrap();
            prop_assert!((ab.kappa - ba.kappa).abs() < 1e-9);
            prop_assert!(ab.converged);
            prop_assert!(ab.bracketed(), "{} not in [{:?}, {:?}]", ab.kappa, ab.lower_bound, ab.upper_bound);
        }
    }

    #[test]
    fn transport_is_symmetric_and_matches_dual(seed in any::<u64>(), v in 4u64..8, f in 2usize..8, eps in 0.01f64..=1.0) {
        let k = random_complex(seed, v, f);
        let w = WeightAssignment::delta(&k).unwrap();
        let fc = FaceCurvature::new(&k, &w, 2).unwrap();
        let n = fc.face_count();
        for a in 0..n {
            for b in a + 1..n {
                if fc.metric().distance(a, b).is_none() {
                    continue;
                }
                let mu: FaceMeasure = fc.dispersion_measure(a, eps).unwrap();
                let nu = fc.dispersion_measure(b, eps).unwrap();
                let (wab, plan) = wasserstein(&mu, &nu, fc.metric()).unwrap();
                let (wba, _) = wasserstein(&nu, &mu, fc.metric()).unwrap();
                let (dual, cert) = kantorovich_dual(&mu, &nu, fc.metric()).unwrap();
                prop_assert!((wab - wba).abs() < 1e-9);
                prop_assert!((wab - dual).abs() < 1e-9);
                prop_assert!(plan.marginal_error(&mu, &nu) < 1e-10);
                prop_assert!(cert.max_violation(fc.metric()) < 1e-9);
            }
        }
    }

    #[test]
    fn coboundary_squares_to_zero(seed in any::<u64>(), v in 4u64..9, f in 1usize..10) {
        let k = random_complex(seed, v, f);
        let d0 = coboundary_matrix(&k, 0, None).unwrap();
        let d1 = coboundary_matrix(&k, 1, None).unwrap();
        prop_assert!(d1.compose(&d0).iter().flatten().all(|&x| x == 0));
    }

    #[test]
    fn canonical_key_is_idempotent(labels in proptest::collection::btree_set(0u64..1000, 1..6), seed in any::<u64>()) {
        let mut shuffled: Vec<u64> = labels.into_iter().collect();
        let mut rng = StdRng::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut rng);
        let raw = shuffled.iter().map(|l| format!(" {l}")).collect::<Vec<_>>().join(",");
        let once = canonical_key(&raw).unwrap();
        prop_assert_eq!(canonical_key(&once).unwrap(), once.clone());
        let mut sorted = shuffled.clone();
        sorted.sort_unstable();
        prop_assert_eq!(once, sorted.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
    }
}
