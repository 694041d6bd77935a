mod common;

use opt_foundry::cone::{homogeneity_map, homogeneity_map_inverse, self_duality_check, ConeContext, LinearMap};
use opt_foundry::linalg::max_abs_diff;
use opt_foundry::sample;
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::config(100))]

    #[test]
    fn gamma_maps_tau_to_rho(seed in any::<u64>()) {
        let mut rng = sample::seeded(seed);
        for f in common::spectral_families() {
            let a = common::alg(&f);
            let ctx = ConeContext::with_default_tol(&a);
            let tau = sample::random_internal_state(&a, &mut rng);
            let rho = sample::random_internal_state(&a, &mut rng);
            let g = homogeneity_map(&ctx, &tau, &rho).unwrap();
            prop_assert!(g.apply(&tau).unwrap().max_diff(&rho) <= 1e-8, "{f}");
            let inv = homogeneity_map_inverse(&ctx, &tau, &rho).unwrap();
            let id = LinearMap::identity(&a);
            prop_assert!(g.compose(&inv).unwrap().max_diff(&id) <= 1e-7, "{f}");
            prop_assert!(inv.compose(&g).unwrap().max_diff(&id) <= 1e-7, "{f}");
            // Γ and its inverse keep the cone
            let x = sample::cone_element(&a, &mut rng);
            prop_assert!(g.apply(&x).unwrap().min_eigenvalue().unwrap() >= -1e-9 * (1.0 + x.norm()));
        }
    }
}

#[test]
fn self_duality_on_every_spectral_family() {
    for f in common::spectral_families() {
        let a = common::alg(&f);
        let rep = self_duality_check(&ConeContext::with_default_tol(&a), 100, 5).unwrap();
        assert!(rep.passed(), "{f}: {:?}", rep.notes);
    }
}

#[test]
fn inverse_matches_matrix_inverse() {
    let a = common::alg(&opt_foundry::eja::Family::ComplexHerm(3));
    let ctx = ConeContext::with_default_tol(&a);
    let mut rng = sample::seeded(8);
    let (tau, rho) = (sample::random_internal_state(&a, &mut rng), sample::random_internal_state(&a, &mut rng));
    let g = homogeneity_map(&ctx, &tau, &rho).unwrap();
    let inv = homogeneity_map_inverse(&ctx, &tau, &rho).unwrap();
    let direct = g.matrix().clone().try_inverse().unwrap();
    assert!(max_abs_diff(inv.matrix(), &direct) < 1e-8);
}
