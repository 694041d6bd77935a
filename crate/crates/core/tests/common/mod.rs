#![allow(dead_code)]

use std::sync::Arc;

use opt_foundry::eja::{make_algebra, Algebra, Family};
use proptest::test_runner::{Config, RngSeed};

/// Fixed-seed proptest configuration.
pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x0f0f_2024),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn all_families() -> Vec<Family> {
    vec![
        Family::RealSym(3),
        Family::ComplexHerm(3),
        Family::QuatHerm(3),
        Family::Spin(2),
        Family::Spin(5),
        Family::OctHerm3,
        Family::DirectSum(vec![Family::ComplexHerm(2), Family::Spin(4), Family::RealSym(1)]),
    ]
}

pub fn spectral_families() -> Vec<Family> {
    all_families().into_iter().filter(|f| *f != Family::OctHerm3).collect()
}

pub fn alg(f: &Family) -> Arc<Algebra> {
    make_algebra(f.clone()).unwrap()
}
