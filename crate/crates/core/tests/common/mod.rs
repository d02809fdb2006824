#![allow(dead_code)]

use paracalc_core::dyadic::{
    build_partition, make_grid, DyadicPartition, GridFunction, PartitionProfile, TorusGrid,
};
use paracalc_core::paraproduct::DomainFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn partition(level: u32) -> DyadicPartition {
    build_partition(make_grid(level).unwrap(), PartitionProfile::default()).unwrap()
}

pub fn random_grid(grid: TorusGrid, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    GridFunction::new(grid, values).unwrap()
}

pub fn random_domain(grid: TorusGrid, seed: u64) -> DomainFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..=grid.half())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    DomainFunction::new(grid, values).unwrap()
}

pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn sup(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}
