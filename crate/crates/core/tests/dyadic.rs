mod common;

use common::{partition, random_grid, sup, sup_diff};
use paracalc_core::dyadic::{
    block_norms, estimate_smoothness, make_grid, sobolev_norm, square_function_norm,
    synthesize_rough, GridFunction,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn blocks_sum_to_identity(seed in any::<u64>(), level in 4u32..=9) {
        let p = partition(level);
        let g = random_grid(p.grid(), seed);
        let mut sum = vec![0.0; g.grid().len()];
        for j in 0..=p.j_max() {
            for (s, v) in sum.iter_mut().zip(p.apply_block(j, &g).unwrap().values()) {
                *s += v;
            }
        }
        prop_assert!(sup_diff(&sum, g.values()) <= 1e-12 * g.sup_norm());
    }

    #[test]
    fn low_pass_is_cumulative(seed in any::<u64>(), j in 2usize..=11) {
        let p = partition(9);
        let g = random_grid(p.grid(), seed);
        let low = p.low_pass(j, &g).unwrap();
        let mut sum = vec![0.0; g.grid().len()];
        for k in 0..=(j - 2).min(p.j_max()) {
            for (s, v) in sum.iter_mut().zip(p.apply_block(k, &g).unwrap().values()) {
                *s += v;
            }
        }
        prop_assert!(sup_diff(low.values(), &sum) <= 1e-12 * g.sup_norm());
    }
}

#[test]
fn blocks_live_on_their_annulus() {
    let p = partition(10);
    let grid = p.grid();
    let g = random_grid(grid, 7);
    for j in 1..p.j_max() {
        let lo = 2f64.powi(j as i32 - 1);
        let hi = 2f64.powi(j as i32 + 1);
        let block = p.apply_block(j, &g).unwrap();
        for (m, c) in block.spectrum().iter().enumerate() {
            let xi = grid.wavenumber(m).abs();
            if xi < lo || xi > hi {
                assert_eq!(c.norm(), 0.0, "block {j} leaks at xi = {xi}");
            }
        }
    }
}

#[test]
fn blocks_are_dilates_of_the_first() {
    let p = partition(11);
    let grid = p.grid();
    let first = p.block(1).unwrap();
    let slot = |k: i64| k.rem_euclid(grid.len() as i64) as usize;
    for j in 2..p.j_max() {
        let block = p.block(j).unwrap();
        let scale = 1i64 << (j - 1);
        let mut compared = 0;
        for m in 0..grid.len() {
            let k = grid.signed_index(m);
            if k % scale == 0 {
                assert!(
                    (block[m] - first[slot(k / scale)]).abs() <= 1e-12,
                    "block {j} at k = {k}"
                );
                compared += 1;
            }
        }
        assert!(compared >= 1);
        for m in 0..grid.len() {
            let xi = grid.wavenumber(m);
            assert!((block[m] - p.multiplier(1, xi / scale as f64)).abs() <= 1e-12);
        }
    }
}

#[test]
fn square_function_and_bessel_norms_agree_at_p2() {
    let p = partition(10);
    let mut worst: f64 = 1.0;
    for i in 0..20u64 {
        let g = if i % 2 == 0 {
            synthesize_rough(0.5 + 0.25 * i as f64, i, p.grid()).unwrap()
        } else {
            random_grid(p.grid(), i)
        };
        for s in [0.0, 0.5] {
            let square = square_function_norm(&p, &g, s, 2.0).unwrap();
            let bessel = sobolev_norm(&p, &g, s, 2.0).unwrap();
            let ratio = square / bessel;
            assert!(
                (0.5..=2.0).contains(&ratio),
                "function {i}, s = {s}: ratio {ratio}"
            );
            worst = worst.max(ratio.max(1.0 / ratio));
        }
    }
    assert!(worst <= 2.0);
}

#[test]
fn block_norms_match_plancherel() {
    let grid = make_grid(11).unwrap();
    let p = partition(11);
    for (sigma, seed) in [(0.75, 1u64), (1.5, 2), (3.0, 3)] {
        let g = synthesize_rough(sigma, seed, grid).unwrap();
        let measured = block_norms(&p, &g, 2.0).unwrap();
        for j in 0..=p.j_max() {
            let energy: f64 = (0..grid.len())
                .map(|m| {
                    let xi = grid.wavenumber(m);
                    let amplitude = (1.0 + xi.abs()).powf(-sigma - 0.5);
                    (p.multiplier(j, xi) * amplitude).powi(2)
                })
                .sum();
            let expected = energy.sqrt();
            assert!(
                (measured.norms[j] - expected).abs() <= 1e-10 * expected,
                "sigma {sigma}, block {j}: {} vs {expected}",
                measured.norms[j]
            );
        }
        let slope = -estimate_smoothness(&measured).unwrap();
        assert!(
            (slope + sigma).abs() <= 0.15,
            "sigma {sigma}: slope {slope}"
        );
    }
}

#[test]
fn estimator_recovers_synthesized_smoothness() {
    let grid = make_grid(12).unwrap();
    let p = partition(12);
    for sigma in [0.75, 1.0, 1.5, 2.0, 3.0] {
        for seed in 0..5 {
            let g = synthesize_rough(sigma, seed, grid).unwrap();
            let est = estimate_smoothness(&block_norms(&p, &g, 2.0).unwrap()).unwrap();
            assert!(
                (est - sigma).abs() <= 0.15,
                "sigma {sigma}, seed {seed}: {est}"
            );
        }
    }
}

#[test]
fn sobolev_norm_is_grid_stable() {
    let norm = |level: u32| {
        let p = partition(level);
        let g = synthesize_rough(4.0, 11, p.grid()).unwrap();
        sobolev_norm(&p, &g, 2.0, 2.0).unwrap()
    };
    let (coarse, fine) = (norm(10), norm(12));
    assert!(coarse.is_finite() && fine.is_finite());
    assert!((coarse - fine).abs() <= 0.05 * fine, "{coarse} vs {fine}");
}

#[test]
fn derivative_of_a_trigonometric_polynomial_is_exact() {
    let grid = make_grid(8).unwrap();
    let pi = std::f64::consts::PI;
    let g = GridFunction::from_fn(grid, |x| (3.0 * pi * x).sin() + 0.5 * (7.0 * pi * x).cos());
    let d = g.derivative();
    let expected: Vec<f64> = grid
        .points()
        .iter()
        .map(|&x| 3.0 * pi * (3.0 * pi * x).cos() - 3.5 * pi * (7.0 * pi * x).sin())
        .collect();
    assert!(sup_diff(d.values(), &expected) <= 1e-11 * sup(&expected));
}
