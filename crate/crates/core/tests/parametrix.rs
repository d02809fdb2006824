mod common;

use common::{partition, random_domain, sup_diff};
use paracalc_core::dyadic::synthesize_rough;
use paracalc_core::green::{manufacture, poisson_part, trace, BoundaryData, Mode};
use paracalc_core::parametrix::{
    apply_parametrix, apply_rl, fit_order, parametrix_residual, rl_power, smoothing_profile,
    ParametrixConfig, ROUNDOFF_FLOOR,
};
use paracalc_core::paraproduct::{apply_l, paralinearize, restrict, DomainFunction, DEFAULT_ORDER};
use paracalc_core::regcalc::{order_omega, SmoothnessPoint, DEFAULT_EPSILON};
use std::f64::consts::PI;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / (2 * panels) as f64;
    let mut sum = f(a) + f(b);
    for i in 1..2 * panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// `int_0^1 G(x, y) f(y) dy` with `G(x, y) = min(x, y) (1 - max(x, y))`.
fn green_integral(f: impl Fn(f64) -> f64 + Copy, x: f64) -> f64 {
    let left = simpson(|y| y * (1.0 - x) * f(y), 0.0, x, 200);
    let right = simpson(|y| x * (1.0 - y) * f(y), x, 1.0, 200);
    left + right
}

#[test]
fn green_kernel_integral_oracle() {
    let rhs = |y: f64| -PI * (PI * y).sin() * (PI * y).cos();
    for x in [0.1, 0.37, 0.5, 0.81] {
        let closed = -(2.0 * PI * x).sin() / (8.0 * PI);
        assert!((green_integral(rhs, x) - closed).abs() < 1e-10);
    }

    let p = partition(12);
    let u = DomainFunction::from_fn(p.grid(), |x| (PI * x).sin());
    let l = paralinearize(&u, &p, DEFAULT_ORDER).unwrap();
    let w = apply_rl(&l, &u).unwrap();
    let nodes = u.nodes();
    let mut worst: f64 = 0.0;
    for i in (0..nodes.len()).step_by(7) {
        worst = worst.max((w.values()[i] - green_integral(rhs, nodes[i])).abs());
    }
    assert!(worst <= 1e-5, "sup error {worst}");

    let discrete = apply_l(&l, &u).unwrap();
    let direct = paracalc_core::green::solve_dirichlet(&discrete);
    assert_eq!(direct, w);
}

#[test]
fn telescoping_identity() {
    let p = partition(9);
    let u = DomainFunction::from_fn(p.grid(), |x| 0.8 * (PI * x).sin() + 0.3 * x - 0.2);
    let l = paralinearize(&u, &p, DEFAULT_ORDER).unwrap();
    for seed in 0..20u64 {
        let v = random_domain(p.grid(), seed);
        let defect = v.sub(&apply_rl(&l, &v).unwrap()).unwrap();
        for n in 1..=5 {
            let cfg = ParametrixConfig::new(n, DEFAULT_ORDER).unwrap();
            let left = apply_parametrix(&l, &cfg, &defect).unwrap();
            let right = v.sub(&rl_power(&l, &v, n).unwrap()).unwrap();
            let err = sup_diff(left.values(), right.values());
            assert!(err <= 1e-10 * v.sup_norm(), "seed {seed}, N = {n}: {err}");
        }
    }
}

fn patterns() -> Vec<(Vec<Mode>, BoundaryData)> {
    vec![
        (
            vec![Mode::Sine { k: 1, amp: 1.0 }],
            BoundaryData::new(0.0, 0.0),
        ),
        (
            vec![Mode::Sine { k: 1, amp: 0.3 }, Mode::Sine { k: 2, amp: 0.1 }],
            BoundaryData::new(0.2, -0.1),
        ),
        (
            vec![
                Mode::Cosine { k: 1, amp: 0.5 },
                Mode::Cosine { k: 3, amp: 0.2 },
            ],
            BoundaryData::new(-0.3, 0.6),
        ),
    ]
}

fn residual(modes: &[Mode], boundary: BoundaryData, level: u32, terms: usize) -> f64 {
    let p = partition(level);
    let inst = manufacture(modes, boundary, p.grid()).unwrap();
    let u = inst.u_ref.clone().unwrap();
    let cfg = ParametrixConfig::new(terms, DEFAULT_ORDER).unwrap();
    parametrix_residual(&inst, &u, &p, &cfg).unwrap().1
}

#[test]
fn parametrix_residual_converges() {
    let levels = [9, 10, 11, 12];
    for (modes, boundary) in patterns() {
        for n in 1..=3 {
            let errors: Vec<f64> = levels
                .iter()
                .map(|&j| residual(&modes, boundary, j, n))
                .collect();
            let fit = fit_order(&levels, &errors, ROUNDOFF_FLOOR);
            assert!(
                fit.meets(2.0),
                "{modes:?}, N = {n}: {fit:?} from {errors:?}"
            );
            assert!(errors[3] <= 1e-4);
        }
    }
}

#[test]
fn more_terms_never_hurt() {
    for (modes, boundary) in patterns() {
        for level in [10, 11] {
            let res: Vec<f64> = (1..=4)
                .map(|n| residual(&modes, boundary, level, n))
                .collect();
            for w in res.windows(2) {
                assert!(w[1] <= w[0] + 1e-10, "{modes:?} at J = {level}: {res:?}");
            }
        }
    }
}

#[test]
fn zero_instance_has_zero_residual() {
    let p = partition(9);
    let inst = manufacture(&[], BoundaryData::new(0.0, 0.0), p.grid()).unwrap();
    let u = inst.u_ref.clone().unwrap();
    for n in 0..4 {
        let cfg = ParametrixConfig::new(n, DEFAULT_ORDER).unwrap();
        assert_eq!(parametrix_residual(&inst, &u, &p, &cfg).unwrap().1, 0.0);
    }
}

#[test]
fn smoothing_gain_matches_the_operator_order() {
    let p = partition(12);
    let cfg = ParametrixConfig::new(2, DEFAULT_ORDER).unwrap();
    for s0 in [0.75, 1.5] {
        let omega = order_omega(&SmoothnessPoint::new(s0, 2.0, 1).unwrap(), DEFAULT_EPSILON)
            .unwrap()
            .omega;
        for seed in 0..5u64 {
            let rough = restrict(&synthesize_rough(s0, seed, p.grid()).unwrap());
            let u = rough.sub(&poisson_part(p.grid(), trace(&rough))).unwrap();
            let report = smoothing_profile(&u, &p, &cfg, 2.0).unwrap();
            assert_eq!(report.exponents.len(), 3);
            for (k, gain) in report.gains.iter().enumerate() {
                let gain = gain.expect("rough iterates stay below the ceiling");
                assert!(
                    (gain - (2.0 - omega)).abs() <= 0.3,
                    "s0 {s0}, seed {seed}, step {k}: gain {gain}"
                );
            }
        }
    }
}
