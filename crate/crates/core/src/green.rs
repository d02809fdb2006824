//! Trace, zero-boundary solver, Poisson part and forward operator for
//! `-u''` on `[0, 1]`, plus manufactured problem instances.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::dyadic::{GridFunction, TorusGrid};
use crate::paraproduct::{extend, restrict, DomainFunction};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryData {
    pub phi0: f64,
    pub phi1: f64,
}

impl BoundaryData {
    pub fn new(phi0: f64, phi1: f64) -> Self {
        Self { phi0, phi1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    /// `amp * sin(k pi x)`.
    Sine { k: u32, amp: f64 },
    /// `amp * (cos(k pi x) - (1 - x) - (-1)^k x)`, which vanishes at both ends.
    Cosine { k: u32, amp: f64 },
}

impl Mode {
    fn parts(&self, x: f64) -> (f64, f64, f64) {
        match *self {
            Mode::Sine { k, amp } => {
                let w = k as f64 * PI;
                let (s, c) = (w * x).sin_cos();
                (amp * s, amp * w * c, -amp * w * w * s)
            }
            Mode::Cosine { k, amp } => {
                let w = k as f64 * PI;
                let (s, c) = (w * x).sin_cos();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                (
                    amp * (c - (1.0 - x) - sign * x),
                    amp * (-w * s + 1.0 - sign),
                    -amp * w * w * c,
                )
            }
        }
    }

    fn index(&self) -> u32 {
        match *self {
            Mode::Sine { k, .. } | Mode::Cosine { k, .. } => k,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    pub f: DomainFunction,
    pub boundary: BoundaryData,
    pub u_ref: Option<DomainFunction>,
}

impl ProblemInstance {
    pub fn grid(&self) -> TorusGrid {
        self.f.grid()
    }
}

pub fn trace(u: &DomainFunction) -> BoundaryData {
    let v = u.values();
    BoundaryData::new(v[0], v[v.len() - 1])
}

/// Zero-boundary solution of `-u'' = f`.
///
/// The affine interpolant `q` of the end values of `f` is solved in closed
/// form. The rest `f - q` vanishes at both ends and is inverted mode by mode
/// in the sine basis, via the odd periodic extension and the torus FFT.
pub fn solve_dirichlet(f: &DomainFunction) -> DomainFunction {
    let grid = f.grid();
    let m = grid.half();
    let n = grid.len();
    let fv = f.values();
    let (a, b) = (fv[0], fv[m]);
    let h = 1.0 / m as f64;

    let mut odd = vec![0.0; n];
    for i in 1..m {
        let x = i as f64 * h;
        let r = fv[i] - (a * (1.0 - x) + b * x);
        odd[m + i] = r;
        odd[m - i] = -r;
    }
    let g = GridFunction::new(grid, odd).expect("length matches");
    let spec: Vec<Complex64> = g
        .spectrum()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let xi = grid.wavenumber(k);
            if xi == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                c / (xi * xi)
            }
        })
        .collect();
    let solved = GridFunction::from_spectrum(grid, spec).expect("length matches");
    let mut out = restrict(&solved).into_values();
    for (i, v) in out.iter_mut().enumerate() {
        let x = i as f64 * h;
        *v += a * x * (1.0 - x) * (2.0 - x) / 6.0 + b * x * (1.0 - x * x) / 6.0;
    }
    out[0] = 0.0;
    out[m] = 0.0;
    DomainFunction::new(grid, out).expect("length matches")
}

/// Harmonic extension `phi0 (1 - x) + phi1 x`.
pub fn poisson_part(grid: TorusGrid, b: BoundaryData) -> DomainFunction {
    let m = grid.half();
    let mut values: Vec<f64> = (0..=m)
        .map(|i| {
            let x = i as f64 / m as f64;
            b.phi0 * (1.0 - x) + b.phi1 * x
        })
        .collect();
    values[0] = b.phi0;
    values[m] = b.phi1;
    DomainFunction::new(grid, values).expect("length matches")
}

/// `-u''` through the spectral second derivative of the extension.
pub fn apply_a(u: &DomainFunction, order: usize) -> Result<DomainFunction> {
    let g = extend(u, order)?;
    Ok(restrict(&g.derivative().derivative()).scale(-1.0))
}

/// Instance with `u_ref = phi0 (1 - x) + phi1 x + sum of modes` and the
/// analytic `f = -u_ref'' + u_ref u_ref'`.
pub fn manufacture(
    modes: &[Mode],
    boundary: BoundaryData,
    grid: TorusGrid,
) -> Result<ProblemInstance> {
    let limit = grid.len() >> 3;
    if modes.len() > limit {
        return Err(Error::TooManyModes {
            count: modes.len(),
            limit,
        });
    }
    if modes.iter().any(|m| m.index() == 0) {
        return Err(Error::ModeIndex);
    }
    let slope = boundary.phi1 - boundary.phi0;
    let eval = |x: f64| {
        let mut u = boundary.phi0 * (1.0 - x) + boundary.phi1 * x;
        let mut du = slope;
        let mut ddu = 0.0;
        for mode in modes {
            let (a, b, c) = mode.parts(x);
            u += a;
            du += b;
            ddu += c;
        }
        (u, du, ddu)
    };
    let m = grid.half();
    let mut u_ref = Vec::with_capacity(m + 1);
    let mut f = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let (u, du, ddu) = eval(i as f64 / m as f64);
        u_ref.push(u);
        f.push(-ddu + u * du);
    }
    let u_ref = DomainFunction::new(grid, u_ref)?;
    Ok(ProblemInstance {
        f: DomainFunction::new(grid, f)?,
        boundary: trace(&u_ref),
        u_ref: Some(u_ref),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::make_grid;

    fn sup_diff(a: &DomainFunction, f: impl Fn(f64) -> f64) -> f64 {
        a.nodes()
            .iter()
            .zip(a.values())
            .fold(0.0f64, |m, (x, v)| m.max((v - f(*x)).abs()))
    }

    #[test]
    fn traces() {
        let grid = make_grid(8).unwrap();
        assert_eq!(
            trace(&DomainFunction::from_fn(grid, |x| x)),
            BoundaryData::new(0.0, 1.0)
        );
        let s = trace(&DomainFunction::from_fn(grid, |x| (PI * x).sin()));
        assert_eq!(s.phi0, 0.0);
        assert!(s.phi1.abs() < 1e-15);
        assert_eq!(
            trace(&DomainFunction::from_fn(grid, |_| 1.0)),
            BoundaryData::new(1.0, 1.0)
        );
    }

    #[test]
    fn solver_examples() {
        let grid = make_grid(12).unwrap();
        let one = DomainFunction::from_fn(grid, |_| 1.0);
        assert!(sup_diff(&solve_dirichlet(&one), |x| x * (1.0 - x) / 2.0) <= 1e-8);
        let s = DomainFunction::from_fn(grid, |x| (PI * x).sin());
        assert!(sup_diff(&solve_dirichlet(&s), |x| (PI * x).sin() / (PI * PI)) <= 1e-12);
        let z = solve_dirichlet(&DomainFunction::zeros(grid));
        assert!(z.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn solver_hits_zero_trace_exactly() {
        let grid = make_grid(9).unwrap();
        let f = DomainFunction::from_fn(grid, |x| (5.0 * x).exp() - 3.0);
        assert_eq!(trace(&solve_dirichlet(&f)), BoundaryData::new(0.0, 0.0));
    }

    #[test]
    fn poisson_examples() {
        let grid = make_grid(8).unwrap();
        assert!(
            sup_diff(&poisson_part(grid, BoundaryData::new(1.0, 0.0)), |x| 1.0
                - x)
                < 1e-15
        );
        assert!(poisson_part(grid, BoundaryData::new(0.0, 0.0))
            .values()
            .iter()
            .all(|&v| v == 0.0));
        assert!(poisson_part(grid, BoundaryData::new(2.0, 2.0))
            .values()
            .iter()
            .all(|&v| v == 2.0));
        let b = BoundaryData::new(-0.3, 1.7);
        assert_eq!(trace(&poisson_part(grid, b)), b);
    }

    #[test]
    fn forward_operator_examples() {
        let grid = make_grid(12).unwrap();
        let s = DomainFunction::from_fn(grid, |x| (PI * x).sin());
        let err = sup_diff(&apply_a(&s, 4).unwrap(), |x| PI * PI * (PI * x).sin());
        assert!(err <= 1e-6, "{err}");

        let interior = |a: &DomainFunction, f: &dyn Fn(f64) -> f64| {
            a.nodes()
                .iter()
                .zip(a.values())
                .filter(|(x, _)| **x >= 0.1 && **x <= 0.9)
                .fold(0.0f64, |m, (x, v)| m.max((v - f(*x)).abs()))
        };
        let q = DomainFunction::from_fn(grid, |x| x * (1.0 - x));
        assert!(interior(&apply_a(&q, 4).unwrap(), &|_| 2.0) <= 1e-4);
        let lin = DomainFunction::from_fn(grid, |x| 0.4 - 1.3 * x);
        assert!(interior(&apply_a(&lin, 4).unwrap(), &|_| 0.0) <= 1e-6);
    }

    #[test]
    fn manufactured_examples() {
        let grid = make_grid(10).unwrap();
        let inst = manufacture(
            &[Mode::Sine { k: 1, amp: 1.0 }],
            BoundaryData::new(0.0, 0.0),
            grid,
        )
        .unwrap();
        let expect = |x: f64| PI * PI * (PI * x).sin() + PI * (PI * x).sin() * (PI * x).cos();
        assert!(sup_diff(&inst.f, expect) < 1e-12);
        assert_eq!(inst.boundary.phi0, 0.0);
        assert!(inst.boundary.phi1.abs() < 1e-15);

        let zero = manufacture(&[], BoundaryData::new(0.0, 0.0), grid).unwrap();
        assert!(zero.f.values().iter().all(|&v| v == 0.0));
        assert_eq!(zero.boundary, BoundaryData::new(0.0, 0.0));

        let one = manufacture(&[], BoundaryData::new(1.0, 1.0), grid).unwrap();
        assert!(one.f.values().iter().all(|&v| v == 0.0));
        assert_eq!(one.boundary, BoundaryData::new(1.0, 1.0));
    }

    #[test]
    fn cosine_modes_keep_the_trace() {
        let grid = make_grid(9).unwrap();
        let b = BoundaryData::new(0.1, 0.4);
        let inst = manufacture(
            &[
                Mode::Cosine { k: 1, amp: 0.2 },
                Mode::Cosine { k: 2, amp: -0.1 },
            ],
            b,
            grid,
        )
        .unwrap();
        assert!((inst.boundary.phi0 - 0.1).abs() < 1e-15);
        assert!((inst.boundary.phi1 - 0.4).abs() < 1e-15);
        let u = inst.u_ref.unwrap();
        let expect = |x: f64| {
            0.1 * (1.0 - x) + 0.4 * x + 0.2 * ((PI * x).cos() - (1.0 - x) + x)
                - 0.1 * ((2.0 * PI * x).cos() - 1.0)
        };
        assert!(sup_diff(&u, expect) < 1e-15);
    }

    #[test]
    fn mode_limits() {
        let grid = make_grid(4).unwrap();
        let modes = [Mode::Sine { k: 1, amp: 1.0 }; 3];
        assert_eq!(
            manufacture(&modes, BoundaryData::new(0.0, 0.0), grid).unwrap_err(),
            Error::TooManyModes { count: 3, limit: 2 }
        );
        assert_eq!(
            manufacture(
                &[Mode::Sine { k: 0, amp: 1.0 }],
                BoundaryData::new(0.0, 0.0),
                grid
            )
            .unwrap_err(),
            Error::ModeIndex
        );
    }
}
