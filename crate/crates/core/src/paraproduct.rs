//! Functions on `[0, 1]`, the reflection extension to the torus, the
//! paraproducts `pi_1, pi_2, pi_3` and the paralinearization `L_u`.

use alloc::vec;
use alloc::vec::Vec;

use crate::dyadic::{DyadicPartition, GridFunction, TorusGrid};
use crate::{Error, Result};

/// Default reflection order.
pub const DEFAULT_ORDER: usize = 4;

/// Samples on the `[0, 1]` part of a torus grid: `2^(J-1) + 1` nodes,
/// node `i` at `x = i / 2^(J-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainFunction {
    grid: TorusGrid,
    values: Vec<f64>,
}

impl DomainFunction {
    pub fn new(grid: TorusGrid, values: Vec<f64>) -> Result<Self> {
        let expected = grid.half() + 1;
        if values.len() != expected {
            return Err(Error::Length {
                expected,
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.half() + 1],
        }
    }

    pub fn from_fn(grid: TorusGrid, f: impl Fn(f64) -> f64) -> Self {
        let m = grid.half();
        Self {
            grid,
            values: (0..=m).map(|i| f(i as f64 / m as f64)).collect(),
        }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Node coordinates `i / 2^(J-1)`.
    pub fn nodes(&self) -> Vec<f64> {
        let m = self.grid.half();
        (0..=m).map(|i| i as f64 / m as f64).collect()
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &DomainFunction, b: f64) -> Result<DomainFunction> {
        self.grid.ensure_same(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    pub fn add(&self, other: &DomainFunction) -> Result<DomainFunction> {
        self.combine(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &DomainFunction) -> Result<DomainFunction> {
        self.combine(1.0, other, -1.0)
    }

    pub fn scale(&self, a: f64) -> DomainFunction {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| a * v).collect(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Weights `b_i`, `i = 1..order`, of the reflection about the boundary value,
/// `u(-d) ~ u(0) + sum_i b_i (u(i d) - u(0))`: `sum_i b_i i^k = (-1)^k` for
/// `1 <= k < order`.
pub fn hestenes_coefficients(order: usize) -> Vec<f64> {
    (1..order)
        .map(|i| {
            let lagrange: f64 = (1..order)
                .filter(|&j| j != i)
                .map(|j| (1.0 + j as f64) / (j as f64 - i as f64))
                .product();
            -lagrange / i as f64
        })
        .collect()
}

/// `C^infinity` step from 0 on `t <= 0` to 1 on `t >= 1`.
pub fn smoothstep(t: f64) -> f64 {
    let psi = |s: f64| if s > 0.0 { (-1.0 / s).exp() } else { 0.0 };
    let a = psi(t);
    let b = psi(1.0 - t);
    a / (a + b)
}

fn check_order(order: usize) -> Result<()> {
    if !(2..=4).contains(&order) {
        return Err(Error::ReflectionOrder(order));
    }
    Ok(())
}

/// Extension `l_Omega u` to the whole torus.
///
/// On the arc `(-1, 0)` the result is `2 b - u(|x|)` plus Hestenes corrections
/// near `x = 0` and `x = -1`, where `b` blends `u(1)` into `u(0)` around
/// `x = -1/2`. Within `1 / (M - 1)` of each end the corrections turn this into
/// the order-`M` reflection `u_e + sum_i b_i (u(i d) - u_e)`, with `d` the
/// distance to that end and `u_e` the boundary value.
pub fn extend(u: &DomainFunction, order: usize) -> Result<GridFunction> {
    check_order(order)?;
    let grid = u.grid;
    let m = grid.half();
    let n = grid.len();
    let uv = &u.values;
    let (u0, u1) = (uv[0], uv[m]);
    let coeffs = hestenes_coefficients(order);
    let width = 1.0 / (order - 1) as f64;

    let mut g = vec![0.0; n];
    g[m..n].copy_from_slice(&uv[..m]);
    g[0] = u1;
    for (k, slot) in g.iter_mut().enumerate().take(m).skip(1) {
        let d0 = m - k;
        let d1 = k;
        let reflected = uv[d0];
        let mut e0 = 0.0;
        let mut e1 = 0.0;
        for (i, c) in (1..).zip(&coeffs) {
            if i * d0 <= m {
                e0 += c * (uv[i * d0] - u0);
            }
            if i * d1 <= m {
                e1 += c * (uv[m - i * d1] - u1);
            }
        }
        let c0 = e0 + (reflected - u0);
        let c1 = e1 + (reflected - u1);
        let chi0 = smoothstep(1.0 - (d0 as f64 / m as f64) / width);
        let chi1 = smoothstep(1.0 - (d1 as f64 / m as f64) / width);
        let w = smoothstep(2.0 * k as f64 / m as f64 - 0.5);
        let base = u1 + w * (u0 - u1);
        *slot = 2.0 * base - reflected + chi0 * c0 + chi1 * c1;
    }
    GridFunction::new(grid, g)
}

/// Samples of `g` on the `[0, 1]` nodes; `x = 1` is read at `x = -1`.
pub fn restrict(g: &GridFunction) -> DomainFunction {
    let grid = g.grid();
    let m = grid.half();
    let mut values = Vec::with_capacity(m + 1);
    values.extend_from_slice(&g.values()[m..]);
    values.push(g.values()[0]);
    DomainFunction { grid, values }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Paraproduct {
    /// `sum_{j>=2} S_{j-2} g * Phi_j h`.
    Pi1,
    /// `g h - pi_1(g, h) - pi_3(g, h)`.
    Pi2,
    /// `pi_1(h, g)`.
    Pi3,
}

impl Paraproduct {
    pub fn from_index(kind: u8) -> Option<Self> {
        match kind {
            1 => Some(Self::Pi1),
            2 => Some(Self::Pi2),
            3 => Some(Self::Pi3),
            _ => None,
        }
    }
}

fn pi1(partition: &DyadicPartition, g: &GridFunction, h: &GridFunction) -> GridFunction {
    let n = g.grid().len();
    let mut out = vec![0.0; n];
    for j in 2..=partition.j_max() {
        let low = g.multiply_table(partition.low_table(j - 2));
        let block = h.multiply_table(partition.block_table(j));
        for ((o, a), b) in out.iter_mut().zip(low.values()).zip(block.values()) {
            *o += a * b;
        }
    }
    GridFunction::new(g.grid(), out).expect("length preserved")
}

pub fn paraproduct(
    kind: Paraproduct,
    g: &GridFunction,
    h: &GridFunction,
    partition: &DyadicPartition,
) -> Result<GridFunction> {
    g.grid().ensure_same(&h.grid())?;
    partition.grid().ensure_same(&g.grid())?;
    Ok(match kind {
        Paraproduct::Pi1 => pi1(partition, g, h),
        Paraproduct::Pi3 => pi1(partition, h, g),
        Paraproduct::Pi2 => {
            let p1 = pi1(partition, g, h);
            let p3 = pi1(partition, h, g);
            remainder(g, h, &p1, &p3)
        }
    })
}

fn remainder(
    g: &GridFunction,
    h: &GridFunction,
    p1: &GridFunction,
    p3: &GridFunction,
) -> GridFunction {
    let values = g
        .values()
        .iter()
        .zip(h.values())
        .zip(p1.values().iter().zip(p3.values()))
        .map(|((a, b), (c, d))| a * b - c - d)
        .collect();
    GridFunction::new(g.grid(), values).expect("length preserved")
}

/// `L_u` for `N(u) = u u'`, with `l u` and `d(l u)` cached.
#[derive(Clone, Debug)]
pub struct Paralinearization<'a> {
    base: DomainFunction,
    extended: GridFunction,
    derivative: GridFunction,
    partition: &'a DyadicPartition,
    order: usize,
}

pub fn paralinearize<'a>(
    u: &DomainFunction,
    partition: &'a DyadicPartition,
    order: usize,
) -> Result<Paralinearization<'a>> {
    Paralinearization::new(u, partition, order)
}

impl<'a> Paralinearization<'a> {
    pub fn new(u: &DomainFunction, partition: &'a DyadicPartition, order: usize) -> Result<Self> {
        partition.grid().ensure_same(&u.grid())?;
        let extended = extend(u, order)?;
        let derivative = extended.derivative();
        Ok(Self {
            base: u.clone(),
            extended,
            derivative,
            partition,
            order,
        })
    }

    pub fn base(&self) -> &DomainFunction {
        &self.base
    }

    pub fn extended(&self) -> &GridFunction {
        &self.extended
    }

    pub fn extended_derivative(&self) -> &GridFunction {
        &self.derivative
    }

    pub fn partition(&self) -> &'a DyadicPartition {
        self.partition
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn grid(&self) -> TorusGrid {
        self.base.grid()
    }

    /// `pi_1(lu, dlv) + pi_2(lu, dlv) + pi_3(lv, dlu)` on the whole torus.
    pub fn three_term_sum(&self, v: &DomainFunction) -> Result<GridFunction> {
        self.grid().ensure_same(&v.grid())?;
        self.three_term_sum_extended(&extend(v, self.order)?)
    }

    /// [`Self::three_term_sum`] for a `v` already given on the whole torus.
    pub fn three_term_sum_extended(&self, lv: &GridFunction) -> Result<GridFunction> {
        self.grid().ensure_same(&lv.grid())?;
        let dlv = lv.derivative();
        let p = self.partition;
        let t1 = pi1(p, &self.extended, &dlv);
        let t3 = pi1(p, &dlv, &self.extended);
        let t2 = remainder(&self.extended, &dlv, &t1, &t3);
        let t3v = pi1(p, &self.derivative, lv);
        let values = t1
            .values()
            .iter()
            .zip(t2.values())
            .zip(t3v.values())
            .map(|((a, b), c)| a + b + c)
            .collect();
        GridFunction::new(self.grid(), values)
    }

    /// `L_u v`.
    pub fn apply(&self, v: &DomainFunction) -> Result<DomainFunction> {
        Ok(restrict(&self.three_term_sum(v)?).scale(-1.0))
    }

    /// Discrete `N(u) = restrict(l u * d(l u))`.
    pub fn nonlinearity(&self) -> DomainFunction {
        restrict(&self.extended.mul(&self.derivative).expect("same grid"))
    }
}

pub fn apply_l(l: &Paralinearization<'_>, v: &DomainFunction) -> Result<DomainFunction> {
    l.apply(v)
}
