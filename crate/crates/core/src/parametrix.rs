//! Finite Neumann series `P^(N) = I + RL + ... + (RL)^(N-1)` with
//! `RL = R_D L_u`, the parametrix residual and per-iterate smoothing.

use alloc::vec::Vec;

use crate::dyadic::{block_norms, estimate_smoothness, least_squares_slope, DyadicPartition};
use crate::green::{poisson_part, solve_dirichlet, ProblemInstance};
use crate::paraproduct::{extend, paralinearize, DomainFunction, Paralinearization, DEFAULT_ORDER};
use crate::{Error, Result};

pub const MAX_TERMS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParametrixConfig {
    terms: usize,
    order: usize,
}

impl ParametrixConfig {
    pub fn new(terms: usize, order: usize) -> Result<Self> {
        if terms > MAX_TERMS {
            return Err(Error::SeriesLength(terms));
        }
        if !(2..=4).contains(&order) {
            return Err(Error::ReflectionOrder(order));
        }
        Ok(Self { terms, order })
    }

    pub fn with_terms(terms: usize) -> Result<Self> {
        Self::new(terms, DEFAULT_ORDER)
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

/// `R_D L_u v`.
pub fn apply_rl(l: &Paralinearization<'_>, v: &DomainFunction) -> Result<DomainFunction> {
    Ok(solve_dirichlet(&l.apply(v)?))
}

/// `(R_D L_u)^k v`.
pub fn rl_power(l: &Paralinearization<'_>, v: &DomainFunction, k: usize) -> Result<DomainFunction> {
    let mut w = v.clone();
    for _ in 0..k {
        w = apply_rl(l, &w)?;
    }
    Ok(w)
}

/// `sum_{k<N} (R_D L_u)^k w` by Horner accumulation; `N = 0` gives zero.
pub fn apply_parametrix(
    l: &Paralinearization<'_>,
    cfg: &ParametrixConfig,
    w: &DomainFunction,
) -> Result<DomainFunction> {
    l.grid().ensure_same(&w.grid())?;
    if cfg.terms == 0 {
        return Ok(DomainFunction::zeros(w.grid()));
    }
    let mut acc = w.clone();
    for _ in 1..cfg.terms {
        acc = w.add(&apply_rl(l, &acc)?)?;
    }
    Ok(acc)
}

/// The smoothing remainder of the Green operator. The solver is exact, so
/// this is the zero operator.
pub fn green_remainder(u: &DomainFunction) -> DomainFunction {
    DomainFunction::zeros(u.grid())
}

/// `u - [P^(N)(R_D f + K_D phi) + R u + (R_D L_u)^N u]` and its sup norm.
pub fn parametrix_residual(
    instance: &ProblemInstance,
    u: &DomainFunction,
    partition: &DyadicPartition,
    cfg: &ParametrixConfig,
) -> Result<(DomainFunction, f64)> {
    instance.grid().ensure_same(&u.grid())?;
    let l = paralinearize(u, partition, cfg.order)?;
    let data = solve_dirichlet(&instance.f).add(&poisson_part(u.grid(), instance.boundary))?;
    let series = apply_parametrix(&l, cfg, &data)?;
    let tail = rl_power(&l, u, cfg.terms)?;
    let rho = u.sub(&series)?.sub(&green_remainder(u))?.sub(&tail)?;
    let sup = rho.sup_norm();
    Ok((rho, sup))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SmoothnessSlot {
    Measured(f64),
    /// Above the extension's ceiling, or too few blocks above the noise floor.
    Saturated,
}

impl SmoothnessSlot {
    pub fn value(&self) -> Option<f64> {
        match *self {
            SmoothnessSlot::Measured(s) => Some(s),
            SmoothnessSlot::Saturated => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothingReport {
    /// `sigma_k` for `w_k = (R_D L_u)^k u`, `k = 0..=N`.
    pub exponents: Vec<SmoothnessSlot>,
    /// `sigma_{k+1} - sigma_k` where both ends are measured.
    pub gains: Vec<Option<f64>>,
    /// Readings at or above this are reported as saturated.
    pub ceiling: f64,
}

/// Block-decay exponents of the extended iterates `(R_D L_u)^k u`.
pub fn smoothing_profile(
    u: &DomainFunction,
    partition: &DyadicPartition,
    cfg: &ParametrixConfig,
    p: f64,
) -> Result<SmoothingReport> {
    if u.sup_norm() == 0.0 {
        return Err(Error::TrivialInput);
    }
    let ceiling = cfg.order as f64 - 0.5;
    let l = paralinearize(u, partition, cfg.order)?;
    let mut w = u.clone();
    let mut exponents = Vec::with_capacity(cfg.terms + 1);
    for k in 0..=cfg.terms {
        if k > 0 {
            w = apply_rl(&l, &w)?;
        }
        let profile = block_norms(partition, &extend(&w, cfg.order)?, p)?;
        let slot = match estimate_smoothness(&profile) {
            Ok(s) if s < ceiling => SmoothnessSlot::Measured(s),
            Ok(_) | Err(Error::TooFewBlocks { .. }) => SmoothnessSlot::Saturated,
            Err(e) => return Err(e),
        };
        exponents.push(slot);
    }
    let gains = exponents
        .windows(2)
        .map(|w| match (w[0].value(), w[1].value()) {
            (Some(a), Some(b)) => Some(b - a),
            _ => None,
        })
        .collect();
    Ok(SmoothingReport {
        exponents,
        gains,
        ceiling,
    })
}

/// Least-squares convergence order of errors measured at grid levels.
#[derive(Clone, Debug, PartialEq)]
pub enum OrderFit {
    /// Fitted order from the levels whose error clears the floor.
    Fitted { order: f64, levels_used: usize },
    /// Fewer than two errors above the floor: the scheme is at roundoff.
    AtRoundoff,
}

impl OrderFit {
    pub fn meets(&self, order: f64) -> bool {
        match *self {
            OrderFit::Fitted { order: o, .. } => o >= order,
            OrderFit::AtRoundoff => true,
        }
    }

    pub fn order(&self) -> Option<f64> {
        match *self {
            OrderFit::Fitted { order, .. } => Some(order),
            OrderFit::AtRoundoff => None,
        }
    }
}

/// Relative level below which refinement errors count as roundoff.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

/// Fits `error ~ C 2^(-order J)`, skipping errors at or below `floor`.
pub fn fit_order(levels: &[u32], errors: &[f64], floor: f64) -> OrderFit {
    let points: Vec<(f64, f64)> = levels
        .iter()
        .zip(errors)
        .filter(|(_, &e)| e > floor)
        .map(|(&j, &e)| (j as f64, e.log2()))
        .collect();
    if points.len() < 2 {
        return OrderFit::AtRoundoff;
    }
    OrderFit::Fitted {
        order: -least_squares_slope(&points),
        levels_used: points.len(),
    }
}
