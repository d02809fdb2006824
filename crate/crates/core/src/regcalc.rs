//! Parameter domains over the `(s, p)` plane, the order of `L_u`, Sobolev
//! embeddings, the minimal number of parametrix factors and region rasters.

use alloc::vec::Vec;

use crate::{Error, Result};

pub const DEFAULT_EPSILON: f64 = 0.01;
pub const DEFAULT_MAX_N: u32 = 64;
/// Tolerance for detecting `s0 = n / p0`. Strict domain inequalities also
/// demand this margin, so boundary points never pass through roundoff.
pub const EQUALITY_TOLERANCE: f64 = 1e-12;
pub const MAX_RESOLUTION: usize = 2000;

fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// Smoothness `s`, integrability `1 < p < infinity`, dimension `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothnessPoint {
    pub s: f64,
    pub p: f64,
    pub n: u32,
}

impl SmoothnessPoint {
    pub fn new(s: f64, p: f64, n: u32) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidPoint("s must be finite"));
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidPoint("p must lie in (1, infinity)"));
        }
        if n == 0 {
            return Err(Error::InvalidPoint("n must be positive"));
        }
        Ok(Self { s, p, n })
    }

    fn nd(&self) -> f64 {
        self.n as f64
    }
}

fn same_dimension(a: &SmoothnessPoint, b: &SmoothnessPoint) -> Result<()> {
    if a.n != b.n {
        return Err(Error::Dimension(a.n, b.n));
    }
    Ok(())
}

fn exceeds(lhs: f64, rhs: f64) -> bool {
    lhs > rhs + EQUALITY_TOLERANCE
}

fn a_holds(s: f64, invp: f64) -> bool {
    exceeds(s, invp)
}

fn n_holds(s: f64, invp: f64, n: f64) -> bool {
    exceeds(s, 0.5 + pos(n * invp - 0.5 * n)) && exceeds(s, n * invp - 1.0)
}

fn lu_holds(s: f64, invp: f64, s0: f64, invp0: f64, n: f64) -> bool {
    exceeds(s + s0, 1.0 + pos(n * invp0 + n * invp - n))
}

/// `s > 1/p`.
pub fn in_domain_a(pt: &SmoothnessPoint) -> bool {
    a_holds(pt.s, 1.0 / pt.p)
}

/// `s > 1/2 + (n/p - n/2)_+` and `s > n/p - 1`.
pub fn in_domain_n(pt: &SmoothnessPoint) -> bool {
    n_holds(pt.s, 1.0 / pt.p, pt.nd())
}

/// `s + s0 > 1 + (n/p0 + n/p - n)_+`.
pub fn in_domain_lu(pt: &SmoothnessPoint, apriori: &SmoothnessPoint) -> Result<bool> {
    same_dimension(pt, apriori)?;
    Ok(lu_holds(
        pt.s,
        1.0 / pt.p,
        apriori.s,
        1.0 / apriori.p,
        pt.nd(),
    ))
}

/// `D_u = D(A) and D(L_u)`.
pub fn in_domain_u(pt: &SmoothnessPoint, apriori: &SmoothnessPoint) -> Result<bool> {
    Ok(in_domain_a(pt) && in_domain_lu(pt, apriori)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorOrder {
    pub omega: f64,
    pub epsilon: f64,
}

/// `omega = 1 + (n/p0 - s0)_+`, plus `epsilon` when `s0 = n/p0`.
pub fn order_omega(apriori: &SmoothnessPoint, epsilon: f64) -> Result<OperatorOrder> {
    if !(epsilon >= 0.0) {
        return Err(Error::Epsilon(epsilon));
    }
    let critical = apriori.nd() / apriori.p;
    let mut omega = 1.0 + pos(critical - apriori.s);
    if (apriori.s - critical).abs() <= EQUALITY_TOLERANCE {
        omega += epsilon;
    }
    Ok(OperatorOrder { omega, epsilon })
}

/// `H^{s}_{p} -> H^{t}_{r}` on a bounded domain.
pub fn embeds(src: &SmoothnessPoint, dst: &SmoothnessPoint) -> Result<bool> {
    same_dimension(src, dst)?;
    let n = src.nd();
    Ok(dst.s <= src.s && (dst.p <= src.p || src.s - n / src.p >= dst.s - n / dst.p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Start,
    Gain,
    Embed,
}

impl Move {
    pub fn label(&self) -> &'static str {
        match self {
            Move::Start => "start",
            Move::Gain => "gain",
            Move::Embed => "embed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathStep {
    pub s: f64,
    pub p: f64,
    pub step: Move,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalNResult {
    /// `None` when no `N <= max_N` lands.
    pub n: Option<u32>,
    pub omega: f64,
    pub gain: f64,
    pub path: Vec<PathStep>,
    /// The same search with every state, target included, kept inside `D(A)` and `D(N)`.
    pub bootstrap_n: Option<u32>,
    pub target_in_domain_n: bool,
}

impl MinimalNResult {
    /// Reached through `D_u` where the pure `D(N)` iteration cannot go.
    pub fn beyond_bootstrap(&self) -> bool {
        self.n.is_some() && self.bootstrap_n.is_none() && !self.target_in_domain_n
    }
}

/// `(s0 + k (2 - omega), p0)`.
pub fn gain_state(apriori: &SmoothnessPoint, gain: f64, k: u32) -> SmoothnessPoint {
    SmoothnessPoint {
        s: apriori.s + k as f64 * gain,
        p: apriori.p,
        n: apriori.n,
    }
}

fn require(holds: bool, inequality: &'static str, lhs: f64, rhs: f64) -> Result<()> {
    if holds {
        Ok(())
    } else {
        Err(Error::Precondition {
            inequality,
            lhs,
            rhs,
        })
    }
}

fn check_preconditions(apriori: &SmoothnessPoint, target: &SmoothnessPoint) -> Result<()> {
    same_dimension(apriori, target)?;
    let n = apriori.nd();
    let (s0, ip0) = (apriori.s, 1.0 / apriori.p);
    require(
        a_holds(s0, ip0),
        "a priori point in D(A): s0 > 1/p0",
        s0,
        ip0,
    )?;
    let n_floor = 0.5 + pos(n * ip0 - 0.5 * n);
    require(
        exceeds(s0, n_floor),
        "a priori point in D(N): s0 > 1/2 + (n/p0 - n/2)_+",
        s0,
        n_floor,
    )?;
    require(
        exceeds(s0, n * ip0 - 1.0),
        "a priori point in D(N): s0 > n/p0 - 1",
        s0,
        n * ip0 - 1.0,
    )?;
    let (t, ir) = (target.s, 1.0 / target.p);
    require(a_holds(t, ir), "target in D(A): t > 1/r", t, ir)?;
    let lu_rhs = 1.0 + pos(n * ip0 + n * ir - n);
    require(
        exceeds(t + s0, lu_rhs),
        "target in D(L_u): t + s0 > 1 + (n/p0 + n/r - n)_+",
        t + s0,
        lu_rhs,
    )?;
    Ok(())
}

fn first_landing(
    apriori: &SmoothnessPoint,
    target: &SmoothnessPoint,
    gain: f64,
    max_n: u32,
    admissible: impl Fn(&SmoothnessPoint) -> bool,
) -> Option<u32> {
    let lands = |k: u32| embeds(&gain_state(apriori, gain, k), target).unwrap_or(false);
    // Smoothness needed at p0 before the final embedding applies.
    let n = apriori.nd();
    let needed = if target.p <= apriori.p {
        target.s
    } else {
        target.s + n / apriori.p - n / target.p
    };
    let mut k = if apriori.s >= needed {
        0
    } else {
        let steps = (needed - apriori.s) / gain;
        if steps > max_n as f64 {
            max_n
        } else {
            steps.ceil() as u32
        }
    };
    while k > 0 && lands(k - 1) {
        k -= 1;
    }
    while k <= max_n && !lands(k) {
        k += 1;
    }
    if k > max_n {
        return None;
    }
    (0..=k)
        .all(|i| admissible(&gain_state(apriori, gain, i)))
        .then_some(k)
}

/// Smallest `N <= max_n` with `(s0 + N (2 - omega), p0)` embedding into the
/// target, every state along the way inside `D_u`.
pub fn minimal_n(
    apriori: &SmoothnessPoint,
    target: &SmoothnessPoint,
    epsilon: f64,
    max_n: u32,
) -> Result<MinimalNResult> {
    check_preconditions(apriori, target)?;
    let omega = order_omega(apriori, epsilon)?.omega;
    let gain = 2.0 - omega;
    let in_du = |pt: &SmoothnessPoint| in_domain_u(pt, apriori).unwrap_or(false);
    let n = first_landing(apriori, target, gain, max_n, in_du);

    let in_dn = |pt: &SmoothnessPoint| in_domain_a(pt) && in_domain_n(pt);
    let target_in_domain_n = in_dn(target);
    let bootstrap_n = if target_in_domain_n {
        first_landing(apriori, target, gain, max_n, in_dn)
    } else {
        None
    };

    let mut path = Vec::new();
    if let Some(k) = n {
        path.push(PathStep {
            s: apriori.s,
            p: apriori.p,
            step: Move::Start,
        });
        for i in 1..=k {
            let st = gain_state(apriori, gain, i);
            path.push(PathStep {
                s: st.s,
                p: st.p,
                step: Move::Gain,
            });
        }
        let last = gain_state(apriori, gain, k);
        if last.s != target.s || last.p != target.p {
            path.push(PathStep {
                s: target.s,
                p: target.p,
                step: Move::Embed,
            });
        }
    }
    Ok(MinimalNResult {
        n,
        omega,
        gain,
        path,
        bootstrap_n,
        target_in_domain_n,
    })
}

/// Checks a witness path: it opens at the a priori point, every gain step adds
/// `gain` at fixed `p` and stays inside `D_u`, and the last state is the
/// target, reached by at most one final embedding.
pub fn path_is_valid(
    path: &[PathStep],
    apriori: &SmoothnessPoint,
    target: &SmoothnessPoint,
    gain: f64,
) -> bool {
    let Some(first) = path.first() else {
        return false;
    };
    if first.step != Move::Start || first.s != apriori.s || first.p != apriori.p {
        return false;
    }
    let state = |st: &PathStep| SmoothnessPoint {
        s: st.s,
        p: st.p,
        n: apriori.n,
    };
    let mut k = 0;
    for (i, pair) in path.windows(2).enumerate() {
        let (prev, next) = (&pair[0], &pair[1]);
        let ok = match next.step {
            Move::Start => false,
            Move::Gain => {
                k += 1;
                let expected = gain_state(apriori, gain, k);
                next.s == expected.s
                    && next.p == prev.p
                    && in_domain_u(&state(next), apriori).unwrap_or(false)
            }
            Move::Embed => {
                i + 2 == path.len() && embeds(&state(prev), &state(next)).unwrap_or(false)
            }
        };
        if !ok {
            return false;
        }
    }
    let last = &path[path.len() - 1];
    last.s == target.s && last.p == target.p
}

pub mod flags {
    pub const IN_A: u8 = 1;
    pub const IN_N: u8 = 2;
    pub const IN_LU: u8 = 4;
    pub const IN_DU: u8 = 8;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub s_min: f64,
    pub s_max: f64,
    pub invp_min: f64,
    pub invp_max: f64,
}

impl Window {
    pub fn new(s_min: f64, s_max: f64, invp_min: f64, invp_max: f64) -> Result<Self> {
        if !(s_min < s_max) || !s_min.is_finite() || !s_max.is_finite() {
            return Err(Error::Window("need finite s_min < s_max"));
        }
        if !(0.0 <= invp_min && invp_min < invp_max && invp_max <= 1.0) {
            return Err(Error::Window("need 0 <= invp_min < invp_max <= 1"));
        }
        Ok(Self {
            s_min,
            s_max,
            invp_min,
            invp_max,
        })
    }
}

/// Membership flags at pixel centres. Row `0` is `s_min`, column `0` is `invp_min`.
#[derive(Clone, Debug, PartialEq)]
pub struct MembershipGrid {
    pub window: Window,
    pub resolution: usize,
    pub flags: Vec<u8>,
}

impl MembershipGrid {
    pub fn invp_at(&self, col: usize) -> f64 {
        let w = &self.window;
        w.invp_min + (col as f64 + 0.5) * (w.invp_max - w.invp_min) / self.resolution as f64
    }

    pub fn s_at(&self, row: usize) -> f64 {
        let w = &self.window;
        w.s_min + (row as f64 + 0.5) * (w.s_max - w.s_min) / self.resolution as f64
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.flags[row * self.resolution + col]
    }

    pub fn count(&self, flag: u8) -> usize {
        self.flags.iter().filter(|&&f| f & flag != 0).count()
    }
}

pub fn rasterize_domains(
    apriori: &SmoothnessPoint,
    window: Window,
    resolution: usize,
) -> Result<MembershipGrid> {
    if resolution == 0 || resolution > MAX_RESOLUTION {
        return Err(Error::Resolution(resolution));
    }
    let mut grid = MembershipGrid {
        window,
        resolution,
        flags: Vec::with_capacity(resolution * resolution),
    };
    let n = apriori.nd();
    let (s0, ip0) = (apriori.s, 1.0 / apriori.p);
    for row in 0..resolution {
        let s = grid.s_at(row);
        for col in 0..resolution {
            let ip = grid.invp_at(col);
            let a = a_holds(s, ip);
            let lu = lu_holds(s, ip, s0, ip0, n);
            let mut f = 0;
            if a {
                f |= flags::IN_A;
            }
            if n_holds(s, ip, n) {
                f |= flags::IN_N;
            }
            if lu {
                f |= flags::IN_LU;
            }
            if a && lu {
                f |= flags::IN_DU;
            }
            grid.flags.push(f);
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_paths_validate() {
        let apriori = SmoothnessPoint::new(0.75, 2.0, 1).unwrap();
        let target = SmoothnessPoint::new(2.5, 2.0, 1).unwrap();
        let r = minimal_n(&apriori, &target, DEFAULT_EPSILON, DEFAULT_MAX_N).unwrap();
        assert!(path_is_valid(&r.path, &apriori, &target, r.gain));
        let mut broken = r.path.clone();
        broken.remove(1);
        assert!(!path_is_valid(&broken, &apriori, &target, r.gain));
        let mut early = r.path.clone();
        early.swap(1, 3);
        assert!(!path_is_valid(&early, &apriori, &target, r.gain));
        assert!(!path_is_valid(&[], &apriori, &target, r.gain));
    }

    fn pt(s: f64, p: f64, n: u32) -> SmoothnessPoint {
        SmoothnessPoint::new(s, p, n).unwrap()
    }

    #[test]
    fn point_validation() {
        assert!(SmoothnessPoint::new(1.0, 1.0, 1).is_err());
        assert!(SmoothnessPoint::new(1.0, f64::INFINITY, 1).is_err());
        assert!(SmoothnessPoint::new(1.0, 2.0, 0).is_err());
        assert!(SmoothnessPoint::new(f64::NAN, 2.0, 1).is_err());
    }

    #[test]
    fn domain_a_examples() {
        assert!(in_domain_a(&pt(1.0, 2.0, 1)));
        assert!(!in_domain_a(&pt(0.5, 2.0, 1)));
        assert!(in_domain_a(&pt(0.4, 4.0, 3)));
    }

    #[test]
    fn domain_n_examples() {
        assert!(in_domain_n(&pt(0.75, 2.0, 1)));
        assert!(!in_domain_n(&pt(0.5, 2.0, 1)));
        assert!(in_domain_n(&pt(1.6, 2.0, 3)));
    }

    #[test]
    fn domain_lu_examples() {
        assert!(in_domain_lu(&pt(0.3, 2.0, 1), &pt(0.75, 2.0, 1)).unwrap());
        assert!(!in_domain_lu(&pt(0.25, 2.0, 1), &pt(0.75, 2.0, 1)).unwrap());
        assert!(in_domain_lu(&pt(1.0, 1.25, 1), &pt(1.0, 1.25, 1)).unwrap());
        assert_eq!(
            in_domain_lu(&pt(1.0, 2.0, 1), &pt(1.0, 2.0, 2)),
            Err(Error::Dimension(1, 2))
        );
    }

    #[test]
    fn omega_examples() {
        assert_eq!(order_omega(&pt(0.75, 2.0, 1), 0.01).unwrap().omega, 1.0);
        assert_eq!(order_omega(&pt(0.25, 2.0, 1), 0.01).unwrap().omega, 1.25);
        assert!((order_omega(&pt(0.5, 2.0, 1), 0.01).unwrap().omega - 1.01).abs() < 1e-15);
        assert!(order_omega(&pt(0.5, 2.0, 1), -0.1).is_err());
    }

    #[test]
    fn embedding_examples() {
        assert!(embeds(&pt(2.0, 2.0, 1), &pt(1.2, 3.0, 1)).unwrap());
        assert!(!embeds(&pt(1.0, 2.0, 1), &pt(1.0, 3.0, 1)).unwrap());
        assert!(embeds(&pt(0.7, 3.0, 2), &pt(0.7, 3.0, 2)).unwrap());
        assert!(embeds(&pt(1.0, 2.0, 1), &pt(1.0, 2.0, 2)).is_err());
    }

    #[test]
    fn minimal_n_examples() {
        let r = minimal_n(
            &pt(0.75, 2.0, 1),
            &pt(2.5, 2.0, 1),
            DEFAULT_EPSILON,
            DEFAULT_MAX_N,
        )
        .unwrap();
        assert_eq!(r.n, Some(2));
        assert_eq!(r.omega, 1.0);
        let steps: Vec<Move> = r.path.iter().map(|s| s.step).collect();
        assert_eq!(steps, [Move::Start, Move::Gain, Move::Gain, Move::Embed]);
        assert_eq!(r.path[2].s, 2.75);

        let r = minimal_n(
            &pt(1.0, 2.0, 1),
            &pt(1.2, 3.0, 1),
            DEFAULT_EPSILON,
            DEFAULT_MAX_N,
        )
        .unwrap();
        assert_eq!(r.n, Some(1));

        let r = minimal_n(
            &pt(3.0, 2.0, 1),
            &pt(2.0, 2.0, 1),
            DEFAULT_EPSILON,
            DEFAULT_MAX_N,
        )
        .unwrap();
        assert_eq!(r.n, Some(0));
        assert_eq!(r.path.len(), 2);
    }

    #[test]
    fn unreachable_within_cap() {
        let r = minimal_n(&pt(0.75, 2.0, 1), &pt(50.0, 2.0, 1), DEFAULT_EPSILON, 10).unwrap();
        assert_eq!(r.n, None);
        assert!(r.path.is_empty());
    }

    #[test]
    fn preconditions_name_the_inequality() {
        match minimal_n(&pt(0.4, 2.0, 1), &pt(2.0, 2.0, 1), 0.01, 64) {
            Err(Error::Precondition { inequality, .. }) => assert!(inequality.contains("D(A)")),
            other => panic!("{other:?}"),
        }
        match minimal_n(&pt(0.75, 2.0, 1), &pt(0.4, 2.0, 1), 0.01, 64) {
            Err(Error::Precondition { inequality, .. }) => {
                assert!(inequality.starts_with("target in D(A)"))
            }
            other => panic!("{other:?}"),
        }
        match minimal_n(&pt(0.55, 2.0, 1), &pt(0.4, 4.0, 1), 0.01, 64) {
            Err(Error::Precondition { inequality, .. }) => assert!(inequality.contains("D(L_u)")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn beyond_bootstrap_example() {
        let r = minimal_n(
            &pt(1.5, 2.0, 1),
            &pt(0.4, 4.0, 1),
            DEFAULT_EPSILON,
            DEFAULT_MAX_N,
        )
        .unwrap();
        assert_eq!(r.n, Some(0));
        assert!(!r.target_in_domain_n);
        assert!(r.beyond_bootstrap());
    }

    #[test]
    fn raster_examples() {
        let apriori = pt(0.75, 2.0, 1);
        let g =
            rasterize_domains(&apriori, Window::new(-1.0, 3.0, 0.0, 1.0).unwrap(), 200).unwrap();
        for f in &g.flags {
            if f & flags::IN_N != 0 && f & flags::IN_A != 0 {
                assert!(f & flags::IN_LU != 0);
            }
        }
        let below =
            rasterize_domains(&apriori, Window::new(-2.0, -0.5, 0.0, 1.0).unwrap(), 50).unwrap();
        assert_eq!(below.count(flags::IN_A), 0);

        let richer = rasterize_domains(&pt(1.5, 2.0, 1), g.window, 200).unwrap();
        for (a, b) in g.flags.iter().zip(&richer.flags) {
            if a & flags::IN_LU != 0 {
                assert!(b & flags::IN_LU != 0);
            }
        }
        assert!(rasterize_domains(&apriori, g.window, 2001).is_err());
        assert!(Window::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(Window::new(0.0, 1.0, 0.5, 0.5).is_err());
        assert!(Window::new(0.0, 1.0, -0.1, 0.5).is_err());
    }
}
