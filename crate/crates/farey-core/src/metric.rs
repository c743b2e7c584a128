//! The Farey-graph metric `d_Farey`.
//!
//! Two ways to compute distances are provided. [`distance_oracle`] is a
//! breadth-first search over the Farey graph truncated to an entry bound,
//! re-run with doubled bounds until two consecutive runs agree; it is the
//! authoritative value. [`distance`] is the fast path: a unimodular change
//! of basis sends one endpoint to `1/0`, after which the distance is the
//! minimal signed continued-fraction length of the other. Disagreement
//! between the two is a hard test failure, not a tolerance.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::bounded::SlopeSet;
use crate::slope::{self, Slope};

/// Default cap on bound doublings before the oracle gives up.
pub const DEFAULT_DOUBLING_CAP: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Oracle,
    Fast,
}

/// A computed Farey distance together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceResult {
    pub value: u64,
    pub method: Method,
    /// For the oracle: two consecutive radius-doubling runs agreed.
    pub stable: bool,
}

/// A shortest path in the Farey graph; consecutive vertices are Farey edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicPath {
    pub vertices: Vec<Slope>,
}

impl GeodesicPath {
    pub fn len_edges(&self) -> u64 {
        (self.vertices.len() - 1) as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricError {
    /// The doubling cap was hit without two consecutive runs agreeing.
    Unstable { bound_reached: u64 },
    /// `entry_bound` is smaller than an endpoint's canonical entries.
    BoundTooSmall,
    /// Slope entries exceed the fixed-width range used by the BFS.
    EntriesTooLarge,
}

impl fmt::Display for MetricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricError::Unstable { bound_reached } => {
                write!(f, "oracle did not stabilize up to entry bound {}", bound_reached)
            }
            MetricError::BoundTooSmall => {
                write!(f, "entry bound is smaller than the endpoints' entries")
            }
            MetricError::EntriesTooLarge => {
                write!(f, "slope entries exceed the oracle's fixed-width range")
            }
        }
    }
}

type V = (i128, i128);

fn canon(x: i128, y: i128) -> V {
    if x < 0 || (x == 0 && y < 0) {
        (-x, -y)
    } else {
        (x, y)
    }
}

fn to_pair(s: &Slope) -> Result<V, MetricError> {
    match (s.x().to_i128(), s.y().to_i128()) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(MetricError::EntriesTooLarge),
    }
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = egcd(b, a.rem_euclid(b));
        (g, t, s - a.div_euclid(b) * t)
    }
}

/// Visits the Farey neighbors of `v` with entries within `bound`.
///
/// Solutions of `|det(v, w)| = 1` form two lines `±w0 + k v`; they are
/// visited as the `det = +1` family then the `det = -1` family, `k`
/// increasing within each, so iteration order is deterministic.
fn for_each_neighbor(v: V, bound: i128, mut f: impl FnMut(V)) {
    let (x, y) = v;
    // s x + t y = 1, base solution w0 = (-t, s) has det(v, w0) = 1
    let (_, s, t) = egcd(x, y);
    let w0 = (-t, s);
    for sign in [1i128, -1] {
        let base = (sign * w0.0, sign * w0.1);
        let (lo, hi) = match k_range(base, v, bound) {
            Some(r) => r,
            None => continue,
        };
        for k in lo..=hi {
            let w = canon(base.0 + k * x, base.1 + k * y);
            if w.0.abs() <= bound && w.1.abs() <= bound {
                f(w);
            }
        }
    }
}

/// Interval of `k` with both entries of `base + k v` within `bound`.
fn k_range(base: V, v: V, bound: i128) -> Option<(i128, i128)> {
    let mut lo = i128::MIN / 4;
    let mut hi = i128::MAX / 4;
    for (c, m) in [(base.0, v.0), (base.1, v.1)] {
        if m == 0 {
            if c.abs() > bound {
                return None;
            }
            continue;
        }
        let (l, h) = ceil_floor_interval(c, m, bound);
        lo = lo.max(l);
        hi = hi.min(h);
    }
    if lo <= hi {
        Some((lo, hi))
    } else {
        None
    }
}

/// `k` with `-bound <= c + k m <= bound`, for `m != 0`.
fn ceil_floor_interval(c: i128, m: i128, bound: i128) -> (i128, i128) {
    let lo_num = -bound - c;
    let hi_num = bound - c;
    if m > 0 {
        (Integer::div_ceil(&lo_num, &m), Integer::div_floor(&hi_num, &m))
    } else {
        (Integer::div_ceil(&hi_num, &m), Integer::div_floor(&lo_num, &m))
    }
}

/// One BFS run from `src` over the Farey graph truncated to `|x|,|y| <= bound`.
///
/// Returns distances and BFS predecessors for every reached vertex. This is
/// a truncation of the true (infinite) graph: distances can only over- or
/// correctly estimate `d_Farey`, which is why callers stabilize by doubling.
pub fn oracle_single_run(src: &Slope, bound: u64) -> Result<BTreeMap<Slope, (u64, Slope)>, MetricError> {
    let s = to_pair(src)?;
    let b = bound as i128;
    if s.0.abs() > b || s.1.abs() > b {
        return Err(MetricError::BoundTooSmall);
    }
    let mut dist: BTreeMap<V, (u64, V)> = BTreeMap::new();
    let mut queue: alloc::collections::VecDeque<V> = alloc::collections::VecDeque::new();
    dist.insert(s, (0, s));
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v].0;
        for_each_neighbor(v, b, |w| {
            if !dist.contains_key(&w) {
                dist.insert(w, (d + 1, v));
                queue.push_back(w);
            }
        });
    }
    Ok(dist
        .into_iter()
        .map(|((x, y), (d, (px, py)))| {
            (
                Slope::new(x, y).expect("BFS vertices are nonzero"),
                (d, Slope::new(px, py).expect("BFS vertices are nonzero")),
            )
        })
        .collect())
}

/// BFS oracle for `d_Farey(a, b)`, stabilized by radius doubling.
pub fn distance_oracle(a: &Slope, b: &Slope, entry_bound: u64) -> Result<DistanceResult, MetricError> {
    let (res, _) = oracle_with_path(a, b, entry_bound)?;
    Ok(res)
}

fn oracle_with_path(
    a: &Slope,
    b: &Slope,
    entry_bound: u64,
) -> Result<(DistanceResult, Vec<Slope>), MetricError> {
    if entry_bound == 0 {
        return Err(MetricError::BoundTooSmall);
    }
    let need = a.max_entry().max(b.max_entry());
    if need > BigInt::from(entry_bound) {
        return Err(MetricError::BoundTooSmall);
    }
    if a == b {
        return Ok((
            DistanceResult { value: 0, method: Method::Oracle, stable: true },
            alloc::vec![a.clone()],
        ));
    }
    let mut bound = entry_bound;
    let mut prev: Option<u64> = None;
    for _ in 0..=DEFAULT_DOUBLING_CAP {
        let map = oracle_single_run(a, bound)?;
        let cur = map.get(b).map(|&(d, _)| d);
        if let (Some(p), Some(c)) = (prev, cur) {
            if p == c {
                let mut path = alloc::vec![b.clone()];
                let mut at = b.clone();
                while &at != a {
                    let (_, pred) = map[&at].clone();
                    path.push(pred.clone());
                    at = pred;
                }
                path.reverse();
                return Ok((
                    DistanceResult { value: c, method: Method::Oracle, stable: true },
                    path,
                ));
            }
        }
        prev = cur;
        bound = bound.saturating_mul(2);
    }
    Err(MetricError::Unstable { bound_reached: bound })
}

/// Fast `d_Farey(a, b)`: change basis so `b` becomes `1/0`, then take the
/// minimal signed continued-fraction length of the image of `a`.
pub fn distance(a: &Slope, b: &Slope) -> DistanceResult {
    DistanceResult { value: distance_value(a, b), method: Method::Fast, stable: true }
}

pub(crate) fn distance_value(a: &Slope, b: &Slope) -> u64 {
    if a == b {
        return 0;
    }
    // U = [[y, -x], [s, t]] with s x + t y = 1 sends b = (x, y) to (0, 1)
    let (x, y) = (b.x().clone(), b.y().clone());
    let e = x.extended_gcd(&y);
    let (s, t) = (e.x, e.y);
    let ax = a.x();
    let ay = a.y();
    let nx = &y * ax - &x * ay;
    let ny = &s * ax + &t * ay;
    debug_assert!(!(nx.is_zero() && ny.is_zero()));
    let mut memo = BTreeMap::new();
    slope::cf_len(ny, nx, &mut memo)
}

/// One shortest path from `a` to `b`, via the stabilized BFS oracle.
pub fn geodesic_path(a: &Slope, b: &Slope) -> Result<GeodesicPath, MetricError> {
    let need = a.max_entry().max(b.max_entry()).to_u64().ok_or(MetricError::EntriesTooLarge)?;
    let (_, vertices) = oracle_with_path(a, b, need.max(1))?;
    Ok(GeodesicPath { vertices })
}

/// All slopes within `radius` of `center` whose canonical entries are at
/// most `entry_bound`.
///
/// This is a truncation: every true ball of radius >= 1 is infinite (the
/// neighbors of `1/0` are all the integer slopes), so a finite enumeration
/// needs an explicit cutoff.
pub fn enumerate_ball(center: &Slope, radius: u64, entry_bound: u64) -> SlopeSet {
    let mut members = Vec::new();
    for s in slope::slopes_within(entry_bound) {
        if distance_value(center, &s) <= radius {
            members.push(s);
        }
    }
    if center.max_entry() > BigInt::from(entry_bound) {
        members.push(center.clone());
    }
    SlopeSet::with_bound(members, 2 * radius)
}
