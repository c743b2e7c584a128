//! Covering maps between tori and the induced slope correspondence.
//!
//! A cover is ingested as a 2x2 integer matrix acting between the
//! universal covers; `|det|` is the covering degree. Pushforward sends a
//! primitive vector to the primitive class of its image; pullback uses the
//! adjugate, and the two are mutually inverse bijections on slopes. The
//! correspondence is not an isometry of Farey graphs, but it is bilipschitz
//! with constant `2 log2(deg)`; [`lipschitz_audit`] measures that bound on
//! concrete pair lists instead of assuming it.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::metric;
use crate::slope::Slope;

/// A covering map between tori, as an integer matrix with `det != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverMap {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// Error constructing a [`CoverMap`] with zero determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularMatrix;

impl fmt::Display for SingularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cover matrix must have nonzero determinant")
    }
}

impl CoverMap {
    /// Rows of `[[a, b], [c, d]]` acting on column vectors `(x, y)`.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, SingularMatrix> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        if (&a * &d - &b * &c).is_zero() {
            return Err(SingularMatrix);
        }
        Ok(CoverMap { a, b, c, d })
    }

    pub fn identity() -> Self {
        CoverMap::new(1, 0, 0, 1).unwrap()
    }

    pub fn degree(&self) -> BigInt {
        (&self.a * &self.d - &self.b * &self.c).abs()
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl fmt::Display for CoverMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Downstairs correspondent of an upstairs slope: `M v` reduced to a
/// primitive class.
pub fn pushforward_slope(c: &CoverMap, s: &Slope) -> Slope {
    let nx = &c.a * s.x() + &c.b * s.y();
    let ny = &c.c * s.x() + &c.d * s.y();
    Slope::new(nx, ny).expect("nonsingular image of a nonzero vector is nonzero")
}

/// Upstairs correspondent of a downstairs slope: `adj(M) w` reduced to a
/// primitive class. Inverse of [`pushforward_slope`] as a map on slopes.
pub fn pullback_slope(c: &CoverMap, s: &Slope) -> Slope {
    let nx = &c.d * s.x() - &c.b * s.y();
    let ny = -(&c.c) * s.x() + &c.a * s.y();
    Slope::new(nx, ny).expect("adjugate image of a nonzero vector is nonzero")
}

/// Distance record for one audited pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairAudit {
    pub upstairs: (Slope, Slope),
    pub downstairs: (Slope, Slope),
    pub d_up: u64,
    pub d_down: u64,
}

/// Result of a bilipschitz audit over a list of slope pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzAudit {
    pub degree: BigInt,
    /// The audited constant `2 log2(deg)` (1.0 for degree-1 covers, which
    /// are isometries and must have all ratios exactly 1).
    pub bound: f64,
    pub pairs: Vec<PairAudit>,
    /// Max of `d_down / d_up` over pairs with `d_up > 0`.
    pub max_ratio_down_over_up: f64,
    /// Max of `d_up / d_down` over pairs with `d_down > 0`.
    pub max_ratio_up_over_down: f64,
    pub within_bound: bool,
}

/// Measures both direction ratios `d_down/d_up` and `d_up/d_down` for each
/// pair and compares them against `2 log2(deg)`.
///
/// Distances are computed by the fast path, which the acceptance suite
/// pins to the BFS oracle; a pair of equal slopes contributes nothing.
/// Violations are reported as data, not asserted.
pub fn lipschitz_audit(c: &CoverMap, pairs: &[(Slope, Slope)]) -> LipschitzAudit {
    let degree = c.degree();
    let deg_f = bigint_to_f64(&degree);
    let bound = if deg_f <= 1.0 { 1.0 } else { 2.0 * libm::log2(deg_f) };
    let mut audited = Vec::new();
    let mut max_down_up = 0.0f64;
    let mut max_up_down = 0.0f64;
    for (a, b) in pairs {
        if a == b {
            continue;
        }
        let da = pushforward_slope(c, a);
        let db = pushforward_slope(c, b);
        let d_up = metric::distance(a, b).value;
        let d_down = metric::distance(&da, &db).value;
        if d_up > 0 {
            max_down_up = max_down_up.max(d_down as f64 / d_up as f64);
        }
        if d_down > 0 {
            max_up_down = max_up_down.max(d_up as f64 / d_down as f64);
        }
        audited.push(PairAudit { upstairs: (a.clone(), b.clone()), downstairs: (da, db), d_up, d_down });
    }
    LipschitzAudit {
        degree,
        bound,
        pairs: audited,
        max_ratio_down_over_up: max_down_up,
        max_ratio_up_over_down: max_up_down,
        within_bound: max_down_up <= bound && max_up_down <= bound,
    }
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::INFINITY)
}
