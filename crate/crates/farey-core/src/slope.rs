//! Slopes on the torus as primitive integer vectors up to sign.
//!
//! A slope is stored as a canonical primitive vector `(x, y)` in
//! `H1(T^2; Z)` and displayed as the fraction `p/q` with `p = y`, `q = x`.
//! Under that convention `(1,0)` is `0/1`, `(0,1)` is `1/0`, and `(2,1)`
//! is `1/2`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Error from [`Slope::new`]: the zero vector represents no slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroVector;

impl fmt::Display for ZeroVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "the zero vector does not represent a slope")
    }
}

/// A slope: a primitive element of `H1(T^2; Z)` up to sign.
///
/// Canonical form: `x > 0`, or `x = 0` and `y = 1`; always `gcd(x, y) = 1`.
/// `(x, y)` and `(-x, -y)` construct the equal `Slope`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slope {
    x: BigInt,
    y: BigInt,
}

impl Slope {
    /// Canonicalizes the vector `(x, y)`: divides out the gcd and fixes
    /// the sign so that `x > 0` or `(x, y) = (0, 1)`.
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<Self, ZeroVector> {
        let mut x: BigInt = x.into();
        let mut y: BigInt = y.into();
        if x.is_zero() && y.is_zero() {
            return Err(ZeroVector);
        }
        let g = x.gcd(&y);
        x /= &g;
        y /= &g;
        if x.is_negative() || (x.is_zero() && y.is_negative()) {
            x = -x;
            y = -y;
        }
        Ok(Slope { x, y })
    }

    /// Builds the slope `p/q`, i.e. the class of the vector `(q, p)`.
    pub fn from_fraction(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, ZeroVector> {
        Slope::new(q, p)
    }

    /// The slope `0/1`, vector `(1, 0)`.
    pub fn zero() -> Self {
        Slope { x: BigInt::one(), y: BigInt::zero() }
    }

    /// The slope `1/0`, vector `(0, 1)`.
    pub fn infinity() -> Self {
        Slope { x: BigInt::zero(), y: BigInt::one() }
    }

    /// The slope `n/1`, vector `(1, n)`.
    pub fn integer(n: impl Into<BigInt>) -> Self {
        Slope { x: BigInt::one(), y: n.into() }
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    /// Numerator `p` of the display fraction (equals `y`).
    pub fn p(&self) -> &BigInt {
        &self.y
    }

    /// Denominator `q` of the display fraction (equals `x`).
    pub fn q(&self) -> &BigInt {
        &self.x
    }

    /// Max of `|x|` and `|y|`, the size used by entry-bound truncations.
    pub fn max_entry(&self) -> BigInt {
        let ax = self.x.abs();
        let ay = self.y.abs();
        if ax >= ay {
            ax
        } else {
            ay
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.y, self.x)
    }
}

/// Error from parsing a slope out of text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseSlopeError {
    pub input: String,
}

impl fmt::Display for ParseSlopeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid slope `{}` (expected p/q or an integer)", self.input)
    }
}

impl FromStr for Slope {
    type Err = ParseSlopeError;

    /// Accepts `p/q` with optional signs, or a bare integer `n` meaning `n/1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseSlopeError { input: String::from(s) };
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (
                BigInt::from_str(p.trim()).map_err(|_| bad())?,
                BigInt::from_str(q.trim()).map_err(|_| bad())?,
            ),
            None => (BigInt::from_str(t).map_err(|_| bad())?, BigInt::one()),
        };
        Slope::from_fraction(p, q).map_err(|_| bad())
    }
}

/// Geometric intersection number `Δ(a, b) = |a.x b.y - a.y b.x|`.
///
/// Symmetric, and zero exactly when the slopes are equal.
pub fn intersection_number(a: &Slope, b: &Slope) -> BigInt {
    (&a.x * &b.y - &a.y * &b.x).abs()
}

/// Farey-edge test: the slopes intersect exactly once.
pub fn is_farey_edge(a: &Slope, b: &Slope) -> bool {
    intersection_number(a, b).is_one()
}

/// Do the two primitive classes generate `H1(T^2; Z)`?
///
/// Identical to [`is_farey_edge`], exposed under its homological name.
pub fn generates_h1(a: &Slope, b: &Slope) -> bool {
    is_farey_edge(a, b)
}

/// [`generates_h1`] on raw (possibly non-primitive) integer vectors.
pub fn generates_h1_vec(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> bool {
    (&a.0 * &b.1 - &a.1 * &b.0).abs().is_one()
}

/// Minimal length over signed continued-fraction expansions of `p/q`,
/// branching over the floor and ceiling quotient at every step.
///
/// Returns 0 for `1/0`. Equals the Farey distance from `1/0` (cross-checked
/// against the BFS oracle in the acceptance suite).
pub fn cf_min_length(s: &Slope) -> u64 {
    let mut memo = BTreeMap::new();
    cf_len(s.y.clone(), s.x.clone(), &mut memo)
}

/// Minimal signed-CF length of `p/q` for a raw fraction, `q` arbitrary sign.
pub(crate) fn cf_len(p: BigInt, q: BigInt, memo: &mut BTreeMap<(BigInt, BigInt), u64>) -> u64 {
    if q.is_zero() {
        return 0;
    }
    // normalize q > 0
    let (p, q) = if q.is_negative() { (-p, -q) } else { (p, q) };
    if let Some(&v) = memo.get(&(p.clone(), q.clone())) {
        return v;
    }
    let (fl, r) = p.div_mod_floor(&q);
    let best = if r.is_zero() {
        1
    } else {
        // p/q = a + 1/(q/r) with a = floor (r > 0) or a = floor+1 (r - q < 0)
        let down = 1 + cf_len(q.clone(), r.clone(), memo);
        let up = 1 + cf_len(q.clone(), &r - &q, memo);
        down.min(up)
    };
    let _ = fl;
    memo.insert((p, q), best);
    best
}

/// One boundary-torus entry of a multislope: a slope to fill along, or the
/// marker `∞` for "leave unfilled".
///
/// `Unfilled` is distinct from every `Filled` slope, including `Filled(1/0)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FillingEntry {
    Filled(Slope),
    Unfilled,
}

impl FillingEntry {
    pub fn is_filled(&self) -> bool {
        matches!(self, FillingEntry::Filled(_))
    }
}

impl fmt::Display for FillingEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FillingEntry::Filled(s) => write!(f, "{}", s),
            FillingEntry::Unfilled => write!(f, "inf"),
        }
    }
}

impl FromStr for FillingEntry {
    type Err = ParseSlopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            Ok(FillingEntry::Unfilled)
        } else {
            Ok(FillingEntry::Filled(t.parse()?))
        }
    }
}

/// All canonical slopes with `|x|, |y| <= bound`, in a fixed order.
pub fn slopes_within(bound: u64) -> Vec<Slope> {
    let b = bound as i64;
    let mut out = Vec::new();
    if bound >= 1 {
        out.push(Slope::infinity());
    }
    for x in 1..=b {
        for y in -b..=b {
            if x.gcd(&y) == 1 {
                out.push(Slope { x: BigInt::from(x), y: BigInt::from(y) });
            }
        }
    }
    out
}
