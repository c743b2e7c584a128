//! Finite slope-set algebra with certified diameter bounds.
//!
//! Certified bounds are carried as data separate from measured diameters:
//! the bound comes from a closure rule (union, twist saturation,
//! bounded-intersection neighborhood), the measurement from the metric.
//! Where the textbook constants `2 log2(c)` vanish at `c = 1` while real
//! distances are 1, the corrected integer form `2 ceil(log2(max(c,2))) + 1`
//! is used for certificates and the raw value is still reported.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;

use num_bigint::BigInt;

use crate::metric;
use crate::slope::{self, Slope};
use crate::transforms::twist_map;

/// A finite explicit set of slopes, optionally carrying a certified upper
/// bound on its Farey diameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeSet {
    members: BTreeSet<Slope>,
    certified_bound: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmptySet;

impl fmt::Display for EmptySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "operation requires a non-empty slope set")
    }
}

impl SlopeSet {
    pub fn new(members: impl IntoIterator<Item = Slope>) -> Self {
        SlopeSet { members: members.into_iter().collect(), certified_bound: None }
    }

    pub fn with_bound(members: impl IntoIterator<Item = Slope>, bound: u64) -> Self {
        SlopeSet { members: members.into_iter().collect(), certified_bound: Some(bound) }
    }

    pub fn singleton(s: Slope) -> Self {
        SlopeSet::with_bound([s], 0)
    }

    pub fn empty() -> Self {
        SlopeSet { members: BTreeSet::new(), certified_bound: Some(0) }
    }

    pub fn members(&self) -> &BTreeSet<Slope> {
        &self.members
    }

    pub fn certified_bound(&self) -> Option<u64> {
        self.certified_bound
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &Slope) -> bool {
        self.members.contains(s)
    }

    pub fn is_subset(&self, other: &SlopeSet) -> bool {
        self.members.is_subset(&other.members)
    }

    fn pick(&self) -> Option<&Slope> {
        self.members.iter().next()
    }
}

/// Measured diameter: max pairwise `d_Farey` over the members.
pub fn diameter(s: &SlopeSet) -> Result<u64, EmptySet> {
    if s.is_empty() {
        return Err(EmptySet);
    }
    let v: Vec<&Slope> = s.members.iter().collect();
    let mut max = 0;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            max = max.max(metric::distance(v[i], v[j]).value);
        }
    }
    Ok(max)
}

/// Set union with a triangle-inequality certificate: when both inputs carry
/// bounds, the union is certified by `bound(a) + bound(b) + d(pick a, pick b)`;
/// otherwise the diameter is measured and used as the certificate.
pub fn union(a: &SlopeSet, b: &SlopeSet) -> SlopeSet {
    let members: BTreeSet<Slope> = a.members.union(&b.members).cloned().collect();
    if a.is_empty() {
        return SlopeSet { members, certified_bound: b.certified_bound };
    }
    if b.is_empty() {
        return SlopeSet { members, certified_bound: a.certified_bound };
    }
    let certified = match (a.certified_bound, b.certified_bound) {
        (Some(ba), Some(bb)) => {
            let bridge = metric::distance(a.pick().unwrap(), b.pick().unwrap()).value;
            Some(ba + bb + bridge)
        }
        _ => {
            let out = SlopeSet { members: members.clone(), certified_bound: None };
            diameter(&out).ok()
        }
    };
    SlopeSet { members, certified_bound: certified }
}

/// Twist orbit `{ D_alpha^n(beta) : beta in b, n in n_range }`.
///
/// Certified bound `2 diam(b) + 2 min_beta d(alpha, beta)`, which does not
/// grow with the width of `n_range` (the twist fixes `alpha` and is an
/// isometry, so every iterate stays in a fixed ball around `alpha`).
pub fn twist_saturate(
    b: &SlopeSet,
    alpha: &Slope,
    n_range: RangeInclusive<i64>,
) -> Result<SlopeSet, EmptySet> {
    if b.is_empty() {
        return Err(EmptySet);
    }
    let twist = twist_map(alpha);
    let mut members = BTreeSet::new();
    for n in n_range {
        let m = twist.pow(n);
        for beta in &b.members {
            members.insert(m.apply(beta));
        }
    }
    let d = diameter(b)?;
    let reach = b
        .members
        .iter()
        .map(|beta| metric::distance(alpha, beta).value)
        .min()
        .unwrap();
    Ok(SlopeSet { members, certified_bound: Some(2 * d + 2 * reach) })
}

/// Integer-safe stand-in for `2 log2(max(c, 2)) + 1`, rounded up: an upper
/// bound for `d_Farey(1/0, p/q)` whenever `|q| <= c`.
pub fn cf_distance_bound(c: u64) -> u64 {
    2 * ceil_log2(c.max(2)) + 1
}

/// The uncorrected raw constant `2 log2(c)`, reported alongside the
/// integer certificate so the small-`c` discrepancy stays visible.
pub fn raw_cf_distance_bound(c: u64) -> f64 {
    if c == 0 {
        0.0
    } else {
        2.0 * libm::log2(c as f64)
    }
}

fn ceil_log2(n: u64) -> u64 {
    let fl = 63 - n.leading_zeros() as u64;
    if n.is_power_of_two() {
        fl
    } else {
        fl + 1
    }
}

/// Bounded-intersection neighborhood
/// `{ alpha : exists beta in b, Δ(alpha, beta) <= c }`, truncated to
/// canonical entries at most `entry_bound`.
///
/// Certified bound `diam(b) + 2 (2 ceil(log2(max(c,2))) + 1)`. With `c = 0`
/// the neighborhood is `b` itself and no scan happens.
pub fn delta_neighborhood(b: &SlopeSet, c: u64, entry_bound: u64) -> SlopeSet {
    if c == 0 {
        return b.clone();
    }
    let base = diameter(b).unwrap_or(0);
    let certified = base + 2 * cf_distance_bound(c);
    let cc = BigInt::from(c);
    let mut members: BTreeSet<Slope> = b.members.clone();
    for s in slope::slopes_within(entry_bound) {
        if b.members.iter().any(|beta| slope::intersection_number(&s, beta) <= cc) {
            members.insert(s);
        }
    }
    SlopeSet { members, certified_bound: Some(certified) }
}

/// One closure rule from the bounded-set algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureRule {
    /// Pass to the recorded subset of the current set.
    Subset,
    /// Union with the recorded set.
    Union,
    /// Twist orbit about `alpha` over `n_range`.
    TwistOrbit { alpha: Slope, n_range: (i64, i64) },
    /// Bounded-intersection neighborhood with parameter `c`, truncated.
    DeltaNeighborhood { c: u64, entry_bound: u64 },
}

/// A derivation step: the rule applied plus the resulting set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureStep {
    pub rule: ClosureRule,
    pub result: SlopeSet,
}

/// A replayable witness that a set is reachable from a singleton seed using
/// only the four closure rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureDerivation {
    pub seed: Slope,
    pub steps: Vec<ClosureStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayError {
    /// A Subset step's recorded result is not contained in the current set.
    NotASubset { step: usize },
    /// A recomputed step disagrees with the recorded result.
    Mismatch { step: usize },
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayError::NotASubset { step } => {
                write!(f, "step {}: recorded set is not a subset of the current set", step)
            }
            ReplayError::Mismatch { step } => {
                write!(f, "step {}: recomputed set differs from the recorded result", step)
            }
        }
    }
}

impl ClosureDerivation {
    /// Recomputes every step from the seed and checks it against the
    /// recorded results. Returns the final set.
    pub fn replay(&self) -> Result<SlopeSet, ReplayError> {
        let mut current = SlopeSet::singleton(self.seed.clone());
        for (i, step) in self.steps.iter().enumerate() {
            let computed = match &step.rule {
                ClosureRule::Subset => {
                    if !step.result.is_subset(&current) {
                        return Err(ReplayError::NotASubset { step: i });
                    }
                    step.result.clone()
                }
                ClosureRule::Union => union(&current, &step.result),
                ClosureRule::TwistOrbit { alpha, n_range } => {
                    twist_saturate(&current, alpha, n_range.0..=n_range.1)
                        .map_err(|_| ReplayError::Mismatch { step: i })?
                }
                ClosureRule::DeltaNeighborhood { c, entry_bound } => {
                    delta_neighborhood(&current, *c, *entry_bound)
                }
            };
            if computed.members != step.result.members {
                return Err(ReplayError::Mismatch { step: i });
            }
            current = computed;
        }
        Ok(current)
    }

    pub fn final_set(&self) -> SlopeSet {
        self.steps
            .last()
            .map(|s| s.result.clone())
            .unwrap_or_else(|| SlopeSet::singleton(self.seed.clone()))
    }
}

/// Derives the truncated ball `D_d(target_center)` from the singleton
/// `{seed}` using only the closure rules: one `DeltaNeighborhood` with
/// `c = Δ(seed, target)` plus a `Subset` down to `{target}`, then `d`
/// rounds of `DeltaNeighborhood(c = 1)` each followed by a `Subset` onto
/// the true ball of that radius.
pub fn closure_derive(
    seed: &Slope,
    target_center: &Slope,
    d: u64,
    entry_bound: u64,
) -> ClosureDerivation {
    let mut steps = Vec::new();
    let mut current = SlopeSet::singleton(seed.clone());
    if seed != target_center {
        let c = slope::intersection_number(seed, target_center);
        let c = num_traits::ToPrimitive::to_u64(&c).expect("intersection number fits u64");
        let reach_bound = entry_bound.max(entry_bound_for(&[seed, target_center]));
        current = delta_neighborhood(&current, c, reach_bound);
        steps.push(ClosureStep {
            rule: ClosureRule::DeltaNeighborhood { c, entry_bound: reach_bound },
            result: current.clone(),
        });
    }
    current = SlopeSet::singleton(target_center.clone());
    steps.push(ClosureStep { rule: ClosureRule::Subset, result: current.clone() });
    for radius in 1..=d {
        current = delta_neighborhood(&current, 1, entry_bound);
        steps.push(ClosureStep {
            rule: ClosureRule::DeltaNeighborhood { c: 1, entry_bound },
            result: current.clone(),
        });
        let ball = metric::enumerate_ball(target_center, radius, entry_bound);
        let trimmed: BTreeSet<Slope> =
            current.members.intersection(ball.members()).cloned().collect();
        current = SlopeSet { members: trimmed, certified_bound: Some(2 * radius) };
        steps.push(ClosureStep { rule: ClosureRule::Subset, result: current.clone() });
    }
    ClosureDerivation { seed: seed.clone(), steps }
}

fn entry_bound_for(slopes: &[&Slope]) -> u64 {
    slopes
        .iter()
        .filter_map(|s| num_traits::ToPrimitive::to_u64(&s.max_entry()))
        .max()
        .unwrap_or(1)
}
