//! Multislopes, the partial-filling order, and minimally-non-hyperbolic
//! detection against a pluggable hyperbolicity oracle.
//!
//! Hyperbolicity is injected, never computed: the geometric input is a
//! table (or predicate tabulated up front) over a finite grid of slopes
//! per boundary index, closed under partial filling. A multislope is
//! *minimally non-hyperbolic* (mnh) when it is non-hyperbolic but every
//! strict partial filling of it is hyperbolic.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use crate::slope::FillingEntry;
use crate::slope::{ParseSlopeError, Slope};

/// A vector of filling entries, one per boundary torus (0-based indices).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multislope {
    entries: Vec<FillingEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FillingError {
    EmptyMultislope,
    LengthMismatch { left: usize, right: usize },
    IndexOutOfRange { index: usize, len: usize },
}

impl fmt::Display for FillingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FillingError::EmptyMultislope => write!(f, "a multislope needs at least one entry"),
            FillingError::LengthMismatch { left, right } => {
                write!(f, "multislope lengths differ: {} vs {}", left, right)
            }
            FillingError::IndexOutOfRange { index, len } => {
                write!(f, "index {} out of range for multislope of length {}", index, len)
            }
        }
    }
}

impl Multislope {
    pub fn new(entries: Vec<FillingEntry>) -> Result<Self, FillingError> {
        if entries.is_empty() {
            return Err(FillingError::EmptyMultislope);
        }
        Ok(Multislope { entries })
    }

    pub fn all_unfilled(n: usize) -> Result<Self, FillingError> {
        Multislope::new(alloc::vec![FillingEntry::Unfilled; n])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[FillingEntry] {
        &self.entries
    }

    pub fn filled_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_filled()).count()
    }
}

impl fmt::Display for Multislope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        Ok(())
    }
}

impl FromStr for Multislope {
    type Err = ParseMultislopeError;

    /// Comma-separated entries, each a slope `p/q` or `inf`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let entries: Result<Vec<FillingEntry>, ParseSlopeError> =
            s.split(',').map(|t| t.parse()).collect();
        let entries = entries.map_err(ParseMultislopeError::Slope)?;
        Multislope::new(entries).map_err(|_| ParseMultislopeError::Empty)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseMultislopeError {
    Slope(ParseSlopeError),
    Empty,
}

impl fmt::Display for ParseMultislopeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseMultislopeError::Slope(e) => write!(f, "{}", e),
            ParseMultislopeError::Empty => write!(f, "empty multislope"),
        }
    }
}

/// The partial-filling order: `a ⊑ b` iff every entry of `a` is the
/// matching entry of `b` or `∞`.
pub fn pf_leq(a: &Multislope, b: &Multislope) -> Result<bool, FillingError> {
    if a.len() != b.len() {
        return Err(FillingError::LengthMismatch { left: a.len(), right: b.len() });
    }
    Ok(a.entries
        .iter()
        .zip(&b.entries)
        .all(|(x, y)| x == y || *x == FillingEntry::Unfilled))
}

/// Replaces entry `i` with `∞`; the result is a partial filling of `a`.
pub fn hat(a: &Multislope, i: usize) -> Result<Multislope, FillingError> {
    if i >= a.len() {
        return Err(FillingError::IndexOutOfRange { index: i, len: a.len() });
    }
    let mut entries = a.entries.clone();
    entries[i] = FillingEntry::Unfilled;
    Ok(Multislope { entries })
}

/// Restriction to an explicit target index list: entry `t` of the result
/// is `a[t]` when `t` indexes into `a`, and `∞` for target indices not
/// covered by the source (the convention for enlarging the boundary).
pub fn restriction(a: &Multislope, targets: &[usize]) -> Result<Multislope, FillingError> {
    let entries: Vec<FillingEntry> = targets
        .iter()
        .map(|&t| a.entries.get(t).cloned().unwrap_or(FillingEntry::Unfilled))
        .collect();
    Multislope::new(entries)
}

/// All strict partial fillings of `a`: every way to replace a non-empty
/// subset of the filled entries with `∞`. Count is `2^k - 1` for `k`
/// filled entries. Deterministic order (by unfilling mask, ascending).
pub fn strict_partial_fillings(a: &Multislope) -> Vec<Multislope> {
    let filled: Vec<usize> = (0..a.len()).filter(|&i| a.entries[i].is_filled()).collect();
    let k = filled.len();
    let mut out = Vec::with_capacity((1usize << k).saturating_sub(1));
    for mask in 1u64..(1u64 << k) {
        let mut entries = a.entries.clone();
        for (bit, &idx) in filled.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                entries[idx] = FillingEntry::Unfilled;
            }
        }
        out.push(Multislope { entries });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Hyperbolicity {
    Hyperbolic,
    NonHyperbolic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// A required multislope is outside the oracle's declared grid.
    OutsideDomain { multislope: String },
    /// The oracle's table is missing a multislope of its own domain.
    Incomplete { multislope: String },
    EmptyGrid,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::OutsideDomain { multislope } => {
                write!(f, "multislope {} is outside the oracle's grid", multislope)
            }
            OracleError::Incomplete { multislope } => {
                write!(f, "oracle table missing multislope {}", multislope)
            }
            OracleError::EmptyGrid => write!(f, "oracle grid must have at least one index"),
        }
    }
}

/// A total, deterministic hyperbolicity table over a finite grid.
///
/// The domain is the product over boundary indices of
/// `grid[i] ∪ {∞}` — closed under partial filling by construction, which
/// is validated up front so [`is_mnh`] never extrapolates silently.
#[derive(Debug, Clone)]
pub struct HyperbolicityOracle {
    grid: Vec<Vec<Slope>>,
    table: BTreeMap<Multislope, Hyperbolicity>,
}

impl HyperbolicityOracle {
    /// Builds from an explicit table, checking totality on the grid's
    /// partial-filling closure.
    pub fn from_table(
        grid: Vec<Vec<Slope>>,
        table: BTreeMap<Multislope, Hyperbolicity>,
    ) -> Result<Self, OracleError> {
        if grid.is_empty() {
            return Err(OracleError::EmptyGrid);
        }
        let o = HyperbolicityOracle { grid, table };
        for m in o.domain() {
            if !o.table.contains_key(&m) {
                return Err(OracleError::Incomplete { multislope: alloc::format!("{}", m) });
            }
        }
        Ok(o)
    }

    /// Tabulates a predicate over the whole domain.
    pub fn from_fn(
        grid: Vec<Vec<Slope>>,
        f: impl Fn(&Multislope) -> Hyperbolicity,
    ) -> Result<Self, OracleError> {
        if grid.is_empty() {
            return Err(OracleError::EmptyGrid);
        }
        let mut o = HyperbolicityOracle { grid, table: BTreeMap::new() };
        let domain: Vec<Multislope> = o.domain().collect();
        for m in domain {
            let v = f(&m);
            o.table.insert(m, v);
        }
        Ok(o)
    }

    pub fn grid(&self) -> &[Vec<Slope>] {
        &self.grid
    }

    /// Every multislope of the domain, in a fixed order.
    pub fn domain(&self) -> impl Iterator<Item = Multislope> + '_ {
        let mut choices: Vec<Vec<FillingEntry>> = Vec::new();
        for g in &self.grid {
            let mut c: Vec<FillingEntry> =
                g.iter().cloned().map(FillingEntry::Filled).collect();
            c.push(FillingEntry::Unfilled);
            choices.push(c);
        }
        CartesianProduct::new(choices).map(|entries| Multislope { entries })
    }

    pub fn classify(&self, m: &Multislope) -> Result<Hyperbolicity, OracleError> {
        self.table
            .get(m)
            .copied()
            .ok_or_else(|| OracleError::OutsideDomain { multislope: alloc::format!("{}", m) })
    }
}

struct CartesianProduct<T> {
    choices: Vec<Vec<T>>,
    idx: Vec<usize>,
    done: bool,
}

impl<T: Clone> CartesianProduct<T> {
    fn new(choices: Vec<Vec<T>>) -> Self {
        let done = choices.iter().any(|c| c.is_empty());
        let idx = alloc::vec![0; choices.len()];
        CartesianProduct { choices, idx, done }
    }
}

impl<T: Clone> Iterator for CartesianProduct<T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        if self.done {
            return None;
        }
        let item: Vec<T> = self
            .idx
            .iter()
            .zip(&self.choices)
            .map(|(&i, c)| c[i].clone())
            .collect();
        // odometer increment, last index fastest
        for pos in (0..self.idx.len()).rev() {
            self.idx[pos] += 1;
            if self.idx[pos] < self.choices[pos].len() {
                return Some(item);
            }
            self.idx[pos] = 0;
        }
        self.done = true;
        Some(item)
    }
}

/// Why a candidate failed the mnh test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MnhWitness {
    /// The candidate itself is hyperbolic.
    CandidateHyperbolic,
    /// This strict partial filling is non-hyperbolic.
    NonHyperbolicStrict(Multislope),
}

/// Outcome of [`is_mnh`]: the verdict plus a witness on rejection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MnhOutcome {
    pub is_mnh: bool,
    pub witness: Option<MnhWitness>,
}

/// Is `a` minimally non-hyperbolic: `a` non-hyperbolic while every strict
/// partial filling of `a` is hyperbolic?
pub fn is_mnh(a: &Multislope, o: &HyperbolicityOracle) -> Result<MnhOutcome, OracleError> {
    if o.classify(a)? == Hyperbolicity::Hyperbolic {
        return Ok(MnhOutcome { is_mnh: false, witness: Some(MnhWitness::CandidateHyperbolic) });
    }
    for b in strict_partial_fillings(a) {
        if o.classify(&b)? == Hyperbolicity::NonHyperbolic {
            return Ok(MnhOutcome {
                is_mnh: false,
                witness: Some(MnhWitness::NonHyperbolicStrict(b)),
            });
        }
    }
    Ok(MnhOutcome { is_mnh: true, witness: None })
}

/// Is every partial filling of `a` (including `a` itself) hyperbolic?
pub fn is_totally_hyperbolic(a: &Multislope, o: &HyperbolicityOracle) -> Result<bool, OracleError> {
    if o.classify(a)? == Hyperbolicity::NonHyperbolic {
        return Ok(false);
    }
    for b in strict_partial_fillings(a) {
        if o.classify(&b)? == Hyperbolicity::NonHyperbolic {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive mnh scan over the oracle's domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MnhReport {
    pub mnh_list: Vec<Multislope>,
    /// Non-hyperbolic candidates that failed the mnh test, with witnesses.
    pub rejected: Vec<(Multislope, MnhWitness)>,
}

/// Scans the whole grid domain; every reported multislope passes
/// [`is_mnh`]. Order follows the fixed domain enumeration.
pub fn find_all_mnh(o: &HyperbolicityOracle) -> Result<MnhReport, OracleError> {
    let mut mnh_list = Vec::new();
    let mut rejected = Vec::new();
    let domain: Vec<Multislope> = o.domain().collect();
    for m in domain {
        let out = is_mnh(&m, o)?;
        if out.is_mnh {
            mnh_list.push(m);
        } else if let Some(w) = out.witness {
            if !matches!(w, MnhWitness::CandidateHyperbolic) {
                rejected.push((m, w));
            }
        }
    }
    Ok(MnhReport { mnh_list, rejected })
}
