//! Text formats: slope-list files, hyperbolicity oracle tables, grid
//! specs, and multislope syntax shared by the subcommands.
//!
//! Slope-list format: one slope per line (`p/q`, signs allowed, bare
//! integers mean `n/1`); blank lines and `#` comments are skipped. The
//! writer records a certified diameter bound, when present, as a
//! `# certified-bound N` comment, and the reader restores it.
//!
//! Oracle format: one line per multislope, `<multislope> H|N`, where a
//! multislope is comma-separated slopes with `inf` for the unfilled
//! marker. The table must be total on the grid's partial-filling closure.

use std::collections::BTreeMap;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use farey_core::fillings::{Hyperbolicity, HyperbolicityOracle, Multislope};
use farey_core::{Slope, SlopeSet};

pub fn parse_slope(s: &str) -> Result<Slope> {
    Slope::from_str(s).map_err(|e| anyhow!("{}", e))
}

pub fn parse_multislope(s: &str) -> Result<Multislope> {
    Multislope::from_str(s).map_err(|e| anyhow!("{}", e))
}

pub fn parse_slope_set(text: &str) -> Result<SlopeSet> {
    let mut members = Vec::new();
    let mut bound = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("certified-bound ") {
                bound = Some(
                    v.trim()
                        .parse::<u64>()
                        .with_context(|| format!("line {}: bad certified-bound", i + 1))?,
                );
            }
            continue;
        }
        members.push(parse_slope(line).with_context(|| format!("line {}", i + 1))?);
    }
    Ok(match bound {
        Some(b) => SlopeSet::with_bound(members, b),
        None => SlopeSet::new(members),
    })
}

pub fn format_slope_set(s: &SlopeSet) -> String {
    let mut out = String::new();
    if let Some(b) = s.certified_bound() {
        out.push_str(&format!("# certified-bound {}\n", b));
    }
    for m in s.members() {
        out.push_str(&format!("{}\n", m));
    }
    out
}

/// Grid spec: per-index slope lists separated by `;`, slopes by `,`.
/// Example: `1/0,0/1,1/1;1/0,0/1,1/1` for a 3x3 grid on two tori.
pub fn parse_grid(spec: &str) -> Result<Vec<Vec<Slope>>> {
    let mut grid = Vec::new();
    for (i, part) in spec.split(';').enumerate() {
        let mut slopes = Vec::new();
        for tok in part.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            slopes
                .push(parse_slope(tok).with_context(|| format!("grid index {}", i + 1))?);
        }
        if slopes.is_empty() {
            bail!("grid index {} has no slopes", i + 1);
        }
        grid.push(slopes);
    }
    if grid.is_empty() {
        bail!("empty grid spec");
    }
    Ok(grid)
}

pub fn parse_oracle(text: &str, grid: Vec<Vec<Slope>>) -> Result<HyperbolicityOracle> {
    let mut table = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (ms, verdict) = line
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| anyhow!("line {}: expected `<multislope> H|N`", i + 1))?;
        let ms = parse_multislope(ms.trim()).with_context(|| format!("line {}", i + 1))?;
        let verdict = match verdict.trim() {
            "H" => Hyperbolicity::Hyperbolic,
            "N" => Hyperbolicity::NonHyperbolic,
            other => bail!("line {}: verdict `{}` is not H or N", i + 1, other),
        };
        if table.insert(ms, verdict).is_some() {
            bail!("line {}: duplicate multislope", i + 1);
        }
    }
    HyperbolicityOracle::from_table(grid, table).map_err(|e| anyhow!("{}", e))
}

/// `a,b,c,d` row-major.
pub fn parse_matrix(spec: &str) -> Result<[i64; 4]> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        bail!("matrix spec needs four comma-separated entries, got {}", parts.len());
    }
    let mut m = [0i64; 4];
    for (i, p) in parts.iter().enumerate() {
        m[i] = p.parse().with_context(|| format!("matrix entry {}", i + 1))?;
    }
    Ok(m)
}
