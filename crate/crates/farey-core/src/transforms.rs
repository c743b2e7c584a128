//! Unimodular actions on slopes: Dehn twists, the orientation-reversing
//! reflection, and the four mapping-class cases on a single boundary torus.

use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::slope::Slope;

/// A 2x2 integer matrix with `|det| = 1`, acting on slopes by
/// matrix-vector product followed by canonicalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularMap {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// Error constructing a [`UnimodularMap`] whose determinant is not `±1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotUnimodular {
    pub det: BigInt,
}

impl fmt::Display for NotUnimodular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "matrix has determinant {}, expected ±1", self.det)
    }
}

/// Error from [`mcg_case_map`] with a case outside `1..=4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BadCase(pub u8);

impl fmt::Display for BadCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mapping-class case {} outside 1..=4", self.0)
    }
}

impl UnimodularMap {
    /// Entries are rows of `[[a, b], [c, d]]` acting on column vectors `(x, y)`.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, NotUnimodular> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        let det = &a * &d - &b * &c;
        if det.abs().is_one() {
            Ok(UnimodularMap { a, b, c, d })
        } else {
            Err(NotUnimodular { det })
        }
    }

    pub fn identity() -> Self {
        UnimodularMap::new(1, 0, 0, 1).unwrap()
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Image of a slope under this map, canonicalized.
    pub fn apply(&self, s: &Slope) -> Slope {
        let nx = &self.a * s.x() + &self.b * s.y();
        let ny = &self.c * s.x() + &self.d * s.y();
        Slope::new(nx, ny).expect("unimodular image of a nonzero vector is nonzero")
    }

    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        UnimodularMap {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    pub fn pow(&self, n: i64) -> UnimodularMap {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = UnimodularMap::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }

    pub fn inverse(&self) -> UnimodularMap {
        let det = self.det();
        // adj / det, and det is ±1
        UnimodularMap {
            a: &self.d / &det,
            b: -(&self.b) / &det,
            c: -(&self.c) / &det,
            d: &self.a / &det,
        }
    }
}

impl fmt::Display for UnimodularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// The Dehn twist about `alpha` as a map on slopes:
/// `v -> v + î(v, γ) γ` for `γ` the canonical vector of `alpha`, where
/// `î(v, γ) = v.x γ.y - v.y γ.x`. Fixes `alpha`; `det = 1`.
///
/// As a matrix this is `[[1 + γx γy, -γx²], [γy², 1 - γx γy]]`. With this
/// sign convention the twist about `1/0` sends `p/q` to `(p+q)/q`; the
/// opposite convention is the inverse map.
pub fn twist_map(alpha: &Slope) -> UnimodularMap {
    let gx = alpha.x();
    let gy = alpha.y();
    UnimodularMap {
        a: BigInt::one() + gx * gy,
        b: -(gx * gx),
        c: gy * gy,
        d: BigInt::one() - gx * gy,
    }
}

/// Image of `s` under `m`; alias for [`UnimodularMap::apply`].
pub fn apply_map(m: &UnimodularMap, s: &Slope) -> Slope {
    m.apply(s)
}

/// The reflection `p/q -> -p/q`, an involution fixing `1/0` and `0/1`.
pub fn reflect(s: &Slope) -> Slope {
    Slope::new(s.x().clone(), -s.y()).expect("reflection of a nonzero vector is nonzero")
}

/// The reflection as a matrix (`(x, y) -> (x, -y)`).
pub fn reflect_map() -> UnimodularMap {
    UnimodularMap::new(1, 0, 0, -1).unwrap()
}

/// The four possible actions of a boundary mapping class on `H1(T^2; Z)`:
/// identity, antipodal, `(p,q) -> (-p,q)`, `(p,q) -> (p,-q)`.
///
/// Cases 1 and 2 fix every slope as an unoriented class; cases 3 and 4
/// agree with [`reflect`] on slopes. Which orientation-reversing behavior
/// a given manifold realizes is not decided here.
pub fn mcg_case_map(case: u8) -> Result<UnimodularMap, BadCase> {
    // display convention p = y, q = x
    match case {
        1 => Ok(UnimodularMap::identity()),
        2 => Ok(UnimodularMap::new(-1, 0, 0, -1).unwrap()),
        3 => Ok(UnimodularMap::new(1, 0, 0, -1).unwrap()),
        4 => Ok(UnimodularMap::new(-1, 0, 0, 1).unwrap()),
        n => Err(BadCase(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slope::{intersection_number, slopes_within};

    fn s(t: &str) -> Slope {
        t.parse().unwrap()
    }

    #[test]
    fn twist_about_infinity_is_plus_one() {
        let t = twist_map(&s("1/0"));
        assert_eq!(t.apply(&s("0/1")), s("1/1"));
        assert_eq!(t.apply(&s("5/7")), s("12/7"));
        assert_eq!(t.pow(3).apply(&s("0/1")), s("3/1"));
    }

    #[test]
    fn twist_fixes_its_slope() {
        for a in slopes_within(5) {
            let t = twist_map(&a);
            assert_eq!(t.apply(&a), a);
            assert_eq!(t.pow(4).apply(&a), a);
            assert_eq!(t.det(), BigInt::one());
        }
    }

    #[test]
    fn twist_about_zero_on_infinity() {
        assert_eq!(twist_map(&s("0/1")).apply(&s("1/0")), s("-1/1"));
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(reflect(&s("1/0")), s("1/0"));
        assert_eq!(reflect(&s("0/1")), s("0/1"));
        assert_eq!(reflect(&s("5/7")), s("-5/7"));
        for a in slopes_within(5) {
            assert_eq!(reflect(&reflect(&a)), a);
            assert_eq!(reflect_map().apply(&a), reflect(&a));
        }
    }

    #[test]
    fn mcg_cases() {
        assert_eq!(mcg_case_map(1).unwrap().apply(&s("5/7")), s("5/7"));
        assert_eq!(mcg_case_map(2).unwrap().apply(&s("5/7")), s("5/7"));
        assert_eq!(mcg_case_map(3).unwrap().apply(&s("5/7")), s("-5/7"));
        assert_eq!(mcg_case_map(4).unwrap().apply(&s("5/7")), s("-5/7"));
        assert_eq!(mcg_case_map(0), Err(BadCase(0)));
        assert_eq!(mcg_case_map(5), Err(BadCase(5)));
        for a in slopes_within(6) {
            assert_eq!(mcg_case_map(1).unwrap().apply(&a), a);
            assert_eq!(mcg_case_map(2).unwrap().apply(&a), a);
            assert_eq!(mcg_case_map(3).unwrap().apply(&a), reflect(&a));
        }
    }

    #[test]
    fn unimodular_preserves_intersection() {
        let maps = [
            twist_map(&s("1/0")),
            twist_map(&s("1/2")),
            reflect_map(),
            twist_map(&s("2/3")).compose(&reflect_map()),
        ];
        for m in &maps {
            for a in slopes_within(4) {
                for b in slopes_within(4) {
                    assert_eq!(
                        intersection_number(&m.apply(&a), &m.apply(&b)),
                        intersection_number(&a, &b)
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(UnimodularMap::new(1, 0, 0, 2).is_err());
        assert!(UnimodularMap::new(2, 1, 1, 1).is_ok()); // det 1
    }
}
