//! End-to-end acceptance suite.
//!
//! One test per criterion; each prints a single `criterion N ...: pass`
//! line on success (visible with `--nocapture`) and fails loudly
//! otherwise. Oracle comparisons use the truncated BFS re-run at a doubled
//! bound so that every quoted distance is stable under truncation.

use std::collections::BTreeMap;

use farey_core::bounded::{self, SlopeSet};
use farey_core::covers::{self, CoverMap};
use farey_core::fillings::{
    find_all_mnh, is_mnh, pf_leq, Hyperbolicity, HyperbolicityOracle, Multislope,
};
use farey_core::metric::{self, oracle_single_run};
use farey_core::slope::{self, cf_min_length, slopes_within, FillingEntry, Slope};
use farey_core::transforms::{self, UnimodularMap};
use farey_core::txtree::{self, ViolationKind};

fn s(t: &str) -> Slope {
    t.parse().unwrap()
}

fn ms(t: &str) -> Multislope {
    t.parse().unwrap()
}

/// Deterministic linear congruential generator for seeded sampling.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// BFS distances from `src`, certified stable by agreement of two
/// consecutive truncation bounds on every target of interest.
fn stable_oracle_map(src: &Slope, targets: &[Slope], bound: u64) -> BTreeMap<Slope, u64> {
    let lo = oracle_single_run(src, bound).unwrap();
    let hi = oracle_single_run(src, 2 * bound).unwrap();
    let mut out = BTreeMap::new();
    for t in targets {
        let a = lo.get(t).map(|(d, _)| *d);
        let b = hi.get(t).map(|(d, _)| *d);
        assert_eq!(
            a, b,
            "oracle distance from {} to {} unstable between bounds {} and {}",
            src, t, bound, 2 * bound
        );
        out.insert(t.clone(), a.expect("target reached"));
    }
    out
}

#[test]
fn criterion_01_cover_correspondence_fixture() {
    let c = CoverMap::new(1, 0, 0, 2).unwrap();
    let up = ["0/1", "1/2", "1/1", "1/0"];
    let down = ["0/1", "1/1", "2/1", "1/0"];
    for (u, d) in up.iter().zip(down.iter()) {
        let pushed = covers::pushforward_slope(&c, &s(u));
        assert_eq!(pushed.to_string(), *d, "pushforward of {}", u);
        let pulled = covers::pullback_slope(&c, &s(d));
        assert_eq!(pulled.to_string(), *u, "pullback of {}", d);
    }
    println!("criterion 1 (cover correspondence fixture): pass");
}

#[test]
fn criterion_02_non_isomorphism_witness() {
    let c = CoverMap::new(1, 0, 0, 2).unwrap();
    let a = covers::pushforward_slope(&c, &s("0/1"));
    let b = covers::pushforward_slope(&c, &s("1/1"));
    assert!(slope::is_farey_edge(&s("0/1"), &s("1/1")));
    assert_eq!(slope::intersection_number(&a, &b), 2u32.into());
    assert_eq!(metric::distance(&a, &b).value, 2);
    println!("criterion 2 (non-isomorphism witness): pass");
}

#[test]
fn criterion_03_oracle_fast_agreement() {
    let grid = slopes_within(30);
    let mut checked = 0u64;
    for a in &grid {
        let oracle = stable_oracle_map(a, &grid, 64);
        for b in &grid {
            let fast = metric::distance(a, b).value;
            assert_eq!(fast, oracle[b], "fast/oracle mismatch for ({}, {})", a, b);
            checked += 1;
        }
    }
    println!(
        "criterion 3 (oracle/fast agreement, {} pairs over {} slopes): pass",
        checked,
        grid.len()
    );
}

#[test]
fn criterion_04_continued_fraction_identity() {
    let inf = Slope::infinity();
    let mut targets = Vec::new();
    for q in 1i64..=200 {
        for p in -200i64..=200 {
            if num_integer::gcd(p, q) == 1 {
                targets.push(Slope::from_fraction(p, q).unwrap());
            }
        }
    }
    let oracle = stable_oracle_map(&inf, &targets, 256);
    for t in &targets {
        assert_eq!(cf_min_length(t), oracle[t], "cf length mismatch at {}", t);
    }
    println!(
        "criterion 4 (continued-fraction identity, {} slopes): pass",
        targets.len()
    );
}

#[test]
fn criterion_05_lipschitz_audit() {
    let matrices: [(i64, i64, i64, i64); 4] =
        [(1, 0, 0, 2), (1, 0, 0, 3), (2, 0, 0, 2), (2, 0, 0, 3)];
    let grid = slopes_within(20);
    let mut pairs = Vec::new();
    for (i, a) in grid.iter().enumerate() {
        for b in &grid[i + 1..] {
            pairs.push((a.clone(), b.clone()));
        }
    }
    for (a, b, c, d) in matrices {
        let cover = CoverMap::new(a, b, c, d).unwrap();
        let audit = covers::lipschitz_audit(&cover, &pairs);
        assert!(
            audit.within_bound,
            "degree {}: ratios {:.4}/{:.4} exceed bound {:.4}",
            audit.degree,
            audit.max_ratio_down_over_up,
            audit.max_ratio_up_over_down,
            audit.bound
        );
    }
    println!(
        "criterion 5 (bilipschitz audit, degrees 2/3/4/6, {} pairs each): pass",
        pairs.len()
    );
}

#[test]
fn criterion_06_certified_bounds() {
    let pool = slopes_within(15);
    let mut rng = Lcg(0x5eed_cafe);
    for instance in 0..100 {
        let k = 3 + rng.below(4) as usize;
        let mut members = Vec::new();
        for _ in 0..k {
            members.push(pool[rng.below(pool.len() as u64) as usize].clone());
        }
        let b = SlopeSet::new(members);
        let alpha = pool[rng.below(pool.len() as u64) as usize].clone();
        let c = 1 + rng.below(15);

        let orbit = bounded::twist_saturate(&b, &alpha, -3..=3).unwrap();
        let orbit_bound = orbit.certified_bound().unwrap();
        let orbit_diam = bounded::diameter(&orbit).unwrap();
        assert!(
            orbit_diam <= orbit_bound,
            "instance {}: twist orbit diameter {} exceeds certificate {}",
            instance,
            orbit_diam,
            orbit_bound
        );

        let nbhd = bounded::delta_neighborhood(&b, c, 20);
        let nbhd_bound = nbhd.certified_bound().unwrap();
        let nbhd_diam = bounded::diameter(&nbhd).unwrap();
        assert!(
            nbhd_diam <= nbhd_bound,
            "instance {}: neighborhood diameter {} exceeds certificate {} (c = {})",
            instance,
            nbhd_diam,
            nbhd_bound,
            c
        );
    }
    println!("criterion 6 (certified diameter bounds, 100 seeded instances): pass");
}

#[test]
fn criterion_07_isometry_properties() {
    let grid = slopes_within(20);
    let twist_pool: Vec<Slope> =
        ["0/1", "1/0", "1/1", "-1/1", "1/2", "2/1", "-2/3"].iter().map(|t| s(t)).collect();
    let mut rng = Lcg(0xfa_ce7);
    for map_index in 0..50 {
        let mut m = UnimodularMap::identity();
        for _ in 0..(2 + rng.below(4)) {
            if rng.below(4) == 0 {
                m = m.compose(&transforms::reflect_map());
            } else {
                let alpha = &twist_pool[rng.below(twist_pool.len() as u64) as usize];
                let power = rng.below(5) as i64 - 2;
                m = m.compose(&transforms::twist_map(alpha).pow(power));
            }
        }
        let images: Vec<Slope> = grid.iter().map(|g| m.apply(g)).collect();
        for (i, a) in grid.iter().enumerate() {
            for (j, b) in grid.iter().enumerate().skip(i + 1) {
                assert_eq!(
                    slope::intersection_number(a, b),
                    slope::intersection_number(&images[i], &images[j]),
                    "map {} does not preserve the intersection number of ({}, {})",
                    map_index,
                    a,
                    b
                );
            }
        }
        for _ in 0..100 {
            let i = rng.below(grid.len() as u64) as usize;
            let j = rng.below(grid.len() as u64) as usize;
            assert_eq!(
                metric::distance(&grid[i], &grid[j]).value,
                metric::distance(&images[i], &images[j]).value,
                "map {} does not preserve the distance of ({}, {})",
                map_index,
                grid[i],
                grid[j]
            );
        }
    }
    println!("criterion 7 (isometry properties, 50 seeded maps): pass");
}

#[test]
fn criterion_08_mnh_brute_force() {
    // a slot-0 clasp slope makes the filling non-hyperbolic; everything
    // else stays hyperbolic
    let grid = vec![
        vec![s("1/0"), s("0/1"), s("1/1")],
        vec![s("1/0"), s("0/1"), s("1/1")],
    ];
    let clasp = FillingEntry::Filled(s("1/0"));
    let oracle = HyperbolicityOracle::from_fn(grid, |m| {
        if m.entries()[0] == clasp {
            Hyperbolicity::NonHyperbolic
        } else {
            Hyperbolicity::Hyperbolic
        }
    })
    .unwrap();
    let report = find_all_mnh(&oracle).unwrap();
    assert_eq!(report.mnh_list, vec![ms("1/0,inf")]);

    // descent: every non-hyperbolic multislope dominates some mnh one
    let pool: Vec<Slope> = ["1/0", "0/1", "1/1", "-1/2"].iter().map(|t| s(t)).collect();
    let rng = std::cell::RefCell::new(Lcg(0xde5ce27));
    for oracle_index in 0..10 {
        let indices = 1 + rng.borrow_mut().below(3) as usize;
        let mut grid = Vec::new();
        for _ in 0..indices {
            let width = 1 + rng.borrow_mut().below(4) as usize;
            grid.push(pool[..width].to_vec());
        }
        let oracle = HyperbolicityOracle::from_fn(grid, |_| {
            if rng.borrow_mut().below(3) == 0 {
                Hyperbolicity::NonHyperbolic
            } else {
                Hyperbolicity::Hyperbolic
            }
        })
        .unwrap();
        let mnh = find_all_mnh(&oracle).unwrap().mnh_list;
        for m in oracle.domain() {
            if oracle.classify(&m).unwrap() == Hyperbolicity::NonHyperbolic {
                let descends = mnh.iter().any(|w| pf_leq(w, &m).unwrap());
                assert!(
                    descends,
                    "oracle {}: non-hyperbolic {} dominates no mnh multislope",
                    oracle_index, m
                );
                assert_eq!(
                    is_mnh(&m, &oracle).unwrap().is_mnh,
                    mnh.contains(&m),
                    "mnh scan and direct check disagree at {}",
                    m
                );
            }
        }
    }
    println!("criterion 8 (mnh brute force and descent): pass");
}

const TREE_FIXTURE: &str = "\
txtree v1
node id=X0 class=hyperbolic level=0 tori=3 volume=5.33
node id=X2 class=jsj level=2 parent=X0 edge=mnh:1/0,inf,inf tori=2
node id=X3a class=hyperbolic level=3 parent=X2 edge=jsj volume=2.03
node id=X3b class=hyperbolic level=3 parent=X2 edge=jsj volume=2.03
";

#[test]
fn criterion_09_tree_validator() {
    use ViolationKind::*;

    let tree = txtree::parse_tree(TREE_FIXTURE).unwrap();
    assert_eq!(txtree::tree_size(&tree), 4);
    assert!(txtree::validate(&tree).is_valid());
    assert!(txtree::check_volume_chain(&tree).unwrap().violations.is_empty());

    // single-field mutations, each with its expected violation classes
    let mutations: [(usize, &str, &[ViolationKind]); 12] = [
        (1, "node id=X0 class=hyperbolic level=1 tori=3 volume=5.33",
            &[LevelCongruence]),
        (1, "node id=X0 class=hyperbolic level=3 tori=3 volume=5.33",
            &[RootLevel, EdgeLevel]),
        (1, "node id=X0 class=sol level=0 tori=3 volume=5.33",
            &[VolumeOnNonHyperbolic, LeafRule]),
        (2, "node id=X2 class=reducible level=2 parent=X0 edge=mnh:1/0,inf,inf tori=2",
            &[LevelCongruence, EdgeLabelKind, EdgeLabelKind]),
        (2, "node id=X2 class=seifert level=2 parent=X0 edge=mnh:1/0,inf,inf tori=2",
            &[LevelCongruence, LeafRule]),
        (2, "node id=X2 class=jsj level=1 parent=X0 edge=mnh:1/0,inf,inf tori=2",
            &[LevelCongruence]),
        (2, "node id=X2 class=jsj level=5 parent=X0 edge=mnh:1/0,inf,inf tori=2",
            &[EdgeLevel, EdgeLevel, EdgeLevel]),
        (2, "node id=X2 class=jsj level=2 parent=X0 edge=jsj tori=2",
            &[EdgeLabelKind]),
        (3, "node id=X3a class=hyperbolic level=3 parent=X2 edge=prime volume=2.03",
            &[EdgeLabelKind]),
        (3, "node id=X3a class=hyperbolic level=6 parent=X2 edge=jsj volume=2.03",
            &[EdgeLevel]),
        (3, "node id=X3a class=hyperbolic level=0 parent=X2 edge=jsj volume=2.03",
            &[EdgeLevel]),
        (4, "node id=X3b class=jsj level=3 parent=X2 edge=jsj volume=2.03",
            &[LevelCongruence, VolumeOnNonHyperbolic]),
    ];
    for (which, (line, replacement, expected)) in mutations.iter().enumerate() {
        let mut lines: Vec<&str> = TREE_FIXTURE.lines().collect();
        lines[*line] = replacement;
        let doc = format!("{}\n", lines.join("\n"));
        let tree = txtree::parse_tree(&doc).unwrap();
        let mut got = txtree::validate(&tree).kinds();
        let mut want = expected.to_vec();
        got.sort();
        want.sort();
        assert_eq!(got, want, "mutation {} produced unexpected violations", which + 1);
    }

    // volume-chain check must reject a non-decreasing hyperbolic chain
    let bad = TREE_FIXTURE.replace(
        "node id=X3a class=hyperbolic level=3 parent=X2 edge=jsj volume=2.03",
        "node id=X3a class=hyperbolic level=3 parent=X2 edge=jsj volume=6.0",
    );
    let tree = txtree::parse_tree(&bad).unwrap();
    assert!(txtree::validate(&tree).is_valid());
    let chain = txtree::check_volume_chain(&tree).unwrap();
    assert_eq!(chain.violations.len(), 1);
    assert_eq!(chain.violations[0].earlier_id, "X0");
    assert_eq!(chain.violations[0].later_id, "X3a");
    println!("criterion 9 (decomposition-tree validator, 12 mutations): pass");
}

#[test]
fn criterion_10_closure_derivation() {
    let pairs = [
        ("0/1", "0/1"),
        ("1/0", "0/1"),
        ("1/2", "1/1"),
        ("2/3", "1/0"),
        ("1/1", "-1/2"),
    ];
    for (seed, center) in pairs {
        let seed = s(seed);
        let center = s(center);
        for d in 1..=3 {
            let derivation = bounded::closure_derive(&seed, &center, d, 8);
            let replayed = derivation.replay().unwrap_or_else(|e| {
                panic!("replay failed for ({}, {}, {}): {}", seed, center, d, e)
            });
            let ball = metric::enumerate_ball(&center, d, 8);
            assert_eq!(
                replayed.members(),
                ball.members(),
                "derived set differs from the ball for ({}, {}, {})",
                seed,
                center,
                d
            );
        }
    }
    println!("criterion 10 (closure derivations replay to balls): pass");
}
