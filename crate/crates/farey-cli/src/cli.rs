//! Command-line interface: argument parsing and dispatch.
//!
//! Every command has a plain-text output and, under the global `--json`
//! flag, a structured JSON form on stdout. Errors go to stderr and yield a
//! nonzero exit code.

use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use farey_core::{
    bounded, covers, fillings, metric, slope, transforms, txtree, CoverMap, Slope, SlopeSet,
};
use serde_json::{json, Value};

use crate::formats;
use crate::render;

#[derive(Parser)]
#[command(name = "farey", about = "Exact Farey-graph metric, slope transforms, covers, bounded slope sets, partial fillings, and decomposition-tree checks", version)]
struct Cli {
    /// Emit structured JSON instead of plain text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Farey distance between two slopes
    Dist {
        a: String,
        b: String,
        /// Use the truncated-BFS oracle instead of the fast path
        #[arg(long)]
        oracle: bool,
        /// Initial entry bound for the oracle
        #[arg(long, default_value_t = 32)]
        entry_bound: u64,
    },
    /// A geodesic between two slopes, one vertex per line
    Path { a: String, b: String },
    /// All slopes within a given distance of a center, truncated to an entry bound
    Ball {
        center: String,
        radius: u64,
        #[arg(long, default_value_t = 100)]
        entry_bound: u64,
    },
    /// Apply a power of the Dehn twist about a slope
    Twist {
        /// The twisting slope
        #[arg(long)]
        about: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        power: i64,
        target: String,
    },
    /// Reflect a slope (p/q to -p/q)
    Reflect { target: String },
    /// Push a slope forward or pull it back along a covering map
    Cover {
        /// Covering matrix as a,b,c,d (row major, nonzero determinant)
        #[arg(long)]
        matrix: String,
        direction: CoverDirection,
        target: String,
    },
    /// Bilipschitz audit of a covering map over all slope pairs within a bound
    CoverAudit {
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = 10)]
        entry_bound: u64,
    },
    /// Operations on slope-set files
    #[command(subcommand)]
    Setops(SetOp),
    /// Find all minimally non-hyperbolic multislopes of an oracle table
    Mnh {
        /// Oracle table file: one line per multislope, "MULTISLOPE H|N"
        #[arg(long)]
        oracle: PathBuf,
        /// Grid spec: per-index slope lists joined by ';', slopes by ','
        #[arg(long)]
        grid: String,
    },
    /// Decomposition-tree file checks
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Render the Farey tessellation of the disk as SVG
    RenderFarey {
        #[arg(long, default_value_t = 4)]
        depth: u32,
        /// Slopes to mark and label
        #[arg(long)]
        highlight: Vec<String>,
        /// Output file (stdout if omitted)
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverDirection {
    Push,
    Pull,
}

#[derive(Args)]
struct SetFileArg {
    /// Slope-set file: one slope per line, optional "# certified-bound N"
    file: PathBuf,
}

#[derive(Subcommand)]
enum SetOp {
    /// Union of two slope sets, with combined certificate when available
    Union { a: PathBuf, b: PathBuf },
    /// Exact diameter of a slope set
    Diameter(SetFileArg),
    /// Orbit of a set under powers of a Dehn twist
    TwistSaturate {
        #[command(flatten)]
        set: SetFileArg,
        #[arg(long)]
        about: String,
        #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
        min_power: i64,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        max_power: i64,
    },
    /// All slopes meeting the set with intersection number at most c
    DeltaNeighborhood {
        #[command(flatten)]
        set: SetFileArg,
        #[arg(long)]
        c: u64,
        #[arg(long, default_value_t = 100)]
        entry_bound: u64,
    },
    /// Derive a metric ball from a seed slope by closure rules, then replay it
    ClosureDerive {
        #[arg(long)]
        seed: String,
        #[arg(long)]
        center: String,
        #[arg(long)]
        radius: u64,
        #[arg(long, default_value_t = 20)]
        entry_bound: u64,
    },
}

#[derive(Subcommand)]
enum TreeCmd {
    /// Parse a tree file and report structural violations
    Validate { file: PathBuf },
    /// Number of nodes in a tree file
    Size { file: PathBuf },
    /// Check strict volume decrease along hyperbolic chains
    VolumeChain { file: PathBuf },
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e);
            1
        }
    }
}

fn emit(json_mode: bool, value: Value, plain: String) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&value).expect("serializable value"));
    } else {
        println!("{}", plain);
    }
}

fn read_set(path: &PathBuf) -> Result<SlopeSet> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading slope set {}", path.display()))?;
    formats::parse_slope_set(&text)
}

fn set_value(s: &SlopeSet) -> Value {
    json!({
        "members": s.members().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "certified_bound": s.certified_bound(),
    })
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let jm = cli.json;
    match &cli.command {
        Command::Dist { a, b, oracle, entry_bound } => {
            let a = formats::parse_slope(a)?;
            let b = formats::parse_slope(b)?;
            let r = if *oracle {
                metric::distance_oracle(&a, &b, *entry_bound).map_err(|e| anyhow!("{}", e))?
            } else {
                metric::distance(&a, &b)
            };
            let method = match r.method {
                metric::Method::Oracle => "oracle",
                metric::Method::Fast => "fast",
            };
            emit(
                jm,
                json!({"distance": r.value, "method": method, "stable": r.stable}),
                r.value.to_string(),
            );
        }
        Command::Path { a, b } => {
            let a = formats::parse_slope(a)?;
            let b = formats::parse_slope(b)?;
            let p = metric::geodesic_path(&a, &b).map_err(|e| anyhow!("{}", e))?;
            let verts: Vec<String> = p.vertices.iter().map(|v| v.to_string()).collect();
            emit(
                jm,
                json!({"length": p.len_edges(), "vertices": verts}),
                verts.join("\n"),
            );
        }
        Command::Ball { center, radius, entry_bound } => {
            let c = formats::parse_slope(center)?;
            let ball = metric::enumerate_ball(&c, *radius, *entry_bound);
            emit(jm, set_value(&ball), formats::format_slope_set(&ball));
        }
        Command::Twist { about, power, target } => {
            let alpha = formats::parse_slope(about)?;
            let t = formats::parse_slope(target)?;
            let image = transforms::twist_map(&alpha).pow(*power).apply(&t);
            emit(jm, json!({"image": image.to_string()}), image.to_string());
        }
        Command::Reflect { target } => {
            let t = formats::parse_slope(target)?;
            let image = transforms::reflect(&t);
            emit(jm, json!({"image": image.to_string()}), image.to_string());
        }
        Command::Cover { matrix, direction, target } => {
            let c = cover_from_spec(matrix)?;
            let t = formats::parse_slope(target)?;
            let image = match direction {
                CoverDirection::Push => covers::pushforward_slope(&c, &t),
                CoverDirection::Pull => covers::pullback_slope(&c, &t),
            };
            emit(jm, json!({"image": image.to_string()}), image.to_string());
        }
        Command::CoverAudit { matrix, entry_bound } => {
            let c = cover_from_spec(matrix)?;
            let slopes = slope::slopes_within(*entry_bound);
            let mut pairs = Vec::new();
            for (i, a) in slopes.iter().enumerate() {
                for b in &slopes[i + 1..] {
                    pairs.push((a.clone(), b.clone()));
                }
            }
            let audit = covers::lipschitz_audit(&c, &pairs);
            let summary = format!(
                "degree {}  bound {:.4}  max down/up {:.4}  max up/down {:.4}  within_bound {}",
                audit.degree,
                audit.bound,
                audit.max_ratio_down_over_up,
                audit.max_ratio_up_over_down,
                audit.within_bound
            );
            emit(
                jm,
                json!({
                    "degree": audit.degree.to_string(),
                    "bound": audit.bound,
                    "pairs_audited": audit.pairs.len(),
                    "max_ratio_down_over_up": audit.max_ratio_down_over_up,
                    "max_ratio_up_over_down": audit.max_ratio_up_over_down,
                    "within_bound": audit.within_bound,
                }),
                summary,
            );
            if !audit.within_bound {
                return Ok(2);
            }
        }
        Command::Setops(op) => return run_setop(jm, op),
        Command::Mnh { oracle, grid } => {
            let grid = formats::parse_grid(grid)?;
            let text = fs::read_to_string(oracle)
                .with_context(|| format!("reading oracle {}", oracle.display()))?;
            let oracle = formats::parse_oracle(&text, grid)?;
            let report = fillings::find_all_mnh(&oracle).map_err(|e| anyhow!("{}", e))?;
            let list: Vec<String> = report.mnh_list.iter().map(|m| m.to_string()).collect();
            emit(
                jm,
                json!({"mnh": list, "rejected": report.rejected.len()}),
                if list.is_empty() { "(none)".to_string() } else { list.join("\n") },
            );
        }
        Command::Tree(cmd) => return run_tree(jm, cmd),
        Command::RenderFarey { depth, highlight, out } => {
            let marks: Vec<Slope> = highlight
                .iter()
                .map(|h| formats::parse_slope(h))
                .collect::<Result<_>>()?;
            let svg = render::render_farey(*depth, &marks)?;
            match out {
                Some(path) => {
                    fs::write(path, &svg)
                        .with_context(|| format!("writing {}", path.display()))?;
                    emit(
                        jm,
                        json!({"written": path.display().to_string(), "bytes": svg.len()}),
                        format!("wrote {} ({} bytes)", path.display(), svg.len()),
                    );
                }
                None => print!("{}", svg),
            }
        }
    }
    Ok(0)
}

fn cover_from_spec(spec: &str) -> Result<CoverMap> {
    let [a, b, c, d] = formats::parse_matrix(spec)?;
    CoverMap::new(a, b, c, d).map_err(|e| anyhow!("{}", e))
}

fn run_setop(jm: bool, op: &SetOp) -> Result<i32> {
    match op {
        SetOp::Union { a, b } => {
            let a = read_set(a)?;
            let b = read_set(b)?;
            let u = bounded::union(&a, &b);
            emit(jm, set_value(&u), formats::format_slope_set(&u));
        }
        SetOp::Diameter(arg) => {
            let s = read_set(&arg.file)?;
            let d = bounded::diameter(&s).map_err(|e| anyhow!("{}", e))?;
            emit(jm, json!({"diameter": d}), d.to_string());
        }
        SetOp::TwistSaturate { set, about, min_power, max_power } => {
            if min_power > max_power {
                bail!("empty power range {}..={}", min_power, max_power);
            }
            let s = read_set(&set.file)?;
            let alpha = formats::parse_slope(about)?;
            let orbit = bounded::twist_saturate(&s, &alpha, *min_power..=*max_power)
                .map_err(|e| anyhow!("{}", e))?;
            emit(jm, set_value(&orbit), formats::format_slope_set(&orbit));
        }
        SetOp::DeltaNeighborhood { set, c, entry_bound } => {
            let s = read_set(&set.file)?;
            let n = bounded::delta_neighborhood(&s, *c, *entry_bound);
            emit(jm, set_value(&n), formats::format_slope_set(&n));
        }
        SetOp::ClosureDerive { seed, center, radius, entry_bound } => {
            let seed = formats::parse_slope(seed)?;
            let center = formats::parse_slope(center)?;
            let derivation = bounded::closure_derive(&seed, &center, *radius, *entry_bound);
            let replayed = derivation.replay().map_err(|e| anyhow!("replay failed: {}", e))?;
            let final_set = derivation.final_set();
            if replayed != final_set {
                bail!("replay does not reproduce the derived set");
            }
            let steps: Vec<Value> = derivation
                .steps
                .iter()
                .map(|s| {
                    let rule = match &s.rule {
                        bounded::ClosureRule::Subset => json!({"rule": "subset"}),
                        bounded::ClosureRule::Union => json!({"rule": "union"}),
                        bounded::ClosureRule::TwistOrbit { alpha, n_range } => json!({
                            "rule": "twist-orbit",
                            "about": alpha.to_string(),
                            "powers": [n_range.0, n_range.1],
                        }),
                        bounded::ClosureRule::DeltaNeighborhood { c, entry_bound } => json!({
                            "rule": "delta-neighborhood", "c": c, "entry_bound": entry_bound,
                        }),
                    };
                    json!({
                        "rule": rule,
                        "size": s.result.len(),
                        "certified_bound": s.result.certified_bound(),
                    })
                })
                .collect();
            let mut plain = String::new();
            for (i, s) in derivation.steps.iter().enumerate() {
                plain.push_str(&format!(
                    "step {}: {:?} -> {} slopes (bound {:?})\n",
                    i + 1,
                    s.rule,
                    s.result.len(),
                    s.result.certified_bound()
                ));
            }
            plain.push_str("replay: ok\n");
            plain.push_str(&formats::format_slope_set(&final_set));
            emit(
                jm,
                json!({"steps": steps, "replay_ok": true, "final": set_value(&final_set)}),
                plain,
            );
        }
    }
    Ok(0)
}

fn run_tree(jm: bool, cmd: &TreeCmd) -> Result<i32> {
    let path = match cmd {
        TreeCmd::Validate { file } | TreeCmd::Size { file } | TreeCmd::VolumeChain { file } => file,
    };
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading tree {}", path.display()))?;
    let tree = txtree::parse_tree(&text).map_err(|errs| {
        let lines: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
        anyhow!("parse failed:\n{}", lines.join("\n"))
    })?;
    match cmd {
        TreeCmd::Validate { .. } => {
            let report = txtree::validate(&tree);
            let items: Vec<Value> = report
                .violations
                .iter()
                .map(|v| {
                    json!({
                        "node": v.node_id,
                        "kind": v.kind.to_string(),
                        "message": v.message,
                    })
                })
                .collect();
            let plain = if report.is_valid() {
                "valid".to_string()
            } else {
                report
                    .violations
                    .iter()
                    .map(|v| format!("{}: {}: {}", v.node_id, v.kind, v.message))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            emit(jm, json!({"valid": report.is_valid(), "violations": items}), plain);
            if !report.is_valid() {
                return Ok(2);
            }
        }
        TreeCmd::Size { .. } => {
            let n = txtree::tree_size(&tree);
            emit(jm, json!({"size": n}), n.to_string());
        }
        TreeCmd::VolumeChain { .. } => {
            let report = txtree::check_volume_chain(&tree).map_err(|e| anyhow!("{}", e))?;
            let items: Vec<Value> = report
                .violations
                .iter()
                .map(|v| json!({"earlier": v.earlier_id, "later": v.later_id}))
                .collect();
            let ok = report.violations.is_empty();
            let plain = if ok {
                "valid".to_string()
            } else {
                report
                    .violations
                    .iter()
                    .map(|v| format!("volume does not decrease from {} to {}", v.earlier_id, v.later_id))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            emit(jm, json!({"valid": ok, "violations": items}), plain);
            if !ok {
                return Ok(2);
            }
        }
    }
    Ok(0)
}
