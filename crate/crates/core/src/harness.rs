//! Experiment driver: games against named constructions, ratio estimates,
//! exhaustive sweeps over small instances and charging verification.
//!
//! Trials run in parallel. Trial `t` always draws from
//! `RngStream::for_trial(seed, t)` and results are folded in trial order, so
//! output does not depend on the number of worker threads.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::Write;

use itertools::Itertools;
use rayon::prelude::*;

use crate::adversaries::{
    det_path_killer, nextfit_order, nf_path_killer, nf_tree_plan, nf_tree_rounded_plan,
    path_edge, path_then_stars, prufer_decode, random_tree, rp_strategy_mod3, rp_strategy_oddeven,
    shuffle_edges, star_chain, yao_sample, BunchPlan, RevealSequence,
};
use crate::charging::{
    fair_tree_charge, fair_tree_target, ff_tree_charge, ff_tree_target, rp_path_charge,
    VerdictReport,
};
use crate::error::{Error, Result};
use crate::graph::{Assignment, Color, EdgeId, Graph, PartialColoring, VertexId};
use crate::online::{
    run, run_edges, AlgorithmId, Decision, RngStream, Trace, TraceStep,
};
use crate::opt::{all_optimal_edge_sets, opt, opt_path, opt_tree, OptWitness};
use crate::scalar::Scalar;
use crate::Exact;

/// Catalogue entry for `list`.
#[derive(Debug, Clone, Copy)]
pub struct ConstructionInfo {
    pub name: &'static str,
    pub params: &'static str,
    pub algorithms: &'static str,
    pub summary: &'static str,
}

pub const CONSTRUCTIONS: &[ConstructionInfo] = &[
    ConstructionInfo {
        name: "nf-path-killer",
        params: "m>=1",
        algorithms: "nf",
        summary: "path of 2m+1 edges; odd edges first then even edges",
    },
    ConstructionInfo {
        name: "det-path-killer",
        params: "n>=1; k=2",
        algorithms: "deterministic",
        summary: "adaptive; n two-edge paths then chaining connectors (3n-1 edges)",
    },
    ConstructionInfo {
        name: "rp-mod3",
        params: "m>=1 with m = 1 mod 3; k=2",
        algorithms: "any",
        summary: "path; edges 1 mod 3 then 0 mod 3 then 2 mod 3",
    },
    ConstructionInfo {
        name: "rp-oddeven",
        params: "odd m>=1; k=2",
        algorithms: "any",
        summary: "path; odd edges then even edges",
    },
    ConstructionInfo {
        name: "star-chain",
        params: "N>=1; k>=2",
        algorithms: "deterministic or fair",
        summary: "adaptive; N stars of k+1 edges each centered at a leaf of a colored edge",
    },
    ConstructionInfo {
        name: "path-then-stars",
        params: "m>=1; k>=2",
        algorithms: "any",
        summary: "adaptive; path of m edges then k-edge stars at every path vertex if it pays",
    },
    ConstructionInfo {
        name: "nf-tree",
        params: "N>=1; k a square >= 4",
        algorithms: "nf",
        summary: "k recolored copies of N bunches revealed in next-fit order, then connectors",
    },
    ConstructionInfo {
        name: "nf-tree-rounded",
        params: "N>=1; k>=4",
        algorithms: "nf",
        summary: "bunch tree with ceil(sqrt k) for any k",
    },
    ConstructionInfo {
        name: "yao",
        params: "b>=2; k=2",
        algorithms: "any",
        summary: "random path of 3^b-2 edges with a geometric number of subphases",
    },
    ConstructionInfo {
        name: "edge-list",
        params: "input file",
        algorithms: "any",
        summary: "fixed reveal order read from an edge list",
    },
];

/// CSV catalogue of constructions.
pub fn write_construction_list<W: Write>(mut w: W) -> Result<()> {
    writeln!(w, "name,params,algorithms,summary")?;
    for c in CONSTRUCTIONS {
        writeln!(w, "{},{},{},{}", c.name, c.params, c.algorithms, c.summary)?;
    }
    Ok(())
}

/// Raw construction parameters as given on the command line.
#[derive(Debug, Clone, Default)]
pub struct ConstructionParams {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub big_n: Option<usize>,
    pub b: Option<u32>,
    pub edges: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Construction {
    NfPathKiller { m: usize },
    DetPathKiller { n: usize },
    RpMod3 { m: usize },
    RpOddEven { m: usize },
    StarChain { stars: usize },
    PathThenStars { m: usize },
    NfTree { bunches: usize },
    NfTreeRounded { bunches: usize },
    Yao { b: u32 },
    EdgeList { edges: Vec<(usize, usize)> },
}

fn need<T: Copy>(v: Option<T>, name: &str, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Parameter(format!("{name} needs --{flag}")))
}

impl Construction {
    pub fn from_name(name: &str, p: &ConstructionParams) -> Result<Self> {
        Ok(match name {
            "nf-path-killer" => Construction::NfPathKiller { m: need(p.m, name, "m")? },
            "det-path-killer" => Construction::DetPathKiller { n: need(p.n, name, "n")? },
            "rp-mod3" => Construction::RpMod3 { m: need(p.m, name, "m")? },
            "rp-oddeven" => Construction::RpOddEven { m: need(p.m, name, "m")? },
            "star-chain" => Construction::StarChain { stars: need(p.big_n, name, "N")? },
            "path-then-stars" => Construction::PathThenStars { m: need(p.m, name, "m")? },
            "nf-tree" => Construction::NfTree { bunches: need(p.big_n, name, "N")? },
            "nf-tree-rounded" => Construction::NfTreeRounded { bunches: need(p.big_n, name, "N")? },
            "yao" => Construction::Yao { b: need(p.b, name, "b")? },
            "edge-list" => Construction::EdgeList {
                edges: p
                    .edges
                    .clone()
                    .ok_or_else(|| Error::Parameter("edge-list needs an input file".into()))?,
            },
            other => {
                return Err(Error::Parameter(format!(
                    "unknown construction '{other}'; see `list`"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Construction::NfPathKiller { .. } => "nf-path-killer",
            Construction::DetPathKiller { .. } => "det-path-killer",
            Construction::RpMod3 { .. } => "rp-mod3",
            Construction::RpOddEven { .. } => "rp-oddeven",
            Construction::StarChain { .. } => "star-chain",
            Construction::PathThenStars { .. } => "path-then-stars",
            Construction::NfTree { .. } => "nf-tree",
            Construction::NfTreeRounded { .. } => "nf-tree-rounded",
            Construction::Yao { .. } => "yao",
            Construction::EdgeList { .. } => "edge-list",
        }
    }

    /// The instance itself is drawn at random.
    pub fn is_random(&self) -> bool {
        matches!(self, Construction::Yao { .. })
    }

    /// The reveal order, for constructions that do not react to the algorithm.
    pub fn sequence(&self, k: usize) -> Result<Option<RevealSequence>> {
        let mut seq = match self {
            Construction::NfPathKiller { m } => nf_path_killer(*m),
            Construction::RpMod3 { m } => rp_strategy_mod3(*m)?,
            Construction::RpOddEven { m } => rp_strategy_oddeven(*m)?,
            Construction::NfTree { bunches } => nf_tree_plan(k, *bunches)?.sequence(),
            Construction::NfTreeRounded { bunches } => nf_tree_rounded_plan(k, *bunches)?.sequence(),
            Construction::EdgeList { edges } => RevealSequence::new("edge-list", k, edges.clone()),
            _ => return Ok(None),
        };
        seq.k = k;
        Ok(Some(seq))
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        match self {
            Construction::NfPathKiller { m }
            | Construction::RpMod3 { m }
            | Construction::RpOddEven { m }
            | Construction::PathThenStars { m } => write!(f, "{name}(m={m})"),
            Construction::DetPathKiller { n } => write!(f, "{name}(n={n})"),
            Construction::StarChain { stars: n }
            | Construction::NfTree { bunches: n }
            | Construction::NfTreeRounded { bunches: n } => write!(f, "{name}(N={n})"),
            Construction::Yao { b } => write!(f, "{name}(b={b})"),
            Construction::EdgeList { edges } => write!(f, "{name}(edges={})", edges.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmId,
    pub construction: Construction,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Work shared by all trials of one configuration.
enum Prepared {
    Fixed { seq: RevealSequence, opt: usize },
    PerTrial,
}

impl ExperimentConfig {
    /// Whether repeated trials can differ.
    pub fn randomized(&self) -> bool {
        !self.algorithm.is_deterministic() || self.construction.is_random()
    }

    fn prepare(&self) -> Result<Prepared> {
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if self.k == 0 || self.k > crate::graph::MAX_COLORS {
            return Err(Error::Parameter(format!("k = {} out of range", self.k)));
        }
        let alg = self.algorithm.build()?;
        alg.validate(self.k)?;
        match &self.construction {
            Construction::DetPathKiller { n } => {
                det_path_killer(*n, alg.as_ref())?;
            }
            Construction::StarChain { stars } => {
                star_chain(self.k, *stars, alg.as_ref())?;
            }
            Construction::Yao { b } if *b < 2 => {
                return Err(Error::Parameter("yao needs b >= 2".into()));
            }
            _ => {}
        }
        Ok(match self.construction.sequence(self.k)? {
            Some(seq) => {
                let g = seq.graph()?;
                let opt = opt(&g, self.k)?.opt_count;
                Prepared::Fixed { seq, opt }
            }
            None => Prepared::PerTrial,
        })
    }

    fn play(&self, prepared: &Prepared, trial: u64) -> Result<(Trace, usize)> {
        let mut rng = RngStream::for_trial(self.seed, trial);
        let mut alg = self.algorithm.build()?;
        let k = self.k;
        if let Prepared::Fixed { seq, opt } = prepared {
            return Ok((run_edges(alg.as_mut(), &seq.edges, k, &mut rng)?, *opt));
        }
        match &self.construction {
            Construction::DetPathKiller { n } => {
                let mut script = det_path_killer(*n, alg.as_ref())?;
                let t = run(alg.as_mut(), &mut script, k, &mut rng)?;
                let opt = opt_tree(&t.graph, k)?.opt_count;
                Ok((t, opt))
            }
            Construction::StarChain { stars } => {
                let mut script = star_chain(k, *stars, alg.as_ref())?;
                let t = run(alg.as_mut(), &mut script, k, &mut rng)?;
                let opt = opt_tree(&t.graph, k)?.opt_count;
                Ok((t, opt))
            }
            Construction::PathThenStars { m } => {
                // the adversary's own replays use a stream independent of the trial
                let mut adv_rng = RngStream::for_trial(self.seed, u64::MAX);
                let replays = self.trials.clamp(1, 200);
                let mut script = path_then_stars(k, *m, alg.as_ref(), replays, &mut adv_rng)?;
                let t = run(alg.as_mut(), &mut script, k, &mut rng)?;
                Ok((t, script.opt()))
            }
            Construction::Yao { b } => {
                let inst = yao_sample(*b, &mut rng)?;
                let mut seq = inst.sequence();
                seq.k = k;
                let t = run_edges(alg.as_mut(), &seq.edges, k, &mut rng)?;
                Ok((t, opt_path(inst.path_len(), k)?))
            }
            _ => unreachable!("fixed constructions are prepared"),
        }
    }

    /// Trace and OPT of a single trial.
    pub fn trace(&self, trial: u64) -> Result<(Trace, usize)> {
        let prepared = self.prepare()?;
        self.play(&prepared, trial)
    }

    /// Predicted ratio, when the configuration has one.
    pub fn bound(&self, mean_opt: f64) -> Option<f64> {
        let k = self.k as f64;
        let p = match self.algorithm {
            AlgorithmId::FirstFit => Some(1.0),
            AlgorithmId::RandomParity(p) => Some(p),
            _ => None,
        };
        let nf = self.algorithm == AlgorithmId::NextFit;
        match &self.construction {
            Construction::NfPathKiller { m } if nf => {
                let m = *m as f64;
                Some((m + 1.0) / (2.0 * m + 1.0))
            }
            Construction::DetPathKiller { n } => {
                let n = *n as f64;
                Some(2.0 * n / (3.0 * n - 1.0))
            }
            Construction::RpMod3 { m } => p.map(|p| {
                let m = *m as f64;
                (2.0 / 3.0 * (1.0 + p - p * p) * (m - 1.0) + 1.0) / m
            }),
            Construction::RpOddEven { m } => p.map(|p| {
                let m = *m as f64;
                ((p * p - p + 1.0) * (m - 1.0) + 1.0) / m
            }),
            Construction::StarChain { stars } => {
                let n = *stars as f64;
                Some(((k - 1.0) * n + 1.0) / (k * n))
            }
            Construction::PathThenStars { .. } => Some(k / (k + 1.0) + k / ((k + 1.0) * mean_opt)),
            Construction::NfTree { bunches } if nf => {
                let plan = nf_tree_plan(self.k, *bunches).ok()?;
                Some(nf_tree_prediction(&plan) as f64 / mean_opt)
            }
            Construction::NfTreeRounded { bunches } if nf => {
                let plan = nf_tree_rounded_plan(self.k, *bunches).ok()?;
                Some(nf_tree_prediction(&plan) as f64 / mean_opt)
            }
            Construction::Yao { b } => Some(yao_bound(*b) / mean_opt),
            _ => None,
        }
    }
}

/// Edges Next-Fit colors on a bunch tree: every marked edge of every copy
/// plus the joins between copies.
pub fn nf_tree_prediction(plan: &BunchPlan) -> usize {
    plan.k * plan.marked_per_copy() + plan.joins.len()
}

/// Upper bound on the expected number of edges any algorithm colors on the
/// random path instance: `(4/5)a + 1/(5 a^(log_3 6 - 1)) + 1` with `a = 3^b`.
pub fn yao_bound(b: u32) -> f64 {
    let a = 3f64.powi(b as i32);
    0.8 * a + 1.0 / (5.0 * a.powf(6f64.log(3.0) - 1.0)) + 1.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub construction: String,
    pub algorithm: String,
    pub k: usize,
    pub trials: usize,
    /// Mean number of colored edges.
    pub colored: f64,
    /// Standard error of `colored`; present iff the experiment is randomized.
    pub stderr: Option<f64>,
    /// Mean OPT.
    pub opt: f64,
    pub ratio: f64,
    pub bound: Option<f64>,
    /// `bound - ratio`.
    pub margin: Option<f64>,
}

pub const REPORT_HEADER: &str = "construction,algorithm,k,trials,colored,stderr,opt,ratio,bound,margin";

fn opt_field(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RatioReport {
    /// The ratio lies above the bound by more than three standard errors.
    pub fn violated(&self) -> bool {
        let slack = match self.stderr {
            Some(se) if self.opt > 0.0 => 3.0 * se / self.opt,
            _ => 0.0,
        };
        self.margin.is_some_and(|m| m < -(slack + 1e-9))
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.construction,
            self.algorithm,
            self.k,
            self.trials,
            self.colored,
            opt_field(self.stderr),
            self.opt,
            self.ratio,
            opt_field(self.bound),
            opt_field(self.margin),
        )
    }
}

pub fn write_reports<W: Write>(mut w: W, reports: &[RatioReport]) -> Result<()> {
    writeln!(w, "{REPORT_HEADER}")?;
    for r in reports {
        writeln!(w, "{}", r.csv_row())?;
    }
    Ok(())
}

/// Mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Plays the configured game `trials` times (once if nothing is random).
pub fn cmd_run(cfg: &ExperimentConfig) -> Result<RatioReport> {
    let prepared = cfg.prepare()?;
    let randomized = cfg.randomized();
    let trials = if randomized { cfg.trials } else { 1 };
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|t| cfg.play(&prepared, t).map(|(tr, opt)| (tr.colored() as f64, opt as f64)))
        .collect::<Result<Vec<_>>>()?;
    let colored: Vec<f64> = outcomes.iter().map(|o| o.0).collect();
    let opts: Vec<f64> = outcomes.iter().map(|o| o.1).collect();
    let (mean, se) = mean_stderr(&colored);
    let (mean_opt, _) = mean_stderr(&opts);
    let ratio = if mean_opt > 0.0 { mean / mean_opt } else { 1.0 };
    let bound = cfg.bound(mean_opt);
    Ok(RatioReport {
        construction: cfg.construction.to_string(),
        algorithm: cfg.algorithm.to_string(),
        k: cfg.k,
        trials,
        colored: mean,
        stderr: randomized.then_some(se),
        opt: mean_opt,
        ratio,
        bound,
        margin: bound.map(|b| b - ratio),
    })
}

/// Every algorithm against the same sampled random path instances.
pub fn cmd_yao(b: u32, algs: &[AlgorithmId], trials: usize, seed: u64) -> Result<Vec<RatioReport>> {
    algs.iter()
        .map(|a| {
            cmd_run(&ExperimentConfig {
                algorithm: a.clone(),
                construction: Construction::Yao { b },
                k: 2,
                trials,
                seed,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExhaustiveClass {
    Path,
    Tree,
}

/// Who plays the exhaustive sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum Contender {
    Algorithm(AlgorithmId),
    /// Every fair decision sequence, up to renaming unused colors.
    AnyFair,
}

impl fmt::Display for Contender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Contender::Algorithm(a) => write!(f, "{a}"),
            Contender::AnyFair => write!(f, "any-fair"),
        }
    }
}

pub const EXHAUSTIVE_MAX_EDGES: usize = 8;

#[derive(Debug, Clone)]
pub struct ExhaustiveSummary {
    pub class: ExhaustiveClass,
    pub contender: String,
    pub k: usize,
    pub max_edges: usize,
    /// Distinct graphs swept (trees up to isomorphism).
    pub graphs: usize,
    /// Completed games.
    pub runs: usize,
    pub min_ratio: Exact,
    /// Reveal order reaching `min_ratio`.
    pub witness_order: Vec<(usize, usize)>,
    /// Strict ratio every run must reach.
    pub bound: f64,
    pub below_bound: usize,
    /// Charging checks run (distinct colorings x optimal witnesses x roots).
    pub charged: usize,
    pub charge_failures: Vec<String>,
}

impl ExhaustiveSummary {
    pub fn passed(&self) -> bool {
        self.below_bound == 0 && self.charge_failures.is_empty()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "class,contender,k,max_edges,graphs,runs,min_ratio,bound,below_bound,charged,charge_failures,witness_order"
        )?;
        let order = self.witness_order.iter().map(|(u, v)| format!("{u}-{v}")).join(";");
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            match self.class {
                ExhaustiveClass::Path => "path",
                ExhaustiveClass::Tree => "tree",
            },
            self.contender,
            self.k,
            self.max_edges,
            self.graphs,
            self.runs,
            self.min_ratio,
            self.bound,
            self.below_bound,
            self.charged,
            self.charge_failures.len(),
            order
        )?;
        Ok(())
    }
}

/// AHU encoding of a tree, minimized over its centers.
pub fn canonical_tree(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    fn encode(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
        let mut parts: Vec<String> = adj[v]
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| encode(adj, w, v))
            .collect();
        parts.sort();
        format!("({})", parts.concat())
    }
    layer.iter().map(|&c| encode(&adj, c, usize::MAX)).min().unwrap_or_default()
}

/// One representative of every unlabeled tree on `n` vertices.
pub fn nonisomorphic_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    match n {
        0 | 1 => return Vec::new(),
        2 => return vec![vec![(0, 1)]],
        _ => {}
    }
    let mut seen = BTreeMap::new();
    for code in std::iter::repeat(0..n).take(n - 2).multi_cartesian_product() {
        let edges = prufer_decode(&code, n);
        seen.entry(canonical_tree(n, &edges)).or_insert(edges);
    }
    seen.into_values().collect()
}

/// Every fair game on a fixed reveal order, with unused colors interchangeable.
fn all_fair_traces(order: &[(usize, usize)], k: usize, out: &mut Vec<Trace>) -> Result<()> {
    let g = Graph::from_edges(order.iter().copied())?;
    let mut steps = Vec::with_capacity(order.len());
    let mut col = PartialColoring::new(k);
    fn go(
        g: &Graph,
        i: usize,
        used: usize,
        steps: &mut Vec<TraceStep>,
        col: &mut PartialColoring,
        out: &mut Vec<Trace>,
    ) -> Result<()> {
        if i == g.num_edges() {
            let mut graph = Graph::new();
            for s in steps.iter() {
                graph.add_edge(s.u, s.v)?;
            }
            out.push(Trace {
                k: col.k(),
                seed: 0,
                algorithm: "any-fair".into(),
                steps: steps.clone(),
                graph,
                coloring: col.clone(),
            });
            return Ok(());
        }
        let e = EdgeId(i);
        let (u, v) = g.endpoints(e);
        let free = col.available(g, e);
        let choices: Vec<Decision> = if free.is_empty() {
            vec![Decision::Rejected]
        } else {
            free.iter()
                .filter(|c| c.get() <= used + 1)
                .map(Decision::Colored)
                .collect()
        };
        for d in choices {
            let mut next = col.clone();
            next.assign(g, e, d.into())?;
            let used = match d {
                Decision::Colored(c) => used.max(c.get()),
                Decision::Rejected => used,
            };
            steps.push(TraceStep { edge: e, u, v, decision: d });
            go(g, i + 1, used, steps, &mut next, out)?;
            steps.pop();
        }
        Ok(())
    }
    go(&g, 0, 0, &mut steps, &mut col, out)
}

struct GraphSweep {
    runs: usize,
    min: Option<(Exact, Vec<(usize, usize)>)>,
    below: usize,
    charged: usize,
    failures: Vec<String>,
}

fn strict_bound(class: ExhaustiveClass, who: &Contender, k: usize) -> f64 {
    let ff = matches!(who, Contender::Algorithm(AlgorithmId::FirstFit))
        || matches!(who, Contender::Algorithm(AlgorithmId::RandomParity(p)) if *p == 1.0);
    match (class, ff) {
        (ExhaustiveClass::Path, true) => k as f64 / (2.0 * k as f64 - 1.0),
        (ExhaustiveClass::Path, false) => 0.5,
        (ExhaustiveClass::Tree, true) => ff_tree_target::<f64>(k),
        (ExhaustiveClass::Tree, false) => fair_tree_target::<f64>(k).unwrap_or(0.0),
    }
}

fn remap_witness(w: &OptWitness, order: &[usize]) -> OptWitness {
    OptWitness {
        k: w.k,
        colors: order.iter().map(|&i| w.colors[i]).collect(),
        opt_count: w.opt_count,
    }
}

fn charge_check(trace: &Trace, w: &OptWitness, root: VertexId, ff: bool) -> Result<Option<String>> {
    let (passed, detail) = if ff {
        let r = ff_tree_charge::<Exact>(trace, w, root)?;
        (r.passed(), format!("{:?}", r.violations))
    } else if let Some(c) = fair_tree_target::<Exact>(trace.k) {
        let r = crate::charging::fair_tree_charge_at::<Exact>(trace, w, root, c)?;
        (r.passed(), format!("{:?}", r.violations))
    } else {
        let r = fair_tree_charge::<f64>(trace, w, root)?;
        (r.passed(), format!("{:?}", r.violations))
    };
    Ok((!passed).then(|| {
        let order = trace.steps.iter().map(|s| format!("{}-{}", s.u, s.v)).join(";");
        format!("order {order} root {root}: {detail}")
    }))
}

fn sweep_graph(
    class: ExhaustiveClass,
    edges: &[(usize, usize)],
    k: usize,
    who: &Contender,
    bound: f64,
) -> Result<GraphSweep> {
    let g = Graph::from_edges(edges.iter().copied())?;
    let m = edges.len();
    let best = opt_tree(&g, k)?;
    let opt_count = best.opt_count;
    let ff = matches!(who, Contender::Algorithm(AlgorithmId::FirstFit));
    let witnesses = if class == ExhaustiveClass::Tree {
        all_optimal_edge_sets(&g, k)?
    } else {
        Vec::new()
    };
    let mut seen: HashSet<Vec<Assignment>> = HashSet::new();
    let mut sweep = GraphSweep {
        runs: 0,
        min: None,
        below: 0,
        charged: 0,
        failures: Vec::new(),
    };
    let mut traces = Vec::new();
    for perm in (0..m).permutations(m) {
        let order: Vec<(usize, usize)> = perm.iter().map(|&i| edges[i]).collect();
        traces.clear();
        match who {
            Contender::Algorithm(a) => {
                let mut alg = a.build()?;
                traces.push(run_edges(alg.as_mut(), &order, k, &mut RngStream::new(0))?);
            }
            Contender::AnyFair => all_fair_traces(&order, k, &mut traces)?,
        }
        for t in &traces {
            sweep.runs += 1;
            let colored = t.colored();
            let ratio = if opt_count == 0 {
                Exact::from_usize(1)
            } else {
                Exact::new(colored as i128, opt_count as i128)
            };
            if sweep.min.as_ref().map_or(true, |(r, _)| ratio < *r) {
                sweep.min = Some((ratio, order.clone()));
            }
            if (colored as f64) < bound * opt_count as f64 - 1e-9 {
                sweep.below += 1;
            }
            if class != ExhaustiveClass::Tree {
                continue;
            }
            // charging depends on the coloring only; key it by original edge ids
            let mut key = vec![Assignment::Pending; m];
            for (step, &orig) in perm.iter().enumerate() {
                key[orig] = match t.coloring.get(EdgeId(step)) {
                    // the fair strategy only sees which edges are colored
                    Assignment::Colored(_) if !ff => Assignment::Colored(Color::new(1)?),
                    a => a,
                };
            }
            if !seen.insert(key) {
                continue;
            }
            for w in &witnesses {
                let w = remap_witness(w, &perm);
                for v in g.vertices() {
                    sweep.charged += 1;
                    if let Some(f) = charge_check(t, &w, v, ff)? {
                        sweep.failures.push(f);
                    }
                }
            }
        }
    }
    Ok(sweep)
}

/// Plays every reveal order of every path (or tree, up to isomorphism) with
/// `1..=max_edges` edges and checks the strict ratio. On trees each distinct
/// final coloring is also run through the charging verifier for every
/// optimal edge set and every root.
pub fn cmd_exhaustive(
    class: ExhaustiveClass,
    max_edges: usize,
    k: usize,
    who: &Contender,
) -> Result<ExhaustiveSummary> {
    if max_edges > EXHAUSTIVE_MAX_EDGES {
        return Err(Error::TooLarge(format!(
            "exhaustive sweeps are limited to {EXHAUSTIVE_MAX_EDGES} edges, got {max_edges}"
        )));
    }
    if k == 0 || k > crate::graph::MAX_COLORS {
        return Err(Error::Parameter(format!("k = {k} out of range")));
    }
    if let Contender::Algorithm(a) = who {
        if !a.is_deterministic() {
            return Err(Error::Refused(format!(
                "'{a}' is randomized; exhaustive sweeps need a deterministic algorithm"
            )));
        }
        a.build()?.validate(k)?;
    }
    let graphs: Vec<Vec<(usize, usize)>> = (1..=max_edges)
        .flat_map(|m| match class {
            ExhaustiveClass::Path => vec![(1..=m).map(path_edge).collect()],
            ExhaustiveClass::Tree => nonisomorphic_trees(m + 1),
        })
        .collect();
    let bound = strict_bound(class, who, k);
    let sweeps = graphs
        .par_iter()
        .map(|edges| sweep_graph(class, edges, k, who, bound))
        .collect::<Result<Vec<_>>>()?;
    let mut summary = ExhaustiveSummary {
        class,
        contender: who.to_string(),
        k,
        max_edges,
        graphs: graphs.len(),
        runs: 0,
        min_ratio: Exact::from_usize(1),
        witness_order: Vec::new(),
        bound,
        below_bound: 0,
        charged: 0,
        charge_failures: Vec::new(),
    };
    for s in sweeps {
        summary.runs += s.runs;
        summary.below_bound += s.below;
        summary.charged += s.charged;
        summary.charge_failures.extend(s.failures);
        if let Some((r, order)) = s.min {
            if r < summary.min_ratio || summary.witness_order.is_empty() && r == summary.min_ratio {
                summary.min_ratio = r;
                summary.witness_order = order;
            }
        }
    }
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyStrategy {
    FfTree,
    FairTree,
    RpPath,
}

impl VerifyStrategy {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "ff-tree" => Ok(VerifyStrategy::FfTree),
            "fair-tree" => Ok(VerifyStrategy::FairTree),
            "rp-path" => Ok(VerifyStrategy::RpPath),
            other => Err(Error::Parameter(format!(
                "unknown strategy '{other}'; expected ff-tree, fair-tree or rp-path"
            ))),
        }
    }
}

/// Where `verify` gets its instances.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    /// Random trees (or paths for `rp-path`) in random reveal order.
    Random { count: usize, max_edges: usize },
    Construction(Construction),
}

/// A verdict in whichever scalar the strategy could run in.
#[derive(Debug, Clone)]
pub enum AnyVerdict {
    Exact(VerdictReport<Exact>),
    Float(VerdictReport<f64>),
}

impl AnyVerdict {
    pub fn passed(&self) -> bool {
        match self {
            AnyVerdict::Exact(r) => r.passed(),
            AnyVerdict::Float(r) => r.passed(),
        }
    }

    pub fn min_margin(&self) -> Option<f64> {
        match self {
            AnyVerdict::Exact(r) => r.min_margin().map(|m| m.to_f64()),
            AnyVerdict::Float(r) => r.min_margin(),
        }
    }

    pub fn violations(&self) -> &[String] {
        match self {
            AnyVerdict::Exact(r) => &r.violations,
            AnyVerdict::Float(r) => &r.violations,
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        match self {
            AnyVerdict::Exact(r) => r.write_csv(w),
            AnyVerdict::Float(r) => r.write_csv(w),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifySummary {
    pub strategy: VerifyStrategy,
    pub reports: Vec<AnyVerdict>,
    /// Instances whose preconditions failed, with the reason.
    pub refused: Vec<String>,
}

impl VerifySummary {
    pub fn failed(&self) -> usize {
        self.reports.iter().filter(|r| !r.passed()).count()
    }

    pub fn passed(&self) -> bool {
        self.failed() == 0 && self.refused.is_empty()
    }

    pub fn min_margin(&self) -> Option<f64> {
        self.reports
            .iter()
            .filter_map(AnyVerdict::min_margin)
            .reduce(f64::min)
    }

    /// One line per instance: `instance,passed,min_margin,violations`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "instance,passed,min_margin,violations")?;
        for (i, r) in self.reports.iter().enumerate() {
            writeln!(
                w,
                "{i},{},{},{}",
                r.passed(),
                opt_field(r.min_margin()),
                r.violations().len()
            )?;
        }
        Ok(())
    }
}

fn default_root(g: &Graph) -> VertexId {
    g.vertices().find(|&v| g.degree(v) > 0).unwrap_or(VertexId(0))
}

fn verify_trace(strategy: VerifyStrategy, trace: &Trace) -> Result<AnyVerdict> {
    let w = opt_tree(&trace.graph, trace.k)?;
    let root = default_root(&trace.graph);
    Ok(match strategy {
        VerifyStrategy::FfTree => AnyVerdict::Exact(ff_tree_charge(trace, &w, root)?),
        _ => match fair_tree_target::<Exact>(trace.k) {
            Some(_) => AnyVerdict::Exact(fair_tree_charge(trace, &w, root)?),
            None => AnyVerdict::Float(fair_tree_charge(trace, &w, root)?),
        },
    })
}

/// Runs a charging strategy over a family of instances.
///
/// Tree strategies play `alg` (First-Fit for `ff-tree`) on each instance;
/// `rp-path` is analytic and needs only the reveal order and an exact `p`.
pub fn cmd_verify(
    strategy: VerifyStrategy,
    source: &InstanceSource,
    k: usize,
    alg: &AlgorithmId,
    p: Option<Exact>,
    seed: u64,
) -> Result<VerifySummary> {
    let alg = match strategy {
        VerifyStrategy::FfTree => AlgorithmId::FirstFit,
        _ => alg.clone(),
    };
    let outcomes: Vec<Result<AnyVerdict>> = match (strategy, source) {
        (VerifyStrategy::RpPath, src) => {
            let p = p.ok_or_else(|| Error::Parameter("rp-path needs --p".into()))?;
            let orders: Vec<RevealSequence> = match src {
                InstanceSource::Random { count, max_edges } => (0..*count as u64)
                    .map(|i| {
                        let mut rng = RngStream::for_trial(seed, i);
                        let m = 1 + rng.below((*max_edges).max(1));
                        let mut edges: Vec<_> = (1..=m).map(path_edge).collect();
                        shuffle_edges(&mut edges, &mut rng);
                        RevealSequence::new("random-path", 2, edges)
                    })
                    .collect(),
                InstanceSource::Construction(c) => match c.sequence(2)? {
                    Some(seq) => vec![seq],
                    None => {
                        return Err(Error::Refused(format!(
                            "rp-path needs a fixed reveal order; '{}' is adaptive",
                            c.name()
                        )))
                    }
                },
            };
            orders
                .par_iter()
                .map(|o| rp_path_charge(o, p).map(AnyVerdict::Exact))
                .collect()
        }
        (_, InstanceSource::Random { count, max_edges }) => {
            let alg = &alg;
            (0..*count as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = RngStream::for_trial(seed, i);
                    let n = 2 + rng.below((*max_edges).max(1));
                    let mut edges = random_tree(n, &mut rng);
                    shuffle_edges(&mut edges, &mut rng);
                    let mut a = alg.build()?;
                    let t = run_edges(a.as_mut(), &edges, k, &mut rng)?;
                    verify_trace(strategy, &t)
                })
                .collect()
        }
        (_, InstanceSource::Construction(c)) => {
            let cfg = ExperimentConfig {
                algorithm: alg.clone(),
                construction: c.clone(),
                k,
                trials: 1,
                seed,
            };
            let (t, _) = cfg.trace(0)?;
            vec![verify_trace(strategy, &t)]
        }
    };
    let mut summary = VerifySummary {
        strategy,
        reports: Vec::new(),
        refused: Vec::new(),
    };
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(r) => summary.reports.push(r),
            Err(e) => summary.refused.push(format!("instance {i}: {e}")),
        }
    }
    Ok(summary)
}

/// Graph and coloring from edge-list rows whose first extra column is a
/// color (1-based) or `R`/`-` for uncolored.
pub fn coloring_from_rows(rows: &[(usize, usize, Vec<String>)], k: usize) -> Result<(Graph, PartialColoring)> {
    let g = Graph::from_edges(rows.iter().map(|r| (r.0, r.1)))?;
    let assignment = rows
        .iter()
        .enumerate()
        .map(|(line, r)| match r.2.first().map(String::as_str) {
            None | Some("R") | Some("-") | Some("") => Ok(Assignment::Rejected),
            Some(c) => c
                .parse::<usize>()
                .map_err(|_| Error::Parse {
                    line: line + 1,
                    msg: format!("bad color '{c}'"),
                })
                .and_then(|c| {
                    if c == 0 || c > k {
                        Err(Error::Parse {
                            line: line + 1,
                            msg: format!("color {c} outside 1..={k}"),
                        })
                    } else {
                        Ok(Assignment::Colored(Color::new(c)?))
                    }
                }),
        })
        .collect::<Result<Vec<_>>>()?;
    let col = PartialColoring::from_assignments(&g, k, &assignment)?;
    Ok((g, col))
}

/// Reveal order under which Next-Fit reproduces the given coloring.
pub fn cmd_nf_order(rows: &[(usize, usize, Vec<String>)], k: usize) -> Result<RevealSequence> {
    let (g, col) = coloring_from_rows(rows, k)?;
    nextfit_order(&g, &col)
}

pub fn cmd_opt(edges: &[(usize, usize)], k: usize) -> Result<(Graph, OptWitness)> {
    let g = Graph::from_edges(edges.iter().copied())?;
    let w = opt(&g, k)?;
    Ok((g, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(alg: AlgorithmId, c: Construction, k: usize, trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            algorithm: alg,
            construction: c,
            k,
            trials,
            seed: 7,
        }
    }

    #[test]
    fn counts_of_unlabeled_trees() {
        let counts: Vec<usize> = (1..=8).map(|n| nonisomorphic_trees(n).len()).collect();
        assert_eq!(counts, vec![0, 1, 1, 2, 3, 6, 11, 23]);
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let a = canonical_tree(4, &[(0, 1), (1, 2), (2, 3)]);
        let b = canonical_tree(4, &[(2, 0), (0, 3), (3, 1)]);
        let star = canonical_tree(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(a, b);
        assert_ne!(a, star);
    }

    #[test]
    fn nf_path_killer_report() {
        let r = cmd_run(&cfg(AlgorithmId::NextFit, Construction::NfPathKiller { m: 10 }, 2, 5)).unwrap();
        assert_eq!(r.colored, 11.0);
        assert_eq!(r.opt, 21.0);
        assert_eq!(r.trials, 1);
        assert_eq!(r.stderr, None);
        assert!(r.margin.unwrap().abs() < 1e-12);
        assert!(!r.violated());
    }

    #[test]
    fn randomized_report_has_stderr() {
        let c = cfg(AlgorithmId::RandomParity(0.7), Construction::RpOddEven { m: 21 }, 2, 50);
        let r = cmd_run(&c).unwrap();
        assert_eq!(r.trials, 50);
        assert!(r.stderr.is_some());
        assert!((0.0..=1.0).contains(&r.ratio));
        assert_eq!(cmd_run(&c).unwrap(), r);
    }

    #[test]
    fn mismatches_are_reported() {
        let c = cfg(AlgorithmId::RandomParity(0.7), Construction::DetPathKiller { n: 5 }, 2, 1);
        assert!(matches!(cmd_run(&c), Err(Error::Refused(_))));
        let c = cfg(AlgorithmId::NextFit, Construction::NfTree { bunches: 2 }, 5, 1);
        assert!(cmd_run(&c).is_err());
        let c = cfg(AlgorithmId::FirstFit, Construction::RpMod3 { m: 5 }, 2, 1);
        assert!(cmd_run(&c).is_err());
        let p = ConstructionParams::default();
        assert!(Construction::from_name("nf-path-killer", &p).is_err());
        assert!(Construction::from_name("nope", &p).is_err());
    }

    #[test]
    fn every_listed_construction_parses() {
        let p = ConstructionParams {
            m: Some(7),
            n: Some(3),
            big_n: Some(2),
            b: Some(3),
            edges: Some(vec![(0, 1)]),
        };
        for info in CONSTRUCTIONS {
            assert_eq!(Construction::from_name(info.name, &p).unwrap().name(), info.name);
        }
    }

    #[test]
    fn yao_bound_value() {
        assert!((yao_bound(6) - (583.2 + 1.0 / 320.0 + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn small_exhaustive_sweeps() {
        let s = cmd_exhaustive(ExhaustiveClass::Path, 4, 2, &Contender::Algorithm(AlgorithmId::FirstFit)).unwrap();
        assert!(s.passed());
        assert_eq!(s.runs, 1 + 2 + 6 + 24);
        assert_eq!(s.min_ratio, Exact::new(3, 4));
        let s = cmd_exhaustive(ExhaustiveClass::Tree, 4, 2, &Contender::AnyFair).unwrap();
        assert!(s.passed(), "{:?}", s.charge_failures);
        assert!(s.charged > 0);
        assert!(cmd_exhaustive(ExhaustiveClass::Path, 9, 2, &Contender::AnyFair).is_err());
    }

    #[test]
    fn nf_order_from_rows() {
        let rows = vec![
            (0, 1, vec!["1".to_string()]),
            (1, 2, vec!["2".to_string()]),
            (2, 3, vec!["R".to_string()]),
        ];
        let seq = cmd_nf_order(&rows, 2).unwrap();
        assert_eq!(seq.len(), 2);
        assert!(cmd_nf_order(&[(0, 1, vec!["3".into()])], 2).is_err());
    }
}
