//! Input constructions: fixed reveal orders, adaptive adversaries that watch
//! the algorithm's decisions, the randomized path distribution used for the
//! minimax lower bound, and the Next-Fit reproducing order.
//!
//! Path edges are numbered from 1 as `e_i = (i - 1, i)`, so a path with `m`
//! edges uses vertices `0..=m`.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph::{Assignment, Color, EdgeId, Graph, PartialColoring};
use crate::online::{
    run, run_edges, AdversaryScript, EdgeScript, GameView, OnlineAlgorithm, RngStream, Trace,
};

/// A fixed reveal order.
#[derive(Debug, Clone, PartialEq)]
pub struct RevealSequence {
    pub edges: Vec<(usize, usize)>,
    pub k: usize,
    pub name: String,
    pub params: Vec<(String, String)>,
}

impl RevealSequence {
    pub fn new(name: &str, k: usize, edges: Vec<(usize, usize)>) -> Self {
        RevealSequence {
            edges,
            k,
            name: name.to_owned(),
            params: Vec::new(),
        }
    }

    fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn graph(&self) -> Result<Graph> {
        Graph::from_edges(self.edges.iter().copied())
    }

    pub fn script(&self) -> EdgeScript {
        EdgeScript::new(self.edges.clone())
    }

    pub fn play(&self, alg: &mut dyn OnlineAlgorithm, rng: &mut RngStream) -> Result<Trace> {
        run_edges(alg, &self.edges, self.k, rng)
    }
}

/// `e_i` of a path, 1-based.
pub fn path_edge(i: usize) -> (usize, usize) {
    (i - 1, i)
}

fn path_sequence(name: &str, order: impl IntoIterator<Item = usize>) -> RevealSequence {
    RevealSequence::new(name, 2, order.into_iter().map(path_edge).collect())
}

/// Path of `2m + 1` edges: odd edges left to right, then even edges.
/// Next-Fit alternates colors on the odd edges and must reject every even one.
pub fn nf_path_killer(m: usize) -> RevealSequence {
    let len = 2 * m + 1;
    let odd = (1..=len).step_by(2);
    let even = (2..=len).step_by(2);
    path_sequence("nf-path-killer", odd.chain(even)).with("m", m)
}

/// Path order: `i ≡ 1 (mod 3)`, then `i ≡ 0`, then the rest. Requires
/// `m ≡ 1 (mod 3)`.
pub fn rp_strategy_mod3(m: usize) -> Result<RevealSequence> {
    if m == 0 || (m - 1) % 3 != 0 {
        return Err(Error::Parameter(format!(
            "mod-3 strategy needs 3 | m - 1, got m = {m}"
        )));
    }
    let pick = |r: usize| (1..=m).filter(move |i| i % 3 == r);
    Ok(path_sequence("rp-mod3", pick(1).chain(pick(0)).chain(pick(2))).with("m", m))
}

/// Path order: odd edges, then even edges. Requires odd `m`.
pub fn rp_strategy_oddeven(m: usize) -> Result<RevealSequence> {
    if m % 2 == 0 {
        return Err(Error::Parameter(format!(
            "odd/even strategy needs odd m, got m = {m}"
        )));
    }
    let odd = (1..=m).step_by(2);
    let even = (2..=m).step_by(2);
    Ok(path_sequence("rp-oddeven", odd.chain(even)).with("m", m))
}

/// Adaptive path adversary against deterministic algorithms.
///
/// Phase one reveals `n` disjoint two-edge paths. Fully colored ones are then
/// chained so each connector touches both colors; the others are chained end
/// to end; one more edge joins the two chains when both exist. Total `3n - 1`
/// edges, at most `2n` of them colorable by the algorithm.
#[derive(Debug, Clone)]
pub struct DetPathKiller {
    n: usize,
    emitted: usize,
    connectors: Option<Vec<(usize, usize)>>,
}

pub fn det_path_killer(n: usize, alg: &dyn OnlineAlgorithm) -> Result<DetPathKiller> {
    if !alg.is_deterministic() {
        return Err(Error::Refused(format!(
            "'{}' is randomized; the two-path classification needs a deterministic algorithm",
            alg.name()
        )));
    }
    if n == 0 {
        return Err(Error::Parameter("n must be at least 1".into()));
    }
    Ok(DetPathKiller {
        n,
        emitted: 0,
        connectors: None,
    })
}

impl DetPathKiller {
    fn plan(&self, view: &GameView<'_>) -> Vec<(usize, usize)> {
        let col = view.coloring;
        // left leaf 3j, middle 3j+1, right leaf 3j+2; left edge has id 2j
        let mut full = Vec::new();
        let mut partial = Vec::new();
        for j in 0..self.n {
            let left = col.color(EdgeId(2 * j));
            let right = col.color(EdgeId(2 * j + 1));
            match (left, right) {
                (Some(l), Some(_)) => {
                    let (leaf1, leaf2) = if l.get() == 1 {
                        (3 * j, 3 * j + 2)
                    } else {
                        (3 * j + 2, 3 * j)
                    };
                    full.push((leaf1, leaf2));
                }
                _ => partial.push(j),
            }
        }
        let mut out = Vec::new();
        for w in full.windows(2) {
            out.push((w[0].0, w[1].1));
        }
        for w in partial.windows(2) {
            out.push((3 * w[0] + 2, 3 * w[1]));
        }
        if let (Some(f), Some(&u)) = (full.last(), partial.first()) {
            out.push((f.0, 3 * u));
        }
        out
    }
}

impl AdversaryScript for DetPathKiller {
    fn next_edge(&mut self, view: &GameView<'_>) -> Result<Option<(usize, usize)>> {
        if view.k != 2 {
            return Err(Error::Parameter("the two-path adversary plays with k = 2".into()));
        }
        let i = self.emitted;
        self.emitted += 1;
        if i < 2 * self.n {
            let j = i / 2;
            return Ok(Some(if i % 2 == 0 {
                (3 * j, 3 * j + 1)
            } else {
                (3 * j + 1, 3 * j + 2)
            }));
        }
        if self.connectors.is_none() {
            self.connectors = Some(self.plan(view));
        }
        Ok(self.connectors.as_ref().unwrap().get(i - 2 * self.n).copied())
    }

    fn reveal_bound(&self) -> usize {
        3 * self.n - 1
    }
}

/// One draw of the randomized path input behind the 4/5 minimax bound.
///
/// The path has `a - 2` edges with `a = 3^b`. Subphase `i` (for
/// `1 <= i <= L`) reveals `a / 3^i` isolated edges at every second position,
/// the second phase reveals `a / 3^(L+1)` isolated edges at every third
/// position of the rest, and the third phase reveals everything left in path
/// order. Edge indices are 1-based path positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YaoInstance {
    pub b: u32,
    pub a: usize,
    pub l: usize,
    /// `E_1, ..., E_{L+1}`
    pub subphases: Vec<Vec<usize>>,
    /// `F_1, ..., F_{L+1}`
    pub connectors: Vec<Vec<usize>>,
    /// Edges joining the last edge of `E_i` to the first of `E_{i+1}`, `i <= L`.
    pub links: Vec<usize>,
    pub order: Vec<usize>,
}

impl YaoInstance {
    pub fn path_len(&self) -> usize {
        self.a - 2
    }

    pub fn sequence(&self) -> RevealSequence {
        path_sequence("yao", self.order.iter().copied())
            .with("b", self.b)
            .with("L", self.l)
    }
}

/// Builds the instance for a given number of subphases `l <= b - 1`.
pub fn yao_instance(b: u32, l: usize) -> Result<YaoInstance> {
    if b < 1 {
        return Err(Error::Parameter("b must be at least 1".into()));
    }
    if l > b as usize - 1 {
        return Err(Error::Parameter(format!("L = {l} exceeds b - 1 = {}", b - 1)));
    }
    let a = 3usize.pow(b);
    let m = a - 2;
    let mut subphases = Vec::new();
    let mut connectors = Vec::new();
    let mut links = Vec::new();
    let mut done = 0usize; // N_{i-1}
    for i in 1..=l {
        let ai = a / 3usize.pow(i as u32);
        let start = 2 * done;
        subphases.push((1..=ai).map(|j| start + 2 * j - 1).collect::<Vec<_>>());
        connectors.push((1..ai).map(|j| start + 2 * j).collect::<Vec<_>>());
        links.push(start + 2 * ai);
        done += ai;
    }
    let last = a / 3usize.pow(l as u32 + 1);
    let start = 2 * done;
    let phase2: Vec<usize> = (1..=last).map(|j| start + 3 * j - 2).collect();
    let mut tail: Vec<usize> = (1..last).flat_map(|j| [start + 3 * j - 1, start + 3 * j]).collect();
    tail.retain(|&i| i <= m);
    subphases.push(phase2);
    connectors.push(tail);

    let mut revealed = vec![false; m + 1];
    let mut order = Vec::with_capacity(m);
    for e in subphases.iter().flatten() {
        revealed[*e] = true;
        order.push(*e);
    }
    order.extend((1..=m).filter(|&i| !revealed[i]));
    Ok(YaoInstance {
        b,
        a,
        l,
        subphases,
        connectors,
        links,
        order,
    })
}

/// Samples `L` with `Pr[L = i] = 2^-(i+1)` for `i <= b - 2` and
/// `Pr[L = b - 1] = 2^-(b-1)`, then builds the instance.
pub fn yao_sample(b: u32, rng: &mut RngStream) -> Result<YaoInstance> {
    if b < 1 {
        return Err(Error::Parameter("b must be at least 1".into()));
    }
    let mut l = 0;
    while l < b as usize - 1 && rng.next_unit() < 0.5 {
        l += 1;
    }
    yao_instance(b, l)
}

/// Exact probability of each `L` under [`yao_sample`].
pub fn yao_l_distribution(b: u32) -> Vec<f64> {
    let top = b as usize - 1;
    (0..=top)
        .map(|i| {
            if i < top {
                0.5f64.powi(i as i32 + 1)
            } else {
                0.5f64.powi(top as i32)
            }
        })
        .collect()
}

/// How "arbitrary" choices inside a construction are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    LowestId,
    Seeded(u64),
}

/// Chain of `N` stars with `k + 1` edges each; the next center is a leaf of
/// a colored edge of the previous star whenever one exists.
#[derive(Debug, Clone)]
pub struct StarChain {
    k: usize,
    stars: usize,
    tie: TieBreak,
    rng: Option<RngStream>,
    center: usize,
    next_vertex: usize,
    star_edges: Vec<EdgeId>,
    star: usize,
}

pub fn star_chain(k: usize, stars: usize, alg: &dyn OnlineAlgorithm) -> Result<StarChain> {
    star_chain_with(k, stars, alg, TieBreak::LowestId)
}

pub fn star_chain_with(
    k: usize,
    stars: usize,
    alg: &dyn OnlineAlgorithm,
    tie: TieBreak,
) -> Result<StarChain> {
    if k < 2 {
        return Err(Error::Parameter("star chain needs k >= 2".into()));
    }
    if !alg.is_deterministic() && !alg.is_fair() {
        return Err(Error::Refused(format!(
            "'{}' is randomized and unfair; a colored edge cannot be identified",
            alg.name()
        )));
    }
    let rng = match tie {
        TieBreak::LowestId => None,
        TieBreak::Seeded(s) => Some(RngStream::new(s)),
    };
    Ok(StarChain {
        k,
        stars,
        tie,
        rng,
        center: 0,
        next_vertex: 1,
        star_edges: Vec::new(),
        star: 0,
    })
}

impl StarChain {
    pub fn tie_break(&self) -> TieBreak {
        self.tie
    }

    fn pick(&mut self, candidates: &[EdgeId]) -> EdgeId {
        match &mut self.rng {
            None => candidates[0],
            Some(r) => candidates[r.below(candidates.len())],
        }
    }
}

impl AdversaryScript for StarChain {
    fn next_edge(&mut self, view: &GameView<'_>) -> Result<Option<(usize, usize)>> {
        if self.star >= self.stars {
            return Ok(None);
        }
        if self.star_edges.len() == self.k + 1 {
            let colored: Vec<EdgeId> = self
                .star_edges
                .iter()
                .copied()
                .filter(|&e| view.coloring.is_colored(e))
                .collect();
            let all = self.star_edges.clone();
            let chosen = if colored.is_empty() {
                self.pick(&all)
            } else {
                self.pick(&colored)
            };
            let (u, v) = view.graph.endpoints(chosen);
            self.center = if u.0 == self.center { v.0 } else { u.0 };
            self.star_edges.clear();
            self.star += 1;
            if self.star >= self.stars {
                return Ok(None);
            }
        }
        let leaf = self.next_vertex;
        self.next_vertex += 1;
        self.star_edges.push(EdgeId(view.steps.len()));
        Ok(Some((self.center, leaf)))
    }

    fn reveal_bound(&self) -> usize {
        self.stars * (self.k + 1)
    }
}

/// Reveals a path of `m` edges; if the algorithm's expected count on it
/// exceeds `km/(k+1)`, adds a `k`-edge star at every path vertex.
///
/// The expectation is exact for deterministic algorithms and otherwise the
/// mean of `trials` independent replays of the path.
pub struct PathThenStars {
    k: usize,
    m: usize,
    prototype: Box<dyn OnlineAlgorithm>,
    trials: usize,
    seed: u64,
    emitted: usize,
    estimate: Option<f64>,
    triggered: bool,
}

pub fn path_then_stars(
    k: usize,
    m: usize,
    alg: &dyn OnlineAlgorithm,
    trials: usize,
    rng: &mut RngStream,
) -> Result<PathThenStars> {
    if k < 2 {
        return Err(Error::Parameter("path-then-stars needs k >= 2".into()));
    }
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    Ok(PathThenStars {
        k,
        m,
        prototype: alg.fresh(),
        trials,
        seed: rng.next_u64(),
        emitted: 0,
        estimate: None,
        triggered: false,
    })
}

impl PathThenStars {
    /// Estimated expected number of path edges colored, once known.
    pub fn path_estimate(&self) -> Option<f64> {
        self.estimate
    }

    /// Whether the star phase was played.
    pub fn triggered(&self) -> bool {
        self.triggered
    }

    /// OPT of the revealed instance.
    pub fn opt(&self) -> usize {
        if self.triggered {
            self.k * (self.m + 1)
        } else {
            self.m
        }
    }

    fn estimate_path(&self, view: &GameView<'_>) -> Result<f64> {
        if self.prototype.is_deterministic() {
            let colored = (0..self.m)
                .filter(|&i| view.coloring.is_colored(EdgeId(i)))
                .count();
            return Ok(colored as f64);
        }
        let edges: Vec<_> = (1..=self.m).map(path_edge).collect();
        let mut total = 0usize;
        for t in 0..self.trials {
            let mut alg = self.prototype.fresh();
            let mut rng = RngStream::for_trial(self.seed, t as u64);
            total += run_edges(alg.as_mut(), &edges, self.k, &mut rng)?.colored();
        }
        Ok(total as f64 / self.trials as f64)
    }
}

impl AdversaryScript for PathThenStars {
    fn next_edge(&mut self, view: &GameView<'_>) -> Result<Option<(usize, usize)>> {
        let i = self.emitted;
        if i < self.m {
            self.emitted += 1;
            return Ok(Some(path_edge(i + 1)));
        }
        if self.estimate.is_none() {
            let est = self.estimate_path(view)?;
            self.estimate = Some(est);
            // est > km/(k+1), compared without division
            self.triggered = est * (self.k as f64 + 1.0) > (self.k * self.m) as f64;
        }
        if !self.triggered {
            return Ok(None);
        }
        let j = i - self.m;
        if j >= self.k * (self.m + 1) {
            return Ok(None);
        }
        self.emitted += 1;
        let center = j / self.k;
        let leaf = self.m + 1 + j;
        Ok(Some((center, leaf)))
    }

    fn reveal_bound(&self) -> usize {
        self.m + self.k * (self.m + 1)
    }
}

/// Order on the colored edges under which Next-Fit reproduces the given
/// coloring up to renaming, as edge ids of `g`.
///
/// Every color must be used `n` or `n + 1` times. Colors used `n + 1` times
/// are renamed to come first; the edges are then revealed round robin, the
/// `r`-th edge of each renamed color in turn.
pub fn nextfit_edge_order(g: &Graph, coloring: &PartialColoring) -> Result<Vec<EdgeId>> {
    let k = coloring.k();
    let usage = coloring.color_usage();
    let lo = usage.iter().copied().min().unwrap_or(0);
    let hi = usage.iter().copied().max().unwrap_or(0);
    if hi > lo + 1 {
        return Err(Error::Refused(format!(
            "color usage ranges over {lo}..={hi}; need every color used n or n+1 times"
        )));
    }
    let mut classes: Vec<Vec<EdgeId>> = vec![Vec::new(); k];
    for e in g.edges() {
        if let Some(c) = coloring.color(e) {
            classes[c.get() - 1].push(e);
        }
    }
    let mut renamed: Vec<usize> = (0..k).collect();
    renamed.sort_by_key(|&c| (usage[c] != hi, c));
    let mut order = Vec::with_capacity(coloring.colored_count());
    for r in 0..hi {
        for &c in &renamed {
            if let Some(&e) = classes[c].get(r) {
                order.push(e);
            }
        }
    }
    Ok(order)
}

pub fn nextfit_order(g: &Graph, coloring: &PartialColoring) -> Result<RevealSequence> {
    let edges = nextfit_edge_order(g, coloring)?
        .into_iter()
        .map(|e| {
            let (u, v) = g.endpoints(e);
            (u.0, v.0)
        })
        .collect();
    Ok(RevealSequence::new("nf-order", coloring.k(), edges))
}

/// True iff some permutation of colors turns `c1` into `c2`.
pub fn equivalent(c1: &PartialColoring, c2: &PartialColoring) -> bool {
    let n = c1.assignments().len().max(c2.assignments().len());
    let mut forward = std::collections::HashMap::new();
    let mut backward = std::collections::HashMap::new();
    for i in 0..n {
        match (c1.get(EdgeId(i)), c2.get(EdgeId(i))) {
            (Assignment::Colored(a), Assignment::Colored(b)) => {
                if *forward.entry(a).or_insert(b) != b || *backward.entry(b).or_insert(a) != a {
                    return false;
                }
            }
            (x, y) if x == y => {}
            _ => return false,
        }
    }
    true
}

/// The tree of bunches that Next-Fit colors badly, in `k` cyclically
/// recolored copies.
///
/// A bunch is one large star with `k - s` edges colored `1..=k-s` and `s - 1`
/// small stars with `s` edges colored `k-s+1..=k`. The large center connects
/// to every small center and to a small center of the previous bunch; those
/// connectors see all `k` colors and are rejected once the stars are colored.
#[derive(Debug, Clone)]
pub struct BunchPlan {
    pub k: usize,
    pub s: usize,
    pub bunches: usize,
    /// Edges of one copy of the tree, marked edges first.
    pub tree_edges: Vec<(usize, usize)>,
    /// Target color of each marked edge of one copy, `None` for connectors.
    pub target: Vec<Option<Color>>,
    pub vertices_per_copy: usize,
    /// Edges joining copy `t` to copy `t + 1`.
    pub joins: Vec<(usize, usize)>,
    /// Full reveal order over all copies.
    pub order: Vec<(usize, usize)>,
}

impl BunchPlan {
    pub fn sequence(&self) -> RevealSequence {
        RevealSequence::new("nf-tree", self.k, self.order.clone())
            .with("s", self.s)
            .with("N", self.bunches)
    }

    pub fn marked_per_copy(&self) -> usize {
        self.target.iter().filter(|c| c.is_some()).count()
    }

    pub fn connectors_per_copy(&self) -> usize {
        self.tree_edges.len() - self.marked_per_copy()
    }
}

fn bunch_plan(k: usize, s: usize, bunches: usize) -> Result<BunchPlan> {
    if bunches == 0 {
        return Err(Error::Parameter("N must be at least 1".into()));
    }
    // v_i: k - s + (s - 1) + 1 = k, small centers: s + 2
    if s < 2 || s + 2 > k {
        return Err(Error::Parameter(format!("unsupported k = {k}, s = {s}")));
    }
    let mut next = 0usize;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let mut marked = Vec::new();
    let mut target = Vec::new();
    let mut connectors = Vec::new();
    let mut large_centers = Vec::new();
    let mut last_small = Vec::new();
    let mut first_large_leaves = Vec::new();
    for b in 0..bunches {
        let v = fresh();
        large_centers.push(v);
        for c in 1..=k - s {
            let leaf = fresh();
            if b == 0 {
                first_large_leaves.push(leaf);
            }
            marked.push((v, leaf));
            target.push(Some(Color::new(c)?));
        }
        let mut small = 0;
        for _ in 0..s - 1 {
            let w = fresh();
            small = w;
            for c in k - s + 1..=k {
                marked.push((w, fresh()));
                target.push(Some(Color::new(c)?));
            }
            connectors.push((v, w));
        }
        last_small.push(small);
    }
    for b in 0..bunches - 1 {
        connectors.push((large_centers[b + 1], last_small[b]));
    }
    let vertices_per_copy = next;
    let mut tree_edges = marked.clone();
    tree_edges.extend(&connectors);
    target.extend(std::iter::repeat(None).take(connectors.len()));

    let shift = |c: Color, t: usize| Color::new((c.get() - 1 + t) % k + 1).unwrap();
    let offset = |(u, v): (usize, usize), t: usize| {
        (u + t * vertices_per_copy, v + t * vertices_per_copy)
    };

    // all marked edges of all copies, recolored cyclically per copy
    let mut h = Graph::new();
    let mut assignment = Vec::new();
    for t in 0..k {
        for (i, &e) in marked.iter().enumerate() {
            let (u, v) = offset(e, t);
            h.add_edge(u.into(), v.into())?;
            assignment.push(Assignment::Colored(shift(target[i].unwrap(), t)));
        }
    }
    let coloring = PartialColoring::from_assignments(&h, k, &assignment)?;
    let mut order: Vec<(usize, usize)> = nextfit_edge_order(&h, &coloring)?
        .into_iter()
        .map(|e| {
            let (u, v) = h.endpoints(e);
            (u.0, v.0)
        })
        .collect();
    for t in 0..k {
        order.extend(connectors.iter().map(|&e| offset(e, t)));
    }
    let joins: Vec<(usize, usize)> = (0..k - 1)
        .map(|t| {
            (
                first_large_leaves[0] + t * vertices_per_copy,
                first_large_leaves[1] + (t + 1) * vertices_per_copy,
            )
        })
        .collect();
    order.extend(&joins);
    Ok(BunchPlan {
        k,
        s,
        bunches,
        tree_edges,
        target,
        vertices_per_copy,
        joins,
        order,
    })
}

/// Bunch construction for square `k = s^2`, `s >= 2`.
pub fn nf_tree_plan(k: usize, bunches: usize) -> Result<BunchPlan> {
    let s = integer_sqrt(k);
    if s < 2 || s * s != k {
        return Err(Error::Parameter(format!(
            "k = {k} is not a perfect square of at least 4"
        )));
    }
    bunch_plan(k, s, bunches)
}

pub fn nf_tree_worstcase(k: usize, bunches: usize) -> Result<RevealSequence> {
    Ok(nf_tree_plan(k, bunches)?.sequence())
}

/// Bunch construction for any `k >= 4` with `s = ceil(sqrt k)`.
pub fn nf_tree_rounded_plan(k: usize, bunches: usize) -> Result<BunchPlan> {
    if k < 4 {
        return Err(Error::Parameter(format!("rounded bunch tree needs k >= 4, got {k}")));
    }
    let mut s = integer_sqrt(k);
    if s * s < k {
        s += 1;
    }
    bunch_plan(k, s, bunches)
}

pub fn nf_tree_rounded(k: usize, bunches: usize) -> Result<RevealSequence> {
    Ok(nf_tree_rounded_plan(k, bunches)?.sequence())
}

pub(crate) fn integer_sqrt(k: usize) -> usize {
    num_integer::Roots::sqrt(&k)
}

/// Random labeled tree on `n` vertices from a uniformly random Prüfer code.
pub fn random_tree(n: usize, rng: &mut RngStream) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let code: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.below(n)).collect();
    prufer_decode(&code, n)
}

/// Tree edges for a Prüfer code over `n` vertices.
pub fn prufer_decode(code: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &x in code {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in code {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Shuffles a reveal order in place.
pub fn shuffle_edges(edges: &mut [(usize, usize)], rng: &mut RngStream) {
    edges.shuffle(rng.inner());
}

/// Plays an adaptive script and returns its trace.
pub fn play_script(
    script: &mut dyn AdversaryScript,
    alg: &mut dyn OnlineAlgorithm,
    k: usize,
    rng: &mut RngStream,
) -> Result<Trace> {
    run(alg, script, k, rng)
}
