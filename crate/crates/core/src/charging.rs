//! Value-redistribution certificates for competitive ratios.
//!
//! Every edge starts with the probability that the online algorithm colors
//! it. Edges of the optimal solution must end with at least the target ratio
//! `C`; everything above that (or everything, for edges outside the optimum)
//! is surplus and may be moved. A strategy moves surplus from colored edges
//! through vertices to the optimum's uncolored edges. If every such edge ends
//! at `C` or more, the algorithm colored at least `C * OPT` edges on this run.
//!
//! Three strategies are implemented: one for First-Fit on trees, one for any
//! fair algorithm on trees, and an analytic one for the random-parity
//! algorithm on paths with two colors.

use std::collections::VecDeque;
use std::fmt;
use std::io::Write;

use crate::adversaries::RevealSequence;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, PartialColoring, VertexId};
use crate::online::{audit_fair, replays_as, FirstFit, Trace};
use crate::opt::OptWitness;
use crate::scalar::Scalar;

/// Where value sits during redistribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Holder {
    Edge(EdgeId),
    Vertex(VertexId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transfer<T> {
    pub from: Holder,
    pub to: Holder,
    pub amount: T,
}

/// Per-edge values for one run and one target ratio, plus every transfer made.
#[derive(Debug, Clone)]
pub struct ChargeLedger<T> {
    target: T,
    initial: Vec<T>,
    in_opt: Vec<bool>,
    edge_value: Vec<T>,
    vertex_value: Vec<T>,
    transfers: Vec<Transfer<T>>,
    overdrafts: Vec<String>,
}

impl<T: Scalar> ChargeLedger<T> {
    /// Ledger from explicit initial values, e.g. coloring probabilities.
    pub fn from_values(initial: Vec<T>, in_opt: Vec<bool>, vertices: usize, target: T) -> Result<Self> {
        if target < T::zero() || target > T::one() {
            return Err(Error::Parameter(format!("target ratio {target} outside [0, 1]")));
        }
        if initial.len() != in_opt.len() {
            return Err(Error::Parameter("value and membership lengths differ".into()));
        }
        Ok(ChargeLedger {
            target,
            edge_value: initial.clone(),
            initial,
            in_opt,
            vertex_value: vec![T::zero(); vertices],
            transfers: Vec::new(),
            overdrafts: Vec::new(),
        })
    }

    pub fn target(&self) -> &T {
        &self.target
    }

    pub fn initial(&self, e: EdgeId) -> &T {
        &self.initial[e.0]
    }

    pub fn in_opt(&self, e: EdgeId) -> bool {
        self.in_opt[e.0]
    }

    /// `v_i(e) - C` for optimum edges, `v_i(e)` otherwise.
    pub fn surplus(&self, e: EdgeId) -> T {
        if self.in_opt[e.0] {
            self.initial[e.0].clone() - self.target.clone()
        } else {
            self.initial[e.0].clone()
        }
    }

    /// Edges with strictly positive surplus.
    pub fn positive(&self) -> Vec<EdgeId> {
        (0..self.initial.len())
            .map(EdgeId)
            .filter(|&e| self.surplus(e) > T::zero())
            .collect()
    }

    /// Edges with strictly negative surplus; always optimum edges.
    pub fn negative(&self) -> Vec<EdgeId> {
        (0..self.initial.len())
            .map(EdgeId)
            .filter(|&e| self.surplus(e) < T::zero())
            .collect()
    }

    /// Current value of an edge; its final value once the strategy is done.
    pub fn value(&self, e: EdgeId) -> &T {
        &self.edge_value[e.0]
    }

    pub fn vertex_value(&self, v: VertexId) -> &T {
        &self.vertex_value[v.0]
    }

    /// Value an edge can still give away without dropping below its floor.
    pub fn spendable(&self, e: EdgeId) -> T {
        let floor = if self.in_opt[e.0] {
            self.target.clone()
        } else {
            T::zero()
        };
        self.edge_value[e.0].clone() - floor
    }

    fn balance(&mut self, h: Holder) -> &mut T {
        match h {
            Holder::Edge(e) => &mut self.edge_value[e.0],
            Holder::Vertex(v) => &mut self.vertex_value[v.0],
        }
    }

    /// Moves `amount` from one holder to another. Edges may only give
    /// surplus and vertices only what they hold; a violation is recorded and
    /// reported, not silently allowed.
    pub fn transfer(&mut self, from: Holder, to: Holder, amount: T) {
        if amount.is_zero() {
            return;
        }
        let available = match from {
            Holder::Edge(e) => self.spendable(e),
            Holder::Vertex(v) => self.vertex_value[v.0].clone(),
        };
        if amount < T::zero() || !T::at_least(&available, &amount) {
            self.overdrafts.push(format!(
                "{from:?} gave {amount} with only {available} available"
            ));
        }
        *self.balance(from) = self.balance(from).clone() - amount.clone();
        *self.balance(to) = self.balance(to).clone() + amount.clone();
        self.transfers.push(Transfer { from, to, amount });
    }

    pub fn transfers(&self) -> &[Transfer<T>] {
        &self.transfers
    }

    pub fn overdrafts(&self) -> &[String] {
        &self.overdrafts
    }

    pub fn total_initial(&self) -> T {
        self.initial.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    pub fn total_final(&self) -> T {
        self.edge_value.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// Value left at vertices with no uncolored optimum child edge to take it.
    pub fn residue(&self) -> T {
        self.vertex_value.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// `Σ v_f + residue = Σ v_i`.
    pub fn conserved(&self) -> bool {
        let diff = self.total_final() + self.residue() - self.total_initial();
        diff.abs() <= T::tolerance() * T::from_usize(self.initial.len().max(1))
    }
}

/// Deterministic ledger: `v_i = 1` for colored edges, 0 otherwise.
pub fn build_ledger<T: Scalar>(trace: &Trace, witness: &OptWitness, target: T) -> Result<ChargeLedger<T>> {
    let g = &trace.graph;
    if witness.colors.len() != g.num_edges() {
        return Err(Error::Parameter("witness and trace cover different graphs".into()));
    }
    let initial = g
        .edges()
        .map(|e| {
            if trace.coloring.is_colored(e) {
                T::one()
            } else {
                T::zero()
            }
        })
        .collect();
    let in_opt = g.edges().map(|e| witness.contains(e)).collect();
    ChargeLedger::from_values(initial, in_opt, g.num_vertices(), target)
}

/// Membership of an edge with respect to the algorithm and the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    /// colored by both
    Double,
    /// colored by the algorithm only
    Single,
    /// colored by the optimum only
    OptOnly,
    Neither,
}

impl EdgeClass {
    pub fn colored(self) -> bool {
        matches!(self, EdgeClass::Double | EdgeClass::Single)
    }

    fn label(self) -> &'static str {
        match self {
            EdgeClass::Double => "double",
            EdgeClass::Single => "single",
            EdgeClass::OptOnly => "opt-only",
            EdgeClass::Neither => "neither",
        }
    }
}

/// Counts of incident edges per class at one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tallies {
    pub colored: usize,
    pub double: usize,
    pub single: usize,
    pub opt_only: usize,
}

pub fn classify_edges(g: &Graph, coloring: &PartialColoring, witness: &OptWitness) -> Vec<EdgeClass> {
    g.edges()
        .map(|e| match (coloring.is_colored(e), witness.contains(e)) {
            (true, true) => EdgeClass::Double,
            (true, false) => EdgeClass::Single,
            (false, true) => EdgeClass::OptOnly,
            (false, false) => EdgeClass::Neither,
        })
        .collect()
}

pub fn vertex_tallies(g: &Graph, classes: &[EdgeClass]) -> Vec<Tallies> {
    g.vertices()
        .map(|v| {
            let mut t = Tallies::default();
            for &e in g.incident(v) {
                match classes[e.0] {
                    EdgeClass::Double => t.double += 1,
                    EdgeClass::Single => t.single += 1,
                    EdgeClass::OptOnly => t.opt_only += 1,
                    EdgeClass::Neither => {}
                }
            }
            t.colored = t.double + t.single;
            t
        })
        .collect()
}

/// A tree hung from a root, with the largest free color at each vertex.
#[derive(Debug, Clone)]
pub struct RootedView {
    pub root: VertexId,
    pub parent_edge: Vec<Option<EdgeId>>,
    pub child_edges: Vec<Vec<EdgeId>>,
    /// Largest color not present at the vertex, 0 when all are present.
    pub top_free: Vec<usize>,
}

impl RootedView {
    pub fn new(g: &Graph, coloring: &PartialColoring, root: VertexId) -> Result<Self> {
        if !g.is_tree() {
            return Err(Error::NotTree);
        }
        if g.degree(root) == 0 {
            return Err(Error::Parameter(format!("root {root} is not on the tree")));
        }
        let n = g.num_vertices();
        let mut parent_edge = vec![None; n];
        let mut child_edges = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        seen[root.0] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &e in g.incident(v) {
                let w = g.other_endpoint(e, v);
                if !seen[w.0] {
                    seen[w.0] = true;
                    parent_edge[w.0] = Some(e);
                    child_edges[v.0].push(e);
                    queue.push_back(w);
                }
            }
        }
        let k = coloring.k();
        let top_free = g
            .vertices()
            .map(|v| coloring.colors_at(v).complement(k).max().map_or(0, |c| c.get()))
            .collect();
        Ok(RootedView {
            root,
            parent_edge,
            child_edges,
            top_free,
        })
    }

    /// `(parent, child)` endpoints of `e`.
    pub fn orient(&self, g: &Graph, e: EdgeId) -> (VertexId, VertexId) {
        let (a, b) = g.endpoints(e);
        if self.parent_edge[b.0] == Some(e) {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn parent_vertex(&self, g: &Graph, v: VertexId) -> Option<VertexId> {
        self.parent_edge[v.0].map(|e| g.other_endpoint(e, v))
    }
}

/// One line of a verdict: an edge, its values and, for uncolored optimum
/// edges, which case of the argument applies.
#[derive(Debug, Clone, PartialEq)]
pub struct VerdictRow<T> {
    pub edge: EdgeId,
    pub class: String,
    pub initial: T,
    pub final_value: T,
    /// `v_f - C` for optimum edges.
    pub margin: Option<T>,
    pub case: Option<u8>,
}

#[derive(Debug, Clone)]
pub struct VerdictReport<T> {
    pub strategy: &'static str,
    pub target: T,
    pub rows: Vec<VerdictRow<T>>,
    /// Failed intermediate claims (facts, case bounds, overdrafts).
    pub violations: Vec<String>,
    pub conserved: bool,
}

impl<T: Scalar> VerdictReport<T> {
    fn from_ledger(
        strategy: &'static str,
        ledger: &ChargeLedger<T>,
        classes: Vec<String>,
        cases: Vec<Option<u8>>,
        mut violations: Vec<String>,
    ) -> Self {
        violations.extend(ledger.overdrafts().iter().cloned());
        let rows = (0..classes.len())
            .map(|i| {
                let e = EdgeId(i);
                let v_f = ledger.value(e).clone();
                VerdictRow {
                    edge: e,
                    class: classes[i].clone(),
                    initial: ledger.initial(e).clone(),
                    margin: ledger
                        .in_opt(e)
                        .then(|| v_f.clone() - ledger.target().clone()),
                    final_value: v_f,
                    case: cases[i],
                }
            })
            .collect();
        VerdictReport {
            strategy,
            target: ledger.target().clone(),
            rows,
            violations,
            conserved: ledger.conserved(),
        }
    }

    /// Smallest `v_f - C` over optimum edges.
    pub fn min_margin(&self) -> Option<T> {
        self.rows
            .iter()
            .filter_map(|r| r.margin.clone())
            .reduce(T::min_of)
    }

    /// Smallest margin over optimum edges the algorithm did not color.
    pub fn min_deficit_margin(&self) -> Option<T> {
        self.rows
            .iter()
            .filter(|r| r.initial < self.target)
            .filter_map(|r| r.margin.clone())
            .reduce(T::min_of)
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
            && self.conserved
            && self
                .min_margin()
                .map_or(true, |m| T::at_least(&m, &T::zero()))
    }

    /// CSV with header `edge,class,v_i,v_f,margin,case`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "edge,class,v_i,v_f,margin,case")?;
        for r in &self.rows {
            let margin = r.margin.as_ref().map(|m| m.to_string()).unwrap_or_default();
            let case = r.case.map(|c| c.to_string()).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.edge, r.class, r.initial, r.final_value, margin, case
            )?;
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Display for VerdictReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let min = self
            .min_margin()
            .map(|m| m.to_string())
            .unwrap_or_else(|| "-".into());
        write!(
            f,
            "{}: C = {}, min margin {}, {} violations, {}",
            self.strategy,
            self.target,
            min,
            self.violations.len(),
            if self.passed() { "pass" } else { "FAIL" }
        )
    }
}

fn check_tree_inputs(trace: &Trace, witness: &OptWitness) -> Result<()> {
    if !trace.graph.is_tree() {
        return Err(Error::NotTree);
    }
    if witness.colors.len() != trace.graph.num_edges() {
        return Err(Error::Parameter("witness and trace cover different graphs".into()));
    }
    if !witness.audit(&trace.graph) {
        return Err(Error::Parameter("witness is not a valid optimum coloring".into()));
    }
    Ok(())
}

/// `(k - 1) / k`.
pub fn ff_tree_target<T: Scalar>(k: usize) -> T {
    T::from_ratio(k as i64 - 1, k as i64)
}

/// `(2√k - 2) / (2√k - 1)`, when `√k` is representable in `T`.
pub fn fair_tree_target<T: Scalar>(k: usize) -> Option<T> {
    let root = T::from_usize(k).sqrt_exact()?;
    let two = T::from_usize(2);
    Some((two.clone() * root.clone() - two) / (T::from_usize(2) * root - T::one()))
}

/// `min{p² - p + 1, (2/3)(-p² + p + 1)}`.
pub fn rp_target<T: Scalar>(p: &T) -> T {
    let p2 = p.clone() * p.clone();
    let same = p2.clone() - p.clone() + T::one();
    let mixed = T::from_ratio(2, 3) * (T::one() + p.clone() - p2);
    T::min_of(same, mixed)
}

/// Left side of the quadratic inequality behind the first case of the
/// fair-tree argument, with `z` standing for the colored degree of `x`.
pub fn fair_case1_polynomial<T: Scalar>(k: &T, c: &T, z: &T) -> T {
    let one = T::one();
    let two_k = T::from_usize(2) * k.clone();
    let linear = (two_k.clone() - one.clone()) * c.clone() - (two_k - T::from_usize(2));
    (one.clone() - c.clone()) * z.clone() * z.clone()
        + linear * z.clone()
        + (one - c.clone()) * (k.clone() * k.clone() - k.clone())
}

/// First-Fit on a tree with `C = (k - 1)/k`.
///
/// Step 1: each colored edge `(v, u)` whose parent edge `(w, v)` is colored
/// by both and carries a larger color sends `1/k` to `w`; the rest of its
/// surplus goes to `v`. Step 2: a vertex whose parent edge is colored by the
/// optimum only sends `min{m(v), C}` up that edge, and splits what is left
/// equally among its child edges colored by the optimum only.
///
/// The intermediate claims about `m(v)` are checked as the strategy runs.
pub fn ff_tree_charge<T: Scalar>(trace: &Trace, witness: &OptWitness, root: VertexId) -> Result<VerdictReport<T>> {
    check_tree_inputs(trace, witness)?;
    if !replays_as(trace, &mut FirstFit) {
        return Err(Error::Refused("trace was not produced by First-Fit".into()));
    }
    let g = &trace.graph;
    let col = &trace.coloring;
    let k = trace.k;
    let kt = T::from_usize(k);
    let target = ff_tree_target::<T>(k);
    let unit = T::one() / kt.clone();
    let mut ledger = build_ledger(trace, witness, target.clone())?;
    let classes = classify_edges(g, col, witness);
    let tallies = vertex_tallies(g, &classes);
    let view = RootedView::new(g, col, root)?;
    let mut violations = Vec::new();

    // Step 1; `to_grandparent[e]` is what e sent two levels up
    let mut to_grandparent = vec![T::zero(); g.num_edges()];
    for e in g.edges() {
        let Some(c) = col.color(e) else { continue };
        let (v, _) = view.orient(g, e);
        if let Some(pe) = view.parent_edge[v.0] {
            let higher = col.color(pe).is_some_and(|pc| pc > c);
            if classes[pe.0] == EdgeClass::Double && higher {
                let w = g.other_endpoint(pe, v);
                ledger.transfer(Holder::Edge(e), Holder::Vertex(w), unit.clone());
                to_grandparent[e.0] = unit.clone();
            }
        }
        let rest = ledger.spendable(e);
        ledger.transfer(Holder::Edge(e), Holder::Vertex(v), rest);
    }
    let m: Vec<T> = g.vertices().map(|v| ledger.vertex_value(v).clone()).collect();

    for e in g.edges() {
        let Some(c) = col.color(e) else { continue };
        let (v, u) = view.orient(g, e);
        let parent = view.parent_edge[v.0];
        let parent_double = parent.is_some_and(|pe| classes[pe.0] == EdgeClass::Double);
        // m(v) >= c/k unless the parent edge is colored by both; a lower
        // colored parent edge sends its value up, so one 1/k is missing then
        if !parent_double {
            let lower_parent = parent.and_then(|pe| col.color(pe)).is_some_and(|pc| pc < c);
            let need = T::from_usize(c.get() - usize::from(lower_parent)) / kt.clone();
            if !T::at_least(&m[v.0], &need) {
                violations.push(format!("edge {e}: m({v}) = {} < {need}", m[v.0]));
            }
        }
        // a high-colored double edge collects (k - d_c(v))/k from its children
        if classes[e.0] == EdgeClass::Double && c.get() > view.top_free[v.0] {
            let got = view.child_edges[u.0]
                .iter()
                .fold(T::zero(), |acc, f| acc + to_grandparent[f.0].clone());
            let need = T::from_usize(k - tallies[v.0].colored) / kt.clone();
            if !T::at_least(&got, &need) {
                violations.push(format!(
                    "edge {e}: high-colored at {v} but children gave {got} < {need}"
                ));
            }
        }
    }

    let received_from = step_two(g, &view, &classes, &mut ledger, &target);

    let mut cases = vec![None; g.num_edges()];
    for e in g.edges() {
        if classes[e.0] != EdgeClass::OptOnly {
            continue;
        }
        let (x, _) = view.orient(g, e);
        cases[e.0] = Some(match view.parent_edge[x.0].map(|pe| classes[pe.0]) {
            Some(EdgeClass::Double) => 1,
            Some(EdgeClass::OptOnly) => 3,
            _ => 2,
        });
        let top = view.top_free[x.0];
        let from_y = received_from[e.0].1.clone();
        let need_y = T::min_of(target.clone(), T::from_usize(top) / kt.clone());
        if !T::at_least(&from_y, &need_y) {
            violations.push(format!("edge {e}: child end gave {from_y} < {need_y}"));
        }
        if top + 1 < k {
            let from_x = received_from[e.0].0.clone();
            let need_x = T::from_usize(k - top - 1) / kt.clone();
            if !T::at_least(&from_x, &need_x) {
                violations.push(format!("edge {e}: parent end gave {from_x} < {need_x}"));
            }
        }
    }
    let labels = classes.iter().map(|c| c.label().to_owned()).collect();
    Ok(VerdictReport::from_ledger("ff-tree", &ledger, labels, cases, violations))
}

/// Step 2 shared by both tree strategies. Returns, per edge, the value it
/// received from its parent end and from its child end.
fn step_two<T: Scalar>(
    g: &Graph,
    view: &RootedView,
    classes: &[EdgeClass],
    ledger: &mut ChargeLedger<T>,
    cap: &T,
) -> Vec<(T, T)> {
    let mut received = vec![(T::zero(), T::zero()); g.num_edges()];
    for v in g.vertices() {
        if g.degree(v) == 0 {
            continue;
        }
        if let Some(pe) = view.parent_edge[v.0] {
            if classes[pe.0] == EdgeClass::OptOnly {
                let amount = T::min_of(ledger.vertex_value(v).clone(), cap.clone());
                ledger.transfer(Holder::Vertex(v), Holder::Edge(pe), amount.clone());
                received[pe.0].1 = amount;
            }
        }
        let takers: Vec<EdgeId> = view.child_edges[v.0]
            .iter()
            .copied()
            .filter(|f| classes[f.0] == EdgeClass::OptOnly)
            .collect();
        if takers.is_empty() {
            continue;
        }
        let share = ledger.vertex_value(v).clone() / T::from_usize(takers.len());
        for f in takers {
            ledger.transfer(Holder::Vertex(v), Holder::Edge(f), share.clone());
            received[f.0].0 = share.clone();
        }
    }
    received
}

/// Any fair algorithm on a tree with `C = (2√k - 2)/(2√k - 1)`.
pub fn fair_tree_charge<T: Scalar>(trace: &Trace, witness: &OptWitness, root: VertexId) -> Result<VerdictReport<T>> {
    let target = fair_tree_target::<T>(trace.k).ok_or_else(|| {
        Error::Parameter(format!(
            "target ratio for k = {} is irrational; use a floating-point scalar",
            trace.k
        ))
    })?;
    fair_tree_charge_at(trace, witness, root, target)
}

/// Fair-tree strategy at an explicit target ratio.
///
/// Step 1: every colored edge sends its whole surplus to its parent vertex.
/// Step 2 is the same as for First-Fit with cap `C`. Each uncolored optimum
/// edge `(x, y)` is tagged with the class of `x`'s parent edge (1: optimum
/// only, 2: algorithm only, 3: both, 4: no parent) and the value it gets from
/// `x` is checked against the closed-form lower bound for that case.
pub fn fair_tree_charge_at<T: Scalar>(
    trace: &Trace,
    witness: &OptWitness,
    root: VertexId,
    target: T,
) -> Result<VerdictReport<T>> {
    check_tree_inputs(trace, witness)?;
    if !audit_fair(trace) {
        return Err(Error::Refused("trace is not fair".into()));
    }
    let g = &trace.graph;
    let col = &trace.coloring;
    let k = trace.k;
    let kt = T::from_usize(k);
    let c = target.clone();
    let mut ledger = build_ledger(trace, witness, target.clone())?;
    let classes = classify_edges(g, col, witness);
    let tallies = vertex_tallies(g, &classes);
    let view = RootedView::new(g, col, root)?;
    let mut violations = Vec::new();

    for v in g.vertices() {
        let t = tallies[v.0];
        if t.double + t.opt_only > k {
            violations.push(format!("vertex {v}: optimum degree {} > k", t.double + t.opt_only));
        }
    }
    for e in g.edges() {
        if col.is_colored(e) {
            let (v, _) = view.orient(g, e);
            let rest = ledger.spendable(e);
            ledger.transfer(Holder::Edge(e), Holder::Vertex(v), rest);
        } else {
            let (a, b) = g.endpoints(e);
            if tallies[a.0].colored + tallies[b.0].colored < k {
                violations.push(format!("rejected edge {e} sees fewer than k colored edges"));
            }
        }
    }
    let received = step_two(g, &view, &classes, &mut ledger, &target);

    let mut cases = vec![None; g.num_edges()];
    for e in g.edges() {
        if classes[e.0] != EdgeClass::OptOnly {
            continue;
        }
        let (x, y) = view.orient(g, e);
        let ty = tallies[y.0];
        let expect_y = T::min_of(
            c.clone(),
            T::from_usize(ty.colored) - c.clone() * T::from_usize(ty.double),
        );
        if received[e.0].1 != expect_y && (received[e.0].1.clone() - expect_y.clone()).abs() > T::tolerance() {
            violations.push(format!(
                "edge {e}: child end gave {} instead of {expect_y}",
                received[e.0].1
            ));
        }
        let tx = tallies[x.0];
        let dc = T::from_usize(tx.colored);
        let dd = T::from_usize(tx.double);
        let one = T::one();
        let case = match view.parent_edge[x.0].map(|pe| classes[pe.0]) {
            Some(EdgeClass::OptOnly) => 1,
            Some(EdgeClass::Single) => 2,
            Some(EdgeClass::Double) => 3,
            // x keeps everything, as when it has no parent edge
            Some(EdgeClass::Neither) | None => 4,
        };
        cases[e.0] = Some(case);
        let (numer, denom) = match case {
            1 => (
                dc.clone() - c.clone() * dd.clone() - c.clone(),
                kt.clone() - dd.clone() - one.clone(),
            ),
            2 => (
                dc.clone() - c.clone() * dd.clone() - one.clone(),
                kt.clone() - dd.clone(),
            ),
            _ => (
                dc.clone() - c.clone() * dd.clone() + c.clone() - one.clone(),
                kt.clone() - dd.clone(),
            ),
        };
        if denom > T::zero() {
            let bound = numer / denom;
            if !T::at_least(&received[e.0].0, &bound) {
                violations.push(format!(
                    "edge {e} (case {case}): parent end gave {} < {bound}",
                    received[e.0].0
                ));
            }
        }
        // the quadratic each case reduces to, at the actual colored degree
        let z = dc.clone();
        let lhs = match case {
            1 => fair_case1_polynomial(&kt, &c, &z),
            2 => {
                z.clone() - one.clone()
                    + (one.clone() - c.clone())
                        * (kt.clone() - z.clone())
                        * (kt.clone() - z.clone() + one.clone())
            }
            _ => {
                z.clone() + c.clone() - one.clone()
                    + (one.clone() - c.clone()) * (kt.clone() - z.clone()) * (kt.clone() - z.clone())
            }
        };
        if !T::at_least(&lhs, &(c.clone() * kt.clone())) {
            violations.push(format!("edge {e} (case {case}): quadratic {lhs} < Ck"));
        }
    }
    let labels = classes.iter().map(|c| c.label().to_owned()).collect();
    Ok(VerdictReport::from_ledger("fair-tree", &ledger, labels, cases, violations))
}

/// Structure of a reveal order over a path, as seen by the random-parity
/// algorithm with two colors.
#[derive(Debug, Clone)]
pub struct PathAnalysis {
    pub graph: Graph,
    /// Position of each edge (by reveal id) along the path.
    pub position: Vec<usize>,
    /// Edge id at each path position.
    pub at: Vec<EdgeId>,
    /// Revealed after both of its neighbours.
    pub critical: Vec<bool>,
    /// Distance (in edges, inclusive) to the first-revealed edge of its
    /// non-critical component; 0 for critical edges.
    pub depth: Vec<usize>,
}

impl PathAnalysis {
    pub fn new(order: &RevealSequence) -> Result<Self> {
        let graph = order.graph()?;
        let at = graph.path_order()?;
        let m = at.len();
        let mut position = vec![0; m];
        for (i, e) in at.iter().enumerate() {
            position[e.0] = i;
        }
        let critical: Vec<bool> = (0..m)
            .map(|e| graph.adjacent_edges(EdgeId(e)).filter(|f| f.0 < e).count() == 2)
            .collect();
        let mut depth = vec![0; m];
        let mut i = 0;
        while i < m {
            if critical[at[i].0] {
                i += 1;
                continue;
            }
            let mut j = i;
            while j < m && !critical[at[j].0] {
                j += 1;
            }
            let first = (i..j).min_by_key(|&p| at[p].0).unwrap();
            for p in i..j {
                depth[at[p].0] = p.abs_diff(first) + 1;
            }
            i = j;
        }
        Ok(PathAnalysis {
            graph,
            position,
            at,
            critical,
            depth,
        })
    }

    fn neighbours(&self, e: EdgeId) -> (EdgeId, EdgeId) {
        let p = self.position[e.0];
        (self.at[p - 1], self.at[p + 1])
    }

    /// Probability that `e` gets colored.
    pub fn colored_probability<T: Scalar>(&self, e: EdgeId, p: &T) -> T {
        if !self.critical[e.0] {
            return T::one();
        }
        let (l, r) = self.neighbours(e);
        let q = T::one() - p.clone();
        if self.depth[l.0] % 2 == self.depth[r.0] % 2 {
            p.clone() * p.clone() + q.clone() * q
        } else {
            T::from_usize(2) * p.clone() * q
        }
    }
}

/// `l(e)`: inclusive distance from a non-critical edge to the first
/// revealed edge of its non-critical component. `e` is a reveal index.
pub fn compute_l(order: &RevealSequence, e: EdgeId) -> Result<usize> {
    let a = PathAnalysis::new(order)?;
    if e.0 >= a.critical.len() {
        return Err(Error::UnknownEdge(e.0));
    }
    if a.critical[e.0] {
        return Err(Error::Refused(format!("edge {e} is critical")));
    }
    Ok(a.depth[e.0])
}

/// Random-parity algorithm on a path at `C = C(p)`.
pub fn rp_path_charge<T: Scalar>(order: &RevealSequence, p: T) -> Result<VerdictReport<T>> {
    let c = rp_target(&p);
    rp_path_charge_at(order, p, c)
}

/// Random-parity strategy at an explicit target ratio.
///
/// Initial values are exact: 1 for non-critical edges and the probability
/// that the two neighbours agree for critical ones. A critical edge whose
/// neighbours have equal depth parity takes half a surplus from each; one
/// whose neighbours differ takes the whole surplus of the even neighbour and
/// half a surplus from each of the odd neighbour and the even neighbour's
/// other neighbour.
pub fn rp_path_charge_at<T: Scalar>(order: &RevealSequence, p: T, target: T) -> Result<VerdictReport<T>> {
    if order.k != 2 {
        return Err(Error::Parameter("random parity runs with k = 2".into()));
    }
    if p < T::from_ratio(1, 2) || p > T::one() {
        return Err(Error::Parameter(format!("p = {p} outside [1/2, 1]")));
    }
    let a = PathAnalysis::new(order)?;
    let m = a.at.len();
    let initial: Vec<T> = (0..m).map(|e| a.colored_probability(EdgeId(e), &p)).collect();
    let mut ledger = ChargeLedger::from_values(initial, vec![true; m], a.graph.num_vertices(), target.clone())?;
    let surplus = T::one() - target;
    let half = surplus.clone() / T::from_usize(2);
    let mut cases = vec![None; m];
    let mut violations = Vec::new();

    for pos in 0..m {
        let e = a.at[pos];
        if !a.critical[e.0] {
            continue;
        }
        let (l, r) = a.neighbours(e);
        if a.critical[l.0] || a.critical[r.0] {
            violations.push(format!("critical edge {e} has a critical neighbour"));
            continue;
        }
        let into = Holder::Edge(e);
        if a.depth[l.0] % 2 == a.depth[r.0] % 2 {
            cases[e.0] = Some(2);
            ledger.transfer(Holder::Edge(l), into, half.clone());
            ledger.transfer(Holder::Edge(r), into, half.clone());
        } else {
            cases[e.0] = Some(1);
            let (odd, even) = if a.depth[l.0] % 2 == 1 { (l, r) } else { (r, l) };
            // the even side has depth >= 2, so a non-critical edge lies beyond it
            let beyond_pos = if a.position[even.0] > pos {
                a.position[even.0] + 1
            } else {
                a.position[even.0] - 1
            };
            let beyond = a.at[beyond_pos];
            if a.critical[beyond.0] {
                violations.push(format!("edge {e}: even neighbour {even} is bounded by a critical edge"));
                continue;
            }
            ledger.transfer(Holder::Edge(odd), into, half.clone());
            ledger.transfer(Holder::Edge(beyond), into, half.clone());
            ledger.transfer(Holder::Edge(even), into, surplus.clone());
        }
    }
    let labels = (0..m)
        .map(|e| if a.critical[e] { "critical" } else { "non-critical" }.to_owned())
        .collect();
    Ok(VerdictReport::from_ledger("rp-path", &ledger, labels, cases, violations))
}
