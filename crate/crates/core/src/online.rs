//! The online game: edges arrive one at a time and the algorithm irrevocably
//! colors or rejects each one.

use std::fmt;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Assignment, Color, EdgeId, Graph, PartialColoring, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Colored(Color),
    Rejected,
}

impl From<Decision> for Assignment {
    fn from(d: Decision) -> Self {
        match d {
            Decision::Colored(c) => Assignment::Colored(c),
            Decision::Rejected => Assignment::Rejected,
        }
    }
}

/// Seeded source of uniform reals in `[0, 1)`.
///
/// Trial `i` of an experiment seeded with `s` uses ChaCha stream `i` of key
/// `s`, so results do not depend on how trials are spread over threads.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::for_trial(seed, 0)
    }

    pub fn for_trial(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        RngStream { seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_unit(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.gen()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn inner(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// An online edge-coloring strategy.
///
/// User-supplied strategies implement this trait and can then be run against
/// any fixed sequence or adaptive adversary.
pub trait OnlineAlgorithm: Send {
    fn name(&self) -> String;

    /// Decides the fate of `e`, the edge just added to `g`. `coloring`
    /// holds every earlier decision.
    fn decide(
        &mut self,
        g: &Graph,
        coloring: &PartialColoring,
        e: EdgeId,
        rng: &mut RngStream,
    ) -> Decision;

    fn is_deterministic(&self) -> bool;

    /// Whether the strategy promises to reject only fully blocked edges.
    fn is_fair(&self) -> bool;

    /// Checks the strategy can play with `k` colors.
    fn validate(&self, _k: usize) -> Result<()> {
        Ok(())
    }

    /// A new instance in its initial state.
    fn fresh(&self) -> Box<dyn OnlineAlgorithm>;
}

/// Lowest color free at both endpoints, or reject.
pub fn first_fit_decide(state: &PartialColoring, g: &Graph, e: EdgeId) -> Decision {
    match state.available(g, e).min() {
        Some(c) => Decision::Colored(c),
        None => Decision::Rejected,
    }
}

/// Cyclic scan starting after `last`. Returns the decision and the new
/// last-used color, which only moves when an edge is colored.
pub fn next_fit_decide(
    state: &PartialColoring,
    last: Option<Color>,
    g: &Graph,
    e: EdgeId,
) -> (Decision, Option<Color>) {
    let k = state.k();
    let free = state.available(g, e);
    let start = last.map_or(0, Color::get);
    for step in 1..=k {
        let value = (start + step - 1) % k + 1;
        let c = Color::new(value).expect("palette color");
        if free.contains(c) {
            return (Decision::Colored(c), Some(c));
        }
    }
    (Decision::Rejected, last)
}

/// Random-parity rule for two colors.
///
/// With no colored neighbour the edge gets color 1 with probability `p` and
/// color 2 otherwise; this also covers non-isolated edges whose neighbours
/// were all rejected. With one color blocked the other is used, with both
/// blocked the edge is rejected. Exactly one draw is consumed per edge that
/// has no colored neighbour.
pub fn rp_decide(
    state: &PartialColoring,
    g: &Graph,
    e: EdgeId,
    p: f64,
    rng: &mut RngStream,
) -> Result<Decision> {
    check_rp(p, state.k())?;
    let free = state.available(g, e);
    Ok(match free.len() {
        0 => Decision::Rejected,
        1 => Decision::Colored(free.min().unwrap()),
        _ => {
            let one = Color::new(1).unwrap();
            let two = Color::new(2).unwrap();
            if rng.next_unit() < p {
                Decision::Colored(one)
            } else {
                Decision::Colored(two)
            }
        }
    })
}

fn check_rp(p: f64, k: usize) -> Result<()> {
    if !(0.5..=1.0).contains(&p) {
        return Err(Error::Parameter(format!("p = {p} outside [1/2, 1]")));
    }
    if k != 2 {
        return Err(Error::Parameter(format!(
            "random parity needs k = 2, got k = {k}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Default)]
pub struct FirstFit;

impl OnlineAlgorithm for FirstFit {
    fn name(&self) -> String {
        "ff".into()
    }

    fn decide(&mut self, g: &Graph, c: &PartialColoring, e: EdgeId, _: &mut RngStream) -> Decision {
        first_fit_decide(c, g, e)
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    fn is_fair(&self) -> bool {
        true
    }

    fn fresh(&self) -> Box<dyn OnlineAlgorithm> {
        Box::new(FirstFit)
    }
}

#[derive(Debug, Clone, Default)]
pub struct NextFit {
    last: Option<Color>,
}

impl NextFit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn last_color(&self) -> Option<Color> {
        self.last
    }
}

impl OnlineAlgorithm for NextFit {
    fn name(&self) -> String {
        "nf".into()
    }

    fn decide(&mut self, g: &Graph, c: &PartialColoring, e: EdgeId, _: &mut RngStream) -> Decision {
        let (d, last) = next_fit_decide(c, self.last, g, e);
        self.last = last;
        d
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    fn is_fair(&self) -> bool {
        true
    }

    fn fresh(&self) -> Box<dyn OnlineAlgorithm> {
        Box::new(NextFit::new())
    }
}

#[derive(Debug, Clone)]
pub struct RandomParity {
    p: f64,
}

impl RandomParity {
    pub fn new(p: f64) -> Result<Self> {
        check_rp(p, 2)?;
        Ok(RandomParity { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

impl OnlineAlgorithm for RandomParity {
    fn name(&self) -> String {
        format!("rp({})", self.p)
    }

    fn decide(&mut self, g: &Graph, c: &PartialColoring, e: EdgeId, rng: &mut RngStream) -> Decision {
        rp_decide(c, g, e, self.p, rng).expect("validated before the run")
    }

    fn is_deterministic(&self) -> bool {
        self.p == 1.0
    }

    fn is_fair(&self) -> bool {
        true
    }

    fn validate(&self, k: usize) -> Result<()> {
        check_rp(self.p, k)
    }

    fn fresh(&self) -> Box<dyn OnlineAlgorithm> {
        Box::new(self.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmId {
    FirstFit,
    NextFit,
    RandomParity(f64),
    External(String),
}

impl AlgorithmId {
    pub fn build(&self) -> Result<Box<dyn OnlineAlgorithm>> {
        Ok(match self {
            AlgorithmId::FirstFit => Box::new(FirstFit),
            AlgorithmId::NextFit => Box::new(NextFit::new()),
            AlgorithmId::RandomParity(p) => Box::new(RandomParity::new(*p)?),
            AlgorithmId::External(name) => {
                return Err(Error::Parameter(format!(
                    "external algorithm '{name}' must be supplied as an OnlineAlgorithm"
                )))
            }
        })
    }

    pub fn is_deterministic(&self) -> bool {
        match self {
            AlgorithmId::RandomParity(p) => *p == 1.0,
            AlgorithmId::External(_) => false,
            _ => true,
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmId::FirstFit => write!(f, "ff"),
            AlgorithmId::NextFit => write!(f, "nf"),
            AlgorithmId::RandomParity(p) => write!(f, "rp({p})"),
            AlgorithmId::External(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub edge: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub decision: Decision,
}

/// What an adaptive adversary may look at before choosing the next edge.
#[derive(Debug, Clone, Copy)]
pub struct GameView<'a> {
    pub k: usize,
    pub graph: &'a Graph,
    pub coloring: &'a PartialColoring,
    pub steps: &'a [TraceStep],
}

/// Supplies the reveal sequence, possibly reacting to earlier decisions.
pub trait AdversaryScript {
    /// Next edge to reveal, or `None` to end the game.
    fn next_edge(&mut self, view: &GameView<'_>) -> Result<Option<(usize, usize)>>;

    /// Upper bound on the number of reveals.
    fn reveal_bound(&self) -> usize;
}

/// A finished game.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub k: usize,
    pub seed: u64,
    pub algorithm: String,
    pub steps: Vec<TraceStep>,
    pub graph: Graph,
    pub coloring: PartialColoring,
}

impl Trace {
    pub fn colored(&self) -> usize {
        self.coloring.colored_count()
    }

    pub fn rejected(&self) -> usize {
        self.coloring.rejected_count()
    }

    pub fn decisions(&self) -> Vec<Decision> {
        self.steps.iter().map(|s| s.decision).collect()
    }

    /// Rebuilds graph and coloring from the recorded decisions.
    pub fn replay(&self) -> Result<PartialColoring> {
        let mut g = Graph::new();
        let mut col = PartialColoring::new(self.k);
        for s in &self.steps {
            let e = g.add_edge(s.u, s.v)?;
            col.assign(&g, e, s.decision.into())?;
        }
        Ok(col)
    }

    /// CSV with header `step,u,v,decision,color`; steps count from 0.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "step,u,v,decision,color")?;
        for (i, s) in self.steps.iter().enumerate() {
            match s.decision {
                Decision::Colored(c) => writeln!(w, "{i},{},{},C,{c}", s.u, s.v)?,
                Decision::Rejected => writeln!(w, "{i},{},{},R,", s.u, s.v)?,
            }
        }
        Ok(())
    }
}

/// Plays `alg` against `script` with `k` colors.
pub fn run(
    alg: &mut dyn OnlineAlgorithm,
    script: &mut dyn AdversaryScript,
    k: usize,
    rng: &mut RngStream,
) -> Result<Trace> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    alg.validate(k)?;
    let mut graph = Graph::new();
    let mut coloring = PartialColoring::new(k);
    let mut steps = Vec::new();
    let bound = script.reveal_bound();
    loop {
        let view = GameView {
            k,
            graph: &graph,
            coloring: &coloring,
            steps: &steps,
        };
        let Some((u, v)) = script.next_edge(&view)? else {
            break;
        };
        if steps.len() >= bound {
            return Err(Error::Refused(format!(
                "adversary exceeded its bound of {bound} reveals"
            )));
        }
        let (u, v) = (VertexId(u), VertexId(v));
        let e = graph.add_edge(u, v)?;
        let decision = alg.decide(&graph, &coloring, e, rng);
        coloring.assign(&graph, e, decision.into())?;
        steps.push(TraceStep {
            edge: e,
            u,
            v,
            decision,
        });
    }
    Ok(Trace {
        k,
        seed: rng.seed(),
        algorithm: alg.name(),
        steps,
        graph,
        coloring,
    })
}

/// True iff every rejection happened with all `k` colors present at the
/// edge's endpoints.
pub fn audit_fair(trace: &Trace) -> bool {
    let mut g = Graph::new();
    let mut col = PartialColoring::new(trace.k);
    for s in &trace.steps {
        let Ok(e) = g.add_edge(s.u, s.v) else {
            return false;
        };
        if s.decision == Decision::Rejected && !col.available(&g, e).is_empty() {
            return false;
        }
        if col.assign(&g, e, s.decision.into()).is_err() {
            return false;
        }
    }
    true
}

/// Replays the trace's edges through a deterministic decision rule and
/// reports whether every recorded decision matches.
pub fn replays_as(trace: &Trace, alg: &mut dyn OnlineAlgorithm) -> bool {
    let mut g = Graph::new();
    let mut col = PartialColoring::new(trace.k);
    let mut rng = RngStream::new(trace.seed);
    for s in &trace.steps {
        let Ok(e) = g.add_edge(s.u, s.v) else {
            return false;
        };
        if alg.decide(&g, &col, e, &mut rng) != s.decision {
            return false;
        }
        if col.assign(&g, e, s.decision.into()).is_err() {
            return false;
        }
    }
    true
}

/// Fixed list of edges revealed in order, usable as a script.
#[derive(Debug, Clone)]
pub struct EdgeScript {
    edges: Vec<(usize, usize)>,
    next: usize,
}

impl EdgeScript {
    pub fn new(edges: Vec<(usize, usize)>) -> Self {
        EdgeScript { edges, next: 0 }
    }
}

impl AdversaryScript for EdgeScript {
    fn next_edge(&mut self, _: &GameView<'_>) -> Result<Option<(usize, usize)>> {
        let e = self.edges.get(self.next).copied();
        self.next += 1;
        Ok(e)
    }

    fn reveal_bound(&self) -> usize {
        self.edges.len()
    }
}

/// Convenience: play a fixed edge order.
pub fn run_edges(
    alg: &mut dyn OnlineAlgorithm,
    edges: &[(usize, usize)],
    k: usize,
    rng: &mut RngStream,
) -> Result<Trace> {
    run(alg, &mut EdgeScript::new(edges.to_vec()), k, rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: usize) -> Color {
        Color::new(v).unwrap()
    }

    fn path(order: &[usize]) -> Vec<(usize, usize)> {
        // e_i joins vertices i-1 and i
        order.iter().map(|&i| (i - 1, i)).collect()
    }

    #[test]
    fn first_fit_basics() {
        let g = Graph::from_edges([(0, 1)]).unwrap();
        let c = PartialColoring::new(2);
        assert_eq!(first_fit_decide(&c, &g, EdgeId(0)), Decision::Colored(col(1)));

        let g = Graph::from_edges([(0, 1), (0, 2), (3, 4), (1, 5)]).unwrap();
        let mut c = PartialColoring::new(3);
        c.assign(&g, EdgeId(0), Assignment::Colored(col(1))).unwrap();
        c.assign(&g, EdgeId(1), Assignment::Colored(col(3))).unwrap();
        // edge (0, 6) sees {1, 3} at vertex 0 only
        let mut g2 = g.clone();
        let e = g2.add_edge(VertexId(0), VertexId(6)).unwrap();
        assert_eq!(first_fit_decide(&c, &g2, e), Decision::Colored(col(2)));
    }

    #[test]
    fn first_fit_rejects_blocked_middle_edge() {
        let mut rng = RngStream::new(0);
        let t = run_edges(&mut FirstFit, &path(&[1, 2, 4, 3]), 2, &mut rng).unwrap();
        let d = t.decisions();
        assert_eq!(d[0], Decision::Colored(col(1)));
        assert_eq!(d[1], Decision::Colored(col(2)));
        assert_eq!(d[2], Decision::Colored(col(1)));
        assert_eq!(d[3], Decision::Rejected);
    }

    #[test]
    fn first_fit_path_1_3_2() {
        let mut rng = RngStream::new(0);
        let t = run_edges(&mut FirstFit, &path(&[1, 3, 2]), 2, &mut rng).unwrap();
        let colors: Vec<_> = t.steps.iter().map(|s| s.decision).collect();
        assert_eq!(
            colors,
            vec![
                Decision::Colored(col(1)),
                Decision::Colored(col(1)),
                Decision::Colored(col(2))
            ]
        );
    }

    #[test]
    fn next_fit_alternates_and_wraps() {
        let mut rng = RngStream::new(0);
        let edges: Vec<_> = (0..6).map(|i| (2 * i, 2 * i + 1)).collect();
        let t = run_edges(&mut NextFit::new(), &edges, 2, &mut rng).unwrap();
        let got: Vec<_> = t.steps.iter().map(|s| s.decision).collect();
        let want: Vec<_> = [1, 2, 1, 2, 1, 2]
            .iter()
            .map(|&c| Decision::Colored(col(c)))
            .collect();
        assert_eq!(got, want);

        // c_last = 2, edge next to a color-2 edge only
        let g = Graph::from_edges([(0, 1), (1, 2)]).unwrap();
        let mut c = PartialColoring::new(2);
        c.assign(&g, EdgeId(0), Assignment::Colored(col(2))).unwrap();
        let (d, last) = next_fit_decide(&c, Some(col(2)), &g, EdgeId(1));
        assert_eq!(d, Decision::Colored(col(1)));
        assert_eq!(last, Some(col(1)));
    }

    #[test]
    fn next_fit_keeps_last_color_on_reject() {
        let g = Graph::from_edges([(0, 1), (2, 3), (1, 2)]).unwrap();
        let mut c = PartialColoring::new(2);
        c.assign(&g, EdgeId(0), Assignment::Colored(col(1))).unwrap();
        c.assign(&g, EdgeId(1), Assignment::Colored(col(2))).unwrap();
        let (d, last) = next_fit_decide(&c, Some(col(2)), &g, EdgeId(2));
        assert_eq!(d, Decision::Rejected);
        assert_eq!(last, Some(col(2)));
    }

    #[test]
    fn next_fit_kills_odd_even_path() {
        let mut rng = RngStream::new(0);
        let t = run_edges(&mut NextFit::new(), &path(&[1, 3, 2]), 2, &mut rng).unwrap();
        assert_eq!(t.decisions()[2], Decision::Rejected);
        assert_eq!(t.colored(), 2);
    }

    #[test]
    fn rp_rules() {
        let g = Graph::from_edges([(0, 1)]).unwrap();
        let c = PartialColoring::new(2);
        // find a seed whose first draw is below 0.7
        let mut rng = RngStream::new(1);
        let draw = rng.clone().next_unit();
        let d = rp_decide(&c, &g, EdgeId(0), 0.7, &mut rng).unwrap();
        let want = if draw < 0.7 { col(1) } else { col(2) };
        assert_eq!(d, Decision::Colored(want));

        let g = Graph::from_edges([(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut c = PartialColoring::new(2);
        c.assign(&g, EdgeId(0), Assignment::Colored(col(1))).unwrap();
        assert_eq!(
            rp_decide(&c, &g, EdgeId(1), 0.7, &mut rng).unwrap(),
            Decision::Colored(col(2))
        );
        c.assign(&g, EdgeId(2), Assignment::Colored(col(2))).unwrap();
        assert_eq!(rp_decide(&c, &g, EdgeId(1), 0.7, &mut rng).unwrap(), Decision::Rejected);

        assert!(rp_decide(&c, &g, EdgeId(1), 0.4, &mut rng).is_err());
        assert!(RandomParity::new(1.2).is_err());
        let c3 = PartialColoring::new(3);
        assert!(rp_decide(&c3, &g, EdgeId(0), 0.7, &mut rng).is_err());
    }

    #[test]
    fn rp_one_matches_first_fit() {
        let orders: [&[usize]; 3] = [&[1, 2, 4, 3], &[1, 3, 5, 2, 4], &[3, 1, 2, 5, 4, 6]];
        for order in orders {
            let edges = path(order);
            let ff = run_edges(&mut FirstFit, &edges, 2, &mut RngStream::new(3)).unwrap();
            let rp = run_edges(
                &mut RandomParity::new(1.0).unwrap(),
                &edges,
                2,
                &mut RngStream::new(9),
            )
            .unwrap();
            assert_eq!(ff.decisions(), rp.decisions());
        }
    }

    #[test]
    fn empty_script_gives_empty_trace() {
        let t = run_edges(&mut FirstFit, &[], 3, &mut RngStream::new(0)).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.colored(), 0);
    }

    #[test]
    fn fairness_audit() {
        let t = run_edges(&mut FirstFit, &path(&[1, 2, 4, 3]), 2, &mut RngStream::new(0)).unwrap();
        assert!(audit_fair(&t));
        let t = run_edges(&mut NextFit::new(), &path(&[1, 3, 2]), 2, &mut RngStream::new(0)).unwrap();
        assert!(audit_fair(&t));

        let mut bad = t.clone();
        bad.steps[0].decision = Decision::Rejected;
        assert!(!audit_fair(&bad));
    }

    #[test]
    fn trace_replay_and_csv() {
        let t = run_edges(&mut FirstFit, &path(&[1, 2, 4, 3]), 2, &mut RngStream::new(0)).unwrap();
        assert_eq!(t.replay().unwrap(), t.coloring);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "step,u,v,decision,color\n0,0,1,C,1\n1,1,2,C,2\n2,3,4,C,1\n3,2,3,R,\n"
        );
    }

    #[test]
    fn seeded_streams_are_reproducible() {
        let mut a = RngStream::for_trial(7, 3);
        let mut b = RngStream::for_trial(7, 3);
        let mut c = RngStream::for_trial(7, 4);
        let xa: Vec<f64> = (0..5).map(|_| a.next_unit()).collect();
        let xb: Vec<f64> = (0..5).map(|_| b.next_unit()).collect();
        let xc: Vec<f64> = (0..5).map(|_| c.next_unit()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }
}
