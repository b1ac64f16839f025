//! Incrementally revealed simple graphs and their partial edge colorings.
//!
//! Vertices are created implicitly the first time an edge mentions them and
//! edge ids follow reveal order, so `EdgeId(i)` is always the `i`-th edge
//! that arrived.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Largest palette a [`ColorSet`] can hold.
pub const MAX_COLORS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for VertexId {
    fn from(v: usize) -> Self {
        VertexId(v)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A color in `1..=k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(u8);

impl Color {
    pub fn new(value: usize) -> Result<Self> {
        if value == 0 || value > MAX_COLORS {
            return Err(Error::Parameter(format!(
                "color {value} outside 1..={MAX_COLORS}"
            )));
        }
        Ok(Color(value as u8))
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    fn bit(self) -> u64 {
        1u64 << (self.0 - 1)
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Subset of the palette `{1, ..., k}` stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ColorSet(u64);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    /// The full palette `{1, ..., k}`.
    pub fn full(k: usize) -> Self {
        assert!(k <= MAX_COLORS, "palette of {k} colors exceeds {MAX_COLORS}");
        if k == MAX_COLORS {
            ColorSet(u64::MAX)
        } else {
            ColorSet((1u64 << k) - 1)
        }
    }

    /// The interval `{lo, ..., hi}`; empty when `lo > hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        if lo > hi || hi == 0 {
            return ColorSet::EMPTY;
        }
        let lo = lo.max(1);
        ColorSet(Self::full(hi).0 & !Self::full(lo - 1).0)
    }

    pub fn contains(self, c: Color) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn insert(&mut self, c: Color) {
        self.0 |= c.bit();
    }

    pub fn remove(&mut self, c: Color) {
        self.0 &= !c.bit();
    }

    pub fn union(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & other.0)
    }

    /// Colors of `{1, ..., k}` missing from `self`.
    pub fn complement(self, k: usize) -> ColorSet {
        ColorSet(!self.0 & Self::full(k).0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn min(self) -> Option<Color> {
        (self.0 != 0).then(|| Color(self.0.trailing_zeros() as u8 + 1))
    }

    pub fn max(self) -> Option<Color> {
        (self.0 != 0).then(|| Color((63 - self.0.leading_zeros()) as u8 + 1))
    }

    pub fn iter(self) -> impl Iterator<Item = Color> {
        let bits = self.0;
        (0..MAX_COLORS as u8)
            .filter(move |i| bits & (1u64 << i) != 0)
            .map(|i| Color(i + 1))
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        let mut set = ColorSet::EMPTY;
        for c in iter {
            set.insert(c);
        }
        set
    }
}

/// Simple undirected graph built one edge at a time.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    endpoints: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<EdgeId>>,
    index: HashMap<(usize, usize), EdgeId>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new();
        for (u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v))?;
        }
        Ok(g)
    }

    /// Reveals edge `(u, v)`, creating any vertex not yet seen.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        if u == v {
            return Err(Error::SelfLoop(u.0));
        }
        let key = (u.0.min(v.0), u.0.max(v.0));
        if self.index.contains_key(&key) {
            return Err(Error::DuplicateEdge(u.0, v.0));
        }
        let needed = u.0.max(v.0) + 1;
        if self.adjacency.len() < needed {
            self.adjacency.resize_with(needed, Vec::new);
        }
        let id = EdgeId(self.endpoints.len());
        self.endpoints.push((u, v));
        self.adjacency[u.0].push(id);
        self.adjacency[v.0].push(id);
        self.index.insert(key, id);
        Ok(id)
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.endpoints.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.endpoints[e.0]
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.endpoints.len()).map(EdgeId)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.adjacency.len()).map(VertexId)
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.endpoints.iter().map(|&(u, v)| (u.0, v.0)).collect()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency.get(v.0).map_or(0, Vec::len)
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges incident to `v`, in reveal order.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        self.adjacency.get(v.0).map_or(&[], Vec::as_slice)
    }

    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.index.get(&(u.0.min(v.0), u.0.max(v.0))).copied()
    }

    pub fn other_endpoint(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.endpoints[e.0];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Edges sharing an endpoint with `e`.
    pub fn adjacent_edges(&self, e: EdgeId) -> impl Iterator<Item = EdgeId> + '_ {
        let (u, v) = self.endpoints[e.0];
        self.incident(u)
            .iter()
            .chain(self.incident(v))
            .copied()
            .filter(move |&f| f != e)
    }

    /// Whether both endpoints of `e` were untouched when `e` arrived.
    /// Rejected neighbours count: they are still part of the graph.
    pub fn is_isolated_at_reveal(&self, e: EdgeId) -> bool {
        self.adjacent_edges(e).all(|f| f > e)
    }

    fn active_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(|&v| self.degree(v) > 0)
    }

    /// Number of connected components among vertices with at least one edge.
    pub fn components(&self) -> usize {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in self.active_vertices() {
            if seen[start.0] {
                continue;
            }
            count += 1;
            seen[start.0] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &e in self.incident(v) {
                    let w = self.other_endpoint(e, v);
                    if !seen[w.0] {
                        seen[w.0] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_forest(&self) -> bool {
        let active = self.active_vertices().count();
        self.num_edges() + self.components() == active
    }

    pub fn is_tree(&self) -> bool {
        self.num_edges() > 0 && self.components() == 1 && self.is_forest()
    }

    pub fn classify(&self) -> GraphClass {
        if !self.is_tree() {
            return GraphClass::Other;
        }
        if self.max_degree() <= 2 {
            return GraphClass::Path;
        }
        if self.active_vertices().filter(|&v| self.degree(v) > 1).count() == 1 {
            return GraphClass::Star(self.num_edges());
        }
        GraphClass::Tree
    }

    /// Edges of a path in walking order from one end to the other.
    pub fn path_order(&self) -> Result<Vec<EdgeId>> {
        if self.classify() != GraphClass::Path {
            return Err(Error::NotPath);
        }
        let start = self
            .active_vertices()
            .find(|&v| self.degree(v) == 1)
            .ok_or(Error::NotPath)?;
        let mut order = Vec::with_capacity(self.num_edges());
        let mut prev: Option<EdgeId> = None;
        let mut at = start;
        while order.len() < self.num_edges() {
            let next = self
                .incident(at)
                .iter()
                .copied()
                .find(|&e| Some(e) != prev)
                .ok_or(Error::NotPath)?;
            order.push(next);
            at = self.other_endpoint(next, at);
            prev = Some(next);
        }
        Ok(order)
    }
}

/// Structural class of a whole graph. Paths take precedence over stars, so
/// `K_{1,2}` is a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphClass {
    Path,
    Star(usize),
    Tree,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Assignment {
    Pending,
    Colored(Color),
    Rejected,
}

/// Per-edge assignment plus a cache of the color set at every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialColoring {
    k: usize,
    assignment: Vec<Assignment>,
    at_vertex: Vec<ColorSet>,
}

impl PartialColoring {
    pub fn new(k: usize) -> Self {
        assert!(k <= MAX_COLORS, "palette of {k} colors exceeds {MAX_COLORS}");
        PartialColoring {
            k,
            assignment: Vec::new(),
            at_vertex: Vec::new(),
        }
    }

    /// Builds a coloring from explicit per-edge assignments, checking properness.
    pub fn from_assignments(g: &Graph, k: usize, assignment: &[Assignment]) -> Result<Self> {
        let mut c = PartialColoring::new(k);
        for (i, &a) in assignment.iter().enumerate() {
            c.assign(g, EdgeId(i), a)?;
        }
        Ok(c)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn grow(&mut self, g: &Graph) {
        if self.assignment.len() < g.num_edges() {
            self.assignment.resize(g.num_edges(), Assignment::Pending);
        }
        if self.at_vertex.len() < g.num_vertices() {
            self.at_vertex.resize(g.num_vertices(), ColorSet::EMPTY);
        }
    }

    pub fn get(&self, e: EdgeId) -> Assignment {
        self.assignment.get(e.0).copied().unwrap_or(Assignment::Pending)
    }

    pub fn color(&self, e: EdgeId) -> Option<Color> {
        match self.get(e) {
            Assignment::Colored(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_colored(&self, e: EdgeId) -> bool {
        self.color(e).is_some()
    }

    /// Γ_v: colors on colored edges incident to `v`.
    pub fn colors_at(&self, v: VertexId) -> ColorSet {
        self.at_vertex.get(v.0).copied().unwrap_or_default()
    }

    /// Colors free at both endpoints of `e`.
    pub fn available(&self, g: &Graph, e: EdgeId) -> ColorSet {
        let (u, v) = g.endpoints(e);
        self.colors_at(u).union(self.colors_at(v)).complement(self.k)
    }

    /// Γ_v recomputed from the edge assignments, bypassing the cache.
    pub fn recompute_colors_at(&self, g: &Graph, v: VertexId) -> ColorSet {
        g.incident(v).iter().filter_map(|&e| self.color(e)).collect()
    }

    /// Records the decision for `e`. Fails if the color is already present
    /// at an endpoint or lies outside the palette.
    pub fn assign(&mut self, g: &Graph, e: EdgeId, a: Assignment) -> Result<()> {
        if e.0 >= g.num_edges() {
            return Err(Error::UnknownEdge(e.0));
        }
        self.grow(g);
        if let Assignment::Colored(old) = self.assignment[e.0] {
            let (u, v) = g.endpoints(e);
            self.at_vertex[u.0].remove(old);
            self.at_vertex[v.0].remove(old);
        }
        if let Assignment::Colored(c) = a {
            if c.get() > self.k || !self.available(g, e).contains(c) {
                self.assignment[e.0] = Assignment::Pending;
                return Err(Error::Improper {
                    edge: e.0,
                    color: c.0,
                });
            }
            let (u, v) = g.endpoints(e);
            self.at_vertex[u.0].insert(c);
            self.at_vertex[v.0].insert(c);
        }
        self.assignment[e.0] = a;
        Ok(())
    }

    pub fn assignments(&self) -> &[Assignment] {
        &self.assignment
    }

    pub fn colored_count(&self) -> usize {
        self.assignment
            .iter()
            .filter(|a| matches!(a, Assignment::Colored(_)))
            .count()
    }

    pub fn rejected_count(&self) -> usize {
        self.assignment
            .iter()
            .filter(|a| matches!(a, Assignment::Rejected))
            .count()
    }

    /// Times each color `1..=k` is used.
    pub fn color_usage(&self) -> Vec<usize> {
        let mut usage = vec![0; self.k];
        for a in &self.assignment {
            if let Assignment::Colored(c) = a {
                usage[c.get() - 1] += 1;
            }
        }
        usage
    }

    /// No two adjacent colored edges share a color.
    pub fn is_proper(&self, g: &Graph) -> bool {
        g.vertices().all(|v| {
            let colors: Vec<Color> = g.incident(v).iter().filter_map(|&e| self.color(e)).collect();
            let set: ColorSet = colors.iter().copied().collect();
            set.len() == colors.len()
        })
    }

    /// Incremental cache agrees with a from-scratch recomputation.
    pub fn cache_coherent(&self, g: &Graph) -> bool {
        g.vertices()
            .all(|v| self.colors_at(v) == self.recompute_colors_at(g, v))
    }
}

/// Parses the edge-list format: one `u v` pair per line, `#` comments and
/// blank lines ignored. Extra columns are returned untouched.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Vec<(usize, usize, Vec<String>)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut vertex = |name: &str| -> Result<usize> {
            let tok = fields.next().ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("missing {name}"),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("bad vertex '{tok}'"),
            })
        };
        let u = vertex("u")?;
        let v = vertex("v")?;
        out.push((u, v, fields.map(str::to_owned).collect()));
    }
    Ok(out)
}

pub fn write_edge_list<W: std::io::Write>(mut w: W, edges: &[(usize, usize)]) -> Result<()> {
    for (u, v) in edges {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}
