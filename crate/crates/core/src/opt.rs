//! Exact offline optimum: the largest edge set that can be properly colored
//! with `k` colors, together with such a coloring.

use std::collections::VecDeque;
use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::{Assignment, Color, ColorSet, EdgeId, Graph, PartialColoring, VertexId};

/// Largest graph `opt_bruteforce` accepts.
pub const BRUTE_FORCE_MAX_EDGES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptWitness {
    pub k: usize,
    /// Per edge: the color OPT gives it, `None` when OPT drops it.
    pub colors: Vec<Option<Color>>,
    pub opt_count: usize,
}

impl OptWitness {
    pub fn contains(&self, e: EdgeId) -> bool {
        self.colors[e.0].is_some()
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.colors
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_some())
            .map(|(i, _)| EdgeId(i))
    }

    pub fn to_coloring(&self, g: &Graph) -> Result<PartialColoring> {
        let assignment: Vec<Assignment> = self
            .colors
            .iter()
            .map(|c| c.map_or(Assignment::Rejected, Assignment::Colored))
            .collect();
        PartialColoring::from_assignments(g, self.k, &assignment)
    }

    /// Properness, count consistency and the degree cap.
    pub fn audit(&self, g: &Graph) -> bool {
        if self.colors.len() != g.num_edges() {
            return false;
        }
        if self.edges().count() != self.opt_count {
            return false;
        }
        if self.colors.iter().flatten().any(|c| c.get() > self.k) {
            return false;
        }
        let Ok(col) = self.to_coloring(g) else {
            return false;
        };
        col.is_proper(g)
            && g.vertices()
                .all(|v| g.incident(v).iter().filter(|&&e| self.contains(e)).count() <= self.k)
    }

    /// Witness in trace CSV layout with every row marked `C`.
    pub fn write_csv<W: Write>(&self, g: &Graph, mut w: W) -> Result<()> {
        writeln!(w, "step,u,v,decision,color")?;
        for (i, e) in self.edges().enumerate() {
            let (u, v) = g.endpoints(e);
            writeln!(w, "{i},{u},{v},C,{}", self.colors[e.0].unwrap())?;
        }
        Ok(())
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    Ok(())
}

/// OPT on a path with `m` edges.
pub fn opt_path(m: usize, k: usize) -> Result<usize> {
    check_k(k)?;
    Ok(if k >= 2 { m } else { m.div_ceil(2) })
}

/// OPT on a forest by degree-constrained subgraph DP.
///
/// Per vertex two values: the best count in its subtree when the parent edge
/// is dropped (up to `k` kept child edges) and when it is kept (up to
/// `k - 1`). Child gains are sorted and the best ones taken. The kept forest
/// has maximum degree at most `k`, so coloring child edges with the lowest
/// colors not used by the parent edge is always proper.
pub fn opt_tree(g: &Graph, k: usize) -> Result<OptWitness> {
    check_k(k)?;
    if !g.is_forest() {
        return Err(Error::Cyclic);
    }
    let n = g.num_vertices();
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut roots = Vec::new();
    for r in g.vertices() {
        if visited[r.0] {
            continue;
        }
        visited[r.0] = true;
        roots.push(r);
        let mut queue = VecDeque::from([r]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &e in g.incident(v) {
                let w = g.other_endpoint(e, v);
                if !visited[w.0] {
                    visited[w.0] = true;
                    parent_edge[w.0] = Some(e);
                    queue.push_back(w);
                }
            }
        }
    }

    let children = |v: VertexId| -> Vec<(EdgeId, VertexId)> {
        g.incident(v)
            .iter()
            .filter(|&&e| parent_edge[v.0] != Some(e))
            .map(|&e| (e, g.other_endpoint(e, v)))
            .collect()
    };

    // ranked child gains: (gain, edge, child), best first, ties by edge id
    let ranked = |v: VertexId, free: &[usize], tied: &[usize]| -> Vec<(usize, EdgeId, VertexId)> {
        let mut gains: Vec<_> = children(v)
            .into_iter()
            .map(|(e, c)| (1 + tied[c.0] - free[c.0], e, c))
            .collect();
        gains.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        gains
    };

    let mut free = vec![0usize; n];
    let mut tied = vec![0usize; n];
    for &v in order.iter().rev() {
        let base: usize = children(v).iter().map(|(_, c)| free[c.0]).sum();
        let gains = ranked(v, &free, &tied);
        let take = |cap: usize| -> usize {
            gains.iter().take(cap).map(|g| g.0).filter(|&x| x > 0).sum()
        };
        free[v.0] = base + take(k);
        tied[v.0] = base + take(k - 1);
    }

    let mut kept = vec![false; g.num_edges()];
    let mut parent_kept = vec![false; n];
    for &v in &order {
        let cap = if parent_kept[v.0] { k - 1 } else { k };
        for (gain, e, c) in ranked(v, &free, &tied).into_iter().take(cap) {
            if gain > 0 {
                kept[e.0] = true;
                parent_kept[c.0] = true;
            }
        }
    }

    let mut colors: Vec<Option<Color>> = vec![None; g.num_edges()];
    for &v in &order {
        let mut used = ColorSet::EMPTY;
        if let Some(pe) = parent_edge[v.0] {
            if let Some(c) = colors[pe.0] {
                used.insert(c);
            }
        }
        for (e, _) in children(v) {
            if kept[e.0] {
                let c = used.complement(k).min().expect("kept degree at most k");
                used.insert(c);
                colors[e.0] = Some(c);
            }
        }
    }
    let opt_count = kept.iter().filter(|&&x| x).count();
    debug_assert_eq!(opt_count, roots.iter().map(|r| free[r.0]).sum::<usize>());
    Ok(OptWitness {
        k,
        colors,
        opt_count,
    })
}

/// OPT by exhaustive backtracking over per-edge colors (or drop), with
/// color-symmetry breaking and a counting bound. Any graph up to
/// [`BRUTE_FORCE_MAX_EDGES`] edges.
pub fn opt_bruteforce(g: &Graph, k: usize) -> Result<OptWitness> {
    check_k(k)?;
    let m = g.num_edges();
    if m > BRUTE_FORCE_MAX_EDGES {
        return Err(Error::TooLarge(format!(
            "{m} edges exceeds the brute-force limit of {BRUTE_FORCE_MAX_EDGES}"
        )));
    }

    struct Search<'a> {
        g: &'a Graph,
        k: usize,
        at: Vec<ColorSet>,
        current: Vec<Option<Color>>,
        best: Vec<Option<Color>>,
        best_count: usize,
    }

    impl Search<'_> {
        fn go(&mut self, i: usize, count: usize, max_used: usize) {
            let m = self.current.len();
            if count + (m - i) <= self.best_count && i > 0 {
                return;
            }
            if i == m {
                if count > self.best_count || self.best_count == 0 {
                    self.best_count = count;
                    self.best = self.current.clone();
                }
                return;
            }
            let (u, v) = self.g.endpoints(EdgeId(i));
            let blocked = self.at[u.0].union(self.at[v.0]);
            for value in 1..=(max_used + 1).min(self.k) {
                let c = Color::new(value).unwrap();
                if blocked.contains(c) {
                    continue;
                }
                self.at[u.0].insert(c);
                self.at[v.0].insert(c);
                self.current[i] = Some(c);
                self.go(i + 1, count + 1, max_used.max(value));
                self.current[i] = None;
                self.at[u.0].remove(c);
                self.at[v.0].remove(c);
            }
            self.go(i + 1, count, max_used);
        }
    }

    let mut s = Search {
        g,
        k,
        at: vec![ColorSet::EMPTY; g.num_vertices()],
        current: vec![None; m],
        best: vec![None; m],
        best_count: 0,
    };
    s.go(0, 0, 0);
    Ok(OptWitness {
        k,
        colors: s.best,
        opt_count: s.best_count,
    })
}

/// Dispatches to the forest DP, or brute force for small general graphs.
pub fn opt(g: &Graph, k: usize) -> Result<OptWitness> {
    if g.is_forest() {
        opt_tree(g, k)
    } else {
        opt_bruteforce(g, k)
    }
}

/// One witness per optimal edge set of a small graph.
pub fn all_optimal_edge_sets(g: &Graph, k: usize) -> Result<Vec<OptWitness>> {
    let best = opt_bruteforce(g, k)?.opt_count;
    let m = g.num_edges();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << m) {
        if mask.count_ones() as usize != best {
            continue;
        }
        let sub: Vec<(usize, usize)> = (0..m)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| {
                let (u, v) = g.endpoints(EdgeId(i));
                (u.0, v.0)
            })
            .collect();
        let sg = Graph::from_edges(sub)?;
        let w = opt(&sg, k)?;
        if w.opt_count != best {
            continue;
        }
        let mut colors = vec![None; m];
        for (j, i) in (0..m).filter(|i| mask & (1 << i) != 0).enumerate() {
            colors[i] = w.colors[j];
        }
        out.push(OptWitness {
            k,
            colors,
            opt_count: best,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_closed_form() {
        assert_eq!(opt_path(727, 2).unwrap(), 727);
        assert_eq!(opt_path(0, 3).unwrap(), 0);
        assert_eq!(opt_path(5, 1).unwrap(), 3);
        assert!(opt_path(4, 0).is_err());
    }

    #[test]
    fn five_edge_path_matching_by_enumeration() {
        // all subsets of a 5-edge path with no two consecutive edges
        let best = (0u32..32)
            .filter(|m| m & (m >> 1) == 0)
            .map(|m| m.count_ones())
            .max()
            .unwrap();
        assert_eq!(best, 3);
        let g = Graph::from_edges((0..5).map(|i| (i, i + 1))).unwrap();
        assert_eq!(opt_tree(&g, 1).unwrap().opt_count, 3);
        assert_eq!(opt_bruteforce(&g, 1).unwrap().opt_count, 3);
    }

    #[test]
    fn star_capped_by_k() {
        let g = Graph::from_edges((1..=3).map(|i| (0, i))).unwrap();
        let w = opt_tree(&g, 2).unwrap();
        assert_eq!(w.opt_count, 2);
        assert!(w.audit(&g));
    }

    #[test]
    fn triangle() {
        let g = Graph::from_edges([(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(opt_bruteforce(&g, 1).unwrap().opt_count, 1);
        let w = opt_bruteforce(&g, 2).unwrap();
        assert_eq!(w.opt_count, 2);
        assert!(w.audit(&g));
        assert_eq!(opt_tree(&g, 2), Err(Error::Cyclic));
        assert_eq!(opt_bruteforce(&g, 3).unwrap().opt_count, 3);
    }

    #[test]
    fn brute_force_guard() {
        let g = Graph::from_edges((0..17).map(|i| (i, i + 1))).unwrap();
        assert!(matches!(opt_bruteforce(&g, 2), Err(Error::TooLarge(_))));
    }

    #[test]
    fn petersen_like_small_graph() {
        // K4 needs 3 colors for all 6 edges
        let g = Graph::from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(opt_bruteforce(&g, 3).unwrap().opt_count, 6);
        assert_eq!(opt_bruteforce(&g, 2).unwrap().opt_count, 4);
    }

    #[test]
    fn forest_components_summed() {
        let g = Graph::from_edges([(0, 1), (0, 2), (0, 3), (4, 5), (5, 6)]).unwrap();
        let w = opt_tree(&g, 2).unwrap();
        assert_eq!(w.opt_count, 4);
        assert!(w.audit(&g));
    }

    #[test]
    fn witness_csv() {
        let g = Graph::from_edges([(0, 1), (1, 2)]).unwrap();
        let w = opt_tree(&g, 2).unwrap();
        let mut buf = Vec::new();
        w.write_csv(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("step,u,v,decision,color\n0,0,1,C,"));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn alternative_optima() {
        let g = Graph::from_edges((1..=3).map(|i| (0, i))).unwrap();
        let all = all_optimal_edge_sets(&g, 2).unwrap();
        assert_eq!(all.len(), 3);
        assert!(all.iter().all(|w| w.audit(&g)));
    }
}
