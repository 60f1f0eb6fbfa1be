//! Qubit connectivity graphs and the structural queries the schedule
//! constructions depend on.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Node budget for the exact maximum-clique search.
pub const DEFAULT_CLIQUE_BUDGET: u64 = 1_000_000;

/// Step budget for the bounded 4-coloring backtracker.
pub const DEFAULT_COLORING_BUDGET: u64 = 200_000;

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct TopologyGraph {
    n: usize,
    /// Sorted `(u, v)` with `u < v`.
    edges: Vec<(usize, usize)>,
    /// Sorted neighbor lists.
    adj: Vec<Vec<usize>>,
}

impl TopologyGraph {
    /// Build from an edge list. Duplicates (in either orientation) collapse.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::GraphParse { line: 0, message: "vertex count must be >= 1".into() });
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(Error::IndexOutOfRange { index: w, len: n });
                }
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(TopologyGraph { n, edges, adj })
    }

    /// Parse the edge-list text format: `n <N>` then one `<u> <v>` per line.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::GraphParse { line, message };
        let mut n = None;
        let mut edges = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match n {
                None => {
                    if fields.len() != 2 || fields[0] != "n" {
                        return Err(err(line_no, format!("expected `n <N>`, found {line:?}")));
                    }
                    let count: usize = fields[1]
                        .parse()
                        .map_err(|_| err(line_no, format!("bad vertex count {:?}", fields[1])))?;
                    if count == 0 {
                        return Err(err(line_no, "vertex count must be >= 1".into()));
                    }
                    n = Some(count);
                }
                Some(count) => {
                    if fields.len() != 2 {
                        return Err(err(line_no, format!("expected `<u> <v>`, found {line:?}")));
                    }
                    let mut ends = [0usize; 2];
                    for (slot, f) in ends.iter_mut().zip(&fields) {
                        *slot = f.parse().map_err(|_| err(line_no, format!("bad vertex id {f:?}")))?;
                        if *slot >= count {
                            return Err(err(line_no, format!("vertex {slot} >= n = {count}")));
                        }
                    }
                    let [u, v] = ends;
                    if u == v {
                        return Err(err(line_no, format!("self-loop on vertex {u}")));
                    }
                    edges.insert((u.min(v), u.max(v)));
                }
            }
        }
        let n = n.ok_or_else(|| err(0, "missing `n <N>` header".into()))?;
        Self::from_edges(n, edges)
    }

    /// Render in the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_edges(n.max(1), edges).expect("complete graph is valid")
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n.max(1), (1..n).map(|v| (v - 1, v))).expect("path is valid")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Exact maximum clique with the default node budget.
    pub fn max_clique(&self) -> CliqueResult {
        self.max_clique_with_budget(DEFAULT_CLIQUE_BUDGET)
    }

    /// Branch-and-bound maximum clique. If the search visits more than
    /// `node_budget` nodes it stops and reports the best clique so far with
    /// `exact = false`.
    pub fn max_clique_with_budget(&self, node_budget: u64) -> CliqueResult {
        let mut search = CliqueSearch {
            g: self,
            best: vec![0],
            nodes: 0,
            budget: node_budget,
            exhausted: false,
        };
        // Low-degeneracy vertices last so they are popped first.
        let (order, _) = self.degeneracy_ordering();
        let mut r = Vec::new();
        search.expand(&mut r, order);
        let mut witness = search.best;
        witness.sort_unstable();
        CliqueResult { size: witness.len(), witness, exact: !search.exhausted }
    }

    /// Ordering from repeated minimum-degree removal, reversed, together with
    /// the largest remaining degree seen at removal time.
    ///
    /// In the returned ordering every vertex has at most `degeneracy`
    /// neighbors before it.
    pub fn degeneracy_ordering(&self) -> (Vec<usize>, usize) {
        let mut deg: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let mut queue: BTreeSet<(usize, usize)> = (0..self.n).map(|v| (deg[v], v)).collect();
        let mut removed = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut degeneracy = 0;
        while let Some((d, v)) = queue.pop_first() {
            degeneracy = degeneracy.max(d);
            removed[v] = true;
            order.push(v);
            for &u in &self.adj[v] {
                if !removed[u] {
                    queue.remove(&(deg[u], u));
                    deg[u] -= 1;
                    queue.insert((deg[u], u));
                }
            }
        }
        order.reverse();
        (order, degeneracy)
    }

    /// Greedy coloring in the given vertex order: each vertex takes the
    /// smallest color not used by an already-colored neighbor.
    pub fn greedy_coloring(&self, order: &[usize]) -> Coloring {
        let mut color_of = vec![usize::MAX; self.n];
        let mut used = Vec::new();
        for &v in order {
            used.clear();
            used.extend(self.adj[v].iter().map(|&u| color_of[u]).filter(|&c| c != usize::MAX));
            used.sort_unstable();
            used.dedup();
            let c = used.iter().enumerate().find(|&(i, &c)| i != c).map_or(used.len(), |(i, _)| i);
            color_of[v] = c;
        }
        for c in &mut color_of {
            if *c == usize::MAX {
                *c = 0;
            }
        }
        Coloring::from_colors(color_of)
    }

    /// Try to find a proper coloring with at most four colors.
    ///
    /// Greedy over the degeneracy ordering first; if that needs more than
    /// four colors, a DSATUR backtracker runs for at most `step_budget`
    /// steps. On failure the greedy coloring is returned with
    /// `within_four = false`.
    pub fn four_coloring(&self, step_budget: u64) -> ColoringOutcome {
        let (order, _) = self.degeneracy_ordering();
        let greedy = self.greedy_coloring(&order).canonical(self);
        if greedy.color_count <= 4 {
            return ColoringOutcome { coloring: greedy, within_four: true };
        }
        let mut bt = Backtracker {
            g: self,
            colors: vec![None; self.n],
            steps: 0,
            budget: step_budget,
        };
        match bt.run() {
            Some(colors) => ColoringOutcome {
                coloring: Coloring::from_colors(colors).canonical(self),
                within_four: true,
            },
            None => ColoringOutcome { coloring: greedy, within_four: false },
        }
    }
}

impl fmt::Debug for TopologyGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TopologyGraph").field("n", &self.n).field("edges", &self.edges).finish()
    }
}

/// Maximum clique found and whether the search completed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueResult {
    pub size: usize,
    pub witness: Vec<usize>,
    /// False if the node budget ran out; `size` is then a lower bound.
    pub exact: bool,
}

struct CliqueSearch<'a> {
    g: &'a TopologyGraph,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl CliqueSearch<'_> {
    fn expand(&mut self, r: &mut Vec<usize>, mut candidates: Vec<usize>) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if candidates.is_empty() {
            if r.len() > self.best.len() {
                self.best = r.clone();
            }
            return;
        }
        while let Some(v) = candidates.pop() {
            if r.len() + candidates.len() < self.best.len() || self.exhausted {
                return;
            }
            let next: Vec<usize> = candidates.iter().copied().filter(|&u| self.g.has_edge(v, u)).collect();
            r.push(v);
            self.expand(r, next);
            r.pop();
        }
    }
}

struct Backtracker<'a> {
    g: &'a TopologyGraph,
    colors: Vec<Option<u8>>,
    steps: u64,
    budget: u64,
}

impl Backtracker<'_> {
    fn run(&mut self) -> Option<Vec<usize>> {
        if self.solve() {
            Some(self.colors.iter().map(|c| c.map_or(0, usize::from)).collect())
        } else {
            None
        }
    }

    fn available(&self, v: usize) -> u8 {
        let mut mask = 0b1111u8;
        for &u in self.g.neighbors(v) {
            if let Some(c) = self.colors[u] {
                mask &= !(1 << c);
            }
        }
        mask
    }

    /// Uncolored vertex with fewest available colors, ties by degree.
    fn pick(&self) -> Option<(usize, u8)> {
        (0..self.g.vertex_count())
            .filter(|&v| self.colors[v].is_none())
            .map(|v| (v, self.available(v)))
            .min_by_key(|&(v, mask)| (mask.count_ones(), std::cmp::Reverse(self.g.degree(v))))
    }

    fn solve(&mut self) -> bool {
        let Some((v, mask)) = self.pick() else { return true };
        for c in 0..4u8 {
            if mask & (1 << c) == 0 {
                continue;
            }
            self.steps += 1;
            if self.steps > self.budget {
                return false;
            }
            self.colors[v] = Some(c);
            if self.solve() {
                return true;
            }
            self.colors[v] = None;
            if self.steps > self.budget {
                return false;
            }
        }
        false
    }
}

/// Vertex coloring with 0-based color indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub color_of: Vec<usize>,
    pub color_count: usize,
}

impl Coloring {
    /// `color_count` is one more than the largest color used.
    pub fn from_colors(color_of: Vec<usize>) -> Self {
        let color_count = color_of.iter().max().map_or(0, |&c| c + 1);
        Coloring { color_of, color_count }
    }

    /// Relabel colors in order of first appearance by vertex index, with
    /// isolated vertices on color 0.
    pub fn canonical(&self, g: &TopologyGraph) -> Self {
        let mut relabel = vec![usize::MAX; self.color_count];
        let mut next = 0;
        let colors = self
            .color_of
            .iter()
            .enumerate()
            .map(|(v, &c)| {
                if g.degree(v) == 0 {
                    return 0;
                }
                if relabel[c] == usize::MAX {
                    relabel[c] = next;
                    next += 1;
                }
                relabel[c]
            })
            .collect();
        Self::from_colors(colors)
    }

    /// Each vertex in its own color class.
    pub fn identity(n: usize) -> Self {
        Self::from_colors((0..n).collect())
    }

    /// Checks size and properness against `g`.
    pub fn validate(&self, g: &TopologyGraph) -> Result<()> {
        if self.color_of.len() != g.vertex_count() {
            return Err(Error::ColoringSize { expected: g.vertex_count(), found: self.color_of.len() });
        }
        for &(u, v) in g.edges() {
            if self.color_of[u] == self.color_of[v] {
                return Err(Error::ImproperColoring(u, v));
            }
        }
        Ok(())
    }

    pub fn is_proper(&self, g: &TopologyGraph) -> bool {
        self.validate(g).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringOutcome {
    pub coloring: Coloring,
    pub within_four: bool,
}
