//! Measurement schedules: sets of full-weight Pauli bases such that on every
//! edge of the topology the two restricted sites see all nine ordered pairs
//! of non-identity axes.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{ColumnSubstring, PauliAxis, PauliString};
use crate::topology::{Coloring, TopologyGraph, DEFAULT_COLORING_BUDGET};

use PauliAxis::{X, Y, Z};

/// The nine bases for a 4-clique. Rows are bases, columns are vertices.
/// Any two columns pair up into each of the nine ordered pairs exactly once.
pub const NINE_BASIS_TABLE: [[PauliAxis; 4]; 9] = [
    [X, X, X, X],
    [X, Y, Y, Y],
    [X, Z, Z, Z],
    [Y, X, Z, Y],
    [Y, Y, X, Z],
    [Y, Z, Y, X],
    [Z, X, Y, Z],
    [Z, Y, Z, X],
    [Z, Z, X, Y],
];

/// Smallest number of bases any schedule on a graph with an edge can have.
pub const PAIRS_PER_EDGE: usize = 9;

/// How a schedule was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// Nine-basis table with one column per color of a proper ≤4-coloring.
    Table9,
    /// Logarithmic construction for complete graphs, one column per vertex.
    Knlog,
    /// Logarithmic construction with one column per color class.
    KnlogColored,
    /// Output of [`heuristic_minimize`].
    Heuristic,
    /// Read from a file.
    Imported,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Construction::Table9 => "table9",
            Construction::Knlog => "knlog",
            Construction::KnlogColored => "knlog-colored",
            Construction::Heuristic => "heuristic",
            Construction::Imported => "imported",
        };
        f.write_str(s)
    }
}

/// Ordered list of full-weight measurement bases over the same qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementSchedule {
    bases: Vec<PauliString>,
    construction: Construction,
}

impl MeasurementSchedule {
    pub fn new(bases: Vec<PauliString>, construction: Construction) -> Result<Self> {
        let first = bases.first().ok_or_else(|| Error::InvalidSchedule("no bases".into()))?;
        let n = first.len();
        for (i, b) in bases.iter().enumerate() {
            if b.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: b.len() });
            }
            if b.weight() != n {
                return Err(Error::InvalidSchedule(format!(
                    "basis {} ({b}) contains an identity site",
                    i + 1
                )));
            }
        }
        Ok(MeasurementSchedule { bases, construction })
    }

    /// Build from per-vertex columns, all of the same height.
    fn from_columns(columns: &[&[PauliAxis]], construction: Construction) -> Result<Self> {
        let height = columns.first().map_or(0, |c| c.len());
        let bases = (0..height)
            .map(|r| {
                let row: Vec<PauliAxis> = columns.iter().map(|c| c[r]).collect();
                PauliString::from_axes(&row)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bases, construction)
    }

    pub fn bases(&self) -> &[PauliString] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn qubit_count(&self) -> usize {
        self.bases[0].len()
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    /// Letters of vertex `v` read down the schedule.
    pub fn column(&self, v: usize) -> Vec<PauliAxis> {
        self.bases.iter().map(|b| b.axis(v)).collect()
    }

    /// One basis per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for b in &self.bases {
            s.push_str(&b.to_string());
            s.push('\n');
        }
        s
    }

    /// Parse one basis per line; blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<Self> {
        let bases = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<Vec<PauliString>>>()?;
        Self::new(bases, Construction::Imported)
    }

    pub fn to_json(&self, report: &CoverageReport) -> ScheduleJson {
        ScheduleJson {
            n: self.qubit_count(),
            bases: self.bases.iter().map(ToString::to_string).collect(),
            construction: self.construction.to_string(),
            covered: report.covered,
            exact: report.exact,
        }
    }
}

/// JSON export of a schedule with its coverage flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleJson {
    pub n: usize,
    pub bases: Vec<String>,
    pub construction: String,
    pub covered: bool,
    pub exact: bool,
}

/// Result of checking a schedule against a topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    /// Every edge sees all nine pairs.
    pub covered: bool,
    /// Every edge sees each of the nine pairs exactly once.
    pub exact: bool,
    /// Missing pairs per edge; empty lists for covered edges.
    pub per_edge_missing: BTreeMap<(usize, usize), Vec<(PauliAxis, PauliAxis)>>,
}

impl CoverageReport {
    pub fn uncovered_edges(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<(PauliAxis, PauliAxis)>)> {
        self.per_edge_missing.iter().filter(|(_, m)| !m.is_empty())
    }
}

/// The nine ordered pairs in X<Y<Z order.
pub fn all_pairs() -> [(PauliAxis, PauliAxis); 9] {
    let mut out = [(X, X); 9];
    for (i, a) in PauliAxis::NON_IDENTITY.into_iter().enumerate() {
        for (j, b) in PauliAxis::NON_IDENTITY.into_iter().enumerate() {
            out[3 * i + j] = (a, b);
        }
    }
    out
}

#[inline]
fn pair_index(a: usize, b: usize) -> usize {
    3 * a + b
}

/// Vertex columns as letter indices 0..3.
fn letter_columns(s: &MeasurementSchedule) -> Vec<Vec<u8>> {
    (0..s.qubit_count())
        .map(|v| s.bases.iter().map(|b| b.axis(v).index().expect("full weight") as u8).collect())
        .collect()
}

/// Check the covering property on every edge of `g`.
pub fn verify_cover(g: &TopologyGraph, s: &MeasurementSchedule) -> Result<CoverageReport> {
    if s.qubit_count() != g.vertex_count() {
        return Err(Error::LengthMismatch { expected: g.vertex_count(), found: s.qubit_count() });
    }
    let cols = letter_columns(s);
    let pairs = all_pairs();
    let mut covered = true;
    let mut exact = true;
    let mut per_edge_missing = BTreeMap::new();
    for &(u, v) in g.edges() {
        let mut counts = [0usize; 9];
        for (&a, &b) in cols[u].iter().zip(&cols[v]) {
            counts[pair_index(a as usize, b as usize)] += 1;
        }
        let missing: Vec<_> = (0..9).filter(|&k| counts[k] == 0).map(|k| pairs[k]).collect();
        covered &= missing.is_empty();
        exact &= counts.iter().all(|&c| c == 1);
        per_edge_missing.insert((u, v), missing);
    }
    Ok(CoverageReport { covered, exact, per_edge_missing })
}

/// Nine bases; vertex `v` gets table column `coloring.color_of[v]`.
pub fn table9_schedule(g: &TopologyGraph, coloring: &Coloring) -> Result<MeasurementSchedule> {
    coloring.validate(g)?;
    if coloring.color_count > 4 {
        return Err(Error::TooManyColors(coloring.color_count));
    }
    let table_columns: Vec<Vec<PauliAxis>> =
        (0..4).map(|c| NINE_BASIS_TABLE.iter().map(|row| row[c]).collect()).collect();
    let columns: Vec<&[PauliAxis]> = coloring.color_of.iter().map(|&c| table_columns[c].as_slice()).collect();
    MeasurementSchedule::from_columns(&columns, Construction::Table9)
}

/// `3 * (1 + 2 * ceil(log2(n - 2)))`, the size of [`kn_log_schedule`].
pub fn schedule_size_formula(n: usize) -> Result<usize> {
    if n < 4 {
        return Err(Error::KnTooSmall(n));
    }
    Ok(3 * (1 + 2 * ceil_log2(n - 2)))
}

fn ceil_log2(m: usize) -> usize {
    debug_assert!(m >= 1);
    (usize::BITS - (m - 1).leading_zeros()) as usize
}

/// Column substrings of the logarithmic construction, as `[block][column]`.
///
/// Column 0 cycles σX, σY, σZ down the blocks and column 1 is σ0 throughout.
/// The remaining columns, re-indexed from 0, start with σ0; in the next L
/// blocks block t holds σ1 or σ2 according to bit `L - t` of the column
/// index, and the final L blocks repeat that with σ1 and σ2 swapped. Two
/// distinct indices differ in some bit, which puts σ1⊙σ2 and σ2⊙σ1 on the
/// pair.
pub fn kn_log_layout(n: usize) -> Result<Vec<Vec<ColumnSubstring>>> {
    use ColumnSubstring::*;
    if n < 4 {
        return Err(Error::KnTooSmall(n));
    }
    let levels = ceil_log2(n - 2);
    let blocks = 1 + 2 * levels;
    let mut layout = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let mut row = Vec::with_capacity(n);
        row.push([SigmaX, SigmaY, SigmaZ][b % 3]);
        row.push(Sigma0);
        for c in 0..n - 2 {
            let sub = if b == 0 {
                Sigma0
            } else {
                let (t, swapped) = if b <= levels { (b, false) } else { (b - levels, true) };
                let bit = (c >> (levels - t)) & 1 == 1;
                if bit ^ swapped {
                    Sigma2
                } else {
                    Sigma1
                }
            };
            row.push(sub);
        }
        layout.push(row);
    }
    Ok(layout)
}

fn kn_log_columns(n: usize) -> Result<Vec<Vec<PauliAxis>>> {
    let layout = kn_log_layout(n)?;
    Ok((0..n).map(|c| layout.iter().flat_map(|block| block[c].rows()).collect()).collect())
}

/// Covering schedule for the complete graph on `n >= 4` vertices.
pub fn kn_log_schedule(n: usize) -> Result<MeasurementSchedule> {
    let columns = kn_log_columns(n)?;
    let refs: Vec<&[PauliAxis]> = columns.iter().map(Vec::as_slice).collect();
    MeasurementSchedule::from_columns(&refs, Construction::Knlog)
}

/// Logarithmic construction with one column per color class. Any proper
/// coloring works because no edge has both ends in one class.
pub fn color_compressed_schedule(g: &TopologyGraph, coloring: &Coloring) -> Result<MeasurementSchedule> {
    coloring.validate(g)?;
    let columns = kn_log_columns(coloring.color_count.max(4))?;
    let refs: Vec<&[PauliAxis]> = coloring.color_of.iter().map(|&c| columns[c].as_slice()).collect();
    let construction = if coloring.color_count == g.vertex_count() && g.vertex_count() >= 4 {
        Construction::Knlog
    } else {
        Construction::KnlogColored
    };
    MeasurementSchedule::from_columns(&refs, construction)
}

/// Nine bases when a ≤4-coloring is found, otherwise the logarithmic
/// construction over the color classes of a greedy coloring.
pub fn general_schedule(g: &TopologyGraph) -> Result<MeasurementSchedule> {
    if g.edge_count() == 0 {
        return Err(Error::EdgelessGraph);
    }
    let outcome = g.four_coloring(DEFAULT_COLORING_BUDGET);
    if outcome.within_four || outcome.coloring.color_count <= 4 {
        table9_schedule(g, &outcome.coloring)
    } else {
        color_compressed_schedule(g, &outcome.coloring)
    }
}

/// 0 for an edgeless graph, else 9: each basis contributes one pair per edge.
pub fn lower_bound(g: &TopologyGraph) -> usize {
    if g.edge_count() == 0 {
        0
    } else {
        PAIRS_PER_EDGE
    }
}

/// Default move budget for [`heuristic_minimize`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 200_000;

/// One removal attempt in the local search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchLogEntry {
    pub attempt: usize,
    /// Length the attempt tried to reach.
    pub target_len: usize,
    pub removed_row: usize,
    pub succeeded: bool,
    pub moves: u64,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: MeasurementSchedule,
    pub initial_len: usize,
    pub lower_bound: usize,
    pub moves_used: u64,
    pub log: Vec<SearchLogEntry>,
}

impl SearchOutcome {
    pub fn improved(&self) -> bool {
        self.best.len() < self.initial_len
    }
}

/// Incremental pair counts for a candidate schedule.
struct SearchState<'g> {
    g: &'g TopologyGraph,
    /// `rows[r][v]` is a letter index.
    rows: Vec<Vec<u8>>,
    counts: Vec<[u32; 9]>,
    /// Uncovered `(edge, pair)` slots with O(1) removal via `slot_pos`.
    uncovered: Vec<(usize, usize)>,
    slot_pos: Vec<[usize; 9]>,
    /// Per vertex: `(edge index, other endpoint, vertex is the first endpoint)`.
    incident: &'g [Vec<(usize, usize, bool)>],
}

const NONE: usize = usize::MAX;

impl<'g> SearchState<'g> {
    fn new(g: &'g TopologyGraph, incident: &'g [Vec<(usize, usize, bool)>], rows: Vec<Vec<u8>>) -> Self {
        let mut counts = vec![[0u32; 9]; g.edge_count()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            for row in &rows {
                counts[e][pair_index(row[u] as usize, row[v] as usize)] += 1;
            }
        }
        let mut state = SearchState {
            g,
            rows,
            counts,
            uncovered: Vec::new(),
            slot_pos: vec![[NONE; 9]; g.edge_count()],
            incident,
        };
        for e in 0..g.edge_count() {
            for k in 0..9 {
                if state.counts[e][k] == 0 {
                    state.mark_uncovered(e, k);
                }
            }
        }
        state
    }

    fn mark_uncovered(&mut self, e: usize, k: usize) {
        self.slot_pos[e][k] = self.uncovered.len();
        self.uncovered.push((e, k));
    }

    fn mark_covered(&mut self, e: usize, k: usize) {
        let pos = self.slot_pos[e][k];
        self.uncovered.swap_remove(pos);
        if let Some(&(e2, k2)) = self.uncovered.get(pos) {
            self.slot_pos[e2][k2] = pos;
        }
        self.slot_pos[e][k] = NONE;
    }

    fn edge_pair(&self, row: usize, letter: u8, other: usize, v_first: bool) -> usize {
        let o = self.rows[row][other] as usize;
        if v_first {
            pair_index(letter as usize, o)
        } else {
            pair_index(o, letter as usize)
        }
    }

    /// Change in uncovered count if `rows[row][v]` became `letter`.
    fn delta(&self, row: usize, v: usize, letter: u8) -> i64 {
        let old = self.rows[row][v];
        if old == letter {
            return 0;
        }
        let mut d = 0i64;
        for &(e, other, first) in &self.incident[v] {
            if self.counts[e][self.edge_pair(row, old, other, first)] == 1 {
                d += 1;
            }
            if self.counts[e][self.edge_pair(row, letter, other, first)] == 0 {
                d -= 1;
            }
        }
        d
    }

    fn apply(&mut self, row: usize, v: usize, letter: u8) {
        let old = self.rows[row][v];
        for i in 0..self.incident[v].len() {
            let (e, other, first) = self.incident[v][i];
            let po = self.edge_pair(row, old, other, first);
            let pn = self.edge_pair(row, letter, other, first);
            self.counts[e][po] -= 1;
            if self.counts[e][po] == 0 {
                self.mark_uncovered(e, po);
            }
            if self.counts[e][pn] == 0 {
                self.mark_covered(e, pn);
            }
            self.counts[e][pn] += 1;
        }
        self.rows[row][v] = letter;
    }

    /// Focused move toward a random uncovered slot. Returns false if the
    /// proposal was rejected.
    fn step(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let (e, k) = self.uncovered[rng.gen_range(0..self.uncovered.len())];
        let (u, v) = self.g.edges()[e];
        let (a, b) = ((k / 3) as u8, (k % 3) as u8);
        // Rows where one endpoint already shows its half of the missing pair.
        let mut moves: Vec<(usize, usize, u8)> = Vec::new();
        for r in 0..self.rows.len() {
            if self.rows[r][v] == b {
                moves.push((r, u, a));
            }
            if self.rows[r][u] == a {
                moves.push((r, v, b));
            }
        }
        let (r, x, letter) = if moves.is_empty() {
            let r = rng.gen_range(0..self.rows.len());
            if rng.gen_bool(0.5) {
                (r, u, a)
            } else {
                (r, v, b)
            }
        } else {
            moves[rng.gen_range(0..moves.len())]
        };
        if self.delta(r, x, letter) <= 0 {
            self.apply(r, x, letter);
            true
        } else {
            false
        }
    }
}

/// Local search for a shorter covering schedule, starting from
/// [`general_schedule`].
///
/// Repeatedly drops one basis and repairs by single-site changes that never
/// increase the number of uncovered `(edge, pair)` slots. A failed repair
/// restarts from the last covering schedule with a different dropped row.
/// Deterministic for a fixed `seed` and `budget`.
pub fn heuristic_minimize(g: &TopologyGraph, seed: u64, budget: u64) -> Result<SearchOutcome> {
    let start = general_schedule(g)?;
    let n = g.vertex_count();
    let floor = lower_bound(g);
    let mut incident = vec![Vec::new(); n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push((e, v, true));
        incident[v].push((e, u, false));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_rows: Vec<Vec<u8>> = (0..start.len())
        .map(|r| (0..n).map(|v| start.bases[r].axis(v).index().unwrap() as u8).collect())
        .collect();
    let attempt_cap = (budget / 20).max(2_000);
    let mut used = 0u64;
    let mut log = Vec::new();
    let mut pending: Vec<usize> = Vec::new();

    while best_rows.len() > floor && used < budget {
        if pending.is_empty() {
            pending = (0..best_rows.len()).collect();
            pending.shuffle(&mut rng);
        }
        let removed = pending.pop().unwrap();
        let mut rows = best_rows.clone();
        rows.remove(removed);
        let mut state = SearchState::new(g, &incident, rows);
        let mut moves = 0u64;
        while !state.uncovered.is_empty() && moves < attempt_cap && used < budget {
            state.step(&mut rng);
            moves += 1;
            used += 1;
        }
        let succeeded = state.uncovered.is_empty();
        log.push(SearchLogEntry {
            attempt: log.len() + 1,
            target_len: best_rows.len() - 1,
            removed_row: removed,
            succeeded,
            moves,
        });
        if succeeded {
            best_rows = state.rows;
            pending.clear();
        }
    }

    let best = if best_rows.len() < start.len() {
        // Isolated vertices are unconstrained; keep every letter in their column.
        for v in (0..n).filter(|&v| g.degree(v) == 0) {
            for (r, row) in best_rows.iter_mut().enumerate() {
                row[v] = (r % 3) as u8;
            }
        }
        let bases = best_rows
            .iter()
            .map(|row| {
                let axes: Vec<PauliAxis> = row.iter().map(|&l| PauliAxis::NON_IDENTITY[l as usize]).collect();
                PauliString::from_axes(&axes)
            })
            .collect::<Result<Vec<_>>>()?;
        MeasurementSchedule::new(bases, Construction::Heuristic)?
    } else {
        start.clone()
    };
    Ok(SearchOutcome { best, initial_len: start.len(), lower_bound: floor, moves_used: used, log })
}
