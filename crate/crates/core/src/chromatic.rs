//! Exact k-colorability and chromatic numbers.
//!
//! The search is DSATUR-ordered backtracking: pick the uncolored vertex with
//! the most distinct neighbor colors (ties: larger degree, then smaller
//! index) and try colors `0..=used` only, so colorings that differ by a
//! permutation of colors are explored once. An `Unsat` answer means that
//! reduced tree was exhausted.
//!
//! Before searching, [`forced_equalities`] merges vertices that share a
//! color in every k-coloring: if the common neighborhood of `u` and `v`
//! needs `k - 1` colors, both must take the one color left. Checking that
//! condition is itself an exact search on the small common neighborhood.
//! When an adjacent pair is forced equal, no k-coloring exists.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::udgraph::{validate_coloring, Coloring, UnitDistanceGraph};

#[derive(Clone, Debug, PartialEq)]
pub struct SolveBudget {
    pub time_limit: Duration,
    pub max_decisions: Option<u64>,
}

impl SolveBudget {
    pub fn seconds(secs: f64) -> Self {
        SolveBudget {
            time_limit: Duration::from_secs_f64(secs),
            max_decisions: None,
        }
    }

    pub fn with_decision_limit(mut self, limit: u64) -> Self {
        self.max_decisions = Some(limit);
        self
    }
}

impl Default for SolveBudget {
    fn default() -> Self {
        SolveBudget::seconds(600.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveStats {
    pub decisions: u64,
    pub backtracks: u64,
    /// Vertex pairs merged by forced-equality reduction.
    pub merges: u64,
    pub elapsed: Duration,
}

impl SolveStats {
    fn absorb(&mut self, other: &SolveStats) {
        self.decisions += other.decisions;
        self.backtracks += other.backtracks;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Sat(Coloring),
    Unsat,
    Timeout,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub k: usize,
    pub verdict: Verdict,
    pub stats: SolveStats,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self.verdict, Verdict::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self.verdict, Verdict::Unsat)
    }

    pub fn coloring(&self) -> Option<&Coloring> {
        match &self.verdict {
            Verdict::Sat(c) => Some(c),
            _ => None,
        }
    }

    pub fn verdict_name(&self) -> &'static str {
        match self.verdict {
            Verdict::Sat(_) => "SAT",
            Verdict::Unsat => "UNSAT",
            Verdict::Timeout => "TIMEOUT",
        }
    }
}

const UNCOLORED: usize = usize::MAX;

#[derive(Debug, PartialEq, Eq)]
enum Step {
    Found,
    Exhausted,
    Stopped,
}

struct Solver<'a> {
    adj: &'a [Vec<usize>],
    degree: Vec<usize>,
    k: usize,
    color: Vec<usize>,
    // neighbor_colors[v * k + c] = number of neighbors of v colored c
    neighbor_colors: Vec<u32>,
    saturation: Vec<usize>,
    color_use: Vec<usize>,
    used: usize,
    colored: usize,
    stats: SolveStats,
    start: Instant,
    budget: &'a SolveBudget,
    stop: Option<&'a AtomicBool>,
}

impl<'a> Solver<'a> {
    fn new(adj: &'a [Vec<usize>], k: usize, budget: &'a SolveBudget, stop: Option<&'a AtomicBool>) -> Self {
        let n = adj.len();
        Solver {
            adj,
            degree: adj.iter().map(Vec::len).collect(),
            k,
            color: vec![UNCOLORED; n],
            neighbor_colors: vec![0; n * k],
            saturation: vec![0; n],
            color_use: vec![0; k],
            used: 0,
            colored: 0,
            stats: SolveStats::default(),
            start: Instant::now(),
            budget,
            stop,
        }
    }

    fn select(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for v in 0..self.adj.len() {
            if self.color[v] != UNCOLORED {
                continue;
            }
            best = match best {
                None => Some(v),
                Some(b) => {
                    let key_v = (self.saturation[v], self.degree[v]);
                    let key_b = (self.saturation[b], self.degree[b]);
                    if key_v > key_b {
                        Some(v)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    }

    fn choices(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let limit = (self.used + 1).min(self.k);
        (0..limit).filter(move |&c| self.neighbor_colors[v * self.k + c] == 0)
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = c;
        self.colored += 1;
        self.color_use[c] += 1;
        if c == self.used {
            self.used += 1;
        }
        for &u in &self.adj[v] {
            let slot = &mut self.neighbor_colors[u * self.k + c];
            if *slot == 0 {
                self.saturation[u] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.color[v];
        self.color[v] = UNCOLORED;
        self.colored -= 1;
        self.color_use[c] -= 1;
        while self.used > 0 && self.color_use[self.used - 1] == 0 {
            self.used -= 1;
        }
        for &u in &self.adj[v] {
            let slot = &mut self.neighbor_colors[u * self.k + c];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[u] -= 1;
            }
        }
    }

    fn out_of_budget(&self) -> bool {
        if let Some(limit) = self.budget.max_decisions {
            if self.stats.decisions > limit {
                return true;
            }
        }
        if self.stats.decisions.is_multiple_of(1024) {
            if self.start.elapsed() > self.budget.time_limit {
                return true;
            }
            if let Some(stop) = self.stop {
                if stop.load(Ordering::Relaxed) {
                    return true;
                }
            }
        }
        false
    }

    fn search(&mut self) -> Step {
        let Some(v) = self.select() else {
            return Step::Found;
        };
        let options: Vec<usize> = self.choices(v).collect();
        for c in options {
            self.stats.decisions += 1;
            if self.out_of_budget() {
                return Step::Stopped;
            }
            self.assign(v, c);
            match self.search() {
                Step::Exhausted => self.unassign(v),
                other => return other,
            }
        }
        self.stats.backtracks += 1;
        Step::Exhausted
    }

    /// All assignment prefixes of the given depth reachable in the reduced tree.
    fn frontier(&mut self, depth: usize, prefix: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) -> bool {
        if depth == 0 {
            out.push(prefix.clone());
            return false;
        }
        let Some(v) = self.select() else {
            return true;
        };
        let options: Vec<usize> = self.choices(v).collect();
        for c in options {
            self.assign(v, c);
            prefix.push((v, c));
            let complete = self.frontier(depth - 1, prefix, out);
            prefix.pop();
            if complete {
                return true;
            }
            self.unassign(v);
        }
        false
    }

    fn coloring(&self) -> Coloring {
        Coloring::new(self.color.clone())
    }
}

fn finish(g_adj: &[Vec<usize>], k: usize, step: Step, solver_coloring: Option<Coloring>, stats: SolveStats) -> SolveOutcome {
    let verdict = match step {
        Step::Found => {
            let c = solver_coloring.expect("found implies a coloring");
            assert!(
                g_adj.iter().enumerate().all(|(v, ns)| ns.iter().all(|&u| c.colors[u] != c.colors[v])),
                "solver produced an improper coloring"
            );
            Verdict::Sat(c)
        }
        Step::Exhausted => Verdict::Unsat,
        Step::Stopped => Verdict::Timeout,
    };
    SolveOutcome { k, verdict, stats }
}

/// Decide whether `g` admits a proper coloring with `k` colors.
pub fn is_k_colorable(g: &UnitDistanceGraph, k: usize, budget: &SolveBudget) -> SolveOutcome {
    solve_adjacency(&g.adjacency(), k, budget)
}

/// Backtracking search alone, without forced-equality reduction.
pub fn is_k_colorable_plain(g: &UnitDistanceGraph, k: usize, budget: &SolveBudget) -> SolveOutcome {
    search_adjacency(&g.adjacency(), k, budget)
}

pub fn solve_adjacency(adj: &[Vec<usize>], k: usize, budget: &SolveBudget) -> SolveOutcome {
    solve_reduced(adj, k, budget, 1)
}

fn search_adjacency(adj: &[Vec<usize>], k: usize, budget: &SolveBudget) -> SolveOutcome {
    if k == 0 {
        let verdict = if adj.is_empty() {
            Verdict::Sat(Coloring::new(Vec::new()))
        } else {
            Verdict::Unsat
        };
        return SolveOutcome { k, verdict, stats: SolveStats::default() };
    }
    let mut solver = Solver::new(adj, k, budget, None);
    let step = solver.search();
    let mut stats = solver.stats.clone();
    stats.elapsed = solver.start.elapsed();
    let coloring = (step == Step::Found).then(|| solver.coloring());
    finish(adj, k, step, coloring, stats)
}

/// A pair forced to share a color, with the common neighborhood (original
/// vertex indices of the class representatives) that needs `k - 1` colors.
#[derive(Clone, Debug, PartialEq)]
pub struct ForcedMerge {
    pub keep: usize,
    pub absorb: usize,
    pub common: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub k: usize,
    /// Representative of each vertex's class.
    pub class_of: Vec<usize>,
    pub merges: Vec<ForcedMerge>,
    /// An adjacent pair forced equal; proves that no k-coloring exists.
    pub contradiction: Option<ForcedMerge>,
}

impl Reduction {
    /// Quotient adjacency and the index of each original vertex in it.
    pub fn quotient(&self, adj: &[Vec<usize>]) -> (Vec<Vec<usize>>, Vec<usize>) {
        let reps: BTreeSet<usize> = self.class_of.iter().copied().collect();
        let mut index = vec![usize::MAX; adj.len()];
        for (i, &r) in reps.iter().enumerate() {
            index[r] = i;
        }
        let mut sets = vec![BTreeSet::new(); reps.len()];
        for (v, ns) in adj.iter().enumerate() {
            let a = index[self.class_of[v]];
            for &u in ns {
                let b = index[self.class_of[u]];
                if a != b {
                    sets[a].insert(b);
                }
            }
        }
        let map = self.class_of.iter().map(|&r| index[r]).collect();
        (sets.into_iter().map(|s| s.into_iter().collect()).collect(), map)
    }
}

/// Merges, until nothing changes, every pair whose common neighborhood is
/// not `(k-2)`-colorable. Sub-searches that exceed their small decision
/// limit are treated as inconclusive, so the result is always sound.
pub fn forced_equalities(adj: &[Vec<usize>], k: usize, budget: &SolveBudget) -> Reduction {
    let n = adj.len();
    let start = Instant::now();
    let mut nbr: Vec<BTreeSet<usize>> = adj.iter().map(|ns| ns.iter().copied().collect()).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut class_of: Vec<usize> = (0..n).collect();
    let mut alive = vec![true; n];
    let mut merges = Vec::new();
    let sub_budget = SolveBudget::seconds(budget.time_limit.as_secs_f64()).with_decision_limit(200_000);
    let needs = k.saturating_sub(1);
    let mut changed = k >= 2;
    while changed {
        changed = false;
        for u in 0..n {
            if !alive[u] {
                continue;
            }
            if start.elapsed() >= budget.time_limit {
                changed = false;
                break;
            }
            let cands: BTreeSet<usize> = nbr[u]
                .iter()
                .flat_map(|&w| nbr[w].iter().copied())
                .filter(|&v| v > u)
                .collect();
            for v in cands {
                if !alive[v] || !alive[u] {
                    continue;
                }
                let common: Vec<usize> = nbr[u].intersection(&nbr[v]).copied().collect();
                if common.len() < needs {
                    continue;
                }
                let pos = |x: usize| common.binary_search(&x).ok();
                let sub: Vec<Vec<usize>> = common
                    .iter()
                    .map(|&c| nbr[c].iter().filter_map(|&x| pos(x)).collect())
                    .collect();
                if !search_adjacency(&sub, k - 2, &sub_budget).is_unsat() {
                    continue;
                }
                let record = ForcedMerge { keep: u, absorb: v, common: common.clone() };
                if nbr[u].contains(&v) {
                    return Reduction { k, class_of, merges, contradiction: Some(record) };
                }
                let vn = std::mem::take(&mut nbr[v]);
                for &w in &vn {
                    nbr[w].remove(&v);
                    nbr[w].insert(u);
                    nbr[u].insert(w);
                }
                alive[v] = false;
                let moved = std::mem::take(&mut members[v]);
                for &x in &moved {
                    class_of[x] = u;
                }
                members[u].extend(moved);
                merges.push(record);
                changed = true;
            }
        }
    }
    Reduction { k, class_of, merges, contradiction: None }
}

fn solve_reduced(adj: &[Vec<usize>], k: usize, budget: &SolveBudget, threads: usize) -> SolveOutcome {
    let start = Instant::now();
    let reduction = forced_equalities(adj, k, budget);
    let merges = reduction.merges.len() as u64 + u64::from(reduction.contradiction.is_some());
    if reduction.contradiction.is_some() {
        let stats = SolveStats { merges, elapsed: start.elapsed(), ..SolveStats::default() };
        return SolveOutcome { k, verdict: Verdict::Unsat, stats };
    }
    let remaining = budget.time_limit.saturating_sub(start.elapsed());
    let inner_budget = SolveBudget { time_limit: remaining, max_decisions: budget.max_decisions };
    let (qadj, map) = reduction.quotient(adj);
    let inner = if threads <= 1 {
        search_adjacency(&qadj, k, &inner_budget)
    } else {
        search_parallel(&qadj, k, &inner_budget, threads)
    };
    let mut stats = inner.stats;
    stats.merges = merges;
    stats.elapsed = start.elapsed();
    match inner.verdict {
        Verdict::Sat(c) => {
            let colors = map.iter().map(|&i| c.colors[i]).collect();
            finish(adj, k, Step::Found, Some(Coloring::new(colors)), stats)
        }
        Verdict::Unsat => finish(adj, k, Step::Exhausted, None, stats),
        Verdict::Timeout => finish(adj, k, Step::Stopped, None, stats),
    }
}

/// Same answer as [`is_k_colorable`]; the reduced tree is split into
/// disjoint prefixes handed to `threads` workers. A `Sat` coloring may
/// differ from the single-threaded one.
pub fn is_k_colorable_parallel(g: &UnitDistanceGraph, k: usize, budget: &SolveBudget, threads: usize) -> SolveOutcome {
    solve_reduced(&g.adjacency(), k, budget, threads)
}

fn search_parallel(adj: &[Vec<usize>], k: usize, budget: &SolveBudget, threads: usize) -> SolveOutcome {
    let adj = adj.to_vec();
    if threads <= 1 || k == 0 || adj.is_empty() {
        return search_adjacency(&adj, k, budget);
    }
    let start = Instant::now();
    let mut prefixes = Vec::new();
    let mut depth = 1;
    loop {
        let mut probe = Solver::new(&adj, k, budget, None);
        prefixes.clear();
        if probe.frontier(depth, &mut Vec::new(), &mut prefixes) {
            let coloring = probe.coloring();
            let stats = SolveStats { elapsed: start.elapsed(), ..SolveStats::default() };
            return finish(&adj, k, Step::Found, Some(coloring), stats);
        }
        if prefixes.len() >= 4 * threads || depth >= adj.len() || prefixes.is_empty() {
            break;
        }
        depth += 1;
    }
    if prefixes.is_empty() {
        let stats = SolveStats { elapsed: start.elapsed(), ..SolveStats::default() };
        return finish(&adj, k, Step::Exhausted, None, stats);
    }

    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let found: Mutex<Option<Coloring>> = Mutex::new(None);
    let timed_out = AtomicBool::new(false);
    let totals: Mutex<SolveStats> = Mutex::new(SolveStats::default());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= prefixes.len() || stop.load(Ordering::SeqCst) {
                    break;
                }
                let mut solver = Solver::new(&adj, k, budget, Some(&stop));
                solver.start = start;
                for &(v, c) in &prefixes[i] {
                    solver.assign(v, c);
                }
                let step = solver.search();
                totals.lock().unwrap().absorb(&solver.stats);
                match step {
                    Step::Found => {
                        *found.lock().unwrap() = Some(solver.coloring());
                        stop.store(true, Ordering::SeqCst);
                    }
                    Step::Stopped => {
                        if !stop.load(Ordering::SeqCst) {
                            timed_out.store(true, Ordering::SeqCst);
                        }
                        stop.store(true, Ordering::SeqCst);
                    }
                    Step::Exhausted => {}
                }
            });
        }
    });
    let mut stats = totals.into_inner().unwrap();
    stats.elapsed = start.elapsed();
    let found = found.into_inner().unwrap();
    let step = if found.is_some() {
        Step::Found
    } else if timed_out.load(Ordering::SeqCst) {
        Step::Stopped
    } else {
        Step::Exhausted
    };
    finish(&adj, k, step, found, stats)
}

/// Greedily grown clique: from every start vertex, repeatedly add the
/// common neighbor of largest degree. Returns the largest found.
pub fn greedy_clique(g: &UnitDistanceGraph) -> Vec<usize> {
    let adj = g.adjacency();
    let n = adj.len();
    let mut is_adj = vec![Vec::new(); n];
    for (v, ns) in adj.iter().enumerate() {
        let mut s = ns.clone();
        s.sort_unstable();
        is_adj[v] = s;
    }
    let connected = |a: usize, b: usize| is_adj[a].binary_search(&b).is_ok();
    let mut best: Vec<usize> = Vec::new();
    for start in 0..n {
        let mut clique = vec![start];
        let mut candidates: Vec<usize> = is_adj[start].clone();
        while !candidates.is_empty() {
            let &next = candidates
                .iter()
                .max_by_key(|&&u| (candidates.iter().filter(|&&w| connected(u, w)).count(), adj[u].len(), std::cmp::Reverse(u)))
                .unwrap();
            clique.push(next);
            candidates.retain(|&w| w != next && connected(next, w));
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

pub fn clique_lower_bound(g: &UnitDistanceGraph) -> usize {
    greedy_clique(g).len()
}

/// Plain DSATUR greedy coloring (no backtracking).
pub fn dsatur_greedy(g: &UnitDistanceGraph) -> Coloring {
    let adj = g.adjacency();
    let n = adj.len();
    let budget = SolveBudget::default();
    // With k = n colors every choice succeeds, so the first branch is the greedy run.
    let mut solver = Solver::new(&adj, n.max(1), &budget, None);
    while let Some(v) = solver.select() {
        let c = solver.choices(v).next().expect("n colors always suffice");
        solver.assign(v, c);
    }
    solver.coloring()
}

#[derive(Clone, Debug, PartialEq)]
pub enum LowerBoundCertificate {
    /// Fewer than two vertices, or no edges.
    Trivial,
    /// A clique of size chi.
    Clique(Vec<usize>),
    /// Exhaustive search at `chi - 1` colors.
    Exhausted(SolveOutcome),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChromaticResult {
    pub chi: usize,
    pub coloring: Coloring,
    pub clique_bound: usize,
    pub greedy_bound: usize,
    pub lower_certificate: LowerBoundCertificate,
    pub outcomes: Vec<SolveOutcome>,
}

/// Smallest `k` with a proper coloring, bracketed by a greedy clique and
/// a DSATUR greedy coloring.
pub fn chromatic_number(g: &UnitDistanceGraph, budget: &SolveBudget) -> Result<ChromaticResult> {
    let n = g.vertex_count();
    if n == 0 || g.edge_count() == 0 {
        return Ok(ChromaticResult {
            chi: n.min(1),
            coloring: Coloring::new(vec![0; n]),
            clique_bound: n.min(1),
            greedy_bound: n.min(1),
            lower_certificate: LowerBoundCertificate::Trivial,
            outcomes: Vec::new(),
        });
    }
    let clique = greedy_clique(g);
    let lo = clique.len();
    let greedy = dsatur_greedy(g);
    let hi = greedy.color_count();
    debug_assert!(validate_coloring(g, &greedy).unwrap());
    let mut outcomes: Vec<SolveOutcome> = Vec::new();
    let mut answer: Option<(usize, Coloring)> = None;
    for k in lo..hi {
        let out = is_k_colorable(g, k, budget);
        match &out.verdict {
            Verdict::Sat(c) => {
                answer = Some((k, c.clone()));
                outcomes.push(out);
                break;
            }
            Verdict::Unsat => outcomes.push(out),
            Verdict::Timeout => return Err(Error::SolveTimeout { lower: k, upper: hi }),
        }
    }
    let (chi, coloring) = answer.unwrap_or((hi, greedy));
    let lower_certificate = if chi == lo {
        LowerBoundCertificate::Clique(clique)
    } else {
        let last_unsat = outcomes
            .iter()
            .rev()
            .find(|o| o.k == chi - 1)
            .cloned()
            .expect("every k in [lo, chi) was refuted");
        LowerBoundCertificate::Exhausted(last_unsat)
    };
    Ok(ChromaticResult {
        chi,
        coloring,
        clique_bound: lo,
        greedy_bound: hi,
        lower_certificate,
        outcomes,
    })
}

/// Exhaustive chromatic number over restricted-growth color strings.
/// Test oracle; limited to 12 vertices.
pub fn brute_force_chromatic(g: &UnitDistanceGraph) -> Result<usize> {
    let n = g.vertex_count();
    if n > 12 {
        return Err(Error::TooManyVertices(n));
    }
    if n == 0 {
        return Ok(0);
    }
    let edges = g.edges();
    let mut colors = vec![0usize; n];
    for k in 1..=n {
        if any_proper_rgs(edges, &mut colors, 1, 0, k) {
            return Ok(k);
        }
    }
    Ok(n)
}

// Enumerates every restricted-growth string (vertex 0 has color 0, each
// later vertex uses at most one color beyond the largest seen so far) and
// checks properness only at the leaves.
fn any_proper_rgs(edges: &[(usize, usize)], colors: &mut [usize], i: usize, max_seen: usize, k: usize) -> bool {
    if i == colors.len() {
        return edges.iter().all(|&(a, b)| colors[a] != colors[b]);
    }
    for c in 0..=(max_seen + 1).min(k - 1) {
        colors[i] = c;
        if any_proper_rgs(edges, colors, i + 1, max_seen.max(c), k) {
            return true;
        }
    }
    false
}
