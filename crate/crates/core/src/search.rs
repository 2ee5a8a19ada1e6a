//! Exhaustive Ramsey search over colorings of the t-chains of `B_n`.
//!
//! Chains are colored in canonical id order with colors tried in ascending
//! order. After each assignment only copies that use the newly colored chain
//! are looked for, since every earlier prefix was already copy-free. Under
//! symmetry reduction a partial coloring is abandoned once some group element
//! maps it to a lexicographically smaller one; the lex-least good coloring is
//! always its own orbit leader, so the first good coloring found is the same
//! with and without reduction.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::coloring::{ChainColoring, HostFamily, RamseyInstance};
use crate::embedding::{find_copy, find_monochromatic_copy, Embedding, Engine, Plan};
use crate::error::{Error, Result};
use crate::lattice::{chain_count_formula, BooleanLattice, ChainTable};
use crate::symmetry::{canonical_symmetry_group, chain_permutations, GroupDescriptor, MAX_SYMMETRY_DIMENSION};

use num_traits::ToPrimitive;

/// Node and wall-clock limits; whichever is hit first ends the search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            max_time: None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub budget: Budget,
    pub symmetry: bool,
    pub jobs: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: Budget::unlimited(),
            symmetry: true,
            jobs: 1,
        }
    }
}

impl SearchOptions {
    pub fn plain() -> Self {
        SearchOptions {
            symmetry: false,
            ..SearchOptions::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchStats {
    /// Number of (chain, color) assignments tried.
    pub nodes: u64,
    pub elapsed: Duration,
    /// Group actually used for pruning.
    pub group: GroupDescriptor,
}

#[derive(Clone, Debug)]
pub enum RamseyVerdict {
    /// Every coloring contains a required monochromatic copy.
    Ramsey(SearchStats),
    /// A good coloring exists; the one returned is lex-least unless the
    /// budget ran out in a parallel search after it was found.
    NotRamsey(ChainColoring, SearchStats),
    Inconclusive(SearchStats),
}

impl RamseyVerdict {
    pub fn stats(&self) -> &SearchStats {
        match self {
            RamseyVerdict::Ramsey(s) | RamseyVerdict::Inconclusive(s) => s,
            RamseyVerdict::NotRamsey(_, s) => s,
        }
    }

    pub fn is_ramsey(&self) -> bool {
        matches!(self, RamseyVerdict::Ramsey(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringVerdict {
    Good,
    /// Color `color` contains the monochromatic copy `witness` of its target.
    Bad { color: u8, witness: Embedding },
}

impl ColoringVerdict {
    pub fn is_good(&self) -> bool {
        matches!(self, ColoringVerdict::Good)
    }
}

fn require_boolean(instance: &RamseyInstance) -> Result<()> {
    match instance.family() {
        HostFamily::Boolean => Ok(()),
        HostFamily::Chain => Err(Error::param(
            "only the Boolean host family is implemented",
        )),
    }
}

/// Checks every color class against its target; the first witness in color
/// order is reported.
pub fn verify_coloring(
    instance: &RamseyInstance,
    host_n: u32,
    coloring: &ChainColoring,
) -> Result<ColoringVerdict> {
    require_boolean(instance)?;
    if coloring.host_n() != host_n || coloring.t() != instance.t() || coloring.k() != instance.k() {
        return Err(Error::param(format!(
            "coloring shape (n={}, t={}, k={}) does not match (n={host_n}, t={}, k={})",
            coloring.host_n(),
            coloring.t(),
            coloring.k(),
            instance.t(),
            instance.k()
        )));
    }
    let host = BooleanLattice::with_cap(host_n, 31)?;
    for (i, target) in instance.targets().iter().enumerate() {
        let color = i as u8 + 1;
        if let Some(witness) = find_monochromatic_copy(&host, target, instance.mode(), coloring, color)? {
            return Ok(ColoringVerdict::Bad { color, witness });
        }
    }
    Ok(ColoringVerdict::Good)
}

struct Problem {
    n: u32,
    t: usize,
    k: u8,
    mode: crate::embedding::EmbeddingMode,
    h: usize,
    table: Option<ChainTable>,
    /// `detectors[c-1]`: one plan per chain of the target, that chain pinned first.
    detectors: Vec<Vec<Plan>>,
    perms: Vec<Vec<u32>>,
    group: GroupDescriptor,
}

impl Problem {
    fn new(instance: &RamseyInstance, n: u32, symmetry: bool) -> Result<Problem> {
        let t = instance.t();
        let h = chain_count_formula(n, t as u32)?
            .to_usize()
            .ok_or_else(|| Error::Infeasible(format!("too many {t}-chains in B_{n}")))?;
        let table = if h == 0 { None } else { Some(ChainTable::new(n, t)?) };
        let detectors = instance
            .targets()
            .iter()
            .map(|p| {
                let chains = p.t_chains(t);
                chains
                    .iter()
                    .map(|pinned| Plan::new(p, pinned, &chains))
                    .collect()
            })
            .collect();
        let mut group = GroupDescriptor::trivial();
        let mut perms = Vec::new();
        if symmetry && n <= MAX_SYMMETRY_DIMENSION {
            if let Some(table) = &table {
                group = canonical_symmetry_group(instance, n);
                perms = chain_permutations(group, table);
            }
        }
        Ok(Problem {
            n,
            t,
            k: instance.k(),
            mode: instance.mode(),
            h,
            table,
            detectors,
            perms,
            group,
        })
    }

    /// Does color `c` contain a copy through chain `pos`?
    fn has_copy(&self, colors: &[u8], pos: usize, c: u8) -> bool {
        let mut stop = |_: &[u32]| std::ops::ControlFlow::Break(());
        let plans = &self.detectors[c as usize - 1];
        if self.t == 1 {
            let pin = [pos as u32];
            plans.iter().any(|plan| {
                Engine::new(
                    plan,
                    self.n,
                    self.mode,
                    |m: u32| colors[m as usize] == c,
                    |_: &[u32]| true,
                )
                .run(&pin, &mut stop)
            })
        } else {
            let table = self.table.as_ref().expect("positions exist");
            let pin = table.chain(pos);
            plans.iter().any(|plan| {
                Engine::new(
                    plan,
                    self.n,
                    self.mode,
                    |_: u32| true,
                    |sets: &[u32]| table.id_of(sets).is_some_and(|id| colors[id] == c),
                )
                .run(pin, &mut stop)
            })
        }
    }

    /// True if some group element maps the prefix `colors[..=pos]` to a
    /// lexicographically smaller coloring.
    fn lex_pruned(&self, colors: &[u8], pos: usize) -> bool {
        'group: for perm in &self.perms {
            for q in 0..=pos {
                let a = perm[q] as usize;
                if a > pos {
                    continue 'group;
                }
                match colors[a].cmp(&colors[q]) {
                    std::cmp::Ordering::Less => return true,
                    std::cmp::Ordering::Greater => continue 'group,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        false
    }

    fn accepts(&self, colors: &[u8], pos: usize, c: u8) -> bool {
        !self.lex_pruned(colors, pos) && !self.has_copy(colors, pos, c)
    }
}

struct Shared {
    nodes: AtomicU64,
    stopped: AtomicBool,
    start: Instant,
    budget: Budget,
    /// Lowest prefix index with a known good completion.
    best: AtomicUsize,
}

impl Shared {
    fn new(budget: Budget) -> Self {
        Shared {
            nodes: AtomicU64::new(0),
            stopped: AtomicBool::new(false),
            start: Instant::now(),
            budget,
            best: AtomicUsize::new(usize::MAX),
        }
    }

    fn add(&self, nodes: u64) -> bool {
        let total = self.nodes.fetch_add(nodes, Ordering::Relaxed) + nodes;
        let over_nodes = self.budget.max_nodes.is_some_and(|m| total > m);
        let over_time = self.budget.max_time.is_some_and(|m| self.start.elapsed() > m);
        if over_nodes || over_time {
            self.stopped.store(true, Ordering::Relaxed);
        }
        !self.stopped.load(Ordering::Relaxed)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Outcome {
    Found,
    Exhausted,
    Stopped,
}

const FLUSH: u64 = 1024;

struct Worker<'a> {
    problem: &'a Problem,
    shared: &'a Shared,
    colors: Vec<u8>,
    local: u64,
    every: u64,
    index: usize,
}

impl<'a> Worker<'a> {
    fn new(problem: &'a Problem, shared: &'a Shared) -> Self {
        Worker {
            problem,
            shared,
            colors: vec![0; problem.h],
            local: 0,
            every: shared.budget.max_nodes.map_or(FLUSH, |m| m.clamp(1, FLUSH)),
            index: 0,
        }
    }

    fn tick(&mut self) -> bool {
        self.local += 1;
        if self.local < self.every {
            return true;
        }
        self.flush()
    }

    fn flush(&mut self) -> bool {
        let ok = self.shared.add(self.local);
        self.local = 0;
        ok && self.shared.best.load(Ordering::Relaxed) > self.index
    }

    fn dfs(&mut self, pos: usize) -> Outcome {
        if pos == self.problem.h {
            return Outcome::Found;
        }
        for c in 1..=self.problem.k {
            if !self.tick() {
                return Outcome::Stopped;
            }
            self.colors[pos] = c;
            if self.problem.accepts(&self.colors, pos, c) {
                match self.dfs(pos + 1) {
                    Outcome::Exhausted => {}
                    other => return other,
                }
            }
        }
        self.colors[pos] = 0;
        Outcome::Exhausted
    }
}

/// Surviving prefixes of the first `depth` positions, in lex order.
fn prefixes(problem: &Problem, shared: &Shared, target: usize) -> (Vec<Vec<u8>>, usize, bool) {
    let mut level: Vec<Vec<u8>> = vec![vec![0; problem.h]];
    let mut depth = 0;
    let mut nodes = 0u64;
    while depth + 1 < problem.h && level.len() < target && !level.is_empty() {
        let mut next = Vec::new();
        for prefix in &level {
            for c in 1..=problem.k {
                nodes += 1;
                let mut colors = prefix.clone();
                colors[depth] = c;
                if problem.accepts(&colors, depth, c) {
                    next.push(colors);
                }
            }
        }
        level = next;
        depth += 1;
    }
    let ok = shared.add(nodes);
    (level, depth, ok)
}

fn solve(problem: &Problem, options: &SearchOptions) -> (Option<Vec<u8>>, Outcome, u64) {
    let shared = Shared::new(options.budget);
    if options.jobs <= 1 || problem.h < 2 {
        let mut w = Worker::new(problem, &shared);
        let out = w.dfs(0);
        w.flush();
        let colors = (out == Outcome::Found).then(|| w.colors.clone());
        return (colors, out, shared.nodes.load(Ordering::Relaxed));
    }
    let (prefixes, depth, ok) = prefixes(problem, &shared, options.jobs * 16);
    if !ok {
        return (None, Outcome::Stopped, shared.nodes.load(Ordering::Relaxed));
    }
    let next = AtomicUsize::new(0);
    let found: Mutex<Vec<(usize, Vec<u8>)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..options.jobs {
            scope.spawn(|| {
                let mut w = Worker::new(problem, &shared);
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= prefixes.len() || i > shared.best.load(Ordering::Relaxed) {
                        break;
                    }
                    w.index = i;
                    w.colors.copy_from_slice(&prefixes[i]);
                    match w.dfs(depth) {
                        Outcome::Found => {
                            shared.best.fetch_min(i, Ordering::Relaxed);
                            found.lock().expect("poisoned").push((i, w.colors.clone()));
                        }
                        Outcome::Exhausted => {}
                        Outcome::Stopped => {
                            if shared.stopped.load(Ordering::Relaxed) {
                                break;
                            }
                        }
                    }
                }
                w.flush();
            });
        }
    });
    let nodes = shared.nodes.load(Ordering::Relaxed);
    let best = found.into_inner().expect("poisoned").into_iter().min_by_key(|(i, _)| *i);
    match best {
        Some((_, colors)) => (Some(colors), Outcome::Found, nodes),
        None if shared.stopped.load(Ordering::Relaxed) => (None, Outcome::Stopped, nodes),
        None => (None, Outcome::Exhausted, nodes),
    }
}

/// Decides whether every coloring of the t-chains of `B_{host_n}` contains a
/// monochromatic copy of some `P_i` in color `i`.
pub fn is_ramsey_at(instance: &RamseyInstance, host_n: u32, options: &SearchOptions) -> Result<RamseyVerdict> {
    require_boolean(instance)?;
    let start = Instant::now();
    let host = BooleanLattice::with_cap(host_n, 31)?;
    let problem = Problem::new(instance, host_n, options.symmetry)?;
    let stats = |nodes| SearchStats {
        nodes,
        elapsed: start.elapsed(),
        group: problem.group,
    };
    // A target without t-chains is monochromatic in any coloring once it embeds.
    if instance.t() >= 2
        && instance
            .targets()
            .iter()
            .any(|p| p.t_chains(instance.t()).is_empty() && find_copy(&host, p, instance.mode(), None).is_some())
    {
        return Ok(RamseyVerdict::Ramsey(stats(0)));
    }
    let (colors, outcome, nodes) = solve(&problem, options);
    Ok(match (outcome, colors) {
        (Outcome::Found, Some(colors)) => {
            let coloring = ChainColoring::new(host_n, problem.t, problem.k, colors)?;
            RamseyVerdict::NotRamsey(coloring, stats(nodes))
        }
        (Outcome::Exhausted, _) => RamseyVerdict::Ramsey(stats(nodes)),
        _ => RamseyVerdict::Inconclusive(stats(nodes)),
    })
}

#[derive(Clone, Debug)]
pub enum RamseyNumber {
    /// `R = value`: ramsey at `value`, with the good coloring found at
    /// `value − 1` (absent when `value = 0`).
    Exact {
        value: u32,
        lower: Option<ChainColoring>,
        upper: SearchStats,
    },
    /// Not ramsey at any host up to `n_max`, so `R > n_max`.
    AboveCap {
        n_max: u32,
        lower: Option<ChainColoring>,
    },
    /// The budget ran out at `host_n`; `R > host_n − 1` is all that is known.
    Inconclusive {
        host_n: u32,
        lower: Option<ChainColoring>,
        stats: SearchStats,
    },
}

/// Scans `B_0, B_1, …, B_{n_max}` for the first ramsey host.
pub fn compute_ramsey_number(
    instance: &RamseyInstance,
    n_max: u32,
    options: &SearchOptions,
) -> Result<RamseyNumber> {
    let mut lower = None;
    for n in 0..=n_max {
        match is_ramsey_at(instance, n, options)? {
            RamseyVerdict::Ramsey(upper) => {
                return Ok(RamseyNumber::Exact {
                    value: n,
                    lower,
                    upper,
                })
            }
            RamseyVerdict::NotRamsey(coloring, _) => lower = Some(coloring),
            RamseyVerdict::Inconclusive(stats) => {
                return Ok(RamseyNumber::Inconclusive {
                    host_n: n,
                    lower,
                    stats,
                })
            }
        }
    }
    Ok(RamseyNumber::AboveCap { n_max, lower })
}
