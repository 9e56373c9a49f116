//! Branch-and-bound search for the most negative smoothed sphere in
//! E(n)#k(CP²-bar).
//!
//! A candidate is a multiset of singular fibers whose Euler numbers add up
//! to 12n, a choice per fiber (attach, resolve, replace, skip), and the
//! leftover blow-ups spent on edges of the tree. Because every fiber hangs
//! off the section by a single edge, the smoothed square is
//!
//! ```text
//! −n + Σ contribution(fiber, choice) − 5·(leftover edge blow-ups)
//! ```
//!
//! so partial assignments can be bounded from below: every remaining
//! letter of monodromy gains at most the best per-letter efficiency, and
//! every remaining blow-up at most 5. The winner is always replayed
//! through [`crate::fibration::build_tree`] and the plumbing rewrites and
//! checked against the quadratic-form oracle before it is returned.

use std::fmt;
use std::sync::atomic::{AtomicI64, Ordering};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::FiberKind;
use crate::error::{Error, Result};
use crate::fibration::{
    betti, build_tree, canonical_decomposition, check_degree, s_construction, FiberChoice, FibrationSpec, Provenance,
};
use crate::plumbing::{PlumbingGraph, RewriteRecord};

/// Gain of one edge blow-up on a tree with at least one edge.
pub const EDGE_BLOWUP_DELTA: i64 = -5;
/// Gain of one blow-up at a generic point of a sphere.
pub const POINT_BLOWUP_DELTA: i64 = -4;

/// Square guaranteed by blowing up edges of the canonical sphere's tree:
/// `s(n) − 5k`.
pub fn guaranteed_square(n: u32, k: u32) -> Result<i64> {
    Ok(s_construction(n)? + EDGE_BLOWUP_DELTA * k as i64)
}

/// How the k blow-ups of `X_{n,k}` are spent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlowupPlan {
    pub choices: Vec<FiberChoice>,
    pub edge_blowups: u32,
    pub point_blowups: u32,
}

impl BlowupPlan {
    /// Natural choices for every fiber, no extra blow-ups.
    pub fn natural(spec: &FibrationSpec) -> Self {
        BlowupPlan {
            choices: spec.fibers.iter().map(|&f| FiberChoice::natural(f)).collect(),
            edge_blowups: 0,
            point_blowups: 0,
        }
    }

    pub fn resolution_blowups(&self, spec: &FibrationSpec) -> Result<u32> {
        if self.choices.len() != spec.fibers.len() {
            return Err(Error::PlanLength {
                plan: self.choices.len(),
                fibers: spec.fibers.len(),
            });
        }
        let mut total = 0;
        for (i, (&f, &c)) in spec.fibers.iter().zip(&self.choices).enumerate() {
            let (_, b) = c.effect(f).ok_or(Error::InvalidChoice {
                index: i,
                fiber: f,
                choice: c.name(),
            })?;
            total += b;
        }
        Ok(total)
    }

    pub fn total_blowups(&self, spec: &FibrationSpec) -> Result<u32> {
        Ok(self.resolution_blowups(spec)? + self.edge_blowups + self.point_blowups)
    }

    /// Short description such as `Ẽ₈ ×7 attached, cusp replaced, 2 edge blow-ups`.
    pub fn describe(&self, spec: &FibrationSpec) -> String {
        let mut groups: Vec<(FiberKind, FiberChoice, usize)> = Vec::new();
        for (&f, &c) in spec.fibers.iter().zip(&self.choices) {
            match groups.iter_mut().find(|(gf, gc, _)| *gf == f && *gc == c) {
                Some(g) => g.2 += 1,
                None => groups.push((f, c, 1)),
            }
        }
        let mut parts: Vec<String> = groups
            .into_iter()
            .map(|(f, c, m)| {
                let verb = match c {
                    FiberChoice::Attach => "attached",
                    FiberChoice::Resolve => "resolved",
                    FiberChoice::Replace => "replaced",
                    FiberChoice::Skip => "skipped",
                };
                if m == 1 {
                    format!("{} {verb}", f.pretty())
                } else {
                    format!("{m}×{} {verb}", f.pretty())
                }
            })
            .collect();
        if self.point_blowups > 0 {
            parts.push(format!("{} point blow-up(s)", self.point_blowups));
        }
        if self.edge_blowups > 0 {
            parts.push(format!("{} edge blow-up(s)", self.edge_blowups));
        }
        parts.join(", ")
    }
}

/// Builds the tree for `(spec, plan)`, then spends point blow-ups on the
/// section and edge blow-ups on the first edge of the current edge list.
pub fn realize(spec: &FibrationSpec, plan: &BlowupPlan) -> Result<PlumbingGraph> {
    let built = build_tree(spec, &plan.choices)?;
    let mut g = built.graph;
    for _ in 0..plan.point_blowups {
        g.blow_up_point_mut(0)?;
    }
    for _ in 0..plan.edge_blowups {
        let (u, v) = *g.edges().first().ok_or(Error::MissingEdge(0, 0))?;
        g.blow_up_edge_mut(u, v)?;
    }
    Ok(g)
}

/// Exact rational serialized as `{num, den}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactRatio {
    pub num: i64,
    pub den: i64,
}

impl ExactRatio {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn as_ratio(self) -> Ratio<i64> {
        Ratio::new(self.num, self.den)
    }
}

impl From<Ratio<i64>> for ExactRatio {
    fn from(r: Ratio<i64>) -> Self {
        ExactRatio {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub n: u32,
    pub k: u32,
    pub best_square: i64,
    pub b2: u64,
    pub spec: FibrationSpec,
    pub plan: BlowupPlan,
    pub ratio: ExactRatio,
    pub provenance: Provenance,
    pub trace: Vec<RewriteRecord>,
}

impl SearchResult {
    /// Rebuilds the winning tree from `(spec, plan)`.
    pub fn replay(&self) -> Result<PlumbingGraph> {
        realize(&self.spec, &self.plan)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureCheck {
    pub ratio: ExactRatio,
    pub satisfies_c5: bool,
}

/// `[S]² / b₂` and whether `[S]² ≥ −5·b₂`.
pub fn conjecture_screen(square: i64, b2: u64) -> ConjectureCheck {
    let b2 = b2 as i64;
    ConjectureCheck {
        ratio: Ratio::new(square, b2).into(),
        satisfies_c5: square >= -5 * b2,
    }
}

pub fn conjecture_check(result: &SearchResult) -> ConjectureCheck {
    conjecture_screen(result.best_square, result.b2)
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub allowed: Vec<FiberKind>,
    /// Admit E7t, III and I1_nodal; their words are not powers of `ab`, so
    /// each multiset is checked in its canonical order.
    pub extended: bool,
    pub max_n: u32,
    pub max_k: u32,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            allowed: FiberKind::DEFAULT_SEARCH.to_vec(),
            extended: false,
            max_n: 30,
            max_k: 50,
            threads: None,
        }
    }
}

impl SearchOptions {
    pub fn extended() -> Self {
        SearchOptions {
            allowed: FiberKind::ALL.to_vec(),
            extended: true,
            ..Self::default()
        }
    }
}

fn checked_kinds(allowed: &[FiberKind], extended: bool) -> Result<Vec<FiberKind>> {
    if allowed.is_empty() {
        return Err(Error::EmptyAllowedSet);
    }
    if !extended {
        if let Some(&k) = allowed.iter().find(|k| k.is_extended()) {
            return Err(Error::ExtendedFiber(k));
        }
    }
    let mut kinds = allowed.to_vec();
    kinds.sort();
    kinds.dedup();
    Ok(kinds)
}

/// Every multiset of allowed fibers with Euler sum 12n that passes
/// [`FibrationSpec::validate`], each once, fibers in catalog order.
/// Specs come out with larger counts of earlier kinds first.
pub fn enumerate_specs(n: u32, allowed: &[FiberKind], extended: bool) -> Result<SpecEnumerator> {
    check_degree(n)?;
    let kinds = checked_kinds(allowed, extended)?;
    Ok(SpecEnumerator::new(n, kinds))
}

/// Streaming odometer over count vectors.
pub struct SpecEnumerator {
    n: u32,
    kinds: Vec<FiberKind>,
    counts: Vec<u32>,
    started: bool,
    done: bool,
}

impl SpecEnumerator {
    fn new(n: u32, kinds: Vec<FiberKind>) -> Self {
        let counts = vec![0; kinds.len()];
        SpecEnumerator {
            n,
            kinds,
            counts,
            started: false,
            done: false,
        }
    }

    fn total(&self) -> u32 {
        12 * self.n
    }

    /// Greedy fill of positions `from..` with what is left; returns whether
    /// the last kind absorbs the remainder exactly.
    fn fill(&mut self, from: usize) -> bool {
        let used: u32 = (0..from).map(|j| self.counts[j] * self.kinds[j].euler()).sum();
        let mut left = self.total() - used;
        let last = self.kinds.len() - 1;
        for j in from..last {
            let e = self.kinds[j].euler();
            self.counts[j] = left / e;
            left -= self.counts[j] * e;
        }
        if from <= last {
            let e = self.kinds[last].euler();
            self.counts[last] = left / e;
            left.is_multiple_of(e)
        } else {
            left == 0
        }
    }

    fn advance(&mut self) -> bool {
        let last = self.kinds.len() - 1;
        match (0..last).rev().find(|&i| self.counts[i] > 0) {
            Some(i) => {
                self.counts[i] -= 1;
                self.fill(i + 1)
            }
            None => {
                self.done = true;
                false
            }
        }
    }

    fn current(&self) -> FibrationSpec {
        let mut fibers = Vec::new();
        for (&k, &c) in self.kinds.iter().zip(&self.counts) {
            fibers.extend(std::iter::repeat_n(k, c as usize));
        }
        FibrationSpec::new(self.n, fibers)
    }
}

impl Iterator for SpecEnumerator {
    type Item = FibrationSpec;

    fn next(&mut self) -> Option<FibrationSpec> {
        loop {
            if self.done {
                return None;
            }
            let exact = if !self.started {
                self.started = true;
                self.fill(0)
            } else {
                self.advance()
            };
            if self.done {
                return None;
            }
            if exact {
                let spec = self.current();
                if spec.validate().is_ok() {
                    return Some(spec);
                }
            }
        }
    }
}

struct KindTable {
    kind: FiberKind,
    euler: u32,
    /// (choice, square delta, blow-ups), in search order.
    options: Vec<(FiberChoice, i64, u32)>,
}

/// Per-letter lower bound `p/q` on `(delta + 5·blow-ups)/euler`, over the
/// kinds from a position onward; never above 0 since skipping is free.
#[derive(Clone, Copy)]
struct Efficiency {
    p: i64,
    q: i64,
}

#[derive(Clone, Debug)]
struct Candidate {
    square: i64,
    counts: Vec<Vec<u32>>,
    leftover: u32,
}

struct Problem<'a> {
    n: u32,
    k: u32,
    extended: bool,
    table: Vec<KindTable>,
    suffix_eff: Vec<Efficiency>,
    shared_best: &'a AtomicI64,
}

impl Problem<'_> {
    fn leftover_value(&self, leftover: u32, has_edges: bool) -> i64 {
        match (leftover, has_edges) {
            (0, _) => 0,
            (l, true) => EDGE_BLOWUP_DELTA * l as i64,
            (l, false) => POINT_BLOWUP_DELTA + EDGE_BLOWUP_DELTA * (l as i64 - 1),
        }
    }

    /// `true` if no completion of the partial state can beat `best` (ties
    /// included, they lose the tie-break) or the shared best (ties excluded).
    fn prunable(&self, pos: usize, value: i64, letters_left: u32, bu_used: u32, best: Option<i64>) -> bool {
        let eff = self.suffix_eff[pos];
        let bu_left = (self.k - bu_used) as i64;
        // bound = value + eff·letters + (−5)·bu_left, scaled by eff.q > 0.
        let scaled = (value + EDGE_BLOWUP_DELTA * bu_left) * eff.q + eff.p * letters_left as i64;
        if let Some(b) = best {
            if scaled >= b * eff.q {
                return true;
            }
        }
        scaled > self.shared_best.load(Ordering::Relaxed) * eff.q
    }

    fn spec_of(&self, counts: &[Vec<u32>]) -> FibrationSpec {
        let mut fibers = Vec::new();
        for (t, c) in self.table.iter().zip(counts) {
            let m: u32 = c.iter().sum();
            fibers.extend(std::iter::repeat_n(t.kind, m as usize));
        }
        FibrationSpec::new(self.n, fibers)
    }

    fn plan_of(&self, counts: &[Vec<u32>], leftover: u32) -> BlowupPlan {
        let mut choices = Vec::new();
        let mut attached = false;
        for (t, c) in self.table.iter().zip(counts) {
            for (&(choice, _, _), &m) in t.options.iter().zip(c) {
                choices.extend(std::iter::repeat_n(choice, m as usize));
                attached |= m > 0 && choice != FiberChoice::Skip;
            }
        }
        let (point, edge) = match (leftover, attached) {
            (0, _) => (0, 0),
            (l, true) => (0, l),
            (l, false) => (1, l - 1),
        };
        BlowupPlan {
            choices,
            edge_blowups: edge,
            point_blowups: point,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs_kind(
        &self,
        pos: usize,
        letters_left: u32,
        bu_used: u32,
        value: i64,
        has_edges: bool,
        counts: &mut Vec<Vec<u32>>,
        best: &mut Option<Candidate>,
    ) {
        if pos == self.table.len() {
            if letters_left != 0 {
                return;
            }
            let leftover = self.k - bu_used;
            let square = value + self.leftover_value(leftover, has_edges);
            if best.as_ref().is_some_and(|b| square >= b.square) {
                return;
            }
            if self.extended && self.spec_of(counts).validate().is_err() {
                return;
            }
            self.shared_best.fetch_min(square, Ordering::Relaxed);
            *best = Some(Candidate {
                square,
                counts: counts.clone(),
                leftover,
            });
            return;
        }
        if self.prunable(pos, value, letters_left, bu_used, best.as_ref().map(|b| b.square)) {
            return;
        }
        let e = self.table[pos].euler;
        let max = letters_left / e;
        let counts_for: Vec<u32> = if pos + 1 == self.table.len() {
            if !letters_left.is_multiple_of(e) {
                return;
            }
            vec![max]
        } else {
            (0..=max).rev().collect()
        };
        for m in counts_for {
            self.dfs_option(pos, 0, m, letters_left - m * e, bu_used, value, has_edges, counts, best);
        }
    }

    /// Distributes `remaining` fibers of kind `pos` over options `opt..`.
    #[allow(clippy::too_many_arguments)]
    fn dfs_option(
        &self,
        pos: usize,
        opt: usize,
        remaining: u32,
        letters_after: u32,
        bu_used: u32,
        value: i64,
        has_edges: bool,
        counts: &mut Vec<Vec<u32>>,
        best: &mut Option<Candidate>,
    ) {
        let t = &self.table[pos];
        let e = t.euler;
        if self.prunable(
            pos,
            value,
            letters_after + remaining * e,
            bu_used,
            best.as_ref().map(|b| b.square),
        ) {
            return;
        }
        let (choice, delta, bu) = t.options[opt];
        let last = opt + 1 == t.options.len();
        let bu_room = self.k - bu_used;
        let max_here = bu_room.checked_div(bu).map_or(remaining, |q| remaining.min(q));
        let range: Vec<u32> = if last {
            if max_here < remaining {
                return;
            }
            vec![remaining]
        } else {
            (0..=max_here).rev().collect()
        };
        for m in range {
            counts[pos][opt] = m;
            let v = value + delta * m as i64;
            let b = bu_used + bu * m;
            let edges = has_edges || (m > 0 && choice != FiberChoice::Skip);
            if last {
                self.dfs_kind(pos + 1, letters_after, b, v, edges, counts, best);
            } else {
                self.dfs_option(pos, opt + 1, remaining - m, letters_after, b, v, edges, counts, best);
            }
        }
        counts[pos][opt] = 0;
    }
}

fn build_table(kinds: &[FiberKind]) -> Vec<KindTable> {
    kinds
        .iter()
        .map(|&kind| KindTable {
            kind,
            euler: kind.euler(),
            options: FiberChoice::options(kind)
                .iter()
                .map(|&c| {
                    let (d, b) = c.effect(kind).expect("listed options are valid");
                    (c, d, b)
                })
                .collect(),
        })
        .collect()
}

fn suffix_efficiencies(table: &[KindTable]) -> Vec<Efficiency> {
    let mut out = vec![Efficiency { p: 0, q: 1 }; table.len() + 1];
    for i in (0..table.len()).rev() {
        let mut best = Ratio::new(out[i + 1].p, out[i + 1].q);
        for &(_, d, b) in &table[i].options {
            let r = Ratio::new(d - EDGE_BLOWUP_DELTA * b as i64, table[i].euler as i64);
            if r < best {
                best = r;
            }
        }
        out[i] = Efficiency {
            p: *best.numer(),
            q: *best.denom(),
        };
    }
    out
}

/// Whether `(spec, plan)` is one of the explicitly worked constructions:
/// the canonical decomposition with extra blow-ups, Ẽ₈+Ẽ₈+IV on E(2), or
/// seven Ẽ₈ and a cusp on E(6).
pub fn is_worked_construction(spec: &FibrationSpec, plan: &BlowupPlan) -> bool {
    use FiberKind::*;
    let mut fibers = spec.fibers.clone();
    fibers.sort();
    let attached_fragments = spec
        .fibers
        .iter()
        .zip(&plan.choices)
        .all(|(f, &c)| f.fragment().is_none() || c == FiberChoice::Attach);
    if !attached_fragments || plan.choices.len() != spec.fibers.len() {
        return false;
    }
    if let Ok(canon) = canonical_decomposition(spec.n) {
        let mut c = canon.fibers;
        c.sort();
        if c == fibers {
            return true;
        }
    }
    let choice_of = |k: FiberKind| -> Option<FiberChoice> {
        spec.fibers
            .iter()
            .zip(&plan.choices)
            .find(|(f, _)| **f == k)
            .map(|(_, &c)| c)
    };
    if spec.n == 2 && fibers == [E8t, E8t, IV] {
        return choice_of(IV) == Some(FiberChoice::Resolve);
    }
    let mut e6_cusp = vec![E8t; 7];
    e6_cusp.push(IICusp);
    spec.n == 6 && fibers == e6_cusp
}

/// Most negative smoothed sphere over the search space for `X_{n,k}`.
pub fn best_sphere(n: u32, k: u32, options: &SearchOptions) -> Result<SearchResult> {
    check_degree(n)?;
    if n > options.max_n {
        return Err(Error::LimitExceeded {
            what: "n",
            value: n,
            limit: options.max_n,
        });
    }
    if k > options.max_k {
        return Err(Error::LimitExceeded {
            what: "k",
            value: k,
            limit: options.max_k,
        });
    }
    let kinds = checked_kinds(&options.allowed, options.extended)?;
    let table = build_table(&kinds);
    let suffix_eff = suffix_efficiencies(&table);
    let shared = AtomicI64::new(i64::MAX / 64);
    let problem = Problem {
        n,
        k,
        extended: options.extended,
        table,
        suffix_eff,
        shared_best: &shared,
    };

    let letters = 12 * n;
    let e0 = problem.table[0].euler;
    let top: Vec<u32> = if problem.table.len() == 1 {
        if !letters.is_multiple_of(e0) {
            vec![]
        } else {
            vec![letters / e0]
        }
    } else {
        (0..=letters / e0).rev().collect()
    };
    let run = |m: u32| -> Option<Candidate> {
        let mut counts: Vec<Vec<u32>> = problem.table.iter().map(|t| vec![0; t.options.len()]).collect();
        let mut best = None;
        problem.dfs_option(0, 0, m, letters - m * e0, 0, -(n as i64), false, &mut counts, &mut best);
        best
    };
    let branch_results: Vec<Option<Candidate>> = match options.threads {
        Some(1) => top.iter().map(|&m| run(m)).collect(),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map(|pool| pool.install(|| top.par_iter().map(|&m| run(m)).collect()))
            .unwrap_or_else(|_| top.iter().map(|&m| run(m)).collect()),
        None => top.par_iter().map(|&m| run(m)).collect(),
    };
    // Branches are in search order; the first strict minimum wins ties.
    let mut winner: Option<Candidate> = None;
    for c in branch_results.into_iter().flatten() {
        if winner.as_ref().is_none_or(|w| c.square < w.square) {
            winner = Some(c);
        }
    }
    let winner = winner.ok_or(Error::NoSolution { n, k })?;

    let mut spec = problem.spec_of(&winner.counts);
    let plan = problem.plan_of(&winner.counts, winner.leftover);
    let provenance = if is_worked_construction(&spec, &plan) {
        Provenance::PaperVerified
    } else {
        Provenance::AssumedRealizable
    };
    spec.provenance = provenance;

    debug_assert_eq!(plan.total_blowups(&spec)?, k);
    let graph = realize(&spec, &plan)?;
    let replayed = graph.checked_square()?;
    if replayed != winner.square {
        return Err(Error::ReplayMismatch {
            reported: winner.square,
            replayed,
        });
    }
    let b2 = betti(n, k)?.b2;
    Ok(SearchResult {
        n,
        k,
        best_square: winner.square,
        b2,
        ratio: Ratio::new(winner.square, b2 as i64).into(),
        spec,
        plan,
        provenance,
        trace: graph.trace().to_vec(),
    })
}
