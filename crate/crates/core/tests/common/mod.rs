#![allow(dead_code)]

//! Test-only oracles: tree shape enumeration, random trees, and a brute
//! force over fibrations and per-fiber choices that shares no code with
//! the pruned search.

use std::collections::BTreeSet;

use negsphere::search::realize;
use negsphere::{BlowupPlan, FiberChoice, FiberKind, FibrationSpec, PlumbingGraph};
use rand::Rng;

/// Decodes a Prüfer sequence into the edge list of a labeled tree.
pub fn prufer_edges(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&i| degree[i] == 1).unwrap();
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&i| degree[i] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

fn rooted_code(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| rooted_code(adj, w, v))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Isomorphism-invariant code of an unrooted tree: the smallest rooted
/// code over all roots.
pub fn tree_code(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    (0..n).map(|r| rooted_code(&adj, r, usize::MAX)).min().unwrap()
}

/// One edge list per isomorphism class of trees on `n` vertices, grown by
/// hanging a leaf on every vertex of every smaller shape.
pub fn tree_shapes(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 0 {
        return vec![];
    }
    let mut shapes = vec![vec![]];
    for m in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for edges in &shapes {
            for v in 0..m - 1 {
                let mut grown = edges.clone();
                grown.push((v, m - 1));
                if seen.insert(tree_code(m, &grown)) {
                    next.push(grown);
                }
            }
        }
        shapes = next;
    }
    shapes
}

pub fn graph_from(weights: &[i64], edges: &[(usize, usize)]) -> PlumbingGraph {
    let mut g = PlumbingGraph::new();
    for &w in weights {
        g.add_vertex(String::new(), w);
    }
    for &(a, b) in edges {
        g.add_edge(a, b).unwrap();
    }
    g
}

/// Uniform labeled tree (random Prüfer sequence) with weights in −6..=−1.
pub fn random_tree<R: Rng>(rng: &mut R, max_vertices: usize) -> PlumbingGraph {
    let n = rng.gen_range(1..=max_vertices);
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=-1)).collect();
    let edges = match n {
        1 => vec![],
        2 => vec![(0, 1)],
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            prufer_edges(&seq, n)
        }
    };
    graph_from(&weights, &edges)
}

/// All multisets of `parts` summing to `total`, by plain recursion.
pub fn count_multisets(total: u32, parts: &[u32]) -> u64 {
    fn go(total: u32, parts: &[u32]) -> u64 {
        match parts.split_first() {
            None => (total == 0) as u64,
            Some((&p, rest)) => (0..=total / p).map(|c| go(total - c * p, rest)).sum(),
        }
    }
    go(total, parts)
}

/// Unpruned minimum over every multiset of `kinds` with Euler sum 12n and
/// every per-fiber choice, spending leftover blow-ups as in the search.
/// Each candidate is built and smoothed as an actual tree.
pub fn brute_force_best(n: u32, k: u32, kinds: &[FiberKind]) -> Option<i64> {
    let mut best: Option<i64> = None;
    let mut fibers = Vec::new();
    multisets(12 * n, kinds, &mut fibers, &mut |fibers| {
        let spec = FibrationSpec::new(n, fibers.to_vec());
        if spec.validate().is_err() {
            return;
        }
        let mut choices = vec![FiberChoice::Skip; fibers.len()];
        choice_product(&spec, 0, &mut choices, &mut |choices| {
            let mut plan = BlowupPlan {
                choices: choices.to_vec(),
                edge_blowups: 0,
                point_blowups: 0,
            };
            let used = plan.resolution_blowups(&spec).unwrap();
            if used > k {
                return;
            }
            let leftover = k - used;
            let attached = choices.iter().any(|&c| c != FiberChoice::Skip);
            if leftover > 0 {
                if attached {
                    plan.edge_blowups = leftover;
                } else {
                    plan.point_blowups = 1;
                    plan.edge_blowups = leftover - 1;
                }
            }
            let square = realize(&spec, &plan).unwrap().smooth().unwrap();
            if best.is_none_or(|b| square < b) {
                best = Some(square);
            }
        });
    });
    best
}

fn multisets(left: u32, kinds: &[FiberKind], acc: &mut Vec<FiberKind>, f: &mut dyn FnMut(&[FiberKind])) {
    match kinds.split_first() {
        None => {
            if left == 0 {
                f(acc)
            }
        }
        Some((&k, rest)) => {
            let base = acc.len();
            for c in 0..=left / k.euler() {
                acc.truncate(base);
                acc.extend(std::iter::repeat_n(k, c as usize));
                multisets(left - c * k.euler(), rest, acc, f);
            }
            acc.truncate(base);
        }
    }
}

/// Every assignment of admissible choices, non-decreasing within runs of
/// identical fibers (identical fibers are interchangeable).
fn choice_product(spec: &FibrationSpec, i: usize, acc: &mut Vec<FiberChoice>, f: &mut dyn FnMut(&[FiberChoice])) {
    if i == spec.fibers.len() {
        f(acc);
        return;
    }
    let kind = spec.fibers[i];
    let all = [
        FiberChoice::Attach,
        FiberChoice::Resolve,
        FiberChoice::Replace,
        FiberChoice::Skip,
    ];
    for c in all {
        if c.effect(kind).is_none() {
            continue;
        }
        if i > 0 && spec.fibers[i - 1] == kind && c < acc[i - 1] {
            continue;
        }
        acc[i] = c;
        choice_product(spec, i + 1, acc, f);
    }
}

/// `vᵀQv` straight from the weights and edge list, with its own coloring:
/// Σ wᵢ + 2·Σ_edges sᵤ·sᵥ. Shares nothing with the library's oracle.
pub fn quadratic_form_square(g: &PlumbingGraph) -> i64 {
    let n = g.vertex_count();
    let mut sign = vec![0i64; n];
    sign[0] = 1;
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in g.edges() {
            if sign[a] != 0 && sign[b] == 0 {
                sign[b] = -sign[a];
                changed = true;
            } else if sign[b] != 0 && sign[a] == 0 {
                sign[a] = -sign[b];
                changed = true;
            }
        }
    }
    assert!(sign.iter().all(|&s| s != 0), "disconnected");
    let diag: i64 = g.vertices().iter().zip(&sign).map(|(v, s)| v.weight * s * s).sum();
    let off: i64 = g.edges().iter().map(|&(a, b)| 2 * sign[a] * sign[b]).sum();
    diag + off
}

/// Calls `f` on every tree with `1..=max_vertices` vertices (one per
/// isomorphism class of shapes) and every weight vector in `lo..=hi`.
/// The graph is reused between calls; only weights change within a shape.
pub fn for_each_weighted_tree(max_vertices: usize, lo: i64, hi: i64, mut f: impl FnMut(&PlumbingGraph)) -> u64 {
    let mut count = 0;
    for n in 1..=max_vertices {
        for edges in tree_shapes(n) {
            let mut w = vec![hi; n];
            let mut g = graph_from(&w, &edges);
            loop {
                f(&g);
                count += 1;
                let mut i = 0;
                while i < n {
                    w[i] -= 1;
                    if w[i] >= lo {
                        g.set_weight(i, w[i]).unwrap();
                        break;
                    }
                    w[i] = hi;
                    g.set_weight(i, hi).unwrap();
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
    }
    count
}
