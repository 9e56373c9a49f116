//! Plumbing graphs of embedded spheres and the rewrites used on them.
//!
//! Vertices are surfaces weighted by self-intersection; an edge is one
//! transverse intersection point. Blow-ups are graph rewrites, and
//! [`PlumbingGraph::smooth`] gives the square of the sphere obtained by
//! orienting a tree so that every intersection is negative and resolving
//! all crossings. [`PlumbingGraph::oracle_square`] recomputes the same
//! number as `vᵀQv` from the intersection matrix.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::catalog::PlumbingFragment;
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub label: String,
    pub weight: i64,
    #[serde(default)]
    pub genus: u32,
    /// Exceptional sphere created by a blow-up rewrite.
    #[serde(default)]
    pub exceptional: bool,
}

impl Clone for Vertex {
    fn clone(&self) -> Self {
        Vertex {
            label: self.label.clone(),
            weight: self.weight,
            genus: self.genus,
            exceptional: self.exceptional,
        }
    }

    fn clone_from(&mut self, source: &Self) {
        self.label.clone_from(&source.label);
        self.weight = source.weight;
        self.genus = source.genus;
        self.exceptional = source.exceptional;
    }
}

/// One step in the history of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum RewriteRecord {
    Attach {
        label: String,
        at: usize,
        first_vertex: usize,
        vertices: usize,
    },
    EdgeBlowUp {
        u: usize,
        v: usize,
        exceptional: usize,
    },
    PointBlowUp {
        vertex: usize,
        exceptional: usize,
    },
}

/// Sign per vertex, `+1` or `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub signs: Vec<i8>,
}

impl Coloring {
    pub fn flipped(&self) -> Coloring {
        Coloring {
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }
}

#[derive(Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    trace: Vec<RewriteRecord>,
}

impl Clone for PlumbingGraph {
    fn clone(&self) -> Self {
        PlumbingGraph {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            trace: self.trace.clone(),
        }
    }

    // Reuses buffers; rewrite loops clone into a scratch graph.
    fn clone_from(&mut self, source: &Self) {
        self.vertices.clone_from(&source.vertices);
        self.edges.clone_from(&source.edges);
        self.trace.clone_from(&source.trace);
    }
}

#[derive(Deserialize)]
struct RawGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    trace: Vec<RewriteRecord>,
}

impl TryFrom<RawGraph> for PlumbingGraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        let mut g = PlumbingGraph {
            vertices: raw.vertices,
            edges: Vec::with_capacity(raw.edges.len()),
            trace: raw.trace,
        };
        for (u, v) in raw.edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl PlumbingGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Chain of spheres with the given weights.
    pub fn chain(weights: &[i64]) -> Self {
        let mut g = PlumbingGraph::new();
        for (i, &w) in weights.iter().enumerate() {
            let v = g.add_vertex(format!("v{i}"), w);
            if i > 0 {
                g.add_edge(v - 1, v).expect("fresh chain edge");
            }
        }
        g
    }

    pub fn add_vertex(&mut self, label: impl Into<String>, weight: i64) -> usize {
        self.add_surface(label, weight, 0)
    }

    pub fn add_surface(&mut self, label: impl Into<String>, weight: i64, genus: u32) -> usize {
        self.vertices.push(Vertex {
            label: label.into(),
            weight,
            genus,
            exceptional: false,
        });
        self.vertices.len() - 1
    }

    pub fn set_weight(&mut self, v: usize, weight: i64) -> Result<()> {
        self.check_vertex(v)?;
        self.vertices[v].weight = weight;
        Ok(())
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let e = key(u, v);
        if self.edges.contains(&e) {
            return Err(Error::DuplicateEdge(e.0, e.1));
        }
        self.edges.push(e);
        Ok(())
    }

    /// Copies `fragment` into the graph and joins its attachment vertex to
    /// `at`. Returns the index of the first new vertex.
    pub fn attach_fragment(&mut self, at: usize, fragment: &PlumbingFragment, label: &str) -> Result<usize> {
        self.check_vertex(at)?;
        let first = self.vertices.len();
        for fv in &fragment.vertices {
            self.add_surface(format!("{label}:{}", fv.label), fv.weight, fv.genus);
        }
        for &(a, b) in &fragment.edges {
            self.add_edge(first + a, first + b)?;
        }
        self.add_edge(at, first + fragment.attachment)?;
        self.trace.push(RewriteRecord::Attach {
            label: label.to_string(),
            at,
            first_vertex: first,
            vertices: fragment.vertices.len(),
        });
        Ok(first)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertices.len() {
            Ok(())
        } else {
            Err(Error::MissingVertex(v))
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn trace(&self) -> &[RewriteRecord] {
        &self.trace
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight_sum(&self) -> i64 {
        self.vertices.iter().map(|v| v.weight).sum()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&key(u, v))
    }

    /// Number of vertices carrying each weight, sorted by weight.
    pub fn weight_histogram(&self) -> Vec<(i64, usize)> {
        let mut w: Vec<i64> = self.vertices.iter().map(|v| v.weight).collect();
        w.sort_unstable();
        let mut out: Vec<(i64, usize)> = Vec::new();
        for x in w {
            match out.last_mut() {
                Some((y, c)) if *y == x => *c += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut small = [0usize; 32];
        let mut large = Vec::new();
        let parent: &mut [usize] = if n <= small.len() {
            &mut small[..n]
        } else {
            large.resize(n, 0);
            &mut large
        };
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i;
        }
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut components = n;
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra] = rb;
                components -= 1;
            }
        }
        components == 1
    }

    pub fn is_tree(&self) -> bool {
        !self.vertices.is_empty() && self.edges.len() + 1 == self.vertices.len() && self.is_connected()
    }

    /// Blows up the intersection point `u ∩ v`: the edge is replaced by a
    /// (−1)-sphere meeting both, and both weights drop by one.
    pub fn blow_up_edge(&self, u: usize, v: usize) -> Result<PlumbingGraph> {
        let mut g = self.clone();
        g.blow_up_edge_mut(u, v)?;
        Ok(g)
    }

    pub fn blow_up_edge_mut(&mut self, u: usize, v: usize) -> Result<usize> {
        let e = key(u, v);
        let pos = self
            .edges
            .iter()
            .position(|&x| x == e)
            .ok_or(Error::MissingEdge(u, v))?;
        self.edges.remove(pos);
        self.vertices[u].weight -= 1;
        self.vertices[v].weight -= 1;
        let x = self.push_exceptional();
        self.edges.push(key(u, x));
        self.edges.push(key(x, v));
        self.trace.push(RewriteRecord::EdgeBlowUp { u, v, exceptional: x });
        Ok(x)
    }

    /// Blows up a generic point of `v`: its weight drops by one and a new
    /// (−1)-leaf is attached.
    pub fn blow_up_point_on_vertex(&self, v: usize) -> Result<PlumbingGraph> {
        let mut g = self.clone();
        g.blow_up_point_mut(v)?;
        Ok(g)
    }

    pub fn blow_up_point_mut(&mut self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        self.vertices[v].weight -= 1;
        let x = self.push_exceptional();
        self.edges.push(key(v, x));
        self.trace.push(RewriteRecord::PointBlowUp {
            vertex: v,
            exceptional: x,
        });
        Ok(x)
    }

    fn push_exceptional(&mut self) -> usize {
        self.vertices.push(Vertex {
            label: String::new(),
            weight: -1,
            genus: 0,
            exceptional: true,
        });
        self.vertices.len() - 1
    }

    /// Proper 2-coloring by breadth-first search; vertex 0 gets `+1`.
    pub fn two_coloring(&self) -> Result<Coloring> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let adj = self.adjacency();
        let mut signs = vec![0i8; self.vertices.len()];
        signs[0] = 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if signs[w] == 0 {
                    signs[w] = -signs[u];
                    queue.push_back(w);
                } else if signs[w] == signs[u] {
                    return Err(Error::NotBipartite(w));
                }
            }
        }
        if signs.contains(&0) {
            return Err(Error::Disconnected);
        }
        Ok(Coloring { signs })
    }

    fn check_smoothable(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if let Some((i, v)) = self.vertices.iter().enumerate().find(|(_, v)| v.genus > 0) {
            return Err(Error::PositiveGenus {
                vertex: i,
                genus: v.genus,
            });
        }
        let connected = self.is_connected();
        if self.edges.len() + 1 != self.vertices.len() && connected {
            return Err(Error::NotATree {
                vertices: self.vertices.len(),
                edges: self.edges.len(),
            });
        }
        if !connected {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    /// Square of the sphere obtained by smoothing every intersection of the
    /// tree: `Σ weights − 2·|E|`.
    pub fn smooth(&self) -> Result<i64> {
        self.check_smoothable()?;
        Ok(self.weight_sum() - 2 * self.edges.len() as i64)
    }

    /// `vᵀQv` for the signed class `v = Σ signᵢ·[Sᵢ]`, with `Q` the
    /// intersection matrix (weights on the diagonal, 1 per edge off it).
    pub fn oracle_square(&self, coloring: &Coloring) -> Result<i64> {
        let n = self.vertices.len();
        if coloring.signs.len() != n {
            return Err(Error::InvalidColoring(format!(
                "{} signs for {} vertices",
                coloring.signs.len(),
                n
            )));
        }
        if let Some(i) = coloring.signs.iter().position(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidColoring(format!(
                "vertex {i} has sign {}",
                coloring.signs[i]
            )));
        }
        if let Some(&(a, b)) = self
            .edges
            .iter()
            .find(|&&(a, b)| coloring.signs[a] == coloring.signs[b])
        {
            return Err(Error::InvalidColoring(format!("edge ({a}, {b}) is monochromatic")));
        }
        let q = self.intersection_matrix();
        let signs: Vec<i64> = coloring.signs.iter().map(|&x| x as i64).collect();
        let mut total = 0i64;
        for (i, row) in q.chunks_exact(n).enumerate() {
            let qv: i64 = row.iter().zip(&signs).map(|(a, b)| a * b).sum();
            total += signs[i] * qv;
        }
        Ok(total)
    }

    /// Row-major intersection matrix: weights on the diagonal, one per
    /// transverse intersection point off it.
    pub fn intersection_matrix(&self) -> Vec<i64> {
        let n = self.vertices.len();
        let mut q = vec![0i64; n * n];
        for (i, v) in self.vertices.iter().enumerate() {
            q[i * n + i] = v.weight;
        }
        for &(a, b) in &self.edges {
            q[a * n + b] += 1;
            q[b * n + a] += 1;
        }
        q
    }

    /// Smoothed square, checked against the quadratic-form route.
    pub fn checked_square(&self) -> Result<i64> {
        let s = self.smooth()?;
        let o = self.oracle_square(&self.two_coloring()?)?;
        if s != o {
            return Err(Error::ReplayMismatch {
                reported: s,
                replayed: o,
            });
        }
        Ok(s)
    }

    /// Graphviz text; weights are labels and exceptional spheres are boxes.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph \"{name}\" {{");
        let _ = writeln!(out, "  node [shape=circle];");
        for (i, v) in self.vertices.iter().enumerate() {
            let style = if v.exceptional { ", shape=box, style=dashed" } else { "" };
            let tip = if v.exceptional { "exceptional" } else { v.label.as_str() };
            let _ = writeln!(
                out,
                "  {i} [label=\"{}\", tooltip=\"{}\"{style}];",
                v.weight,
                tip.replace('"', "'")
            );
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  {a} -- {b};");
        }
        out.push_str("}\n");
        out
    }
}
