//! The singular fibers used in the constructions: monodromy words, Euler
//! numbers, plumbing fragments and blow-up resolutions.
//!
//! Fragments of the fibers Ẽ₈, Ẽ₇, Ẽ₆ and I₀* are the affine Dynkin
//! diagrams with every vertex a (−2)-sphere. The cusp (II), III and IV
//! fibers are not normal-crossing; they only become trees after blowing up
//! their singular point, and those resolved trees are stored here.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sl2z::{Letter, MonodromyWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FiberKind {
    E8t,
    E7t,
    E6t,
    I0star,
    #[serde(rename = "II_cusp")]
    IICusp,
    III,
    IV,
    #[serde(rename = "I1_nodal")]
    I1Nodal,
}

impl FiberKind {
    pub const ALL: [FiberKind; 8] = [
        FiberKind::E8t,
        FiberKind::E7t,
        FiberKind::E6t,
        FiberKind::I0star,
        FiberKind::IICusp,
        FiberKind::III,
        FiberKind::IV,
        FiberKind::I1Nodal,
    ];

    /// Fibers whose words are powers of `ab`; any ordering of them has the
    /// same total monodromy.
    pub const DEFAULT_SEARCH: [FiberKind; 5] = [
        FiberKind::E8t,
        FiberKind::E6t,
        FiberKind::I0star,
        FiberKind::IV,
        FiberKind::IICusp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FiberKind::E8t => "E8t",
            FiberKind::E7t => "E7t",
            FiberKind::E6t => "E6t",
            FiberKind::I0star => "I0star",
            FiberKind::IICusp => "II_cusp",
            FiberKind::III => "III",
            FiberKind::IV => "IV",
            FiberKind::I1Nodal => "I1_nodal",
        }
    }

    /// Typeset name for human-readable reports.
    pub fn pretty(self) -> &'static str {
        match self {
            FiberKind::E8t => "Ẽ₈",
            FiberKind::E7t => "Ẽ₇",
            FiberKind::E6t => "Ẽ₆",
            FiberKind::I0star => "I₀*",
            FiberKind::IICusp => "cusp",
            FiberKind::III => "III",
            FiberKind::IV => "IV",
            FiberKind::I1Nodal => "I₁",
        }
    }

    pub fn is_extended(self) -> bool {
        !Self::DEFAULT_SEARCH.contains(&self)
    }

    pub fn word(self) -> MonodromyWord {
        match self {
            FiberKind::E8t => MonodromyWord::ab_power(5),
            FiberKind::E7t => {
                let mut w = MonodromyWord::ab_power(4);
                w.push(Letter::A);
                w
            }
            FiberKind::E6t => MonodromyWord::ab_power(4),
            FiberKind::I0star => MonodromyWord::ab_power(3),
            FiberKind::IICusp => MonodromyWord::ab_power(1),
            FiberKind::III => MonodromyWord::new(vec![Letter::A, Letter::B, Letter::A]),
            FiberKind::IV => MonodromyWord::ab_power(2),
            FiberKind::I1Nodal => MonodromyWord::new(vec![Letter::A]),
        }
    }

    /// Euler number of the fiber, equal to the length of its word.
    pub fn euler(self) -> u32 {
        match self {
            FiberKind::E8t => 10,
            FiberKind::E7t => 9,
            FiberKind::E6t => 8,
            FiberKind::I0star => 6,
            FiberKind::IICusp => 2,
            FiberKind::III => 3,
            FiberKind::IV => 4,
            FiberKind::I1Nodal => 1,
        }
    }

    pub fn fragment(self) -> Option<PlumbingFragment> {
        match self {
            // Arms of lengths (1, 2, 5), (1, 3, 3), (2, 2, 2) around a center.
            FiberKind::E8t => Some(PlumbingFragment::affine_star("E8", &[1, 2, 5], 2)),
            FiberKind::E7t => Some(PlumbingFragment::affine_star("E7", &[1, 3, 3], 1)),
            FiberKind::E6t => Some(PlumbingFragment::affine_star("E6", &[2, 2, 2], 0)),
            FiberKind::I0star => Some(PlumbingFragment::affine_star("D4", &[1, 1, 1, 1], 0)),
            _ => None,
        }
    }

    pub fn resolution(self) -> Option<Resolution> {
        let star = |name: &str, center: i64, attach: usize, leaves: &[i64], blowups: u32| {
            let mut vertices = vec![FragmentVertex::sphere(format!("{name}.c"), center)];
            let mut edges = Vec::new();
            for (i, &w) in leaves.iter().enumerate() {
                vertices.push(FragmentVertex::sphere(format!("{name}.{i}"), w));
                edges.push((0, i + 1));
            }
            Resolution {
                blowups,
                fragment: PlumbingFragment {
                    vertices,
                    edges,
                    attachment: attach,
                },
            }
        };
        match self {
            FiberKind::IICusp => {
                // The proper transform of the cusp is the (−6)-sphere.
                let vertices = vec![
                    FragmentVertex::sphere("II.fiber".into(), -6),
                    FragmentVertex::sphere("II.e3".into(), -1),
                    FragmentVertex::sphere("II.e1".into(), -2),
                    FragmentVertex::sphere("II.e2".into(), -3),
                ];
                Some(Resolution {
                    blowups: 3,
                    fragment: PlumbingFragment {
                        vertices,
                        edges: vec![(0, 1), (1, 2), (1, 3)],
                        attachment: 0,
                    },
                })
            }
            FiberKind::III => Some(star("III", -1, 1, &[-4, -4, -2], 2)),
            FiberKind::IV => Some(star("IV", -1, 1, &[-3, -3, -3], 1)),
            _ => None,
        }
    }

    pub fn info(self) -> FiberType {
        FiberType {
            name: self,
            word: self.word(),
            euler: self.euler(),
            fragment: self.fragment(),
            resolution: self.resolution(),
        }
    }
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FiberKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FiberKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownFiber(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentVertex {
    pub label: String,
    pub weight: i64,
    pub genus: u32,
}

impl FragmentVertex {
    fn sphere(label: String, weight: i64) -> Self {
        FragmentVertex {
            label,
            weight,
            genus: 0,
        }
    }
}

/// A tree of spheres that can be hung off a section at `attachment`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlumbingFragment {
    pub vertices: Vec<FragmentVertex>,
    pub edges: Vec<(usize, usize)>,
    pub attachment: usize,
}

impl PlumbingFragment {
    /// Star-shaped tree of (−2)-spheres: a center with arms of the given
    /// lengths. The attachment is the tip of arm `attach_arm`.
    fn affine_star(name: &str, arms: &[usize], attach_arm: usize) -> Self {
        let mut vertices = vec![FragmentVertex::sphere(format!("{name}.c"), -2)];
        let mut edges = Vec::new();
        let mut attachment = 0;
        for (a, &len) in arms.iter().enumerate() {
            let mut prev = 0;
            for i in 0..len {
                let idx = vertices.len();
                vertices.push(FragmentVertex::sphere(format!("{name}.{a}.{i}"), -2));
                edges.push((prev, idx));
                prev = idx;
            }
            if a == attach_arm {
                attachment = prev;
            }
        }
        PlumbingFragment {
            vertices,
            edges,
            attachment,
        }
    }

    /// Single sphere fragment.
    pub fn single(label: &str, weight: i64) -> Self {
        PlumbingFragment {
            vertices: vec![FragmentVertex::sphere(label.to_string(), weight)],
            edges: Vec::new(),
            attachment: 0,
        }
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

    /// Euler characteristic of the configuration as a space: spheres glued
    /// at single points, 2V − E.
    pub fn euler_characteristic(&self) -> i64 {
        2 * self.vertices.len() as i64 - self.edges.len() as i64
    }

    /// Change in the smoothed square when the fragment is hung off another
    /// sphere by one edge: weights, minus 2 per internal edge and 2 for the
    /// connecting edge.
    pub fn smoothing_contribution(&self) -> i64 {
        self.weight_sum() - 2 * self.edges.len() as i64 - 2
    }

    /// Connected, acyclic, spherical, no loops or repeated edges.
    pub fn is_tree(&self) -> bool {
        let v = self.vertices.len();
        if v == 0 || self.edges.len() != v - 1 || self.attachment >= v {
            return false;
        }
        let mut parent: Vec<usize> = (0..v).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            if a >= v || b >= v {
                return false;
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// Graphviz rendering with weights as labels.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph \"{name}\" {{\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let shape = if i == self.attachment {
                ", shape=doublecircle"
            } else {
                ""
            };
            out.push_str(&format!("  {i} [label=\"{}\"{shape}];\n", v.weight));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("  {a} -- {b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// The tree obtained by blowing up a non-normal-crossing fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub blowups: u32,
    pub fragment: PlumbingFragment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberType {
    pub name: FiberKind,
    pub word: MonodromyWord,
    pub euler: u32,
    pub fragment: Option<PlumbingFragment>,
    pub resolution: Option<Resolution>,
}

pub fn catalog() -> Vec<FiberType> {
    FiberKind::ALL.into_iter().map(FiberKind::info).collect()
}

pub fn resolve(kind: FiberKind) -> Result<(PlumbingFragment, u32)> {
    kind.resolution()
        .map(|r| (r.fragment, r.blowups))
        .ok_or(Error::NotResolvable(kind))
}

/// Gluing in the complement of a cuspidal cubic: a cusp fiber met once by
/// a sphere becomes a single (−9)-sphere at the cost of one blow-up.
pub fn cusp_replacement() -> (PlumbingFragment, u32) {
    (PlumbingFragment::single("II.cubic", -9), 1)
}
