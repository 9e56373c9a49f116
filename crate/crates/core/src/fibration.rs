//! Elliptic fibrations on E(n): factorization checks, the decomposition
//! behind the canonical sphere, and assembly of plumbing trees around a
//! section.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::catalog::{cusp_replacement, resolve, FiberKind};
use crate::error::{Error, Result};
use crate::plumbing::PlumbingGraph;
use crate::sl2z::MonodromyWord;

/// Whether a fibration (or a whole construction) is one that is known to
/// exist, or only passes the monodromy and Euler checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    PaperVerified,
    AssumedRealizable,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::PaperVerified => "paper_verified",
            Provenance::AssumedRealizable => "assumed_realizable",
        })
    }
}

fn default_provenance() -> Provenance {
    Provenance::AssumedRealizable
}

/// An ordered list of singular fibers on E(n).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FibrationSpec {
    pub n: u32,
    pub fibers: Vec<FiberKind>,
    #[serde(default = "default_provenance")]
    pub provenance: Provenance,
}

impl FibrationSpec {
    pub fn new(n: u32, fibers: Vec<FiberKind>) -> Self {
        FibrationSpec {
            n,
            fibers,
            provenance: Provenance::AssumedRealizable,
        }
    }

    pub fn euler_sum(&self) -> u64 {
        self.fibers.iter().map(|f| f.euler() as u64).sum()
    }

    pub fn total_word(&self) -> MonodromyWord {
        let mut w = MonodromyWord::empty();
        for f in &self.fibers {
            w.extend(&f.word());
        }
        w
    }

    /// Checks that the Euler numbers add up to 12n and that the fiber
    /// monodromies multiply to the identity in the given order.
    pub fn validate(&self) -> Result<()> {
        check_degree(self.n)?;
        let expected = 12 * self.n as u64;
        let sum = self.euler_sum();
        if sum != expected {
            return Err(Error::EulerMismatch { sum, expected });
        }
        let total = self
            .fibers
            .iter()
            .try_fold(crate::sl2z::GroupElement::IDENTITY, |acc, f| {
                acc.compose(&f.word().to_matrix()?)
            })?;
        if !total.is_identity() {
            let [[p, q], [r, s]] = total.entries();
            return Err(Error::NonTrivialMonodromy(p, q, r, s));
        }
        Ok(())
    }

    /// Fibers with their multiplicities, in catalog order.
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        for k in FiberKind::ALL {
            let c = self.fibers.iter().filter(|&&f| f == k).count();
            match c {
                0 => {}
                1 => parts.push(k.pretty().to_string()),
                _ => parts.push(format!("{c}×{}", k.pretty())),
            }
        }
        if parts.is_empty() {
            "(no singular fibers)".into()
        } else {
            parts.join(" + ")
        }
    }
}

pub fn validate(spec: &FibrationSpec) -> Result<()> {
    spec.validate()
}

pub(crate) fn check_degree(n: u32) -> Result<()> {
    if n < 2 {
        Err(Error::DegreeTooSmall(n))
    } else {
        Ok(())
    }
}

/// How a fiber enters the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberChoice {
    /// Hang its normal-crossing fragment off the section.
    Attach,
    /// Blow up its singular point and hang the resolved tree.
    Resolve,
    /// Cusp only: glue in the cuspidal cubic, giving one (−9)-sphere.
    Replace,
    /// Leave it out of the tree.
    Skip,
}

impl FiberChoice {
    pub fn name(self) -> &'static str {
        match self {
            FiberChoice::Attach => "attach",
            FiberChoice::Resolve => "resolve",
            FiberChoice::Replace => "replace",
            FiberChoice::Skip => "skip",
        }
    }

    /// The default for a fiber: attach fragments, resolve II/III/IV, skip I₁.
    pub fn natural(kind: FiberKind) -> FiberChoice {
        if kind.fragment().is_some() {
            FiberChoice::Attach
        } else if kind.resolution().is_some() {
            FiberChoice::Resolve
        } else {
            FiberChoice::Skip
        }
    }

    /// Admissible choices for a fiber kind, best-first for search order.
    pub fn options(kind: FiberKind) -> &'static [FiberChoice] {
        match kind {
            FiberKind::E8t | FiberKind::E7t | FiberKind::E6t | FiberKind::I0star => {
                &[FiberChoice::Attach, FiberChoice::Skip]
            }
            FiberKind::IICusp => &[FiberChoice::Replace, FiberChoice::Resolve, FiberChoice::Skip],
            FiberKind::III | FiberKind::IV => &[FiberChoice::Resolve, FiberChoice::Skip],
            FiberKind::I1Nodal => &[FiberChoice::Skip],
        }
    }

    /// Effect of the choice on the smoothed square and the blow-ups it
    /// consumes, or `None` if the choice is not allowed for `kind`.
    pub fn effect(self, kind: FiberKind) -> Option<(i64, u32)> {
        match (self, kind) {
            (FiberChoice::Skip, _) => Some((0, 0)),
            (FiberChoice::Attach, k) => k.fragment().map(|f| (f.smoothing_contribution(), 0)),
            (FiberChoice::Resolve, k) => k.resolution().map(|r| (r.fragment.smoothing_contribution(), r.blowups)),
            (FiberChoice::Replace, FiberKind::IICusp) => {
                let (f, b) = cusp_replacement();
                Some((f.smoothing_contribution(), b))
            }
            (FiberChoice::Replace, _) => None,
        }
    }
}

impl fmt::Display for FiberChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A plumbing tree together with the blow-ups spent to produce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltTree {
    pub graph: PlumbingGraph,
    pub blowups_used: u32,
}

/// Section vertex (weight −n, index 0) with each chosen fiber hung off it.
pub fn build_tree(spec: &FibrationSpec, choices: &[FiberChoice]) -> Result<BuiltTree> {
    check_degree(spec.n)?;
    if choices.len() != spec.fibers.len() {
        return Err(Error::PlanLength {
            plan: choices.len(),
            fibers: spec.fibers.len(),
        });
    }
    let mut g = PlumbingGraph::new();
    let section = g.add_vertex("section", -(spec.n as i64));
    let mut blowups = 0;
    for (i, (&kind, &choice)) in spec.fibers.iter().zip(choices).enumerate() {
        let invalid = || Error::InvalidChoice {
            index: i,
            fiber: kind,
            choice: choice.name(),
        };
        let label = format!("{}#{i}", kind.name());
        match choice {
            FiberChoice::Skip => {}
            FiberChoice::Attach => {
                let f = kind.fragment().ok_or_else(invalid)?;
                g.attach_fragment(section, &f, &label)?;
            }
            FiberChoice::Resolve => {
                let (f, b) = resolve(kind).map_err(|_| invalid())?;
                g.attach_fragment(section, &f, &label)?;
                blowups += b;
            }
            FiberChoice::Replace => {
                if kind != FiberKind::IICusp {
                    return Err(invalid());
                }
                let (f, b) = cusp_replacement();
                g.attach_fragment(section, &f, &label)?;
                blowups += b;
            }
        }
    }
    Ok(BuiltTree {
        graph: g,
        blowups_used: blowups,
    })
}

/// Every fiber entered with its natural choice.
pub fn build_full_tree(spec: &FibrationSpec) -> Result<BuiltTree> {
    let choices: Vec<FiberChoice> = spec.fibers.iter().map(|&k| FiberChoice::natural(k)).collect();
    build_tree(spec, &choices)
}

/// The decomposition of `(ab)^{6n}` used for the canonical sphere: with
/// `n = 5q + r`, `6q` copies of Ẽ₈ plus a tail depending on `r`.
pub fn canonical_decomposition(n: u32) -> Result<FibrationSpec> {
    use FiberKind::*;
    check_degree(n)?;
    let (q, r) = (n / 5, n % 5);
    let mut fibers = vec![E8t; 6 * q as usize];
    fibers.extend_from_slice(match r {
        0 => &[][..],
        1 => &[I0star, I0star],
        2 => &[E8t, E6t, I0star],
        3 => &[E8t, E8t, E8t, I0star],
        _ => &[E8t, E8t, E8t, E8t, E6t],
    });
    Ok(FibrationSpec {
        n,
        fibers,
        provenance: Provenance::PaperVerified,
    })
}

/// Square of the canonical sphere in E(n): `−(221n − 4t)/5` with
/// `t = 5 − (n mod 5)`, or `t = 0` when 5 divides n.
pub fn s_construction(n: u32) -> Result<i64> {
    check_degree(n)?;
    let r = (n % 5) as i64;
    let t = if r == 0 { 0 } else { 5 - r };
    let num = 221 * n as i64 - 4 * t;
    debug_assert_eq!(num % 5, 0);
    Ok(-num / 5)
}

/// The closed form `−44.2·n + 0.8·(5 − r)`, `r = n mod 5`, evaluated
/// exactly. Agrees with [`s_construction`] unless 5 divides n, where it is
/// larger by 4.
pub fn s_closed_form(n: u32) -> Ratio<i64> {
    let n = n as i64;
    let r = n % 5;
    Ratio::new(-221, 5) * n + Ratio::new(4, 5) * (5 - r)
}

/// Betti numbers of E(n) blown up k times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientSurface {
    pub n: u32,
    pub k: u32,
    pub b2: u64,
    pub b2plus: u64,
}

pub fn betti(n: u32, k: u32) -> Result<AmbientSurface> {
    check_degree(n)?;
    Ok(AmbientSurface {
        n,
        k,
        b2: 12 * n as u64 - 2 + k as u64,
        b2plus: 2 * n as u64 - 1,
    })
}
