//! Human-readable narratives and the fixed verification battery behind the
//! `verify-paper` subcommand.

use std::fmt::Write as _;

use serde::Serialize;

use crate::catalog::{catalog, cusp_replacement, resolve, FiberKind};
use crate::error::Result;
use crate::fibration::{
    build_full_tree, canonical_decomposition, s_closed_form, s_construction, FiberChoice, FibrationSpec,
};
use crate::plumbing::PlumbingGraph;
use crate::search::{
    best_sphere, conjecture_screen, guaranteed_square, realize, BlowupPlan, SearchOptions, SearchResult,
    EDGE_BLOWUP_DELTA, POINT_BLOWUP_DELTA,
};
use crate::sl2z::{GroupElement, MonodromyWord};

/// Running-total table for a construction.
pub fn narrate(spec: &FibrationSpec, plan: &BlowupPlan) -> Result<String> {
    let mut out = String::new();
    let mut total = -(spec.n as i64);
    let _ = writeln!(out, "fibration on E({}): {}", spec.n, spec.summary());
    let _ = writeln!(out, "  {:<34} {:>6}   total {:>6}", "section", total, total);
    for (i, (&f, &c)) in spec.fibers.iter().zip(&plan.choices).enumerate() {
        let (delta, b) = c.effect(f).ok_or(crate::Error::InvalidChoice {
            index: i,
            fiber: f,
            choice: c.name(),
        })?;
        total += delta;
        let what = if b > 0 {
            format!("{} #{i} {c} ({b} blow-up{})", f.pretty(), if b == 1 { "" } else { "s" })
        } else {
            format!("{} #{i} {c}", f.pretty())
        };
        let _ = writeln!(out, "  {:<34} {:>6}   total {:>6}", what, delta, total);
    }
    for _ in 0..plan.point_blowups {
        total += POINT_BLOWUP_DELTA;
        let _ = writeln!(
            out,
            "  {:<34} {:>6}   total {:>6}",
            "point blow-up", POINT_BLOWUP_DELTA, total
        );
    }
    for _ in 0..plan.edge_blowups {
        total += EDGE_BLOWUP_DELTA;
        let _ = writeln!(
            out,
            "  {:<34} {:>6}   total {:>6}",
            "edge blow-up", EDGE_BLOWUP_DELTA, total
        );
    }
    Ok(out)
}

pub fn describe_result(r: &SearchResult) -> Result<String> {
    let mut out = narrate(&r.spec, &r.plan)?;
    let c = conjecture_screen(r.best_square, r.b2);
    let _ = writeln!(out, "plan: {}", r.plan.describe(&r.spec));
    let _ = writeln!(out, "best square in E({})#{}: {}", r.n, r.k, r.best_square);
    let _ = writeln!(
        out,
        "b2 = {} (standard invariant), ratio = {} ≈ {:.4}, [S]² ≥ −5·b2: {}",
        r.b2,
        c.ratio,
        c.ratio.to_f64(),
        if c.satisfies_c5 { "yes" } else { "NO" }
    );
    let _ = writeln!(out, "provenance: {}", r.provenance);
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl CheckItem {
    fn eq<T: PartialEq + std::fmt::Display>(name: impl Into<String>, expected: T, actual: Result<T>) -> Self {
        match actual {
            Ok(a) => CheckItem {
                name: name.into(),
                pass: a == expected,
                expected: expected.to_string(),
                actual: a.to_string(),
            },
            Err(e) => CheckItem {
                name: name.into(),
                expected: expected.to_string(),
                actual: format!("error: {e}"),
                pass: false,
            },
        }
    }

    fn at_most(name: impl Into<String>, bound: i64, actual: Result<i64>) -> Self {
        match actual {
            Ok(a) => CheckItem {
                name: name.into(),
                expected: format!("≤ {bound}"),
                actual: a.to_string(),
                pass: a <= bound,
            },
            Err(e) => CheckItem {
                name: name.into(),
                expected: format!("≤ {bound}"),
                actual: format!("error: {e}"),
                pass: false,
            },
        }
    }

    fn flag(name: impl Into<String>, ok: Result<bool>, detail: &str) -> Self {
        let (pass, actual) = match ok {
            Ok(b) => (
                b,
                if b {
                    detail.to_string()
                } else {
                    format!("failed: {detail}")
                },
            ),
            Err(e) => (false, format!("error: {e}")),
        };
        CheckItem {
            name: name.into(),
            expected: detail.to_string(),
            actual,
            pass,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{}  {}: {} (expected {})",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.actual,
            self.expected
        )
    }
}

fn e6_cusp_spec() -> FibrationSpec {
    let mut fibers = vec![FiberKind::E8t; 7];
    fibers.push(FiberKind::IICusp);
    FibrationSpec::new(6, fibers)
}

fn e6_cusp_plan(cusp: FiberChoice, edges: u32) -> BlowupPlan {
    let mut choices = vec![FiberChoice::Attach; 7];
    choices.push(cusp);
    BlowupPlan {
        choices,
        edge_blowups: edges,
        point_blowups: 0,
    }
}

fn canonical_plus(n: u32, edges: u32, points: u32) -> Result<i64> {
    let spec = canonical_decomposition(n)?;
    let mut plan = BlowupPlan::natural(&spec);
    plan.edge_blowups = edges;
    plan.point_blowups = points;
    realize(&spec, &plan)?.checked_square()
}

fn square_of(spec: &FibrationSpec, plan: &BlowupPlan) -> Result<i64> {
    realize(spec, plan)?.checked_square()
}

/// The fixed battery: group relations, the s(n) table, worked examples,
/// blow-up identities, catalog data, search rediscovery and conjecture
/// ratios.
pub fn verification_battery() -> Vec<CheckItem> {
    let mut items = Vec::new();
    let m = |s: &str| -> Result<GroupElement> { s.parse::<MonodromyWord>()?.to_matrix() };

    items.push(CheckItem::flag(
        "relation aba = bab",
        m("aba").and_then(|x| Ok(x == m("bab")?)),
        "equal matrices",
    ));
    items.push(CheckItem::flag(
        "relation (ab)^6 = 1",
        MonodromyWord::ab_power(6).to_matrix().map(|g| g.is_identity()),
        "identity",
    ));

    items.push(CheckItem::flag(
        "catalog: euler = word length",
        Ok(catalog().iter().all(|t| t.euler as usize == t.word.len())),
        "all 8 entries",
    ));
    items.push(CheckItem::flag(
        "catalog: fragment Euler characteristic 2V − E = euler",
        Ok(catalog()
            .iter()
            .filter_map(|t| t.fragment.as_ref().map(|f| (t.euler, f)))
            .all(|(e, f)| f.euler_characteristic() == e as i64 && f.is_tree())),
        "Ẽ₈, Ẽ₇, Ẽ₆, I₀*",
    ));
    let recipe = |k: FiberKind| -> Result<String> {
        let (f, b) = resolve(k)?;
        let mut w: Vec<i64> = f.vertices.iter().map(|v| v.weight).collect();
        w.sort();
        Ok(format!("{w:?}/{}e/{}b", f.edge_count(), b))
    };
    items.push(CheckItem::eq(
        "cusp resolution",
        "[-6, -3, -2, -1]/3e/3b".to_string(),
        recipe(FiberKind::IICusp),
    ));
    items.push(CheckItem::eq(
        "III resolution",
        "[-4, -4, -2, -1]/3e/2b".to_string(),
        recipe(FiberKind::III),
    ));
    items.push(CheckItem::eq(
        "IV resolution",
        "[-3, -3, -3, -1]/3e/1b".to_string(),
        recipe(FiberKind::IV),
    ));
    let (cubic, b) = cusp_replacement();
    items.push(CheckItem::eq(
        "cuspidal cubic replacement",
        "-9/1b".to_string(),
        Ok(format!("{}/{}b", cubic.vertices[0].weight, b)),
    ));

    items.push(CheckItem::eq("E(2): s(2)", -86, s_construction(2)));
    items.push(CheckItem::eq("E(6): s(6)", -262, s_construction(6)));
    for n in 2..=20 {
        let tree = canonical_decomposition(n)
            .and_then(|s| build_full_tree(&s))
            .and_then(|t| t.graph.checked_square());
        let constructed = s_construction(n);
        items.push(CheckItem::eq(
            format!("s({n}) = tree oracle"),
            constructed.clone().unwrap_or(0),
            tree,
        ));
        if n % 5 == 0 {
            let closed = s_closed_form(n);
            let c = constructed.unwrap_or(0);
            items.push(CheckItem {
                name: format!("n={n}: construction {c}, printed formula {closed}"),
                expected: "printed formula − construction = 4".into(),
                actual: format!("difference {}", closed - c),
                pass: closed - c == num_rational::Ratio::from_integer(4),
            });
        } else {
            items.push(CheckItem::eq(
                format!("s({n}) = closed form"),
                s_closed_form(n).to_string(),
                constructed.map(|c| c.to_string()),
            ));
        }
    }

    let prop = (|| -> Result<bool> {
        for x in -6..=-1 {
            for y in -6..=-1 {
                let mut g = PlumbingGraph::chain(&[x, y]);
                for k in 0..=4i64 {
                    if g.checked_square()? != x + y - 2 - 5 * k {
                        return Ok(false);
                    }
                    let (u, v) = g.edges()[0];
                    g.blow_up_edge_mut(u, v)?;
                }
            }
        }
        Ok(true)
    })();
    items.push(CheckItem::flag(
        "two-sphere blow-up identity x+y−2−5k",
        prop,
        "x, y ∈ −6..−1, k ≤ 4",
    ));

    use FiberKind::*;
    let e2iv = FibrationSpec::new(2, vec![E8t, E8t, IV]);
    let e2iv_tree = build_full_tree(&e2iv);
    items.push(CheckItem::eq(
        "E(2)#1 via Ẽ₈+Ẽ₈+IV: tree size",
        "23 vertices: 19×(−2), 1×(−1), 3×(−3)".to_string(),
        e2iv_tree.as_ref().map_err(Clone::clone).map(|t| {
            let h = t.graph.weight_histogram();
            let count = |w| h.iter().find(|(x, _)| *x == w).map_or(0, |(_, c)| *c);
            format!(
                "{} vertices: {}×(−2), {}×(−1), {}×(−3)",
                t.graph.vertex_count(),
                count(-2),
                count(-1),
                count(-3)
            )
        }),
    ));
    items.push(CheckItem::eq(
        "E(2)#1 via Ẽ₈+Ẽ₈+IV",
        -92,
        e2iv_tree.and_then(|t| t.graph.checked_square()),
    ));
    items.push(CheckItem::eq("E(2)#1 via edge blow-up", -91, canonical_plus(2, 1, 0)));

    let spec = e6_cusp_spec();
    items.push(CheckItem::eq(
        "E(6): 7×Ẽ₈, cusp unused",
        -258,
        square_of(&spec, &e6_cusp_plan(FiberChoice::Skip, 0)),
    ));
    items.push(CheckItem::eq("E(6)#1 via tube", -266, canonical_plus(6, 0, 1)));
    items.push(CheckItem::eq("E(6)#1 via edge blow-up", -267, canonical_plus(6, 1, 0)));
    items.push(CheckItem::eq(
        "E(6)#1 via cusp replacement",
        -269,
        square_of(&spec, &e6_cusp_plan(FiberChoice::Replace, 0)),
    ));
    items.push(CheckItem::eq("E(6)#3 via edge blow-ups", -277, canonical_plus(6, 3, 0)));
    items.push(CheckItem::eq(
        "E(6)#3 via cusp resolution",
        -278,
        square_of(&spec, &e6_cusp_plan(FiberChoice::Resolve, 0)),
    ));
    items.push(CheckItem::eq(
        "E(6)#3 via cusp replacement + 2 edge blow-ups",
        -279,
        square_of(&spec, &e6_cusp_plan(FiberChoice::Replace, 2)),
    ));
    items.push(CheckItem::eq("guaranteed square E(2)#1", -91, guaranteed_square(2, 1)));
    items.push(CheckItem::eq("guaranteed square E(6)#3", -277, guaranteed_square(6, 3)));

    let opts = SearchOptions::default();
    let best = |n, k| best_sphere(n, k, &opts).map(|r| r.best_square);
    items.push(CheckItem::eq("search E(2)", -86, best(2, 0)));
    items.push(CheckItem::at_most("search E(2)#1", -92, best(2, 1)));
    items.push(CheckItem::at_most("search E(6)#1", -269, best(6, 1)));
    items.push(CheckItem::at_most("search E(6)#3", -279, best(6, 3)));

    let c = conjecture_screen(-86, 22);
    items.push(CheckItem::eq(
        "ratio E(2)",
        "-43/11 ok".to_string(),
        Ok(format!("{} {}", c.ratio, ok(c.satisfies_c5))),
    ));
    let c = conjecture_screen(-279, 73);
    items.push(CheckItem::eq(
        "ratio E(6)#3",
        "-279/73 ok".to_string(),
        Ok(format!("{} {}", c.ratio, ok(c.satisfies_c5))),
    ));
    items
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "violated"
    }
}
