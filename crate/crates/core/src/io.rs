//! Text formats for point sets, coefficients, norms and check reports.
//!
//! JSON floats use the shortest round-trip representation. CSV floats are
//! written with a fixed number of significant digits (17 by default).

use serde_json::{json, Value};

use crate::bounds::{BoundCheck, GrowthReport, RuleSummary, ScalingFit};
use crate::coeffs::HaarCoefficient;
use crate::error::{Error, Result};
use crate::haar::HaarIndex;
use crate::norms::NormReport;
use crate::pointgen::{Base, Coord, Label, PointMultiset, RationalPoint};

pub const DEFAULT_DIGITS: usize = 17;

/// `x` in positional notation with `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `{dim, base, n, label, points}` where every point is the flat list
/// `[num_1, exp_1, ..., num_s, exp_s]` of coordinates `num / b^exp`.
pub fn points_to_json(points: &PointMultiset) -> String {
    let pts: Vec<Value> = points
        .points()
        .iter()
        .map(|p| Value::from(p.coords().iter().flat_map(|c| [c.num(), c.exp() as u64]).collect::<Vec<u64>>()))
        .collect();
    json!({
        "dim": points.dim(),
        "base": points.base().get(),
        "n": points.param(),
        "label": points.label().as_str(),
        "points": pts,
    })
    .to_string()
}

pub fn points_from_json(text: &str) -> Result<PointMultiset> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing field '{k}'")));
    let as_u64 = |x: &Value, what: &str| x.as_u64().ok_or_else(|| Error::Parse(format!("'{what}' must be an unsigned integer")));
    let dim = as_u64(field("dim")?, "dim")? as usize;
    let base = Base::new(as_u64(field("base")?, "base")? as u32)?;
    let param = as_u64(field("n")?, "n")?;
    let label: Label = field("label")?.as_str().ok_or_else(|| Error::Parse("'label' must be a string".into()))?.parse()?;
    let raw = field("points")?.as_array().ok_or_else(|| Error::Parse("'points' must be an array".into()))?;
    let mut pts = Vec::with_capacity(raw.len());
    for p in raw {
        let flat = p.as_array().ok_or_else(|| Error::Parse("point must be an array".into()))?;
        if flat.len() != 2 * dim {
            return Err(Error::DimensionMismatch { expected: 2 * dim, actual: flat.len() });
        }
        let coords = flat
            .chunks(2)
            .map(|c| Coord::new(base, as_u64(&c[0], "num")?, as_u64(&c[1], "exp")? as u32))
            .collect::<Result<Vec<_>>>()?;
        pts.push(RationalPoint::new(coords));
    }
    PointMultiset::new(base, dim, label, param, pts)
}

/// Header `x1[,x2]` and one row of decimal coordinates per point.
pub fn points_to_csv(points: &PointMultiset, digits: usize) -> String {
    let base = points.base();
    let mut out = (1..=points.dim()).map(|i| format!("x{i}")).collect::<Vec<_>>().join(",");
    out.push('\n');
    for p in points.points() {
        let row: Vec<String> = p.to_f64(base).into_iter().map(|x| format_sig(x, digits)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn index_json(idx: HaarIndex) -> Value {
    match idx {
        HaarIndex::One(i) => json!({"j": i.j, "m": i.m, "l": i.l}),
        HaarIndex::Two(i) => json!({"j": [i.0.j, i.1.j], "m": [i.0.m, i.1.m], "l": [i.0.l, i.1.l]}),
    }
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut a, b) {
        a.extend(b);
    }
    a
}

/// `{j, m, l, re, im}` with `j`, `m`, `l` arrays in two dimensions.
pub fn coefficient_json_line(c: &HaarCoefficient) -> String {
    merge(index_json(c.index), json!({"re": c.value.re, "im": c.value.im})).to_string()
}

pub fn norm_report_json(report: &NormReport) -> String {
    serde_json::to_string(report).expect("norm reports serialize")
}

pub fn check_json_line(c: &BoundCheck) -> String {
    merge(
        json!({"rule": c.rule.as_str(), "abs": c.abs, "bound": c.bound, "slack": c.slack, "pass": c.pass}),
        index_json(c.index),
    )
    .to_string()
}

pub fn summary_csv(rows: &[RuleSummary], digits: usize) -> String {
    let mut out = String::from("rule,total,failures,worst_slack\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.rule, r.total, r.failures, format_sig(r.worst_slack, digits)));
    }
    out
}

/// Rows `family,b,n,N,p,q,r,value,scaled`.
pub fn scaling_csv(fit: &ScalingFit, digits: usize) -> String {
    use crate::bounds::NormSpec;
    let (p, q, r) = match fit.norm {
        NormSpec::Lp(p) => (p.to_string(), String::new(), "0".to_string()),
        NormSpec::Besov { params, .. } => (params.p.to_string(), params.q.to_string(), params.r.to_string()),
    };
    let mut out = String::from("family,b,n,N,p,q,r,value,scaled\n");
    for pt in &fit.points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fit.family,
            fit.base,
            pt.n,
            pt.count,
            p,
            q,
            r,
            format_sig(pt.value, digits),
            format_sig(pt.scaled, digits)
        ));
    }
    out
}

pub fn scaling_fit_json(fit: &ScalingFit) -> String {
    json!({
        "family": fit.family,
        "base": fit.base.get(),
        "slope": fit.slope,
        "intercept": fit.intercept,
        "residuals": fit.residuals,
        "sizes": fit.points.iter().map(|p| p.count).collect::<Vec<_>>(),
    })
    .to_string()
}

/// Rows `n,N,scaled,scaled_closed,per_n,sym_scaled,sym_per_n`.
pub fn growth_csv(report: &GrowthReport, digits: usize) -> String {
    let mut out = String::from("n,N,scaled,scaled_closed,per_n,sym_scaled,sym_per_n\n");
    for r in &report.rows {
        let f = |x: f64| format_sig(x, digits);
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n,
            r.count,
            f(r.scaled),
            f(r.scaled_closed),
            f(r.per_n),
            f(r.sym_scaled),
            f(r.sym_per_n)
        ));
    }
    out
}
