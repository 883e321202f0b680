use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::norms::Exponent;
use crate::pointgen::Permutation;

/// Outcome of comparing `(1/b) sum_a sigma(a) a` with `(b-1)^2/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SigmaCondition {
    pub satisfied: bool,
    pub lhs: Ratio<i64>,
    pub rhs: Ratio<i64>,
}

pub fn check_sigma_condition(sigma: &Permutation) -> SigmaCondition {
    let b = sigma.base().get() as i64;
    let lhs = sigma.mean_product();
    let rhs = Ratio::new((b - 1) * (b - 1), 4);
    SigmaCondition { satisfied: lhs == rhs, lhs, rhs }
}

/// How many of the first `n` schedule positions use `sigma`.
#[derive(Debug, Clone, PartialEq)]
pub enum LnRule {
    AllSigma,
    AllConjugate,
    /// `ceil(n/2)`.
    Alternate,
    /// `floor(n/2)`.
    Half,
    /// `floor(n/2 + sqrt(n))`, capped at `n`.
    SqrtOffset,
    /// `floor(n/2 + c n^e)`, capped at `n`.
    Power { c: f64, e: f64 },
}

impl LnRule {
    pub fn l_n(&self, n: usize) -> usize {
        let nf = n as f64;
        let capped = |x: f64| (x.floor().max(0.0) as usize).min(n);
        match *self {
            LnRule::AllSigma => n,
            LnRule::AllConjugate => 0,
            LnRule::Alternate => n.div_ceil(2),
            LnRule::Half => n / 2,
            LnRule::SqrtOffset => capped(nf / 2.0 + nf.sqrt()),
            LnRule::Power { c, e } => capped(nf / 2.0 + c * nf.powf(e)),
        }
    }
}

impl FromStr for LnRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-s" => Ok(LnRule::AllSigma),
            "all-c" => Ok(LnRule::AllConjugate),
            "alt" => Ok(LnRule::Alternate),
            "half" => Ok(LnRule::Half),
            "sqrt" => Ok(LnRule::SqrtOffset),
            _ => {
                let body = s
                    .strip_prefix("power:")
                    .ok_or_else(|| Error::Parse(format!("unknown l_n rule '{s}'")))?;
                let (c, e) = body
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("expected power:<c>,<e>, got '{s}'")))?;
                let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{t}'")));
                Ok(LnRule::Power { c: parse(c)?, e: parse(e)? })
            }
        }
    }
}

impl fmt::Display for LnRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LnRule::AllSigma => f.write_str("all-s"),
            LnRule::AllConjugate => f.write_str("all-c"),
            LnRule::Alternate => f.write_str("alt"),
            LnRule::Half => f.write_str("half"),
            LnRule::SqrtOffset => f.write_str("sqrt"),
            LnRule::Power { c, e } => write!(f, "power:{c},{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleConditionReport {
    pub rule: LnRule,
    pub q: Exponent,
    /// `(n, |2 l_n - n| / n^{1/q})` per tested `n`.
    pub ratios: Vec<(usize, f64)>,
    pub sup: f64,
    /// Least-squares slope of `log(running sup)` against `log n`.
    pub growth_slope: f64,
    pub bounded: bool,
}

/// Slope threshold below which the running supremum counts as bounded.
pub const BOUNDED_SLOPE: f64 = 0.1;

/// Evaluates `|2 l_n - n| / n^{1/q}` on `n_values` (ascending, positive).
///
/// The ratio counts as bounded over the tested range when its running
/// supremum grows slower than `n^0.1`.
pub fn check_schedule_condition(n_values: &[usize], rule: &LnRule, q: Exponent) -> Result<ScheduleConditionReport> {
    if n_values.is_empty() || n_values.contains(&0) {
        return Err(Error::InvalidParameter("n values must be positive and non-empty".into()));
    }
    let ratios: Vec<(usize, f64)> = n_values
        .iter()
        .map(|&n| {
            let dev = (2 * rule.l_n(n) as i64 - n as i64).unsigned_abs() as f64;
            (n, dev / (n as f64).powf(q.inverse()))
        })
        .collect();
    let sup = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    let mut running = 0.0f64;
    let pts: Vec<(f64, f64)> = ratios
        .iter()
        .filter_map(|&(n, r)| {
            running = running.max(r);
            (running > 0.0).then(|| ((n as f64).ln(), running.ln()))
        })
        .collect();
    let growth_slope = if pts.len() >= 2 { least_squares(&pts).0 } else { 0.0 };
    Ok(ScheduleConditionReport {
        rule: rule.clone(),
        q,
        ratios,
        sup,
        growth_slope,
        bounded: growth_slope <= BOUNDED_SLOPE,
    })
}

/// `(slope, intercept)` of the least-squares line through `pts`.
pub(crate) fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}
