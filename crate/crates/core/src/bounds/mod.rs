//! Numerical checks of the Haar coefficient bounds, the optimality
//! conditions on `sigma` and the schedule, and rate scaling studies.

mod conditions;
mod scaling;

use std::fmt;

use rayon::prelude::*;

pub use conditions::{check_schedule_condition, check_sigma_condition, LnRule, ScheduleConditionReport, SigmaCondition};
pub use scaling::{
    first_coeff_growth_check, scaling_study, Family, GrowthReport, GrowthRow, NormSpec, ScalingFit, ScalingPoint,
};

use crate::coeffs::{coeff_first_2d_closed, coeff_first_2d_sym_closed, HaarCoefficient, LocalDiscrepancy};
use crate::error::Result;
use crate::haar::{ComplexValue, HaarIndex, HaarIndex1D, HaarIndex2D, RootTable};
use crate::pointgen::{
    hammersley_scrambled, hammersley_symmetrized, van_der_corput, vdc_reflected, vdc_symmetrized, Base,
    PointMultiset, ScrambleSchedule,
};

/// Absolute tolerance on slack.
pub const SLACK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// `|mu^sym| <= 26 / (N b^j |w^l - 1|^2)` below the plateau.
    Coro1,
    Coro1Plateau,
    /// `|mu^phi| <= 9 / (N b^j |w^l - 1|^2)`.
    PhiHalf,
    PhiHalfPlateau,
    /// `|mu^{1-phi}| <= 15 / (N b^j |w^l - 1|^2)`.
    ReflectedHalf,
    ReflectedHalfPlateau,
    /// `|mu_{-1,0,1}| <= 1/(2N)`.
    First1d,
    /// Closed form of `mu_{(-1,-1)}` for a scrambled Hammersley set.
    Haar1,
    Case1,
    Case1Exact,
    /// One check per level pair: number of coefficients off the plateau
    /// value against `b^n`.
    Case2Exceptions,
    /// As [`Rule::Case2Exceptions`], counting distinct supports `I_{j,m}`
    /// instead of coefficients.
    Case2Boxes,
    Case3,
    Case4,
    Case5,
    /// `mu_{(-1,-1)} = 1/Ñ + 1/Ñ^2` for a symmetrized Hammersley set.
    SymFirst,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Coro1 => "coro1",
            Rule::Coro1Plateau => "coro1-plateau",
            Rule::PhiHalf => "phi-half",
            Rule::PhiHalfPlateau => "phi-half-plateau",
            Rule::ReflectedHalf => "reflected-half",
            Rule::ReflectedHalfPlateau => "reflected-half-plateau",
            Rule::First1d => "first-1d",
            Rule::Haar1 => "haar1",
            Rule::Case1 => "case1",
            Rule::Case1Exact => "case1-exact",
            Rule::Case2Exceptions => "case2-exceptions",
            Rule::Case2Boxes => "case2-boxes",
            Rule::Case3 => "case3",
            Rule::Case4 => "case4",
            Rule::Case5 => "case5",
            Rule::SymFirst => "sym-first",
        }
    }

    /// Rules where `bound` is a target value rather than an upper bound.
    pub fn is_equality(self) -> bool {
        matches!(
            self,
            Rule::Coro1Plateau
                | Rule::PhiHalfPlateau
                | Rule::ReflectedHalfPlateau
                | Rule::Haar1
                | Rule::Case1Exact
                | Rule::Case3
                | Rule::Case5
                | Rule::SymFirst
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One checked coefficient.
///
/// For inequalities `slack = bound - abs`; for equalities
/// `slack = -|abs - bound|`. For [`Rule::Case2Exceptions`] `index` names the
/// level pair (with `m = 0, l = 1`), `abs` is the exception count and `bound`
/// is `b^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub rule: Rule,
    pub index: HaarIndex,
    pub abs: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
}

impl BoundCheck {
    fn upper(rule: Rule, index: HaarIndex, abs: f64, bound: f64) -> Self {
        let slack = bound - abs;
        BoundCheck { rule, index, abs, bound, slack, pass: slack >= -SLACK_TOLERANCE }
    }

    fn equal(rule: Rule, index: HaarIndex, abs: f64, target: f64) -> Self {
        let slack = -(abs - target).abs();
        BoundCheck { rule, index, abs, bound: target, slack, pass: slack >= -SLACK_TOLERANCE }
    }
}

/// Per-rule aggregate over a list of checks.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSummary {
    pub rule: Rule,
    pub total: usize,
    pub failures: usize,
    pub worst_slack: f64,
}

/// Aggregates checks by rule, in rule order.
pub fn summarize(checks: &[BoundCheck]) -> Vec<RuleSummary> {
    let mut by_rule = std::collections::BTreeMap::<Rule, RuleSummary>::new();
    for c in checks {
        let e = by_rule.entry(c.rule).or_insert(RuleSummary {
            rule: c.rule,
            total: 0,
            failures: 0,
            worst_slack: f64::INFINITY,
        });
        e.total += 1;
        e.failures += usize::from(!c.pass);
        e.worst_slack = e.worst_slack.min(c.slack);
    }
    by_rule.into_values().collect()
}

pub fn all_pass(checks: &[BoundCheck]) -> bool {
    checks.iter().all(|c| c.pass)
}

fn dist(roots: &RootTable, l: u32) -> f64 {
    roots.omega_minus_one(l).norm()
}

fn one_d(idx: HaarIndex) -> HaarIndex1D {
    match idx {
        HaarIndex::One(i) => i,
        HaarIndex::Two(_) => unreachable!("one-dimensional index expected"),
    }
}

fn two_d(idx: HaarIndex) -> HaarIndex2D {
    match idx {
        HaarIndex::Two(i) => i,
        HaarIndex::One(_) => unreachable!("two-dimensional index expected"),
    }
}

/// Levels `0..=j_max` of one 1D multiset of `n_eff` points against
/// `constant / (N b^j |w^l - 1|^2)` below `ceil(log_b N)` and the plateau
/// value above.
fn check_1d_family(
    points: &PointMultiset,
    n_eff: u64,
    constant: f64,
    rules: (Rule, Rule),
    j_max: i32,
) -> Result<Vec<BoundCheck>> {
    let base = points.base();
    let d = LocalDiscrepancy::new(points)?;
    let roots = d.roots();
    let threshold = base.ceil_log(n_eff) as i32;
    let mut out = Vec::new();
    for j in 0..=j_max {
        for HaarCoefficient { index, value } in d.level_1d(j)? {
            let l = one_d(index).l;
            let e = dist(roots, l);
            out.push(if j < threshold {
                BoundCheck::upper(rules.0, index, value.norm(), constant / (n_eff as f64 * base.powf(j) * e * e))
            } else {
                BoundCheck::equal(rules.1, index, value.norm(), base.powf(-2 * j - 1) / e)
            });
        }
    }
    Ok(out)
}

/// Coefficient bounds for the first `count` terms of the symmetrized van der
/// Corput sequence, and of its two halves `phi(0..N)` and `1 - phi(0..N)`,
/// on levels `0..=j_max`, plus the first coefficient bound `1/(2N)`.
pub fn check_vdc_bounds(base: Base, count: u64, j_max: i32) -> Result<Vec<BoundCheck>> {
    let sym = vdc_symmetrized(base, count)?;
    let mut out = check_1d_family(&sym, count, 26.0, (Rule::Coro1, Rule::Coro1Plateau), j_max)?;
    let phi = van_der_corput(base, count)?;
    out.extend(check_1d_family(&phi, count, 9.0, (Rule::PhiHalf, Rule::PhiHalfPlateau), j_max)?);
    let refl = vdc_reflected(base, count)?;
    out.extend(check_1d_family(&refl, count, 15.0, (Rule::ReflectedHalf, Rule::ReflectedHalfPlateau), j_max)?);
    let first = HaarIndex::One(HaarIndex1D::FIRST);
    let mu = LocalDiscrepancy::new(&sym)?.coefficient(first)?;
    out.push(BoundCheck::upper(Rule::First1d, first, mu.norm(), 0.5 / count as f64));
    Ok(out)
}

/// Exponential sums `sum_k sigma^{-1}(k) w^{kl}` and `sum_k sigma(k) w^{kl}`
/// for `l = 1..b-1`.
fn scrambled_sums(schedule: &ScrambleSchedule, roots: &RootTable) -> (Vec<f64>, Vec<f64>) {
    let sigma = schedule.sigma();
    let inv = sigma.inverse();
    let b = roots.base().get();
    let sum = |p: &crate::pointgen::Permutation, l: u32| -> f64 {
        (0..b)
            .map(|k| roots.pow(k as u64 * l as u64) * p.apply(k) as f64)
            .sum::<ComplexValue>()
            .norm()
    };
    (
        std::iter::once(0.0).chain((1..b).map(|l| sum(&inv, l))).collect(),
        std::iter::once(0.0).chain((1..b).map(|l| sum(sigma, l))).collect(),
    )
}

fn hammersley_level_checks(
    d: &LocalDiscrepancy<'_>,
    n: usize,
    j1: i32,
    j2: i32,
    case1_sums: Option<&(Vec<f64>, Vec<f64>)>,
    count_exceptions: bool,
) -> Result<Vec<BoundCheck>> {
    let base = d.base();
    let roots = d.roots();
    let b = base.get() as f64;
    let n = n as i32;
    let coeffs = d.level_2d(j1, j2)?;
    let mut out = Vec::new();
    match (j1 >= 0, j2 >= 0) {
        (false, false) => {}
        (true, true) => {
            let level_sum = j1 + j2;
            let plateau = |idx: HaarIndex2D| {
                base.powf(-2 * level_sum - 2) / (dist(roots, idx.0.l) * dist(roots, idx.1.l))
            };
            if level_sum < n - 1 {
                let bound = ((b - 1.0) / 2.0).powi(2) * base.powf(-2 * n);
                for c in &coeffs {
                    out.push(BoundCheck::upper(Rule::Case1, c.index, c.value.norm(), bound));
                    if let Some((s1, s2)) = case1_sums {
                        let idx = two_d(c.index);
                        let exact = base.powf(-2 * n - 2) * s1[idx.0.l as usize] * s2[idx.1.l as usize];
                        out.push(BoundCheck::equal(Rule::Case1Exact, c.index, c.value.norm(), exact));
                    }
                }
            } else if j1 < n && j2 < n {
                if count_exceptions {
                    let off: Vec<HaarIndex2D> = coeffs
                        .iter()
                        .map(|c| (two_d(c.index), c.value.norm()))
                        .filter(|&(idx, v)| (v - plateau(idx)).abs() > SLACK_TOLERANCE)
                        .map(|(idx, _)| idx)
                        .collect();
                    let mut boxes: Vec<(u64, u64)> = off.iter().map(|i| (i.0.m, i.1.m)).collect();
                    boxes.sort_unstable();
                    boxes.dedup();
                    let rep = HaarIndex::Two(HaarIndex2D(
                        HaarIndex1D { j: j1, m: 0, l: 1 },
                        HaarIndex1D { j: j2, m: 0, l: 1 },
                    ));
                    out.push(BoundCheck::upper(Rule::Case2Exceptions, rep, off.len() as f64, base.powf(n)));
                    out.push(BoundCheck::upper(Rule::Case2Boxes, rep, boxes.len() as f64, base.powf(n)));
                }
            } else {
                for c in &coeffs {
                    out.push(BoundCheck::equal(Rule::Case3, c.index, c.value.norm(), plateau(two_d(c.index))));
                }
            }
        }
        _ => {
            let ji = j1.max(j2);
            for c in &coeffs {
                let idx = two_d(c.index);
                let li = if j1 >= 0 { idx.0.l } else { idx.1.l };
                out.push(if ji < n {
                    BoundCheck::upper(Rule::Case4, c.index, c.value.norm(), (b * b - 1.0) * base.powf(-n - ji))
                } else {
                    BoundCheck::equal(Rule::Case5, c.index, c.value.norm(), 0.5 * base.powf(-2 * ji - 1) / dist(roots, li))
                });
            }
        }
    }
    Ok(out)
}

fn all_level_pairs(j_max: i32) -> Vec<(i32, i32)> {
    (-1..=j_max).flat_map(|a| (-1..=j_max).map(move |c| (a, c))).collect()
}

/// The five coefficient cases for the scrambled Hammersley set of `b^n`
/// points on every level pair with both components in `-1..=j_max`, plus
/// the closed form of the first coefficient.
pub fn check_hammersley_bounds(base: Base, n: usize, schedule: &ScrambleSchedule, j_max: i32) -> Result<Vec<BoundCheck>> {
    let points = hammersley_scrambled(base, n, schedule)?;
    let d = LocalDiscrepancy::new(&points)?;
    let sums = scrambled_sums(schedule, d.roots());
    let per_level = all_level_pairs(j_max)
        .into_par_iter()
        .map(|(a, c)| hammersley_level_checks(&d, n, a, c, Some(&sums), true))
        .collect::<Result<Vec<_>>>()?;
    let first = HaarIndex::Two(HaarIndex2D::FIRST);
    let mu = d.coefficient(first)?;
    let closed = coeff_first_2d_closed(base, schedule)?;
    let mut out = vec![BoundCheck::equal(Rule::Haar1, first, (mu - closed).norm(), 0.0)];
    out.extend(per_level.into_iter().flatten());
    Ok(out)
}

/// Cases 1, 3, 4 and 5 for the symmetrized Hammersley set of `2 b^n` points,
/// with the exact first coefficient `1/Ñ + 1/Ñ^2`.
pub fn check_hammersley_sym_bounds(
    base: Base,
    n: usize,
    schedule: &ScrambleSchedule,
    j_max: i32,
) -> Result<Vec<BoundCheck>> {
    let points = hammersley_symmetrized(base, n, schedule)?;
    let d = LocalDiscrepancy::new(&points)?;
    let per_level = all_level_pairs(j_max)
        .into_par_iter()
        .map(|(a, c)| hammersley_level_checks(&d, n, a, c, None, false))
        .collect::<Result<Vec<_>>>()?;
    let first = HaarIndex::Two(HaarIndex2D::FIRST);
    let mu = d.coefficient(first)?;
    let closed = coeff_first_2d_sym_closed(base, n)?;
    let mut out = vec![BoundCheck::equal(Rule::SymFirst, first, (mu - closed).norm(), 0.0)];
    out.extend(per_level.into_iter().flatten());
    Ok(out)
}
