use std::fmt;

use rayon::prelude::*;

use super::conditions::{least_squares, LnRule};
use crate::coeffs::{coeff_first_2d_closed, coeff_first_2d_sym_closed, LocalDiscrepancy};
use crate::error::{Error, Result};
use crate::haar::{HaarIndex, HaarIndex2D};
use crate::norms::{besov_quasinorm, lp_norm, BesovParams};
use crate::pointgen::{
    hammersley_classical, hammersley_scrambled, hammersley_symmetrized, van_der_corput, vdc_symmetrized, Base,
    Permutation, PointMultiset, ScheduleSpec, ScrambleSchedule,
};

/// A family of point sets indexed by a size exponent `n`.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// First `b^n` terms of the van der Corput sequence.
    Vdc,
    /// First `b^n` terms of the symmetrized van der Corput sequence.
    VdcSym,
    HamClassical,
    HamScrambled { sigma: Permutation, schedule: ScheduleSpec },
    HamSym { sigma: Permutation, schedule: ScheduleSpec },
}

impl Family {
    pub fn is_sequence(&self) -> bool {
        matches!(self, Family::Vdc | Family::VdcSym)
    }

    pub fn generate(&self, base: Base, n: u32) -> Result<PointMultiset> {
        match self {
            Family::Vdc => van_der_corput(base, base.pow(n)?),
            Family::VdcSym => vdc_symmetrized(base, base.pow(n)?),
            Family::HamClassical => hammersley_classical(base, n as usize),
            Family::HamScrambled { sigma, schedule } => {
                hammersley_scrambled(base, n as usize, &schedule.resolve(sigma.clone(), n as usize)?)
            }
            Family::HamSym { sigma, schedule } => {
                hammersley_symmetrized(base, n as usize, &schedule.resolve(sigma.clone(), n as usize)?)
            }
        }
    }

    fn prefix(&self, base: Base, count: u64) -> Result<PointMultiset> {
        match self {
            Family::Vdc => van_der_corput(base, count),
            Family::VdcSym => vdc_symmetrized(base, count),
            _ => Err(Error::InvalidParameter(format!("{self} is not a sequence"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Vdc => f.write_str("vdc"),
            Family::VdcSym => f.write_str("vdc-sym"),
            Family::HamClassical => f.write_str("ham"),
            Family::HamScrambled { .. } => f.write_str("ham-scrambled"),
            Family::HamSym { .. } => f.write_str("ham-sym"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    Lp(f64),
    Besov { params: BesovParams, j_max: i32 },
}

impl NormSpec {
    fn smoothness(self) -> f64 {
        match self {
            NormSpec::Lp(_) => 0.0,
            NormSpec::Besov { params, .. } => params.r,
        }
    }

    pub fn evaluate(self, points: &PointMultiset) -> Result<f64> {
        match self {
            NormSpec::Lp(p) => lp_norm(points, p),
            NormSpec::Besov { params, j_max } => Ok(besov_quasinorm(points, params, j_max)?.value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingPoint {
    pub n: u32,
    pub count: u64,
    pub value: f64,
    /// `N^{1-r}` times the norm; for sequences the maximum of this over all
    /// prefixes of length at most `N`.
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub family: String,
    pub base: Base,
    pub norm: NormSpec,
    pub points: Vec<ScalingPoint>,
    /// Fitted exponent of `log N`.
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
}

/// Fits `log(scaled)` against `log log N` over the size exponents `ns`.
pub fn scaling_study(family: &Family, base: Base, ns: &[u32], norm: NormSpec) -> Result<ScalingFit> {
    if ns.len() < 5 {
        return Err(Error::InvalidParameter(format!("scaling study needs at least 5 sizes, got {}", ns.len())));
    }
    if ns.contains(&0) {
        return Err(Error::InvalidParameter("size exponents must be positive".into()));
    }
    let r = norm.smoothness();
    let points = ns
        .iter()
        .map(|&n| {
            let set = family.generate(base, n)?;
            let count = set.len() as u64;
            let value = norm.evaluate(&set)?;
            let scaled = if family.is_sequence() {
                (1..=count)
                    .into_par_iter()
                    .map(|m| Ok((m as f64).powf(1.0 - r) * norm.evaluate(&family.prefix(base, m)?)?))
                    .collect::<Result<Vec<f64>>>()?
                    .into_iter()
                    .fold(0.0, f64::max)
            } else {
                (count as f64).powf(1.0 - r) * value
            };
            Ok(ScalingPoint { n, count, value, scaled })
        })
        .collect::<Result<Vec<_>>>()?;
    let xy: Vec<(f64, f64)> = points.iter().map(|p| ((p.count as f64).ln().ln(), p.scaled.ln())).collect();
    let (slope, intercept) = least_squares(&xy);
    let residuals = xy.iter().map(|&(x, y)| y - (intercept + slope * x)).collect();
    Ok(ScalingFit { family: family.to_string(), base, norm, points, slope, intercept, residuals })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    pub count: u64,
    /// `N mu_{(-1,-1)}` from the points.
    pub scaled: f64,
    /// `N mu_{(-1,-1)}` from the closed form.
    pub scaled_closed: f64,
    pub per_n: f64,
    /// `Ñ mu^sym_{(-1,-1)}` of the symmetrized set.
    pub sym_scaled: f64,
    pub sym_per_n: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub base: Base,
    pub rule: LnRule,
    /// Limit of `N mu / n`; zero unless `l_n / n` tends to `0` or `1`.
    pub limit: f64,
    pub rows: Vec<GrowthRow>,
    /// `|N mu / n - limit| / |limit|` at the largest `n`, when `limit != 0`.
    pub relative_error: Option<f64>,
}

fn schedule_for(sigma: &Permutation, rule: &LnRule, n: usize) -> Result<ScrambleSchedule> {
    let l = rule.l_n(n);
    ScrambleSchedule::new(sigma.clone(), (0..n).map(|i| i < l).collect())
}

/// Tracks `N mu_{(-1,-1)} / n` of the scrambled and symmetrized Hammersley
/// sets as `n` grows.
pub fn first_coeff_growth_check(base: Base, ns: &[usize], sigma: &Permutation, rule: &LnRule) -> Result<GrowthReport> {
    if ns.is_empty() || ns.contains(&0) {
        return Err(Error::InvalidParameter("n values must be positive and non-empty".into()));
    }
    let b = base.get() as f64;
    let bracket = (b - 1.0).powi(2) / (4.0 * b) - sigma.weighted_sum() as f64 / (b * b);
    let limit = match rule {
        LnRule::AllSigma => -bracket,
        LnRule::AllConjugate => bracket,
        _ => 0.0,
    };
    let first = HaarIndex::Two(HaarIndex2D::FIRST);
    let rows = ns
        .iter()
        .map(|&n| {
            let schedule = schedule_for(sigma, rule, n)?;
            let set = hammersley_scrambled(base, n, &schedule)?;
            let count = set.len() as u64;
            let mu = LocalDiscrepancy::new(&set)?.coefficient(first)?.re;
            let closed = coeff_first_2d_closed(base, &schedule)?.re;
            let sym = hammersley_symmetrized(base, n, &schedule)?;
            let sym_mu = LocalDiscrepancy::new(&sym)?.coefficient(first)?.re;
            debug_assert!((sym_mu - coeff_first_2d_sym_closed(base, n)?.re).abs() < 1e-12);
            let nf = count as f64;
            let sym_scaled = sym.len() as f64 * sym_mu;
            Ok(GrowthRow {
                n,
                count,
                scaled: nf * mu,
                scaled_closed: nf * closed,
                per_n: nf * mu / n as f64,
                sym_scaled,
                sym_per_n: sym_scaled / n as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let relative_error = (limit != 0.0).then(|| {
        let last = rows.last().unwrap();
        (last.per_n - limit).abs() / limit.abs()
    });
    Ok(GrowthReport { base, rule: rule.clone(), limit, rows, relative_error })
}
