use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::coeffs::LocalDiscrepancy;
use crate::error::{Error, Result};
use crate::haar::{HaarIndex, HaarIndex1D, HaarIndex2D};
use crate::pointgen::{Base, PointMultiset};
use crate::sum::pairwise_sum;

/// An integrability or summability exponent in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn new(v: f64) -> Result<Self> {
        if v.is_infinite() && v > 0.0 {
            return Ok(Exponent::Infinite);
        }
        if !(v >= 1.0) {
            return Err(Error::InvalidParameter(format!("exponent {v} must be >= 1")));
        }
        Ok(Exponent::Finite(v))
    }

    /// `1/p` with `1/inf = 0`.
    pub fn inverse(self) -> f64 {
        match self {
            Exponent::Finite(v) => 1.0 / v,
            Exponent::Infinite => 0.0,
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinite),
            t => Exponent::new(t.parse().map_err(|_| Error::Parse(format!("bad exponent '{t}'")))?),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => v.fmt(f),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(v) => s.serialize_f64(*v),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesovParams {
    pub p: Exponent,
    pub q: Exponent,
    pub r: f64,
}

impl BesovParams {
    /// Requires `0 <= r < 1/p`.
    pub fn new(p: Exponent, q: Exponent, r: f64) -> Result<Self> {
        if !(r >= 0.0) || r >= p.inverse() && !(r == 0.0 && p == Exponent::Infinite) {
            return Err(Error::InvalidParameter(format!("smoothness r = {r} must satisfy 0 <= r < 1/p (p = {p})")));
        }
        Ok(BesovParams { p, q, r })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    /// Exact levels plus the closed-form plateau tail.
    ExactWithTail,
    /// As above, with a bounded but uncomputed region in between.
    ExactWithTailAndRemainder,
}

/// Result of [`besov_quasinorm`]. `partial`, `tail` and `remainder_bound`
/// are contributions to the `q`-th power of the quasi-norm (to the supremum
/// when `q = inf`); `value` is the quasi-norm itself without the remainder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport {
    pub value: f64,
    pub partial: f64,
    pub tail: f64,
    pub remainder_bound: f64,
    pub j_max: i32,
    pub method: NormMethod,
    pub params: BesovParams,
}

/// Combines weighted level norms according to `q`.
#[derive(Debug, Clone, Copy)]
struct Accumulator {
    q: Exponent,
}

impl Accumulator {
    fn lift(self, level_norm: f64) -> f64 {
        match self.q {
            Exponent::Finite(q) => level_norm.powf(q),
            Exponent::Infinite => level_norm,
        }
    }

    fn combine(self, terms: &[f64]) -> f64 {
        match self.q {
            Exponent::Finite(_) => pairwise_sum(terms),
            Exponent::Infinite => terms.iter().copied().fold(0.0, f64::max),
        }
    }

    fn finish(self, total: f64) -> f64 {
        match self.q {
            Exponent::Finite(q) => total.powf(1.0 / q),
            Exponent::Infinite => total,
        }
    }
}

/// `(sum_{m,l} |mu|^p)^{1/p}` on one level tuple, or the maximum when `p = inf`.
fn level_norm(d: &LocalDiscrepancy<'_>, levels: &[i32], p: Exponent) -> Result<f64> {
    let base = d.base();
    let cells = d.level_cells(levels)?;
    let ls: Vec<u32> = levels.iter().map(|&j| if j < 0 { 1 } else { base.get() - 1 }).collect();
    let comp = |j: i32, l: u32| HaarIndex1D { j, m: 0, l };
    let vols_c: Vec<_> = match *levels {
        [j] => (1..=ls[0]).map(|l| d.volume(HaarIndex::One(comp(j, l)))).collect::<Vec<_>>(),
        [j1, j2] => (1..=ls[0])
            .flat_map(|l1| (1..=ls[1]).map(move |l2| (l1, l2)))
            .map(|(l1, l2)| d.volume(HaarIndex::Two(HaarIndex2D(comp(j1, l1), comp(j2, l2)))))
            .collect(),
        _ => unreachable!(),
    };
    let vols: Vec<f64> = vols_c.iter().map(|v| v.norm()).collect();
    let total_cells: f64 = levels.iter().map(|&j| if j < 0 { 1.0 } else { base.powf(j) }).product();
    let empty = total_cells - cells.len() as f64;
    match p {
        Exponent::Finite(p) => {
            let occupied: Vec<f64> = cells
                .iter()
                .map(|(_, sums)| {
                    let t: Vec<f64> = sums.iter().zip(&vols_c).map(|(c, v)| (c - v).norm().powf(p)).collect();
                    pairwise_sum(&t)
                })
                .collect();
            let vacant: Vec<f64> = vols.iter().map(|v| v.powf(p)).collect();
            Ok((pairwise_sum(&occupied) + empty * pairwise_sum(&vacant)).powf(1.0 / p))
        }
        Exponent::Infinite => {
            let mut best = cells
                .iter()
                .flat_map(|(_, sums)| sums.iter().zip(&vols_c).map(|(c, v)| (c - v).norm()))
                .fold(0.0, f64::max);
            if empty > 0.0 {
                best = vols.iter().copied().fold(best, f64::max);
            }
            Ok(best)
        }
    }
}

/// Per-axis weighted plateau level norm `b^{j w} (sum_{m,l} |v|^p)^{1/p}` with
/// `w = r - 1/p + 1`.
struct Plateau {
    base: Base,
    params: BesovParams,
    /// `(sum_l |w^l - 1|^{-p})^{1/p}`, or the maximum for `p = inf`.
    k: f64,
}

impl Plateau {
    fn new(base: Base, params: BesovParams) -> Self {
        let b = base.get();
        let dist = |l: u32| (std::f64::consts::TAU * l as f64 / b as f64 / 2.0).sin().abs() * 2.0;
        let k = match params.p {
            Exponent::Finite(p) => (1..b).map(|l| dist(l).powf(-p)).sum::<f64>().powf(1.0 / p),
            Exponent::Infinite => (1..b).map(|l| 1.0 / dist(l)).fold(0.0, f64::max),
        };
        Plateau { base, params, k }
    }

    fn weight(&self) -> f64 {
        self.params.r - self.params.p.inverse() + 1.0
    }

    fn a(&self, j: i32) -> f64 {
        if j < 0 {
            self.base.powf(-1).powf(self.weight()) * 0.5
        } else {
            (self.base.get() as f64).powf(j as f64 * (self.params.r - 1.0)) * self.k / self.base.get() as f64
        }
    }

    /// Sum (or supremum) of lifted `a(j)` over `j >= e`, `e >= 0`.
    fn tail_from(&self, e: i32, acc: Accumulator) -> f64 {
        let e = e.max(0);
        match self.params.q {
            Exponent::Finite(q) => {
                let ratio = (self.base.get() as f64).powf(q * (self.params.r - 1.0));
                acc.lift(self.a(e)) / (1.0 - ratio)
            }
            Exponent::Infinite => self.a(e),
        }
    }

    /// Sum (or supremum) over every level `j >= -1`.
    fn total(&self, acc: Accumulator) -> f64 {
        acc.combine(&[acc.lift(self.a(-1)), self.tail_from(0, acc)])
    }
}

/// Plateau tail on one axis over the levels `j >= from`.
#[cfg(test)]
fn plateau_tail_1d(base: Base, params: BesovParams, from: i32) -> f64 {
    Plateau::new(base, params).tail_from(from, Accumulator { q: params.q })
}

/// A bound on `|mu|` for one level pair that has not been computed.
fn coefficient_bound(points: &PointMultiset, j1: i32, j2: i32) -> f64 {
    let base = points.base();
    let level_sum = j1.max(0) + j2.max(0);
    let mut bound = base.powf(-level_sum);
    if points.label().is_hammersley() {
        let n = points.param() as i32;
        let b = base.get() as f64;
        if j1 >= 0 && j2 >= 0 && level_sum < n - 1 {
            bound = bound.min(((b - 1.0) / 2.0).powi(2) * base.powf(-2 * n));
        } else if (j1 < 0) != (j2 < 0) {
            let ji = j1.max(j2);
            if ji < n {
                bound = bound.min((b * b - 1.0) * base.powf(-n - ji));
            }
        }
    }
    bound
}

/// The discrete Haar-side Besov quasi-norm
/// `(sum_j b^{(j_1 + ... + j_s)(r - 1/p + 1) q} (sum_{m,l} |mu|^p)^{q/p})^{1/q}`.
///
/// Levels up to `j_max` are summed exactly. Levels where no point can lie
/// inside a Haar support are summed in closed form. In two dimensions the
/// level pairs above `j_max` outside that plateau are only bounded and
/// reported in `remainder_bound`.
pub fn besov_quasinorm(points: &PointMultiset, params: BesovParams, j_max: i32) -> Result<NormReport> {
    if j_max < -1 {
        return Err(Error::InvalidParameter(format!("j_max = {j_max} below -1")));
    }
    let d = LocalDiscrepancy::new(points)?;
    let base = points.base();
    let plateau = Plateau::new(base, params);
    let acc = Accumulator { q: params.q };
    let w = plateau.weight();
    let weighted = |levels: &[i32]| -> Result<f64> {
        let s: i32 = levels.iter().sum();
        Ok(acc.lift(base.powf(1).powf(s as f64 * w) * level_norm(&d, levels, params.p)?))
    };

    match points.dim() {
        1 => {
            let e = points.max_exp(0) as i32;
            let top = j_max.max(e - 1);
            let terms = (-1..=top).map(|j| weighted(&[j])).collect::<Result<Vec<_>>>()?;
            let partial = acc.combine(&terms);
            let tail = plateau.tail_from(top + 1, acc);
            Ok(NormReport {
                value: acc.finish(acc.combine(&[partial, tail])),
                partial,
                tail,
                remainder_bound: 0.0,
                j_max: top,
                method: NormMethod::ExactWithTail,
                params,
            })
        }
        _ => {
            let (e1, e2) = (points.max_exp(0) as i32, points.max_exp(1) as i32);
            let (top1, top2) = (j_max.min(e1 - 1), j_max.min(e2 - 1));
            let pairs: Vec<(i32, i32)> = (-1..=top1).flat_map(|a| (-1..=top2).map(move |c| (a, c))).collect();
            let terms = pairs.iter().map(|&(a, c)| weighted(&[a, c])).collect::<Result<Vec<_>>>()?;
            let partial = acc.combine(&terms);

            let total = plateau.total(acc);
            let tail = match params.q {
                Exponent::Finite(_) => {
                    let (g1, g2) = (plateau.tail_from(e1, acc), plateau.tail_from(e2, acc));
                    let below1 = if e1 >= 0 { total - g1 } else { 0.0 };
                    g1 * total + below1 * g2
                }
                Exponent::Infinite => {
                    let below1 = if e1 >= 1 { plateau.a(-1).max(plateau.a(0)) } else { plateau.a(-1) };
                    (plateau.a(e1) * total).max(below1 * plateau.a(e2))
                }
            };

            let mut remainder = Vec::new();
            for a in -1..e1 {
                for c in -1..e2 {
                    if a <= top1 && c <= top2 {
                        continue;
                    }
                    let count: f64 = [a, c]
                        .iter()
                        .map(|&j| if j < 0 { 1.0 } else { base.powf(j) * (base.get() - 1) as f64 })
                        .product();
                    let bound = coefficient_bound(points, a, c) * count.powf(params.p.inverse());
                    remainder.push(acc.lift(base.powf(1).powf((a + c) as f64 * w) * bound));
                }
            }
            let remainder_bound = acc.combine(&remainder);
            Ok(NormReport {
                value: acc.finish(acc.combine(&[partial, tail])),
                partial,
                tail,
                remainder_bound,
                j_max,
                method: if remainder.is_empty() {
                    NormMethod::ExactWithTail
                } else {
                    NormMethod::ExactWithTailAndRemainder
                },
                params,
            })
        }
    }
}
