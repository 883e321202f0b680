//! Haar coefficients of the local discrepancy.
//!
//! For a multiset `P` of `N` points the local discrepancy is
//! `D(t) = #{x in P : x < t} / N - prod t_i` and its coefficients are
//! `mu = <D, h> = (1/N) sum_x prod_i c_i(x_i) - prod_i v_i` where `c_i` is the
//! counting factor of one coordinate and `v_i` the volume factor of one axis.

mod oracle;

use num_rational::Ratio;
use rayon::prelude::*;

pub use oracle::CoefficientOracle;

use crate::error::{Error, Result};
use crate::haar::{
    indices_at_level, scaled_floor_wide, ComplexValue, HaarIndex, HaarIndex1D, HaarIndex2D, RootTable,
};
use crate::pointgen::{radical_inverse, Base, Coord, PointMultiset, ScrambleSchedule};
use crate::sum::pairwise_sum;

const ZERO: ComplexValue = ComplexValue::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaarCoefficient {
    pub index: HaarIndex,
    pub value: ComplexValue,
}

/// Where a coordinate sits relative to `I_{j,m}` on a level `j >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Placement {
    /// Position of the enclosing level-`j` interval.
    pub m: u64,
    /// Child digit.
    pub k: u32,
    /// `b^{j+1} z - (b m + k)`, in `[0, 1)`.
    pub frac: f64,
}

/// `None` when `z` is a left endpoint of its level-`j` interval (its counting
/// factor vanishes for every `l`) or `z = 1`.
pub(crate) fn place(base: Base, j: u32, z: Coord) -> Result<Option<Placement>> {
    if z.is_one() {
        return Ok(None);
    }
    let (s, rem, q) = scaled_floor_wide(base, z, j + 1)
        .ok_or_else(|| Error::Overflow(format!("level {j} too deep for base {base}")))?;
    let b = base.get() as u128;
    let k = (s % b) as u32;
    if k == 0 && rem == 0 {
        return Ok(None);
    }
    Ok(Some(Placement { m: (s / b) as u64, k, frac: rem as f64 / q as f64 }))
}

/// Counting factor `b^{-j-1} ((bm + k - b^{j+1} z) w^{kl} - sum_{r<k} w^{rl})`.
#[inline]
fn counting_factor(roots: &RootTable, j: u32, l: u32, p: Placement) -> ComplexValue {
    let scale = roots.base().powf(-(j as i32) - 1);
    (-p.frac * roots.pow(p.k as u64 * l as u64) - roots.prefix(l, p.k)) * scale
}

/// `int t h(t) dt` over one axis.
fn volume_factor(roots: &RootTable, idx: HaarIndex1D) -> ComplexValue {
    if idx.is_first() {
        return ComplexValue::new(0.5, 0.0);
    }
    let b = roots.base();
    ComplexValue::new(b.powf(-2 * idx.j - 1), 0.0) / roots.omega_minus_one(idx.l)
}

/// Counting factor of coordinate `z` for the 1D index `idx`, or `None` when
/// it is zero.
fn component_factor(roots: &RootTable, idx: HaarIndex1D, z: Coord) -> Result<Option<ComplexValue>> {
    let base = roots.base();
    if idx.is_first() {
        return Ok(Some(ComplexValue::new(1.0 - z.to_f64(base), 0.0)));
    }
    let j = idx.j as u32;
    Ok(place(base, j, z)?.filter(|p| p.m == idx.m).map(|p| counting_factor(roots, j, idx.l, p)))
}

/// The local discrepancy of a fixed point multiset, with its root table.
#[derive(Debug, Clone)]
pub struct LocalDiscrepancy<'a> {
    points: &'a PointMultiset,
    roots: RootTable,
}

impl<'a> LocalDiscrepancy<'a> {
    pub fn new(points: &'a PointMultiset) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("the local discrepancy needs at least one point".into()));
        }
        Ok(LocalDiscrepancy { points, roots: RootTable::new(points.base()) })
    }

    pub fn points(&self) -> &PointMultiset {
        self.points
    }

    pub fn base(&self) -> Base {
        self.points.base()
    }

    pub fn roots(&self) -> &RootTable {
        &self.roots
    }

    /// The number of points `N`.
    pub fn n(&self) -> usize {
        self.points.len()
    }

    fn check_dim(&self, idx: &HaarIndex) -> Result<()> {
        if idx.dim() != self.points.dim() {
            return Err(Error::DimensionMismatch { expected: self.points.dim(), actual: idx.dim() });
        }
        Ok(())
    }

    /// The volume part `<prod t_i, h>`.
    pub fn volume(&self, idx: HaarIndex) -> ComplexValue {
        idx.components().into_iter().map(|c| volume_factor(&self.roots, c)).product()
    }

    /// The counting part `(1/N) sum_x <1[x < t], h>`.
    pub fn counting(&self, idx: HaarIndex) -> Result<ComplexValue> {
        self.check_dim(&idx)?;
        let comps = idx.components();
        let mut terms = Vec::new();
        'points: for p in self.points.points() {
            let mut prod = ComplexValue::new(1.0, 0.0);
            for (c, &z) in comps.iter().zip(p.coords()) {
                match component_factor(&self.roots, *c, z)? {
                    Some(f) => prod *= f,
                    None => continue 'points,
                }
            }
            terms.push(prod);
        }
        Ok(pairwise_sum(&terms) / self.n() as f64)
    }

    pub fn coefficient(&self, idx: HaarIndex) -> Result<ComplexValue> {
        Ok(self.counting(idx)? - self.volume(idx))
    }

    /// Every coefficient on the 1D level `j`, in enumeration order.
    pub fn level_1d(&self, j: i32) -> Result<Vec<HaarCoefficient>> {
        Ok(self.level(&[j])?.into_iter().map(|(i, v)| HaarCoefficient { index: i, value: v }).collect())
    }

    /// Every coefficient on the level pair `(j1, j2)`, in enumeration order.
    pub fn level_2d(&self, j1: i32, j2: i32) -> Result<Vec<HaarCoefficient>> {
        Ok(self.level(&[j1, j2])?.into_iter().map(|(i, v)| HaarCoefficient { index: i, value: v }).collect())
    }

    /// Counting sums on a level tuple, keyed by cell, for cells that hold at
    /// least one contributing point. Cells come out in ascending order; every
    /// entry carries the `l`-indexed sums in enumeration order.
    pub(crate) fn level_cells(&self, levels: &[i32]) -> Result<Vec<(Vec<u64>, Vec<ComplexValue>)>> {
        let dim = self.points.dim();
        if levels.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: levels.len() });
        }
        let base = self.base();
        let ls: Vec<u32> = levels.iter().map(|&j| if j < 0 { 1 } else { base.get() - 1 }).collect();
        let n_l: usize = ls.iter().map(|&x| x as usize).product();

        let mut entries: Vec<(Vec<u64>, usize)> = Vec::new();
        let mut placements: Vec<Vec<Option<Placement>>> = Vec::with_capacity(self.n());
        'points: for (pi, p) in self.points.points().iter().enumerate() {
            let mut cell = Vec::with_capacity(dim);
            let mut pl = Vec::with_capacity(dim);
            for (&j, &z) in levels.iter().zip(p.coords()) {
                if j < 0 {
                    if z.is_one() {
                        continue 'points;
                    }
                    cell.push(0);
                    pl.push(None);
                } else {
                    match place(base, j as u32, z)? {
                        Some(q) => {
                            cell.push(q.m);
                            pl.push(Some(q));
                        }
                        None => continue 'points,
                    }
                }
            }
            entries.push((cell, pi));
            placements.push(pl);
        }
        let order: Vec<usize> = {
            let mut o: Vec<usize> = (0..entries.len()).collect();
            o.sort_by(|&a, &b| entries[a].cmp(&entries[b]));
            o
        };

        let n_inv = 1.0 / self.n() as f64;
        let point_terms = |e: usize| -> Vec<ComplexValue> {
            let pi = entries[e].1;
            let coords = self.points.points()[pi].coords();
            let mut out = vec![ComplexValue::new(1.0, 0.0); n_l];
            let mut stride = n_l;
            for (axis, &j) in levels.iter().enumerate() {
                let block = stride / ls[axis] as usize;
                for (slot, v) in out.iter_mut().enumerate() {
                    let li = (slot / block) % ls[axis] as usize;
                    *v *= match placements[e][axis] {
                        None => ComplexValue::new(1.0 - coords[axis].to_f64(base), 0.0),
                        Some(q) => counting_factor(&self.roots, j as u32, li as u32 + 1, q),
                    };
                }
                stride = block;
            }
            out
        };

        let mut groups: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        while start < order.len() {
            let mut end = start + 1;
            while end < order.len() && entries[order[end]].0 == entries[order[start]].0 {
                end += 1;
            }
            groups.push((start, end));
            start = end;
        }
        let cells = groups
            .par_iter()
            .map(|&(s, e)| {
                let terms: Vec<Vec<ComplexValue>> = order[s..e].iter().map(|&o| point_terms(o)).collect();
                let sums = (0..n_l)
                    .map(|slot| {
                        let column: Vec<ComplexValue> = terms.iter().map(|t| t[slot]).collect();
                        pairwise_sum(&column) * n_inv
                    })
                    .collect();
                (entries[order[s]].0.clone(), sums)
            })
            .collect();
        Ok(cells)
    }

    fn level(&self, levels: &[i32]) -> Result<Vec<(HaarIndex, ComplexValue)>> {
        let base = self.base();
        let cells = self.level_cells(levels)?;
        let indices: Vec<HaarIndex> = match *levels {
            [j] => indices_at_level(base, j).map(HaarIndex::One).collect(),
            [j1, j2] => crate::haar::indices_at_levels(base, j1, j2).map(HaarIndex::Two).collect(),
            _ => unreachable!(),
        };
        let ls: Vec<usize> = levels.iter().map(|&j| if j < 0 { 1 } else { base.get() as usize - 1 }).collect();
        Ok(indices
            .into_iter()
            .map(|idx| {
                let comps = idx.components();
                let cell: Vec<u64> = comps.iter().map(|c| c.m).collect();
                let slot = comps.iter().zip(&ls).fold(0, |acc, (c, &n)| acc * n + (c.l as usize - 1));
                let counting = cells
                    .binary_search_by(|(c, _)| c.cmp(&cell))
                    .map_or(ZERO, |pos| cells[pos].1[slot]);
                (idx, counting - self.volume(idx))
            })
            .collect())
    }

    /// All coefficients with every level in `-1..=j_max`, in enumeration order.
    pub fn all_upto(&self, j_max: i32) -> Result<Vec<HaarCoefficient>> {
        let dim = self.points.dim();
        let tuples: Vec<Vec<i32>> = match dim {
            1 => (-1..=j_max).map(|j| vec![j]).collect(),
            _ => (-1..=j_max).flat_map(|a| (-1..=j_max).map(move |c| vec![a, c])).collect(),
        };
        let levels = tuples
            .par_iter()
            .map(|t| self.level(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(levels
            .into_iter()
            .flatten()
            .map(|(index, value)| HaarCoefficient { index, value })
            .collect())
    }
}

/// `<t, h_{j,m,l}> = b^{-2j-1} / (w^l - 1)` for `j >= 0`.
pub fn coeff_volume_1d(base: Base, idx: HaarIndex1D) -> Result<ComplexValue> {
    if idx.is_first() {
        return Err(Error::InvalidIndex("level -1 has no volume-part formula; use coeff_1d".into()));
    }
    Ok(volume_factor(&RootTable::new(base), idx))
}

pub fn coeff_counting_1d(points: &PointMultiset, idx: HaarIndex1D) -> Result<ComplexValue> {
    if idx.is_first() {
        return Err(Error::InvalidIndex("level -1 has no counting-part formula; use coeff_1d".into()));
    }
    LocalDiscrepancy::new(points)?.counting(HaarIndex::One(idx))
}

pub fn coeff_1d(points: &PointMultiset, idx: HaarIndex1D) -> Result<ComplexValue> {
    LocalDiscrepancy::new(points)?.coefficient(HaarIndex::One(idx))
}

pub fn coeff_volume_2d(base: Base, idx: HaarIndex2D) -> ComplexValue {
    let roots = RootTable::new(base);
    volume_factor(&roots, idx.0) * volume_factor(&roots, idx.1)
}

pub fn coeff_counting_2d(points: &PointMultiset, idx: HaarIndex2D) -> Result<ComplexValue> {
    LocalDiscrepancy::new(points)?.counting(HaarIndex::Two(idx))
}

pub fn coeff_2d(points: &PointMultiset, idx: HaarIndex2D) -> Result<ComplexValue> {
    LocalDiscrepancy::new(points)?.coefficient(HaarIndex::Two(idx))
}

/// `mu_{-1,0,1}` of the first `count` terms of the symmetrized van der Corput
/// sequence: `0` for even counts, `1/(2N) - phi(M)/N` for `N = 2M + 1`.
pub fn coeff_first_1d_closed(base: Base, count: u64) -> Result<ComplexValue> {
    let r = coeff_first_1d_closed_exact(base, count)?;
    Ok(ComplexValue::new(*r.numer() as f64 / *r.denom() as f64, 0.0))
}

pub fn coeff_first_1d_closed_exact(base: Base, count: u64) -> Result<Ratio<i128>> {
    if count == 0 {
        return Err(Error::InvalidParameter("N must be positive".into()));
    }
    if count % 2 == 0 {
        return Ok(Ratio::from_integer(0));
    }
    let phi = radical_inverse(base, count / 2);
    let phi = Ratio::new(phi.num() as i128, base.pow(phi.exp())? as i128);
    let n = count as i128;
    Ok(Ratio::new(1, 2 * n) - phi / n)
}

/// `mu_{(-1,-1)}` of the scrambled Hammersley set with `N = b^n` points:
/// `(n - 2 l_n)((b-1)^2/(4b) - (1/b^2) sum_a sigma(a) a)/N + 1/(2N) + 1/(4N^2)`.
pub fn coeff_first_2d_closed_exact(base: Base, schedule: &ScrambleSchedule) -> Result<Ratio<i128>> {
    let b = base.get() as i128;
    let n = schedule.n() as i128;
    let big_n = base.pow(schedule.n() as u32)? as i128;
    if big_n > 1 << 60 {
        return Err(Error::Overflow(format!("{base}^{n} too large for exact evaluation")));
    }
    let l = schedule.l_n() as i128;
    let w = schedule.sigma().weighted_sum() as i128;
    let bracket = Ratio::new((b - 1) * (b - 1), 4 * b) - Ratio::new(w, b * b);
    Ok(Ratio::from_integer(n - 2 * l) * bracket / big_n + Ratio::new(1, 2 * big_n) + Ratio::new(1, 4 * big_n * big_n))
}

pub fn coeff_first_2d_closed(base: Base, schedule: &ScrambleSchedule) -> Result<ComplexValue> {
    let r = coeff_first_2d_closed_exact(base, schedule)?;
    Ok(ComplexValue::new(ratio_to_f64(r), 0.0))
}

/// `mu_{(-1,-1)}` of the symmetrized Hammersley set: `1/Ñ + 1/Ñ^2` with
/// `Ñ = 2 b^n`, for every schedule.
pub fn coeff_first_2d_sym_closed_exact(base: Base, n: usize) -> Result<Ratio<i128>> {
    let nt = 2 * base.pow(n as u32)? as i128;
    if nt > 1 << 61 {
        return Err(Error::Overflow(format!("2*{base}^{n} too large for exact evaluation")));
    }
    Ok(Ratio::new(1, nt) + Ratio::new(1, nt * nt))
}

pub fn coeff_first_2d_sym_closed(base: Base, n: usize) -> Result<ComplexValue> {
    Ok(ComplexValue::new(ratio_to_f64(coeff_first_2d_sym_closed_exact(base, n)?), 0.0))
}

pub(crate) fn ratio_to_f64(r: Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
