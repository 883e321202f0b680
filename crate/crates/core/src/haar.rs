//! b-adic intervals, Haar functions and their index sets.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pointgen::{Base, Coord};

/// Complex values used for roots of unity and coefficients.
pub type ComplexValue = Complex64;

/// A one-dimensional index `(j, m, l)` with `j >= -1`, `m < b^j`, `1 <= l < b`.
/// Level `-1` is the constant function with `(m, l) = (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HaarIndex1D {
    pub j: i32,
    pub m: u64,
    pub l: u32,
}

impl HaarIndex1D {
    pub const FIRST: HaarIndex1D = HaarIndex1D { j: -1, m: 0, l: 1 };

    pub fn new(base: Base, j: i32, m: u64, l: u32) -> Result<Self> {
        if j < -1 {
            return Err(Error::InvalidIndex(format!("level {j} below -1")));
        }
        if j == -1 {
            if (m, l) != (0, 1) {
                return Err(Error::InvalidIndex(format!("level -1 requires (m, l) = (0, 1), got ({m}, {l})")));
            }
            return Ok(HaarIndex1D::FIRST);
        }
        let count = base
            .pow(j as u32)
            .map_err(|_| Error::InvalidIndex(format!("level {j} too deep for base {base}")))?;
        if base.pow(j as u32 + 1).is_err() {
            return Err(Error::InvalidIndex(format!("level {j} too deep for base {base}")));
        }
        if m >= count {
            return Err(Error::InvalidIndex(format!("position {m} not below {base}^{j}")));
        }
        if l == 0 || l >= base.get() {
            return Err(Error::InvalidIndex(format!("l = {l} outside 1..{base}")));
        }
        Ok(HaarIndex1D { j, m, l })
    }

    pub fn is_first(self) -> bool {
        self.j == -1
    }

    /// `max(0, j)`.
    pub fn level(self) -> u32 {
        self.j.max(0) as u32
    }

    pub fn interval(self) -> BadicInterval {
        BadicInterval { j: self.j, m: self.m }
    }
}

impl fmt::Display for HaarIndex1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.j, self.m, self.l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HaarIndex2D(pub HaarIndex1D, pub HaarIndex1D);

impl HaarIndex2D {
    pub const FIRST: HaarIndex2D = HaarIndex2D(HaarIndex1D::FIRST, HaarIndex1D::FIRST);

    /// `|j| = max(0, j1) + max(0, j2)`.
    pub fn level_sum(self) -> u32 {
        self.0.level() + self.1.level()
    }

    pub fn components(self) -> [HaarIndex1D; 2] {
        [self.0, self.1]
    }
}

impl fmt::Display for HaarIndex2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.0, self.1)
    }
}

/// A Haar index in either supported dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HaarIndex {
    One(HaarIndex1D),
    Two(HaarIndex2D),
}

impl HaarIndex {
    pub fn dim(self) -> usize {
        match self {
            HaarIndex::One(_) => 1,
            HaarIndex::Two(_) => 2,
        }
    }

    pub fn components(&self) -> Vec<HaarIndex1D> {
        match *self {
            HaarIndex::One(i) => vec![i],
            HaarIndex::Two(i) => vec![i.0, i.1],
        }
    }
}

impl From<HaarIndex1D> for HaarIndex {
    fn from(i: HaarIndex1D) -> Self {
        HaarIndex::One(i)
    }
}

impl From<HaarIndex2D> for HaarIndex {
    fn from(i: HaarIndex2D) -> Self {
        HaarIndex::Two(i)
    }
}

impl fmt::Display for HaarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HaarIndex::One(i) => i.fmt(f),
            HaarIndex::Two(i) => i.fmt(f),
        }
    }
}

/// `I_{j,m} = [m / b^j, (m + 1) / b^j)`; level `-1` is `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BadicInterval {
    pub j: i32,
    pub m: u64,
}

impl BadicInterval {
    fn level(self) -> u32 {
        self.j.max(0) as u32
    }

    pub fn left(self, base: Base) -> Result<Coord> {
        Coord::new(base, self.m, self.level())
    }

    pub fn right(self, base: Base) -> Result<Coord> {
        Coord::new(base, self.m + 1, self.level())
    }

    pub fn length(self, base: Base) -> f64 {
        base.powf(-(self.level() as i32))
    }

    /// `I^k_{j,m} = I_{j+1, bm+k}`. The children of level `-1` are those of
    /// level 0.
    pub fn child(self, base: Base, k: u32) -> BadicInterval {
        let parent = if self.j == -1 { BadicInterval { j: 0, m: 0 } } else { self };
        BadicInterval { j: parent.j + 1, m: parent.m * base.get() as u64 + k as u64 }
    }

    pub fn contains(self, base: Base, t: Coord) -> bool {
        let (lo, hi) = (self.left(base).unwrap(), self.right(base).unwrap());
        lo.cmp_in(t, base).is_le() && t.cmp_in(hi, base).is_lt()
    }
}

/// Child digit `k` with `t` in `I^k_{j,m}`, or `None` when `t` lies outside
/// `I_{j,m}`. Exact. Level `-1` reports `Some(0)`, where the Haar function
/// takes the value 1.
pub fn locate_child(base: Base, j: i32, m: u64, t: Coord) -> Option<u32> {
    if j < 0 {
        return (!t.is_one()).then_some(0);
    }
    let (s, _, _) = scaled_floor_wide(base, t, j as u32 + 1)?;
    let b = base.get() as u128;
    (s / b == m as u128).then(|| (s % b) as u32)
}

/// `floor(t b^level)` and the remainder `t b^level - floor` as
/// `(floor, rem, q)` with the remainder `rem / q`, in 128-bit arithmetic.
pub(crate) fn scaled_floor_wide(base: Base, t: Coord, level: u32) -> Option<(u128, u128, u128)> {
    let b = base.get() as u128;
    if t.exp() <= level {
        let s = (t.num() as u128).checked_mul(b.checked_pow(level - t.exp())?)?;
        Some((s, 0, 1))
    } else {
        let q = b.checked_pow(t.exp() - level)?;
        Some((t.num() as u128 / q, t.num() as u128 % q, q))
    }
}

/// Floating-point variant of [`locate_child`] for evaluation at real `t`.
pub fn locate_child_f64(base: Base, j: i32, m: u64, t: f64) -> Option<u32> {
    if j < 0 {
        return (0.0..1.0).contains(&t).then_some(0);
    }
    let s = (t * base.powf(j + 1)).floor();
    if s < 0.0 {
        return None;
    }
    let s = s as u128;
    let b = base.get() as u128;
    (s / b == m as u128).then(|| (s % b) as u32)
}

/// The `b`-th roots of unity `e^{2 pi i e / b}` and their partial sums.
#[derive(Debug, Clone)]
pub struct RootTable {
    base: Base,
    roots: Vec<ComplexValue>,
    /// `prefix[l * b + k] = sum_{r < k} omega^{r l}`
    prefix: Vec<ComplexValue>,
}

impl RootTable {
    pub fn new(base: Base) -> Self {
        let b = base.get() as usize;
        let roots: Vec<ComplexValue> = (0..b)
            .map(|e| match e {
                0 => ComplexValue::new(1.0, 0.0),
                _ => ComplexValue::from_polar(1.0, TAU * e as f64 / b as f64),
            })
            .collect();
        let mut prefix = vec![ComplexValue::new(0.0, 0.0); b * b];
        for l in 0..b {
            for k in 1..b {
                prefix[l * b + k] = prefix[l * b + k - 1] + roots[(k - 1) * l % b];
            }
        }
        RootTable { base, roots, prefix }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    /// `omega^e` for any integer exponent.
    #[inline]
    pub fn pow(&self, e: u64) -> ComplexValue {
        self.roots[(e % self.roots.len() as u64) as usize]
    }

    /// `sum_{r < k} omega^{r l}`.
    #[inline]
    pub fn prefix(&self, l: u32, k: u32) -> ComplexValue {
        let b = self.roots.len();
        self.prefix[(l as usize % b) * b + k as usize]
    }

    /// `omega^l - 1`.
    #[inline]
    pub fn omega_minus_one(&self, l: u32) -> ComplexValue {
        self.pow(l as u64) - 1.0
    }
}

pub fn haar_eval_1d(base: Base, idx: HaarIndex1D, t: f64) -> Result<ComplexValue> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::OutOfDomain(format!("t = {t} outside [0, 1)")));
    }
    if idx.is_first() {
        return Ok(ComplexValue::new(1.0, 0.0));
    }
    Ok(match locate_child_f64(base, idx.j, idx.m, t) {
        Some(k) => RootTable::new(base).pow(k as u64 * idx.l as u64),
        None => ComplexValue::new(0.0, 0.0),
    })
}

pub fn haar_eval_2d(base: Base, idx: HaarIndex2D, t: [f64; 2]) -> Result<ComplexValue> {
    Ok(haar_eval_1d(base, idx.0, t[0])? * haar_eval_1d(base, idx.1, t[1])?)
}

/// All 1D indices on level `j`, positions ascending then `l` ascending.
pub fn indices_at_level(base: Base, j: i32) -> impl Iterator<Item = HaarIndex1D> + Clone {
    let (count, ls) = if j < 0 { (1, 1) } else { (base.pow(j as u32).unwrap(), base.get() - 1) };
    (0..count).flat_map(move |m| (0..ls).map(move |l| HaarIndex1D { j, m, l: if j < 0 { 1 } else { l + 1 } }))
}

/// All 2D indices on the level pair `(j1, j2)`.
pub fn indices_at_levels(base: Base, j1: i32, j2: i32) -> impl Iterator<Item = HaarIndex2D> {
    indices_at_level(base, j1).flat_map(move |a| indices_at_level(base, j2).map(move |c| HaarIndex2D(a, c)))
}

/// Every index with each level in `-1..=j_max`, levels outer and positions
/// inner.
pub fn enumerate_indices(base: Base, dim: usize, j_max: i32) -> Result<Box<dyn Iterator<Item = HaarIndex>>> {
    if j_max < -1 {
        return Err(Error::InvalidParameter(format!("j_max = {j_max} below -1")));
    }
    HaarIndex1D::new(base, j_max.max(0), 0, 1)?;
    match dim {
        1 => Ok(Box::new((-1..=j_max).flat_map(move |j| indices_at_level(base, j).map(HaarIndex::One)))),
        2 => Ok(Box::new((-1..=j_max).flat_map(move |j1| {
            (-1..=j_max).flat_map(move |j2| indices_at_levels(base, j1, j2).map(HaarIndex::Two))
        }))),
        d => Err(Error::InvalidParameter(format!("dimension {d} not supported"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn b(n: u32) -> Base {
        Base::new(n).unwrap()
    }

    fn idx(base: u32, j: i32, m: u64, l: u32) -> HaarIndex1D {
        HaarIndex1D::new(b(base), j, m, l).unwrap()
    }

    #[test]
    fn index_validation() {
        assert!(HaarIndex1D::new(b(2), -1, 0, 1).is_ok());
        assert!(HaarIndex1D::new(b(2), -1, 1, 1).is_err());
        assert!(HaarIndex1D::new(b(2), 1, 2, 1).is_err());
        assert!(HaarIndex1D::new(b(3), 0, 0, 3).is_err());
        assert!(HaarIndex1D::new(b(3), 0, 0, 0).is_err());
        assert!(HaarIndex1D::new(b(2), -2, 0, 1).is_err());
    }

    #[test]
    fn eval_1d_examples() {
        assert_eq!(haar_eval_1d(b(2), idx(2, 0, 0, 1), 0.25).unwrap(), ComplexValue::new(1.0, 0.0));
        assert_abs_diff_eq!(haar_eval_1d(b(2), idx(2, 0, 0, 1), 0.75).unwrap().re, -1.0, epsilon = 1e-15);
        let v = haar_eval_1d(b(3), idx(3, 0, 0, 1), 0.5).unwrap();
        assert_abs_diff_eq!(v.re, -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 0.866025403784, epsilon = 1e-12);
        assert_eq!(haar_eval_1d(b(2), idx(2, 1, 0, 1), 0.9).unwrap(), ComplexValue::new(0.0, 0.0));
        assert!(haar_eval_1d(b(2), idx(2, 0, 0, 1), 1.0).is_err());
        assert!(haar_eval_1d(b(2), idx(2, 0, 0, 1), -0.1).is_err());
    }

    #[test]
    fn eval_2d_examples() {
        assert_eq!(haar_eval_2d(b(2), HaarIndex2D::FIRST, [0.3, 0.7]).unwrap(), ComplexValue::new(1.0, 0.0));
        let v = haar_eval_2d(b(2), HaarIndex2D(idx(2, 0, 0, 1), idx(2, 0, 0, 1)), [0.25, 0.75]).unwrap();
        assert_abs_diff_eq!(v.re, -1.0, epsilon = 1e-15);
        let v = haar_eval_2d(b(2), HaarIndex2D(idx(2, 0, 0, 1), idx(2, 1, 1, 1)), [0.25, 0.25]).unwrap();
        assert_eq!(v, ComplexValue::new(0.0, 0.0));
    }

    #[test]
    fn locate_child_examples() {
        let c = |base, num, exp| Coord::new(b(base), num, exp).unwrap();
        assert_eq!(locate_child(b(2), 0, 0, c(2, 3, 2)), Some(1));
        assert_eq!(locate_child(b(3), 1, 2, c(3, 2, 1)), Some(0));
        assert_eq!(locate_child(b(2), 1, 0, c(2, 3, 2)), None);
        assert_eq!(locate_child(b(2), 0, 0, Coord::ONE), None);
        assert_eq!(locate_child(b(2), 20, 0, Coord::ZERO), Some(0));
        assert_eq!(locate_child_f64(b(2), 0, 0, 0.75), Some(1));
        assert_eq!(locate_child_f64(b(3), 1, 2, 2.0 / 3.0), Some(0));
    }

    #[test]
    fn children_partition_parent() {
        for base in [2, 3, 5] {
            let bb = b(base);
            for j in -1..3 {
                for iv in indices_at_level(bb, j).map(|i| i.interval()) {
                    let kids: Vec<_> = (0..base).map(|k| iv.child(bb, k)).collect();
                    assert_eq!(kids[0].left(bb).unwrap(), iv.left(bb).unwrap());
                    assert_eq!(kids[base as usize - 1].right(bb).unwrap(), iv.right(bb).unwrap());
                    for w in kids.windows(2) {
                        assert_eq!(w[0].right(bb).unwrap(), w[1].left(bb).unwrap());
                    }
                    let total: f64 = kids.iter().map(|k| k.length(bb)).sum();
                    assert_abs_diff_eq!(total, iv.length(bb), epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn orthonormal_up_to_level_two() {
        for base in [2u32, 3] {
            let bb = b(base);
            let all: Vec<HaarIndex1D> = (-1..=2).flat_map(|j| indices_at_level(bb, j)).collect();
            // every function is constant on cells of level 3
            let cells = bb.pow(3).unwrap();
            let mids: Vec<f64> = (0..cells).map(|c| (c as f64 + 0.5) / cells as f64).collect();
            for a in &all {
                for c in &all {
                    let na = (bb.powf(a.level() as i32)).sqrt();
                    let nc = (bb.powf(c.level() as i32)).sqrt();
                    let ip: ComplexValue = mids
                        .iter()
                        .map(|&t| {
                            haar_eval_1d(bb, *a, t).unwrap() * haar_eval_1d(bb, *c, t).unwrap().conj()
                        })
                        .sum::<ComplexValue>()
                        * (na * nc / cells as f64);
                    let expected = if a == c { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(ip.re, expected, epsilon = 1e-12);
                    assert_abs_diff_eq!(ip.im, 0.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn root_sums_vanish() {
        for base in 2..=16 {
            let t = RootTable::new(b(base));
            for l in 1..base {
                let s: ComplexValue = (0..base).map(|k| t.pow(k as u64 * l as u64)).sum();
                assert!(s.norm() < 1e-13, "b={base} l={l}");
                assert!((t.prefix(l, base - 1) + t.pow(((base - 1) * l) as u64)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn inverse_square_root_distances() {
        assert_eq!(RootTable::new(b(2)).omega_minus_one(1).norm_sqr().recip(), 0.25);
        for base in 2..=16u32 {
            let t = RootTable::new(b(base));
            let s: f64 = (1..base).map(|l| t.omega_minus_one(l).norm_sqr().recip()).sum();
            let expected = (base as f64 * base as f64 - 1.0) / 12.0;
            assert_abs_diff_eq!(s, expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn enumeration_order_and_counts() {
        let one: Vec<_> = enumerate_indices(b(2), 1, 0).unwrap().collect();
        assert_eq!(one, vec![HaarIndex::One(HaarIndex1D::FIRST), HaarIndex::One(idx(2, 0, 0, 1))]);
        assert_eq!(indices_at_level(b(3), 1).count(), 6);
        assert_eq!(enumerate_indices(b(2), 2, 0).unwrap().count(), 4);
        assert_eq!(enumerate_indices(b(3), 1, 2).unwrap().count(), 1 + 2 + 6 + 18);
        let levels: Vec<i32> = enumerate_indices(b(3), 1, 2)
            .unwrap()
            .map(|i| i.components()[0].j)
            .collect();
        assert!(levels.windows(2).all(|w| w[0] <= w[1]));
        assert!(enumerate_indices(b(2), 3, 1).is_err());
    }
}
