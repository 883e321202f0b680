//! Exact b-adic rationals and the point containers built from them.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// The integer base `b >= 2` underlying every construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Base(u32);

impl Base {
    pub fn new(b: u32) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidBase(b));
        }
        Ok(Base(b))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// `b^k` as an integer, failing when it does not fit in 64 bits.
    pub fn pow(self, k: u32) -> Result<u64> {
        (self.0 as u64)
            .checked_pow(k)
            .ok_or_else(|| Error::Overflow(format!("{}^{} exceeds u64", self.0, k)))
    }

    /// `b^k` as a float; `k` may be negative.
    #[inline]
    pub fn powf(self, k: i32) -> f64 {
        (self.0 as f64).powi(k)
    }

    /// Smallest `c` with `b^c >= n`, i.e. `ceil(log_b n)` for `n >= 1`.
    pub fn ceil_log(self, n: u64) -> u32 {
        let mut c = 0;
        let mut p: u128 = 1;
        while p < n as u128 {
            p *= self.0 as u128;
            c += 1;
        }
        c
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A coordinate `num / b^exp` in `[0, 1]`, kept in lowest terms.
///
/// The base is not stored; every method that needs it takes it explicitly
/// and the owning [`PointMultiset`] carries it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coord {
    num: u64,
    exp: u32,
}

impl Coord {
    pub const ZERO: Coord = Coord { num: 0, exp: 0 };
    pub const ONE: Coord = Coord { num: 1, exp: 0 };

    /// Builds `num / b^exp`, reducing to lowest terms. The value 1 is allowed.
    pub fn new(base: Base, num: u64, exp: u32) -> Result<Self> {
        let den = base.pow(exp)?;
        if num > den {
            return Err(Error::OutOfDomain(format!("{num}/{base}^{exp} > 1")));
        }
        let b = base.get() as u64;
        let (mut num, mut exp) = (num, exp);
        if num == 0 {
            exp = 0;
        }
        while exp > 0 && num % b == 0 {
            num /= b;
            exp -= 1;
        }
        Ok(Coord { num, exp })
    }

    #[inline]
    pub fn num(self) -> u64 {
        self.num
    }

    /// Exponent `k` of the denominator `b^k` in lowest terms.
    #[inline]
    pub fn exp(self) -> u32 {
        self.exp
    }

    pub fn is_one(self) -> bool {
        self == Coord::ONE
    }

    pub fn to_f64(self, base: Base) -> f64 {
        self.num as f64 / base.powf(self.exp as i32)
    }

    /// `1 - self`.
    pub fn complement(self, base: Base) -> Coord {
        let den = base.pow(self.exp).expect("denominator was validated on construction");
        Coord::new(base, den - self.num, self.exp).expect("complement stays in [0,1]")
    }

    /// Splits `self * b^level` into `(floor, rem, q)` with
    /// `self * b^level = floor + rem / q` and `0 <= rem < q`.
    pub fn scaled_floor(self, base: Base, level: u32) -> Result<(u64, u64, u64)> {
        if self.exp <= level {
            let s = self
                .num
                .checked_mul(base.pow(level - self.exp)?)
                .ok_or_else(|| Error::Overflow(format!("coordinate scaled by {base}^{level}")))?;
            Ok((s, 0, 1))
        } else {
            let q = base.pow(self.exp - level)?;
            Ok((self.num / q, self.num % q, q))
        }
    }

    /// Exact comparison of two coordinates over the same base.
    pub fn cmp_in(self, other: Coord, base: Base) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = self.num as u128 * base.pow(e - self.exp).unwrap() as u128;
        let c = other.num as u128 * base.pow(e - other.exp).unwrap() as u128;
        a.cmp(&c)
    }
}

/// A point of dimension one or two with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPoint(Vec<Coord>);

impl RationalPoint {
    pub fn new(coords: Vec<Coord>) -> Self {
        RationalPoint(coords)
    }

    pub fn coords(&self) -> &[Coord] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_f64(&self, base: Base) -> Vec<f64> {
        self.0.iter().map(|c| c.to_f64(base)).collect()
    }
}

/// Provenance of a point multiset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    /// Classical van der Corput sequence.
    Vdc,
    /// Symmetrized van der Corput sequence.
    VdcSym,
    /// The reflected sequence `1 - phi_b(n)`.
    VdcReflected,
    /// Classical Hammersley point set.
    Ham,
    /// Digit-scrambled Hammersley point set.
    HamScrambled,
    /// Symmetrized Hammersley point set.
    HamSym,
    /// Anything else, e.g. a hand-built fixture or a file of points.
    Custom,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Vdc => "vdc",
            Label::VdcSym => "vdc-sym",
            Label::VdcReflected => "vdc-refl",
            Label::Ham => "ham",
            Label::HamScrambled => "ham-scrambled",
            Label::HamSym => "ham-sym",
            Label::Custom => "custom",
        }
    }

    pub fn is_hammersley(self) -> bool {
        matches!(self, Label::Ham | Label::HamScrambled | Label::HamSym)
    }
}

impl std::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "vdc" => Label::Vdc,
            "vdc-sym" => Label::VdcSym,
            "vdc-refl" => Label::VdcReflected,
            "ham" => Label::Ham,
            "ham-scrambled" => Label::HamScrambled,
            "ham-sym" => Label::HamSym,
            "custom" => Label::Custom,
            other => return Err(Error::Parse(format!("unknown family label '{other}'"))),
        })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An ordered multiset of points sharing a base and a dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMultiset {
    base: Base,
    dim: usize,
    label: Label,
    /// Construction parameter: the count `N` for sequences, the digit count
    /// `n` for Hammersley sets.
    param: u64,
    points: Vec<RationalPoint>,
}

impl PointMultiset {
    pub fn new(
        base: Base,
        dim: usize,
        label: Label,
        param: u64,
        points: Vec<RationalPoint>,
    ) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidParameter(format!("dimension {dim} not supported")));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, actual: p.dim() });
        }
        Ok(PointMultiset { base, dim, label, param, points })
    }

    /// A custom one-dimensional multiset from `(num, exp)` pairs.
    pub fn from_1d(base: Base, coords: &[(u64, u32)]) -> Result<Self> {
        let points = coords
            .iter()
            .map(|&(n, e)| Ok(RationalPoint::new(vec![Coord::new(base, n, e)?])))
            .collect::<Result<Vec<_>>>()?;
        let len = points.len() as u64;
        PointMultiset::new(base, 1, Label::Custom, len, points)
    }

    /// A custom two-dimensional multiset from pairs of `(num, exp)`.
    pub fn from_2d(base: Base, coords: &[((u64, u32), (u64, u32))]) -> Result<Self> {
        let points = coords
            .iter()
            .map(|&((n1, e1), (n2, e2))| {
                Ok(RationalPoint::new(vec![Coord::new(base, n1, e1)?, Coord::new(base, n2, e2)?]))
            })
            .collect::<Result<Vec<_>>>()?;
        let len = points.len() as u64;
        PointMultiset::new(base, 2, Label::Custom, len, points)
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn param(&self) -> u64 {
        self.param
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Coordinates of axis `i` in point order.
    pub fn axis(&self, i: usize) -> impl Iterator<Item = Coord> + '_ {
        self.points.iter().map(move |p| p.coords()[i])
    }

    /// Largest denominator exponent along axis `i`. Every coordinate is a
    /// left endpoint of some b-adic interval on any level at or above it.
    pub fn max_exp(&self, i: usize) -> u32 {
        self.axis(i).map(Coord::exp).max().unwrap_or(0)
    }

    /// Multiset union, keeping duplicates. Labels and params are taken from
    /// the caller.
    pub fn concat(&self, other: &PointMultiset, label: Label, param: u64) -> Result<Self> {
        if self.base != other.base {
            return Err(Error::InvalidParameter("cannot union point sets of different bases".into()));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: other.dim });
        }
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        PointMultiset::new(self.base, self.dim, label, param, points)
    }

    /// Points sorted lexicographically by exact value; used for multiset
    /// comparisons.
    pub fn sorted_points(&self) -> Vec<RationalPoint> {
        let base = self.base;
        let mut pts = self.points.clone();
        pts.sort_by(|a, b| {
            a.coords()
                .iter()
                .zip(b.coords())
                .map(|(x, y)| x.cmp_in(*y, base))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        });
        pts
    }

    /// Equality as multisets (order ignored, multiplicities respected).
    pub fn same_multiset(&self, other: &PointMultiset) -> bool {
        self.base == other.base && self.dim == other.dim && self.sorted_points() == other.sorted_points()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u32) -> Base {
        Base::new(n).unwrap()
    }

    #[test]
    fn base_rejects_small_values() {
        assert_eq!(Base::new(1), Err(Error::InvalidBase(1)));
        assert!(Base::new(0).is_err());
    }

    #[test]
    fn ceil_log_matches_definition() {
        assert_eq!(b(2).ceil_log(1), 0);
        assert_eq!(b(2).ceil_log(2), 1);
        assert_eq!(b(2).ceil_log(3), 2);
        assert_eq!(b(2).ceil_log(128), 7);
        assert_eq!(b(3).ceil_log(10), 3);
    }

    #[test]
    fn coords_are_reduced() {
        let c = Coord::new(b(2), 4, 3).unwrap();
        assert_eq!((c.num(), c.exp()), (1, 1));
        assert_eq!(Coord::new(b(3), 0, 5).unwrap(), Coord::ZERO);
        assert_eq!(Coord::new(b(5), 25, 2).unwrap(), Coord::ONE);
        assert!(Coord::new(b(2), 5, 2).is_err());
    }

    #[test]
    fn scaled_floor_splits_exactly() {
        // 7/9 * 3 = 2 + 1/3
        let c = Coord::new(b(3), 7, 2).unwrap();
        assert_eq!(c.scaled_floor(b(3), 1).unwrap(), (2, 1, 3));
        assert_eq!(c.scaled_floor(b(3), 2).unwrap(), (7, 0, 1));
        assert_eq!(c.scaled_floor(b(3), 4).unwrap(), (63, 0, 1));
        assert!(c.scaled_floor(b(3), 60).is_err());
    }

    #[test]
    fn complement_and_comparison() {
        let c = Coord::new(b(3), 1, 1).unwrap();
        assert_eq!(c.complement(b(3)), Coord::new(b(3), 2, 1).unwrap());
        assert_eq!(Coord::ZERO.complement(b(3)), Coord::ONE);
        let d = Coord::new(b(3), 4, 2).unwrap();
        assert_eq!(c.cmp_in(d, b(3)), Ordering::Less);
    }

    #[test]
    fn multiset_rejects_mixed_dimensions() {
        let p1 = RationalPoint::new(vec![Coord::ZERO]);
        let p2 = RationalPoint::new(vec![Coord::ZERO, Coord::ZERO]);
        assert!(PointMultiset::new(b(2), 1, Label::Custom, 2, vec![p1, p2]).is_err());
    }
}
