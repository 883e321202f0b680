//! Coefficients by direct piecewise integration, sharing no formulas with the
//! per-point closed forms.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::haar::{ComplexValue, HaarIndex, HaarIndex1D};
use crate::pointgen::{Base, PointMultiset};

/// One axis of a Haar function as a list of `(lo, hi, value)` pieces.
fn pieces(base: Base, idx: HaarIndex1D) -> Vec<(f64, f64, ComplexValue)> {
    if idx.is_first() {
        return vec![(0.0, 1.0, ComplexValue::new(1.0, 0.0))];
    }
    let b = base.get() as f64;
    let width = b.powi(-idx.j - 1);
    let start = idx.m as f64 * b * width;
    (0..base.get())
        .map(|k| {
            let lo = start + k as f64 * width;
            let phase = TAU * ((k as u64 * idx.l as u64) % base.get() as u64) as f64 / b;
            (lo, lo + width, ComplexValue::from_polar(1.0, phase))
        })
        .collect()
}

/// `int_0^1 1[z < t] h(t) dt`.
fn indicator_integral(pieces: &[(f64, f64, ComplexValue)], z: f64) -> ComplexValue {
    pieces
        .iter()
        .map(|&(lo, hi, v)| v * (hi - lo.max(z)).max(0.0))
        .sum()
}

/// `int_0^1 t h(t) dt`.
fn moment(pieces: &[(f64, f64, ComplexValue)]) -> ComplexValue {
    pieces.iter().map(|&(lo, hi, v)| v * ((hi * hi - lo * lo) / 2.0)).sum()
}

/// Brute-force reference for `<D, h>`.
#[derive(Debug, Clone)]
pub struct CoefficientOracle {
    base: Base,
    dim: usize,
    coords: Vec<Vec<f64>>,
}

impl CoefficientOracle {
    pub fn new(points: &PointMultiset) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("empty point multiset".into()));
        }
        let base = points.base();
        Ok(CoefficientOracle {
            base,
            dim: points.dim(),
            coords: points.points().iter().map(|p| p.to_f64(base)).collect(),
        })
    }

    pub fn coefficient(&self, idx: HaarIndex) -> Result<ComplexValue> {
        if idx.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: idx.dim() });
        }
        let axes: Vec<_> = idx.components().into_iter().map(|c| pieces(self.base, c)).collect();
        let mut counting = ComplexValue::new(0.0, 0.0);
        for x in &self.coords {
            let mut term = ComplexValue::new(1.0, 0.0);
            for (axis, &z) in axes.iter().zip(x) {
                if z >= axis.last().unwrap().1 {
                    term = ComplexValue::new(0.0, 0.0);
                    break;
                }
                term *= indicator_integral(axis, z);
            }
            counting += term;
        }
        let volume: ComplexValue = axes.iter().map(|a| moment(a)).product();
        Ok(counting / self.coords.len() as f64 - volume)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::HaarIndex2D;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_points() {
        let b2 = Base::new(2).unwrap();
        let a = HaarIndex1D::new(b2, 0, 0, 1).unwrap();
        let quarter = PointMultiset::from_1d(b2, &[(1, 2)]).unwrap();
        let o = CoefficientOracle::new(&quarter).unwrap();
        // counting -1/4, volume -1/4
        assert_abs_diff_eq!(o.coefficient(HaarIndex::One(a)).unwrap().re, 0.0, epsilon = 1e-15);

        let p = PointMultiset::from_2d(b2, &[((1, 2), (1, 2))]).unwrap();
        let o = CoefficientOracle::new(&p).unwrap();
        let v = o.coefficient(HaarIndex::Two(HaarIndex2D(a, HaarIndex1D::FIRST))).unwrap();
        assert_abs_diff_eq!(v.re, -3.0 / 16.0 + 0.125, epsilon = 1e-15);
        let v = o.coefficient(HaarIndex::Two(HaarIndex2D::FIRST)).unwrap();
        assert_abs_diff_eq!(v.re, 9.0 / 16.0 - 0.25, epsilon = 1e-15);
    }

    #[test]
    fn empty_interior_gives_pure_volume() {
        let b3 = Base::new(3).unwrap();
        let p = PointMultiset::from_1d(b3, &[(1, 0)]).unwrap();
        let o = CoefficientOracle::new(&p).unwrap();
        assert_abs_diff_eq!(o.coefficient(HaarIndex::One(HaarIndex1D::FIRST)).unwrap().re, -0.5, epsilon = 1e-15);
    }
}
