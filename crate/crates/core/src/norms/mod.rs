//! Local discrepancy, L_p norms and the discrete Besov quasi-norm.

mod besov;
pub mod quadrature;

use rayon::prelude::*;

pub use besov::{besov_quasinorm, BesovParams, Exponent, NormMethod, NormReport};

use crate::error::{Error, Result};
use crate::pointgen::PointMultiset;
use crate::sum::pairwise_sum;

/// `#{x : x_i < t_i for all i} / N - prod t_i`.
pub fn local_discrepancy(points: &PointMultiset, t: &[f64]) -> Result<f64> {
    if t.len() != points.dim() {
        return Err(Error::DimensionMismatch { expected: points.dim(), actual: t.len() });
    }
    if let Some(bad) = t.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::OutOfDomain(format!("t component {bad} outside [0, 1]")));
    }
    if points.is_empty() {
        return Err(Error::InvalidParameter("empty point multiset".into()));
    }
    let base = points.base();
    let count = points
        .points()
        .iter()
        .filter(|p| p.coords().iter().zip(t).all(|(c, &ti)| c.to_f64(base) < ti))
        .count();
    Ok(count as f64 / points.len() as f64 - t.iter().product::<f64>())
}

/// `sign(u) |u|^{p+1} / (p+1)`, an antiderivative of `|u|^p` in `u`.
#[inline]
fn signed_power(u: f64, p: f64) -> f64 {
    u.signum() * u.abs().powf(p + 1.0) / (p + 1.0)
}

fn is_even_integer(p: f64) -> bool {
    p.fract() == 0.0 && (p as u64) % 2 == 0 && p <= 64.0
}

/// Sorted distinct coordinates on one axis, padded with 0 and 1.
fn breakpoints(points: &PointMultiset, axis: usize) -> Vec<f64> {
    let base = points.base();
    let mut v: Vec<f64> = points.axis(axis).map(|c| c.to_f64(base)).collect();
    v.push(0.0);
    v.push(1.0);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// `int_{lo1}^{hi1} int_{lo2}^{hi2} (a - t1 t2)^p` for even integer `p`,
/// expanded around the cell centre so that no large terms cancel.
fn rect_even(a: f64, lo1: f64, hi1: f64, lo2: f64, hi2: f64, p: usize) -> f64 {
    let (c1, h1) = ((lo1 + hi1) / 2.0, (hi1 - lo1) / 2.0);
    let (c2, h2) = ((lo2 + hi2) / 2.0, (hi2 - lo2) / 2.0);
    // a - t1 t2 = d0 + e s + f u + g s u with s, u in [-1, 1]
    let base = [[a - c1 * c2, -c1 * h2], [-c2 * h1, -h1 * h2]];
    let mut poly = vec![vec![0.0; p + 1]; p + 1];
    poly[0][0] = 1.0;
    for deg in 0..p {
        let mut next = vec![vec![0.0; p + 1]; p + 1];
        for i in 0..=deg {
            for k in 0..=deg {
                let c = poly[i][k];
                if c == 0.0 {
                    continue;
                }
                for (di, row) in base.iter().enumerate() {
                    for (dk, &bv) in row.iter().enumerate() {
                        next[i + di][k + dk] += c * bv;
                    }
                }
            }
        }
        poly = next;
    }
    let moment = |i: usize| if i % 2 == 0 { 2.0 / (i as f64 + 1.0) } else { 0.0 };
    let mut acc = 0.0;
    for (i, row) in poly.iter().enumerate().step_by(2) {
        for (k, &c) in row.iter().enumerate().step_by(2) {
            acc += c * moment(i) * moment(k);
        }
    }
    acc * h1 * h2
}

/// The same integral for any real `p >= 1`: analytic in `t2`, Gauss-Legendre
/// in `t1` on pieces split where the inner integrand changes sign at a cell
/// edge.
fn rect_general(a: f64, lo1: f64, hi1: f64, lo2: f64, hi2: f64, p: f64) -> f64 {
    let mut cuts = vec![lo1];
    for edge in [lo2, hi2] {
        if edge > 0.0 {
            let t = a / edge;
            if t > lo1 && t < hi1 {
                cuts.push(t);
            }
        }
    }
    cuts.push(hi1);
    cuts.sort_by(f64::total_cmp);
    let inner = |t1: f64| {
        let (u_lo, u_hi) = (a - t1 * lo2, a - t1 * hi2);
        if t1 * (hi2 - lo2) < 1e-3 * u_lo.abs().max(u_hi.abs()) || t1 == 0.0 {
            // the integrand keeps its sign here and the difference quotient
            // below would cancel
            quadrature::integrate(lo2, hi2, |t2| (a - t1 * t2).abs().powf(p))
        } else {
            (signed_power(u_lo, p) - signed_power(u_hi, p)) / t1
        }
    };
    cuts.windows(2).map(|w| quadrature::integrate(w[0], w[1], inner)).sum()
}

/// `(int |D|^p)^{1/p}` by exact cell decomposition.
pub fn lp_norm(points: &PointMultiset, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("p = {p} must be finite and >= 1")));
    }
    if points.is_empty() {
        return Err(Error::InvalidParameter("empty point multiset".into()));
    }
    let n = points.len() as f64;
    let base = points.base();
    let total = match points.dim() {
        1 => {
            let xs = breakpoints(points, 0);
            let mut coords: Vec<f64> = points.axis(0).map(|c| c.to_f64(base)).collect();
            coords.sort_by(f64::total_cmp);
            let mut seen = 0usize;
            let terms: Vec<f64> = xs
                .windows(2)
                .map(|w| {
                    while seen < coords.len() && coords[seen] <= w[0] {
                        seen += 1;
                    }
                    let a = seen as f64 / n;
                    signed_power(a - w[0], p) - signed_power(a - w[1], p)
                })
                .collect();
            pairwise_sum(&terms)
        }
        _ => {
            let xs = breakpoints(points, 0);
            let ys = breakpoints(points, 1);
            let (nx, ny) = (xs.len(), ys.len());
            // counts[i * ny + k] = #{x <= xs[i], y <= ys[k]}
            let mut counts = vec![0u32; nx * ny];
            for pt in points.points() {
                let v = pt.to_f64(base);
                let i = xs.binary_search_by(|x| x.total_cmp(&v[0])).unwrap();
                let k = ys.binary_search_by(|y| y.total_cmp(&v[1])).unwrap();
                counts[i * ny + k] += 1;
            }
            for i in 0..nx {
                for k in 0..ny {
                    let mut c = counts[i * ny + k];
                    if i > 0 {
                        c += counts[(i - 1) * ny + k];
                    }
                    if k > 0 {
                        c += counts[i * ny + k - 1];
                    }
                    if i > 0 && k > 0 {
                        c -= counts[(i - 1) * ny + k - 1];
                    }
                    counts[i * ny + k] = c;
                }
            }
            let even = is_even_integer(p);
            let rows: Vec<f64> = (0..nx - 1)
                .into_par_iter()
                .map(|i| {
                    let terms: Vec<f64> = (0..ny - 1)
                        .map(|k| {
                            let a = counts[i * ny + k] as f64 / n;
                            if even {
                                rect_even(a, xs[i], xs[i + 1], ys[k], ys[k + 1], p as usize)
                            } else {
                                rect_general(a, xs[i], xs[i + 1], ys[k], ys[k + 1], p)
                            }
                        })
                        .collect();
                    pairwise_sum(&terms)
                })
                .collect();
            pairwise_sum(&rows)
        }
    };
    Ok(total.max(0.0).powf(1.0 / p))
}

/// The L2 norm of the local discrepancy from the closed pairwise formula
/// `3^{-s} - (2/N) sum prod (1 - x^2)/2 + (1/N^2) sum sum prod (1 - max)`.
pub fn warnock_l2(points: &PointMultiset) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("empty point multiset".into()));
    }
    let base = points.base();
    let xs: Vec<Vec<f64>> = points.points().iter().map(|p| p.to_f64(base)).collect();
    let n = xs.len() as f64;
    let s = points.dim() as i32;
    let single: Vec<f64> = xs.iter().map(|x| x.iter().map(|v| (1.0 - v * v) / 2.0).product()).collect();
    let rows: Vec<f64> = xs
        .par_iter()
        .map(|x| {
            let terms: Vec<f64> = xs
                .iter()
                .map(|y| x.iter().zip(y).map(|(a, b)| 1.0 - a.max(*b)).product())
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    let sq = 3f64.powi(-s) - 2.0 / n * pairwise_sum(&single) + pairwise_sum(&rows) / (n * n);
    Ok(sq.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointgen::{hammersley_symmetrized, vdc_symmetrized, Base, Permutation, ScrambleSchedule};
    use approx::assert_abs_diff_eq;

    fn b(n: u32) -> Base {
        Base::new(n).unwrap()
    }

    #[test]
    fn local_discrepancy_examples() {
        let p = PointMultiset::from_2d(b(2), &[((0, 0), (0, 0))]).unwrap();
        assert_eq!(local_discrepancy(&p, &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(local_discrepancy(&p, &[1.0, 1.0]).unwrap(), 0.0);
        let v = vdc_symmetrized(b(2), 2).unwrap();
        assert_eq!(local_discrepancy(&v, &[0.5]).unwrap(), 0.0);
        assert!(local_discrepancy(&v, &[1.5]).is_err());
        assert!(local_discrepancy(&v, &[0.5, 0.5]).is_err());
    }

    #[test]
    fn single_origin_point() {
        let p1 = PointMultiset::from_1d(b(2), &[(0, 0)]).unwrap();
        assert_abs_diff_eq!(lp_norm(&p1, 2.0).unwrap(), (1.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(warnock_l2(&p1).unwrap(), (1.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        let p2 = PointMultiset::from_2d(b(2), &[((0, 0), (0, 0))]).unwrap();
        assert_abs_diff_eq!(lp_norm(&p2, 2.0).unwrap(), (11.0f64 / 18.0).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(warnock_l2(&p2).unwrap(), (11.0f64 / 18.0).sqrt(), epsilon = 1e-15);
        let at_one = PointMultiset::from_1d(b(2), &[(1, 0)]).unwrap();
        assert_abs_diff_eq!(warnock_l2(&at_one).unwrap(), (1.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(lp_norm(&at_one, 2.0).unwrap(), (1.0f64 / 3.0).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn general_p_agrees_with_even_formula() {
        let s = ScrambleSchedule::new(Permutation::identity(b(3)), vec![true, false]).unwrap();
        let h = hammersley_symmetrized(b(3), 2, &s).unwrap();
        for p in [2.0, 4.0] {
            let even = lp_norm(&h, p).unwrap();
            let general = lp_norm(&h, p + 1e-12).unwrap();
            assert_abs_diff_eq!(even, general, epsilon = 1e-10);
        }
    }

    #[test]
    fn l1_of_single_point_2d() {
        // int int (1 - t1 t2) = 3/4
        let p2 = PointMultiset::from_2d(b(2), &[((0, 0), (0, 0))]).unwrap();
        assert_abs_diff_eq!(lp_norm(&p2, 1.0).unwrap(), 0.75, epsilon = 1e-14);
        // D = -t1 t2 when the point sits at (1, 1)
        let far = PointMultiset::from_2d(b(2), &[((1, 0), (1, 0))]).unwrap();
        assert_abs_diff_eq!(lp_norm(&far, 3.0).unwrap(), (1.0f64 / 16.0).powf(1.0 / 3.0), epsilon = 1e-14);
    }

    #[test]
    fn one_dimensional_l1_with_sign_change() {
        // D = 1/2 - t on [0, 1) for the points {0, 1}
        let v = vdc_symmetrized(b(2), 2).unwrap();
        assert_abs_diff_eq!(lp_norm(&v, 1.0).unwrap(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_p() {
        let v = vdc_symmetrized(b(2), 2).unwrap();
        assert!(lp_norm(&v, 0.5).is_err());
        assert!(lp_norm(&v, f64::INFINITY).is_err());
        assert!(lp_norm(&v, f64::NAN).is_err());
    }
}
