//! Van der Corput sequences and Hammersley point sets with exact coordinates.

mod permutation;
mod rational;
mod schedule;

use rayon::prelude::*;

pub use permutation::{Permutation, PermutationKind};
pub use rational::{Base, Coord, Label, PointMultiset, RationalPoint};
pub use schedule::{ScheduleSpec, ScrambleSchedule};

use crate::error::{Error, Result};

/// `phi_b(n)`: the base-`b` digits of `n` mirrored across the radix point.
pub fn radical_inverse(base: Base, n: u64) -> Coord {
    let b = base.get() as u64;
    let (mut num, mut exp, mut rest) = (0u64, 0u32, n);
    while rest > 0 {
        num = num * b + rest % b;
        rest /= b;
        exp += 1;
    }
    // the leading digit of n is nonzero, so num / b^exp is already reduced
    Coord::new(base, num, exp).expect("radical inverse lies in [0,1)")
}

fn point1(c: Coord) -> RationalPoint {
    RationalPoint::new(vec![c])
}

fn check_count(count: u64) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidParameter("a sequence needs at least one term".into()));
    }
    Ok(())
}

/// The first `count` terms of the classical van der Corput sequence.
pub fn van_der_corput(base: Base, count: u64) -> Result<PointMultiset> {
    check_count(count)?;
    let points = (0..count).into_par_iter().map(|n| point1(radical_inverse(base, n))).collect();
    PointMultiset::new(base, 1, Label::Vdc, count, points)
}

/// The first `count` terms of `1 - phi_b(n)`.
pub fn vdc_reflected(base: Base, count: u64) -> Result<PointMultiset> {
    check_count(count)?;
    let points = (0..count)
        .into_par_iter()
        .map(|n| point1(radical_inverse(base, n).complement(base)))
        .collect();
    PointMultiset::new(base, 1, Label::VdcReflected, count, points)
}

/// The first `count` terms of the symmetrized van der Corput sequence:
/// `z_{2m} = phi_b(m)`, `z_{2m+1} = 1 - phi_b(m)`.
///
/// `z_1 = 1` is kept as is.
pub fn vdc_symmetrized(base: Base, count: u64) -> Result<PointMultiset> {
    check_count(count)?;
    let points = (0..count)
        .into_par_iter()
        .map(|n| {
            let phi = radical_inverse(base, n / 2);
            point1(if n % 2 == 0 { phi } else { phi.complement(base) })
        })
        .collect();
    PointMultiset::new(base, 1, Label::VdcSym, count, points)
}

fn hammersley_points(base: Base, schedule: &ScrambleSchedule) -> Result<Vec<RationalPoint>> {
    let n = schedule.n();
    let exp = u32::try_from(n).map_err(|_| Error::Overflow(format!("n = {n}")))?;
    let total = base.pow(exp)?;
    let b = base.get() as u64;
    let points = (0..total)
        .into_par_iter()
        .map(|y_num| {
            // a_1 is the most significant digit of y_num
            let mut x_num = 0u64;
            let mut rest = y_num;
            let mut scale = base.pow(exp - 1).unwrap();
            let mut weight = 1u64;
            for i in 1..=n {
                let a = (rest / scale) as u32;
                rest %= scale;
                scale /= b.max(1);
                x_num += schedule.digit_image(i, a) as u64 * weight;
                weight = weight.saturating_mul(b);
            }
            RationalPoint::new(vec![
                Coord::new(base, x_num, exp).unwrap(),
                Coord::new(base, y_num, exp).unwrap(),
            ])
        })
        .collect();
    Ok(points)
}

fn check_schedule(base: Base, n: usize, schedule: &ScrambleSchedule) -> Result<()> {
    if schedule.n() != n {
        return Err(Error::ScheduleLength { schedule: schedule.n(), expected: n });
    }
    if schedule.sigma().base() != base {
        return Err(Error::InvalidPermutation(format!(
            "permutation is over base {}, point set over base {base}",
            schedule.sigma().base()
        )));
    }
    Ok(())
}

/// The classical Hammersley set `{(k / b^n, phi_b(k))}` in the digit order of
/// [`hammersley_scrambled`].
pub fn hammersley_classical(base: Base, n: usize) -> Result<PointMultiset> {
    let schedule = ScrambleSchedule::uniform(Permutation::identity(base), n)?;
    let points = hammersley_points(base, &schedule)?;
    PointMultiset::new(base, 2, Label::Ham, n as u64, points)
}

/// The digit-scrambled Hammersley set: for every digit vector `(a_1..a_n)`,
/// in lexicographic order, the point
/// `(sigma_n(a_n)/b + ... + sigma_1(a_1)/b^n, a_1/b + ... + a_n/b^n)`.
pub fn hammersley_scrambled(base: Base, n: usize, schedule: &ScrambleSchedule) -> Result<PointMultiset> {
    check_schedule(base, n, schedule)?;
    let points = hammersley_points(base, schedule)?;
    PointMultiset::new(base, 2, Label::HamScrambled, n as u64, points)
}

/// The scrambled set followed by its conjugate-schedule twin: exactly
/// `2 b^n` points, duplicates kept.
pub fn hammersley_symmetrized(base: Base, n: usize, schedule: &ScrambleSchedule) -> Result<PointMultiset> {
    check_schedule(base, n, schedule)?;
    let mut points = hammersley_points(base, schedule)?;
    points.extend(hammersley_points(base, &schedule.conjugate())?);
    PointMultiset::new(base, 2, Label::HamSym, n as u64, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u32) -> Base {
        Base::new(n).unwrap()
    }

    fn c(base: u32, num: u64, exp: u32) -> Coord {
        Coord::new(b(base), num, exp).unwrap()
    }

    fn values_1d(set: &PointMultiset) -> Vec<f64> {
        set.axis(0).map(|x| x.to_f64(set.base())).collect()
    }

    fn pairs(set: &PointMultiset) -> Vec<(f64, f64)> {
        set.points().iter().map(|p| (p.to_f64(set.base())[0], p.to_f64(set.base())[1])).collect()
    }

    #[test]
    fn radical_inverse_examples() {
        assert_eq!(radical_inverse(b(2), 0), Coord::ZERO);
        assert_eq!(radical_inverse(b(2), 3), c(2, 3, 2));
        assert_eq!(radical_inverse(b(3), 5), c(3, 7, 2));
        assert_eq!(radical_inverse(b(2), 6), c(2, 3, 3));
    }

    #[test]
    fn radical_inverse_of_shifted_digits() {
        for base in [2, 3, 5] {
            let bb = b(base);
            for j in 0..6u32 {
                for w in 0..100u64 {
                    let lhs = radical_inverse(bb, bb.pow(j).unwrap() * w);
                    let rhs = radical_inverse(bb, w);
                    let rhs = if rhs == Coord::ZERO { rhs } else { c(base, rhs.num(), rhs.exp() + j) };
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn symmetrized_vdc_examples() {
        assert_eq!(values_1d(&vdc_symmetrized(b(2), 2).unwrap()), vec![0.0, 1.0]);
        assert_eq!(values_1d(&vdc_symmetrized(b(2), 4).unwrap()), vec![0.0, 1.0, 0.5, 0.5]);
        let s = vdc_symmetrized(b(3), 6).unwrap();
        let expected = [c(3, 0, 0), Coord::ONE, c(3, 1, 1), c(3, 2, 1), c(3, 2, 1), c(3, 1, 1)];
        assert_eq!(s.axis(0).collect::<Vec<_>>(), expected);
        assert!(vdc_symmetrized(b(2), 0).is_err());
    }

    #[test]
    fn classical_and_reflected_vdc() {
        assert_eq!(values_1d(&van_der_corput(b(2), 4).unwrap()), vec![0.0, 0.5, 0.25, 0.75]);
        assert_eq!(values_1d(&vdc_reflected(b(2), 3).unwrap()), vec![1.0, 0.5, 0.75]);
    }

    #[test]
    fn scrambled_hammersley_examples() {
        let id2 = Permutation::identity(b(2));
        let s = ScrambleSchedule::new(id2.clone(), vec![true]).unwrap();
        assert_eq!(pairs(&hammersley_scrambled(b(2), 1, &s).unwrap()), vec![(0.0, 0.0), (0.5, 0.5)]);
        let s = ScrambleSchedule::new(id2, vec![false]).unwrap();
        assert_eq!(pairs(&hammersley_scrambled(b(2), 1, &s).unwrap()), vec![(0.5, 0.0), (0.0, 0.5)]);
        let s = ScrambleSchedule::new(Permutation::identity(b(3)), vec![true]).unwrap();
        let h = hammersley_scrambled(b(3), 1, &s).unwrap();
        let third = 1.0 / 3.0;
        assert_eq!(pairs(&h), vec![(0.0, 0.0), (third, third), (2.0 * third, 2.0 * third)]);
        assert!(hammersley_scrambled(b(3), 2, &s).is_err());
    }

    #[test]
    fn digit_positions_follow_the_definition() {
        // b = 3, n = 2, sigma = id_1, flags [s, c]; digits (a1, a2) = (2, 0)
        let sigma = Permutation::make(&PermutationKind::Shift(1), b(3)).unwrap();
        let s = ScrambleSchedule::new(sigma, vec![true, false]).unwrap();
        let h = hammersley_scrambled(b(3), 2, &s).unwrap();
        let p = &h.points()[6];
        // sigma_1(2) = 0 at weight 1/9, sigma_2(0) = 2 - 1 = 1 at weight 1/3
        assert_eq!(p.coords(), &[c(3, 3, 2), c(3, 6, 2)]);
    }

    #[test]
    fn symmetrized_hammersley_examples() {
        let s = ScrambleSchedule::new(Permutation::identity(b(2)), vec![true]).unwrap();
        let h = hammersley_symmetrized(b(2), 1, &s).unwrap();
        assert_eq!(pairs(&h), vec![(0.0, 0.0), (0.5, 0.5), (0.5, 0.0), (0.0, 0.5)]);

        let s = ScrambleSchedule::new(Permutation::identity(b(3)), vec![true]).unwrap();
        let h = hammersley_symmetrized(b(3), 1, &s).unwrap();
        assert_eq!(h.len(), 6);
        let third = RationalPoint::new(vec![c(3, 1, 1), c(3, 1, 1)]);
        assert_eq!(h.points().iter().filter(|p| **p == third).count(), 2);
    }

    #[test]
    fn classical_hammersley_is_k_over_bn_against_phi() {
        let h = hammersley_classical(b(3), 3).unwrap();
        let mut seen: Vec<_> = h
            .points()
            .iter()
            .map(|p| (p.coords()[1], p.coords()[0]))
            .collect();
        seen.sort_by(|a, z| a.1.cmp_in(z.1, b(3)));
        for (k, (y, x)) in seen.into_iter().enumerate() {
            assert_eq!(x, c(3, k as u64, 3));
            assert_eq!(y, radical_inverse(b(3), k as u64));
        }
    }
}
