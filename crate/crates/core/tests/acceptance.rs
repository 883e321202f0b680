//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits with status 1 if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use symdisc_core::bounds::{
    check_hammersley_bounds, check_sigma_condition, check_vdc_bounds, first_coeff_growth_check, scaling_study,
    Family, LnRule, NormSpec, Rule,
};
use symdisc_core::coeffs::{
    coeff_first_2d_closed, coeff_first_2d_sym_closed, CoefficientOracle, LocalDiscrepancy,
};
use symdisc_core::norms::{besov_quasinorm, lp_norm, warnock_l2};
use symdisc_core::pointgen::{
    hammersley_classical, hammersley_scrambled, hammersley_symmetrized, van_der_corput, vdc_reflected,
    vdc_symmetrized,
};
use symdisc_core::{
    Base, BesovParams, Exponent, HaarIndex, HaarIndex1D, HaarIndex2D, Permutation, PermutationKind, PointMultiset,
    ScheduleSpec, ScrambleSchedule,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn base(b: u32) -> Base {
    Base::new(b).unwrap()
}

fn perm(b: u32, spec: &str) -> Permutation {
    Permutation::make(&spec.parse::<PermutationKind>().unwrap(), base(b)).unwrap()
}

/// Largest `|computed - oracle|` over every coefficient up to `j_max`.
fn oracle_gap(points: &PointMultiset, j_max: i32) -> f64 {
    let d = LocalDiscrepancy::new(points).unwrap();
    let oracle = CoefficientOracle::new(points).unwrap();
    d.all_upto(j_max)
        .unwrap()
        .par_iter()
        .map(|c| (c.value - oracle.coefficient(c.index).unwrap()).norm())
        .reduce(|| 0.0, f64::max)
}

fn within(limit: Duration, elapsed: Duration) -> bool {
    elapsed <= limit
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let worst = [2u32, 3, 5]
        .iter()
        .flat_map(|&b| (1..=200u64).map(move |n| (b, n)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(b, n)| oracle_gap(&vdc_symmetrized(base(b), n).unwrap(), 5))
        .reduce(|| 0.0, f64::max);
    let t = start.elapsed();
    Outcome {
        pass: worst <= 1e-12 && within(Duration::from_secs(120), t),
        detail: format!("max |coeff - oracle| = {worst:.3e}, {:.1} s", t.as_secs_f64()),
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut cases = Vec::new();
    for b in [2u32, 3, 5] {
        let sigmas = match b {
            5 => vec![perm(5, "id"), perm(5, "id_l:1"), perm(5, "tau")],
            _ => Permutation::all(base(b)),
        };
        for sigma in sigmas {
            for n in 1..=3 {
                for s in ScrambleSchedule::enumerate(&sigma, n) {
                    cases.push((b, n, s));
                }
            }
        }
    }
    let (worst, worst_closed) = cases
        .par_iter()
        .map(|(b, n, s)| {
            let pts = hammersley_scrambled(base(*b), *n, s).unwrap();
            let gap = oracle_gap(&pts, 3);
            let first = HaarIndex::Two(HaarIndex2D::FIRST);
            let direct = LocalDiscrepancy::new(&pts).unwrap().coefficient(first).unwrap();
            let closed = coeff_first_2d_closed(base(*b), s).unwrap();
            (gap, (direct - closed).norm())
        })
        .reduce(|| (0.0, 0.0), |a, c| (a.0.max(c.0), a.1.max(c.1)));
    let t = start.elapsed();
    Outcome {
        pass: worst <= 1e-12 && worst_closed <= 1e-12 && within(Duration::from_secs(300), t),
        detail: format!(
            "{} sets, max |coeff - oracle| = {worst:.3e}, max |closed - direct| = {worst_closed:.3e}, {:.1} s",
            cases.len(),
            t.as_secs_f64()
        ),
    }
}

fn criterion_3() -> Outcome {
    let b2 = base(2);
    let s = ScrambleSchedule::uniform(Permutation::identity(b2), 1).unwrap();
    let first = HaarIndex::Two(HaarIndex2D::FIRST);
    let closed = coeff_first_2d_closed(b2, &s).unwrap().re;
    let brute = CoefficientOracle::new(&hammersley_scrambled(b2, 1, &s).unwrap()).unwrap().coefficient(first).unwrap().re;
    let sym_closed = coeff_first_2d_sym_closed(b2, 1).unwrap().re;
    let sym_brute = CoefficientOracle::new(&hammersley_symmetrized(b2, 1, &s).unwrap())
        .unwrap()
        .coefficient(first)
        .unwrap()
        .re;
    let errs = [closed - 0.375, brute - 0.375, sym_closed - 0.3125, sym_brute - 0.3125];
    let worst = errs.iter().map(|e| e.abs()).fold(0.0, f64::max);
    Outcome {
        pass: worst <= 1e-14,
        detail: format!("haar1 = {closed} (brute {brute}), sym = {sym_closed} (brute {sym_brute})"),
    }
}

fn criterion_4() -> Outcome {
    let mut grid = Vec::new();
    for b in [2u32, 3] {
        for n in 1..=128u64 {
            grid.push((b, n));
        }
    }
    let results: Vec<_> = grid
        .par_iter()
        .map(|&(b, n)| {
            let j_max = base(b).ceil_log(n) as i32 + 3;
            let checks = check_vdc_bounds(base(b), n, j_max).unwrap();
            let fails = checks.iter().filter(|c| !c.pass).count();
            let worst = checks.iter().map(|c| c.slack).fold(f64::INFINITY, f64::min);
            (checks.len(), fails, worst)
        })
        .collect();
    let total: usize = results.iter().map(|r| r.0).sum();
    let fails: usize = results.iter().map(|r| r.1).sum();
    let worst = results.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    let first_fails = [2u32, 3]
        .iter()
        .flat_map(|&b| (1..=500u64).map(move |n| (b, n)))
        .collect::<Vec<_>>()
        .par_iter()
        .filter(|&&(b, n)| {
            let pts = vdc_symmetrized(base(b), n).unwrap();
            let mu = LocalDiscrepancy::new(&pts).unwrap().coefficient(HaarIndex::One(HaarIndex1D::FIRST)).unwrap();
            mu.norm() > 0.5 / n as f64 + 1e-12
        })
        .count();
    Outcome {
        pass: fails == 0 && first_fails == 0,
        detail: format!("{total} checks, {fails} failures, worst slack {worst:.3e}; first-coefficient failures for N <= 500: {first_fails}"),
    }
}

fn criterion_5() -> Outcome {
    let mut cases = Vec::new();
    for b in [2u32, 3] {
        for sigma in Permutation::all(base(b)) {
            for n in 1..=4 {
                for s in ScrambleSchedule::enumerate(&sigma, n) {
                    cases.push((b, n, s));
                }
            }
        }
    }
    let results: Vec<_> = cases
        .par_iter()
        .map(|(b, n, s)| check_hammersley_bounds(base(*b), *n, s, *n as i32 + 1).unwrap())
        .collect();
    let mut fails = std::collections::BTreeMap::<(u32, &str), usize>::new();
    let mut total = 0;
    let mut worst_ratio = 0.0f64;
    let mut box_fails = 0;
    for ((b, _, _), checks) in cases.iter().zip(&results) {
        for c in checks {
            total += 1;
            match c.rule {
                Rule::Case2Exceptions => worst_ratio = worst_ratio.max(c.abs / c.bound),
                Rule::Case2Boxes => {
                    box_fails += usize::from(!c.pass);
                    continue;
                }
                _ => {}
            }
            if !c.pass {
                *fails.entry((*b, c.rule.as_str())).or_default() += 1;
            }
        }
    }
    let n_fail: usize = fails.values().sum();
    Outcome {
        pass: n_fail == 0,
        detail: format!(
            "{} sets, {total} checks, failures by (base, rule) {fails:?}; worst case-2 exceptions / b^n = {worst_ratio:.3}; box-count failures {box_fails}",
            cases.len()
        ),
    }
}

fn criterion_6() -> Outcome {
    let mut sets: Vec<PointMultiset> = Vec::new();
    for b in [2u32, 3, 5] {
        for n in 1..=512u64 {
            sets.push(van_der_corput(base(b), n).unwrap());
            sets.push(vdc_symmetrized(base(b), n).unwrap());
            sets.push(vdc_reflected(base(b), n).unwrap());
        }
        let sigmas = [perm(b, "id"), perm(b, "tau"), perm(b, "id_l:1")];
        let mut n = 1;
        while base(b).pow(n as u32).unwrap() <= 512 {
            sets.push(hammersley_classical(base(b), n).unwrap());
            for sigma in &sigmas {
                for spec in [ScheduleSpec::AllSigma, ScheduleSpec::Alternate, ScheduleSpec::AllConjugate] {
                    let s = spec.resolve(sigma.clone(), n).unwrap();
                    sets.push(hammersley_scrambled(base(b), n, &s).unwrap());
                    if 2 * base(b).pow(n as u32).unwrap() <= 512 {
                        sets.push(hammersley_symmetrized(base(b), n, &s).unwrap());
                    }
                }
            }
            n += 1;
        }
    }
    let worst = sets
        .par_iter()
        .map(|s| (lp_norm(s, 2.0).unwrap() - warnock_l2(s).unwrap()).abs())
        .reduce(|| 0.0, f64::max);
    Outcome { pass: worst <= 1e-10, detail: format!("{} sets, max |lp_norm - warnock| = {worst:.3e}", sets.len()) }
}

fn criterion_7() -> Outcome {
    let a = check_sigma_condition(&perm(5, "id_l:1"));
    let b = check_sigma_condition(&perm(2, "id"));
    let c = check_sigma_condition(&perm(3, "id"));
    Outcome {
        pass: a.satisfied && *a.lhs.numer() == 4 && *a.lhs.denom() == 1 && !b.satisfied && !c.satisfied,
        detail: format!("(5, id_1): lhs = {}; (2, id): lhs = {} vs {}; (3, id): lhs = {} vs {}", a.lhs, b.lhs, b.rhs, c.lhs, c.rhs),
    }
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let l2 = NormSpec::Lp(2.0);
    let sym = scaling_study(&Family::VdcSym, base(2), &(4..=12).collect::<Vec<_>>(), l2).unwrap();
    let classical = scaling_study(&Family::Vdc, base(2), &(4..=12).collect::<Vec<_>>(), l2).unwrap();
    let ratios: Vec<f64> = classical.points.iter().map(|p| p.scaled / (p.count as f64).ln().sqrt()).collect();
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let ham = Family::HamSym { sigma: Permutation::identity(base(2)), schedule: ScheduleSpec::AllSigma };
    let ham_fit = scaling_study(&ham, base(2), &(3..=9).collect::<Vec<_>>(), l2).unwrap();
    let band = |s: f64| (0.3..=0.7).contains(&s);
    let t = start.elapsed();
    Outcome {
        pass: band(sym.slope) && increasing && band(ham_fit.slope) && within(Duration::from_secs(600), t),
        detail: format!(
            "vdc-sym slope {:.4}; vdc N*L2/sqrt(log N) strictly increasing: {increasing}; ham-sym slope {:.4}; {:.1} s",
            sym.slope,
            ham_fit.slope,
            t.as_secs_f64()
        ),
    }
}

fn criterion_9() -> Outcome {
    let ns: Vec<usize> = (1..=12).collect();
    let rep = first_coeff_growth_check(base(2), &ns, &Permutation::identity(base(2)), &LnRule::AllSigma).unwrap();
    let rel = rep.relative_error.unwrap();
    let last = rep.rows.last().unwrap();
    let sym_decreasing = rep.rows.windows(2).all(|w| w[1].sym_per_n < w[0].sym_per_n);
    Outcome {
        pass: rel <= 0.05 && sym_decreasing,
        detail: format!(
            "N*mu/n at n=12: {:.6} vs limit {:.6} (relative error {:.4}); symmetrized N*mu/n decreasing: {sym_decreasing}",
            last.per_n, rep.limit, rel
        ),
    }
}

fn criterion_10() -> Outcome {
    let b2 = base(2);
    let fixture = PointMultiset::from_1d(b2, &[(0, 0)]).unwrap();
    let mut worst = 0.0f64;
    for r in [0.0, 0.25, 0.45] {
        let params = BesovParams::new(Exponent::Finite(2.0), Exponent::Finite(2.0), r).unwrap();
        let rep = besov_quasinorm(&fixture, params, 9).unwrap();
        let ln2 = 2f64.ln();
        // level j holds 2^j coefficients of modulus 2^{-2j-1}/2
        let brute: f64 = (10..1010)
            .map(|j| {
                let j = j as f64;
                let ln_weight = 2.0 * j * (r + 0.5) * ln2;
                let ln_level = j * ln2 + 2.0 * (-2.0 * j - 2.0) * ln2;
                (ln_weight + ln_level).exp()
            })
            .sum();
        worst = worst.max((rep.tail - brute).abs());
    }
    Outcome { pass: worst <= 1e-14, detail: format!("max |analytic tail - partial sum| = {worst:.3e}") }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle-1d", criterion_1),
        ("oracle-2d", criterion_2),
        ("closed-form-values", criterion_3),
        ("bounds-1d", criterion_4),
        ("bounds-2d", criterion_5),
        ("l2-dual-method", criterion_6),
        ("sigma-condition", criterion_7),
        ("scaling", criterion_8),
        ("first-coefficient-growth", criterion_9),
        ("besov-tail", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        failed += usize::from(!out.pass);
        println!("criterion {} {name}: {} ({})", i + 1, if out.pass { "PASS" } else { "FAIL" }, out.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
