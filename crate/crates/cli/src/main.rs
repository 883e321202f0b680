//! `symdisc`: generate point sets, dump Haar coefficients, evaluate norms,
//! run bound verification suites and scaling studies.
//!
//! Exit codes: 0 on success, 1 when a verification suite has failures, 2 on
//! usage or precondition errors.

use std::fs;
use std::collections::BTreeMap;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use symdisc_core::bounds::{
    check_hammersley_bounds, check_hammersley_sym_bounds, check_schedule_condition, check_sigma_condition,
    check_vdc_bounds, first_coeff_growth_check, scaling_study, summarize, BoundCheck, Rule, RuleSummary, Family as StudyFamily, LnRule,
    NormSpec,
};
use symdisc_core::coeffs::LocalDiscrepancy;
use symdisc_core::io;
use symdisc_core::norms::{besov_quasinorm, lp_norm, warnock_l2};
use symdisc_core::pointgen::{
    hammersley_classical, hammersley_scrambled, hammersley_symmetrized, van_der_corput, vdc_reflected,
    vdc_symmetrized,
};
use symdisc_core::{Base, BesovParams, Exponent, Permutation, PermutationKind, PointMultiset, ScheduleSpec, ScrambleSchedule};

#[derive(Parser)]
#[command(name = "symdisc", version, about = "Symmetrized point sets and their Haar-based discrepancy norms")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (default: standard output).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Significant digits for CSV floats.
    #[arg(long, global = true, default_value_t = io::DEFAULT_DIGITS)]
    digits: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a point multiset.
    Gen {
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Dump Haar coefficients as JSON lines.
    Coeffs {
        #[command(flatten)]
        points: PointArgs,
        /// Highest level per component (default: ceil(log_b N)).
        #[arg(long, allow_hyphen_values = true)]
        j_max: Option<i32>,
    },
    /// Evaluate an L_p norm or the Besov-type quasi-norm of the local discrepancy.
    Norm {
        #[command(flatten)]
        points: PointArgs,
        /// Use the Haar-side Besov quasi-norm instead of L_p.
        #[arg(long)]
        besov: bool,
        /// Use the Warnock L_2 formula.
        #[arg(long, conflicts_with = "besov")]
        warnock: bool,
        #[arg(long, default_value = "2")]
        p: String,
        #[arg(long, default_value = "2")]
        q: String,
        #[arg(long, default_value_t = 0.0)]
        r: f64,
        /// Highest exactly summed level (default: ceil(log_b N) + 2).
        #[arg(long, allow_hyphen_values = true)]
        j_max: Option<i32>,
    },
    /// Run a coefficient bound suite; exits with 1 if any check fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        base: u32,
        /// Largest size exponent: `N <= b^max_n` for coro1, `n <= max_n` for the Hammersley suites.
        #[arg(long)]
        max_n: u32,
        /// Levels checked beyond the plateau threshold (default: 3 for coro1, 1 otherwise).
        #[arg(long)]
        extra_levels: Option<i32>,
        /// Permutation for the Hammersley suites, or `all` for every permutation of the base.
        #[arg(long, default_value = "id")]
        sigma: String,
        /// Also write every check as a JSON line to this file.
        #[arg(long)]
        checks: Option<PathBuf>,
    },
    /// Fit the log-exponent of a norm over a range of sizes.
    Scaling {
        #[arg(long, value_enum)]
        family: FamilyName,
        #[arg(long)]
        base: u32,
        #[arg(long, default_value_t = 4)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value = "id")]
        sigma: String,
        #[arg(long, default_value = "all-s")]
        schedule: String,
        #[arg(long)]
        besov: bool,
        #[arg(long, default_value = "2")]
        p: String,
        #[arg(long, default_value = "2")]
        q: String,
        #[arg(long, default_value_t = 0.0)]
        r: f64,
        #[arg(long, default_value_t = 12)]
        j_max: i32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare (1/b) sum sigma(a) a with (b-1)^2/4.
    CheckSigma {
        #[arg(long)]
        base: u32,
        #[arg(long)]
        sigma: String,
    },
    /// Evaluate |2 l_n - n| / n^{1/q} for an l_n rule.
    CheckSchedule {
        /// all-s, all-c, alt, half, sqrt or power:<c>,<e>.
        #[arg(long)]
        rule: String,
        #[arg(long, default_value = "2")]
        q: String,
        #[arg(long, default_value_t = 10_000)]
        n_max: usize,
    },
    /// Track N mu_{(-1,-1)} / n of scrambled and symmetrized Hammersley sets.
    Growth {
        #[arg(long)]
        base: u32,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value = "id")]
        sigma: String,
        #[arg(long, default_value = "all-s")]
        rule: String,
    },
}

#[derive(Args)]
struct PointArgs {
    #[arg(long, value_enum, required_unless_present = "points")]
    family: Option<FamilyName>,
    #[arg(long, required_unless_present = "points")]
    base: Option<u32>,
    /// Number of terms for the sequence families.
    #[arg(long)]
    count: Option<u64>,
    /// Digit count for the Hammersley families (b^n points).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "id")]
    sigma: String,
    #[arg(long, default_value = "all-s")]
    schedule: String,
    /// Read the points from a JSON file written by `gen`.
    #[arg(long, conflicts_with = "family")]
    points: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    Vdc,
    VdcSym,
    VdcRefl,
    Ham,
    HamScrambled,
    HamSym,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Suite {
    Coro1,
    Hammersley,
    HammersleySym,
}

fn parse_base(b: u32) -> Result<Base> {
    Ok(Base::new(b)?)
}

fn parse_sigma(spec: &str, base: Base) -> Result<Permutation> {
    let kind: PermutationKind = spec.parse()?;
    Ok(Permutation::make(&kind, base)?)
}

fn parse_exponent(s: &str) -> Result<Exponent> {
    Ok(s.parse()?)
}

impl PointArgs {
    fn load(&self) -> Result<PointMultiset> {
        if let Some(path) = &self.points {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return Ok(io::points_from_json(&text)?);
        }
        let family = self.family.ok_or_else(|| anyhow!("--family is required"))?;
        let base = parse_base(self.base.ok_or_else(|| anyhow!("--base is required"))?)?;
        let count = || self.count.ok_or_else(|| anyhow!("--count is required for this family"));
        let n = || self.n.ok_or_else(|| anyhow!("--n is required for this family"));
        let schedule = |n: usize| -> Result<ScrambleSchedule> {
            let spec: ScheduleSpec = self.schedule.parse()?;
            Ok(spec.resolve(parse_sigma(&self.sigma, base)?, n)?)
        };
        Ok(match family {
            FamilyName::Vdc => van_der_corput(base, count()?)?,
            FamilyName::VdcSym => vdc_symmetrized(base, count()?)?,
            FamilyName::VdcRefl => vdc_reflected(base, count()?)?,
            FamilyName::Ham => hammersley_classical(base, n()?)?,
            FamilyName::HamScrambled => hammersley_scrambled(base, n()?, &schedule(n()?)?)?,
            FamilyName::HamSym => hammersley_symmetrized(base, n()?, &schedule(n()?)?)?,
        })
    }
}

/// Result of a command: text to write and whether verification passed.
struct Output {
    text: String,
    ok: bool,
}

impl From<String> for Output {
    fn from(text: String) -> Self {
        Output { text, ok: true }
    }
}

fn default_j_max(points: &PointMultiset) -> i32 {
    points.base().ceil_log(points.len() as u64) as i32
}

fn run_verify(
    suite: Suite,
    base: Base,
    max_n: u32,
    extra: Option<i32>,
    sigma: &str,
    digits: usize,
    dump: Option<&PathBuf>,
) -> Result<Output> {
    let mut totals = BTreeMap::<Rule, RuleSummary>::new();
    let mut sink = match dump {
        Some(path) => Some(BufWriter::new(
            fs::File::create(path).with_context(|| format!("writing {}", path.display()))?,
        )),
        None => None,
    };
    let mut absorb = |checks: Vec<BoundCheck>| -> Result<()> {
        if let Some(w) = sink.as_mut() {
            for c in &checks {
                writeln!(w, "{}", io::check_json_line(c))?;
            }
        }
        for s in summarize(&checks) {
            let e = totals.entry(s.rule).or_insert(RuleSummary { total: 0, failures: 0, ..s });
            e.total += s.total;
            e.failures += s.failures;
            e.worst_slack = e.worst_slack.min(s.worst_slack);
        }
        Ok(())
    };
    match suite {
        Suite::Coro1 => {
            let extra = extra.unwrap_or(3);
            for count in 1..=base.pow(max_n)? {
                absorb(check_vdc_bounds(base, count, base.ceil_log(count) as i32 + extra)?)?;
            }
        }
        Suite::Hammersley | Suite::HammersleySym => {
            let extra = extra.unwrap_or(1);
            let sigmas = if sigma == "all" { Permutation::all(base) } else { vec![parse_sigma(sigma, base)?] };
            for s in &sigmas {
                for n in 1..=max_n as usize {
                    for schedule in ScrambleSchedule::enumerate(s, n) {
                        let j_max = n as i32 + extra;
                        absorb(if suite == Suite::Hammersley {
                            check_hammersley_bounds(base, n, &schedule, j_max)?
                        } else {
                            check_hammersley_sym_bounds(base, n, &schedule, j_max)?
                        })?;
                    }
                }
            }
        }
    }
    if let Some(w) = sink.as_mut() {
        w.flush()?;
    }
    let summary: Vec<RuleSummary> = totals.into_values().collect();
    let ok = summary.iter().all(|r| r.failures == 0);
    if !ok {
        let failing: Vec<String> = summary
            .iter()
            .filter(|r| r.failures > 0)
            .map(|r| format!("{} ({} of {})", r.rule, r.failures, r.total))
            .collect();
        eprintln!("failing rules: {}", failing.join(", "));
    }
    Ok(Output { text: io::summary_csv(&summary, digits), ok })
}

fn run(cli: &Cli) -> Result<Output> {
    let digits = cli.digits;
    Ok(match &cli.command {
        Command::Gen { points, format } => {
            let pts = points.load()?;
            match format {
                Format::Json => io::points_to_json(&pts) + "\n",
                Format::Csv => io::points_to_csv(&pts, digits),
            }
            .into()
        }
        Command::Coeffs { points, j_max } => {
            let pts = points.load()?;
            let j_max = j_max.unwrap_or_else(|| default_j_max(&pts));
            let coeffs = LocalDiscrepancy::new(&pts)?.all_upto(j_max)?;
            coeffs.iter().map(|c| io::coefficient_json_line(c) + "\n").collect::<String>().into()
        }
        Command::Norm { points, besov, warnock, p, q, r, j_max } => {
            let pts = points.load()?;
            if *besov {
                let params = BesovParams::new(parse_exponent(p)?, parse_exponent(q)?, *r)?;
                let j_max = j_max.unwrap_or_else(|| default_j_max(&pts) + 2);
                (io::norm_report_json(&besov_quasinorm(&pts, params, j_max)?) + "\n").into()
            } else if *warnock {
                format!("{{\"norm\":\"warnock-l2\",\"value\":{}}}\n", warnock_l2(&pts)?).into()
            } else {
                let p: f64 = p.parse().map_err(|_| anyhow!("--p must be a finite number for L_p norms"))?;
                format!("{{\"norm\":\"lp\",\"p\":{p},\"value\":{}}}\n", lp_norm(&pts, p)?).into()
            }
        }
        Command::Verify { suite, base, max_n, extra_levels, sigma, checks } => {
            run_verify(*suite, parse_base(*base)?, *max_n, *extra_levels, sigma, digits, checks.as_ref())?
        }
        Command::Scaling { family, base, n_min, n_max, sigma, schedule, besov, p, q, r, j_max, format } => {
            let base = parse_base(*base)?;
            let spec = || -> Result<(Permutation, ScheduleSpec)> { Ok((parse_sigma(sigma, base)?, schedule.parse()?)) };
            let fam = match family {
                FamilyName::Vdc => StudyFamily::Vdc,
                FamilyName::VdcSym => StudyFamily::VdcSym,
                FamilyName::Ham => StudyFamily::HamClassical,
                FamilyName::HamScrambled => {
                    let (sigma, schedule) = spec()?;
                    StudyFamily::HamScrambled { sigma, schedule }
                }
                FamilyName::HamSym => {
                    let (sigma, schedule) = spec()?;
                    StudyFamily::HamSym { sigma, schedule }
                }
                FamilyName::VdcRefl => bail!("vdc-refl is not available for scaling studies"),
            };
            let norm = if *besov {
                NormSpec::Besov { params: BesovParams::new(parse_exponent(p)?, parse_exponent(q)?, *r)?, j_max: *j_max }
            } else {
                NormSpec::Lp(p.parse().map_err(|_| anyhow!("--p must be a finite number for L_p norms"))?)
            };
            let ns: Vec<u32> = (*n_min..=*n_max).collect();
            let fit = scaling_study(&fam, base, &ns, norm)?;
            match format {
                Format::Csv => io::scaling_csv(&fit, digits),
                Format::Json => io::scaling_fit_json(&fit) + "\n",
            }
            .into()
        }
        Command::CheckSigma { base, sigma } => {
            let c = check_sigma_condition(&parse_sigma(sigma, parse_base(*base)?)?);
            if c.satisfied {
                format!("satisfied, lhs={}\n", c.lhs).into()
            } else {
                format!("not satisfied, lhs={}, rhs={}\n", c.lhs, c.rhs).into()
            }
        }
        Command::CheckSchedule { rule, q, n_max } => {
            let rule: LnRule = rule.parse()?;
            let ns: Vec<usize> = (1..=*n_max).collect();
            let rep = check_schedule_condition(&ns, &rule, parse_exponent(q)?)?;
            format!(
                "{{\"rule\":\"{}\",\"q\":\"{}\",\"n_max\":{},\"sup\":{},\"growth_slope\":{},\"bounded\":{}}}\n",
                rep.rule, rep.q, n_max, rep.sup, rep.growth_slope, rep.bounded
            )
            .into()
        }
        Command::Growth { base, n_max, sigma, rule } => {
            let base = parse_base(*base)?;
            let ns: Vec<usize> = (1..=*n_max).collect();
            let rep = first_coeff_growth_check(base, &ns, &parse_sigma(sigma, base)?, &rule.parse()?)?;
            io::growth_csv(&rep, digits).into()
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &out.text).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout().write_all(out.text.as_bytes()).map_err(Into::into),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
