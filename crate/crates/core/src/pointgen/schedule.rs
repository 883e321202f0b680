use std::fmt;
use std::str::FromStr;

use super::permutation::Permutation;
use crate::error::{Error, Result};

/// A choice of `sigma` or `tau ∘ sigma` at each of the `n` digit positions.
///
/// `flags[i] == true` means position `i + 1` uses `sigma`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScrambleSchedule {
    sigma: Permutation,
    flags: Vec<bool>,
}

impl ScrambleSchedule {
    pub fn new(sigma: Permutation, flags: Vec<bool>) -> Result<Self> {
        if flags.is_empty() {
            return Err(Error::InvalidSchedule("schedule must have at least one position".into()));
        }
        Ok(ScrambleSchedule { sigma, flags })
    }

    /// Every position uses `sigma`.
    pub fn uniform(sigma: Permutation, n: usize) -> Result<Self> {
        ScrambleSchedule::new(sigma, vec![true; n])
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn n(&self) -> usize {
        self.flags.len()
    }

    /// Number of positions that use `sigma`.
    pub fn l_n(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    /// The schedule with every choice flipped.
    pub fn conjugate(&self) -> ScrambleSchedule {
        ScrambleSchedule { sigma: self.sigma.clone(), flags: self.flags.iter().map(|f| !f).collect() }
    }

    /// Image of digit `a` under the permutation at position `i` (1-based).
    #[inline]
    pub fn digit_image(&self, i: usize, a: u32) -> u32 {
        let s = self.sigma.apply(a);
        if self.flags[i - 1] {
            s
        } else {
            self.sigma.base().get() - 1 - s
        }
    }

    /// All `2^n` schedules over a fixed `sigma`, in binary counting order.
    pub fn enumerate(sigma: &Permutation, n: usize) -> Vec<ScrambleSchedule> {
        (0..1u64 << n)
            .map(|bits| ScrambleSchedule {
                sigma: sigma.clone(),
                flags: (0..n).map(|i| bits >> (n - 1 - i) & 1 == 0).collect(),
            })
            .collect()
    }
}

/// Textual schedule description: a word over `{s, c}` (`s` = sigma,
/// `c` = its conjugate) or one of the macros `all-s`, `all-c`, `alt`,
/// `prefix:<k>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduleSpec {
    Word(Vec<bool>),
    AllSigma,
    AllConjugate,
    /// `s c s c ...`
    Alternate,
    /// First `k` positions `s`, the rest `c`.
    Prefix(usize),
}

impl ScheduleSpec {
    pub fn flags(&self, n: usize) -> Result<Vec<bool>> {
        match self {
            ScheduleSpec::Word(w) => {
                if w.len() != n {
                    return Err(Error::ScheduleLength { schedule: w.len(), expected: n });
                }
                Ok(w.clone())
            }
            ScheduleSpec::AllSigma => Ok(vec![true; n]),
            ScheduleSpec::AllConjugate => Ok(vec![false; n]),
            ScheduleSpec::Alternate => Ok((0..n).map(|i| i % 2 == 0).collect()),
            ScheduleSpec::Prefix(k) => {
                if *k > n {
                    return Err(Error::InvalidSchedule(format!("prefix {k} longer than n = {n}")));
                }
                Ok((0..n).map(|i| i < *k).collect())
            }
        }
    }

    pub fn resolve(&self, sigma: Permutation, n: usize) -> Result<ScrambleSchedule> {
        ScrambleSchedule::new(sigma, self.flags(n)?)
    }
}

impl FromStr for ScheduleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "all-s" => return Ok(ScheduleSpec::AllSigma),
            "all-c" => return Ok(ScheduleSpec::AllConjugate),
            "alt" => return Ok(ScheduleSpec::Alternate),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("prefix:") {
            return k
                .parse()
                .map(ScheduleSpec::Prefix)
                .map_err(|_| Error::Parse(format!("bad prefix length in '{s}'")));
        }
        if s.is_empty() {
            return Err(Error::Parse("empty schedule".into()));
        }
        s.chars()
            .map(|c| match c {
                's' => Ok(true),
                'c' => Ok(false),
                other => Err(Error::Parse(format!("unexpected '{other}' in schedule '{s}'"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(ScheduleSpec::Word)
    }
}

impl fmt::Display for ScheduleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleSpec::Word(w) => {
                let s: String = w.iter().map(|&x| if x { 's' } else { 'c' }).collect();
                f.write_str(&s)
            }
            ScheduleSpec::AllSigma => f.write_str("all-s"),
            ScheduleSpec::AllConjugate => f.write_str("all-c"),
            ScheduleSpec::Alternate => f.write_str("alt"),
            ScheduleSpec::Prefix(k) => write!(f, "prefix:{k}"),
        }
    }
}
