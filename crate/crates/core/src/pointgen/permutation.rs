use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use super::rational::Base;
use crate::error::{Error, Result};

/// A bijection of the digit set `{0, ..., b-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    base: Base,
    map: Vec<u32>,
}

/// The named ways of building a [`Permutation`].
///
/// Textual form: `id | tau | id_l:<l> | explicit:<a,b,...>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermutationKind {
    Identity,
    /// `k -> b - 1 - k`.
    Tau,
    /// `a -> a + l (mod b)`.
    Shift(u32),
    Explicit(Vec<u32>),
}

impl Permutation {
    pub fn make(kind: &PermutationKind, base: Base) -> Result<Self> {
        let b = base.get();
        match kind {
            PermutationKind::Identity => Ok(Permutation { base, map: (0..b).collect() }),
            PermutationKind::Tau => Ok(Permutation { base, map: (0..b).rev().collect() }),
            PermutationKind::Shift(l) => {
                if *l >= b {
                    return Err(Error::InvalidPermutation(format!("shift {l} outside 0..{b}")));
                }
                Ok(Permutation { base, map: (0..b).map(|a| (a + l) % b).collect() })
            }
            PermutationKind::Explicit(list) => Permutation::from_map(base, list.clone()),
        }
    }

    pub fn identity(base: Base) -> Self {
        Permutation::make(&PermutationKind::Identity, base).unwrap()
    }

    pub fn tau(base: Base) -> Self {
        Permutation::make(&PermutationKind::Tau, base).unwrap()
    }

    pub fn from_map(base: Base, map: Vec<u32>) -> Result<Self> {
        let b = base.get() as usize;
        if map.len() != b {
            return Err(Error::InvalidPermutation(format!(
                "expected {b} images, got {}",
                map.len()
            )));
        }
        let mut seen = vec![false; b];
        for &v in &map {
            if v as usize >= b || std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::InvalidPermutation(format!("{map:?} is not a bijection of 0..{b}")));
            }
        }
        Ok(Permutation { base, map })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    #[inline]
    pub fn apply(&self, a: u32) -> u32 {
        self.map[a as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.map
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (a, &v) in self.map.iter().enumerate() {
            inv[v as usize] = a as u32;
        }
        Permutation { base: self.base, map: inv }
    }

    /// `self ∘ other`, i.e. `a -> self(other(a))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.base, other.base, "composing permutations of different bases");
        Permutation { base: self.base, map: other.map.iter().map(|&a| self.apply(a)).collect() }
    }

    /// `tau ∘ self`, the partner permutation of a scramble.
    pub fn conjugate(&self) -> Permutation {
        Permutation::tau(self.base).compose(self)
    }

    /// `sum_a sigma(a) * a`.
    pub fn weighted_sum(&self) -> u64 {
        self.map.iter().enumerate().map(|(a, &v)| a as u64 * v as u64).sum()
    }

    /// `(1/b) sum_a sigma(a) a` as an exact rational.
    pub fn mean_product(&self) -> Ratio<i64> {
        Ratio::new(self.weighted_sum() as i64, self.base.get() as i64)
    }

    /// Every permutation of `{0, ..., b-1}` in lexicographic order.
    pub fn all(base: Base) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<u32> = (0..base.get()).collect();
        loop {
            out.push(Permutation { base, map: current.clone() });
            // next lexicographic permutation
            let Some(i) = (0..current.len().saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1])
            else {
                break;
            };
            let j = (i + 1..current.len()).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }
}

impl FromStr for PermutationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "id" => return Ok(PermutationKind::Identity),
            "tau" => return Ok(PermutationKind::Tau),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("id_l:") {
            let l = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad shift in permutation spec '{s}'")))?;
            return Ok(PermutationKind::Shift(l));
        }
        if let Some(rest) = s.strip_prefix("explicit:") {
            let list = rest
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse(format!("bad list in permutation spec '{s}'")))?;
            return Ok(PermutationKind::Explicit(list));
        }
        Err(Error::Parse(format!(
            "unknown permutation spec '{s}' (expected id, tau, id_l:<l> or explicit:<list>)"
        )))
    }
}

impl fmt::Display for PermutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermutationKind::Identity => f.write_str("id"),
            PermutationKind::Tau => f.write_str("tau"),
            PermutationKind::Shift(l) => write!(f, "id_l:{l}"),
            PermutationKind::Explicit(list) => {
                let parts: Vec<String> = list.iter().map(u32::to_string).collect();
                write!(f, "explicit:{}", parts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u32) -> Base {
        Base::new(n).unwrap()
    }

    #[test]
    fn named_constructors() {
        assert_eq!(Permutation::make(&PermutationKind::Tau, b(5)).unwrap().as_slice(), &[4, 3, 2, 1, 0]);
        assert_eq!(
            Permutation::make(&PermutationKind::Shift(1), b(5)).unwrap().as_slice(),
            &[1, 2, 3, 4, 0]
        );
        assert!(Permutation::make(&PermutationKind::Shift(5), b(5)).is_err());
    }

    #[test]
    fn explicit_lists_must_be_bijections() {
        assert!(Permutation::make(&PermutationKind::Explicit(vec![0, 2, 1]), b(3)).is_ok());
        assert!(Permutation::make(&PermutationKind::Explicit(vec![0, 0, 1]), b(3)).is_err());
        assert!(Permutation::make(&PermutationKind::Explicit(vec![0, 1]), b(3)).is_err());
        assert!(Permutation::make(&PermutationKind::Explicit(vec![0, 1, 3]), b(3)).is_err());
    }

    #[test]
    fn inverse_composes_to_identity() {
        for p in Permutation::all(b(4)) {
            assert_eq!(p.compose(&p.inverse()), Permutation::identity(b(4)));
            assert_eq!(p.inverse().compose(&p), Permutation::identity(b(4)));
        }
        assert_eq!(Permutation::all(b(4)).len(), 24);
    }

    #[test]
    fn conjugate_is_tau_after_sigma() {
        let s = Permutation::make(&PermutationKind::Explicit(vec![2, 0, 1]), b(3)).unwrap();
        assert_eq!(s.conjugate().as_slice(), &[0, 2, 1]);
        assert_eq!(s.conjugate().conjugate(), s);
    }

    #[test]
    fn spec_strings_round_trip() {
        for text in ["id", "tau", "id_l:3", "explicit:2,0,1"] {
            let kind: PermutationKind = text.parse().unwrap();
            assert_eq!(kind.to_string(), text);
        }
        assert!("sigma".parse::<PermutationKind>().is_err());
        assert!("id_l:x".parse::<PermutationKind>().is_err());
    }
}
