//! Spin labels and system descriptions.
//!
//! Spins are carried as twice their value so that half-integers stay exact.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A spin `j` stored as the integer `2j`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct TwiceSpin(pub u32);

impl TwiceSpin {
    pub const ZERO: TwiceSpin = TwiceSpin(0);
    pub const HALF: TwiceSpin = TwiceSpin(1);
    pub const ONE: TwiceSpin = TwiceSpin(2);

    pub const fn new(twice_j: u32) -> Self {
        TwiceSpin(twice_j)
    }

    pub const fn twice(self) -> u32 {
        self.0
    }

    /// Dimension `2j + 1` of the irreducible representation.
    pub const fn dim(self) -> u32 {
        self.0 + 1
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_half_integer(self) -> bool {
        self.0 % 2 == 1
    }
}

impl From<u32> for TwiceSpin {
    fn from(twice_j: u32) -> Self {
        TwiceSpin(twice_j)
    }
}

impl fmt::Display for TwiceSpin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Parses `"1"`, `"3/2"` or `"0.5"`.
impl FromStr for TwiceSpin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("not a spin value: {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => Ok(TwiceSpin(num)),
                "1" => Ok(TwiceSpin(2 * num)),
                _ => Err(bad()),
            }
        } else if let Ok(v) = s.parse::<u32>() {
            Ok(TwiceSpin(2 * v))
        } else {
            let v: f64 = s.parse().map_err(|_| bad())?;
            let twice = 2.0 * v;
            if v < 0.0 || twice.fract() != 0.0 || twice > f64::from(u32::MAX) {
                return Err(bad());
            }
            Ok(TwiceSpin(twice as u32))
        }
    }
}

/// What every constituent of a system is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ConstituentKind {
    /// An SU(2) spin of the given size.
    Spin { twice_s: TwiceSpin },
    /// The fundamental representation of SU(M).
    FundamentalOfUnitary { rank: u32 },
}

/// `count` identical constituents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemSpec {
    pub constituent_count: u32,
    pub kind: ConstituentKind,
}

impl SystemSpec {
    pub fn qubits(count: u32) -> Self {
        Self::spins(count, TwiceSpin::HALF)
    }

    pub fn spins(count: u32, twice_s: TwiceSpin) -> Self {
        SystemSpec {
            constituent_count: count,
            kind: ConstituentKind::Spin { twice_s },
        }
    }

    /// Panics if `rank < 2`.
    pub fn unitary(rank: u32, count: u32) -> Self {
        assert!(rank >= 2, "SU(M) needs M >= 2, got {rank}");
        SystemSpec {
            constituent_count: count,
            kind: ConstituentKind::FundamentalOfUnitary { rank },
        }
    }

    pub fn twice_spin(&self) -> Option<TwiceSpin> {
        match self.kind {
            ConstituentKind::Spin { twice_s } => Some(twice_s),
            ConstituentKind::FundamentalOfUnitary { .. } => None,
        }
    }

    pub fn is_qubits(&self) -> bool {
        self.twice_spin() == Some(TwiceSpin::HALF)
    }

    /// Local dimension of one constituent.
    pub fn local_dim(&self) -> u32 {
        match self.kind {
            ConstituentKind::Spin { twice_s } => twice_s.dim(),
            ConstituentKind::FundamentalOfUnitary { rank } => rank,
        }
    }

    /// Largest total spin reachable, as a twice-value. `None` for SU(M).
    pub fn max_twice_j(&self) -> Option<u32> {
        self.twice_spin()
            .map(|s| self.constituent_count * s.twice())
    }

    /// Same constituent kind, different count.
    pub fn with_count(&self, count: u32) -> Self {
        SystemSpec {
            constituent_count: count,
            kind: self.kind,
        }
    }
}
