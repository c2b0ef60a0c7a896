use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A binary label or prediction in `{-1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    /// Both signs, in table order (`-1` first).
    pub const BOTH: [Sign; 2] = [Sign::Neg, Sign::Pos];

    /// Index into 2-entry probability tables: `-1 -> 0`, `+1 -> 1`.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Sign::Neg => 0,
            Sign::Pos => 1,
        }
    }

    #[inline]
    pub fn from_index(i: usize) -> Sign {
        if i == 0 {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        match self {
            Sign::Neg => -1.0,
            Sign::Pos => 1.0,
        }
    }

    #[inline]
    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Pos => 1,
        }
    }

    /// Sign of a real score with ties (`0.0`) broken to `+1`.
    #[inline]
    pub fn of_score(score: f64) -> Sign {
        if score < 0.0 {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }

    /// Strict conversion: only `-1.0` and `1.0` are accepted.
    pub fn try_from_f64(v: f64) -> Result<Sign> {
        if v == 1.0 {
            Ok(Sign::Pos)
        } else if v == -1.0 {
            Ok(Sign::Neg)
        } else {
            Err(Error::NotASign(v))
        }
    }

    pub fn try_from_i64(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Pos),
            -1 => Ok(Sign::Neg),
            other => Err(Error::NotASign(other as f64)),
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Pos => Sign::Neg,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_i8())
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.to_i8())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Sign, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::try_from_i64(v).map_err(serde::de::Error::custom)
    }
}

/// Validates a real-valued column as signs.
pub fn signs_from_f64(values: &[f64]) -> Result<Vec<Sign>> {
    values.iter().map(|&v| Sign::try_from_f64(v)).collect()
}
