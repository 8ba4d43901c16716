use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::padic::is_prime;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaceError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("ramification and inertial degrees must be at least 1")]
    ZeroDegree,
    #[error("residue field order {q0} is not a power of {p}")]
    BadResidueOrder { p: u64, q0: u64 },
    #[error("local weight {0} must lie in (0, 1]")]
    BadWeight(String),
    #[error("cannot parse place {0:?}")]
    Parse(String),
}

/// Data of one nonarchimedean place `v` of a number field `K` together with the
/// chosen extension `L_v / K_v`.
///
/// `q0` is the order of the residue field of `K_v` and `weight` is
/// `N_v = [K_v : Q_p] / [K : Q]`. Over `K = Q` these are `p` and `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalFieldSpec {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    pub q0: u64,
    pub weight: BigRational,
}

impl LocalFieldSpec {
    pub fn new(p: u64, e: u32, f: u32, q0: u64, weight: BigRational) -> Result<Self, PlaceError> {
        if !is_prime(p) {
            return Err(PlaceError::NotPrime(p));
        }
        if e == 0 || f == 0 {
            return Err(PlaceError::ZeroDegree);
        }
        let mut q = q0;
        while q > 1 && q % p == 0 {
            q /= p;
        }
        if q != 1 || q0 < p {
            return Err(PlaceError::BadResidueOrder { p, q0 });
        }
        if !weight.is_positive() || weight > BigRational::one() {
            return Err(PlaceError::BadWeight(weight.to_string()));
        }
        Ok(LocalFieldSpec { p, e, f, q0, weight })
    }

    /// `Q_{p^f}` over `Q`.
    pub fn unramified(p: u64, f: u32) -> Result<Self, PlaceError> {
        Self::new(p, 1, f, p, BigRational::one())
    }

    /// Base field `Q`: `q0 = p` and `N = 1`.
    pub fn over_rationals(&self) -> bool {
        self.q0 == self.p && self.weight.is_one()
    }

    /// Supported by the splitting decision: base `Q`, `L_v` unramified.
    pub fn is_decidable(&self) -> bool {
        self.e == 1 && self.over_rationals()
    }

    /// Order of the residue field of `L_v`, `q0^f`.
    pub fn residue_order(&self) -> BigInt {
        BigInt::from(self.q0).pow(self.f)
    }

    /// Parses `p[,f]`, the form used by `check` and `search`.
    pub fn parse_unramified(s: &str) -> Result<Self, PlaceError> {
        let parts = split_fields(s)?;
        match parts.as_slice() {
            [p] => Self::unramified(parse_u64(p, s)?, 1),
            [p, f] => Self::unramified(parse_u64(p, s)?, parse_u64(f, s)? as u32),
            _ => Err(PlaceError::Parse(s.to_string())),
        }
    }

    /// Stable textual key, `p,e,f` over `Q` and `p,e,f,q0,N` otherwise.
    pub fn key(&self) -> String {
        if self.over_rationals() {
            format!("{},{},{}", self.p, self.e, self.f)
        } else {
            format!("{},{},{},{},{}", self.p, self.e, self.f, self.q0, self.weight)
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "e": self.e,
            "f": self.f,
            "q0": self.q0,
            "N": self.weight.to_string(),
        })
    }
}

/// Key for a list of places, in input order, joined by `;`.
pub fn places_key(places: &[LocalFieldSpec]) -> String {
    places
        .iter()
        .map(LocalFieldSpec::key)
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_places_key(key: &str) -> Result<Vec<LocalFieldSpec>, PlaceError> {
    key.split(';').map(str::parse).collect()
}

fn split_fields(s: &str) -> Result<Vec<&str>, PlaceError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.iter().any(|t| t.is_empty()) {
        return Err(PlaceError::Parse(s.to_string()));
    }
    Ok(parts)
}

fn parse_u64(t: &str, whole: &str) -> Result<u64, PlaceError> {
    t.parse().map_err(|_| PlaceError::Parse(whole.to_string()))
}

fn parse_rational(t: &str, whole: &str) -> Result<BigRational, PlaceError> {
    let bad = || PlaceError::Parse(whole.to_string());
    match t.split_once('/') {
        Some((a, b)) => {
            let den: BigInt = b.parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a.parse().map_err(|_| bad())?, den))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for LocalFieldSpec {
    type Err = PlaceError;

    /// Parses `p[,e[,f[,q0[,N]]]]`; omitted fields default to `1, 1, p, 1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = split_fields(s)?;
        if parts.is_empty() || parts.len() > 5 {
            return Err(PlaceError::Parse(s.to_string()));
        }
        let p = parse_u64(parts[0], s)?;
        let e = parts.get(1).map(|t| parse_u64(t, s)).transpose()?.unwrap_or(1) as u32;
        let f = parts.get(2).map(|t| parse_u64(t, s)).transpose()?.unwrap_or(1) as u32;
        let q0 = parts.get(3).map(|t| parse_u64(t, s)).transpose()?.unwrap_or(p);
        let weight = parts
            .get(4)
            .map(|t| parse_rational(t, s))
            .transpose()?
            .unwrap_or_else(BigRational::one);
        LocalFieldSpec::new(p, e, f, q0, weight)
    }
}

impl fmt::Display for LocalFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let a: LocalFieldSpec = "2".parse().unwrap();
        assert_eq!(a, LocalFieldSpec::unramified(2, 1).unwrap());
        let b: LocalFieldSpec = "3,1,2".parse().unwrap();
        assert_eq!(b.residue_order(), BigInt::from(9));
        let c: LocalFieldSpec = "2,2,1,4,1/2".parse().unwrap();
        assert!(!c.over_rationals() && !c.is_decidable());
        assert_eq!(c.key(), "2,2,1,4,1/2");
        assert_eq!(parse_places_key("2,1,1;2,2,1,4,1/2").unwrap(), vec![a, c]);
        assert_eq!(
            LocalFieldSpec::parse_unramified("3,2").unwrap(),
            LocalFieldSpec::unramified(3, 2).unwrap()
        );
    }

    #[test]
    fn rejects_bad_places() {
        assert_eq!("4".parse::<LocalFieldSpec>(), Err(PlaceError::NotPrime(4)));
        assert!(matches!("2,1,1,6".parse::<LocalFieldSpec>(), Err(PlaceError::BadResidueOrder { .. })));
        assert!(matches!("2,1,1,2,3/2".parse::<LocalFieldSpec>(), Err(PlaceError::BadWeight(_))));
        assert!(matches!("2,0".parse::<LocalFieldSpec>(), Err(PlaceError::ZeroDegree)));
        assert!("2,,1".parse::<LocalFieldSpec>().is_err());
    }
}
