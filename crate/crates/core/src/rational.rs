//! Exact rationals, extended rationals with infinite sentinels, and their
//! textual form (`"p/q"`).

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    // Accept the unicode minus as well.
    let n = n.replace('\u{2212}', "-");
    let num: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let den: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Q::new(num, den))
}

/// Sign `(-1)^k`.
pub fn sign(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Small random rational with numerator in `[-range, range]` and denominator in `1..=4`.
pub fn random_q<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Q {
    let n = rng.gen_range(-range..=range);
    let d = rng.gen_range(1..=4);
    qf(n, d)
}

pub fn random_nonneg_q<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Q {
    random_q(rng, range).abs()
}

/// A rational number or one of the two infinities. The derived order puts
/// `NegInf` below every finite value and `PosInf` above.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ext {
    NegInf,
    Fin(Q),
    PosInf,
}

impl Ext {
    pub fn fin(x: Q) -> Self {
        Ext::Fin(x)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Fin(_))
    }

    pub fn as_finite(&self) -> Option<&Q> {
        match self {
            Ext::Fin(x) => Some(x),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "-inf" | "-∞" => Ok(Ext::NegInf),
            "+inf" | "inf" | "∞" | "+∞" => Ok(Ext::PosInf),
            other => parse_q(other).map(Ext::Fin),
        }
    }
}

impl Add<&Q> for &Ext {
    type Output = Ext;

    fn add(self, rhs: &Q) -> Ext {
        match self {
            Ext::Fin(x) => Ext::Fin(x + rhs),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::PosInf => write!(f, "+inf"),
            Ext::Fin(x) => write!(f, "{}", format_q(x)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6").unwrap(), qf(1, 2));
        assert_eq!(parse_q("−2").unwrap(), q(-2));
        assert_eq!(format_q(&qf(-4, 2)), "-2");
        assert_eq!(format_q(&qf(1, 3)), "1/3");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn extended_order_and_shift() {
        assert!(Ext::NegInf < Ext::Fin(q(-1000)));
        assert!(Ext::Fin(q(1000)) < Ext::PosInf);
        assert_eq!(&Ext::NegInf + &q(3), Ext::NegInf);
        assert_eq!(&Ext::Fin(q(1)) + &qf(1, 2), Ext::Fin(qf(3, 2)));
        assert_eq!(Ext::parse("+inf").unwrap(), Ext::PosInf);
    }
}
