//! Scalar abstraction shared by the exact (rational) and floating evaluation modes.
//!
//! All rank and degeneracy decisions are made through this trait so that a
//! `BigRational` germ decides them exactly while an `f64` germ falls back to
//! the documented tolerances.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Absolute tolerance for zero tests on floating scalars. Callers that work
/// with unnormalized data (e.g. Gaussian elimination) scale it by the
/// magnitude of the surrounding matrix instead of using it raw.
pub const FLOAT_ZERO_TOL: f64 = 1e-9;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Field of coefficients for germs, forms and loci.
///
/// `EXACT` distinguishes the two modes: exact scalars never compare against a
/// tolerance, and `try_sqrt` succeeds only on perfect squares, which is how
/// irrational rotations are detected before they silently corrupt exactness.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    const EXACT: bool;

    fn from_int(n: i64) -> Self;
    fn from_ratio(numer: i64, denom: i64) -> Self;
    fn to_f64(&self) -> f64;

    /// Exact square root when representable in the field, `None` otherwise.
    /// For `f64` this only fails on genuinely negative inputs.
    fn try_sqrt(&self) -> Option<Self>;

    /// Zero test: exact comparison in exact mode, absolute tolerance in
    /// floating mode.
    fn is_zero_val(&self) -> bool;

    fn sign(&self) -> Sign {
        if self.is_zero_val() {
            Sign::Zero
        } else if self.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn try_sqrt(&self) -> Option<Self> {
        if *self >= 0.0 {
            Some(self.sqrt())
        } else if *self > -FLOAT_ZERO_TOL {
            // Rounding dust below a true zero.
            Some(0.0)
        } else {
            None
        }
    }

    fn is_zero_val(&self) -> bool {
        self.abs() < FLOAT_ZERO_TOL
    }
}

/// Exact rational scalar used by default throughout the crate.
pub type Rat = BigRational;

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "rational with zero denominator");
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn try_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        // BigRational is kept reduced, so numerator and denominator must both
        // be perfect squares.
        let num = self.numer();
        let den = self.denom();
        let sn = num.sqrt();
        let sd = den.sqrt();
        if &(&sn * &sn) == num && &(&sd * &sd) == den {
            Some(BigRational::new(sn, sd))
        } else {
            None
        }
    }

    fn is_zero_val(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// Shorthand for a literal rational value.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::from_ratio(numer, denom)
}

/// Shorthand for an integer rational value.
pub fn rint(n: i64) -> Rat {
    Rat::from_int(n)
}

pub fn to_f64_vec<S: Scalar>(v: &[S]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// Lossless-enough text form used by the CLI and the jet serializer: `p/q`
/// strings for exact values, shortest round-trip decimals for floats.
pub trait ScalarRepr: Scalar {
    fn jet_token(&self) -> String;
    fn parse_token(tok: &str) -> Option<Self>;
}

impl ScalarRepr for Rat {
    fn jet_token(&self) -> String {
        if num_traits::One::is_one(self.denom()) {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn parse_token(tok: &str) -> Option<Self> {
        tok.parse().ok()
    }
}

impl ScalarRepr for f64 {
    fn jet_token(&self) -> String {
        let s = format!("{self}");
        // Keep a marker so the token re-parses as floating, not rational.
        if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
            s
        } else {
            format!("{s}.0")
        }
    }

    fn parse_token(tok: &str) -> Option<Self> {
        // Accept rational tokens too, so a file mixing `1/2` with `0.25`
        // parses wholesale in float mode.
        if let Some((p, q)) = tok.split_once('/') {
            let p: f64 = p.parse().ok()?;
            let q: f64 = q.parse().ok()?;
            if q == 0.0 {
                return None;
            }
            return Some(p / q);
        }
        tok.parse().ok()
    }
}

impl FromPrimitive for Sign {
    fn from_i64(n: i64) -> Option<Self> {
        Some(match n.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        })
    }

    fn from_u64(n: u64) -> Option<Self> {
        Self::from_i64(n as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sqrt_only_on_perfect_squares() {
        assert_eq!(rat(9, 4).try_sqrt(), Some(rat(3, 2)));
        assert_eq!(rat(2, 1).try_sqrt(), None);
        assert_eq!(rat(-4, 1).try_sqrt(), None);
        assert_eq!(rint(0).try_sqrt(), Some(rint(0)));
    }

    #[test]
    fn float_zero_uses_tolerance() {
        assert!(5e-10_f64.is_zero_val());
        assert!(!2e-9_f64.is_zero_val());
        assert!(!Rat::from_ratio(1, 1_000_000_000_000).is_zero_val());
    }

    #[test]
    fn jet_tokens_round_trip() {
        let r = rat(-7, 3);
        assert_eq!(r.jet_token(), "-7/3");
        assert_eq!(Rat::parse_token("-7/3"), Some(r));
        let x = 0.1_f64;
        assert_eq!(f64::parse_token(&x.jet_token()), Some(x));
        assert_eq!(2.0_f64.jet_token(), "2.0");
    }
}
