//! Exact rational arithmetic.
//!
//! Every dissimilarity in this crate evaluates to a [`Rat`] so that
//! triangle-inequality checks are decided exactly. The metric region has a
//! boundary that is attained with equality, and a single ulp of floating-point
//! rounding would misclassify boundary points.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational in canonical reduced form (denominator > 0).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

/// Error parsing a rational from text.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

impl Rat {
    /// Builds `numer / denom`. Panics when `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Rat {
        assert!(denom != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// True when the value is an integer (denominator 1).
    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    /// Largest integer not exceeding the value.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Exact `self^exp` for a non-negative integer exponent.
    pub fn pow(&self, exp: u32) -> Rat {
        Rat(BigRational::new(
            self.0.numer().pow(exp),
            self.0.denom().pow(exp),
        ))
    }

    /// Nearest binary double; rounding happens only at this boundary.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering rounded to `sig` significant digits, trailing zeros
    /// trimmed. `Rat::new(2, 3).decimal(12)` is `"0.666666666667"`.
    pub fn decimal(&self, sig: usize) -> String {
        assert!(sig >= 1);
        if self.0.is_zero() {
            return "0".to_string();
        }
        let n = self.0.numer().magnitude();
        let d = self.0.denom().magnitude();
        let ten = BigUint::from(10u32);
        // floor(log10(n/d)): digit-count estimate, then correct by comparison.
        let cmp_pow10 = |e: i64| -> Ordering {
            if e >= 0 {
                n.cmp(&(d * ten.pow(e as u32)))
            } else {
                (n * ten.pow((-e) as u32)).cmp(d)
            }
        };
        let mut e = n.to_string().len() as i64 - d.to_string().len() as i64;
        if cmp_pow10(e) == Ordering::Less {
            e -= 1;
        } else if cmp_pow10(e + 1) != Ordering::Less {
            e += 1;
        }
        // q = n/d * 10^(sig-1-e), rounded half away from zero.
        let k = sig as i64 - 1 - e;
        let (num, den) = if k >= 0 {
            (n * ten.pow(k as u32), d.clone())
        } else {
            (n.clone(), d * ten.pow((-k) as u32))
        };
        let mut q = (&num * 2u32 + &den) / (&den * 2u32);
        if q == ten.pow(sig as u32) {
            q = ten.pow(sig as u32 - 1);
            e += 1;
        }
        let digits = q.to_string();
        debug_assert_eq!(digits.len(), sig);

        let mut out = String::new();
        if self.0.is_negative() {
            out.push('-');
        }
        let point = e + 1; // digits before the decimal point
        if point <= 0 {
            out.push_str("0.");
            for _ in 0..(-point) {
                out.push('0');
            }
            out.push_str(digits.trim_end_matches('0'));
        } else if point as usize >= sig {
            out.push_str(&digits);
            for _ in 0..(point as usize - sig) {
                out.push('0');
            }
        } else {
            let (int_part, frac_part) = digits.split_at(point as usize);
            out.push_str(int_part);
            let frac_part = frac_part.trim_end_matches('0');
            if !frac_part.is_empty() {
                out.push('.');
                out.push_str(frac_part);
            }
        }
        out
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<usize> for Rat {
    fn from(v: usize) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<BigInt> for Rat {
    fn from(v: BigInt) -> Rat {
        Rat(BigRational::from_integer(v))
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    /// Accepts integers (`"2"`), fractions (`"3/4"`) and decimal literals
    /// (`"0.21"`, parsed exactly as 21/100 — never through binary floats).
    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRatError::Empty);
        }
        let invalid = || ParseRatError::Invalid(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| invalid())?;
            let d: BigInt = d.trim().parse().map_err(|_| invalid())?;
            if d.is_zero() {
                return Err(ParseRatError::ZeroDenominator(s.to_string()));
            }
            return Ok(Rat(BigRational::new(n, d)));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(invalid());
            }
            let int_part = match int_part {
                "" => "0",
                "-" => "-0",
                other => other,
            };
            // The sign travels with the integer part: "-0.5" becomes "-05".
            let combined: BigInt = format!("{int_part}{frac_part}")
                .parse()
                .map_err(|_| invalid())?;
            let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
            return Ok(Rat(BigRational::new(combined, scale)));
        }
        let n: BigInt = s.parse().map_err(|_| invalid())?;
        Ok(Rat(BigRational::from_integer(n)))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_exactly() {
        let r: Rat = "0.21".parse().unwrap();
        assert_eq!(r, Rat::new(21, 100));
        let r: Rat = "1.999".parse().unwrap();
        assert_eq!(r, Rat::new(1999, 1000));
        let r: Rat = "-0.5".parse().unwrap();
        assert_eq!(r, Rat::new(-1, 2));
        let r: Rat = ".5".parse().unwrap();
        assert_eq!(r, Rat::new(1, 2));
    }

    #[test]
    fn parses_fraction_and_integer() {
        assert_eq!("3/4".parse::<Rat>().unwrap(), Rat::new(3, 4));
        assert_eq!("-7/2".parse::<Rat>().unwrap(), Rat::new(-7, 2));
        assert_eq!("6/4".parse::<Rat>().unwrap(), Rat::new(3, 2));
        assert_eq!("5".parse::<Rat>().unwrap(), Rat::from(5i64));
    }

    #[test]
    fn rejects_bad_literals() {
        assert_eq!("".parse::<Rat>(), Err(ParseRatError::Empty));
        assert!(matches!("x".parse::<Rat>(), Err(ParseRatError::Invalid(_))));
        assert!(matches!(
            "1.2.3".parse::<Rat>(),
            Err(ParseRatError::Invalid(_))
        ));
        assert!(matches!(
            "1/0".parse::<Rat>(),
            Err(ParseRatError::ZeroDenominator(_))
        ));
    }

    #[test]
    fn display_round_trips() {
        for s in ["2/3", "-5/7", "4", "0", "1999/1000"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
            assert_eq!(r.to_string().parse::<Rat>().unwrap(), r);
        }
    }

    #[test]
    fn decimal_significant_digits() {
        assert_eq!(Rat::new(2, 3).decimal(12), "0.666666666667");
        assert_eq!(Rat::new(1, 2).decimal(12), "0.5");
        assert_eq!(Rat::new(1999, 1000).decimal(12), "1.999");
        assert_eq!(Rat::from(133i64).decimal(12), "133");
        assert_eq!(Rat::new(1, 3).decimal(12), "0.333333333333");
        assert_eq!(Rat::new(-1, 3).decimal(3), "-0.333");
        assert_eq!(Rat::new(999, 1000).decimal(2), "1");
        assert_eq!(Rat::new(1, 400).decimal(3), "0.0025");
        assert_eq!(Rat::zero().decimal(12), "0");
        assert_eq!(Rat::from(12345i64).decimal(3), "12300");
    }

    #[test]
    fn arithmetic_and_ordering() {
        let a = Rat::new(1, 3);
        let b = Rat::new(1, 6);
        assert_eq!(&a + &b, Rat::new(1, 2));
        assert_eq!(&a - &b, Rat::new(1, 6));
        assert_eq!(&a * &b, Rat::new(1, 18));
        assert_eq!(&a / &b, Rat::from(2i64));
        assert!(b < a);
        assert_eq!(-a, Rat::new(-1, 3));
        assert_eq!(Rat::new(2, 3).pow(3), Rat::new(8, 27));
        assert_eq!(Rat::new(7, 2).floor_int(), BigInt::from(3));
        assert_eq!(Rat::new(-7, 2).floor_int(), BigInt::from(-4));
    }
}
