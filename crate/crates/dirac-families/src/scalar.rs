//! Gaussian-rational scalars: the exact coefficient field `Q(i)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// An element `re + im*i` of the Gaussian rationals. Both parts are
/// arbitrary-precision rationals kept in lowest terms with positive
/// denominator (the invariant `num_rational` maintains).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::new(BigRational::one(), BigRational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `num/den` as a real rational scalar.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// Squared modulus `re² + im²`, a non-negative rational.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sq();
        Ok(Scalar::new(&self.re / &n, -&self.im / &n))
    }

    /// An exact square root in `Q(i)`, if one exists. Either root may be
    /// returned; callers needing a canonical choice normalize afterwards.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.im.is_zero() {
            let a = &self.re;
            return if a.is_positive() {
                rational_sqrt(a).map(|r| Scalar::new(r, BigRational::zero()))
            } else {
                rational_sqrt(&-a).map(|r| Scalar::new(BigRational::zero(), r))
            };
        }
        // (c + d i)^2 = a + b i  =>  c^2 = (a + |a+bi|)/2, d = b/(2c).
        let s = rational_sqrt(&self.norm_sq())?;
        let c2 = (&self.re + &s) / BigRational::from_integer(BigInt::from(2));
        let c = rational_sqrt(&c2)?;
        if c.is_zero() {
            return None;
        }
        let d = &self.im / (BigRational::from_integer(BigInt::from(2)) * &c);
        let cand = Scalar::new(c, d);
        if &(&cand * &cand) == self {
            Some(cand)
        } else {
            None
        }
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (num, den) = (q.numer(), q.denom());
    let ns = num.sqrt();
    let ds = den.sqrt();
    if &(&ns * &ns) == num && &(&ds * &ds) == den {
        Some(BigRational::new(ns, ds))
    } else {
        None
    }
}

impl<'a> Add for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        let inv = rhs.inv().expect("scalar division by zero");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// Exact wire format: `a/b` for rationals, `a/b+c/d*i` in general
    /// (a negative imaginary part prints as `a/b-c/d*i`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", fmt_rational(&self.im));
        }
        if self.im.is_negative() {
            write!(f, "{}-{}*i", fmt_rational(&self.re), fmt_rational(&-&self.im))
        } else {
            write!(f, "{}+{}*i", fmt_rational(&self.re), fmt_rational(&self.im))
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| Error::ParseScalar(s.to_string()))?;
    let d = BigInt::from_str(den).map_err(|_| Error::ParseScalar(s.to_string()))?;
    if d.is_zero() {
        return Err(Error::ParseScalar(s.to_string()));
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `a/b`, `a/b+c/d*i`, `a/b-c/d*i`, `c/d*i`, `i`, `-i`.
    fn from_str(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::ParseScalar(input.to_string()));
        }
        if let Some(head) = s.strip_suffix("*i").or_else(|| s.strip_suffix("i")) {
            // Purely imaginary, or a trailing imaginary part after +/-.
            // Find the split point between real and imaginary summands:
            // scan for a '+' or '-' that is not the leading sign.
            if let Some(pos) = split_point(head) {
                let (re_s, im_s) = head.split_at(pos);
                let re = parse_rational(re_s)?;
                let im_body = im_s.trim_end_matches('*');
                let im = if im_body == "+" {
                    BigRational::one()
                } else if im_body == "-" {
                    -BigRational::one()
                } else {
                    parse_rational(im_body)?
                };
                return Ok(Scalar::new(re, im));
            }
            let body = head.trim_end_matches('*');
            let im = if body.is_empty() {
                BigRational::one()
            } else if body == "-" {
                -BigRational::one()
            } else {
                parse_rational(body)?
            };
            return Ok(Scalar::new(BigRational::zero(), im));
        }
        Ok(Scalar::new(parse_rational(&s)?, BigRational::zero()))
    }
}

/// Index of the sign that separates the real summand from the imaginary one,
/// skipping a leading sign. Returns `None` for single-summand strings.
fn split_point(s: &str) -> Option<usize> {
    s.char_indices()
        .skip(1)
        .find(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &str) -> Scalar {
        v.parse().unwrap()
    }

    #[test]
    fn field_ops_exact() {
        let a = s("1/2+3/4*i");
        let b = s("-2/3");
        assert_eq!(&a + &b, s("-1/6+3/4*i"));
        assert_eq!(&a * &b, s("-1/3-1/2*i"));
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
    }

    #[test]
    fn roundtrip_strings() {
        for v in ["0", "-7/3", "1/2+1/3*i", "2-5/4*i", "1*i", "-1*i", "3/2*i"] {
            let x = s(v);
            let y: Scalar = x.to_string().parse().unwrap();
            assert_eq!(x, y, "{v}");
        }
    }

    #[test]
    fn sqrt_cases() {
        assert_eq!(s("9/4").sqrt().unwrap(), s("3/2"));
        assert_eq!(s("-1").sqrt().unwrap(), s("1*i"));
        // (1+i)^2 = 2i
        let r = s("2*i").sqrt().unwrap();
        assert_eq!(&r * &r, s("2*i"));
        assert!(s("2").sqrt().is_none());
        assert!(s("1+1*i").sqrt().is_none());
    }
}
