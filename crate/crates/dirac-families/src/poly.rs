//! The base ring `R = K[t]` and its localization `R₀ = K[t,t⁻¹]`,
//! over the Gaussian-rational field `K`.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Coefficient ring abstraction shared by the normal-form engines: the same
/// rewriting code runs over `R` and over `R₀`.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_poly(p: &Poly) -> Self;
    fn from_scalar(s: Scalar) -> Self;
}

/// Exact univariate polynomial over `Q(i)`. No zero coefficient is ever
/// stored; the zero polynomial is the empty map.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    coeffs: BTreeMap<u32, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        Poly { coeffs }
    }

    /// The monomial `c·t^k`.
    pub fn monomial(c: Scalar, k: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        Poly { coeffs }
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Poly::monomial(Scalar::one(), 1)
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(Scalar::from_int(n))
    }

    /// Coefficients in ascending exponent order, including interior zeros,
    /// i.e. the dense list `[c0, c1, ..., c_deg]`.
    pub fn dense_coeffs(&self) -> Vec<Scalar> {
        match self.degree() {
            None => vec![],
            Some(d) => (0..=d).map(|k| self.coeff(k)).collect(),
        }
    }

    pub fn from_dense(coeffs: Vec<Scalar>) -> Self {
        let mut p = Poly::zero();
        for (k, c) in coeffs.into_iter().enumerate() {
            p.set_coeff(k as u32, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, k: u32) -> Scalar {
        self.coeffs.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    fn set_coeff(&mut self, k: u32, c: Scalar) {
        if c.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.degree().map(|d| self.coeff(d)).unwrap_or_else(Scalar::zero)
    }

    /// A nonzero constant, i.e. a unit of `K[t]`.
    pub fn is_unit(&self) -> bool {
        self.degree() == Some(0)
    }

    pub fn is_one(&self) -> bool {
        self.degree() == Some(0) && self.coeff(0).is_one()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            let s = &out.coeff(*k) + c;
            out.set_coeff(*k, s);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                let k = ka + kb;
                let s = &out.coeff(k) + &(ca * cb);
                out.set_coeff(k, s);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|(k, a)| (*k, a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut result = Scalar::zero();
        if let Some(d) = self.degree() {
            for k in (0..=d).rev() {
                result = &(&result * x) + &self.coeff(k);
            }
        }
        result
    }

    /// Euclidean division: `self = q·b + r` with `deg r < deg b`.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let db = b.degree().unwrap();
        let lb = b.leading_coeff();
        let mut q = Poly::zero();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let c = &r.leading_coeff() / &lb;
            let k = dr - db;
            let term = Poly::monomial(c, k);
            q = q.add(&term);
            r = r.sub(&term.mul(b));
        }
        Ok((q, r))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, b: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(b)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divmod(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.leading_coeff().inv().unwrap();
        self.scale(&inv)
    }

    /// Monic greatest common divisor. Errors when both inputs are zero.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b)?;
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Extended Euclid: returns `(g, s, u)` with `g = s·self + u·other`,
    /// `g` monic.
    pub fn gcd_ext(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut u0, mut u1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let u = u0.sub(&q.mul(&u1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            u0 = u1;
            u1 = u;
        }
        let lead = r0.leading_coeff().inv()?;
        let norm = Poly::constant(lead);
        Ok((r0.mul(&norm), s0.mul(&norm), u0.mul(&norm)))
    }

    /// Exact polynomial square root, if `self` is a perfect square in `R`.
    pub fn sqrt(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let d = self.degree().unwrap();
        if d % 2 != 0 {
            return None;
        }
        let lead = self.leading_coeff().sqrt()?;
        let half = d / 2;
        let mut q = Poly::monomial(lead.clone(), half);
        let two_lead = Poly::monomial(&Scalar::from_int(2) * &lead, half);
        loop {
            let r = self.sub(&q.mul(&q));
            if r.is_zero() {
                return Some(q);
            }
            let dr = r.degree().unwrap();
            if dr < half {
                return None;
            }
            // Next coefficient from the top of the residual.
            let c = &r.leading_coeff() / &two_lead.leading_coeff();
            let term = Poly::monomial(c, dr - half);
            if term.is_zero() {
                return None;
            }
            q = q.add(&term);
        }
    }

    /// Valuation at `t`: exponent of the lowest nonzero term.
    pub fn t_valuation(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u32, &Scalar)> {
        self.coeffs.iter()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Coeff for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn from_poly(p: &Poly) -> Self {
        p.clone()
    }
    fn from_scalar(s: Scalar) -> Self {
        Poly::constant(s)
    }
}

/// Laurent polynomial over `Q(i)`: a finite map from integer exponents,
/// same normalization as [`Poly`]. `t` is invertible.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Laurent {
    coeffs: BTreeMap<i64, Scalar>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Laurent::monomial(Scalar::one(), 0)
    }

    pub fn monomial(c: Scalar, k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        Laurent { coeffs }
    }

    pub fn from_poly(p: &Poly) -> Self {
        Laurent {
            coeffs: p.iter().map(|(k, c)| (*k as i64, c.clone())).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Scalar {
        self.coeffs.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    fn set_coeff(&mut self, k: i64, c: Scalar) {
        if c.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            let s = &out.coeff(*k) + c;
            out.set_coeff(*k, s);
        }
        out
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Laurent {
        Laurent {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                let k = ka + kb;
                let s = &out.coeff(k) + &(ca * cb);
                out.set_coeff(k, s);
            }
        }
        out
    }

    /// Multiply by the unit `t^k`.
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// A unit of `R₀`: a single term `c·t^k`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Write `self = t^v · p` with `p ∈ K[t]`, `p(0) ≠ 0`. Zero maps to
    /// `(0, zero)`.
    pub fn split_unit(&self) -> (i64, Poly) {
        match self.min_exp() {
            None => (0, Poly::zero()),
            Some(v) => {
                let mut p = Poly::zero();
                for (k, c) in &self.coeffs {
                    p = p.add(&Poly::monomial(c.clone(), (k - v) as u32));
                }
                (v, p)
            }
        }
    }

    /// Back to `K[t]` when no negative exponents occur.
    pub fn to_poly(&self) -> Option<Poly> {
        if self.min_exp().map(|m| m < 0).unwrap_or(false) {
            return None;
        }
        let mut p = Poly::zero();
        for (k, c) in &self.coeffs {
            p = p.add(&Poly::monomial(c.clone(), *k as u32));
        }
        Some(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Scalar)> {
        self.coeffs.iter()
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Coeff for Laurent {
    fn zero() -> Self {
        Laurent::zero()
    }
    fn one() -> Self {
        Laurent::one()
    }
    fn is_zero(&self) -> bool {
        Laurent::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn from_poly(p: &Poly) -> Self {
        Laurent::from_poly(p)
    }
    fn from_scalar(s: Scalar) -> Self {
        Laurent::monomial(s, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_dense(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    #[test]
    fn divmod_examples() {
        // (t²−1) / (t−1) = (t+1, 0)
        let (q, r) = p(&[-1, 0, 1]).divmod(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());

        // t³ / t² = (t, 0)
        let (q, r) = p(&[0, 0, 0, 1]).divmod(&p(&[0, 0, 1])).unwrap();
        assert_eq!(q, p(&[0, 1]));
        assert!(r.is_zero());

        // (t²+1) / (2t) = (t/2, 1), checked by reconstruction
        let a = p(&[1, 0, 1]);
        let b = p(&[0, 2]);
        let (q, r) = a.divmod(&b).unwrap();
        assert_eq!(q, Poly::monomial(Scalar::from_ratio(1, 2), 1));
        assert_eq!(r, Poly::one());
        assert_eq!(q.mul(&b).add(&r), a);
    }

    #[test]
    fn divmod_zero_divisor() {
        assert!(matches!(p(&[1]).divmod(&Poly::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])).unwrap(), p(&[-1, 1]));
        assert_eq!(p(&[0, 1]).gcd(&p(&[1, 1])).unwrap(), Poly::one());
        // gcd(2t²+2, 4t⁴−4) = t²+1, with Bézout identity from extended Euclid
        let a = p(&[2, 0, 2]);
        let b = p(&[-4, 0, 0, 0, 4]);
        let g = a.gcd(&b).unwrap();
        assert_eq!(g, p(&[1, 0, 1]));
        let (g2, s, u) = a.gcd_ext(&b).unwrap();
        assert_eq!(g2, g);
        assert_eq!(s.mul(&a).add(&u.mul(&b)), g);
        assert!(g.divides(&a) && g.divides(&b));
        assert!(matches!(Poly::zero().gcd(&Poly::zero()), Err(Error::GcdOfZeros)));
    }

    #[test]
    fn sqrt_examples() {
        let sq = p(&[1, 2, 1]); // (t+1)^2
        assert_eq!(sq.sqrt().unwrap().monic(), p(&[1, 1]));
        assert!(p(&[0, 1]).sqrt().is_none());
        assert!(p(&[2]).sqrt().is_none());
        // t² → ±t
        let r = p(&[0, 0, 1]).sqrt().unwrap();
        assert_eq!(r.mul(&r), p(&[0, 0, 1]));
    }

    #[test]
    fn laurent_units_and_split() {
        let l = Laurent::monomial(Scalar::from_int(3), -2)
            .add(&Laurent::monomial(Scalar::from_int(1), 1));
        let (v, q) = l.split_unit();
        assert_eq!(v, -2);
        assert_eq!(q, p(&[3, 0, 0, 1]));
        assert!(Laurent::monomial(Scalar::from_int(5), -7).is_unit());
        assert!(!l.is_unit());
        assert_eq!(l.shift(2).to_poly().unwrap(), p(&[3, 0, 0, 1]));
    }
}
