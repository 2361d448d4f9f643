//! Gaussian rationals ℚ(i), the coefficient field of the pluriharmonic
//! polynomial module.

use crate::exactmath::{CyclotomicNumber, Rat};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.re, self.im)
    }
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        GaussRat::new(Rat::one(), Rat::zero())
    }

    pub fn i() -> Self {
        GaussRat::new(Rat::zero(), Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        GaussRat::new(r, Rat::zero())
    }

    pub fn from_i64(n: i64) -> Self {
        GaussRat::from_rat(crate::exactmath::rint(n))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn neg(&self) -> Self {
        GaussRat::new(-&self.re, -&self.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn scale(&self, r: &Rat) -> Self {
        GaussRat::new(&self.re * r, &self.im * r)
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -&self.im)
    }

    pub fn inv(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return None;
        }
        Some(GaussRat::new(&self.re / &norm, -&self.im / &norm))
    }

    /// Embeds into ℚ(ζ₄) via `i = ζ₄`.
    pub fn to_cyclotomic(&self) -> CyclotomicNumber {
        CyclotomicNumber::from_raw(4, vec![self.re.clone(), self.im.clone()])
    }

    pub fn to_complex(&self) -> Complex64 {
        let f = |x: &Rat| {
            x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
        };
        Complex64::new(f(&self.re), f(&self.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rint;

    #[test]
    fn field_ops() {
        let a = GaussRat::new(rint(2), rint(3));
        let b = GaussRat::new(rint(-1), rint(4));
        let prod = a.mul(&b);
        assert_eq!(prod, GaussRat::new(rint(-14), rint(5)));
        let inv = a.inv().unwrap();
        assert_eq!(a.mul(&inv), GaussRat::one());
        assert!(GaussRat::zero().inv().is_none());
    }

    #[test]
    fn cyclotomic_embedding_multiplicative() {
        let a = GaussRat::new(rint(2), rint(3));
        let b = GaussRat::new(rint(5), rint(-1));
        let lhs = a.mul(&b).to_cyclotomic();
        let rhs = a.to_cyclotomic().mul(&b.to_cyclotomic());
        assert_eq!(lhs, rhs);
    }
}
