//! Exact arithmetic in cyclotomic fields ℚ(ζ_F).
//!
//! Elements are stored on the power basis `1, ζ, …, ζ^{φ(F)−1}` after
//! reduction modulo the F-th cyclotomic polynomial, so equality and the
//! zero test are exact. Binary operations on elements of different orders
//! promote both to the lcm order via `ζ_d = ζ_L^{L/d}`.

use crate::exactmath::Rat;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Monic integer coefficients of the F-th cyclotomic polynomial,
/// ascending degree; computed by exact division of `x^F − 1` by all
/// `Φ_d` with `d | F`, `d < F`, and memoized.
pub fn cyclotomic_polynomial(f: u64) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&f) {
        return p.clone();
    }
    let result = if f == 1 {
        vec![BigInt::from(-1), BigInt::one()]
    } else {
        // x^F − 1
        let mut poly = vec![BigInt::zero(); (f + 1) as usize];
        poly[0] = BigInt::from(-1);
        poly[f as usize] = BigInt::one();
        for d in 1..f {
            if f % d == 0 {
                poly = poly_div_exact(&poly, &cyclotomic_polynomial(d));
            }
        }
        poly
    };
    cache.lock().unwrap().insert(f, result.clone());
    result
}

/// Exact division of integer polynomials (monic divisor, zero remainder).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    assert!(den[dn].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let qn = num.len() - 1 - dn;
    let mut quot = vec![BigInt::zero(); qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        quot[i] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact division");
    quot
}

/// An element of ℚ(ζ_F) in canonical reduced form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicNumber {
    order: u64,
    /// Coefficients on `1, ζ, …, ζ^{φ(F)−1}`.
    coeffs: Vec<Rat>,
}

impl CyclotomicNumber {
    pub fn zero(order: u64) -> Self {
        CyclotomicNumber {
            order,
            coeffs: vec![Rat::zero(); euler_phi(order) as usize],
        }
    }

    pub fn from_rational(order: u64, r: Rat) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = r;
        z
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rat::one())
    }

    /// `ζ_order^power`.
    pub fn root_of_unity(order: u64, power: i64) -> Self {
        let p = power.rem_euclid(order as i64) as usize;
        let mut raw = vec![Rat::zero(); order as usize];
        raw[p] = Rat::one();
        Self::from_raw(order, raw)
    }

    /// Builds an element from coefficients on `1, ζ, …, ζ^{F−1}` (any
    /// length ≤ F accepted) and reduces mod `Φ_F`.
    pub fn from_raw(order: u64, raw: Vec<Rat>) -> Self {
        let phi = euler_phi(order) as usize;
        let cyc = cyclotomic_polynomial(order);
        let mut rem = raw;
        if rem.len() < phi {
            rem.resize(phi, Rat::zero());
        }
        // Long division by the monic Φ_F.
        for i in (phi..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            rem[i] = Rat::zero();
            for (j, cj) in cyc.iter().take(phi).enumerate() {
                let delta = &c * Rat::from(cj.clone());
                rem[i - phi + j] -= delta;
            }
        }
        rem.truncate(phi);
        CyclotomicNumber {
            order,
            coeffs: rem,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `Some(r)` iff the element is rational.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element in ℚ(ζ_L) for `order | L`.
    pub fn promote(&self, l: u64) -> Self {
        assert!(l % self.order == 0, "promotion requires order | L");
        if l == self.order {
            return self.clone();
        }
        let k = (l / self.order) as usize;
        let mut raw = vec![Rat::zero(); l as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            raw[j * k] = c.clone();
        }
        Self::from_raw(l, raw)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let l = self.order.lcm(&other.order);
        (self.promote(l), other.promote(l))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.common(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let mut raw = vec![Rat::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                raw[i + j] += x * y;
            }
        }
        Self::from_raw(a.order, raw)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Complex conjugation `ζ ↦ ζ⁻¹` (the Galois element σ₋₁).
    pub fn conjugate(&self) -> Self {
        let f = self.order;
        let mut raw = vec![Rat::zero(); f as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            let idx = ((f as i64 - j as i64) % f as i64).rem_euclid(f as i64) as usize;
            raw[idx] += c;
        }
        Self::from_raw(f, raw)
    }

    pub fn to_complex(&self) -> Complex64 {
        let f = self.order as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            let num = c.numer().to_f64().unwrap_or(f64::NAN);
            let den = c.denom().to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * (j as f64) / f;
            acc += Complex64::from_polar(num / den, angle);
        }
        acc
    }
}

/// Serialized form: `{order, coefficients: ["p/q", ...]}`.
#[derive(Serialize, Deserialize)]
pub struct CyclotomicJson {
    pub order: u64,
    pub coefficients: Vec<String>,
}

impl From<&CyclotomicNumber> for CyclotomicJson {
    fn from(z: &CyclotomicNumber) -> Self {
        CyclotomicJson {
            order: z.order,
            coefficients: z
                .coeffs
                .iter()
                .map(crate::exactmath::rat_to_str)
                .collect(),
        }
    }
}
