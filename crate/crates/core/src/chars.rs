//! Dirichlet characters with exact root-of-unity values, the quadratic
//! character ε_τ attached to a positive definite form, and truncated
//! Dirichlet L-values.
//!
//! A character mod F is encoded by its exponents against fixed generators
//! of the unit group `(ℤ/F)^×`, decomposed through the CRT into cyclic
//! components (two components at 2^a for a ≥ 3). Values are exact
//! cyclotomic numbers; by convention χ(x) = 0 when gcd(x, F) > 1.

use crate::error::{Error, Result};
use crate::exactmath::{rint, CyclotomicNumber, SymPosDef};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// One cyclic component of `(ℤ/F)^×`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Component {
    /// Prime power p^a this component lives at.
    modulus: u64,
    /// Order of the cyclic component.
    order: u64,
    /// Generator of the component (a unit mod `modulus`).
    generator: u64,
}

fn multiplicative_order(x: u64, m: u64) -> u64 {
    let mut acc = x % m;
    let mut k = 1;
    while acc != 1 {
        acc = acc * x % m;
        k += 1;
    }
    k
}

/// Cyclic components of `(ℤ/F)^×` in a fixed deterministic order.
fn unit_group_components(f: u64) -> Vec<Component> {
    let mut comps = Vec::new();
    let mut m = f;
    let mut p = 2u64;
    let mut factors = Vec::new();
    while p * p <= m {
        if m % p == 0 {
            let mut a = 0u32;
            while m % p == 0 {
                m /= p;
                a += 1;
            }
            factors.push((p, a));
        }
        p += 1;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    factors.sort();
    for (p, a) in factors {
        let q = p.pow(a);
        if p == 2 {
            match a {
                1 => {}
                2 => comps.push(Component {
                    modulus: 4,
                    order: 2,
                    generator: 3,
                }),
                _ => {
                    comps.push(Component {
                        modulus: q,
                        order: 2,
                        generator: q - 1,
                    });
                    comps.push(Component {
                        modulus: q,
                        order: q / 4,
                        generator: 5,
                    });
                }
            }
        } else {
            let phi = q - q / p;
            let g = (2..q)
                .find(|&g| g % p != 0 && multiplicative_order(g, q) == phi)
                .expect("primitive root exists mod odd prime power");
            comps.push(Component {
                modulus: q,
                order: phi,
                generator: g,
            });
        }
    }
    comps
}

/// Discrete log of a unit against one component generator.
///
/// For odd prime powers (cyclic case) this is an ordinary discrete log.
/// For 2^a with a ≥ 3 the two components are ⟨−1⟩ and ⟨5⟩; the −1
/// component exponent is determined by `x ≡ ±5^k`.
fn component_logs(comps: &[Component], x: u64) -> Vec<u64> {
    let mut logs = Vec::with_capacity(comps.len());
    let mut i = 0;
    while i < comps.len() {
        let c = &comps[i];
        let q = c.modulus;
        let xq = x % q;
        if c.generator == q - 1 && i + 1 < comps.len() && comps[i + 1].modulus == q {
            // Paired ⟨−1⟩ × ⟨5⟩ decomposition at 2^a, a ≥ 3.
            let five = &comps[i + 1];
            let mut found = None;
            let mut acc = 1u64;
            for k in 0..five.order {
                if acc == xq {
                    found = Some((0u64, k));
                    break;
                }
                if q - acc == xq {
                    found = Some((1u64, k));
                    break;
                }
                acc = acc * 5 % q;
            }
            let (s, k) = found.expect("unit decomposes as ±5^k");
            logs.push(s);
            logs.push(k);
            i += 2;
        } else {
            let mut acc = 1u64;
            let mut k = 0;
            while acc != xq {
                acc = acc * c.generator % q;
                k += 1;
                assert!(k <= c.order, "not a unit");
            }
            logs.push(k % c.order);
            i += 1;
        }
    }
    logs
}

/// A Dirichlet character mod F, stored by generator exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    /// χ(g_i) = ζ_{d_i}^{e_i} for the i-th component of order d_i.
    exponents: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
pub struct CharacterJson {
    pub modulus: u64,
    pub generator_exponents: Vec<u64>,
}

impl DirichletCharacter {
    pub fn new(modulus: u64, exponents: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::domain("modulus must be positive"));
        }
        let comps = unit_group_components(modulus);
        if exponents.len() != comps.len() {
            return Err(Error::domain(format!(
                "expected {} generator exponents for modulus {}",
                comps.len(),
                modulus
            )));
        }
        let exponents = exponents
            .into_iter()
            .zip(&comps)
            .map(|(e, c)| e % c.order)
            .collect();
        Ok(DirichletCharacter { modulus, exponents })
    }

    pub fn trivial(modulus: u64) -> Self {
        let comps = unit_group_components(modulus);
        DirichletCharacter {
            modulus,
            exponents: vec![0; comps.len()],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generator_exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Order of the character as a root of unity in the dual group.
    pub fn order(&self) -> u64 {
        let comps = unit_group_components(self.modulus);
        let mut ord = 1u64;
        for (c, &e) in comps.iter().zip(&self.exponents) {
            let d = c.order / c.order.gcd(&e);
            ord = ord.lcm(&d);
        }
        ord
    }

    /// Exponent `t` with χ(x) = ζ_order^t, or `None` when gcd(x,F) > 1.
    pub fn value_exponent(&self, x: i64) -> Option<u64> {
        let f = self.modulus;
        let xm = x.rem_euclid(f as i64) as u64;
        if f == 1 {
            return Some(0);
        }
        if xm.gcd(&f) != 1 {
            return None;
        }
        let comps = unit_group_components(f);
        let logs = component_logs(&comps, xm);
        let d = self.order();
        // χ(x) = Π ζ_{d_i}^{e_i·l_i} = ζ_L^{Σ e_i·l_i·L/d_i} with L = lcm d_i;
        // the total exponent is divisible by L/d.
        let l: u64 = comps.iter().fold(1u64, |acc, c| acc.lcm(&c.order));
        let mut total: u64 = 0;
        for ((c, &e), &li) in comps.iter().zip(&self.exponents).zip(&logs) {
            total = (total + (e as u128 * li as u128 % c.order as u128) as u64 * (l / c.order)) % l;
        }
        debug_assert_eq!(total % (l / d), 0);
        Some(total / (l / d) % d)
    }

    /// Exact character value as a cyclotomic number of order `self.order()`
    /// (zero for non-units).
    pub fn value(&self, x: i64) -> CyclotomicNumber {
        let d = self.order();
        match self.value_exponent(x) {
            Some(t) => CyclotomicNumber::root_of_unity(d, t as i64),
            None => CyclotomicNumber::zero(d),
        }
    }

    pub fn value_complex(&self, x: i64) -> Complex64 {
        match self.value_exponent(x) {
            Some(t) => {
                let d = self.order() as f64;
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t as f64 / d)
            }
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// χ(−1) ∈ {+1, −1}.
    pub fn parity(&self) -> i64 {
        let v = self.value(-1);
        if v.as_rational() == Some(rint(1)) {
            1
        } else {
            -1
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == -1
    }

    /// Pointwise product of two characters of the same modulus.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::domain("character moduli differ"));
        }
        let comps = unit_group_components(self.modulus);
        let exps = comps
            .iter()
            .zip(self.exponents.iter().zip(&other.exponents))
            .map(|(c, (&a, &b))| (a + b) % c.order)
            .collect();
        DirichletCharacter::new(self.modulus, exps)
    }

    pub fn pow(&self, k: u64) -> Self {
        let comps = unit_group_components(self.modulus);
        let exps = comps
            .iter()
            .zip(&self.exponents)
            .map(|(c, &e)| (e as u128 * k as u128 % c.order as u128) as u64)
            .collect();
        DirichletCharacter {
            modulus: self.modulus,
            exponents: exps,
        }
    }

    pub fn conjugate(&self) -> Self {
        let comps = unit_group_components(self.modulus);
        let exps = comps
            .iter()
            .zip(&self.exponents)
            .map(|(c, &e)| (c.order - e) % c.order)
            .collect();
        DirichletCharacter {
            modulus: self.modulus,
            exponents: exps,
        }
    }

    /// Computed conductor: smallest `d | F` with χ trivial on units ≡ 1 mod d.
    pub fn conductor(&self) -> u64 {
        let f = self.modulus;
        'outer: for d in 1..=f {
            if f % d != 0 {
                continue;
            }
            let mut x = 1u64;
            loop {
                if x.gcd(&f) == 1 && self.value_exponent(x as i64) != Some(0) {
                    continue 'outer;
                }
                x += d;
                if x > f {
                    break;
                }
            }
            return d;
        }
        f
    }
}

impl From<&DirichletCharacter> for CharacterJson {
    fn from(c: &DirichletCharacter) -> Self {
        CharacterJson {
            modulus: c.modulus,
            generator_exponents: c.exponents.clone(),
        }
    }
}

/// All φ(F) Dirichlet characters mod F, in lexicographic exponent order.
pub fn enumerate_characters(f: u64) -> Vec<DirichletCharacter> {
    let comps = unit_group_components(f);
    let mut out = vec![DirichletCharacter {
        modulus: f,
        exponents: vec![0; comps.len()],
    }];
    for (i, c) in comps.iter().enumerate() {
        let mut next = Vec::new();
        for chi in &out {
            for e in 0..c.order {
                let mut exps = chi.exponents.clone();
                exps[i] = e;
                next.push(DirichletCharacter {
                    modulus: f,
                    exponents: exps,
                });
            }
        }
        out = next;
    }
    out
}

/// The quadratic character attached to a fundamental discriminant, with
/// values given by the Kronecker symbol (D/·).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadCharacter {
    pub discriminant: i64,
    pub conductor: u64,
}

/// Kronecker symbol (a/n), extended to all integers n.
pub fn kronecker_symbol(mut a: i64, mut n: i64) -> i64 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i64;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // factor out 2s from n
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a/2) = 1 if a ≡ ±1 mod 8, −1 if a ≡ ±3 mod 8
        let a8 = a.rem_euclid(8);
        let two_sym = if a8 == 1 || a8 == 7 { 1 } else { -1 };
        if twos % 2 == 1 {
            result *= two_sym;
        }
    }
    a = a.rem_euclid(n);
    // Jacobi symbol (a/n) for odd n > 0
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let n8 = n.rem_euclid(8);
            if n8 == 3 || n8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

impl QuadCharacter {
    pub fn trivial() -> Self {
        QuadCharacter {
            discriminant: 1,
            conductor: 1,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.discriminant == 1
    }

    pub fn value(&self, m: i64) -> i64 {
        kronecker_symbol(self.discriminant, m)
    }

    /// +1 for even (D > 0), −1 for odd (D < 0).
    pub fn parity(&self) -> i64 {
        if self.discriminant > 0 {
            1
        } else {
            -1
        }
    }
}

/// Squarefree part of a nonzero integer (with sign).
fn squarefree_part(x: &BigInt) -> BigInt {
    let mut m = x.abs();
    let mut out = BigInt::from(x.signum());
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut count = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            count += 1;
        }
        if count % 2 == 1 {
            out *= &p;
        }
        p += 1;
    }
    out * m
}

/// The quadratic character ε_τ of the extension generated by
/// `i^{[n/4]}·√|2τ|`: fundamental discriminant of the squarefree part of
/// `(−1)^{[n/4]}·det(2τ)`.
pub fn epsilon_tau(tau: &SymPosDef, n: usize) -> Result<QuadCharacter> {
    if tau.n() != n {
        return Err(Error::domain("degree mismatch"));
    }
    let det_2tau = tau.matrix().scale(&rint(2)).det();
    // Squarefree part of a rational q = a/b is the squarefree part of a·b.
    let sign = if (n / 4) % 2 == 1 { -1 } else { 1 };
    let prod = det_2tau.numer() * det_2tau.denom() * BigInt::from(sign);
    let d = squarefree_part(&prod)
        .to_i64()
        .ok_or_else(|| Error::domain("discriminant out of range"))?;
    if d == 1 {
        return Ok(QuadCharacter::trivial());
    }
    let fund = if d.rem_euclid(4) == 1 { d } else { 4 * d };
    Ok(QuadCharacter {
        discriminant: fund,
        conductor: fund.unsigned_abs(),
    })
}

/// Primes up to and including `n` (simple sieve).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2;
    while p * p <= n {
        if sieve[p] {
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    (2..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// Truncated Euler product for `L(s, χ)` over primes ≤ `p_max`, skipping
/// primes dividing the modulus (where χ = 0 anyway) and primes in `skip`.
///
/// The tail bound uses `|log Π_{p>P}(1−χ(p)p^{−s})^{−1}| ≤ Σ_{p>P} 2p^{−σ}
/// ≤ 2·P^{1−σ}/(σ−1)` (valid since `p^{−σ} ≤ 1/2`), giving
/// `tail ≤ |value|·(e^B − 1)`.
pub fn dirichlet_l(
    s: Complex64,
    chi: &DirichletCharacter,
    p_max: u64,
    skip: &[u64],
) -> Result<(Complex64, f64)> {
    if s.re <= 1.0 {
        return Err(Error::domain(format!(
            "Re(s) = {} outside the convergence region Re(s) > 1",
            s.re
        )));
    }
    let mut value = Complex64::new(1.0, 0.0);
    for p in primes_up_to(p_max) {
        if skip.contains(&p) {
            continue;
        }
        let cp = chi.value_complex(p as i64);
        if cp.norm_sqr() == 0.0 {
            continue;
        }
        let term = Complex64::new(1.0, 0.0) - cp * (-s * (p as f64).ln()).exp();
        value /= term;
    }
    let sigma = s.re;
    let b = 2.0 * (p_max as f64).powf(1.0 - sigma) / (sigma - 1.0);
    let tail = value.norm() * (b.exp() - 1.0);
    Ok((value, tail))
}

/// ψ-style weight `(χ_∞·χ*)(m)` for a nonzero integer: `sgn(m)^a·χ(|m|)`
/// with `a = 0/1` for even/odd χ; zero when gcd(m, F) > 1.
pub fn hecke_weight(chi: &DirichletCharacter, m: i64) -> CyclotomicNumber {
    if m == 0 {
        return CyclotomicNumber::zero(chi.order());
    }
    let v = chi.value(m.abs());
    if chi.is_odd() && m < 0 {
        v.neg()
    } else {
        v
    }
}

/// Same weight as a complex number.
pub fn hecke_weight_complex(chi: &DirichletCharacter, m: i64) -> Complex64 {
    hecke_weight(chi, m).to_complex()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_small_moduli() {
        assert_eq!(enumerate_characters(1).len(), 1);
        let c3 = enumerate_characters(3);
        assert_eq!(c3.len(), 2);
        let odd: Vec<_> = c3.iter().filter(|c| c.is_odd()).collect();
        assert_eq!(odd.len(), 1);
        assert_eq!(odd[0].value(2).as_rational(), Some(rint(-1)));

        let c5 = enumerate_characters(5);
        assert_eq!(c5.len(), 4);
        assert_eq!(c5.iter().filter(|c| c.is_odd()).count(), 2);

        let c8 = enumerate_characters(8);
        assert_eq!(c8.len(), 4);
        let c24 = enumerate_characters(24);
        assert_eq!(c24.len(), 8);
    }

    #[test]
    fn multiplicativity_sweep() {
        for f in 1..=50u64 {
            for chi in enumerate_characters(f) {
                for a in 0..f.max(1) as i64 {
                    for b in 0..f.max(1) as i64 {
                        let lhs = chi.value(a * b);
                        let rhs = chi.value(a).mul(&chi.value(b));
                        assert!(lhs.sub(&rhs).is_zero(), "F={f} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality_sweep() {
        for f in 2..=50u64 {
            for chi in enumerate_characters(f) {
                if chi.is_trivial() {
                    continue;
                }
                let mut acc = CyclotomicNumber::zero(chi.order());
                for a in 0..f as i64 {
                    acc = acc.add(&chi.value(a));
                }
                assert!(acc.is_zero(), "F={f}");
            }
        }
    }

    #[test]
    fn conductors() {
        // mod 9: the order-6 characters have conductor 9, order ≤ 2 part has 3.
        let c9 = enumerate_characters(9);
        let conductors: Vec<u64> = c9.iter().map(|c| c.conductor()).collect();
        assert!(conductors.contains(&1));
        assert!(conductors.contains(&3));
        assert!(conductors.contains(&9));
        // Characters mod 6 all come from mod 3.
        for c in enumerate_characters(6) {
            assert!(c.conductor() <= 3);
        }
    }

    #[test]
    fn epsilon_tau_examples() {
        let p = 3i64;
        let tau = SymPosDef::new(crate::exactmath::RationalMatrix::diagonal(&vec![
            rint(2 * p);
            8
        ]))
        .unwrap();
        let e = epsilon_tau(&tau, 8).unwrap();
        assert!(e.is_trivial());

        let tau1 = SymPosDef::from_i64_rows(&[vec![1]]).unwrap();
        let e1 = epsilon_tau(&tau1, 1).unwrap();
        assert_eq!(e1.discriminant, 8);
        assert_eq!(e1.parity(), 1);

        let tau4 = SymPosDef::new(crate::exactmath::RationalMatrix::identity(4)).unwrap();
        let e4 = epsilon_tau(&tau4, 4).unwrap();
        assert_eq!(e4.discriminant, -4);
        assert_eq!(e4.parity(), -1);
    }

    #[test]
    fn kronecker_basics() {
        // (8/m) is the character of ℚ(√2): period 8 pattern 1,*,−1,*,−1,*,1
        assert_eq!(kronecker_symbol(8, 1), 1);
        assert_eq!(kronecker_symbol(8, 3), -1);
        assert_eq!(kronecker_symbol(8, 5), -1);
        assert_eq!(kronecker_symbol(8, 7), 1);
        // (−4/m): 1 for m ≡ 1 mod 4, −1 for m ≡ 3 mod 4
        assert_eq!(kronecker_symbol(-4, 1), 1);
        assert_eq!(kronecker_symbol(-4, 3), -1);
        assert_eq!(kronecker_symbol(-4, 2), 0);
    }

    #[test]
    fn zeta_4_truncation() {
        let (v, tail) = dirichlet_l(
            Complex64::new(4.0, 0.0),
            &DirichletCharacter::trivial(1),
            100_000,
            &[],
        )
        .unwrap();
        let exact = std::f64::consts::PI.powi(4) / 90.0;
        assert!(tail < 1e-6);
        assert!((v.re - exact).abs() < 1e-6 + tail);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn l_series_oracle_mod_3() {
        // χ odd mod 3, s = 2: compare Euler product against the Dirichlet
        // series Σ χ(m) m^{−2} with its own alternating-tail bound.
        let chi = enumerate_characters(3)
            .into_iter()
            .find(|c| c.is_odd())
            .unwrap();
        let (v, tail) = dirichlet_l(Complex64::new(2.0, 0.0), &chi, 20_000, &[]).unwrap();
        let mut series = 0.0;
        let n_terms = 200_000i64;
        for m in 1..n_terms {
            series += chi.value_complex(m).re / (m as f64 * m as f64);
        }
        let series_tail = 2.0 / n_terms as f64;
        assert!((v.re - series).abs() < tail + series_tail);
    }

    #[test]
    fn l_rejects_critical_strip() {
        assert!(dirichlet_l(
            Complex64::new(1.0, 0.0),
            &DirichletCharacter::trivial(1),
            100,
            &[]
        )
        .is_err());
    }

    #[test]
    fn truncation_consistency() {
        let chi = enumerate_characters(5)
            .into_iter()
            .find(|c| c.order() == 4)
            .unwrap();
        let s = Complex64::new(2.5, 0.3);
        let (v1, t1) = dirichlet_l(s, &chi, 1_000, &[]).unwrap();
        let (v2, t2) = dirichlet_l(s, &chi, 50_000, &[]).unwrap();
        assert!((v1 - v2).norm() <= t1 + t2);
    }

    #[test]
    fn hecke_weight_signs() {
        let chi = enumerate_characters(3)
            .into_iter()
            .find(|c| c.is_odd())
            .unwrap();
        // χ odd: (χ_∞χ*)(−2) = −χ(2) = +1
        assert_eq!(hecke_weight(&chi, -2).as_rational(), Some(rint(1)));
        assert_eq!(hecke_weight(&chi, 2).as_rational(), Some(rint(-1)));
        assert!(hecke_weight(&chi, 3).is_zero());
    }
}
