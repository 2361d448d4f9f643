//! Generalized quadratic Gauss sums
//! `G_n'(χ, X, R, F) = Σ_{T ∈ M_n(ℤ/F)} χ(det T)·e(tr(ᵀXT − τ[Q]·T·R·ᵀT)/F)`
//! with exact cyclotomic values, the η-transformed Schwartz function they
//! evaluate, and exhaustive machine certificates that the sum vanishes
//! for odd χ and singular X.

use crate::chars::{enumerate_characters, DirichletCharacter};
use crate::error::{Error, Result};
use crate::exactmath::{p_adic_membership, rat_to_str, CyclotomicNumber, Rat, RationalMatrix};
use crate::exactmath::SymPosDef;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

const ENUMERATION_GUARD: u128 = 100_000_000;

/// Inputs of `G_n'`. The quadratic coefficient is `τ[Q] = ᵀQτQ`.
#[derive(Clone, Debug)]
pub struct GaussSumParams {
    pub n: usize,
    pub chi: DirichletCharacter,
    pub x: Vec<Vec<i64>>,
    pub r: Vec<Vec<i64>>,
    pub f: u64,
    pub tau_q: RationalMatrix,
}

impl GaussSumParams {
    fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.f == 0 {
            return Err(Error::domain("modulus F must be positive"));
        }
        if self.chi.modulus() != self.f {
            return Err(Error::domain("character modulus must equal F"));
        }
        if self.x.len() != n
            || self.x.iter().any(|row| row.len() != n)
            || self.r.len() != n
            || self.r.iter().any(|row| row.len() != n)
        {
            return Err(Error::domain("X and R must be n×n"));
        }
        for i in 0..n {
            for j in 0..n {
                if self.r[i][j] != self.r[j][i] {
                    return Err(Error::domain("R must be symmetric"));
                }
            }
        }
        if !self.tau_q.is_square() || self.tau_q.rows() != n || !self.tau_q.is_symmetric() {
            return Err(Error::domain("τ[Q] must be a symmetric n×n matrix"));
        }
        let terms = (self.f as u128).pow((n * n) as u32);
        if terms > ENUMERATION_GUARD {
            return Err(Error::guard(format!(
                "F^(n²) = {terms} exceeds the enumeration guard {ENUMERATION_GUARD}"
            )));
        }
        // The exponent tr(ᵀXT − τ[Q]·T·R·ᵀT) must be an integer for
        // every integer T. Writing A = τ[Q], the coefficient of
        // T_{ik}² is A_{ii}R_{kk} and of a cross term 2·A_{ij}R_{kl},
        // so integrality reduces to those finitely many products.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let prod = self.tau_q.get(i, j) * Rat::from(BigInt::from(self.r[k][l]));
                        let need_half = i == j && k == l;
                        let scaled = if need_half { prod } else { prod * Rat::from(BigInt::from(2)) };
                        if !scaled.is_integer() {
                            return Err(Error::domain(
                                "exponent is not integral: τ[Q]·R products have denominators",
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Integer count grid `cnt[u·F + b]` of matrices T with `det T ≡ u` and
/// exponent `≡ b (mod F)`. Character-independent, so a sweep over many
/// χ shares one grid.
fn count_grid(n: usize, x: &[Vec<i64>], r: &[Vec<i64>], tau_q: &RationalMatrix, f: u64) -> Vec<u64> {
    // scale A = τ[Q] to integers: B = d·A with d the lcm of denominators
    let mut d = BigInt::one();
    for e in tau_q.entries() {
        d = d.lcm(e.denom());
    }
    let d64 = d.to_i64().expect("denominator lcm fits i64");
    let b_mat: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (tau_q.get(i, j) * Rat::from(d.clone()))
                        .to_integer()
                        .to_i64()
                        .expect("scaled τ[Q] entry fits i64")
                })
                .collect()
        })
        .collect();
    let fi = f as i64;
    let nn = n * n;
    let total: u128 = (f as u128).pow(nn as u32);

    let run_stratum = |first: i64| -> Vec<u64> {
        let mut grid = vec![0u64; (f * f) as usize];
        let mut t = vec![0i64; nn];
        t[0] = first;
        loop {
            // tm as n×n view of t (row-major)
            let tm = |i: usize, j: usize| t[i * n + j];
            // linear part Σ X∘T and quadratic part tr(B·T·R·ᵀT)
            let mut lin: i64 = 0;
            for i in 0..n {
                for j in 0..n {
                    lin += x[i][j] * tm(i, j);
                }
            }
            let mut quad: i64 = 0;
            for i in 0..n {
                for j in 0..n {
                    // (T·R·ᵀT)_{ij}
                    let mut s: i64 = 0;
                    for k in 0..n {
                        for l in 0..n {
                            s += tm(i, k) * r[k][l] * tm(j, l);
                        }
                    }
                    quad += b_mat[i][j] * s;
                }
            }
            let num = lin * d64 - quad;
            debug_assert_eq!(num % d64, 0);
            let b = (num / d64).rem_euclid(fi) as u64;
            let u = det_mod(n, &t, fi) as u64;
            grid[(u * f + b) as usize] += 1;
            // odometer over entries 1..nn (entry 0 fixed by the stratum)
            let mut pos = nn;
            loop {
                if pos == 1 {
                    return grid;
                }
                pos -= 1;
                t[pos] += 1;
                if t[pos] < fi {
                    break;
                }
                t[pos] = 0;
            }
        }
    };

    if n == 1 {
        let mut grid = vec![0u64; (f * f) as usize];
        for first in 0..fi {
            for (i, c) in run_stratum(first).iter().enumerate() {
                grid[i] += c;
            }
        }
        return grid;
    }

    if total >= 1_000_000 {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..fi)
                .map(|first| scope.spawn(move || run_stratum(first)))
                .collect();
            let mut grid = vec![0u64; (f * f) as usize];
            for h in handles {
                for (i, c) in h.join().expect("stratum thread").iter().enumerate() {
                    grid[i] += c;
                }
            }
            grid
        })
    } else {
        let mut grid = vec![0u64; (f * f) as usize];
        for first in 0..fi {
            for (i, c) in run_stratum(first).iter().enumerate() {
                grid[i] += c;
            }
        }
        grid
    }
}

fn det_mod(n: usize, t: &[i64], f: i64) -> i64 {
    let v = |i: usize, j: usize| t[i * n + j];
    let d = match n {
        1 => v(0, 0),
        2 => v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0),
        3 => {
            v(0, 0) * (v(1, 1) * v(2, 2) - v(1, 2) * v(2, 1))
                - v(0, 1) * (v(1, 0) * v(2, 2) - v(1, 2) * v(2, 0))
                + v(0, 2) * (v(1, 0) * v(2, 1) - v(1, 1) * v(2, 0))
        }
        _ => unreachable!("enumeration guard caps n at 3"),
    };
    d.rem_euclid(f)
}

fn assemble(chi: &DirichletCharacter, grid: &[u64], f: u64) -> CyclotomicNumber {
    let ord = chi.order();
    let l = ord.lcm(&f);
    let mut acc = CyclotomicNumber::zero(l);
    for u in 0..f {
        let t = match chi.value_exponent(u as i64) {
            Some(t) => t,
            None => continue,
        };
        for b in 0..f {
            let c = grid[(u * f + b) as usize];
            if c == 0 {
                continue;
            }
            let power = (l / ord) * t + (l / f) * b;
            let z = CyclotomicNumber::root_of_unity(l, power as i64)
                .scale(&Rat::from(BigInt::from(c)));
            acc = acc.add(&z);
        }
    }
    acc
}

/// Exact value of `G_n'(χ, X, R, F)`, an element of ℚ(ζ_L) with
/// `L = lcm(ord χ, F)`.
pub fn gauss_sum(params: &GaussSumParams) -> Result<CyclotomicNumber> {
    params.validate()?;
    let x: Vec<Vec<i64>> = params
        .x
        .iter()
        .map(|row| row.iter().map(|v| v.rem_euclid(params.f as i64)).collect())
        .collect();
    let grid = count_grid(params.n, &x, &params.r, &params.tau_q, params.f);
    Ok(assemble(&params.chi, &grid, params.f))
}

/// Global data behind the finite-place Schwartz functions: one rational
/// matrix Q read diagonally at every prime, a primitive character, and
/// the positive-definite τ.
#[derive(Clone, Debug)]
pub struct SchwartzSpec {
    pub q: RationalMatrix,
    pub chi: DirichletCharacter,
    pub tau: SymPosDef,
}

/// Value of the η-transformed Schwartz function at one prime. The
/// possibly irrational normalization |2QFτ|^{−n/2} is carried exactly as
/// `rational·√radicand`.
#[derive(Clone, Debug)]
pub struct SchwartzValue {
    pub support: bool,
    pub value: CyclotomicNumber,
    pub prefactor_rational: Rat,
    pub prefactor_radicand: Rat,
}

/// Evaluates the η-side Schwartz function at x for the prime p: support
/// iff `p^{F_p}·τ[Q] − 2·ᵀx·τ·Q ∈ p^{−F_p}·M_n(ℤ_p)` (threshold 0 when
/// p ∤ 𝔣), and then the value
/// `χ(det Q)·|2QFτ|^{−n/2}·G_n'(χ, 2F·ᵀQ·τ·x, F·b, F)`.
pub fn eta_sigma_schwartz(
    spec: &SchwartzSpec,
    b: &[Vec<i64>],
    x: &RationalMatrix,
    p: u64,
) -> Result<SchwartzValue> {
    let n = spec.tau.n();
    let f = spec.chi.modulus();
    if spec.chi.conductor() != f {
        return Err(Error::domain("character must be primitive (modulus = conductor)"));
    }
    if spec.q.rows() != n || !spec.q.is_square() {
        return Err(Error::domain("Q must be n×n"));
    }
    if spec.q.det().is_zero() {
        return Err(Error::domain("Q must be invertible"));
    }
    let fp = if f % p == 0 {
        let mut e = 0i64;
        let mut m = f;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        e
    } else {
        0
    };
    let tau = spec.tau.matrix();
    let tau_q = spec.q.transpose().mul(&tau.mul(&spec.q));
    let p_pow = Rat::from(BigInt::from(p).pow(fp as u32));
    let lhs = tau_q
        .scale(&p_pow)
        .sub(&x.transpose().mul(&tau.mul(&spec.q)).scale(&Rat::from(BigInt::from(2))));
    let support = p_adic_membership(&lhs, p, -fp);
    if !support {
        return Ok(SchwartzValue {
            support: false,
            value: CyclotomicNumber::zero(f.max(1)),
            prefactor_rational: Rat::zero(),
            prefactor_radicand: Rat::one(),
        });
    }
    // X = 2F·ᵀQ·τ·x, required integral for the exact sum
    let x_mat = spec
        .q
        .transpose()
        .mul(&tau.mul(x))
        .scale(&Rat::from(BigInt::from(2 * f)));
    if !x_mat.is_integral() {
        return Err(Error::domain("2F·ᵀQ·τ·x is not integral"));
    }
    let x_int: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| x_mat.get(i, j).to_integer().to_i64().expect("entry fits i64"))
                .collect()
        })
        .collect();
    let r_int: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| b[i][j] * f as i64).collect())
        .collect();
    let params = GaussSumParams {
        n,
        chi: spec.chi.clone(),
        x: x_int,
        r: r_int,
        f,
        tau_q,
    };
    let g = gauss_sum(&params)?;
    let chi_q = char_of_rational(&spec.chi, &spec.q.det())
        .ok_or_else(|| Error::domain("det Q is not a unit at the conductor"))?;
    let value = g.mul(&chi_q);
    // |2QFτ| = det(2F·Q·τ)
    let det = spec
        .q
        .mul(tau)
        .scale(&Rat::from(BigInt::from(2 * f)))
        .det();
    let (pref_rat, pref_rad) = if n % 2 == 0 {
        (pow_rat(&det, -((n / 2) as i64)), Rat::one())
    } else {
        // det^{−n/2} = det^{−(n+1)/2}·√det
        (pow_rat(&det, -((n as i64 + 1) / 2)), det.clone())
    };
    Ok(SchwartzValue {
        support: true,
        value,
        prefactor_rational: pref_rat,
        prefactor_radicand: pref_rad,
    })
}

fn pow_rat(x: &Rat, e: i64) -> Rat {
    let mut acc = Rat::one();
    let base = if e < 0 { x.recip() } else { x.clone() };
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// χ extended to rationals prime to the modulus: χ(a/b) = χ(a)·χ(b)⁻¹.
pub fn char_of_rational(chi: &DirichletCharacter, r: &Rat) -> Option<CyclotomicNumber> {
    let num = r.numer().to_i64()?;
    let den = r.denom().to_i64()?;
    let tn = chi.value_exponent(num)?;
    let td = chi.value_exponent(den)?;
    let ord = chi.order() as i64;
    Some(CyclotomicNumber::root_of_unity(
        chi.order(),
        (tn as i64 - td as i64).rem_euclid(ord),
    ))
}

/// One counterexample record inside a certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Counterexample {
    pub chi_exponents: Vec<u64>,
    pub x: Vec<Vec<i64>>,
    pub r: Vec<Vec<i64>>,
    pub value_order: u64,
    pub value_coefficients: Vec<String>,
}

/// Exhaustive-sweep vanishing report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateReport {
    pub n: usize,
    pub p: u64,
    pub swept: u64,
    pub zero: bool,
    pub counterexample: Option<Counterexample>,
    /// Empirical result for even nontrivial χ, which the vanishing
    /// claim does not cover; absent unless requested.
    pub outside_scope_even: Option<OutsideScope>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OutsideScope {
    pub swept: u64,
    pub zero: bool,
}

fn singular_matrices(n: usize, p: u64) -> Vec<Vec<Vec<i64>>> {
    let pi = p as i64;
    match n {
        1 => vec![vec![vec![0]]],
        2 => {
            let mut out = Vec::new();
            for a in 0..pi {
                for b in 0..pi {
                    for c in 0..pi {
                        for d in 0..pi {
                            if (a * d - b * c).rem_euclid(pi) == 0 {
                                out.push(vec![vec![a, b], vec![c, d]]);
                            }
                        }
                    }
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

fn symmetric_matrices(n: usize, p: u64) -> Vec<Vec<Vec<i64>>> {
    let pi = p as i64;
    match n {
        1 => (0..pi).map(|a| vec![vec![a]]).collect(),
        2 => {
            let mut out = Vec::new();
            for a in 0..pi {
                for b in 0..pi {
                    for c in 0..pi {
                        out.push(vec![vec![a, b], vec![b, c]]);
                    }
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

/// Sweeps every singular X mod p, every symmetric R mod p and every odd
/// character mod p, certifying that the Gauss sum is exactly zero (or
/// exhibiting the first counterexample). With `include_even`, also
/// records the empirical outcome for even nontrivial χ.
pub fn vanishing_certificate(
    n: usize,
    p: u64,
    tau: &SymPosDef,
    q: &RationalMatrix,
    include_even: bool,
) -> Result<CertificateReport> {
    if n > 2 {
        return Err(Error::UnsupportedDegree(n));
    }
    if p < 3 || !is_prime(p) {
        return Err(Error::domain("p must be an odd prime"));
    }
    if tau.n() != n || q.rows() != n {
        return Err(Error::domain("τ and Q must be n×n"));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !tau.matrix().get(i, j).is_zero() {
                return Err(Error::domain("τ must be diagonal"));
            }
            if !q.get(j, i).is_zero() {
                return Err(Error::domain("Q must be upper triangular"));
            }
        }
    }
    let tau_q = q.transpose().mul(&tau.matrix().mul(q));
    let chars = enumerate_characters(p);
    let odd: Vec<_> = chars.iter().filter(|c| c.is_odd()).collect();
    let even_nontrivial: Vec<_> = chars
        .iter()
        .filter(|c| !c.is_odd() && !c.is_trivial())
        .collect();

    let xs = singular_matrices(n, p);
    let rs = symmetric_matrices(n, p);

    let mut swept: u64 = 0;
    let mut counterexample = None;
    'sweep: for x in &xs {
        for r in &rs {
            let grid = count_grid(n, x, r, &tau_q, p);
            for chi in &odd {
                swept += 1;
                let v = assemble(chi, &grid, p);
                if !v.is_zero() {
                    counterexample = Some(Counterexample {
                        chi_exponents: chi.generator_exponents().to_vec(),
                        x: x.clone(),
                        r: r.clone(),
                        value_order: v.order(),
                        value_coefficients: v.coeffs().iter().map(rat_to_str).collect(),
                    });
                    break 'sweep;
                }
            }
        }
    }

    let outside_scope_even = if include_even && counterexample.is_none() {
        let mut eswept = 0u64;
        let mut ezero = true;
        'even: for x in &xs {
            for r in &rs {
                let grid = count_grid(n, x, r, &tau_q, p);
                for chi in &even_nontrivial {
                    eswept += 1;
                    if !assemble(chi, &grid, p).is_zero() {
                        ezero = false;
                        break 'even;
                    }
                }
            }
        }
        Some(OutsideScope {
            swept: eswept,
            zero: ezero,
        })
    } else {
        None
    };

    Ok(CertificateReport {
        n,
        p,
        swept,
        zero: counterexample.is_none(),
        counterexample,
        outside_scope_even,
    })
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, rint};

    fn int_matrix(rows: &[Vec<i64>]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(rows).unwrap()
    }

    fn odd_char(p: u64) -> DirichletCharacter {
        enumerate_characters(p)
            .into_iter()
            .find(|c| c.is_odd())
            .unwrap()
    }

    #[test]
    fn trivial_character_counts_units() {
        let params = GaussSumParams {
            n: 1,
            chi: DirichletCharacter::trivial(5),
            x: vec![vec![0]],
            r: vec![vec![0]],
            f: 5,
            tau_q: int_matrix(&[vec![1]]),
        };
        let v = gauss_sum(&params).unwrap();
        assert_eq!(v.as_rational(), Some(rint(4)));
    }

    #[test]
    fn odd_character_base_case_vanishes() {
        for r in 0..3 {
            let params = GaussSumParams {
                n: 1,
                chi: odd_char(3),
                x: vec![vec![0]],
                r: vec![vec![r]],
                f: 3,
                tau_q: int_matrix(&[vec![1]]),
            };
            assert!(gauss_sum(&params).unwrap().is_zero(), "R = {r}");
        }
    }

    #[test]
    fn quadratic_gauss_sum_oracle() {
        // Σ_t e(t²/5) = √5: check G against the direct cyclotomic sum
        // computed term by term with no grid bookkeeping.
        let f = 5u64;
        let chi = DirichletCharacter::trivial(f);
        let tau_q = int_matrix(&[vec![-1]]);
        let params = GaussSumParams {
            n: 1,
            chi: chi.clone(),
            x: vec![vec![2]],
            r: vec![vec![1]],
            f,
            tau_q,
        };
        let v = gauss_sum(&params).unwrap();
        let mut direct = CyclotomicNumber::zero(f);
        for t in 1..f as i64 {
            direct = direct.add(&CyclotomicNumber::root_of_unity(f, 2 * t + t * t));
        }
        assert_eq!(v, direct);
    }

    #[test]
    fn singular_x_paper_example() {
        let tau = SymPosDef::new(RationalMatrix::diagonal(&[rint(1), rint(2)])).unwrap();
        let q = int_matrix(&[vec![1, 1], vec![0, 1]]);
        let tau_q = q.transpose().mul(&tau.matrix().mul(&q));
        let params = GaussSumParams {
            n: 2,
            chi: odd_char(3),
            x: vec![vec![1, 0], vec![0, 0]],
            r: vec![vec![1, 0], vec![0, 1]],
            f: 3,
            tau_q,
        };
        assert!(gauss_sum(&params).unwrap().is_zero());
    }

    #[test]
    fn conjugation_symmetry() {
        // Conjugating every root of unity negates the whole exponent, so
        // G(χ̄, −X, −R, F) = conj(G(χ, X, R, F)): full sweep, F ≤ 5, n = 1.
        for f in [3u64, 4, 5] {
            let tau_q = int_matrix(&[vec![1]]);
            for chi in enumerate_characters(f) {
                for x in 0..f as i64 {
                    for r in 0..f as i64 {
                        let g = gauss_sum(&GaussSumParams {
                            n: 1,
                            chi: chi.clone(),
                            x: vec![vec![x]],
                            r: vec![vec![r]],
                            f,
                            tau_q: tau_q.clone(),
                        })
                        .unwrap();
                        let gc = gauss_sum(&GaussSumParams {
                            n: 1,
                            chi: chi.conjugate(),
                            x: vec![vec![-x]],
                            r: vec![vec![-r]],
                            f,
                            tau_q: tau_q.clone(),
                        })
                        .unwrap();
                        assert_eq!(gc, g.conjugate(), "F={f}, x={x}, r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn conjugation_symmetry_n2() {
        let f = 3u64;
        let tau_q = int_matrix(&[vec![1, 0], vec![0, 2]]);
        let x = vec![vec![1, 2], vec![0, 1]];
        let mx = vec![vec![-1, -2], vec![0, -1]];
        let r = vec![vec![2, 1], vec![1, 0]];
        let mr = vec![vec![-2, -1], vec![-1, 0]];
        for chi in enumerate_characters(f) {
            let g = gauss_sum(&GaussSumParams {
                n: 2,
                chi: chi.clone(),
                x: x.clone(),
                r: r.clone(),
                f,
                tau_q: tau_q.clone(),
            })
            .unwrap();
            let gc = gauss_sum(&GaussSumParams {
                n: 2,
                chi: chi.conjugate(),
                x: mx.clone(),
                r: mr.clone(),
                f,
                tau_q: tau_q.clone(),
            })
            .unwrap();
            assert_eq!(gc, g.conjugate());
        }
    }

    #[test]
    fn unimodular_substitution_invariance() {
        // T ↦ uT gives G(χ, X, R, F; A) = χ(det u)·G(χ, ᵀu·X, R, F; ᵀu·A·u)
        let f = 5u64;
        let a = int_matrix(&[vec![1, 0], vec![0, 2]]);
        let x = vec![vec![1, 3], vec![0, 2]];
        let r = vec![vec![1, 2], vec![2, 4]];
        for (u_rows, det_u) in [
            (vec![vec![2i64, 1], vec![1, 1]], 1i64),
            (vec![vec![1, 2], vec![2, 2]], -2),
            (vec![vec![3, 1], vec![1, 1]], 2),
        ] {
            let u = int_matrix(&u_rows);
            let xu = u.transpose().mul(&int_matrix(&x));
            let x2: Vec<Vec<i64>> = (0..2)
                .map(|i| {
                    (0..2)
                        .map(|j| xu.get(i, j).to_integer().to_i64().unwrap())
                        .collect()
                })
                .collect();
            for chi in enumerate_characters(f) {
                let lhs = gauss_sum(&GaussSumParams {
                    n: 2,
                    chi: chi.clone(),
                    x: x.clone(),
                    r: r.clone(),
                    f,
                    tau_q: a.clone(),
                })
                .unwrap();
                let rhs = gauss_sum(&GaussSumParams {
                    n: 2,
                    chi: chi.clone(),
                    x: x2.clone(),
                    r: r.clone(),
                    f,
                    tau_q: u.transpose().mul(&a.mul(&u)),
                })
                .unwrap()
                .mul(&chi.value(det_u));
                assert_eq!(lhs, rhs, "det u = {det_u}");
            }
        }
    }

    #[test]
    fn guard_and_domain_errors() {
        let params = GaussSumParams {
            n: 3,
            chi: DirichletCharacter::trivial(13),
            x: vec![vec![0; 3]; 3],
            r: vec![vec![0; 3]; 3],
            f: 13,
            tau_q: RationalMatrix::identity(3),
        };
        assert!(matches!(gauss_sum(&params), Err(Error::Guard(_))));

        let bad = GaussSumParams {
            n: 1,
            chi: DirichletCharacter::trivial(3),
            x: vec![vec![0]],
            r: vec![vec![1]],
            f: 3,
            tau_q: RationalMatrix::diagonal(&[rat(1, 3)]),
        };
        assert!(matches!(gauss_sum(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn schwartz_support_examples() {
        let spec = SchwartzSpec {
            q: RationalMatrix::identity(1),
            chi: odd_char(3),
            tau: SymPosDef::new(RationalMatrix::identity(1)).unwrap(),
        };
        let b = vec![vec![0i64]];
        let v = eta_sigma_schwartz(&spec, &b, &RationalMatrix::identity(1), 3).unwrap();
        assert!(v.support);

        // p = 3 away from the conductor: 1 − 2/9 has valuation −2 < 0
        let spec_unram = SchwartzSpec {
            q: RationalMatrix::identity(1),
            chi: odd_char(5),
            tau: SymPosDef::new(RationalMatrix::identity(1)).unwrap(),
        };
        let x = RationalMatrix::diagonal(&[rat(1, 9)]);
        let v2 = eta_sigma_schwartz(&spec_unram, &b, &x, 3).unwrap();
        assert!(!v2.support);
    }

    #[test]
    fn schwartz_value_reduces_to_gauss_sum() {
        // x chosen so X = 2F·ᵀQτx ≡ 0 mod 3: the inner sum is the odd
        // base case and the value must vanish.
        let spec = SchwartzSpec {
            q: RationalMatrix::identity(1),
            chi: odd_char(3),
            tau: SymPosDef::new(RationalMatrix::identity(1)).unwrap(),
        };
        let b = vec![vec![1i64]];
        let x = RationalMatrix::diagonal(&[rat(3, 2)]);
        let v = eta_sigma_schwartz(&spec, &b, &x, 3).unwrap();
        assert!(v.support);
        assert!(v.value.is_zero());
        assert_eq!(v.prefactor_radicand, rint(6));
    }

    #[test]
    fn certificate_n1_small_primes() {
        let tau = SymPosDef::new(RationalMatrix::identity(1)).unwrap();
        let q = RationalMatrix::identity(1);
        for p in [3u64, 5, 7, 11] {
            let rep = vanishing_certificate(1, p, &tau, &q, false).unwrap();
            assert!(rep.zero, "p = {p}");
            assert_eq!(rep.swept, (p - 1) / 2 * p);
        }
    }

    #[test]
    fn certificate_n2_p3_scalar() {
        // Scalar quadratic coefficient: the sweep is exactly zero. A
        // zero row of X can always be arranged by a change of variables
        // that fixes a scalar matrix, which is what the row-flip pairing
        // argument needs.
        let tau = SymPosDef::new(RationalMatrix::identity(2)).unwrap();
        let q = RationalMatrix::identity(2);
        let rep = vanishing_certificate(2, 3, &tau, &q, true).unwrap();
        assert!(rep.zero);
        // 33 singular X, 27 symmetric R, 1 odd character mod 3
        assert_eq!(rep.swept, 33 * 27);
        let outside = rep.outside_scope_even.unwrap();
        assert_eq!(outside.swept, 0);
    }

    #[test]
    fn certificate_n2_p3_nonscalar_counterexample() {
        // For a non-scalar diagonal coefficient the full singular-X
        // sweep does NOT vanish: no change of variables fixing
        // diag(1,2) can zero out a row of X = [[0,1],[0,1]]. The value
        // below is −9√3·i, cross-checked against a direct term-by-term
        // complex summation.
        let tau = SymPosDef::new(RationalMatrix::diagonal(&[rint(1), rint(2)])).unwrap();
        let q = RationalMatrix::identity(2);
        let rep = vanishing_certificate(2, 3, &tau, &q, false).unwrap();
        assert!(!rep.zero);
        let ce = rep.counterexample.unwrap();

        let chi = DirichletCharacter::new(3, ce.chi_exponents.clone()).unwrap();
        let tau_q = q.transpose().mul(&tau.matrix().mul(&q));
        let value = gauss_sum(&GaussSumParams {
            n: 2,
            chi: chi.clone(),
            x: ce.x.clone(),
            r: ce.r.clone(),
            f: 3,
            tau_q,
        })
        .unwrap();
        assert!(!value.is_zero());
        let mut direct = num_complex::Complex64::new(0.0, 0.0);
        let fi = 3i64;
        for t in 0..81i64 {
            let e = [t % 3, t / 3 % 3, t / 9 % 3, t / 27 % 3];
            let tm = [[e[0], e[1]], [e[2], e[3]]];
            let det = tm[0][0] * tm[1][1] - tm[0][1] * tm[1][0];
            let mut lin = 0i64;
            let mut quad = 0i64;
            let a = [[1i64, 0], [0, 2]];
            for i in 0..2 {
                for j in 0..2 {
                    lin += ce.x[i][j] * tm[i][j];
                    for k in 0..2 {
                        for l in 0..2 {
                            quad += a[i][j] * tm[j][k] * ce.r[k][l] * tm[i][l];
                        }
                    }
                }
            }
            let angle = 2.0 * std::f64::consts::PI * ((lin - quad).rem_euclid(fi) as f64) / 3.0;
            direct += chi.value_complex(det) * num_complex::Complex64::from_polar(1.0, angle);
        }
        assert!((value.to_complex() - direct).norm() < 1e-9);
    }

    #[test]
    fn char_of_rational_multiplicative() {
        let chi = odd_char(5);
        let a = rat(3, 7);
        let b = rat(2, 9);
        let lhs = char_of_rational(&chi, &(a.clone() * b.clone())).unwrap();
        let rhs = char_of_rational(&chi, &a)
            .unwrap()
            .mul(&char_of_rational(&chi, &b).unwrap());
        assert_eq!(lhs, rhs);
        assert!(char_of_rational(&chi, &rat(5, 3)).is_none());
    }
}

