//! Dominant weights for `GL_n` and `O_n` and the Kashiwara–Vergne weight
//! correspondence λ ↦ τ(λ), together with small concrete representation
//! matrices of `GL_2` for tests.

use crate::error::{Error, Result};
use crate::exactmath::{Rat, RationalMatrix};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Dominant (weakly decreasing) integer weight of `GL_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GLWeight {
    pub n: usize,
    pub entries: Vec<i64>,
}

impl GLWeight {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain("empty weight"));
        }
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain("weight entries must be weakly decreasing"));
        }
        if entries.iter().any(|&e| e < 0) {
            return Err(Error::domain(
                "only nonnegative (polynomial) weights are supported",
            ));
        }
        Ok(GLWeight {
            n: entries.len(),
            entries,
        })
    }

    pub fn sum(&self) -> i64 {
        self.entries.iter().sum()
    }
}

/// Tag distinguishing the two `O_n` families for even n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EvenTag {
    Plus,
    Minus,
}

/// Highest-weight data of an irreducible `O_n` representation.
///
/// Odd `n = 2l+1`: an l-tuple with a sign ε ∈ {±1}. Even `n = 2l`:
/// an l-tuple with a ± tag; the tag − requires some nonzero entry, and
/// when `m_l ≠ 0` the two tags label the same representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrthWeight {
    Odd {
        n: usize,
        m: Vec<i64>,
        epsilon: i64,
    },
    Even {
        n: usize,
        m: Vec<i64>,
        tag: EvenTag,
    },
}

impl OrthWeight {
    pub fn odd(n: usize, m: Vec<i64>, epsilon: i64) -> Result<Self> {
        if n % 2 != 1 {
            return Err(Error::domain("odd constructor requires odd n"));
        }
        if m.len() != n / 2 {
            return Err(Error::domain(format!(
                "expected {} entries for n = {n}",
                n / 2
            )));
        }
        if epsilon != 1 && epsilon != -1 {
            return Err(Error::domain("ε must be ±1"));
        }
        check_tuple(&m)?;
        Ok(OrthWeight::Odd { n, m, epsilon })
    }

    pub fn even(n: usize, m: Vec<i64>, tag: EvenTag) -> Result<Self> {
        if n % 2 != 0 || n == 0 {
            return Err(Error::domain("even constructor requires even n ≥ 2"));
        }
        if m.len() != n / 2 {
            return Err(Error::domain(format!(
                "expected {} entries for n = {n}",
                n / 2
            )));
        }
        check_tuple(&m)?;
        if tag == EvenTag::Minus && m.iter().all(|&x| x == 0) {
            return Err(Error::domain(
                "tag − requires a nonzero entry (the − family has no trivial member)",
            ));
        }
        Ok(OrthWeight::Even { n, m, tag })
    }

    pub fn n(&self) -> usize {
        match self {
            OrthWeight::Odd { n, .. } | OrthWeight::Even { n, .. } => *n,
        }
    }

    pub fn m(&self) -> &[i64] {
        match self {
            OrthWeight::Odd { m, .. } | OrthWeight::Even { m, .. } => m,
        }
    }
}

fn check_tuple(m: &[i64]) -> Result<()> {
    if m.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::domain("entries must be weakly decreasing"));
    }
    if m.iter().any(|&x| x < 0) {
        return Err(Error::domain("entries must be nonnegative"));
    }
    Ok(())
}

/// Index (1-based) of the last nonzero entry; 0 for the zero tuple.
fn last_nonzero(m: &[i64]) -> usize {
    m.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1)
}

/// The Kashiwara–Vergne weight map λ ↦ τ(λ).
///
/// Writing `l = ⌊n/2⌋` and `Σm = m_1 + … + m_l`:
/// * first branch (odd n with ε = (−1)^Σm; even n with tag +):
///   `τ(λ) = (m_1, …, m_l, 0, …, 0)`;
/// * second branch (odd n with ε = (−1)^{1+Σm}; even n with tag −),
///   where `r` is the last nonzero index of m:
///   `τ(λ) = (m_1, …, m_r, 1, …, 1, 0, …, 0)` of total length n with
///   exactly r trailing zeros (so n − 2r middle ones);
/// * the odd all-zero tuple with ε = −1 is the r = 0 case of the second
///   branch and yields `(1, …, 1)`.
pub fn kv_tau(lambda: &OrthWeight) -> Result<GLWeight> {
    let n = lambda.n();
    let m = lambda.m();
    let sum: i64 = m.iter().sum();
    let first_branch = match lambda {
        OrthWeight::Odd { epsilon, .. } => {
            let sign = if sum % 2 == 0 { 1 } else { -1 };
            *epsilon == sign
        }
        OrthWeight::Even { tag, .. } => *tag == EvenTag::Plus,
    };
    if first_branch {
        let mut entries = m.to_vec();
        entries.resize(n, 0);
        GLWeight::new(entries)
    } else {
        let r = last_nonzero(m);
        let mut entries: Vec<i64> = m[..r].to_vec();
        entries.extend(std::iter::repeat(1).take(n - 2 * r));
        entries.extend(std::iter::repeat(0).take(r));
        GLWeight::new(entries)
    }
}

/// Inverse lookup: the unique λ with `kv_tau(λ) = ρ`, if ρ is in the image.
///
/// When even-n `(m)_+` and `(m)_−` coincide (all of `m` nonzero) the `+`
/// tag is returned.
pub fn tau_sigma_membership(rho: &GLWeight) -> Option<OrthWeight> {
    let n = rho.n;
    let l = n / 2;

    let decode_first = || -> Option<OrthWeight> {
        if rho.entries[l..].iter().any(|&x| x != 0) {
            return None;
        }
        let m = rho.entries[..l].to_vec();
        let sum: i64 = m.iter().sum();
        if n % 2 == 1 {
            let eps = if sum % 2 == 0 { 1 } else { -1 };
            OrthWeight::odd(n, m, eps).ok()
        } else {
            OrthWeight::even(n, m, EvenTag::Plus).ok()
        }
    };
    let decode_second = || -> Option<OrthWeight> {
        // r = number of trailing zeros; entries r+1..n−r must all be 1.
        let r = n - last_nonzero(&rho.entries);
        if 2 * r > n || r > l {
            return None;
        }
        if rho.entries[r..n - r].iter().any(|&x| x != 1) {
            return None;
        }
        let mut m = rho.entries[..r].to_vec();
        if m.iter().any(|&x| x < 1) {
            return None;
        }
        m.resize(l, 0);
        let sum: i64 = m.iter().sum();
        if n % 2 == 1 {
            let eps = if sum % 2 == 0 { -1 } else { 1 };
            OrthWeight::odd(n, m, eps).ok()
        } else {
            OrthWeight::even(n, m, EvenTag::Minus).ok()
        }
    };

    let candidate = decode_first().or_else(decode_second)?;
    // Guard against boundary overlaps by verifying the round trip.
    kv_tau(&candidate)
        .map_or(false, |t| &t == rho)
        .then_some(candidate)
}

/// The representation `det^k ⊗ Sym^j` of `GL_2`, realized on the monomial
/// basis `u₁^j, u₁^{j−1}u₂, …, u₂^j` of degree-j binary forms.
///
/// Matrix entries: `ρ(A)_{ts}` is the coefficient of `m_s(u)` in
/// `m_t(A·u)`, so `ρ(AB) = ρ(A)ρ(B)` exactly.
#[derive(Clone, Debug)]
pub struct SymRep {
    pub j: u32,
    pub k: i64,
}

impl SymRep {
    pub fn new(j: u32, k: i64) -> Self {
        SymRep { j, k }
    }

    pub fn dim(&self) -> usize {
        self.j as usize + 1
    }

    pub fn apply(&self, a: &RationalMatrix) -> Result<RationalMatrix> {
        if a.rows() != 2 || a.cols() != 2 {
            return Err(Error::domain("SymRep acts on 2×2 matrices"));
        }
        let det = a.det();
        if det.is_zero() {
            return Err(Error::domain("evaluation matrix is singular"));
        }
        let j = self.j as usize;
        let dim = j + 1;
        // m_t(u) = u₁^{j−t}u₂^t; expand m_t(Au) with
        // (Au)₁ = a₁₁u₁ + a₁₂u₂, (Au)₂ = a₂₁u₁ + a₂₂u₂.
        let binom = |n: usize, k: usize| -> Rat {
            let mut acc = Rat::one();
            for i in 0..k {
                acc = acc * crate::exactmath::rint((n - i) as i64)
                    / crate::exactmath::rint((i + 1) as i64);
            }
            acc
        };
        let mut mat = RationalMatrix::zeros(dim, dim);
        for t in 0..dim {
            // (a₁₁u₁+a₁₂u₂)^{j−t} (a₂₁u₁+a₂₂u₂)^t
            for p in 0..=(j - t) {
                for q in 0..=t {
                    // term: C(j−t,p)C(t,q) a₁₁^p a₁₂^{j−t−p} a₂₁^q a₂₂^{t−q}
                    //       · u₁^{p+q} u₂^{j−p−q}
                    let coeff = binom(j - t, p)
                        * binom(t, q)
                        * pow_rat(a.get(0, 0), p)
                        * pow_rat(a.get(0, 1), j - t - p)
                        * pow_rat(a.get(1, 0), q)
                        * pow_rat(a.get(1, 1), t - q);
                    let s = j - (p + q);
                    let cur = mat.get(t, s).clone();
                    mat.set(t, s, cur + coeff);
                }
            }
        }
        // det^k twist
        let twist = if self.k >= 0 {
            pow_rat(&det, self.k as usize)
        } else {
            pow_rat(&det, (-self.k) as usize)
                .recip()
        };
        Ok(mat.scale(&twist))
    }
}

fn pow_rat(x: &Rat, e: usize) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Representation matrices of `GL_2` on degree-j binary forms twisted by
/// `det^k`.
pub fn materialize_sym_rep(j: u32, k: i64) -> SymRep {
    SymRep::new(j, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, rint};

    fn glw(v: &[i64]) -> GLWeight {
        GLWeight::new(v.to_vec()).unwrap()
    }

    #[test]
    fn kv_golden_cases() {
        let cases: Vec<(OrthWeight, &[i64])> = vec![
            (OrthWeight::odd(3, vec![2], 1).unwrap(), &[2, 0, 0]),
            (OrthWeight::odd(3, vec![0], -1).unwrap(), &[1, 1, 1]),
            (OrthWeight::odd(3, vec![3], -1).unwrap(), &[3, 0, 0]),
            (OrthWeight::odd(3, vec![1], 1).unwrap(), &[1, 1, 0]),
            (OrthWeight::odd(5, vec![2, 1], -1).unwrap(), &[2, 1, 0, 0, 0]),
            (OrthWeight::odd(5, vec![2, 1], 1).unwrap(), &[2, 1, 1, 0, 0]),
            (OrthWeight::odd(5, vec![0, 0], -1).unwrap(), &[1, 1, 1, 1, 1]),
            (
                OrthWeight::even(4, vec![2, 0], EvenTag::Minus).unwrap(),
                &[2, 1, 1, 0],
            ),
            (
                OrthWeight::even(4, vec![2, 0], EvenTag::Plus).unwrap(),
                &[2, 0, 0, 0],
            ),
            (
                OrthWeight::even(4, vec![3, 2], EvenTag::Plus).unwrap(),
                &[3, 2, 0, 0],
            ),
            (
                OrthWeight::even(4, vec![3, 2], EvenTag::Minus).unwrap(),
                &[3, 2, 0, 0],
            ),
            (
                OrthWeight::even(2, vec![1], EvenTag::Minus).unwrap(),
                &[1, 0],
            ),
            (OrthWeight::odd(1, vec![], -1).unwrap(), &[1]),
        ];
        for (lam, expect) in cases {
            assert_eq!(kv_tau(&lam).unwrap(), glw(expect), "λ = {lam:?}");
        }
    }

    fn all_orth_weights(n: usize, max_entry: i64) -> Vec<OrthWeight> {
        let l = n / 2;
        let mut tuples: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..l {
            let mut next = Vec::new();
            for t in &tuples {
                let hi = t.last().copied().unwrap_or(max_entry);
                for v in 0..=hi {
                    let mut t2 = t.clone();
                    t2.push(v);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        let mut out = Vec::new();
        for t in tuples {
            if n % 2 == 1 {
                for eps in [1, -1] {
                    out.push(OrthWeight::odd(n, t.clone(), eps).unwrap());
                }
            } else {
                out.push(OrthWeight::even(n, t.clone(), EvenTag::Plus).unwrap());
                if let Ok(w) = OrthWeight::even(n, t.clone(), EvenTag::Minus) {
                    out.push(w);
                }
            }
        }
        out
    }

    #[test]
    fn kv_round_trip() {
        for n in 1..=5 {
            for lam in all_orth_weights(n, 3) {
                let rho = kv_tau(&lam).unwrap();
                let back = tau_sigma_membership(&rho)
                    .unwrap_or_else(|| panic!("ρ = {rho:?} not recognized (λ = {lam:?})"));
                // For even n with m_l ≠ 0 the ± weights coincide; the
                // canonical decode returns the + tag.
                let coincides = matches!(
                    (&lam, &back),
                    (
                        OrthWeight::Even { m: m1, .. },
                        OrthWeight::Even { m: m2, tag: EvenTag::Plus, .. }
                    ) if m1 == m2 && *m1.last().unwrap_or(&1) != 0
                );
                assert!(back == lam || coincides, "λ = {lam:?}, back = {back:?}");
                assert_eq!(kv_tau(&back).unwrap(), rho);
            }
        }
    }

    #[test]
    fn all_ones_pair_not_in_image() {
        assert!(tau_sigma_membership(&glw(&[1, 1])).is_none());
        assert!(tau_sigma_membership(&glw(&[0, 0, 0])).is_some());
    }

    #[test]
    fn sym_rep_examples() {
        let a = RationalMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        let r = materialize_sym_rep(0, 1).apply(&a).unwrap();
        assert_eq!(r.get(0, 0), &rint(6));

        let r = materialize_sym_rep(1, 0)
            .apply(&RationalMatrix::identity(2))
            .unwrap();
        assert_eq!(r, RationalMatrix::identity(2));

        let a = RationalMatrix::from_i64_rows(&[vec![5, 0], vec![0, 7]]).unwrap();
        let r = materialize_sym_rep(2, 0).apply(&a).unwrap();
        assert_eq!(r.get(0, 0), &rint(25));
        assert_eq!(r.get(1, 1), &rint(35));
        assert_eq!(r.get(2, 2), &rint(49));
        assert_eq!(r.get(0, 1), &rint(0));
    }

    #[test]
    fn sym_rep_multiplicative_and_invertible() {
        let rep = materialize_sym_rep(3, 1);
        let a = RationalMatrix::from_rows(vec![
            vec![rat(2, 3), rint(1)],
            vec![rint(-1), rat(1, 2)],
        ])
        .unwrap();
        let b = RationalMatrix::from_i64_rows(&[vec![1, 4], vec![2, 1]]).unwrap();
        assert_eq!(
            rep.apply(&a.mul(&b)).unwrap(),
            rep.apply(&a).unwrap().mul(&rep.apply(&b).unwrap())
        );
        let inv = rep.apply(&a.inverse().unwrap()).unwrap();
        assert_eq!(
            rep.apply(&a).unwrap().mul(&inv),
            RationalMatrix::identity(4)
        );
        assert!(rep
            .apply(&RationalMatrix::from_i64_rows(&[vec![1, 1], vec![1, 1]]).unwrap())
            .is_err());
    }
}
