//! Double-coset representatives `Q(F_p) \ Sp_n(F_p) / P_{n-1}(F_p)`
//! built from the Bruhat candidates `{m(s), m(s)η}`, with CRT assembly
//! of local data for squarefree moduli.
//!
//! `P_{n-1}` is the Klingen parabolic, realized as the stabilizer of the
//! line spanned by the first standard basis vector: membership means the
//! first column is `(∗, 0, …, 0)ᵀ`. `Q` is the Levi piece
//! `{diag[a, ᵀa⁻¹] : a ∈ GL_n(F_p)}`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which Bruhat cell a candidate lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellKind {
    /// `m(s) = [[I, s], [0, I]]`
    M,
    /// `m(s)·η = [[s, −I], [I, 0]]`
    MEta,
}

/// A symplectic matrix mod p together with the Bruhat data it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticModP {
    pub p: u64,
    pub n: usize,
    pub kind: CellKind,
    /// entries of the symmetric parameter s, n×n mod p
    pub s: Vec<Vec<i64>>,
    /// 2n×2n matrix mod p
    pub entries: Vec<Vec<i64>>,
}

fn modp(x: i64, p: i64) -> i64 {
    x.rem_euclid(p)
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>], p: i64) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = 0i64;
            for l in 0..k {
                acc += a[i][l] * b[l][j];
            }
            out[i][j] = modp(acc, p);
        }
    }
    out
}

fn mat_transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
}

fn mat_identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn inv_mod(a: i64, p: i64) -> Option<i64> {
    let a = modp(a, p);
    if a == 0 {
        return None;
    }
    // extended Euclid
    let (mut r0, mut r1) = (p, a);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(modp(t0, p))
}

/// Inverse by Gauss–Jordan elimination mod p; `None` if singular.
fn mat_inverse(a: &[Vec<i64>], p: i64) -> Option<Vec<Vec<i64>>> {
    let n = a.len();
    let mut m: Vec<Vec<i64>> = a.iter().map(|r| r.iter().map(|&x| modp(x, p)).collect()).collect();
    let mut inv = mat_identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r][col] != 0)?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let pinv = inv_mod(m[col][col], p)?;
        for j in 0..n {
            m[col][j] = modp(m[col][j] * pinv, p);
            inv[col][j] = modp(inv[col][j] * pinv, p);
        }
        for r in 0..n {
            if r != col && m[r][col] != 0 {
                let factor = m[r][col];
                for j in 0..n {
                    m[r][j] = modp(m[r][j] - factor * m[col][j], p);
                    inv[r][j] = modp(inv[r][j] - factor * inv[col][j], p);
                }
            }
        }
    }
    Some(inv)
}

fn eta_matrix(n: usize) -> Vec<Vec<i64>> {
    let mut e = vec![vec![0i64; 2 * n]; 2 * n];
    for i in 0..n {
        e[i][n + i] = -1;
        e[n + i][i] = 1;
    }
    e
}

impl SymplecticModP {
    fn build(p: u64, n: usize, kind: CellKind, s: Vec<Vec<i64>>) -> Self {
        let pi = p as i64;
        let mut entries = vec![vec![0i64; 2 * n]; 2 * n];
        match kind {
            CellKind::M => {
                for i in 0..n {
                    entries[i][i] = 1;
                    entries[n + i][n + i] = 1;
                    for j in 0..n {
                        entries[i][n + j] = modp(s[i][j], pi);
                    }
                }
            }
            CellKind::MEta => {
                for i in 0..n {
                    entries[i][n + i] = modp(-1, pi);
                    entries[n + i][i] = 1;
                    for j in 0..n {
                        entries[i][j] = modp(s[i][j], pi);
                    }
                }
            }
        }
        SymplecticModP {
            p,
            n,
            kind,
            s,
            entries,
        }
    }

    /// `ᵀα·η·α ≡ η (mod p)`.
    pub fn is_symplectic(&self) -> bool {
        let pi = self.p as i64;
        let eta = eta_matrix(self.n);
        let lhs = mat_mul(
            &mat_mul(&mat_transpose(&self.entries), &eta, pi),
            &self.entries,
            pi,
        );
        let rhs: Vec<Vec<i64>> = eta.iter().map(|r| r.iter().map(|&x| modp(x, pi)).collect()).collect();
        lhs == rhs
    }
}

fn symmetric_mod_p(n: usize, p: u64) -> Vec<Vec<Vec<i64>>> {
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
        _ => unreachable!("guarded"),
    }
}

/// The `2·p^{n(n+1)/2}` Bruhat candidates `{m(s), m(s)η}`.
pub fn candidate_reps(n: usize, p: u64) -> Result<Vec<SymplecticModP>> {
    if n == 0 || n > 2 {
        return Err(Error::UnsupportedDegree(n));
    }
    if !is_prime(p) || p > 7 {
        return Err(Error::guard(format!("p = {p} outside the supported prime range")));
    }
    let mut out = Vec::new();
    for kind in [CellKind::M, CellKind::MEta] {
        for s in symmetric_mod_p(n, p) {
            out.push(SymplecticModP::build(p, n, kind, s));
        }
    }
    Ok(out)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Klingen-parabolic membership: γ stabilizes the line of the first
/// basis vector, i.e. its first column is supported on the first entry.
fn in_klingen(gamma: &[Vec<i64>], p: i64) -> bool {
    let m = gamma.len();
    if modp(gamma[0][0], p) == 0 && gamma.iter().all(|row| modp(row[0], p) == 0) {
        return false;
    }
    (1..m).all(|i| modp(gamma[i][0], p) == 0)
}

fn gl_n(n: usize, p: i64) -> Vec<Vec<Vec<i64>>> {
    match n {
        1 => (1..p).map(|a| vec![vec![a]]).collect(),
        2 => {
            let mut out = Vec::new();
            for a in 0..p {
                for b in 0..p {
                    for c in 0..p {
                        for d in 0..p {
                            if modp(a * d - b * c, p) != 0 {
                                out.push(vec![vec![a, b], vec![c, d]]);
                            }
                        }
                    }
                }
            }
            out
        }
        _ => unreachable!("guarded"),
    }
}

fn q_element(a: &[Vec<i64>], p: i64) -> Vec<Vec<i64>> {
    let n = a.len();
    let a_inv_t = mat_transpose(&mat_inverse(a, p).expect("a invertible"));
    let mut q = vec![vec![0i64; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            q[i][j] = modp(a[i][j], p);
            q[n + i][n + j] = a_inv_t[i][j];
        }
    }
    q
}

/// `c₂ ∈ Q·c₁·P` tested by looping over the Levi `Q`.
fn same_double_coset(c1: &SymplecticModP, c2: &SymplecticModP, gl: &[Vec<Vec<i64>>]) -> bool {
    let p = c1.p as i64;
    let c1_inv = mat_inverse(&c1.entries, p).expect("symplectic is invertible");
    for a in gl {
        let q = q_element(a, p);
        let q_inv = mat_inverse(&q, p).expect("Levi element invertible");
        let prod = mat_mul(&mat_mul(&c1_inv, &q_inv, p), &c2.entries, p);
        if in_klingen(&prod, p) {
            return true;
        }
    }
    false
}

/// One representative per double coset among the Bruhat candidates,
/// lexicographically least within each class by (kind, s-entries).
pub fn dedup_double_cosets(n: usize, p: u64) -> Result<Vec<SymplecticModP>> {
    let mut candidates = candidate_reps(n, p)?;
    candidates.sort_by(|a, b| (a.kind, &a.s).cmp(&(b.kind, &b.s)));
    let gl = gl_n(n, p as i64);
    let mut reps: Vec<SymplecticModP> = Vec::new();
    for cand in candidates {
        if !reps.iter().any(|r| same_double_coset(r, &cand, &gl)) {
            reps.push(cand);
        }
    }
    Ok(reps)
}

/// Local factor of a CRT-assembled representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalRep {
    pub p: u64,
    pub kind: CellKind,
    pub s: Vec<Vec<i64>>,
}

impl From<&SymplecticModP> for LocalRep {
    fn from(m: &SymplecticModP) -> Self {
        LocalRep {
            p: m.p,
            kind: m.kind,
            s: m.s.clone(),
        }
    }
}

/// A cusp representative mod squarefree m, one local datum per prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspRep {
    pub primes: Vec<u64>,
    pub locals: Vec<LocalRep>,
}

impl CuspRep {
    /// The per-prime cell pattern, e.g. `[M, MEta]` for m = 2p.
    pub fn kind_vector(&self) -> Vec<CellKind> {
        self.locals.iter().map(|l| l.kind).collect()
    }
}

/// Cartesian product of local representative lists over the primes of a
/// squarefree modulus.
pub fn crt_combine(locals: &[(u64, Vec<LocalRep>)]) -> Result<Vec<CuspRep>> {
    if locals.is_empty() {
        return Err(Error::domain("no local data"));
    }
    let primes: Vec<u64> = locals.iter().map(|(p, _)| *p).collect();
    for (i, p) in primes.iter().enumerate() {
        if !is_prime(*p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if primes[..i].contains(p) {
            return Err(Error::domain("modulus is not squarefree: repeated prime"));
        }
    }
    let mut combos: Vec<Vec<LocalRep>> = vec![Vec::new()];
    for (_, reps) in locals {
        let mut next = Vec::with_capacity(combos.len() * reps.len());
        for combo in &combos {
            for r in reps {
                let mut c = combo.clone();
                c.push(r.clone());
                next.push(c);
            }
        }
        combos = next;
    }
    Ok(combos
        .into_iter()
        .map(|locals| CuspRep {
            primes: primes.clone(),
            locals,
        })
        .collect())
}

/// Lifts a degree-1 representative mod p to an exact element of SL₂(ℤ)
/// congruent to it mod p. Refused for n ≥ 2.
pub fn lift_degree_one(rep: &SymplecticModP) -> Result<[[i64; 2]; 2]> {
    if rep.n != 1 {
        return Err(Error::UnsupportedDegree(rep.n));
    }
    let p = rep.p as i64;
    let (a, b) = (modp(rep.entries[0][0], p), modp(rep.entries[0][1], p));
    let (c, d) = (modp(rep.entries[1][0], p), modp(rep.entries[1][1], p));
    // bottom row: a coprime lift (c', d') ≡ (c, d) mod p
    let (mut c1, mut d1) = (c, d);
    if c1 == 0 && d1 == 0 {
        return Err(Error::domain("bottom row vanishes mod p"));
    }
    if c1 == 0 {
        c1 = p;
    }
    if d1 == 0 && gcd(c1, p) != 1 {
        d1 = p;
    }
    while gcd(c1, d1) != 1 {
        d1 += p;
    }
    // complete to determinant one: a0·d1 − b0·c1 = 1
    let (g, a0, neg_b0) = ext_gcd(d1, c1);
    debug_assert_eq!(g, 1);
    let (mut a1, mut b1) = (a0, -neg_b0);
    // adjust the top row by multiples of the bottom row to hit (a, b) mod p
    let t = if modp(c1, p) != 0 {
        modp((a - modp(a1, p)) * inv_mod(c1, p).expect("c1 unit"), p)
    } else {
        modp((b - modp(b1, p)) * inv_mod(d1, p).expect("d1 unit"), p)
    };
    a1 += t * c1;
    b1 += t * d1;
    let lift = [[a1, b1], [c1, d1]];
    if lift[0][0] * lift[1][1] - lift[0][1] * lift[1][0] != 1 {
        return Err(Error::domain("lift completion failed"));
    }
    if modp(a1, p) != a || modp(b1, p) != b {
        return Err(Error::domain("lift is not congruent to the representative"));
    }
    Ok(lift)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `(g, x, y)` with `a·x + b·y = g`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}
