//! Positive-definite quadratic forms: reduction, automorphism groups,
//! representation (lattice-solution) enumeration.

use crate::error::{Error, Result};
use crate::exactmath::{rint, Rat, RationalMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A symmetric matrix together with a definiteness certificate.
///
/// `definite == true` means all leading principal minors are positive
/// (membership in `S⁺`); the semidefinite constructor checks all principal
/// minors are nonnegative instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPosDef {
    mat: RationalMatrix,
    definite: bool,
}

impl SymPosDef {
    /// Positive-definite constructor.
    pub fn new(mat: RationalMatrix) -> Result<Self> {
        if !mat.is_symmetric() {
            return Err(Error::domain("matrix is not symmetric"));
        }
        for k in 1..=mat.rows() {
            if !mat.leading_minor(k).is_positive() {
                return Err(Error::domain("matrix is not positive definite"));
            }
        }
        Ok(SymPosDef {
            mat,
            definite: true,
        })
    }

    /// Positive-semidefinite constructor (checks every principal minor ≥ 0).
    pub fn new_semidefinite(mat: RationalMatrix) -> Result<Self> {
        if !mat.is_symmetric() {
            return Err(Error::domain("matrix is not symmetric"));
        }
        let n = mat.rows();
        if n > 12 {
            return Err(Error::guard("semidefiniteness check capped at n = 12"));
        }
        for mask in 1u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let sub = RationalMatrix::from_fn(idx.len(), idx.len(), |r, c| {
                mat.get(idx[r], idx[c]).clone()
            });
            if sub.det().is_negative() {
                return Err(Error::domain("matrix is not positive semidefinite"));
            }
        }
        let definite = (1..=n).all(|k| mat.leading_minor(k).is_positive());
        Ok(SymPosDef { mat, definite })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(RationalMatrix::from_i64_rows(rows)?)
    }

    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.mat
    }

    pub fn is_definite(&self) -> bool {
        self.definite
    }

    pub fn det(&self) -> Rat {
        self.mat.det()
    }

    pub fn is_integral(&self) -> bool {
        self.mat.is_integral()
    }

    /// Evaluates the form: `ᵀx · M · x` for an integer column vector.
    pub fn eval(&self, x: &[BigInt]) -> Rat {
        let n = self.n();
        let mut acc = Rat::zero();
        for r in 0..n {
            for c in 0..n {
                acc += self.mat.get(r, c) * Rat::from(&x[r] * &x[c]);
            }
        }
        acc
    }
}

/// Largest integer `b ≥ 0` with `b² ≤ x` (0 for negative `x`).
///
/// For `x = n/d` this is the largest `b` with `b²·d ≤ n`.
fn isqrt_rat_floor(x: &Rat) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    let n = x.numer();
    let d = x.denom();
    let fits = |b: &BigInt| b * b * d <= *n;
    let mut hi = BigInt::one();
    while fits(&hi) {
        hi *= 2;
    }
    let mut lo = BigInt::zero();
    // invariant: fits(lo), !fits(hi)
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if fits(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Gauss reduction of a positive definite binary (or unary) integral form.
///
/// Returns `(reduced, U)` with `ᵀU·R·U = reduced`; for `n = 2` the reduced
/// form `(a,b,c)` satisfies `0 ≤ 2b ≤ a ≤ c`.
pub fn minkowski_reduce(r: &SymPosDef) -> Result<(SymPosDef, RationalMatrix)> {
    if !r.is_definite() {
        return Err(Error::domain("reduction requires a definite form"));
    }
    if !r.is_integral() {
        return Err(Error::domain("reduction requires an integral form"));
    }
    match r.n() {
        1 => Ok((r.clone(), RationalMatrix::identity(1))),
        2 => {
            let mut m = r.matrix().clone();
            let mut u = RationalMatrix::identity(2);
            let apply = |m: &RationalMatrix, u: &RationalMatrix, t: &RationalMatrix| {
                (t.transpose().mul(m).mul(t), u.mul(t))
            };
            loop {
                // Shift: |b| ≤ a/2 via the shear x₂ ↦ x₂ − t·x₁.
                let a = m.get(0, 0).clone();
                let b = m.get(0, 1).clone();
                let t = (&b / &a).round();
                if !t.is_zero() {
                    let shear = RationalMatrix::from_rows(vec![
                        vec![Rat::one(), -t],
                        vec![Rat::zero(), Rat::one()],
                    ])?;
                    let (nm, nu) = apply(&m, &u, &shear);
                    m = nm;
                    u = nu;
                }
                if m.get(0, 0) > m.get(1, 1) {
                    let swap =
                        RationalMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]])?;
                    let (nm, nu) = apply(&m, &u, &swap);
                    m = nm;
                    u = nu;
                    continue;
                }
                if m.get(0, 1).is_negative() {
                    let flip =
                        RationalMatrix::from_i64_rows(&[vec![1, 0], vec![0, -1]])?;
                    let (nm, nu) = apply(&m, &u, &flip);
                    m = nm;
                    u = nu;
                }
                let two_b = m.get(0, 1) * rint(2);
                if !m.get(0, 1).is_negative() && &two_b <= m.get(0, 0) && m.get(0, 0) <= m.get(1, 1)
                {
                    break;
                }
            }
            Ok((SymPosDef::new(m)?, u))
        }
        n => Err(Error::UnsupportedDegree(n)),
    }
}

/// Column-wise backtracking enumeration of integral `ξ` with `ᵀξ·τ·ξ = R`.
///
/// Column `i` satisfies `ᵀξ_i·τ·ξ_i = R_ii`, which bounds each coordinate:
/// for positive definite `τ` and `ᵀx·τ·x = v` one has `x_j² ≤ v·(τ⁻¹)_jj`
/// (Cauchy–Schwarz in the τ-inner product). The search box uses exactly
/// this bound; tests compare against a strictly larger naive box.
pub fn lattice_solutions(tau: &SymPosDef, r: &SymPosDef) -> Result<Vec<RationalMatrix>> {
    let n = tau.n();
    if n != r.n() {
        return Err(Error::domain("dimension mismatch"));
    }
    if n > 4 {
        return Err(Error::UnsupportedDegree(n));
    }
    if !tau.is_definite() {
        return Err(Error::domain("τ must be positive definite"));
    }
    if r.det().is_zero() {
        // ᵀξτξ = R with invertible ξ forces det R ≠ 0.
        return Ok(Vec::new());
    }
    let tau_inv = tau.matrix().inverse()?;

    // Candidate columns for each diagonal target value.
    let column_candidates = |value: &Rat| -> Vec<Vec<BigInt>> {
        let bounds: Vec<BigInt> = (0..n)
            .map(|j| isqrt_rat_floor(&(value * tau_inv.get(j, j))))
            .collect();
        let mut out = Vec::new();
        let mut x = vec![BigInt::zero(); n];
        fn rec(
            j: usize,
            n: usize,
            bounds: &[BigInt],
            x: &mut Vec<BigInt>,
            tau: &SymPosDef,
            value: &Rat,
            out: &mut Vec<Vec<BigInt>>,
        ) {
            if j == n {
                if &tau.eval(x) == value {
                    out.push(x.clone());
                }
                return;
            }
            let b = bounds[j].to_i64().unwrap_or(i64::MAX);
            for v in -b..=b {
                x[j] = BigInt::from(v);
                rec(j + 1, n, bounds, x, tau, value, out);
            }
            x[j] = BigInt::zero();
        }
        rec(0, n, &bounds, &mut x, tau, value, &mut out);
        out.sort();
        out
    };

    let per_column: Vec<Vec<Vec<BigInt>>> = (0..n)
        .map(|i| column_candidates(r.matrix().get(i, i)))
        .collect();

    let cross = |a: &[BigInt], b: &[BigInt]| -> Rat {
        let mut acc = Rat::zero();
        for r_ in 0..n {
            for c in 0..n {
                acc += tau.matrix().get(r_, c) * Rat::from(&a[r_] * &b[c]);
            }
        }
        acc
    };

    let mut out = Vec::new();
    let mut chosen: Vec<Vec<BigInt>> = Vec::new();
    fn assemble(
        i: usize,
        n: usize,
        per_column: &[Vec<Vec<BigInt>>],
        r: &SymPosDef,
        cross: &dyn Fn(&[BigInt], &[BigInt]) -> Rat,
        chosen: &mut Vec<Vec<BigInt>>,
        out: &mut Vec<RationalMatrix>,
    ) {
        if i == n {
            let m = RationalMatrix::from_fn(n, n, |row, col| Rat::from(chosen[col][row].clone()));
            if !m.det().is_zero() {
                out.push(m);
            }
            return;
        }
        'cand: for cand in &per_column[i] {
            for (j, prev) in chosen.iter().enumerate() {
                if &cross(prev, cand) != r.matrix().get(j, i) {
                    continue 'cand;
                }
            }
            chosen.push(cand.clone());
            assemble(i + 1, n, per_column, r, cross, chosen, out);
            chosen.pop();
        }
    }
    assemble(0, n, &per_column, r, &cross, &mut chosen, &mut out);
    out.sort_by_key(|m| {
        m.entries()
            .iter()
            .map(|x| x.numer().clone())
            .collect::<Vec<_>>()
    });
    Ok(out)
}

/// All unimodular `u` with `ᵀu·R·u = R`.
///
/// Every integral solution of `ᵀu·R·u = R` automatically has `det u = ±1`
/// (take determinants), so this is `lattice_solutions(R, R)`.
pub fn automorph_group(r: &SymPosDef) -> Result<Vec<RationalMatrix>> {
    if r.n() > 3 {
        return Err(Error::UnsupportedDegree(r.n()));
    }
    if !r.is_integral() {
        return Err(Error::domain("automorphism search requires integral R"));
    }
    lattice_solutions(r, r)
}

/// All reduced integral positive definite binary forms `(a,b,c)` with
/// `0 ≤ 2b ≤ a ≤ c` and `det = ac − b² ≤ det_bound`, sorted by
/// `(det, a, b, c)`.
pub fn reduced_binary_forms(det_bound: i64) -> Vec<SymPosDef> {
    let mut out = Vec::new();
    // 3a²/4 ≤ a·c − b²·(c/a ≥ 1 part) ... from 2b ≤ a ≤ c: det ≥ a²−a²/4.
    let mut a = 1i64;
    while 3 * a * a <= 4 * det_bound {
        for b in 0..=(a / 2) {
            let mut c = a;
            while a * c - b * b <= det_bound {
                if a * c - b * b >= 1 {
                    out.push(
                        SymPosDef::from_i64_rows(&[vec![a, b], vec![b, c]]).expect("pos def"),
                    );
                }
                c += 1;
            }
        }
        a += 1;
    }
    out.sort_by_key(|f| {
        (
            f.det().numer().to_i64().unwrap(),
            f.matrix().get(0, 0).numer().to_i64().unwrap(),
            f.matrix().get(0, 1).numer().to_i64().unwrap(),
        )
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_equivalent_to_identity() {
        let r = SymPosDef::from_i64_rows(&[vec![5, 2], vec![2, 1]]).unwrap();
        let (red, u) = minkowski_reduce(&r).unwrap();
        assert_eq!(red.matrix(), &RationalMatrix::identity(2));
        assert_eq!(&u.transpose().mul(r.matrix()).mul(&u), red.matrix());
        assert_eq!(u.det().abs(), rint(1));
    }

    #[test]
    fn reduce_fixed_points() {
        let r = SymPosDef::from_i64_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        let (red, u) = minkowski_reduce(&r).unwrap();
        assert_eq!(red, r);
        assert_eq!(u, RationalMatrix::identity(2));

        let r1 = SymPosDef::from_i64_rows(&[vec![7]]).unwrap();
        let (red1, _) = minkowski_reduce(&r1).unwrap();
        assert_eq!(red1, r1);
    }

    #[test]
    fn automorph_orders() {
        let r = SymPosDef::from_i64_rows(&[vec![1]]).unwrap();
        assert_eq!(automorph_group(&r).unwrap().len(), 2);
        let r = SymPosDef::from_i64_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(automorph_group(&r).unwrap().len(), 8);
        let r = SymPosDef::from_i64_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(automorph_group(&r).unwrap().len(), 12);
    }

    #[test]
    fn automorph_group_closure() {
        let r = SymPosDef::from_i64_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        let g = automorph_group(&r).unwrap();
        for u in &g {
            assert!(g.contains(&u.inverse().unwrap()));
            for v in &g {
                assert!(g.contains(&u.mul(v)));
            }
        }
    }

    #[test]
    fn lattice_solution_examples() {
        let one = SymPosDef::from_i64_rows(&[vec![1]]).unwrap();
        let four = SymPosDef::from_i64_rows(&[vec![4]]).unwrap();
        let sols = lattice_solutions(&one, &four).unwrap();
        assert_eq!(sols.len(), 2);

        let two = SymPosDef::from_i64_rows(&[vec![2]]).unwrap();
        let three = SymPosDef::from_i64_rows(&[vec![3]]).unwrap();
        assert!(lattice_solutions(&two, &three).unwrap().is_empty());

        let i2 = SymPosDef::from_i64_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(lattice_solutions(&i2, &i2).unwrap().len(), 8);
    }

    #[test]
    fn lattice_solutions_verify_exactly() {
        let tau = SymPosDef::from_i64_rows(&[vec![1, 0], vec![0, 2]]).unwrap();
        let r = SymPosDef::from_i64_rows(&[vec![3, 0], vec![0, 3]]).unwrap();
        for xi in lattice_solutions(&tau, &r).unwrap() {
            assert_eq!(&xi.transpose().mul(tau.matrix()).mul(&xi), r.matrix());
        }
    }

    #[test]
    fn reduced_binary_forms_det_3() {
        let forms = reduced_binary_forms(3);
        assert_eq!(forms.len(), 4);
    }

    #[test]
    fn semidefinite_accepts_singular() {
        let m = RationalMatrix::from_i64_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        let s = SymPosDef::new_semidefinite(m).unwrap();
        assert!(!s.is_definite());
        let m = RationalMatrix::from_i64_rows(&[vec![1, 2], vec![2, 1]]).unwrap();
        assert!(SymPosDef::new_semidefinite(m).is_err());
    }
}
