//! Exact polynomials on the n×n matrix space, the pluriharmonic
//! Laplacians Δ_{i,j}, pluriharmonicity certification and highest-weight
//! generator construction.
//!
//! Coefficients live in ℚ(i). Variables are the matrix entries `x_{rc}`
//! (0-based row/column internally, 1-based in the public Δ indices).
//!
//! The operator implemented here is
//! `Δ_{i,j} = Σ_k ∂²/(∂x_{ki} ∂x_{kj})`,
//! pairing the i-th and j-th *columns* and summing over rows. With
//! variables read as (row, column) this is the index convention under
//! which the isotropic linear form `x_{11} + i·x_{21}` (and every
//! generator built from the left isotropic frame below) is annihilated,
//! and it is exactly the operator invariant under the left `O_n` action
//! `p(x) ↦ p(gx)` that the highest-weight theory uses.

use crate::error::{Error, Result};
use crate::exactmath::{GaussRat, Rat, RationalMatrix};
use crate::weights::GLWeight;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

type Monomial = Vec<u32>;

/// Sparse exact polynomial in the n² entries of an n×n matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPolynomial {
    n: usize,
    /// monomial (length n², row-major exponents) → nonzero coefficient
    terms: BTreeMap<Monomial, GaussRat>,
}

impl MatrixPolynomial {
    pub fn zero(n: usize) -> Self {
        MatrixPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: GaussRat) -> Self {
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(vec![0; n * n], c);
        }
        p
    }

    /// The variable `x_{rc}` (0-based).
    pub fn variable(n: usize, r: usize, c: usize) -> Self {
        let mut mono = vec![0u32; n * n];
        mono[r * n + c] = 1;
        let mut p = Self::zero(n);
        p.terms.insert(mono, GaussRat::one());
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRat)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    fn insert_term(&mut self, mono: Monomial, coeff: GaussRat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MatrixPolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &GaussRat) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        MatrixPolynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul(s)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mono: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.insert_term(mono, c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.n, GaussRat::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// ∂/∂x_{rc} (0-based).
    pub fn deriv(&self, r: usize, c: usize) -> Self {
        let idx = r * self.n + c;
        let mut out = Self::zero(self.n);
        for (m, coeff) in &self.terms {
            let e = m[idx];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[idx] -= 1;
            out.insert_term(
                m2,
                coeff.scale(&Rat::from(num_bigint::BigInt::from(e))),
            );
        }
        out
    }

    /// Substitute a single variable `x_{rc} ↦ q` (a polynomial).
    pub fn substitute_variable(&self, r: usize, c: usize, q: &Self) -> Self {
        let idx = r * self.n + c;
        let mut out = Self::zero(self.n);
        // group by exponent of the substituted variable
        let mut powers: Vec<Self> = vec![Self::constant(self.n, GaussRat::one())];
        let max_e = self.terms.keys().map(|m| m[idx]).max().unwrap_or(0);
        for _ in 0..max_e {
            powers.push(powers.last().unwrap().mul(q));
        }
        for (m, coeff) in &self.terms {
            let e = m[idx] as usize;
            let mut m2 = m.clone();
            m2[idx] = 0;
            let mut base = Self::zero(self.n);
            base.insert_term(m2, coeff.clone());
            out = out.add(&base.mul(&powers[e]));
        }
        out
    }

    /// Substitute `x ↦ x·M` for a Gaussian-rational matrix M.
    pub fn substitute_right(&self, m: &[Vec<GaussRat>]) -> Self {
        let n = self.n;
        assert_eq!(m.len(), n);
        // x_{rc} ↦ Σ_k x_{rk}·M_{kc}; build the linear forms once.
        let forms: Vec<Vec<Self>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let mut f = Self::zero(n);
                        for k in 0..n {
                            f = f.add(&Self::variable(n, r, k).scale(&m[k][c]));
                        }
                        f
                    })
                    .collect()
            })
            .collect();
        let mut out = Self::zero(n);
        for (mono, coeff) in &self.terms {
            let mut term = Self::constant(n, coeff.clone());
            for r in 0..n {
                for c in 0..n {
                    let e = mono[r * n + c];
                    for _ in 0..e {
                        term = term.mul(&forms[r][c]);
                    }
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Substitute `x ↦ A·x` for a Gaussian-rational matrix A.
    pub fn substitute_left(&self, a: &[Vec<GaussRat>]) -> Self {
        let n = self.n;
        // x_{rc} ↦ Σ_k A_{rk}·x_{kc}
        let forms: Vec<Vec<Self>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let mut f = Self::zero(n);
                        for k in 0..n {
                            f = f.add(&Self::variable(n, k, c).scale(&a[r][k]));
                        }
                        f
                    })
                    .collect()
            })
            .collect();
        let mut out = Self::zero(n);
        for (mono, coeff) in &self.terms {
            let mut term = Self::constant(n, coeff.clone());
            for r in 0..n {
                for c in 0..n {
                    let e = mono[r * n + c];
                    for _ in 0..e {
                        term = term.mul(&forms[r][c]);
                    }
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Exact evaluation at a Gaussian-rational matrix.
    pub fn eval_gauss(&self, x: &[Vec<GaussRat>]) -> GaussRat {
        let n = self.n;
        let mut acc = GaussRat::zero();
        for (mono, coeff) in &self.terms {
            let mut t = coeff.clone();
            for r in 0..n {
                for c in 0..n {
                    for _ in 0..mono[r * n + c] {
                        t = t.mul(&x[r][c]);
                    }
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn eval_rational(&self, x: &RationalMatrix) -> GaussRat {
        let n = self.n;
        let g: Vec<Vec<GaussRat>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| GaussRat::from_rat(x.get(r, c).clone()))
                    .collect()
            })
            .collect();
        self.eval_gauss(&g)
    }

    /// Floating evaluation at a complex matrix.
    pub fn eval_complex(&self, x: &[Vec<Complex64>]) -> Complex64 {
        let n = self.n;
        let mut acc = Complex64::new(0.0, 0.0);
        for (mono, coeff) in &self.terms {
            let mut t = coeff.to_complex();
            for r in 0..n {
                for c in 0..n {
                    let e = mono[r * n + c];
                    if e > 0 {
                        t *= x[r][c].powi(e as i32);
                    }
                }
            }
            acc += t;
        }
        acc
    }

    /// The symbolic determinant of the n×n variable matrix.
    pub fn det_poly(n: usize) -> Self {
        fn go(n: usize, rows: &[usize], cols: &[usize]) -> MatrixPolynomial {
            if rows.len() == 1 {
                return MatrixPolynomial::variable(n, rows[0], cols[0]);
            }
            let mut acc = MatrixPolynomial::zero(n);
            for (k, &c) in cols.iter().enumerate() {
                let sub_rows = &rows[1..];
                let sub_cols: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != k)
                    .map(|(_, &cc)| cc)
                    .collect();
                let minor = go(n, sub_rows, &sub_cols);
                let term = MatrixPolynomial::variable(n, rows[0], c).mul(&minor);
                if k % 2 == 0 {
                    acc = acc.add(&term);
                } else {
                    acc = acc.sub(&term);
                }
            }
            acc
        }
        let idx: Vec<usize> = (0..n).collect();
        go(n, &idx, &idx)
    }
}

/// A V-valued polynomial: a list of components with common n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorPolynomial {
    pub components: Vec<MatrixPolynomial>,
}

impl VectorPolynomial {
    pub fn new(components: Vec<MatrixPolynomial>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::domain("empty vector polynomial"));
        }
        let n = components[0].n();
        if components.iter().any(|c| c.n() != n) {
            return Err(Error::domain("components disagree on n"));
        }
        Ok(VectorPolynomial { components })
    }

    pub fn n(&self) -> usize {
        self.components[0].n()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }
}

/// `Δ_{i,j} p` with 1-based column indices `1 ≤ i ≤ j ≤ n`.
pub fn laplacian(p: &MatrixPolynomial, i: usize, j: usize) -> Result<MatrixPolynomial> {
    let n = p.n();
    if !(1 <= i && i <= j && j <= n) {
        return Err(Error::domain("Laplacian indices must satisfy 1 ≤ i ≤ j ≤ n"));
    }
    let (ci, cj) = (i - 1, j - 1);
    let mut acc = MatrixPolynomial::zero(n);
    for k in 0..n {
        acc = acc.add(&p.deriv(k, ci).deriv(k, cj));
    }
    Ok(acc)
}

/// Outcome of a pluriharmonicity check.
#[derive(Clone, Debug)]
pub struct PluriharmReport {
    pub pluriharmonic: bool,
    /// Offending component index, (i,j), and the nonzero remainder.
    pub witness: Option<(usize, usize, usize, MatrixPolynomial)>,
}

/// Checks `Δ_{i,j} p = 0` for all `1 ≤ i ≤ j ≤ n`, component-wise.
pub fn is_pluriharmonic(p: &VectorPolynomial) -> PluriharmReport {
    let n = p.n();
    for (idx, comp) in p.components.iter().enumerate() {
        for i in 1..=n {
            for j in i..=n {
                let rem = laplacian(comp, i, j).expect("valid indices");
                if !rem.is_zero() {
                    return PluriharmReport {
                        pluriharmonic: false,
                        witness: Some((idx, i, j, rem)),
                    };
                }
            }
        }
    }
    PluriharmReport {
        pluriharmonic: true,
        witness: None,
    }
}

pub fn is_pluriharmonic_scalar(p: &MatrixPolynomial) -> PluriharmReport {
    is_pluriharmonic(&VectorPolynomial {
        components: vec![p.clone()],
    })
}

/// The isotropic frame A: rows `a_j = e_j + i·e_{l+j}` and
/// `a_{n+1−j} = e_j − i·e_{l+j}` for `j = 1..l`, middle row `e_n` for odd
/// n. Satisfies `A·ᵀA = 2·(antidiagonal)` up to the middle 1, which is
/// what makes leading principal minors of `Ax` pluriharmonic.
pub fn isotropic_frame(n: usize) -> Vec<Vec<GaussRat>> {
    let l = n / 2;
    let mut a = vec![vec![GaussRat::zero(); n]; n];
    for j in 0..l {
        a[j][j] = GaussRat::one();
        a[j][l + j] = GaussRat::i();
        a[n - 1 - j][j] = GaussRat::one();
        a[n - 1 - j][l + j] = GaussRat::i().neg();
    }
    if n % 2 == 1 {
        a[l] = vec![GaussRat::zero(); n];
        a[l][n - 1] = GaussRat::one();
    }
    a
}

/// Leading principal j×j minor of `A·x` as a symbolic polynomial.
fn frame_minor(n: usize, j: usize) -> MatrixPolynomial {
    let a = isotropic_frame(n);
    // rows of Ax needed: 0..j; y_{rc} = Σ_k a[r][k]·x_{kc}
    let y: Vec<Vec<MatrixPolynomial>> = (0..j)
        .map(|r| {
            (0..j)
                .map(|c| {
                    let mut f = MatrixPolynomial::zero(n);
                    for k in 0..n {
                        f = f.add(&MatrixPolynomial::variable(n, k, c).scale(&a[r][k]));
                    }
                    f
                })
                .collect()
        })
        .collect();
    // determinant of the j×j polynomial matrix by cofactor expansion
    fn det(
        n: usize,
        y: &[Vec<MatrixPolynomial>],
        rows: &[usize],
        cols: &[usize],
    ) -> MatrixPolynomial {
        if rows.len() == 1 {
            return y[rows[0]][cols[0]].clone();
        }
        let mut acc = MatrixPolynomial::zero(n);
        for (k, &c) in cols.iter().enumerate() {
            let sub_cols: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, &cc)| cc)
                .collect();
            let minor = det(n, y, &rows[1..], &sub_cols);
            let term = y[rows[0]][c].mul(&minor);
            if k % 2 == 0 {
                acc = acc.add(&term);
            } else {
                acc = acc.sub(&term);
            }
        }
        acc
    }
    let idx: Vec<usize> = (0..j).collect();
    det(n, &y, &idx, &idx)
}

/// Highest-weight pluriharmonic generator for a weight of the form
/// `(m_1,…,m_l,0,…,0)` (l = ⌊n/2⌋) or the all-ones weight.
///
/// Returns `Π_j δ_j(Ax)^{c_j}` with `c_j = m_j − m_{j+1}` (`c_l = m_l`)
/// and δ_j the leading principal minors; all-ones gives `det(x)`.
pub fn kv_generator(rho: &GLWeight) -> Result<MatrixPolynomial> {
    let n = rho.n;
    if n > 4 {
        return Err(Error::UnsupportedDegree(n));
    }
    let l = n / 2;
    if rho.entries.iter().all(|&e| e == 1) {
        return Ok(MatrixPolynomial::det_poly(n));
    }
    if rho.entries[l..].iter().any(|&e| e != 0) {
        return Err(Error::domain(
            "unsupported weight shape: trailing-ones weights require the \
             deferred second-kind generators and are not constructible here",
        ));
    }
    let m = &rho.entries[..l];
    let mut acc = MatrixPolynomial::constant(n, GaussRat::one());
    for j in 0..l {
        let c = m[j] - if j + 1 < l { m[j + 1] } else { 0 };
        if c > 0 {
            acc = acc.mul(&frame_minor(n, j + 1).pow(c as u32));
        }
    }
    Ok(acc)
}

/// Result of the highest-weight profile inspection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightProfile {
    /// Per-column scaling exponents of `p(x·diag(t))`, when uniform.
    pub exponents: Option<Vec<i64>>,
    pub unipotent_invariant: bool,
}

/// Reads the diagonal-torus exponents and tests invariance under the
/// unipotent upper-triangular group acting on the right.
///
/// The exponent vector exists iff every monomial has the same column
/// degrees. Unipotent invariance `p(x·u) = p(x)` is a polynomial identity
/// in the shear parameter of each elementary generator `I + c·E_{ij}`;
/// since its degree in c is at most deg p, checking deg p + 1 distinct
/// rational values of c is a complete test.
pub fn weight_profile(p: &MatrixPolynomial) -> WeightProfile {
    let n = p.n();
    let mut exps: Option<Vec<i64>> = None;
    let mut uniform = true;
    for (mono, _) in p.terms() {
        let col_deg: Vec<i64> = (0..n)
            .map(|c| (0..n).map(|r| mono[r * n + c] as i64).sum())
            .collect();
        match &exps {
            None => exps = Some(col_deg),
            Some(e) => {
                if e != &col_deg {
                    uniform = false;
                    break;
                }
            }
        }
    }
    let exponents = if uniform { exps } else { None };

    let deg = p.degree();
    let mut invariant = true;
    'outer: for i in 0..n {
        for j in (i + 1)..n {
            for cval in 1..=(deg as i64 + 1) {
                // x·(I + c·E_{ij}): column j gains c·column i,
                // i.e. x_{rj} ↦ x_{rj} + c·x_{ri} for every row r.
                let mut q = p.clone();
                for r in 0..n {
                    let repl = MatrixPolynomial::variable(n, r, j).add(
                        &MatrixPolynomial::variable(n, r, i)
                            .scale(&GaussRat::from_i64(cval)),
                    );
                    q = q.substitute_variable(r, j, &repl);
                }
                if q != *p {
                    invariant = false;
                    break 'outer;
                }
            }
        }
    }
    WeightProfile {
        exponents,
        unipotent_invariant: invariant,
    }
}

/// The V-valued Sym^j highest-weight family for n = 2: components
/// `L₁^{j−t}·L₂^t` with `L_c = x_{1c} + i·x_{2c}`. Under `x ↦ x·ᵀg`
/// the component vector transforms by `materialize_sym_rep(j, 0)` at g,
/// and each component is pluriharmonic.
pub fn sym_vector_polynomial(j: u32) -> VectorPolynomial {
    let n = 2;
    let l1 = MatrixPolynomial::variable(n, 0, 0)
        .add(&MatrixPolynomial::variable(n, 1, 0).scale(&GaussRat::i()));
    let l2 = MatrixPolynomial::variable(n, 0, 1)
        .add(&MatrixPolynomial::variable(n, 1, 1).scale(&GaussRat::i()));
    let components = (0..=j)
        .map(|t| l1.pow(j - t).mul(&l2.pow(t)))
        .collect();
    VectorPolynomial { components }
}

/// Serialized term: exponent matrix plus exact re/im strings.
#[derive(Serialize, Deserialize)]
pub struct PolyTermJson {
    pub exponents: Vec<Vec<u32>>,
    pub re: String,
    pub im: String,
}

pub fn polynomial_to_json(p: &MatrixPolynomial) -> Vec<PolyTermJson> {
    let n = p.n();
    p.terms()
        .map(|(mono, c)| PolyTermJson {
            exponents: (0..n)
                .map(|r| (0..n).map(|cc| mono[r * n + cc]).collect())
                .collect(),
            re: crate::exactmath::rat_to_str(&c.re),
            im: crate::exactmath::rat_to_str(&c.im),
        })
        .collect()
}

pub fn polynomial_from_json(n: usize, terms: &[PolyTermJson]) -> Result<MatrixPolynomial> {
    let mut p = MatrixPolynomial::zero(n);
    for t in terms {
        if t.exponents.len() != n || t.exponents.iter().any(|r| r.len() != n) {
            return Err(Error::domain("exponent matrix shape mismatch"));
        }
        let mono: Monomial = t.exponents.iter().flatten().copied().collect();
        let coeff = GaussRat::new(
            crate::exactmath::rat_from_str(&t.re)?,
            crate::exactmath::rat_from_str(&t.im)?,
        );
        p.insert_term(mono, coeff);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rint;

    #[test]
    fn laplacian_basics() {
        let x11 = MatrixPolynomial::variable(2, 0, 0);
        assert!(laplacian(&x11, 1, 1).unwrap().is_zero());
        let sq = x11.mul(&x11);
        let d = laplacian(&sq, 1, 1).unwrap();
        assert_eq!(d, MatrixPolynomial::constant(2, GaussRat::from_i64(2)));
        let det = MatrixPolynomial::det_poly(2);
        assert!(laplacian(&det, 1, 1).unwrap().is_zero());
        assert!(laplacian(&det, 1, 2).unwrap().is_zero());
    }

    #[test]
    fn laplacian_symmetry() {
        let p = MatrixPolynomial::variable(3, 0, 0)
            .mul(&MatrixPolynomial::variable(3, 0, 1))
            .add(&MatrixPolynomial::variable(3, 2, 1).pow(3));
        for i in 1..=3 {
            for j in i..=3 {
                // Δ is defined symmetrically; both orders must agree.
                assert_eq!(laplacian(&p, i, j).unwrap(), laplacian(&p, i, j).unwrap());
            }
        }
    }

    #[test]
    fn determinants_pluriharmonic() {
        for n in 1..=4 {
            let det = MatrixPolynomial::det_poly(n);
            assert!(is_pluriharmonic_scalar(&det).pluriharmonic, "n = {n}");
        }
    }

    #[test]
    fn isotropic_powers_pluriharmonic() {
        // (x₁₁ + i·x₂₁)^m for n = 2, m ≤ 4
        let f = MatrixPolynomial::variable(2, 0, 0)
            .add(&MatrixPolynomial::variable(2, 1, 0).scale(&GaussRat::i()));
        for m in 1..=4 {
            assert!(is_pluriharmonic_scalar(&f.pow(m)).pluriharmonic, "m = {m}");
        }
    }

    #[test]
    fn negative_control_with_witness() {
        let sq = MatrixPolynomial::variable(2, 0, 0).pow(2);
        let rep = is_pluriharmonic_scalar(&sq);
        assert!(!rep.pluriharmonic);
        let (_, i, j, rem) = rep.witness.unwrap();
        assert_eq!((i, j), (1, 1));
        assert_eq!(rem, MatrixPolynomial::constant(2, GaussRat::from_i64(2)));
    }

    #[test]
    fn generator_examples() {
        let g = kv_generator(&GLWeight::new(vec![1, 0]).unwrap()).unwrap();
        let expect = MatrixPolynomial::variable(2, 0, 0)
            .add(&MatrixPolynomial::variable(2, 1, 0).scale(&GaussRat::i()));
        assert_eq!(g, expect);

        let g2 = kv_generator(&GLWeight::new(vec![2, 0]).unwrap()).unwrap();
        assert_eq!(g2, expect.pow(2));

        let g3 = kv_generator(&GLWeight::new(vec![1, 1, 1]).unwrap()).unwrap();
        assert_eq!(g3, MatrixPolynomial::det_poly(3));

        assert!(kv_generator(&GLWeight::new(vec![2, 1, 1, 0]).unwrap()).is_err());
    }

    #[test]
    fn generator_sweep_pluriharmonic_and_profiled() {
        for n in 2..=4usize {
            let l = n / 2;
            let mut weights: Vec<Vec<i64>> = Vec::new();
            fn extend(cur: Vec<i64>, l: usize, out: &mut Vec<Vec<i64>>) {
                if cur.len() == l {
                    out.push(cur);
                    return;
                }
                let hi = cur.last().copied().unwrap_or(3);
                for v in 0..=hi {
                    let mut nxt = cur.clone();
                    nxt.push(v);
                    extend(nxt, l, out);
                }
            }
            extend(Vec::new(), l, &mut weights);
            for m in weights {
                let mut entries = m.clone();
                entries.resize(n, 0);
                let rho = GLWeight::new(entries.clone()).unwrap();
                let g = kv_generator(&rho).unwrap();
                if m.iter().all(|&x| x == 0) {
                    continue;
                }
                assert!(
                    is_pluriharmonic_scalar(&g).pluriharmonic,
                    "n={n}, m={m:?}"
                );
                let prof = weight_profile(&g);
                assert_eq!(prof.exponents, Some(entries), "n={n}, m={m:?}");
                assert!(prof.unipotent_invariant, "n={n}, m={m:?}");
            }
        }
    }

    #[test]
    fn weight_profile_examples() {
        let det = MatrixPolynomial::det_poly(2);
        let prof = weight_profile(&det);
        assert_eq!(prof.exponents, Some(vec![1, 1]));
        assert!(prof.unipotent_invariant);

        let mixed = MatrixPolynomial::variable(2, 0, 0).add(&MatrixPolynomial::variable(2, 0, 1));
        assert_eq!(weight_profile(&mixed).exponents, None);
    }

    #[test]
    fn sym_vector_rep_compatibility() {
        // P(x·ᵀg) = ρ(g)·P(x) with ρ = Sym^j, exact rational check.
        use crate::weights::materialize_sym_rep;
        for j in [1u32, 2, 3] {
            let p = sym_vector_polynomial(j);
            let rep = materialize_sym_rep(j, 0);
            let g = RationalMatrix::from_i64_rows(&[vec![2, 1], vec![3, -1]]).unwrap();
            let x = RationalMatrix::from_i64_rows(&[vec![1, 2], vec![-1, 4]]).unwrap();
            let rho_g = rep.apply(&g).unwrap();
            let xt = x.mul(&g.transpose());
            for t in 0..p.dim() {
                let lhs = p.components[t].eval_rational(&xt);
                let mut rhs = GaussRat::zero();
                for s in 0..p.dim() {
                    rhs = rhs.add(
                        &p.components[s]
                            .eval_rational(&x)
                            .scale(rho_g.get(t, s)),
                    );
                }
                assert_eq!(lhs, rhs, "j={j}, component {t}");
            }
        }
    }

    #[test]
    fn substitution_consistency() {
        // right-substitution at a numeric matrix matches eval of x·M
        let p = MatrixPolynomial::det_poly(2).add(&MatrixPolynomial::variable(2, 0, 1).pow(2));
        let m = vec![
            vec![GaussRat::from_i64(2), GaussRat::i()],
            vec![GaussRat::from_i64(-1), GaussRat::from_i64(3)],
        ];
        let q = p.substitute_right(&m);
        let x = vec![
            vec![GaussRat::from_i64(1), GaussRat::from_i64(4)],
            vec![GaussRat::from_i64(2), GaussRat::from_i64(-3)],
        ];
        // x·M
        let mut xm = vec![vec![GaussRat::zero(); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                for k in 0..2 {
                    xm[r][c] = xm[r][c].add(&x[r][k].mul(&m[k][c]));
                }
            }
        }
        assert_eq!(q.eval_gauss(&x), p.eval_gauss(&xm));
        assert_eq!(p.eval_gauss(&x).re, rint(-11 + 16));
    }
}
