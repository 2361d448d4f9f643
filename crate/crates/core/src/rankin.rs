//! Rankin products of coefficient families against theta series.
//!
//! Contents: the Hermitian operator `H_{ρ,R}(s)` computed by
//! double-exponential quadrature in Cholesky coordinates and assembled
//! through its `ρ(R^{−1/2})`-conjugation factorization, synthetic
//! coefficient families obeying the unimodular transformation laws of
//! Fourier coefficients, the class-set Dirichlet series
//! `D(s,f,g) = Σ_R ν_R⟨H_{ρ,R}(s)c_f(R,1), c_g(R,1)⟩`, and the
//! unfolding identity that reindexes it over integer-matrix cosets in
//! Hermite normal form.

use crate::analytic::{complex_gamma, HalfInt};
use crate::chars::{hecke_weight_complex, DirichletCharacter};
use crate::error::{Error, Result};
use crate::exactmath::{
    automorph_group, minkowski_reduce, rat_to_f64, reduced_binary_forms, RationalMatrix,
    SymPosDef,
};
use crate::quadrature::{integrate_vec, Axis};
use crate::theta::{theta_coefficient, ThetaSpec};
use crate::weights::{GLWeight, SymRep};
use num_complex::Complex64;
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;
const QUAD_TOL: f64 = 1e-9;
const WEIGHT_CUTOFF: f64 = 1e-280;

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn cpow(z: Complex64, e: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..e {
        acc *= z;
    }
    acc
}

fn binom_f64(n: u32, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn mat_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum())
                .collect()
        })
        .collect()
}

pub(crate) fn mat_to_complex(m: &RationalMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| c64(rat_to_f64(m.get(i, j)))).collect())
        .collect()
}

/// Materialized polynomial representation of `GL_n` acting on the value
/// space V of a coefficient family: `x ↦ x^m` on ℂ for `n = 1`, and
/// `det^k ⊗ Sym^j` on the monomial basis of binary forms for `n = 2`.
#[derive(Clone, Debug)]
pub enum Rep {
    Scalar { m: i64 },
    Sym(SymRep),
}

impl Rep {
    pub fn scalar(m: i64) -> Self {
        Rep::Scalar { m }
    }

    pub fn sym(j: u32, k: i64) -> Self {
        Rep::Sym(SymRep::new(j, k))
    }

    pub fn n(&self) -> usize {
        match self {
            Rep::Scalar { .. } => 1,
            Rep::Sym(_) => 2,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Rep::Scalar { .. } => 1,
            Rep::Sym(r) => r.dim(),
        }
    }

    /// Highest weight as a dominant `GL_n` weight.
    pub fn weight(&self) -> Result<GLWeight> {
        match self {
            Rep::Scalar { m } => GLWeight::new(vec![*m]),
            Rep::Sym(r) => GLWeight::new(vec![r.j as i64 + r.k, r.k]),
        }
    }

    /// Sum of the highest-weight entries.
    pub fn lambda_p(&self) -> i64 {
        match self {
            Rep::Scalar { m } => *m,
            Rep::Sym(r) => r.j as i64 + 2 * r.k,
        }
    }

    /// Diagonal of the invariant Hermitian form on V in the monomial
    /// basis: the binomial weights `C(j,t)`.
    pub fn form_weights(&self) -> Vec<f64> {
        match self {
            Rep::Scalar { .. } => vec![1.0],
            Rep::Sym(r) => (0..=r.j).map(|t| binom_f64(r.j, t)).collect(),
        }
    }

    pub fn apply_rational(&self, a: &RationalMatrix) -> Result<RationalMatrix> {
        match self {
            Rep::Scalar { m } => {
                if a.rows() != 1 || a.cols() != 1 {
                    return Err(Error::domain("scalar representation acts on 1×1 matrices"));
                }
                let x = a.get(0, 0).clone();
                if x.is_zero() {
                    return Err(Error::domain("evaluation matrix is singular"));
                }
                let e = m.unsigned_abs() as usize;
                let mut acc = crate::exactmath::rint(1);
                for _ in 0..e {
                    acc *= &x;
                }
                if *m < 0 {
                    acc = acc.recip();
                }
                RationalMatrix::from_rows(vec![vec![acc]])
            }
            Rep::Sym(r) => r.apply(a),
        }
    }

    /// Complex mirror of [`Rep::apply_rational`]; same basis and the same
    /// expansion convention, so the two routes agree on rational input.
    pub fn apply_complex(&self, a: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
        match self {
            Rep::Scalar { m } => {
                if a.len() != 1 || a[0].len() != 1 {
                    return Err(Error::domain("scalar representation acts on 1×1 matrices"));
                }
                let x = a[0][0];
                if x.norm() == 0.0 {
                    return Err(Error::domain("evaluation matrix is singular"));
                }
                Ok(vec![vec![x.powi(*m as i32)]])
            }
            Rep::Sym(r) => {
                if a.len() != 2 || a.iter().any(|row| row.len() != 2) {
                    return Err(Error::domain("Sym^j acts on 2×2 matrices"));
                }
                let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
                if det.norm() == 0.0 {
                    return Err(Error::domain("evaluation matrix is singular"));
                }
                let j = r.j;
                let dim = j as usize + 1;
                let mut mat = vec![vec![czero(); dim]; dim];
                for t in 0..=j {
                    for p in 0..=(j - t) {
                        for q in 0..=t {
                            let coeff = binom_f64(j - t, p)
                                * binom_f64(t, q);
                            let term = cpow(a[0][0], p)
                                * cpow(a[0][1], j - t - p)
                                * cpow(a[1][0], q)
                                * cpow(a[1][1], t - q)
                                * coeff;
                            let s = (j - p - q) as usize;
                            mat[t as usize][s] += term;
                        }
                    }
                }
                let twist = det.powi(r.k as i32);
                for row in &mut mat {
                    for v in row.iter_mut() {
                        *v *= twist;
                    }
                }
                Ok(mat)
            }
        }
    }
}

/// `⟨v, w⟩ = Σ_t C(j,t)·v_t·conj(w_t)`, the invariant Hermitian pairing
/// on V (linear in the first slot).
pub fn hermitian_inner(rep: &Rep, v: &[Complex64], w: &[Complex64]) -> Complex64 {
    rep.form_weights()
        .iter()
        .zip(v.iter().zip(w))
        .map(|(g, (a, b))| *g * a * b.conj())
        .sum()
}

/// Fourier-coefficient data of a form of degree n and weight k: values
/// `c(R, 1) ∈ V` on Minkowski-reduced representatives, extended to all
/// classes by the unimodular transformation law
/// `c(ᵀb·R·b, 1) = ψ(det b)·det(b)^{[k]}·ρ(ᵀb)·c(R, 1)`.
#[derive(Clone, Debug)]
pub struct CoefficientFamily {
    pub rep: Rep,
    pub k: HalfInt,
    pub psi: DirichletCharacter,
    pub base: Vec<(SymPosDef, Vec<Complex64>)>,
}

impl CoefficientFamily {
    pub fn new(
        rep: Rep,
        k: HalfInt,
        psi: DirichletCharacter,
        base: Vec<(SymPosDef, Vec<Complex64>)>,
    ) -> Result<Self> {
        let n = rep.n();
        let dim = rep.dim();
        for (r, v) in &base {
            if r.n() != n {
                return Err(Error::domain("base representative of the wrong degree"));
            }
            if !r.is_integral() {
                return Err(Error::domain("base representatives must be integral"));
            }
            let (r0, _) = minkowski_reduce(r)?;
            if r0.matrix() != r.matrix() {
                return Err(Error::domain(
                    "base representatives must be Minkowski-reduced",
                ));
            }
            if v.len() != dim {
                return Err(Error::domain("coefficient value has the wrong dimension"));
            }
        }
        Ok(CoefficientFamily { rep, k, psi, base })
    }

    /// Random family on all reduced classes up to `det_bound`, projected
    /// onto automorphism invariants so the extension law is coherent.
    pub fn synthetic(
        rep: Rep,
        k: HalfInt,
        psi: DirichletCharacter,
        det_bound: i64,
        seed: u64,
    ) -> Result<Self> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let reps = class_representatives(rep.n(), det_bound)?;
        let dim = rep.dim();
        let base = reps
            .into_iter()
            .map(|r| {
                let v: Vec<Complex64> = (0..dim)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                (r, v)
            })
            .collect();
        let mut fam = CoefficientFamily::new(rep, k, psi, base)?;
        fam.project()?;
        Ok(fam)
    }

    /// Transports `c(R, 1)` to `c(ᵀb·R·b, 1)` along a unimodular b.
    pub fn transport(&self, b: &RationalMatrix, value: &[Complex64]) -> Result<Vec<Complex64>> {
        let det = b.det();
        let det_f = rat_to_f64(&det);
        if det_f.abs() != 1.0 {
            return Err(Error::domain("transport requires a unimodular matrix"));
        }
        let mut sign = 1.0;
        if det_f < 0.0 {
            sign = self.psi.parity() as f64;
            if self.k.floor() % 2 != 0 {
                sign = -sign;
            }
        }
        let mat = self.rep.apply_rational(&b.transpose())?;
        let dim = self.rep.dim();
        let mut out = vec![czero(); dim];
        for (t, o) in out.iter_mut().enumerate() {
            for (s, v) in value.iter().enumerate() {
                *o += c64(rat_to_f64(mat.get(t, s))) * v;
            }
            *o *= sign;
        }
        Ok(out)
    }

    /// `c(R, 1)` for an arbitrary integral positive definite R: reduce,
    /// look up the class, transport back. Classes outside the base are
    /// zero.
    pub fn value(&self, r: &SymPosDef) -> Result<Vec<Complex64>> {
        let (r0, u) = minkowski_reduce(r)?;
        let stored = self
            .base
            .iter()
            .find(|(b, _)| b.matrix() == r0.matrix())
            .map(|(_, v)| v.clone());
        let Some(stored) = stored else {
            return Ok(vec![czero(); self.rep.dim()]);
        };
        // ᵀu·R·u = R₀, so R = ᵀb·R₀·b with b = u⁻¹.
        let b = u
            .inverse()
            .map_err(|_| Error::domain("reduction transform is singular"))?;
        self.transport(&b, &stored)
    }

    /// Averages every base value over the automorphism group of its
    /// representative, making the extension law well defined.
    pub fn project(&mut self) -> Result<()> {
        let rep = self.rep.clone();
        let k = self.k;
        let psi = self.psi.clone();
        let shadow = CoefficientFamily {
            rep,
            k,
            psi,
            base: Vec::new(),
        };
        for (r, v) in &mut self.base {
            let auts = automorph_group(r)?;
            let dim = v.len();
            let mut acc = vec![czero(); dim];
            for u in &auts {
                let t = shadow.transport(u, v)?;
                for (a, x) in acc.iter_mut().zip(t) {
                    *a += x;
                }
            }
            let scale = 1.0 / auts.len() as f64;
            for (slot, a) in v.iter_mut().zip(acc) {
                *slot = a * scale;
            }
        }
        Ok(())
    }
}

fn class_representatives(n: usize, det_bound: i64) -> Result<Vec<SymPosDef>> {
    if det_bound < 1 {
        return Err(Error::domain("determinant bound must be positive"));
    }
    match n {
        1 => {
            if det_bound > 100_000 {
                return Err(Error::guard(format!(
                    "class enumeration bound {det_bound} exceeds 100000"
                )));
            }
            Ok((1..=det_bound)
                .map(|m| SymPosDef::from_i64_rows(&[vec![m]]).expect("positive"))
                .collect())
        }
        2 => {
            if det_bound > 10_000 {
                return Err(Error::guard(format!(
                    "class enumeration bound {det_bound} exceeds 10000"
                )));
            }
            Ok(reduced_binary_forms(det_bound))
        }
        n => Err(Error::UnsupportedDegree(n)),
    }
}

/// Coherence report for a coefficient family.
#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub coherent: bool,
    pub checks: usize,
    pub max_error: f64,
    pub violation: Option<String>,
}

fn unimodular_probes(n: usize) -> Vec<RationalMatrix> {
    match n {
        1 => vec![RationalMatrix::from_i64_rows(&[vec![-1]]).unwrap()],
        _ => {
            let shear = RationalMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
            let lower = RationalMatrix::from_i64_rows(&[vec![1, 0], vec![1, 1]]).unwrap();
            let rot = RationalMatrix::from_i64_rows(&[vec![0, 1], vec![-1, 0]]).unwrap();
            let loop2 = shear.mul(&lower);
            vec![shear, lower, rot, loop2]
        }
    }
}

/// Checks the extension law: automorphism invariance of every base value
/// and two-route agreement (reduce-then-transport versus direct
/// transport) along a fixed set of unimodular probes.
pub fn validate_family(fam: &CoefficientFamily) -> Result<FamilyReport> {
    let mut checks = 0usize;
    let mut max_error: f64 = 0.0;
    let tol = 1e-9;
    for (r, v) in &fam.base {
        let scale = vec_norm(v).max(1.0);
        for u in automorph_group(r)? {
            let t = fam.transport(&u, v)?;
            let err = t
                .iter()
                .zip(v)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt()
                / scale;
            checks += 1;
            max_error = max_error.max(err);
            if err > tol {
                return Ok(FamilyReport {
                    coherent: false,
                    checks,
                    max_error,
                    violation: Some(format!(
                        "automorphism invariance fails at R = {:?} under u = {:?} (error {err:.3e})",
                        r.matrix().entries(),
                        u.entries()
                    )),
                });
            }
        }
        for b in unimodular_probes(fam.rep.n()) {
            let moved = SymPosDef::new(b.transpose().mul(r.matrix()).mul(&b))?;
            let direct = fam.transport(&b, v)?;
            let via_reduction = fam.value(&moved)?;
            let err = direct
                .iter()
                .zip(&via_reduction)
                .map(|(a, c)| (a - c).norm_sqr())
                .sum::<f64>()
                .sqrt()
                / scale;
            checks += 1;
            max_error = max_error.max(err);
            if err > tol {
                return Ok(FamilyReport {
                    coherent: false,
                    checks,
                    max_error,
                    violation: Some(format!(
                        "two-route extension disagrees at R = {:?} along b = {:?} (error {err:.3e})",
                        r.matrix().entries(),
                        b.entries()
                    )),
                });
            }
        }
    }
    Ok(FamilyReport {
        coherent: true,
        checks,
        max_error,
        violation: None,
    })
}

#[derive(Clone)]
struct HIdentity {
    matrix: Vec<Vec<Complex64>>,
    levels_used: u32,
    last_delta: f64,
}

fn rep_cache_key(rep: &Rep) -> (i64, i64, i64) {
    match rep {
        Rep::Scalar { m } => (1, *m, 0),
        Rep::Sym(r) => (2, r.j as i64, r.k),
    }
}

static H_CACHE: OnceLock<Mutex<HashMap<((i64, i64, i64), u64, u64), HIdentity>>> = OnceLock::new();

fn convergence_guard(n: usize, a: Complex64) -> Result<()> {
    let bound = (n as f64 + 1.0) / 2.0;
    if a.re <= bound {
        return Err(Error::domain(format!(
            "convergence guard: Re(s + h) = {:.3} must exceed (n+1)/2 = {bound}",
            a.re
        )));
    }
    Ok(())
}

/// `H_ρ(s) = ∫_Y ρ(y)·e^{−4π·tr(y)}·|y|^{s+h}·d×y` on Cholesky
/// coordinates `y = ᵀT·T`, cached per (ρ, s+h).
fn h_identity(rep: &Rep, a: Complex64) -> Result<HIdentity> {
    convergence_guard(rep.n(), a)?;
    let key = (rep_cache_key(rep), a.re.to_bits(), a.im.to_bits());
    let cache = H_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let dim = rep.dim();
    let d2 = dim * dim;
    let result = match rep.n() {
        1 => integrate_vec(&[Axis::HalfLine], d2, QUAD_TOL, 10, &mut |t| {
            let t1 = t[0];
            let gauss = 2.0 * (-FOUR_PI * t1 * t1).exp();
            if gauss < WEIGHT_CUTOFF {
                return vec![czero(); d2];
            }
            let w = ((a * 2.0 - c64(1.0)) * t1.ln()).exp() * gauss;
            let y = vec![vec![c64(t1 * t1)]];
            let rho = rep.apply_complex(&y).expect("positive argument");
            rho.into_iter().flatten().map(|v| v * w).collect()
        })?,
        2 => integrate_vec(
            &[Axis::HalfLine, Axis::RealLine, Axis::HalfLine],
            d2,
            QUAD_TOL,
            5,
            &mut |t| {
                let (t11, t21, t22) = (t[0], t[1], t[2]);
                let gauss = 4.0 * (-FOUR_PI * (t11 * t11 + t21 * t21 + t22 * t22)).exp();
                if gauss < WEIGHT_CUTOFF {
                    return vec![czero(); d2];
                }
                let w = ((a * 2.0 - c64(1.0)) * t11.ln() + (a * 2.0 - c64(2.0)) * t22.ln())
                    .exp()
                    * gauss;
                // y = T·ᵀT with T lower triangular, matching the
                // t11^(2a-1)·t22^(2a-2) weight above; ρ(y) = ρ(T)·ρ(ᵀT)
                // through the triangular factors avoids the cancellation
                // in det(y) when t21 dominates
                let tm = vec![
                    vec![c64(t11), czero()],
                    vec![c64(t21), c64(t22)],
                ];
                let tt = vec![
                    vec![c64(t11), c64(t21)],
                    vec![czero(), c64(t22)],
                ];
                let rho = mat_mul(
                    &rep.apply_complex(&tm).expect("nonzero diagonal"),
                    &rep.apply_complex(&tt).expect("nonzero diagonal"),
                );
                rho.into_iter().flatten().map(|v| v * w).collect()
            },
        )?,
        n => return Err(Error::UnsupportedDegree(n)),
    };
    let matrix: Vec<Vec<Complex64>> = result
        .value
        .chunks(dim)
        .map(|row| row.to_vec())
        .collect();
    let out = HIdentity {
        matrix,
        levels_used: result.levels_used,
        last_delta: result.last_delta,
    };
    cache.lock().unwrap().insert(key, out.clone());
    Ok(out)
}

fn inverse_sqrt_f64(r: &SymPosDef) -> Result<Vec<Vec<f64>>> {
    let m = r.matrix();
    match r.n() {
        1 => {
            let v = rat_to_f64(m.get(0, 0));
            Ok(vec![vec![1.0 / v.sqrt()]])
        }
        2 => {
            let a = rat_to_f64(m.get(0, 0));
            let b = rat_to_f64(m.get(0, 1));
            let d = rat_to_f64(m.get(1, 1));
            let s = (a * d - b * b).sqrt();
            let t = (a + d + 2.0 * s).sqrt();
            // symmetric square root (R + √det·1)/t, then a 2×2 inverse
            let (sa, sb, sd) = ((a + s) / t, b / t, (d + s) / t);
            let det = sa * sd - sb * sb;
            Ok(vec![
                vec![sd / det, -sb / det],
                vec![-sb / det, sa / det],
            ])
        }
        n => Err(Error::UnsupportedDegree(n)),
    }
}

/// The operator `H_{ρ,R}(s)`, Hermitian-symmetrized, with the
/// pre-symmetrization asymmetry retained as a diagnostic.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    pub dim: usize,
    pub matrix: Vec<Vec<Complex64>>,
    pub asymmetry: f64,
    pub levels_used: u32,
    pub last_delta: f64,
}

impl HermitianOperator {
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }
}

fn assemble_operator(
    rep: &Rep,
    hi: &HIdentity,
    a: Complex64,
    r: &SymPosDef,
) -> Result<HermitianOperator> {
    let b = inverse_sqrt_f64(r)?;
    let bc: Vec<Vec<Complex64>> = b
        .iter()
        .map(|row| row.iter().map(|&x| c64(x)).collect())
        .collect();
    let rho_b = rep.apply_complex(&bc)?;
    let mut m = mat_mul(&mat_mul(&rho_b, &hi.matrix), &rho_b);
    let det_r = rat_to_f64(&r.det());
    let scale = (-a * det_r.ln()).exp();
    for row in &mut m {
        for v in row.iter_mut() {
            *v *= scale;
        }
    }
    // Hermitian with respect to the binomial form G means
    // G^{1/2}·H·G^{−1/2} is conjugate-symmetric; symmetrize there.
    let g = rep.form_weights();
    let dim = rep.dim();
    let mut asym = 0.0f64;
    let mut norm = 0.0f64;
    let mut sym = vec![vec![czero(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let scale_ij = (g[i] / g[j]).sqrt();
            let scale_ji = (g[j] / g[i]).sqrt();
            let s_ij = m[i][j] * scale_ij;
            let s_ji = m[j][i] * scale_ji;
            asym += (s_ij - s_ji.conj()).norm_sqr();
            norm += s_ij.norm_sqr();
            sym[i][j] = (s_ij + s_ji.conj()) * 0.5 / scale_ij;
        }
    }
    Ok(HermitianOperator {
        dim,
        matrix: sym,
        asymmetry: (asym.sqrt()) / norm.sqrt().max(1e-300),
        levels_used: hi.levels_used,
        last_delta: hi.last_delta,
    })
}

/// `H_{ρ,R}(s) = ρ(R^{−1/2})·H_ρ(s)·ρ(R^{−1/2})·det(R)^{−(s+h)}` with the
/// identity-argument operator obtained by adaptive quadrature.
pub fn h_operator(rep: &Rep, h: HalfInt, s: Complex64, r: &SymPosDef) -> Result<HermitianOperator> {
    if r.n() != rep.n() {
        return Err(Error::domain("R must have the degree of the representation"));
    }
    if !r.is_definite() {
        return Err(Error::domain("R must be positive definite"));
    }
    let a = s + c64(h.as_f64());
    let hi = h_identity(rep, a)?;
    assemble_operator(rep, &hi, a, r)
}

/// Scalar by which `(4π)^{n(s+h)+λ_P}·H_ρ(s)` acts on the pluriharmonic
/// vector `P(1)`.
///
/// With `a = s + h + k` for weight `(j+k, …, k)`:
///
/// - degree 1, weight `(m)`: `Γ(s + h + m)`
/// - degree 2, weight `(j+k, k)`:
///   `√π·Γ(a)·Γ(a − 1/2)·Γ(2a + j)/(2^j·Γ(2a))`
///
/// This agrees with [`gamma_rho`](crate::analytic::gamma_rho) for `j ≤ 1`
/// and for scalar weights, but
/// the two differ from `j = 2` on: `P(1)` spans the harmonic `O(n)`-type
/// inside `Sym^j`, not the line of leading-minor products whose moments
/// `gamma_rho` interpolates.
pub fn pluriharmonic_gamma(weight: &GLWeight, h: HalfInt, s: Complex64) -> Result<Complex64> {
    let a0 = s + c64(h.as_f64());
    match weight.entries.as_slice() {
        [m] => complex_gamma(a0 + c64(*m as f64)),
        [l1, l2] => {
            let j = l1 - l2;
            let a = a0 + c64(*l2 as f64);
            let v = c64(std::f64::consts::PI.sqrt())
                * complex_gamma(a)?
                * complex_gamma(a - c64(0.5))?
                * complex_gamma(a * 2.0 + c64(j as f64))?
                / (complex_gamma(a * 2.0)? * 2.0f64.powi(j as i32));
            Ok(v)
        }
        m => Err(Error::UnsupportedDegree(m.len())),
    }
}

/// Quadrature-versus-closed-form comparison for the torus moments
/// `∫_Y Π t_ii^{2λ_i}·e^{−4π·tr y}·|y|^{s+h}·d×y`.
#[derive(Clone, Debug)]
pub struct MaassCheck {
    pub quadrature: Complex64,
    pub closed_form: Complex64,
    pub relative_error: f64,
    pub levels_used: u32,
}

pub fn maass_integral_check(lambda: &[i64], s_plus_h: f64, n: usize) -> Result<MaassCheck> {
    if n == 0 || n > 2 {
        return Err(Error::UnsupportedDegree(n));
    }
    if lambda.len() != n {
        return Err(Error::domain("λ must have n entries"));
    }
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::domain("λ must be weakly decreasing"));
    }
    for (i, &l) in lambda.iter().enumerate() {
        let arg = s_plus_h + l as f64 - (i as f64 + 1.0) / 2.0 + 0.5;
        if arg <= 0.0 {
            return Err(Error::domain(format!(
                "divergent moment: s + h + λ_{} − {}/2 + 1/2 = {arg:.3} ≤ 0",
                i + 1,
                i + 1
            )));
        }
    }
    let a = s_plus_h;
    let quad = match n {
        1 => {
            let l1 = lambda[0] as f64;
            integrate_vec(&[Axis::HalfLine], 1, QUAD_TOL, 10, &mut |t| {
                let t1 = t[0];
                let gauss = 2.0 * (-FOUR_PI * t1 * t1).exp();
                if gauss < WEIGHT_CUTOFF {
                    return vec![czero()];
                }
                vec![c64(t1.powf(2.0 * (a + l1) - 1.0) * gauss)]
            })?
        }
        _ => {
            let (l1, l2) = (lambda[0] as f64, lambda[1] as f64);
            integrate_vec(
                &[Axis::HalfLine, Axis::RealLine, Axis::HalfLine],
                1,
                QUAD_TOL,
                5,
                &mut |t| {
                    let (t11, t21, t22) = (t[0], t[1], t[2]);
                    let gauss =
                        4.0 * (-FOUR_PI * (t11 * t11 + t21 * t21 + t22 * t22)).exp();
                    if gauss < WEIGHT_CUTOFF {
                        return vec![czero()];
                    }
                    vec![c64(
                        t11.powf(2.0 * (a + l1) - 1.0) * t22.powf(2.0 * (a + l2) - 2.0) * gauss,
                    )]
                },
            )?
        }
    };
    let lambda_sum: i64 = lambda.iter().sum();
    let mut closed = c64(
        FOUR_PI.powf(-(n as f64 * a + lambda_sum as f64))
            * std::f64::consts::PI.powf(n as f64 * (n as f64 - 1.0) / 4.0),
    );
    for (i, &l) in lambda.iter().enumerate() {
        let arg = a + l as f64 - (i as f64 + 1.0) / 2.0 + 0.5;
        closed *= complex_gamma(c64(arg))?;
    }
    let value = quad.value[0];
    Ok(MaassCheck {
        quadrature: value,
        closed_form: closed,
        relative_error: (value - closed).norm() / closed.norm().max(1e-300),
        levels_used: quad.levels_used,
    })
}

/// Second factor of a Rankin product: either another coefficient family
/// or a theta series evaluated through its lattice coefficients.
pub enum Partner<'a> {
    Family(&'a CoefficientFamily),
    Theta(&'a ThetaSpec),
}

impl Partner<'_> {
    pub fn n(&self) -> usize {
        match self {
            Partner::Family(f) => f.rep.n(),
            Partner::Theta(t) => t.n(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Partner::Family(f) => f.rep.dim(),
            Partner::Theta(t) => t.p.dim(),
        }
    }

    /// Weight ℓ of the partner: its own k for a family, n/2 for a theta
    /// series.
    pub fn ell(&self) -> HalfInt {
        match self {
            Partner::Family(f) => f.k,
            Partner::Theta(t) => HalfInt::from_twice(t.n() as i64),
        }
    }

    pub fn coefficient(&self, r: &SymPosDef) -> Result<Vec<Complex64>> {
        match self {
            Partner::Family(f) => f.value(r),
            Partner::Theta(t) => Ok(theta_coefficient(t, r)?.numeric),
        }
    }
}

fn pair_h(k: HalfInt, ell: HalfInt) -> Result<HalfInt> {
    let twice_sum = k.twice() + ell.twice();
    if twice_sum % 2 != 0 {
        return Err(Error::domain(format!(
            "h = (k + ℓ)/2 must be half-integral; got k = {k}, ℓ = {ell}"
        )));
    }
    Ok(HalfInt::from_twice(twice_sum / 2))
}

/// Truncated Rankin product `Σ_{det R ≤ B} ν_R⟨H_{ρ,R}(s)c_f(R,1), c_g(R,1)⟩`
/// over reduced class representatives with `ν_R = 1/#Aut(R)`.
#[derive(Clone, Debug)]
pub struct RankinValue {
    pub value: Complex64,
    pub h: HalfInt,
    pub classes: usize,
    pub nonzero_terms: usize,
}

pub fn rankin_series(
    s: Complex64,
    f: &CoefficientFamily,
    g: &Partner,
    det_bound: i64,
) -> Result<RankinValue> {
    let n = f.rep.n();
    if g.n() != n {
        return Err(Error::domain("both factors must have the same degree"));
    }
    if g.dim() != f.rep.dim() {
        return Err(Error::domain("both factors must share the value space V"));
    }
    let h = pair_h(f.k, g.ell())?;
    let a = s + c64(h.as_f64());
    convergence_guard(n, a)?;
    let hi = h_identity(&f.rep, a)?;
    let reps = class_representatives(n, det_bound)?;
    let classes = reps.len();
    let mut value = czero();
    let mut nonzero_terms = 0usize;
    for r in &reps {
        let cf = f.value(r)?;
        if vec_norm(&cf) == 0.0 {
            continue;
        }
        let cg = g.coefficient(r)?;
        if vec_norm(&cg) == 0.0 {
            continue;
        }
        let nu = 1.0 / automorph_group(r)?.len() as f64;
        let op = assemble_operator(&f.rep, &hi, a, r)?;
        let term = hermitian_inner(&f.rep, &op.apply(&cf), &cg) * nu;
        if term.norm() > 0.0 {
            nonzero_terms += 1;
        }
        value += term;
    }
    Ok(RankinValue {
        value,
        h,
        classes,
        nonzero_terms,
    })
}

fn diagonal_sqrt_inv(tau: &SymPosDef) -> Result<Vec<f64>> {
    let n = tau.n();
    let m = tau.matrix();
    for i in 0..n {
        for j in 0..n {
            if i != j && !m.get(i, j).is_zero() {
                return Err(Error::domain("τ must be diagonal for exact square roots"));
            }
        }
    }
    Ok((0..n).map(|i| 1.0 / rat_to_f64(m.get(i, i)).sqrt()).collect())
}

/// Hermite-normal-form coset representatives of
/// `(GL_n(ℚ) ∩ M_n(ℤ))/GL_n(ℤ)` with `det(ᵀξτξ) ≤ det_bound`.
fn hnf_cosets(n: usize, det_tau: i64, det_bound: i64) -> Result<Vec<RationalMatrix>> {
    let mut out = Vec::new();
    match n {
        1 => {
            let mut d = 1i64;
            while det_tau * d * d <= det_bound {
                out.push(RationalMatrix::from_i64_rows(&[vec![d]])?);
                d += 1;
            }
        }
        2 => {
            let mut a = 1i64;
            while det_tau * a * a <= det_bound {
                let mut d = 1i64;
                while det_tau * (a * d) * (a * d) <= det_bound {
                    for b in 0..d {
                        out.push(RationalMatrix::from_i64_rows(&[vec![a, 0], vec![b, d]])?);
                    }
                    d += 1;
                }
                a += 1;
            }
        }
        n => return Err(Error::UnsupportedDegree(n)),
    }
    Ok(out)
}

/// Matched-truncation comparison of the class-set Rankin product against
/// its unfolding over integer-matrix cosets.
#[derive(Clone, Debug)]
pub struct UnfoldingReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub relative_discrepancy: f64,
    pub classes: usize,
    pub cosets: usize,
    pub h: HalfInt,
}

/// Compares `(4π)^{n(s+h)+λ_P}·D(s, f, θ)` (classes with `det R ≤ B`)
/// against
/// `Γ_ρ(s)·Σ_ξ conj(w_θ(ξ))·⟨c_f(ᵀξτξ, 1), P(√τ⁻¹·ᵀξ⁻¹)⟩·det(ᵀξτξ)^{−(s+h)}`
/// (cosets with `det(ᵀξτξ) ≤ B`).
pub fn unfolding_check(
    f: &CoefficientFamily,
    theta: &ThetaSpec,
    s: f64,
    det_bound: i64,
) -> Result<UnfoldingReport> {
    let n = f.rep.n();
    if theta.n() != n {
        return Err(Error::domain("family and theta series must share the degree"));
    }
    if theta.p.dim() != f.rep.dim() {
        return Err(Error::domain("family and theta series must share dim V"));
    }
    if !theta.tau.is_integral() {
        return Err(Error::domain("τ must be integral for coset truncation"));
    }
    let sqrt_inv = diagonal_sqrt_inv(&theta.tau)?;
    let h = pair_h(f.k, HalfInt::from_twice(n as i64))?;
    let a = s + h.as_f64();
    let series = rankin_series(c64(s), f, &Partner::Theta(theta), det_bound)?;
    let lambda_p = f.rep.lambda_p();
    let lhs = series.value * FOUR_PI.powf(n as f64 * a + lambda_p as f64);

    let gamma = pluriharmonic_gamma(&f.rep.weight()?, h, c64(s))?;
    let det_tau = rat_to_f64(&theta.tau.det()).round() as i64;
    let cosets = hnf_cosets(n, det_tau, det_bound)?;
    let coset_count = cosets.len();
    let mut sum = czero();
    for xi in &cosets {
        let det_xi = rat_to_f64(&xi.det()).round() as i64;
        let w = hecke_weight_complex(&theta.chi, det_xi);
        if w.norm() == 0.0 {
            continue;
        }
        let r = SymPosDef::new(xi.transpose().mul(theta.tau.matrix()).mul(xi))?;
        let cf = f.value(&r)?;
        if vec_norm(&cf) == 0.0 {
            continue;
        }
        let xi_inv = xi
            .inverse()
            .map_err(|_| Error::domain("coset representative is singular"))?;
        // argument √τ⁻¹·ᵀξ⁻¹ as a complex matrix
        let arg: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| c64(sqrt_inv[i] * rat_to_f64(xi_inv.get(j, i))))
                    .collect()
            })
            .collect();
        let pvec: Vec<Complex64> = theta
            .p
            .components
            .iter()
            .map(|c| c.eval_complex(&arg))
            .collect();
        let det_r = rat_to_f64(&r.det());
        sum += w.conj() * hermitian_inner(&f.rep, &cf, &pvec) * det_r.powf(-a);
    }
    let rhs = gamma * sum;
    let scale = lhs.norm().max(rhs.norm());
    let relative_discrepancy = if scale < 1e-300 {
        0.0
    } else {
        (lhs - rhs).norm() / scale
    };
    Ok(UnfoldingReport {
        lhs,
        rhs,
        relative_discrepancy,
        classes: series.classes,
        cosets: coset_count,
        h,
    })
}

/// Truncation of the coset Dirichlet series
/// `D_τ(s, f, χ) = Σ_ξ (ψχ*)(det ξ)·⟨ρ_{[k]}(ᵀξ⁻¹)·det(ξ)^{−(k−[k])}·c_f(ᵀξτξ,1), P(√τ⁻¹)⟩·det(ξ)^{n+1−s}`.
///
/// The bad-prime Euler product of the full assembly is not applied; the
/// flag records that those factors default to 1.
#[derive(Clone, Debug)]
pub struct DTauValue {
    pub value: Complex64,
    pub cosets: usize,
    pub bad_primes_normalized: bool,
}

pub fn d_tau_series(
    f: &CoefficientFamily,
    theta: &ThetaSpec,
    s: f64,
    coset_bound: i64,
) -> Result<DTauValue> {
    let n = f.rep.n();
    if theta.n() != n || theta.p.dim() != f.rep.dim() {
        return Err(Error::domain("family and theta series are incompatible"));
    }
    if !theta.tau.is_integral() {
        return Err(Error::domain("τ must be integral"));
    }
    if coset_bound < 1 {
        return Err(Error::domain("coset bound must be positive"));
    }
    let sqrt_inv = diagonal_sqrt_inv(&theta.tau)?;
    let arg0: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { c64(sqrt_inv[i]) } else { czero() })
                .collect()
        })
        .collect();
    let pvec0: Vec<Complex64> = theta
        .p
        .components
        .iter()
        .map(|c| c.eval_complex(&arg0))
        .collect();
    let k_f = f.k.as_f64();
    let cosets = hnf_cosets(n, 1, coset_bound * coset_bound)?;
    let mut value = czero();
    let mut used = 0usize;
    for xi in &cosets {
        let det_xi = rat_to_f64(&xi.det()).round() as i64;
        if det_xi > coset_bound {
            continue;
        }
        used += 1;
        let w = hecke_weight_complex(&f.psi, det_xi) * hecke_weight_complex(&theta.chi, det_xi);
        if w.norm() == 0.0 {
            continue;
        }
        let r = SymPosDef::new(xi.transpose().mul(theta.tau.matrix()).mul(xi))?;
        let cf = f.value(&r)?;
        if vec_norm(&cf) == 0.0 {
            continue;
        }
        let xi_tilde = xi
            .transpose()
            .inverse()
            .map_err(|_| Error::domain("coset representative is singular"))?;
        let mat = f.rep.apply_rational(&xi_tilde)?;
        let dim = f.rep.dim();
        let mut moved = vec![czero(); dim];
        for (t, o) in moved.iter_mut().enumerate() {
            for (sidx, v) in cf.iter().enumerate() {
                *o += c64(rat_to_f64(mat.get(t, sidx))) * v;
            }
        }
        // det(ᵀξ⁻¹)^{[k]}·|det ᵀξ⁻¹|^{k−[k]} collapses to det(ξ)^{−k}
        // on positive-determinant representatives; ρ itself carried no
        // det twist, so the whole ρ_{[k]} twist is det(ξ)^{−k}.
        let twist = (det_xi as f64).powf(-k_f);
        let weight = (det_xi as f64).powf(n as f64 + 1.0 - s);
        value += w * hermitian_inner(&f.rep, &moved, &pvec0) * twist * weight;
    }
    Ok(DTauValue {
        value,
        cosets: used,
        bad_primes_normalized: false,
    })
}

/// Searches a candidate list for a diagonal integral τ whose family
/// coefficient pairs nontrivially against `P(√τ⁻¹)`.
pub fn tau_selection(
    f: &CoefficientFamily,
    theta: &ThetaSpec,
    candidates: &[SymPosDef],
) -> Result<Option<SymPosDef>> {
    for tau in candidates {
        if tau.n() != f.rep.n() || !tau.is_integral() {
            continue;
        }
        let Ok(sqrt_inv) = diagonal_sqrt_inv(tau) else {
            continue;
        };
        let n = tau.n();
        let arg: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { c64(sqrt_inv[i]) } else { czero() })
                    .collect()
            })
            .collect();
        let pvec: Vec<Complex64> = theta
            .p
            .components
            .iter()
            .map(|c| c.eval_complex(&arg))
            .collect();
        let cf = f.value(tau)?;
        if hermitian_inner(&f.rep, &cf, &pvec).norm() > 1e-9 {
            return Ok(Some(tau.clone()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::enumerate_characters;
    use crate::exactmath::{rat, rint};
    use crate::pluriharm::{sym_vector_polynomial, MatrixPolynomial, VectorPolynomial};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn odd_char(f: u64) -> DirichletCharacter {
        enumerate_characters(f).into_iter().find(|c| c.is_odd()).unwrap()
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    fn mv(m: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
        m.iter()
            .map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    fn scalar_theta_n1(tau_val: i64, chi: DirichletCharacter) -> ThetaSpec {
        ThetaSpec {
            tau: SymPosDef::from_i64_rows(&[vec![tau_val]]).unwrap(),
            q: RationalMatrix::identity(1),
            chi,
            p: VectorPolynomial::new(vec![MatrixPolynomial::variable(1, 0, 0)]).unwrap(),
            rho: GLWeight::new(vec![1]).unwrap(),
        }
    }

    fn sym2_theta_n2(chi: DirichletCharacter) -> ThetaSpec {
        ThetaSpec {
            tau: SymPosDef::from_i64_rows(&[vec![1, 0], vec![0, 1]]).unwrap(),
            q: RationalMatrix::identity(2),
            chi,
            p: sym_vector_polynomial(2),
            rho: GLWeight::new(vec![2, 0]).unwrap(),
        }
    }

    fn random_complex_2x2(rng: &mut ChaCha8Rng) -> Vec<Vec<Complex64>> {
        (0..2)
            .map(|_| {
                (0..2)
                    .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                    .collect()
            })
            .collect()
    }

    fn random_unimodular(rng: &mut ChaCha8Rng) -> RationalMatrix {
        let shear = RationalMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let lower = RationalMatrix::from_i64_rows(&[vec![1, 0], vec![1, 1]]).unwrap();
        let rot = RationalMatrix::from_i64_rows(&[vec![0, 1], vec![-1, 0]]).unwrap();
        let mut u = RationalMatrix::identity(2);
        for _ in 0..4 {
            let pick = rng.gen_range(0..3);
            let g = match pick {
                0 => &shear,
                1 => &lower,
                _ => &rot,
            };
            u = u.mul(g);
        }
        u
    }

    #[test]
    fn complex_action_mirrors_exact_action() {
        let rep = Rep::sym(3, 1);
        let srep = SymRep::new(3, 1);
        let a = RationalMatrix::from_rows(vec![
            vec![rat(2, 3), rint(1)],
            vec![rint(-1), rat(1, 2)],
        ])
        .unwrap();
        let exact = srep.apply(&a).unwrap();
        let num = rep.apply_complex(&mat_to_complex(&a)).unwrap();
        for t in 0..4 {
            for s in 0..4 {
                let e = rat_to_f64(exact.get(t, s));
                assert!((num[t][s] - c64(e)).norm() < 1e-12, "entry ({t},{s})");
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..5 {
            let x = random_complex_2x2(&mut rng);
            let y = random_complex_2x2(&mut rng);
            let xy = mat_mul(&x, &y);
            let lhs = rep.apply_complex(&xy).unwrap();
            let rhs = mat_mul(
                &rep.apply_complex(&x).unwrap(),
                &rep.apply_complex(&y).unwrap(),
            );
            for t in 0..4 {
                for s in 0..4 {
                    assert!(rel(lhs[t][s], rhs[t][s]) < 1e-10 || (lhs[t][s] - rhs[t][s]).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn hermitian_form_is_rho_compatible() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for j in 1..=3u32 {
            let rep = Rep::sym(j, 0);
            let dim = rep.dim();
            for _ in 0..5 {
                let m = random_complex_2x2(&mut rng);
                let v: Vec<Complex64> = (0..dim)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                let w: Vec<Complex64> = (0..dim)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                // ᵀM̄ of m
                let adj: Vec<Vec<Complex64>> = (0..2)
                    .map(|i| (0..2).map(|l| m[l][i].conj()).collect())
                    .collect();
                let lhs = hermitian_inner(&rep, &mv(&rep.apply_complex(&m).unwrap(), &v), &w);
                let rhs = hermitian_inner(&rep, &v, &mv(&rep.apply_complex(&adj).unwrap(), &w));
                assert!(rel(lhs, rhs) < 1e-10, "j = {j}");
            }
        }
    }

    #[test]
    fn h_operator_scalar_closed_form() {
        let rep = Rep::scalar(0);
        let r1 = SymPosDef::from_i64_rows(&[vec![1]]).unwrap();
        let op = h_operator(&rep, HalfInt::from_int(2), c64(0.0), &r1).unwrap();
        let expect = 1.0 / (16.0 * std::f64::consts::PI * std::f64::consts::PI);
        assert!(rel(op.matrix[0][0], c64(expect)) < 1e-8);
        assert!(op.asymmetry < 1e-12);

        // nontrivial R and nontrivial scalar power against the Gamma
        // integral ∫ y^{m}·y^{s+h}·e^{−4π·3·y}·d×y = (12π)^{−(s+h+m)}Γ(s+h+m)
        let rep2 = Rep::scalar(2);
        let r3 = SymPosDef::from_i64_rows(&[vec![3]]).unwrap();
        let op2 = h_operator(&rep2, HalfInt::from_int(2), c64(0.0), &r3).unwrap();
        let a = 4.0;
        let oracle = (12.0 * std::f64::consts::PI).powf(-a) * complex_gamma(c64(a)).unwrap();
        assert!(rel(op2.matrix[0][0], oracle) < 1e-8);
    }

    #[test]
    fn h_operator_highest_weight_eigenvalue() {
        let rep = Rep::sym(2, 0);
        let h = HalfInt::from_twice(7);
        let s = c64(0.0);
        let id = SymPosDef::from_i64_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        let op = h_operator(&rep, h, s, &id).unwrap();
        let p1 = vec![c64(1.0), Complex64::new(0.0, 1.0), c64(-1.0)];
        let image = op.apply(&p1);
        let a = 3.5;
        let lam = c64(FOUR_PI.powf(-(2.0 * a + 2.0)))
            * pluriharmonic_gamma(&GLWeight::new(vec![2, 0]).unwrap(), h, s).unwrap();
        let expect: Vec<Complex64> = p1.iter().map(|v| v * lam).collect();
        let err = image
            .iter()
            .zip(&expect)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / vec_norm(&expect);
        assert!(err < 1e-6, "relative eigenvalue error {err:.3e}");
    }

    #[test]
    fn pluriharmonic_gamma_vs_interlaced_product() {
        use crate::analytic::gamma_rho;
        let h = HalfInt::from_twice(7);
        let s = Complex64::new(0.4, -0.3);
        for m in 0..4 {
            let w = GLWeight::new(vec![m]).unwrap();
            let lhs = pluriharmonic_gamma(&w, h, s).unwrap();
            let rhs = gamma_rho(&w, h, s).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "degree 1, m = {m}");
        }
        for k in 0..3 {
            for j in 0..2i64 {
                let w = GLWeight::new(vec![k + j, k]).unwrap();
                let lhs = pluriharmonic_gamma(&w, h, s).unwrap();
                let rhs = gamma_rho(&w, h, s).unwrap();
                assert!(rel(lhs, rhs) < 1e-12, "degree 2, j = {j}, k = {k}");
            }
        }
        // from Sym² on the two scalars differ: the ratio at weight (2,0)
        // is (a + 1)/(a + 1/2) with a = s + h
        let w = GLWeight::new(vec![2, 0]).unwrap();
        let lhs = pluriharmonic_gamma(&w, h, s).unwrap();
        let rhs = gamma_rho(&w, h, s).unwrap();
        let a = s + c64(h.as_f64());
        let ratio = (a + c64(1.0)) / (a + c64(0.5));
        assert!(rel(rhs / lhs, ratio) < 1e-12);
    }

    #[test]
    fn h_operator_scaling_law() {
        let rep = Rep::sym(2, 0);
        let h = HalfInt::from_twice(7);
        let s = c64(0.0);
        let id = SymPosDef::from_i64_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        let tri = SymPosDef::from_i64_rows(&[vec![3, 0], vec![0, 3]]).unwrap();
        let base = h_operator(&rep, h, s, &id).unwrap();
        let scaled = h_operator(&rep, h, s, &tri).unwrap();
        // ρ(3^{−1/2}·1) = 3^{−1} on Sym², det(3·1)^{−(s+h)} = 3^{−2(s+h)}
        let factor = 3.0f64.powf(-(2.0 * 3.5 + 2.0));
        for t in 0..3 {
            for u in 0..3 {
                let want = base.matrix[t][u] * factor;
                assert!(
                    (scaled.matrix[t][u] - want).norm() <= 1e-9 * want.norm().max(1e-12),
                    "entry ({t},{u})"
                );
            }
        }
    }

    #[test]
    fn conjugation_law_for_random_unimodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let h = HalfInt::from_twice(7);
        let s = c64(0.0);
        let r0 = SymPosDef::from_i64_rows(&[vec![2, 1], vec![1, 3]]).unwrap();
        for j in 1..=3u32 {
            let rep = Rep::sym(j, 0);
            let base = h_operator(&rep, h, s, &r0).unwrap();
            for trial in 0..20 {
                let u = random_unimodular(&mut rng);
                let moved = SymPosDef::new(u.transpose().mul(r0.matrix()).mul(&u)).unwrap();
                let lhs = h_operator(&rep, h, s, &moved).unwrap();
                let u_inv = u.inverse().unwrap();
                let rho_left = rep.apply_complex(&mat_to_complex(&u_inv)).unwrap();
                let rho_right = rep
                    .apply_complex(&mat_to_complex(&u_inv.transpose()))
                    .unwrap();
                let rhs = mat_mul(&mat_mul(&rho_left, &base.matrix), &rho_right);
                let dim = rep.dim();
                let mut num = 0.0;
                let mut den = 0.0;
                for t in 0..dim {
                    for w in 0..dim {
                        num += (lhs.matrix[t][w] - rhs[t][w]).norm_sqr();
                        den += rhs[t][w].norm_sqr();
                    }
                }
                assert!(
                    num.sqrt() / den.sqrt() < 1e-8,
                    "j = {j}, trial {trial}: relative error {:.3e}",
                    num.sqrt() / den.sqrt()
                );
            }
        }
    }

    #[test]
    fn operator_is_hermitian_and_positive() {
        let rep = Rep::sym(2, 0);
        let r0 = SymPosDef::from_i64_rows(&[vec![2, 1], vec![1, 3]]).unwrap();
        let op = h_operator(&rep, HalfInt::from_twice(7), c64(0.0), &r0).unwrap();
        assert!(op.asymmetry < 1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..5 {
            let v: Vec<Complex64> = (0..3)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let q = hermitian_inner(&rep, &op.apply(&v), &v);
            assert!(q.im.abs() < 1e-12 * q.re.abs().max(1e-300));
            assert!(q.re > 0.0);
        }
    }

    #[test]
    fn maass_moment_matches_closed_form() {
        let c1 = maass_integral_check(&[0], 2.0, 1).unwrap();
        assert!(c1.relative_error < 1e-8, "n=1: {:.3e}", c1.relative_error);
        let c2 = maass_integral_check(&[1, 0], 3.0, 2).unwrap();
        assert!(c2.relative_error < 1e-6, "n=2 λ=(1,0): {:.3e}", c2.relative_error);
        let c3 = maass_integral_check(&[2, 0], 3.5, 2).unwrap();
        assert!(c3.relative_error < 1e-6, "n=2 λ=(2,0): {:.3e}", c3.relative_error);
    }

    #[test]
    fn maass_guards() {
        assert!(matches!(
            maass_integral_check(&[0, 0], 0.5, 2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            maass_integral_check(&[0, 1], 3.0, 2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            maass_integral_check(&[0], 2.0, 3),
            Err(Error::UnsupportedDegree(3))
        ));
    }

    #[test]
    fn scalar_family_has_trivial_cocycle() {
        let base: Vec<(SymPosDef, Vec<Complex64>)> = (1..=5)
            .map(|m| {
                (
                    SymPosDef::from_i64_rows(&[vec![m]]).unwrap(),
                    vec![Complex64::new(m as f64, 0.3 * m as f64)],
                )
            })
            .collect();
        let fam = CoefficientFamily::new(
            Rep::scalar(0),
            HalfInt::from_int(4),
            DirichletCharacter::trivial(1),
            base,
        )
        .unwrap();
        let report = validate_family(&fam).unwrap();
        assert!(report.coherent, "violation: {:?}", report.violation);
    }

    #[test]
    fn sym2_family_coherent_until_corrupted() {
        let mut fam = CoefficientFamily::synthetic(
            Rep::sym(2, 0),
            HalfInt::from_int(6),
            DirichletCharacter::trivial(1),
            8,
            7,
        )
        .unwrap();
        let report = validate_family(&fam).unwrap();
        assert!(report.coherent, "violation: {:?}", report.violation);
        assert!(report.checks > 0);

        let idx = fam
            .base
            .iter()
            .position(|(r, _)| r.matrix() == &RationalMatrix::identity(2))
            .unwrap();
        fam.base[idx].1[1] += c64(0.7);
        let corrupted = validate_family(&fam).unwrap();
        assert!(!corrupted.coherent);
        assert!(corrupted.violation.is_some());
    }

    #[test]
    fn rankin_one_term_positivity_and_oracle() {
        let r2 = SymPosDef::from_i64_rows(&[vec![2]]).unwrap();
        let fam = CoefficientFamily::new(
            Rep::scalar(1),
            HalfInt::from_twice(7),
            DirichletCharacter::trivial(1),
            vec![(r2, vec![c64(0.8)])],
        )
        .unwrap();
        let out = rankin_series(c64(1.0), &fam, &Partner::Family(&fam), 4).unwrap();
        assert_eq!(out.h, HalfInt::from_twice(7));
        assert_eq!(out.nonzero_terms, 1);
        assert!(out.value.re > 0.0 && out.value.im.abs() < 1e-12);
        // ν = 1/2 and H_{(2)} = (8π)^{−(a+1)}Γ(a+1) for ρ(y) = y, a = 9/2
        let a = 1.0 + 3.5;
        let oracle = 0.5
            * 0.64
            * (8.0 * std::f64::consts::PI).powf(-(a + 1.0))
            * complex_gamma(c64(a + 1.0)).unwrap();
        assert!(rel(out.value, oracle) < 1e-8);
    }

    #[test]
    fn rankin_summand_is_class_invariant() {
        let fam = CoefficientFamily::synthetic(
            Rep::sym(2, 0),
            HalfInt::from_int(6),
            DirichletCharacter::trivial(1),
            12,
            3,
        )
        .unwrap();
        let h = pair_h(fam.k, fam.k).unwrap();
        let s = c64(0.0);
        let r0 = SymPosDef::from_i64_rows(&[vec![2, 1], vec![1, 3]]).unwrap();
        let u = RationalMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]])
            .unwrap()
            .mul(&RationalMatrix::from_i64_rows(&[vec![1, 0], vec![1, 1]]).unwrap());
        let r1 = SymPosDef::new(u.transpose().mul(r0.matrix()).mul(&u)).unwrap();

        let term = |r: &SymPosDef| -> Complex64 {
            let c = fam.value(r).unwrap();
            let op = h_operator(&fam.rep, h, s, r).unwrap();
            let nu = 1.0 / automorph_group(r).unwrap().len() as f64;
            hermitian_inner(&fam.rep, &op.apply(&c), &c) * nu
        };
        let t0 = term(&r0);
        let t1 = term(&r1);
        assert!(rel(t0, t1) < 1e-8, "t0 = {t0}, t1 = {t1}");
    }

    #[test]
    fn rankin_partial_sums_monotone_and_cauchy_schwarz() {
        let f = CoefficientFamily::synthetic(
            Rep::scalar(1),
            HalfInt::from_twice(7),
            DirichletCharacter::trivial(1),
            8,
            1,
        )
        .unwrap();
        let g = CoefficientFamily::synthetic(
            Rep::scalar(1),
            HalfInt::from_twice(7),
            DirichletCharacter::trivial(1),
            8,
            2,
        )
        .unwrap();
        let s = c64(1.0);
        let mut prev = 0.0;
        for bound in [2, 4, 6, 8] {
            let v = rankin_series(s, &f, &Partner::Family(&f), bound).unwrap().value;
            assert!(v.re >= prev - 1e-15, "bound {bound}");
            prev = v.re;
        }
        let dff = rankin_series(s, &f, &Partner::Family(&f), 8).unwrap().value.re;
        let dgg = rankin_series(s, &g, &Partner::Family(&g), 8).unwrap().value.re;
        let dfg = rankin_series(s, &f, &Partner::Family(&g), 8).unwrap().value;
        assert!(dfg.norm() <= (dff * dgg).sqrt() + 1e-12);
    }

    #[test]
    fn unfolding_matches_exactly_for_degree_one() {
        let f = CoefficientFamily::synthetic(
            Rep::scalar(1),
            HalfInt::from_twice(7),
            DirichletCharacter::trivial(1),
            9,
            5,
        )
        .unwrap();
        let theta = scalar_theta_n1(1, odd_char(3));
        let report = unfolding_check(&f, &theta, 1.2, 9).unwrap();
        assert_eq!(report.h, HalfInt::from_int(2));
        assert_eq!(report.cosets, 3);
        assert!(
            report.relative_discrepancy < 1e-8,
            "lhs = {}, rhs = {}, rel = {:.3e}",
            report.lhs,
            report.rhs,
            report.relative_discrepancy
        );
    }

    #[test]
    fn unfolding_matches_for_degree_two_sym2() {
        let f = CoefficientFamily::synthetic(
            Rep::sym(2, 0),
            HalfInt::from_int(6),
            DirichletCharacter::trivial(1),
            10,
            11,
        )
        .unwrap();
        let theta = sym2_theta_n2(odd_char(3));
        let report = unfolding_check(&f, &theta, 2.0, 10).unwrap();
        assert!(
            report.relative_discrepancy < 1e-6,
            "lhs = {}, rhs = {}, rel = {:.3e}",
            report.lhs,
            report.rhs,
            report.relative_discrepancy
        );
    }

    #[test]
    fn unfolding_empty_support_is_zero() {
        let f = CoefficientFamily::new(
            Rep::scalar(1),
            HalfInt::from_twice(7),
            DirichletCharacter::trivial(1),
            Vec::new(),
        )
        .unwrap();
        let theta = scalar_theta_n1(1, odd_char(3));
        let report = unfolding_check(&f, &theta, 1.2, 9).unwrap();
        assert_eq!(report.lhs, czero());
        assert_eq!(report.rhs, czero());
        assert_eq!(report.relative_discrepancy, 0.0);
    }

    #[test]
    fn coset_series_matches_scaled_rankin_product() {
        let f = CoefficientFamily::synthetic(
            Rep::scalar(1),
            HalfInt::from_twice(7),
            DirichletCharacter::trivial(1),
            9,
            5,
        )
        .unwrap();
        let theta = scalar_theta_n1(1, odd_char(3));
        // s' = (2s − 3n − 2)/4 with s = 5.5 gives s' = 3/2; h = 2
        let s_prime = 1.5;
        let s = 5.5;
        let dtau = d_tau_series(&f, &theta, s, 3).unwrap();
        assert!(!dtau.bad_primes_normalized);
        let gamma = pluriharmonic_gamma(
            &GLWeight::new(vec![1]).unwrap(),
            HalfInt::from_int(2),
            c64(s_prime),
        )
        .unwrap();
        let lhs = gamma * dtau.value;
        let d = rankin_series(c64(s_prime), &f, &Partner::Theta(&theta), 9)
            .unwrap()
            .value;
        let a = s_prime + 2.0;
        let rhs = d * FOUR_PI.powf(1.0) * FOUR_PI.powf(a);
        assert!(rel(lhs, rhs) < 1e-8, "lhs = {lhs}, rhs = {rhs}");
    }

    #[test]
    fn tau_selection_finds_a_pairing() {
        let f = CoefficientFamily::synthetic(
            Rep::sym(2, 0),
            HalfInt::from_int(6),
            DirichletCharacter::trivial(1),
            10,
            11,
        )
        .unwrap();
        let theta = sym2_theta_n2(odd_char(3));
        let candidates = vec![
            SymPosDef::from_i64_rows(&[vec![1, 0], vec![0, 1]]).unwrap(),
            SymPosDef::from_i64_rows(&[vec![1, 0], vec![0, 2]]).unwrap(),
        ];
        let found = tau_selection(&f, &theta, &candidates).unwrap();
        assert!(found.is_some());

        let empty = CoefficientFamily::new(
            Rep::sym(2, 0),
            HalfInt::from_int(6),
            DirichletCharacter::trivial(1),
            Vec::new(),
        )
        .unwrap();
        assert!(tau_selection(&empty, &theta, &candidates).unwrap().is_none());
    }

    #[test]
    fn guards() {
        let rep = Rep::scalar(0);
        let r1 = SymPosDef::from_i64_rows(&[vec![1]]).unwrap();
        assert!(matches!(
            h_operator(&rep, HalfInt::from_int(0), c64(0.5), &r1),
            Err(Error::Domain(_))
        ));

        // k + ℓ with odd doubled sum leaves no half-integral h
        let f = CoefficientFamily::new(
            Rep::scalar(1),
            HalfInt::from_int(6),
            DirichletCharacter::trivial(1),
            Vec::new(),
        )
        .unwrap();
        let theta = scalar_theta_n1(1, odd_char(3));
        assert!(matches!(
            rankin_series(c64(2.0), &f, &Partner::Theta(&theta), 4),
            Err(Error::Domain(_))
        ));

        let fam2 = CoefficientFamily::synthetic(
            Rep::sym(2, 0),
            HalfInt::from_int(6),
            DirichletCharacter::trivial(1),
            4,
            1,
        )
        .unwrap();
        let mut skew = sym2_theta_n2(odd_char(3));
        skew.tau = SymPosDef::from_i64_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        assert!(matches!(
            unfolding_check(&fam2, &skew, 2.0, 4),
            Err(Error::Domain(_))
        ));
    }
}
