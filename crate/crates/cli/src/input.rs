//! Parsers for command-line matrix/weight/character syntax and the JSON
//! file formats for theta specs and coefficient families.

use crate::CliError;
use num_complex::Complex64;
use serde::Deserialize;
use siegel_core::analytic::HalfInt;
use siegel_core::chars::{enumerate_characters, DirichletCharacter};
use siegel_core::exactmath::{rat_from_str, RationalMatrix, SymPosDef};
use siegel_core::pluriharm::{
    polynomial_from_json, sym_vector_polynomial, MatrixPolynomial, PolyTermJson, VectorPolynomial,
};
use siegel_core::rankin::{CoefficientFamily, Rep};
use siegel_core::theta::ThetaSpec;
use siegel_core::weights::{EvenTag, GLWeight, OrthWeight};

pub type Result<T> = std::result::Result<T, CliError>;

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

/// `"1,0;0,2"` → integer rows.
pub fn parse_int_matrix(s: &str) -> Result<Vec<Vec<i64>>> {
    let rows: Vec<Vec<i64>> = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|v| v.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<i64>, _>>()
        })
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| schema(format!("integer matrix '{s}': {e}")))?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(schema(format!("ragged matrix '{s}'")));
    }
    Ok(rows)
}

/// `"1/2,0;0,1/2"` → exact rational rows.
pub fn parse_rat_matrix(s: &str) -> Result<RationalMatrix> {
    let rows = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|v| rat_from_str(v.trim()))
                .collect::<siegel_core::Result<Vec<_>>>()
        })
        .collect::<siegel_core::Result<Vec<_>>>()
        .map_err(|e| schema(format!("rational matrix '{s}': {e}")))?;
    RationalMatrix::from_rows(rows).map_err(|e| schema(format!("matrix '{s}': {e}")))
}

pub fn parse_sym_pos_def(s: &str) -> Result<SymPosDef> {
    SymPosDef::new(parse_rat_matrix(s)?).map_err(CliError::Core)
}

/// `"7/2"`, `"4"`, `"-3/2"` → exact half-integer.
pub fn parse_half_int(s: &str) -> Result<HalfInt> {
    let bad = || schema(format!("half-integer '{s}' (expected e.g. 4 or 7/2)"));
    match s.split_once('/') {
        None => Ok(HalfInt::from_int(s.trim().parse().map_err(|_| bad())?)),
        Some((num, den)) => {
            if den.trim() != "2" {
                return Err(bad());
            }
            Ok(HalfInt::from_twice(num.trim().parse().map_err(|_| bad())?))
        }
    }
}

/// `"0.5,0.3"` or `"0.5"` → complex number.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || schema(format!("complex number '{s}' (expected re or re,im)"));
    match s.split_once(',') {
        None => Ok(Complex64::new(s.trim().parse().map_err(|_| bad())?, 0.0)),
        Some((re, im)) => Ok(Complex64::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
    }
}

/// `"2,0"` → dominant GL weight.
pub fn parse_gl_weight(s: &str) -> Result<GLWeight> {
    let entries: Vec<i64> = s
        .split(',')
        .map(|v| v.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| schema(format!("weight '{s}': {e}")))?;
    GLWeight::new(entries).map_err(CliError::Core)
}

/// `"2,1;+1"` (odd n, sign ε) or `"2,0;plus"` / `"2,0;minus"` (even n).
pub fn parse_orth_weight(n: usize, s: &str) -> Result<OrthWeight> {
    let (m_part, tag_part) = s
        .split_once(';')
        .ok_or_else(|| schema(format!("orthogonal weight '{s}' (expected m1,..;tag)")))?;
    let m: Vec<i64> = if m_part.trim().is_empty() {
        Vec::new()
    } else {
        m_part
            .split(',')
            .map(|v| v.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| schema(format!("weight entries '{m_part}': {e}")))?
    };
    let tag = tag_part.trim();
    if n % 2 == 1 {
        let eps = match tag {
            "+1" | "+" => 1,
            "-1" | "-" => -1,
            _ => return Err(schema(format!("odd-degree tag '{tag}' (expected +1 or -1)"))),
        };
        OrthWeight::odd(n, m, eps).map_err(CliError::Core)
    } else {
        let t = match tag {
            "plus" | "+1" | "+" => EvenTag::Plus,
            "minus" | "-1" | "-" => EvenTag::Minus,
            _ => return Err(schema(format!("even-degree tag '{tag}' (expected plus or minus)"))),
        };
        OrthWeight::even(n, m, t).map_err(CliError::Core)
    }
}

/// Character selector: generator exponents take precedence over the
/// index into the lexicographic enumeration.
#[derive(Clone, Debug, Deserialize)]
pub struct CharSelector {
    pub modulus: u64,
    #[serde(default)]
    pub exponents: Option<Vec<u64>>,
    #[serde(default)]
    pub index: Option<usize>,
}

pub fn resolve_character(sel: &CharSelector) -> Result<DirichletCharacter> {
    match (&sel.exponents, sel.index) {
        (Some(e), _) => DirichletCharacter::new(sel.modulus, e.clone()).map_err(CliError::Core),
        (None, Some(i)) => {
            let all = enumerate_characters(sel.modulus);
            all.get(i)
                .cloned()
                .ok_or_else(|| schema(format!("character index {i} out of range (φ = {})", all.len())))
        }
        (None, None) => Ok(DirichletCharacter::trivial(sel.modulus)),
    }
}

pub fn character_from_flags(modulus: u64, index: Option<usize>, exponents: Option<&str>) -> Result<DirichletCharacter> {
    let exps = match exponents {
        None => None,
        Some(s) if s.trim().is_empty() => Some(Vec::new()),
        Some(s) => Some(
            s.split(',')
                .map(|v| v.trim().parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| schema(format!("character exponents '{s}': {e}")))?,
        ),
    };
    resolve_character(&CharSelector {
        modulus,
        exponents: exps,
        index,
    })
}

/// JSON description of the pluriharmonic coefficient polynomial.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PolySpecJson {
    /// `P = 1`, weight `(0,…,0)`
    Constant,
    /// `P = det`, weight `(1,…,1)`
    Det,
    /// the `Sym^j` monomial vector on the first row, degree 2
    Sym { j: u32 },
    /// explicit components with their highest weight
    Components {
        rho: Vec<i64>,
        components: Vec<Vec<PolyTermJson>>,
    },
}

/// On-disk theta spec: exact rational matrices as string entries.
#[derive(Deserialize)]
pub struct ThetaSpecJson {
    pub tau: Vec<Vec<String>>,
    pub q: Vec<Vec<String>>,
    pub chi: CharSelector,
    pub p: PolySpecJson,
}

fn rat_rows(rows: &[Vec<String>]) -> Result<RationalMatrix> {
    let parsed = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| rat_from_str(v))
                .collect::<siegel_core::Result<Vec<_>>>()
        })
        .collect::<siegel_core::Result<Vec<_>>>()
        .map_err(CliError::Core)?;
    RationalMatrix::from_rows(parsed).map_err(CliError::Core)
}

pub fn theta_spec_from_json(j: &ThetaSpecJson) -> Result<ThetaSpec> {
    let tau = SymPosDef::new(rat_rows(&j.tau)?).map_err(CliError::Core)?;
    let n = tau.n();
    let (p, rho) = match &j.p {
        PolySpecJson::Constant => (
            VectorPolynomial::new(vec![MatrixPolynomial::constant(
                n,
                siegel_core::exactmath::GaussRat::one(),
            )])
            .map_err(CliError::Core)?,
            GLWeight::new(vec![0; n]).map_err(CliError::Core)?,
        ),
        PolySpecJson::Det => (
            VectorPolynomial::new(vec![MatrixPolynomial::det_poly(n)]).map_err(CliError::Core)?,
            GLWeight::new(vec![1; n]).map_err(CliError::Core)?,
        ),
        PolySpecJson::Sym { j: jj } => {
            if n != 2 {
                return Err(schema("sym polynomial spec requires degree 2"));
            }
            (
                sym_vector_polynomial(*jj),
                GLWeight::new(vec![*jj as i64, 0]).map_err(CliError::Core)?,
            )
        }
        PolySpecJson::Components { rho, components } => {
            let comps = components
                .iter()
                .map(|terms| polynomial_from_json(n, terms))
                .collect::<siegel_core::Result<Vec<_>>>()
                .map_err(CliError::Core)?;
            (
                VectorPolynomial::new(comps).map_err(CliError::Core)?,
                GLWeight::new(rho.clone()).map_err(CliError::Core)?,
            )
        }
    };
    let spec = ThetaSpec {
        tau,
        q: rat_rows(&j.q)?,
        chi: resolve_character(&j.chi)?,
        p,
        rho,
    };
    spec.validate().map_err(CliError::Core)?;
    Ok(spec)
}

pub fn load_theta_spec(path: &str) -> Result<(ThetaSpec, serde_json::Value)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| schema(format!("cannot read spec file {path}: {e}")))?;
    let echo: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| schema(format!("spec file {path}: {e}")))?;
    let parsed: ThetaSpecJson =
        serde_json::from_str(&text).map_err(|e| schema(format!("spec file {path}: {e}")))?;
    Ok((theta_spec_from_json(&parsed)?, echo))
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RepJson {
    Scalar { m: i64 },
    Sym { j: u32, k: i64 },
}

#[derive(Deserialize)]
pub struct BaseEntryJson {
    pub r: Vec<Vec<i64>>,
    /// one `[re, im]` pair per coordinate of V
    pub value: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
pub struct SyntheticJson {
    pub det_bound: i64,
    pub seed: u64,
}

/// On-disk coefficient family: either explicit reduced base values or a
/// seeded synthetic family.
#[derive(Deserialize)]
pub struct FamilyJson {
    pub rep: RepJson,
    pub k: String,
    pub psi: CharSelector,
    #[serde(default)]
    pub base: Option<Vec<BaseEntryJson>>,
    #[serde(default)]
    pub synthetic: Option<SyntheticJson>,
}

pub fn family_from_json(j: &FamilyJson, seed_override: Option<u64>) -> Result<(CoefficientFamily, Option<u64>)> {
    let rep = match j.rep {
        RepJson::Scalar { m } => Rep::scalar(m),
        RepJson::Sym { j: jj, k } => Rep::sym(jj, k),
    };
    let k = parse_half_int(&j.k)?;
    let psi = resolve_character(&j.psi)?;
    match (&j.base, &j.synthetic) {
        (Some(base), None) => {
            let entries = base
                .iter()
                .map(|e| {
                    let m = RationalMatrix::from_i64_rows(&e.r)?;
                    let r = SymPosDef::new(m)?;
                    let v = e.value.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                    Ok((r, v))
                })
                .collect::<siegel_core::Result<Vec<_>>>()
                .map_err(CliError::Core)?;
            Ok((
                CoefficientFamily::new(rep, k, psi, entries).map_err(CliError::Core)?,
                None,
            ))
        }
        (None, Some(syn)) => {
            let seed = seed_override.unwrap_or(syn.seed);
            Ok((
                CoefficientFamily::synthetic(rep, k, psi, syn.det_bound, seed)
                    .map_err(CliError::Core)?,
                Some(seed),
            ))
        }
        _ => Err(schema("family file needs exactly one of 'base' or 'synthetic'")),
    }
}

pub fn load_family(path: &str, seed_override: Option<u64>) -> Result<(CoefficientFamily, Option<u64>, serde_json::Value)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| schema(format!("cannot read family file {path}: {e}")))?;
    let echo: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| schema(format!("family file {path}: {e}")))?;
    let parsed: FamilyJson =
        serde_json::from_str(&text).map_err(|e| schema(format!("family file {path}: {e}")))?;
    let (fam, seed) = family_from_json(&parsed, seed_override)?;
    Ok((fam, seed, echo))
}
