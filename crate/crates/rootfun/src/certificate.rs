//! The JSON certificate emitted by `solve`: a lossless, byte-stable record of
//! the computed bases, the unit functional, and its decomposition, with
//! enough context (field, variables, system) to re-check the unit identity
//! without solving again.
//!
//! Values are strings (`p/q` over the rationals, least residues over a prime
//! field); monomials are keys like `x1^2*x2`. Functionals serialize as full
//! maps over the bounded basis in graded order; polynomials keep only their
//! nonzero coefficients.

use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::bezoutian::BezoutData;
use crate::field::{Field, PrimeField, Rationals};
use crate::functionals::{linear_combination, BoundedFunctional};
use crate::linalg::{member, row_reduce_vectors, KVector};
use crate::monomial::MonomialBasis;
use crate::parse::{self, FieldSpec, ParseError, SystemFile};
use crate::poly::{Poly, PolySystem};
use crate::print::{monomial_string, poly_string};
use crate::solver::{SolveResult, VerificationCheck, VerificationReport};

pub const CERTIFICATE_FORMAT: &str = "rootfun-certificate-v1";

/// Bases with more monomials than this are refused on reload; revalidation
/// is a desk-scale operation.
const REVALIDATION_DIMENSION_CAP: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitCoeffs {
    pub root: Vec<String>,
    pub slice: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationEntry {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    /// Monomial order contract for every map below.
    pub monomial_order: String,
    pub field: String,
    pub vars: Vec<String>,
    /// The system in canonical text form.
    pub system: Vec<String>,
    pub delta_f: u32,
    #[serde(rename = "D")]
    pub dimension: u64,
    pub ann_dim: usize,
    pub no_roots: bool,
    pub root_basis: Vec<IndexMap<String, String>>,
    pub ideal_slice: Vec<IndexMap<String, String>>,
    pub unit: IndexMap<String, String>,
    pub unit_coeffs: UnitCoeffs,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verification: Option<Vec<VerificationEntry>>,
}

#[derive(Clone, Debug)]
pub enum CertificateError {
    Json(String),
    Invalid(String),
}

impl fmt::Display for CertificateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateError::Json(m) => write!(f, "malformed certificate JSON: {m}"),
            CertificateError::Invalid(m) => write!(f, "invalid certificate: {m}"),
        }
    }
}

impl std::error::Error for CertificateError {}

fn functional_map<F: Field>(
    l: &BoundedFunctional<F>,
    basis: &MonomialBasis,
    vars: &[String],
) -> IndexMap<String, String> {
    let field = l.field();
    basis
        .monomials()
        .iter()
        .enumerate()
        .map(|(i, m)| (monomial_string(m, vars), field.format(l.values().entry(i))))
        .collect()
}

fn poly_map<F: Field>(p: &Poly<F>, vars: &[String]) -> IndexMap<String, String> {
    let field = p.field();
    p.terms()
        .map(|(m, c)| (monomial_string(m, vars), field.format(c)))
        .collect()
}

/// Assemble the certificate for a solve result.
pub fn build_certificate<F: Field>(
    field: &F,
    file: &SystemFile,
    system: &PolySystem<F>,
    result: &SolveResult<F>,
    verification: Option<&VerificationReport>,
) -> Certificate {
    let vars = &file.variables;
    let basis = result.unit.basis().as_ref();
    Certificate {
        format: CERTIFICATE_FORMAT.to_string(),
        monomial_order: "grlex".to_string(),
        field: field.describe(),
        vars: vars.clone(),
        system: system.polys().iter().map(|p| poly_string(p, vars)).collect(),
        delta_f: result.delta_f,
        dimension: result.dimension as u64,
        ann_dim: result.ann_dim,
        no_roots: result.diagnostics.no_roots,
        root_basis: result
            .root_basis
            .iter()
            .map(|l| functional_map(l, basis, vars))
            .collect(),
        ideal_slice: result
            .ideal_slice
            .iter()
            .map(|h| poly_map(h, vars))
            .collect(),
        unit: functional_map(&result.unit, basis, vars),
        unit_coeffs: UnitCoeffs {
            root: result
                .unit_decomposition
                .root_coeffs
                .iter()
                .map(|c| field.format(c))
                .collect(),
            slice: result
                .unit_decomposition
                .slice_coeffs
                .iter()
                .map(|c| field.format(c))
                .collect(),
        },
        verification: verification.map(|r| {
            r.checks
                .iter()
                .map(|c: &VerificationCheck| VerificationEntry {
                    name: c.name.clone(),
                    passed: c.passed,
                })
                .collect()
        }),
    }
}

/// Pretty JSON with a trailing newline; stable for byte comparison.
pub fn certificate_json(cert: &Certificate) -> String {
    let mut s = serde_json::to_string_pretty(cert).expect("certificate serializes");
    s.push('\n');
    s
}

pub fn parse_certificate(text: &str) -> Result<Certificate, CertificateError> {
    serde_json::from_str(text).map_err(|e| CertificateError::Json(e.to_string()))
}

/// Re-check a reloaded certificate without re-solving: rebuild the system,
/// decode the bases, and test the recorded identities.
pub fn revalidate(cert: &Certificate) -> Result<VerificationReport, CertificateError> {
    let spec = parse::field_spec_from_str(&cert.field)
        .map_err(|e| CertificateError::Invalid(format!("bad field: {e}")))?;
    match spec {
        FieldSpec::Rational => revalidate_over(&Rationals, cert),
        FieldSpec::Prime(p) => {
            let field = PrimeField::new(p)
                .map_err(|e| CertificateError::Invalid(e.to_string()))?;
            revalidate_over(&field, cert)
        }
    }
}

fn revalidate_over<F: Field>(
    field: &F,
    cert: &Certificate,
) -> Result<VerificationReport, CertificateError> {
    let vars = &cert.vars;
    if vars.is_empty() || cert.system.is_empty() {
        return Err(CertificateError::Invalid(
            "certificate lists no variables or polynomials".into(),
        ));
    }
    // rebuild the system from its canonical text
    let mut text = format!("field: {}\nvars: {}\n", cert.field, vars.join(" "));
    for p in &cert.system {
        if p.contains('\n') || p.contains('#') {
            return Err(CertificateError::Invalid(
                "polynomial text contains forbidden characters".into(),
            ));
        }
        text.push_str(&format!("poly: {p}\n"));
    }
    let source = parse::parse_source(&text)
        .map_err(|e: ParseError| CertificateError::Invalid(format!("bad system: {e}")))?;
    let system = source
        .build_system(field)
        .map_err(|e| CertificateError::Invalid(format!("bad system: {e}")))?;
    if system.delta_f() != cert.delta_f || system.dimension() != cert.dimension {
        return Err(CertificateError::Invalid(
            "recorded delta_f or D disagree with the system".into(),
        ));
    }
    if system.dimension() > REVALIDATION_DIMENSION_CAP {
        return Err(CertificateError::Invalid(
            "system is too large to revalidate".into(),
        ));
    }
    let basis = Arc::new(MonomialBasis::new(system.n(), system.delta_f()));
    let dim = basis.len();

    let decode_values = |map: &IndexMap<String, String>| -> Result<KVector<F>, CertificateError> {
        let mut entries = vec![field.zero(); dim];
        for (key, value) in map {
            let m = parse::parse_monomial_key(key, vars)
                .map_err(CertificateError::Invalid)?;
            let i = basis.index_of(&m).ok_or_else(|| {
                CertificateError::Invalid(format!("monomial `{key}` exceeds the degree bound"))
            })?;
            entries[i] = field.parse(value).ok_or_else(|| {
                CertificateError::Invalid(format!("value `{value}` is not valid over {}", field.describe()))
            })?;
        }
        Ok(KVector::new(field.clone(), entries))
    };
    let decode_scalars = |list: &[String]| -> Result<Vec<F::Elem>, CertificateError> {
        list.iter()
            .map(|s| {
                field.parse(s).ok_or_else(|| {
                    CertificateError::Invalid(format!("coefficient `{s}` is not valid"))
                })
            })
            .collect()
    };

    let root_basis: Vec<BoundedFunctional<F>> = cert
        .root_basis
        .iter()
        .map(|m| decode_values(m).map(|v| BoundedFunctional::new(basis.clone(), v)))
        .collect::<Result<_, _>>()?;
    let ideal_slice: Vec<Poly<F>> = cert
        .ideal_slice
        .iter()
        .map(|m| {
            decode_values(m)
                .map(|v| Poly::from_coefficient_vector(field.clone(), &basis, v.entries()))
        })
        .collect::<Result<_, _>>()?;
    let unit = BoundedFunctional::new(basis.clone(), decode_values(&cert.unit)?);
    let a = decode_scalars(&cert.unit_coeffs.root)?;
    let b = decode_scalars(&cert.unit_coeffs.slice)?;
    if a.len() != root_basis.len() || b.len() != ideal_slice.len() {
        return Err(CertificateError::Invalid(
            "coefficient counts disagree with the bases".into(),
        ));
    }

    let mut report = VerificationReport::default();
    let push = |report: &mut VerificationReport, name: &str, passed: bool| {
        report.checks.push(VerificationCheck {
            name: name.to_string(),
            passed,
        });
    };

    push(
        &mut report,
        "dimension_duality",
        root_basis.len() + ideal_slice.len() == dim,
    );

    // E' really is the recorded combination of the root basis
    let combo = linear_combination(field, &basis, &a, &root_basis);
    push(&mut report, "unit_matches_coefficients", combo == unit);

    // the decomposition reproduces 1 exactly
    let bezout = BezoutData::new(&system);
    let det = bezout.det();
    let mut lhs = Poly::zero(field.clone(), system.n());
    for (c, l) in a.iter().zip(&root_basis) {
        lhs = lhs.add(&l.apply_y(det).scale(c));
    }
    for (c, h) in b.iter().zip(&ideal_slice) {
        lhs = lhs.add(&h.scale(c));
    }
    push(
        &mut report,
        "decomposition_reproduces_one",
        lhs == Poly::one(field.clone(), system.n()),
    );

    // the unit identity: E'(y) . det B - 1 lies in the recorded slice span
    let cert_poly = unit
        .apply_y(det)
        .sub(&Poly::one(field.clone(), system.n()));
    let slice_rows: Vec<KVector<F>> = ideal_slice
        .iter()
        .map(|h| KVector::new(field.clone(), h.coefficient_vector(&basis).unwrap()))
        .collect();
    let slice_span = row_reduce_vectors(field, dim, &slice_rows);
    let ok = match cert_poly.coefficient_vector(&basis) {
        Some(coords) => member(&slice_span, &KVector::new(field.clone(), coords)),
        None => false,
    };
    push(&mut report, "unit_certificate", ok);

    Ok(report)
}
