//! The eight-step solve pipeline: truncated ideal, annihilator functionals,
//! extension operators, functional powers and products, the root-functional
//! basis, the ideal slice by duality, and the unit root functional by an
//! affine decomposition of 1.
//!
//! Output bases are reduced-echelon-normalized, so a result is a canonical
//! function of the input system; the literal powering route and the
//! early-stopping route produce identical results.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use crate::field::Field;
use crate::functionals::{
    extend, linear_combination, BoundedFunctional, ExtensionContext,
};
use crate::linalg::{
    annihilator_in_dual, member, row_reduce, row_reduce_vectors, solve_affine, EchelonBasis,
    KMatrix, KVector,
};
use crate::monomial::MonomialBasis;
use crate::poly::{Poly, PolySystem, SystemError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveError {
    Invalid(SystemError),
    /// The decomposition of 1 failed (or no root functional survives while 1
    /// is not certified inside the bounded ideal slice): the finite-root
    /// hypothesis does not hold as far as this degree bound can see.
    NotZeroDimensional { detail: String },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Invalid(e) => write!(f, "invalid system: {e}"),
            SolveError::NotZeroDimensional { detail } => {
                write!(f, "system is not zero-dimensional: {detail}")
            }
        }
    }
}

impl std::error::Error for SolveError {}

impl From<SystemError> for SolveError {
    fn from(e: SystemError) -> Self {
        SolveError::Invalid(e)
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Stop the power iteration as soon as consecutive spans agree instead of
    /// always forming the full d-th powers. Both routes yield the same basis.
    pub fast_path: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { fast_path: true }
    }
}

/// The coefficients of the decomposition
/// `1 = sum a_p * (l_p(y) . det B) + sum b_q * h_q`.
#[derive(Clone, Debug)]
pub struct UnitDecomposition<F: Field> {
    pub root_coeffs: Vec<F::Elem>,
    pub slice_coeffs: Vec<F::Elem>,
}

#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub step1_rank: usize,
    pub ann_dim: usize,
    pub generator_count: usize,
    pub root_dim: usize,
    pub slice_dim: usize,
    /// First power k at which the span chain repeats (early-stopping route).
    pub stabilized_at: Option<usize>,
    /// Set when 1 lies in the bounded ideal slice: the system has no roots.
    pub no_roots: bool,
    pub fast_path: bool,
    pub step_seconds: Vec<(String, f64)>,
}

#[derive(Clone, Debug)]
pub struct SolveResult<F: Field> {
    pub delta_f: u32,
    pub dimension: usize,
    pub ann_dim: usize,
    pub root_basis: Vec<BoundedFunctional<F>>,
    pub ideal_slice: Vec<Poly<F>>,
    pub unit: BoundedFunctional<F>,
    pub unit_decomposition: UnitDecomposition<F>,
    pub diagnostics: Diagnostics,
}

/// All products `f_i * x^alpha` of total degree within `bound`. There are at
/// most n * dim(bound) of them.
pub fn truncated_ideal_generators<F: Field>(sys: &PolySystem<F>, bound: u32) -> Vec<Poly<F>> {
    let mut out = Vec::new();
    for (i, f_i) in sys.polys().iter().enumerate() {
        let d_i = sys.degrees()[i];
        if d_i > bound {
            continue;
        }
        let shifts = MonomialBasis::new(sys.n(), bound - d_i);
        for m in shifts.monomials() {
            out.push(f_i.mul_monomial(m));
        }
    }
    out
}

/// Step 1: echelon basis of the ideal slice generated within degree delta_f.
pub fn truncated_ideal_basis<F: Field>(ctx: &ExtensionContext<F>) -> EchelonBasis<F> {
    let sys = ctx.system();
    let field = ctx.field().clone();
    let gens = truncated_ideal_generators(sys, sys.delta_f());
    let rows: Vec<Vec<F::Elem>> = gens
        .iter()
        .map(|g| g.coefficient_vector(ctx.basis()).expect("generator fits the bound"))
        .collect();
    row_reduce(&KMatrix::from_rows(field, ctx.dimension(), rows))
}

/// Step 2: the functionals on the bounded space annulling the step-1 span,
/// via the deterministic unit-completion null space.
pub fn annihilator_functionals<F: Field>(
    ctx: &ExtensionContext<F>,
    ideal: &EchelonBasis<F>,
) -> Vec<BoundedFunctional<F>> {
    annihilator_in_dual(ideal, ctx.dimension())
        .into_iter()
        .map(|v| ctx.functional_from_vector(v))
        .collect()
}

pub struct RootBasisOutcome<F: Field> {
    pub functionals: Vec<BoundedFunctional<F>>,
    pub generator_count: usize,
    pub stabilized_at: Option<usize>,
}

/// Steps 3 to 6: operators, d-th powers, the d*d products, and an echelon
/// basis of their span, which is the restriction of all root functionals.
pub fn root_functional_basis<F: Field>(
    ctx: &ExtensionContext<F>,
    ann: &[BoundedFunctional<F>],
    fast_path: bool,
) -> RootBasisOutcome<F> {
    let field = ctx.field().clone();
    let dim = ctx.dimension();
    let d = ann.len();
    if d == 0 {
        return RootBasisOutcome {
            functionals: Vec::new(),
            generator_count: 0,
            stabilized_at: Some(1),
        };
    }
    let operators: Vec<_> = ann
        .par_iter()
        .map(|l| ctx.extension_operator(l))
        .collect();
    if fast_path {
        let (span, k, generator_count) = power_span_chain(ctx, ann);
        let functionals = span
            .row_vectors()
            .into_iter()
            .map(|v| ctx.functional_from_vector(v))
            .collect();
        return RootBasisOutcome {
            functionals,
            generator_count,
            stabilized_at: Some(k),
        };
    }
    // (L_p)^d by iterated composition with [L_p]
    let powers: Vec<BoundedFunctional<F>> = ann
        .par_iter()
        .enumerate()
        .map(|(p, l)| {
            let mut acc = l.clone();
            for _ in 1..d {
                acc = extend(&acc, &operators[p]);
            }
            acc
        })
        .collect();
    // the d^2 generators (L_p)^d * L_q, merged in (p, q) order
    let gens: Vec<KVector<F>> = powers
        .par_iter()
        .map(|lp| {
            operators
                .iter()
                .map(|op| extend(lp, op).values().clone())
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let echelon = row_reduce_vectors(&field, dim, &gens);
    let functionals = echelon
        .row_vectors()
        .into_iter()
        .map(|v| ctx.functional_from_vector(v))
        .collect();
    RootBasisOutcome {
        functionals,
        generator_count: d * d,
        stabilized_at: None,
    }
}

/// The non-increasing chain of power spans `span(A^k)`, iterated until two
/// consecutive spans agree. Returns the stable span, the power k at which it
/// first repeats, and the number of products formed along the way.
pub fn power_span_chain<F: Field>(
    ctx: &ExtensionContext<F>,
    ann: &[BoundedFunctional<F>],
) -> (EchelonBasis<F>, usize, usize) {
    let field = ctx.field().clone();
    let dim = ctx.dimension();
    let d = ann.len();
    if d == 0 {
        return (EchelonBasis::empty(field, dim), 1, 0);
    }
    let operators: Vec<_> = ann
        .par_iter()
        .map(|l| ctx.extension_operator(l))
        .collect();
    let values: Vec<KVector<F>> = ann.iter().map(|l| l.values().clone()).collect();
    let mut current = row_reduce_vectors(&field, dim, &values);
    let mut k = 1;
    let mut generator_count = 0;
    loop {
        let rows = current.row_vectors();
        let next_gens: Vec<KVector<F>> = rows
            .par_iter()
            .map(|b| {
                let bf = ctx.functional_from_vector(b.clone());
                operators
                    .iter()
                    .map(|op| extend(&bf, op).values().clone())
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
        generator_count += next_gens.len();
        let next = row_reduce_vectors(&field, dim, &next_gens);
        if next == current {
            return (current, k, generator_count);
        }
        k += 1;
        assert!(
            k <= d + 1,
            "power span chain did not stabilize by d + 1: arithmetic bug"
        );
        current = next;
    }
}

/// Step 7: echelon basis of the polynomials in the bounded space annulled by
/// every root functional; by duality this is the bounded slice of the ideal.
pub fn ideal_slice_basis<F: Field>(
    ctx: &ExtensionContext<F>,
    root_basis: &[BoundedFunctional<F>],
) -> Vec<Poly<F>> {
    let field = ctx.field().clone();
    let dim = ctx.dimension();
    let rows: Vec<KVector<F>> = root_basis.iter().map(|l| l.values().clone()).collect();
    let echelon = row_reduce_vectors(&field, dim, &rows);
    let kernel = annihilator_in_dual(&echelon, dim);
    let canonical = row_reduce_vectors(&field, dim, &kernel);
    canonical
        .row_vectors()
        .into_iter()
        .map(|v| Poly::from_coefficient_vector(field.clone(), ctx.basis(), v.entries()))
        .collect()
}

/// Step 8: decompose 1 over the candidate columns
/// `{l_p(y) . det B} ∪ {h_q}` and assemble the unit functional
/// `E' = sum a_p l_p`.
pub fn unit_root_functional<F: Field>(
    ctx: &ExtensionContext<F>,
    root_basis: &[BoundedFunctional<F>],
    ideal_slice: &[Poly<F>],
) -> Result<(BoundedFunctional<F>, UnitDecomposition<F>), SolveError> {
    let field = ctx.field().clone();
    let det = ctx.bezout().det();
    let mut columns = Vec::with_capacity(root_basis.len() + ideal_slice.len());
    for l in root_basis {
        let poly = l.apply_y(det);
        let coords = poly
            .coefficient_vector(ctx.basis())
            .expect("l(y).det B has x-degree at most delta_f");
        columns.push(KVector::new(field.clone(), coords));
    }
    for h in ideal_slice {
        let coords = h.coefficient_vector(ctx.basis()).expect("slice fits the bound");
        columns.push(KVector::new(field.clone(), coords));
    }
    let target = KVector::unit(field.clone(), ctx.dimension(), 0);
    match solve_affine(&columns, &target) {
        None => Err(SolveError::NotZeroDimensional {
            detail: format!(
                "1 has no decomposition over {} root columns and {} slice columns",
                root_basis.len(),
                ideal_slice.len()
            ),
        }),
        Some(coeffs) => {
            let (a, b) = coeffs.split_at(root_basis.len());
            let unit = linear_combination(&field, ctx.basis(), a, root_basis);
            Ok((
                unit,
                UnitDecomposition {
                    root_coeffs: a.to_vec(),
                    slice_coeffs: b.to_vec(),
                },
            ))
        }
    }
}

/// Run the whole pipeline.
pub fn solve<F: Field>(
    system: &PolySystem<F>,
    options: &SolveOptions,
) -> Result<SolveResult<F>, SolveError> {
    let ctx = ExtensionContext::new(system.clone());
    let field = ctx.field().clone();
    let dim = ctx.dimension();
    let mut step_seconds: Vec<(String, f64)> = Vec::new();
    let mut clock = Instant::now();
    let mark = |name: &str, clock: &mut Instant, out: &mut Vec<(String, f64)>| {
        out.push((name.to_string(), clock.elapsed().as_secs_f64()));
        *clock = Instant::now();
    };

    let step1 = truncated_ideal_basis(&ctx);
    mark("truncated_ideal", &mut clock, &mut step_seconds);

    let ann = annihilator_functionals(&ctx, &step1);
    mark("annihilator", &mut clock, &mut step_seconds);

    let outcome = root_functional_basis(&ctx, &ann, options.fast_path);
    mark("root_basis", &mut clock, &mut step_seconds);

    let ideal_slice = ideal_slice_basis(&ctx, &outcome.functionals);
    mark("ideal_slice", &mut clock, &mut step_seconds);

    let mut no_roots = false;
    let (unit, unit_decomposition) = if outcome.functionals.is_empty() {
        // Degenerate case: no root functional survives the extension
        // products. If 1 lies in the step-1 span it is certified to be in the
        // ideal, so the system provably has no roots; otherwise the
        // finite-root hypothesis cannot be confirmed at this bound.
        let one = KVector::unit(field.clone(), dim, 0);
        if member(&step1, &one) {
            no_roots = true;
            let columns: Vec<KVector<F>> = ideal_slice
                .iter()
                .map(|h| {
                    KVector::new(
                        field.clone(),
                        h.coefficient_vector(ctx.basis()).expect("slice fits"),
                    )
                })
                .collect();
            let b = solve_affine(&columns, &one)
                .expect("with no root functionals the slice spans everything");
            (
                ctx.zero_functional(),
                UnitDecomposition {
                    root_coeffs: Vec::new(),
                    slice_coeffs: b,
                },
            )
        } else {
            return Err(SolveError::NotZeroDimensional {
                detail: format!(
                    "no root functionals survive extension and 1 is not in the \
                     degree-{} truncated ideal (rank deficit {})",
                    system.delta_f(),
                    dim - step1.rank()
                ),
            });
        }
    } else {
        unit_root_functional(&ctx, &outcome.functionals, &ideal_slice)?
    };
    mark("unit", &mut clock, &mut step_seconds);

    Ok(SolveResult {
        delta_f: system.delta_f(),
        dimension: dim,
        ann_dim: ann.len(),
        diagnostics: Diagnostics {
            step1_rank: step1.rank(),
            ann_dim: ann.len(),
            generator_count: outcome.generator_count,
            root_dim: outcome.functionals.len(),
            slice_dim: ideal_slice.len(),
            stabilized_at: outcome.stabilized_at,
            no_roots,
            fast_path: options.fast_path,
            step_seconds,
        },
        root_basis: outcome.functionals,
        ideal_slice,
        unit,
        unit_decomposition,
    })
}

#[derive(Clone, Debug)]
pub struct VerificationCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub checks: Vec<VerificationCheck>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool) {
        self.checks.push(VerificationCheck {
            name: name.to_string(),
            passed,
        });
    }
}

/// Re-derive and check the structural invariants of a solve result.
pub fn verify<F: Field>(system: &PolySystem<F>, result: &SolveResult<F>) -> VerificationReport {
    let ctx = ExtensionContext::new(system.clone());
    let field = ctx.field().clone();
    let dim = ctx.dimension();
    let mut report = VerificationReport::default();

    report.push(
        "dimension_duality",
        result.root_basis.len() + result.ideal_slice.len() == dim,
    );

    report.push(
        "root_basis_annihilates_slice",
        result.root_basis.iter().all(|l| {
            result
                .ideal_slice
                .iter()
                .all(|h| field.is_zero(&l.apply(h)))
        }),
    );

    report.push(
        "root_basis_in_annihilator",
        result
            .root_basis
            .iter()
            .all(|l| ctx.annihilates_truncated_ideal(l)),
    );

    // unit certificate: E'(y) . det B - 1 lies in the bounded ideal slice
    let one = Poly::one(field.clone(), system.n());
    let cert_poly = result.unit.apply_y(ctx.bezout().det()).sub(&one);
    let slice_rows: Vec<KVector<F>> = result
        .ideal_slice
        .iter()
        .map(|h| KVector::new(field.clone(), h.coefficient_vector(ctx.basis()).unwrap()))
        .collect();
    let slice_echelon = row_reduce_vectors(&field, dim, &slice_rows);
    let cert_ok = match cert_poly.coefficient_vector(ctx.basis()) {
        Some(coords) => member(&slice_echelon, &KVector::new(field.clone(), coords)),
        None => false,
    };
    report.push("unit_certificate", cert_ok);

    let unit_op = ctx.extension_operator(&result.unit);
    report.push("unit_idempotent", extend(&result.unit, &unit_op) == result.unit);
    report.push(
        "unit_acts_as_identity",
        result
            .root_basis
            .iter()
            .all(|l| &extend(l, &unit_op) == l),
    );

    // stabilization: the direct power chain repeats by d + 1 and its stable
    // value is exactly the root-functional span
    let step1 = truncated_ideal_basis(&ctx);
    let ann = annihilator_functionals(&ctx, &step1);
    let (stable, k, _) = power_span_chain(&ctx, &ann);
    let root_rows: Vec<KVector<F>> = result.root_basis.iter().map(|l| l.values().clone()).collect();
    let root_echelon = row_reduce_vectors(&field, dim, &root_rows);
    report.push(
        "power_span_stabilizes",
        k <= ann.len() + 1 && stable.same_span(&root_echelon),
    );

    // closure: products of annihilator elements stay in the annihilator
    let closed = ann.iter().all(|lp| {
        ann.iter().all(|lq| {
            let prod = extend(lp, &ctx.extension_operator(lq));
            ctx.annihilates_truncated_ideal(&prod)
        })
    });
    report.push("annihilator_closed_under_products", closed);

    report
}
