//! Independent brute-force oracles for desk-scale validation: truncated
//! ideals at arbitrary bounds, ideal slices by degree saturation instead of
//! duality, evaluation and derivative functionals at known roots, and the
//! factorization identity relating bounded slices across degrees.
//!
//! These deliberately avoid the extension-operator route so that agreement
//! with the pipeline is meaningful.

use std::fmt;
use std::sync::Arc;

use crate::field::Field;
use crate::functionals::BoundedFunctional;
use crate::linalg::{row_reduce, row_reduce_vectors, EchelonBasis, KMatrix, KVector};
use crate::monomial::MonomialBasis;
use crate::poly::{Poly, PolySystem};
use crate::solver::{self, SolveOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    /// The saturation never produced two consecutive equal slices within the
    /// allowed slack; increase it.
    NotStabilized { bound: u32, slack: u32 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::NotStabilized { bound, slack } => write!(
                f,
                "ideal slice at degree {bound} did not stabilize within slack {slack}"
            ),
        }
    }
}

impl std::error::Error for OracleError {}

/// Echelon basis of `span{f_i * x^alpha : deg <= m}` over the degree-m basis.
pub fn truncated_ideal_at<F: Field>(sys: &PolySystem<F>, m: u32) -> EchelonBasis<F> {
    let field = sys.field().clone();
    let basis = MonomialBasis::new(sys.n(), m);
    let rows: Vec<Vec<F::Elem>> = solver::truncated_ideal_generators(sys, m)
        .iter()
        .map(|g| g.coefficient_vector(&basis).expect("generator fits the bound"))
        .collect();
    row_reduce(&KMatrix::from_rows(field, basis.len(), rows))
}

/// Intersect a row space over the degree-(m+s) basis with the subspace of
/// degree-<=m coordinates. Relies on the graded basis being
/// prefix-compatible: the first dim(m) monomials of the bigger basis are
/// exactly the smaller basis.
fn bounded_intersection<F: Field>(
    field: &F,
    big: &EchelonBasis<F>,
    small_len: usize,
) -> EchelonBasis<F> {
    let total = big.ambient_dim();
    let high = total - small_len;
    // permute coordinates so the high-degree block leads, then eliminate
    let rows: Vec<Vec<F::Elem>> = (0..big.rank())
        .map(|r| {
            let row = big.matrix().row(r);
            let mut permuted = row[small_len..].to_vec();
            permuted.extend_from_slice(&row[..small_len]);
            permuted
        })
        .collect();
    let reduced = row_reduce(&KMatrix::from_rows(field.clone(), total, rows));
    let mut keep = Vec::new();
    for (r, &p) in reduced.pivot_cols().iter().enumerate() {
        if p >= high {
            keep.push(reduced.matrix().row(r)[high..].to_vec());
        }
    }
    row_reduce(&KMatrix::from_rows(field.clone(), small_len, keep))
}

/// The slice `(f) ∩ R[x^{<=m}]` computed by saturating the generation bound:
/// raise it by one until two consecutive slices agree.
pub fn saturated_ideal_slice<F: Field>(
    sys: &PolySystem<F>,
    m: u32,
    slack: u32,
) -> Result<EchelonBasis<F>, OracleError> {
    let field = sys.field().clone();
    let small_len = MonomialBasis::new(sys.n(), m).len();
    let mut previous: Option<EchelonBasis<F>> = None;
    for s in 0..=slack {
        let big = truncated_ideal_at(sys, m + s);
        let slice = bounded_intersection(&field, &big, small_len);
        if let Some(prev) = previous {
            if prev.same_span(&slice) {
                return Ok(slice);
            }
        }
        previous = Some(slice);
    }
    Err(OracleError::NotStabilized { bound: m, slack })
}

/// The point-evaluation functional restricted to the bounded basis.
pub fn evaluation_functional<F: Field>(
    field: &F,
    basis: &Arc<MonomialBasis>,
    point: &[F::Elem],
) -> BoundedFunctional<F> {
    derivative_functional(field, basis, point, &vec![0; basis.n()])
}

fn binomial_u128(a: u32, b: u32) -> u128 {
    if b > a {
        return 0;
    }
    let mut acc: u128 = 1;
    for t in 1..=b as u128 {
        acc = acc
            .checked_mul(a as u128 - b as u128 + t)
            .expect("binomial fits in 128 bits at desk scale");
        acc /= t;
    }
    acc
}

/// The divided-power derivative functional at `point` with multi-exponent
/// `beta`: its value on `x^alpha` is the coefficient of `t^beta` in
/// `(point + t)^alpha`, i.e. `prod_i C(alpha_i, beta_i) point_i^(alpha_i - beta_i)`.
/// Divided powers keep this well-defined over prime fields.
pub fn derivative_functional<F: Field>(
    field: &F,
    basis: &Arc<MonomialBasis>,
    point: &[F::Elem],
    beta: &[u32],
) -> BoundedFunctional<F> {
    assert_eq!(point.len(), basis.n(), "point has wrong arity");
    assert_eq!(beta.len(), basis.n());
    let mut values = Vec::with_capacity(basis.len());
    for m in basis.monomials() {
        let mut v = field.one();
        let mut vanishes = false;
        for i in 0..basis.n() {
            let a = m.exponent(i);
            let b = beta[i];
            if b > a {
                vanishes = true;
                break;
            }
            let binom = binomial_u128(a, b);
            assert!(binom <= i64::MAX as u128);
            v = field.mul(&v, &field.from_i64(binom as i64));
            for _ in 0..(a - b) {
                v = field.mul(&v, &point[i]);
            }
        }
        values.push(if vanishes { field.zero() } else { v });
    }
    BoundedFunctional::new(basis.clone(), KVector::new(field.clone(), values))
}

/// Check the factorization of the bounded ideal slice at a raised degree:
/// `(f) ∩ R[x^{<= delta_f + delta}]` (by saturation) must equal
/// `span{h_q * x^gamma : |gamma| <= delta}` plus the ideal generated within
/// `delta_f + delta`, where `h_q` is the pipeline's bounded slice.
pub fn slice_factorization_check<F: Field>(
    sys: &PolySystem<F>,
    pipeline_slice: &[Poly<F>],
    delta: u32,
    slack: u32,
) -> Result<bool, OracleError> {
    let field = sys.field().clone();
    let m = sys.delta_f() + delta;
    let lhs = saturated_ideal_slice(sys, m, slack)?;
    let big_basis = MonomialBasis::new(sys.n(), m);
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    let shifts = MonomialBasis::new(sys.n(), delta);
    for h in pipeline_slice {
        for g in shifts.monomials() {
            rows.push(
                h.mul_monomial(g)
                    .coefficient_vector(&big_basis)
                    .expect("shifted slice fits the raised bound"),
            );
        }
    }
    for gen in solver::truncated_ideal_generators(sys, m) {
        rows.push(gen.coefficient_vector(&big_basis).unwrap());
    }
    let rhs = row_reduce(&KMatrix::from_rows(field, big_basis.len(), rows));
    Ok(lhs.same_span(&rhs))
}

/// A root of a fixture: the point and the exponent vectors of the derivative
/// functionals spanning its local dual (always including the zero exponent,
/// i.e. plain evaluation).
#[derive(Clone, Debug)]
pub struct FixtureRoot<F: Field> {
    pub point: Vec<F::Elem>,
    pub derivatives: Vec<Vec<u32>>,
}

impl<F: Field> FixtureRoot<F> {
    pub fn simple(point: Vec<F::Elem>) -> Self {
        let n = point.len();
        FixtureRoot {
            point,
            derivatives: vec![vec![0; n]],
        }
    }
}

/// A system together with its known exact roots and multiplicity structure.
#[derive(Clone, Debug)]
pub struct RootFixture<F: Field> {
    pub system: PolySystem<F>,
    pub roots: Vec<FixtureRoot<F>>,
}

impl<F: Field> RootFixture<F> {
    /// The quotient dimension the fixture claims: one functional per listed
    /// derivative exponent.
    pub fn expected_quotient_dimension(&self) -> usize {
        self.roots.iter().map(|r| r.derivatives.len()).sum()
    }

    pub fn all_simple(&self) -> bool {
        self.roots
            .iter()
            .all(|r| r.derivatives.len() == 1 && r.derivatives[0].iter().all(|&b| b == 0))
    }
}

#[derive(Clone, Debug)]
pub struct OracleCheck {
    pub name: String,
    pub passed: bool,
}

/// Run the oracle agreement suite against the pipeline.
///
/// Checks that the listed roots are exact zeros, that the pipeline's root
/// space equals the span of the fixture's evaluation/derivative functionals,
/// that the duality-derived slice matches the saturation oracle, and that the
/// slice factorization identity holds for each shift up to `delta_max`.
pub fn run_fixture_checks<F: Field>(
    fixture: &RootFixture<F>,
    delta_max: u32,
    slack: u32,
) -> Vec<OracleCheck> {
    let sys = &fixture.system;
    let field = sys.field().clone();
    let mut checks = Vec::new();
    let push = |checks: &mut Vec<OracleCheck>, name: String, passed: bool| {
        checks.push(OracleCheck { name, passed });
    };

    let zeros_ok = fixture.roots.iter().all(|r| {
        sys.polys()
            .iter()
            .all(|f| field.is_zero(&f.evaluate(&r.point)))
    });
    push(&mut checks, "roots_are_common_zeros".into(), zeros_ok);

    let result = match solver::solve(sys, &SolveOptions::default()) {
        Ok(r) => r,
        Err(_) => {
            push(&mut checks, "pipeline_solves".into(), false);
            return checks;
        }
    };
    push(&mut checks, "pipeline_solves".into(), true);

    push(
        &mut checks,
        "multiplicity_count".into(),
        result.root_basis.len() == fixture.expected_quotient_dimension(),
    );

    // span(root_basis) == span of the fixture functionals
    let basis = Arc::new(MonomialBasis::new(sys.n(), sys.delta_f()));
    let dim = basis.len();
    let fixture_rows: Vec<KVector<F>> = fixture
        .roots
        .iter()
        .flat_map(|r| {
            r.derivatives
                .iter()
                .map(|beta| derivative_functional(&field, &basis, &r.point, beta).values().clone())
                .collect::<Vec<_>>()
        })
        .collect();
    let fixture_span = row_reduce_vectors(&field, dim, &fixture_rows);
    let pipeline_rows: Vec<KVector<F>> =
        result.root_basis.iter().map(|l| l.values().clone()).collect();
    let pipeline_span = row_reduce_vectors(&field, dim, &pipeline_rows);
    push(
        &mut checks,
        "root_span_matches_fixture_functionals".into(),
        fixture_span.same_span(&pipeline_span),
    );

    if fixture.all_simple() {
        push(
            &mut checks,
            "evaluation_functionals_full_rank".into(),
            fixture_span.rank() == fixture.roots.len(),
        );
    }

    match saturated_ideal_slice(sys, sys.delta_f(), slack) {
        Ok(oracle_slice) => {
            let slice_rows: Vec<KVector<F>> = result
                .ideal_slice
                .iter()
                .map(|h| KVector::new(field.clone(), h.coefficient_vector(&basis).unwrap()))
                .collect();
            let pipeline_slice = row_reduce_vectors(&field, dim, &slice_rows);
            push(
                &mut checks,
                "slice_matches_saturation".into(),
                oracle_slice.same_span(&pipeline_slice),
            );
        }
        Err(_) => push(&mut checks, "slice_matches_saturation".into(), false),
    }

    for delta in 0..=delta_max {
        let name = format!("slice_factorization(delta={delta})");
        match slice_factorization_check(sys, &result.ideal_slice, delta, slack) {
            Ok(ok) => push(&mut checks, name, ok),
            Err(_) => push(&mut checks, name, false),
        }
    }

    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::linalg::member;

    fn p(n: usize, pairs: &[(i64, &[u32])]) -> Poly<Rationals> {
        let q = Rationals;
        Poly::from_terms(
            q,
            n,
            pairs
                .iter()
                .map(|(c, e)| (Monomial::new(e.to_vec()), q.from_i64(*c))),
        )
    }

    fn system(polys: Vec<Poly<Rationals>>) -> PolySystem<Rationals> {
        PolySystem::new(Rationals, polys).unwrap()
    }

    fn qv(vals: &[i64]) -> Vec<num_rational::BigRational> {
        vals.iter().map(|&v| Rationals.from_i64(v)).collect()
    }

    #[test]
    fn truncated_ideal_ranks() {
        let s = system(vec![p(1, &[(1, &[2]), (-1, &[0])])]);
        assert_eq!(truncated_ideal_at(&s, 1).rank(), 0);
        let at3 = truncated_ideal_at(&s, 3);
        assert_eq!(at3.rank(), 2);
        // span is {x^2 - 1, x^3 - x}
        let basis = MonomialBasis::new(1, 3);
        for poly in [p(1, &[(1, &[2]), (-1, &[0])]), p(1, &[(1, &[3]), (-1, &[1])])] {
            let v = KVector::new(Rationals, poly.coefficient_vector(&basis).unwrap());
            assert!(member(&at3, &v));
        }
        assert_eq!(truncated_ideal_at(&s, 0).rank(), 0);
    }

    #[test]
    fn saturated_slice_of_monomial_squares() {
        let s = system(vec![p(2, &[(1, &[2, 0])]), p(2, &[(1, &[0, 2])])]);
        let slice = saturated_ideal_slice(&s, 2, 3).unwrap();
        assert_eq!(slice.rank(), 2);
        let basis = MonomialBasis::new(2, 2);
        for f in s.polys() {
            let v = KVector::new(Rationals, f.coefficient_vector(&basis).unwrap());
            assert!(member(&slice, &v));
        }
    }

    #[test]
    fn saturated_slice_empty_below_degree() {
        let s = system(vec![p(1, &[(1, &[2]), (-1, &[0])])]);
        assert_eq!(saturated_ideal_slice(&s, 1, 4).unwrap().rank(), 0);
    }

    #[test]
    fn evaluation_functional_values() {
        let basis = Arc::new(MonomialBasis::new(2, 2));
        let origin = evaluation_functional(&Rationals, &basis, &qv(&[0, 0]));
        let mut expect = vec![0i64; 6];
        expect[0] = 1;
        assert_eq!(
            origin.values().entries(),
            KVector::new(Rationals, qv(&expect)).entries()
        );
        let at = evaluation_functional(&Rationals, &basis, &qv(&[1, -1]));
        assert_eq!(
            at.values().entries(),
            KVector::new(Rationals, qv(&[1, 1, -1, 1, -1, 1])).entries()
        );
        let b1 = Arc::new(MonomialBasis::new(1, 1));
        let pos = evaluation_functional(&Rationals, &b1, &qv(&[1]));
        let neg = evaluation_functional(&Rationals, &b1, &qv(&[-1]));
        assert_eq!(pos.values().entries(), qv(&[1, 1]).as_slice());
        assert_eq!(neg.values().entries(), qv(&[1, -1]).as_slice());
    }

    #[test]
    fn derivative_functional_values() {
        let b = Arc::new(MonomialBasis::new(1, 2));
        let d1 = derivative_functional(&Rationals, &b, &qv(&[0]), &[1]);
        assert_eq!(d1.values().entries(), qv(&[0, 1, 0]).as_slice());
        let b2 = Arc::new(MonomialBasis::new(2, 2));
        let dxy = derivative_functional(&Rationals, &b2, &qv(&[0, 0]), &[1, 1]);
        assert_eq!(dxy.values().entries(), qv(&[0, 0, 0, 0, 1, 0]).as_slice());
        // beta = 0 is evaluation
        let ev = derivative_functional(&Rationals, &b2, &qv(&[2, 3]), &[0, 0]);
        assert_eq!(
            ev.values(),
            evaluation_functional(&Rationals, &b2, &qv(&[2, 3])).values()
        );
    }

    #[test]
    fn factorization_identity_on_fixtures() {
        let squares = system(vec![p(2, &[(1, &[2, 0])]), p(2, &[(1, &[0, 2])])]);
        let r = solver::solve(&squares, &SolveOptions::default()).unwrap();
        assert_eq!(
            slice_factorization_check(&squares, &r.ideal_slice, 1, 4),
            Ok(true)
        );

        let uni = system(vec![p(1, &[(1, &[2]), (-1, &[0])])]);
        let r = solver::solve(&uni, &SolveOptions::default()).unwrap();
        assert_eq!(slice_factorization_check(&uni, &r.ideal_slice, 1, 4), Ok(true));

        let grid = system(vec![
            p(2, &[(1, &[2, 0]), (-1, &[0, 0])]),
            p(2, &[(1, &[0, 2]), (-1, &[0, 0])]),
        ]);
        let r = solver::solve(&grid, &SolveOptions::default()).unwrap();
        assert_eq!(
            slice_factorization_check(&grid, &r.ideal_slice, 2, 4),
            Ok(true)
        );
    }

    #[test]
    fn fixture_checks_pass_for_grid() {
        let grid = system(vec![
            p(2, &[(1, &[2, 0]), (-1, &[0, 0])]),
            p(2, &[(1, &[0, 2]), (-1, &[0, 0])]),
        ]);
        let fixture = RootFixture {
            system: grid,
            roots: [(1, 1), (1, -1), (-1, 1), (-1, -1)]
                .iter()
                .map(|&(a, b)| FixtureRoot::simple(qv(&[a, b])))
                .collect(),
        };
        let checks = run_fixture_checks(&fixture, 2, 4);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn fixture_checks_pass_for_triple_root() {
        let fixture = RootFixture {
            system: system(vec![p(1, &[(1, &[3])])]),
            roots: vec![FixtureRoot {
                point: qv(&[0]),
                derivatives: vec![vec![0], vec![1], vec![2]],
            }],
        };
        let checks = run_fixture_checks(&fixture, 2, 4);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn fixture_with_wrong_root_fails() {
        let fixture = RootFixture {
            system: system(vec![p(1, &[(1, &[2]), (-1, &[0])])]),
            roots: vec![
                FixtureRoot::simple(qv(&[1])),
                FixtureRoot::simple(qv(&[2])), // not a root
            ],
        };
        let checks = run_fixture_checks(&fixture, 1, 4);
        assert!(checks.iter().any(|c| !c.passed));
    }
}
