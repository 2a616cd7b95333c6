//! Divided differences, the Bezout matrix of a square system, its
//! determinant, and the bordered determinant that drives the extension
//! operators.
//!
//! The divided difference substitutes y for x one variable at a time, left to
//! right: `D_j h = [h(y_1..y_{j-1}, x_j..x_n) - h(y_1..y_j, x_{j+1}..x_n)]
//! / (x_j - y_j)`. Summed against `(x_j - y_j)` the differences telescope to
//! `h(x) - h(y)`, which pins the construction independently of any layout
//! choice; the tests enforce that identity directly.

use std::collections::BTreeMap;

use crate::field::Field;
use crate::monomial::Monomial;
use crate::poly::{DoublePoly, Poly, PolySystem};

/// The j-th divided difference of an x-polynomial (j is zero-based here).
///
/// The numerator is always divisible by `x_j - y_j`; the exact division is a
/// univariate synthetic division in `x_j`, and a nonzero remainder is a hard
/// internal error.
pub fn divided_difference<F: Field>(h: &Poly<F>, j: usize) -> DoublePoly<F> {
    assert!(j < h.n());
    let upper = prefix_to_y(h, j);
    let lower = prefix_to_y(h, j + 1);
    divide_by_linear(&upper.sub(&lower), j)
}

/// Map the first `k` variables of `h` into the y block, keeping the rest in x.
fn prefix_to_y<F: Field>(h: &Poly<F>, k: usize) -> DoublePoly<F> {
    let n = h.n();
    let mut terms = Vec::with_capacity(h.term_count());
    for (m, c) in h.terms() {
        let mut exps = vec![0u32; 2 * n];
        for (i, &e) in m.exponents().iter().enumerate() {
            if i < k {
                exps[n + i] = e;
            } else {
                exps[i] = e;
            }
        }
        terms.push((Monomial::new(exps), c.clone()));
    }
    DoublePoly::from_inner(n, Poly::from_terms(h.field().clone(), 2 * n, terms))
}

/// Exact division of a doubled polynomial by `x_j - y_j` via synthetic
/// division in `x_j` with coefficients in the remaining variables.
fn divide_by_linear<F: Field>(numerator: &DoublePoly<F>, j: usize) -> DoublePoly<F> {
    let field = numerator.field().clone();
    let n = numerator.n();
    if numerator.is_zero() {
        return DoublePoly::zero(field, n);
    }
    // coefficients of x_j^e, each a doubled polynomial without x_j
    let mut coeffs: BTreeMap<u32, Poly<F>> = BTreeMap::new();
    for (m, c) in numerator.terms() {
        let e = m.exponent(j);
        let mut exps = m.exponents().to_vec();
        exps[j] = 0;
        coeffs
            .entry(e)
            .or_insert_with(|| Poly::zero(field.clone(), 2 * n))
            .add_term(Monomial::new(exps), c.clone());
    }
    let top = *coeffs.keys().next_back().unwrap();
    let coeff = |e: u32| -> Poly<F> {
        coeffs
            .get(&e)
            .cloned()
            .unwrap_or_else(|| Poly::zero(field.clone(), 2 * n))
    };
    let y_j = Monomial::var(2 * n, n + j);
    // Horner scheme for division by the monic linear x_j - y_j
    let mut quotient_coeffs: Vec<Poly<F>> = vec![Poly::zero(field.clone(), 2 * n); top as usize];
    let mut carry = Poly::zero(field.clone(), 2 * n);
    for e in (1..=top).rev() {
        let b = coeff(e).add(&carry.mul_monomial(&y_j));
        carry = b.clone();
        quotient_coeffs[(e - 1) as usize] = b;
    }
    let remainder = coeff(0).add(&carry.mul_monomial(&y_j));
    assert!(
        remainder.is_zero(),
        "divided difference left a remainder: arithmetic bug"
    );
    let mut result = Poly::zero(field.clone(), 2 * n);
    for (e, b) in quotient_coeffs.into_iter().enumerate() {
        let xj_pow = Monomial::new({
            let mut exps = vec![0u32; 2 * n];
            exps[j] = e as u32;
            exps
        });
        result = result.add(&b.mul_monomial(&xj_pow));
    }
    DoublePoly::from_inner(n, result)
}

/// The n-by-n grid of divided differences: entry `(j, i)` is `D_j f_i`
/// (row = substitution step, column = polynomial).
#[derive(Clone, Debug)]
pub struct BezoutMatrix<F: Field> {
    n: usize,
    entries: Vec<Vec<DoublePoly<F>>>,
}

impl<F: Field> BezoutMatrix<F> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at row `j` (step), column `i` (polynomial), zero-based.
    pub fn entry(&self, j: usize, i: usize) -> &DoublePoly<F> {
        &self.entries[j][i]
    }

    /// The telescoping sum `sum_j (x_j - y_j) * entry(j, i)` for column `i`,
    /// which must equal `f_i(x) - f_i(y)`.
    pub fn telescoped_column(&self, i: usize) -> DoublePoly<F> {
        let field = self.entries[0][0].field().clone();
        let n = self.n;
        let mut acc = DoublePoly::zero(field.clone(), n);
        for j in 0..n {
            let x_minus_y = DoublePoly::from_inner(n, {
                let mut p = Poly::zero(field.clone(), 2 * n);
                p.add_term(Monomial::var(2 * n, j), field.one());
                p.add_term(Monomial::var(2 * n, n + j), field.neg(&field.one()));
                p
            });
            acc = acc.add(&x_minus_y.mul(&self.entries[j][i]));
        }
        acc
    }
}

/// Divided-difference matrix of a system.
pub fn bezout_matrix<F: Field>(sys: &PolySystem<F>) -> BezoutMatrix<F> {
    let n = sys.n();
    let entries = (0..n)
        .map(|j| (0..n).map(|i| divided_difference(sys.poly(i), j)).collect())
        .collect();
    BezoutMatrix { n, entries }
}

/// Determinant of a square grid of doubled polynomials by Laplace expansion.
fn grid_det<F: Field>(field: &F, n: usize, grid: &[Vec<DoublePoly<F>>]) -> DoublePoly<F> {
    let k = grid.len();
    if k == 1 {
        return grid[0][0].clone();
    }
    let mut acc = DoublePoly::zero(field.clone(), n);
    for r in 0..k {
        if grid[r][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<DoublePoly<F>>> = grid
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != r)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let cofactor = grid[r][0].mul(&grid_det(field, n, &minor));
        if r % 2 == 0 {
            acc = acc.add(&cofactor);
        } else {
            acc = acc.sub(&cofactor);
        }
    }
    acc
}

/// Determinant of the Bezout matrix; total degree is at most `delta_f`.
pub fn bezout_det<F: Field>(sys: &PolySystem<F>) -> DoublePoly<F> {
    BezoutData::new(sys).det().clone()
}

/// The determinant and bordering minors of a system, computed once and shared
/// across all bordered-determinant evaluations.
///
/// The bordered matrix `B(x, y; g)` has the divided differences `D_j f_i` in
/// its top-left n-by-n block, `D_j g` as the bordering column, the values
/// `f_i(x)` as the bordering row, and `g(x)` in the corner. Laplace expansion
/// along the bordering column gives
/// `det B = g(x) * det(Bezout) + sum_j sign_j * D_j g * M_j`
/// where `M_j` drops row `j` in favor of the `f(x)` row.
pub struct BezoutData<F: Field> {
    n: usize,
    matrix: BezoutMatrix<F>,
    det: DoublePoly<F>,
    minors: Vec<DoublePoly<F>>,
    minor_negated: Vec<bool>,
}

impl<F: Field> BezoutData<F> {
    pub fn new(sys: &PolySystem<F>) -> Self {
        let field = sys.field().clone();
        let n = sys.n();
        let matrix = bezout_matrix(sys);
        let det = grid_det(&field, n, &matrix.entries);
        let f_row: Vec<DoublePoly<F>> = (0..n).map(|i| DoublePoly::from_x(sys.poly(i))).collect();
        let mut minors = Vec::with_capacity(n);
        let mut minor_negated = Vec::with_capacity(n);
        for j in 0..n {
            let mut grid: Vec<Vec<DoublePoly<F>>> = matrix
                .entries
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != j)
                .map(|(_, row)| row.clone())
                .collect();
            grid.push(f_row.clone());
            minors.push(grid_det(&field, n, &grid));
            // cofactor sign of entry (row j, column n) in the (n+1)-square matrix
            minor_negated.push((j + n) % 2 == 1);
        }
        BezoutData {
            n,
            matrix,
            det,
            minors,
            minor_negated,
        }
    }

    pub fn matrix(&self) -> &BezoutMatrix<F> {
        &self.matrix
    }

    pub fn det(&self) -> &DoublePoly<F> {
        &self.det
    }

    /// Bordered determinant for a borrowing polynomial `g`; linear in `g`.
    pub fn bordered(&self, g: &Poly<F>) -> DoublePoly<F> {
        assert_eq!(g.n(), self.n);
        let mut acc = DoublePoly::from_x(g).mul(&self.det);
        for j in 0..self.n {
            let dg = divided_difference(g, j);
            if dg.is_zero() {
                continue;
            }
            let term = dg.mul(&self.minors[j]);
            acc = if self.minor_negated[j] {
                acc.sub(&term)
            } else {
                acc.add(&term)
            };
        }
        acc
    }
}

/// One-shot bordered determinant; prefer [`BezoutData`] when evaluating many g.
pub fn bordered_det<F: Field>(sys: &PolySystem<F>, g: &Poly<F>) -> DoublePoly<F> {
    BezoutData::new(sys).bordered(g)
}

/// Determinant of the Jacobian matrix `(d f_i / d x_j)`, symbolically.
pub fn jacobian_det<F: Field>(sys: &PolySystem<F>) -> Poly<F> {
    let field = sys.field().clone();
    let n = sys.n();
    let grid: Vec<Vec<DoublePoly<F>>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| DoublePoly::from_x(&sys.poly(i).partial_derivative(j)))
                .collect()
        })
        .collect();
    grid_det(&field, n, &grid).diagonal()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use proptest::prelude::*;

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

    fn dp(n: usize, pairs: &[(i64, &[u32])]) -> DoublePoly<Rationals> {
        DoublePoly::from_inner(n, p(2 * n, pairs))
    }

    fn sys(polys: Vec<Poly<Rationals>>) -> PolySystem<Rationals> {
        PolySystem::new(Rationals, polys).unwrap()
    }

    #[test]
    fn divided_difference_of_square() {
        // (x^2 - y^2)/(x - y) = x + y
        let h = p(1, &[(1, &[2])]);
        assert_eq!(divided_difference(&h, 0), dp(1, &[(1, &[1, 0]), (1, &[0, 1])]));
    }

    #[test]
    fn divided_difference_of_product() {
        let h = p(2, &[(1, &[1, 1])]); // x1*x2
        assert_eq!(divided_difference(&h, 0), dp(2, &[(1, &[0, 1, 0, 0])])); // x2
        assert_eq!(divided_difference(&h, 1), dp(2, &[(1, &[0, 0, 1, 0])])); // y1
    }

    #[test]
    fn divided_difference_of_constant_vanishes() {
        let h = p(2, &[(7, &[0, 0])]);
        assert!(divided_difference(&h, 0).is_zero());
        assert!(divided_difference(&h, 1).is_zero());
    }

    #[test]
    fn bezout_matrix_univariate() {
        let s = sys(vec![p(1, &[(1, &[2]), (-1, &[0])])]);
        let m = bezout_matrix(&s);
        assert_eq!(m.entry(0, 0), &dp(1, &[(1, &[1, 0]), (1, &[0, 1])]));
    }

    #[test]
    fn bezout_matrix_diagonal_system() {
        let s = sys(vec![p(2, &[(1, &[2, 0])]), p(2, &[(1, &[0, 2])])]);
        let m = bezout_matrix(&s);
        assert_eq!(m.entry(0, 0), &dp(2, &[(1, &[1, 0, 0, 0]), (1, &[0, 0, 1, 0])]));
        assert!(m.entry(1, 0).is_zero());
        assert!(m.entry(0, 1).is_zero());
        assert_eq!(m.entry(1, 1), &dp(2, &[(1, &[0, 1, 0, 0]), (1, &[0, 0, 0, 1])]));
    }

    #[test]
    fn bezout_matrix_mixed_system() {
        // f = (x1*x2 - 1, x1 - 1): column 1 entries (x2, y1), column 2 (1, 0)
        let s = sys(vec![
            p(2, &[(1, &[1, 1]), (-1, &[0, 0])]),
            p(2, &[(1, &[1, 0]), (-1, &[0, 0])]),
        ]);
        let m = bezout_matrix(&s);
        assert_eq!(m.entry(0, 0), &dp(2, &[(1, &[0, 1, 0, 0])]));
        assert_eq!(m.entry(1, 0), &dp(2, &[(1, &[0, 0, 1, 0])]));
        assert_eq!(m.entry(0, 1), &dp(2, &[(1, &[0, 0, 0, 0])]));
        assert!(m.entry(1, 1).is_zero());
    }

    #[test]
    fn bezout_det_fixtures() {
        let s1 = sys(vec![p(1, &[(1, &[2]), (-1, &[0])])]);
        assert_eq!(bezout_det(&s1), dp(1, &[(1, &[1, 0]), (1, &[0, 1])]));

        let s2 = sys(vec![p(2, &[(1, &[2, 0])]), p(2, &[(1, &[0, 2])])]);
        assert_eq!(
            bezout_det(&s2),
            dp(
                2,
                &[
                    (1, &[1, 1, 0, 0]),
                    (1, &[1, 0, 0, 1]),
                    (1, &[0, 1, 1, 0]),
                    (1, &[0, 0, 1, 1]),
                ]
            )
        );
    }

    #[test]
    fn diagonal_equals_jacobian_determinant() {
        let fixtures = vec![
            sys(vec![p(1, &[(1, &[2]), (-1, &[0])])]),
            sys(vec![p(2, &[(1, &[2, 0])]), p(2, &[(1, &[0, 2])])]),
            sys(vec![
                p(2, &[(1, &[1, 1]), (-1, &[0, 0])]),
                p(2, &[(1, &[1, 0]), (-1, &[0, 0])]),
            ]),
        ];
        for s in fixtures {
            assert_eq!(bezout_det(&s).diagonal(), jacobian_det(&s));
        }
    }

    #[test]
    fn bordered_det_with_unit_is_bezout_det() {
        let s = sys(vec![
            p(2, &[(1, &[2, 0]), (-1, &[0, 0])]),
            p(2, &[(1, &[0, 2]), (-1, &[0, 0])]),
        ]);
        let one = Poly::one(Rationals, 2);
        assert_eq!(bordered_det(&s, &one), bezout_det(&s));
    }

    #[test]
    fn bordered_det_with_system_polynomial_vanishes() {
        let s = sys(vec![
            p(2, &[(1, &[2, 0]), (-1, &[0, 0])]),
            p(2, &[(1, &[0, 2]), (-1, &[0, 0])]),
        ]);
        for i in 0..2 {
            assert!(bordered_det(&s, s.poly(i)).is_zero(), "column {i} repeats");
        }
    }

    #[test]
    fn bordered_det_univariate_example() {
        // det [[x+y, 1], [x^2-1, x]] = xy + 1
        let s = sys(vec![p(1, &[(1, &[2]), (-1, &[0])])]);
        let g = p(1, &[(1, &[1])]);
        assert_eq!(bordered_det(&s, &g), dp(1, &[(1, &[1, 1]), (1, &[0, 0])]));
    }

    #[test]
    fn bordered_det_is_linear_in_g() {
        let s = sys(vec![
            p(2, &[(1, &[2, 0]), (-1, &[0, 0])]),
            p(2, &[(1, &[0, 2]), (-1, &[0, 0])]),
        ]);
        let data = BezoutData::new(&s);
        let g1 = p(2, &[(1, &[1, 1]), (2, &[0, 1])]);
        let g2 = p(2, &[(1, &[2, 0]), (-3, &[1, 0])]);
        let a = Rationals.from_i64(5);
        let combo = data.bordered(&g1.scale(&a).add(&g2));
        let split = data.bordered(&g1).scale(&a).add(&data.bordered(&g2));
        assert_eq!(combo, split);
    }

    #[test]
    fn degree_bounds_hold_on_fixtures() {
        let s = sys(vec![
            p(2, &[(1, &[2, 0]), (-1, &[0, 0])]),
            p(2, &[(1, &[0, 2]), (-1, &[0, 0])]),
        ]);
        let delta_f = s.delta_f();
        let det = bezout_det(&s);
        assert!(det.total_degree().unwrap() <= delta_f);
        let data = BezoutData::new(&s);
        let g = p(2, &[(1, &[1, 1])]);
        let b = data.bordered(&g);
        assert!(b.total_degree().unwrap() <= delta_f + g.degree().unwrap());
    }

    #[test]
    fn root_separation_on_simple_roots() {
        // f = (x1^2 - 1, x2^2 - 1) with roots at the four sign points
        let s = sys(vec![
            p(2, &[(1, &[2, 0]), (-1, &[0, 0])]),
            p(2, &[(1, &[0, 2]), (-1, &[0, 0])]),
        ]);
        let det = bezout_det(&s);
        let jac = jacobian_det(&s);
        let q = Rationals;
        let pts: Vec<Vec<_>> = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
            .iter()
            .map(|&(a, b)| vec![q.from_i64(a), q.from_i64(b)])
            .collect();
        for xi in &pts {
            for eta in &pts {
                let value = det.evaluate(xi, eta);
                if xi == eta {
                    assert_eq!(value, jac.evaluate(xi));
                } else {
                    assert!(q.is_zero(&value), "det must separate distinct roots");
                }
            }
        }
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = Poly<Rationals>> {
        let term = (proptest::collection::vec(0u32..=4, n), -5i64..=5);
        proptest::collection::vec(term, 0..6).prop_map(move |terms| {
            let q = Rationals;
            Poly::from_terms(
                q,
                n,
                terms.into_iter().filter_map(|(e, c)| {
                    let total: u32 = e.iter().sum();
                    (total <= 4).then(|| (Monomial::new(e), q.from_i64(c)))
                }),
            )
        })
    }

    proptest! {
        #[test]
        fn telescoping_identity(n in 1usize..=3, h in arb_poly(3)) {
            // restrict h to the first n variables
            let q = Rationals;
            let h = Poly::from_terms(
                q,
                n,
                h.terms()
                    .filter(|(m, _)| m.exponents()[n..].iter().all(|&e| e == 0))
                    .map(|(m, c)| (Monomial::new(m.exponents()[..n].to_vec()), c.clone())),
            );
            // sum_j (x_j - y_j) * D_j h == h(x) - h(y)
            let mut acc = DoublePoly::zero(q, n);
            for j in 0..n {
                let mut linear = Poly::zero(q, 2 * n);
                linear.add_term(Monomial::var(2 * n, j), q.one());
                linear.add_term(Monomial::var(2 * n, n + j), q.neg(&q.one()));
                let linear = DoublePoly::from_inner(n, linear);
                acc = acc.add(&linear.mul(&divided_difference(&h, j)));
            }
            let target = DoublePoly::from_x(&h).sub(&prefix_to_y(&h, n));
            prop_assert_eq!(acc, target);
        }
    }
}
