//! Exact dense linear algebra over a field: reduced row echelon form,
//! null spaces, duals, membership tests and affine solves.
//!
//! Everything is deterministic: pivots are the first nonzero entry scanning
//! columns left to right, pivot entries are normalized to 1, and the null
//! space uses the unit-completion vector at each non-pivot column. Echelon
//! bases are therefore canonical per row space, which is what makes solver
//! output reproducible.

use std::fmt;

use crate::field::Field;

/// A dense vector of field elements.
#[derive(Clone, PartialEq, Eq)]
pub struct KVector<F: Field> {
    field: F,
    entries: Vec<F::Elem>,
}

impl<F: Field> KVector<F> {
    pub fn new(field: F, entries: Vec<F::Elem>) -> Self {
        KVector { field, entries }
    }

    pub fn zeros(field: F, len: usize) -> Self {
        let entries = vec![field.zero(); len];
        KVector { field, entries }
    }

    pub fn unit(field: F, len: usize, i: usize) -> Self {
        let mut v = KVector::zeros(field, len);
        v.entries[i] = v.field.one();
        v
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &F::Elem {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        KVector {
            field: self.field.clone(),
            entries,
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let entries = self.entries.iter().map(|a| self.field.mul(a, c)).collect();
        KVector {
            field: self.field.clone(),
            entries,
        }
    }

    pub fn dot(&self, other: &Self) -> F::Elem {
        debug_assert_eq!(self.len(), other.len());
        let mut acc = self.field.zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if !self.field.is_zero(a) && !self.field.is_zero(b) {
                acc = self.field.add(&acc, &self.field.mul(a, b));
            }
        }
        acc
    }
}

impl<F: Field> fmt::Debug for KVector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| self.field.format(e)).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A dense row-major matrix of field elements.
#[derive(Clone, PartialEq, Eq)]
pub struct KMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    entries: Vec<F::Elem>,
}

impl<F: Field> KMatrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let entries = vec![field.zero(); rows * cols];
        KMatrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(field: F, dim: usize) -> Self {
        let mut m = KMatrix::zeros(field, dim, dim);
        for i in 0..dim {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(field: F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        let mut m = KMatrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> KVector<F> {
        KVector::new(self.field.clone(), self.row(r).to_vec())
    }

    /// Matrix-vector product `m * v`.
    pub fn apply(&self, v: &KVector<F>) -> KVector<F> {
        assert_eq!(v.len(), self.cols);
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            out.push(KVector::new(self.field.clone(), self.row(r).to_vec()).dot(v));
        }
        KVector::new(self.field.clone(), out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<F: Field> fmt::Debug for KMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row_vector(r))?;
        }
        write!(f, "]")
    }
}

/// A reduced row echelon basis of a row space: pivot entries are 1, pivot
/// columns are elsewhere zero, zero rows are dropped.
#[derive(Clone, PartialEq, Eq)]
pub struct EchelonBasis<F: Field> {
    matrix: KMatrix<F>,
    pivot_cols: Vec<usize>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn matrix(&self) -> &KMatrix<F> {
        &self.matrix
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.cols()
    }

    /// The empty basis (zero subspace) of the given ambient dimension.
    pub fn empty(field: F, ambient_dim: usize) -> Self {
        EchelonBasis {
            matrix: KMatrix::zeros(field, 0, ambient_dim),
            pivot_cols: Vec::new(),
        }
    }

    pub fn row_vectors(&self) -> Vec<KVector<F>> {
        (0..self.rank()).map(|r| self.matrix.row_vector(r)).collect()
    }

    /// Reduce a vector against the basis rows, returning the remainder.
    pub fn reduce(&self, v: &KVector<F>) -> KVector<F> {
        assert_eq!(v.len(), self.ambient_dim());
        let field = self.matrix.field().clone();
        let mut out = v.entries().to_vec();
        for (r, &c) in self.pivot_cols.iter().enumerate() {
            let factor = out[c].clone();
            if field.is_zero(&factor) {
                continue;
            }
            for j in 0..out.len() {
                let delta = field.mul(&factor, self.matrix.get(r, j));
                out[j] = field.sub(&out[j], &delta);
            }
        }
        KVector::new(field, out)
    }

    /// True when two echelon bases span the same row space.
    pub fn same_span(&self, other: &Self) -> bool {
        // reduced echelon form is canonical, so structural equality decides
        self == other
    }
}

impl<F: Field> fmt::Debug for EchelonBasis<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EchelonBasis(pivots {:?}) {:?}", self.pivot_cols, self.matrix)
    }
}

/// Reduced row echelon form by exact Gaussian elimination.
///
/// The pivot of each step is the first nonzero entry scanning columns left to
/// right; no magnitude-based pivoting is needed over exact fields.
pub fn row_reduce<F: Field>(m: &KMatrix<F>) -> EchelonBasis<F> {
    let field = m.field().clone();
    let mut work = m.clone();
    let mut pivot_cols = Vec::new();
    let mut next_row = 0;
    for col in 0..work.cols() {
        if next_row >= work.rows() {
            break;
        }
        let pivot_row = (next_row..work.rows()).find(|&r| !field.is_zero(work.get(r, col)));
        let Some(pivot_row) = pivot_row else { continue };
        work.swap_rows(next_row, pivot_row);
        // normalize the pivot to 1
        let inv = field
            .inv(work.get(next_row, col))
            .expect("pivot entry is nonzero");
        for j in col..work.cols() {
            let v = field.mul(work.get(next_row, j), &inv);
            work.set(next_row, j, v);
        }
        // eliminate the pivot column from every other row
        for r in 0..work.rows() {
            if r == next_row || field.is_zero(work.get(r, col)) {
                continue;
            }
            let factor = work.get(r, col).clone();
            for j in col..work.cols() {
                let delta = field.mul(&factor, work.get(next_row, j));
                let v = field.sub(work.get(r, j), &delta);
                work.set(r, j, v);
            }
        }
        pivot_cols.push(col);
        next_row += 1;
    }
    let mut matrix = KMatrix::zeros(field, pivot_cols.len(), work.cols());
    for r in 0..pivot_cols.len() {
        for c in 0..work.cols() {
            matrix.set(r, c, work.get(r, c).clone());
        }
    }
    EchelonBasis { matrix, pivot_cols }
}

/// Echelonize a list of row vectors.
pub fn row_reduce_vectors<F: Field>(
    field: &F,
    cols: usize,
    rows: &[KVector<F>],
) -> EchelonBasis<F> {
    let m = KMatrix::from_rows(
        field.clone(),
        cols,
        rows.iter().map(|v| v.entries().to_vec()).collect(),
    );
    row_reduce(&m)
}

/// Basis of `{v : m * v = 0}`, one unit-completion vector per non-pivot
/// column of the reduced echelon form, in column order.
pub fn null_space<F: Field>(m: &KMatrix<F>) -> Vec<KVector<F>> {
    null_space_of_echelon(&row_reduce(m))
}

fn null_space_of_echelon<F: Field>(basis: &EchelonBasis<F>) -> Vec<KVector<F>> {
    let field = basis.matrix().field().clone();
    let cols = basis.ambient_dim();
    let pivots = basis.pivot_cols();
    let mut out = Vec::with_capacity(cols - pivots.len());
    for free_col in 0..cols {
        if pivots.contains(&free_col) {
            continue;
        }
        let mut v = vec![field.zero(); cols];
        v[free_col] = field.one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(basis.matrix().get(r, free_col));
        }
        out.push(KVector::new(field.clone(), v));
    }
    out
}

/// Basis of the annihilator `{l : l . v = 0 for all v in rowspace(sub)}`
/// inside the dual of the ambient space.
pub fn annihilator_in_dual<F: Field>(
    sub: &EchelonBasis<F>,
    ambient_dim: usize,
) -> Vec<KVector<F>> {
    assert_eq!(sub.ambient_dim(), ambient_dim);
    null_space_of_echelon(sub)
}

/// True when `v` reduces to zero against the basis.
pub fn member<F: Field>(sub: &EchelonBasis<F>, v: &KVector<F>) -> bool {
    sub.reduce(v).is_zero()
}

/// Coefficients `c` with `sum c_i * columns_i = target`, or `None` when the
/// target is outside the span. Free coefficients are set to zero, making the
/// solution deterministic.
pub fn solve_affine<F: Field>(columns: &[KVector<F>], target: &KVector<F>) -> Option<Vec<F::Elem>> {
    let field = target.field().clone();
    let len = target.len();
    for c in columns {
        assert_eq!(c.len(), len);
    }
    // augmented system [A | t] with the given vectors as columns of A
    let mut m = KMatrix::zeros(field.clone(), len, columns.len() + 1);
    for (j, c) in columns.iter().enumerate() {
        for i in 0..len {
            m.set(i, j, c.entry(i).clone());
        }
    }
    for i in 0..len {
        m.set(i, columns.len(), target.entry(i).clone());
    }
    let echelon = row_reduce(&m);
    if echelon.pivot_cols().contains(&columns.len()) {
        return None; // inconsistent: pivot in the augmented column
    }
    let mut coeffs = vec![field.zero(); columns.len()];
    for (r, &p) in echelon.pivot_cols().iter().enumerate() {
        coeffs[p] = echelon.matrix().get(r, columns.len()).clone();
    }
    Some(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use proptest::prelude::*;

    fn q(n: i64) -> num_rational::BigRational {
        Rationals.from_i64(n)
    }

    fn mat(rows: &[&[i64]]) -> KMatrix<Rationals> {
        KMatrix::from_rows(
            Rationals,
            rows[0].len(),
            rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(),
        )
    }

    fn vec_q(entries: &[i64]) -> KVector<Rationals> {
        KVector::new(Rationals, entries.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn reduce_drops_zero_rows_and_normalizes() {
        let e = row_reduce(&mat(&[&[2, 0], &[0, 0]]));
        assert_eq!(e.rank(), 1);
        assert_eq!(e.pivot_cols(), &[0]);
        assert_eq!(e.matrix().row(0), vec_q(&[1, 0]).entries());
    }

    #[test]
    fn identity_reduces_to_itself() {
        let m = KMatrix::identity(Rationals, 4);
        let e = row_reduce(&m);
        assert_eq!(e.rank(), 4);
        assert_eq!(e.matrix(), &m);
    }

    #[test]
    fn row_space_preserved_for_shifted_multiples() {
        // rows f*1, f*x for f = x^2 - 1 over monomials of degree <= 3
        let m = mat(&[&[-1, 0, 1, 0], &[0, -1, 0, 1]]);
        let e = row_reduce(&m);
        assert_eq!(e.rank(), 2);
        // row space equals span{x^2 - 1, x^3 - x}: check membership both ways
        assert!(member(&e, &vec_q(&[-1, 0, 1, 0])));
        assert!(member(&e, &vec_q(&[0, -1, 0, 1])));
        for row in e.row_vectors() {
            let back = row_reduce(&mat(&[&[-1, 0, 1, 0], &[0, -1, 0, 1]]));
            assert!(member(&back, &row));
        }
    }

    #[test]
    fn null_space_of_zero_matrix_is_everything() {
        let m = KMatrix::zeros(Rationals, 1, 3);
        let ns = null_space(&m);
        assert_eq!(ns.len(), 3);
        for (i, v) in ns.iter().enumerate() {
            assert_eq!(v, &KVector::unit(Rationals, 3, i));
        }
    }

    #[test]
    fn null_space_of_sum_constraint() {
        let ns = null_space(&mat(&[&[1, 1]]));
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec_q(&[-1, 1]));
    }

    #[test]
    fn null_space_of_monomial_ideal_rows() {
        // rows x1^2, x2^2 over the 6-monomial basis of degree <= 2
        let m = mat(&[&[0, 0, 0, 1, 0, 0], &[0, 0, 0, 0, 0, 1]]);
        let ns = null_space(&m);
        assert_eq!(ns.len(), 4);
        // coordinate functionals at 1, x1, x2, x1x2
        for (v, expect) in ns.iter().zip([0usize, 1, 2, 4]) {
            assert_eq!(v, &KVector::unit(Rationals, 6, expect));
        }
    }

    #[test]
    fn annihilator_edge_cases() {
        let full = row_reduce(&KMatrix::identity(Rationals, 3));
        assert!(annihilator_in_dual(&full, 3).is_empty());
        let zero = EchelonBasis::empty(Rationals, 3);
        let ann = annihilator_in_dual(&zero, 3);
        assert_eq!(ann.len(), 3);
    }

    #[test]
    fn member_edge_cases() {
        let e = row_reduce(&mat(&[&[1, 0]]));
        assert!(member(&e, &vec_q(&[0, 0])));
        assert!(!member(&e, &vec_q(&[0, 1])));
        assert!(member(&e, &vec_q(&[5, 0])));
    }

    #[test]
    fn solve_affine_examples() {
        let e1 = KVector::unit(Rationals, 2, 0);
        let e2 = KVector::unit(Rationals, 2, 1);
        let coeffs = solve_affine(&[e1.clone(), e2], &vec_q(&[1, 2])).unwrap();
        assert_eq!(coeffs, vec![q(1), q(2)]);
        assert_eq!(solve_affine(&[e1], &vec_q(&[0, 1])), None);
    }

    fn arb_matrix() -> impl Strategy<Value = KMatrix<Rationals>> {
        (1usize..5, 1usize..6).prop_flat_map(|(rows, cols)| {
            proptest::collection::vec(-4i64..=4, rows * cols).prop_map(move |vals| {
                let mut m = KMatrix::zeros(Rationals, rows, cols);
                for r in 0..rows {
                    for c in 0..cols {
                        m.set(r, c, q(vals[r * cols + c]));
                    }
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn null_space_vectors_are_kernel_elements(m in arb_matrix()) {
            let ns = null_space(&m);
            let rank = row_reduce(&m).rank();
            prop_assert_eq!(ns.len(), m.cols() - rank);
            for v in &ns {
                prop_assert!(m.apply(v).is_zero());
            }
        }

        #[test]
        fn row_reduce_is_a_projection(m in arb_matrix()) {
            let e = row_reduce(&m);
            let again = row_reduce(e.matrix());
            prop_assert!(e.same_span(&again));
        }

        #[test]
        fn duality_dimension_law(m in arb_matrix()) {
            let e = row_reduce(&m);
            let ann = annihilator_in_dual(&e, m.cols());
            prop_assert_eq!(e.rank() + ann.len(), m.cols());
        }

        #[test]
        fn double_annihilator_restores_row_space(m in arb_matrix()) {
            let e = row_reduce(&m);
            let ann = row_reduce_vectors(&Rationals, m.cols(), &annihilator_in_dual(&e, m.cols()));
            let back = row_reduce_vectors(
                &Rationals,
                m.cols(),
                &annihilator_in_dual(&ann, m.cols()),
            );
            // same row space, checked by mutual membership
            for row in e.row_vectors() {
                prop_assert!(member(&back, &row));
            }
            for row in back.row_vectors() {
                prop_assert!(member(&e, &row));
            }
        }

        #[test]
        fn solve_affine_resubstitutes(m in arb_matrix(), coeffs in proptest::collection::vec(-3i64..=3, 1..5)) {
            let columns: Vec<KVector<Rationals>> =
                (0..m.rows()).map(|r| m.row_vector(r)).collect();
            let k = columns.len().min(coeffs.len());
            let mut target = KVector::zeros(Rationals, m.cols());
            for i in 0..k {
                target = target.add(&columns[i].scale(&q(coeffs[i])));
            }
            let sol = solve_affine(&columns, &target).expect("target is in the span");
            let mut rebuilt = KVector::zeros(Rationals, m.cols());
            for (c, col) in sol.iter().zip(&columns) {
                rebuilt = rebuilt.add(&col.scale(c));
            }
            prop_assert_eq!(rebuilt, target);
        }
    }
}
