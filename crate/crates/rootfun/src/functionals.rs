//! Bounded functionals on the degree-bounded polynomial space and the
//! extension operation between them.
//!
//! A functional is stored as its value vector over the graded monomial basis
//! of degree at most `delta_f`, and is implicitly extended by zero to all
//! higher degrees. The extension operator `[L]` of a functional is the D-by-D
//! matrix whose column at a basis monomial `g` holds the coordinates of
//! `L(y) . B(x, y; g)` truncated back to the bounded space, where `B` is the
//! bordered Bezoutian determinant. Composing value vectors with such
//! operators realizes the product `L1 * L2` of bounded root functionals.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::bezoutian::BezoutData;
use crate::field::Field;
use crate::linalg::{KMatrix, KVector};
use crate::monomial::MonomialBasis;
use crate::poly::{DoublePoly, Poly, PolySystem};

/// A linear functional on polynomials of degree at most the basis bound,
/// zero-extended beyond it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundedFunctional<F: Field> {
    basis: Arc<MonomialBasis>,
    values: KVector<F>,
}

impl<F: Field> BoundedFunctional<F> {
    pub fn new(basis: Arc<MonomialBasis>, values: KVector<F>) -> Self {
        assert_eq!(values.len(), basis.len());
        BoundedFunctional { basis, values }
    }

    pub fn zero(field: F, basis: Arc<MonomialBasis>) -> Self {
        let values = KVector::zeros(field, basis.len());
        BoundedFunctional { basis, values }
    }

    /// The coordinate functional dual to the basis monomial at `index`.
    pub fn coordinate(field: F, basis: Arc<MonomialBasis>, index: usize) -> Self {
        let values = KVector::unit(field, basis.len(), index);
        BoundedFunctional { basis, values }
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn values(&self) -> &KVector<F> {
        &self.values
    }

    pub fn field(&self) -> &F {
        self.values.field()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_zero()
    }

    /// Value on a polynomial: terms beyond the basis bound contribute zero.
    pub fn apply(&self, p: &Poly<F>) -> F::Elem {
        let field = self.field().clone();
        let mut acc = field.zero();
        for (m, c) in p.terms() {
            if let Some(i) = self.basis.index_of(m) {
                acc = field.add(&acc, &field.mul(c, self.values.entry(i)));
            }
        }
        acc
    }

    /// Contract the y block of a doubled polynomial against this functional:
    /// writing `q = sum_beta y^beta c_beta(x)`, returns
    /// `sum_beta l(y^beta) c_beta(x)` with values beyond the bound taken as 0.
    pub fn apply_y(&self, q: &DoublePoly<F>) -> Poly<F> {
        let field = self.field().clone();
        let mut out = Poly::zero(field.clone(), q.n());
        for (m, c) in q.terms() {
            let (x_part, y_part) = q.split_monomial(m);
            if let Some(i) = self.basis.index_of(&y_part) {
                let weight = self.values.entry(i);
                if !field.is_zero(weight) {
                    out.add_term(x_part, field.mul(c, weight));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.basis, other.basis);
        BoundedFunctional {
            basis: self.basis.clone(),
            values: self.values.add(&other.values),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        BoundedFunctional {
            basis: self.basis.clone(),
            values: self.values.scale(c),
        }
    }

    pub fn neg(&self) -> Self {
        let field = self.field().clone();
        self.scale(&field.neg(&field.one()))
    }
}

/// Linear combination `sum coeffs_i * functionals_i`.
pub fn linear_combination<F: Field>(
    field: &F,
    basis: &Arc<MonomialBasis>,
    coeffs: &[F::Elem],
    functionals: &[BoundedFunctional<F>],
) -> BoundedFunctional<F> {
    debug_assert_eq!(coeffs.len(), functionals.len());
    let mut acc = BoundedFunctional::zero(field.clone(), basis.clone());
    for (c, l) in coeffs.iter().zip(functionals) {
        if !field.is_zero(c) {
            acc = acc.add(&l.scale(c));
        }
    }
    acc
}

/// The restriction of the operator `[L]` to the bounded space, as a dense
/// matrix acting on coordinate columns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtensionOperator<F: Field> {
    matrix: KMatrix<F>,
}

impl<F: Field> ExtensionOperator<F> {
    pub fn matrix(&self) -> &KMatrix<F> {
        &self.matrix
    }
}

/// Compose a functional with an operator (row vector times matrix): this is
/// the restricted extension product `l1 * l2` when `op2 = [l2]`.
pub fn extend<F: Field>(
    l1: &BoundedFunctional<F>,
    op2: &ExtensionOperator<F>,
) -> BoundedFunctional<F> {
    let field = l1.field().clone();
    let dim = l1.values().len();
    assert_eq!(op2.matrix.rows(), dim);
    assert_eq!(op2.matrix.cols(), dim);
    let mut out = vec![field.zero(); dim];
    for row in 0..dim {
        let weight = l1.values().entry(row);
        if field.is_zero(weight) {
            continue;
        }
        for (col, slot) in out.iter_mut().enumerate() {
            let m = op2.matrix.get(row, col);
            if !field.is_zero(m) {
                *slot = field.add(slot, &field.mul(weight, m));
            }
        }
    }
    BoundedFunctional::new(l1.basis().clone(), KVector::new(field, out))
}

/// Shared per-system state for extension computations: the bounded basis,
/// the Bezoutian data, and a cache of operators keyed by functional values.
pub struct ExtensionContext<F: Field> {
    system: PolySystem<F>,
    basis: Arc<MonomialBasis>,
    bezout: BezoutData<F>,
    operator_cache: Mutex<HashMap<Vec<F::Elem>, Arc<ExtensionOperator<F>>>>,
}

impl<F: Field> ExtensionContext<F> {
    pub fn new(system: PolySystem<F>) -> Self {
        let basis = Arc::new(MonomialBasis::new(system.n(), system.delta_f()));
        assert_eq!(basis.len() as u64, system.dimension());
        let bezout = BezoutData::new(&system);
        ExtensionContext {
            system,
            basis,
            bezout,
            operator_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn system(&self) -> &PolySystem<F> {
        &self.system
    }

    pub fn field(&self) -> &F {
        self.system.field()
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn bezout(&self) -> &BezoutData<F> {
        &self.bezout
    }

    pub fn zero_functional(&self) -> BoundedFunctional<F> {
        BoundedFunctional::zero(self.field().clone(), self.basis.clone())
    }

    pub fn functional_from_vector(&self, values: KVector<F>) -> BoundedFunctional<F> {
        BoundedFunctional::new(self.basis.clone(), values)
    }

    /// The extension operator of `l`, built once per distinct value vector.
    /// Concurrent callers may race to build equal operators; the cache keeps
    /// whichever lands first.
    pub fn extension_operator(&self, l: &BoundedFunctional<F>) -> Arc<ExtensionOperator<F>> {
        let key = l.values().entries().to_vec();
        if let Some(op) = self.operator_cache.lock().unwrap().get(&key) {
            return op.clone();
        }
        let op = Arc::new(self.build_operator(l));
        let mut cache = self.operator_cache.lock().unwrap();
        cache.entry(key).or_insert(op).clone()
    }

    fn build_operator(&self, l: &BoundedFunctional<F>) -> ExtensionOperator<F> {
        let field = self.field().clone();
        let dim = self.dimension();
        let delta_f = self.system.delta_f();
        let mut matrix = KMatrix::zeros(field.clone(), dim, dim);
        for col in 0..dim {
            let g = Poly::term(field.clone(), self.basis.monomial(col).clone(), field.one());
            let bordered = self.bezout.bordered(&g);
            let column = l.apply_y(&bordered).truncate(delta_f);
            let coords = column
                .coefficient_vector(&self.basis)
                .expect("truncated to the basis bound");
            for (row, v) in coords.into_iter().enumerate() {
                if !field.is_zero(&v) {
                    matrix.set(row, col, v);
                }
            }
        }
        ExtensionOperator { matrix }
    }

    /// Iterated extension power `l^k` (k >= 1), reusing one operator.
    pub fn power(&self, l: &BoundedFunctional<F>, k: usize) -> BoundedFunctional<F> {
        assert!(k >= 1);
        if k == 1 {
            return l.clone();
        }
        let op = self.extension_operator(l);
        let mut acc = l.clone();
        for _ in 1..k {
            acc = extend(&acc, &op);
        }
        acc
    }

    /// The annihilation test: `l` annihilates the degree-bounded ideal slice
    /// exactly when it kills every product `f_i * x^alpha` that fits the
    /// bound.
    pub fn annihilates_truncated_ideal(&self, l: &BoundedFunctional<F>) -> bool {
        let field = self.field();
        let delta_f = self.system.delta_f();
        for (i, f_i) in self.system.polys().iter().enumerate() {
            let d_i = self.system.degrees()[i];
            if d_i > delta_f {
                continue;
            }
            let budget = delta_f - d_i;
            for m in self.basis.monomials() {
                if m.total_degree() > budget {
                    break;
                }
                if !field.is_zero(&l.apply(&f_i.mul_monomial(m))) {
                    return false;
                }
            }
        }
        true
    }
}
