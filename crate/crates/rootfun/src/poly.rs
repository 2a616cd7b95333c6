//! Sparse multivariate polynomials over an exact field, their doubled-variable
//! counterparts, and validated square systems.
//!
//! Terms are kept in a `BTreeMap` keyed by the graded monomial order, with no
//! stored zero coefficients. The zero polynomial is the empty term map and has
//! no degree; callers branch on [`Poly::degree`] returning `None`.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::Field;
use crate::monomial::{bounded_dimension, Monomial, MonomialBasis};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly<F: Field> {
    field: F,
    n: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn zero(field: F, n: usize) -> Self {
        Poly {
            field,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: F, n: usize, value: F::Elem) -> Self {
        let mut p = Poly::zero(field, n);
        p.add_term(Monomial::one(n), value);
        p
    }

    pub fn one(field: F, n: usize) -> Self {
        let value = field.one();
        Poly::constant(field, n, value)
    }

    /// The variable `x_{i+1}` as a polynomial.
    pub fn var(field: F, n: usize, i: usize) -> Self {
        let mut p = Poly::zero(field.clone(), n);
        p.add_term(Monomial::var(n, i), field.one());
        p
    }

    pub fn term(field: F, monomial: Monomial, coeff: F::Elem) -> Self {
        let n = monomial.n();
        let mut p = Poly::zero(field, n);
        p.add_term(monomial, coeff);
        p
    }

    pub fn from_terms<I>(field: F, n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, F::Elem)>,
    {
        let mut p = Poly::zero(field, n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Add a single term, merging and dropping zeros.
    pub fn add_term(&mut self, monomial: Monomial, coeff: F::Elem) {
        debug_assert_eq!(monomial.n(), self.n);
        if self.field.is_zero(&coeff) {
            return;
        }
        match self.terms.remove(&monomial) {
            None => {
                self.terms.insert(monomial, coeff);
            }
            Some(old) => {
                let sum = self.field.add(&old, &coeff);
                if !self.field.is_zero(&sum) {
                    self.terms.insert(monomial, sum);
                }
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Poly::zero(self.field.clone(), self.n);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), self.field.neg(c));
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Poly::zero(self.field.clone(), self.n);
        }
        let mut out = Poly::zero(self.field.clone(), self.n);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), self.field.mul(v, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = Poly::zero(self.field.clone(), self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.field.mul(ca, cb));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = Poly::zero(self.field.clone(), self.n);
        for (ma, ca) in &self.terms {
            out.terms.insert(ma.mul(m), ca.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::one(self.field.clone(), self.n);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Keep exactly the terms of total degree at most `d`.
    pub fn truncate(&self, d: u32) -> Self {
        let mut out = Poly::zero(self.field.clone(), self.n);
        for (m, c) in &self.terms {
            if m.total_degree() <= d {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.n, "evaluation point has wrong arity");
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    term = self.field.mul(&term, &point[i]);
                }
            }
            acc = self.field.add(&acc, &term);
        }
        acc
    }

    pub fn partial_derivative(&self, j: usize) -> Self {
        let mut out = Poly::zero(self.field.clone(), self.n);
        for (m, c) in &self.terms {
            let e = m.exponent(j);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[j] = e - 1;
            let factor = self.field.from_i64(e as i64);
            out.add_term(Monomial::new(exps), self.field.mul(c, &factor));
        }
        out
    }

    /// Coordinates over a bounded basis; `None` when some term exceeds the bound.
    pub fn coefficient_vector(&self, basis: &MonomialBasis) -> Option<Vec<F::Elem>> {
        let mut out = vec![self.field.zero(); basis.len()];
        for (m, c) in &self.terms {
            let i = basis.index_of(m)?;
            out[i] = c.clone();
        }
        Some(out)
    }

    pub fn from_coefficient_vector(field: F, basis: &MonomialBasis, coords: &[F::Elem]) -> Self {
        debug_assert_eq!(coords.len(), basis.len());
        let mut p = Poly::zero(field, basis.n());
        for (i, c) in coords.iter().enumerate() {
            if !p.field.is_zero(c) {
                p.terms.insert(basis.monomial(i).clone(), c.clone());
            }
        }
        p
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*{:?}", self.field.format(c), m)?;
        }
        Ok(())
    }
}

/// A polynomial in doubled variables `(x_1..x_n, y_1..y_n)`, with the x block
/// stored ahead of the y block under the same graded order.
#[derive(Clone, PartialEq, Eq)]
pub struct DoublePoly<F: Field> {
    n: usize,
    poly: Poly<F>,
}

impl<F: Field> DoublePoly<F> {
    pub fn zero(field: F, n: usize) -> Self {
        DoublePoly {
            n,
            poly: Poly::zero(field, 2 * n),
        }
    }

    /// Embed an x-polynomial as a polynomial in the x block only.
    pub fn from_x(p: &Poly<F>) -> Self {
        let n = p.n();
        let mut out = DoublePoly::zero(p.field().clone(), n);
        for (m, c) in p.terms() {
            let mut exps = m.exponents().to_vec();
            exps.extend(std::iter::repeat(0).take(n));
            out.poly.terms.insert(Monomial::new(exps), c.clone());
        }
        out
    }

    /// Embed an x-polynomial as the same polynomial in the y block.
    pub fn from_y(p: &Poly<F>) -> Self {
        let n = p.n();
        let mut out = DoublePoly::zero(p.field().clone(), n);
        for (m, c) in p.terms() {
            let mut exps = vec![0u32; n];
            exps.extend_from_slice(m.exponents());
            out.poly.terms.insert(Monomial::new(exps), c.clone());
        }
        out
    }

    pub fn from_inner(n: usize, poly: Poly<F>) -> Self {
        debug_assert_eq!(poly.n(), 2 * n);
        DoublePoly { n, poly }
    }

    pub fn field(&self) -> &F {
        self.poly.field()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn inner(&self) -> &Poly<F> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.poly.degree()
    }

    pub fn term_count(&self) -> usize {
        self.poly.term_count()
    }

    pub fn add(&self, other: &Self) -> Self {
        DoublePoly {
            n: self.n,
            poly: self.poly.add(&other.poly),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        DoublePoly {
            n: self.n,
            poly: self.poly.sub(&other.poly),
        }
    }

    pub fn neg(&self) -> Self {
        DoublePoly {
            n: self.n,
            poly: self.poly.neg(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        DoublePoly {
            n: self.n,
            poly: self.poly.scale(c),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        DoublePoly {
            n: self.n,
            poly: self.poly.mul(&other.poly),
        }
    }

    /// Split a term monomial of the doubled ring into its x and y parts.
    pub fn split_monomial(&self, m: &Monomial) -> (Monomial, Monomial) {
        let exps = m.exponents();
        (
            Monomial::new(exps[..self.n].to_vec()),
            Monomial::new(exps[self.n..].to_vec()),
        )
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.poly.terms()
    }

    /// Substitute `y := x`, collapsing to an x-polynomial.
    pub fn diagonal(&self) -> Poly<F> {
        let mut out = Poly::zero(self.field().clone(), self.n);
        for (m, c) in self.poly.terms() {
            let exps = m.exponents();
            let merged: Vec<u32> = (0..self.n).map(|i| exps[i] + exps[self.n + i]).collect();
            out.add_term(Monomial::new(merged), c.clone());
        }
        out
    }

    pub fn evaluate(&self, x_point: &[F::Elem], y_point: &[F::Elem]) -> F::Elem {
        assert_eq!(x_point.len(), self.n);
        assert_eq!(y_point.len(), self.n);
        let mut point = x_point.to_vec();
        point.extend_from_slice(y_point);
        self.poly.evaluate(&point)
    }
}

impl<F: Field> fmt::Debug for DoublePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.poly)
    }
}

/// Errors from assembling a [`PolySystem`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemError {
    Empty,
    ArityMismatch { poly: usize, expected: usize, got: usize },
    ZeroPolynomial(usize),
    ConstantPolynomial(usize),
    DimensionOverflow,
}

impl fmt::Display for SystemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemError::Empty => write!(f, "system has no polynomials"),
            SystemError::ArityMismatch { poly, expected, got } => write!(
                f,
                "polynomial {} is in {} variables, expected {}",
                poly + 1,
                got,
                expected
            ),
            SystemError::ZeroPolynomial(i) => write!(f, "polynomial {} is zero", i + 1),
            SystemError::ConstantPolynomial(i) => {
                write!(f, "polynomial {} is constant", i + 1)
            }
            SystemError::DimensionOverflow => {
                write!(f, "bounded basis dimension overflows 64 bits")
            }
        }
    }
}

impl std::error::Error for SystemError {}

/// A square system of `n` polynomials in `n` variables with its derived
/// degree data: `d_i = deg f_i`, the critical bound `delta_f = sum(d_i - 1)`,
/// and the bounded-space dimension `D = C(n + delta_f, n)`.
#[derive(Clone, Debug)]
pub struct PolySystem<F: Field> {
    field: F,
    n: usize,
    polys: Vec<Poly<F>>,
    degrees: Vec<u32>,
    delta_f: u32,
    dimension: u64,
}

impl<F: Field> PolySystem<F> {
    pub fn new(field: F, polys: Vec<Poly<F>>) -> Result<Self, SystemError> {
        if polys.is_empty() {
            return Err(SystemError::Empty);
        }
        let n = polys.len();
        let mut degrees = Vec::with_capacity(n);
        for (i, p) in polys.iter().enumerate() {
            if p.n() != n {
                return Err(SystemError::ArityMismatch {
                    poly: i,
                    expected: n,
                    got: p.n(),
                });
            }
            match p.degree() {
                None => return Err(SystemError::ZeroPolynomial(i)),
                Some(0) => return Err(SystemError::ConstantPolynomial(i)),
                Some(d) => degrees.push(d),
            }
        }
        let delta_f = degrees.iter().map(|d| d - 1).sum();
        let dimension = bounded_dimension(n, delta_f).ok_or(SystemError::DimensionOverflow)?;
        Ok(PolySystem {
            field,
            n,
            polys,
            degrees,
            delta_f,
            dimension,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn polys(&self) -> &[Poly<F>] {
        &self.polys
    }

    pub fn poly(&self, i: usize) -> &Poly<F> {
        &self.polys[i]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn delta_f(&self) -> u32 {
        self.delta_f
    }

    /// D = C(n + delta_f, n), the dimension of the bounded polynomial space.
    pub fn dimension(&self) -> u64 {
        self.dimension
    }
}
