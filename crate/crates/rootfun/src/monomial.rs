//! Monomials with cached total degree and degree-bounded graded bases.
//!
//! The monomial order everywhere is graded lexicographic with
//! `x1 > x2 > ... > xn`: monomials compare first by total degree, then by
//! exponent vector, so a bounded basis enumerates as
//! `1, x1, x2, x1^2, x1*x2, x2^2, ...`. Doubled-variable monomials use the
//! same rule with the x block ahead of the y block.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

/// A power product of a fixed set of variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
    total_degree: u32,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        let total_degree = exponents.iter().sum();
        Monomial {
            exponents,
            total_degree,
        }
    }

    /// The constant monomial in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial {
            exponents: vec![0; n],
            total_degree: 0,
        }
    }

    /// The single variable `x_{i+1}`.
    pub fn var(n: usize, i: usize) -> Self {
        let mut exponents = vec![0; n];
        exponents[i] = 1;
        Monomial {
            exponents,
            total_degree: 1,
        }
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.total_degree
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exponents[i]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Product of monomials, i.e. componentwise exponent sum.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.n(), other.n());
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a + b)
            .collect();
        Monomial {
            exponents,
            total_degree: self.total_degree + other.total_degree,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.total_degree == 0
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree
            .cmp(&other.total_degree)
            // within a degree block x1^d comes first, so higher lex sorts lower
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Number of monomials of total degree at most `bound` in `n` variables,
/// i.e. C(n + bound, n). `None` on u64 overflow.
pub fn bounded_dimension(n: usize, bound: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for i in 1..=n as u64 {
        acc = acc.checked_mul(bound as u64 + i)?;
        acc /= i; // exact: product of i consecutive integers divides by i!
    }
    Some(acc)
}

/// All monomials of total degree at most `bound`, in graded order, with an
/// index map for coordinate lookups.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    n: usize,
    bound: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, bound: u32) -> Self {
        assert!(n >= 1, "need at least one variable");
        let mut monomials = Vec::new();
        let mut current = vec![0u32; n];
        for degree in 0..=bound {
            enumerate_degree(n, 0, degree, &mut current, &mut monomials);
        }
        let index = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        MonomialBasis {
            n,
            bound,
            monomials,
            index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Position of a monomial; `None` when its degree exceeds the bound.
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

impl PartialEq for MonomialBasis {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.bound == other.bound
    }
}

impl Eq for MonomialBasis {}

/// Emit all degree-`remaining` completions of `current[pos..]`, largest
/// leading exponent first, which is exactly the graded-lex block order.
fn enumerate_degree(
    n: usize,
    pos: usize,
    remaining: u32,
    current: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if pos == n - 1 {
        current[pos] = remaining;
        out.push(Monomial::new(current.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        enumerate_degree(n, pos + 1, remaining - e, current, out);
    }
    current[pos] = 0;
}
