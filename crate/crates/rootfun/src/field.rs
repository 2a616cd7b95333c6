//! Exact coefficient fields: arbitrary-precision rationals and prime fields.
//!
//! Every scalar is kept in canonical form (reduced fraction with positive
//! denominator, or least non-negative residue), so structural equality is
//! semantic equality. All arithmetic goes through the [`Field`] trait and is
//! counted by a global operation counter used by the scaling tests.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

static FIELD_OPS: AtomicU64 = AtomicU64::new(0);

/// Reset the global field-operation counter to zero.
pub fn reset_op_count() {
    FIELD_OPS.store(0, Ordering::Relaxed);
}

/// Number of scalar field operations (add/sub/neg/mul/div/inv) since the last reset.
pub fn op_count() -> u64 {
    FIELD_OPS.load(Ordering::Relaxed)
}

#[inline]
fn tick() {
    FIELD_OPS.fetch_add(1, Ordering::Relaxed);
}

/// An exact field of scalars.
///
/// Implementations must keep elements in a unique canonical form so that
/// `==` on elements decides equality in the field.
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Canonical text form, e.g. `-3/4` over the rationals or `17` mod p.
    fn format(&self, a: &Self::Elem) -> String;

    /// Parse the canonical text form back; also accepts plain integers.
    fn parse(&self, s: &str) -> Option<Self::Elem>;

    /// Field name for certificates and diagnostics.
    fn describe(&self) -> String;
}

/// The field of arbitrary-precision rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        tick();
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        tick();
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        tick();
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        tick();
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            return None;
        }
        tick();
        Some(a.recip())
    }

    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn parse(&self, s: &str) -> Option<BigRational> {
        match s.split_once('/') {
            Some((num, den)) => {
                let n = BigInt::from_str(num.trim()).ok()?;
                let d = BigInt::from_str(den.trim()).ok()?;
                if d.is_zero() {
                    None
                } else {
                    Some(BigRational::new(n, d))
                }
            }
            None => {
                let n = BigInt::from_str(s.trim()).ok()?;
                Some(BigRational::from_integer(n))
            }
        }
    }

    fn describe(&self) -> String {
        "Q".to_string()
    }
}

/// The prime field GF(p), elements stored as least non-negative residues.
///
/// The modulus must be below 2^63 so that sums of two residues never
/// overflow `u64`; products go through `u128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Construct GF(p). Fails when `p` is not prime or does not fit.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 63 {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u64),
    ModulusTooLarge(u64),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::ModulusTooLarge(p) => write!(f, "modulus {p} does not fit in 63 bits"),
        }
    }
}

impl std::error::Error for FieldError {}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        tick();
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        tick();
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        tick();
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        tick();
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        tick();
        // Extended Euclid on (a, p); p prime, so gcd(a, p) = 1.
        let (mut r0, mut r1) = (*a as i128, self.p as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(s0.rem_euclid(self.p as i128) as u64)
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Option<u64> {
        let t = s.trim();
        let (negative, digits) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let mut acc: u64 = 0;
        for b in digits.bytes() {
            let d = (b - b'0') as u64;
            acc = ((acc as u128 * 10 + d as u128) % self.p as u128) as u64;
        }
        if negative && acc != 0 {
            acc = self.p - acc;
        }
        Some(acc)
    }

    fn describe(&self) -> String {
        format!("Fp {}", self.p)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set below is exact for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_canonical_form() {
        let q = Rationals;
        let half = q.div(&q.from_i64(2), &q.from_i64(4)).unwrap();
        assert_eq!(q.format(&half), "1/2");
        let neg = q.div(&q.from_i64(3), &q.from_i64(-6)).unwrap();
        assert_eq!(q.format(&neg), "-1/2");
        assert_eq!(q.parse("-1/2"), Some(neg));
        assert_eq!(q.parse("7"), Some(q.from_i64(7)));
        assert_eq!(q.parse("1/0"), None);
    }

    #[test]
    fn prime_field_basics() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.add(&5, &4), 2);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.parse("-2"), Some(5));
        let big = 100000000000000000000000u128;
        assert_eq!(f.parse("100000000000000000000000"), Some((big % 7) as u64));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(matches!(PrimeField::new(32001), Err(FieldError::NotPrime(_))));
        assert!(PrimeField::new(32003).is_ok());
        assert!(matches!(
            PrimeField::new(1 << 63),
            Err(FieldError::ModulusTooLarge(_))
        ));
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(32003));
        assert!(is_prime_u64(4294967291));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(4294967295));
        // strong pseudoprime to base 2
        assert!(!is_prime_u64(3215031751));
    }

    #[test]
    fn op_counter_increments() {
        let f = PrimeField::new(32003).unwrap();
        reset_op_count();
        let _ = f.mul(&f.add(&3, &4), &5);
        assert!(op_count() >= 2);
    }

    fn axioms<F: Field>(field: &F, a: F::Elem, b: F::Elem, c: F::Elem) {
        let add = |x: &F::Elem, y: &F::Elem| field.add(x, y);
        let mul = |x: &F::Elem, y: &F::Elem| field.mul(x, y);
        assert_eq!(add(&a, &b), add(&b, &a));
        assert_eq!(mul(&a, &b), mul(&b, &a));
        assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
        assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        assert_eq!(mul(&a, &add(&b, &c)), add(&mul(&a, &b), &mul(&a, &c)));
        assert_eq!(add(&a, &field.zero()), a);
        assert_eq!(mul(&a, &field.one()), a);
        assert_eq!(add(&a, &field.neg(&a)), field.zero());
        if !field.is_zero(&a) {
            let ai = field.inv(&a).unwrap();
            assert_eq!(mul(&a, &ai), field.one());
        }
        assert_eq!(field.sub(&a, &b), add(&a, &field.neg(&b)));
    }

    proptest! {
        #[test]
        fn field_axioms_rationals(x in -50i64..50, y in -50i64..50, z in -50i64..50, d in 1i64..20) {
            let q = Rationals;
            let a = q.div(&q.from_i64(x), &q.from_i64(d)).unwrap();
            axioms(&q, a, q.from_i64(y), q.from_i64(z));
        }

        #[test]
        fn field_axioms_prime(x in any::<i64>(), y in any::<i64>(), z in any::<i64>()) {
            let f = PrimeField::new(32003).unwrap();
            axioms(&f, f.from_i64(x), f.from_i64(y), f.from_i64(z));
        }

        #[test]
        fn prime_inverse_roundtrip(x in 1u64..32003) {
            let f = PrimeField::new(32003).unwrap();
            let xi = f.inv(&x).unwrap();
            prop_assert_eq!(f.mul(&x, &xi), 1);
        }
    }
}
