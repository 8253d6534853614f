//! Exact arithmetic over the two supported coefficient fields: the rationals
//! (arbitrary precision) and prime fields `F_p` with `p < 2^31`.
//!
//! Every value is kept in canonical form — reduced fraction with positive
//! denominator, or least nonnegative residue — so equality is structural and
//! no rounding can ever occur.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Errors produced by scalar construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    /// Two operands belong to different fields.
    #[error("MixedFields: cannot combine {0} with {1}")]
    MixedFields(FieldSpec, FieldSpec),
    /// Multiplicative inverse of zero.
    #[error("DivisionByZero: zero has no inverse in {0}")]
    DivisionByZero(FieldSpec),
    /// Rational whose denominator vanishes modulo the target prime.
    #[error("BadReduction: denominator of {value} is divisible by {p}")]
    BadReduction { value: String, p: u32 },
    /// Modulus that is not a prime in the supported range [2, 2^31).
    #[error("InvalidModulus: {0} is not a prime in [2, 2^31)")]
    InvalidModulus(u64),
}

/// The coefficient field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// The rational numbers `Q`.
    Rationals,
    /// The prime field `F_p`; the modulus is guaranteed prime and `< 2^31`.
    PrimeField(u32),
}

impl FieldSpec {
    /// Validated constructor for `F_p`.
    pub fn prime_field(p: u64) -> Result<FieldSpec, ScalarError> {
        if p >= (1 << 31) || !is_prime_u64(p) {
            return Err(ScalarError::InvalidModulus(p));
        }
        Ok(FieldSpec::PrimeField(p as u32))
    }

    /// Prime modulus, if this is a prime field.
    pub fn modulus(&self) -> Option<u32> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField(p) => Some(*p),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

/// Trial division; sufficient since moduli are below 2^31.
fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    if p.is_multiple_of(3) {
        return p == 3;
    }
    let mut d = 5u64;
    while d * d <= p {
        if p.is_multiple_of(d) || p.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Rat(BigRational),
    Mod { p: u32, r: u64 },
}

/// An exact field element: a reduced rational or a residue in `[0, p)`.
///
/// Arithmetic is checked — combining elements of different fields is an
/// error, not a coercion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar(Repr);

impl Scalar {
    // ---- Constructors ----

    /// Additive identity of `field`.
    pub fn zero(field: FieldSpec) -> Scalar {
        match field {
            FieldSpec::Rationals => Scalar(Repr::Rat(BigRational::zero())),
            FieldSpec::PrimeField(p) => Scalar(Repr::Mod { p, r: 0 }),
        }
    }

    /// Multiplicative identity of `field`.
    pub fn one(field: FieldSpec) -> Scalar {
        match field {
            FieldSpec::Rationals => Scalar(Repr::Rat(BigRational::one())),
            FieldSpec::PrimeField(p) => Scalar(Repr::Mod { p, r: 1 % p as u64 }),
        }
    }

    /// Image of a machine integer in `field`.
    pub fn from_integer(field: FieldSpec, value: i64) -> Scalar {
        Scalar::from_bigint(field, &BigInt::from(value))
    }

    /// Image of an arbitrary-precision integer in `field`.
    pub fn from_bigint(field: FieldSpec, value: &BigInt) -> Scalar {
        match field {
            FieldSpec::Rationals => Scalar(Repr::Rat(BigRational::from(value.clone()))),
            FieldSpec::PrimeField(p) => Scalar(Repr::Mod { p, r: bigint_mod(value, p) }),
        }
    }

    /// Exact fraction `num/den` over `Q`; `den` must be nonzero.
    pub fn rational(num: BigInt, den: BigInt) -> Result<Scalar, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero(FieldSpec::Rationals));
        }
        Ok(Scalar(Repr::Rat(BigRational::new(num, den))))
    }

    /// The field this scalar lives in.
    pub fn field(&self) -> FieldSpec {
        match &self.0 {
            Repr::Rat(_) => FieldSpec::Rationals,
            Repr::Mod { p, .. } => FieldSpec::PrimeField(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rat(r) => r.is_zero(),
            Repr::Mod { r, .. } => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rat(r) => r.is_one(),
            Repr::Mod { r, .. } => *r == 1,
        }
    }

    /// The residue value, if this is a prime-field element.
    pub fn residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Rat(_) => None,
            Repr::Mod { r, .. } => Some(*r),
        }
    }

    /// The underlying fraction, if this is a rational.
    pub fn rational_value(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rat(r) => Some(r),
            Repr::Mod { .. } => None,
        }
    }

    // ---- Field arithmetic ----

    pub fn add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (&self.0, &other.0) {
            (Repr::Rat(a), Repr::Rat(b)) => Ok(Scalar(Repr::Rat(a + b))),
            (Repr::Mod { p, r: a }, Repr::Mod { p: q, r: b }) if p == q => {
                Ok(Scalar(Repr::Mod { p: *p, r: (a + b) % *p as u64 }))
            }
            _ => Err(ScalarError::MixedFields(self.field(), other.field())),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (&self.0, &other.0) {
            (Repr::Rat(a), Repr::Rat(b)) => Ok(Scalar(Repr::Rat(a * b))),
            (Repr::Mod { p, r: a }, Repr::Mod { p: q, r: b }) if p == q => {
                Ok(Scalar(Repr::Mod { p: *p, r: (a * b) % *p as u64 }))
            }
            _ => Err(ScalarError::MixedFields(self.field(), other.field())),
        }
    }

    /// Additive inverse; total.
    pub fn neg(&self) -> Scalar {
        match &self.0 {
            Repr::Rat(r) => Scalar(Repr::Rat(-r)),
            Repr::Mod { p, r } => Scalar(Repr::Mod { p: *p, r: (*p as u64 - r) % *p as u64 }),
        }
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero(self.field()));
        }
        match &self.0 {
            Repr::Rat(r) => Ok(Scalar(Repr::Rat(r.recip()))),
            Repr::Mod { p, r } => Ok(Scalar(Repr::Mod { p: *p, r: inv_mod(*r, *p as u64) })),
        }
    }

    // ---- Reduction to finite fields ----

    /// Reduce a rational to its image in `F_p` (numerator times inverse of
    /// denominator). Prime-field scalars pass through unchanged when the
    /// modulus matches.
    pub fn reduce_to_prime_field(&self, p: u32) -> Result<Scalar, ScalarError> {
        let target = FieldSpec::prime_field(p as u64)?;
        match &self.0 {
            Repr::Mod { p: q, .. } => {
                if *q == p {
                    Ok(self.clone())
                } else {
                    Err(ScalarError::MixedFields(self.field(), target))
                }
            }
            Repr::Rat(r) => {
                let den = bigint_mod(r.denom(), p);
                if den == 0 {
                    return Err(ScalarError::BadReduction { value: self.to_string(), p });
                }
                let num = bigint_mod(r.numer(), p);
                Ok(Scalar(Repr::Mod { p, r: num * inv_mod(den, p as u64) % p as u64 }))
            }
        }
    }

    /// Residue of this scalar in `F_p`, via [`Scalar::reduce_to_prime_field`].
    pub fn to_residue(&self, p: u32) -> Result<u64, ScalarError> {
        Ok(self.reduce_to_prime_field(p)?.residue().expect("reduced scalar is a residue"))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            // BigRational prints "a/b", or just "a" when the denominator is 1.
            Repr::Rat(r) => write!(f, "{r}"),
            Repr::Mod { r, .. } => write!(f, "{r}"),
        }
    }
}

/// Least nonnegative residue of an arbitrary-precision integer.
fn bigint_mod(value: &BigInt, p: u32) -> u64 {
    let m = BigInt::from(p);
    let mut r = value % &m;
    if r.is_negative() {
        r += &m;
    }
    r.to_u64().expect("residue fits in u64")
}

/// Inverse of `a` modulo prime `m`, by the extended Euclidean algorithm.
fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "modulus must be prime and a nonzero");
    old_s.rem_euclid(m as i128) as u64
}
