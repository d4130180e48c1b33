use super::AlgebraError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Scalar field of an algebra: the rationals, or the integers modulo a
/// prime. Fixed per element; exact in both cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

/// A scalar value; the variant always matches the ambient [`FieldKind`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coeff {
    Rational(BigRational),
    Prime(u64),
}

impl FieldKind {
    /// The field with `p` elements. `p` must be prime and below `2^32`.
    pub fn prime(p: u64) -> Result<Self, AlgebraError> {
        if p > u32::MAX as u64 {
            return Err(AlgebraError::PrimeTooLarge(p));
        }
        if p < 2 || !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(FieldKind::Prime(p))
    }

    /// Parse `q` (rationals) or `fp:<prime>`.
    pub fn parse(spec: &str) -> Result<Self, AlgebraError> {
        if spec == "q" {
            return Ok(FieldKind::Rational);
        }
        if let Some(p) = spec.strip_prefix("fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| AlgebraError::BadFieldSpec(spec.to_owned()))?;
            return Self::prime(p);
        }
        Err(AlgebraError::BadFieldSpec(spec.to_owned()))
    }

    pub fn zero(&self) -> Coeff {
        match self {
            FieldKind::Rational => Coeff::Rational(BigRational::zero()),
            FieldKind::Prime(_) => Coeff::Prime(0),
        }
    }

    pub fn one(&self) -> Coeff {
        match self {
            FieldKind::Rational => Coeff::Rational(BigRational::one()),
            FieldKind::Prime(_) => Coeff::Prime(1),
        }
    }

    pub fn is_zero(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Rational(r) => r.is_zero(),
            Coeff::Prime(v) => *v == 0,
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (FieldKind::Rational, Coeff::Rational(x), Coeff::Rational(y)) => {
                Coeff::Rational(x + y)
            }
            (FieldKind::Prime(p), Coeff::Prime(x), Coeff::Prime(y)) => {
                Coeff::Prime(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => panic!("coefficient does not match field kind"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (FieldKind::Rational, Coeff::Rational(x)) => Coeff::Rational(-x),
            (FieldKind::Prime(p), Coeff::Prime(x)) => Coeff::Prime(if *x == 0 { 0 } else { p - x }),
            _ => panic!("coefficient does not match field kind"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (FieldKind::Rational, Coeff::Rational(x), Coeff::Rational(y)) => {
                Coeff::Rational(x * y)
            }
            (FieldKind::Prime(p), Coeff::Prime(x), Coeff::Prime(y)) => {
                Coeff::Prime(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("coefficient does not match field kind"),
        }
    }

    /// Embed a rational constant into the field. Over `F_p` the denominator
    /// must be invertible.
    pub fn from_rational(&self, r: &BigRational) -> Result<Coeff, AlgebraError> {
        match self {
            FieldKind::Rational => Ok(Coeff::Rational(r.clone())),
            FieldKind::Prime(p) => {
                let p_big = BigInt::from(*p);
                let reduce = |x: &BigInt| -> u64 {
                    let m = ((x % &p_big) + &p_big) % &p_big;
                    // Remainder mod a u32-sized prime fits in u64.
                    u64::try_from(m).expect("residue fits")
                };
                let den = reduce(r.denom());
                if den == 0 {
                    return Err(AlgebraError::DenominatorVanishes { modulus: *p });
                }
                let num = reduce(r.numer());
                Ok(Coeff::Prime(
                    ((num as u128 * mod_inverse(den, *p) as u128) % *p as u128) as u64,
                ))
            }
        }
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        self.from_rational(&BigRational::from(BigInt::from(v)))
            .expect("integers embed in every field")
    }

    pub fn is_one(&self, a: &Coeff) -> bool {
        *a == self.one()
    }

    /// True for rational `-1`; prime fields render all values unsigned.
    pub fn is_negative(&self, a: &Coeff) -> bool {
        matches!(a, Coeff::Rational(r) if r.is_negative())
    }

    pub fn abs(&self, a: &Coeff) -> Coeff {
        match a {
            Coeff::Rational(r) => Coeff::Rational(r.abs()),
            Coeff::Prime(_) => a.clone(),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rational(r) => write!(f, "{r}"),
            Coeff::Prime(v) => write!(f, "{v}"),
        }
    }
}

impl Coeff {
    /// Parse a coefficient string in the given field: `3/2` style rationals,
    /// or a decimal residue for prime fields.
    pub fn parse(field: &FieldKind, s: &str) -> Result<Coeff, AlgebraError> {
        let r: BigRational = parse_rational(s)
            .ok_or_else(|| AlgebraError::BadFieldSpec(format!("bad coefficient `{s}`")))?;
        field.from_rational(&r)
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Inverse of `a` modulo the prime `p`, via Fermat: `a^(p-2) mod p`.
fn mod_inverse(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    let mut base = a as u128 % p as u128;
    let mut exp = p - 2;
    let mut acc: u128 = 1;
    let p = p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc as u64
}
