use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// The coefficient field of a computation.
///
/// Every value built by the library carries its field; mixing fields in one
/// operation is a programming error and panics in the scalar operators (the
/// matrix layer reports it as [`AlgebraError::FieldMismatch`] first).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    /// Arbitrary precision rationals.
    Rational,
    /// The prime field of the given characteristic.
    Prime(u64),
}

impl Field {
    /// Largest characteristic accepted; keeps products inside `u128`.
    pub const MAX_PRIME: u64 = u32::MAX as u64;

    pub fn prime(p: u64) -> Result<Field, AlgebraError> {
        if !(2..=Self::MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Prime {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// Maps `numer / denom` into the field. Fails when the denominator
    /// vanishes in the field.
    pub fn from_fraction(self, numer: &BigInt, denom: &BigInt) -> Result<Scalar, AlgebraError> {
        if denom.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        match self {
            Field::Rational => Ok(Scalar::Rational(BigRational::new(
                numer.clone(),
                denom.clone(),
            ))),
            Field::Prime(p) => {
                let reduce = |x: &BigInt| -> u64 {
                    x.mod_floor(&BigInt::from(p))
                        .to_u64()
                        .expect("residue fits u64")
                };
                let n = Scalar::Prime {
                    value: reduce(numer),
                    modulus: p,
                };
                let d = Scalar::Prime {
                    value: reduce(denom),
                    modulus: p,
                };
                let d_inv = d.inv().ok_or(AlgebraError::DivisionByZero)?;
                Ok(&n * &d_inv)
            }
        }
    }

    /// Parses an integer `n` or a fraction `n/d`.
    pub fn parse_scalar(self, text: &str) -> Result<Scalar, AlgebraError> {
        let bad = || AlgebraError::BadScalar(text.to_string());
        let parse_int = |s: &str| -> Result<BigInt, AlgebraError> {
            let digits = s.strip_prefix('-').unwrap_or(s);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            s.parse::<BigInt>().map_err(|_| bad())
        };
        match text.split_once('/') {
            None => {
                let n = parse_int(text)?;
                self.from_fraction(&n, &BigInt::one())
            }
            Some((n, d)) => {
                let n = parse_int(n)?;
                let d = parse_int(d)?;
                if d.is_negative() {
                    return Err(bad());
                }
                self.from_fraction(&n, &d)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "prime {p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// The rational value, when this is a rational scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Prime { .. } => None,
        }
    }
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

fn same_prime(a: u64, b: u64) -> u64 {
    assert_eq!(a, b, "scalar operation across different prime fields");
    a
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Prime {
                    value: a,
                    modulus: p,
                },
                Scalar::Prime {
                    value: b,
                    modulus: q,
                },
            ) => {
                let p = same_prime(*p, *q);
                Scalar::Prime {
                    value: ((*a as u128 + *b as u128) % p as u128) as u64,
                    modulus: p,
                }
            }
            _ => panic!("scalar operation across different fields"),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Prime {
                    value: a,
                    modulus: p,
                },
                Scalar::Prime {
                    value: b,
                    modulus: q,
                },
            ) => {
                let p = same_prime(*p, *q);
                Scalar::Prime {
                    value: ((*a as u128 * *b as u128) % p as u128) as u64,
                    modulus: p,
                }
            }
            _ => panic!("scalar operation across different fields"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_inverse_is_exact() {
        let q = Field::Rational;
        let a = q.parse_scalar("3/7").unwrap();
        let b = q.parse_scalar("-7/3").unwrap();
        assert_eq!(&a * &a.inv().unwrap(), q.one());
        assert_eq!(&a * &b, q.from_i64(-1));
    }

    #[test]
    fn prime_field_representatives() {
        let f = Field::prime(7).unwrap();
        assert_eq!(
            f.from_i64(-1),
            Scalar::Prime {
                value: 6,
                modulus: 7
            }
        );
        let half = f.parse_scalar("1/2").unwrap();
        assert_eq!(&half * &f.from_i64(2), f.one());
        assert!(f.parse_scalar("1/7").is_err());
        for v in 1..7 {
            let x = f.from_i64(v);
            assert_eq!(&x * &x.inv().unwrap(), f.one());
        }
    }

    #[test]
    fn rejects_composites_and_garbage() {
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::Rational.parse_scalar("1/0").is_err());
        assert!(Field::Rational.parse_scalar("1/-2").is_err());
        assert!(Field::Rational.parse_scalar("--1").is_err());
        assert!(Field::Rational.parse_scalar("").is_err());
        assert!(Field::Rational.parse_scalar("+1").is_err());
    }

    #[test]
    fn display_is_canonical() {
        let q = Field::Rational;
        assert_eq!(q.parse_scalar("4/8").unwrap().to_string(), "1/2");
        assert_eq!(q.parse_scalar("-6/3").unwrap().to_string(), "-2");
        assert_eq!(q.parse_scalar("-0").unwrap().to_string(), "0");
    }
}
