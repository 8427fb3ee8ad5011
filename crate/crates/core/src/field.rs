//! Exact scalar domains: arbitrary-precision rationals and prime fields.
//!
//! A [`FieldConfig`] fixes the active domain for a whole computation; every
//! [`Scalar`] remembers which domain it lives in, and mixing domains panics
//! (it is a programming error, not an input error). Rank over `ℚ` equals
//! rank mod `p` for all but finitely many `p`, so an `F_p` run is a fast
//! screen while a rational run is the verdict.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Default prime for modular runs: the Mersenne prime 2^31 − 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// The active exact scalar domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldConfig {
    /// Arbitrary-precision rationals, always in lowest terms.
    Rational,
    /// The prime field `F_p`.
    Fp(u64),
}

impl FieldConfig {
    /// Prime-field configuration; rejects composite moduli.
    pub fn fp(p: u64) -> Result<Self> {
        if is_prime_u64(p) {
            Ok(FieldConfig::Fp(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldConfig::Rational => Scalar::Rat(BigRational::zero()),
            FieldConfig::Fp(p) => Scalar::Fp { v: 0, p: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldConfig::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldConfig::Fp(p) => Scalar::Fp {
                v: n.rem_euclid(*p as i64) as u64,
                p: *p,
            },
        }
    }

    /// Parses the canonical decimal / `num/den` notation used in data files.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let num: BigInt = num_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {num_str:?}")))?;
        let den: BigInt = match den_str {
            Some(d) => d
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer {d:?}")))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        let q = BigRational::new(num, den);
        Scalar::Rat(q).to_field(*self)
    }

    pub fn is_modular(&self) -> bool {
        matches!(self, FieldConfig::Fp(_))
    }
}

impl fmt::Display for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldConfig::Rational => write!(f, "rational"),
            FieldConfig::Fp(p) => write!(f, "fp:{p}"),
        }
    }
}

/// An element of the active field.
///
/// Rationals are kept in lowest terms with positive denominator (enforced by
/// `BigRational`); residues are kept in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldConfig {
        match self {
            Scalar::Rat(_) => FieldConfig::Rational,
            Scalar::Fp { p, .. } => FieldConfig::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp {
                    v: addmod(*a, *b, *p),
                    p: *p,
                }
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp {
                    v: mulmod(*a, *b, *p),
                    p: *p,
                }
            }
            _ => panic!("field mismatch"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: invmod(*v, *p),
                p: *p,
            },
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.inv().map(|r| self.mul(&r))
    }

    /// Maps a scalar into another field configuration.
    ///
    /// `ℚ → F_p` reduces numerator and denominator mod `p` and fails when
    /// `p` divides the denominator. `F_p → ℚ` and `F_p → F_q` are rejected:
    /// residues carry no preferred lift.
    pub fn to_field(&self, target: FieldConfig) -> Result<Scalar> {
        match (self, target) {
            (Scalar::Rat(q), FieldConfig::Rational) => Ok(Scalar::Rat(q.clone())),
            (Scalar::Rat(q), FieldConfig::Fp(p)) => {
                let pb = BigInt::from(p);
                let num = q.numer().mod_floor_big(&pb);
                let den = q.denom().mod_floor_big(&pb);
                if den == 0 {
                    return Err(Error::DenominatorDivisibleByP { p });
                }
                Ok(Scalar::Fp {
                    v: mulmod(num, invmod(den, p), p),
                    p,
                })
            }
            (Scalar::Fp { v, p }, FieldConfig::Fp(q)) if *p == q => {
                Ok(Scalar::Fp { v: *v, p: *p })
            }
            _ => Err(Error::Parse(format!(
                "cannot convert {} to {}",
                self.field(),
                target
            ))),
        }
    }

    /// Canonical string form: `a` or `a/b` with `b > 0` and `gcd(a, b) = 1`.
    pub fn canonical_string(&self) -> String {
        match self {
            Scalar::Rat(q) => {
                if q.denom().is_one() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { v, .. } => v.to_string(),
        }
    }

    /// The underlying rational, if in rational mode.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

trait ModFloorBig {
    fn mod_floor_big(&self, p: &BigInt) -> u64;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, p: &BigInt) -> u64 {
        use num::Integer;
        let m = self.mod_floor(p);
        let (_, digits) = m.to_u64_digits();
        match digits.len() {
            0 => 0,
            1 => digits[0],
            _ => unreachable!("residue exceeds u64"),
        }
    }
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    // p prime, a != 0 mod p
    powmod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for u64 (the listed bases are a proven
/// deterministic witness set for all 64-bit integers).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
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

    #[test]
    fn rational_canonical_form() {
        let f = FieldConfig::Rational;
        let half = f.from_i64(2).div(&f.from_i64(4)).unwrap();
        assert_eq!(half.canonical_string(), "1/2");
        let neg = f.from_i64(-6).div(&f.from_i64(4)).unwrap();
        assert_eq!(neg.canonical_string(), "-3/2");
        assert_eq!(f.parse_scalar("-3/2").unwrap(), neg);
        assert_eq!(f.parse_scalar("3/-2").unwrap(), neg.neg());
    }

    #[test]
    fn field_axioms_spot_checks() {
        for f in [FieldConfig::Rational, FieldConfig::fp(101).unwrap()] {
            let a = f.from_i64(35);
            let b = f.from_i64(-4);
            assert_eq!(a.add(&b), b.add(&a));
            assert_eq!(a.mul(&b), b.mul(&a));
            assert!(a.sub(&a).is_zero());
            assert!(a.div(&a).unwrap().is_one());
            assert_eq!(a.mul(&f.one()), a);
            assert!(f.zero().inv().is_none());
        }
    }

    #[test]
    fn fp_inverse_and_parse() {
        let f = FieldConfig::fp(DEFAULT_PRIME).unwrap();
        let x = f.from_i64(123_456_789);
        assert!(x.mul(&x.inv().unwrap()).is_one());
        // 1/2 mod p = (p+1)/2
        let half = f.parse_scalar("1/2").unwrap();
        assert_eq!(half.add(&half), f.one());
    }

    #[test]
    fn rational_to_fp_reduction() {
        let q = FieldConfig::Rational.parse_scalar("7/3").unwrap();
        let m = q.to_field(FieldConfig::fp(5).unwrap()).unwrap();
        // 7/3 = 2 * 3^{-1} = 2 * 2 = 4 mod 5
        assert_eq!(m, FieldConfig::fp(5).unwrap().from_i64(4));
        assert!(q.to_field(FieldConfig::fp(3).unwrap()).is_err());
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(DEFAULT_PRIME));
        assert!(is_prime_u64(1_048_583)); // first prime past 2^20
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(1_048_576));
        assert!(FieldConfig::fp(91).is_err());
    }
}
