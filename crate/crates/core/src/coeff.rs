//! Coefficient rings: the integers, `Z/nZ`, and localizations `S⁻¹Z` at
//! multiplicative sets generated by finitely many integers.
//!
//! Coefficients are stored as reduced fractions. Outside a localization the
//! denominator is always 1, and modular residues are kept in `[0, n)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(BigInt),
    #[error("localization generators must be at least 2, got {0}")]
    BadGenerator(BigInt),
    #[error("division by zero coefficient")]
    ZeroDivisor,
    #[error("operation undefined on a zero coefficient")]
    ZeroInput,
    #[error("{0} is not an element of {1}")]
    NotInRing(String, String),
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(BigInt, BigInt),
    #[error("factorization needs n >= 2, got {0}")]
    TooSmall(BigInt),
    #[error("{0} cannot be represented in {1}")]
    NoProjection(String, String),
}

/// A coefficient value. Only meaningful together with a [`RingSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coeff(BigRational);

impl Coeff {
    pub fn zero() -> Self {
        Coeff(BigRational::zero())
    }

    pub fn one() -> Self {
        Coeff(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub(crate) fn raw(r: BigRational) -> Coeff {
        Coeff(r)
    }
}

impl From<i64> for Coeff {
    fn from(v: i64) -> Self {
        Coeff(BigRational::from_integer(v.into()))
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Prime power factor `prime^exponent = value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePower {
    pub prime: BigInt,
    pub exponent: u32,
    pub value: BigInt,
}

/// Descriptor of the active coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingSpec {
    Integers,
    Modular {
        modulus: BigInt,
    },
    /// `S⁻¹Z` for `S` generated by `generators`; `primes` are their prime
    /// factors, the primes that become units.
    Localized {
        generators: Vec<BigInt>,
        primes: Vec<BigInt>,
    },
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Modular { modulus } => write!(f, "Z/{modulus}"),
            RingSpec::Localized { generators, .. } => {
                let g: Vec<String> = generators.iter().map(|g| g.to_string()).collect();
                write!(f, "Z loc {}", g.join(","))
            }
        }
    }
}

impl RingSpec {
    pub fn integers() -> Self {
        RingSpec::Integers
    }

    pub fn modular(n: impl Into<BigInt>) -> Result<Self, CoeffError> {
        let n = n.into();
        if n < BigInt::from(2) {
            return Err(CoeffError::BadModulus(n));
        }
        Ok(RingSpec::Modular { modulus: n })
    }

    /// Localization of Z at the multiplicative set generated by `gens`.
    /// An empty list gives Z itself.
    pub fn localized(gens: Vec<BigInt>) -> Result<Self, CoeffError> {
        if gens.is_empty() {
            return Ok(RingSpec::Integers);
        }
        let mut primes: Vec<BigInt> = Vec::new();
        for g in &gens {
            if *g < BigInt::from(2) {
                return Err(CoeffError::BadGenerator(g.clone()));
            }
            for pp in factor(g) {
                if !primes.contains(&pp.prime) {
                    primes.push(pp.prime);
                }
            }
        }
        primes.sort();
        Ok(RingSpec::Localized {
            generators: gens,
            primes,
        })
    }

    /// The same ring with `extra` also inverted. Only defined for Z and its
    /// localizations.
    pub fn invert(&self, extra: &BigInt) -> Result<Self, CoeffError> {
        let mut gens = self.generators().to_vec();
        gens.push(extra.clone());
        RingSpec::localized(gens)
    }

    pub fn generators(&self) -> &[BigInt] {
        match self {
            RingSpec::Localized { generators, .. } => generators,
            _ => &[],
        }
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        match self {
            RingSpec::Modular { modulus } => Some(modulus),
            _ => None,
        }
    }

    /// True for `Z/p^k`, the rings where every pair of elements is comparable
    /// under divisibility.
    pub fn is_valuation(&self) -> bool {
        match self {
            RingSpec::Modular { modulus } => factor(modulus).len() == 1,
            _ => false,
        }
    }

    /// True for Z and its localizations.
    pub fn is_integral(&self) -> bool {
        !matches!(self, RingSpec::Modular { .. })
    }

    pub fn from_int(&self, v: impl Into<BigInt>) -> Coeff {
        let v = v.into();
        match self {
            RingSpec::Modular { modulus } => Coeff(BigRational::from_integer(v.mod_floor(modulus))),
            _ => Coeff(BigRational::from_integer(v)),
        }
    }

    /// `num / den` as an element of this ring. Fractions are only accepted in
    /// a localization, and only with denominators built from inverted primes.
    pub fn from_ratio(&self, num: BigInt, den: BigInt) -> Result<Coeff, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::ZeroDivisor);
        }
        let r = BigRational::new(num, den);
        self.canonical(r)
    }

    /// Brings an arbitrary rational into canonical form, failing if it does
    /// not belong to the ring.
    pub fn canonical(&self, r: BigRational) -> Result<Coeff, CoeffError> {
        match self {
            RingSpec::Integers | RingSpec::Modular { .. } if !r.is_integer() => {
                Err(CoeffError::NotInRing(Coeff(r).to_string(), self.to_string()))
            }
            RingSpec::Modular { modulus } => Ok(Coeff(BigRational::from_integer(r.numer().mod_floor(modulus)))),
            RingSpec::Integers => Ok(Coeff(r)),
            RingSpec::Localized { primes, .. } => {
                if strip(r.denom(), primes).is_one() {
                    Ok(Coeff(r))
                } else {
                    Err(CoeffError::NotInRing(Coeff(r).to_string(), self.to_string()))
                }
            }
        }
    }

    pub fn contains(&self, c: &Coeff) -> bool {
        match self {
            RingSpec::Integers => c.is_integer(),
            RingSpec::Modular { modulus } => c.is_integer() && !c.numer().is_negative() && c.numer() < modulus,
            RingSpec::Localized { primes, .. } => strip(c.denom(), primes).is_one(),
        }
    }

    fn wrap(&self, r: BigRational) -> Coeff {
        match self {
            RingSpec::Modular { modulus } => Coeff(BigRational::from_integer(r.to_integer().mod_floor(modulus))),
            _ => Coeff(r),
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.wrap(&a.0 + &b.0)
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.wrap(&a.0 - &b.0)
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        self.wrap(-&a.0)
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.wrap(&a.0 * &b.0)
    }

    /// Some `c` with `a·c = b`, if one exists. Over `Z/n` the smallest
    /// non-negative solution is returned.
    pub fn divides(&self, a: &Coeff, b: &Coeff) -> Result<Option<Coeff>, CoeffError> {
        if a.is_zero() {
            return Err(CoeffError::ZeroDivisor);
        }
        if b.is_zero() {
            return Ok(Some(Coeff::zero()));
        }
        Ok(match self {
            RingSpec::Integers => {
                let (q, r) = b.numer().div_rem(a.numer());
                r.is_zero().then(|| Coeff(BigRational::from_integer(q)))
            }
            RingSpec::Modular { modulus } => {
                let (a, b) = (a.numer(), b.numer());
                let g = a.gcd(modulus);
                if !b.is_multiple_of(&g) {
                    None
                } else {
                    let m = modulus / &g;
                    let inv = mod_inverse(&(a / &g), &m).expect("coprime after gcd removal");
                    Some(Coeff(BigRational::from_integer(((b / &g) * inv).mod_floor(&m))))
                }
            }
            RingSpec::Localized { primes, .. } => {
                let q = &b.0 / &a.0;
                strip(q.denom(), primes).is_one().then_some(Coeff(q))
            }
        })
    }

    pub fn is_comparable(&self, a: &Coeff, b: &Coeff) -> Result<bool, CoeffError> {
        if a.is_zero() || b.is_zero() {
            return Err(CoeffError::ZeroInput);
        }
        Ok(self.divides(a, b)?.is_some() || self.divides(b, a)?.is_some())
    }

    pub fn is_unit(&self, a: &Coeff) -> bool {
        match self {
            RingSpec::Integers => a.numer().abs().is_one(),
            RingSpec::Modular { modulus } => a.numer().gcd(modulus).is_one(),
            RingSpec::Localized { primes, .. } => strip(a.numer(), primes).is_one(),
        }
    }

    /// Non-negative integer generating the same principal ideal as `a`:
    /// `|a|` over Z, `gcd(a, n)` over `Z/n`, the non-unit part of the
    /// numerator in a localization. Zero maps to zero.
    pub fn ideal_generator(&self, a: &Coeff) -> BigInt {
        match self {
            RingSpec::Integers => a.numer().abs(),
            RingSpec::Modular { modulus } => {
                if a.is_zero() {
                    BigInt::zero()
                } else {
                    a.numer().gcd(modulus)
                }
            }
            RingSpec::Localized { primes, .. } => strip(a.numer(), primes),
        }
    }

    /// The non-unit part of a nonzero coefficient in Z or a localization of
    /// Z, as a positive integer. Used to split incomparable pairs.
    pub fn non_unit_part(&self, a: &Coeff) -> BigInt {
        match self {
            RingSpec::Localized { primes, .. } => strip(a.numer(), primes),
            _ => a.numer().abs(),
        }
    }

    /// Generator of the annihilator of `a`, when it is nonzero. Only
    /// `Z/n` has zero divisors.
    pub fn annihilator(&self, a: &Coeff) -> Option<Coeff> {
        match self {
            RingSpec::Modular { modulus } if !a.is_zero() => {
                let g = a.numer().gcd(modulus);
                if g.is_one() {
                    None
                } else {
                    Some(Coeff(BigRational::from_integer(modulus / g)))
                }
            }
            _ => None,
        }
    }

    /// Bezout data for the ideal `⟨a, b⟩`: returns `(g, s, t, a/g, b/g)`
    /// with `g = s·a + t·b` and `s·(a/g) + t·(b/g) = 1`.
    pub fn xgcd(&self, a: &Coeff, b: &Coeff) -> (Coeff, Coeff, Coeff, Coeff, Coeff) {
        match self {
            RingSpec::Integers | RingSpec::Modular { .. } => {
                let (a, b) = (a.numer(), b.numer());
                let e = a.extended_gcd(b);
                let (ua, vb) = if e.gcd.is_zero() {
                    (BigInt::zero(), BigInt::zero())
                } else {
                    (a / &e.gcd, b / &e.gcd)
                };
                (
                    self.from_int(e.gcd),
                    self.from_int(e.x),
                    self.from_int(e.y),
                    self.from_int(ua),
                    self.from_int(vb),
                )
            }
            RingSpec::Localized { primes, .. } => {
                // a = unit_a · a0 with a0 the non-unit part (positive).
                let a0 = strip(a.numer(), primes);
                let b0 = strip(b.numer(), primes);
                let e = a0.extended_gcd(&b0);
                if e.gcd.is_zero() {
                    return (
                        Coeff::zero(),
                        Coeff::zero(),
                        Coeff::zero(),
                        Coeff::zero(),
                        Coeff::zero(),
                    );
                }
                let unit_a = if a.is_zero() {
                    BigRational::one()
                } else {
                    &a.0 / BigRational::from_integer(a0.clone())
                };
                let unit_b = if b.is_zero() {
                    BigRational::one()
                } else {
                    &b.0 / BigRational::from_integer(b0.clone())
                };
                let g = BigRational::from_integer(e.gcd.clone());
                let s = BigRational::from_integer(e.x) / &unit_a;
                let t = BigRational::from_integer(e.y) / &unit_b;
                (Coeff(g.clone()), Coeff(s), Coeff(t), Coeff(&a.0 / &g), Coeff(&b.0 / &g))
            }
        }
    }

    /// Image of `c` (an element of `from`) in this ring. Supported maps:
    /// `Z → Z/m`, `Z/n → Z/m` for `m | n`, and the inclusion of Z or a
    /// localization into a further localization.
    pub fn project(&self, c: &Coeff, from: &RingSpec) -> Result<Coeff, CoeffError> {
        let fail = || CoeffError::NoProjection(c.to_string(), self.to_string());
        match (from, self) {
            (RingSpec::Integers, RingSpec::Modular { .. }) => Ok(self.from_int(c.numer().clone())),
            (RingSpec::Modular { modulus: n }, RingSpec::Modular { modulus: m }) => {
                if n.is_multiple_of(m) {
                    Ok(self.from_int(c.numer().clone()))
                } else {
                    Err(fail())
                }
            }
            (RingSpec::Modular { .. }, _) => Err(fail()),
            (_, RingSpec::Modular { .. }) => Err(fail()),
            _ => self.canonical(c.0.clone()).map_err(|_| fail()),
        }
    }

    /// Human-facing rendering: modular residues use the balanced range
    /// `(-n/2, n/2]`, so `14 mod 16` prints as `-2`.
    pub fn display(&self, c: &Coeff) -> String {
        match self {
            RingSpec::Modular { modulus } => {
                let v = c.numer();
                let half: BigInt = modulus / 2;
                if v > &half {
                    (v - modulus).to_string()
                } else {
                    v.to_string()
                }
            }
            _ => c.to_string(),
        }
    }

    /// Signed value used for printing: modular residues balanced.
    pub fn signed_value(&self, c: &Coeff) -> BigRational {
        match self {
            RingSpec::Modular { modulus } => {
                let v = c.numer();
                let half: BigInt = modulus / 2;
                BigRational::from_integer(if v > &half { v - modulus } else { v.clone() })
            }
            _ => c.0.clone(),
        }
    }
}

/// Removes every factor of the given primes and returns the absolute value.
fn strip(n: &BigInt, primes: &[BigInt]) -> BigInt {
    let mut n = n.abs();
    if n.is_zero() {
        return n;
    }
    for p in primes {
        while n.is_multiple_of(p) {
            n /= p;
        }
    }
    n
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Prime-power factorization by trial division, ascending primes.
/// Returns an empty list for |n| < 2.
fn factor(n: &BigInt) -> Vec<PrimePower> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            let mut e = 0;
            let mut value = BigInt::one();
            while n.is_multiple_of(&p) {
                n /= &p;
                e += 1;
                value *= &p;
            }
            out.push(PrimePower {
                prime: p.clone(),
                exponent: e,
                value,
            });
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push(PrimePower {
            prime: n.clone(),
            exponent: 1,
            value: n,
        });
    }
    out
}

/// `(d, a', b')` with `d = gcd(|a|, |b|) > 0`, `a = d·a'`, `b = d·b'` and
/// `gcd(a', b') = 1`. `a'` and `b'` carry the signs of `a` and `b`.
pub fn gcd_split(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt), CoeffError> {
    if a.is_zero() || b.is_zero() {
        return Err(CoeffError::ZeroInput);
    }
    let d = a.gcd(b);
    let (a1, b1) = (a / &d, b / &d);
    debug_assert!(a1.gcd(&b1).is_one());
    Ok((d, a1, b1))
}

/// Prime-power decomposition of `n >= 2`, found by trial division and
/// listed by increasing prime power (24 gives `[3, 8]`).
pub fn crt_factor(n: &BigInt) -> Result<Vec<PrimePower>, CoeffError> {
    if *n < BigInt::from(2) {
        return Err(CoeffError::TooSmall(n.clone()));
    }
    let mut f = factor(n);
    f.sort_by(|a, b| a.value.cmp(&b.value));
    Ok(f)
}

/// The unique `x mod ∏ m_i` with `x ≡ r_i (mod m_i)`.
pub fn crt_lift(residues: &[(BigInt, BigInt)]) -> Result<BigInt, CoeffError> {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (r, mi) in residues {
        if !m.gcd(mi).is_one() {
            return Err(CoeffError::NotCoprime(m, mi.clone()));
        }
        // x' = x + m·k with x + m·k ≡ r (mod mi)
        let inv = mod_inverse(&m, mi).expect("coprime moduli");
        let k = ((r - &x) * inv).mod_floor(mi);
        x += &m * k;
        m *= mi;
        x = x.mod_floor(&m);
    }
    Ok(x)
}

/// Small helper for callers that know the value fits.
pub fn to_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(v: i64) -> Coeff {
        Coeff::from(v)
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn arithmetic_examples() {
        let z16 = RingSpec::modular(16).unwrap();
        assert_eq!(z16.add(&z16.from_int(4), &z16.from_int(12)), Coeff::zero());
        let zz = RingSpec::integers();
        assert_eq!(zz.mul(&z(6), &z(-1)), z(-6));
        let z3 = RingSpec::localized(vec![big(3)]).unwrap();
        let four_thirds = z3.from_ratio(big(4), big(3)).unwrap();
        assert_eq!(z3.mul(&four_thirds, &z(3)), z(4));
    }

    #[test]
    fn divides_examples() {
        let z16 = RingSpec::modular(16).unwrap();
        assert_eq!(z16.divides(&z(3), &z(4)).unwrap(), Some(z(12)));
        assert_eq!(z16.divides(&z(2), &z(4)).unwrap(), Some(z(2)));
        assert_eq!(z16.divides(&z(2), &z(3)).unwrap(), None);
        let zz = RingSpec::integers();
        assert_eq!(zz.divides(&z(6), &z(4)).unwrap(), None);
        let z3 = RingSpec::localized(vec![big(3)]).unwrap();
        assert_eq!(
            z3.divides(&z(6), &z(4)).unwrap(),
            Some(z3.from_ratio(big(2), big(3)).unwrap())
        );
        assert_eq!(zz.divides(&Coeff::zero(), &z(1)), Err(CoeffError::ZeroDivisor));
    }

    #[test]
    fn divides_modular_exhaustive_oracle() {
        // Smallest c in [0,16) with 3c ≡ 4 by exhaustive search.
        let c = (0..16).find(|c| (3 * c) % 16 == 4).unwrap();
        assert_eq!(c, 12);
    }

    #[test]
    fn gcd_split_examples() {
        assert_eq!(gcd_split(&big(6), &big(4)).unwrap(), (big(2), big(3), big(2)));
        assert_eq!(gcd_split(&big(6), &big(8)).unwrap(), (big(2), big(3), big(4)));
        assert_eq!(gcd_split(&big(5), &big(5)).unwrap(), (big(5), big(1), big(1)));
        assert_eq!(gcd_split(&big(-6), &big(4)).unwrap(), (big(2), big(-3), big(2)));
        assert!(gcd_split(&big(0), &big(4)).is_err());
    }

    #[test]
    fn crt_examples() {
        let f: Vec<BigInt> = crt_factor(&big(24)).unwrap().into_iter().map(|p| p.value).collect();
        assert_eq!(f, vec![big(3), big(8)]);
        assert_eq!(crt_factor(&big(7)).unwrap()[0].value, big(7));
        let f = crt_factor(&big(625)).unwrap();
        assert_eq!((f.len(), f[0].exponent), (1, 4));
        assert!(crt_factor(&big(1)).is_err());
        for a in 0..3 {
            for b in 0..8 {
                let x = crt_lift(&[(big(a), big(3)), (big(b), big(8))]).unwrap();
                assert_eq!(x, big((16 * a + 9 * b) % 24));
            }
        }
        assert_eq!(crt_lift(&[(big(1), big(3)), (big(1), big(8))]).unwrap(), big(1));
        assert!(crt_lift(&[(big(1), big(4)), (big(1), big(6))]).is_err());
    }

    #[test]
    fn comparability_examples() {
        let z16 = RingSpec::modular(16).unwrap();
        assert!(z16.is_comparable(&z(3), &z(4)).unwrap());
        assert!(!RingSpec::integers().is_comparable(&z(6), &z(4)).unwrap());
        let z9 = RingSpec::modular(9).unwrap();
        assert!(z9.is_comparable(&z(3), &z(4)).unwrap());
        assert!(z9.is_comparable(&z(0), &z(4)).is_err());
    }

    #[test]
    fn valuation_rings_are_totally_ordered() {
        for n in [2i64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64, 81] {
            let r = RingSpec::modular(n).unwrap();
            assert!(r.is_valuation());
            for a in 1..n {
                for b in 1..n {
                    assert!(r.is_comparable(&z(a), &z(b)).unwrap(), "{a},{b} mod {n}");
                }
            }
        }
        assert!(!RingSpec::modular(24).unwrap().is_valuation());
    }

    #[test]
    fn crt_roundtrip_exhaustive() {
        for n in 2i64..=100 {
            let parts = crt_factor(&big(n)).unwrap();
            for x in 0..n {
                let res: Vec<(BigInt, BigInt)> = parts
                    .iter()
                    .map(|p| (big(x).mod_floor(&p.value), p.value.clone()))
                    .collect();
                assert_eq!(crt_lift(&res).unwrap(), big(x));
            }
        }
    }

    #[test]
    fn localized_rejects_foreign_denominators() {
        let z2 = RingSpec::localized(vec![big(2)]).unwrap();
        assert!(z2.from_ratio(big(1), big(3)).is_err());
        assert!(z2.from_ratio(big(3), big(4)).is_ok());
        assert!(RingSpec::integers().from_ratio(big(1), big(2)).is_err());
        assert!(RingSpec::modular(1).is_err());
        assert!(RingSpec::localized(vec![big(1)]).is_err());
        assert_eq!(RingSpec::localized(vec![]).unwrap(), RingSpec::Integers);
    }

    #[test]
    fn xgcd_bezout() {
        let z6 = RingSpec::localized(vec![big(6)]).unwrap();
        let a = z6.from_ratio(big(10), big(3)).unwrap();
        let b = z6.from_int(35);
        let (g, s, t, u, v) = z6.xgcd(&a, &b);
        assert_eq!(z6.add(&z6.mul(&s, &a), &z6.mul(&t, &b)), g);
        assert_eq!(z6.add(&z6.mul(&s, &u), &z6.mul(&t, &v)), Coeff::one());
        assert_eq!(g, z(5));
    }

    fn ring_strategy() -> impl Strategy<Value = RingSpec> {
        prop_oneof![
            Just(RingSpec::integers()),
            (2i64..50).prop_map(|n| RingSpec::modular(n).unwrap()),
            prop::sample::subsequence(vec![2i64, 3, 5, 6], 1..3)
                .prop_map(|g| RingSpec::localized(g.into_iter().map(BigInt::from).collect()).unwrap()),
        ]
    }

    fn element(r: &RingSpec, num: i64, den_exp: u32) -> Coeff {
        match r {
            RingSpec::Localized { generators, .. } => r.from_ratio(big(num), generators[0].pow(den_exp % 3)).unwrap(),
            _ => r.from_int(num),
        }
    }

    proptest! {
        #[test]
        fn ring_axioms(r in ring_strategy(), a in -40i64..40, b in -40i64..40, c in -40i64..40, e in 0u32..3) {
            let (a, b, c) = (element(&r, a, e), element(&r, b, e + 1), element(&r, c, e + 2));
            prop_assert!(r.contains(&a) && r.contains(&b) && r.contains(&c));
            prop_assert_eq!(r.add(&r.add(&a, &b), &c), r.add(&a, &r.add(&b, &c)));
            prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
            prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
            prop_assert_eq!(r.add(&a, &r.from_int(0)), a.clone());
            prop_assert_eq!(r.mul(&a, &r.from_int(1)), a.clone());
            prop_assert_eq!(r.add(&a, &r.neg(&a)), Coeff::zero());
        }

        #[test]
        fn quotient_is_exact(r in ring_strategy(), a in -40i64..40, b in -40i64..40) {
            let (a, b) = (element(&r, a, 1), element(&r, b, 0));
            prop_assume!(!a.is_zero());
            if let Some(c) = r.divides(&a, &b).unwrap() {
                prop_assert_eq!(r.mul(&a, &c), b);
            }
        }

        #[test]
        fn gcd_split_postconditions(a in -500i64..500, b in -500i64..500) {
            prop_assume!(a != 0 && b != 0);
            let (d, a1, b1) = gcd_split(&big(a), &big(b)).unwrap();
            prop_assert!(d > BigInt::zero());
            prop_assert_eq!(&d * &a1, big(a));
            prop_assert_eq!(&d * &b1, big(b));
            prop_assert!(a1.gcd(&b1).is_one());
        }
    }
}
