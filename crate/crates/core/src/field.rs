//! Exact coefficient fields.
//!
//! Two backends share the [`Field`] interface: [`PrimeField`] (F_p with
//! `p < 2^62`, word arithmetic) and [`Rationals`] (arbitrary-precision Q).
//! Every field value carries an [`OpCounter`] so that algorithms can report
//! how many additions, multiplications and inversions they performed.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field spec `{0}` (expected `Q` or `Fp:<prime>`)")]
    InvalidSpec(String),
    #[error("{0} is not a prime below 2^62")]
    NotPrime(u64),
    #[error("cannot parse `{0}` as a field element")]
    BadElement(String),
}

/// Per-run operation tally. Counts only ever grow.
#[derive(Debug, Default)]
pub struct OpCounter {
    additions: AtomicU64,
    multiplications: AtomicU64,
    inversions: AtomicU64,
}

impl OpCounter {
    #[inline]
    fn add(&self) {
        self.additions.fetch_add(1, Ordering::Relaxed);
    }

    #[inline]
    fn mul(&self) {
        self.multiplications.fetch_add(1, Ordering::Relaxed);
    }

    #[inline]
    fn inv(&self) {
        self.inversions.fetch_add(1, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> OpCounts {
        OpCounts {
            additions: self.additions.load(Ordering::Relaxed),
            multiplications: self.multiplications.load(Ordering::Relaxed),
            inversions: self.inversions.load(Ordering::Relaxed),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub additions: u64,
    pub multiplications: u64,
    pub inversions: u64,
}

impl OpCounts {
    /// Multiplications plus inversions; additions are reported separately.
    pub fn basic(&self) -> u64 {
        self.multiplications + self.inversions
    }

    pub fn since(&self, earlier: &OpCounts) -> OpCounts {
        OpCounts {
            additions: self.additions - earlier.additions,
            multiplications: self.multiplications - earlier.multiplications,
            inversions: self.inversions - earlier.inversions,
        }
    }
}

/// An exact field. Implementations are cheap to clone; clones share the
/// operation counter unless created with [`Field::detached`].
pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn from_ratio(&self, r: &BigRational) -> Result<Self::Elem, FieldError>;
    /// Canonical rational reading of an element; for F_p the symmetric
    /// representative in `(-p/2, p/2]`.
    fn to_ratio(&self, a: &Self::Elem) -> BigRational;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        let inv = self.inv(b)?;
        Ok(self.mul(a, &inv))
    }

    /// `a - c*b`, the elimination kernel.
    fn sub_mul(&self, a: &Self::Elem, c: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let cb = self.mul(c, b);
        self.sub(a, &cb)
    }

    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;

    fn counter(&self) -> &OpCounter;

    /// Same field with a private, zeroed counter.
    fn detached(&self) -> Self;

    fn spec(&self) -> FieldSpec;

    /// Whether rank computations should use fraction-free elimination.
    fn prefers_fraction_free(&self) -> bool {
        false
    }

    fn parse_elem(&self, s: &str) -> Result<Self::Elem, FieldError> {
        let r = parse_rational(s).ok_or_else(|| FieldError::BadElement(s.to_string()))?;
        self.from_ratio(&r)
    }

    fn format(&self, a: &Self::Elem) -> String {
        self.to_ratio(a).to_string()
    }
}

/// Parses `-12`, `3/4`, `+5` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let digits = |t: &str| {
        let body = t.strip_prefix(['-', '+']).unwrap_or(t);
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(num) || !digits(den) || den.starts_with(['-', '+']) {
        return None;
    }
    let n = BigInt::from_str(num.strip_prefix('+').unwrap_or(num)).ok()?;
    let d = BigInt::from_str(den).ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Which field a run uses, as written on the command line: `Q` or `Fp:<p>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let p = t
            .strip_prefix("Fp:")
            .and_then(|p| p.trim().parse::<u64>().ok())
            .ok_or_else(|| FieldError::InvalidSpec(s.to_string()))?;
        if p >= 1 << 62 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Element of F_p, always reduced into `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp(pub u64);

#[derive(Debug, Clone)]
pub struct PrimeField {
    p: u64,
    counter: Arc<OpCounter>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 62 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField {
            p,
            counter: Arc::new(OpCounter::default()),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: u64) -> Fp {
        Fp(v % self.p)
    }
}

impl Field for PrimeField {
    type Elem = Fp;

    fn zero(&self) -> Fp {
        Fp(0)
    }

    fn one(&self) -> Fp {
        Fp(1)
    }

    fn is_zero(&self, a: &Fp) -> bool {
        a.0 == 0
    }

    fn from_i64(&self, v: i64) -> Fp {
        Fp(v.rem_euclid(self.p as i64) as u64)
    }

    fn from_bigint(&self, v: &BigInt) -> Fp {
        let r = v.mod_floor(&BigInt::from(self.p));
        Fp(r.to_u64().expect("reduced value fits"))
    }

    fn from_ratio(&self, r: &BigRational) -> Result<Fp, FieldError> {
        let n = self.from_bigint(r.numer());
        let d = self.from_bigint(r.denom());
        if d.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let dinv = pow_mod(d.0, self.p - 2, self.p);
        Ok(Fp(mul_mod(n.0, dinv, self.p)))
    }

    fn to_ratio(&self, a: &Fp) -> BigRational {
        let v = if a.0 > self.p / 2 {
            BigInt::from(a.0) - BigInt::from(self.p)
        } else {
            BigInt::from(a.0)
        };
        BigRational::from_integer(v)
    }

    #[inline]
    fn add(&self, a: &Fp, b: &Fp) -> Fp {
        self.counter.add();
        let s = a.0 + b.0;
        Fp(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    fn sub(&self, a: &Fp, b: &Fp) -> Fp {
        self.counter.add();
        Fp(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    fn neg(&self, a: &Fp) -> Fp {
        self.counter.add();
        Fp(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    fn mul(&self, a: &Fp, b: &Fp) -> Fp {
        self.counter.mul();
        Fp(mul_mod(a.0, b.0, self.p))
    }

    fn inv(&self, a: &Fp) -> Result<Fp, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        self.counter.inv();
        Ok(Fp(pow_mod(a.0, self.p - 2, self.p)))
    }

    fn random(&self, rng: &mut dyn RngCore) -> Fp {
        // rejection sampling keeps the distribution uniform
        let zone = u64::MAX - u64::MAX % self.p;
        loop {
            let v = rng.next_u64();
            if v < zone {
                return Fp(v % self.p);
            }
        }
    }

    fn counter(&self) -> &OpCounter {
        &self.counter
    }

    fn detached(&self) -> Self {
        PrimeField {
            p: self.p,
            counter: Arc::new(OpCounter::default()),
        }
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
}

/// The rationals, backed by `BigRational` (always in lowest terms with a
/// positive denominator).
#[derive(Debug, Clone, Default)]
pub struct Rationals {
    counter: Arc<OpCounter>,
}

impl Rationals {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }

    fn from_ratio(&self, r: &BigRational) -> Result<BigRational, FieldError> {
        Ok(r.clone())
    }

    fn to_ratio(&self, a: &BigRational) -> BigRational {
        a.clone()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.counter.add();
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.counter.add();
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        self.counter.add();
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.counter.mul();
        a * b
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        self.counter.inv();
        Ok(a.recip())
    }

    fn random(&self, rng: &mut dyn RngCore) -> BigRational {
        // Q has no uniform distribution; draw small signed integers.
        let v = (rng.next_u32() % 65_536) as i64 - 32_768;
        self.from_i64(v)
    }

    fn counter(&self) -> &OpCounter {
        &self.counter
    }

    fn detached(&self) -> Self {
        Rationals::default()
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn prefers_fraction_free(&self) -> bool {
        true
    }
}

/// Renders a rational as `a/b`, dropping a unit denominator.
pub fn format_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
