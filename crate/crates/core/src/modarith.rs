//! Arithmetic in the prime field, Jacobi symbols, square roots and
//! binomial coefficients modulo `p` for arbitrarily large arguments.
//!
//! The prime itself is a machine word (`p < 2^63`); indices, offsets and the
//! prime power `p^a` are arbitrary precision.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest supported prime (exclusive).
pub const PRIME_LIMIT: u64 = 1 << 63;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    // both operands < p < 2^63, so the sum cannot overflow
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for all
/// 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
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

/// Primes in the closed interval `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

/// A prime `p` together with an exponent `a >= 1` and the exact value `p^a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimePowerModulus {
    p: u64,
    a: u32,
    value: BigUint,
}

impl PrimePowerModulus {
    pub fn new(p: u64, a: u32) -> Result<Self> {
        if p >= PRIME_LIMIT || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a == 0 {
            return Err(Error::ZeroExponent);
        }
        Ok(Self {
            p,
            a,
            value: BigUint::from(p).pow(a),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    /// `p^a` as an exact integer.
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn value_signed(&self) -> BigInt {
        BigInt::from(self.value.clone())
    }

    /// `p^a` when it fits in an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        self.value.to_i64()
    }

    /// `p^a mod m` for a small modulus `m`.
    pub fn rem(&self, m: u64) -> u64 {
        (&self.value % m).to_u64().unwrap_or(0)
    }

    /// `p^a` reduced into `(-m/2, m/2]`, handy for tables keyed on `p^a ≡ ±r (mod m)`.
    pub fn signed_rem(&self, m: u64) -> i64 {
        let r = self.rem(m) as i64;
        if 2 * r > m as i64 {
            r - m as i64
        } else {
            r
        }
    }
}

impl fmt::Display for PrimePowerModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.a)
        }
    }
}

/// An element of the field with `p` elements, stored as its canonical
/// representative in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    p: u64,
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Residue {
    pub fn new(value: u64, p: u64) -> Self {
        debug_assert!(p >= 2);
        Self { value: value % p, p }
    }

    pub fn zero(p: u64) -> Self {
        Self { value: 0, p }
    }

    pub fn one(p: u64) -> Self {
        Self::new(1, p)
    }

    pub fn from_i64(x: i64, p: u64) -> Self {
        Self::from_i128(x as i128, p)
    }

    pub fn from_i128(x: i128, p: u64) -> Self {
        Self {
            value: x.rem_euclid(p as i128) as u64,
            p,
        }
    }

    pub fn from_bigint(x: &BigInt, p: u64) -> Self {
        let r = x.mod_floor(&BigInt::from(p));
        Self {
            value: r.to_u64().expect("reduced value fits"),
            p,
        }
    }

    pub fn from_biguint(x: &BigUint, p: u64) -> Self {
        Self {
            value: (x % p).to_u64().expect("reduced value fits"),
            p,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Representative in `(-p/2, p/2]`.
    pub fn signed(self) -> i64 {
        if self.value > self.p / 2 {
            self.value as i64 - self.p as i64
        } else {
            self.value as i64
        }
    }

    pub fn inv(self) -> Result<Self> {
        mod_inv(self)
    }

    pub fn pow(self, exp: u64) -> Self {
        Self {
            value: pow_mod(self.value, exp, self.p),
            p: self.p,
        }
    }

    pub fn pow_biguint(self, exp: &BigUint) -> Self {
        if self.value == 0 {
            return if exp.is_zero() { Self::one(self.p) } else { self };
        }
        // Fermat: the exponent only matters modulo p - 1 for units
        let e = (exp % (self.p - 1)).to_u64().expect("fits");
        self.pow(e)
    }

    /// Power with a signed exponent; negative exponents need an invertible base.
    pub fn pow_bigint(self, exp: &BigInt) -> Result<Self> {
        match exp.sign() {
            Sign::Minus => Ok(self.inv()?.pow_biguint(exp.magnitude())),
            _ => Ok(self.pow_biguint(exp.magnitude())),
        }
    }

    pub fn pow_i64(self, exp: i64) -> Result<Self> {
        if exp < 0 {
            Ok(self.inv()?.pow(exp.unsigned_abs()))
        } else {
            Ok(self.pow(exp as u64))
        }
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        Ok(self * rhs.inv()?)
    }

    /// Legendre symbol `(self / p)` via Euler's criterion; `p` must be odd.
    pub fn legendre(self) -> i8 {
        if self.value == 0 {
            return 0;
        }
        if self.p == 2 {
            return 1;
        }
        if pow_mod(self.value, (self.p - 1) / 2, self.p) == 1 {
            1
        } else {
            -1
        }
    }

    fn check(self, rhs: Self) {
        debug_assert_eq!(self.p, rhs.p, "mixed moduli");
    }
}

impl Add for Residue {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        Self {
            value: add_mod(self.value, rhs.value, self.p),
            p: self.p,
        }
    }
}

impl Sub for Residue {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(rhs);
        Self {
            value: sub_mod(self.value, rhs.value, self.p),
            p: self.p,
        }
    }
}

impl Mul for Residue {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        Self {
            value: mul_mod(self.value, rhs.value, self.p),
            p: self.p,
        }
    }
}

impl Neg for Residue {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: sub_mod(0, self.value, self.p),
            p: self.p,
        }
    }
}

impl AddAssign for Residue {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for Residue {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for Residue {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Mul<i64> for Residue {
    type Output = Self;
    fn mul(self, rhs: i64) -> Self {
        self * Residue::from_i64(rhs, self.p)
    }
}

impl Add<i64> for Residue {
    type Output = Self;
    fn add(self, rhs: i64) -> Self {
        self + Residue::from_i64(rhs, self.p)
    }
}

impl Sub<i64> for Residue {
    type Output = Self;
    fn sub(self, rhs: i64) -> Self {
        self - Residue::from_i64(rhs, self.p)
    }
}

/// Multiplicative inverse by the extended Euclidean algorithm.
pub fn mod_inv(x: Residue) -> Result<Residue> {
    if x.value == 0 {
        return Err(Error::ZeroInverse(x.p));
    }
    let (mut r0, mut r1) = (x.p as i128, x.value as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    Ok(Residue::from_i128(t0, x.p))
}

/// `numerator / denominator` as an element of `Z/p`.
pub fn rational_residue(numerator: i128, denominator: i128, p: u64) -> Result<Residue> {
    let den = Residue::from_i128(denominator, p);
    if den.is_zero() {
        return Err(Error::DenominatorDivisible {
            den: denominator.to_string(),
            p,
        });
    }
    Ok(Residue::from_i128(numerator, p) * den.inv()?)
}

/// A rational number with nonzero denominator, kept in lowest terms with a
/// positive denominator. Parses from `num` or `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ratio {
    num: i128,
    den: i128,
}

impl Ratio {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num.gcd(&den);
        let s = if den < 0 { -1 } else { 1 };
        Self {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub fn int(n: i128) -> Self {
        Self { num: n, den: 1 }
    }

    pub fn num(self) -> i128 {
        self.num
    }

    pub fn den(self) -> i128 {
        self.den
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    pub fn to_residue(self, p: u64) -> Result<Residue> {
        rational_residue(self.num, self.den, p)
    }

    pub fn mul(self, rhs: Self) -> Self {
        Self::new(self.num * rhs.num, self.den * rhs.den)
    }

    pub fn add(self, rhs: Self) -> Self {
        Self::new(self.num * rhs.den + rhs.num * self.den, self.den * rhs.den)
    }

    pub fn neg(self) -> Self {
        Self::new(-self.num, self.den)
    }

    pub fn pow(self, e: u32) -> Self {
        Self::new(self.num.pow(e), self.den.pow(e))
    }

    pub fn recip(self) -> Self {
        Self::new(self.den, self.num)
    }
}

impl From<i64> for Ratio {
    fn from(n: i64) -> Self {
        Self::int(n as i128)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Ratio {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<i128>()
                .map_err(|e| format!("bad rational {s:?}: {e}"))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse(d)?;
                if d == 0 {
                    return Err(format!("bad rational {s:?}: zero denominator"));
                }
                Ok(Ratio::new(parse(n)?, d))
            }
            None => Ok(Ratio::int(parse(s)?)),
        }
    }
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi_symbol(a: &BigInt, n: &BigUint) -> Result<i8> {
    if n.is_even() || n.is_zero() {
        return Err(Error::EvenModulus);
    }
    let mut n = n.clone();
    let mut a = a.mod_floor(&BigInt::from(n.clone())).to_biguint().expect("nonnegative");
    let mut t: i8 = 1;
    while !a.is_zero() {
        let z = a.trailing_zeros().unwrap_or(0);
        a >>= z;
        let n8 = (&n % 8u32).to_u32().expect("small");
        if z % 2 == 1 && (n8 == 3 || n8 == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            t = -t;
        }
        a %= &n;
    }
    Ok(if n.is_one() { t } else { 0 })
}

/// Jacobi symbol with machine-word arguments.
pub fn jacobi(a: i128, n: u64) -> Result<i8> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenModulus);
    }
    let mut n = n;
    let mut a = a.rem_euclid(n as i128) as u64;
    let mut t: i8 = 1;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    Ok(if n == 1 { t } else { 0 })
}

/// `(x / p^a)` for a residue `x` modulo an odd prime: the Legendre symbol
/// raised to the `a`-th power.
pub fn jacobi_prime_power(x: Residue, pp: &PrimePowerModulus) -> i8 {
    let l = x.legendre();
    if pp.a().is_multiple_of(2) {
        l * l
    } else {
        l
    }
}

/// Square root modulo an odd prime by Tonelli-Shanks.
///
/// Returns `None` for quadratic non-residues. Of the two roots the one in
/// `[0, (p-1)/2]` is returned, so results are reproducible.
pub fn sqrt_mod(a: Residue) -> Option<Residue> {
    let p = a.modulus();
    if a.is_zero() || p == 2 {
        return Some(a);
    }
    if a.legendre() != 1 {
        return None;
    }
    let root = if p % 4 == 3 {
        a.pow((p + 1) / 4)
    } else {
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let z = (2..p)
            .map(|z| Residue::new(z, p))
            .find(|z| z.legendre() == -1)
            .expect("a non-residue exists");
        let mut m = s;
        let mut c = z.pow(q);
        let mut t = a.pow(q);
        let mut r = a.pow(q.div_ceil(2));
        while t.value() != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2.value() != 1 {
                t2 = t2 * t2;
                i += 1;
            }
            let b = c.pow(1 << (m - i - 1));
            m = i;
            c = b * b;
            t *= c;
            r *= b;
        }
        r
    };
    Some(if root.value() > (p - 1) / 2 { -root } else { root })
}

/// `binom(n, k) mod p` for `n, k < p` by the multiplicative formula.
fn small_binom(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..k {
        num = mul_mod(num, n - i, p);
        den = mul_mod(den, i + 1, p);
    }
    let den_inv = mod_inv(Residue::new(den, p)).expect("k < p").value();
    mul_mod(num, den_inv, p)
}

/// `binom(n, k) mod p` by Lucas' theorem. Returns 0 when `k < 0` or `k > n`.
pub fn binom_mod_p(n: &BigInt, k: &BigInt, p: u64) -> Residue {
    if k.is_negative() || n.is_negative() || k > n {
        return Residue::zero(p);
    }
    let bp = BigUint::from(p);
    let mut n = n.magnitude().clone();
    let mut k = k.magnitude().clone();
    let mut acc = 1u64 % p;
    while !k.is_zero() {
        let (nq, nr) = n.div_rem(&bp);
        let (kq, kr) = k.div_rem(&bp);
        let (nr, kr) = (nr.to_u64().unwrap(), kr.to_u64().unwrap());
        if kr > nr {
            return Residue::zero(p);
        }
        acc = mul_mod(acc, small_binom(nr, kr, p), p);
        n = nq;
        k = kq;
    }
    Residue::new(acc, p)
}

/// Factorial tables for repeated Lucas evaluations with machine-word
/// arguments; the oracle's inner loop.
#[derive(Clone, Debug)]
pub struct LucasTable {
    p: u64,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

/// Primes above this bound are too large for a factorial table.
pub const LUCAS_TABLE_LIMIT: u64 = 1 << 22;

impl LucasTable {
    pub fn new(p: u64) -> Option<Self> {
        if p > LUCAS_TABLE_LIMIT {
            return None;
        }
        let n = p as usize;
        let mut fact = vec![1u64 % p; n];
        for i in 1..n {
            fact[i] = mul_mod(fact[i - 1], i as u64, p);
        }
        let mut inv_fact = vec![1u64 % p; n];
        inv_fact[n - 1] = mod_inv(Residue::new(fact[n - 1], p)).unwrap().value();
        for i in (1..n).rev() {
            inv_fact[i - 1] = mul_mod(inv_fact[i], i as u64, p);
        }
        Some(Self { p, fact, inv_fact })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `binom(n, k) mod p`, zero when `k < 0` or `k > n`.
    #[inline]
    pub fn binom(&self, n: u64, k: i64) -> u64 {
        if k < 0 || k as u64 > n {
            return 0;
        }
        let (p, mut n, mut k) = (self.p, n, k as u64);
        let mut acc = 1 % p;
        while k > 0 {
            let (nr, kr) = ((n % p) as usize, (k % p) as usize);
            if kr > nr {
                return 0;
            }
            acc = mul_mod(
                acc,
                mul_mod(self.fact[nr], mul_mod(self.inv_fact[kr], self.inv_fact[nr - kr], p), p),
                p,
            );
            n /= p;
            k /= p;
        }
        acc
    }
}
