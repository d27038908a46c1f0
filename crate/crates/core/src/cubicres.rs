//! Eisenstein integers, the cubic Jacobi symbol and the residue classes
//! `C_i(n) = {k : ((k + 1 + 2ω)/n)₃ = ω^i}`.
//!
//! The symbol is evaluated by a Euclidean loop driven by cubic reciprocity
//! between primary elements, with the supplementary laws
//! `(ω/β)₃ = ω^{(N(β)−1)/3}` and `((1−ω)/β)₃ = ω^{2m}` for primary
//! `β = (3m − 1) + 3nω`. A second evaluation through the residue field of `p`
//! exists to cross-check the first.
//!
//! Also here: the third-order recurrence predictions keyed on these classes.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lucas::{lucas_uv, LucasParams};
use crate::modarith::{sqrt_mod, PrimePowerModulus, Ratio, Residue};
use crate::polyfield::cubic_discriminant;

/// `a + bω` with `ω = (−1 + √−3)/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EisensteinInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl EisensteinInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn omega() -> Self {
        Self::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `a² − ab + b²`.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// `a + bω̄ = (a − b) − bω`.
    pub fn conj(&self) -> Self {
        Self::new(&self.a - &self.b, -&self.b)
    }

    /// `ω · self`.
    pub fn rotate(&self) -> Self {
        Self::new(-&self.b, &self.a - &self.b)
    }

    /// Congruent to 2 modulo 3.
    pub fn is_primary(&self) -> bool {
        self.a.mod_floor(&BigInt::from(3)) == BigInt::from(2)
            && self.b.mod_floor(&BigInt::from(3)).is_zero()
    }

    /// `(j, primary)` with `self = ±ω^{−j} · primary`, for `self` coprime
    /// to `1 − ω`.
    fn primary_associate(&self) -> Option<(u8, Self)> {
        let mut x = self.clone();
        for j in 0..3u8 {
            if x.is_primary() {
                return Some((j, x));
            }
            let neg = -x.clone();
            if neg.is_primary() {
                return Some((j, neg));
            }
            x = x.rotate();
        }
        None
    }

    /// Divisible by `1 − ω`, the prime above 3.
    fn divisible_by_lambda(&self) -> bool {
        (&self.a + &self.b).mod_floor(&BigInt::from(3)).is_zero()
    }

    /// `self / (1 − ω)` when divisible.
    fn div_lambda(&self) -> Self {
        // (a + bω)(2 + ω) = (2a − b) + (a + b)ω, and (1 − ω)(2 + ω) = 3
        let three = BigInt::from(3);
        Self::new(
            (BigInt::from(2) * &self.a - &self.b) / &three,
            (&self.a + &self.b) / &three,
        )
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{} - {}ω", self.a, -&self.b)
        } else {
            write!(f, "{} + {}ω", self.a, self.b)
        }
    }
}

impl From<i64> for EisensteinInt {
    fn from(a: i64) -> Self {
        Self::new(a, 0)
    }
}

impl Add for EisensteinInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for EisensteinInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for EisensteinInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl Mul for &EisensteinInt {
    type Output = EisensteinInt;
    fn mul(self, rhs: Self) -> EisensteinInt {
        let bd = &self.b * &rhs.b;
        EisensteinInt::new(
            &self.a * &rhs.a - &bd,
            &self.a * &rhs.b + &self.b * &rhs.a - bd,
        )
    }
}

impl Mul for EisensteinInt {
    type Output = EisensteinInt;
    fn mul(self, rhs: Self) -> EisensteinInt {
        &self * &rhs
    }
}

fn round_div(x: &BigInt, n: &BigInt) -> BigInt {
    // nearest integer to x/n for n > 0, halves rounded down
    (BigInt::from(2) * x + n).div_floor(&(BigInt::from(2) * n))
}

/// `x = q·y + r` with `N(r) < N(y)`.
pub fn eis_divmod(x: &EisensteinInt, y: &EisensteinInt) -> Result<(EisensteinInt, EisensteinInt)> {
    if y.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let n = y.norm();
    let num = x * &y.conj();
    let q = EisensteinInt::new(round_div(&num.a, &n), round_div(&num.b, &n));
    let r = x.clone() - &q * y;
    Ok((q, r))
}

/// Value of a cubic residue symbol: 0 or a power of `ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CubicSymbol {
    Zero,
    /// `ω^i` with `i ∈ {0, 1, 2}`.
    Omega(u8),
}

impl CubicSymbol {
    pub fn pow(self, e: u64) -> Self {
        match self {
            CubicSymbol::Zero if e == 0 => CubicSymbol::Omega(0),
            CubicSymbol::Zero => CubicSymbol::Zero,
            CubicSymbol::Omega(i) => CubicSymbol::Omega(((i as u64 * (e % 3)) % 3) as u8),
        }
    }
}

impl fmt::Display for CubicSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CubicSymbol::Zero => write!(f, "0"),
            CubicSymbol::Omega(0) => write!(f, "1"),
            CubicSymbol::Omega(1) => write!(f, "ω"),
            CubicSymbol::Omega(_) => write!(f, "ω²"),
        }
    }
}

/// `(α/β)₃` by reciprocity; `β` must be coprime to 3.
pub fn cubic_jacobi(alpha: &EisensteinInt, beta: &EisensteinInt) -> Result<CubicSymbol> {
    let three = BigInt::from(3);
    if beta.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if (beta.norm() % &three).is_zero() {
        return Err(Error::NotCoprimeToThree);
    }
    // the symbol only depends on the ideal generated by beta
    let (_, mut beta) = beta.primary_associate().expect("coprime to 3");
    let mut alpha = alpha.clone();
    let mut exp: u64 = 0;
    loop {
        if beta.is_unit() {
            return Ok(CubicSymbol::Omega((exp % 3) as u8));
        }
        alpha = eis_divmod(&alpha, &beta)?.1;
        if alpha.is_zero() {
            return Ok(CubicSymbol::Zero);
        }
        let m = ((&beta.a + 1u8) / &three).mod_floor(&three).to_u64().unwrap();
        let omega_exp = ((beta.norm() - 1u8) / &three).mod_floor(&three).to_u64().unwrap();
        while alpha.divisible_by_lambda() {
            alpha = alpha.div_lambda();
            exp += 2 * m;
        }
        let (j, primary) = alpha.primary_associate().expect("coprime to 3");
        // alpha = ±ω^{−j}·primary, and (−1/β)₃ = 1
        exp += (3 - j as u64) % 3 * omega_exp;
        alpha = beta;
        beta = primary;
    }
}

/// `(α/p)₃` for a rational prime `p ≠ 3`, evaluated in the residue field(s)
/// of `p`: over `F_{p²}` when `p ≡ 2 (mod 3)`, over both embeddings into
/// `F_p` otherwise.
pub fn cubic_symbol_residue_field(alpha: &EisensteinInt, p: u64) -> Result<CubicSymbol> {
    if p.is_multiple_of(3) {
        return Err(Error::NotCoprimeToThree);
    }
    let a = Residue::from_bigint(&alpha.a, p);
    let b = Residue::from_bigint(&alpha.b, p);
    if p % 3 == 1 {
        let root3 = sqrt_mod(Residue::from_i64(-3, p)).expect("−3 is a square");
        let half = Residue::new(2, p).inv()?;
        let mut total = 0u64;
        for s in [root3, -root3] {
            let w = (s - 1) * half;
            let z = a + b * w;
            if z.is_zero() {
                return Ok(CubicSymbol::Zero);
            }
            let e = z.pow((p - 1) / 3);
            total += (0..3u64)
                .find(|&i| w.pow(i) == e)
                .expect("a cube root of unity");
        }
        Ok(CubicSymbol::Omega((total % 3) as u8))
    } else {
        if a.is_zero() && b.is_zero() {
            return Ok(CubicSymbol::Zero);
        }
        let e = (p as u128 * p as u128 - 1) / 3;
        let (x, y) = fp2_pow((a, b), e);
        let one = Residue::one(p);
        let zero = Residue::zero(p);
        Ok(if (x, y) == (one, zero) {
            CubicSymbol::Omega(0)
        } else if (x, y) == (zero, one) {
            CubicSymbol::Omega(1)
        } else {
            debug_assert_eq!((x, y), (-one, -one));
            CubicSymbol::Omega(2)
        })
    }
}

/// `(x + yω)^e` in `F_p[ω]`, `ω² = −1 − ω`.
fn fp2_pow(base: (Residue, Residue), mut e: u128) -> (Residue, Residue) {
    let p = base.0.modulus();
    let mul = |(a, b): (Residue, Residue), (c, d): (Residue, Residue)| {
        let bd = b * d;
        (a * c - bd, a * d + b * c - bd)
    };
    let mut acc = (Residue::one(p), Residue::zero(p));
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, sq);
        }
        sq = mul(sq, sq);
        e >>= 1;
    }
    acc
}

/// The class of `c` modulo `p^a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CubicClass {
    C0,
    C1,
    C2,
    /// `p` divides `c² + 3`.
    Undefined,
}

impl CubicClass {
    pub fn index(self) -> Option<u8> {
        match self {
            CubicClass::C0 => Some(0),
            CubicClass::C1 => Some(1),
            CubicClass::C2 => Some(2),
            CubicClass::Undefined => None,
        }
    }

    fn from_symbol(s: CubicSymbol) -> Self {
        match s {
            CubicSymbol::Zero => CubicClass::Undefined,
            CubicSymbol::Omega(0) => CubicClass::C0,
            CubicSymbol::Omega(1) => CubicClass::C1,
            CubicSymbol::Omega(_) => CubicClass::C2,
        }
    }
}

impl fmt::Display for CubicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index() {
            Some(i) => write!(f, "C{i}"),
            None => write!(f, "undefined"),
        }
    }
}

fn class_argument(c: Residue) -> EisensteinInt {
    EisensteinInt::new(c.value() + 1, 2)
}

/// Class `i` with `((c + 1 + 2ω)/p^a)₃ = ω^i`, computed as `(·/p)₃^a`.
pub fn classify(c: Ratio, pp: &PrimePowerModulus) -> Result<CubicClass> {
    classify_residue(c.to_residue(pp.p())?, pp)
}

pub fn classify_residue(c: Residue, pp: &PrimePowerModulus) -> Result<CubicClass> {
    let sym = cubic_jacobi(&class_argument(c), &EisensteinInt::from(pp.p() as i64))?;
    Ok(CubicClass::from_symbol(sym.pow(pp.a() as u64)))
}

/// [`classify_residue`] through [`cubic_symbol_residue_field`].
pub fn classify_residue_field(c: Residue, pp: &PrimePowerModulus) -> Result<CubicClass> {
    let sym = cubic_symbol_residue_field(&class_argument(c), pp.p())?;
    Ok(CubicClass::from_symbol(sym.pow(pp.a() as u64)))
}

/// Whether `u_{(p − (p/3))/3} ≡ 0` for `u_0 = 0`, `u_1 = 1`,
/// `u_{n+1} = 6u_n − (3c² + 9)u_{n−1}`; equivalent to `c ∈ C_0(p)`.
pub fn sun_c0_criterion(c: Residue, p: u64) -> Result<bool> {
    assert_eq!(c.modulus(), p, "residue modulus must be p");
    if p <= 3 {
        return Err(Error::InvalidParam(format!("p = {p} must exceed 3")));
    }
    if (c * (c * c + 3)).is_zero() {
        return Err(Error::DegenerateC);
    }
    let params = LucasParams::new(Residue::new(6, p), c * c * 3 + 9)?;
    let index = if p % 3 == 1 { (p - 1) / 3 } else { (p + 1) / 3 };
    Ok(lucas_uv(&params, &BigInt::from(index)).u.is_zero())
}

fn require_p_above_three(pp: &PrimePowerModulus) -> Result<()> {
    if pp.p() <= 3 {
        return Err(Error::InvalidParam(format!("p = {} must exceed 3", pp.p())));
    }
    Ok(())
}

/// `(p^a − 1)/3` reduced for use as an exponent; `p^a ≡ 1 (mod 3)`.
fn third_of_pa_minus_one(pp: &PrimePowerModulus) -> Result<num_bigint::BigUint> {
    if pp.rem(3) != 1 {
        return Err(Error::InvalidParam(format!("{pp} is not 1 mod 3")));
    }
    Ok((pp.value() - 1u8) / 3u8)
}

/// `(u_{p^a}, u_{p^a+1}, u_{p^a+2})` for `u_0 = u_1 = 0`, `u_2 = 1`,
/// `u_{n+3} + a₁u_{n+2} + a₂u_{n+1} + a₃u_n = 0`, when the discriminant is a
/// nonzero square modulo `p`.
pub fn lemma41_predict(
    a1: &BigInt,
    a2: &BigInt,
    a3: &BigInt,
    pp: &PrimePowerModulus,
) -> Result<[Residue; 3]> {
    require_p_above_three(pp)?;
    let p = pp.p();
    let disc = Residue::from_bigint(&cubic_discriminant(a1, a2, a3), p);
    if disc.is_zero() {
        return Err(Error::SingularD(p));
    }
    let d = sqrt_mod(disc).ok_or(Error::NoSquareRoot(p))?;
    lemma41_with_root(a1, a2, a3, d, pp)
}

/// [`lemma41_predict`] with a chosen square root `d` of the discriminant.
pub fn lemma41_with_root(
    a1: &BigInt,
    a2: &BigInt,
    a3: &BigInt,
    d: Residue,
    pp: &PrimePowerModulus,
) -> Result<[Residue; 3]> {
    require_p_above_three(pp)?;
    let p = pp.p();
    let (a1, a2, a3) = (
        Residue::from_bigint(a1, p),
        Residue::from_bigint(a2, p),
        Residue::from_bigint(a3, p),
    );
    if d.is_zero() {
        return Err(Error::SingularD(p));
    }
    let b = -(a1 * a1 * a1 * 2) + a1 * a2 * 9 - a3 * 27;
    let q = a1 * a1 - a2 * 3;
    let zero = Residue::zero(p);
    if q.is_zero() {
        let e = b.pow_biguint(&third_of_pa_minus_one(pp)?);
        let third = Residue::new(3, p).inv()?;
        return Ok([zero, e, -a1 * (e * 2 + 1) * third]);
    }
    let c = b * (d * 3).inv()?;
    let sign = match classify_residue(c, pp)? {
        CubicClass::C0 => return Ok([zero, Residue::one(p), -a1]),
        CubicClass::C1 => Residue::one(p),
        CubicClass::C2 => -Residue::one(p),
        CubicClass::Undefined => unreachable!("c² + 3 = 4(a₁² − 3a₂)³/(9D) is nonzero"),
    };
    let d_inv = d.inv()?;
    Ok([
        sign * q * d_inv,
        (sign * (a3 * 9 - a1 * a2) - d) * (d * 2).inv()?,
        sign * (a2 * a2 - a1 * a3 * 3) * d_inv,
    ])
}

/// The specialisation `a₁ = 3 − m`, `a₂ = 3`, `a₃ = 1` with
/// `m ≡ t² + t + 7`, keyed on `c = (2m² − 18m + 27)/(6t + 3)`.
pub fn lemma42_predict(m: i64, t: i64, pp: &PrimePowerModulus) -> Result<[Residue; 3]> {
    require_p_above_three(pp)?;
    let p = pp.p();
    let (mr, tr) = (Residue::from_i64(m, p), Residue::from_i64(t, p));
    let two_t1 = tr * 2 + 1;
    if two_t1.is_zero() {
        return Err(Error::InvalidParam(format!("2t + 1 ≡ 0 mod {p}")));
    }
    if mr.is_zero() || mr != tr * tr + tr + 7 {
        return Err(Error::InvalidParam(format!(
            "m must satisfy m ≡ t² + t + 7 ≢ 0 mod {p}"
        )));
    }
    let zero = Residue::zero(p);
    let one = Residue::one(p);
    if (mr - 6).is_zero() {
        let two = Residue::new(2, p);
        let e = two.pow_biguint(&third_of_pa_minus_one(pp)?);
        return Ok([zero, e, e * 2 + 1]);
    }
    let c = (mr * mr * 2 - mr * 18 + 27) * (two_t1 * 3).inv()?;
    let sign = match classify_residue(c, pp)? {
        CubicClass::C0 => return Ok([zero, one, mr - 3]),
        CubicClass::C1 => one,
        CubicClass::C2 => -one,
        CubicClass::Undefined => unreachable!("c² + 3 ≡ 4m(m − 6)²/(6t + 3)² is nonzero"),
    };
    let inv = two_t1.inv()?;
    let half = Residue::new(2, p).inv()?;
    Ok([
        sign * (mr - 6) * inv,
        sign * Residue::new(3, p) * inv * half - half,
        sign * Residue::new(3, p) * inv,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linrec::LinearRecurrence;
    use crate::modarith::primes_in;
    use proptest::prelude::*;

    fn eis(a: i64, b: i64) -> EisensteinInt {
        EisensteinInt::new(a, b)
    }

    fn pp(p: u64, a: u32) -> PrimePowerModulus {
        PrimePowerModulus::new(p, a).unwrap()
    }

    #[test]
    fn division_examples() {
        let y = eis(1, 3);
        assert_eq!(y.norm(), BigInt::from(7));
        assert_eq!(eis_divmod(&y, &y).unwrap(), (eis(1, 0), eis(0, 0)));
        let (q, r) = eis_divmod(&eis(5, 0), &eis(2, 1)).unwrap();
        assert!(r.norm() < BigInt::from(3));
        assert_eq!(&q * &eis(2, 1) + r, eis(5, 0));
        assert_eq!(eis_divmod(&y, &EisensteinInt::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn omega_is_a_cube_root_of_unity() {
        let w = EisensteinInt::omega();
        assert_eq!(&(&w * &w) * &w, EisensteinInt::one());
        assert_eq!(&w * &w + w.clone() + EisensteinInt::one(), EisensteinInt::zero());
        assert_eq!(w.rotate(), &w * &w);
    }

    #[test]
    fn symbol_examples() {
        let n = eis(1, 3);
        assert_eq!(cubic_jacobi(&eis(2, 0), &n).unwrap(), CubicSymbol::Omega(2));
        assert_eq!(cubic_jacobi(&eis(1, 0), &n).unwrap(), CubicSymbol::Omega(0));
        assert_eq!(cubic_jacobi(&eis(-1, 0), &n).unwrap(), CubicSymbol::Omega(0));
        assert_eq!(cubic_jacobi(&eis(7, 0), &n).unwrap(), CubicSymbol::Zero);
        assert_eq!(cubic_jacobi(&eis(2, 0), &eis(3, 0)), Err(Error::NotCoprimeToThree));
        assert_eq!(cubic_jacobi(&eis(2, 0), &eis(1, 2)), Err(Error::NotCoprimeToThree));
    }

    #[test]
    fn rational_arguments_are_cubes_modulo_inert_primes() {
        for p in primes_in(2, 50).into_iter().filter(|p| p % 3 == 2) {
            let cubes: std::collections::HashSet<u64> = (1..p).map(|x| x * x * x % p).collect();
            assert_eq!(cubes.len() as u64, p - 1);
            for x in 1..p as i64 {
                assert_eq!(
                    cubic_jacobi(&eis(x, 0), &eis(p as i64, 0)).unwrap(),
                    CubicSymbol::Omega(0)
                );
            }
        }
    }

    #[test]
    fn reciprocity_agrees_with_residue_field() {
        for p in primes_in(2, 200).into_iter().filter(|&p| p != 3) {
            let n = eis(p as i64, 0);
            for a in -6..=(p as i64).min(40) {
                for b in -4..=4 {
                    let x = eis(a, b);
                    assert_eq!(
                        cubic_jacobi(&x, &n).unwrap(),
                        cubic_symbol_residue_field(&x, p).unwrap(),
                        "p={p} alpha={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn symbol_is_multiplicative_in_the_modulus() {
        let moduli = [eis(1, 3), eis(2, 0), eis(5, 0), eis(4, 3), eis(-1, 6), eis(7, 3)];
        for x in &moduli {
            for y in &moduli {
                let xy = x * y;
                for (a, b) in [(2, 0), (3, 1), (5, -2), (11, 7)] {
                    let alpha = eis(a, b);
                    let lhs = cubic_jacobi(&alpha, &xy).unwrap();
                    let (sx, sy) = (cubic_jacobi(&alpha, x).unwrap(), cubic_jacobi(&alpha, y).unwrap());
                    let rhs = match (sx, sy) {
                        (CubicSymbol::Omega(i), CubicSymbol::Omega(j)) => CubicSymbol::Omega((i + j) % 3),
                        _ => CubicSymbol::Zero,
                    };
                    assert_eq!(lhs, rhs, "alpha={alpha} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(Ratio::int(3), &pp(17, 1)).unwrap(), CubicClass::C0);
        assert_eq!(classify(Ratio::int(3), &pp(5, 1)).unwrap(), CubicClass::C2);
        assert_eq!(classify(Ratio::new(-1, 3), &pp(5, 1)).unwrap(), CubicClass::C2);
        assert_eq!(classify(Ratio::int(1), &pp(2, 1)).unwrap(), CubicClass::Undefined);
        assert_eq!(classify(Ratio::int(0), &pp(2, 1)).unwrap(), CubicClass::C0);
        assert!(classify(Ratio::int(1), &pp(3, 1)).is_err());
    }

    #[test]
    fn classification_tables_mod_nine_and_seven() {
        for p in primes_in(5, 10_000) {
            let mut a = 1;
            while let Ok(modulus) = PrimePowerModulus::new(p, a) {
                let Some(pa) = modulus.to_i64().filter(|&q| q < 10_000) else {
                    break;
                };
                let three = classify(Ratio::int(3), &modulus).unwrap();
                let expected = match pa % 9 {
                    1 | 8 => CubicClass::C0,
                    2 | 7 => CubicClass::C1,
                    _ => CubicClass::C2,
                };
                assert_eq!(three, expected, "p^a={pa}");
                if p != 7 {
                    let third = classify(Ratio::new(-1, 3), &modulus).unwrap();
                    let expected = match pa % 7 {
                        1 | 6 => CubicClass::C0,
                        3 | 4 => CubicClass::C1,
                        _ => CubicClass::C2,
                    };
                    assert_eq!(third, expected, "p^a={pa}");
                }
                a += 1;
            }
        }
    }

    #[test]
    fn paths_agree_on_prime_powers() {
        for p in primes_in(2, 200).into_iter().filter(|&p| p != 3) {
            for a in 1..=4 {
                let modulus = pp(p, a);
                for c in 0..p {
                    let c = Residue::new(c, p);
                    assert_eq!(
                        classify_residue(c, &modulus).unwrap(),
                        classify_residue_field(c, &modulus).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn sun_criterion_examples() {
        assert!(sun_c0_criterion(Residue::new(3, 17), 17).unwrap());
        assert!(!sun_c0_criterion(Residue::new(3, 5), 5).unwrap());
        let c = Ratio::new(-1, 3).to_residue(13).unwrap();
        assert!(sun_c0_criterion(c, 13).unwrap());
        assert_eq!(sun_c0_criterion(Residue::new(0, 13), 13), Err(Error::DegenerateC));
    }

    #[test]
    fn sun_criterion_matches_classification() {
        for p in primes_in(5, 200) {
            for c in 1..p {
                let c = Residue::new(c, p);
                if (c * c + 3).is_zero() {
                    continue;
                }
                let class = classify_residue(c, &pp(p, 1)).unwrap();
                assert_eq!(sun_c0_criterion(c, p).unwrap(), class == CubicClass::C0, "p={p} c={c:?}");
            }
        }
    }

    #[test]
    fn negation_swaps_classes_one_and_two() {
        for p in primes_in(2, 200).into_iter().filter(|&p| p != 3) {
            for a in 1..=3 {
                let modulus = pp(p, a);
                for c in 0..p {
                    let c = Residue::new(c, p);
                    let pos = classify_residue(c, &modulus).unwrap();
                    let neg = classify_residue(-c, &modulus).unwrap();
                    assert_eq!(pos == CubicClass::C2, neg == CubicClass::C1);
                    assert_eq!(pos == CubicClass::C0, neg == CubicClass::C0);
                }
            }
        }
    }

    #[test]
    fn classes_are_balanced_for_split_primes() {
        for p in primes_in(5, 400).into_iter().filter(|p| p % 3 == 1) {
            let mut counts = [0i64; 3];
            for c in 0..p {
                if let Some(i) = classify_residue(Residue::new(c, p), &pp(p, 1)).unwrap().index() {
                    counts[i as usize] += 1;
                }
            }
            assert_eq!(counts.iter().sum::<i64>(), p as i64 - 2);
            let third = (p as i64 - 2) / 3;
            for n in counts {
                assert!((n - third).abs() <= 1, "p={p} counts={counts:?}");
            }
        }
    }

    fn stepped_triple(a1: i64, a2: i64, a3: i64, modulus: &PrimePowerModulus) -> [Residue; 3] {
        let p = modulus.p();
        let coeffs = [a3, a2, a1, 1].map(|x| Residue::from_i64(x, p));
        let init = [0, 0, 1].map(|x| Residue::new(x, p));
        let rec = LinearRecurrence::new(&coeffs, &init).unwrap();
        let pa = modulus.to_i64().unwrap();
        [0, 1, 2].map(|i| rec.eval_stepping(&BigInt::from(pa + i)))
    }

    #[test]
    fn lemma42_examples() {
        let got = lemma42_predict(7, 0, &pp(13, 1)).unwrap();
        assert_eq!(got.map(|r| r.value()), [0, 1, 4]);
        assert_eq!(got, stepped_triple(-4, 3, 1, &pp(13, 1)));
        assert!(lemma42_predict(8, 0, &pp(13, 1)).is_err());
        assert!(lemma42_predict(7, 0, &pp(3, 1)).is_err());
    }

    #[test]
    fn lemma42_matches_stepping() {
        for p in primes_in(5, 50) {
            for a in 1..=2 {
                let modulus = pp(p, a);
                for t in 0..p as i64 {
                    let m = t * t + t + 7;
                    if (2 * t + 1) % p as i64 == 0 || m % p as i64 == 0 {
                        continue;
                    }
                    let got = lemma42_predict(m, t, &modulus).unwrap();
                    assert_eq!(got, stepped_triple(3 - m, 3, 1, &modulus), "p={p} a={a} t={t}");
                }
            }
        }
    }

    #[test]
    fn lemma41_matches_stepping_for_a_up_to_three() {
        let mut checked = 0;
        for p in primes_in(5, 30) {
            for a in 1..=3 {
                let modulus = pp(p, a);
                for a1 in -3..=3i64 {
                    for a2 in -3..=3i64 {
                        for a3 in [1i64, 2, -1, 5] {
                            let args = [a1, a2, a3].map(BigInt::from);
                            let Ok(got) = lemma41_predict(&args[0], &args[1], &args[2], &modulus) else {
                                continue;
                            };
                            if a3 % p as i64 == 0 {
                                continue;
                            }
                            assert_eq!(
                                got,
                                stepped_triple(a1, a2, a3, &modulus),
                                "p={p} a={a} ({a1},{a2},{a3})"
                            );
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 500, "only {checked} admissible cases");
    }

    #[test]
    fn lemma41_is_invariant_under_root_flip() {
        for p in primes_in(5, 60) {
            let modulus = pp(p, 1);
            for (a1, a2, a3) in [(-6, 3, 1), (0, -7, 7), (1, -2, -1), (-4, 3, 1)] {
                let args = [a1, a2, a3].map(BigInt::from);
                let disc = Residue::from_bigint(&cubic_discriminant(&args[0], &args[1], &args[2]), p);
                let Some(d) = sqrt_mod(disc).filter(|d| !d.is_zero()) else {
                    continue;
                };
                let plus = lemma41_with_root(&args[0], &args[1], &args[2], d, &modulus).unwrap();
                let minus = lemma41_with_root(&args[0], &args[1], &args[2], -d, &modulus).unwrap();
                assert_eq!(plus, minus, "p={p}");
            }
        }
    }

    #[test]
    fn lemma41_rejects_non_squares() {
        // D(x³ − x − 1) = −23, a non-residue mod 5
        let args = [0, -1, -1].map(BigInt::from);
        assert_eq!(
            lemma41_predict(&args[0], &args[1], &args[2], &pp(5, 1)),
            Err(Error::NoSquareRoot(5))
        );
        assert_eq!(
            lemma41_predict(&args[0], &args[1], &args[2], &pp(23, 1)),
            Err(Error::SingularD(23))
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn norm_is_multiplicative_and_division_is_euclidean(
            a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000,
            c in -1000i64..1000, d in -1000i64..1000,
        ) {
            let (x, y) = (eis(a, b), eis(c, d));
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
            prop_assume!(!y.is_zero());
            let (q, r) = eis_divmod(&x, &y).unwrap();
            prop_assert!(r.norm() < y.norm());
            prop_assert_eq!(&q * &y + r, x);
        }
    }
}
