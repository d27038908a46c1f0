//! Lucas sequences `u_n(A, B)`, `v_n(A, B)` over GF(p), their shift by a
//! prime power, and the integer Lucas numbers `L_n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::modarith::{jacobi, jacobi_prime_power, PrimePowerModulus, Residue};

/// Parameters `(A, B)` with `B` invertible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LucasParams {
    a: Residue,
    b: Residue,
}

impl LucasParams {
    pub fn new(a: Residue, b: Residue) -> Result<Self> {
        assert_eq!(a.modulus(), b.modulus(), "A and B must share a modulus");
        if b.is_zero() {
            return Err(Error::ZeroB(b.modulus()));
        }
        Ok(Self { a, b })
    }

    pub fn from_i64(a: i64, b: i64, p: u64) -> Result<Self> {
        Self::new(Residue::from_i64(a, p), Residue::from_i64(b, p))
    }

    pub fn a(&self) -> Residue {
        self.a
    }

    pub fn b(&self) -> Residue {
        self.b
    }

    pub fn p(&self) -> u64 {
        self.a.modulus()
    }

    /// `Δ = A² − 4B`.
    pub fn delta(&self) -> Residue {
        self.a * self.a - self.b * 4
    }
}

/// `(u_n, v_n)` at one index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LucasPair {
    pub index: BigInt,
    pub u: Residue,
    pub v: Residue,
}

/// Direction of [`shift_by_prime_power`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shift {
    Up,
    Down,
}

/// `(u_n, u_{n+1})` for `n ≥ 0` by fast doubling.
fn u_pair(params: &LucasParams, n: &BigInt) -> (Residue, Residue) {
    let p = params.p();
    let (a, b) = (params.a, params.b);
    let mut uk = Residue::zero(p);
    let mut uk1 = Residue::one(p);
    let mag = n.magnitude();
    for bit in (0..mag.bits()).rev() {
        let u2k = uk * (uk1 * 2 - a * uk);
        let u2k1 = uk1 * uk1 - b * uk * uk;
        if mag.bit(bit) {
            uk1 = a * u2k1 - b * u2k;
            uk = u2k1;
        } else {
            uk = u2k;
            uk1 = u2k1;
        }
    }
    (uk, uk1)
}

/// `(u_n, v_n)` in `O(log |n|)` multiplications; negative indices through
/// `u_{−n} = −u_n / B^n` and `v_{−n} = v_n / B^n`.
pub fn lucas_uv(params: &LucasParams, n: &BigInt) -> LucasPair {
    let (u, u1) = u_pair(params, n);
    let mut v = u1 * 2 - params.a * u;
    let mut u = u;
    if n.is_negative() {
        let scale = params
            .b
            .pow_biguint(n.magnitude())
            .inv()
            .expect("B is invertible");
        u = -u * scale;
        v *= scale;
    }
    LucasPair {
        index: n.clone(),
        u,
        v,
    }
}

pub fn lucas_uv_i64(params: &LucasParams, n: i64) -> LucasPair {
    lucas_uv(params, &BigInt::from(n))
}

/// `u_{n ± p^a}` from `(u_n, v_n)` and `(Δ/p)^a`:
/// `u_{n+p^a} ≡ (A u_n + (Δ/p^a) v_n)/2` and
/// `B u_{n−p^a} ≡ (A u_n − (Δ/p^a) v_n)/2`.
pub fn shift_by_prime_power(
    params: &LucasParams,
    n: &BigInt,
    pp: &PrimePowerModulus,
    direction: Shift,
) -> Result<Residue> {
    let p = params.p();
    assert_eq!(pp.p(), p, "parameters and modulus disagree on p");
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    let delta = params.delta();
    if delta.is_zero() {
        return Err(Error::SingularDelta(p));
    }
    let j = Residue::from_i64(jacobi_prime_power(delta, pp) as i64, p);
    let pair = lucas_uv(params, n);
    let half = Residue::new(2, p).inv()?;
    let au = params.a * pair.u;
    Ok(match direction {
        Shift::Up => (au + j * pair.v) * half,
        Shift::Down => (au - j * pair.v) * half * params.b.inv()?,
    })
}

/// The integer Lucas number `L_n` (`L_0 = 2`, `L_1 = 1`), with
/// `L_{−n} = (−1)^n L_n`.
pub fn lucas_number(n: i64) -> BigInt {
    let (mut x, mut y) = (BigInt::from(2), BigInt::one());
    for _ in 0..n.unsigned_abs() {
        let z = &x + &y;
        x = std::mem::replace(&mut y, z);
    }
    if n < 0 && n.is_odd() {
        -x
    } else {
        x
    }
}

/// Exact binomial over the integers.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `5 Σ_{k ≡ r (5)} binom(2d, k) − 4^d`, checked against
/// `[5 | d−r] 2L_{2d} + ((d−r)/5) L_{2d − ((d−r)/5)}`.
pub fn quintisection(d: u32, r: i64) -> Result<BigInt> {
    let two_d = 2 * d as u64;
    let start = r.rem_euclid(5) as u64;
    let lhs: BigInt = (start..=two_d)
        .step_by(5)
        .map(|k| binomial(two_d, k))
        .sum::<BigInt>()
        * 5
        - (BigInt::one() << two_d);
    let diff = d as i64 - r;
    let chi = jacobi(diff as i128, 5).expect("5 is odd") as i64;
    let bracket = if diff.rem_euclid(5) == 0 {
        lucas_number(2 * d as i64) * 2
    } else {
        BigInt::zero()
    };
    let rhs = bracket + lucas_number(2 * d as i64 - chi) * chi;
    if lhs != rhs {
        return Err(Error::IdentityViolation { d, r });
    }
    Ok(lhs)
}
