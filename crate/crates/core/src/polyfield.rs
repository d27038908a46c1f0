//! Polynomials over the field with `p` elements: discriminants through
//! resultants, squarefree and distinct-degree decomposition, and the
//! Stickelberger parity test.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::modarith::{add_mod, mul_mod, sub_mod, Residue};

/// Polynomial over GF(p), coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyFp {
    coeffs: Vec<u64>,
    p: u64,
}

impl fmt::Debug for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyFp{:?} mod {}", self.coeffs, self.p)
    }
}

impl PolyFp {
    pub fn new(coeffs: Vec<u64>, p: u64) -> Self {
        let mut poly = Self {
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
            p,
        };
        poly.trim();
        poly
    }

    pub fn from_residues(coeffs: &[Residue]) -> Self {
        let p = coeffs.first().map(|c| c.modulus()).expect("nonempty coefficient list");
        Self::new(coeffs.iter().map(|c| c.value()).collect(), p)
    }

    pub fn from_i64(coeffs: &[i64], p: u64) -> Self {
        Self::new(
            coeffs.iter().map(|&c| Residue::from_i64(c, p).value()).collect(),
            p,
        )
    }

    pub fn from_bigint(coeffs: &[BigInt], p: u64) -> Self {
        Self::new(
            coeffs.iter().map(|c| Residue::from_bigint(c, p).value()).collect(),
            p,
        )
    }

    pub fn zero(p: u64) -> Self {
        Self { coeffs: Vec::new(), p }
    }

    pub fn one(p: u64) -> Self {
        Self::new(vec![1], p)
    }

    /// The monomial `x`.
    pub fn x(p: u64) -> Self {
        Self::new(vec![0, 1], p)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, self.p), c, self.p))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| {
                add_mod(
                    *self.coeffs.get(i).unwrap_or(&0),
                    *rhs.coeffs.get(i).unwrap_or(&0),
                    self.p,
                )
            })
            .collect();
        Self::new(c, self.p)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| {
                sub_mod(
                    *self.coeffs.get(i).unwrap_or(&0),
                    *rhs.coeffs.get(i).unwrap_or(&0),
                    self.p,
                )
            })
            .collect();
        Self::new(c, self.p)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.p);
        }
        let mut c = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = add_mod(c[i + j], mul_mod(a, b, self.p), self.p);
            }
        }
        Self::new(c, self.p)
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::new(
            self.coeffs.iter().map(|&c| mul_mod(c, k, self.p)).collect(),
            self.p,
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = Residue::new(self.leading(), self.p).inv().expect("nonzero");
        self.scale(inv.value())
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
            .collect();
        Self::new(c, self.p)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let p = self.p;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let lead_inv = Residue::new(divisor.leading(), p).inv().unwrap().value();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = mul_mod(rem[i + dd], lead_inv, p);
            quot[i] = q;
            if q == 0 {
                continue;
            }
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = sub_mod(rem[i + j], mul_mod(q, dc, p), p);
            }
        }
        rem.truncate(dd);
        (Self::new(quot, p), Self::new(rem, p))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus` by repeated squaring.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = Self::one(self.p).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// Resultant `Res(self, rhs)` by the Euclidean algorithm over the field.
    pub fn resultant(&self, rhs: &Self) -> Residue {
        let p = self.p;
        let (mut a, mut b) = (self.clone(), rhs.clone());
        if a.is_zero() || b.is_zero() {
            return Residue::zero(p);
        }
        let mut acc = Residue::one(p);
        loop {
            let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
            if db == 0 {
                // Res(a, c) = c^deg(a) for a constant c
                return acc * Residue::new(b.leading(), p).pow(da as u64);
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return Residue::zero(p);
            }
            // Res(a, b) = (-1)^{da db} lc(b)^{da - dr} Res(b, r)
            let dr = r.degree().unwrap();
            let mut factor = Residue::new(b.leading(), p).pow((da - dr) as u64);
            if (da * db) % 2 == 1 {
                factor = -factor;
            }
            acc *= factor;
            a = b;
            b = r;
        }
    }

    /// Discriminant `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`, reduced mod p.
    pub fn discriminant(&self) -> Result<Residue> {
        let n = self.degree().ok_or(Error::ZeroPolynomial)?;
        if n < 2 {
            return Err(Error::DegreeTooSmall(n));
        }
        let p = self.p;
        let res = self.resultant(&self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
        let lead = Residue::new(self.leading(), p);
        Ok(res * sign * lead.inv()?)
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// `g` with `g(x)^p = self(x)`; only meaningful when every exponent is a
    /// multiple of `p`.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        Self::new(self.coeffs.iter().step_by(p).copied().collect(), self.p)
    }

    /// Squarefree decomposition: pairs `(g_i, i)` with `self = lc · ∏ g_i^i`,
    /// each `g_i` monic, squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(PolyFp, usize)> {
        let mut out = Vec::new();
        self.squarefree_into(1, &mut out);
        out.sort_by_key(|(_, e)| *e);
        out
    }

    fn squarefree_into(&self, mult: usize, out: &mut Vec<(PolyFp, usize)>) {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return;
        }
        let df = f.derivative();
        if df.is_zero() {
            f.pth_root().squarefree_into(mult * self.p as usize, out);
            return;
        }
        let mut c = f.gcd(&df);
        let mut w = f.div_rem(&c).0;
        let mut i = 1;
        while w.degree().unwrap_or(0) > 0 {
            let y = w.gcd(&c);
            let factor = w.div_rem(&y).0;
            if factor.degree().unwrap_or(0) > 0 {
                out.push((factor, i * mult));
            }
            w = y;
            c = c.div_rem(&w).0;
            i += 1;
        }
        // what remains in c is a p-th power
        if c.degree().unwrap_or(0) > 0 {
            c.pth_root().squarefree_into(mult * self.p as usize, out);
        }
    }

    /// Distinct-degree decomposition of a squarefree polynomial: `counts[d]`
    /// is the number of monic irreducible factors of degree `d`.
    pub fn distinct_degree_counts(&self) -> Vec<usize> {
        let mut f = self.monic();
        let n = f.degree().unwrap_or(0);
        let mut counts = vec![0usize; n + 1];
        let x = Self::x(self.p);
        // Frobenius iterate h = x^{p^d} mod f, never materialising x^{p^d}
        let mut h = x.rem(&f);
        let mut d = 1;
        while let Some(deg) = f.degree() {
            if deg < 2 * d {
                if deg > 0 {
                    counts[deg] += 1;
                }
                break;
            }
            h = h.pow_mod(self.p, &f);
            let g = h.sub(&x).gcd(&f);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 {
                counts[d] += gd / d;
                f = f.div_rem(&g).0;
                h = h.rem(&f);
            }
            d += 1;
        }
        counts
    }

    /// Number of monic irreducible factors counted with multiplicity.
    pub fn count_irreducible_factors(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self
            .squarefree_decomposition()
            .iter()
            .map(|(g, e)| e * g.distinct_degree_counts().iter().sum::<usize>())
            .sum())
    }
}

/// Stickelberger parity `(D(f)/p) = (-1)^{deg f - r}` for a squarefree `f`.
pub fn stickelberger_check(f: &PolyFp) -> Result<bool> {
    if f.p() == 2 {
        return Err(Error::EvenPrime);
    }
    let disc = f.discriminant()?;
    if disc.is_zero() {
        return Err(Error::SingularDiscriminant(f.p()));
    }
    let n = f.degree().unwrap();
    let r = f.count_irreducible_factors()?;
    let parity = if (n - r).is_multiple_of(2) { 1 } else { -1 };
    Ok(disc.legendre() == parity)
}

/// Number of monic irreducible factors of `f` mod p.
pub fn count_irreducible_factors(f: &PolyFp) -> Result<usize> {
    f.count_irreducible_factors()
}

/// `D(x^3 + a1 x^2 + a2 x + a3)` by the closed formula.
pub fn cubic_discriminant(a1: &BigInt, a2: &BigInt, a3: &BigInt) -> BigInt {
    let sq = |x: &BigInt| x * x;
    let cube = |x: &BigInt| x * x * x;
    sq(a1) * sq(a2) - 4 * cube(a2) - 4 * cube(a1) * a3 - 27 * sq(a3) + 18 * a1 * a2 * a3
}

/// Exact determinant by Bareiss fraction-free elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant of integer polynomials (lowest degree first) via the Sylvester
/// matrix.
pub fn resultant_integer(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in f.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in g.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    bareiss_det(rows)
}

/// Exact discriminant of an integer polynomial given lowest degree first.
pub fn discriminant_integer(f: &[BigInt]) -> Result<BigInt> {
    let mut f = f.to_vec();
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    let n = f.len().checked_sub(1).ok_or(Error::ZeroPolynomial)?;
    if n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let res = resultant_integer(&f, &df);
    let lead = f[n].clone();
    let d = res / lead;
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
}

/// Integer coefficients of `(1 + x)^{h+1} - m x^h`, lowest degree first.
pub fn shifted_power_poly(h: usize, m: &BigInt) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = (0..=h + 1)
        .map(|j| BigInt::from(crate::linrec::binom_exact(h as u64 + 1, j as u64)))
        .collect();
    c[h] -= m;
    c
}
