//! Linear recurrences over GF(p) evaluated at arbitrary signed indices, and
//! the order-`h+1` recurrence that turns the truncated sum
//! `S_d = Σ_{k<p^a} binom((h+1)k, k+d) / m^k` into a handful of sequence
//! values.
//!
//! Indices are [`BigInt`]s: the sums for `p^a` with tens of thousands of bits
//! only ever touch `O(h)` sequence values, each found by exponentiating `x`
//! modulo the characteristic polynomial.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modarith::{add_mod, mul_mod, sub_mod, PrimePowerModulus, Ratio, Residue};
use crate::polyfield::PolyFp;

/// Indices with `|n|` at most this are evaluated by stepping a window.
pub const STEP_THRESHOLD: u64 = 4096;

/// Exact `binom(n, k)` for small arguments.
pub(crate) fn binom_exact(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// A recurrence `Σ_{j=0}^{n} c_j u_{t+j} = 0` with `c_n = 1` and `c_0 ≠ 0`,
/// together with the initial values `u_0, …, u_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRecurrence {
    p: u64,
    /// `c_0 … c_n`, monic.
    coeffs: Vec<u64>,
    initial: Vec<u64>,
    /// Reciprocal polynomial normalised to be monic; drives negative indices.
    reversed: Vec<u64>,
}

impl LinearRecurrence {
    /// `coeffs` lists `c_0 … c_n` and must be monic with `c_0` invertible.
    pub fn new(coeffs: &[Residue], initial: &[Residue]) -> Result<Self> {
        let p = coeffs[0].modulus();
        let order = coeffs.len() - 1;
        assert!(order >= 1, "order must be positive");
        assert_eq!(initial.len(), order, "one initial value per order");
        assert_eq!(coeffs[order].value(), 1, "characteristic polynomial must be monic");
        let c0_inv = coeffs[0].inv()?;
        let reversed = coeffs.iter().rev().map(|c| (*c * c0_inv).value()).collect();
        Ok(Self {
            p,
            coeffs: coeffs.iter().map(|c| c.value()).collect(),
            initial: initial.iter().map(|c| c.value()).collect(),
            reversed,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> Vec<Residue> {
        self.coeffs.iter().map(|&c| Residue::new(c, self.p)).collect()
    }

    pub fn initial_window(&self) -> SequenceWindow<'_> {
        SequenceWindow {
            rec: self,
            base: BigInt::zero(),
            values: self.initial.clone(),
        }
    }

    /// `u_n`, dispatching on the size of `|n|`.
    pub fn eval(&self, n: &BigInt) -> Residue {
        match n.magnitude().to_u64() {
            Some(m) if m <= STEP_THRESHOLD => self.eval_stepping(n),
            _ => self.eval_power(n),
        }
    }

    pub fn eval_i64(&self, n: i64) -> Residue {
        self.eval(&BigInt::from(n))
    }

    /// `u_n` by walking a window from the initial values; `O(|n| · order)`.
    pub fn eval_stepping(&self, n: &BigInt) -> Residue {
        let mut w = self.initial_window();
        let steps = n.magnitude().to_u64().expect("stepping distance fits in u64");
        if n.is_negative() {
            w.step_backward(steps);
        } else if steps >= self.order() as u64 {
            w.step_forward(steps + 1 - self.order() as u64);
        }
        w.get(n).expect("index inside the window")
    }

    /// `u_n` from `x^n mod χ(x)` (or `x^{n'}` modulo the reciprocal
    /// polynomial when `n < 0`); `O(order² log |n|)`.
    pub fn eval_power(&self, n: &BigInt) -> Residue {
        let order = self.order();
        let acc = if n.sign() == Sign::Minus {
            // w_k = u_{order-1-k} satisfies the reversed recurrence with
            // initial values reversed
            let k = BigInt::from(order as i64 - 1) - n;
            let e = x_pow_mod(&self.reversed, &k, self.p);
            e.iter()
                .enumerate()
                .fold(0, |acc, (i, &ei)| {
                    add_mod(acc, mul_mod(ei, self.initial[order - 1 - i], self.p), self.p)
                })
        } else {
            let e = x_pow_mod(&self.coeffs, n, self.p);
            e.iter()
                .zip(&self.initial)
                .fold(0, |acc, (&ei, &ui)| add_mod(acc, mul_mod(ei, ui, self.p), self.p))
        };
        Residue::new(acc, self.p)
    }
}

/// `x^n mod f` for monic `f` (lowest degree first), `n ≥ 0`, as a coefficient
/// vector of length `deg f`.
fn x_pow_mod(f: &[u64], n: &BigInt, p: u64) -> Vec<u64> {
    let d = f.len() - 1;
    let mut acc = vec![0u64; d];
    if d == 0 {
        return acc;
    }
    let mut scratch = vec![0u64; 2 * d];
    acc[0] = 1 % p;
    if d == 1 {
        // f = x + c0, so x ≡ -c0
        let root = Residue::new(sub_mod(0, f[0], p), p);
        acc[0] = root.pow_biguint(n.magnitude()).value();
        return acc;
    }
    let mag = n.magnitude();
    for bit in (0..mag.bits()).rev() {
        square_mod(&mut acc, &mut scratch, f, p);
        if mag.bit(bit) {
            shift_mod(&mut acc, f, p);
        }
    }
    acc
}

fn reduce_top(buf: &mut [u64], f: &[u64], p: u64) {
    let d = f.len() - 1;
    for i in (d..buf.len()).rev() {
        let t = buf[i];
        if t == 0 {
            continue;
        }
        buf[i] = 0;
        // x^i = x^{i-d} · x^d ≡ -x^{i-d} Σ_{j<d} f_j x^j
        for j in 0..d {
            buf[i - d + j] = sub_mod(buf[i - d + j], mul_mod(t, f[j], p), p);
        }
    }
}

fn square_mod(acc: &mut [u64], scratch: &mut [u64], f: &[u64], p: u64) {
    let d = acc.len();
    scratch.iter_mut().for_each(|c| *c = 0);
    for i in 0..d {
        if acc[i] == 0 {
            continue;
        }
        for j in 0..d {
            scratch[i + j] = add_mod(scratch[i + j], mul_mod(acc[i], acc[j], p), p);
        }
    }
    reduce_top(&mut scratch[..2 * d - 1], f, p);
    acc.copy_from_slice(&scratch[..d]);
}

fn shift_mod(acc: &mut [u64], f: &[u64], p: u64) {
    let d = acc.len();
    let top = acc[d - 1];
    for i in (1..d).rev() {
        acc[i] = acc[i - 1];
    }
    acc[0] = 0;
    if top != 0 {
        for j in 0..d {
            acc[j] = sub_mod(acc[j], mul_mod(top, f[j], p), p);
        }
    }
}

/// `order` consecutive values `u_base, …, u_{base+order-1}` of a recurrence.
#[derive(Clone, Debug)]
pub struct SequenceWindow<'a> {
    rec: &'a LinearRecurrence,
    base: BigInt,
    values: Vec<u64>,
}

impl SequenceWindow<'_> {
    pub fn base_index(&self) -> &BigInt {
        &self.base
    }

    pub fn values(&self) -> Vec<Residue> {
        self.values.iter().map(|&v| Residue::new(v, self.rec.p)).collect()
    }

    /// Value at index `n` if the window covers it.
    pub fn get(&self, n: &BigInt) -> Option<Residue> {
        let off = (n - &self.base).to_usize()?;
        self.values.get(off).map(|&v| Residue::new(v, self.rec.p))
    }

    pub fn step_forward(&mut self, steps: u64) {
        let (p, c) = (self.rec.p, &self.rec.coeffs);
        let n = self.values.len();
        for _ in 0..steps {
            let next = (0..n).fold(0, |acc, j| sub_mod(acc, mul_mod(c[j], self.values[j], p), p));
            self.values.rotate_left(1);
            self.values[n - 1] = next;
        }
        self.base += steps;
    }

    pub fn step_backward(&mut self, steps: u64) {
        let (p, r) = (self.rec.p, &self.rec.reversed);
        let n = self.values.len();
        for _ in 0..steps {
            // reversed coefficients: u_{t} = -Σ_{j=1}^{n} (c_j / c_0) u_{t+j}
            let prev = (0..n).fold(0, |acc, j| {
                sub_mod(acc, mul_mod(r[n - 1 - j], self.values[j], p), p)
            });
            self.values.rotate_right(1);
            self.values[0] = prev;
        }
        self.base -= steps;
    }
}

/// The order-`h+1` recurrence `Σ_j (binom(h+1, j) − m[j = h]) u_{n+j} = 0`
/// with `u_0 = … = u_{h-1} = 0`, `u_h = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceSpec {
    h: usize,
    m: Residue,
    rec: LinearRecurrence,
}

impl RecurrenceSpec {
    pub fn new(h: usize, m: Residue) -> Result<Self> {
        assert!(h >= 1, "h must be positive");
        let p = m.modulus();
        if m.is_zero() {
            return Err(Error::ZeroM(p));
        }
        let mut coeffs: Vec<Residue> = (0..=h + 1)
            .map(|j| Residue::new((binom_exact(h as u64 + 1, j as u64) % p as u128) as u64, p))
            .collect();
        coeffs[h] -= m;
        let mut initial = vec![Residue::zero(p); h + 1];
        initial[h] = Residue::one(p);
        let rec = LinearRecurrence::new(&coeffs, &initial)?;
        Ok(Self { h, m, rec })
    }

    pub fn from_ratio(h: usize, m: Ratio, p: u64) -> Result<Self> {
        Self::new(h, m.to_residue(p)?)
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn m(&self) -> Residue {
        self.m
    }

    pub fn p(&self) -> u64 {
        self.m.modulus()
    }

    /// `c_0 … c_{h+1}`.
    pub fn coeffs(&self) -> Vec<Residue> {
        self.rec.coeffs()
    }

    pub fn recurrence(&self) -> &LinearRecurrence {
        &self.rec
    }

    pub fn characteristic_poly(&self) -> PolyFp {
        PolyFp::from_residues(&self.coeffs())
    }

    pub fn eval_u(&self, n: &BigInt) -> Residue {
        self.rec.eval(n)
    }

    pub fn eval_u_i64(&self, n: i64) -> Residue {
        self.rec.eval_i64(n)
    }

    fn check_d(&self, d: i64, pp: &PrimePowerModulus) -> Result<()> {
        assert_eq!(pp.p(), self.p(), "recurrence and modulus disagree on p");
        let hi = pp.value_signed() * self.h;
        if d <= -(self.h as i64) || BigInt::from(d) > hi {
            return Err(Error::DRange {
                d,
                lo: -(self.h as i64),
                hi: hi.to_string(),
            });
        }
        Ok(())
    }

    /// `Σ_{k<p^a} binom((h+1)k, k+d) m^{-k} mod p` from `h` sequence values:
    /// `-Σ_{r=1}^{h} binom(h+1, r+1) u_{h-1+min(d-rp^a, 0)}`.
    pub fn sum_fast(&self, d: i64, pp: &PrimePowerModulus) -> Result<Residue> {
        self.check_d(d, pp)?;
        let p = self.p();
        let pa = pp.value_signed();
        let h = self.h as i64;
        let mut acc = Residue::zero(p);
        for r in 1..=h {
            let shift = BigInt::from(d) - &pa * r;
            let idx = BigInt::from(h - 1) + if shift.is_negative() { shift } else { BigInt::zero() };
            let u = self.eval_u(&idx);
            if u.is_zero() {
                continue;
            }
            acc -= u * Residue::new((binom_exact(h as u64 + 1, r as u64 + 1) % p as u128) as u64, p);
        }
        Ok(acc)
    }

    /// `S_e` for any `e > -h`: `sum_fast` inside the admissible range and 0
    /// beyond `h p^a`, where every binomial vanishes.
    pub fn sum_extended(&self, e: i64, pp: &PrimePowerModulus) -> Result<Residue> {
        if BigInt::from(e) > pp.value_signed() * self.h {
            Ok(Residue::zero(self.p()))
        } else {
            self.sum_fast(e, pp)
        }
    }

    /// The same sum through the root-based formula
    /// `(h+1-m) u_{d+h-1} + u_{p^a+d+h-1} + Σ_{0<r≤⌊(d-1)/p^a⌋} binom(h+1, r+1) u_{d+h-1-rp^a}`,
    /// valid when the characteristic polynomial is squarefree mod p.
    pub fn sum_via_roots(&self, d: i64, pp: &PrimePowerModulus) -> Result<Residue> {
        self.check_d(d, pp)?;
        let p = self.p();
        if self.characteristic_poly().discriminant()?.is_zero() {
            return Err(Error::SingularDiscriminant(p));
        }
        let h = self.h as i64;
        let pa = pp.value_signed();
        let base = BigInt::from(d + h - 1);
        let mut acc = (Residue::from_i64(h + 1, p) - self.m) * self.eval_u(&base)
            + self.eval_u(&(&pa + &base));
        let r_max = (BigInt::from(d) - 1i32).div_floor(&pa);
        let mut r = BigInt::one();
        while r <= r_max {
            let rr = r.to_u64().expect("r ≤ h");
            let c = Residue::new((binom_exact(h as u64 + 1, rr + 1) % p as u128) as u64, p);
            acc += c * self.eval_u(&(&base - &r * &pa));
            r += 1;
        }
        Ok(acc)
    }

    /// Left side `Σ_j c_j S_{d+j}` of the shifted-sum relation.
    pub fn relation_lhs(&self, d: i64, pp: &PrimePowerModulus) -> Result<Residue> {
        self.check_d(d, pp)?;
        let mut acc = Residue::zero(self.p());
        for (j, c) in self.coeffs().into_iter().enumerate() {
            acc += c * self.sum_extended(d + j as i64, pp)?;
        }
        Ok(acc)
    }

    /// Right side `[p^a | d+h] binom(h+1, (d+h)/p^a + 1)`.
    pub fn relation_rhs(&self, d: i64, pp: &PrimePowerModulus) -> Residue {
        let p = self.p();
        let (q, r) = BigInt::from(d + self.h as i64).div_rem(&pp.value_signed());
        if !r.is_zero() {
            return Residue::zero(p);
        }
        match q.to_u64() {
            Some(q) => Residue::new(
                (binom_exact(self.h as u64 + 1, q + 1) % p as u128) as u64,
                p,
            ),
            None => Residue::zero(p),
        }
    }

    /// Whether `Σ_j c_j S_{d+j} ≡ [p^a | d+h] binom(h+1, (d+h)/p^a + 1)`.
    pub fn relation_check(&self, d: i64, pp: &PrimePowerModulus) -> Result<bool> {
        Ok(self.relation_lhs(d, pp)? == self.relation_rhs(d, pp))
    }
}

/// Free-function form of [`RecurrenceSpec::eval_u`].
pub fn eval_u(spec: &RecurrenceSpec, n: &BigInt) -> Residue {
    spec.eval_u(n)
}

pub fn sum_fast(spec: &RecurrenceSpec, d: i64, pp: &PrimePowerModulus) -> Result<Residue> {
    spec.sum_fast(d, pp)
}

pub fn sum_via_roots(spec: &RecurrenceSpec, d: i64, pp: &PrimePowerModulus) -> Result<Residue> {
    spec.sum_via_roots(d, pp)
}

pub fn relation_check(spec: &RecurrenceSpec, d: i64, pp: &PrimePowerModulus) -> Result<bool> {
    spec.relation_check(d, pp)
}

/// Sylvester's formula `u_n = Σ_i α_i^n / ∏_{j≠i} (α_i − α_j)` for a
/// recurrence whose characteristic polynomial has the given distinct,
/// nonzero roots.
pub fn sylvester_eval(roots: &[Residue], n: &BigInt) -> Result<Residue> {
    let p = roots[0].modulus();
    for (i, a) in roots.iter().enumerate() {
        if a.is_zero() {
            return Err(Error::ZeroRoot);
        }
        if roots[..i].contains(a) {
            return Err(Error::RepeatedRoot(a.value()));
        }
    }
    let mut acc = Residue::zero(p);
    for (i, &a) in roots.iter().enumerate() {
        let denom = roots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(Residue::one(p), |acc, (_, &b)| acc * (a - b));
        acc += a.pow_bigint(n)? * denom.inv()?;
    }
    Ok(acc)
}

/// Sum restricted to `0 < k < p^a`, `k ≡ r (mod p-1)`, of
/// `binom((h+1)k, k+d) m^{-k}`, computed from `p-1` unrestricted fast sums
/// through `[p-1 | k-r] ≡ -Σ_{x=1}^{p-1} x^{r-k} (mod p)`.
pub fn residue_class_sum_fast(
    h: usize,
    m: Residue,
    d: i64,
    r: i64,
    pp: &PrimePowerModulus,
) -> Result<Residue> {
    let p = pp.p();
    let mut acc = Residue::zero(p);
    for x in 1..p {
        let x = Residue::new(x, p);
        let spec = RecurrenceSpec::new(h, m * x)?;
        // drop k = 0: its term is binom(0, d)
        let mut s = spec.sum_fast(d, pp)?;
        if d == 0 {
            s -= Residue::one(p);
        }
        acc += x.pow_i64(r.rem_euclid(p as i64 - 1))? * s;
    }
    Ok(-acc)
}
