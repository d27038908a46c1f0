//! Closed-form predictions for the congruences of the theory.
//!
//! [`predict`] turns a theorem id, a modulus `p^a` and a parameter map into
//! a list of [`Prediction`]s. Each prediction names the quantity it is
//! about (a [`Target`]) and, when the side conditions hold, the residue the
//! closed form assigns to it. The target can be evaluated independently
//! through [`Target::fast`] and [`Target::oracle`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::ToPrimitive;

use crate::cubicres::{classify_residue, CubicClass};
use crate::descriptor::SumDescriptor;
use crate::error::{Error, Result};
use crate::linrec::{LinearRecurrence, RecurrenceSpec};
use crate::lucas::{lucas_uv, lucas_uv_i64, LucasParams};
use crate::modarith::{
    jacobi, jacobi_prime_power, rational_residue, sqrt_mod, PrimePowerModulus, Ratio, Residue,
};
use crate::oracle::direct_sum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoremId {
    T1_1,
    C1_1,
    T1_2,
    T1_3,
    T1_4,
    T1_5,
    T1_6,
    T1_7,
    T1_8,
    T1_9,
    T1_10,
    T3_1,
    T3_2,
    C3_1,
    L5_1,
    L5_2,
}

impl TheoremId {
    pub const ALL: [TheoremId; 16] = [
        TheoremId::T1_1,
        TheoremId::C1_1,
        TheoremId::T1_2,
        TheoremId::T1_3,
        TheoremId::T1_4,
        TheoremId::T1_5,
        TheoremId::T1_6,
        TheoremId::T1_7,
        TheoremId::T1_8,
        TheoremId::T1_9,
        TheoremId::T1_10,
        TheoremId::T3_1,
        TheoremId::T3_2,
        TheoremId::C3_1,
        TheoremId::L5_1,
        TheoremId::L5_2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T1_1 => "T1.1",
            TheoremId::C1_1 => "C1.1",
            TheoremId::T1_2 => "T1.2",
            TheoremId::T1_3 => "T1.3",
            TheoremId::T1_4 => "T1.4",
            TheoremId::T1_5 => "T1.5",
            TheoremId::T1_6 => "T1.6",
            TheoremId::T1_7 => "T1.7",
            TheoremId::T1_8 => "T1.8",
            TheoremId::T1_9 => "T1.9",
            TheoremId::T1_10 => "T1.10",
            TheoremId::T3_1 => "T3.1",
            TheoremId::T3_2 => "T3.2",
            TheoremId::C3_1 => "C3.1",
            TheoremId::L5_1 => "L5.1",
            TheoremId::L5_2 => "L5.2",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        TheoremId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

/// Free symbols of a theorem, keyed by name (`c`, `m`, `t`, `d`, `r`, `s`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params(BTreeMap<String, Ratio>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Ratio>) -> Self {
        self.insert(key, value);
        self
    }

    pub fn insert(&mut self, key: &str, value: impl Into<Ratio>) {
        self.0.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<Ratio> {
        self.0.get(key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Ratio)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn require(&self, key: &'static str) -> Result<Ratio> {
        self.get(key).ok_or(Error::MissingParam(key))
    }

    fn int(&self, key: &'static str) -> Result<Option<i64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) if v.is_integer() => i64::try_from(v.num())
                .map(Some)
                .map_err(|_| Error::InvalidParam(format!("{key} = {v} is too large"))),
            Some(v) => Err(Error::InvalidParam(format!("{key} = {v} must be an integer"))),
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// The quantity a prediction is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Sum(SumDescriptor),
    /// `S_d − S_{d−1} + 6S_{d−2} + 4S_{d−3} + S_{d−4}` with
    /// `S_e = Σ_{k<p^a} binom(4k, k+e)/5^k`.
    QuarticRelation { d: i64 },
    /// `scale · (v^{(s)}_{p^a+d} − v^{(s)}_d)`.
    Section5 { s: u8, d: i64, scale: i64 },
}

impl Target {
    /// Evaluation through the recurrence engine.
    pub fn fast(&self, pp: &PrimePowerModulus) -> Result<Residue> {
        match *self {
            Target::Sum(desc) => desc.fast(pp),
            Target::QuarticRelation { d } => {
                let spec = RecurrenceSpec::new(3, Residue::new(5, pp.p()))?;
                quartic_combination(d, pp.p(), |e| spec.sum_extended(e, pp))
            }
            Target::Section5 { s, d, scale } => {
                let rec = section5_recurrence(pp.p());
                let n = pp.value_signed() + d;
                let diff = v_from(&rec, s, &n, |r, i| r.eval(i))?
                    - v_from(&rec, s, &BigInt::from(d), |r, i| r.eval(i))?;
                Ok(diff * scale)
            }
        }
    }

    /// Evaluation by enumeration (sums) or by stepping the recurrence from
    /// its initial values (sequence targets). Refuses more than `budget`
    /// terms or steps.
    pub fn oracle(&self, pp: &PrimePowerModulus, budget: u64) -> Result<Residue> {
        match *self {
            Target::Sum(desc) => direct_sum(&desc, pp, budget),
            Target::QuarticRelation { d } => quartic_combination(d, pp.p(), |e| {
                direct_sum(&SumDescriptor::plain(3, 5, e), pp, budget)
            }),
            Target::Section5 { s, d, scale } => {
                let steps = pp.value_signed() + d.unsigned_abs() + 4u32;
                if steps > BigInt::from(budget) {
                    return Err(Error::BudgetExceeded {
                        terms: steps.to_string(),
                        budget,
                    });
                }
                let rec = section5_recurrence(pp.p());
                let n = pp.value_signed() + d;
                let diff = v_from(&rec, s, &n, |r, i| r.eval_stepping(i))?
                    - v_from(&rec, s, &BigInt::from(d), |r, i| r.eval_stepping(i))?;
                Ok(diff * scale)
            }
        }
    }
}

fn quartic_combination(
    d: i64,
    p: u64,
    mut s: impl FnMut(i64) -> Result<Residue>,
) -> Result<Residue> {
    let mut acc = Residue::zero(p);
    for (j, c) in [1i64, -1, 6, 4, 1].into_iter().enumerate() {
        acc += s(d - j as i64)? * c;
    }
    Ok(acc)
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Sum(desc) => write!(f, "{desc}"),
            Target::QuarticRelation { d } => write!(
                f,
                "S({d})-S({})+6S({})+4S({})+S({}) for S(e)=sum binom(4k,k+e)/5^k",
                d - 1,
                d - 2,
                d - 3,
                d - 4
            ),
            Target::Section5 { s, d, scale } => {
                if *scale != 1 {
                    write!(f, "{scale}*")?;
                }
                write!(f, "(v{s}(p^a{d:+})-v{s}({d}))")
            }
        }
    }
}

/// One closed-form claim about one target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub target: Target,
    /// Present exactly when the side conditions hold.
    pub value: Option<Residue>,
    /// Values under alternative readings of an ambiguous statement.
    pub alternatives: Vec<(String, Residue)>,
    /// The violated side condition, when not applicable.
    pub reason: Option<String>,
}

impl Prediction {
    fn holds(target: Target, value: Residue) -> Self {
        Self {
            target,
            value: Some(value),
            alternatives: Vec::new(),
            reason: None,
        }
    }

    fn not_applicable(target: Target, reason: &str) -> Self {
        Self {
            target,
            value: None,
            alternatives: Vec::new(),
            reason: Some(reason.to_string()),
        }
    }

    pub fn applicable(&self) -> bool {
        self.value.is_some()
    }
}

/// Collects predictions under a shared applicability gate.
struct Rows {
    out: Vec<Prediction>,
    gate: Option<String>,
}

impl Rows {
    fn new(gate: Option<String>) -> Self {
        Self {
            out: Vec::new(),
            gate,
        }
    }

    fn emit(&mut self, target: Target, value: impl FnOnce() -> Result<Residue>) -> Result<()> {
        self.emit_if(target, None, value)
    }

    /// Like `emit` with an extra row-level condition.
    fn emit_if(
        &mut self,
        target: Target,
        extra: Option<&str>,
        value: impl FnOnce() -> Result<Residue>,
    ) -> Result<()> {
        let row = match (&self.gate, extra) {
            (Some(reason), _) => Prediction::not_applicable(target, reason),
            (None, Some(reason)) => Prediction::not_applicable(target, reason),
            (None, None) => Prediction::holds(target, value()?),
        };
        self.out.push(row);
        Ok(())
    }
}

fn first_failure(conditions: &[(bool, &str)]) -> Option<String> {
    conditions
        .iter()
        .find(|(ok, _)| !ok)
        .map(|(_, reason)| reason.to_string())
}

fn q(num: i128, den: i128, p: u64) -> Result<Residue> {
    rational_residue(num, den, p)
}

fn int(x: i64, p: u64) -> Residue {
    Residue::from_i64(x, p)
}

fn bracket(b: bool, p: u64) -> Residue {
    int(b as i64, p)
}

/// Index of the class containing `p^a mod modulus`.
fn class_of(pp: &PrimePowerModulus, modulus: u64, classes: &[&[u64]]) -> Option<usize> {
    let r = pp.rem(modulus);
    classes.iter().position(|c| c.contains(&r))
}

/// `(p^a / q)` for an odd prime `q`.
fn pa_over(pp: &PrimePowerModulus, q: u64) -> Result<i64> {
    Ok(jacobi(pp.rem(q) as i128, q)? as i64)
}

fn sum(desc: SumDescriptor) -> Target {
    Target::Sum(desc)
}

/// `p^a` as a binomial offset, when it fits.
fn pa_offset(pp: &PrimePowerModulus) -> Option<i64> {
    pp.to_i64().filter(|&v| v < i64::MAX / 8)
}

/// Every prediction of a theorem at `p^a`. Offsets tied to `p^a` itself are
/// only produced while `p^a` fits comfortably in an `i64`.
pub fn predict(id: TheoremId, pp: &PrimePowerModulus, params: &Params) -> Result<Vec<Prediction>> {
    match id {
        TheoremId::T1_1 => t1_1(pp, params),
        TheoremId::C1_1 => c1_1(pp),
        TheoremId::T1_2 => t1_2(pp),
        TheoremId::T1_3 => t1_3(pp, params),
        TheoremId::T1_4 => t1_4(pp, params),
        TheoremId::T1_5 => t1_5(pp),
        TheoremId::T1_6 => t1_6(pp),
        TheoremId::T1_7 => t1_7(pp),
        TheoremId::T1_8 => t1_8(pp, params),
        TheoremId::T1_9 => t1_9(pp),
        TheoremId::T1_10 => t1_10(pp),
        TheoremId::T3_1 => t3_1(pp, params),
        TheoremId::T3_2 => t3_2(pp, params),
        TheoremId::C3_1 => c3_1(pp, params),
        TheoremId::L5_1 => l5_1(pp, params),
        TheoremId::L5_2 => l5_2(pp),
    }
}

fn residue_of(x: Ratio, p: u64) -> Option<Residue> {
    x.to_residue(p).ok()
}

fn c_weight(c: Ratio) -> Ratio {
    let c1 = c.add(Ratio::int(1));
    c.pow(2).mul(c1.pow(3).recip())
}

fn t1_1(pp: &PrimePowerModulus, params: &Params) -> Result<Vec<Prediction>> {
    let p = pp.p();
    let c = params.require("c")?;
    let cr = residue_of(c, p);
    let bad = |v: i64| cr.is_none_or(|x| x == int(v, p));
    let mut rows = Rows::new(first_failure(&[
        (p != 2, "p odd"),
        (cr.is_some(), "c is p-integral"),
        (!bad(0) && !bad(-1) && !bad(2), "c != 0, -1, 2 mod p"),
    ]));
    let base = if rows.gate.is_none() {
        c_weight(c)
    } else {
        Ratio::int(1)
    };
    let consts = || -> Result<(Residue, Residue, Residue)> {
        let c = cr.expect("gated");
        let cp = int(3, p).checked_div((c + 1i64) * (c - 2i64) * 2i64)?;
        let j = jacobi_prime_power(c * 4i64 + 1i64, pp) as i64;
        Ok((c, cp, int(1 - j, p)))
    };
    let d0 = SumDescriptor::plain(2, 1, 0).from_one().with_base(base);
    rows.emit(sum(d0), || {
        let (_, cp, f) = consts()?;
        Ok(cp * f)
    })?;
    let dm = SumDescriptor::plain(2, 1, -1).from_one().with_base(base).with_scale(c);
    rows.emit(sum(dm), || {
        let (_, cp, f) = consts()?;
        Ok((cp + 1i64) * f)
    })?;
    let dp = SumDescriptor::plain(2, 1, 1)
        .from_one()
        .with_base(base)
        .with_scale(c.pow(2));
    rows.emit(sum(dp), || {
        let (c, cp, f) = consts()?;
        Ok((cp * (c * 3i64 + 2i64) + 1i64) * f)
    })?;
    if let Some(pa) = pa_offset(pp) {
        let dq = SumDescriptor::plain(2, 1, pa).with_base(base);
        rows.emit(sum(dq), || {
            let (c, cp, f) = consts()?;
            Ok(-(c * cp * f))
        })?;
    }
    Ok(rows.out)
}

fn c1_1(pp: &PrimePowerModulus) -> Result<Vec<Prediction>> {
    let p = pp.p();
    let mut rows = Rows::new(first_failure(&[(p != 2, "p odd")]));
    let eighth = Ratio::int(8);
    let quarter = Ratio::new(-1, 4);
    rows.emit(sum(SumDescriptor::plain(2, eighth, 0).from_one()), || {
        Ok(q(3, 4, p)? * (pa_over(pp, 5)? - 1))
    })?;
    rows.emit(sum(SumDescriptor::catalan(2, eighth).from_one()), || {
        Ok(q(5, 4, p)? * (pa_over(pp, 5)? - 1))
    })?;
    rows.emit(sum(SumDescriptor::plain(2, quarter, 0).from_one()), || {
        Ok(q(3, 8, p)? * (1 - pa_over(pp, 7)?))
    })?;
    rows.emit(sum(SumDescriptor::catalan(2, quarter).from_one()), || {
        Ok(q(7, 4, p)? * (1 - pa_over(pp, 7)?))
    })?;
    Ok(rows.out)
}

fn t1_2(pp: &PrimePowerModulus) -> Result<Vec<Prediction>> {
    let p = pp.p();
    let mut rows = Rows::new(first_failure(&[
        (p > 3, "p > 3"),
        (pp.rem(6) == 1, "p^a = 1 mod 6"),
    ]));
    let two = || -> Result<Residue> {
        let e = (pp.value_signed() - 1u32) / 3u32;
        Ok(Residue::new(2, p).pow_bigint(&e)? - 1i64)
    };
    let zero = || Ok(Residue::zero(p));
    let half = Ratio::new(1, 2);
    rows.emit(sum(SumDescriptor::catalan_bar(2, 6).from_one().with_scale(half)), zero)?;
    rows.emit(sum(SumDescriptor::plain(2, 6, -1).from_one()), zero)?;
    rows.emit(sum(SumDescriptor::plain(2, 6, 0).from_one()), two)?;
    rows.emit(sum(SumDescriptor::plain(2, 6, 1).from_one()), || Ok(two()? * 2i64))?;
    Ok(rows.out)
}

fn t1_3(pp: &PrimePowerModulus, params: &Params) -> Result<Vec<Prediction>> {
    let p = pp.p();
    let t = params.require("t")?;
    let m = params
        .get("m")
        .unwrap_or_else(|| t.pow(2).add(t).add(Ratio::int(7)));
    let tr = residue_of(t, p);
    let mr = residue_of(m, p);
    let (tr0, mr0) = (tr.unwrap_or(Residue::zero(p)), mr.unwrap_or(Residue::zero(p)));
    let w = tr0 * 2i64 + 1i64;
    let mut gate = first_failure(&[
        (p > 3, "p > 3"),
        (tr.is_some() && mr.is_some(), "m and t are p-integral"),
        (!w.is_zero(), "t != -1/2 mod p"),
        (mr0 == tr0 * tr0 + tr0 + 7i64, "m = t^2 + t + 7 mod p"),
        (!mr0.is_zero() && mr0 != int(6, p), "m != 0, 6 mod p"),
    ]);
    let mut class = CubicClass::Undefined;
    if gate.is_none() {
        let c = (mr0 * mr0 * 2i64 - mr0 * 18i64 + 27i64).checked_div(w * 3i64)?;
        class = classify_residue(c, pp)?;
        if class == CubicClass::Undefined {
            gate = Some("c in C0 u C1 u C2".to_string());
        }
    }
    let m = if mr.is_some_and(|x| !x.is_zero()) { m } else { Ratio::int(1) };
    let mut rows = Rows::new(gate);
    let plain = |d| sum(SumDescriptor::plain(2, m, d).from_one());
    let cbar = sum(SumDescriptor::catalan_bar(2, m).from_one());
    let zero = || Ok(Residue::zero(p));
    match class {
        CubicClass::C0 | CubicClass::Undefined => {
            for d in [0, -1, 1] {
                rows.emit(plain(d), zero)?;
            }
            rows.emit(sum(SumDescriptor::catalan(2, m).from_one()), zero)?;
            rows.emit(cbar, zero)?;
        }
        CubicClass::C1 | CubicClass::C2 => {
            let sign = if class == CubicClass::C1 { 1 } else { -1 };
            let three_w = || int(3 * sign, p).checked_div(w);
            rows.emit(plain(0), || (three_w()? - 3i64).checked_div(int(2, p)))?;
            rows.emit(plain(-1), || (mr0 - 6i64).checked_div(w).map(|x| x * sign))?;
            rows.emit(plain(1), || Ok(three_w()? + 3i64 - mr0))?;
            rows.emit(cbar, || Ok(mr0 - 6i64))?;
        }
    }
    Ok(rows.out)
}

fn offsets(params: &Params, key: &'static str, default: &[i64]) -> Result<Vec<i64>> {
    Ok(match params.int(key)? {
        Some(v) => vec![v],
        None => default.to_vec(),
    })
}

fn t1_4(pp: &PrimePowerModulus, params: &Params) -> Result<Vec<Prediction>> {
    let p = pp.p();
    let ds = offsets(params, "d", &[-1, 0, 1])?;
    let rs = offsets(params, "r", &[0, 1, 2, 3])?;
    let mut rows = Rows::new(first_failure(&[(p > 3, "p > 3"), (pp.a().is_multiple_of(6), "6 | a")]));
    let period = p as i64 - 1;
    for &d in &ds {
        let d_ok = (-1..=1).contains(&d);
        let extra = (!d_ok).then_some("d in {0, 1, -1}");
        for &r in &rs {
            let r = r.rem_euclid(period.max(1));
            let target = sum(SumDescriptor::plain(2, 1, d).from_one().restricted(r));
            rows.emit_if(target, extra, || {
                Ok(int(2, p).pow_i64(d + 3 - 2 * r)? * int(3, p).pow_i64(3 * r - 2)?)
            })?;
        }
        let total = sum(SumDescriptor::plain(2, 1, d).from_one());
        rows.emit_if(total, extra, || Ok(int(-3 * (p == 23) as i64 * (1 << (d + 1)), p)))?;
    }
    Ok(rows.out)
}

/// Rows keyed on the class of `p^a` modulo some `q`.
fn keyed(
    rows: &mut Rows,
    pp: &PrimePowerModulus,
    class: Option<usize>,
    target: Target,
    table: &[(i128, i128)],
) -> Result<()> {
    let p = pp.p();
    rows.emit(target, || {
        let (n, d) = table[class.expect("gated on a known class")];
        q(n, d, p)
    })
}

fn ints(values: &[i128]) -> Vec<(i128, i128)> {
    values.iter().map(|&v| (v, 1)).collect()
}

fn t1_5(pp: &PrimePowerModulus) -> Result<Vec<Prediction>> {
    let class = class_of(pp, 9, &[&[1, 8], &[2, 7], &[4, 5]]);
    let mut rows = Rows::new(first_failure(&[(pp.p() != 3, "p != 3")]));
    let plain = |d| sum(SumDescriptor::plain(2, 9, d));
    keyed(&mut rows, pp, class, plain(0), &ints(&[1, 0, -1]))?;
    keyed(&mut rows, pp, class, plain(-1), &ints(&[0, 1, -1]))?;
    keyed(&mut rows, pp, class, plain(1), &ints(&[0, -5, -7]))?;
    let c = sum(SumDescriptor::catalan(2, 9).from_one());
    keyed(&mut rows, pp, class, c, &ints(&[0, -3, 0]))?;
    let cbar = sum(SumDescriptor::catalan_bar(2, 9).from_one());
    keyed(&mut rows, pp, class, cbar, &ints(&[0, 3, 3]))?;
    Ok(rows.out)
}

fn t1_6(pp: &PrimePowerModulus) -> Result<Vec<Prediction>> {
    let class = class_of(pp, 7, &[&[1, 6], &[2, 5], &[3, 4]]);
    let mut rows = Rows::new(first_failure(&[(pp.p() != 7, "p != 7")]));
    let plain = |d| sum(SumDescriptor::plain(2, 7, d));
    keyed(&mut rows, pp, class, sum(SumDescriptor::plain(2, 7, 0).from_one()), &ints(&[0, -3, 0]))?;
    keyed(&mut rows, pp, class, plain(-1), &ints(&[0, -1, 1]))?;
    keyed(&mut rows, pp, class, plain(1), &ints(&[0, -7, -1]))?;
    keyed(&mut rows, pp, class, sum(SumDescriptor::catalan(2, 7)), &ints(&[1, 0, -1]))?;
    let cbar = sum(SumDescriptor::catalan_bar(2, 7).from_one());
    keyed(&mut rows, pp, class, cbar, &ints(&[0, 1, 1]))?;
    Ok(rows.out)
}

fn t1_7(pp: &PrimePowerModulus) -> Result<Vec<Prediction>> {
    let p = pp.p();
    let gate = first_failure(&[(p != 5 && p != 13, "p != 5, 13")]);
    let c13 = class_of(pp, 13, &[&[1, 12, 5, 8], &[2, 11, 3, 10], &[4, 9, 6, 7]]);
    let mut rows = Rows::new(gate.clone());
    keyed(&mut rows, pp, c13, sum(SumDescriptor::plain(2, 13, 0)), &[(1, 1), (-4, 5), (-1, 5)])?;
    keyed(&mut rows, pp, c13, sum(SumDescriptor::plain(2, 13, 1)), &[(0, 1), (-53, 5), (-47, 5)])?;
    // the table prints 1 here; the k = 0 term vanishes and c ∈ C0 kills the rest
    if c13 == Some(0) && rows.gate.is_none() {
        let last = rows.out.last_mut().expect("row just emitted");
        last.alternatives.push(("printed".to_string(), Residue::one(p)));
    }
    keyed(&mut rows, pp, c13, sum(SumDescriptor::catalan(2, 13)), &ints(&[1, 2, -3]))?;
    let c19 = class_of(
        pp,
        19,
        &[&[1, 18, 7, 12, 8, 11], &[2, 17, 3, 16, 5, 14], &[4, 15, 6, 13, 9, 10]],
    );
    rows.gate = gate.or(first_failure(&[(p != 19, "p != 19")]));
    keyed(&mut rows, pp, c19, sum(SumDescriptor::catalan(2, 19)), &ints(&[1, -4, 3]))?;
    Ok(rows.out)
}

fn t1_8(pp: &PrimePowerModulus, params: &Params) -> Result<Vec<Prediction>> {
    let p = pp.p();
    // p^a mod 5 = 1, -1, 2, -2
    let class = class_of(pp, 5, &[&[1], &[4], &[2], &[3]]);
    let not5 = first_failure(&[(p != 5, "p != 5")]);
    let mut rows = Rows::new(not5.clone().or(first_failure(&[(p != 11, "p != 11")])));
    let s = |d| sum(SumDescriptor::plain(3, 5, d));
    keyed(&mut rows, pp, class, s(0), &[(1, 1), (-9, 11), (-1, 11), (-1, 11)])?;
    keyed(&mut rows, pp, class, s(1), &[(0, 1), (-5, 11), (-14, 11), (-14, 11)])?;
    keyed(&mut rows, pp, class, s(-1), &[(0, 1), (-3, 11), (7, 11), (-4, 11)])?;
    keyed(&mut rows, pp, class, s(-2), &[(0, 1), (-1, 11), (-16, 11), (17, 11)])?;

    rows.gate = not5;
    if let Some(pa) = pa_offset(pp) {
        let ds = match params.int("d")? {
            Some(d) => vec![d],
            None if 3 * pa <= 3000 => (2..=3 * pa).collect(),
            None => vec![2, 3, pa, pa + 1, pa + 2, 2 * pa, 2 * pa + 1, 3 * pa],
        };
        for d in ds {
            let extra = (!(2..=3 * pa).contains(&d)).then_some("2 <= d <= 3p^a");
            let rhs = if d == pa + 1 {
                6
            } else if d == 2 * pa + 1 {
                4
            } else {
                0
            };
            rows.emit_if(Target::QuarticRelation { d }, extra, || Ok(int(rhs, p)))?;
        }
    }

    keyed(&mut rows, pp, class, sum(SumDescriptor::catalan(3, 5)), &ints(&[1, 0, -2, 1]))?;
    keyed(&mut rows, pp, class, sum(SumDescriptor::catalan_bar(3, 5)), &ints(&[3, -2, 1, 1]))?;
    Ok(rows.out)
}

fn t1_9(pp: &PrimePowerModulus) -> Result<Vec<Prediction>> {
    let p = pp.p();
    let mut rows = Rows::new(first_failure(&[(p > 3, "p > 3")]));
    let base = Ratio::new(27, 256);
    let chi = || jacobi_prime_power(int(-2, p), pp) as i128;
    rows.emit(sum(SumDescriptor::catalan(3, 1).from_one().with_base(base)), || {
        q(chi() - 1, 12, p)
    })?;
    if let Some(pa) = pa_offset(pp) {
        let target = sum(SumDescriptor::plain(3, 1, pa).from_one().with_base(base));
        rows.emit(target, || q(-(chi() + 20), 48, p))?;
    }
    Ok(rows.out)
}

/// Solutions of `t² ≡ x` in `Z/p`.
fn square_roots(x: Residue) -> Vec<Residue> {
    match sqrt_mod(x) {
        None => Vec::new(),
        Some(r) if r.is_zero() => vec![r],
        Some(r) => vec![r, -r],
    }
}

fn t1_10(pp: &PrimePowerModulus) -> Result<Vec<Prediction>> {
    let p = pp.p();
    let base = first_failure(&[(p > 3, "p > 3"), (pp.a() == 1, "stated for a = 1")]);

    let target = sum(SumDescriptor::catalan_bar(3, 3).from_one());
    let legendre = |x: i64| Residue::from_i64(x, p).legendre();
    let over = |q: u64| p > 3 && pa_over(pp, q) == Ok(1);
    let gate = base.clone().or(first_failure(&[(over(7), "(p/7) = 1")]));
    let mut first = Rows::new(gate);
    let mut alternatives = Vec::new();
    first.emit(target, || {
        if p % 3 == 2 {
            return Ok(int(-6, p));
        }
        let (x, y) = cornacchia_x2_3y2(p)?;
        let (x, y) = (x as i64, y as i64);
        let value = |x: i64, y: i64| {
            let equal = legendre(x + 5 * y) == legendre(x - 3 * y);
            int(if equal { 0 } else { -3 }, p)
        };
        for (sx, sy) in [(1, -1), (-1, 1), (-1, -1)] {
            alternatives.push((format!("x={},y={}", sx * x, sy * y), value(sx * x, sy * y)));
        }
        Ok(value(x, y))
    })?;
    first.out[0].alternatives = alternatives;

    let target = sum(SumDescriptor::catalan_bar(4, -1).from_one());
    let gate = base.or(first_failure(&[(over(23), "(p/23) = 1")]));
    let mut second = Rows::new(gate);
    let mut alternatives = Vec::new();
    second.emit(target, || {
        if p % 3 == 1 {
            let e = (p - 1) / 3;
            let cubic = square_roots(int(69, p)).into_iter().any(|t| {
                let z = (int(97, p) - t * 3i64) * q(1, 2, p).expect("p odd");
                !z.is_zero() && z.pow(e).value() == 1
            });
            return Ok(int(if cubic { 0 } else { -13 }, p));
        }
        let n = (p as i64 + 1) / 3;
        let branch = |b: i64| -> Result<Residue> {
            let v = lucas_uv_i64(&LucasParams::from_i64(-97, b, p)?, n).v;
            Ok(int(if v == int(-13, p) { -10 } else { 3 }, p))
        };
        alternatives.push(("v(n+1)=-97v(n)-13^2v(n-1)".to_string(), branch(169)?));
        branch(2197)
    })?;
    second.out[0].alternatives = alternatives;

    let mut out = first.out;
    out.extend(second.out);
    Ok(out)
}

/// `x ≥ 1`, `y ≥ 1` with `x² + 3y² = p`, by Cornacchia's algorithm.
pub fn cornacchia_x2_3y2(p: u64) -> Result<(u64, u64)> {
    if p % 3 != 1 {
        return Err(Error::NoRepresentation(p));
    }
    let r0 = sqrt_mod(Residue::from_i64(-3, p)).ok_or(Error::NoRepresentation(p))?;
    let (mut a, mut b) = (p as u128, r0.value() as u128);
    if 2 * b < a {
        b = a - b;
    }
    let limit = (p as u128).sqrt();
    while b > limit {
        (a, b) = (b, a % b);
    }
    let rest = p as u128 - b * b;
    if rest.is_multiple_of(3) {
        let y = (rest / 3).sqrt();
        if y * y * 3 == rest && y > 0 {
            return Ok((b as u64, y as u64));
        }
    }
    Err(Error::NoRepresentation(p))
}

fn t3_1(pp: &PrimePowerModulus, params: &Params) -> Result<Vec<Prediction>> {
    let p = pp.p();
    let m = Ratio::new(27, 4);
    let mut rows = Rows::new(first_failure(&[(p > 3, "p > 3")]));
    let Some(pa) = pa_offset(pp) else {
        return Ok(rows.out);
    };
    let ds = offsets(params, "d", &[-1, 0, 1, 2, pa, pa + 1, 2 * pa])?;
    let sign = |d: i64| if d.rem_euclid(2) == 0 { 1 } else { -1 };
    for d in ds {
        let target = sum(SumDescriptor::plain(2, m, d));
        let lower = (-1..=pa).contains(&d);
        let upper = (pa..=2 * pa).contains(&d);
        let extra = (!lower && !upper).then_some("-1 <= d <= 2p^a");
        if lower || extra.is_some() {
            rows.emit_if(target, extra, || {
                let v = int(4, p).pow_i64(2 - d)? * sign(d)
                    - int(2, p).pow_i64(d)? * (7 * (9 * d + 1));
                v.checked_div(int(81, p))
            })?;
        }
        if upper {
            rows.emit(target, || {
                let v = int(4, p).pow_i64(3 - d)? * sign(d) - int(2, p).pow_i64(d)? * (9 * d + 1);
                v.checked_div(int(81, p))
            })?;
        }
    }
    let specials = [
        (SumDescriptor::plain(2, m, 0), (1, 9)),
        (SumDescriptor::plain(2, m, pa).from_one(), (-2, 9)),
        (SumDescriptor::plain(2, m, 1).from_one(), (-16, 9)),
        (SumDescriptor::plain(2, m, -1).from_one(), (-4, 9)),
    ];
    for (desc, (n, d)) in specials {
        rows.emit(sum(desc), || q(n, d, p))?;
    }
    Ok(rows.out)
}

fn t3_2(pp: &PrimePowerModulus, params: &Params) -> Result<Vec<Prediction>> {
    let p = pp.p();
    let c = params.require("c")?;
    let cr = residue_of(c, p);
    let bad = |n: i64, d: i64| cr.is_none_or(|x| x * d == int(n, p));
    let mut rows = Rows::new(first_failure(&[
        (p != 2, "p odd"),
        (cr.is_some(), "c is p-integral"),
        (
            !bad(0, 1) && !bad(-1, 1) && !bad(2, 1) && !bad(-1, 4),
            "c != 0, -1, 2, -1/4 mod p",
        ),
    ]));
    let Some(pa) = pa_offset(pp) else {
        return Ok(rows.out);
    };
    let base = if rows.gate.is_none() {
        c_weight(c)
    } else {
        Ratio::int(1)
    };
    let ds = offsets(params, "d", &[-1, 0, 1, 2, pa])?;
    for d in ds {
        let extra = (!(-1..=pa).contains(&d)).then_some("-1 <= d <= p^a");
        let target = sum(SumDescriptor::plain(2, 1, d).with_base(base));
        rows.emit_if(target, extra, || {
            let c = cr.expect("gated");
            let lp = LucasParams::new((c * 3i64 + 1i64).checked_div(c * c)?, -c.inv()?)?;
            let at = |n: i64| lucas_uv_i64(&lp, n);
            let (n0, n1) = (at(d), at(d + 1));
            let c1sq = (c + 1i64) * (c + 1i64);
            let den = c1sq * (c - 2i64);
            let j = jacobi_prime_power(c * 4i64 + 1i64, pp) as i64;
            let mid = (n1.u - c.pow_i64(d)? + n0.u.checked_div(c * c)?)
                * (c * 3i64 + 1i64).checked_div(den)?;
            let tail = (n0.v + c * c * n1.v).checked_div(den * 2i64)? * (1 - j);
            Ok(n1.u + mid + tail)
        })?;
    }
    Ok(rows.out)
}

fn c3_1(pp: &PrimePowerModulus, params: &Params) -> Result<Vec<Prediction>> {
    let p = pp.p();
    let mut rows = Rows::new(first_failure(&[(p > 3, "p > 3"), (p != 7, "28 invertible mod p")]));
    let Some(pa) = pa_offset(pp) else {
        return Ok(rows.out);
    };
    let ds = offsets(params, "d", &[-1, 0, 1, 2, 3, pa])?;
    for d in ds {
        let extra = (!(-1..=pa).contains(&d)).then_some("-1 <= d <= p^a");
        let target = sum(SumDescriptor::plain(2, Ratio::new(8, 3), d));
        rows.emit_if(target, extra, || {
            let chi = pa_over(pp, 3)?;
            let (e, f) = if d % 2 == 0 {
                (d / 2, 1 + 27 * chi)
            } else {
                ((d + 3) / 2, 1 - chi)
            };
            Ok(int(-3, p).pow_i64(e)? * q(f as i128, 28, p)?)
        })?;
    }
    Ok(rows.out)
}

/// `(x / 5)`.
fn chi5(x: i64) -> i64 {
    match x.rem_euclid(5) {
        0 => 0,
        1 | 4 => 1,
        _ => -1,
    }
}

fn l5_1(pp: &PrimePowerModulus, params: &Params) -> Result<Vec<Prediction>> {
    let p = pp.p();
    let ss = offsets(params, "s", &[1, 2])?;
    let ds = offsets(params, "d", &[0, 1, 2, 3, 4, 5])?;
    let mut rows = Rows::new(None);
    let lucas = LucasParams::from_i64(1, -1, p)?;
    let l = |n: i64| lucas_uv_i64(&lucas, n).v;
    let pa5 = pp.rem(5) as i64;
    for &s in &ss {
        for &d in &ds {
            let extra = if !(s == 1 || s == 2) {
                Some("s in {1, 2}")
            } else {
                (d < 0).then_some("d >= 0")
            };
            let target = Target::Section5 {
                s: s.clamp(0, 9) as u8,
                d,
                scale: 5,
            };
            rows.emit_if(target, extra, || {
                let div = |x: i64| bracket(x.rem_euclid(5) == 0, p);
                let chi_term = |x: i64| l(2 * d - chi5(x)) * chi5(x);
                let (a1, a0) = (d + 2 * pa5 - 2 * s + 1, d + 2 * pa5 - 2 * s);
                let (b1, b0) = (d + pa5 - 2 * s + 1, d + pa5 - 2 * s);
                Ok(l(2 * d) * 2i64 * (div(a1) - div(a0))
                    + l(2 * d) * 4i64 * (div(b1) - div(b0))
                    + chi_term(a1)
                    - chi_term(a0)
                    + chi_term(b1) * 2i64
                    - chi_term(b0) * 2i64)
            })?;
        }
    }
    Ok(rows.out)
}

fn l5_2(pp: &PrimePowerModulus) -> Result<Vec<Prediction>> {
    let p = pp.p();
    let class = class_of(pp, 5, &[&[1], &[4], &[2], &[3]]);
    let mut rows = Rows::new(first_failure(&[(p != 5, "p != 5")]));
    let pa5 = pp.rem(5) as i64;
    for s in [1i64, 2] {
        let target = Target::Section5 { s: s as u8, d: 0, scale: 1 };
        rows.emit(target, || {
            let div = |x: i64| bracket(x.rem_euclid(5) == 0, p);
            Ok(div(pa5 - s - 2) - div(pa5 - s) + div(pa5 - 2 * s + 1) * 2i64
                - div(pa5 - 2 * s) * 2i64)
        })?;
    }
    let tables: [(u8, i64, [i128; 4]); 6] = [
        (1, 1, [-3, 2, -1, -1]),
        (2, 1, [3, -3, 1, -1]),
        (1, 2, [-6, 7, 2, 3]),
        (2, 2, [2, -3, -4, -4]),
        (2, 3, [-18, 16, -8, -5]),
        (1, -1, [0, 0, 5, -5]),
    ];
    for (s, d, values) in tables {
        let target = Target::Section5 { s, d, scale: 1 };
        keyed(&mut rows, pp, class, target, &ints(&values))?;
    }
    Ok(rows.out)
}

/// `u_{n+4} − u_{n+3} + 6u_{n+2} + 4u_{n+1} + u_n = 0` with
/// `u_0 = u_1 = u_2 = 0`, `u_3 = 1`.
fn section5_recurrence(p: u64) -> LinearRecurrence {
    let c: Vec<Residue> = [1, 4, 6, -1, 1].iter().map(|&x| int(x, p)).collect();
    let init: Vec<Residue> = [0, 0, 0, 1].iter().map(|&x| int(x, p)).collect();
    LinearRecurrence::new(&c, &init).expect("monic order-4 recurrence")
}

fn v_from(
    rec: &LinearRecurrence,
    s: u8,
    n: &BigInt,
    eval: impl Fn(&LinearRecurrence, &BigInt) -> Residue,
) -> Result<Residue> {
    let u = |k: i64| eval(rec, &(n + k));
    match s {
        1 => Ok(u(2) - u(1) * 3i64),
        2 => Ok(u(1) * 3i64 + u(0) * 2i64),
        _ => Err(Error::InvalidParam(format!("s = {s} must be 1 or 2"))),
    }
}

/// `u_n` of the order-4 sequence behind the fourth-order sums.
pub fn section5_u(n: &BigInt, p: u64) -> Residue {
    section5_recurrence(p).eval(n)
}

/// `v^{(1)}_n = u_{n+2} − 3u_{n+1}` and `v^{(2)}_n = 3u_{n+1} + 2u_n`.
pub fn section5_v(s: u8, n: &BigInt, p: u64) -> Result<Residue> {
    v_from(&section5_recurrence(p), s, n, |r, i| r.eval(i))
}

/// `11u_n = v^{(2)}_n − 3v^{(1)}_{n−1}`.
pub fn section5_identity(n: &BigInt, p: u64) -> Result<bool> {
    let lhs = section5_u(n, p) * 11i64;
    let rhs = section5_v(2, n, p)? - section5_v(1, &(n - 1), p)? * 3i64;
    Ok(lhs == rhs)
}

/// Whether `2⁶U_n ≡ (6n−11)3^{n−1} + 3^{−3(n−1)}(5u_n − 11u_{n−1})`, where
/// `U` is the `h = 3`, `m = 4⁴/3³` sequence and `u_n = u_n(−14, 81)`.
/// The factor is `2⁶`; with `2⁵` the identity already fails at `n = 3`.
pub fn thm19_closed_form_check(n: i64, p: u64) -> Result<bool> {
    if p <= 3 {
        return Err(Error::InvalidParam(format!("p = {p} must exceed 3")));
    }
    let spec = RecurrenceSpec::from_ratio(3, Ratio::new(256, 27), p)?;
    let lucas = LucasParams::from_i64(-14, 81, p)?;
    let big_u = spec.eval_u_i64(n);
    let un = lucas_uv(&lucas, &BigInt::from(n)).u;
    let un1 = lucas_uv(&lucas, &BigInt::from(n - 1)).u;
    let three = int(3, p);
    let rhs = three.pow_i64(n - 1)? * (6 * n - 11)
        + three.pow_i64(-3 * (n - 1))? * (un * 5i64 - un1 * 11i64);
    Ok(big_u * 64i64 == rhs)
}

/// Theorems whose predictions need an explicit `c` or `t`.
pub fn required_params(id: TheoremId) -> &'static [&'static str] {
    match id {
        TheoremId::T1_1 | TheoremId::T3_2 => &["c"],
        TheoremId::T1_3 => &["t"],
        _ => &[],
    }
}

/// Exact rational `Ratio` from a `BigInt`, for callers building params.
pub fn ratio_from_bigint(x: &BigInt) -> Option<Ratio> {
    x.to_i128().map(Ratio::int)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::primes_in;

    fn pp(p: u64, a: u32) -> PrimePowerModulus {
        PrimePowerModulus::new(p, a).unwrap()
    }

    /// Every applicable prediction agrees with both evaluation routes.
    fn verify(id: TheoremId, m: &PrimePowerModulus, params: &Params) -> usize {
        let mut checked = 0;
        for pred in predict(id, m, params).unwrap() {
            let Some(v) = pred.value else {
                assert!(pred.reason.is_some());
                continue;
            };
            let fast = pred.target.fast(m).unwrap();
            assert_eq!(v, fast, "{id} p^a={}^{} {params} {}", m.p(), m.a(), pred.target);
            if m.value_signed() < BigInt::from(3000) {
                let oracle = pred.target.oracle(m, 1 << 20).unwrap();
                assert_eq!(v, oracle, "{id} oracle {} {}", m.p(), pred.target);
            }
            checked += 1;
        }
        checked
    }

    fn grid() -> Vec<PrimePowerModulus> {
        let mut out = Vec::new();
        for p in primes_in(2, 60) {
            out.push(pp(p, 1));
            if p < 30 {
                out.push(pp(p, 2));
            }
        }
        out
    }

    #[test]
    fn ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.to_string().parse::<TheoremId>().unwrap(), id);
        }
        assert_eq!("t1.10".parse::<TheoremId>().unwrap(), TheoremId::T1_10);
        assert!(matches!("T9.9".parse::<TheoremId>(), Err(Error::UnknownTheorem(_))));
    }

    #[test]
    fn missing_params_are_reported() {
        assert_eq!(
            predict(TheoremId::T1_1, &pp(7, 1), &Params::new()),
            Err(Error::MissingParam("c"))
        );
        assert_eq!(
            predict(TheoremId::T1_3, &pp(7, 1), &Params::new()),
            Err(Error::MissingParam("t"))
        );
    }

    #[test]
    fn worked_examples() {
        let s0 = &predict(TheoremId::T1_8, &pp(7, 1), &Params::new()).unwrap()[0];
        assert_eq!(s0.value, Some(rational_residue(-1, 11, 7).unwrap()));
        let t16 = predict(TheoremId::T1_6, &pp(5, 1), &Params::new()).unwrap();
        let total = t16
            .iter()
            .find(|r| r.target == sum(SumDescriptor::catalan(2, 7)))
            .unwrap();
        assert_eq!(total.value.unwrap().value(), 0);
        let t15 = &predict(TheoremId::T1_5, &pp(5, 1), &Params::new()).unwrap()[0];
        assert_eq!(t15.value.unwrap().value(), 4);
    }

    #[test]
    fn parameter_free_theorems_hold_on_grid() {
        use TheoremId::*;
        for id in [C1_1, T1_2, T1_5, T1_6, T1_7, T1_8, T1_9, T1_10, T3_1, C3_1, L5_1, L5_2] {
            let n: usize = grid().iter().map(|m| verify(id, m, &Params::new())).sum();
            assert!(n > 0, "{id} never applicable");
        }
    }

    #[test]
    fn theorem_1_1_and_3_2_hold_over_c() {
        for m in grid() {
            for c in [-7, -5, -3, -2, 1, 3, 4, 5, 6, 9] {
                let params = Params::new().with("c", c);
                verify(TheoremId::T1_1, &m, &params);
                verify(TheoremId::T3_2, &m, &params);
            }
            let params = Params::new().with("c", Ratio::new(-1, 2));
            verify(TheoremId::T1_1, &m, &params);
        }
    }

    #[test]
    fn theorem_1_3_holds_over_t() {
        let mut classes = [0usize; 3];
        for m in grid() {
            for t in -6..=6 {
                let params = Params::new().with("t", t);
                let rows = predict(TheoremId::T1_3, &m, &params).unwrap();
                if rows[0].applicable() {
                    classes[if rows.len() == 5 { 0 } else { 1 }] += 1;
                }
                verify(TheoremId::T1_3, &m, &params);
            }
        }
        assert!(classes[0] > 0 && classes[1] > 0, "{classes:?}");
    }

    #[test]
    fn theorem_1_3_cbar_branch_is_sign_free() {
        // 2·S_0 − S_1 from the signed rows equals m − 6 for either sign
        for p in primes_in(5, 200) {
            for t in 0..5i64 {
                let m = t * t + t + 7;
                let w = int(2 * t + 1, p);
                if w.is_zero() || int(m, p).is_zero() || int(m - 6, p).is_zero() {
                    continue;
                }
                for sign in [1, -1] {
                    let tw = int(3 * sign, p).checked_div(w).unwrap();
                    let s0 = (tw - 3i64).checked_div(int(2, p)).unwrap();
                    let s1 = tw + 3i64 - int(m, p);
                    assert_eq!(s0 * 2i64 - s1, int(m - 6, p));
                }
            }
        }
    }

    #[test]
    fn theorem_1_2_rows_are_consistent() {
        for p in primes_in(5, 200) {
            for a in [1, 2] {
                let m = pp(p, a);
                let rows = predict(TheoremId::T1_2, &m, &Params::new()).unwrap();
                if let (Some(x), Some(y)) = (rows[2].value, rows[3].value) {
                    assert_eq!(y, x * 2i64);
                }
            }
        }
    }

    #[test]
    fn theorem_1_4_at_a_6() {
        let m = pp(5, 6);
        assert!(verify(TheoremId::T1_4, &m, &Params::new()) >= 15);
        let m = pp(23, 6);
        for pred in predict(TheoremId::T1_4, &m, &Params::new()).unwrap() {
            assert_eq!(pred.value.unwrap(), pred.target.fast(&m).unwrap());
        }
    }

    #[test]
    fn theorem_1_4_depends_on_r_mod_p_minus_1() {
        let m = pp(7, 6);
        for r in 0..6 {
            let a = predict(TheoremId::T1_4, &m, &Params::new().with("d", 0).with("r", r)).unwrap();
            let b =
                predict(TheoremId::T1_4, &m, &Params::new().with("d", 0).with("r", r + 6)).unwrap();
            assert_eq!(a[0].value, b[0].value);
        }
    }

    #[test]
    fn theorem_1_8_relation_over_full_range() {
        for (p, a) in [(7, 1), (11, 1), (13, 1), (3, 2)] {
            let m = pp(p, a);
            let rows = predict(TheoremId::T1_8, &m, &Params::new()).unwrap();
            let relations = rows
                .iter()
                .filter(|r| matches!(r.target, Target::QuarticRelation { .. }))
                .count();
            assert_eq!(relations as u64, 3 * m.to_i64().unwrap() as u64 - 1);
        }
    }

    #[test]
    fn p_eleven_keeps_part_three() {
        let rows = predict(TheoremId::T1_8, &pp(11, 1), &Params::new()).unwrap();
        assert_eq!(rows[0].reason.as_deref(), Some("p != 11"));
        let tail: Vec<u64> = rows[rows.len() - 2..]
            .iter()
            .map(|r| r.value.unwrap().value())
            .collect();
        assert_eq!(tail, [1, 3]);
    }

    #[test]
    fn catalan_rows_match_subtraction_forms() {
        for p in primes_in(7, 100).into_iter().filter(|&p| p != 11) {
            let m = pp(p, 1);
            let rows = predict(TheoremId::T1_8, &m, &Params::new()).unwrap();
            let (s0, sm1, s1) = (rows[0].value.unwrap(), rows[2].value.unwrap(), rows[1].value.unwrap());
            let n = rows.len();
            assert_eq!(rows[n - 2].value.unwrap(), s0 - sm1 * 3i64);
            assert_eq!(rows[n - 1].value.unwrap(), s0 * 3i64 - s1);
        }
    }

    #[test]
    fn theorem_1_10_readings() {
        for p in primes_in(5, 300) {
            for pred in predict(TheoremId::T1_10, &pp(p, 1), &Params::new()).unwrap() {
                let Some(v) = pred.value else { continue };
                assert_eq!(v, pred.target.oracle(&pp(p, 1), 1 << 20).unwrap(), "p = {p}");
                for (_, alt) in &pred.alternatives {
                    if matches!(pred.target, Target::Sum(d) if d.h == 3) {
                        assert_eq!(*alt, v, "sign choice matters at p = {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn theorem_1_10_literal_recurrence_misses() {
        // 29 ≡ 2 mod 3 and (29/23) = 1
        let rows = predict(TheoremId::T1_10, &pp(29, 1), &Params::new()).unwrap();
        let row = &rows[1];
        let truth = row.target.oracle(&pp(29, 1), 1 << 20).unwrap();
        assert_eq!(row.value.unwrap(), truth);
        assert_ne!(row.alternatives[0].1, truth);
    }

    #[test]
    fn cornacchia_examples_and_search() {
        assert_eq!(cornacchia_x2_3y2(7).unwrap(), (2, 1));
        assert_eq!(cornacchia_x2_3y2(13).unwrap(), (1, 2));
        assert_eq!(cornacchia_x2_3y2(31).unwrap(), (2, 3));
        assert_eq!(cornacchia_x2_3y2(11), Err(Error::NoRepresentation(11)));
        for p in primes_in(5, 20_000).into_iter().filter(|p| p % 3 == 1) {
            let (x, y) = cornacchia_x2_3y2(p).unwrap();
            assert_eq!(x * x + 3 * y * y, p);
        }
    }

    #[test]
    fn section5_examples() {
        let v = |s, n: i64| section5_v(s, &BigInt::from(n), 1_000_003).unwrap().signed();
        assert_eq!(v(1, 1), 1);
        assert_eq!(v(1, 2), -2);
        assert_eq!(v(2, 2), 3);
        for n in -20..40 {
            assert!(section5_identity(&BigInt::from(n), 1_000_003).unwrap());
        }
        assert!(section5_v(3, &BigInt::from(0), 7).is_err());
    }

    #[test]
    fn closed_form_for_u_capital() {
        for p in primes_in(5, 120) {
            for n in 0..60 {
                assert!(thm19_closed_form_check(n, p).unwrap(), "n = {n}, p = {p}");
            }
        }
        assert!(thm19_closed_form_check(10, 7).unwrap());
        assert!(thm19_closed_form_check(3, 3).is_err());
        // U_3 = 1 while the right-hand side is 64 at n = 3
        let p = 101;
        let lucas = LucasParams::from_i64(-14, 81, p).unwrap();
        let rhs = int(7 * 9, p) + int(3, p).pow_i64(-6).unwrap()
            * (lucas_uv_i64(&lucas, 3).u * 5i64 - lucas_uv_i64(&lucas, 2).u * 11i64);
        assert_eq!(rhs.value(), 64);
    }

    #[test]
    fn inapplicable_rows_carry_no_value() {
        for id in TheoremId::ALL {
            let params = Params::new().with("c", 3).with("t", 1);
            for pred in predict(id, &pp(3, 1), &params).unwrap() {
                assert_eq!(pred.applicable(), pred.reason.is_none());
            }
        }
    }
}
