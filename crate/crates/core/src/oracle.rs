//! Brute-force ground truth: every sum enumerated term by term with
//! Lucas-theorem binomials. Nothing here touches the recurrences.

use num_bigint::BigInt;
use rayon::prelude::*;

pub use crate::descriptor::{Offset, SumDescriptor};
use crate::error::{Error, Result};
use crate::modarith::{
    add_mod, binom_mod_p, mul_mod, LucasTable, PrimePowerModulus, Ratio, Residue,
};

/// Default cap on the number of enumerated terms.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

const CHUNK: u64 = 1 << 18;

fn budget_error(pp: &PrimePowerModulus, budget: u64) -> Error {
    Error::BudgetExceeded {
        terms: pp.value().to_string(),
        budget,
    }
}

/// `desc` summed over `k = k_start … p^a − 1`.
///
/// Fails with [`Error::BudgetExceeded`] when `p^a` exceeds `budget` or `p`
/// is too large for a factorial table.
pub fn direct_sum(desc: &SumDescriptor, pp: &PrimePowerModulus, budget: u64) -> Result<Residue> {
    let p = pp.p();
    let n = pp
        .to_i64()
        .map(|n| n as u64)
        .filter(|&n| n <= budget)
        .ok_or_else(|| budget_error(pp, budget))?;
    let table = LucasTable::new(p).ok_or_else(|| budget_error(pp, budget))?;
    let q = desc.multiplier(p)?;
    let scale = desc.scale.to_residue(p)?;
    let comps: Vec<(u64, i64)> = desc
        .components()
        .into_iter()
        .map(|(c, d)| (Residue::from_i64(c, p).value(), d))
        .collect();
    let h1 = desc.h as u64 + 1;
    let start = desc.k_start as u64;
    let period = p - 1;
    let restriction = desc.class_restriction.map(|r| r.rem_euclid(period as i64) as u64);

    let chunk_sum = |lo: u64, hi: u64| -> u64 {
        let mut w = q.pow(lo).value();
        let mut acc = 0u64;
        for k in lo..hi {
            if restriction.is_none_or(|r| k % period == r) {
                let mut t = 0u64;
                for &(c, d) in &comps {
                    let b = table.binom(h1 * k, k as i64 + d);
                    if b != 0 {
                        t = add_mod(t, mul_mod(c, b, p), p);
                    }
                }
                acc = add_mod(acc, mul_mod(t, w, p), p);
            }
            w = mul_mod(w, q.value(), p);
        }
        acc
    };

    let chunks: Vec<(u64, u64)> = (start..n)
        .step_by(CHUNK as usize)
        .map(|lo| (lo, (lo + CHUNK).min(n)))
        .collect();
    let total = chunks
        .into_par_iter()
        .map(|(lo, hi)| chunk_sum(lo, hi))
        .reduce(|| 0, |a, b| add_mod(a, b, p));
    Ok(scale * Residue::new(total, p))
}

/// Same as [`direct_sum`] but recomputing `base^k / m^k` from scratch for
/// every term and using [`binom_mod_p`] on big integers; slow, for tests.
pub fn direct_sum_naive(desc: &SumDescriptor, pp: &PrimePowerModulus) -> Result<Residue> {
    let p = pp.p();
    let n = pp.to_i64().expect("small modulus");
    let q = desc.multiplier(p)?;
    let mut acc = Residue::zero(p);
    for k in desc.k_start as i64..n {
        if let Some(r) = desc.class_restriction {
            if (k - r).rem_euclid(p as i64 - 1) != 0 {
                continue;
            }
        }
        let nn = BigInt::from((desc.h as i64 + 1) * k);
        let mut t = Residue::zero(p);
        for (c, d) in desc.components() {
            t += binom_mod_p(&nn, &BigInt::from(k + d), p) * c;
        }
        acc += t * q.pow(k as u64);
    }
    Ok(desc.scale.to_residue(p)? * acc)
}

/// `C_k^{(h)}` or `C̄_k^{(h)}` modulo `p` through the subtraction forms.
pub fn catalan_mod(kind: Offset, h: usize, k: &BigInt, p: u64) -> Residue {
    let n = k * (h as i64 + 1);
    let b = |shift: i64| binom_mod_p(&n, &(k + shift), p);
    match kind {
        Offset::C => b(0) - b(-1) * h as i64,
        Offset::Cbar => b(0) * h as i64 - b(1),
        Offset::Plain(d) => b(d),
    }
}

/// `Σ_{0<k<p^a, k ≡ r (p−1)} binom(3k, k+d)`.
pub fn residue_class_sum(pp: &PrimePowerModulus, d: i64, r: i64, budget: u64) -> Result<Residue> {
    let desc = SumDescriptor::plain(2, Ratio::int(1), d).from_one().restricted(r);
    direct_sum(&desc, pp, budget)
}
