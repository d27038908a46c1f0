//! Search for `m` whose sums take the same small rational value at every
//! prime, or a value depending only on `p^a` modulo some small `M`.

use std::collections::BTreeMap;

use congr_core::descriptor::SumDescriptor;
use congr_core::modarith::{PrimePowerModulus, Ratio, Residue};
use serde::Serialize;

/// Height bounds for rational reconstruction.
pub const MAX_NUM: i64 = 100;
pub const MAX_DEN: i64 = 30;
/// Largest key modulus tried.
pub const MAX_KEY: u64 = 60;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub h: usize,
    pub m: String,
    pub d: i64,
    pub a: u32,
    pub primes: usize,
    /// `constant`, `keyed` or `none`.
    pub flag: &'static str,
    pub modulus: Option<u64>,
    /// Class of `p^a mod modulus` to the rational value on it.
    pub values: BTreeMap<u64, String>,
    /// Primes left out of their class, at most one per class.
    pub exceptions: Vec<u64>,
    /// Classes whose values are not a single small rational.
    pub unresolved: Vec<u64>,
}

/// [`reconstruct`], or failing that, the same with one sample dropped.
fn reconstruct_allowing_one(samples: &[Residue]) -> Option<(Ratio, Option<u64>)> {
    if let Some(r) = reconstruct(samples) {
        return Some((r, None));
    }
    if samples.len() < 4 {
        return None;
    }
    (0..samples.len()).find_map(|skip| {
        let rest: Vec<Residue> = samples
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, s)| *s)
            .collect();
        reconstruct(&rest).map(|r| (r, Some(samples[skip].modulus())))
    })
}

/// Smallest-height `n/den` (|n| ≤ MAX_NUM, den ≤ MAX_DEN) matching every
/// residue, provided the product of the moduli pins it down uniquely.
fn reconstruct(samples: &[Residue]) -> Option<Ratio> {
    let product: f64 = samples.iter().map(|r| r.modulus() as f64).product();
    if product <= (2 * MAX_NUM * MAX_DEN * MAX_DEN) as f64 {
        return None;
    }
    let first = samples[0];
    let p = first.modulus();
    let mut best: Option<(i64, Ratio)> = None;
    for den in 1..=MAX_DEN {
        if (den as u64).is_multiple_of(p) {
            continue;
        }
        // n ≡ first·den (mod p), every lift with |n| ≤ MAX_NUM
        let base = (first * den).signed();
        let step = p as i64;
        let mut n = base - (base + MAX_NUM).div_euclid(step) * step;
        while n <= MAX_NUM {
            let ok = samples.iter().all(|s| {
                let q = s.modulus();
                !(den as u64).is_multiple_of(q) && *s * den == Residue::from_i64(n, q)
            });
            let r = Ratio::new(n as i128, den as i128);
            let height = n.abs().max(den);
            if ok && best.as_ref().is_none_or(|(h, _)| height < *h) {
                best = Some((height, r));
            }
            n += step;
        }
    }
    best.map(|(_, r)| r)
}

/// Values of `Σ binom((h+1)k, k+d)/m^k` at each prime where they are
/// defined, then the smallest key modulus explaining at least half of them.
pub fn scan_one(h: usize, m: Ratio, d: i64, a: u32, primes: &[u64]) -> ScanRow {
    let desc = SumDescriptor::plain(h, m, d);
    let values: Vec<(u64, Residue)> = primes
        .iter()
        .filter_map(|&p| {
            let pp = PrimePowerModulus::new(p, a).ok()?;
            desc.fast(&pp).ok().map(|v| (p, v))
        })
        .collect();
    let mut row = ScanRow {
        h,
        m: m.to_string(),
        d,
        a,
        primes: values.len(),
        flag: "none",
        modulus: None,
        values: BTreeMap::new(),
        exceptions: Vec::new(),
        unresolved: Vec::new(),
    };
    // key explaining the most primes; ties go to the smaller key
    let mut best: Option<(usize, u64, Vec<(u64, Option<(Ratio, Option<u64>)>)>)> = None;
    for key in 1..=MAX_KEY {
        let mut groups: BTreeMap<u64, Vec<Residue>> = BTreeMap::new();
        for &(p, v) in &values {
            let class = PrimePowerModulus::new(p, a).expect("prime").rem(key);
            groups.entry(class).or_default().push(v);
        }
        let mut covered = 0;
        let solved: Vec<_> = groups
            .iter()
            .map(|(&class, s)| {
                let r = reconstruct_allowing_one(s);
                if let Some((_, skip)) = &r {
                    covered += s.len() - usize::from(skip.is_some());
                }
                (class, r)
            })
            .collect();
        if best.as_ref().is_none_or(|b| covered > b.0) {
            best = Some((covered, key, solved));
        }
    }
    let Some((covered, key, solved)) = best else {
        return row;
    };
    if covered == 0 || 2 * covered < values.len() {
        return row;
    }
    row.flag = if key == 1 { "constant" } else { "keyed" };
    row.modulus = Some(key);
    for (class, r) in solved {
        match r {
            Some((r, skip)) => {
                row.values.insert(class, r.to_string());
                row.exceptions.extend(skip);
            }
            None => row.unresolved.push(class),
        }
    }
    row.exceptions.sort();
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use congr_core::modarith::primes_in;

    #[test]
    fn reconstruction() {
        let rs: Vec<Residue> = [101u64, 103, 107]
            .iter()
            .map(|&p| Residue::from_i64(-9, p) * Residue::from_i64(11, p).inv().unwrap())
            .collect();
        assert_eq!(reconstruct(&rs), Some(Ratio::new(-9, 11)));
        assert_eq!(reconstruct(&rs[..1]), None);
    }

    #[test]
    fn known_structures_are_flagged() {
        let primes = primes_in(5, 100);
        let row = scan_one(2, Ratio::int(9), 0, 1, &primes);
        assert_eq!((row.flag, row.modulus), ("keyed", Some(9)));
        assert_eq!(row.values[&8], "1");
        assert_eq!(row.values[&2], "0");
        let row = scan_one(3, Ratio::int(5), 0, 1, &primes);
        assert_eq!((row.flag, row.modulus), ("keyed", Some(5)));
        assert_eq!(row.values[&4], "-9/11");
        assert_eq!(row.exceptions, [11]);
        let row = scan_one(2, Ratio::int(2), 0, 1, &primes);
        assert_eq!(row.flag, "none");
    }
}
