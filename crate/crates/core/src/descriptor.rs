//! Shapes of the sums under study, and their evaluation through the
//! recurrence.
//!
//! A [`SumDescriptor`] stands for
//! `scale · Σ_{k = k_start}^{p^a − 1} [k ≡ r (p−1)] · base^k · T_k / m^k`
//! where `T_k` is `binom((h+1)k, k+d)`, `C_k^{(h)}` or `C̄_k^{(h)}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linrec::RecurrenceSpec;
use crate::modarith::{PrimePowerModulus, Ratio, Residue};

/// The summand family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Offset {
    /// `binom((h+1)k, k+d)`.
    Plain(i64),
    /// `C_k^{(h)} = binom((h+1)k, k) − h·binom((h+1)k, k−1)`.
    C,
    /// `C̄_k^{(h)} = h·binom((h+1)k, k) − binom((h+1)k, k+1)`.
    Cbar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SumDescriptor {
    pub h: usize,
    pub m: Ratio,
    pub offset: Offset,
    /// 0 or 1.
    pub k_start: u8,
    /// Extra per-term factor `base^k`.
    pub base: Ratio,
    /// Constant factor in front of the sum.
    pub scale: Ratio,
    /// Keep only `k ≡ r (mod p − 1)`.
    pub class_restriction: Option<i64>,
}

impl SumDescriptor {
    pub fn plain(h: usize, m: impl Into<Ratio>, d: i64) -> Self {
        Self::new(h, m.into(), Offset::Plain(d))
    }

    pub fn catalan(h: usize, m: impl Into<Ratio>) -> Self {
        Self::new(h, m.into(), Offset::C)
    }

    pub fn catalan_bar(h: usize, m: impl Into<Ratio>) -> Self {
        Self::new(h, m.into(), Offset::Cbar)
    }

    fn new(h: usize, m: Ratio, offset: Offset) -> Self {
        assert!(h >= 1, "h must be positive");
        Self {
            h,
            m,
            offset,
            k_start: 0,
            base: Ratio::int(1),
            scale: Ratio::int(1),
            class_restriction: None,
        }
    }

    /// Start the sum at `k = 1`.
    pub fn from_one(mut self) -> Self {
        self.k_start = 1;
        self
    }

    pub fn with_base(mut self, base: Ratio) -> Self {
        self.base = base;
        self
    }

    pub fn with_scale(mut self, scale: Ratio) -> Self {
        self.scale = scale;
        self
    }

    pub fn restricted(mut self, r: i64) -> Self {
        self.class_restriction = Some(r);
        self
    }

    /// `(coefficient, d)` pairs expressing the summand through plain
    /// binomials.
    pub fn components(&self) -> Vec<(i64, i64)> {
        let h = self.h as i64;
        match self.offset {
            Offset::Plain(d) => vec![(1, d)],
            Offset::C => vec![(1, 0), (-h, -1)],
            Offset::Cbar => vec![(h, 0), (-1, 1)],
        }
    }

    /// Per-term ratio `base / m` modulo `p`.
    pub fn multiplier(&self, p: u64) -> Result<Residue> {
        if self.m.to_residue(p).map_or(true, |m| m.is_zero()) {
            return Err(Error::ZeroM(p));
        }
        self.base.mul(self.m.recip()).to_residue(p)
    }

    /// Value of the `k = 0` summand before weighting.
    fn k0_term(&self) -> i64 {
        self.components()
            .iter()
            .filter(|&&(_, d)| d == 0)
            .map(|&(c, _)| c)
            .sum()
    }

    fn admits(&self, k: i64, p: u64) -> bool {
        match self.class_restriction {
            Some(r) => (k - r).rem_euclid(p as i64 - 1) == 0,
            None => true,
        }
    }

    /// The sum through the recurrence: `O(h² log p^a)` per plain component,
    /// times `p − 1` when restricted to a residue class.
    pub fn fast(&self, pp: &PrimePowerModulus) -> Result<Residue> {
        let p = pp.p();
        let q = self.multiplier(p)?;
        let scale = self.scale.to_residue(p)?;
        let mut total = Residue::zero(p);
        if q.is_zero() {
            // only k = 0 survives
            if self.k_start == 0 && self.admits(0, p) {
                total = Residue::from_i64(self.k0_term(), p);
            }
            return Ok(scale * total);
        }
        let m_eff = q.inv()?;
        for (coef, d) in self.components() {
            let full = match self.class_restriction {
                None => plain_sum(self.h, m_eff, d, pp)?,
                Some(r) => {
                    // [p−1 | k−r] ≡ −Σ_x x^{r−k}
                    let mut acc = Residue::zero(p);
                    for x in 1..p {
                        let x = Residue::new(x, p);
                        acc += x.pow_i64(r.rem_euclid(p as i64 - 1))?
                            * plain_sum(self.h, m_eff * x, d, pp)?;
                    }
                    -acc
                }
            };
            total += full * coef;
        }
        if self.k_start == 1 && self.admits(0, p) {
            total -= Residue::from_i64(self.k0_term(), p);
        }
        Ok(scale * total)
    }
}

/// `Σ_{k<p^a} binom((h+1)k, k+d) m^{−k}` for any `d`, using
/// `binom(2k, k+d) = binom(2k, k−d)` when `h = 1`.
fn plain_sum(h: usize, m: Residue, d: i64, pp: &PrimePowerModulus) -> Result<Residue> {
    let d = if h == 1 { d.abs() } else { d };
    RecurrenceSpec::new(h, m)?.sum_extended(d, pp)
}

impl fmt::Display for SumDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = match self.offset {
            Offset::Plain(d) => format!("binom({}k,k{:+})", self.h + 1, d),
            Offset::C => format!("C{}", self.h),
            Offset::Cbar => format!("Cbar{}", self.h),
        };
        write!(f, "sum_k>={} {}/({})^k", self.k_start, term, self.m)?;
        if self.base != Ratio::int(1) {
            write!(f, "*({})^k", self.base)?;
        }
        if self.scale != Ratio::int(1) {
            write!(f, "*{}", self.scale)?;
        }
        if let Some(r) = self.class_restriction {
            write!(f, " [k=={r} mod p-1]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u64, a: u32) -> PrimePowerModulus {
        PrimePowerModulus::new(p, a).unwrap()
    }

    #[test]
    fn components_follow_subtraction_forms() {
        assert_eq!(SumDescriptor::catalan(3, 1).components(), [(1, 0), (-3, -1)]);
        assert_eq!(SumDescriptor::catalan_bar(3, 1).components(), [(3, 0), (-1, 1)]);
        assert_eq!(SumDescriptor::plain(2, 7, -1).components(), [(1, -1)]);
    }

    #[test]
    fn fast_examples() {
        let s = SumDescriptor::plain(2, 7, 0);
        assert_eq!(s.fast(&pp(5, 1)).unwrap().value(), 3);
        assert_eq!(SumDescriptor::plain(2, 1, 0).fast(&pp(7, 1)).unwrap().value(), 3);
        assert_eq!(SumDescriptor::plain(2, 0, 0).fast(&pp(7, 1)), Err(Error::ZeroM(7)));
        assert_eq!(SumDescriptor::plain(2, 14, 0).fast(&pp(7, 1)), Err(Error::ZeroM(7)));
        // 1 + 2 + 6 + 20 + 70 = 99
        assert_eq!(SumDescriptor::plain(1, 1, 0).fast(&pp(5, 1)).unwrap().value(), 4);
    }

    #[test]
    fn vanishing_multiplier_keeps_only_the_first_term() {
        let s = SumDescriptor::catalan_bar(3, 1).with_base(Ratio::new(27, 256));
        assert_eq!(s.fast(&pp(3, 2)).unwrap().value(), 0);
        assert!(s.from_one().fast(&pp(3, 2)).unwrap().is_zero());
        let s = SumDescriptor::catalan(3, 1).with_base(Ratio::new(27, 256));
        assert_eq!(s.fast(&pp(3, 1)).unwrap().value(), 1);
    }

    #[test]
    fn display() {
        let s = SumDescriptor::plain(2, Ratio::new(27, 4), 1).from_one().with_scale(Ratio::int(2));
        assert_eq!(s.to_string(), "sum_k>=1 binom(3k,k+1)/(27/4)^k*2");
        assert_eq!(
            SumDescriptor::catalan_bar(4, -1).restricted(2).to_string(),
            "sum_k>=0 Cbar4/(-1)^k [k==2 mod p-1]"
        );
    }
}
