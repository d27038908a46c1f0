//! Truncated binomial and higher-order Catalan sums modulo primes, computed
//! by enumeration, through a linear recurrence, and from closed forms.

pub mod cubicres;
pub mod descriptor;
pub mod error;
pub mod linrec;
pub mod lucas;
pub mod modarith;
pub mod oracle;
pub mod polyfield;
pub mod theorems;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/recurrence.md")]
    struct Recurrence;
    #[doc = include_str!("../../../book/src/oracle.md")]
    struct Oracle;
    #[doc = include_str!("../../../book/src/cubic-classes.md")]
    struct CubicClasses;
    #[doc = include_str!("../../../book/src/closed-forms.md")]
    struct ClosedForms;
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/command-line.md")]
    struct CommandLine;
}
