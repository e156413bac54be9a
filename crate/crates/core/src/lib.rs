pub mod batch;
pub mod cli;
pub mod codes;
pub mod error;
pub mod field;
pub mod gf2;
pub mod harness;
pub mod packing;
pub mod recovery;
pub mod rng;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields-and-codes.md")]
    mod fields_and_codes {}
    #[doc = include_str!("../../../book/src/recovery-sets.md")]
    mod recovery_sets {}
    #[doc = include_str!("../../../book/src/batch-verification.md")]
    mod batch_verification {}
    #[doc = include_str!("../../../book/src/lifts.md")]
    mod lifts {}
    #[doc = include_str!("../../../book/src/reports.md")]
    mod reports {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
