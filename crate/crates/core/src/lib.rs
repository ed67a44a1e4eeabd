pub mod bath;
pub mod dynamics;
pub mod error;
pub mod jumps;
pub mod liouvillian;
pub mod ops;
pub mod system;

pub use error::{Error, Result};

// The guide's chapters, compiled so that their snippets run as doctests.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/system.md")]
    pub mod system {}
    #[doc = include_str!("../../../book/src/baths.md")]
    pub mod baths {}
    #[doc = include_str!("../../../book/src/jumps.md")]
    pub mod jumps {}
    #[doc = include_str!("../../../book/src/generators.md")]
    pub mod generators {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    pub mod dynamics {}
}
