//! The chapters of `book/`, compiled as doc-tests so every snippet runs
//! against the current library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/values.md")]
pub mod values {}
#[doc = include_str!("../../../book/src/symplectic.md")]
pub mod symplectic {}
#[doc = include_str!("../../../book/src/heisenberg.md")]
pub mod heisenberg {}
#[doc = include_str!("../../../book/src/kernels.md")]
pub mod kernels {}
#[doc = include_str!("../../../book/src/weil.md")]
pub mod weil {}
#[doc = include_str!("../../../book/src/coherence.md")]
pub mod coherence {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
