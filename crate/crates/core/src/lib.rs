// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

//! Γ-distributed evolution-time decoherence for trapped-ion gates: averaged
//! process operators, gate fidelities, master-equation comparison and
//! feasibility bounds.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod config;
pub mod decoherence;
pub mod dynamics;
pub mod error;
pub mod fidelity;
pub mod gates;
pub mod report;
pub mod statemath;
pub mod sweep;
pub mod validation;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/gamma-model.md")]
    mod gamma_model {}
    #[doc = include_str!("../../../book/src/gates.md")]
    mod gates {}
    #[doc = include_str!("../../../book/src/fidelity.md")]
    mod fidelity {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/sweeps.md")]
    mod sweeps {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
