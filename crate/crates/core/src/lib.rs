//! Finite orthomodular lattices, their linear endomaps, and Foulis quantales.

pub mod error;
pub mod lattice;
pub mod report;
mod scan;

pub use error::{Error, Result};
pub use lattice::catalog::catalog;
pub use lattice::{build_lattice, check_oml, downset_oml, FiniteLattice, FiniteOml, SubOml};
pub use report::{CheckReport, Violation};
pub mod enumerate;
pub mod linmap;

pub use enumerate::{enumerate_lin, DEFAULT_CAP};
pub use linmap::{compose, factorize_sasaki, is_linear, join_maps, kernel, verify_adjoint_pair, LinMap};
pub mod quantale;

pub use quantale::{check_involutive, check_quantale, lin_quantale, FinQuantale, LinQuantale, QElementView};
pub mod foulis;
pub use foulis::{
    check_foulis, check_projection_shortcut, check_star_props, derive_sai, foulis_from_lin, hom_h,
    module_action, roundtrip_iso, sasaki_action, sasaki_oml, FoulisHom, FoulisQuantale, LinFoulis,
    SasakiOml,
};
pub mod qmodule;
pub use qmodule::{
    check_left_module, check_right_two_module, lin_module, module_from_lin, sasaki_module,
    sasaki_module_on, ModuleAction,
};
pub mod io;
pub mod verify;
pub use verify::{verify, Selector, VerifyReport};
