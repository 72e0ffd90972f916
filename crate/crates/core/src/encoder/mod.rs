//! Encoding of symbolic configurations as subgroups of a free group.

pub mod psi;
pub mod retract;
pub mod subshift;

pub use psi::{decode, decode_view, phi, phi_inverse, PsiOracle};
pub use retract::{check_invariant, translate_set_l, uniform_on_orbit, LambdaKey, XSpace};
pub use subshift::{emit_subshift, parse_subshift, Subshift, SubshiftPoint};
