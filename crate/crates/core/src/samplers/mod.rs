//! Random subgroup laws and the two perturbation constructions.

pub mod enumerate;
pub mod law;
pub mod normalizer;
pub mod poulsen;
pub mod surgery;

pub use enumerate::{
    enumerate_normalizer_law, self_normalizing_fraction, BaseRoot, Enumeration, GraphLaw,
};
pub use law::{Dirac, Law, SubgroupLaw, UniformRoot};
pub use normalizer::{mark, normalizer_finite, NormalizerLaw, NormalizerOracle, RootSlot};
pub use poulsen::{PoulsenGamma, PoulsenLaw, PoulsenOracle};
pub use surgery::{inverse_surgery, surgery};
