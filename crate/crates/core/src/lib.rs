pub mod error;
pub mod guards;
pub mod perm;

mod chain;
pub mod group;
pub mod hom;
mod search;
pub mod structure;
pub mod action;
pub mod pairs;
pub mod report;
pub mod graph;
pub mod local;
pub mod amalgam;
pub mod fiber_product;
pub mod verify;

pub use error::{Error, Result};
pub use group::{PermGroup, SubgroupRelation};
pub use guards::{guards, with_guards, Guards};
pub use hom::{coset_action, ActionHom, CosetAction};
pub use perm::Permutation;
