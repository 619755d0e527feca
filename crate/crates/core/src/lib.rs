pub mod classify;
pub mod cocycle;
pub mod corpus;
pub mod crossed;
pub mod error;
pub mod formulas;
pub mod golden;
pub mod lifting;
pub mod group;
pub mod io;
pub mod nerve;
pub mod report;
pub mod search;

pub use crossed::{CrossedModule, CrossedModuleMorphism, TwoCrossedModule, TwoCrossedModuleMorphism};
pub use error::{Error, Result};
pub use nerve::{Nerve, NerveMap};
pub use group::{FiniteGroup, GroupAction, GroupHom, Subgroup};
pub use report::{ValidationReport, Violation};
