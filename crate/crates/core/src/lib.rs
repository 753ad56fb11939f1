//! Dissension vectors: measurement-based multipartite correlation measures for
//! qubit density operators.

pub mod channels;
pub mod dissension;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod mutualinfo;
pub mod optim;
pub mod par;
pub mod qformalism;
pub mod states;

pub use dissension::{
    average_dissension, build_expression, discord_decomposition, discord_vector, dissension, dissension_function,
    dissension_vector, evaluate_expression, ConditionedExpression, DiscordVector, DissensionResult, DissensionSpec,
    DissensionVector, Objective, Track,
};
pub use entropy::{relative_entropy, subsystem_entropy, von_neumann};
pub use error::{Error, Result};
pub use measurement::{BasisFamily, BasisParams, MeasurementAssignment, ProjectiveBasis};
pub use mutualinfo::{binding_information, bipartite_mi, interaction_information, total_correlation, Partition};
pub use optim::{grid_oracle, minimize, OptimizerConfig};
pub use qformalism::{mix, DensityOperator, Ket, QubitLabel, Register};
