//! Decision rainforests, their compiled disjoint-union trees, structural
//! validation and ensemble planning.

mod dubt;
mod forest;
mod plan;
mod validate;

pub use dubt::{DisjointUnionGroup, Dubt, DubtError, DubtNode};
pub use forest::{
    Bct, BctRef, ClassKind, ClassNode, CompoundRule, DecisionRainforest, ExclusionStyle, PreprocessAction,
    PreprocessRule, SubsidiaryRelation, Tree, TreeRole,
};
pub use plan::{compute_model_plan, model_id, ModelPlan, PlanError, Submodel, Task};
pub use validate::{validate_rainforest, ValidationError, ValidationKind};
