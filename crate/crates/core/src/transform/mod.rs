//! Problem transformation: turn flat, hierarchical and DAG-shaped
//! classification problems into decision rainforests, restructure BCTs and
//! compile rainforests into disjoint-union-based trees.

mod builder;
mod compile;
mod dag;
mod exclusion;
mod flat;
mod split;

use alloc::string::String;
use alloc::vec::Vec;

use crate::taxonomy::ValidationError;

pub use compile::build_dubt;
pub use dag::{transform_dag, transform_dag_with, DagProblem, DagTransform, UnionClass};
pub use exclusion::insert_exclusion_classes;
pub use flat::{transform_flat, transform_hierarchical, FlatKind, FlatProblem, HmcClass, HmcLevel, HmcProblem};
pub use split::{split_bct, split_oversized};

/// How generated auxiliary superclasses are named.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AuxiliaryNaming {
    /// `any_of_b_c`
    #[default]
    AnyOf,
    /// `(b/c)`
    Parenthesized,
}

/// How generated negative classes are named.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NegativeNaming {
    /// `no_d`
    #[default]
    NoPrefix,
    /// `-d`
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Naming {
    pub auxiliary: AuxiliaryNaming,
    pub negative: NegativeNaming,
}

impl Naming {
    pub fn negative(&self, class: &str) -> String {
        match self.negative {
            NegativeNaming::NoPrefix => crate::name::negative_of(class),
            NegativeNaming::Minus => {
                let mut s = String::from("-");
                s.push_str(class);
                s
            }
        }
    }

    pub fn auxiliary(&self, members: &[&str]) -> String {
        match self.auxiliary {
            AuxiliaryNaming::AnyOf => {
                let mut s = String::from("any_of");
                for m in members {
                    s.push('_');
                    s.push_str(m);
                }
                s
            }
            AuxiliaryNaming::Parenthesized => {
                let mut s = String::from("(");
                s.push_str(&members.join("/"));
                s.push(')');
                s
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("input graph has a cycle through {0:?}")]
    CyclicInput(Vec<String>),
    #[error("input problem has no classes")]
    EmptyInput,
    #[error("unknown BCT `{0}`")]
    UnknownBct(String),
    #[error("invalid grouping: {0}")]
    InvalidGrouping(String),
    #[error("rainforest is invalid ({} errors)", .0.len())]
    InvalidForest(Vec<ValidationError>),
    #[error("BCT `{0}` is not collectively exhaustive; insert exclusion classes first")]
    NonExhaustiveBct(String),
}
