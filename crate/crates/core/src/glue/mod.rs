//! Two `d`-ary trees glued along a random matching of their marked leaves,
//! repaired by forward switchings until no short cycle remains, then closed
//! up into a regular graph with degree-fixing gadgets. The antisymmetric
//! lift of a symmetric tree eigenvector is an exact eigenvector of the result.

mod assemble;
mod gadget;
mod state;

use thiserror::Error;

use crate::graph::{Cycle, GraphError};
use crate::tree::TreeError;

pub use assemble::{
    assemble, AssembleParams, Construction, ConstructionReport, GadgetGirth, GadgetMode, GadgetSummary,
    LambdaSelector, Layout,
};
pub use gadget::{high_girth_regular, make_gadget, moore_bound, Gadget, GadgetConfig, GadgetSpec, RegularGraphStats};
pub use state::{random_matching, GlueState, RepairConfig, RepairReport, Separation, SwitchRecord};

/// How a failure should be reported to a caller or user.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Budget,
    Internal,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GlueError {
    #[error("vertex sets of sizes {0} and {1} cannot be matched")]
    SizeMismatch(usize, usize),
    #[error("cycle threshold L = {l} exceeds 2c·log_d n = {limit:.3}")]
    ThresholdTooLarge { l: usize, limit: f64 },
    #[error("no eligible matching edge for the switch (switching starved)")]
    Starved,
    #[error("target cycle is not in the short-cycle inventory")]
    UnknownCycle,
    #[error("repair budget exhausted after {restarts} restarts; {} short cycles remain", residual.len())]
    RepairBudget { restarts: usize, residual: Vec<Cycle> },
    #[error("invalid gadget request: {0}")]
    GadgetSpec(String),
    #[error("gadget generation exhausted its budget at girth target {target}; try a smaller girth target")]
    GadgetBudget { target: usize },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        source: Box<GlueError>,
    },
}

impl GlueError {
    pub fn class(&self) -> ErrorClass {
        match self {
            Self::Starved | Self::RepairBudget { .. } | Self::GadgetBudget { .. } => ErrorClass::Budget,
            Self::Graph(GraphError::CycleBudget { .. }) => ErrorClass::Budget,
            Self::Invariant(_) | Self::UnknownCycle => ErrorClass::Internal,
            Self::Graph(GraphError::ContractionLoop(..) | GraphError::ContractionParallel(..)) => ErrorClass::Internal,
            Self::Stage { source, .. } => source.class(),
            _ => ErrorClass::Validation,
        }
    }

    /// Name of the pipeline stage that failed, if known.
    pub fn stage(&self) -> Option<&'static str> {
        match self {
            Self::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }

    pub(crate) fn at(stage: &'static str) -> impl FnOnce(GlueError) -> GlueError {
        move |e| match e {
            e @ GlueError::Stage { .. } => e,
            e => GlueError::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, GlueError>;
