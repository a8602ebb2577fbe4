//! End-to-end partitioning: structural decomposition, the robust
//! partition procedure, and the verified composition of the two.

mod ledger;
mod main_partition;
mod robmat_partition;
mod structural;

pub use ledger::{LedgerClause, ParameterLedger};
pub use main_partition::{
    partition_main, restrict_clusters, side_clusters, MainConfig, PipelineReport, ResidualClusters, StructuralSummary,
};
pub use robmat_partition::{partition_robmat, RobmatPartition, RobmatPartitionConfig, StageCounts};
pub use structural::{structural_decompose, BalanceCase, StructuralConfig, StructuralDecomposition, StructuralTrace};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covers::CoverError;
use crate::graph::GraphError;
use crate::matching::MatchingError;
use crate::regularity::RegularityError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("parameter ledger: {0}")]
    Ledger(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("{stage}: {detail}")]
    Stage { stage: String, detail: String },
    #[error("{stage}: inequality {name} fails ({lhs} vs {rhs})")]
    Inequality {
        stage: String,
        name: String,
        lhs: f64,
        rhs: f64,
    },
    #[error("output family rejected: {0}")]
    Validation(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub(crate) fn staged<E: std::fmt::Display>(stage: &str) -> impl Fn(E) -> PipelineError + '_ {
    move |e| PipelineError::Stage {
        stage: stage.to_string(),
        detail: e.to_string(),
    }
}

impl From<MatchingError> for PipelineError {
    fn from(e: MatchingError) -> Self {
        staged("matching")(e)
    }
}

impl From<RegularityError> for PipelineError {
    fn from(e: RegularityError) -> Self {
        staged("regularity")(e)
    }
}

impl From<CoverError> for PipelineError {
    fn from(e: CoverError) -> Self {
        staged("covers")(e)
    }
}

/// One asserted inequality, with both sides as evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub stage: String,
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Collects checks; in strict mode the first failure aborts.
#[derive(Debug, Clone, Default)]
pub(crate) struct Checks {
    pub strict: bool,
    pub list: Vec<Check>,
}

impl Checks {
    pub fn new(strict: bool) -> Self {
        Self {
            strict,
            list: Vec::new(),
        }
    }

    pub fn record(&mut self, stage: &str, name: &str, lhs: f64, rhs: f64, holds: bool) -> Result<(), PipelineError> {
        self.list.push(Check {
            stage: stage.into(),
            name: name.into(),
            lhs,
            rhs,
            holds,
        });
        if self.strict && !holds {
            return Err(PipelineError::Inequality {
                stage: stage.into(),
                name: name.into(),
                lhs,
                rhs,
            });
        }
        Ok(())
    }
}
