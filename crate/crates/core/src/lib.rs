//! Selective Bayesian Forest Classifier.
//!
//! Features are split into a signal group (every node has the class label as
//! an extra parent) and a noise group (independent of the class). Within each
//! group the features form a forest of rooted trees. A Markov chain over such
//! partitioned forests is driven by two kernels:
//!
//! - **Switch Trees**: a Metropolis flip of whole trees between groups.
//! - **Reassign Subtree**: a Gibbs update of one node's parent, preceded by a
//!   random re-rooting of its tree.
//!
//! Thinned samples are then used for Bayesian model averaged classification,
//! feature relevance ranking and an average-graph summary exported as DOT.
//!
//! Module map:
//!
//! - [`dataio`]: delimited input, missing values, MDLP / binary discretization, CV folds
//! - [`graph`]: the partitioned forest and its mutations
//! - [`score`]: structure prior and Dirichlet-multinomial family scores
//! - [`sampler`]: the chain, traces and the exact-posterior oracle
//! - [`inference`]: prediction, rankings, average graph, DOT / JSON export
//! - [`cli`]: the `sbfc` command line front end

pub mod cli;
pub mod dataio;
pub mod error;
pub mod graph;
pub mod inference;
pub mod sampler;
pub mod score;

pub use dataio::{Dataset, Discretization, RawTable};
pub use error::{Error, Result};
pub use graph::{Graph, Group, ParentSet, TreeId};
pub use inference::{AverageGraph, Prediction, Predictor};
pub use sampler::{run_chain, ChainState, SampleTrace, SamplerConfig};
pub use score::{FamilyScoreCache, Hyperparams};
