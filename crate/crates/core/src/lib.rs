//! Meta-dependence between conditional-independence (CI) tests.
//!
//! For a zero-mean Gaussian, CIMD measures how much the conditional mutual information
//! of one CI test changes when the distribution is projected (in the KL sense) onto the
//! independence asserted by another test. FS-CID is its finite-sample counterpart: the
//! covariance of two Fisher-Z acceptance indicators across replicated small datasets.
//!
//! Building blocks:
//! - [`gaussian`]: labeled covariances, partial correlation, CMI, Gaussian KL.
//! - [`projection`]: closed-form projection onto `A ⊥ B | C`.
//! - [`dependence`]: CIMD and CIMD-lim; test enumeration.
//! - [`sem`]: linear SEMs, standardization and sampling.
//! - [`citest`], [`fscid`]: Fisher-Z testing and replicated FS-CID.
//! - [`mle`], [`graph`]: projections by composing per-variable fits over a DAG.
//! - [`faithfulness`]: λ-strong faithfulness audit.
//! - [`sweep`], [`config`], [`cli`]: parameter grids, pair matrices, config files, CLI.
//!
//! ```
//! use cimd::{cimd, three_node_preset, CiTest};
//!
//! let cov = three_node_preset(0.5, 0.2, 0.3)?.covariance();
//! let t1 = CiTest::marginal("A", "C")?;
//! let t2 = CiTest::marginal("B", "C")?;
//! println!("{:.4}", cimd(&cov, &t1, &t2)?.raw);
//! # Ok::<(), cimd::Error>(())
//! ```

pub mod citest;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod dependence;
pub mod error;
pub mod faithfulness;
pub mod fscid;
pub mod gaussian;
pub mod graph;
mod linalg;
pub mod mle;
pub mod projection;
pub mod rng;
pub mod sem;
pub mod sweep;

pub use citest::{fisher_z_test, TestOutcome};
pub use dataset::Dataset;
pub use dependence::{cimd, cimd_lim, enumerate_tests, CimdValue};
pub use error::{Error, Result};
pub use fscid::{run_fs_cid, FsCidReport, ReplicateSource};
pub use gaussian::{
    conditional_mutual_information, gaussian_kl, partial_correlation, CiTest, LabeledCovariance,
};
pub use graph::Dag;
pub use projection::{project_ci, ProjectionResult};
pub use sem::{three_node_preset, LinearSem};
