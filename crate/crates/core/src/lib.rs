//! Multi-entity Bayesian networks.
//!
//! An [`MTheory`](model::MTheory) is a set of template fragments (MFrags) written in a small
//! modeling language. Given a set of findings about concrete entities and a query, the theory
//! is grounded into a situation-specific Bayesian network ([`Ssbn`](grounding::Ssbn)) which is
//! then solved exactly by variable elimination.
//!
//! ```
//! use mebn::{dsl, grounding, inference};
//!
//! let model = dsl::parse_model(mebn::corpus::OIL_SPILL_MODEL).unwrap().value;
//! let findings = dsl::parse_findings(mebn::corpus::TWO_SPILL_FINDINGS, &model).unwrap().value;
//! let query = dsl::parse_query("SeverityLevel(region_1)?", &model, findings.pool()).unwrap();
//! let ssbn = grounding::build_ssbn(&model, &findings, &query).unwrap();
//! assert_eq!(ssbn.len(), 9);
//! let posterior = inference::posterior_ve(&ssbn).unwrap();
//! assert_eq!(posterior.argmax(), "VerySerious");
//! ```

pub mod cli;
pub mod corpus;
pub mod dsl;
pub mod grounding;
pub mod inference;
pub mod lpd;
pub mod model;

pub use grounding::{build_ssbn, RvInstance, Ssbn};
pub use inference::{posterior_enumerate, posterior_ve, Posterior};
pub use model::{FindingSet, MTheory, Query};
