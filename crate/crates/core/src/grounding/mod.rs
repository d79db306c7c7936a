//! Grounding an MTheory into a situation-specific Bayesian network (SSBN).

mod build;
mod context;
mod export;
mod ssbn;

use thiserror::Error;

pub use crate::model::RvInstance;
pub use build::{build_ssbn, ground, Grounding, GroundingOptions, DEFAULT_NODE_CAP};
pub use context::{enumerate_bindings, evaluate_context_node, Binding, ContextValue, ContextWarning};
pub use export::{to_dot, to_json, SsbnDocument};
pub use ssbn::{prune_barren, NodeSpec, Ssbn, SsbnError, SsbnNode};

#[derive(Debug, Error)]
pub enum GroundingError {
    #[error("unresolved query {query}: {reason}")]
    UnresolvedQuery { query: String, reason: String },
    #[error("'{0}' has no home MFrag")]
    NoHome(String),
    #[error("{0} is a finding-resolved relation, not a chance variable")]
    NotAChanceNode(String),
    #[error("no binding satisfies the context of MFrag {mfrag} for {instance}")]
    ContextUnsatisfied { instance: String, mfrag: String },
    #[error("grounded dependency cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("grounding exceeds the node cap of {cap}")]
    Explosion { cap: usize },
    #[error("{instance}: {source}")]
    Lpd {
        instance: String,
        #[source]
        source: crate::lpd::LpdError,
    },
    #[error(transparent)]
    Ssbn(#[from] SsbnError),
}
