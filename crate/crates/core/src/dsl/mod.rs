//! Text formats: MTheory model files, findings files and queries.
//!
//! Model grammar:
//!
//! ```text
//! model      := { decl } { mfrag }
//! decl       := "entity" ID | "states" ID "{" ID { "," ID } "}"
//!             | "random" ID "(" ID { "," ID } ")" "->" (ID | "entity" ID)
//! mfrag      := "mfrag" ID "{" { ovar | context | input | resident } "}"
//! ovar       := "ovar" ID ":" ID
//! context    := "context" ( "isA" "(" ID "," ID ")" | term "=" term )
//! input      := "input" term
//! resident   := "resident" term "{" [ table | rules ] "}"
//! table      := "table" "[" term { "," term } "]" "{" { row } "}" | "prior" probvec
//! row        := "(" ID { "," ID } ")" ":" probvec
//! probvec    := "[" NUMBER { "," NUMBER } "]"
//! rules      := "rules" [ "[" term { "," term } "]" ] "{" { "if" cond ":" probvec } "else" ":" probvec "}"
//! cond       := conj { "OR" conj }
//! conj       := atom { "AND" atom }
//! atom       := ("ANY" | "ALL") "(" ID "," ID ")" | "COUNT" "(" ID "," ID ")" ">=" NUMBER | "(" cond ")"
//! term       := ID "(" ID { "," ID } ")" | ID
//! ```
//!
//! An empty resident body marks a finding-resolved relation such as `Location`. A rule list
//! without a parent list takes the MFrag's input nodes as parents. `#` comments run to end of
//! line in all three formats.

mod diag;
mod findings;
mod lexer;
mod model;
mod serialize;

pub use diag::{Diagnostics, ParseDiagnostic, Parsed, Severity, SourceSpan};
pub use findings::{parse_findings, parse_findings_named, parse_query, parse_query_unresolved};
pub use model::{parse_model, parse_model_named};
pub use serialize::serialize_model;
