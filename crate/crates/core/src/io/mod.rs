//! On-disk diagram documents and Graphviz export.

mod document;
mod dot;

pub use document::{from_json, to_json, DiagramDocument, DocEndpoint, DocNode, DocumentError, FORMAT_VERSION};
pub use dot::to_dot;
