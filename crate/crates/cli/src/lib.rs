//! Batch front end for the fusion engine: declarative JSON documents in,
//! canonical fusion reports out, plus a verification mode that replays a
//! corpus of classic worked examples.

pub mod corpus;
pub mod document;
pub mod render;
pub mod runner;

pub use document::{load_document, DocError, Document, LoadedDocument, LoadedSources};
pub use runner::{inspect, run_fusion, OutputDocument};
