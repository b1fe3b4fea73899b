//! Serialization: patch input documents, outcome and scan reports (JSON and
//! plain text), Wavefront OBJ meshes and SVG previews.
//!
//! Every writer is deterministic: identical inputs produce byte-identical
//! output. JSON documents round-trip through serde without loss.

mod input;
mod obj;
mod report;
mod svg;

pub use input::{parse_patch_input, ParsedInput, PatchInputDocument};
pub use obj::{read_obj, write_mesh_obj, ParsedObj};
pub use report::{
    outcome_document, write_oracle_report, write_outcome_report, write_scan_report,
    FamilyDocument, OracleDocument, OutcomeDocument, ReportFormat, ScanDocument, SpecEcho,
};
pub use svg::write_svg_preview;

use thiserror::Error;

use crate::types::SolveError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("mesh has no positions; embed it before writing")]
    Unpositioned,
    #[error("invalid document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("edges list has {got} entries but the document says n = {n}")]
    SideCountMismatch { n: usize, got: usize },
    #[error("side {side} polyline has {got} points, expected {expected}")]
    PolylineLength {
        side: usize,
        expected: usize,
        got: usize,
    },
    #[error("side {side} polyline does not end where side {next} begins")]
    PolylineGap { side: usize, next: usize },
    #[error("{context}: {detail}")]
    Malformed { context: String, detail: String },
    #[error(transparent)]
    Spec(#[from] SolveError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
