//! The patch input document: a JSON file carrying the edge counts plus
//! optional mode, boundary polylines and family pick.

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::mesh::BoundaryGeometry;
use crate::types::{Mode, PatchSpec};

/// On-disk form of a problem instance.
///
/// ```json
/// {
///   "n": 5,
///   "edges": [6, 4, 3, 5, 4],
///   "mode": "strict",
///   "boundary": [[[0.0, 1.0], ...], ...],
///   "pick": [1, 1]
/// }
/// ```
///
/// `n` is optional and checked against the edges list when present. The
/// boundary, when present, lists one polyline per side with e_i + 1 points,
/// consecutive sides sharing their corner point exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchInputDocument {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    pub edges: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub boundary: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pick: Option<(i64, i64)>,
}

/// A validated input: the patch plus whatever options the document carried.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedInput {
    pub spec: PatchSpec,
    pub mode: Option<Mode>,
    pub boundary: Option<BoundaryGeometry>,
    pub pick: Option<(i64, i64)>,
}

/// Parses and validates a patch input document.
pub fn parse_patch_input(text: &str) -> Result<ParsedInput, IoError> {
    let doc: PatchInputDocument = serde_json::from_str(text)?;
    let spec = PatchSpec::new(doc.edges)?;
    if let Some(n) = doc.n {
        if n != spec.n() {
            return Err(IoError::SideCountMismatch { n, got: spec.n() });
        }
    }
    let boundary = match doc.boundary {
        None => None,
        Some(sides) => {
            if sides.len() != spec.n() {
                return Err(IoError::SideCountMismatch {
                    n: spec.n(),
                    got: sides.len(),
                });
            }
            for (side, polyline) in sides.iter().enumerate() {
                let expected = spec.edges()[side] as usize + 1;
                if polyline.len() != expected {
                    return Err(IoError::PolylineLength {
                        side,
                        expected,
                        got: polyline.len(),
                    });
                }
            }
            for side in 0..spec.n() {
                let next = (side + 1) % spec.n();
                if sides[side].last() != sides[next].first() {
                    return Err(IoError::PolylineGap { side, next });
                }
            }
            Some(BoundaryGeometry { sides })
        }
    };
    Ok(ParsedInput {
        spec,
        mode: doc.mode,
        boundary,
        pick: doc.pick,
    })
}
