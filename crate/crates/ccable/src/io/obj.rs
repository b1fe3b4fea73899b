//! Wavefront OBJ writer for positioned quad meshes, plus a minimal reader
//! used to check that the output loads back with the same counts.

use std::io::Write;

use super::IoError;
use crate::mesh::QuadMesh;
use crate::types::{PatchSpec, SubdivisionVector};

/// Decimal rendering with 9 significant digits.
fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (9 - 1 - magnitude).clamp(0, 30) as usize;
    format!("{x:.decimals$}")
}

fn csv(values: &[i64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Writes the mesh as OBJ: one leading comment recording the instance, then
/// `v x y 0.0` per vertex in index order and 1-based `f` quads, never
/// triangulated.
pub fn write_mesh_obj(
    mesh: &QuadMesh,
    spec: &PatchSpec,
    s: &SubdivisionVector,
    out: &mut dyn Write,
) -> Result<(), IoError> {
    let positions = mesh.positions.as_ref().ok_or(IoError::Unpositioned)?;
    writeln!(
        out,
        "# patch n={} edges={} s={}",
        spec.n(),
        csv(spec.edges()),
        csv(s.values())
    )?;
    for p in positions {
        writeln!(out, "v {} {} 0.0", sig9(p[0]), sig9(p[1]))?;
    }
    for q in &mesh.quads {
        writeln!(out, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1)?;
    }
    Ok(())
}

/// What the minimal reader recovers from an OBJ file.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedObj {
    pub positions: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
}

/// Reads `v` and `f` lines (1-based indices, no negatives), ignoring
/// comments and anything else.
pub fn read_obj(text: &str) -> Result<ParsedObj, IoError> {
    let mut positions = Vec::new();
    let mut faces = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        let malformed = |detail: String| IoError::Malformed {
            context: format!("OBJ line {}", number + 1),
            detail,
        };
        match parts.next() {
            Some("v") => {
                let coords: Result<Vec<f64>, _> = parts.map(str::parse).collect();
                let coords = coords.map_err(|e| malformed(format!("bad coordinate: {e}")))?;
                if coords.len() < 3 {
                    return Err(malformed(format!("{} coordinates", coords.len())));
                }
                positions.push([coords[0], coords[1], coords[2]]);
            }
            Some("f") => {
                let mut face = Vec::new();
                for token in parts {
                    let index_part = token.split('/').next().unwrap_or(token);
                    let index: i64 = index_part
                        .parse()
                        .map_err(|e| malformed(format!("bad index {token:?}: {e}")))?;
                    if index < 1 {
                        return Err(malformed(format!("unsupported index {index}")));
                    }
                    face.push(index as usize - 1);
                }
                faces.push(face);
            }
            _ => {}
        }
    }
    Ok(ParsedObj { positions, faces })
}
