//! SVG wireframe preview: one line per quad edge, the singular vertex
//! marked with a filled dot.

use std::io::Write;

use super::IoError;
use crate::mesh::QuadMesh;

fn coord(x: f64) -> String {
    format!("{x:.6}")
}

/// Writes an SVG 1.1 preview of a positioned mesh. Segments whose endpoints
/// coincide (degenerate embeddings of collapsed chains) are skipped.
pub fn write_svg_preview(mesh: &QuadMesh, out: &mut dyn Write) -> Result<(), IoError> {
    let positions = mesh.positions.as_ref().ok_or(IoError::Unpositioned)?;

    // Flip y so the mathematical orientation reads naturally on screen.
    let flipped: Vec<[f64; 2]> = positions.iter().map(|p| [p[0], -p[1]]).collect();
    let mut min = [f64::INFINITY; 2];
    let mut max = [f64::NEG_INFINITY; 2];
    for p in &flipped {
        for d in 0..2 {
            min[d] = min[d].min(p[d]);
            max[d] = max[d].max(p[d]);
        }
    }
    let extent = (max[0] - min[0]).max(max[1] - min[1]).max(1e-9);
    let margin = 0.05 * extent;
    let stroke = 0.006 * extent;
    let radius = 0.02 * extent;

    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
        coord(min[0] - margin),
        coord(min[1] - margin),
        coord(max[0] - min[0] + 2.0 * margin),
        coord(max[1] - min[1] + 2.0 * margin)
    )?;
    writeln!(
        out,
        r##"<g stroke="#1f3552" stroke-width="{}" stroke-linecap="round">"##,
        coord(stroke)
    )?;
    for (a, b) in mesh.edge_set() {
        let p = flipped[a];
        let q = flipped[b];
        if p == q {
            continue;
        }
        writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            coord(p[0]),
            coord(p[1]),
            coord(q[0]),
            coord(q[1])
        )?;
    }
    writeln!(out, "</g>")?;
    if let Some(v) = mesh.singular_vertex {
        let p = flipped[v];
        writeln!(
            out,
            r##"<circle cx="{}" cy="{}" r="{}" fill="#c62828"/>"##,
            coord(p[0]),
            coord(p[1]),
            coord(radius)
        )?;
    }
    writeln!(out, "</svg>")?;
    Ok(())
}
