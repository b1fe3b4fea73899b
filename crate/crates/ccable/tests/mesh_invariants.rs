//! Mesh construction invariants over exhaustive instance boxes: exact
//! count formulas, manifoldness, orientation, and the valency profile
//! demanded by each singularity class.

use ccable::general::enumerate_solutions;
use ccable::mesh::{build_topology, embed_geometry, mesh_stats, synthesize_boundary, validate_mesh, MeshStats, QuadMesh};
use ccable::scan::{solve_auto, ScanRange};
use ccable::types::{Mode, PatchSpec, SingularityClass, SubdivisionVector};

fn check_counts(spec: &PatchSpec, s: &SubdivisionVector, mesh: &QuadMesh, stats: &MeshStats) {
    let n = spec.n() as isize;
    let f: i64 = (0..n).map(|i| s.get(i) * s.get(i + 1)).sum();
    let b = spec.total_edges();
    assert_eq!(stats.quad_count as i64, f, "F = sum of region grids");
    assert_eq!(mesh.boundary_edge_count() as i64, b);
    assert_eq!(stats.vertex_count as i64, f + b / 2 + 1, "V = F + B/2 + 1");
    assert_eq!(stats.edge_count as i64, (4 * f + b) / 2, "E = (4F + B)/2");
    assert_eq!(stats.euler_characteristic, 1);
}

fn check_profile(spec: &PatchSpec, s: &SubdivisionVector, mesh: &QuadMesh, stats: &MeshStats) {
    let n = spec.n();
    if n == 4 {
        assert!(stats.interior_irregular.is_empty());
        assert!(stats.boundary_irregular.is_empty());
        assert!(stats.corner_irregular.is_empty());
        return;
    }
    let singular = mesh.singular_vertex.expect("non-grid meshes tag the center");
    match s.classify() {
        SingularityClass::Interior => {
            assert_eq!(stats.interior_irregular, vec![(singular, n)]);
            assert!(stats.boundary_irregular.is_empty());
            assert!(stats.corner_irregular.is_empty());
        }
        SingularityClass::Boundary { .. } => {
            assert!(stats.interior_irregular.is_empty());
            assert_eq!(stats.boundary_irregular, vec![(singular, n - 1)]);
            assert!(stats.corner_irregular.is_empty());
        }
        SingularityClass::Corner { corner } => {
            assert!(stats.interior_irregular.is_empty());
            assert!(stats.boundary_irregular.is_empty());
            assert_eq!(stats.corner_irregular, vec![(singular, n - 2)]);
            assert_eq!(mesh.corner_vertices[corner], singular);
        }
        // Multi-zero patterns carry no valency-profile contract; only the
        // structural checks above apply.
        SingularityClass::Degenerate { .. } => {}
    }
}

fn sweep_box(n: usize, e_min: i64, e_max: i64, mode: Mode) {
    let range = ScanRange {
        n,
        e_min,
        e_max,
        mode,
    };
    let total = range.instance_count() as u64;
    let mut meshes = 0u64;
    for index in 0..total {
        let spec = range.instance(index);
        let outcome = solve_auto(&spec, mode).unwrap();
        for s in enumerate_solutions(&outcome, usize::MAX) {
            let mesh = build_topology(&spec, &s).unwrap();
            let violations = validate_mesh(&mesh);
            assert!(
                violations.is_empty(),
                "edges {:?} s {:?}: {violations:?}",
                spec.edges(),
                s.values()
            );
            let stats = mesh_stats(&mesh);
            check_counts(&spec, &s, &mesh, &stats);
            check_profile(&spec, &s, &mesh, &stats);
            meshes += 1;
        }
    }
    assert!(meshes > 0, "box n={n} [{e_min}..{e_max}] {mode:?} was vacuous");
}

#[test]
fn strict_boxes_build_valid_meshes() {
    sweep_box(2, 2, 6, Mode::Strict);
    sweep_box(3, 2, 5, Mode::Strict);
    sweep_box(4, 2, 4, Mode::Strict);
    sweep_box(5, 2, 4, Mode::Strict);
    sweep_box(6, 2, 3, Mode::Strict);
    sweep_box(7, 2, 3, Mode::Strict);
    sweep_box(8, 2, 3, Mode::Strict);
}

#[test]
fn non_strict_boxes_build_valid_meshes() {
    sweep_box(2, 1, 6, Mode::NonStrict);
    sweep_box(3, 1, 5, Mode::NonStrict);
    sweep_box(4, 1, 4, Mode::NonStrict);
    sweep_box(5, 1, 3, Mode::NonStrict);
    sweep_box(6, 1, 3, Mode::NonStrict);
    sweep_box(7, 1, 2, Mode::NonStrict);
    sweep_box(8, 1, 2, Mode::NonStrict);
}

#[test]
fn non_strict_twelve_gon_degenerates_still_build() {
    // Exercises family members with four zeros away from the closed forms.
    sweep_box(12, 1, 2, Mode::NonStrict);
}

#[test]
fn quadrilateral_members_are_one_mesh() {
    let spec = PatchSpec::new(vec![3, 5, 3, 5]).unwrap();
    let outcome = solve_auto(&spec, Mode::NonStrict).unwrap();
    let members = enumerate_solutions(&outcome, usize::MAX);
    assert_eq!(members.len(), 6 * 4);
    let first = build_topology(&spec, &members[0]).unwrap();
    for s in &members {
        assert_eq!(build_topology(&spec, s).unwrap(), first);
    }
    let stats = mesh_stats(&first);
    assert_eq!(stats.quad_count, 15);
}

#[test]
fn rotated_instances_are_isomorphic() {
    for (edges, s) in [
        (vec![6, 4, 3, 5, 4], vec![3, 2, 1, 1, 4]),
        (vec![4, 2, 2], vec![0, 2, 2]),
        (vec![2, 2, 2, 4, 2], vec![0, 0, 2, 2, 2]),
        (vec![4, 3, 4, 3, 4, 3, 4, 3], vec![1, 1, 2, 3, 1, 1, 2, 3]),
    ] {
        let spec = PatchSpec::new(edges.clone()).unwrap();
        let s = SubdivisionVector::new(s);
        let base = mesh_stats(&build_topology(&spec, &s).unwrap());
        for r in 1..spec.n() {
            let rotated =
                mesh_stats(&build_topology(&spec.rotated(r), &s.rotated(r)).unwrap());
            assert_eq!(rotated.valency_histogram, base.valency_histogram, "r={r}");
            assert_eq!(rotated.quad_count, base.quad_count);
            assert_eq!(rotated.vertex_count, base.vertex_count);
            assert_eq!(rotated.edge_count, base.edge_count);
        }
    }
}

#[test]
fn positive_orientation_after_smoothing() {
    let spec = PatchSpec::new(vec![6, 4, 3, 5, 4]).unwrap();
    let s = SubdivisionVector::new(vec![3, 2, 1, 1, 4]);
    let mesh = build_topology(&spec, &s).unwrap();
    let boundary = synthesize_boundary(&spec);
    for iters in [0, 10] {
        let positioned = embed_geometry(&mesh, &boundary, iters).unwrap();
        let violations = validate_mesh(&positioned);
        assert!(violations.is_empty(), "iters {iters}: {violations:?}");
    }
}
