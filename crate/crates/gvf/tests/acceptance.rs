//! Acceptance suite: one test per criterion, named `criterion_N_*` so the
//! harness prints a pass/fail line per criterion.

use std::collections::BTreeMap;
use std::time::Instant;

use gvf::{
    check_feasible, derive_scale, dirichlet_energy, enumerate_extensions, face_display_values,
    fit_real_gvf, gvf_extend, harmonic_fit, harmonic_relax, is_gradually_varied, load_off,
    manifold_cell_real_gvf, manifold_int_gvf, manifold_real_gvf, multilevel_fit,
    partial_derivatives, pipeline::{csv_raster_string, pgm_string}, quantize_guiding,
    smooth_constrained, Bounds, DomainGraph, EnvelopePolicy, GridSpec, GuidingSet, LevelField,
    MeshSpace, RealField, SamplePoint, SmoothConfig, TriMesh,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const POLICIES: [EnvelopePolicy; 3] =
    [EnvelopePolicy::Lower, EnvelopePolicy::Upper, EnvelopePolicy::Midpoint];

fn random_connected_graph(rng: &mut ChaCha8Rng, max_vertices: usize) -> DomainGraph {
    let n = rng.gen_range(1..=max_vertices);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    for _ in 0..rng.gen_range(0..=n) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.push((a.min(b), a.max(b)));
        }
    }
    DomainGraph::from_edges(n, &edges).unwrap()
}

fn random_guiding(
    rng: &mut ChaCha8Rng,
    graph: &DomainGraph,
    levels: usize,
    max_points: usize,
) -> GuidingSet<usize> {
    let n = graph.vertex_count();
    let count = rng.gen_range(1..=max_points.min(n));
    let mut picked = std::collections::BTreeSet::new();
    while picked.len() < count {
        picked.insert(rng.gen_range(0..n));
    }
    let entries: Vec<(usize, usize)> =
        picked.into_iter().map(|v| (v, rng.gen_range(1..=levels))).collect();
    GuidingSet::new(entries, n).unwrap()
}

#[test]
fn criterion_1_theorem_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let mut feasible_count = 0usize;
    for trial in 0..1000 {
        let graph = random_connected_graph(&mut rng, 8);
        let levels = rng.gen_range(1..=4);
        let guiding = random_guiding(&mut rng, &graph, levels, 3);
        let report = check_feasible(&graph, &guiding).unwrap();
        let oracle = enumerate_extensions(&graph, &guiding, levels).unwrap();
        assert_eq!(
            report.feasible,
            !oracle.is_empty(),
            "trial {trial}: feasibility test and exhaustive oracle disagree"
        );
        if report.feasible {
            feasible_count += 1;
        } else {
            let w = report.witness.unwrap();
            assert!((w.distance as usize) < w.level_x.abs_diff(w.level_y));
        }
    }
    let elapsed = start.elapsed();
    assert!(feasible_count > 100, "generator degenerated: {feasible_count} feasible");
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, budget is 60 s");
    println!("criterion 1 (theorem equivalence): PASS ({feasible_count}/1000 feasible, {elapsed:?})");
}

#[test]
fn criterion_2_extension_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1); // same instance stream as criterion 1
    let mut checked = 0usize;
    for _ in 0..1000 {
        let graph = random_connected_graph(&mut rng, 8);
        let levels = rng.gen_range(1..=4);
        let guiding = random_guiding(&mut rng, &graph, levels, 3);
        let oracle = enumerate_extensions(&graph, &guiding, levels).unwrap();
        if oracle.is_empty() {
            continue;
        }
        checked += 1;
        let n = graph.vertex_count();
        let mut set_min = vec![usize::MAX; n];
        let mut set_max = vec![0usize; n];
        for field in &oracle {
            for v in 0..n {
                set_min[v] = set_min[v].min(field.index(v));
                set_max[v] = set_max[v].max(field.index(v));
            }
        }
        for policy in POLICIES {
            let field = gvf_extend(&graph, &guiding, levels, policy).unwrap();
            assert!(is_gradually_varied(&graph, &field));
            for &(v, k) in guiding.entries() {
                assert_eq!(field.index(v), k);
            }
            for v in 0..n {
                assert!(
                    field.index(v) >= set_min[v] && field.index(v) <= set_max[v],
                    "policy {policy:?} leaves the oracle envelope at vertex {v}"
                );
            }
        }
    }
    assert!(checked > 100, "too few feasible instances: {checked}");
    println!("criterion 2 (extension soundness): PASS ({checked} feasible instances, 3 policies)");
}

#[test]
fn criterion_3_ten_by_ten_demo() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    let graph = DomainGraph::build_grid(10, 10).unwrap();
    let cfg = SmoothConfig { iterations: 1_000_000, tolerance: 1e-13, ..Default::default() };
    for trial in 0..200 {
        let count = rng.gen_range(1..=10);
        let mut picked = std::collections::BTreeSet::new();
        while picked.len() < count {
            picked.insert(rng.gen_range(0..100));
        }
        let entries: Vec<(usize, f64)> =
            picked.into_iter().map(|v| (v, rng.gen_range(-3.0..7.0))).collect();
        let guiding = GuidingSet::new(entries.clone(), 100).unwrap();
        let lo = entries.iter().map(|&(_, x)| x).fold(f64::INFINITY, f64::min);
        let hi = entries.iter().map(|&(_, x)| x).fold(f64::NEG_INFINITY, f64::max);

        let (field, _) =
            multilevel_fit(&graph, &guiding, 1, &cfg, EnvelopePolicy::Midpoint).unwrap();
        assert_eq!(field.len(), 100, "trial {trial}: incomplete reconstruction");
        for &(v, x) in &entries {
            assert_eq!(field.value(v).to_bits(), x.to_bits(), "trial {trial}: guiding moved");
        }
        for &x in field.values() {
            assert!(
                x >= lo - 1e-9 && x <= hi + 1e-9,
                "trial {trial}: {x} outside [{lo}, {hi}] + 1e-9"
            );
        }
    }
    println!("criterion 3 (10x10 demo): PASS (200 randomized trials)");
}

#[test]
fn criterion_4_maximum_slope_guarantee() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    for trial in 0..500 {
        let w = rng.gen_range(2..=12);
        let h = rng.gen_range(1..=12);
        let graph = DomainGraph::build_grid(w, h).unwrap();
        let count = rng.gen_range(1..=8.min(w * h));
        let mut picked = std::collections::BTreeSet::new();
        while picked.len() < count {
            picked.insert(rng.gen_range(0..w * h));
        }
        let entries: Vec<(usize, f64)> =
            picked.into_iter().map(|v| (v, rng.gen_range(-100.0..100.0))).collect();
        let guiding = GuidingSet::new(entries, w * h).unwrap();
        let derivation = derive_scale(&graph, &guiding).unwrap();
        let quantized = quantize_guiding(&derivation.scale, &guiding);
        assert!(
            check_feasible(&graph, &quantized).unwrap().feasible,
            "trial {trial}: quantized samples fail the extension condition"
        );
    }

    // 29 samples on a 64x64 grid, the shape of the third data set
    let graph = DomainGraph::build_grid(64, 64).unwrap();
    let mut picked = std::collections::BTreeSet::new();
    while picked.len() < 29 {
        picked.insert(rng.gen_range(0..64 * 64));
    }
    let entries: Vec<(usize, f64)> =
        picked.into_iter().map(|v| (v, rng.gen_range(0.0..50.0))).collect();
    let guiding = GuidingSet::new(entries, 64 * 64).unwrap();
    let derivation = derive_scale(&graph, &guiding).unwrap();
    let quantized = quantize_guiding(&derivation.scale, &guiding);
    assert!(check_feasible(&graph, &quantized).unwrap().feasible);

    // hand-constructed cases where rounding cannot conflict: no inflation
    let path = DomainGraph::build_grid(5, 1).unwrap();
    let ramp = GuidingSet::new([(0usize, 0.0), (4, 8.0)], 5).unwrap();
    assert_eq!(derive_scale(&path, &ramp).unwrap().inflation_steps, 0);
    let flat = GuidingSet::new([(0usize, 7.0), (4, 7.0)], 5).unwrap();
    assert_eq!(derive_scale(&path, &flat).unwrap().inflation_steps, 0);
    let exact_thirds = GuidingSet::new([(0usize, 0.0), (2, 1.0), (4, 2.0)], 5).unwrap();
    assert_eq!(derive_scale(&path, &exact_thirds).unwrap().inflation_steps, 0);

    println!("criterion 4 (maximum-slope guarantee): PASS (500 trials + 29-sample 64x64)");
}

/// Dense Gaussian elimination over the free vertices of the Laplace
/// system — an oracle independent of the relaxation path.
fn direct_harmonic(g: &DomainGraph, guiding: &GuidingSet<f64>) -> Vec<f64> {
    let n = g.vertex_count();
    let free: Vec<usize> = (0..n).filter(|v| !guiding.contains(*v)).collect();
    let slot: BTreeMap<usize, usize> = free.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let m = free.len();
    let mut a = vec![vec![0.0f64; m + 1]; m];
    for (i, &v) in free.iter().enumerate() {
        let neighbors = g.neighbors(v);
        a[i][i] = neighbors.len() as f64;
        for &w in neighbors {
            match slot.get(&w) {
                Some(&j) => a[i][j] -= 1.0,
                None => a[i][m] += *guiding.value_of(w).unwrap(),
            }
        }
    }
    for col in 0..m {
        let pivot = (col..m).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs())).unwrap();
        a.swap(col, pivot);
        for row in col + 1..m {
            let factor = a[row][col] / a[col][col];
            for k in col..=m {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    let mut x = vec![0.0f64; m];
    for row in (0..m).rev() {
        let mut rhs = a[row][m];
        for k in row + 1..m {
            rhs -= a[row][k] * x[k];
        }
        x[row] = rhs / a[row][row];
    }
    let mut out = vec![0.0; n];
    for (i, &v) in free.iter().enumerate() {
        out[v] = x[i];
    }
    for &(v, value) in guiding.entries() {
        out[v] = value;
    }
    out
}

fn cycle_graph(n: usize) -> DomainGraph {
    let edges: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    DomainGraph::from_edges(n, &edges).unwrap()
}

#[test]
fn criterion_5_harmonic_solver() {
    let instances: Vec<(DomainGraph, GuidingSet<f64>)> = vec![
        (cycle_graph(8), GuidingSet::new([(0usize, 0.0), (4, 3.0)], 8).unwrap()),
        (
            DomainGraph::build_grid(6, 1).unwrap(),
            GuidingSet::new([(0usize, 0.0), (5, 3.0)], 6).unwrap(),
        ),
        (
            DomainGraph::build_grid(5, 1).unwrap(),
            GuidingSet::new([(0usize, 0.5), (4, 2.5)], 5).unwrap(),
        ),
    ];
    for (graph, guiding) in &instances {
        let init = RealField::constant(0.0, graph.vertex_count());
        let (out, trace) = harmonic_relax(graph, &init, guiding, 100).unwrap();
        assert_eq!(trace.len(), 100);

        let exact = direct_harmonic(graph, guiding);
        let worst = out
            .values()
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(worst <= 1e-6, "{worst} > 1e-6 against the direct solve");

        for t in 5..trace.len() {
            assert!(
                trace[t] <= trace[t - 1] * (1.0 + 1e-12),
                "trace rises at sweep {t}: {} -> {}",
                trace[t - 1],
                trace[t]
            );
        }

        let lo = guiding.entries().iter().map(|&(_, x)| x).fold(f64::INFINITY, f64::min);
        let hi = guiding.entries().iter().map(|&(_, x)| x).fold(f64::NEG_INFINITY, f64::max);
        let lo = lo.min(0.0); // init is zero, so zero is an admissible start value
        for &x in out.values() {
            assert!(x >= lo && x <= hi, "maximum principle violated: {x}");
        }
    }
    println!("criterion 5 (harmonic solver): PASS (C8 + two paths vs direct solve)");
}

#[test]
fn criterion_6_smoothing_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC6);
    let graph = DomainGraph::build_grid(32, 32).unwrap();
    let mut picked = std::collections::BTreeSet::new();
    while picked.len() < 10 {
        picked.insert(rng.gen_range(0..32 * 32));
    }
    let entries: Vec<(usize, f64)> =
        picked.into_iter().map(|v| (v, rng.gen_range(-2.0..2.0))).collect();
    let guiding = GuidingSet::new(entries.clone(), 32 * 32).unwrap();

    let (mut field, _) = fit_real_gvf(&graph, &guiding, EnvelopePolicy::Midpoint).unwrap();
    let one_sweep =
        SmoothConfig { iterations: 1, tolerance: 0.0, lambda: 0.2, ..Default::default() };
    let mut energy = dirichlet_energy(&graph, &field);
    for sweep in 0..500 {
        let (next, _) = smooth_constrained(&graph, &field, &guiding, &one_sweep).unwrap();
        let next_energy = dirichlet_energy(&graph, &next);
        assert!(
            next_energy <= energy * (1.0 + 1e-12) + 1e-15,
            "energy rose at sweep {sweep}: {energy} -> {next_energy}"
        );
        for &(v, x) in &entries {
            assert_eq!(next.value(v).to_bits(), x.to_bits(), "guiding moved at sweep {sweep}");
        }
        energy = next_energy;
        field = next;
    }

    // affine-field gradient is exact
    let g6 = DomainGraph::build_grid(6, 6).unwrap();
    let mut values = Vec::new();
    for y in 0..6 {
        for x in 0..6 {
            values.push(2.0 * x as f64 + 3.0 * y as f64);
        }
    }
    let grad = partial_derivatives(&g6, &RealField::new(values)).unwrap();
    assert!(grad.dx.iter().all(|d| (d - 2.0).abs() <= 1e-12));
    assert!(grad.dy.iter().all(|d| (d - 3.0).abs() <= 1e-12));

    println!("criterion 6 (smoothing contract): PASS (500 monotone sweeps, exact gradient)");
}

#[test]
fn criterion_7_multilevel_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC7);
    let graph = DomainGraph::build_grid(32, 32).unwrap();
    let mut picked = std::collections::BTreeSet::new();
    while picked.len() < 10 {
        picked.insert(rng.gen_range(0..32 * 32));
    }
    let entries: Vec<(usize, f64)> =
        picked.into_iter().map(|v| (v, rng.gen_range(-1.0..1.0))).collect();
    let guiding = GuidingSet::new(entries, 32 * 32).unwrap();

    let cfg = SmoothConfig { iterations: 500_000, tolerance: 1e-10, ..Default::default() };
    let (single, single_report) =
        multilevel_fit(&graph, &guiding, 1, &cfg, EnvelopePolicy::Midpoint).unwrap();
    let (multi, multi_report) =
        multilevel_fit(&graph, &guiding, 3, &cfg, EnvelopePolicy::Midpoint).unwrap();

    let worst = single
        .values()
        .iter()
        .zip(multi.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(worst <= 1e-6, "pyramid and single-level differ by {worst}");
    assert!(
        multi_report.finest_sweeps() < single_report.finest_sweeps(),
        "pyramid used {} fine sweeps, single level {}",
        multi_report.finest_sweeps(),
        single_report.finest_sweeps()
    );
    println!(
        "criterion 7 (multilevel consistency): PASS (diff {worst:.2e}, fine sweeps {} < {})",
        multi_report.finest_sweeps(),
        single_report.finest_sweeps()
    );
}

/// Icosahedron subdivided on the unit sphere; two rounds give 162
/// vertices / 320 faces.
fn icosphere(subdivisions: u32) -> TriMesh {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut vertices: Vec<[f64; 3]> = vec![
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let normalize = |v: [f64; 3]| {
        let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / len, v[1] / len, v[2] / len]
    };
    for v in &mut vertices {
        *v = normalize(*v);
    }
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut midpoint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut next_faces = Vec::with_capacity(faces.len() * 4);
        for f in &faces {
            let mut mid = [0usize; 3];
            for (i, (a, b)) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])].into_iter().enumerate()
            {
                let key = (a.min(b), a.max(b));
                mid[i] = *midpoint.entry(key).or_insert_with(|| {
                    let va = vertices[a];
                    let vb = vertices[b];
                    vertices.push(normalize([
                        (va[0] + vb[0]) / 2.0,
                        (va[1] + vb[1]) / 2.0,
                        (va[2] + vb[2]) / 2.0,
                    ]));
                    vertices.len() - 1
                });
            }
            next_faces.push([f[0], mid[0], mid[2]]);
            next_faces.push([f[1], mid[1], mid[0]]);
            next_faces.push([f[2], mid[2], mid[1]]);
            next_faces.push([mid[0], mid[1], mid[2]]);
        }
        faces = next_faces;
    }
    TriMesh::new(vertices, faces).unwrap()
}

fn face_centroid(mesh: &TriMesh, face: usize) -> [f64; 3] {
    let f = mesh.faces()[face];
    let mut c = [0.0; 3];
    for &v in &f {
        for k in 0..3 {
            c[k] += mesh.vertices()[v][k] / 3.0;
        }
    }
    c
}

fn assert_max_principle(values: &[f64], guiding: &GuidingSet<f64>, slack: f64, context: &str) {
    let lo = guiding.entries().iter().map(|&(_, x)| x).fold(f64::INFINITY, f64::min);
    let hi = guiding.entries().iter().map(|&(_, x)| x).fold(f64::NEG_INFINITY, f64::max);
    for &x in values {
        assert!(x >= lo - slack && x <= hi + slack, "{context}: {x} outside [{lo}, {hi}]");
    }
}

#[test]
fn criterion_8_manifold_smoke_suite() {
    let start = Instant::now();
    let tetra = load_off(include_bytes!("fixtures/tetrahedron.off")).unwrap();
    let octa = load_off(include_bytes!("fixtures/octahedron.off")).unwrap();
    let sphere = icosphere(2);
    assert_eq!(sphere.face_count(), 320);
    assert_eq!(sphere.vertex_count(), 162);

    let mut rng = ChaCha8Rng::seed_from_u64(0xC8);

    // four guiding vertices, integer mode (values built from a distance
    // cone so the instance is feasible by the triangle inequality)
    for mesh in [&tetra, &octa, &sphere] {
        let graph = mesh.vertex_graph();
        let dist = graph.multi_source_distances(&[0]).unwrap();
        let n_levels = 1 + *dist.iter().max().unwrap() as usize;
        let mut picked = std::collections::BTreeSet::new();
        picked.insert(0usize);
        while picked.len() < 4.min(mesh.vertex_count()) {
            picked.insert(rng.gen_range(0..mesh.vertex_count()));
        }
        let entries: Vec<(usize, usize)> =
            picked.into_iter().map(|v| (v, 1 + dist[v] as usize)).collect();
        let guiding = GuidingSet::new(entries.clone(), mesh.vertex_count()).unwrap();
        let field = manifold_int_gvf(mesh, &guiding, n_levels, EnvelopePolicy::Midpoint).unwrap();
        let level = LevelField::new(field.values().to_vec(), n_levels).unwrap();
        assert!(is_gradually_varied(graph, &level));
        for &(v, k) in &entries {
            assert_eq!(field.values()[v], k);
        }
    }

    // three guiding points, then the same three with a value pair swapped
    let graph = sphere.vertex_graph();
    let d0 = graph.multi_source_distances(&[0]).unwrap();
    let far = (0..sphere.vertex_count()).max_by_key(|&v| d0[v]).unwrap();
    let dfar = graph.multi_source_distances(&[far]).unwrap();
    let third = (0..sphere.vertex_count())
        .max_by_key(|&v| d0[v].min(dfar[v]))
        .unwrap();
    let n_levels = 3;
    let first = GuidingSet::new([(0usize, 1usize), (far, 2), (third, 3)], 162).unwrap();
    let swapped = GuidingSet::new([(0usize, 1usize), (far, 3), (third, 2)], 162).unwrap();
    let f1 = manifold_int_gvf(&sphere, &first, n_levels, EnvelopePolicy::Midpoint).unwrap();
    let f2 = manifold_int_gvf(&sphere, &swapped, n_levels, EnvelopePolicy::Midpoint).unwrap();
    assert_ne!(f1.values(), f2.values(), "swapping a value pair must change the field");
    for (field, guiding) in [(&f1, &first), (&f2, &swapped)] {
        let level = LevelField::new(field.values().to_vec(), n_levels).unwrap();
        assert!(is_gradually_varied(graph, &level));
        for &(v, k) in guiding.entries() {
            assert_eq!(field.values()[v], k);
        }
    }

    // six guiding points, real values, point space
    let mut picked = std::collections::BTreeSet::new();
    while picked.len() < 6 {
        picked.insert(rng.gen_range(0..sphere.vertex_count()));
    }
    let entries: Vec<(usize, f64)> =
        picked.into_iter().map(|v| (v, rng.gen_range(-10.0..10.0))).collect();
    let guiding = GuidingSet::new(entries.clone(), sphere.vertex_count()).unwrap();
    let (field, derivation) =
        manifold_real_gvf(&sphere, &guiding, EnvelopePolicy::Midpoint).unwrap();
    for &(v, x) in &entries {
        assert_eq!(field.values()[v], x);
    }
    let delta = derivation.scale.delta();
    for (a, b) in graph.edges() {
        let step = (field.values()[a] - field.values()[b]).abs();
        assert!(step <= 1.5 * delta + 1e-9 * (1.0 + delta));
    }
    // display values exist for the point-space result
    let display = face_display_values(&sphere, &field).unwrap();
    assert_eq!(display.len(), sphere.face_count());

    // seven guiding cells, real values, then harmonic fitting on top
    let mut picked = std::collections::BTreeSet::new();
    while picked.len() < 7 {
        picked.insert(rng.gen_range(0..sphere.face_count()));
    }
    let entries: Vec<(usize, f64)> =
        picked.into_iter().map(|f| (f, rng.gen_range(0.0..5.0))).collect();
    let guiding = GuidingSet::new(entries.clone(), sphere.face_count()).unwrap();
    let (fit, _) = manifold_cell_real_gvf(&sphere, &guiding, EnvelopePolicy::Lower).unwrap();
    assert_max_principle(fit.values(), &guiding, 1e-9, "7-cell fit");
    let (harmonic, trace) = harmonic_fit(&sphere, &fit, &guiding, 100).unwrap();
    assert_eq!(trace.len(), 100);
    for &(f, x) in &entries {
        assert_eq!(harmonic.values()[f].to_bits(), x.to_bits());
    }
    assert_max_principle(harmonic.values(), &guiding, 1e-9, "7-cell harmonic");

    // guiding cells forming the equatorial band (a closed curve of cells),
    // gradually varying values along it, then 100 harmonic iterations
    let band: Vec<usize> = (0..sphere.face_count())
        .filter(|&f| {
            let verts = sphere.faces()[f];
            let signs: Vec<bool> =
                verts.iter().map(|&v| sphere.vertices()[v][2] >= 0.0).collect();
            signs.iter().any(|&s| s) && signs.iter().any(|&s| !s)
        })
        .collect();
    assert!(band.len() > 20, "equatorial band unexpectedly small");
    let entries: Vec<(usize, f64)> = band
        .iter()
        .map(|&f| {
            let c = face_centroid(&sphere, f);
            (f, c[1].atan2(c[0]).cos())
        })
        .collect();
    let guiding = GuidingSet::new(entries.clone(), sphere.face_count()).unwrap();
    let (fit, _) = manifold_cell_real_gvf(&sphere, &guiding, EnvelopePolicy::Lower).unwrap();
    let (harmonic, trace) = harmonic_fit(&sphere, &fit, &guiding, 100).unwrap();
    assert_eq!(trace.len(), 100);
    assert!(trace.iter().all(|&u| u > 0.0), "trace must stay strictly positive");
    for t in 10..trace.len() {
        assert!(trace[t] <= trace[t - 1] * (1.0 + 1e-9), "trace rises at sweep {t}");
    }
    for &(f, x) in &entries {
        assert_eq!(harmonic.values()[f].to_bits(), x.to_bits());
    }
    assert_max_principle(harmonic.values(), &guiding, 1e-9, "boundary-curve harmonic");
    assert_eq!(harmonic.space(), MeshSpace::Cell);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}, budget is 30 s");
    println!("criterion 8 (manifold smoke suite): PASS ({elapsed:?})");
}

fn golden_pipeline_outputs() -> (String, String) {
    let samples = [
        SamplePoint { x: 0.5, y: 0.5, value: 2.0 },
        SamplePoint { x: 3.5, y: 0.5, value: -1.0 },
        SamplePoint { x: 2.0, y: 2.0, value: 0.5 },
        SamplePoint { x: 0.5, y: 3.5, value: 1.25 },
        SamplePoint { x: 3.5, y: 3.5, value: 4.0 },
    ];
    let spec = GridSpec::new(16, 16, Bounds::new(0.0, 0.0, 4.0, 4.0).unwrap()).unwrap();
    let cfg = SmoothConfig { iterations: 200, tolerance: 1e-9, ..Default::default() };
    let run = gvf::run_grid_pipeline(&samples, Some(spec), &cfg, EnvelopePolicy::Midpoint, 2)
        .unwrap();
    let graph = DomainGraph::build_grid(16, 16).unwrap();
    let pgm = pgm_string(&graph, &run.field).unwrap();
    let csv = csv_raster_string(&graph, &run.field).unwrap();
    (pgm, csv)
}

#[test]
fn criterion_9_io_golden_tests() {
    let (pgm, csv) = golden_pipeline_outputs();
    let pgm_path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/demo.pgm");
    let csv_path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/demo.csv");
    if std::env::var_os("GVF_BLESS").is_some() {
        std::fs::write(pgm_path, &pgm).unwrap();
        std::fs::write(csv_path, &csv).unwrap();
    }
    let golden_pgm = std::fs::read_to_string(pgm_path).expect("golden PGM missing");
    let golden_csv = std::fs::read_to_string(csv_path).expect("golden CSV missing");
    assert_eq!(pgm, golden_pgm, "PGM writer no longer byte-matches the golden file");
    assert_eq!(csv, golden_csv, "CSV writer no longer byte-matches the golden file");

    // OFF round-trip: connectivity and positions survive exactly
    let original = include_bytes!("fixtures/octahedron.off");
    let mesh = load_off(original).unwrap();
    let rendered = gvf::mesh::off_string(&mesh);
    let back = load_off(rendered.as_bytes()).unwrap();
    assert_eq!(back.vertices(), mesh.vertices());
    assert_eq!(back.faces(), mesh.faces());
    assert_eq!(gvf::mesh::off_string(&back), rendered);

    println!("criterion 9 (I/O golden tests): PASS");
}
