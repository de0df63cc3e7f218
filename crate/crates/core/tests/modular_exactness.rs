use modbc::centrality::max_abs_diff;
use modbc::classify_edges;
use modbc::exact::{betweenness, brute_force_bc};
use modbc::modular::{global_centrality, validate_precondition};
use modbc::synth::{generate, GenConfig, ModuleRule};

fn relative_gap(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    max_abs_diff(a, b) / scale
}

#[test]
fn generated_graphs_match_brandes() {
    for seed in 0..40 {
        for &n in &[12usize, 30, 57, 90] {
            let g = generate(&GenConfig::new(n, ModuleRule::Sqrt, seed).enforce_p(true)).unwrap();
            let p = classify_edges(&g);
            validate_precondition(&g, &p, None).unwrap();
            let report = global_centrality(&g, &p);
            let bc = betweenness(&g);
            let gap = relative_gap(&report.gc.scores, &bc.scores);
            assert!(gap < 1e-9, "seed {seed} n {n}: gap {gap}");
            assert_eq!(
                report.global_central_node,
                bc.argmax().unwrap(),
                "seed {seed} n {n}"
            );
        }
    }
}

#[test]
fn small_graphs_match_path_enumeration() {
    for seed in 0..60 {
        let n = 4 + (seed as usize % 9);
        let g = generate(
            &GenConfig::new(n, ModuleRule::Explicit(1 + seed as usize % 3), seed).enforce_p(true),
        )
        .unwrap();
        let p = classify_edges(&g);
        let report = global_centrality(&g, &p);
        let oracle = brute_force_bc(&g).unwrap();
        assert!(
            relative_gap(&report.gc.scores, &oracle.scores) < 1e-9,
            "seed {seed}"
        );
    }
}
