//! Independent reference computations checked against the library.

use std::f64::consts::PI;

use girthcut_core::audit::{
    claim5_crosscheck, collect_samples, mu_statistics, quadratic_form, FixedCut, KLocalSampler,
    ProductSampler, SampleBatch,
};
use girthcut_core::graph::{
    complete_graph, cycle_graph, disjoint_union, lattice, lift_girth, random_regular, Graph,
    LatticeKind,
};
use girthcut_core::local_gaussian::{limit_cut_fraction, tree_edge_cut_prob, KLocal};
use girthcut_core::qaoa::{expected_cut, optimize_params, sample_cuts, QaoaParams, QaoaSimulator};
use girthcut_core::rng::GaussianField;
use girthcut_core::spectral::{min_eigenpair, truncated_power_cut, DEFAULT_MAX_ITER};

fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
}

fn heawood() -> Graph {
    let ring = (0..14).map(|i| (i, (i + 1) % 14));
    let chords = (0..14).step_by(2).map(|i| (i, (i + 5) % 14));
    Graph::from_edges(14, ring.chain(chords)).unwrap()
}

/// Exact edge-cut probability on the depth-`k` tree model: the endpoint sums
/// are jointly Gaussian with equal variance, so the cut probability is
/// `arccos(rho) / pi`.
fn tree_cut_exact(degree: usize, k: usize) -> f64 {
    let s = 1.0 / ((degree - 1) as f64).sqrt();
    let kf = k as f64;
    let var = 1.0 + kf + kf * s * s;
    let cov = -2.0 * kf * s;
    (cov / var).acos() / PI
}

#[test]
fn tree_estimate_matches_exact_gaussian_formula() {
    for (degree, k) in [(3, 1), (3, 2), (3, 3), (4, 2), (3, 6)] {
        let est = tree_edge_cut_prob(degree, k, 200_000, 17).unwrap();
        let exact = tree_cut_exact(degree, k);
        assert!(
            (est.estimate - exact).abs() < 4.0 * est.stderr,
            "D={degree} k={k}: {} vs {exact}",
            est.estimate
        );
    }
}

#[test]
fn exact_tree_formula_approaches_limit() {
    let limit = limit_cut_fraction(3).unwrap();
    assert!((tree_cut_exact(3, 3) - 0.78044).abs() < 1e-4);
    assert!(limit - tree_cut_exact(3, 40) < 0.02);
    assert!(limit - tree_cut_exact(3, 4000) < 2e-4);
}

#[test]
fn klocal_on_high_girth_graph_matches_tree_value() {
    let g = lift_girth(&random_regular(300, 3, 4).unwrap(), 6, 4, 3_000_000).unwrap();
    let plan = KLocal::new(&g, 2).unwrap();
    let values: Vec<f64> = (0..300).map(|s| plan.cut(&g, s).unwrap().value).collect();
    let mean = values.iter().sum::<f64>() / 300.0;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 299.0).sqrt();
    let exact = tree_cut_exact(3, 2);
    assert!(
        (mean - exact).abs() < 4.0 * sd / 300f64.sqrt() + 1e-9,
        "{mean} vs {exact}"
    );
}

/// Closed-form depth-1 edge expectation for unweighted max-cut.
fn p1_edge_formula(g: &Graph, u: usize, v: usize, gamma: f64, beta: f64) -> f64 {
    let du = g.degree(u) as i32;
    let dv = g.degree(v) as i32;
    let lambda = g.neighbors(u).iter().filter(|w| g.has_edge(**w, v)).count() as i32;
    let c = gamma.cos();
    0.5 + 0.25 * (4.0 * beta).sin() * gamma.sin() * (c.powi(du - 1) + c.powi(dv - 1))
        - 0.25
            * (2.0 * beta).sin().powi(2)
            * c.powi(du + dv - 2 - 2 * lambda)
            * (1.0 - (2.0 * gamma).cos().powi(lambda))
}

#[test]
fn depth_one_matches_closed_form_per_edge() {
    let graphs = [
        petersen(),
        heawood(),
        random_regular(12, 3, 2).unwrap(),
        complete_graph(5).unwrap(),
        lattice(LatticeKind::Grid, 3, 3).unwrap(),
    ];
    for g in &graphs {
        let sim = QaoaSimulator::new(g).unwrap();
        for (gamma, beta) in [(0.3, 0.2), (1.1, -0.7), (2.9, 1.3)] {
            let params = QaoaParams::new(vec![gamma], vec![beta]).unwrap();
            let probs = sim.edge_cut_probabilities(&params);
            for (&(u, v), p) in g.edges().iter().zip(probs) {
                let f = p1_edge_formula(g, u, v, gamma, beta);
                assert!((p - f).abs() < 1e-10, "{g}: edge ({u},{v}) {p} vs {f}");
            }
        }
    }
}

#[test]
fn single_edge_grid_scan_reaches_one() {
    let g = Graph::from_edges(2, [(0, 1)]).unwrap();
    let sim = QaoaSimulator::new(&g).unwrap();
    let mut best: f64 = 0.0;
    for i in 0..=(PI / 1e-3) as usize {
        for j in 0..=(PI / 2e-3) as usize {
            let p = QaoaParams::new(vec![i as f64 * 1e-3], vec![j as f64 * 1e-3]).unwrap();
            best = best.max(sim.expected_cut(&p));
        }
    }
    assert!((best - 1.0).abs() < 1e-5, "{best}");
}

#[test]
fn triangle_optimum_matches_fine_grid() {
    let g = complete_graph(3).unwrap();
    let sim = QaoaSimulator::new(&g).unwrap();
    let mut grid_best: f64 = 0.0;
    for i in 0..(2.0 * PI / 1e-3) as usize {
        let gamma = i as f64 * 1e-3;
        for j in (0..(PI / 1e-3) as usize).step_by(4) {
            let p = QaoaParams::new(vec![gamma], vec![j as f64 * 1e-3]).unwrap();
            grid_best = grid_best.max(sim.expected_cut(&p));
        }
    }
    let opt = optimize_params(&g, 1, 0, 20_000).unwrap();
    assert!(
        (opt.value - grid_best).abs() < 1e-3,
        "{} vs {grid_best}",
        opt.value
    );
    assert!(opt.value >= grid_best - 1e-9);
}

#[test]
fn cycles_share_the_depth_one_optimum() {
    let values: Vec<f64> = (5..=9)
        .map(|n| {
            optimize_params(&cycle_graph(n).unwrap(), 1, 3, 20_000)
                .unwrap()
                .value
        })
        .collect();
    for v in &values {
        assert!((v - values[0]).abs() < 1e-9, "{values:?}");
    }
    // Known p=1 ring value.
    assert!((values[0] - 0.75).abs() < 1e-6, "{}", values[0]);
}

#[test]
fn distant_qubits_factorize() {
    let g = heawood();
    let sim = QaoaSimulator::new(&g).unwrap();
    let params = QaoaParams::new(vec![0.7], vec![0.35]).unwrap();
    let mut checked = 0;
    for j in 0..14 {
        let bj = g.ball(&[j], 1).unwrap();
        for k in j + 1..14 {
            let bk = g.ball(&[k], 1).unwrap();
            if bj.iter().any(|v| bk.contains(v)) {
                continue;
            }
            let joint = sim.pair_marginal(&params, j, k);
            let mj = sim.marginal(&params, j);
            let mk = sim.marginal(&params, k);
            for a in 0..2 {
                for b in 0..2 {
                    assert!((joint[a][b] - mj[a] * mk[b]).abs() < 1e-10);
                }
            }
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn per_edge_values_agree_on_high_girth_graphs() {
    // C8 next to C12: girth 8 but not edge-transitive.
    let c8 = (0..8).map(|i| (i, (i + 1) % 8));
    let c12 = (0..12).map(|i| (8 + i, 8 + (i + 1) % 12));
    let mixed = Graph::from_edges(20, c8.chain(c12)).unwrap();
    for g in [heawood(), mixed] {
        let sim = QaoaSimulator::new(&g).unwrap();
        let params = QaoaParams::new(vec![0.9], vec![0.4]).unwrap();
        let probs = sim.edge_cut_probabilities(&params);
        for p in &probs {
            assert!((p - probs[0]).abs() < 1e-9);
        }
    }
}

#[test]
fn distribution_is_flip_symmetric() {
    let g = petersen();
    let sim = QaoaSimulator::new(&g).unwrap();
    let probs = sim.probabilities(&QaoaParams::new(vec![0.4, 1.2], vec![0.3, 0.8]).unwrap());
    let mask = (1usize << 10) - 1;
    for (x, p) in probs.iter().enumerate() {
        assert!((p - probs[x ^ mask]).abs() < 1e-14);
    }
}

#[test]
fn shot_mean_matches_expectation() {
    let g = petersen();
    let params = QaoaParams::new(vec![0.6], vec![0.4]).unwrap();
    let exact = expected_cut(&g, &params).unwrap();
    let shots = sample_cuts(&g, &params, 100_000, 7).unwrap();
    let values: Vec<f64> = shots.iter().map(|c| c.value).collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let sd =
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt();
    assert!(
        (mean - exact).abs() < 4.0 * sd / (values.len() as f64).sqrt(),
        "{mean} vs {exact}"
    );
}

/// Pearson chi-square of observed counts against equal expected counts.
fn uniform_chi_square(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let e = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum()
}

#[test]
fn depth_zero_samples_are_uniform() {
    let g = cycle_graph(4).unwrap();
    let shots = sample_cuts(&g, &QaoaParams::zeros(0), 32_000, 3).unwrap();
    let mut counts = [0u64; 16];
    for c in &shots {
        let idx = c
            .assignment
            .iter()
            .enumerate()
            .map(|(v, &s)| usize::from(s < 0) << v)
            .sum::<usize>();
        counts[idx] += 1;
    }
    // 15 degrees of freedom; 0.9999 quantile is about 46.
    assert!(uniform_chi_square(&counts) < 46.0);
}

#[test]
fn sampled_states_are_centered() {
    let g = cycle_graph(5).unwrap();
    let shots = sample_cuts(
        &g,
        &QaoaParams::new(vec![0.8], vec![0.3]).unwrap(),
        50_000,
        2,
    )
    .unwrap();
    let mut pairs = [[0u64; 2]; 16];
    for c in &shots {
        let x = &c.assignment;
        // Canonical representative has vertex 0 positive.
        let flip = x[0] < 0;
        let idx = x[1..]
            .iter()
            .enumerate()
            .map(|(v, &s)| usize::from((s < 0) != flip) << v)
            .sum::<usize>();
        pairs[idx][usize::from(flip)] += 1;
    }
    let stat: f64 = pairs
        .iter()
        .filter(|p| p[0] + p[1] > 0)
        .map(|p| uniform_chi_square(p))
        .sum();
    // 16 degrees of freedom; 0.9999 quantile is about 47.
    assert!(stat < 47.0, "{stat}");
}

#[test]
fn power_iteration_finds_torus_spectrum_edge() {
    let t = lattice(LatticeKind::Torus, 6, 4).unwrap();
    let r = min_eigenpair(&t, 1e-9, DEFAULT_MAX_ITER, 2).unwrap();
    assert!((r.eigenvalue + 4.0).abs() < 1e-8);
    // Petersen spectrum is {3, 1, -2}.
    let r = min_eigenpair(&petersen(), 1e-9, DEFAULT_MAX_ITER, 2).unwrap();
    assert!((r.eigenvalue + 2.0).abs() < 1e-8);
}

#[test]
fn truncated_power_matches_unscaled_recursion() {
    let g = random_regular(40, 3, 6).unwrap();
    for k in [1, 4, 9] {
        let mut x = GaussianField::new(40, 12).values;
        let s = 1.0 / 2f64.sqrt();
        for _ in 0..k {
            let y: Vec<f64> = (0..40)
                .map(|u| x[u] - s * g.neighbors(u).iter().map(|&w| x[w]).sum::<f64>())
                .collect();
            x = y;
        }
        let expected: Vec<i8> = x.iter().map(|&v| if v >= 0.0 { 1 } else { -1 }).collect();
        assert_eq!(
            truncated_power_cut(&g, k, 12).unwrap().assignment,
            expected,
            "k={k}"
        );
    }
}

#[test]
fn truncated_power_is_local_across_components() {
    let g = random_regular(30, 3, 1).unwrap();
    let u = disjoint_union(&g, 3).unwrap();
    for k in [2, 7, 30] {
        let single = truncated_power_cut(&g, k, 4).unwrap();
        let joint = truncated_power_cut(&u, k, 4).unwrap();
        assert_eq!(&joint.assignment[..30], &single.assignment[..], "k={k}");
    }
}

/// `mu` quantities by literal walk enumeration over one batch.
fn literal_mu(batch: &SampleBatch, g: &Graph, u: usize, sigma: i8) -> [f64; 4] {
    let rows: Vec<&Vec<i8>> = batch.assignments.iter().filter(|x| x[u] == sigma).collect();
    let mut out = [0.0; 4];
    for x in &rows {
        let s = f64::from(sigma);
        let nb = g.neighbors(u);
        let mut walk1 = 0.0;
        let mut walk2 = 0.0;
        let mut walk3 = 0.0;
        let mut walk4 = 0.0;
        let mut n1 = 0.0;
        let mut n2 = 0.0;
        let mut n3 = 0.0;
        let mut n4 = 0.0;
        for &v in nb {
            walk1 += s * f64::from(x[v]);
            n1 += 1.0;
        }
        for &a in nb {
            for &b in nb {
                walk2 += f64::from(x[a] * x[b]);
                n2 += 1.0;
            }
        }
        for &b in nb {
            for &c in g.neighbors(b) {
                for &d in g.neighbors(c) {
                    walk3 += s * f64::from(x[d]);
                    n3 += 1.0;
                    for &a in nb {
                        walk4 += f64::from(x[a] * x[d]);
                        n4 += 1.0;
                    }
                }
            }
        }
        out[0] += walk1 / n1;
        out[1] += walk2 / n2;
        out[2] += walk3 / n3;
        out[3] += walk4 / n4;
    }
    out.map(|v| v / rows.len() as f64)
}

#[test]
fn audit_estimators_match_literal_enumeration() {
    let cube = Graph::from_edges(
        8,
        (0..8)
            .flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b))))
            .filter(|(u, v)| u < v),
    )
    .unwrap();
    for g in [cube, petersen()] {
        let plan = KLocal::new(&g, 1).unwrap();
        let batch = collect_samples(&KLocalSampler(plan), &g, "g", 300, 5).unwrap();
        let stats = mu_statistics(&batch, &g, 1000, 0).unwrap();
        for e in &stats.entries {
            let lit = literal_mu(&batch, &g, e.vertex, e.sigma);
            let got = [e.mu, e.mu2, e.mu3, e.mu4];
            for i in 0..4 {
                assert!(
                    (lit[i] - got[i]).abs() < 1e-12,
                    "v{} s{} #{i}: {} vs {}",
                    e.vertex,
                    e.sigma,
                    lit[i],
                    got[i]
                );
            }
        }
    }
}

#[test]
fn quadratic_form_matches_walk_enumeration() {
    let prism = Graph::from_edges(
        6,
        [
            (0, 1),
            (1, 2),
            (0, 2),
            (3, 4),
            (4, 5),
            (3, 5),
            (0, 3),
            (1, 4),
            (2, 5),
        ],
    )
    .unwrap();
    let x = [1i8, -1, -1, 1, 1, -1];
    for k in [1usize, 2] {
        let mut total = 0.0;
        // Depth-first enumeration of every length-2k walk.
        fn walks(
            g: &Graph,
            at: usize,
            left: usize,
            weight: f64,
            start: i8,
            x: &[i8],
            total: &mut f64,
        ) {
            if left == 0 {
                *total += weight * f64::from(start * x[at]);
                return;
            }
            for &w in g.neighbors(at) {
                walks(g, w, left - 1, weight / 3.0, start, x, total);
            }
        }
        for u in 0..6 {
            walks(&prism, u, 2 * k, 1.0, x[u], &x, &mut total);
        }
        let q = quadratic_form(&prism, &x, k).unwrap();
        assert!(
            (q - total / 6.0).abs() < 1e-12,
            "k={k}: {q} vs {}",
            total / 6.0
        );
    }
}

#[test]
fn claim5_is_exact_on_deterministic_batches() {
    let cube = Graph::from_edges(
        8,
        (0..8)
            .flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b))))
            .filter(|(u, v)| u < v),
    )
    .unwrap();
    let x = vec![1, -1, -1, 1, 1, 1, -1, -1];
    let batch = collect_samples(&FixedCut(x), &cube, "q3", 7, 0).unwrap();
    for k in [1, 2] {
        let rep = claim5_crosscheck(&batch, &cube, k).unwrap();
        assert!((rep.walk_side - rep.form_side).abs() < 1e-10, "{rep:?}");
        assert!(rep.pass);
    }
}

#[test]
fn product_distribution_walk_correlations() {
    // Backtracking walks return to their start, so even for independent signs
    // mu2 tends to 1/D and mu4 to (2 - 1/D) / D^2 while mu and mu3 vanish.
    let g = lift_girth(&random_regular(60, 3, 9).unwrap(), 6, 9, 600_000).unwrap();
    let batch = collect_samples(&ProductSampler { n: 60 }, &g, "g", 20_000, 3).unwrap();
    let stats = mu_statistics(&batch, &g, 1000, 0).unwrap();
    assert!(stats.mean_mu.abs() < 0.01);
    assert!(
        (stats.mean_mu2 - 1.0 / 3.0).abs() < 0.01,
        "{}",
        stats.mean_mu2
    );
    assert!(
        (stats.mean_mu4 - 5.0 / 27.0).abs() < 0.01,
        "{}",
        stats.mean_mu4
    );
    let rep = claim5_crosscheck(&batch, &g, 2).unwrap();
    assert!(
        rep.pass && (rep.form_side - 5.0 / 27.0).abs() < 0.01,
        "{rep:?}"
    );
}

#[test]
fn zero_radius_gaussian_vertices_are_balanced() {
    let g = random_regular(50, 3, 3).unwrap();
    let batch = collect_samples(
        &KLocalSampler(KLocal::new(&g, 0).unwrap()),
        &g,
        "g",
        10_000,
        8,
    )
    .unwrap();
    for u in 0..50 {
        let m = batch
            .assignments
            .iter()
            .map(|x| f64::from(x[u]))
            .sum::<f64>()
            / 10_000.0;
        assert!(m.abs() < 4.0 / 100.0, "vertex {u}: {m}");
    }
}
