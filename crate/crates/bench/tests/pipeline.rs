use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use girthcut::config::ExperimentConfig;
use girthcut::experiment::{build_instance, run_experiment, trial_seed};
use girthcut::{compare, emit, run_bench};
use girthcut_core::local_gaussian::run_klocal;

fn config(text: &str, dir: &Path) -> ExperimentConfig {
    let path = dir.join("experiment.toml");
    fs::write(&path, text).unwrap();
    ExperimentConfig::load(&path).unwrap()
}

const SMALL: &str = r#"
[instances]
family = "random_regular"
sizes = [10, 12]
count = 3
seed = 4

[algorithms.alr]
[algorithms.qaoa]
p = [1, 2]
budget = 300
shots = 16
[algorithms.klocal]
k = [1, 2]
seeds = 2
[algorithms.tpower]
k = [5]

[output]
csv = "out/records.csv"
svg = "out/chart.svg"
[output.compare]
a = "alr"
b = "qaoa"
path = "out/summary.json"
"#;

#[test]
fn one_instance_one_algorithm_gives_one_record() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(
        "[instances]\nfamily = \"grid\"\nsizes = [3]\ncount = 1\n[algorithms.alr]\n[output]\ncsv = \"r.csv\"\n",
        dir.path(),
    );
    let out = run_bench(&c).unwrap();
    assert_eq!(out.records.len(), 1);
    assert_eq!(out.failures, 0);
    assert!(dir.path().join("r.csv").exists());
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut files = Vec::new();
    for d in &dirs {
        let c = config(SMALL, d.path());
        let out = run_bench(&c).unwrap();
        assert_eq!(out.failures, 0);
        // 6 instances x (1 alr + 2 x 2 qaoa + 2 x 2 klocal + 1 tpower).
        assert_eq!(out.records.len(), 6 * 10);
        files.push(
            ["records.csv", "chart.svg", "summary.json"]
                .map(|f| fs::read(d.path().join("out").join(f)).unwrap()),
        );
    }
    assert_eq!(files[0], files[1]);
    let parsed = emit::read_csv(&files[0][0][..]).unwrap();
    assert_eq!(parsed.len(), 60);
    assert!(parsed
        .iter()
        .all(|r| (0.0..=1.0).contains(&r.cut_value.unwrap())));
}

#[test]
fn records_reproduce_from_their_seed() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(SMALL, dir.path());
    let records = run_experiment(&c);
    for r in records.iter().filter(|r| r.algorithm == "klocal") {
        let size = r.n;
        let inst = build_instance(&c.instances, size, r.instance_index);
        assert_eq!(inst.id, r.instance);
        assert_eq!(inst.graph_seed, r.graph_seed);
        let g = inst.graph.unwrap();
        let again = run_klocal(&g, r.param.unwrap(), r.seed).unwrap();
        assert_eq!(Some(again.value), r.cut_value);
    }
    let first = &records[0];
    assert_eq!(
        first.seed,
        trial_seed(first.graph_seed, &first.algorithm, 0)
    );
}

#[test]
fn record_grid_is_complete() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(
        r#"
[instances]
family = "random_regular"
sizes = [8, 10, 12]
count = 30
seed = 2
[algorithms.alr]
[algorithms.qaoa]
p = [1, 2, 3]
budget = 150
[output]
csv = "r.csv"
"#,
        dir.path(),
    );
    let records = run_experiment(&c);
    assert_eq!(records.len(), 90 + 270);
    assert!(records.iter().all(|r| r.is_ok()));
    let s = compare(&records, "alr", "qaoa", 0.05).unwrap();
    assert_eq!(s.cells.len(), 9);
    assert!(s.cells.iter().all(|cell| cell.instances == 30));
}

#[test]
fn failed_instances_are_recorded_and_the_run_continues() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(
        "[instances]\nfamily = \"random_regular\"\nsizes = [5, 8]\ncount = 2\n[algorithms.klocal]\nk = [1]\n[output]\ncsv = \"r.csv\"\n",
        dir.path(),
    );
    let out = run_bench(&c).unwrap();
    assert_eq!(out.records.len(), 4);
    assert_eq!(out.failures, 2);
    for r in &out.records {
        assert_eq!(r.is_ok(), r.n == 8);
        assert_eq!(r.cut_value.is_some(), r.is_ok());
    }
}

#[test]
fn alr_value_is_unchanged_by_disjoint_copies() {
    let dir = tempfile::tempdir().unwrap();
    let mut values = Vec::new();
    for copies in [1, 2, 5] {
        let c = config(
            &format!("[instances]\nfamily = \"random_regular\"\nsizes = [14]\ncount = 4\ncopies = {copies}\nseed = 8\n[algorithms.alr]\n[output]\ncsv = \"r.csv\"\n"),
            dir.path(),
        );
        let v: Vec<f64> = run_experiment(&c)
            .iter()
            .map(|r| r.cut_value.unwrap())
            .collect();
        values.push(v);
    }
    assert_eq!(values[0], values[1]);
    assert_eq!(values[0], values[2]);
}

#[test]
fn lattices_favour_alr_over_shallow_qaoa() {
    for family in ["grid", "torus"] {
        let dir = tempfile::tempdir().unwrap();
        let c = config(
            &format!("[instances]\nfamily = \"{family}\"\nsizes = [4]\ncount = 1\n[algorithms.alr]\n[algorithms.qaoa]\np = [1, 2, 3]\nbudget = 2000\n[output]\ncsv = \"r.csv\"\n"),
            dir.path(),
        );
        let records = run_experiment(&c);
        let alr = records.iter().find(|r| r.algorithm == "alr").unwrap();
        assert_eq!(alr.cut_value, Some(1.0), "{family}");
        let qaoa: Vec<f64> = records
            .iter()
            .filter(|r| r.algorithm == "qaoa")
            .map(|r| r.cut_value.unwrap())
            .collect();
        assert_eq!(qaoa.len(), 3);
        assert!(qaoa.iter().all(|&v| v < 1.0), "{family}: {qaoa:?}");
    }
}

fn attr(tag: &str, name: &str) -> String {
    let start = tag.find(&format!(" {name}=\"")).unwrap() + name.len() + 3;
    let end = start + tag[start..].find('"').unwrap();
    tag[start..end].to_string()
}

fn inner_text(tag: &str) -> String {
    let text = tag.rsplit("<text").next().unwrap();
    let start = text.find('>').unwrap() + 1;
    let end = text.find("</text>").unwrap();
    text[start..end].to_string()
}

#[test]
fn svg_matches_emitted_csv() {
    for family in ["grid", "torus"] {
        let dir = tempfile::tempdir().unwrap();
        let c = config(
            &format!("[instances]\nfamily = \"{family}\"\nsizes = [3]\ncount = 1\n[algorithms.qaoa]\np = [1, 2, 3, 4, 5, 6, 7, 8]\nbudget = 100\n[output]\ncsv = \"r.csv\"\nsvg = \"c.svg\"\n"),
            dir.path(),
        );
        run_bench(&c).unwrap();
        let records = emit::read_csv_file(&dir.path().join("r.csv")).unwrap();
        let svg = fs::read_to_string(dir.path().join("c.svg")).unwrap();

        let points: Vec<&str> = svg
            .lines()
            .filter(|l| l.contains("class=\"point\""))
            .collect();
        assert_eq!(points.len(), 8, "{family}");
        let expected: BTreeMap<usize, f64> = records
            .iter()
            .map(|r| (r.param.unwrap(), r.cut_value.unwrap()))
            .collect();
        for p in &points {
            let x: usize = attr(p, "data-x").parse().unwrap();
            let y: f64 = attr(p, "data-y").parse().unwrap();
            assert_eq!(expected[&x], y);
        }

        let xticks: Vec<(f64, f64)> = svg
            .lines()
            .filter(|l| l.contains("class=\"xtick\""))
            .map(|l| {
                (
                    attr(l, "x1").parse().unwrap(),
                    inner_text(l).parse().unwrap(),
                )
            })
            .collect();
        assert_eq!(xticks.len(), 8);
        assert!(xticks
            .windows(2)
            .all(|w| w[1].0 > w[0].0 && w[1].1 > w[0].1));
        let yticks: Vec<(f64, f64)> = svg
            .lines()
            .filter(|l| l.contains("class=\"ytick\""))
            .map(|l| {
                (
                    attr(l, "y1").parse().unwrap(),
                    inner_text(l).parse().unwrap(),
                )
            })
            .collect();
        assert!(yticks.len() >= 2);
        // Larger values sit higher, i.e. at smaller y coordinates.
        assert!(yticks
            .windows(2)
            .all(|w| w[1].1 > w[0].1 && w[1].0 < w[0].0));
        let (lo, hi) = (yticks[0].1, yticks.last().unwrap().1);
        assert!(expected.values().all(|&v| lo <= v && v <= hi));
    }
}
