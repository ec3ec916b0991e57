//! Instance generation and trial execution.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use girthcut_core::graph::{
    default_swap_budget, disjoint_union, lattice, lift_girth, random_regular, superimpose, Graph,
    GraphError, LatticeKind,
};
use girthcut_core::local_gaussian::KLocal;
use girthcut_core::qaoa::{optimize_schedule, sample_cuts};
use girthcut_core::rng::derive_seed;
use girthcut_core::spectral::{alr_cut_with_report, truncated_power_cut_with_degree};

use crate::config::{ExperimentConfig, Family, InstanceSpec};

/// One algorithm run on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub instance: String,
    pub family: String,
    pub n: usize,
    pub instance_index: usize,
    pub graph_seed: u64,
    pub algorithm: String,
    pub param: Option<usize>,
    pub seed: u64,
    pub cut_value: Option<f64>,
    pub status: String,
    pub aux: String,
    #[serde(default)]
    pub wall_time_ms: Option<f64>,
}

impl TrialRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub id: String,
    pub family: Family,
    pub index: usize,
    pub n: usize,
    pub graph_seed: u64,
    pub graph: Result<Graph, GraphError>,
}

/// Deterministic instance `index` of the given size.
pub fn build_instance(spec: &InstanceSpec, size: usize, index: usize) -> Instance {
    let graph_seed = derive_seed(derive_seed(spec.seed, size as u64), index as u64);
    let graph = (|| {
        let base = match spec.family {
            Family::RandomRegular => {
                let g = random_regular(size, spec.degree, graph_seed)?;
                match spec.girth {
                    Some(t) => lift_girth(&g, t, graph_seed, default_swap_budget(size))?,
                    None => g,
                }
            }
            Family::Grid => lattice(LatticeKind::Grid, size, size)?,
            Family::Torus => lattice(LatticeKind::Torus, size, size)?,
            Family::TorusPlusRandom => {
                let torus = lattice(LatticeKind::Torus, size, size)?;
                superimpose(
                    &torus,
                    &random_regular(size * size, spec.degree, graph_seed)?,
                )?
            }
        };
        disjoint_union(&base, spec.copies)
    })();
    Instance {
        id: format!("{}-{}-{}", spec.family.name(), size, index),
        family: spec.family,
        index,
        n: spec.vertices(size),
        graph_seed,
        graph,
    }
}

pub fn build_instances(spec: &InstanceSpec) -> Vec<Instance> {
    spec.sizes
        .iter()
        .flat_map(|&size| (0..spec.count).map(move |i| (size, i)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(size, i)| build_instance(spec, size, i))
        .collect()
}

const ALR_TAG: u64 = 1;
const QAOA_TAG: u64 = 2;
const KLOCAL_TAG: u64 = 3;
const TPOWER_TAG: u64 = 4;

/// Seed of trial `j` of an algorithm on an instance.
pub fn trial_seed(graph_seed: u64, algorithm: &str, j: usize) -> u64 {
    let tag = match algorithm {
        "alr" => ALR_TAG,
        "qaoa" | "qaoa_shots" => QAOA_TAG,
        "klocal" => KLOCAL_TAG,
        _ => TPOWER_TAG,
    };
    derive_seed(derive_seed(graph_seed, tag), j as u64)
}

#[derive(Debug, Clone, Copy)]
enum Job {
    Alr,
    Qaoa,
    KLocal,
    TPower,
}

struct Recorder<'a> {
    inst: &'a Instance,
    wall_time: bool,
}

impl Recorder<'_> {
    fn record(
        &self,
        algorithm: &str,
        param: Option<usize>,
        seed: u64,
        outcome: Result<(f64, serde_json::Value), String>,
        started: Instant,
    ) -> TrialRecord {
        let (cut_value, status, aux) = match outcome {
            Ok((v, aux)) => (Some(v), "ok", aux.to_string()),
            Err(e) => (None, "error", e),
        };
        TrialRecord {
            instance: self.inst.id.clone(),
            family: self.inst.family.name().to_string(),
            n: self.inst.n,
            instance_index: self.inst.index,
            graph_seed: self.inst.graph_seed,
            algorithm: algorithm.to_string(),
            param,
            seed,
            cut_value,
            status: status.to_string(),
            aux,
            wall_time_ms: self
                .wall_time
                .then(|| started.elapsed().as_secs_f64() * 1e3),
        }
    }
}

fn run_job(config: &ExperimentConfig, inst: &Instance, job: Job) -> Vec<TrialRecord> {
    let rec = Recorder {
        inst,
        wall_time: config.wall_time(),
    };
    let algos = &config.algorithms;
    let graph = inst
        .graph
        .as_ref()
        .map_err(|e| format!("instance generation failed: {e}"));
    let mut out = Vec::new();
    match job {
        Job::Alr => {
            let s = algos.alr.as_ref().expect("scheduled");
            for j in 0..s.seeds {
                let seed = trial_seed(inst.graph_seed, "alr", j);
                let t = Instant::now();
                let outcome = graph.clone().and_then(|g| {
                    let (cut, reports) = alr_cut_with_report(g, s.tol, s.max_iter, seed).map_err(|e| e.to_string())?;
                    let eig = reports.iter().map(|r| r.eigenvalue).fold(f64::INFINITY, f64::min);
                    let residual = reports.iter().map(|r| r.residual).fold(0.0, f64::max);
                    let iterations: usize = reports.iter().map(|r| r.iterations).sum();
                    let aux = json!({"components": reports.len(), "eigenvalue": eig, "residual": residual, "iterations": iterations});
                    Ok((cut.value, aux))
                });
                out.push(rec.record("alr", None, seed, outcome, t));
            }
        }
        Job::Qaoa => {
            let s = algos.qaoa.as_ref().expect("scheduled");
            let max_p = s.p.iter().copied().max().unwrap_or(0);
            for j in 0..s.seeds {
                let seed = trial_seed(inst.graph_seed, "qaoa", j);
                let t = Instant::now();
                let schedule = graph.clone().and_then(|g| {
                    optimize_schedule(g, max_p, seed, s.budget).map_err(|e| e.to_string())
                });
                for &p in &s.p {
                    let outcome = schedule.clone().map(|all| {
                        let r = &all[p - 1];
                        let aux = json!({
                            "gammas": r.params.gammas(),
                            "betas": r.params.betas(),
                            "evaluations": r.evaluations,
                            "budget_exhausted": r.budget_exhausted,
                        });
                        (r.value, aux)
                    });
                    out.push(rec.record("qaoa", Some(p), seed, outcome, t));
                    if s.shots > 0 {
                        let t = Instant::now();
                        let shot_seed = derive_seed(seed, p as u64);
                        let outcome = schedule.clone().and_then(|all| {
                            let g = graph.clone()?;
                            let cuts = sample_cuts(g, &all[p - 1].params, s.shots, shot_seed)
                                .map_err(|e| e.to_string())?;
                            let best = cuts.iter().map(|c| c.value).fold(0.0, f64::max);
                            Ok((best, json!({"shots": s.shots, "shot_seed": shot_seed})))
                        });
                        out.push(rec.record("qaoa_shots", Some(p), seed, outcome, t));
                    }
                }
            }
        }
        Job::KLocal => {
            let s = algos.klocal.as_ref().expect("scheduled");
            for &k in &s.k {
                let plan = graph
                    .clone()
                    .and_then(|g| KLocal::new(g, k).map_err(|e| e.to_string()));
                for j in 0..s.seeds {
                    let seed = trial_seed(inst.graph_seed, "klocal", j);
                    let t = Instant::now();
                    let outcome = plan.as_ref().map_err(Clone::clone).and_then(|plan| {
                        let g = graph.clone()?;
                        let cut = plan.cut(g, seed).map_err(|e| e.to_string())?;
                        Ok((cut.value, json!({})))
                    });
                    out.push(rec.record("klocal", Some(k), seed, outcome, t));
                }
            }
        }
        Job::TPower => {
            let s = algos.tpower.as_ref().expect("scheduled");
            for &k in &s.k {
                for j in 0..s.seeds {
                    let seed = trial_seed(inst.graph_seed, "tpower", j);
                    let t = Instant::now();
                    let outcome = graph.clone().and_then(|g| {
                        let degree = g.max_degree();
                        let cut = truncated_power_cut_with_degree(g, degree, k, seed)
                            .map_err(|e| e.to_string())?;
                        Ok((
                            cut.value,
                            json!({"degree": degree, "regular": g.is_regular()}),
                        ))
                    });
                    out.push(rec.record("tpower", Some(k), seed, outcome, t));
                }
            }
        }
    }
    out
}

/// Every configured algorithm on every instance, in (instance, algorithm)
/// order regardless of scheduling. Failed trials are kept as error records.
pub fn run_experiment(config: &ExperimentConfig) -> Vec<TrialRecord> {
    let instances = build_instances(&config.instances);
    let algos = &config.algorithms;
    let jobs: Vec<Job> = [
        algos.alr.is_some().then_some(Job::Alr),
        algos.qaoa.is_some().then_some(Job::Qaoa),
        algos.klocal.is_some().then_some(Job::KLocal),
        algos.tpower.is_some().then_some(Job::TPower),
    ]
    .into_iter()
    .flatten()
    .collect();
    let work: Vec<(&Instance, Job)> = instances
        .iter()
        .flat_map(|i| jobs.iter().map(move |&j| (i, j)))
        .collect();
    work.into_par_iter()
        .map(|(inst, job)| run_job(config, inst, job))
        .flatten()
        .collect()
}
