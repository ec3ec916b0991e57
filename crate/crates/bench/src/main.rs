use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use girthcut::{compare, constants, emit, run_bench, ConfigError, ExperimentConfig};
use girthcut_core::audit::{
    check_claims, claim5_crosscheck, collect_samples, independence_test, mu_statistics, AlrSampler,
    CutSampler, KLocalSampler, QaoaSampler, TPowerSampler, DEFAULT_TOL_SIGMAS,
    DEFAULT_WALK_SAMPLES, MIN_BATCH,
};
use girthcut_core::graph::{
    default_swap_budget, disjoint_union, lattice, lift_girth, random_regular, read_graph,
    write_graph, LatticeKind,
};
use girthcut_core::local_gaussian::KLocal;
use girthcut_core::qaoa::{optimize_params, QaoaParams, QaoaSimulator, DEFAULT_BUDGET};
use girthcut_core::spectral::{
    alr_cut_with_report, truncated_power_cut_with_degree, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use girthcut_core::{Cut, Graph};

#[derive(Parser)]
#[command(
    name = "girthcut",
    version,
    about = "Local max-cut algorithms on high-girth graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    RandomRegular,
    Grid,
    Torus,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Klocal,
    Alr,
    Tpower,
    Qaoa,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph as an edge list.
    Generate {
        #[arg(long, value_enum)]
        family: GenFamily,
        /// Vertex count, or side length for lattices.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Lift a random regular graph to at least this girth.
        #[arg(long)]
        girth: Option<usize>,
        #[arg(long, default_value_t = 1)]
        copies: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// k-local Gaussian wave cut; trial i uses seed + i.
    Klocal {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
    /// Sign of the minimum adjacency eigenvector.
    Alr {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Truncated power-method cut.
    Tpower {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scale degree; defaults to the maximum degree.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Exact QAOA expectation with given or optimised angles.
    Qaoa {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long, conflicts_with_all = ["gammas", "betas"])]
        optimize: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gammas: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        betas: Option<Vec<f64>>,
        #[arg(long)]
        shots: Option<usize>,
    },
    /// Empirical locality and correlation audit of an algorithm's cuts.
    Audit {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Independence radius.
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Locality parameter for klocal and tpower; defaults to r.
        #[arg(long)]
        k: Option<usize>,
        /// QAOA depth; defaults to r.
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_WALK_SAMPLES)]
        walk_samples: usize,
        #[arg(long, default_value_t = 1000)]
        pair_budget: usize,
    },
    /// Run a configured experiment.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
    /// Paired comparison of two algorithms in a records CSV.
    Compare {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = girthcut::config::default_epsilon())]
        epsilon: f64,
    },
    /// Reference constants C in the cut fraction 1/2 + C/sqrt(D).
    Constants {
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long)]
        json: bool,
    },
}

fn load_graph(path: &Path) -> anyhow::Result<Graph> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_graph(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn print_json(value: &serde_json::Value) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(emit::to_json(value)?.as_bytes())?;
    Ok(())
}

fn print_cut(cut: &Cut) {
    println!("{}", cut.to_line());
}

fn generate(
    family: GenFamily,
    n: usize,
    degree: usize,
    seed: u64,
    girth: Option<usize>,
    copies: usize,
    out: Option<PathBuf>,
) -> anyhow::Result<()> {
    let g = match family {
        GenFamily::RandomRegular => {
            let g = random_regular(n, degree, seed)?;
            match girth {
                Some(t) => lift_girth(&g, t, seed, default_swap_budget(n))?,
                None => g,
            }
        }
        GenFamily::Grid | GenFamily::Torus if girth.is_some() => {
            bail!("--girth applies to random-regular only")
        }
        GenFamily::Grid => lattice(LatticeKind::Grid, n, n)?,
        GenFamily::Torus => lattice(LatticeKind::Torus, n, n)?,
    };
    let g = disjoint_union(&g, copies)?;
    match out {
        Some(path) => {
            let file =
                File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = io::BufWriter::new(file);
            write_graph(&g, &mut w)?;
            w.flush()?;
        }
        None => write_graph(&g, io::stdout().lock())?,
    }
    Ok(())
}

fn qaoa(
    g: &Graph,
    p: usize,
    optimize: bool,
    budget: usize,
    seed: u64,
    angles: (Option<Vec<f64>>, Option<Vec<f64>>),
    shots: Option<usize>,
) -> anyhow::Result<()> {
    let sim = QaoaSimulator::new(g)?;
    let (params, search) = match (optimize, angles) {
        (true, _) => {
            let r = optimize_params(g, p, seed, budget)?;
            let search = json!({"evaluations": r.evaluations, "budget_exhausted": r.budget_exhausted, "budget": budget, "seed": seed});
            (r.params, Some(search))
        }
        (false, (Some(gammas), Some(betas))) => {
            let params = QaoaParams::new(gammas, betas)?;
            if params.p() != p {
                bail!("--p {p} but {} angle pairs given", params.p());
            }
            (params, None)
        }
        (false, (None, None)) if p == 0 => (QaoaParams::zeros(0), None),
        _ => bail!("pass --optimize or both --gammas and --betas"),
    };
    let mut report = json!({
        "p": p,
        "params": {"gammas": params.gammas(), "betas": params.betas()},
        "expected_cut": sim.expected_cut(&params),
    });
    if let Some(search) = search {
        report["optimizer"] = search;
    }
    if let Some(shots) = shots {
        let samples = sim.sample(&params, shots, seed)?;
        let cuts = samples
            .into_iter()
            .map(|x| Cut::new(g, x))
            .collect::<Result<Vec<_>, _>>()?;
        let best = cuts.iter().map(|c| c.value).fold(0.0, f64::max);
        let mean = cuts.iter().map(|c| c.value).sum::<f64>() / cuts.len() as f64;
        report["samples"] = json!({
            "shots": shots,
            "mean_cut": mean,
            "best_cut": best,
            "cuts": cuts.iter().map(|c| json!({"cut_value": c.value, "assignment": c.to_line()})).collect::<Vec<_>>(),
        });
    }
    print_json(&report)
}

#[allow(clippy::too_many_arguments)]
fn audit(
    g: &Graph,
    algo: Algo,
    runs: usize,
    seed: u64,
    r: usize,
    k: Option<usize>,
    p: Option<usize>,
    walk_samples: usize,
    pair_budget: usize,
) -> anyhow::Result<()> {
    let (sampler, setting): (Box<dyn CutSampler + '_>, serde_json::Value) = match algo {
        Algo::Klocal => {
            let k = k.unwrap_or(r);
            (
                Box::new(KLocalSampler(KLocal::new(g, k)?)),
                json!({"algorithm": "klocal", "k": k}),
            )
        }
        Algo::Alr => (
            Box::new(AlrSampler {
                graph: g,
                tol: DEFAULT_TOL,
                max_iter: DEFAULT_MAX_ITER,
            }),
            json!({"algorithm": "alr", "tol": DEFAULT_TOL}),
        ),
        Algo::Tpower => {
            let k = k.unwrap_or(r);
            let degree = g.max_degree();
            (
                Box::new(TPowerSampler {
                    graph: g,
                    degree,
                    k,
                }),
                json!({"algorithm": "tpower", "k": k, "degree": degree}),
            )
        }
        Algo::Qaoa => {
            let p = p.unwrap_or(r);
            let opt = optimize_params(g, p, seed, DEFAULT_BUDGET)?;
            let setting = json!({
                "algorithm": "qaoa", "p": p,
                "gammas": opt.params.gammas(), "betas": opt.params.betas(), "expected_cut": opt.value,
            });
            (Box::new(QaoaSampler::new(g, &opt.params)?), setting)
        }
    };
    let batch = collect_samples(sampler.as_ref(), g, "graph", runs, seed)?;
    let mut report = json!({"setting": setting, "runs": runs, "seed": seed, "n": g.n()});
    match g.regular_degree() {
        Some(degree) => {
            let stats = mu_statistics(&batch, g, walk_samples, seed)?;
            report["claims"] =
                serde_json::to_value(check_claims(&stats, degree, DEFAULT_TOL_SIGMAS)?)?;
            report["claim5"] = json!([
                serde_json::to_value(claim5_crosscheck(&batch, g, 1)?)?,
                serde_json::to_value(claim5_crosscheck(&batch, g, 2)?)?,
            ]);
            report["stats"] = serde_json::to_value(&stats)?;
        }
        None => report["claims"] = json!({"skipped": "graph is not regular"}),
    }
    report["independence"] = if runs >= MIN_BATCH {
        match independence_test(&batch, g, r, pair_budget, seed) {
            Ok(rep) => serde_json::to_value(rep)?,
            Err(e) => json!({"skipped": e.to_string()}),
        }
    } else {
        json!({"skipped": format!("needs at least {MIN_BATCH} runs")})
    };
    print_json(&report)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Generate {
            family,
            n,
            degree,
            seed,
            girth,
            copies,
            out,
        } => {
            generate(family, n, degree, seed, girth, copies, out)?;
        }
        Command::Klocal {
            graph,
            k,
            seed,
            trials,
        } => {
            let g = load_graph(&graph)?;
            let plan = KLocal::new(&g, k)?;
            let mut values = Vec::new();
            for t in 0..trials.max(1) {
                let cut = plan.cut(&g, seed.wrapping_add(t))?;
                print_cut(&cut);
                values.push(cut.value);
            }
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            print_json(
                &json!({"cut_value": mean, "k": k, "D": plan.degree(), "seed": seed, "trials": values.len(), "values": values}),
            )?;
        }
        Command::Alr {
            graph,
            tol,
            max_iter,
            seed,
        } => {
            let g = load_graph(&graph)?;
            let (cut, reports) = alr_cut_with_report(&g, tol, max_iter, seed)?;
            print_cut(&cut);
            print_json(
                &json!({"cut_value": cut.value, "seed": seed, "tol": tol, "components": reports}),
            )?;
        }
        Command::Tpower {
            graph,
            k,
            seed,
            degree,
        } => {
            let g = load_graph(&graph)?;
            let degree = degree.unwrap_or(g.max_degree());
            let cut = truncated_power_cut_with_degree(&g, degree, k, seed)?;
            print_cut(&cut);
            print_json(&json!({"cut_value": cut.value, "k": k, "degree": degree, "seed": seed}))?;
        }
        Command::Qaoa {
            graph,
            p,
            optimize,
            budget,
            seed,
            gammas,
            betas,
            shots,
        } => {
            let g = load_graph(&graph)?;
            qaoa(&g, p, optimize, budget, seed, (gammas, betas), shots)?;
        }
        Command::Audit {
            graph,
            algo,
            runs,
            seed,
            r,
            k,
            p,
            walk_samples,
            pair_budget,
        } => {
            let g = load_graph(&graph)?;
            audit(&g, algo, runs, seed, r, k, p, walk_samples, pair_budget)?;
        }
        Command::Bench { config } => {
            let config = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(1));
                }
            };
            let outcome = run_bench(&config)?;
            eprintln!(
                "{} records, {} failed; wrote {}",
                outcome.records.len(),
                outcome.failures,
                config.output.csv.display()
            );
            if outcome.failures > 0 {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Compare {
            records,
            a,
            b,
            epsilon,
        } => {
            let records = emit::read_csv_file(&records)
                .with_context(|| format!("reading {}", records.display()))?;
            let summary = compare(&records, &a, &b, epsilon)?;
            print_json(&serde_json::to_value(summary)?)?;
        }
        Command::Constants { degree, json } => {
            if degree == 0 {
                bail!("--degree must be positive");
            }
            let rows = constants();
            if json {
                print_json(&serde_json::to_value(&rows)?)?;
            } else {
                println!(
                    "{:<34} {:>7} {:>9}  provenance",
                    "label",
                    "C",
                    format!("D={degree}")
                );
                for r in &rows {
                    println!(
                        "{:<34} {:>7.4} {:>9.4}  {}",
                        r.label,
                        r.value,
                        r.cut_fraction(degree),
                        r.provenance
                    );
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn init_threads() -> Result<(), ConfigError> {
    let Ok(var) = std::env::var("GIRTHCUT_THREADS") else {
        return Ok(());
    };
    let threads: usize = var.parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        ConfigError::Invalid(format!(
            "GIRTHCUT_THREADS={var:?} is not a positive integer"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| ConfigError::Invalid(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
