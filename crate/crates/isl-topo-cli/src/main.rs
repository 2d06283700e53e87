//! Command-line front end for designing and evaluating inter-satellite-link
//! topologies on torus lattices.
//!
//! Exit codes: 0 success, 1 usage error, 2 construction or validation
//! error, 3 I/O error.

mod config;
mod experiments;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use isl_topo::bounds::{
    capacity_even, capacity_odd, diameter_lb_vs4, greedy_packing_lb, moore_lb, BoundResult,
};
use isl_topo::frac_f64;
use isl_topo::io::{read_topology, write_topology};
use isl_topo::lattice::Constellation;
use isl_topo::prgs::{prgs_build, PrgsConfig};
use isl_topo::search::{
    anneal, offset_search_deg3_in, offset_search_deg4, sample_regular, AnnealConfig, Deg3Space,
    SearchResult,
};
use isl_topo::symmetric::{
    circulant, coprime_circulant, deg3_sixfold, honeycomb, mesh_grid, offset_torus,
};
use isl_topo::Topology;

use experiments::ExperimentId;

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Build(isl_topo::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(std::io::Error),
    #[error("csv error: {0}")]
    Csv(csv::Error),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Build(isl_topo::Error::Io(_) | isl_topo::Error::Json(_)) => 3,
            Failure::Build(_) => 2,
            Failure::Io(_) | Failure::Csv(_) => 3,
        }
    }
}

impl From<isl_topo::Error> for Failure {
    fn from(e: isl_topo::Error) -> Failure {
        Failure::Build(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Io(e)
    }
}

#[derive(Parser)]
#[command(
    name = "isl-topo",
    version,
    about = "Design and evaluate inter-satellite-link topologies on torus lattices"
)]
struct Cli {
    /// Worker threads for sweeps and experiments (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a topology, report its metrics, and optionally save it.
    Build(BuildArgs),
    /// Read a graph file and report its metrics.
    Eval {
        /// Graph JSON file.
        input: PathBuf,
    },
    /// Print ASPL and diameter lower bounds for a node count and degree.
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        delta: usize,
    },
    /// Sweep or anneal for low-ASPL topologies.
    Search {
        #[command(subcommand)]
        kind: SearchKind,
    },
    /// Run a sweep over sizes and methods, emitting a CSV.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Write the graph JSON here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    kind: BuildKind,
}

#[derive(Args)]
struct LatticeArgs {
    /// Satellites per orbit (lattice rows).
    #[arg(long)]
    ns: usize,
    /// Orbital planes (lattice columns).
    #[arg(long)]
    no: usize,
}

impl LatticeArgs {
    fn c(&self) -> Constellation {
        Constellation::new(self.ns, self.no)
    }
}

#[derive(Subcommand)]
enum BuildKind {
    /// 4-regular grid: unit jumps along both lattice axes.
    Mesh(LatticeArgs),
    /// 3-regular rings with alternating cross links; both sides even.
    Honeycomb(LatticeArgs),
    /// 4-regular rings with a fixed inter-ring column offset.
    Offset {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        omega: usize,
    },
    /// Circulant on a single ring of n nodes.
    Circulant {
        #[arg(long)]
        n: usize,
        /// Ring jumps, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        jumps: Vec<usize>,
    },
    /// Bound-meeting relabeled circulant; lattice sides must be coprime.
    Coprime(LatticeArgs),
    /// Bound-meeting 3-regular jump set on a 6k x k lattice.
    Sixfold {
        /// Orbital planes k; the lattice is 6k x k.
        #[arg(long)]
        no: usize,
    },
    /// Random regular graph by stub matching, optionally range-limited.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        delta: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum toroidal edge length; needs --ns/--no for the geometry.
        #[arg(long)]
        max_range: Option<f64>,
        #[arg(long)]
        ns: Option<usize>,
        #[arg(long)]
        no: Option<usize>,
    },
    /// Partitioned random graph: per-cell samples joined by connector cycles.
    Prgs {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Link range budget on the unit torus.
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpaceArg {
    /// Full jump-set family {(1,0), (a,0), (b,1)}.
    Wide,
    /// Honeycomb-like sets varying only the cross-ring offset.
    HoneycombOffset,
}

#[derive(Subcommand)]
enum SearchKind {
    /// Exhaustive inter-ring offset sweep at degree 4.
    Offset4 {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive 3-jump-set sweep at degree 3.
    Offset3 {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, value_enum, default_value_t = SpaceArg::Wide)]
        space: SpaceArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulated annealing over degree-preserving double edge swaps.
    Anneal {
        /// Starting graph file; omit to start from a fresh random sample.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        ns: Option<usize>,
        #[arg(long)]
        no: Option<usize>,
        #[arg(long, default_value_t = 4)]
        delta: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum toroidal edge length kept through the search.
        #[arg(long)]
        max_range: Option<f64>,
        /// Initial temperature (default: calibrated from uphill moves).
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long)]
        cooling: Option<f64>,
        /// Proposals per temperature (default: 100 per node).
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        tmin: Option<f64>,
        /// Write the accepted-move trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    id: ExperimentId,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// key=value file overriding the experiment's default ranges.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed; stochastic methods run seeds base..base+seeds.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    plot_script: bool,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            std::process::exit(1);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("worker pool configured once at startup");
    }
    if let Err(failure) = run(cli.command) {
        eprintln!("error: {failure}");
        std::process::exit(failure.code());
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Build(args) => cmd_build(args),
        Command::Eval { input } => print_metrics(&read_topology(input)?),
        Command::Bound { n, delta } => cmd_bound(n, delta),
        Command::Search { kind } => cmd_search(kind),
        Command::Experiment(args) => cmd_experiment(args),
    }
}

fn cmd_build(args: BuildArgs) -> Result<(), Failure> {
    let g = match args.kind {
        BuildKind::Mesh(l) => mesh_grid(l.c())?,
        BuildKind::Honeycomb(l) => honeycomb(l.c())?,
        BuildKind::Offset { lattice, omega } => offset_torus(lattice.c(), omega)?,
        BuildKind::Circulant { n, jumps } => circulant(n, &jumps)?,
        BuildKind::Coprime(l) => coprime_circulant(l.c())?,
        BuildKind::Sixfold { no } => deg3_sixfold(no)?,
        BuildKind::Sample {
            n,
            delta,
            seed,
            max_range,
            ns,
            no,
        } => {
            let c = match (ns, no) {
                (Some(ns), Some(no)) => Some(Constellation::new(ns, no)),
                (None, None) => None,
                _ => return Err(Failure::Usage("--ns and --no come together".into())),
            };
            sample_regular(n, delta, seed, max_range, c)?
        }
        BuildKind::Prgs { lattice, r, seed } => prgs_build(lattice.c(), &PrgsConfig::new(r, seed))?,
    };
    print_metrics(&g)?;
    if let Some(out) = args.out {
        write_topology(&out, &g)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn print_metrics(g: &Topology) -> Result<(), Failure> {
    let report = g.validate();
    let c = g.constellation();
    println!("lattice: {} x {}", c.n_s, c.n_o);
    println!("n: {}", g.n());
    println!("delta: {}", g.delta());
    let degrees: Vec<String> = g
        .degree_histogram()
        .into_iter()
        .map(|(d, count)| format!("{d}:{count}"))
        .collect();
    println!("degrees: {}", degrees.join(" "));
    if let Some(p) = g.provenance() {
        println!("provenance: {} {}", p.kind, p.params);
    }
    println!("simple: {}", report.is_simple);
    println!("regular: {}", report.is_regular);
    println!("connected: {}", report.is_connected);
    if !report.is_connected {
        return Ok(());
    }
    let (aspl, diameter) = g.path_metrics()?;
    println!("aspl: {:.6} ({aspl})", frac_f64(aspl));
    println!("diameter: {diameter}");
    print_ratios(g.n(), g.delta(), frac_f64(aspl));
    Ok(())
}

fn vs_bound(n: usize, delta: usize) -> Option<BoundResult> {
    match delta {
        4 => Some(greedy_packing_lb(n, |l| capacity_even(4, l))),
        3 => Some(greedy_packing_lb(n, |l| capacity_odd(3, l))),
        _ => None,
    }
}

fn print_ratios(n: usize, delta: usize, aspl: f64) {
    if let Some(vs) = vs_bound(n, delta) {
        println!(
            "vs_lb: {:.6} ratio {:.6}",
            vs.to_f64(),
            aspl / vs.to_f64()
        );
    }
    if delta >= 2 {
        let moore = moore_lb(n, delta);
        println!(
            "moore_lb: {:.6} ratio {:.6}",
            moore.to_f64(),
            aspl / moore.to_f64()
        );
    }
}

fn cmd_bound(n: usize, delta: usize) -> Result<(), Failure> {
    if n < 2 || delta < 2 {
        return Err(Failure::Usage(format!(
            "bounds need n >= 2 and delta >= 2, got n {n} delta {delta}"
        )));
    }
    println!("n: {n}");
    println!("delta: {delta}");
    if let Some(vs) = vs_bound(n, delta) {
        println!("vs_lb: {:.6} ({}) depth {}", vs.to_f64(), vs.value, vs.depth());
    }
    let moore = moore_lb(n, delta);
    println!(
        "moore_lb: {:.6} ({}) depth {}",
        moore.to_f64(),
        moore.value,
        moore.depth()
    );
    if delta == 4 {
        println!("vs_diameter_lb: {}", diameter_lb_vs4(n));
    }
    Ok(())
}

fn report_search(found: &str, result: &SearchResult, out: Option<PathBuf>) -> Result<(), Failure> {
    let g = &result.best;
    println!("{found}");
    let (aspl, diameter) = g.path_metrics()?;
    println!("aspl: {:.6} ({aspl})", frac_f64(aspl));
    println!("diameter: {diameter}");
    print_ratios(g.n(), g.delta(), frac_f64(aspl));
    if let Some(out) = out {
        write_topology(&out, g)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn cmd_search(kind: SearchKind) -> Result<(), Failure> {
    match kind {
        SearchKind::Offset4 { lattice, out } => {
            let (omega, result) = offset_search_deg4(lattice.c())?;
            report_search(&format!("best omega: {omega}"), &result, out)
        }
        SearchKind::Offset3 { lattice, space, out } => {
            let space = match space {
                SpaceArg::Wide => Deg3Space::Wide,
                SpaceArg::HoneycombOffset => Deg3Space::HoneycombOffset,
            };
            let (jumps, result) = offset_search_deg3_in(lattice.c(), space)?;
            let jumps: Vec<String> = jumps
                .iter()
                .map(|j| format!("({},{})", j.d_row, j.d_col))
                .collect();
            report_search(&format!("best jumps: {}", jumps.join("+")), &result, out)
        }
        SearchKind::Anneal {
            input,
            ns,
            no,
            delta,
            seed,
            max_range,
            t0,
            cooling,
            steps,
            tmin,
            trace,
            out,
        } => {
            let initial = match (input, ns, no) {
                (Some(path), None, None) => read_topology(path)?,
                (None, Some(ns), Some(no)) => {
                    let c = Constellation::new(ns, no);
                    sample_regular(c.n(), delta, seed, max_range, Some(c))?
                }
                _ => {
                    return Err(Failure::Usage(
                        "anneal needs either --input or --ns/--no".into(),
                    ))
                }
            };
            let mut cfg = AnnealConfig::calibrated(&initial, seed, max_range);
            if let Some(t0) = t0 {
                cfg.initial_temperature = t0;
            }
            if let Some(cooling) = cooling {
                cfg.cooling_factor = cooling;
            }
            if let Some(steps) = steps {
                cfg.steps_per_temperature = steps;
            }
            if let Some(tmin) = tmin {
                cfg.min_temperature = tmin;
            }
            println!("initial aspl: {:.6}", initial.aspl()?);
            let result = anneal(&initial, &cfg)?;
            if let Some(path) = trace {
                write_trace(&path, &result)?;
                println!("wrote {}", path.display());
            }
            report_search(
                &format!("accepted moves: {}", result.trace.len().saturating_sub(1)),
                &result,
                out,
            )
        }
    }
}

fn write_trace(path: &PathBuf, result: &SearchResult) -> Result<(), Failure> {
    let mut wtr = csv::Writer::from_path(path).map_err(Failure::Csv)?;
    wtr.write_record(["step", "temperature", "current", "best"])
        .map_err(Failure::Csv)?;
    for p in &result.trace {
        wtr.write_record([
            p.step.to_string(),
            format!("{:.6}", p.temperature),
            format!("{:.6}", p.current),
            format!("{:.6}", p.best),
        ])
        .map_err(Failure::Csv)?;
    }
    wtr.flush().map_err(Failure::Io)
}

fn cmd_experiment(args: ExperimentArgs) -> Result<(), Failure> {
    let cfg = match args.config {
        Some(path) => config::load(&path)?,
        None => Default::default(),
    };
    let plan = experiments::plan_for(args.id, &cfg, args.seed).map_err(Failure::Usage)?;
    experiments::run(&plan, &args.out, args.plot_script)
}
