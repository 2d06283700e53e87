//! Experiment drivers: size sweeps that emit one CSV row per
//! (size, method, seed). Rows are computed in parallel but written in
//! deterministic parameter order, so re-running a sweep with the same seed
//! reproduces the file byte for byte apart from the runtime column.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use isl_topo::bounds::{capacity_even, capacity_odd, greedy_packing_lb, moore_lb, BoundResult};
use isl_topo::frac_f64;
use isl_topo::lattice::Constellation;
use isl_topo::prgs::{prgs_build, PrgsConfig};
use isl_topo::search::{
    anneal, offset_search_deg3, offset_search_deg4, sample_regular, AnnealConfig,
};
use isl_topo::symmetric::{
    coprime_circulant, deg3_sixfold, honeycomb, mesh_grid, offset_torus, sqrt_offset,
};
use isl_topo::{Jump, Topology};

use crate::{config, Failure};

pub const CSV_HEADER: [&str; 13] = [
    "n_s", "n_o", "N", "method", "param", "aspl", "diameter", "lb_vs", "lb_moore", "ratio_vs",
    "ratio_moore", "seed", "runtime_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Mesh,
    Honeycomb,
    SqrtOffset,
    BestOffset,
    BestOffsetD3,
    Coprime,
    Sixfold,
    FixedOffset(usize),
    Sample(usize),
    Prgs,
    AnnealFree,
    AnnealRange,
    /// Symmetric-topology ASPL bound row for the given degree.
    BoundVs(usize),
    /// Degree-bounded (Moore style) ASPL bound row for the given degree.
    BoundMoore(usize),
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Mesh => "mesh",
            Method::Honeycomb => "honeycomb",
            Method::SqrtOffset => "sqrt_offset",
            Method::BestOffset => "best_offset",
            Method::BestOffsetD3 => "best_offset_d3",
            Method::Coprime => "coprime",
            Method::Sixfold => "sixfold",
            Method::FixedOffset(_) => "offset",
            Method::Sample(_) => "sample",
            Method::Prgs => "prgs",
            Method::AnnealFree => "anneal_unconstrained",
            Method::AnnealRange => "anneal_constrained",
            Method::BoundVs(_) => "lb",
            Method::BoundMoore(_) => "lb_moore",
        }
    }

    fn seeded(self) -> bool {
        matches!(
            self,
            Method::Sample(_) | Method::Prgs | Method::AnnealFree | Method::AnnealRange
        )
    }

    /// Whether the symmetric-topology ASPL bound applies to this method's
    /// output. Random and annealed graphs are free to beat that bound, so
    /// their rows leave the vs columns empty.
    fn symmetric(self) -> bool {
        !self.seeded() && !matches!(self, Method::BoundVs(_) | Method::BoundMoore(_))
    }

    fn from_name(name: &str, delta: usize) -> Result<Method, String> {
        Ok(match name {
            "mesh" => Method::Mesh,
            "honeycomb" => Method::Honeycomb,
            "sqrt_offset" => Method::SqrtOffset,
            "best_offset" => Method::BestOffset,
            "best_offset_d3" => Method::BestOffsetD3,
            "coprime" => Method::Coprime,
            "sixfold" => Method::Sixfold,
            "sample" => Method::Sample(delta),
            "prgs" => Method::Prgs,
            "anneal_unconstrained" => Method::AnnealFree,
            "anneal_constrained" => Method::AnnealRange,
            "lb" if delta == 3 || delta == 4 => Method::BoundVs(delta),
            "lb" => return Err(format!("lb rows need delta 3 or 4, got {delta}")),
            "lb_moore" => Method::BoundMoore(delta),
            other => match other.strip_prefix("offset:") {
                Some(omega) => Method::FixedOffset(
                    omega
                        .parse()
                        .map_err(|_| format!("bad offset in method {other:?}"))?,
                ),
                None => return Err(format!("unknown method {other:?}")),
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ExperimentId {
    /// Degree-4 offset constructions against the symmetric bound, n_o fixed.
    OffsetSweep,
    /// Degree-3 jump-set search against the symmetric bound, n_o fixed.
    Deg3Sweep,
    /// Unconstrained annealing against the Moore bound, n_o fixed.
    AnnealSweep,
    /// Annealing with and without a link-range budget on square lattices.
    RangeScaling,
    /// Methods and ranges taken entirely from the config file.
    Custom,
}

pub struct Plan {
    pub sizes: Vec<(usize, usize)>,
    pub methods: Vec<Method>,
    pub r: f64,
    pub seeds: u64,
    pub base_seed: u64,
    /// Abscissa for the generated plot script.
    pub x_column: (&'static str, usize),
}

fn get<'a>(cfg: &'a BTreeMap<String, String>, key: &str, default: &'a str) -> &'a str {
    cfg.get(key).map(String::as_str).unwrap_or(default)
}

pub fn plan_for(
    id: ExperimentId,
    cfg: &BTreeMap<String, String>,
    base_seed: u64,
) -> Result<Plan, String> {
    let seeds: u64 = get(cfg, "seeds", "1")
        .parse()
        .map_err(|_| "bad seeds count".to_string())?;
    let r: f64 = get(cfg, "r", "0.25").parse().map_err(|_| "bad r".to_string())?;
    let sizes = |default_ns: &str, default_no: &str| -> Result<Vec<(usize, usize)>, String> {
        let ns = config::parse_sizes(get(cfg, "ns", default_ns))?;
        let no = get(cfg, "no", default_no);
        Ok(match no {
            "ns" => ns.into_iter().map(|s| (s, s)).collect(),
            fixed => {
                let o: usize = fixed.parse().map_err(|_| format!("bad no {fixed:?}"))?;
                ns.into_iter().map(|s| (s, o)).collect()
            }
        })
    };
    let plan = match id {
        ExperimentId::OffsetSweep => Plan {
            sizes: sizes("10..160", "4")?,
            methods: vec![
                Method::Mesh,
                Method::SqrtOffset,
                Method::BestOffset,
                Method::BoundVs(4),
            ],
            r,
            seeds,
            base_seed,
            x_column: ("n_s", 1),
        },
        ExperimentId::Deg3Sweep => Plan {
            sizes: sizes("8..88:2", "5")?,
            methods: vec![Method::Honeycomb, Method::BestOffsetD3, Method::BoundVs(3)],
            r,
            seeds,
            base_seed,
            x_column: ("n_s", 1),
        },
        ExperimentId::AnnealSweep => Plan {
            sizes: sizes("10,16,24,32", "4")?,
            methods: vec![Method::AnnealFree, Method::BoundMoore(4)],
            r,
            seeds,
            base_seed,
            x_column: ("n_s", 1),
        },
        ExperimentId::RangeScaling => Plan {
            sizes: sizes("12,16,20,24", "ns")?,
            methods: vec![
                Method::AnnealFree,
                Method::AnnealRange,
                Method::BoundMoore(4),
            ],
            r,
            seeds,
            base_seed,
            x_column: ("N", 3),
        },
        ExperimentId::Custom => {
            let delta: usize = get(cfg, "delta", "4")
                .parse()
                .map_err(|_| "bad delta".to_string())?;
            let methods = cfg
                .get("method")
                .ok_or("custom experiments need a method key")?
                .split(',')
                .map(|m| Method::from_name(m.trim(), delta))
                .collect::<Result<Vec<_>, _>>()?;
            let ns = cfg.get("ns").ok_or("custom experiments need an ns key")?;
            Plan {
                sizes: sizes(ns, "4")?,
                methods,
                r,
                seeds,
                base_seed,
                x_column: ("n_s", 1),
            }
        }
    };
    if plan.sizes.is_empty() || plan.methods.is_empty() || plan.seeds == 0 {
        return Err("empty experiment plan".into());
    }
    Ok(plan)
}

struct Row {
    c: Constellation,
    method: &'static str,
    param: String,
    aspl: f64,
    diameter: Option<usize>,
    lb_vs: Option<f64>,
    lb_moore: Option<f64>,
    seed: Option<u64>,
    runtime_ms: u128,
}

impl Row {
    fn record(&self) -> [String; 13] {
        let opt_f = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
        let ratio = |lb: Option<f64>| opt_f(lb.map(|lb| self.aspl / lb));
        [
            self.c.n_s.to_string(),
            self.c.n_o.to_string(),
            self.c.n().to_string(),
            self.method.to_string(),
            self.param.clone(),
            format!("{:.6}", self.aspl),
            self.diameter.map(|d| d.to_string()).unwrap_or_default(),
            opt_f(self.lb_vs),
            opt_f(self.lb_moore),
            ratio(self.lb_vs),
            ratio(self.lb_moore),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.runtime_ms.to_string(),
        ]
    }
}

fn vs_bound(n: usize, delta: usize) -> Option<BoundResult> {
    match delta {
        4 => Some(greedy_packing_lb(n, |l| capacity_even(4, l))),
        3 => Some(greedy_packing_lb(n, |l| capacity_odd(3, l))),
        _ => None,
    }
}

/// Annealing schedule for sweep rows: calibrated starting temperature, then
/// a short geometric decay sized so whole sweeps finish in minutes. Longer
/// schedules belong to the `search anneal` command.
fn sweep_schedule(initial: &Topology, seed: u64, max_range: Option<f64>) -> AnnealConfig {
    let mut cfg = AnnealConfig::calibrated(initial, seed, max_range);
    cfg.cooling_factor = 0.85;
    cfg.steps_per_temperature = 2 * initial.n();
    cfg.min_temperature = cfg.initial_temperature / 25.0;
    cfg
}

fn fmt_jumps(jumps: &[Jump]) -> String {
    let parts: Vec<String> = jumps
        .iter()
        .map(|j| format!("({},{})", j.d_row, j.d_col))
        .collect();
    format!("jumps={}", parts.join("+"))
}

fn graph_for(
    method: Method,
    c: Constellation,
    r: f64,
    seed: u64,
) -> Result<(Topology, String), String> {
    let build = |g: Result<Topology, isl_topo::Error>, param: String| {
        g.map(|g| (g, param)).map_err(|e| e.to_string())
    };
    match method {
        Method::Mesh => build(mesh_grid(c), String::new()),
        Method::Honeycomb => build(honeycomb(c), String::new()),
        Method::SqrtOffset => {
            let omega = sqrt_offset(c).map_err(|e| e.to_string())?;
            build(offset_torus(c, omega), format!("omega={omega}"))
        }
        Method::BestOffset => {
            let (omega, res) = offset_search_deg4(c).map_err(|e| e.to_string())?;
            Ok((res.best, format!("omega={omega}")))
        }
        Method::BestOffsetD3 => {
            let (jumps, res) = offset_search_deg3(c).map_err(|e| e.to_string())?;
            Ok((res.best, fmt_jumps(&jumps)))
        }
        Method::Coprime => build(coprime_circulant(c), String::new()),
        Method::Sixfold if c.n_s == 6 * c.n_o => build(deg3_sixfold(c.n_o), String::new()),
        Method::Sixfold => Err(format!("sixfold needs n_s = 6 n_o, got {} x {}", c.n_s, c.n_o)),
        Method::FixedOffset(omega) => build(offset_torus(c, omega), format!("omega={omega}")),
        Method::Sample(delta) => build(
            sample_regular(c.n(), delta, seed, None, Some(c)),
            format!("delta={delta}"),
        ),
        Method::Prgs => build(prgs_build(c, &PrgsConfig::new(r, seed)), format!("r={r}")),
        Method::AnnealFree | Method::AnnealRange => {
            let range = (method == Method::AnnealRange).then_some(r);
            let initial = sample_regular(c.n(), 4, seed, range, Some(c)).map_err(|e| e.to_string())?;
            let cfg = sweep_schedule(&initial, seed, range);
            let res = anneal(&initial, &cfg).map_err(|e| e.to_string())?;
            let param = range.map(|r| format!("r={r}")).unwrap_or_default();
            Ok((res.best, param))
        }
        Method::BoundVs(_) | Method::BoundMoore(_) => unreachable!("bound rows have no graph"),
    }
}

fn compute_row(method: Method, c: Constellation, r: f64, seed: Option<u64>) -> Result<Row, String> {
    let started = Instant::now();
    let n = c.n();
    match method {
        Method::BoundVs(delta) => {
            let vs = vs_bound(n, delta).expect("plan only emits vs rows for delta 3 or 4");
            let moore = moore_lb(n, delta);
            Ok(Row {
                c,
                method: method.name(),
                param: format!("delta={delta}"),
                aspl: vs.to_f64(),
                diameter: Some(vs.depth()),
                lb_vs: Some(vs.to_f64()),
                lb_moore: Some(moore.to_f64()),
                seed: None,
                runtime_ms: started.elapsed().as_millis(),
            })
        }
        Method::BoundMoore(delta) => {
            let moore = moore_lb(n, delta);
            Ok(Row {
                c,
                method: method.name(),
                param: format!("delta={delta}"),
                aspl: moore.to_f64(),
                diameter: Some(moore.depth()),
                lb_vs: None,
                lb_moore: Some(moore.to_f64()),
                seed: None,
                runtime_ms: started.elapsed().as_millis(),
            })
        }
        _ => {
            let (g, param) = graph_for(method, c, r, seed.unwrap_or_default())?;
            let (aspl, diameter) = g.path_metrics().map_err(|e| e.to_string())?;
            let delta = g.delta();
            Ok(Row {
                c,
                method: method.name(),
                param,
                aspl: frac_f64(aspl),
                diameter: Some(diameter),
                lb_vs: method
                    .symmetric()
                    .then(|| vs_bound(n, delta).map(|b| b.to_f64()))
                    .flatten(),
                lb_moore: (delta >= 2).then(|| moore_lb(n, delta).to_f64()),
                seed,
                runtime_ms: started.elapsed().as_millis(),
            })
        }
    }
}

pub fn run(plan: &Plan, out: &Path, plot_script: bool) -> Result<(), Failure> {
    let mut tasks = Vec::new();
    for &(n_s, n_o) in &plan.sizes {
        let c = Constellation::new(n_s, n_o);
        for &method in &plan.methods {
            if method.seeded() {
                for s in 0..plan.seeds {
                    tasks.push((method, c, Some(plan.base_seed + s)));
                }
            } else {
                tasks.push((method, c, None));
            }
        }
    }
    let rows: Vec<_> = tasks
        .par_iter()
        .map(|&(method, c, seed)| (method, c, seed, compute_row(method, c, plan.r, seed)))
        .collect();

    let mut wtr = csv::Writer::from_path(out).map_err(Failure::Csv)?;
    wtr.write_record(CSV_HEADER).map_err(Failure::Csv)?;
    let mut written = 0;
    for (method, c, seed, row) in rows {
        match row {
            Ok(row) => {
                wtr.write_record(row.record()).map_err(Failure::Csv)?;
                written += 1;
            }
            Err(reason) => eprintln!(
                "skip {} at {} x {}{}: {reason}",
                method.name(),
                c.n_s,
                c.n_o,
                seed.map(|s| format!(" seed {s}")).unwrap_or_default()
            ),
        }
    }
    wtr.flush().map_err(Failure::Io)?;
    println!("wrote {written} rows to {}", out.display());
    if plot_script {
        let script = emit_plot_script(out, plan)?;
        println!("wrote {}", script.display());
    }
    Ok(())
}

/// A gnuplot script plotting ASPL per method against the plan's abscissa.
fn emit_plot_script(csv_path: &Path, plan: &Plan) -> Result<std::path::PathBuf, Failure> {
    let script_path = csv_path.with_extension("gp");
    let csv_name = csv_path
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_else(|| csv_path.display().to_string());
    let mut out = std::fs::File::create(&script_path).map_err(Failure::Io)?;
    let (x_label, x_col) = plan.x_column;
    writeln!(out, "set datafile separator \",\"")?;
    writeln!(out, "set xlabel \"{x_label}\"")?;
    writeln!(out, "set ylabel \"aspl\"")?;
    writeln!(out, "set key top left")?;
    writeln!(out, "set terminal pngcairo size 900,600")?;
    writeln!(out, "set output \"{}.png\"", csv_name.trim_end_matches(".csv"))?;
    let series: Vec<String> = plan
        .methods
        .iter()
        .map(|m| {
            format!(
                "\"{csv_name}\" every ::1 using {x_col}:(strcol(4) eq \"{name}\" ? column(6) : 1/0) \
                 with linespoints title \"{name}\"",
                name = m.name()
            )
        })
        .collect();
    writeln!(out, "plot \\\n  {}", series.join(", \\\n  "))?;
    Ok(script_path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_plans_cover_their_methods() {
        let cfg = BTreeMap::new();
        let plan = plan_for(ExperimentId::OffsetSweep, &cfg, 0).unwrap();
        assert_eq!(plan.sizes.len(), 151);
        assert!(plan.sizes.iter().all(|&(_, n_o)| n_o == 4));
        assert_eq!(plan.methods.len(), 4);

        let plan = plan_for(ExperimentId::RangeScaling, &cfg, 0).unwrap();
        assert!(plan.sizes.iter().all(|&(s, o)| s == o));
    }

    #[test]
    fn config_overrides_ranges_and_methods() {
        let cfg = config::parse("ns = 8..12:2\nno = 6\nseeds = 3\nmethod = mesh,lb_moore\n").unwrap();
        let plan = plan_for(ExperimentId::Custom, &cfg, 5).unwrap();
        assert_eq!(plan.sizes, vec![(8, 6), (10, 6), (12, 6)]);
        assert_eq!(plan.methods, vec![Method::Mesh, Method::BoundMoore(4)]);
        assert_eq!(plan.seeds, 3);
        assert_eq!(plan.base_seed, 5);
    }

    #[test]
    fn method_names_round_trip() {
        for name in [
            "mesh",
            "honeycomb",
            "sqrt_offset",
            "best_offset",
            "best_offset_d3",
            "coprime",
            "sixfold",
            "sample",
            "prgs",
            "anneal_unconstrained",
            "anneal_constrained",
            "lb",
            "lb_moore",
        ] {
            assert_eq!(Method::from_name(name, 4).unwrap().name(), name);
        }
        assert_eq!(Method::from_name("offset:3", 4).unwrap(), Method::FixedOffset(3));
        assert!(Method::from_name("lb", 5).is_err());
        assert!(Method::from_name("bogus", 4).is_err());
    }

    #[test]
    fn bound_rows_fill_their_own_columns() {
        let row = compute_row(Method::BoundVs(4), Constellation::new(8, 4), 0.25, None).unwrap();
        let rec = row.record();
        assert_eq!(rec[3], "lb");
        assert_eq!(rec[5], rec[7], "aspl column repeats the bound");
        assert_eq!(rec[9], "1.000000");
        assert_eq!(rec[11], "", "bound rows carry no seed");
    }
}
