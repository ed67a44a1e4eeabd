//! Scenario execution.

use std::fs;
use std::path::{Path, PathBuf};

use qpair::dynamics::{
    amplitude_spectrum, beat_spectrum, fidelity, heat_currents, propagate, steady_state, synchronization_measure,
    uniform_grid, DensityMatrix, Observable, Trajectory,
};
use qpair::liouvillian::{build, gksl_diagnostics, BuildOptions, Liouvillian, Variant};
use qpair::ops::Op;
use qpair::system::QubitPairSpec;
use qpair::{Error, Result};
use rayon::prelude::*;

use crate::config::{Format, Grid, RunConfig, ScenarioConfig, SweepParameter, SyncConfig};
use crate::plot::{render_svg, PlotSpec};
use crate::table::Table;

/// Correlation level counted as synchronized.
pub const SYNC_LEVEL: f64 = 0.9;

/// A table and, optionally, how to plot it.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub stem: String,
    pub table: Table,
    pub plot: Option<PlotSpec>,
}

/// Generator and state diagnostics of one build.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub label: String,
    pub variant: Variant,
    pub spectral_abscissa: f64,
    pub min_rate_eigenvalue: f64,
    /// Smallest state eigenvalue along a trajectory.
    pub min_state_eigenvalue: Option<f64>,
}

/// Everything a run produces.
#[derive(Debug, Clone, Default)]
pub struct Bundle {
    pub name: String,
    pub artifacts: Vec<Artifact>,
    /// `(stem, json)` trajectory archives including the states.
    pub archives: Vec<(String, String)>,
    pub diagnostics: Vec<Diagnostic>,
    pub summary: Vec<String>,
}

impl Bundle {
    pub fn table(&self, stem: &str) -> Option<&Table> {
        self.artifacts.iter().find(|a| a.stem == stem).map(|a| &a.table)
    }
}

fn fidelity_name(a: Variant, b: Variant) -> String {
    format!("F({a},{b})")
}

fn diagnostic(label: String, variant: Variant, l: &Liouvillian, traj: Option<&Trajectory>) -> Diagnostic {
    let report = gksl_diagnostics(l);
    Diagnostic {
        label,
        variant,
        spectral_abscissa: report.spectral_abscissa,
        min_rate_eigenvalue: report.min_rate_eigenvalue,
        min_state_eigenvalue: traj.map(|t| t.check().min_eigenvalue),
    }
}

/// Runs `config` on the current rayon pool.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Bundle> {
    config.validate()?;
    let mut bundle = Bundle {
        name: if config.name.is_empty() { "scenario".into() } else { config.name.clone() },
        ..Default::default()
    };
    match &config.run {
        RunConfig::Trajectory {
            t_max,
            dt,
            fidelity,
            spectrum,
            synchronization,
        } => run_trajectory(config, *t_max, *dt, fidelity, *spectrum, synchronization.as_ref(), &mut bundle)?,
        RunConfig::SteadySweep {
            parameter,
            grid,
            fidelity,
        } => run_sweep(config, *parameter, grid, fidelity, false, &mut bundle)?,
        RunConfig::HeatSweep { parameter, grid } => run_sweep(config, *parameter, grid, &[], true, &mut bundle)?,
        RunConfig::ValidityScan {
            lambda,
            omega_minus,
            reference,
            threshold,
        } => run_scan(config, lambda, omega_minus, *reference, *threshold, &mut bundle)?,
    }
    Ok(bundle)
}

/// Runs `config` on a pool of `workers` threads (rayon's default when `None`).
pub fn run_with_workers(config: &ScenarioConfig, workers: Option<usize>) -> Result<Bundle> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    pool.install(|| run_scenario(config))
}

fn observables(config: &ScenarioConfig) -> Vec<Observable> {
    if config.observables.is_empty() {
        vec![Observable::Sz1]
    } else {
        config.observables.clone()
    }
}

/// First time after which `|c| >= level` holds at every remaining sample.
pub fn sustained_onset(times: &[f64], c: &[Option<f64>], level: f64) -> Option<f64> {
    let mut onset = None;
    for (t, v) in times.iter().zip(c) {
        match v {
            Some(x) if x.abs() >= level => {
                onset.get_or_insert(*t);
            }
            _ => onset = None,
        }
    }
    onset
}

fn run_trajectory(
    config: &ScenarioConfig,
    t_max: f64,
    dt: f64,
    pairs: &[[Variant; 2]],
    spectrum: Option<Observable>,
    sync: Option<&SyncConfig>,
    bundle: &mut Bundle,
) -> Result<()> {
    let spec = config.spec()?;
    let baths = config.baths();
    let opts = config.options.build_options();
    let rho0 = config.initial_state.density_matrix()?;
    let n = (t_max / dt + 1e-9).floor() as usize + 1;
    let times = uniform_grid(0.0, dt, n);
    // Labels follow the requested variant: with `--secular full` a GP
    // build reports itself as GF.
    let runs: Vec<(Variant, Liouvillian, Trajectory)> = config
        .variants
        .par_iter()
        .map(|v| {
            let l = build(&spec, &baths, *v, &opts)?;
            let traj = propagate(&l.matrix, &rho0, &times)?;
            Ok((*v, l, traj))
        })
        .collect::<Result<_>>()?;
    let name = bundle.name.clone();
    let observables = observables(config);

    let mut table = Table::new("t", times.clone());
    for (v, l, traj) in &runs {
        for o in &observables {
            table.push(format!("{v}.{o}"), traj.series(*o));
        }
        bundle
            .diagnostics
            .push(diagnostic(format!("{name} {v}"), *v, l, Some(traj)));
        bundle
            .archives
            .push((format!("{name}_{v}"), traj.archive(&observables).to_json()?));
    }
    bundle.artifacts.push(Artifact {
        stem: format!("{name}_observables"),
        table,
        plot: Some(PlotSpec {
            title: format!("{name}: observables"),
            ..Default::default()
        }),
    });

    let trajectory_of = |v: Variant| &runs[config.variants.iter().position(|x| *x == v).unwrap()].2;
    if !pairs.is_empty() {
        let mut table = Table::new("t", times.clone());
        for [a, b] in pairs {
            let (ta, tb) = (trajectory_of(*a), trajectory_of(*b));
            let f: Vec<f64> = ta
                .states
                .par_iter()
                .zip(&tb.states)
                .map(|(x, y)| fidelity(x, y))
                .collect::<Result<_>>()?;
            let min = f.iter().copied().fold(1.0, f64::min);
            bundle.summary.push(format!("min {} = {min:.6}", fidelity_name(*a, *b)));
            table.push(fidelity_name(*a, *b), f);
        }
        bundle.artifacts.push(Artifact {
            stem: format!("{name}_fidelity"),
            table,
            plot: Some(PlotSpec {
                title: format!("{name}: fidelity"),
                ..Default::default()
            }),
        });
    }

    if let Some(o) = spectrum {
        let mut table: Option<Table> = None;
        for (v, _, traj) in &runs {
            let series = traj.series(o);
            let s = amplitude_spectrum(&times, &series)?;
            let t = table.get_or_insert_with(|| Table::new("omega", s.frequencies.clone()));
            t.push(format!("{v}.{o}"), s.amplitudes);
            match beat_spectrum(&times, &series)? {
                Some(p) => bundle.summary.push(format!(
                    "{v} {o}: dominant peak at omega = {:.5} with amplitude {:.3e}",
                    p.frequency, p.amplitude
                )),
                None => bundle.summary.push(format!("{v} {o}: no spectral peak")),
            }
        }
        if let Some(table) = table {
            bundle.artifacts.push(Artifact {
                stem: format!("{name}_spectrum"),
                table,
                plot: Some(PlotSpec {
                    title: format!("{name}: amplitude spectrum of {o}"),
                    ..Default::default()
                }),
            });
        }
    }

    if let Some(sync) = sync {
        let window = sync.window.unwrap_or(10.0 * std::f64::consts::PI / spec.omega_minus());
        let mut table = Table::new("t", times.clone());
        for (v, _, traj) in &runs {
            let c = synchronization_measure(&times, &traj.series(sync.a), &traj.series(sync.b), window)?;
            match sustained_onset(&times, &c, SYNC_LEVEL) {
                Some(t) => bundle.summary.push(format!(
                    "{v}: |C({},{})| >= {SYNC_LEVEL} sustained from t = {t}",
                    sync.a, sync.b
                )),
                None => bundle.summary.push(format!(
                    "{v}: |C({},{})| >= {SYNC_LEVEL} not sustained",
                    sync.a, sync.b
                )),
            }
            table.push(format!("C({v})"), c.into_iter().map(|x| x.unwrap_or(f64::NAN)).collect());
        }
        bundle.artifacts.push(Artifact {
            stem: format!("{name}_synchronization"),
            table,
            plot: Some(PlotSpec {
                title: format!("{name}: windowed correlation of {} and {} (window {window:.1})", sync.a, sync.b),
                ..Default::default()
            }),
        });
    }
    Ok(())
}

/// Steady state and heat currents of every variant at one parameter point.
struct PointResult {
    states: Vec<Op>,
    currents: Vec<Vec<f64>>,
}

fn solve_point(
    spec: &QubitPairSpec,
    config: &ScenarioConfig,
    opts: &BuildOptions,
    rho0: &DensityMatrix,
    label: &str,
) -> Result<(PointResult, Vec<Diagnostic>)> {
    let baths = config.baths();
    let mut states = Vec::new();
    let mut currents = Vec::new();
    let mut diags = Vec::new();
    for v in &config.variants {
        let l = build(spec, &baths, *v, opts)?;
        let ss = steady_state(&l.matrix, Some(rho0))?;
        currents.push(heat_currents(&l, &ss.state).currents);
        states.push(ss.state);
        diags.push(diagnostic(format!("{label} {v}"), *v, &l, None));
    }
    Ok((PointResult { states, currents }, diags))
}

fn run_sweep(
    config: &ScenarioConfig,
    parameter: SweepParameter,
    grid: &Grid,
    pairs: &[[Variant; 2]],
    heat: bool,
    bundle: &mut Bundle,
) -> Result<()> {
    let opts = config.options.build_options();
    let rho0 = config.initial_state.density_matrix()?;
    let xs = grid.values();
    let name = bundle.name.clone();
    let results: Vec<(PointResult, Vec<Diagnostic>)> = xs
        .par_iter()
        .map(|x| {
            let spec = parameter.apply(&config.system, *x)?;
            solve_point(&spec, config, &opts, &rho0, &format!("{name} {}={x:e}", parameter.name()))
        })
        .collect::<Result<_>>()?;
    let index = |v: Variant| config.variants.iter().position(|x| *x == v).unwrap();
    let mut table = Table::new(parameter.name(), xs.clone());
    let mut series = Vec::new();
    if heat {
        for (k, v) in config.variants.iter().enumerate() {
            for b in 0..config.baths.len() {
                let col = format!("{v}.J{}", b + 1);
                series.push(col.clone());
                table.push(col, results.iter().map(|(r, _)| r.currents[k][b]).collect());
            }
            let sums: Vec<f64> = results.iter().map(|(r, _)| r.currents[k].iter().sum()).collect();
            let worst = sums.iter().fold(0.0, |m: f64, s| m.max(s.abs()));
            bundle.summary.push(format!("{v}: max |sum of currents| = {worst:.2e}"));
            table.push(format!("{v}.Jsum"), sums);
        }
    } else {
        for (k, v) in config.variants.iter().enumerate() {
            for o in &config.observables {
                let col = format!("{v}.{o}");
                series.push(col.clone());
                table.push(col, results.iter().map(|(r, _)| o.evaluate(&r.states[k])).collect());
            }
        }
        for [a, b] in pairs {
            let f: Vec<f64> = results
                .iter()
                .map(|(r, _)| fidelity(&r.states[index(*a)], &r.states[index(*b)]))
                .collect::<Result<_>>()?;
            let (arg, min) = f
                .iter()
                .enumerate()
                .fold((0, 1.0), |best, (i, v)| if *v < best.1 { (i, *v) } else { best });
            bundle.summary.push(format!(
                "min {} = {min:.6} at {} = {:e}",
                fidelity_name(*a, *b),
                parameter.name(),
                xs[arg]
            ));
            let col = fidelity_name(*a, *b);
            series.push(col.clone());
            table.push(col, f);
        }
    }
    bundle.diagnostics.extend(results.into_iter().flat_map(|(_, d)| d));
    let kind = if heat { "heat currents" } else { "steady states" };
    bundle.artifacts.push(Artifact {
        stem: format!("{name}_{}", if heat { "heat" } else { "steady" }),
        table,
        plot: Some(PlotSpec {
            title: format!("{name}: {kind}"),
            log_x: grid.is_log(),
            series,
        }),
    });
    Ok(())
}

/// Contiguous runs of grid values where `ok` holds, as `[a, b]` strings.
fn intervals(xs: &[f64], ok: &[bool]) -> Vec<String> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, &flag) in ok.iter().enumerate() {
        match (flag, start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                out.push(format!("[{:.1e}, {:.1e}]", xs[s], xs[k - 1]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(format!("[{:.1e}, {:.1e}]", xs[s], xs[xs.len() - 1]));
    }
    out
}

fn run_scan(
    config: &ScenarioConfig,
    lambda: &Grid,
    omega_minus: &Grid,
    reference: Variant,
    threshold: f64,
    bundle: &mut Bundle,
) -> Result<()> {
    let opts = config.options.build_options();
    let rho0 = config.initial_state.density_matrix()?;
    let lambdas = lambda.values();
    let detunings = omega_minus.values();
    let name = bundle.name.clone();
    let r = config.variants.iter().position(|v| *v == reference).unwrap();
    let points: Vec<(f64, f64)> = detunings
        .iter()
        .flat_map(|w| lambdas.iter().map(move |l| (*w, *l)))
        .collect();
    let solved: Vec<(PointResult, Vec<Diagnostic>)> = points
        .par_iter()
        .map(|(w, l)| {
            let spec = QubitPairSpec::new(1.0 - w, config.system.coupling.with_lambda(*l))?;
            solve_point(&spec, config, &opts, &rho0, &format!("{name} omega_minus={w:e} lambda={l:e}"))
        })
        .collect::<Result<_>>()?;
    let (results, diagnostics): (Vec<PointResult>, Vec<Vec<Diagnostic>>) = solved.into_iter().unzip();
    bundle.diagnostics.extend(diagnostics.into_iter().flatten());
    let mut table = Table::new("lambda", lambdas.clone());
    bundle.summary.push(format!(
        "regions where F({reference}, X) >= {threshold} over lambda in [{:.1e}, {:.1e}]",
        lambdas[0],
        lambdas[lambdas.len() - 1]
    ));
    for (i, w) in detunings.iter().enumerate() {
        let chunk = &results[i * lambdas.len()..(i + 1) * lambdas.len()];
        for (k, v) in config.variants.iter().enumerate() {
            if k == r {
                continue;
            }
            let f: Vec<f64> = chunk
                .iter()
                .map(|p| fidelity(&p.states[r], &p.states[k]))
                .collect::<Result<_>>()?;
            let ok: Vec<bool> = f.iter().map(|x| *x >= threshold).collect();
            let valid = intervals(&lambdas, &ok);
            bundle.summary.push(format!(
                "  omega_- = {w:.1e}  {v}: {}",
                if valid.is_empty() { "nowhere".to_string() } else { valid.join(" ") }
            ));
            table.push(format!("{}[omega_minus={w:e}]", fidelity_name(reference, *v)), f);
        }
    }
    bundle.artifacts.push(Artifact {
        stem: format!("{name}_validity"),
        table,
        plot: Some(PlotSpec {
            title: format!("{name}: steady-state fidelity against {reference}"),
            log_x: lambda.is_log(),
            series: vec![],
        }),
    });
    Ok(())
}

/// Writes the bundle into `dir`. Any plotted table is also written as CSV.
pub fn write_bundle(bundle: &Bundle, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |file: String, bytes: &[u8]| -> Result<()> {
        let path = dir.join(file);
        fs::write(&path, bytes)?;
        written.push(path);
        Ok(())
    };
    let svg = formats.contains(&Format::Svg);
    for a in &bundle.artifacts {
        if formats.contains(&Format::Csv) || svg {
            let mut buf = Vec::new();
            a.table.write_csv(&mut buf)?;
            put(format!("{}.csv", a.stem), &buf)?;
        }
        if formats.contains(&Format::Json) {
            put(format!("{}.json", a.stem), a.table.to_json()?.as_bytes())?;
        }
        if let (true, Some(spec)) = (svg, &a.plot) {
            put(format!("{}.svg", a.stem), render_svg(&a.table, spec)?.as_bytes())?;
        }
    }
    if formats.contains(&Format::Json) {
        for (stem, json) in &bundle.archives {
            put(format!("{stem}.json"), json.as_bytes())?;
        }
    }
    if !bundle.summary.is_empty() {
        put(format!("{}_summary.txt", bundle.name), (bundle.summary.join("\n") + "\n").as_bytes())?;
    }
    Ok(written)
}
