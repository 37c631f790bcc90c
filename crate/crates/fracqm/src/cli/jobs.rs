//! Turns a config into independent jobs, then runs them on a worker pool.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use fracqm::dynamics::{evolve_free, propagate_with_kernel, splitstep_frames};
use fracqm::eigensolve::{build_hamiltonian_matrix_with, eigenstates, imaginary_time_ground_state};
use fracqm::foxh::{self, SeriesControl};
use fracqm::riesz::{current_density, Parity};
use fracqm::spectra::{self, Level, Method, Model, Spectrum};
use fracqm::statmech;
use fracqm::validation::{self, CriterionReport};
use fracqm::{FqmError, FqmParams, Grid1D, Potential, Regularization, WaveFunction};

use super::config::{Config, EigenMethod, EvolveMethod, InitialState, KernelKind, OneOrMany};
use super::error::CliError;
use super::output::{tag, Sink};
use super::Command;

/// Parameters a job ran with, embedded in every file it writes.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved<S: Serialize> {
    pub params: FqmParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid1D>,
    pub series: SeriesControl,
    pub regularization: Regularization,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<Potential>,
    pub job: S,
}

pub enum Job {
    Evolve(Resolved<EvolveJob>),
    Kernel(Resolved<KernelJob>),
    Spectra(Resolved<SpectraJob>),
    Eigen(Resolved<EigenJob>),
    Statmech(Resolved<StatmechJob>),
    Validate(u32),
}

#[derive(Debug, Clone, Serialize)]
pub struct EvolveJob {
    pub method: EvolveMethod,
    pub t: f64,
    pub n_frames: usize,
    pub n_steps: usize,
    pub initial: InitialState,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelJob {
    pub kind: KernelKind,
    pub at: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectraJob {
    pub n_max: u32,
    pub models: Vec<Model>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenJob {
    pub method: EigenMethod,
    pub k: usize,
    pub states: bool,
    pub beta_max: f64,
    pub n_steps: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatmechJob {
    pub beta: f64,
    pub n_steps: usize,
    pub diagonal: bool,
}

struct Base {
    series: SeriesControl,
    reg: Regularization,
}

impl Base {
    fn wrap<S: Serialize>(&self, params: FqmParams, grid: Option<Grid1D>, potential: Option<Potential>, job: S) -> Resolved<S> {
        Resolved { params, grid, series: self.series, regularization: self.reg, potential, job }
    }
}

fn section<'a, T>(s: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    s.as_ref().ok_or_else(|| CliError::missing(name))
}

fn sweep_path(name: &str, v: &OneOrMany<f64>, i: usize) -> String {
    match v {
        OneOrMany::One(_) => name.to_string(),
        OneOrMany::Many(_) => format!("{name}[{i}]"),
    }
}

fn finite(path: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::domain(path, format!("{v} is not finite")))
    }
}

fn positive(path: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::domain(path, format!("{v} must be positive")))
    }
}

fn check_model(m: &Model, i: usize, grid: Option<Grid1D>) -> Result<(), CliError> {
    let at = |f: &str| format!("spectra.models[{i}].{f}");
    match *m {
        Model::InfiniteWell { a } => positive(&at("a"), a),
        Model::BohrAtom { z, e2 } => positive(&at("z"), z).and(positive(&at("e2"), e2)),
        Model::Oscillator { q2, beta_exp } => positive(&at("q2"), q2).and(positive(&at("beta_exp"), beta_exp)),
        Model::DeltaWell { gamma } => positive(&at("gamma"), gamma),
        Model::Linear { f } => positive(&at("f"), f),
        Model::Numerical { ref potential } => {
            if grid.is_none() {
                return Err(CliError::missing("grid"));
            }
            potential.validate().map_err(|e| CliError::domain(super::config::field_path(&at("potential"), &e), e.to_string()))
        }
    }
}

/// Resolves and validates every job before anything runs.
pub fn plan(cmd: Command, cfg: &Config) -> Result<Vec<(String, Job)>, CliError> {
    let all = if cmd == Command::Validate { vec![] } else { cfg.params()? };
    let series = cfg.series()?;
    let reg = cfg.regularization;
    positive("regularization.wall_height", reg.wall_height)?;
    if let Some(w) = reg.delta_width {
        positive("regularization.delta_width", w)?;
    }
    let base = Base { series, reg };
    let mut jobs = vec![];
    match cmd {
        Command::Evolve => {
            let s = section(&cfg.evolve, "evolve")?;
            let grid = cfg.grid()?;
            let v = cfg.potential()?;
            if s.method != EvolveMethod::SplitStep && v != Potential::Free {
                return Err(CliError::domain("potential", "spectral and kernel evolution are free-particle only; use method = \"split_step\""));
            }
            if s.method == EvolveMethod::SplitStep && !v.is_real() {
                return Err(CliError::domain("potential", "split-step needs a real potential"));
            }
            if s.n_frames == 0 {
                return Err(CliError::domain("evolve.n_frames", "must be at least 1"));
            }
            if s.method == EvolveMethod::SplitStep && (s.n_steps == 0 || s.n_steps % s.n_frames != 0) {
                return Err(CliError::domain("evolve.n_steps", "must be a positive multiple of n_frames"));
            }
            match s.initial {
                InitialState::Gaussian { x0, sigma, p0 } => {
                    finite("evolve.initial.x0", x0)?;
                    finite("evolve.initial.p0", p0)?;
                    positive("evolve.initial.sigma", sigma)?;
                }
                InitialState::PlaneWave { k } => {
                    if k >= grid.n_points() {
                        return Err(CliError::domain("evolve.initial.k", format!("mode {k} not below n_points {}", grid.n_points())));
                    }
                }
            }
            let ts = s.t.values();
            for (i, &t) in ts.iter().enumerate() {
                let path = sweep_path("evolve.t", &s.t, i);
                finite(&path, t)?;
                if t == 0.0 {
                    return Err(CliError::domain(path, "final time must be nonzero"));
                }
            }
            let v = (v != Potential::Free).then_some(v);
            for p in &all {
                for &t in &ts {
                    let name = format!("evolve-{:03}-alpha{}-t{}", jobs.len(), tag(p.alpha), tag(t));
                    let job = EvolveJob { method: s.method, t, n_frames: s.n_frames, n_steps: s.n_steps, initial: s.initial };
                    jobs.push((name, Job::Evolve(base.wrap(*p, Some(grid), v.clone(), job))));
                }
            }
        }
        Command::Kernel => {
            let s = section(&cfg.kernel, "kernel")?;
            if s.x.n == 0 {
                return Err(CliError::domain("kernel.x.n", "must be at least 1"));
            }
            finite("kernel.x.min", s.x.min)?;
            finite("kernel.x.max", s.x.max)?;
            let at = s.at.values();
            for (i, &a) in at.iter().enumerate() {
                let path = sweep_path("kernel.at", &s.at, i);
                match s.kind {
                    KernelKind::Time => {
                        finite(&path, a)?;
                        if a == 0.0 {
                            return Err(CliError::domain(path, "the propagator is singular at t = 0"));
                        }
                    }
                    KernelKind::Thermal => positive(&path, a)?,
                }
            }
            for p in &all {
                for &a in &at {
                    let var = if s.kind == KernelKind::Time { "t" } else { "beta" };
                    let name = format!("kernel-{:03}-alpha{}-{var}{}", jobs.len(), tag(p.alpha), tag(a));
                    let job = KernelJob { kind: s.kind, at: a, x: s.x.points() };
                    jobs.push((name, Job::Kernel(base.wrap(*p, None, None, job))));
                }
            }
        }
        Command::Spectra => {
            let s = section(&cfg.spectra, "spectra")?;
            if s.n_max == 0 {
                return Err(CliError::domain("spectra.n_max", "must be at least 1"));
            }
            if s.models.is_empty() {
                return Err(CliError::domain("spectra.models", "no models given"));
            }
            let grid = cfg.grid.is_some().then(|| cfg.grid()).transpose()?;
            for (i, m) in s.models.iter().enumerate() {
                check_model(m, i, grid)?;
            }
            for p in &all {
                let name = format!("spectra-{:03}-alpha{}", jobs.len(), tag(p.alpha));
                let job = SpectraJob { n_max: s.n_max, models: s.models.clone() };
                jobs.push((name, Job::Spectra(base.wrap(*p, grid, None, job))));
            }
        }
        Command::Eigen => {
            let s = section(&cfg.eigen, "eigen")?;
            let grid = cfg.grid()?;
            let v = cfg.potential()?;
            if !v.is_real() {
                return Err(CliError::domain("potential", "eigensolve needs a real potential"));
            }
            if s.k == 0 || s.k > grid.n_points() {
                return Err(CliError::domain("eigen.k", format!("must be in 1..={}", grid.n_points())));
            }
            if s.method == EigenMethod::ImaginaryTime {
                positive("eigen.beta_max", s.beta_max)?;
                if s.n_steps == 0 {
                    return Err(CliError::domain("eigen.n_steps", "must be at least 1"));
                }
            }
            for p in &all {
                let name = format!("eigen-{:03}-alpha{}", jobs.len(), tag(p.alpha));
                let job = EigenJob { method: s.method, k: s.k, states: s.states, beta_max: s.beta_max, n_steps: s.n_steps };
                jobs.push((name, Job::Eigen(base.wrap(*p, Some(grid), Some(v.clone()), job))));
            }
        }
        Command::Statmech => {
            let s = section(&cfg.statmech, "statmech")?;
            let grid = cfg.grid()?;
            let v = cfg.potential()?;
            if !v.is_real() {
                return Err(CliError::domain("potential", "the Bloch equation needs a real potential"));
            }
            positive("statmech.steps_per_beta", s.steps_per_beta)?;
            let betas = s.beta.values();
            for (i, &b) in betas.iter().enumerate() {
                positive(&sweep_path("statmech.beta", &s.beta, i), b)?;
            }
            for p in &all {
                for &b in &betas {
                    let name = format!("statmech-{:03}-alpha{}-beta{}", jobs.len(), tag(p.alpha), tag(b));
                    let n_steps = ((b * s.steps_per_beta).ceil() as usize).max(1);
                    let job = StatmechJob { beta: b, n_steps, diagonal: s.diagonal };
                    jobs.push((name, Job::Statmech(base.wrap(*p, Some(grid), Some(v.clone()), job))));
                }
            }
        }
        Command::Validate => {
            let s = cfg.validate.clone().unwrap_or_default();
            for (i, &c) in s.criteria.iter().enumerate() {
                if !validation::CRITERIA.iter().any(|k| k.0 == c) {
                    return Err(CliError::domain(format!("validate.criteria[{i}]"), format!("no criterion {c}")));
                }
                jobs.push((format!("validate-c{c}"), Job::Validate(c)));
            }
        }
    }
    Ok(jobs)
}

/// What a finished job hands back.
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub report: Option<CriterionReport>,
}

pub fn run_all(jobs: &[(String, Job)], sink: &Sink, workers: usize) -> Result<Vec<Outcome>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::domain("workers", e.to_string()))?;
    let results: Vec<Result<Outcome, CliError>> = pool.install(|| jobs.par_iter().map(|(name, job)| run_one(name, job, sink)).collect());
    results.into_iter().collect()
}

fn compute(job: &str) -> impl Fn(FqmError) -> CliError + '_ {
    move |e| CliError::Compute { job: job.to_string(), message: e.to_string() }
}

fn run_one(name: &str, job: &Job, sink: &Sink) -> Result<Outcome, CliError> {
    let err = compute(name);
    let files = match job {
        Job::Evolve(r) => evolve(name, r, sink, &err)?,
        Job::Kernel(r) => kernel(name, r, sink, &err)?,
        Job::Spectra(r) => vec![sink.json(name, r, &spectra_results(r).map_err(&err)?)?],
        Job::Eigen(r) => eigen(name, r, sink, &err)?,
        Job::Statmech(r) => statmech_job(name, r, sink, &err)?,
        Job::Validate(id) => {
            let report = validation::run_criterion(*id).map_err(&err)?;
            let file = sink.json(name, &serde_json::json!({ "criterion": id }), &report)?;
            return Ok(Outcome { files: vec![file], report: Some(report) });
        }
    };
    Ok(Outcome { files, report: None })
}

#[derive(Serialize)]
struct FrameSummary {
    t: f64,
    norm: f64,
    boundary_mass: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
}

fn evolve(name: &str, r: &Resolved<EvolveJob>, sink: &Sink, err: &dyn Fn(FqmError) -> CliError) -> Result<Vec<PathBuf>, CliError> {
    let grid = r.grid.expect("planned with a grid");
    let p = &r.params;
    let j = &r.job;
    let psi0 = match j.initial {
        InitialState::Gaussian { x0, sigma, p0 } => WaveFunction::gaussian(grid, p.hbar, x0, sigma, p0),
        InitialState::PlaneWave { k } => WaveFunction::plane_wave(grid, p.hbar, k),
    };
    let times: Vec<f64> = (0..=j.n_frames).map(|k| j.t * k as f64 / j.n_frames as f64).collect();
    let frames: Vec<WaveFunction> = match j.method {
        EvolveMethod::Spectral => times.iter().map(|&t| evolve_free(&psi0, t, p)).collect(),
        EvolveMethod::Kernel => {
            let mut out = vec![psi0.clone()];
            for &t in &times[1..] {
                out.push(propagate_with_kernel(&psi0, t, p, &r.series).map_err(err)?);
            }
            out
        }
        EvolveMethod::SplitStep => {
            let v = r.potential.clone().unwrap_or(Potential::Free);
            splitstep_frames(&psi0, &v, j.t, j.n_steps, j.n_steps / j.n_frames, p).map_err(err)?
        }
    };
    let mut rows = Vec::with_capacity(frames.len() * grid.n_points());
    let mut summary = vec![];
    for (f, &t) in frames.iter().zip(&times) {
        let obs = current_density(f, p).map_err(err)?;
        for (k, x) in grid.xs().into_iter().enumerate() {
            rows.push(vec![t, x, obs.rho[k], obs.j[k]]);
        }
        summary.push(FrameSummary { t, norm: f.norm(), boundary_mass: f.boundary_mass(), warning: f.boundary_warning().or(obs.singular_warning()) });
    }
    Ok(vec![sink.csv(name, r, &["t", "x", "rho", "j"], rows)?, sink.json(name, r, &summary)?])
}

fn kernel(name: &str, r: &Resolved<KernelJob>, sink: &Sink, err: &dyn Fn(FqmError) -> CliError) -> Result<Vec<PathBuf>, CliError> {
    let j = &r.job;
    let rows: Vec<Vec<f64>> = match j.kind {
        KernelKind::Time => j
            .x
            .par_iter()
            .map(|&x| foxh::free_kernel_1d(x, j.at, &r.params, &r.series).map(|k| vec![x, k.value.re, k.value.im]))
            .collect::<Result<_, _>>()
            .map_err(err)?,
        KernelKind::Thermal => j
            .x
            .par_iter()
            .map(|&x| foxh::free_density_matrix_1d(x, j.at, &r.params, &r.series).map(|v| vec![x, v]))
            .collect::<Result<_, _>>()
            .map_err(err)?,
    };
    let header: &[&str] = if j.kind == KernelKind::Time { &["x", "re", "im"] } else { &["x", "rho"] };
    Ok(vec![sink.csv(name, r, header, rows)?])
}

fn single(model: Model, params: FqmParams, energy: f64) -> Spectrum {
    Spectrum { levels: vec![Level { n: 1, energy }], model, params, method: Method::ClosedForm }
}

fn spectra_results(r: &Resolved<SpectraJob>) -> fracqm::Result<Vec<Spectrum>> {
    let p = &r.params;
    let n = r.job.n_max;
    r.job
        .models
        .iter()
        .map(|m| match m {
            Model::InfiniteWell { a } => spectra::infinite_well_levels(*a, n, p),
            Model::BohrAtom { z, e2 } => spectra::bohr_atom(*z, *e2, n, p).map(|b| b.spectrum()),
            Model::Oscillator { q2, beta_exp } => spectra::oscillator_levels_semiclassical(*q2, *beta_exp, n - 1, p),
            Model::DeltaWell { gamma } => spectra::delta_well_energy(*gamma, p).map(|e| single(m.clone(), *p, e)),
            Model::Linear { f } => spectra::linear_potential_levels(*f, n, p, &r.series),
            Model::Numerical { potential } => {
                let grid = r.grid.expect("checked at planning");
                let h = build_hamiltonian_matrix_with(potential, grid, p, &r.regularization)?;
                fracqm::eigensolve::eigenvalues(&h, (n as usize).min(grid.n_points()))
            }
        })
        .collect()
}

#[derive(Serialize)]
struct EigenResult {
    spectrum: Spectrum,
    parities: Vec<Parity>,
}

fn eigen(name: &str, r: &Resolved<EigenJob>, sink: &Sink, err: &dyn Fn(FqmError) -> CliError) -> Result<Vec<PathBuf>, CliError> {
    let grid = r.grid.expect("planned with a grid");
    let v = r.potential.clone().expect("planned with a potential");
    let p = &r.params;
    let (spectrum, parities, states) = match r.job.method {
        EigenMethod::Dense => {
            let h = build_hamiltonian_matrix_with(&v, grid, p, &r.regularization).map_err(err)?;
            let es = eigenstates(&h, r.job.k).map_err(err)?;
            (es.spectrum, es.parities, es.states)
        }
        EigenMethod::ImaginaryTime => {
            let gs = imaginary_time_ground_state(&v, grid, p, r.job.beta_max, r.job.n_steps).map_err(err)?;
            let parity = fracqm::riesz::parity_classify(&gs.psi, 1e-6).map_err(err)?;
            let spectrum = Spectrum {
                levels: vec![Level { n: 1, energy: gs.energy }],
                model: Model::Numerical { potential: v.clone() },
                params: *p,
                method: Method::Numerical,
            };
            (spectrum, vec![parity], vec![gs.psi])
        }
    };
    let mut files = vec![sink.json(name, r, &EigenResult { spectrum, parities })?];
    if r.job.states {
        let xs = grid.xs();
        let rows = states.iter().enumerate().flat_map(|(n, s)| {
            let s = s.to_position();
            xs.iter().zip(s.values).map(move |(&x, c)| vec![(n + 1) as f64, x, c.re, c.im]).collect::<Vec<_>>()
        });
        files.push(sink.csv(&format!("{name}-states"), r, &["n", "x", "re", "im"], rows)?);
    }
    Ok(files)
}

#[derive(Serialize)]
struct StatmechResult {
    partition_function: f64,
    /// None when the potential has no pointwise form or the integral diverges.
    classical_partition_function: Option<f64>,
    free_partition_function: f64,
    thermal_length: f64,
}

fn statmech_job(name: &str, r: &Resolved<StatmechJob>, sink: &Sink, err: &dyn Fn(FqmError) -> CliError) -> Result<Vec<PathBuf>, CliError> {
    let grid = r.grid.expect("planned with a grid");
    let v = r.potential.clone().expect("planned with a potential");
    let p = &r.params;
    let b = r.job.beta;
    let rho = statmech::bloch_propagate_with(&v, grid, b, r.job.n_steps, p, &r.regularization).map_err(err)?;
    let classical = match v {
        Potential::Free => None,
        _ => statmech::classical_partition_function(&v, b, p, (f64::NEG_INFINITY, f64::INFINITY)).ok(),
    };
    let res = StatmechResult {
        partition_function: statmech::partition_function(&rho),
        classical_partition_function: classical,
        free_partition_function: grid.length() * statmech::free_trace_density(b, p).map_err(err)?,
        thermal_length: statmech::thermal_length(b, p).map_err(err)?,
    };
    let mut files = vec![sink.json(name, r, &res)?];
    if r.job.diagonal {
        let rows = grid.xs().into_iter().zip(rho.diagonal()).map(|(x, d)| vec![x, d]);
        files.push(sink.csv(&format!("{name}-diagonal"), r, &["x", "rho"], rows)?);
    }
    Ok(files)
}
