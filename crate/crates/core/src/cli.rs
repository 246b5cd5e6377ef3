//! Command-line front end. Each subcommand wraps one library operation and
//! emits a [`Report`] as CSV (default) or JSON.
//!
//! Output goes to `--out PATH`, else to `$ERGM_PHASE_OUT_DIR/<name>.<ext>`
//! when that variable is set, else to standard output. Errors are printed
//! to standard error as a JSON object with a `kind` field, and the process
//! exits with [`Error::exit_code`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::figures::{self, CouplingChoice};
use crate::finite::{GraphEnsemble, SubgraphSpec};
use crate::model::{free_energy, BetaPoint, ModelSpec, ToleranceConfig};
use crate::observables::{critical_approach_direction, divergence_probe, observables, FirstDerivatives};
use crate::output::{Cell, Format, Report, RunManifest, Table};
use crate::phase::{
    c1_curve, c2_curve, classify, corner_point, critical_curve, trace_surface, transition_beta2, PhaseClassification,
    SurfaceTrace,
};
use crate::sampler::{run_chain, ChainConfig};

pub const OUT_DIR_ENV: &str = "ERGM_PHASE_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "ergm-phase", version, about = "Phase diagram of the three-parameter edge/p-star/q-star ERGM")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Edge count of the second pattern.
    #[arg(long, default_value_t = 3)]
    pub p: u32,
    /// Edge count of the third pattern.
    #[arg(long, default_value_t = 5)]
    pub q: u32,
    #[arg(long)]
    pub tie_tol: Option<f64>,
    #[arg(long)]
    pub surface_tol: Option<f64>,
    #[arg(long)]
    pub critical_tol: Option<f64>,
    #[arg(long)]
    pub grid_points: Option<usize>,
}

impl ModelArgs {
    fn spec(&self) -> Result<ModelSpec> {
        ModelSpec::new(self.p, self.q)
    }

    fn tol(&self) -> ToleranceConfig {
        let mut t = ToleranceConfig::default();
        if let Some(x) = self.tie_tol {
            t.tie_tol = x;
        }
        if let Some(x) = self.surface_tol {
            t.surface_tol = x;
        }
        if let Some(x) = self.critical_tol {
            t.critical_tol = x;
        }
        if let Some(x) = self.grid_points {
            t.grid_points = x;
        }
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveArg {
    /// Slices at the given `b3` values.
    Surface,
    /// The `b3 = 0` slice.
    C1,
    /// The `b2 = 0` section.
    C2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Limiting free energy and its maximizers.
    FreeEnergy {
        #[arg(long, allow_hyphen_values = true)]
        beta: BetaPoint,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Dataset of one figure.
    Figure {
        #[arg(long)]
        id: u32,
        /// Grid points.
        #[arg(long, default_value_t = 401)]
        resolution: usize,
        /// Use the rounded caption couplings for figures 5, 6 and 8.
        #[arg(long)]
        caption_beta: bool,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Transition surface `b2 = r(b1)` over a grid.
    Surface {
        /// Comma-separated `b3` slices.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0, 1.0, 2.0])]
        beta3: Vec<f64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = -5.0)]
        beta1_min: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 5.0)]
        beta1_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Drop points with `r(b1) < 0`.
        #[arg(long)]
        nonneg: bool,
        #[arg(long, value_enum, default_value_t = CurveArg::Surface)]
        curve: CurveArg,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Critical curve `C3`, sampled uniformly in `u0`, or corners at given `b3`.
    CriticalCurve {
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long, value_delimiter = ',')]
        beta3: Option<Vec<f64>>,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Position of a coupling triple relative to the surface and `C3`.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        beta: BetaPoint,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// First and second derivatives of the free energy, or a divergence
    /// probe toward the corner at `--probe-beta3`.
    Observables {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "probe_beta3")]
        beta: Option<BetaPoint>,
        #[arg(long)]
        probe_beta3: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        probe_start: f64,
        #[arg(long, default_value_t = 0.5)]
        probe_ratio: f64,
        /// The default stops just above the critical tolerance.
        #[arg(long, default_value_t = 17)]
        probe_steps: usize,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Distance `|r(b1) + b1 + b3|` to the universal asymptote.
    Universality {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        beta1: Vec<f64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        beta3: f64,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Exact finite-n free energy and means by enumeration (n <= 6).
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        beta: BetaPoint,
        /// Second pattern as "n; i-j,..." (default: by edge count p).
        #[arg(long)]
        h2: Option<SubgraphSpec>,
        #[arg(long)]
        h3: Option<SubgraphSpec>,
        /// Extra pattern whose mean density is reported.
        #[arg(long)]
        target: Option<SubgraphSpec>,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Heat-bath chain trace.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        beta: BetaPoint,
        #[arg(long, default_value_t = 1000)]
        sweeps: usize,
        #[arg(long, default_value_t = 0)]
        burn_in: usize,
        #[arg(long, default_value_t = 1)]
        thin: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        h2: Option<SubgraphSpec>,
        #[arg(long)]
        h3: Option<SubgraphSpec>,
        #[command(flatten)]
        model: ModelArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FreeEnergy { .. } => "free-energy",
            Command::Figure { .. } => "figure",
            Command::Surface { .. } => "surface",
            Command::CriticalCurve { .. } => "critical-curve",
            Command::Classify { .. } => "classify",
            Command::Observables { .. } => "observables",
            Command::Universality { .. } => "universality",
            Command::Exact { .. } => "exact",
            Command::Sample { .. } => "sample",
        }
    }

    /// File stem used under the output directory.
    fn file_stem(&self) -> String {
        match self {
            Command::Figure { id, .. } => format!("figure-{id}"),
            other => other.name().to_string(),
        }
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn patterns(h2: &Option<SubgraphSpec>, h3: &Option<SubgraphSpec>, spec: &ModelSpec) -> Result<(SubgraphSpec, SubgraphSpec)> {
    let pick = |h: &Option<SubgraphSpec>, k: u32| match h {
        Some(h) if h.edge_count() != k as usize => Err(Error::Domain(format!(
            "pattern {h} has {} edges, expected {k}",
            h.edge_count()
        ))),
        Some(h) => Ok(h.clone()),
        None => SubgraphSpec::default_for_edges(k as usize),
    };
    Ok((pick(h2, spec.p())?, pick(h3, spec.q())?))
}

fn surface_table(trace: &SurfaceTrace) -> Table {
    let mut t = Table::new(&[
        "beta3", "beta1", "beta2", "u_low", "u_high", "logit_low", "logit_high", "value", "jump1", "jump2",
        "jump3", "lower", "upper", "admissible",
    ]);
    for p in &trace.points {
        t.push(vec![
            p.beta3.into(),
            p.beta1.into(),
            p.beta2.into(),
            p.u_low.into(),
            p.u_high.into(),
            p.logit_low.into(),
            p.logit_high.into(),
            p.value.into(),
            p.jumps[0].into(),
            p.jumps[1].into(),
            p.jumps[2].into(),
            p.lower.into(),
            p.upper.into(),
            p.admissible().into(),
        ]);
    }
    t
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Result<Report> {
    let format = Format::from(cli.format);
    let name = cli.command.name();
    match &cli.command {
        Command::FreeEnergy { beta, model } => {
            let (spec, tol) = (model.spec()?, model.tol());
            let fe = free_energy(beta, &spec, &tol)?;
            let mut t = Table::new(&["psi", "index", "u", "logit", "value", "second_derivative", "global"]);
            for (i, m) in fe.maximizers.locals.iter().enumerate() {
                t.push(vec![
                    fe.psi.into(),
                    i.into(),
                    m.u.into(),
                    m.logit.into(),
                    m.value.into(),
                    m.second_derivative.into(),
                    fe.maximizers.globals.contains(&i).into(),
                ]);
            }
            let manifest = RunManifest::new(name, &spec, &tol, format).param("beta", beta);
            Report::new(manifest, t).with_record(&fe)
        }
        Command::Figure {
            id,
            resolution,
            caption_beta,
            model,
        } => {
            let (spec, tol) = (model.spec()?, model.tol());
            let choice = if *caption_beta { CouplingChoice::Caption } else { CouplingChoice::Computed };
            let data = figures::figure(*id, &spec, *resolution, choice, &tol)?;
            let mut manifest = RunManifest::new(name, &spec, &tol, format)
                .param("id", id)
                .param("resolution", resolution)
                .param("caption_beta", caption_beta);
            if let Some(beta) = data.beta {
                manifest = manifest.param("beta", beta);
                if let Some(c) = figures::caption_beta2(*id) {
                    manifest = manifest.param("caption_beta2", c);
                }
            }
            Ok(Report::new(manifest, data.table))
        }
        Command::Surface {
            beta3,
            beta1_min,
            beta1_max,
            points,
            nonneg,
            curve,
            model,
        } => {
            let (spec, tol) = (model.spec()?, model.tol());
            if *points < 2 || !(beta1_min < beta1_max) {
                return Err(Error::Domain(format!(
                    "need points >= 2 and beta1_min < beta1_max, got {points}, [{beta1_min}, {beta1_max}]"
                )));
            }
            let step = (beta1_max - beta1_min) / (*points - 1) as f64;
            let grid: Vec<f64> = (0..*points)
                .map(|k| if k + 1 == *points { *beta1_max } else { beta1_min + step * k as f64 })
                .collect();
            let trace = match curve {
                CurveArg::Surface => trace_surface(beta3, &grid, &spec, *nonneg, &tol),
                CurveArg::C1 => c1_curve(&grid, &spec, &tol),
                CurveArg::C2 => c2_curve(&grid, &spec, &tol),
            };
            let mut manifest = RunManifest::new(name, &spec, &tol, format)
                .param("beta1_min", beta1_min)
                .param("beta1_max", beta1_max)
                .param("points", points)
                .param("nonneg", nonneg)
                .param("curve", format!("{curve:?}").to_lowercase());
            if *curve == CurveArg::Surface {
                manifest = manifest.param("beta3", join(beta3));
            }
            let mut report = Report::new(manifest, surface_table(&trace)).note("failures", trace.failures.len());
            for f in &trace.failures {
                report = report.note(&format!("failure.{},{}", f.beta3, f.beta1), f.error.kind());
            }
            Ok(report)
        }
        Command::CriticalCurve { points, beta3, model } => {
            let (spec, tol) = (model.spec()?, model.tol());
            let corners = match beta3 {
                Some(values) => values
                    .iter()
                    .map(|&b3| corner_point(b3, &spec, &tol))
                    .collect::<Result<Vec<_>>>()?,
                None => critical_curve(&spec, *points)?,
            };
            let mut t = Table::new(&["u0", "beta1_c", "beta2_c", "beta3", "res1", "res2", "res3"]);
            for c in &corners {
                let r = c.residuals(&spec);
                t.push(vec![
                    c.u0.into(),
                    c.beta1_c.into(),
                    c.beta2_c.into(),
                    c.beta3.into(),
                    r[0].into(),
                    r[1].into(),
                    r[2].into(),
                ]);
            }
            let manifest = match beta3 {
                Some(values) => RunManifest::new(name, &spec, &tol, format).param("beta3", join(values)),
                None => RunManifest::new(name, &spec, &tol, format).param("points", points),
            };
            Ok(Report::new(manifest, t))
        }
        Command::Classify { beta, model } => {
            let (spec, tol) = (model.spec()?, model.tol());
            let class = classify(beta, &spec, &tol)?;
            let mut t = Table::new(&["phase", "u", "u_low", "u_high", "r", "u0"]);
            let e = || Cell::Empty;
            t.push(match &class {
                PhaseClassification::OffSurface { maximizer } => {
                    vec!["off_surface".into(), maximizer.u.into(), e(), e(), e(), e()]
                }
                PhaseClassification::OnSurface { u_low, u_high, r } => {
                    vec!["on_surface".into(), e(), (*u_low).into(), (*u_high).into(), (*r).into(), e()]
                }
                PhaseClassification::Critical { u0 } => vec!["critical".into(), e(), e(), e(), e(), (*u0).into()],
            });
            let manifest = RunManifest::new(name, &spec, &tol, format).param("beta", beta);
            Report::new(manifest, t).with_record(&class)
        }
        Command::Observables {
            beta,
            probe_beta3,
            probe_start,
            probe_ratio,
            probe_steps,
            model,
        } => {
            let (spec, tol) = (model.spec()?, model.tol());
            if let Some(b3) = probe_beta3 {
                let corner = corner_point(*b3, &spec, &tol)?;
                let dir = critical_approach_direction(&corner, &spec);
                let probe = divergence_probe(&corner, dir, *probe_start, *probe_ratio, *probe_steps, &spec, &tol)?;
                let mut t = Table::new(&["distance", "beta1", "beta2", "beta3", "d2_beta1"]);
                for s in &probe.samples {
                    t.push(vec![
                        s.distance.into(),
                        s.beta.beta1.into(),
                        s.beta.beta2.into(),
                        s.beta.beta3.into(),
                        s.d2_beta1.into(),
                    ]);
                }
                let manifest = RunManifest::new(name, &spec, &tol, format)
                    .param("probe_beta3", b3)
                    .param("probe_start", probe_start)
                    .param("probe_ratio", probe_ratio)
                    .param("probe_steps", probe_steps);
                let slope = probe.loglog_slope.map_or(String::new(), crate::output::format_f64);
                return Report::new(manifest, t).note("loglog_slope", slope).with_record(&probe);
            }
            let beta = beta.ok_or_else(|| Error::Parse("--beta is required".into()))?;
            let rep = observables(&beta, &spec, &tol)?;
            let mut t = Table::new(&[
                "branch", "d_beta1", "d_beta2", "d_beta3", "h11", "h12", "h13", "h22", "h23", "h33",
            ]);
            let h: Vec<Cell> = match rep.second {
                Some(m) => vec![m[0][0], m[0][1], m[0][2], m[1][1], m[1][2], m[2][2]]
                    .into_iter()
                    .map(Cell::from)
                    .collect(),
                None => vec![Cell::Empty; 6],
            };
            let mut row = |label: &str, g: [f64; 3]| {
                let mut r: Vec<Cell> = vec![label.into(), g[0].into(), g[1].into(), g[2].into()];
                r.extend(h.iter().cloned());
                t.push(r);
            };
            match rep.first {
                FirstDerivatives::Single(g) => row("single", g),
                FirstDerivatives::Coexisting { low, high } => {
                    row("low", low);
                    row("high", high);
                }
            }
            let manifest = RunManifest::new(name, &spec, &tol, format).param("beta", beta);
            Report::new(manifest, t).with_record(&rep)
        }
        Command::Universality { beta1, beta3, model } => {
            let (spec, tol) = (model.spec()?, model.tol());
            if beta1.is_empty() {
                return Err(Error::Parse("--beta1 needs at least one value".into()));
            }
            let mut t = Table::new(&["beta1", "beta3", "r", "gap"]);
            for &b1 in beta1 {
                let pt = transition_beta2(b1, *beta3, &spec, &tol)?.ok_or_else(|| {
                    Error::Domain(format!("b1 = {b1} is at or beyond the corner; no transition curve there"))
                })?;
                t.push(vec![
                    b1.into(),
                    (*beta3).into(),
                    pt.beta2.into(),
                    (pt.beta2 + b1 + beta3).abs().into(),
                ]);
            }
            let manifest = RunManifest::new(name, &spec, &tol, format)
                .param("beta1", join(beta1))
                .param("beta3", beta3);
            Ok(Report::new(manifest, t))
        }
        Command::Exact {
            n,
            beta,
            h2,
            h3,
            target,
            model,
        } => {
            let (spec, tol) = (model.spec()?, model.tol());
            let (h2, h3) = patterns(h2, h3, &spec)?;
            let ens = GraphEnsemble::new(*n, &h2, &h3)?;
            let means = ens.mean_densities(beta);
            let mut cols = vec!["n", "psi_n", "mean_t_edge", "mean_t_h2", "mean_t_h3"];
            let mut row: Vec<Cell> = vec![
                (*n).into(),
                ens.psi(beta).into(),
                means[0].into(),
                means[1].into(),
                means[2].into(),
            ];
            if let Some(h) = target {
                cols.push("mean_t_target");
                row.push(ens.expectation(beta, h)?.into());
            }
            let mut t = Table::new(&cols);
            t.push(row);
            let mut manifest = RunManifest::new(name, &spec, &tol, format)
                .param("n", n)
                .param("beta", beta)
                .param("h2", &h2)
                .param("h3", &h3);
            if let Some(h) = target {
                manifest = manifest.param("target", h);
            }
            Ok(Report::new(manifest, t))
        }
        Command::Sample {
            n,
            beta,
            sweeps,
            burn_in,
            thin,
            seed,
            h2,
            h3,
            model,
        } => {
            let (spec, tol) = (model.spec()?, model.tol());
            let (h2, h3) = patterns(h2, h3, &spec)?;
            let config = ChainConfig {
                n: *n,
                beta: *beta,
                h2,
                h3,
                sweeps: *sweeps,
                burn_in: *burn_in,
                thin: *thin,
                seed: *seed,
            };
            let trace = run_chain(&config)?;
            let mut t = Table::new(&["sweep", "t_edge", "t_h2", "t_h3"]);
            for s in &trace.samples {
                t.push(vec![s.sweep.into(), s.t_edge.into(), s.t_h2.into(), s.t_h3.into()]);
            }
            let mut manifest = RunManifest::new(name, &spec, &tol, format).with_seed(*seed);
            for (k, v) in config.header() {
                if k != "seed" {
                    manifest = manifest.param(k, v);
                }
            }
            Report::new(manifest, t)
                .note("updates", trace.updates)
                .note("toggles", trace.toggles)
                .with_record(&trace)
        }
    }
}

/// Where the rendered output goes, if not standard output.
pub fn output_path(cli: &Cli) -> Option<PathBuf> {
    if let Some(p) = &cli.out {
        return Some(p.clone());
    }
    let dir = std::env::var_os(OUT_DIR_ENV).filter(|d| !d.is_empty())?;
    let ext = Format::from(cli.format).extension();
    Some(PathBuf::from(dir).join(format!("{}.{ext}", cli.command.file_stem())))
}

fn error_json(kind: &str, message: &str, code: i32) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message, "exit_code": code } }).to_string()
}

/// Parses `args`, runs the command, writes the output, and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{}", error_json("usage_error", e.to_string().trim(), 2));
            return 2;
        }
    };
    let result = execute(&cli).and_then(|report| {
        let text = report.render()?;
        match output_path(&cli) {
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                std::fs::write(&path, text)?;
            }
            None => print!("{text}"),
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_json(e.kind(), &e.to_string(), e.exit_code()));
            e.exit_code()
        }
    }
}
