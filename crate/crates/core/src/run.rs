//! Run driver behind the `duet-baths` CLI: flat key-value configuration,
//! automatic regime resolution, deterministic CSV/manifest/plot-script
//! emission, and concurrent parameter sweeps.

use rayon::prelude::*;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::correlators::{
    self, coherence_initial_strong, coherence_initial_weak, CorrKind, GreensBackend, Part, Source,
    TransientNoise, WeakModes,
};
use crate::error::{Error, Result};
use crate::fit;
use crate::greens::{self, BromwichEvaluator, GreensKernel, LaplaceMatrix, Regime};
use crate::model::{diagonalize, BathSpec, CutoffFamily, NormalModeBasis, SystemParams};
use crate::oracle;
use crate::quad::QuadTol;

/// System parameterization: bare oscillator data or the renormalized
/// (W, Δ, ψ) triple all the Ohmic closed forms use.
#[derive(Clone, Copy, Debug)]
pub enum SystemInput {
    Bare(SystemParams),
    Renormalized { w: f64, delta: f64, psi: f64 },
}

/// Requested regime; `Auto` resolves from the parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegimeChoice {
    Auto,
    StrongDelta0,
    OneBath,
    Weak,
    Numeric,
}

impl RegimeChoice {
    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => RegimeChoice::Auto,
            "strong" | "strong_delta0" => RegimeChoice::StrongDelta0,
            "onebath" | "one_bath" => RegimeChoice::OneBath,
            "weak" => RegimeChoice::Weak,
            "numeric" | "bromwich" => RegimeChoice::Numeric,
            other => return Err(Error::Config(format!("unknown regime '{other}'"))),
        })
    }

    fn label(self) -> &'static str {
        match self {
            RegimeChoice::Auto => "auto",
            RegimeChoice::StrongDelta0 => "strong_delta0",
            RegimeChoice::OneBath => "one_bath",
            RegimeChoice::Weak => "weak",
            RegimeChoice::Numeric => "numeric",
        }
    }
}

/// Uniform evaluation grid.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.points <= 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.start + step * i as f64)
            .collect()
    }
}

/// Finite-bath oracle dimensions.
#[derive(Clone, Copy, Debug)]
pub struct OracleSpec {
    pub n_modes: usize,
    pub omega_max: f64,
}

/// Parsed run configuration (flat dotted-key text format).
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub system: SystemInput,
    pub bath1: BathSpec,
    pub bath2: BathSpec,
    pub regime: RegimeChoice,
    pub grid: GridSpec,
    pub tau_grid: GridSpec,
    pub outputs: Vec<CorrKind>,
    pub oracle: Option<OracleSpec>,
    pub tol: f64,
    pub tau_min_lambda: bool,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            system: SystemInput::Renormalized {
                w: 1.0,
                delta: 0.0,
                psi: std::f64::consts::FRAC_PI_4,
            },
            bath1: BathSpec::strict_ohmic(0.1, 100.0, 0.0).unwrap(),
            bath2: BathSpec::strict_ohmic(0.03, 100.0, 0.0).unwrap(),
            regime: RegimeChoice::Auto,
            grid: GridSpec {
                start: 0.0,
                stop: 60.0,
                points: 601,
            },
            tau_grid: GridSpec {
                start: 0.0,
                stop: 20.0,
                points: 201,
            },
            outputs: vec![CorrKind::QqPlusMinus],
            oracle: None,
            tol: 1e-8,
            tau_min_lambda: false,
            workers: 1,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::Config(format!("key '{key}': cannot parse '{v}' as a number")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| Error::Config(format!("key '{key}': cannot parse '{v}' as an integer")))
}

impl RunConfig {
    /// Parse the flat key-value config text (`key = value`, `#` comments).
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected 'key = value', got '{line}'",
                    lineno + 1
                ))
            })?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(cfg)
    }

    /// Assign one dotted key, used both by the parser and by CLI overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bath_field = |bath: &mut BathSpec, field: &str, value: &str| -> Result<()> {
            match field {
                "gamma" => bath.gamma = parse_f64(key, value)?,
                "lambda" => bath.lambda_cut = parse_f64(key, value)?,
                "temperature" => bath.temperature = parse_f64(key, value)?,
                "cutoff" => {
                    bath.cutoff = match value {
                        "sharp" => CutoffFamily::SharpCutoff,
                        "drude" => CutoffFamily::Drude,
                        "ohmic" | "strict" | "strict_ohmic" => CutoffFamily::StrictOhmic,
                        other => {
                            return Err(Error::Config(format!("unknown cutoff family '{other}'")))
                        }
                    }
                }
                other => return Err(Error::Config(format!("unknown bath field '{other}'"))),
            }
            Ok(())
        };
        match key {
            "system.w" | "system.delta" | "system.psi" => {
                let (mut w, mut delta, mut psi) = match self.system {
                    SystemInput::Renormalized { w, delta, psi } => (w, delta, psi),
                    SystemInput::Bare(_) => (1.0, 0.0, 0.0),
                };
                let v = parse_f64(key, value)?;
                match key {
                    "system.w" => w = v,
                    "system.delta" => delta = v,
                    _ => psi = v,
                }
                self.system = SystemInput::Renormalized { w, delta, psi };
            }
            "system.omega_a" | "system.omega_b" | "system.omega_c" | "system.theta" => {
                let mut p = match self.system {
                    SystemInput::Bare(p) => p,
                    SystemInput::Renormalized { .. } => SystemParams {
                        omega_a: 1.0,
                        omega_b: 1.0,
                        omega_c: 0.0,
                        theta: 0.0,
                    },
                };
                let v = parse_f64(key, value)?;
                match key {
                    "system.omega_a" => p.omega_a = v,
                    "system.omega_b" => p.omega_b = v,
                    "system.omega_c" => p.omega_c = v,
                    _ => p.theta = v,
                }
                self.system = SystemInput::Bare(p);
            }
            _ if key.starts_with("bath1.") => bath_field(&mut self.bath1, &key[6..], value)?,
            _ if key.starts_with("bath2.") => bath_field(&mut self.bath2, &key[6..], value)?,
            "regime" => self.regime = RegimeChoice::parse(value)?,
            "grid.start" => self.grid.start = parse_f64(key, value)?,
            "grid.stop" => self.grid.stop = parse_f64(key, value)?,
            "grid.points" => self.grid.points = parse_usize(key, value)?,
            "tau.start" => self.tau_grid.start = parse_f64(key, value)?,
            "tau.stop" => self.tau_grid.stop = parse_f64(key, value)?,
            "tau.points" => self.tau_grid.points = parse_usize(key, value)?,
            "outputs" => {
                let mut kinds = Vec::new();
                for item in value.split(',') {
                    let item = item.trim();
                    let kind = CorrKind::parse(item)
                        .ok_or_else(|| Error::Config(format!("unknown output '{item}'")))?;
                    kinds.push(kind);
                }
                if kinds.is_empty() {
                    return Err(Error::Config("outputs list is empty".into()));
                }
                self.outputs = kinds;
            }
            "oracle.modes" => {
                let n = parse_usize(key, value)?;
                let omega_max = self.oracle.map(|o| o.omega_max).unwrap_or(20.0);
                self.oracle = Some(OracleSpec {
                    n_modes: n,
                    omega_max,
                });
            }
            "oracle.omega_max" => {
                let v = parse_f64(key, value)?;
                let n_modes = self.oracle.map(|o| o.n_modes).unwrap_or(400);
                self.oracle = Some(OracleSpec {
                    n_modes,
                    omega_max: v,
                });
            }
            "tol" => self.tol = parse_f64(key, value)?,
            "tau_min_lambda" => {
                self.tau_min_lambda = value
                    .parse::<bool>()
                    .map_err(|_| Error::Config(format!("key '{key}': expected true/false")))?
            }
            "workers" => self.workers = parse_usize(key, value)?.max(1),
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Validate bath invariants after all assignments.
    pub fn validate(&self) -> Result<()> {
        BathSpec::new(
            self.bath1.gamma,
            self.bath1.lambda_cut,
            self.bath1.temperature,
            self.bath1.cutoff,
        )?;
        BathSpec::new(
            self.bath2.gamma,
            self.bath2.lambda_cut,
            self.bath2.temperature,
            self.bath2.cutoff,
        )?;
        self.basis()?;
        Ok(())
    }

    /// Normal-mode basis implied by the system input.
    pub fn basis(&self) -> Result<NormalModeBasis> {
        match self.system {
            SystemInput::Bare(p) => {
                let p = SystemParams::new(p.omega_a, p.omega_b, p.omega_c, p.theta)?;
                diagonalize(&p)
            }
            SystemInput::Renormalized { w, delta, psi } => {
                NormalModeBasis::from_renormalized(w, delta, psi)
            }
        }
    }

    pub fn quad_tol(&self) -> QuadTol {
        QuadTol {
            abs: self.tol * 1e-2,
            rel: self.tol,
        }
    }

    /// Regime resolution: γ₂=0 ∧ Δ=0 → OneBath; Δ=0 → StrongDelta0;
    /// max(γ)/min(W−Δ/2, |Δ|) < 0.2 → Weak; else Numeric.
    pub fn resolve_regime(&self) -> Result<Regime> {
        let basis = self.basis()?;
        Ok(match self.regime {
            RegimeChoice::StrongDelta0 => Regime::StrongDelta0,
            RegimeChoice::OneBath => Regime::OneBath,
            RegimeChoice::Weak => Regime::WeakCoupling,
            RegimeChoice::Numeric => Regime::NumericBromwich,
            RegimeChoice::Auto => {
                let delta = basis.detuning;
                let w = basis.w_mean;
                let gmax = self.bath1.gamma.max(self.bath2.gamma);
                if delta == 0.0 && self.bath2.gamma == 0.0 {
                    Regime::OneBath
                } else if delta == 0.0 {
                    Regime::StrongDelta0
                } else if gmax / (w - 0.5 * delta).min(delta.abs()) < 0.2 {
                    Regime::WeakCoupling
                } else {
                    Regime::NumericBromwich
                }
            }
        })
    }

    /// Deterministic manifest text (sorted keys, no timestamps).
    pub fn manifest(&self, extra: &[(&str, String)]) -> Result<String> {
        let basis = self.basis()?;
        let regime = self.resolve_regime()?;
        let mut rows: Vec<(String, String)> = vec![
            ("system.w".into(), format!("{:.17e}", basis.w_mean)),
            ("system.delta".into(), format!("{:.17e}", basis.detuning)),
            ("system.psi".into(), format!("{:.17e}", basis.psi_angle)),
            (
                "system.omega_r_plus".into(),
                format!("{:.17e}", basis.omega_plus),
            ),
            (
                "system.omega_r_minus".into(),
                format!("{:.17e}", basis.omega_minus),
            ),
            ("regime.requested".into(), self.regime.label().into()),
            ("regime.resolved".into(), format!("{regime:?}")),
            ("tol".into(), format!("{:e}", self.tol)),
            ("tau_min_lambda".into(), self.tau_min_lambda.to_string()),
            ("workers".into(), self.workers.to_string()),
            ("version".into(), env!("CARGO_PKG_VERSION").into()),
        ];
        for (name, b) in [("bath1", &self.bath1), ("bath2", &self.bath2)] {
            rows.push((format!("{name}.gamma"), format!("{:.17e}", b.gamma)));
            rows.push((format!("{name}.lambda"), format!("{:.17e}", b.lambda_cut)));
            rows.push((
                format!("{name}.temperature"),
                format!("{:.17e}", b.temperature),
            ));
            rows.push((format!("{name}.cutoff"), format!("{:?}", b.cutoff)));
        }
        if let Some(o) = self.oracle {
            rows.push(("oracle.modes".into(), o.n_modes.to_string()));
            rows.push(("oracle.omega_max".into(), format!("{:.17e}", o.omega_max)));
        }
        for (k, v) in extra {
            rows.push(((*k).into(), v.clone()));
        }
        rows.sort();
        let mut out = String::new();
        for (k, v) in rows {
            writeln!(out, "{k} = {v}").unwrap();
        }
        Ok(out)
    }
}

/// CLI operation dispatched by the binary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operation {
    Evolve,
    Stationary,
    Oracle,
    Fig1,
    Fig2,
    Fig3,
}

/// Files written plus summary key-value pairs.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub summary: Vec<(String, String)>,
}

fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_file(dir: &Path, name: &str, content: &str, out: &mut RunOutput) -> Result<()> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, content)?;
    out.files.push(path);
    Ok(())
}

/// One CSV: header `t,re,im,source`, 17-significant-digit values.
fn series_csv(axis_name: &str, rows: &[(f64, Complex64, Source)]) -> String {
    let mut s = String::with_capacity(rows.len() * 64);
    writeln!(s, "{axis_name},re,im,source").unwrap();
    for (x, v, src) in rows {
        writeln!(
            s,
            "{},{},{},{}",
            fmt_num(*x),
            fmt_num(v.re),
            fmt_num(v.im),
            src.label()
        )
        .unwrap();
    }
    s
}

fn plot_script(csvs: &[(String, String)]) -> String {
    let mut s = String::new();
    writeln!(s, "# gnuplot script").unwrap();
    writeln!(s, "set datafile separator ','").unwrap();
    writeln!(s, "set key autotitle columnhead").unwrap();
    writeln!(s, "set xlabel 'W t'").unwrap();
    writeln!(s, "set ylabel 'correlator'").unwrap();
    for (i, (file, title)) in csvs.iter().enumerate() {
        let cmd = if i == 0 { "plot" } else { "replot" };
        writeln!(s, "{cmd} '{file}' using 1:2 with lines title '{title}'").unwrap();
    }
    writeln!(s, "pause -1").unwrap();
    s
}

/// Equal-time initial-condition qq matrix from a Green's kernel:
/// 𝔾 diag(Ω±/2) 𝔾ᵀ + 𝔾̇ diag(1/2Ω±) 𝔾̇ᵀ.
fn initial_qq_matrix(
    kernel: &GreensKernel,
    basis: &NormalModeBasis,
    t: f64,
) -> Result<[[f64; 2]; 2]> {
    let g = kernel.eval(t)?;
    let gd = kernel.eval_deriv(t)?;
    let pp = [0.5 * basis.omega_plus, 0.5 * basis.omega_minus];
    let qq = [0.5 / basis.omega_plus, 0.5 / basis.omega_minus];
    let mut out = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = 0.0;
            for j in 0..2 {
                acc += g[a][j] * g[b][j] * pp[j] + gd[a][j] * gd[b][j] * qq[j];
            }
            out[a][b] = acc;
        }
    }
    Ok(out)
}

fn kind_index(kind: CorrKind) -> (usize, usize) {
    match kind {
        CorrKind::QqPlusPlus | CorrKind::PpPlusPlus => (0, 0),
        CorrKind::QqMinusMinus | CorrKind::PpMinusMinus => (1, 1),
        CorrKind::QqPlusMinus | CorrKind::PpPlusMinus => (0, 1),
    }
}

/// Execute one operation, writing CSVs, the manifest, and a plot script.
pub fn run(config: &RunConfig, op: Operation, out_dir: &Path) -> Result<RunOutput> {
    config.validate()?;
    match op {
        Operation::Evolve => run_evolve(config, out_dir),
        Operation::Stationary => run_stationary(config, out_dir),
        Operation::Oracle => run_oracle(config, out_dir),
        Operation::Fig1 => run_fig1(config, out_dir),
        Operation::Fig2 => run_fig2(config, out_dir),
        Operation::Fig3 => run_fig3(config, out_dir),
    }
}

fn build_kernel(
    config: &RunConfig,
    regime: Regime,
    basis: &NormalModeBasis,
) -> Result<GreensKernel> {
    let (g1, g2) = (config.bath1.gamma, config.bath2.gamma);
    match regime {
        Regime::OneBath => GreensKernel::one_bath(basis.w_mean, basis.psi_angle, g1),
        Regime::StrongDelta0 => GreensKernel::strong_delta0(basis.w_mean, basis.psi_angle, g1, g2),
        Regime::WeakCoupling => {
            GreensKernel::weak(basis.w_mean, basis.detuning, basis.psi_angle, g1, g2)
        }
        Regime::NumericBromwich | Regime::StrongDetunedPerturbative => {
            GreensKernel::numeric(basis, &config.bath1, &config.bath2, config.quad_tol())
        }
    }
}

fn run_evolve(config: &RunConfig, out_dir: &Path) -> Result<RunOutput> {
    let mut out = RunOutput::default();
    let basis = config.basis()?;
    let regime = config.resolve_regime()?;
    let times = config.grid.values();
    let kernel = build_kernel(config, regime, &basis)?;

    // Δ=0 regimes also get the finite-time noise part
    let transient = if basis.detuning == 0.0 {
        Some(TransientNoise::new(
            basis.w_mean,
            basis.psi_angle,
            &config.bath1,
            &config.bath2,
            GreensBackend::StrictClosedForm,
            config.grid.stop,
            config.quad_tol(),
        )?)
    } else {
        None
    };
    let noise_pts = match &transient {
        Some(tn) => Some(tn.series(&times)?),
        None => None,
    };

    let mut csvs = Vec::new();
    for &kind in &config.outputs {
        if kind.is_momentum() {
            return Err(Error::Config(
                "evolve emits position correlators; momentum kinds are stationary-only".into(),
            ));
        }
        let (a, b) = kind_index(kind);
        let mut rows: Vec<(f64, Complex64, Source)> = Vec::new();
        for (i, &t) in times.iter().enumerate() {
            let init: Complex64 = match regime {
                Regime::WeakCoupling if kind == CorrKind::QqPlusMinus => coherence_initial_weak(
                    basis.w_mean,
                    basis.detuning,
                    basis.psi_angle,
                    config.bath1.gamma,
                    config.bath2.gamma,
                    t,
                ),
                _ => Complex64::new(initial_qq_matrix(&kernel, &basis, t)?[a][b], 0.0),
            };
            rows.push((t, init, Source::InitialCondition));
            if let Some(pts) = &noise_pts {
                let noise = match kind {
                    CorrKind::QqPlusMinus => pts[i].noise,
                    CorrKind::QqPlusPlus => pts[i].noise_diag.0,
                    CorrKind::QqMinusMinus => pts[i].noise_diag.1,
                    _ => unreachable!(),
                };
                rows.push((t, Complex64::new(noise, 0.0), Source::Noise));
                rows.push((t, init + noise, Source::Total));
            }
        }
        let name = format!("{}.csv", kind.label());
        write_file(out_dir, &name, &series_csv("t", &rows), &mut out)?;
        csvs.push((name, kind.label().to_string()));
    }

    if regime == Regime::WeakCoupling {
        let ratio = greens::weak_validity_ratio(
            basis.w_mean,
            basis.detuning,
            config.bath1.gamma,
            config.bath2.gamma,
        );
        if ratio > 0.2 {
            out.summary.push((
                "warning".into(),
                format!("weak-coupling validity ratio {ratio:.3} > 0.2"),
            ));
        }
    }
    let manifest = config.manifest(&[("operation", "evolve".into())])?;
    write_file(out_dir, "manifest.txt", &manifest, &mut out)?;
    write_file(out_dir, "plot.gp", &plot_script(&csvs), &mut out)?;
    Ok(out)
}

fn run_stationary(config: &RunConfig, out_dir: &Path) -> Result<RunOutput> {
    let mut out = RunOutput::default();
    let basis = config.basis()?;
    let regime = config.resolve_regime()?;
    let mut taus = config.tau_grid.values();
    let lam_min = config.bath1.lambda_cut.min(config.bath2.lambda_cut);
    let wants_momentum = config.outputs.iter().any(|k| k.is_momentum());
    if config.tau_min_lambda && wants_momentum {
        // coincidence-limit policy: clamp τ to the resolvable scale 1/Λ
        for tau in &mut taus {
            if tau.abs() < 1.0 / lam_min {
                *tau = 1.0 / lam_min;
            }
        }
    }

    let series = match regime {
        Regime::StrongDelta0 | Regime::OneBath => {
            let mut all = Vec::new();
            for part in [Part::Position, Part::Momentum] {
                if config
                    .outputs
                    .iter()
                    .any(|k| k.is_momentum() == (part == Part::Momentum))
                {
                    all.extend(correlators::stationary_strong(
                        basis.w_mean,
                        basis.psi_angle,
                        &config.bath1,
                        &config.bath2,
                        &taus,
                        part,
                    )?);
                }
            }
            all
        }
        Regime::WeakCoupling => {
            let modes = WeakModes::new(
                basis.w_mean,
                basis.detuning,
                basis.psi_angle,
                config.bath1.gamma,
                config.bath2.gamma,
            )?;
            let mut all = Vec::new();
            for part in [Part::Position, Part::Momentum] {
                if config
                    .outputs
                    .iter()
                    .any(|k| k.is_momentum() == (part == Part::Momentum))
                {
                    all.extend(correlators::stationary_weak(
                        &modes,
                        &config.bath1,
                        &config.bath2,
                        &taus,
                        part,
                    )?);
                }
            }
            all
        }
        _ => {
            return Err(Error::Config(
                "stationary closed forms cover the strong (Δ=0) and weak regimes; \
                 pick one with 'regime = strong|onebath|weak'"
                    .into(),
            ))
        }
    };

    let mut csvs = Vec::new();
    for s in &series {
        if !config.outputs.contains(&s.kind) {
            continue;
        }
        let rows: Vec<(f64, Complex64, Source)> = s
            .tau
            .iter()
            .zip(&s.values)
            .map(|(&x, &v)| (x, v, s.source))
            .collect();
        let name = format!("{}.csv", s.kind.label());
        write_file(out_dir, &name, &series_csv("tau", &rows), &mut out)?;
        csvs.push((name, s.kind.label().to_string()));
    }
    let (tp, tm) = correlators::effective_temperatures(
        basis.psi_angle,
        config.bath1.temperature,
        config.bath2.temperature,
    );
    out.summary.push(("t_eff_plus".into(), fmt_num(tp)));
    out.summary.push(("t_eff_minus".into(), fmt_num(tm)));
    let manifest = config.manifest(&[("operation", "stationary".into())])?;
    write_file(out_dir, "manifest.txt", &manifest, &mut out)?;
    write_file(out_dir, "plot.gp", &plot_script(&csvs), &mut out)?;
    Ok(out)
}

fn run_oracle(config: &RunConfig, out_dir: &Path) -> Result<RunOutput> {
    let mut out = RunOutput::default();
    let basis = config.basis()?;
    let spec = config.oracle.unwrap_or(OracleSpec {
        n_modes: 400,
        omega_max: 20.0,
    });
    // the oracle lives at a finite bandwidth: carry the discretization cutoff
    let mk_sharp = |b: &BathSpec| {
        BathSpec::new(
            b.gamma,
            spec.omega_max,
            b.temperature,
            CutoffFamily::SharpCutoff,
        )
    };
    let b1 = mk_sharp(&config.bath1)?;
    let b2 = mk_sharp(&config.bath2)?;
    let d1 = oracle::discretize(&b1, spec.n_modes, spec.omega_max)?;
    let d2 = oracle::discretize(&b2, spec.n_modes, spec.omega_max)?;
    let ct = oracle::discrete_counterterms(&d1, &d2, basis.psi_angle);
    let prop = oracle::build_hamiltonian(&basis, &ct, &d1, &d2).diagonalize()?;
    let state0 = oracle::initial_state(&basis, &d1, &d2, b1.temperature, b2.temperature);

    let times = config.grid.values();
    let recurrence = d1.recurrence_time().min(d2.recurrence_time());
    if config.grid.stop >= recurrence {
        out.summary.push((
            "warning".into(),
            format!("grid extends past the recurrence time {recurrence:.3}"),
        ));
    }

    // analytic totals for the Δ=0 case
    let analytic = if basis.detuning == 0.0 {
        let tn = TransientNoise::new(
            basis.w_mean,
            basis.psi_angle,
            &b1,
            &b2,
            GreensBackend::StrictClosedForm,
            config.grid.stop,
            config.quad_tol(),
        )?;
        Some(tn.series(&times)?)
    } else {
        None
    };

    let mut s = String::new();
    writeln!(s, "t,oracle_qpqm,analytic_qpqm,oracle_en").unwrap();
    for (i, &t) in times.iter().enumerate() {
        let sys = prop.system_covariance(&state0, t);
        let en = oracle::log_negativity(&sys)?;
        let ana = analytic
            .as_ref()
            .map(|pts| pts[i].total())
            .unwrap_or(f64::NAN);
        writeln!(
            s,
            "{},{},{},{}",
            fmt_num(t),
            fmt_num(sys[0][1]),
            fmt_num(ana),
            fmt_num(en)
        )
        .unwrap();
    }
    write_file(out_dir, "oracle.csv", &s, &mut out)?;
    out.summary
        .push(("recurrence_time".into(), fmt_num(recurrence)));
    let manifest = config.manifest(&[("operation", "oracle".into())])?;
    write_file(out_dir, "manifest.txt", &manifest, &mut out)?;
    write_file(
        out_dir,
        "plot.gp",
        &plot_script(&[("oracle.csv".into(), "oracle qpqm".into())]),
        &mut out,
    )?;
    Ok(out)
}

fn preset_fig(config: &RunConfig, which: Operation, out_dir: &Path) -> Result<RunOutput> {
    let mut cfg = config.clone();
    let mut out = RunOutput::default();
    match which {
        Operation::Fig1 => {
            // strong-coupling transient coherence, γ₁/W = 0.1, γ₂/W ∈ {0.01, 0.03}
            cfg.system = SystemInput::Renormalized {
                w: 1.0,
                delta: 0.0,
                psi: std::f64::consts::FRAC_PI_4,
            };
            cfg.bath1 = BathSpec::strict_ohmic(0.1, 100.0, 0.0)?;
            cfg.grid = GridSpec {
                start: 0.0,
                stop: 60.0,
                points: 1201,
            };
            let mut csvs = Vec::new();
            for g2 in [0.01, 0.03] {
                let rows: Vec<(f64, Complex64, Source)> = cfg
                    .grid
                    .values()
                    .iter()
                    .map(|&t| {
                        let v =
                            coherence_initial_strong(1.0, std::f64::consts::FRAC_PI_4, 0.1, g2, t);
                        (t, Complex64::new(v, 0.0), Source::InitialCondition)
                    })
                    .collect();
                let name = format!("fig1_gamma2_{g2}.csv");
                write_file(out_dir, &name, &series_csv("t", &rows), &mut out)?;
                csvs.push((name, format!("gamma2 = {g2}")));
            }
            write_file(out_dir, "plot.gp", &plot_script(&csvs), &mut out)?;
            cfg.bath2 = BathSpec::strict_ohmic(0.03, 100.0, 0.0)?;
            let manifest = cfg.manifest(&[("operation", "fig1".into())])?;
            write_file(out_dir, "manifest.txt", &manifest, &mut out)?;
        }
        Operation::Fig2 => {
            // one-bath memory: γ₂ = 0, asymptote −sin2ψ/4W = −0.25
            cfg.system = SystemInput::Renormalized {
                w: 1.0,
                delta: 0.0,
                psi: std::f64::consts::FRAC_PI_4,
            };
            cfg.bath1 = BathSpec::strict_ohmic(0.1, 100.0, 0.0)?;
            cfg.bath2 = BathSpec::strict_ohmic(0.0, 100.0, 0.0)?;
            cfg.grid = GridSpec {
                start: 0.0,
                stop: 200.0,
                points: 2001,
            };
            let rows: Vec<(f64, Complex64, Source)> = cfg
                .grid
                .values()
                .iter()
                .map(|&t| {
                    let v = coherence_initial_strong(1.0, std::f64::consts::FRAC_PI_4, 0.1, 0.0, t);
                    (t, Complex64::new(v, 0.0), Source::InitialCondition)
                })
                .collect();
            write_file(out_dir, "fig2.csv", &series_csv("t", &rows), &mut out)?;
            let last = rows.last().unwrap().1.re;
            out.summary.push(("asymptote".into(), fmt_num(last)));
            write_file(
                out_dir,
                "plot.gp",
                &plot_script(&[("fig2.csv".into(), "one-bath coherence".into())]),
                &mut out,
            )?;
            let manifest = cfg.manifest(&[("operation", "fig2".into())])?;
            write_file(out_dir, "manifest.txt", &manifest, &mut out)?;
        }
        Operation::Fig3 => {
            // weak-coupling beats: γ₁ = 0.05, γ₂ = 0.005, Δ = 0.25, ψ = π/4
            cfg.system = SystemInput::Renormalized {
                w: 1.0,
                delta: 0.25,
                psi: std::f64::consts::FRAC_PI_4,
            };
            cfg.bath1 = BathSpec::strict_ohmic(0.05, 100.0, 0.0)?;
            cfg.bath2 = BathSpec::strict_ohmic(0.005, 100.0, 0.0)?;
            cfg.grid = GridSpec {
                start: 0.0,
                stop: 150.0,
                points: 3001,
            };
            let rows: Vec<(f64, Complex64, Source)> = cfg
                .grid
                .values()
                .iter()
                .map(|&t| {
                    let v = coherence_initial_weak(
                        1.0,
                        0.25,
                        std::f64::consts::FRAC_PI_4,
                        0.05,
                        0.005,
                        t,
                    );
                    (t, v, Source::InitialCondition)
                })
                .collect();
            write_file(out_dir, "fig3.csv", &series_csv("t", &rows), &mut out)?;
            write_file(
                out_dir,
                "plot.gp",
                &plot_script(&[("fig3.csv".into(), "weak-coupling beats".into())]),
                &mut out,
            )?;
            let manifest = cfg.manifest(&[("operation", "fig3".into())])?;
            write_file(out_dir, "manifest.txt", &manifest, &mut out)?;
        }
        _ => unreachable!(),
    }
    Ok(out)
}

fn run_fig1(config: &RunConfig, out_dir: &Path) -> Result<RunOutput> {
    preset_fig(config, Operation::Fig1, out_dir)
}
fn run_fig2(config: &RunConfig, out_dir: &Path) -> Result<RunOutput> {
    preset_fig(config, Operation::Fig2, out_dir)
}
fn run_fig3(config: &RunConfig, out_dir: &Path) -> Result<RunOutput> {
    preset_fig(config, Operation::Fig3, out_dir)
}

/// One axis of a parameter sweep.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    /// Dotted config key to sweep (e.g. `bath1.temperature`).
    pub key: String,
    pub values: Vec<f64>,
}

/// Per-point summary row of a sweep.
struct SweepRow {
    value: f64,
    coherence: f64,
    t_eff_plus: f64,
    t_eff_minus: f64,
    decay_rate: f64,
    h1_coincidence: f64,
    log_negativity: f64,
    error: String,
}

fn sweep_point(config: &RunConfig, key: &str, value: f64) -> Result<SweepRow> {
    let mut cfg = config.clone();
    cfg.set(key, &format!("{value:.17e}"))?;
    cfg.validate()?;
    let basis = cfg.basis()?;
    let regime = cfg.resolve_regime()?;
    // equal-time stationary coherence (strict-Ohmic closed forms; NaN where
    // they do not apply)
    let coherence = (|| -> Result<f64> {
        match regime {
            Regime::StrongDelta0 | Regime::OneBath => {
                let s = correlators::stationary_strong(
                    basis.w_mean,
                    basis.psi_angle,
                    &cfg.bath1,
                    &cfg.bath2,
                    &[0.0],
                    Part::Position,
                )?;
                Ok(s[2].values[0].re)
            }
            Regime::WeakCoupling => {
                let modes = WeakModes::new(
                    basis.w_mean,
                    basis.detuning,
                    basis.psi_angle,
                    cfg.bath1.gamma,
                    cfg.bath2.gamma,
                )?;
                let s = correlators::stationary_weak(
                    &modes,
                    &cfg.bath1,
                    &cfg.bath2,
                    &[0.0],
                    Part::Position,
                )?;
                Ok(s[2].values[0].re)
            }
            _ => Ok(f64::NAN),
        }
    })()
    .unwrap_or(f64::NAN);
    let (tp, tm) = correlators::effective_temperatures(
        basis.psi_angle,
        cfg.bath1.temperature,
        cfg.bath2.temperature,
    );
    // decay rate: smallest pole rate of the resolved dynamics
    let decay_rate = {
        let mat = LaplaceMatrix::new(&basis, &cfg.bath1, &cfg.bath2);
        match BromwichEvaluator::new(mat, cfg.quad_tol()) {
            Ok(ev) => ev
                .mode_rates()
                .iter()
                .map(|r| r.1)
                .fold(f64::INFINITY, f64::min),
            Err(_) => f64::NAN,
        }
    };
    // momentum coincidence value H₁(0), defined for finite bandwidths; its
    // Λ-sweep slope is γ₁/π
    let h1_coincidence = match correlators::h_function(&cfg.bath1, basis.w_mean, 0.0) {
        Ok(v) => v.re,
        Err(_) => f64::NAN,
    };
    let log_negativity = if let Some(spec) = cfg.oracle {
        let mk = |b: &BathSpec| {
            BathSpec::new(
                b.gamma,
                spec.omega_max,
                b.temperature,
                CutoffFamily::SharpCutoff,
            )
        };
        let d1 = oracle::discretize(&mk(&cfg.bath1)?, spec.n_modes, spec.omega_max)?;
        let d2 = oracle::discretize(&mk(&cfg.bath2)?, spec.n_modes, spec.omega_max)?;
        let ct = oracle::discrete_counterterms(&d1, &d2, basis.psi_angle);
        let prop = oracle::build_hamiltonian(&basis, &ct, &d1, &d2).diagonalize()?;
        let st = oracle::initial_state(
            &basis,
            &d1,
            &d2,
            cfg.bath1.temperature,
            cfg.bath2.temperature,
        );
        let sys = prop.system_covariance(&st, cfg.grid.stop);
        oracle::log_negativity(&sys)?
    } else {
        f64::NAN
    };
    Ok(SweepRow {
        value,
        coherence,
        t_eff_plus: tp,
        t_eff_minus: tm,
        decay_rate,
        h1_coincidence,
        log_negativity,
        error: String::new(),
    })
}

/// Sweep one parameter; points run concurrently, rows stay in sweep order,
/// per-point failures become NaN rows with the error recorded.
pub fn sweep(config: &RunConfig, spec: &SweepSpec, out_dir: &Path) -> Result<RunOutput> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Numerics(format!("thread pool: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        spec.values
            .par_iter()
            .map(|&v| match sweep_point(config, &spec.key, v) {
                Ok(row) => row,
                Err(e) => SweepRow {
                    value: v,
                    coherence: f64::NAN,
                    t_eff_plus: f64::NAN,
                    t_eff_minus: f64::NAN,
                    decay_rate: f64::NAN,
                    h1_coincidence: f64::NAN,
                    log_negativity: f64::NAN,
                    error: e.to_string(),
                },
            })
            .collect()
    });
    let mut s = String::new();
    writeln!(
        s,
        "{},coherence,t_eff_plus,t_eff_minus,decay_rate,h1_coincidence,log_negativity,error",
        spec.key
    )
    .unwrap();
    for r in &rows {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            fmt_num(r.value),
            fmt_num(r.coherence),
            fmt_num(r.t_eff_plus),
            fmt_num(r.t_eff_minus),
            fmt_num(r.decay_rate),
            fmt_num(r.h1_coincidence),
            fmt_num(r.log_negativity),
            r.error
        )
        .unwrap();
    }
    let mut out = RunOutput::default();
    write_file(out_dir, "sweep.csv", &s, &mut out)?;
    // linear fit of coherence against the swept value, for quick slope checks
    let good: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.coherence.is_finite())
        .map(|r| (r.value, r.coherence))
        .collect();
    if good.len() >= 2 {
        let xs: Vec<f64> = good.iter().map(|g| g.0).collect();
        let ys: Vec<f64> = good.iter().map(|g| g.1).collect();
        let (slope, _, r2) = fit::linear_fit(&xs, &ys);
        out.summary.push(("coherence_slope".into(), fmt_num(slope)));
        out.summary.push(("coherence_slope_r2".into(), fmt_num(r2)));
    }
    let manifest = config.manifest(&[
        ("operation", "sweep".into()),
        ("sweep.key", spec.key.clone()),
        ("sweep.points", spec.values.len().to_string()),
    ])?;
    write_file(out_dir, "manifest.txt", &manifest, &mut out)?;
    write_file(
        out_dir,
        "plot.gp",
        &plot_script(&[("sweep.csv".into(), "sweep".into())]),
        &mut out,
    )?;
    Ok(out)
}
