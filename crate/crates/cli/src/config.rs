//! Flat `key = value` run configuration.
//!
//! Keys may appear at top level or under the section that owns them:
//!
//! ```text
//! [run]      experiment, out_dir
//! [params]   g, delta0, delta, kappa, gamma, gamma_pd, fss, n_max
//! [analysis] tau, t_nodes, tau_nodes, threshold, null_space_check
//! [sweep]    omega_min, omega_max, omega_step, sweep_csv
//! [switch]   steps, step_length, dt, t0_per_step, rho2p_t0, switch_csv, switch_rho2p
//! [steady]   omega, steady_csv, steady_rho2p
//! [dressed]  max_order, energies_csv, resonances_csv
//! ```
//!
//! Energies and rates are given in meV (rates as `ħ·rate`), driving strengths
//! in units of `g`, times in ps. `#` starts a comment.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use entswitch_core::correlations::{Quadrature, DEFAULT_ENTANGLEMENT_THRESHOLD, DEFAULT_TAU};
use entswitch_core::dynamics::NullSpaceCheck;
use entswitch_core::params::HBAR_MEV_PS;
use entswitch_core::protocol::{
    AnalysisOptions, DEFAULT_STEP_LENGTH, DEFAULT_T0_PER_STEP, OMEGA_PHI_OVER_G, OMEGA_PSI_OVER_G,
    OMEGA_ZERO_OVER_G,
};
use entswitch_core::SystemParams;

/// Largest photon cutoff accepted; the dense Liouvillian grows as `(4(n+1)²)²`.
pub const MAX_N_MAX: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Experiment {
    Sweep,
    Switch,
    Steady,
    Dressed,
}

impl FromStr for Experiment {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "sweep" => Ok(Experiment::Sweep),
            "switch" => Ok(Experiment::Switch),
            "steady" => Ok(Experiment::Steady),
            "dressed" => Ok(Experiment::Dressed),
            _ => Err(()),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::Sweep => "sweep",
            Experiment::Switch => "switch",
            Experiment::Steady => "steady",
            Experiment::Dressed => "dressed",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigErrorKind {
    MissingEquals,
    UnknownSection(String),
    UnknownKey { section: String, key: String },
    WrongSection { key: String, section: String, home: &'static str },
    DuplicateKey(String),
    MalformedNumber { key: String, value: String },
    InvalidValue { key: String, value: String, expected: &'static str },
    OutOfRange { key: String, value: String, requirement: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line, when the error is tied to one.
    pub line: Option<usize>,
    pub kind: ConfigErrorKind,
}

impl fmt::Display for ConfigErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ConfigErrorKind::*;
        match self {
            MissingEquals => write!(f, "expected `key = value` or `[section]`"),
            UnknownSection(s) => write!(f, "unknown section [{s}]"),
            UnknownKey { section, key } => write!(f, "unknown key `{key}` in [{section}]"),
            WrongSection { key, section, home } => {
                write!(f, "key `{key}` belongs in [{home}], not [{section}]")
            }
            DuplicateKey(k) => write!(f, "key `{k}` given twice"),
            MalformedNumber { key, value } => write!(f, "`{key}`: malformed number {value:?}"),
            InvalidValue { key, value, expected } => {
                write!(f, "`{key}`: invalid value {value:?}, expected {expected}")
            }
            OutOfRange { key, value, requirement } => {
                write!(f, "`{key}` = {value} is out of range: {requirement}")
            }
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    /// Delay window (ps).
    pub tau: f64,
    pub quadrature: Quadrature,
    pub threshold: f64,
    pub null_space_check: NullSpaceCheck,
}

impl AnalysisConfig {
    pub fn options(&self) -> AnalysisOptions {
        AnalysisOptions {
            quadrature: self.quadrature,
            threshold: self.threshold,
            null_space_check: self.null_space_check,
        }
    }
}

/// Ω grid in units of `g`, shared by the sweep and the dressed-energy table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_step: f64,
    pub csv: PathBuf,
}

impl SweepConfig {
    /// Grid points from `omega_min` up to `omega_max`, the end included when
    /// it lies on the grid to within a millionth of a step.
    pub fn grid(&self) -> Vec<f64> {
        let span = (self.omega_max - self.omega_min) / self.omega_step;
        let count = (span + 1e-6).floor() as usize + 1;
        (0..count).map(|i| self.omega_min + i as f64 * self.omega_step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchConfig {
    /// Driving strength of each step, in units of `g`.
    pub steps: Vec<f64>,
    pub step_length: f64,
    pub dt: f64,
    pub t0_per_step: usize,
    /// Window start whose two-photon matrix is written out.
    pub rho2p_t0: f64,
    pub csv: PathBuf,
    pub rho2p: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyConfig {
    pub omega: f64,
    pub csv: PathBuf,
    pub rho2p: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DressedConfig {
    pub max_order: u32,
    pub energies_csv: PathBuf,
    pub resonances_csv: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub out_dir: PathBuf,
    pub params: SystemParams,
    pub analysis: AnalysisConfig,
    pub sweep: SweepConfig,
    pub switch: SwitchConfig,
    pub steady: SteadyConfig,
    pub dressed: DressedConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let step_length = DEFAULT_STEP_LENGTH;
        Self {
            experiment: Experiment::Sweep,
            out_dir: PathBuf::from("out"),
            params: SystemParams::default(),
            analysis: AnalysisConfig {
                tau: DEFAULT_TAU,
                quadrature: Quadrature::default(),
                threshold: DEFAULT_ENTANGLEMENT_THRESHOLD,
                null_space_check: NullSpaceCheck::SingularValues,
            },
            sweep: SweepConfig {
                omega_min: 1.0,
                omega_max: 35.0,
                omega_step: 0.2,
                csv: PathBuf::from("sweep.csv"),
            },
            switch: SwitchConfig {
                steps: vec![
                    OMEGA_PHI_OVER_G,
                    OMEGA_PSI_OVER_G,
                    OMEGA_ZERO_OVER_G,
                    OMEGA_PSI_OVER_G,
                    OMEGA_PHI_OVER_G,
                    OMEGA_ZERO_OVER_G,
                ],
                step_length,
                dt: step_length / 4.0,
                t0_per_step: DEFAULT_T0_PER_STEP,
                rho2p_t0: step_length / 2.0,
                csv: PathBuf::from("switch.csv"),
                rho2p: PathBuf::from("switch_rho2p.json"),
            },
            steady: SteadyConfig {
                omega: OMEGA_PHI_OVER_G,
                csv: PathBuf::from("steady.csv"),
                rho2p: PathBuf::from("steady_rho2p.json"),
            },
            dressed: DressedConfig {
                max_order: 2,
                energies_csv: PathBuf::from("dressed.csv"),
                resonances_csv: PathBuf::from("resonances.csv"),
            },
        }
    }
}

const SECTIONS: [(&str, &[&str]); 7] = [
    ("run", &["experiment", "out_dir"]),
    ("params", &["g", "delta0", "delta", "kappa", "gamma", "gamma_pd", "fss", "n_max"]),
    ("analysis", &["tau", "t_nodes", "tau_nodes", "threshold", "null_space_check"]),
    ("sweep", &["omega_min", "omega_max", "omega_step", "sweep_csv"]),
    (
        "switch",
        &["steps", "step_length", "dt", "t0_per_step", "rho2p_t0", "switch_csv", "switch_rho2p"],
    ),
    ("steady", &["omega", "steady_csv", "steady_rho2p"]),
    ("dressed", &["max_order", "energies_csv", "resonances_csv"]),
];

fn home_section(key: &str) -> Option<&'static str> {
    SECTIONS
        .iter()
        .find(|(_, keys)| keys.contains(&key))
        .map(|(s, _)| *s)
}

struct Entry {
    line: usize,
    value: String,
}

struct Reader {
    entries: HashMap<&'static str, Entry>,
}

fn err(line: Option<usize>, kind: ConfigErrorKind) -> ConfigError {
    ConfigError { line, kind }
}

impl Reader {
    fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|e| e.line)
    }

    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.entries.get(key).map(|e| (e.line, e.value.as_str()))
    }

    fn number(&self, key: &str) -> Result<Option<(usize, f64)>, ConfigError> {
        let Some((line, v)) = self.raw(key) else {
            return Ok(None);
        };
        match v.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Some((line, x))),
            _ => Err(err(
                Some(line),
                ConfigErrorKind::MalformedNumber { key: key.into(), value: v.into() },
            )),
        }
    }

    /// A finite number satisfying `ok`, or `default`.
    fn f64_in(
        &self,
        key: &str,
        default: f64,
        ok: impl Fn(f64) -> bool,
        requirement: &str,
    ) -> Result<f64, ConfigError> {
        match self.number(key)? {
            None => Ok(default),
            Some((_, x)) if ok(x) => Ok(x),
            Some((line, x)) => Err(out_of_range(Some(line), key, &x.to_string(), requirement)),
        }
    }

    fn usize_in(
        &self,
        key: &str,
        default: usize,
        lo: usize,
        hi: usize,
    ) -> Result<usize, ConfigError> {
        let Some((line, v)) = self.raw(key) else {
            return Ok(default);
        };
        let n: i64 = v.parse().map_err(|_| {
            err(
                Some(line),
                ConfigErrorKind::MalformedNumber { key: key.into(), value: v.into() },
            )
        })?;
        if n < lo as i64 || n > hi as i64 {
            return Err(out_of_range(Some(line), key, v, &format!("must be in {lo}..={hi}")));
        }
        Ok(n as usize)
    }

    fn path(&self, key: &str, default: &PathBuf) -> Result<PathBuf, ConfigError> {
        match self.raw(key) {
            None => Ok(default.clone()),
            Some((line, "")) => Err(err(
                Some(line),
                ConfigErrorKind::InvalidValue {
                    key: key.into(),
                    value: String::new(),
                    expected: "a non-empty path",
                },
            )),
            Some((_, v)) => Ok(PathBuf::from(v)),
        }
    }
}

fn out_of_range(line: Option<usize>, key: &str, value: &str, requirement: &str) -> ConfigError {
    err(
        line,
        ConfigErrorKind::OutOfRange {
            key: key.into(),
            value: value.into(),
            requirement: requirement.into(),
        },
    )
}

fn unquote(v: &str) -> &str {
    let v = v.trim();
    for q in ['"', '\''] {
        if v.len() >= 2 && v.starts_with(q) && v.ends_with(q) {
            return &v[1..v.len() - 1];
        }
    }
    v
}

fn tokenize(text: &str) -> Result<Reader, ConfigError> {
    let mut entries: HashMap<&'static str, Entry> = HashMap::new();
    let mut section: Option<&'static str> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(Some(line), ConfigErrorKind::MissingEquals))?
                .trim();
            section = Some(
                SECTIONS
                    .iter()
                    .find(|(s, _)| *s == name)
                    .map(|(s, _)| *s)
                    .ok_or_else(|| err(Some(line), ConfigErrorKind::UnknownSection(name.into())))?,
            );
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(Some(line), ConfigErrorKind::MissingEquals))?;
        let key = key.trim();
        let home = home_section(key).ok_or_else(|| {
            err(
                Some(line),
                ConfigErrorKind::UnknownKey {
                    section: section.unwrap_or("top level").into(),
                    key: key.into(),
                },
            )
        })?;
        if let Some(s) = section {
            if s != home {
                return Err(err(
                    Some(line),
                    ConfigErrorKind::WrongSection { key: key.into(), section: s.into(), home },
                ));
            }
        }
        let canonical = SECTIONS
            .iter()
            .flat_map(|(_, keys)| keys.iter())
            .find(|k| **k == key)
            .copied()
            .unwrap_or_default();
        if entries.contains_key(canonical) {
            return Err(err(Some(line), ConfigErrorKind::DuplicateKey(key.into())));
        }
        entries.insert(canonical, Entry { line, value: unquote(value).to_string() });
    }
    Ok(Reader { entries })
}

fn parse_params(r: &Reader) -> Result<SystemParams, ConfigError> {
    let d = SystemParams::default();
    let finite = |_: f64| true;
    let nonneg = |x: f64| x >= 0.0;
    let hbar = HBAR_MEV_PS;
    Ok(SystemParams {
        g: r.f64_in("g", d.g, |x| x > 0.0, "must be positive")?,
        delta0: r.f64_in("delta0", d.delta0, |x| x > 0.0, "must be positive")?,
        delta: r.f64_in("delta", d.delta, finite, "")?,
        kappa: r.f64_in("kappa", d.kappa * hbar, nonneg, "must be >= 0")? / hbar,
        gamma: r.f64_in("gamma", d.gamma * hbar, nonneg, "must be >= 0")? / hbar,
        gamma_pd: r.f64_in("gamma_pd", d.gamma_pd * hbar, nonneg, "must be >= 0")? / hbar,
        fss: r.f64_in("fss", d.fss, finite, "")?,
        n_max: r.usize_in("n_max", d.n_max, 1, MAX_N_MAX)?,
        hbar,
    })
}

fn parse_analysis(r: &Reader, d: &AnalysisConfig) -> Result<AnalysisConfig, ConfigError> {
    let null_space_check = match r.raw("null_space_check") {
        None => d.null_space_check,
        Some((_, "svd")) => NullSpaceCheck::SingularValues,
        Some((_, "skip")) => NullSpaceCheck::Skip,
        Some((line, v)) => {
            return Err(err(
                Some(line),
                ConfigErrorKind::InvalidValue {
                    key: "null_space_check".into(),
                    value: v.into(),
                    expected: "svd or skip",
                },
            ))
        }
    };
    Ok(AnalysisConfig {
        tau: r.f64_in("tau", d.tau, |x| x > 0.0, "must be positive")?,
        quadrature: Quadrature {
            t_nodes: r.usize_in("t_nodes", d.quadrature.t_nodes, 2, 10_001)?,
            tau_nodes: r.usize_in("tau_nodes", d.quadrature.tau_nodes, 2, 10_001)?,
        },
        threshold: r.f64_in("threshold", d.threshold, |x| (0.0..=1.0).contains(&x), "must be in [0, 1]")?,
        null_space_check,
    })
}

fn parse_sweep(r: &Reader, d: &SweepConfig) -> Result<SweepConfig, ConfigError> {
    let nonneg = |x: f64| x >= 0.0;
    let omega_min = r.f64_in("omega_min", d.omega_min, nonneg, "must be >= 0")?;
    let omega_max = r.f64_in("omega_max", d.omega_max, nonneg, "must be >= 0")?;
    if omega_max < omega_min {
        let line = r.line("omega_max").or(r.line("omega_min"));
        return Err(out_of_range(
            line,
            "omega_max",
            &omega_max.to_string(),
            &format!("must be >= omega_min = {omega_min}"),
        ));
    }
    let omega_step = r.f64_in("omega_step", d.omega_step, |x| x > 0.0, "must be positive")?;
    let s = SweepConfig { omega_min, omega_max, omega_step, csv: r.path("sweep_csv", &d.csv)? };
    if (omega_max - omega_min) / omega_step > 1e6 {
        let line = r.line("omega_step");
        return Err(out_of_range(line, "omega_step", &omega_step.to_string(), "grid exceeds 10^6 points"));
    }
    Ok(s)
}

fn parse_steps(r: &Reader, default: &[f64]) -> Result<Vec<f64>, ConfigError> {
    let Some((line, v)) = r.raw("steps") else {
        return Ok(default.to_vec());
    };
    let mut out = Vec::new();
    for item in v.split(',') {
        let item = item.trim();
        let x: f64 = item.parse().ok().filter(|x: &f64| x.is_finite()).ok_or_else(|| {
            err(
                Some(line),
                ConfigErrorKind::MalformedNumber { key: "steps".into(), value: item.into() },
            )
        })?;
        if x < 0.0 {
            return Err(out_of_range(Some(line), "steps", item, "driving strengths must be >= 0"));
        }
        out.push(x);
    }
    Ok(out)
}

fn parse_switch(r: &Reader, d: &SwitchConfig) -> Result<SwitchConfig, ConfigError> {
    let steps = parse_steps(r, &d.steps)?;
    let step_length = r.f64_in("step_length", d.step_length, |x| x > 0.0, "must be positive")?;
    let total = step_length * steps.len() as f64;
    let dt = r.f64_in("dt", step_length / 4.0, |x| x > 0.0 && x <= total, "must be in (0, total duration]")?;
    let rho2p_t0 = r.f64_in(
        "rho2p_t0",
        step_length / 2.0,
        |x| x >= 0.0 && x + dt <= total + 1e-9,
        "window must lie inside the schedule",
    )?;
    Ok(SwitchConfig {
        steps,
        step_length,
        dt,
        t0_per_step: r.usize_in("t0_per_step", d.t0_per_step, 1, 100_000)?,
        rho2p_t0,
        csv: r.path("switch_csv", &d.csv)?,
        rho2p: r.path("switch_rho2p", &d.rho2p)?,
    })
}

/// Parses and validates a configuration; missing keys take their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let r = tokenize(text)?;
    let d = RunConfig::default();
    let experiment = match r.raw("experiment") {
        None => d.experiment,
        Some((line, v)) => v.parse().map_err(|_| {
            err(
                Some(line),
                ConfigErrorKind::InvalidValue {
                    key: "experiment".into(),
                    value: v.into(),
                    expected: "sweep, switch, steady or dressed",
                },
            )
        })?,
    };
    Ok(RunConfig {
        experiment,
        out_dir: r.path("out_dir", &d.out_dir)?,
        params: parse_params(&r)?,
        analysis: parse_analysis(&r, &d.analysis)?,
        sweep: parse_sweep(&r, &d.sweep)?,
        switch: parse_switch(&r, &d.switch)?,
        steady: SteadyConfig {
            omega: r.f64_in("omega", d.steady.omega, |x| x >= 0.0, "must be >= 0")?,
            csv: r.path("steady_csv", &d.steady.csv)?,
            rho2p: r.path("steady_rho2p", &d.steady.rho2p)?,
        },
        dressed: DressedConfig {
            max_order: r.usize_in("max_order", d.dressed.max_order as usize, 1, 20)? as u32,
            energies_csv: r.path("energies_csv", &d.dressed.energies_csv)?,
            resonances_csv: r.path("resonances_csv", &d.dressed.resonances_csv)?,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(text: &str) -> (Option<usize>, ConfigErrorKind) {
        let e = parse_config(text).unwrap_err();
        (e.line, e.kind)
    }

    #[test]
    fn empty_gives_defaults() {
        let c = parse_config("").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.params.g, 0.051);
        assert_eq!(c.sweep.grid().len(), 171);
    }

    #[test]
    fn n_max_zero_is_out_of_range() {
        let (line, k) = kind("n_max=0");
        assert_eq!(line, Some(1));
        assert!(matches!(k, ConfigErrorKind::OutOfRange { .. }));
    }

    #[test]
    fn fss_enables_split_variant() {
        let c = parse_config("fss=0.102").unwrap();
        assert!((c.params.fss - 0.1 * c.params.delta0).abs() < 1e-15);
    }

    #[test]
    fn rates_are_read_as_energies() {
        let c = parse_config("[params]\ngamma_pd = 0.003\nkappa=0.0051").unwrap();
        assert!((c.params.gamma_pd * HBAR_MEV_PS - 0.003).abs() < 1e-15);
        assert!((c.params.kappa - SystemParams::default().kappa).abs() < 1e-15);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "# comment\n[params]\ng = 0.05\nbogus = 1\n";
        assert_eq!(
            kind(text),
            (Some(4), ConfigErrorKind::UnknownKey { section: "params".into(), key: "bogus".into() })
        );
        assert!(matches!(kind("\n[nope]"), (Some(2), ConfigErrorKind::UnknownSection(_))));
        assert!(matches!(kind("[run]\n\nexperiment"), (Some(3), ConfigErrorKind::MissingEquals)));
        assert!(matches!(kind("tau = 5x"), (Some(1), ConfigErrorKind::MalformedNumber { .. })));
        assert!(matches!(kind("tau = nan"), (Some(1), ConfigErrorKind::MalformedNumber { .. })));
        assert!(matches!(kind("[sweep]\ng = 1"), (Some(2), ConfigErrorKind::WrongSection { .. })));
        assert!(matches!(kind("g=1\ng=2"), (Some(2), ConfigErrorKind::DuplicateKey(_))));
        assert!(matches!(kind("n_max = 1.5"), (Some(1), ConfigErrorKind::MalformedNumber { .. })));
    }

    #[test]
    fn switch_keys() {
        let c = parse_config(
            "[run]\nexperiment = \"switch\"\n[switch]\nsteps = 8.85, 28.75\nstep_length = 400\nt0_per_step = 8",
        )
        .unwrap();
        assert_eq!(c.experiment, Experiment::Switch);
        assert_eq!(c.switch.steps, [8.85, 28.75]);
        assert_eq!(c.switch.dt, 100.0);
        assert_eq!(c.switch.rho2p_t0, 200.0);
        assert!(matches!(kind("steps = 1, -2"), (Some(1), ConfigErrorKind::OutOfRange { .. })));
        assert!(matches!(kind("dt = 7000"), (Some(1), ConfigErrorKind::OutOfRange { .. })));
    }

    #[test]
    fn sweep_grid_includes_end() {
        let c = parse_config("omega_min = 8\nomega_max = 9\nomega_step = 0.1").unwrap();
        let g = c.sweep.grid();
        assert_eq!(g.len(), 11);
        assert!((g[10] - 9.0).abs() < 1e-12);
        assert!(matches!(kind("omega_min = 5\nomega_max = 4"), (Some(2), ConfigErrorKind::OutOfRange { .. })));
    }

    #[test]
    fn analysis_keys() {
        let c = parse_config("null_space_check = skip\nt_nodes = 9\nthreshold = 0.1").unwrap();
        assert_eq!(c.analysis.null_space_check, NullSpaceCheck::Skip);
        assert_eq!(c.analysis.quadrature.t_nodes, 9);
        assert!(matches!(kind("threshold = 2"), (Some(1), ConfigErrorKind::OutOfRange { .. })));
        assert!(matches!(kind("experiment = plot"), (Some(1), ConfigErrorKind::InvalidValue { .. })));
    }
}
