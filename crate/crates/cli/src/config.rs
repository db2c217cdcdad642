//! Flat `key = value` scenario files.

use std::collections::BTreeMap;

use pmdyn::{Basis, BathParams, DensityMatrix, Mat4, OptimizerConfig, SystemParams, ValidatedParams, C64};

use crate::CliError;

const SYSTEM_KEYS: [&str; 5] = ["J", "chi", "B", "b", "D"];
const BATH_KEYS: [&str; 4] = ["T1", "T2", "gamma1", "gamma2"];
const CUSTOM_KEYS: [&str; 8] = [
    "rho11", "rho22", "rho33", "rho44", "rho14_re", "rho14_im", "rho23_re", "rho23_im",
];
const OTHER_KEYS: [&str; 14] = [
    "gamma0",
    "gamma0_ratio",
    "initial_state",
    "initial_basis",
    "t_start",
    "t_end",
    "t_points",
    "t_values",
    "geometry",
    "degeneracy_tol",
    "optimizer_grid_theta",
    "optimizer_grid_phi",
    "optimizer_iterations",
    "optimizer_shrink",
];

/// Key groups that exclude each other; an override from one side drops the other.
const EXCLUSIVE: [(&[&str], &[&str]); 2] = [
    (&["gamma0"], &["gamma0_ratio"]),
    (&["t_values"], &["t_start", "t_end", "t_points"]),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Direct,
    Indirect,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    BellPsiPlus,
    SeparableNonzeroDiscord,
    Custom(Mat4),
}

/// Mixing weight of the separable preset `p |psi+><psi+| + (1 - p) I / 4`.
pub const SEPARABLE_WEIGHT: f64 = 0.3;

#[derive(Debug, Clone)]
pub struct Scenario {
    pub system: ValidatedParams,
    pub baths: BathParams,
    pub initial: Option<InitialState>,
    pub initial_basis: Basis,
    pub times: Option<Vec<f64>>,
    pub geometry: Option<Geometry>,
    pub degeneracy_tol: Option<f64>,
    pub optimizer: OptimizerConfig,
}

impl Scenario {
    pub fn initial_state(&self) -> Result<DensityMatrix, CliError> {
        let init = self
            .initial
            .as_ref()
            .ok_or_else(|| CliError::Config("missing key `initial_state`".into()))?;
        let m = match init {
            InitialState::BellPsiPlus => DensityMatrix::bell_psi_plus().into_elements(),
            InitialState::SeparableNonzeroDiscord => DensityMatrix::werner_psi_plus(SEPARABLE_WEIGHT)?.into_elements(),
            InitialState::Custom(m) => *m,
        };
        let rho = DensityMatrix::new(m, self.initial_basis)?;
        match self.initial_basis {
            Basis::Standard => Ok(rho),
            Basis::Energy => Ok(pmdyn::model::from_energy_basis(
                &rho,
                &pmdyn::model::spectrum(&self.system),
            )?),
        }
    }

    pub fn times(&self) -> Result<&[f64], CliError> {
        self.times.as_deref().ok_or_else(|| {
            CliError::Config("missing time grid: set `t_values` or `t_start`, `t_end`, `t_points`".into())
        })
    }

    /// Same scenario with the asymptotic sweep applied.
    pub fn with_system(&self, system: ValidatedParams, baths: BathParams) -> Self {
        Self {
            system,
            baths,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

/// Raw key-value pairs with line numbers.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

fn known(key: &str) -> bool {
    SYSTEM_KEYS.contains(&key) || BATH_KEYS.contains(&key) || CUSTOM_KEYS.contains(&key) || OTHER_KEYS.contains(&key)
}

fn split_line(raw: &str, line: usize) -> Result<Option<(String, String)>, CliError> {
    let text = raw.split('#').next().unwrap_or("").trim();
    if text.is_empty() {
        return Ok(None);
    }
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("line {line}: expected `key = value`, got `{text}`")))?;
    let (k, v) = (k.trim(), v.trim());
    if !known(k) {
        return Err(CliError::Config(format!("line {line}: unknown key `{k}`")));
    }
    if v.is_empty() {
        return Err(CliError::Config(format!("line {line}: key `{k}` has no value")));
    }
    Ok(Some((k.to_string(), v.to_string())))
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if let Some((k, value)) = split_line(raw, line)? {
                if let Some(prev) = entries.get(&k) {
                    let prev: &Entry = prev;
                    return Err(CliError::Config(format!(
                        "line {line}: key `{k}` already set on line {}",
                        prev.line
                    )));
                }
                entries.insert(k, Entry { value, line });
            }
        }
        Ok(Self { entries })
    }

    /// Applies a `key=value` override, replacing the key and anything it excludes.
    pub fn set(&mut self, assignment: &str) -> Result<(), CliError> {
        let (k, v) =
            split_line(assignment, 0)?.ok_or_else(|| CliError::Config(format!("empty override `{assignment}`")))?;
        for (a, b) in EXCLUSIVE {
            let drop_keys = if a.contains(&k.as_str()) {
                b
            } else if b.contains(&k.as_str()) {
                a
            } else {
                continue;
            };
            for o in drop_keys {
                self.entries.remove(*o);
            }
        }
        self.entries.insert(k, Entry { value: v, line: 0 });
        Ok(())
    }

    fn where_(&self, key: &str) -> String {
        match self.entries.get(key) {
            Some(e) if e.line > 0 => format!("line {}: ", e.line),
            _ => String::new(),
        }
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    fn number(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| CliError::Config(format!("{}key `{key}`: `{v}` is not a number", self.where_(key))))
            })
            .transpose()
    }

    fn required(&self, key: &str) -> Result<f64, CliError> {
        self.number(key)?
            .ok_or_else(|| CliError::Config(format!("missing required key `{key}`")))
    }

    fn count(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<usize>().map_err(|_| {
                    CliError::Config(format!(
                        "{}key `{key}`: `{v}` is not a nonnegative integer",
                        self.where_(key)
                    ))
                })
            })
            .transpose()
    }

    fn times(&self) -> Result<Option<Vec<f64>>, CliError> {
        let range = ["t_start", "t_end", "t_points"].map(|k| self.get(k).is_some());
        if let Some(list) = self.get("t_values") {
            if range.iter().any(|&r| r) {
                return Err(CliError::Config(
                    "`t_values` cannot be combined with `t_start`/`t_end`/`t_points`".into(),
                ));
            }
            let ts = list
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| {
                        CliError::Config(format!(
                            "{}key `t_values`: `{}` is not a number",
                            self.where_("t_values"),
                            s.trim()
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            return check_times(ts).map(Some);
        }
        if !range.iter().any(|&r| r) {
            return Ok(None);
        }
        let start = self.required("t_start")?;
        let end = self.required("t_end")?;
        let n = self
            .count("t_points")?
            .ok_or_else(|| CliError::Config("missing required key `t_points`".into()))?;
        if n == 0 {
            return Err(CliError::Config("`t_points` must be at least 1".into()));
        }
        let ts = if n == 1 {
            vec![start]
        } else {
            (0..n)
                .map(|k| start + (end - start) * k as f64 / (n - 1) as f64)
                .collect()
        };
        check_times(ts).map(Some)
    }

    fn initial(&self) -> Result<Option<InitialState>, CliError> {
        let custom_given: Vec<&str> = CUSTOM_KEYS.iter().copied().filter(|k| self.get(k).is_some()).collect();
        let Some(name) = self.get("initial_state") else {
            if let Some(k) = custom_given.first() {
                return Err(CliError::Config(format!("key `{k}` requires `initial_state = custom`")));
            }
            return Ok(None);
        };
        let init = match name {
            "bell_psi_plus" => InitialState::BellPsiPlus,
            "separable_nonzero_discord" => InitialState::SeparableNonzeroDiscord,
            "custom" => {
                let mut m = Mat4::zeros();
                for (k, idx) in ["rho11", "rho22", "rho33", "rho44"].iter().zip(0..4) {
                    m[(idx, idx)] = C64::new(self.required(k)?, 0.0);
                }
                let opt = |k: &str| self.number(k).map(|v| v.unwrap_or(0.0));
                let z14 = C64::new(opt("rho14_re")?, opt("rho14_im")?);
                let z23 = C64::new(opt("rho23_re")?, opt("rho23_im")?);
                m[(0, 3)] = z14;
                m[(3, 0)] = z14.conj();
                m[(1, 2)] = z23;
                m[(2, 1)] = z23.conj();
                InitialState::Custom(m)
            }
            other => {
                return Err(CliError::Config(format!(
                    "{}key `initial_state`: unknown state `{other}` (expected bell_psi_plus, separable_nonzero_discord or custom)",
                    self.where_("initial_state")
                )))
            }
        };
        if !matches!(init, InitialState::Custom(_)) {
            if let Some(k) = custom_given.first() {
                return Err(CliError::Config(format!("key `{k}` requires `initial_state = custom`")));
            }
        }
        Ok(Some(init))
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        let mut sys = [0.0; 5];
        for (v, k) in sys.iter_mut().zip(SYSTEM_KEYS) {
            *v = self.required(k)?;
        }
        let [j, chi, bf, b, d] = sys;
        let system = SystemParams::new(j, chi, bf, b, d);
        let mut bath = [0.0; 4];
        for (v, k) in bath.iter_mut().zip(BATH_KEYS) {
            *v = self.required(k)?;
        }
        let [t1, t2, g1, g2] = bath;
        let gamma0 = match (self.number("gamma0")?, self.number("gamma0_ratio")?) {
            (Some(g), None) => g,
            (None, Some(r)) => r * 0.5 * (g1 + g2),
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "set exactly one of `gamma0` and `gamma0_ratio`, not both".into(),
                ))
            }
            (None, None) => {
                return Err(CliError::Config(
                    "missing required key `gamma0` (or `gamma0_ratio`)".into(),
                ))
            }
        };
        let baths = BathParams::new(t1, t2, g1, g2, gamma0);

        let geometry = match self.get("geometry") {
            None => None,
            Some("direct") => Some(Geometry::Direct),
            Some("indirect") => Some(Geometry::Indirect),
            Some(other) => {
                return Err(CliError::Config(format!(
                    "{}key `geometry`: `{other}` is not direct or indirect",
                    self.where_("geometry")
                )))
            }
        };
        if let Some(g) = geometry {
            check_geometry(g, b, baths.delta_t())?;
        }

        let initial_basis = match self.get("initial_basis") {
            None | Some("standard") => Basis::Standard,
            Some("energy") => Basis::Energy,
            Some(other) => {
                return Err(CliError::Config(format!(
                    "{}key `initial_basis`: `{other}` is not standard or energy",
                    self.where_("initial_basis")
                )))
            }
        };

        let mut optimizer = OptimizerConfig::default();
        if let Some(n) = self.count("optimizer_grid_theta")? {
            optimizer.grid_theta = n;
        }
        if let Some(n) = self.count("optimizer_grid_phi")? {
            optimizer.grid_phi = n;
        }
        if let Some(n) = self.count("optimizer_iterations")? {
            optimizer.refine_iterations = n;
        }
        if let Some(s) = self.number("optimizer_shrink")? {
            optimizer.shrink = s;
        }
        if optimizer.grid_theta == 0 || optimizer.grid_phi == 0 || !(optimizer.shrink > 0.0 && optimizer.shrink < 1.0) {
            return Err(CliError::Config(
                "optimizer grid sizes must be positive and `optimizer_shrink` in (0, 1)".into(),
            ));
        }

        let degeneracy_tol = self.number("degeneracy_tol")?;
        let times = self.times()?;
        let initial = self.initial()?;

        baths.validate()?;
        let system = system.validate(degeneracy_tol)?;
        Ok(Scenario {
            system,
            baths,
            initial,
            initial_basis,
            times,
            geometry,
            degeneracy_tol,
            optimizer,
        })
    }
}

fn check_times(ts: Vec<f64>) -> Result<Vec<f64>, CliError> {
    if ts.is_empty() {
        return Err(CliError::Config("time grid is empty".into()));
    }
    if let Some(t) = ts.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(CliError::Config(format!("time {t} is not finite and nonnegative")));
    }
    if ts.windows(2).any(|w| w[1] < w[0]) {
        return Err(CliError::Config("time grid must be nondecreasing".into()));
    }
    Ok(ts)
}

pub fn geometry_of(b: f64, delta_t: f64) -> Option<Geometry> {
    let s = b * delta_t;
    if s > 0.0 {
        Some(Geometry::Direct)
    } else if s < 0.0 {
        Some(Geometry::Indirect)
    } else {
        None
    }
}

fn check_geometry(g: Geometry, b: f64, delta_t: f64) -> Result<(), CliError> {
    if geometry_of(b, delta_t) != Some(g) {
        let want = match g {
            Geometry::Direct => "b * (T1 - T2) > 0",
            Geometry::Indirect => "b * (T1 - T2) < 0",
        };
        return Err(CliError::Config(format!(
            "key `geometry`: {g:?} geometry needs {want}, got b = {b}, T1 - T2 = {delta_t}"
        )));
    }
    Ok(())
}

/// Parses a config file body and applies `--set` overrides in order.
pub fn parse_config(text: &str, overrides: &[String]) -> Result<Scenario, CliError> {
    let mut raw = RawConfig::parse(text)?;
    for o in overrides {
        raw.set(o)?;
    }
    raw.scenario()
}
