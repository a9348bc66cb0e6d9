//! Run configuration: command-line flags merged over an optional flat TOML
//! file whose keys mirror the flag names.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    #[default]
    Squeeze,
    Metrology,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct Params {
    /// Number of spins
    #[arg(long)]
    pub n: Option<usize>,
    /// Initial polarization per spin, 0 < p ≤ 1
    #[arg(long)]
    pub p: Option<f64>,
    /// Twisting coupling J
    #[arg(long)]
    pub j: Option<f64>,
    #[arg(long)]
    pub gamma_par: Option<f64>,
    #[arg(long)]
    pub gamma_perp: Option<f64>,
    /// Squeezing time T
    #[arg(long)]
    pub t: Option<f64>,
    /// Total measurement time (defaults to T)
    #[arg(long)]
    pub tau: Option<f64>,
    /// Signal field
    #[arg(long, allow_hyphen_values = true)]
    pub b_y: Option<f64>,
    /// Mean pairwise twisting angle for disorder runs
    #[arg(long)]
    pub theta0: Option<f64>,
    /// Relative disorder width, 1/alpha = kappa²·theta0²
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Disorder concentration
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Master seed (falls back to OAT_SEED, then 0)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sweep axis as param:lo:hi:points:lin|log
    #[arg(long)]
    pub sweep: Option<String>,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Flat TOML file with keys named like the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in a config file. The subcommand-specific keys are only
/// consulted by the subcommand that owns them.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    n: Option<usize>,
    p: Option<f64>,
    j: Option<f64>,
    gamma_par: Option<f64>,
    gamma_perp: Option<f64>,
    t: Option<f64>,
    tau: Option<f64>,
    b_y: Option<f64>,
    theta0: Option<f64>,
    kappa: Option<f64>,
    alpha: Option<f64>,
    samples: Option<usize>,
    seed: Option<u64>,
    sweep: Option<String>,
    out: Option<PathBuf>,
    format: Option<Format>,
    pub target: Option<Target>,
    pub angle: Option<f64>,
    pub n_range: Option<String>,
    pub suite: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        let table: toml::Table =
            text.parse().map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?;
        let normalized: toml::Table = table.into_iter().map(|(k, v)| (k.replace('_', "-"), v)).collect();
        toml::Value::Table(normalized)
            .try_into()
            .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }
}

impl Params {
    /// Fills every flag left unset from the config file.
    pub fn merge(mut self, file: &FileConfig) -> Self {
        macro_rules! fill {
            ($($f:ident),*) => { $( if self.$f.is_none() { self.$f = file.$f.clone(); } )* };
        }
        fill!(n, p, j, gamma_par, gamma_perp, t, tau, b_y, theta0, kappa, alpha, samples, seed, sweep, out, format);
        self
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn resolved_seed(&self) -> Result<u64, CliError> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var("OAT_SEED") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Validation(format!("OAT_SEED must be an unsigned integer, got '{v}'"))),
            Err(_) => Ok(0),
        }
    }

    pub fn sweep(&self) -> Result<Option<Sweep>, CliError> {
        self.sweep.as_deref().map(str::parse).transpose()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    N,
    P,
    J,
    GammaPar,
    GammaPerp,
    T,
    Tau,
    BY,
    Theta0,
    Kappa,
    Alpha,
}

impl Param {
    const ALL: [Param; 11] = [
        Param::N,
        Param::P,
        Param::J,
        Param::GammaPar,
        Param::GammaPerp,
        Param::T,
        Param::Tau,
        Param::BY,
        Param::Theta0,
        Param::Kappa,
        Param::Alpha,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::N => "n",
            Param::P => "p",
            Param::J => "j",
            Param::GammaPar => "gamma-par",
            Param::GammaPerp => "gamma-perp",
            Param::T => "t",
            Param::Tau => "tau",
            Param::BY => "b-y",
            Param::Theta0 => "theta0",
            Param::Kappa => "kappa",
            Param::Alpha => "alpha",
        }
    }

    /// Column name used when the swept value is written to a table.
    pub fn column(self) -> String {
        self.name().replace('-', "_")
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.replace('_', "-");
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| CliError::Validation(format!("unknown sweep parameter '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Lin,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub param: Param,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub scale: Scale,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i == self.points - 1 {
                    return self.hi;
                }
                let f = i as f64 / last;
                match self.scale {
                    Scale::Lin => self.lo + (self.hi - self.lo) * f,
                    Scale::Log => self.lo * ((self.hi / self.lo).ln() * f).exp(),
                }
            })
            .collect()
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scale = if self.scale == Scale::Lin { "lin" } else { "log" };
        write!(f, "{}:{}:{}:{}:{}", self.param, self.lo, self.hi, self.points, scale)
    }
}

impl FromStr for Sweep {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| CliError::Validation(format!("invalid sweep '{s}': {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 5 {
            return Err(bad("expected param:lo:hi:points:lin|log"));
        }
        let param: Param = parts[0].parse()?;
        let lo: f64 = parts[1].parse().map_err(|_| bad("lo is not a number"))?;
        let hi: f64 = parts[2].parse().map_err(|_| bad("hi is not a number"))?;
        let points: usize = parts[3].parse().map_err(|_| bad("points is not an integer"))?;
        let scale = match parts[4] {
            "lin" => Scale::Lin,
            "log" => Scale::Log,
            _ => return Err(bad("scale must be lin or log")),
        };
        if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
            return Err(bad("need finite lo < hi"));
        }
        if points < 2 {
            return Err(bad("points must be at least 2"));
        }
        if scale == Scale::Log && !(lo > 0.0) {
            return Err(bad("log sweeps need lo > 0"));
        }
        Ok(Sweep { param, lo, hi, points, scale })
    }
}

/// Inclusive spin-count range written `a..b` or `a:b`.
pub fn parse_n_range(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Validation(format!("invalid n-range '{s}', expected lo..hi"));
    let (a, b) = s.split_once("..").or_else(|| s.split_once(':')).ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_round_trip() {
        let s: Sweep = "t:0.1:10:50:log".parse().unwrap();
        assert_eq!(s.param, Param::T);
        let v = s.values();
        assert_eq!(v.len(), 50);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[49], 10.0);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(s.to_string().parse::<Sweep>().unwrap(), s);
    }

    #[test]
    fn sweep_rejects_bad_input() {
        for bad in ["t:1:0.1:5:lin", "t:0:1:5:log", "t:0.1:1:1:lin", "q:0:1:5:lin", "t:0:1:5:cubic", "t:0:1"] {
            assert!(bad.parse::<Sweep>().is_err(), "{bad}");
        }
    }

    #[test]
    fn param_names_accept_underscores() {
        assert_eq!("gamma_par".parse::<Param>().unwrap(), Param::GammaPar);
        assert_eq!("b-y".parse::<Param>().unwrap(), Param::BY);
    }

    #[test]
    fn n_range_forms() {
        assert_eq!(parse_n_range("2..8").unwrap(), (2, 8));
        assert_eq!(parse_n_range("2..=8").unwrap(), (2, 8));
        assert_eq!(parse_n_range("3:5").unwrap(), (3, 5));
        assert!(parse_n_range("8..2").is_err());
        assert!(parse_n_range("x").is_err());
    }

    #[test]
    fn file_values_fill_unset_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "n = 50\ngamma_par = 0.02\np = 1\nsweep = \"t:1:2:3:lin\"\n").unwrap();
        let file = FileConfig::load(&path).unwrap();
        let params = Params { n: Some(7), ..Params::default() }.merge(&file);
        assert_eq!(params.n, Some(7));
        assert_eq!(params.gamma_par, Some(0.02));
        assert_eq!(params.p, Some(1.0));
        assert!(params.sweep().unwrap().is_some());
    }

    #[test]
    fn unknown_config_key_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert!(matches!(FileConfig::load(&path), Err(CliError::Validation(_))));
    }
}
