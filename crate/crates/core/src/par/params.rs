use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::schedule::half_length;
use crate::ceil_lg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Profile {
    /// Asymptotic settings: `D = ⌈n^{2/3}(lg n)^{4/3}⌉`, `N_L = ⌈(lg n)^7⌉`,
    /// `ε = 1/⌈(lg n)^3⌉`. Only practical for inspecting the numbers.
    Paper,
    /// `D = ⌈n^{2/3}⌉`, `N_L = ⌈lg n⌉ + 2`, `ε = 1/2`.
    #[default]
    Desk,
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Profile::Paper),
            "desk" => Ok(Profile::Desk),
            other => Err(format!("unknown profile `{other}` (expected paper or desk)")),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Paper => "paper",
            Profile::Desk => "desk",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("n must be at least 1")]
    EmptyGraph,
    #[error("D must be at least 1")]
    ZeroBase,
    #[error("N_L = {0} must be at least 2")]
    TooFewLayers(u64),
    #[error("eps_pi = {0} must lie in (0, 1]")]
    BadEps(f64),
    #[error("N_k = {n_k} is below 2k = {needed}")]
    TooFewIterations { n_k: u64, needed: u64 },
    #[error("tag capacity must be at least 1")]
    ZeroTagCap,
    #[error("iteration {i} is outside 1..={n_k}")]
    IterationOutOfRange { i: u64, n_k: u64 },
    #[error("height must be at least 1")]
    ZeroHeight,
}

/// Global parameters of one shortcutting call.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParScParams {
    /// Base hop distance `D`.
    pub d: u64,
    /// Distance layers `N_L`.
    pub n_l: u64,
    /// Iteration budget `N_k` per call.
    pub n_k: u64,
    /// Pivot-group growth rate `ε_π`.
    pub eps: f64,
    pub max_shortcuts: u64,
    /// Budget on search work (frontier entries plus arcs scanned).
    pub max_work: u64,
    pub tag_cap: usize,
    /// Top recursion height.
    pub h_top: u32,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ParamOverrides {
    pub d: Option<u64>,
    pub n_l: Option<u64>,
    pub n_k: Option<u64>,
    pub eps: Option<f64>,
    pub max_shortcuts: Option<u64>,
    pub max_work: Option<u64>,
    pub tag_cap: Option<usize>,
    pub h_top: Option<u32>,
}

/// Smallest `d` with `d³ ≥ n²`, i.e. `⌈n^{2/3}⌉` without rounding error.
pub fn ceil_two_thirds(n: u64) -> u64 {
    let target = (n as u128) * (n as u128);
    let mut d = ((n as f64).powf(2.0 / 3.0).round() as u128).max(1);
    while d * d * d < target {
        d += 1;
    }
    while d > 1 && (d - 1) * (d - 1) * (d - 1) >= target {
        d -= 1;
    }
    d as u64
}

/// `⌈n^{2/3}(lg n)^{4/3}⌉`, with `lg n` clamped to at least 1.
pub fn paper_distance(n: usize) -> u64 {
    let lg = (n as f64).log2().max(1.0);
    ((n as f64).powf(2.0 / 3.0) * lg.powf(4.0 / 3.0) - 1e-9).ceil().max(1.0) as u64
}

/// `8·⌈log₂(n+2)⌉`.
pub fn default_tag_cap(n: usize) -> usize {
    8 * ceil_lg(n + 2) as usize
}

/// `(32·(n+m)·⌈lg n⌉², 32·n·⌈lg n⌉²)`.
pub fn default_budgets(n: usize, m: usize) -> (u64, u64) {
    let lg2 = (ceil_lg(n) as u64).pow(2);
    (32 * (n + m) as u64 * lg2, 32 * n as u64 * lg2)
}

/// Parameters for a graph with `n` vertices and `m` arcs.
pub fn make_params(
    n: usize,
    m: usize,
    profile: Profile,
    overrides: &ParamOverrides,
) -> Result<ParScParams, ParamError> {
    if n == 0 {
        return Err(ParamError::EmptyGraph);
    }
    let (d, n_l, eps) = match profile {
        Profile::Desk => (ceil_two_thirds(n as u64), ceil_lg(n) as u64 + 2, 0.5),
        Profile::Paper => {
            let lg = (n as f64).log2().max(1.0);
            let n_l = (lg.powi(7) - 1e-6).ceil() as u64;
            let cube = (lg.powi(3) - 1e-9).ceil();
            (paper_distance(n), n_l, 1.0 / cube)
        }
    };
    let eps = overrides.eps.unwrap_or(eps);
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(ParamError::BadEps(eps));
    }
    let (max_work, max_shortcuts) = default_budgets(n, m);
    let p = ParScParams {
        d: overrides.d.unwrap_or(d),
        n_l: overrides.n_l.unwrap_or(n_l),
        n_k: overrides.n_k.unwrap_or(2 * half_length(n, eps) as u64),
        eps,
        max_shortcuts: overrides.max_shortcuts.unwrap_or(max_shortcuts),
        max_work: overrides.max_work.unwrap_or(max_work),
        tag_cap: overrides.tag_cap.unwrap_or_else(|| default_tag_cap(n)),
        h_top: overrides.h_top.unwrap_or_else(|| ceil_lg(n)),
    };
    p.validate(n)?;
    Ok(p)
}

impl ParScParams {
    /// Checks the parameter invariants for graphs of up to `n` vertices.
    /// Zero budgets are accepted; they make every call abort.
    pub fn validate(&self, n: usize) -> Result<(), ParamError> {
        if self.d == 0 {
            return Err(ParamError::ZeroBase);
        }
        if self.n_l < 2 {
            return Err(ParamError::TooFewLayers(self.n_l));
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(ParamError::BadEps(self.eps));
        }
        let needed = 2 * half_length(n, self.eps) as u64;
        if self.n_k < needed {
            return Err(ParamError::TooFewIterations {
                n_k: self.n_k,
                needed,
            });
        }
        if self.tag_cap == 0 {
            return Err(ParamError::ZeroTagCap);
        }
        Ok(())
    }

    /// `hTop·N_k·N_L·D`, the largest hop limit any search may use.
    pub fn max_search_distance(&self) -> u128 {
        self.h_top as u128 * self.n_k as u128 * self.n_l as u128 * self.d as u128
    }
}
