//! Numerical tolerances and size limits shared by every module.

/// Tolerances used for validation and verdicts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max abs entry of `mat - mat†` accepted for a density matrix.
    pub hermitian: f64,
    /// Max deviation of the trace from one.
    pub trace: f64,
    /// Smallest eigenvalue accepted is `-psd`.
    pub psd: f64,
    /// Max deviation of a pure state's squared norm from one.
    pub norm: f64,
    /// Generic equality checks between two routes to the same quantity.
    pub equality: f64,
    /// A criterion reports detection when its margin exceeds this.
    pub detection: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    hermitian: 1e-10,
    trace: 1e-10,
    psd: 1e-10,
    norm: 1e-10,
    equality: 1e-12,
    detection: 1e-12,
};

impl Default for Tolerances {
    fn default() -> Self {
        TOLERANCES
    }
}

/// Default cap on the total Hilbert-space dimension of a dense matrix.
pub const DEFAULT_DIM_CAP: usize = 4096;
/// Default cap on the site count for subset enumeration (2^N terms).
pub const DEFAULT_SUBSET_BUDGET: usize = 16;
/// Default cap on the single-copy dimension accepted by the doubled-space oracle.
pub const DEFAULT_ORACLE_DIM_CAP: usize = 64;

/// Environment variable that overrides [`DEFAULT_DIM_CAP`] in [`Limits::from_env`].
pub const DIM_CAP_ENV: &str = "UNENTANGLED_DIM_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub dim_cap: usize,
    pub subset_budget: usize,
    pub oracle_dim_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            dim_cap: DEFAULT_DIM_CAP,
            subset_budget: DEFAULT_SUBSET_BUDGET,
            oracle_dim_cap: DEFAULT_ORACLE_DIM_CAP,
        }
    }
}

impl Limits {
    /// Defaults, with the dimension cap taken from `UNENTANGLED_DIM_CAP` when set.
    pub fn from_env() -> Result<Self, crate::Error> {
        let mut limits = Limits::default();
        if let Ok(raw) = std::env::var(DIM_CAP_ENV) {
            limits.dim_cap = raw
                .trim()
                .parse()
                .ok()
                .filter(|&cap: &usize| cap >= 4)
                .ok_or_else(|| crate::Error::Parse(format!("{DIM_CAP_ENV}={raw:?} is not an integer >= 4")))?;
        }
        Ok(limits)
    }
}
