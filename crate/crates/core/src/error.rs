use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure classes of the phase computations.
///
/// The variants map one-to-one onto the CLI exit codes, so new variants need a
/// matching code there.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two states whose relative phase was requested are (numerically) orthogonal.
    #[error("undefined phase: overlap magnitude {magnitude:.3e} is below the orthogonality threshold {threshold:.1e}")]
    UndefinedPhase { magnitude: f64, threshold: f64 },

    /// The tracked level touches another level.
    #[error("degenerate spectrum: gap {gap:.3e} at level {level} is below the threshold {threshold:.1e}")]
    Degeneracy { level: usize, gap: f64, threshold: f64 },

    /// The endpoints of a Bloch-sphere path are antipodal; the shortest geodesic is not unique.
    #[error("antipodal endpoints: shortest geodesic closure is not unique (p0·p1 = {dot:.12})")]
    Antipodal { dot: f64 },

    /// A sampled path is too coarse for the requested computation.
    #[error("path resolution: {0}")]
    Resolution(&'static str),

    /// The integration step violates the stability budget of the propagator.
    #[error("step size {dt:.3e} too large: need dt < {limit:.3e}")]
    StepSize { dt: f64, limit: f64 },

    /// The propagated state lost normalization beyond the alarm level.
    #[error("norm drift {drift:.3e} exceeds alarm level")]
    NormDrift { drift: f64 },

    /// Sizes of inputs do not match.
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    /// A parameter lies outside its admissible domain.
    #[error("invalid parameter: {0}")]
    Domain(&'static str),

    /// A triangle of a surface mesh has (numerically) zero area.
    #[error("degenerate triangle {index} in surface mesh")]
    DegenerateTriangle { index: usize },
}
