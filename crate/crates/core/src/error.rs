use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid delay profile: {0}")]
    InvalidProfile(&'static str),
    #[error("trend fit needs at least two usable samples, found {0}")]
    TrendFit(usize),
    #[error("{name} out of domain: {value}")]
    Domain { name: &'static str, value: f64 },
    #[error("total power is zero")]
    ZeroPower,
    #[error("bin width {0} deg does not divide 360")]
    BinWidth(f64),
    #[error("angular grids differ")]
    GridMismatch,
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64) -> Self {
        Error::Domain { name, value }
    }
}
