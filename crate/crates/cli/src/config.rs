use col_biworld::{Universe, DEFAULT_CAP};
use col_syntax::Signature;

use crate::output::CliError;

/// Environment variable overriding the default registry cap.
pub const CAP_ENV: &str = "COL_CAP";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionConfig {
    pub atoms: Vec<String>,
    pub agents: Vec<String>,
    pub cap: u64,
    pub seed: u64,
    pub json: bool,
}

pub fn default_cap() -> u64 {
    std::env::var(CAP_ENV).ok().and_then(|s| s.trim().replace('_', "").parse().ok()).unwrap_or(DEFAULT_CAP)
}

impl SessionConfig {
    pub fn signature(&self) -> Signature {
        Signature::new(self.atoms.iter().cloned(), self.agents.iter().cloned())
    }

    pub fn universe(&self, level: usize) -> Result<Universe, CliError> {
        Ok(Universe::build(&self.signature(), level, self.cap)?)
    }
}
