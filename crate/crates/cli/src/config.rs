//! Run configuration shared by every subcommand.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gext_core::autalg::MAX_AUTOMORPHISMS;
use gext_core::cohomology::ActionConvention;
use serde_json::{json, Value};

pub const DEFAULT_SEED: u64 = 20240607;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    Snf,
    Exhaustive,
    Both,
}

impl BackendChoice {
    pub fn name(self) -> &'static str {
        match self {
            BackendChoice::Snf => "snf",
            BackendChoice::Exhaustive => "exhaustive",
            BackendChoice::Both => "both",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Standard,
    Flipped,
}

impl From<Convention> for ActionConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Standard => ActionConvention::Standard,
            Convention::Flipped => ActionConvention::Flipped,
        }
    }
}

fn positive(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err(String::from("must be positive")),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Flags take precedence over `GEXT_*` environment variables, which take
/// precedence over the defaults.
#[derive(Clone, Debug, Args)]
pub struct RunConfig {
    /// Largest fiber (in arrows) for automorphism enumeration.
    #[arg(long, env = "GEXT_CAP_SAUT", global = true, default_value_t = MAX_AUTOMORPHISMS as u64, value_parser = positive)]
    pub cap_saut: u64,
    /// Largest number of cochains the exhaustive backend may enumerate.
    #[arg(long, env = "GEXT_CAP_COHOMOLOGY", global = true, default_value_t = 1 << 18, value_parser = positive)]
    pub cap_cohomology: u64,
    /// Largest number of tables the census may collect.
    #[arg(long, env = "GEXT_CAP_CENSUS", global = true, default_value_t = 1 << 16, value_parser = positive)]
    pub cap_census: u64,
    #[arg(long, env = "GEXT_BACKEND", global = true, value_enum, default_value_t = BackendChoice::Snf)]
    pub backend: BackendChoice,
    /// Use normalized cochains in the `cohomology` subcommand. Extension
    /// commands always work with normalized cochains.
    #[arg(long, env = "GEXT_NORMALIZED", global = true, default_value_t = true, action = clap::ArgAction::Set)]
    pub normalized: bool,
    #[arg(long, env = "GEXT_SEED", global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Directory for the report and witness files.
    #[arg(long, env = "GEXT_OUT", global = true)]
    pub out: Option<PathBuf>,
    /// How base arrows act on coefficients and how bands are read.
    #[arg(long, env = "GEXT_CONVENTION", global = true, value_enum, default_value_t = Convention::Standard)]
    pub convention: Convention,
    /// Progress messages on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cap_saut: MAX_AUTOMORPHISMS as u64,
            cap_cohomology: 1 << 18,
            cap_census: 1 << 16,
            backend: BackendChoice::Snf,
            normalized: true,
            seed: DEFAULT_SEED,
            out: None,
            convention: Convention::Standard,
            verbose: 0,
        }
    }
}

impl RunConfig {
    pub fn action_convention(&self) -> ActionConvention {
        self.convention.into()
    }

    /// The settings that affect results, embedded in every report. The
    /// output directory and verbosity are left out so reports do not depend
    /// on where they are written.
    pub fn describe(&self) -> Value {
        json!({
            "backend": self.backend.name(),
            "cap_census": self.cap_census,
            "cap_cohomology": self.cap_cohomology,
            "cap_saut": self.cap_saut,
            "convention": self.action_convention().name(),
            "normalized": self.normalized,
            "seed": self.seed,
        })
    }

    pub fn log(&self, msg: &str) {
        if self.verbose > 0 {
            eprintln!("gext: {msg}");
        }
    }
}
