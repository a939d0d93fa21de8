//! File formats, run configuration, parallel evaluation and the acceptance
//! self-test behind the `emcavity` command.

pub mod config;
pub mod format;
pub mod parallel;
pub mod selftest;

use emcavity_core::Error;

/// Process exit code for a failed run.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<config::ConfigError>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return core_code(e);
        }
        if let Some(format::FormatError::Field(e)) = cause.downcast_ref::<format::FormatError>() {
            return core_code(e);
        }
        if cause.downcast_ref::<format::FormatError>().is_some() || cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    1
}

fn core_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => 2,
        Error::Convergence(_) | Error::NonFinite(_) => 3,
        _ => 4,
    }
}

/// Short machine-readable name of the error class.
pub fn error_kind(err: &anyhow::Error) -> &'static str {
    match exit_code(err) {
        2 => "config",
        3 => "convergence",
        4 => "precondition",
        _ => "failure",
    }
}
