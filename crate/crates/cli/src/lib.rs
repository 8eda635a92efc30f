//! Library surface of the pipeline CLI, shared by the binary and the
//! integration tests.

pub mod commands;
pub mod config;
pub mod fixturegen;
pub mod manifest;

/// Which trained model(s) a subcommand targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModelChoice {
    Flat,
    Hier,
    Both,
}
