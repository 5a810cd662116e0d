//! Command-line front end and review service over `ucca_refine`.

pub mod cli;
pub mod report;
pub mod service;

pub use cli::{execute, Cli, Command, Exit, Format, Outcome};
pub use service::{router, serve, Session};
