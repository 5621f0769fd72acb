//! HTTP API and command line front end over `nadea-core`.

pub mod api;
pub mod cli;
pub mod config;
pub mod store;
pub mod wire;

pub use api::{router, AppState};
pub use config::Config;
pub use store::Store;
pub use wire::{WireLine, WireState};
