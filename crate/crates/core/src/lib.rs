pub mod cli;
pub mod consistency;
pub mod csp;
pub mod engine;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod layout;
pub mod reducers;
