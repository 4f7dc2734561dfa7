pub mod cli;
pub mod config;
pub mod error;
pub mod model;
pub mod network;
pub mod results;
pub mod sim;
pub mod special;
