pub mod engine;
pub mod language;
pub mod analysis;
pub mod lab;
