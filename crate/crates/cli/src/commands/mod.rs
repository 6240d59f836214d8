pub mod benchmark;
pub mod infer;
pub mod report;
pub mod simulate;
