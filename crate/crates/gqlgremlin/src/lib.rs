pub mod bench;
pub mod ingest;
pub mod service;
