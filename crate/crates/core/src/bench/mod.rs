//! The benchmark harness: synthetic test images, the denoising pipeline,
//! result tables and the randomized bound checks.

pub mod pipeline;
pub mod properties;
pub mod synthetic;
pub mod tables;

pub use pipeline::{run_pipeline, ForwardModel, Method, PipelineConfig, PipelineContext, PipelineReport};
pub use properties::{run_property_suite, PropertyReport, Scale};
pub use tables::{emit_tables, BenchRecord, Tables};
