//! Width reduction by combining labelled samples, and the iterated pipeline.

mod combine;
mod pipeline;
mod tuple;

pub use combine::{combine_batch, filter_sublattice, AuditRecord, CombineOutcome, CombinerConfig};
pub use pipeline::{
    dgs_pipeline, AuditEntry, PipelineConfig, PipelineOptions, PipelineOutcome, PipelineReport,
};
pub use tuple::{find_matching_tuple, TupleIndex};
