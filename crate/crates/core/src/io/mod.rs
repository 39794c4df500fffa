//! Dataset ingestion, generation, preparation and export.

pub mod export;
pub mod json;
pub mod prep;
pub mod synthetic;
pub mod tudataset;

pub use export::{export_scored_graph, ExportFormat};
pub use json::{read_dataset, write_dataset};
pub use prep::prepare_glad;
pub use synthetic::{gen_synthetic, BaseKind, SyntheticConfig};
pub use tudataset::parse_tudataset;
