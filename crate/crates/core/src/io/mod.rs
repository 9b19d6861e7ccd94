//! File formats: CSV tables and assignments, and the model document.

mod document;
mod table;

pub use document::{deserialize_model, serialize_model, EntryDocument, ModelDocument, FORMAT_VERSION};
pub use table::{parse_table, read_table, write_assignments, write_clustering, write_table, Table, CLUSTER_COLUMN};
