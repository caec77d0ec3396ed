//! Model-file parsing and serialization, report emission and the bundled
//! demo fixtures.

pub mod fixtures;
pub mod format;
pub mod model_file;
pub mod reports;

pub use fixtures::{fixture, resolve_model, FIXTURES};
pub use format::{pct2, sci, sig6};
pub use model_file::{load_model, load_model_str, parse_model, save_model, serialize_model};
