//! The built-in corpus of promise templates and polymorphism families, the
//! JSON document formats, and the `pcsp` command line.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod io;

pub use cli::run;
pub use corpus::{entries, family, self_check, template, Entry, ENTRIES, FAMILIES, TEMPLATES};
pub use error::CliError;
pub use io::{load_assignment, load_family, load_instance, load_template, Planted};
