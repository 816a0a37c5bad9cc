//! Model ingestion and generation: the text model format with its parser and
//! renderer, plus the built-in benchmark generators.

pub mod generate;
mod parse;

pub use parse::{parse_network, render_network, ParseError, ParseErrorKind};
