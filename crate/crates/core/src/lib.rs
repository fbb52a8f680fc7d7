//! Corpus stylometry toolkit.
//!
//! The pipeline runs from ingestion ([`corpus`]) through frequency ranking and
//! function-word selection ([`lexical`]), rule-based tagging and register
//! features ([`tagger`]), dimension reduction ([`multivariate`]) and group
//! comparison ([`stats`]), with CSV/SVG/markdown output in [`report`].
//! [`genclient`] regenerates machine-written corpora through a chat endpoint.

pub mod corpus;
pub mod error;
pub mod genclient;
pub mod lexical;
pub mod matrix;
pub mod multivariate;
pub mod report;
pub mod stats;
pub mod tagger;

pub use error::{Error, Result};
