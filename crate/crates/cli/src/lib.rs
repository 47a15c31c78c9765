//! JSON encodings and SVG diagrams used by the `tropkit` command-line tool.

pub mod io;
pub mod svg;
