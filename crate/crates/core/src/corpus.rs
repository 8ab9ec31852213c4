//! The bundled corpus of small resolution graphs.

use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::graphfile::{self, GraphFile};

/// `(file name, contents)` in file-name order.
pub const BUNDLED: &[(&str, &str)] = &[
    ("a1.graph", include_str!("../corpus/a1.graph")),
    ("a1_blown.graph", include_str!("../corpus/a1_blown.graph")),
    ("a2.graph", include_str!("../corpus/a2.graph")),
    ("a3.graph", include_str!("../corpus/a3.graph")),
    ("a4.graph", include_str!("../corpus/a4.graph")),
    ("a5.graph", include_str!("../corpus/a5.graph")),
    ("c23.graph", include_str!("../corpus/c23.graph")),
    ("c3.graph", include_str!("../corpus/c3.graph")),
    ("c4.graph", include_str!("../corpus/c4.graph")),
    ("d4.graph", include_str!("../corpus/d4.graph")),
    ("d5.graph", include_str!("../corpus/d5.graph")),
    ("e6.graph", include_str!("../corpus/e6.graph")),
    ("e7.graph", include_str!("../corpus/e7.graph")),
    ("e8.graph", include_str!("../corpus/e8.graph")),
    ("elliptic1.graph", include_str!("../corpus/elliptic1.graph")),
    ("elliptic3.graph", include_str!("../corpus/elliptic3.graph")),
    ("star3_2222.graph", include_str!("../corpus/star3_2222.graph")),
];

pub fn bundled() -> Vec<(String, GraphFile)> {
    BUNDLED
        .iter()
        .map(|(name, text)| {
            let file = graphfile::parse(text).unwrap_or_else(|e| panic!("bundled {name}: {e}"));
            (name.to_string(), file)
        })
        .collect()
}

pub fn bundled_file(name: &str) -> Option<GraphFile> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name || n.strip_suffix(".graph") == Some(name))
        .map(|(_, text)| graphfile::parse(text).expect("bundled corpus parses"))
}

/// Every `*.graph` file in `dir`, sorted by file name. Parse failures are
/// returned per file rather than aborting the scan.
pub fn load_dir(dir: &Path) -> std::io::Result<Vec<(String, Result<GraphFile>)>> {
    let mut names: Vec<String> = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".graph"))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|name| {
            let text = fs::read_to_string(dir.join(&name))?;
            Ok((name, graphfile::parse(&text)))
        })
        .collect()
}
