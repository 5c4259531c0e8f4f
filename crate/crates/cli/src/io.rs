use std::fs;
use std::path::Path;

use rainbow_core::ecg;
use rainbow_core::EdgeColouredGraph;
use serde::Deserialize;

use crate::Failure;

#[derive(Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize, u32)>,
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

/// Reads `.ecg`, or `{"n": …, "edges": [[u, v, c], …]}` for `.json`.
pub fn read_graph(path: &Path) -> Result<EdgeColouredGraph, Failure> {
    let text = read_text(path)?;
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str::<GraphJson>(&text)
            .map_err(|e| e.to_string())
            .and_then(|g| EdgeColouredGraph::new(g.n, g.edges).map_err(|e| e.to_string()))
    } else {
        ecg::parse(&text).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn to_json_line<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}
