#![no_main]

use libfuzzer_sys::fuzz_target;
use twlab_core::graph::dimacs::parse_dimacs_graph;
use twlab_core::graph::{verify_decomposition, DecompositionJson, TreeDecomposition};

// 3x3 grid, vertices numbered row by row
const GRID: &str = "p edge 9 12\ne 1 2\ne 2 3\ne 4 5\ne 5 6\ne 7 8\ne 8 9\ne 1 4\ne 4 7\ne 2 5\ne 5 8\ne 3 6\ne 6 9\n";

fuzz_target!(|data: &[u8]| {
    let Ok(j) = serde_json::from_slice::<DecompositionJson>(data) else { return };
    let g = parse_dimacs_graph(GRID).unwrap();
    if let Ok(td) = TreeDecomposition::from_json(&j, &g) {
        let _ = verify_decomposition(&g, &td);
    }
});
