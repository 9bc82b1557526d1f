#![no_main]

use libfuzzer_sys::fuzz_target;
use twlab_core::graph::dimacs::parse_dimacs_graph;
use twlab_core::graph::Graph;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_dimacs_graph(s) {
        let back = Graph::from_json(&g.to_json()).expect("graph JSON round trip");
        assert!(back.same_labeled(&g));
    }
});
