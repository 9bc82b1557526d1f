//! Replays the checked-in fuzz corpus through the same entry points as the
//! fuzz targets, so seeds stay meaningful as formats evolve.

use std::fs;
use std::path::Path;

use twlab_core::graph::dimacs::parse_dimacs_graph;
use twlab_core::graph::{DecompositionJson, MinorModel, TreeDecomposition};
use twlab_core::lp::{BagTable, LinearProgram};
use twlab_core::po::POInstance;
use twlab_core::polytope::{HPolytope, PointSet, SlackMatrix};
use twlab_core::rational::{format_rational, parse_rational};
use twlab_core::reductions::{parse_cnf, parse_wcnf, LiftedInstance, LiftedJson};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

/// Runs `parse` on every seed; names listed in `invalid` must be rejected,
/// all others accepted.
fn replay<T, E: std::fmt::Debug>(target: &str, invalid: &[&str], parse: impl Fn(&str) -> Result<T, E>) {
    for (name, text) in seeds(target) {
        let r = parse(&text);
        if invalid.contains(&name.as_str()) {
            assert!(r.is_err(), "{target}/{name} should be rejected");
        } else {
            r.unwrap_or_else(|e| panic!("{target}/{name}: {e:?}"));
        }
    }
}

#[test]
fn text_formats() {
    replay("dimacs_graph", &["bad.col"], parse_dimacs_graph);
    replay("wcnf", &["weight3.wcnf"], parse_wcnf);
    replay("cnf", &[], parse_cnf);
    replay("rational", &["1_0", "2e3"], |s| {
        parse_rational(s).map(|q| assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q))
    });
}

#[test]
fn json_formats() {
    replay("instance_json", &[], POInstance::from_json_str);
    replay("minor_model", &[], MinorModel::from_json);
    replay("point_set", &[], PointSet::from_json_str);
    replay("lp_json", &[], LinearProgram::from_json_str);
    replay("bag_table", &[], BagTable::from_json_str);
    replay("hpolytope", &[], HPolytope::from_json_str);
    replay("slack_matrix", &[], SlackMatrix::from_json_str);
    let g = parse_dimacs_graph(&seeds("dimacs_graph").into_iter().find(|s| s.0 == "grid3.col").unwrap().1).unwrap();
    replay("decomposition", &[], |s| {
        let j: DecompositionJson = serde_json::from_str(s).map_err(|e| e.to_string())?;
        TreeDecomposition::from_json(&j, &g).map_err(|e| e.to_string())
    });
    replay("lifted_json", &[], |s| {
        let j: LiftedJson = serde_json::from_str(s).map_err(|e| e.to_string())?;
        LiftedInstance::from_json(j).map_err(|e| e.to_string())
    });
}
