#![no_main]

use libfuzzer_sys::fuzz_target;
use twlab_core::polytope::PointSet;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = PointSet::from_json_str(s) {
        let again = PointSet::from_json_str(&p.to_json_string()).expect("point set round trip");
        assert_eq!(again.points(), p.points());
    }
});
