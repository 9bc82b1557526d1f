#![no_main]

use libfuzzer_sys::fuzz_target;
use twlab_core::polytope::HPolytope;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = HPolytope::from_json_str(s);
    }
});
