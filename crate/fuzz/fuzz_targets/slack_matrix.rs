#![no_main]

use libfuzzer_sys::fuzz_target;
use twlab_core::polytope::SlackMatrix;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = SlackMatrix::from_json_str(s);
    }
});
