#![no_main]

use libfuzzer_sys::fuzz_target;
use twlab_core::lp::LinearProgram;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(lp) = LinearProgram::from_json_str(s) {
            let _ = lp.to_lp_text();
        }
    }
});
