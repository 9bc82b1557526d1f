#![no_main]

use libfuzzer_sys::fuzz_target;
use twlab_core::lp::BagTable;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = BagTable::from_json_str(s);
    }
});
