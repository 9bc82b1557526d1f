#![no_main]

use libfuzzer_sys::fuzz_target;
use twlab_core::graph::MinorModel;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = MinorModel::from_json(s);
    }
});
