#![no_main]

use libfuzzer_sys::fuzz_target;
use twlab_core::reductions::{encode_max2sat, parse_wcnf};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(f) = parse_wcnf(s) {
            if f.n <= 64 && f.clauses.len() <= 64 {
                let _ = encode_max2sat(&f);
            }
        }
    }
});
