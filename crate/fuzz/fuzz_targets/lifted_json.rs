#![no_main]

use libfuzzer_sys::fuzz_target;
use twlab_core::reductions::{LiftedInstance, LiftedJson};

fuzz_target!(|data: &[u8]| {
    if let Ok(j) = serde_json::from_slice::<LiftedJson>(data) {
        let _ = LiftedInstance::from_json(j);
    }
});
