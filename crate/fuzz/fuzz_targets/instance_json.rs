#![no_main]

use libfuzzer_sys::fuzz_target;
use twlab_core::po::POInstance;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(inst) = POInstance::from_json_str(s) {
        let again = POInstance::from_json_str(&inst.to_json_string()).expect("instance round trip");
        assert_eq!(again.to_json_string(), inst.to_json_string());
        let _ = inst.intersection_graph();
    }
});
