#![no_main]

use libfuzzer_sys::fuzz_target;
use nefcone::json::{parse_classes, parse_pairs};

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice(data) else { return };
    let _ = parse_classes(&v);
    let _ = parse_pairs(&v);
});
