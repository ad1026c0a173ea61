#![no_main]

use libfuzzer_sys::fuzz_target;
use nefcone::json::parse_pairing;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice(data) else { return };
    let _ = parse_pairing(&v);
});
