#![no_main]

use libfuzzer_sys::fuzz_target;
use nefcone::json::{parse_variety, variety_value};

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice(data) else { return };
    if let Ok(x) = parse_variety(&v) {
        assert_eq!(parse_variety(&variety_value(&x)).unwrap(), x);
        let _ = x.ns_rank();
    }
});
