#![no_main]

use libfuzzer_sys::fuzz_target;
use nefcone::json::{class_value, parse_class};

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice(data) else { return };
    if let Ok(c) = parse_class(&v) {
        assert_eq!(parse_class(&class_value(&c)).unwrap(), c);
    }
});
