#![no_main]

use libfuzzer_sys::fuzz_target;
use nefcone::json::{parse_scalar, scalar_value};

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice(data) else { return };
    if let Ok(s) = parse_scalar(&v) {
        assert_eq!(parse_scalar(&scalar_value(&s)).unwrap(), s);
    }
});
