#![no_main]

use libfuzzer_sys::fuzz_target;
use nefcone::json::{parse_poly, poly_value};

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice(data) else { return };
    if let Ok(p) = parse_poly(&v) {
        assert_eq!(parse_poly(&poly_value(&p)).unwrap(), p);
    }
});
