#![no_main]

use libfuzzer_sys::fuzz_target;
use nefcone::json::{parse_semigroup, semigroup_value};

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice(data) else { return };
    if let Ok(s) = parse_semigroup(&v) {
        assert_eq!(parse_semigroup(&semigroup_value(&s, None)).unwrap(), s);
    }
});
