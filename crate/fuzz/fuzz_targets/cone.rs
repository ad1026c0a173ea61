#![no_main]

use libfuzzer_sys::fuzz_target;
use nefcone::cone_engine::{dual_cone, Pairing};
use nefcone::json::{cone_value, parse_cone};

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice(data) else { return };
    if let Ok(c) = parse_cone(&v) {
        assert_eq!(parse_cone(&cone_value(&c)).unwrap(), c);
        let _ = dual_cone(&c, &Pairing::standard(c.rank()));
    }
});
