#![no_main]

use libfuzzer_sys::fuzz_target;
use timescale::rational::{format_rational, parse_rational};

fuzz_target!(|data: &str| {
    if let Ok(r) = parse_rational(data) {
        let text = format_rational(&r);
        assert_eq!(parse_rational(&text).unwrap(), r, "{text}");
    }
});
