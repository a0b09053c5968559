#![no_main]

use libfuzzer_sys::fuzz_target;
use timescale::parse::parse_scale_json;

fuzz_target!(|data: &str| {
    if let Ok(scale) = parse_scale_json(data) {
        // every accepted scale answers jump queries at its infimum
        if let Some(lo) = scale.inf().cloned() {
            let s = scale.sigma(&lo).unwrap();
            assert!(s >= lo);
        }
    }
});
