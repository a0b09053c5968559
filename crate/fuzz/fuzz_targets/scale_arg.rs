#![no_main]

use libfuzzer_sys::fuzz_target;
use timescale::parse::parse_scale_arg;

fuzz_target!(|data: &str| {
    let _ = parse_scale_arg(data);
});
