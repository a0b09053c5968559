#![no_main]

use libfuzzer_sys::fuzz_target;
use timescale::parse::parse_table;

fuzz_target!(|data: &[u8]| {
    let _ = parse_table(data);
});
