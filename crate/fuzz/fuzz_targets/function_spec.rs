#![no_main]

use libfuzzer_sys::fuzz_target;
use timescale::funcspec::parse_function_spec;

fuzz_target!(|data: &str| {
    if let Ok(spec) = parse_function_spec(data) {
        let text = spec.to_string();
        let again = parse_function_spec(&text).expect("display output parses");
        assert_eq!(again.to_string(), text);
    }
});
