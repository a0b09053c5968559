#![no_main]

use libfuzzer_sys::fuzz_target;
use timescale::parse::{parse_series_spec_with, SeriesDefaults};

fuzz_target!(|data: &str| {
    let defaults = SeriesDefaults { allow_files: false, ..SeriesDefaults::default() };
    if let Ok(spec) = parse_series_spec_with(data, &defaults) {
        assert!(spec.validate().is_ok());
    }
});
