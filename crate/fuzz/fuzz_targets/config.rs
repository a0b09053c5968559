#![no_main]

use libfuzzer_sys::fuzz_target;
use timescale::cli::{ConfigFile, Settings};

fuzz_target!(|data: &str| {
    if let Ok(config) = ConfigFile::parse(data) {
        let _ = Settings::resolve(Some(&config), None);
    }
});
