#![no_main]

use libfuzzer_sys::fuzz_target;
use mebn::dsl::parse_model;
use mebn::model::validate_mtheory;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(parsed) = parse_model(text) {
            let _ = validate_mtheory(&parsed.value);
        }
    }
});
