#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use mebn::dsl::{parse_findings, parse_model};
use mebn::model::MTheory;

fn theory() -> &'static MTheory {
    static THEORY: OnceLock<MTheory> = OnceLock::new();
    THEORY.get_or_init(|| parse_model(mebn::corpus::OIL_SPILL_MODEL).unwrap().value)
}

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_findings(text, theory());
    }
});
