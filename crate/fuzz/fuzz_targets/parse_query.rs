#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use mebn::dsl::{parse_findings, parse_model, parse_query, parse_query_unresolved};
use mebn::model::{FindingSet, MTheory};

fn setup() -> &'static (MTheory, FindingSet) {
    static SETUP: OnceLock<(MTheory, FindingSet)> = OnceLock::new();
    SETUP.get_or_init(|| {
        let theory = parse_model(mebn::corpus::OIL_SPILL_MODEL).unwrap().value;
        let findings = parse_findings(mebn::corpus::TWO_SPILL_FINDINGS, &theory).unwrap().value;
        (theory, findings)
    })
}

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let (theory, findings) = setup();
        let _ = parse_query_unresolved(text, theory);
        if let Ok(query) = parse_query(text, theory, findings.pool()) {
            let _ = mebn::build_ssbn(theory, findings, &query);
        }
    }
});
