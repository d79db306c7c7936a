#![no_main]

use libfuzzer_sys::fuzz_target;
use mebn::dsl::{parse_model, serialize_model};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(first) = parse_model(text) else {
        return;
    };
    let printed = serialize_model(&first.value);
    let second = parse_model(&printed).expect("serialized model parses");
    assert_eq!(first.value, second.value);
    assert_eq!(printed, serialize_model(&second.value));
});
