#![no_main]

use libfuzzer_sys::fuzz_target;
use mwforge::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(pair) = io::parse_mask_json(text) else { return };
    let again = io::parse_mask_json(&io::mask_to_json(&pair)).expect("serialized mask parses");
    assert_eq!(again, pair);
});
