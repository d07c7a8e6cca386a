#![no_main]

use libfuzzer_sys::fuzz_target;
use mwforge::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = io::parse_subbands_csv(text) {
        if s.m() == 1 {
            let haar = mwforge::synthesis::haar();
            let _ = mwforge::filterbank::synthesize(&s, &haar);
        }
    }
});
