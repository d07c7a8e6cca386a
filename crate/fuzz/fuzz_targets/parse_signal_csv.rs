#![no_main]

use libfuzzer_sys::fuzz_target;
use mwforge::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = io::parse_signal_csv(text) {
        if c.m() == 1 {
            let haar = mwforge::synthesis::haar();
            let _ = mwforge::filterbank::analyze(&c, &haar);
        }
    }
});
