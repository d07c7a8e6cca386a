#![no_main]

use libfuzzer_sys::fuzz_target;
use mwforge::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = io::parse_polyphase_json(text) {
        let _ = mwforge::masks::polyphase_split(&f);
        let _ = mwforge::qmf::uep_residual(&f);
    }
});
