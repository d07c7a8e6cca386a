#![no_main]

use libfuzzer_sys::fuzz_target;
use mwforge::{io, qmf};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(pair) = io::parse_mask_json(text) {
        // Accepted masks must survive the downstream checks without panicking.
        let f = mwforge::masks::polyphase_assemble(&pair);
        let _ = qmf::qmf_residual(&f);
        let _ = mwforge::realization::realize(&f);
    }
});
