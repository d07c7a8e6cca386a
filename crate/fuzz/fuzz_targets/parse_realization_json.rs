#![no_main]

use libfuzzer_sys::fuzz_target;
use mwforge::{io, realization};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = io::parse_realization_json(text) {
        let _ = realization::nilpotency_residual(&r);
        let _ = realization::taylor_masks(&r, 1e-10);
    }
});
