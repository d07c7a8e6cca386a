#![no_main]

use libfuzzer_sys::fuzz_target;
use mwforge::synthesis::Family;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(fam) = text.parse::<Family>() {
        let _ = fam.build();
    }
});
