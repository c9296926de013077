#![no_main]

use fomc_core::structures::{parse_structure, render_structure};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = parse_structure(text) {
        // rendering is canonical, so a second round trip is a fixed point
        let again = parse_structure(&render_structure(&s)).expect("rendered structure parses");
        assert_eq!(s, again);
    }
});
