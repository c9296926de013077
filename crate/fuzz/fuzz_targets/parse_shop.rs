#![no_main]

use fomc_core::shops::parse_shop;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(f) = parse_shop(text) {
            assert_eq!(parse_shop(&f.to_string()).ok(), Some(f));
        }
    }
});
