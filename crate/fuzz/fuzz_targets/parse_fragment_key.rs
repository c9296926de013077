#![no_main]

use fomc_core::formulas::FragmentKey;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(k) = text.parse::<FragmentKey>() {
            assert_eq!(k.to_string().parse::<FragmentKey>().ok(), Some(k));
            assert_eq!(k.dual().dual(), k);
        }
    }
});
