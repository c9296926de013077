#![no_main]

use fomc_core::formulas::parse_formula;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = parse_formula(text, None) {
        let again = parse_formula(&f.to_string(), None).expect("printed formula parses");
        assert_eq!(f, again);
    }
});
