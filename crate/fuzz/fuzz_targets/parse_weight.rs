#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        if let Ok(w) = wfomc::parse::parse_weight(src) {
            assert_eq!(wfomc::parse::parse_weight(&w.to_string()).as_ref(), Ok(&w));
        }
    }
});
