#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        if let Ok(f) = wfomc::parse::parse_formula(src) {
            let printed = f.to_string();
            assert_eq!(wfomc::parse::parse_formula(&printed).as_ref(), Ok(&f), "{printed}");
        }
    }
});
