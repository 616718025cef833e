#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        if let Ok(p) = wfomc::parse::parse_problog(src) {
            let printed = wfomc::parse::print_problog(&p);
            assert_eq!(wfomc::parse::parse_problog(&printed).as_ref(), Ok(&p), "{printed}");
            let _ = wfomc::encode::encode_problog(&p);
        }
    }
});
