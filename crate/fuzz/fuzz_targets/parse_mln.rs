#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        if let Ok(m) = wfomc::parse::parse_mln(src) {
            let printed = wfomc::parse::print_mln(&m);
            assert_eq!(wfomc::parse::parse_mln(&printed).as_ref(), Ok(&m), "{printed}");
        }
    }
});
