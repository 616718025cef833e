#![no_main]

use libfuzzer_sys::fuzz_target;
use wfomc::parse::{parse_theory, print_theory};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(parsed) = parse_theory(src) else {
        return;
    };
    let printed = print_theory(&parsed.theory, parsed.domain.as_ref());
    let back = parse_theory(&printed).expect("printed theory parses");
    assert_eq!(back.theory, parsed.theory, "{printed}");
    assert_eq!(back.domain, parsed.domain);
});
