#![no_main]

use libfuzzer_sys::fuzz_target;
use wfomc::parse::parse_theory;
use wfomc::propcheck::{check_soundness, full_elimination, Outcome};

/// Keeps each run to a few thousand assignments.
const MAX_ATOMS: &str = "12";

fuzz_target!(|data: &[u8]| {
    std::env::set_var("WFOMC_MAX_ATOMS", MAX_ATOMS);
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(parsed) = parse_theory(src) else {
        return;
    };
    if let Outcome::Fail(c) = check_soundness(&parsed.theory, &[1, 2], &full_elimination()) {
        panic!("{c}");
    }
});
