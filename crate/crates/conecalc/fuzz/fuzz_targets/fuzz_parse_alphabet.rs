#![no_main]

use conecalc::parse::{parse_alphabet_file, parse_alphabet_inline};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Both alphabet grammars must reject or accept without panicking, and
    // accepted alphabets must satisfy their own invariants.
    for parsed in [parse_alphabet_inline(text), parse_alphabet_file(text)] {
        if let Ok(a) = parsed {
            for name in a.names() {
                assert!(a.index_of(name).is_ok());
            }
        }
    }
});
