#![no_main]

use conecalc::parse::parse_cone_desc;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_cone_desc(text);
});
