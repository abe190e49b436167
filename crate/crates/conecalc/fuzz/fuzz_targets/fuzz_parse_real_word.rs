#![no_main]

use conecalc::parse::{parse_alphabet_inline, parse_real_word};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (alpha_line, word_text) = match text.split_once('\n') {
        Some(pair) => pair,
        None => ("a=1,b=1/2,c", text),
    };
    let Ok(alphabet) = parse_alphabet_inline(alpha_line) else { return };
    if let Ok(w) = parse_real_word(word_text, &alphabet) {
        let shown = w.display(&alphabet);
        let again = parse_real_word(&shown, &alphabet).expect("displayed word must reparse");
        assert_eq!(w.normalize(), again.normalize(), "display/parse round trip");
    }
});
