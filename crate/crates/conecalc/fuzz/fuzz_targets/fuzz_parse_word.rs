#![no_main]

use conecalc::parse::{parse_alphabet_inline, parse_word};
use libfuzzer_sys::fuzz_target;

// First line is the inline alphabet, the rest is the word. The parser must
// never panic, and any accepted word must round-trip through display.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (alpha_line, word_text) = match text.split_once('\n') {
        Some(pair) => pair,
        None => ("a=1,b=1/2,c", text),
    };
    let Ok(alphabet) = parse_alphabet_inline(alpha_line) else { return };
    if let Ok(w) = parse_word(word_text, &alphabet) {
        let shown = w.display(&alphabet);
        let again = parse_word(&shown, &alphabet).expect("displayed word must reparse");
        assert_eq!(w, again, "display/parse round trip");
    }
});
