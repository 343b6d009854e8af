#![no_main]

use libfuzzer_sys::fuzz_target;
use lingwalk::language::{LanguageId, Word};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(lang) = text.parse::<LanguageId>() {
        assert_eq!(lang.to_string().parse::<LanguageId>().unwrap(), lang);
    }
    if let Ok(w) = text.parse::<Word>() {
        assert_eq!(w.to_string(), text);
    }
});
