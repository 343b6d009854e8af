#![no_main]

use libfuzzer_sys::fuzz_target;
use lingwalk::lab::{parse_csv, render_svg};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_csv(text);
    if let Ok(svg) = render_svg(text) {
        assert!(svg.starts_with("<svg"));
        assert_eq!(render_svg(text).unwrap(), svg);
    }
});
