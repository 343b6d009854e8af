#![no_main]

use libfuzzer_sys::fuzz_target;
use lingwalk::language::parse_walk;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(walk) = parse_walk(text) {
        // Anything accepted must survive a round trip and a bounded run.
        let again = parse_walk(&walk.to_json()).expect("re-parse of emitted document");
        assert_eq!(again, walk);
        if walk.steps() <= 64 && walk.graph().slot_count() <= 4096 {
            let psi = lingwalk::engine::ArcStateVector::zeros(walk.graph());
            let _ = walk.evolve(&psi);
        }
    }
});
