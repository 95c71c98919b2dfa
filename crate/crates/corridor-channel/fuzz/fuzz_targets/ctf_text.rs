#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Malformed text datasets must come back as errors, never panics.
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = corridor_channel::dataio::parse_ctf_text(text);
    }
});
