#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // The string entry point never touches the filesystem (external gain
    // curve references are rejected), so arbitrary input is safe to feed.
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = corridor_channel::dataio::parse_scenario_str(text);
    }
});
