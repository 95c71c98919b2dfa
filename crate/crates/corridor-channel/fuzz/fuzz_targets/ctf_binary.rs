#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Header lengths are validated against the buffer before any
    // allocation; lying headers must not OOM or panic.
    let _ = corridor_channel::dataio::parse_ctf_binary(data);
});
