#![no_main]
use hopper_core::repository::{parse_snapshot, write_snapshot};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(entries) = parse_snapshot(text) {
        let again = parse_snapshot(&write_snapshot(&entries)).expect("written snapshots parse");
        assert_eq!(entries.len(), again.len());
    }
});
