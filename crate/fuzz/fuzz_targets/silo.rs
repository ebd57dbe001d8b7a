#![no_main]
use hopper_core::repository::{read_silo, write_silo};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = read_silo(data) {
        let mut bytes = Vec::new();
        write_silo(&mut bytes, &records).expect("writing to memory");
        assert_eq!(read_silo(&bytes).expect("written silos read"), records);
    }
});
