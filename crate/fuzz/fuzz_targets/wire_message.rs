#![no_main]
use hopper_core::policy::wire::Message;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(line) = std::str::from_utf8(data) else { return };
    if let Ok(msg) = Message::decode(line) {
        let _ = Message::decode(&msg.encode()).expect("encoded messages decode");
    }
});
