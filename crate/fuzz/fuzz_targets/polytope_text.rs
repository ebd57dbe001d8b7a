#![no_main]
use hopper_core::polytope::Polytope;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = text.parse::<Polytope>() {
        let again: Polytope = p.to_text().parse().expect("printed polytopes parse");
        assert_eq!(p, again);
    }
});
