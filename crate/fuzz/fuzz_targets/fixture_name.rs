#![no_main]

use kwise_sparsify::lowerbound::fixtures::by_name;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(name) = std::str::from_utf8(data) else {
        return;
    };
    if name.len() > 32 {
        return;
    }
    if let Some(g) = by_name(name) {
        assert!(g.is_connected());
    }
});
