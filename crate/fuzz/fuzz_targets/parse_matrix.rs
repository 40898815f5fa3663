#![no_main]

use kwise_sparsify::SymMatrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = SymMatrix::parse_matrix(data) {
        let again = SymMatrix::parse_matrix(m.to_text().as_bytes()).expect("printed matrix reparses");
        assert_eq!(m, again);
    }
});
