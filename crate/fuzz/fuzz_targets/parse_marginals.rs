#![no_main]

use kwise_sparsify::kwise::{parse_marginals, KWiseSpace};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(p) = parse_marginals(data) else {
        return;
    };
    assert!(p.iter().all(|x| (0.0..=1.0).contains(x)));
    if !p.is_empty() && p.len() <= 256 {
        let space = KWiseSpace::build(&p, 2, 4).expect("valid marginals build a space");
        let bits = space.sample_at(kwise_sparsify::kwise::Seed(0)).unwrap();
        assert_eq!(bits.len(), p.len());
    }
});
