#![no_main]

use libfuzzer_sys::fuzz_target;
use pqsvt::PhaseFactorSet;

fuzz_target!(|data: &[u8]| {
    if let Ok(set) = serde_json::from_slice::<PhaseFactorSet>(data) {
        for s in 0..set.segment_count() {
            assert_eq!(set.segment(s).len(), 2 * set.degree() + 1);
        }
    }
});
