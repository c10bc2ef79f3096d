#![no_main]

use libfuzzer_sys::fuzz_target;
use pqsvt::{sample_target, TargetSpec};

fuzz_target!(|data: &[u8]| {
    if let Ok(spec) = serde_json::from_slice::<TargetSpec>(data) {
        if spec.n <= 12 {
            if let Ok(v) = sample_target(&spec) {
                assert_eq!(v.len(), spec.dim());
            }
        }
    }
});
