#![no_main]

use libfuzzer_sys::fuzz_target;
use pqsvt::SegmentPlan;

fuzz_target!(|data: &[u8]| {
    if let Ok(plan) = serde_json::from_slice::<SegmentPlan>(data) {
        let mut cursor = 0;
        for s in plan.segments() {
            assert_eq!(s.start, cursor);
            assert!(s.length.is_power_of_two() && s.start % s.length == 0);
            cursor = s.end();
        }
        assert_eq!(cursor, plan.len());
        let text = serde_json::to_vec(&plan).unwrap();
        assert_eq!(serde_json::from_slice::<SegmentPlan>(&text).unwrap(), plan);
    }
});
