//! Replays the checked-in fuzz seeds through the same entry points the fuzz
//! targets exercise, so the seeds stay meaningful on a stable toolchain.

use std::path::PathBuf;

use pqsvt::cost::BeVariant;
use pqsvt::parse::{parse_samples_csv, parse_window, TargetDescriptor};
use pqsvt::{PhaseFactorSet, SegmentPlan, TargetSpec};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(bytes: &[u8]) -> &str {
    std::str::from_utf8(bytes).unwrap()
}

#[test]
fn target_descriptor_seeds() {
    for (name, data) in seeds("target_descriptor") {
        let d = text(&data).parse::<TargetDescriptor>().unwrap();
        if !matches!(d, TargetDescriptor::Custom(_)) {
            assert_eq!(d.resolve(4).is_ok(), name != "bad_power", "{name}");
        }
    }
}

#[test]
fn samples_csv_seeds() {
    for (name, data) in seeds("samples_csv") {
        let ok = parse_samples_csv(data.as_slice()).is_ok();
        assert_eq!(ok, !name.starts_with("bad") && name != "three_fields", "{name}");
    }
}

#[test]
fn window_descriptor_seeds() {
    for (name, data) in seeds("window_descriptor") {
        let w = parse_window(text(&data)).unwrap();
        assert_eq!(pqsvt::window::tail_report(&w, 6, 0.25, 2.0).is_ok(), name != "zero", "{name}");
    }
}

#[test]
fn be_variant_seeds() {
    for (name, data) in seeds("be_variant") {
        let v: BeVariant = text(&data).parse().unwrap();
        assert_eq!(v.to_string(), text(&data), "{name}");
    }
}

#[test]
fn json_seeds() {
    for (name, data) in seeds("plan_json") {
        assert_eq!(serde_json::from_slice::<SegmentPlan>(&data).is_ok(), name != "misaligned", "{name}");
    }
    for (name, data) in seeds("phases_json") {
        assert_eq!(serde_json::from_slice::<PhaseFactorSet>(&data).is_ok(), name != "short", "{name}");
    }
    for (name, data) in seeds("target_json") {
        assert_eq!(serde_json::from_slice::<TargetSpec>(&data).is_ok(), name != "missing_m", "{name}");
    }
}
