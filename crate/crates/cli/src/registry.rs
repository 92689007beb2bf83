//! Bundled example manifests, compiled into the binary.

use crate::manifest::{parse_manifest, InputError, Manifest};

pub const BUILTIN_NAMES: [&str; 6] = [
    "kt_example_1",
    "kt_example_2_data",
    "sasakian_round",
    "flat_abelian",
    "e2_flat",
    "heisenberg_5",
];

pub fn builtin_source(name: &str) -> Option<&'static str> {
    match name {
        "kt_example_1" => Some(include_str!("../manifests/kt_example_1.json")),
        "kt_example_2_data" => Some(include_str!("../manifests/kt_example_2_data.json")),
        "sasakian_round" => Some(include_str!("../manifests/sasakian_round.json")),
        "flat_abelian" => Some(include_str!("../manifests/flat_abelian.json")),
        "e2_flat" => Some(include_str!("../manifests/e2_flat.json")),
        "heisenberg_5" => Some(include_str!("../manifests/heisenberg_5.json")),
        _ => None,
    }
}

/// Loads a manifest by builtin name or filesystem path.
pub fn load_manifest(spec: &str) -> Result<Manifest, InputError> {
    if let Some(src) = builtin_source(spec) {
        return parse_manifest(src);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| InputError {
        field: "manifest".into(),
        message: format!("cannot read `{spec}`: {e}"),
    })?;
    parse_manifest(&text)
}
