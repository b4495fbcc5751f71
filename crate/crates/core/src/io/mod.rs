//! Scenario files, heatmap CSVs, text summaries and run manifests.

mod config;
mod csv;
mod manifest;
mod report;

pub use config::{
    config_to_json, emit_config, load_config, parse_config, CarrierSection, ConfigFile,
    DensitySection, IrsSection, TransmitterSection,
};
pub use csv::{emit_map_csv, format_sig9, map_to_csv, CSV_HEADER};
pub use manifest::{sha256_file, ManifestEntry, RunManifest, MANIFEST_FILE};
pub use report::{emit_summary, render_summary, Report, BASELINE_CONVENTIONAL_POWER_W};
