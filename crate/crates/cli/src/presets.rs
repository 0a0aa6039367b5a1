//! Built-in configurations for the four reference experiments on the ten-arm instance.

pub const NAMES: [&str; 4] = ["figure1a", "figure1b", "figure1c", "figure1d"];

/// JSON text of a preset.
pub fn preset(name: &str) -> Option<&'static str> {
    Some(match name {
        "figure1a" => include_str!("../presets/figure1a.json"),
        "figure1b" => include_str!("../presets/figure1b.json"),
        "figure1c" => include_str!("../presets/figure1c.json"),
        "figure1d" => include_str!("../presets/figure1d.json"),
        _ => return None,
    })
}
