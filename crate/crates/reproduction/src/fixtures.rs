use std::path::PathBuf;

use spss_core::dataset::{load_csv, Delimiter};
use spss_core::{Dataset, Result};

/// The workspace `data/` directory.
pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Label column of each bundled file.
pub const REAL: [(&str, usize); 3] = [("iris", 4), ("wine", 0), ("glass", 9)];

/// Loads `iris`, `wine` or `glass` with its class labels.
pub fn load_real(name: &str) -> Result<Dataset> {
    let label = REAL
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, c)| *c)
        .unwrap_or_else(|| panic!("no bundled dataset {name:?}"));
    load_csv(
        data_dir().join(format!("{name}.csv")),
        Some(label),
        Delimiter::Comma,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_shapes() {
        for (name, m, n, c) in [
            ("iris", 150, 4, 3),
            ("wine", 178, 13, 3),
            ("glass", 214, 9, 6),
        ] {
            let ds = load_real(name).unwrap();
            assert_eq!(
                (ds.len(), ds.dim(), ds.classes()),
                (m, n, Some(c)),
                "{name}"
            );
        }
    }
}
