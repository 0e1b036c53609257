//! Reference tables bundled with the crate.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

#[derive(Clone, Debug, Deserialize)]
pub struct GoldenTable {
    /// Index of the first value in each row.
    pub offset: usize,
    #[serde(flatten)]
    pub rows: BTreeMap<String, Vec<u64>>,
}

impl GoldenTable {
    pub fn value(&self, row: &str, n: usize) -> Option<u64> {
        let i = n.checked_sub(self.offset)?;
        self.rows.get(row)?.get(i).copied()
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct Golden {
    pub sortable: GoldenTable,
    pub max_fertility: GoldenTable,
}

pub fn golden() -> &'static Golden {
    static G: OnceLock<Golden> = OnceLock::new();
    G.get_or_init(|| toml::from_str(include_str!("../data/golden.toml")).expect("bundled golden.toml parses"))
}
