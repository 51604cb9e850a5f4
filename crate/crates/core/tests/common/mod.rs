#![allow(dead_code)]

use std::sync::Arc;

use extsplash_core::bruckbose::BruckBoseContext;
use extsplash_core::{FieldSpec, FieldTower};

/// The default tower for `q` and the tower built on the next admissible cubic.
pub fn towers(q: u32) -> Vec<Arc<FieldTower>> {
    [0, 1]
        .iter()
        .map(|&i| Arc::new(FieldTower::new(FieldSpec::admissible(q, i).unwrap()).unwrap()))
        .collect()
}

pub fn contexts(q: u32) -> Vec<BruckBoseContext> {
    towers(q).into_iter().map(BruckBoseContext::new).collect()
}

pub fn label(t: &FieldTower) -> String {
    t.spec().to_text().unwrap()
}

/// Cached towers for q in 2..=5, default and alternative, in that order.
pub fn all_towers() -> &'static [Arc<FieldTower>] {
    static T: std::sync::OnceLock<Vec<Arc<FieldTower>>> = std::sync::OnceLock::new();
    T.get_or_init(|| [2, 3, 4, 5].iter().flat_map(|&q| towers(q)).collect())
}
