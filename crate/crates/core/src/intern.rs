//! Value interning for large exact tables.

use rustc_hash::FxHashMap;

use crate::error::Result;
use crate::oag::OagElement;

/// Maps group elements to dense `u32` ids.
#[derive(Debug, Default, Clone)]
pub struct Interner {
    values: Vec<OagElement>,
    map: FxHashMap<OagElement, u32>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, x: OagElement) -> u32 {
        if let Some(&id) = self.map.get(&x) {
            return id;
        }
        let id = self.values.len() as u32;
        self.values.push(x.clone());
        self.map.insert(x, id);
        id
    }

    pub fn id_of(&self, x: &OagElement) -> Option<u32> {
        self.map.get(x).copied()
    }

    pub fn get(&self, id: u32) -> &OagElement {
        &self.values[id as usize]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Order rank of every id: `rank[a] < rank[b]` iff `get(a) < get(b)`.
    pub fn ranks(&self) -> Result<Vec<u32>> {
        let mut ids: Vec<u32> = (0..self.values.len() as u32).collect();
        let mut err = None;
        ids.sort_by(|&a, &b| {
            self.values[a as usize]
                .try_cmp(&self.values[b as usize])
                .unwrap_or_else(|e| {
                    err.get_or_insert(e);
                    std::cmp::Ordering::Equal
                })
        });
        if let Some(e) = err {
            return Err(e);
        }
        let mut rank = vec![0u32; ids.len()];
        for (r, &id) in ids.iter().enumerate() {
            rank[id as usize] = r as u32;
        }
        Ok(rank)
    }
}

/// Memo for a binary operation on interned ids.
pub type BinMemo = FxHashMap<(u32, u32), u32>;
