//! On-disk cache of ring class polynomials, one JSON document per order.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use ringclass_core::galois::class_number_order;
use ringclass_core::poly::IntPoly;
use ringclass_core::quadratic::OrderSpec;

/// A recognized polynomial together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyCacheEntry {
    pub d_k: i64,
    pub conductor: u64,
    /// Coefficients in ascending order, as decimal strings.
    pub coeffs: Vec<String>,
    pub precision_bits: u32,
    /// The invariant itself to 50 digits.
    pub invariant_approx: String,
    /// `d -> m_d` of the eta quotient.
    pub spec_exponents: BTreeMap<u64, i64>,
}

impl PolyCacheEntry {
    pub fn poly(&self) -> Option<IntPoly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.parse::<BigInt>().ok())
            .collect::<Option<Vec<_>>>()?;
        Some(IntPoly::new(coeffs))
    }

    pub fn coeffs_of(p: &IntPoly) -> Vec<String> {
        p.coeffs().iter().map(BigInt::to_string).collect()
    }

    /// The entry belongs to `order` and its polynomial is monic of the class number's degree.
    pub fn is_valid_for(&self, order: &OrderSpec) -> bool {
        if self.d_k != order.field().disc() || self.conductor != order.conductor() {
            return false;
        }
        let expected = class_number_order(order.field(), order.conductor());
        self.poly()
            .is_some_and(|p| p.is_monic() && p.degree() == Some(expected))
    }
}

pub fn file_name(d_k: i64, conductor: u64) -> String {
    format!("dk{d_k}_N{conductor}.json")
}

pub fn entry_path(dir: &Path, d_k: i64, conductor: u64) -> PathBuf {
    dir.join(file_name(d_k, conductor))
}

/// Reads an entry, treating a missing or unparsable file as a miss.
pub fn load(dir: &Path, d_k: i64, conductor: u64) -> Option<PolyCacheEntry> {
    let text = fs::read_to_string(entry_path(dir, d_k, conductor)).ok()?;
    serde_json::from_str(&text).ok()
}

/// Writes to a temporary file in `dir` and renames it into place.
pub fn store(dir: &Path, entry: &PolyCacheEntry) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = entry_path(dir, entry.d_k, entry.conductor);
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer_pretty(&mut tmp, entry)?;
    tmp.write_all(b"\n")?;
    tmp.as_file().sync_all()?;
    tmp.persist(&path).map_err(|e| e.error)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry() -> PolyCacheEntry {
        PolyCacheEntry {
            d_k: -4,
            conductor: 13,
            coeffs: ["-1", "38", "122", "108", "46", "10", "1"]
                .map(String::from)
                .to_vec(),
            precision_bits: 320,
            invariant_approx: "0.02".into(),
            spec_exponents: [(1, -2), (13, 2)].into_iter().collect(),
        }
    }

    #[test]
    fn round_trip_and_validity() {
        let dir = tempfile::tempdir().unwrap();
        let e = entry();
        let path = store(dir.path(), &e).unwrap();
        assert!(path.ends_with("dk-4_N13.json"));
        let back = load(dir.path(), -4, 13).unwrap();
        assert_eq!(back, e);
        let order = OrderSpec::from_disc(-4, 13).unwrap();
        assert!(back.is_valid_for(&order));
        assert!(!back.is_valid_for(&OrderSpec::from_disc(-4, 7).unwrap()));
        let mut short = e.clone();
        short.coeffs.remove(0);
        assert!(!short.is_valid_for(&order));
        assert!(load(dir.path(), -7, 7).is_none());
    }

    #[test]
    fn big_coefficients_survive() {
        let mut e = entry();
        e.coeffs[0] = "26623333280885243904".into();
        let text = serde_json::to_string(&e).unwrap();
        let back: PolyCacheEntry = serde_json::from_str(&text).unwrap();
        assert_eq!(
            back.poly().unwrap().coeffs()[0].to_string(),
            "26623333280885243904"
        );
    }
}
