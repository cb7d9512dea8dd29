//! Graded structure on functions on the fixed points.
//!
//! The Betti numbers are computed four independent ways: from the filtration
//! ranks, from Morse indices, from the h-vector of the fan, and from the
//! Hilbert function of the Stanley–Reisner presentation.

mod filtration;
mod hilbert;
mod relations;

use serde::Serialize;

use crate::error::Result;
use crate::exactnum::{serde_q, Rational};
use crate::fixedpoints::FixedPointTable;

pub use filtration::{default_cap, filtration_ranks, gr_structure, FiltrationRanks, GrBasis, ProductEntry};
pub use hilbert::{h_vector, sr_hilbert};
pub use relations::{
    minimal_non_faces, verify_relations, LinearRelation, NonFaceProduct, RelationReport,
};

/// `b_{2i}` = number of fixed points of Morse index `2i`, for `i = 0..=d`.
pub fn betti_from_morse(t: &FixedPointTable) -> Vec<usize> {
    let mut b = vec![0; t.polytope.dim() + 1];
    for idx in t.morse_indices() {
        b[idx / 2] += 1;
    }
    b
}

fn trim(v: &[i64]) -> &[i64] {
    let end = v.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
    &v[..end]
}

fn as_i64(v: &[usize]) -> Vec<i64> {
    v.iter().map(|&x| x as i64).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedReport {
    pub ranks: Vec<usize>,
    pub gr_dims: Vec<usize>,
    pub top_degree: usize,
    pub betti_morse: Vec<usize>,
    pub h_vector: Vec<i64>,
    pub sr_hilbert: Vec<usize>,
    /// All four sequences agree after trimming trailing zeros.
    pub four_way_agree: bool,
    pub palindromic: bool,
}

pub fn graded_report(t: &FixedPointTable, cap: Option<usize>) -> Result<GradedReport> {
    let fr = filtration_ranks(t, cap)?;
    let betti_morse = betti_from_morse(t);
    let h = h_vector(&t.fan);
    let sr = sr_hilbert(&t.fan, cap)?;
    let gr = as_i64(&fr.gr_dims);
    let four_way_agree = [as_i64(&betti_morse), h.clone(), as_i64(&sr)]
        .iter()
        .all(|s| trim(s) == trim(&gr));
    let palindromic = fr.gr_dims.iter().eq(fr.gr_dims.iter().rev());
    Ok(GradedReport {
        ranks: fr.ranks,
        gr_dims: fr.gr_dims,
        top_degree: fr.top_degree,
        betti_morse,
        h_vector: h,
        sr_hilbert: sr,
        four_way_agree,
        palindromic,
    })
}

/// A degree-one function separating the Morse index 0 and index `2d` points,
/// which a Morse-index grading would force to agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorseGradingWitness {
    pub ray: usize,
    pub bottom_point: usize,
    pub top_point: usize,
    #[serde(with = "serde_q")]
    pub bottom_value: Rational,
    #[serde(with = "serde_q")]
    pub top_value: Rational,
}

/// Searches for a ray whose `f_ρ` differs between the index-0 and the
/// index-`2d` fixed point. Returns `None` if there is no such ray (or if
/// those points do not exist, e.g. `d = 0`).
pub fn morse_grading_witness(t: &FixedPointTable) -> Option<MorseGradingWitness> {
    let idx = t.morse_indices();
    let d = t.polytope.dim();
    let bottom = idx.iter().position(|&i| i == 0)?;
    let top = idx.iter().position(|&i| i == 2 * d)?;
    (0..t.num_rays()).find_map(|r| {
        let row = t.row(r);
        (row[bottom] != row[top]).then(|| MorseGradingWitness {
            ray: r,
            bottom_point: bottom,
            top_point: top,
            bottom_value: row[bottom].clone(),
            top_value: row[top].clone(),
        })
    })
}
