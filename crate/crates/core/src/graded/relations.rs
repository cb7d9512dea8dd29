//! The toric relations on the `f_ρ`: products over non-faces vanish, and
//! `Σ_ρ ⟨ξ_ρ, u⟩ f_ρ` is the constant `⟨γ, u⟩`.

use std::collections::BTreeSet;


use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactnum::{hadamard, is_constant, serde_q, Rational};
use crate::fixedpoints::FixedPointTable;
use crate::monomial;
use crate::polytope::Fan;

/// Minimal ray sets lying in no common cone, by size then lexicographically.
/// Supersets of non-faces already found are skipped.
pub fn minimal_non_faces(fan: &Fan) -> Vec<BTreeSet<usize>> {
    let n = fan.rays.len();
    let mut found: Vec<BTreeSet<usize>> = Vec::new();
    // every set of more than d + 1 rays contains a non-face of size ≤ d + 1
    for k in 1..=(fan.dim + 1).min(n) {
        for s in monomial::subsets(n, k) {
            if found.iter().any(|nf| nf.is_subset(&s)) {
                continue;
            }
            if !fan.is_face(&s) {
                found.push(s);
            }
        }
    }
    found
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonFaceProduct {
    pub rays: BTreeSet<usize>,
    #[serde(with = "serde_q::vec")]
    pub product: Vec<Rational>,
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearRelation {
    /// Index `j` of the basis covector `e_j`.
    pub coordinate: usize,
    #[serde(with = "serde_q::vec")]
    pub values: Vec<Rational>,
    #[serde(with = "serde_q")]
    pub expected: Rational,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub non_face_products: Vec<NonFaceProduct>,
    pub squarefree_nonface_products_zero: bool,
    pub linear_relations: Vec<LinearRelation>,
    pub linear_relations_constant: bool,
    #[serde(with = "serde_q::vec")]
    pub chern_combination: Vec<Rational>,
    pub chern_identity_ok: bool,
}

impl RelationReport {
    pub fn all_ok(&self) -> bool {
        self.squarefree_nonface_products_zero
            && self.linear_relations_constant
            && self.chern_identity_ok
    }

    /// Non-face products that failed to vanish.
    pub fn witnesses(&self) -> impl Iterator<Item = &NonFaceProduct> {
        self.non_face_products.iter().filter(|p| !p.zero)
    }
}

pub fn verify_relations(t: &FixedPointTable) -> RelationReport {
    let points = t.num_points();
    let rays = &t.fan.rays;

    let non_face_products: Vec<NonFaceProduct> = minimal_non_faces(&t.fan)
        .into_iter()
        .map(|s| {
            let product = s
                .iter()
                .fold(vec![Rational::one(); points], |acc, &r| hadamard(&acc, t.row(r)));
            let zero = product.iter().all(Zero::is_zero);
            NonFaceProduct {
                rays: s,
                product,
                zero,
            }
        })
        .collect();

    let linear_relations: Vec<LinearRelation> = (0..t.polytope.dim())
        .map(|j| {
            let values = combination(t, |r| Rational::from_integer(rays[r][j].clone()));
            let expected = Rational::from_integer(t.gamma.vector()[j].clone());
            let ok = is_constant(&values) && values.iter().all(|v| *v == expected);
            LinearRelation {
                coordinate: j,
                values,
                expected,
                ok,
            }
        })
        .collect();

    let support: Vec<Rational> = rays
        .iter()
        .map(|xi| {
            t.polytope
                .support_value(xi)
                .expect("rays live in the ambient dimension")
        })
        .collect();
    let chern_combination = combination(t, |r| support[r].clone());

    RelationReport {
        squarefree_nonface_products_zero: non_face_products.iter().all(|p| p.zero),
        non_face_products,
        linear_relations_constant: linear_relations.iter().all(|l| l.ok),
        linear_relations,
        chern_identity_ok: chern_combination == t.f_delta,
        chern_combination,
    }
}

/// `Σ_ρ c(ρ) f_ρ` as a function on the fixed points.
fn combination(t: &FixedPointTable, coeff: impl Fn(usize) -> Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); t.num_points()];
    for r in 0..t.num_rays() {
        let c = coeff(r);
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(t.row(r)) {
            *o += &c * x;
        }
    }
    out
}

