//! The filtration `F₀ ⊂ F₁ ⊂ ⋯` of functions on the fixed points, where
//! `F_i` is spanned by the monomials of degree `≤ i` in the `f_ρ`, and a
//! monomial basis of its associated graded ring with structure constants.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{hadamard, serde_q, EchelonBasis, RatMatrix, Rational};
use crate::fixedpoints::FixedPointTable;
use crate::monomial::{self, Monomial};

/// Evaluates monomials in the rows of a table on the fixed points, caching
/// prefixes.
struct Evaluator<'a> {
    rows: Vec<&'a [Rational]>,
    points: usize,
    cache: BTreeMap<Monomial, Vec<Rational>>,
}

impl<'a> Evaluator<'a> {
    fn new(t: &'a FixedPointTable) -> Self {
        Evaluator {
            rows: (0..t.num_rays()).map(|r| t.row(r)).collect(),
            points: t.num_points(),
            cache: BTreeMap::new(),
        }
    }

    fn eval(&mut self, m: &[usize]) -> Vec<Rational> {
        if let Some(v) = self.cache.get(m) {
            return v.clone();
        }
        let v = match m.split_last() {
            None => vec![Rational::one(); self.points],
            Some((&last, prefix)) => {
                let head = self.eval(prefix);
                hadamard(&head, self.rows[last])
            }
        };
        self.cache.insert(m.to_vec(), v.clone());
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationRanks {
    /// `ranks[i] = dim F_i`.
    pub ranks: Vec<usize>,
    /// `gr_dims[i] = dim F_i − dim F_{i−1}`.
    pub gr_dims: Vec<usize>,
    /// Smallest `i` with `F_i = A(Z)`.
    pub top_degree: usize,
}

/// Default degree cap: one past the dimension.
pub fn default_cap(t: &FixedPointTable) -> usize {
    t.polytope.dim() + 1
}

/// `dim F_i` for `i = 0, 1, …` until `F_i` is all of `A(Z)`. Fails if that
/// does not happen by degree `cap` (`None` means `d + 1`).
pub fn filtration_ranks(t: &FixedPointTable, cap: Option<usize>) -> Result<FiltrationRanks> {
    let cap = cap.unwrap_or_else(|| default_cap(t));
    let points = t.num_points();
    let mut eval = Evaluator::new(t);
    let mut span = EchelonBasis::new(points);
    let mut ranks = Vec::new();
    for i in 0..=cap {
        for m in monomial::of_degree(t.num_rays(), i) {
            if span.rank() == points {
                break;
            }
            span.insert(&eval.eval(&m));
        }
        ranks.push(span.rank());
        if span.rank() == points {
            let gr_dims = ranks
                .iter()
                .enumerate()
                .map(|(i, &r)| if i == 0 { r } else { r - ranks[i - 1] })
                .collect();
            return Ok(FiltrationRanks {
                top_degree: i,
                ranks,
                gr_dims,
            });
        }
    }
    Err(Error::DegreeCapExceeded {
        cap,
        rank: span.rank(),
        points,
    })
}

/// Class of a product of two basis monomials in `Gr`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductEntry {
    /// Exponent vectors over the rays.
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
    pub degree: usize,
    /// Coordinates over the basis of `Gr_degree`; empty when that piece is 0.
    #[serde(with = "serde_q::vec")]
    pub coords: Vec<Rational>,
}

impl ProductEntry {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// A monomial basis of `Gr A(Z)` in the `f_ρ`, chosen greedily in graded
/// ray-lex order, with the products of basis elements reduced into it.
#[derive(Clone, Debug, Serialize)]
pub struct GrBasis {
    /// Per degree, exponent vectors of the chosen monomials.
    pub basis: Vec<Vec<Vec<u32>>>,
    pub products: Vec<ProductEntry>,
    #[serde(skip)]
    monomials: Vec<Vec<Monomial>>,
    #[serde(skip)]
    values: Vec<Vec<Vec<Rational>>>,
    #[serde(skip)]
    rows: Vec<Vec<Rational>>,
}

pub fn gr_structure(t: &FixedPointTable, cap: Option<usize>) -> Result<GrBasis> {
    let ranks = filtration_ranks(t, cap)?;
    let n = t.num_rays();
    let mut eval = Evaluator::new(t);
    let mut span = EchelonBasis::new(t.num_points());
    let mut monomials = Vec::new();
    let mut values = Vec::new();
    for i in 0..=ranks.top_degree {
        let mut ms = Vec::new();
        let mut vs = Vec::new();
        for m in monomial::of_degree(n, i) {
            if ms.len() == ranks.gr_dims[i] {
                break;
            }
            let v = eval.eval(&m);
            if span.insert(&v) {
                ms.push(m);
                vs.push(v);
            }
        }
        debug_assert_eq!(ms.len(), ranks.gr_dims[i]);
        monomials.push(ms);
        values.push(vs);
    }
    let mut gb = GrBasis {
        basis: monomials
            .iter()
            .map(|ms| ms.iter().map(|m| monomial::exponents(m, n)).collect())
            .collect(),
        products: Vec::new(),
        monomials,
        values,
        rows: t.f.to_rows(),
    };
    let flat: Vec<Monomial> = gb
        .monomials
        .iter()
        .skip(1)
        .flat_map(|ms| ms.iter().cloned())
        .collect();
    let mut products = Vec::new();
    for (i, a) in flat.iter().enumerate() {
        for b in &flat[i..] {
            let m = monomial::multiply(a, b);
            products.push(ProductEntry {
                lhs: monomial::exponents(a, n),
                rhs: monomial::exponents(b, n),
                degree: m.len(),
                coords: gb.class_of(&m)?,
            });
        }
    }
    gb.products = products;
    Ok(gb)
}

impl GrBasis {
    pub fn top_degree(&self) -> usize {
        self.monomials.len() - 1
    }

    pub fn basis_monomials(&self, degree: usize) -> &[Monomial] {
        self.monomials.get(degree).map_or(&[], Vec::as_slice)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.monomials.iter().map(Vec::len).collect()
    }

    fn evaluate(&self, m: &[usize]) -> Vec<Rational> {
        let points = self.values[0][0].len();
        m.iter()
            .fold(vec![Rational::one(); points], |acc, &r| hadamard(&acc, &self.rows[r]))
    }

    /// Coordinates of the class of monomial `m` in `Gr_{deg m}` over the
    /// chosen basis. Empty when `deg m` exceeds the top degree.
    pub fn class_of(&self, m: &[usize]) -> Result<Vec<Rational>> {
        let k = m.len();
        if k > self.top_degree() {
            return Ok(Vec::new());
        }
        let target = self.evaluate(m);
        // columns: basis of degree k first, then all lower-degree basis
        // elements, which together span F_{k-1}
        let cols: Vec<&Vec<Rational>> = self.values[k]
            .iter()
            .chain(self.values[..k].iter().flatten())
            .collect();
        let rows: Vec<Vec<Rational>> = (0..target.len())
            .map(|z| cols.iter().map(|c| c[z].clone()).collect())
            .collect();
        let a = RatMatrix::from_rows(rows)?;
        let x = a
            .solve(&target)?
            .expect("monomials of degree k lie in F_k");
        Ok(x[..self.values[k].len()].to_vec())
    }

    pub fn is_zero_in_gr(&self, m: &[usize]) -> Result<bool> {
        Ok(self.class_of(m)?.iter().all(Zero::is_zero))
    }
}
