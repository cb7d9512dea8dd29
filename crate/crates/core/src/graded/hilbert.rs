//! Two combinatorial routes to the Betti numbers that never look at the
//! fixed-point functions: the h-vector of the normal fan, and the Hilbert
//! function of the Stanley–Reisner presentation.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{EchelonBasis, Rational};
use crate::monomial::{self, Monomial};
use crate::polytope::Fan;

use super::relations::minimal_non_faces;

/// `h_k = Σ_{i ≤ k} (−1)^{k−i} C(d−i, k−i) f_{i−1}`, where `f_{i−1}` is the
/// number of `i`-ray cones of the fan (the zero cone counts as `f_{−1} = 1`).
pub fn h_vector(fan: &Fan) -> Vec<i64> {
    let d = fan.dim;
    let mut f = vec![0i64; d + 1];
    for c in fan.all_cones() {
        f[c.len()] += 1;
    }
    (0..=d)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                    sign * monomial::binomial(d - i, k - i) as i64 * f[i]
                })
                .sum()
        })
        .collect()
}

/// Dimensions of the graded pieces of `ℚ[D_ρ] / (SR + linear forms)`.
///
/// The quotient by the Stanley–Reisner monomial ideal is taken first: degree
/// `i` is spanned by the standard monomials (those whose support contains no
/// minimal non-face). The relations `ℓ_j · m` for every `m` of degree `i−1`,
/// with `ℓ_j = Σ_ρ ⟨ξ_ρ, e_j⟩ D_ρ`, are projected onto the standard
/// monomials and their rank subtracted. Stops once a piece vanishes; trailing
/// zeros are not included. Fails if degree `cap` (default `d + 1`) is still
/// nonzero.
pub fn sr_hilbert(fan: &Fan, cap: Option<usize>) -> Result<Vec<usize>> {
    let n = fan.rays.len();
    let d = fan.dim;
    let cap = cap.unwrap_or(d + 1);
    let non_faces = minimal_non_faces(fan);
    let standard = |m: &Monomial| {
        let s = monomial::support(m);
        !non_faces.iter().any(|nf| nf.is_subset(&s))
    };
    let forms: Vec<Vec<(usize, Rational)>> = (0..d)
        .map(|j| {
            (0..n)
                .filter(|&r| !fan.rays[r][j].is_zero())
                .map(|r| (r, Rational::from_integer(fan.rays[r][j].clone())))
                .collect()
        })
        .collect();

    let mut dims = Vec::new();
    for i in 0..=cap {
        let basis: Vec<Monomial> = monomial::of_degree(n, i)
            .into_iter()
            .filter(|m| standard(m))
            .collect();
        let index: BTreeMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let mut span = EchelonBasis::new(basis.len());
        if i > 0 {
            for m in monomial::of_degree(n, i - 1) {
                for form in &forms {
                    let mut v = vec![Rational::zero(); basis.len()];
                    for (r, c) in form {
                        let prod = monomial::multiply(&m, &[*r]);
                        if let Some(&k) = index.get(&prod) {
                            v[k] += c;
                        }
                    }
                    span.insert(&v);
                }
            }
        }
        let dim = basis.len() - span.rank();
        if dim == 0 {
            return Ok(dims);
        }
        dims.push(dim);
    }
    Err(Error::PresentationCapExceeded {
        cap,
        dim: dims.last().copied().unwrap_or(0),
    })
}
