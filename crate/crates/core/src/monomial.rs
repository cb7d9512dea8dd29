//! Monomials in `n` variables, stored as sorted multisets of variable
//! indices (`[0, 0, 2]` is `x₀²x₂`).
//!
//! Within a degree the order is lexicographic on the multisets, so
//! `x₀² < x₀x₁ < x₀x₂ < x₁² < …`; across degrees it is graded.

use std::collections::BTreeSet;

pub type Monomial = Vec<usize>;

/// All monomials of total degree `k` in `n` variables, in ray-lex order.
pub fn of_degree(n: usize, k: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Monomial>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// Monomials of degree `0..=k`, graded.
pub fn up_to(n: usize, k: usize) -> Vec<Monomial> {
    (0..=k).flat_map(|i| of_degree(n, i)).collect()
}

/// `k`-element subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<BTreeSet<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<BTreeSet<usize>>) {
        if cur.len() == k {
            out.push(cur.iter().copied().collect());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

pub fn multiply(a: &[usize], b: &[usize]) -> Monomial {
    let mut m: Monomial = a.iter().chain(b).copied().collect();
    m.sort_unstable();
    m
}

pub fn exponents(m: &[usize], n: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    for &i in m {
        e[i] += 1;
    }
    e
}

pub fn support(m: &[usize]) -> BTreeSet<usize> {
    m.iter().copied().collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_binomials() {
        for n in 1..5 {
            for k in 0..5 {
                assert_eq!(of_degree(n, k).len(), binomial(n + k - 1, k));
                assert_eq!(subsets(n, k).len(), binomial(n, k));
            }
        }
    }

    #[test]
    fn order_is_ray_lex() {
        assert_eq!(
            of_degree(3, 2),
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 1],
                vec![1, 2],
                vec![2, 2]
            ]
        );
        assert_eq!(up_to(2, 1), vec![vec![], vec![0], vec![1]]);
    }

    #[test]
    fn products_and_exponents() {
        assert_eq!(multiply(&[1, 2], &[0, 2]), vec![0, 1, 2, 2]);
        assert_eq!(exponents(&[0, 1, 2, 2], 4), vec![1, 1, 2, 0]);
    }
}
