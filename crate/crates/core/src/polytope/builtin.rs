//! Named polytope generators: the two surfaces worked out by hand
//! (`cp2`, `cp1xcp1`) plus parametric families used as a test corpus.
//!
//! Textual form: `name[:p1[:p2]]`, and `product:<a>*<b>[*<c>...]` for
//! Cartesian products of non-product specs, e.g. `product:cp2*segment:0:1`.

use std::fmt;
use std::str::FromStr;

use super::{Facet, Polytope, PolytopeData};
use crate::error::{Error, Result};
use crate::exactnum::{rat, IntVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Cp2,
    Cp1xCp1,
    Simplex { dim: usize, scale: i64 },
    Cube { dim: usize, scale: i64 },
    Hirzebruch(i64),
    Segment(i64, i64),
    Product(Vec<Builtin>),
}

fn bad(name: &str, reason: impl Into<String>) -> Error {
    Error::BadParams {
        name: name.to_string(),
        reason: reason.into(),
    }
}

fn facet(normal: Vec<i64>, support: i64, vertices: impl IntoIterator<Item = usize>) -> Facet {
    Facet {
        normal: IntVector::from(normal),
        support: rat(support),
        vertices: vertices.into_iter().collect(),
    }
}

impl Builtin {
    /// Builds a builtin from a name and integer parameters. Products are only
    /// available through the textual form.
    pub fn from_params(name: &str, params: &[i64]) -> Result<Self> {
        let arity = |lo: usize, hi: usize| {
            if params.len() < lo || params.len() > hi {
                Err(bad(
                    name,
                    format!("expected {lo}..={hi} parameters, got {}", params.len()),
                ))
            } else {
                Ok(())
            }
        };
        let dim_scale = |params: &[i64]| -> Result<(usize, i64)> {
            let d = params[0];
            let s = params.get(1).copied().unwrap_or(1);
            if d < 1 {
                return Err(bad(name, format!("dimension must be ≥ 1, got {d}")));
            }
            if s <= 0 {
                return Err(bad(name, format!("scale must be > 0, got {s}")));
            }
            Ok((d as usize, s))
        };
        let b = match name {
            "cp2" => {
                arity(0, 0)?;
                Builtin::Cp2
            }
            "cp1xcp1" => {
                arity(0, 0)?;
                Builtin::Cp1xCp1
            }
            "simplex" => {
                arity(1, 2)?;
                let (dim, scale) = dim_scale(params)?;
                Builtin::Simplex { dim, scale }
            }
            "cube" => {
                arity(1, 2)?;
                let (dim, scale) = dim_scale(params)?;
                Builtin::Cube { dim, scale }
            }
            "hirzebruch" => {
                arity(1, 1)?;
                if params[0] < 0 {
                    return Err(bad(name, format!("k must be ≥ 0, got {}", params[0])));
                }
                Builtin::Hirzebruch(params[0])
            }
            "segment" => {
                arity(0, 2)?;
                let (a, b) = match params {
                    [] => (0, 1),
                    [b] => (0, *b),
                    [a, b, ..] => (*a, *b),
                };
                if a >= b {
                    return Err(bad(name, format!("need a < b, got a={a}, b={b}")));
                }
                Builtin::Segment(a, b)
            }
            "product" => return Err(bad(name, "products take polytope specs, e.g. product:cp2*segment:0:1")),
            other => return Err(Error::UnknownBuiltin(other.to_string())),
        };
        Ok(b)
    }

    pub fn build(&self) -> Result<Polytope> {
        match self {
            Builtin::Cp2 => Polytope::new(PolytopeData {
                dim: 2,
                vertices: vec![
                    IntVector::from([1, 1]),
                    IntVector::from([-2, 1]),
                    IntVector::from([1, -2]),
                ],
                facets: vec![
                    facet(vec![1, 0], 1, [0, 2]),
                    facet(vec![0, 1], 1, [0, 1]),
                    facet(vec![-1, -1], 1, [1, 2]),
                ],
            }),
            Builtin::Cp1xCp1 => Polytope::new(PolytopeData {
                dim: 2,
                vertices: vec![
                    IntVector::from([1, 1]),
                    IntVector::from([-1, 1]),
                    IntVector::from([-1, -1]),
                    IntVector::from([1, -1]),
                ],
                facets: vec![
                    facet(vec![1, 0], 1, [0, 3]),
                    facet(vec![0, 1], 1, [0, 1]),
                    facet(vec![-1, 0], 1, [1, 2]),
                    facet(vec![0, -1], 1, [2, 3]),
                ],
            }),
            &Builtin::Simplex { dim, scale } => {
                // vertex 0 is the origin, vertex i+1 is scale·e_i
                let mut vertices = vec![IntVector::zeros(dim)];
                for i in 0..dim {
                    let mut v = vec![0; dim];
                    v[i] = scale;
                    vertices.push(IntVector::from(v));
                }
                let mut facets = Vec::new();
                for i in 0..dim {
                    let mut n = vec![0; dim];
                    n[i] = -1;
                    facets.push(facet(n, 0, (0..=dim).filter(|&j| j != i + 1)));
                }
                facets.push(facet(vec![1; dim], scale, 1..=dim));
                Polytope::new(PolytopeData {
                    dim,
                    vertices,
                    facets,
                })
            }
            &Builtin::Cube { dim, scale } => {
                let seg = Builtin::Segment(0, scale).build()?;
                let mut p = seg.clone();
                for _ in 1..dim {
                    p = p.product(&seg)?;
                }
                Ok(p)
            }
            &Builtin::Hirzebruch(k) => Polytope::new(PolytopeData {
                dim: 2,
                vertices: vec![
                    IntVector::from([0, 0]),
                    IntVector::from([k + 1, 0]),
                    IntVector::from([1, 1]),
                    IntVector::from([0, 1]),
                ],
                facets: vec![
                    facet(vec![0, -1], 0, [0, 1]),
                    facet(vec![1, k], k + 1, [1, 2]),
                    facet(vec![0, 1], 1, [2, 3]),
                    facet(vec![-1, 0], 0, [3, 0]),
                ],
            }),
            // upper endpoint first, so a positive γ has its index-0 point at vertex 0
            &Builtin::Segment(a, b) => Polytope::new(PolytopeData {
                dim: 1,
                vertices: vec![IntVector::from([b]), IntVector::from([a])],
                facets: vec![facet(vec![1], b, [0]), facet(vec![-1], -a, [1])],
            }),
            Builtin::Product(parts) => {
                let mut iter = parts.iter();
                let first = iter
                    .next()
                    .ok_or_else(|| bad("product", "needs at least two factors"))?;
                let mut p = first.build()?;
                for q in iter {
                    p = p.product(&q.build()?)?;
                }
                Ok(p)
            }
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("product:") {
            let parts = rest
                .split('*')
                .map(|part| {
                    if part.trim().starts_with("product") {
                        Err(bad("product", "nested products are not supported"))
                    } else {
                        part.parse()
                    }
                })
                .collect::<Result<Vec<Builtin>>>()?;
            if parts.len() < 2 {
                return Err(bad("product", "needs at least two factors"));
            }
            return Ok(Builtin::Product(parts));
        }
        let mut fields = s.split(':');
        let name = fields.next().unwrap_or_default();
        let params = fields
            .map(|f| {
                f.trim()
                    .parse::<i64>()
                    .map_err(|_| bad(name, format!("`{f}` is not an integer")))
            })
            .collect::<Result<Vec<i64>>>()?;
        Builtin::from_params(name, &params)
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Builtin::Cp2 => f.write_str("cp2"),
            Builtin::Cp1xCp1 => f.write_str("cp1xcp1"),
            Builtin::Simplex { dim, scale } => write!(f, "simplex:{dim}:{scale}"),
            Builtin::Cube { dim, scale } => write!(f, "cube:{dim}:{scale}"),
            Builtin::Hirzebruch(k) => write!(f, "hirzebruch:{k}"),
            Builtin::Segment(a, b) => write!(f, "segment:{a}:{b}"),
            Builtin::Product(parts) => {
                let names: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "product:{}", names.join("*"))
            }
        }
    }
}

/// Builds the named polytope from integer parameters.
pub fn builtin(name: &str, params: &[i64]) -> Result<Polytope> {
    Builtin::from_params(name, params)?.build()
}
