use std::fs;

use serde::Serialize;
use torograd::exactnum::IntVector;
use torograd::fixedpoints::{sample_generic, Gamma};
use torograd::polytope::{Builtin, Polytope, PolytopeData};

/// A problem with the command line or its inputs. Maps to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

pub fn load_data(source: &str) -> Result<PolytopeData, InputError> {
    if let Some(spec) = source.strip_prefix("builtin:") {
        let b: Builtin = spec.parse()?;
        return Ok(b.build()?.data().clone());
    }
    let text = fs::read_to_string(source)
        .map_err(|e| InputError(format!("cannot read {source}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{source}: {e}")))
}

pub fn load_polytope(source: &str) -> Result<Polytope, InputError> {
    let data = load_data(source)?;
    Polytope::new(data).map_err(|e| InputError(format!("{source}: {e}")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaSpec {
    Explicit(Vec<i64>),
    Seed(u64),
}

impl GammaSpec {
    pub fn parse(s: &str) -> Result<Self, InputError> {
        let s = s.trim();
        if let Some(seed) = s.strip_prefix("seed:") {
            let n = seed
                .trim()
                .parse()
                .map_err(|_| InputError(format!("bad seed `{seed}`")))?;
            return Ok(GammaSpec::Seed(n));
        }
        let coords = s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| InputError(format!("bad gamma coordinate `{x}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GammaSpec::Explicit(coords))
    }

    pub fn source(&self) -> String {
        match self {
            GammaSpec::Explicit(_) => "explicit".to_string(),
            GammaSpec::Seed(n) => format!("seed:{n}"),
        }
    }

    /// The raw vector, without a genericity check.
    pub fn raw(&self, p: &Polytope) -> IntVector {
        match self {
            GammaSpec::Explicit(v) => IntVector::from(v.clone()),
            GammaSpec::Seed(n) => sample_generic(p, *n).vector().clone(),
        }
    }

    pub fn resolve(&self, p: &Polytope) -> Result<Gamma, InputError> {
        Ok(Gamma::new(p, self.raw(p))?)
    }
}

/// How `γ` was obtained, recorded in every document that uses it.
#[derive(Clone, Debug, Serialize)]
pub struct GammaInfo {
    pub value: IntVector,
    pub source: String,
}

/// Reads the degree cap override from the environment.
pub fn degree_cap() -> Result<Option<usize>, InputError> {
    match std::env::var("TOROGRAD_MAX_DEGREE") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| InputError(format!("TOROGRAD_MAX_DEGREE: `{v}` is not a degree"))),
        Err(_) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_specs() {
        assert_eq!(GammaSpec::parse("1, -2").unwrap(), GammaSpec::Explicit(vec![1, -2]));
        assert_eq!(GammaSpec::parse("seed:7").unwrap(), GammaSpec::Seed(7));
        assert!(GammaSpec::parse("1.5,2").is_err());
        assert!(GammaSpec::parse("seed:x").is_err());
        assert!(GammaSpec::parse("").is_err());
    }
}
