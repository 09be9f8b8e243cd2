//! JSON input schemas and their conversion to library types.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use itconn_core::algebra::{check_prime, ExtCtx, Fp, MPoly, Matrix, Poly, RatFunc, Ring};
use itconn_core::hderiv::{newton_extend, Domain, HigherDerivation};
use itconn_core::idmod::{FcProjSystem, IdStructure, IterableEquation, Mat};

pub type JsonMatrix = Vec<Vec<String>>;

pub fn read<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn prime(p: u32) -> Result<u32> {
    check_prime(p).map_err(|e| anyhow!("{e}"))
}

pub fn matrix(rows: &JsonMatrix, p: u32, n: usize) -> Result<Mat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        bail!("expected a {n}x{n} matrix");
    }
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| RatFunc::parse(s, p).map_err(|e| anyhow!("'{s}': {e}"))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(parsed)?)
}

pub fn render_matrix(m: &Mat) -> JsonMatrix {
    m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DomainInput {
    /// F_p[t_1..t_m]
    Poly { vars: usize },
    /// F_p(t)
    Ratfunc,
    /// F_p(t)[y]/(m), m monic in y, coefficients listed from degree 0
    Ext { minpoly: Vec<String> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HigherDerivationInput {
    pub p: u32,
    pub domain: DomainInput,
    #[serde(rename = "N")]
    pub order: usize,
    /// images[j][k] = ψ^(k)(generator j); for `ext` a single list for t
    /// requests the Newton extension.
    pub images: Vec<Vec<String>>,
}

/// A higher derivation on any supported domain, checked for iterativity.
pub enum AnyDerivation {
    Poly(HigherDerivation<MPoly<Fp>>),
    Ratfunc(HigherDerivation<RatFunc>),
    Ext(HigherDerivation<itconn_core::algebra::ExtElem>),
}

impl AnyDerivation {
    pub fn is_iterative(&self, n: usize) -> itconn_core::hderiv::IterativityReport {
        match self {
            AnyDerivation::Poly(d) => d.is_iterative(n),
            AnyDerivation::Ratfunc(d) => d.is_iterative(n),
            AnyDerivation::Ext(d) => d.is_iterative(n),
        }
    }
}

fn build<C: Domain>(ctx: &C::Ctx, order: usize, images: &[Vec<String>]) -> Result<HigherDerivation<C>> {
    let parsed = images
        .iter()
        .map(|img| img.iter().map(|s| C::parse_elem(s, ctx).map_err(|e| anyhow!("'{s}': {e}"))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(HigherDerivation::from_components(ctx, order, parsed)?)
}

impl HigherDerivationInput {
    pub fn build(&self, order: Option<usize>) -> Result<AnyDerivation> {
        let p = prime(self.p)?;
        let order = order.unwrap_or(self.order);
        Ok(match &self.domain {
            DomainInput::Poly { vars } => AnyDerivation::Poly(build::<MPoly<Fp>>(&(p, *vars), order, &self.images)?),
            DomainInput::Ratfunc => AnyDerivation::Ratfunc(build::<RatFunc>(&p, order, &self.images)?),
            DomainInput::Ext { minpoly } => {
                let coeffs = minpoly.iter().map(|s| RatFunc::parse(s, p).map_err(|e| anyhow!("'{s}': {e}"))).collect::<Result<Vec<_>>>()?;
                let m = Poly::new(coeffs, p);
                if !m.leading().is_some_and(|c| c.is_one()) || m.degree().unwrap_or(0) < 1 {
                    bail!("minpoly must be monic of degree at least 1");
                }
                if self.images.len() == 1 {
                    let base = build::<RatFunc>(&p, order, &self.images)?;
                    AnyDerivation::Ext(newton_extend(&base, &m)?)
                } else {
                    AnyDerivation::Ext(build(&ExtCtx::new(m), order, &self.images)?)
                }
            }
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdeInput {
    pub p: u32,
    pub n: usize,
    #[serde(rename = "L")]
    pub depth: u32,
    #[serde(rename = "N")]
    pub order: usize,
    #[serde(rename = "A")]
    pub a: Vec<JsonMatrix>,
}

impl IdeInput {
    pub fn build(&self) -> Result<IterableEquation> {
        let p = prime(self.p)?;
        let a = self.a.iter().map(|m| matrix(m, p, self.n)).collect::<Result<Vec<_>>>()?;
        Ok(IterableEquation::new(p, self.n, self.depth, a)?)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdStructureInput {
    pub p: u32,
    pub n: usize,
    #[serde(rename = "L")]
    pub depth: u32,
    #[serde(rename = "C")]
    pub c: Vec<JsonMatrix>,
}

impl IdStructureInput {
    pub fn build(&self) -> Result<IdStructure> {
        let p = prime(self.p)?;
        let c = self.c.iter().map(|m| matrix(m, p, self.n)).collect::<Result<Vec<_>>>()?;
        Ok(IdStructure::new(p, self.n, self.depth, c)?)
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FcSystemInput {
    pub p: u32,
    pub n: usize,
    #[serde(rename = "L")]
    pub depth: u32,
    #[serde(rename = "B")]
    pub b: Vec<JsonMatrix>,
}

impl FcSystemInput {
    /// Parses shapes only; the chain invariant is checked by the command.
    pub fn build(&self) -> Result<FcProjSystem> {
        let p = prime(self.p)?;
        if self.b.len() != self.depth as usize + 1 {
            bail!("expected L + 1 = {} matrices B_0..B_L, got {}", self.depth + 1, self.b.len());
        }
        let b = self.b.iter().map(|m| matrix(m, p, self.n)).collect::<Result<Vec<_>>>()?;
        Ok(FcProjSystem::new_unchecked(p, self.n, self.depth, b))
    }

    pub fn from_system(s: &FcProjSystem) -> Self {
        FcSystemInput { p: s.p, n: s.n, depth: s.depth, b: s.b.iter().map(render_matrix).collect() }
    }
}

/// A bare system, or the report written by `extract-projsys`.
pub fn read_fc_system(path: &Path) -> Result<FcSystemInput> {
    let mut v: serde_json::Value = read(path)?;
    if v.get("command").is_some() {
        v = v.get_mut("data").map(serde_json::Value::take).ok_or_else(|| anyhow!("report without data"))?;
    }
    serde_json::from_value(v).with_context(|| format!("parsing {}", path.display()))
}

/// Digits of one generator, or of each generator.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Digits {
    One(Vec<u32>),
    Many(Vec<Vec<u32>>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleInput {
    pub p: u32,
    pub digits: Digits,
    /// digits of the second generator; defaults to a_0, 0, a_2, 0, ...
    #[serde(default)]
    pub second: Option<Vec<u32>>,
    #[serde(rename = "L")]
    pub depth: u32,
    /// degree window for the graded example
    #[serde(rename = "D", default = "default_window")]
    pub window: u32,
}

fn default_window() -> u32 {
    3
}

impl ExampleInput {
    pub fn default_for(p: u32, depth: u32) -> Self {
        ExampleInput { p, digits: Digits::One(vec![1; depth as usize]), second: None, depth, window: default_window() }
    }

    /// Digit lists of the generators for the product examples.
    pub fn generators(&self) -> Vec<Vec<u32>> {
        match &self.digits {
            Digits::Many(v) => v.clone(),
            Digits::One(a) => {
                let b = self.second.clone().unwrap_or_else(|| a.iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d } else { 0 }).collect());
                vec![a.clone(), b]
            }
        }
    }

    /// Digits for the single-generator graded example.
    pub fn first(&self) -> Vec<u32> {
        match &self.digits {
            Digits::One(a) => a.clone(),
            Digits::Many(v) => v.first().cloned().unwrap_or_default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        prime(self.p)?;
        let gens = self.generators();
        if gens.iter().flatten().any(|&d| d >= self.p) {
            bail!("digits must lie in 0..{}", self.p);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_generator_keeps_alternate_digits() {
        let params: ExampleInput = serde_json::from_str(r#"{"p": 2, "digits": [1, 1, 1, 1], "L": 4}"#).unwrap();
        assert_eq!(params.generators(), vec![vec![1, 1, 1, 1], vec![1, 0, 1, 0]]);
        assert_eq!(params.window, 3);
        let nested: ExampleInput = serde_json::from_str(r#"{"p": 3, "digits": [[1, 2], [2, 0]], "L": 2, "D": 1}"#).unwrap();
        assert_eq!(nested.generators(), vec![vec![1, 2], vec![2, 0]]);
        assert_eq!(nested.first(), vec![1, 2]);
        let bad: ExampleInput = serde_json::from_str(r#"{"p": 2, "digits": [2], "L": 1}"#).unwrap();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn matrices_are_square_and_parsed() {
        let rows = vec![vec!["1/(1+t)".to_string(), "0".into()], vec!["t^2".into(), "1".into()]];
        let m = matrix(&rows, 3, 2).unwrap();
        assert_eq!(render_matrix(&m), vec![vec!["1/(t+1)".to_string(), "0".into()], vec!["t^2".into(), "1".into()]]);
        assert!(matrix(&rows, 3, 3).is_err());
        assert!(matrix(&vec![vec!["t)".to_string()]], 3, 1).is_err());
    }
}
