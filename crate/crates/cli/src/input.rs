use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;
use sgo_core::poly::homogenize;
use sgo_core::rational::parse_rational;
use sgo_core::stableset::Graph;
use sgo_core::{Exponent, HomogeneousPolynomial, Polynomial, Rational};

use crate::error::{config, CliError};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyFile {
    n: usize,
    #[serde(default)]
    degree: Option<u32>,
    terms: Vec<TermFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    alpha: Vec<u32>,
    coef: Value,
}

fn coefficient(v: &Value) -> Result<Rational, CliError> {
    let text = match v {
        Value::String(s) => s.clone(),
        // the JSON literal is converted exactly, never through f64
        Value::Number(n) => n.to_string(),
        other => {
            return Err(config(format!(
                "coefficient must be a string or number, got {other}"
            )))
        }
    };
    parse_rational(&text).map_err(CliError::from)
}

/// Parses the JSON polynomial format. Terms must share one total degree
/// unless `homogenize` is set, in which case lower-degree terms are lifted
/// to the declared (or largest) degree.
pub fn parse_polynomial(
    text: &str,
    homogenize_input: bool,
) -> Result<HomogeneousPolynomial, CliError> {
    let file: PolyFile =
        serde_json::from_str(text).map_err(|e| config(format!("invalid polynomial file: {e}")))?;
    let mut terms = Vec::with_capacity(file.terms.len());
    for t in &file.terms {
        if t.alpha.len() != file.n {
            return Err(config(format!(
                "exponent {:?} has {} entries, expected n = {}",
                t.alpha,
                t.alpha.len(),
                file.n
            )));
        }
        terms.push((Exponent(t.alpha.clone()), coefficient(&t.coef)?));
    }
    let max_deg = terms.iter().map(|(a, _)| a.degree()).max().unwrap_or(0);
    let d = file.degree.unwrap_or(max_deg);
    if d == 0 {
        return Err(config(
            "polynomial degree must be >= 1 (constant polynomials are not supported)",
        ));
    }
    if homogenize_input {
        let p = Polynomial::new(file.n, terms)?;
        Ok(homogenize(&p, d)?)
    } else {
        HomogeneousPolynomial::new(file.n, d, terms)
            .map_err(|e| config(format!("{e}; pass --homogenize to lift lower-degree terms")))
    }
}

pub fn read_polynomial(
    path: &Path,
    homogenize_input: bool,
) -> Result<HomogeneousPolynomial, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| config(format!("cannot read {}: {e}", path.display())))?;
    parse_polynomial(&text, homogenize_input)
}

pub fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| config(format!("cannot read {}: {e}", path.display())))?;
    Ok(Graph::parse_edge_list(&text)?)
}
