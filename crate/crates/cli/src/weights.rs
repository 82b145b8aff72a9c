//! Weight-set flags: a named set or an explicit residue list.

use std::fmt;
use std::str::FromStr;

use zswlab::ring::{quadratic_nonresidues, quadratic_residues, units};
use zswlab::{Error, Modulus, ResidueSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightSetSpec {
    Qp,
    Np,
    Units,
    Ones,
    Zero,
    List(Vec<u32>),
}

impl FromStr for WeightSetSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qp" | "q" => Ok(WeightSetSpec::Qp),
            "np" | "n" => Ok(WeightSetSpec::Np),
            "units" | "u" => Ok(WeightSetSpec::Units),
            "ones" | "one" | "1" => Ok(WeightSetSpec::Ones),
            "zero" | "0" => Ok(WeightSetSpec::Zero),
            other => parse_list(other).map(WeightSetSpec::List),
        }
    }
}

impl fmt::Display for WeightSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSetSpec::Qp => f.write_str("qp"),
            WeightSetSpec::Np => f.write_str("np"),
            WeightSetSpec::Units => f.write_str("units"),
            WeightSetSpec::Ones => f.write_str("ones"),
            WeightSetSpec::Zero => f.write_str("zero"),
            WeightSetSpec::List(v) => {
                let parts: Vec<String> = v.iter().map(u32::to_string).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

/// Comma-separated integers, optionally wrapped in braces.
pub fn parse_list(s: &str) -> Result<Vec<u32>, String> {
    let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
    if inner.trim().is_empty() {
        return Err("empty residue list".into());
    }
    inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("{t:?} is not a residue or a named weight set"))
        })
        .collect()
}

impl WeightSetSpec {
    pub fn resolve(&self, m: Modulus) -> zswlab::Result<ResidueSet> {
        match self {
            WeightSetSpec::Qp => quadratic_residues(m),
            WeightSetSpec::Np => quadratic_nonresidues(m),
            WeightSetSpec::Units => Ok(units(m)),
            WeightSetSpec::Ones => ResidueSet::singleton(m, 1),
            WeightSetSpec::Zero => ResidueSet::singleton(m, 0),
            WeightSetSpec::List(v) => {
                if let Some(&bad) = v.iter().find(|&&x| x >= m.n()) {
                    return Err(Error::ResidueOutOfRange {
                        value: bad,
                        modulus: m.n(),
                    });
                }
                ResidueSet::from_residues(m, v.iter().copied())
            }
        }
    }
}
