//! Textual descriptions of matrices and patterns, as used by the CLI and
//! sweep configs.
//!
//! Matrices: `model:<d>`, `trefethen:<d>`, `wishart:<r>,<d>[,<seed>]`, or a
//! Matrix Market path. Patterns: `diagonal:<d>`, `banded:<d>,<b>`,
//! `circulant:<d>,<b>`, `multiband:<d>,<b>,<t1>;<t2>;...`, `powerbands:<d>,<b>`,
//! `hard:<k>`, `block:<d>,<size>`, or a Matrix Market path.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matrices::{model_problem_matrix, trefethen_matrix};
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::hardness::{wishart_matrix, WishartSpec};
use crate::mmio;
use crate::pattern::{
    banded_pattern, block_diagonal_pattern, circulant_band_pattern, diagonal_pattern,
    hard_coloring_pattern, multiband_pattern, power_of_two_offsets, SparsityPattern,
};
use crate::random::RandomSeed;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MatrixSource {
    Model { d: usize },
    Trefethen { d: usize },
    Wishart { r: usize, d: usize, seed: u64 },
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PatternSource {
    Diagonal {
        d: usize,
    },
    Banded {
        d: usize,
        b: usize,
    },
    Circulant {
        d: usize,
        b: usize,
    },
    Multiband {
        d: usize,
        b: usize,
        offsets: Vec<usize>,
    },
    /// Multiband with offsets `{1, 2, 4, ...} < d`.
    PowerBands {
        d: usize,
        b: usize,
    },
    Hard {
        k: usize,
    },
    Block {
        d: usize,
        block: usize,
    },
    File(PathBuf),
}

fn parse_list(kind: &str, args: &str, n: usize) -> Result<Vec<usize>> {
    let parts: Vec<&str> = args.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(Error::invalid(format!(
            "`{kind}` expects {n} comma-separated arguments, got `{args}`"
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.parse().map_err(|_| {
                Error::invalid(format!("`{kind}`: `{p}` is not a non-negative integer"))
            })
        })
        .collect()
}

impl MatrixSource {
    pub fn load(&self) -> Result<DenseMatrix> {
        match self {
            MatrixSource::Model { d } => model_problem_matrix(*d),
            MatrixSource::Trefethen { d } => trefethen_matrix(*d),
            MatrixSource::Wishart { r, d, seed } => {
                wishart_matrix(&WishartSpec::new(*r, *d, RandomSeed::new(*seed, 0))?)
            }
            MatrixSource::File(path) => mmio::read_dense_file(path),
        }
    }
}

impl FromStr for MatrixSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let Some((kind, args)) = s.split_once(':') else {
            return Ok(MatrixSource::File(PathBuf::from(s)));
        };
        match kind {
            "model" => {
                let v = parse_list(kind, args, 1)?;
                Ok(MatrixSource::Model { d: v[0] })
            }
            "trefethen" => {
                let v = parse_list(kind, args, 1)?;
                Ok(MatrixSource::Trefethen { d: v[0] })
            }
            "wishart" => {
                let n = args.split(',').count();
                let v = parse_list(kind, args, n.clamp(2, 3))?;
                let seed = v.get(2).copied().unwrap_or(0) as u64;
                Ok(MatrixSource::Wishart {
                    r: v[0],
                    d: v[1],
                    seed,
                })
            }
            _ => Ok(MatrixSource::File(PathBuf::from(s))),
        }
    }
}

impl fmt::Display for MatrixSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixSource::Model { d } => write!(f, "model:{d}"),
            MatrixSource::Trefethen { d } => write!(f, "trefethen:{d}"),
            MatrixSource::Wishart { r, d, seed } => write!(f, "wishart:{r},{d},{seed}"),
            MatrixSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl TryFrom<String> for MatrixSource {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<MatrixSource> for String {
    fn from(m: MatrixSource) -> String {
        m.to_string()
    }
}

impl PatternSource {
    pub fn build(&self) -> Result<SparsityPattern> {
        match self {
            PatternSource::Diagonal { d } => Ok(diagonal_pattern(*d)),
            PatternSource::Banded { d, b } => Ok(banded_pattern(*d, *b)),
            PatternSource::Circulant { d, b } => circulant_band_pattern(*d, *b),
            PatternSource::Multiband { d, b, offsets } => multiband_pattern(*d, offsets, *b),
            PatternSource::PowerBands { d, b } => {
                multiband_pattern(*d, &power_of_two_offsets(*d), *b)
            }
            PatternSource::Hard { k } => Ok(hard_coloring_pattern(*k)),
            PatternSource::Block { d, block } => block_diagonal_pattern(*d, *block),
            PatternSource::File(path) => mmio::read_pattern_file(path),
        }
    }

    /// `(d, b)` when this is a plain band.
    pub fn as_band(&self) -> Option<(usize, usize)> {
        match *self {
            PatternSource::Banded { d, b } => Some((d, b)),
            PatternSource::Diagonal { d } => Some((d, 0)),
            _ => None,
        }
    }
}

impl FromStr for PatternSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let Some((kind, args)) = s.split_once(':') else {
            return Ok(PatternSource::File(PathBuf::from(s)));
        };
        let source = match kind {
            "diagonal" => PatternSource::Diagonal {
                d: parse_list(kind, args, 1)?[0],
            },
            "banded" => {
                let v = parse_list(kind, args, 2)?;
                PatternSource::Banded { d: v[0], b: v[1] }
            }
            "circulant" => {
                let v = parse_list(kind, args, 2)?;
                PatternSource::Circulant { d: v[0], b: v[1] }
            }
            "multiband" => {
                let mut parts = args.splitn(3, ',');
                let head = format!(
                    "{},{}",
                    parts.next().unwrap_or(""),
                    parts.next().unwrap_or("")
                );
                let v = parse_list(kind, &head, 2)?;
                let offsets = parts
                    .next()
                    .ok_or_else(|| Error::invalid("`multiband` expects <d>,<b>,<t1>;<t2>;..."))?
                    .split(';')
                    .map(|t| {
                        t.trim()
                            .parse()
                            .map_err(|_| Error::invalid(format!("`multiband`: bad offset `{t}`")))
                    })
                    .collect::<Result<Vec<usize>>>()?;
                PatternSource::Multiband {
                    d: v[0],
                    b: v[1],
                    offsets,
                }
            }
            "powerbands" => {
                let v = parse_list(kind, args, 2)?;
                PatternSource::PowerBands { d: v[0], b: v[1] }
            }
            "hard" => PatternSource::Hard {
                k: parse_list(kind, args, 1)?[0],
            },
            "block" => {
                let v = parse_list(kind, args, 2)?;
                PatternSource::Block {
                    d: v[0],
                    block: v[1],
                }
            }
            _ => return Ok(PatternSource::File(PathBuf::from(s))),
        };
        match &source {
            PatternSource::Diagonal { d: 0 }
            | PatternSource::Banded { d: 0, .. }
            | PatternSource::Multiband { d: 0, .. }
            | PatternSource::PowerBands { d: 0, .. }
            | PatternSource::Hard { k: 0 } => {
                Err(Error::invalid(format!("`{s}`: dimension must be positive")))
            }
            _ => Ok(source),
        }
    }
}

impl fmt::Display for PatternSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternSource::Diagonal { d } => write!(f, "diagonal:{d}"),
            PatternSource::Banded { d, b } => write!(f, "banded:{d},{b}"),
            PatternSource::Circulant { d, b } => write!(f, "circulant:{d},{b}"),
            PatternSource::Multiband { d, b, offsets } => {
                let list: Vec<String> = offsets.iter().map(usize::to_string).collect();
                write!(f, "multiband:{d},{b},{}", list.join(";"))
            }
            PatternSource::PowerBands { d, b } => write!(f, "powerbands:{d},{b}"),
            PatternSource::Hard { k } => write!(f, "hard:{k}"),
            PatternSource::Block { d, block } => write!(f, "block:{d},{block}"),
            PatternSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl TryFrom<String> for PatternSource {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PatternSource> for String {
    fn from(p: PatternSource) -> String {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_matrix_sources() {
        assert_eq!(
            "model:200".parse::<MatrixSource>().unwrap(),
            MatrixSource::Model { d: 200 }
        );
        assert_eq!(
            "wishart:3,5".parse::<MatrixSource>().unwrap(),
            MatrixSource::Wishart {
                r: 3,
                d: 5,
                seed: 0
            }
        );
        assert_eq!(
            "wishart:3,5,9".parse::<MatrixSource>().unwrap(),
            MatrixSource::Wishart {
                r: 3,
                d: 5,
                seed: 9
            }
        );
        assert_eq!(
            "a.mtx".parse::<MatrixSource>().unwrap(),
            MatrixSource::File(PathBuf::from("a.mtx"))
        );
        assert!("model:x".parse::<MatrixSource>().is_err());
        assert!("trefethen:1,2".parse::<MatrixSource>().is_err());
    }

    #[test]
    fn parse_pattern_sources() {
        for text in [
            "diagonal:5",
            "banded:10,2",
            "circulant:9,1",
            "multiband:20,1,1;4",
            "powerbands:30,2",
            "hard:3",
            "block:6,2",
        ] {
            let p: PatternSource = text.parse().unwrap();
            assert_eq!(p.to_string(), text);
            p.build().unwrap();
        }
        assert!("banded:10".parse::<PatternSource>().is_err());
        assert!("multiband:10,1".parse::<PatternSource>().is_err());
        assert!("diagonal:0".parse::<PatternSource>().is_err());
        assert_eq!(
            "banded:10,2".parse::<PatternSource>().unwrap().as_band(),
            Some((10, 2))
        );
    }

    #[test]
    fn powerbands_matches_multiband() {
        let a = "powerbands:40,2"
            .parse::<PatternSource>()
            .unwrap()
            .build()
            .unwrap();
        let b = multiband_pattern(40, &[1, 2, 4, 8, 16, 32], 2).unwrap();
        assert_eq!(a, b);
    }
}
