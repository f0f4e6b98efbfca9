//! Positive roots, heights and Coxeter data for the classical types A, B, D.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rref;
use crate::scalar::{Field, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    A,
    B,
    D,
}

/// A positive root with its combinatorial data.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Root {
    /// Coefficients in the ambient coordinates (`l + 1` of them for type A).
    pub ambient: Vec<i64>,
    /// The root as a linear form on the essential space of dimension `l`.
    pub form: Vec<i64>,
    /// Expansion in the simple roots.
    pub simple_coeffs: Vec<i64>,
    pub height: i64,
    pub is_simple: bool,
    pub is_highest: bool,
}

impl Root {
    /// Human readable form in the ambient coordinates, e.g. `x1 - x4` or `x + y`.
    pub fn label(&self, rtype: RootType) -> String {
        let names: Vec<String> = match (rtype, self.ambient.len()) {
            (RootType::B, 2) | (RootType::D, 2) => vec!["x".into(), "y".into()],
            (_, n) => (1..=n).map(|i| format!("x{i}")).collect(),
        };
        let mut s = String::new();
        for (c, name) in self.ambient.iter().zip(&names) {
            if *c == 0 {
                continue;
            }
            let mag = c.abs();
            if s.is_empty() {
                if *c < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(if *c < 0 { " - " } else { " + " });
            }
            if mag != 1 {
                s.push_str(&format!("{mag}*"));
            }
            s.push_str(name);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RootSystem {
    pub rtype: RootType,
    pub rank: usize,
    /// Positive roots in construction order.
    pub roots: Vec<Root>,
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.rtype, self.rank)
    }
}

impl FromStr for RootSystem {
    type Err = Error;
    /// Parses names such as `A3`, `B2`, `D4`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown root system {s:?}"));
        let mut chars = s.chars();
        let t = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => RootType::A,
            Some('B') => RootType::B,
            Some('D') => RootType::D,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        RootSystem::new(t, rank)
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn combine(a: &[i64], sa: i64, b: &[i64], sb: i64) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| sa * x + sb * y).collect()
}

impl RootSystem {
    /// Positive roots of the given type. Supported: A_l (l >= 1), B_l (l >= 2), D_l (l >= 3).
    pub fn new(rtype: RootType, rank: usize) -> Result<Self> {
        let l = rank;
        let (ambient, simple): (Vec<Vec<i64>>, Vec<Vec<i64>>) = match rtype {
            RootType::A if l >= 1 => {
                let n = l + 1;
                let mut roots = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        roots.push(combine(&unit(n, i), 1, &unit(n, j), -1));
                    }
                }
                let simple = (0..l).map(|i| combine(&unit(n, i), 1, &unit(n, i + 1), -1)).collect();
                (roots, simple)
            }
            RootType::B if l >= 2 => {
                let mut roots = Vec::new();
                for i in 0..l {
                    roots.push(unit(l, i));
                }
                for i in 0..l {
                    for j in i + 1..l {
                        roots.push(combine(&unit(l, i), 1, &unit(l, j), -1));
                        roots.push(combine(&unit(l, i), 1, &unit(l, j), 1));
                    }
                }
                let mut simple: Vec<Vec<i64>> =
                    (0..l - 1).map(|i| combine(&unit(l, i), 1, &unit(l, i + 1), -1)).collect();
                simple.push(unit(l, l - 1));
                (roots, simple)
            }
            RootType::D if l >= 3 => {
                let mut roots = Vec::new();
                for i in 0..l {
                    for j in i + 1..l {
                        roots.push(combine(&unit(l, i), 1, &unit(l, j), -1));
                        roots.push(combine(&unit(l, i), 1, &unit(l, j), 1));
                    }
                }
                let mut simple: Vec<Vec<i64>> =
                    (0..l - 1).map(|i| combine(&unit(l, i), 1, &unit(l, i + 1), -1)).collect();
                simple.push(combine(&unit(l, l - 2), 1, &unit(l, l - 1), 1));
                (roots, simple)
            }
            _ => return Err(Error::Unsupported(format!("root system {rtype:?}{rank}"))),
        };
        let mut roots = Vec::with_capacity(ambient.len());
        for a in ambient {
            let coeffs = simple_expansion(&simple, &a)?;
            let height = coeffs.iter().sum();
            let is_simple = simple.contains(&a);
            let form = match rtype {
                // drop the last coordinate: x_{l+1} = 0 on the essential space
                RootType::A => a[..l].to_vec(),
                _ => a.clone(),
            };
            roots.push(Root { ambient: a, form, simple_coeffs: coeffs, height, is_simple, is_highest: false });
        }
        let hmax = roots.iter().map(|r| r.height).max().unwrap_or(0);
        for r in &mut roots {
            r.is_highest = r.height == hmax;
        }
        Ok(RootSystem { rtype, rank, roots })
    }

    pub fn dim(&self) -> usize {
        self.rank
    }

    pub fn simple_roots(&self) -> Vec<&Root> {
        let mut s: Vec<&Root> = self.roots.iter().filter(|r| r.is_simple).collect();
        s.sort_by_key(|r| std::cmp::Reverse(r.simple_coeffs.clone()));
        s
    }

    pub fn highest_root(&self) -> &Root {
        self.roots.iter().find(|r| r.is_highest).expect("nonempty root system")
    }

    /// Roots by non-increasing height, ties by descending simple-root coefficients.
    pub fn by_height(&self) -> Vec<&Root> {
        let mut v: Vec<&Root> = self.roots.iter().collect();
        v.sort_by(|a, b| b.height.cmp(&a.height).then_with(|| b.simple_coeffs.cmp(&a.simple_coeffs)));
        v
    }

    pub fn coxeter_number(&self) -> i64 {
        match self.rtype {
            RootType::A => self.rank as i64 + 1,
            RootType::B => 2 * self.rank as i64,
            RootType::D => 2 * self.rank as i64 - 2,
        }
    }

    /// Exponents of the Weyl group, ascending.
    pub fn exponents(&self) -> Vec<i64> {
        let l = self.rank as i64;
        let mut e: Vec<i64> = match self.rtype {
            RootType::A => (1..=l).collect(),
            RootType::B => (0..l).map(|i| 2 * i + 1).collect(),
            RootType::D => {
                let mut v: Vec<i64> = (0..l - 1).map(|i| 2 * i + 1).collect();
                v.push(l - 1);
                v
            }
        };
        e.sort();
        e
    }
}

fn simple_expansion(simple: &[Vec<i64>], v: &[i64]) -> Result<Vec<i64>> {
    let n = simple.len();
    let rows = v.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = simple.iter().map(|s| Rational::from_i64(s[r])).collect();
            row.push(Rational::from_i64(v[r]));
            row
        })
        .collect();
    let pivots = rref(&mut m, n + 1);
    if pivots.contains(&n) || pivots.len() != n {
        return Err(Error::InvalidInput("vector outside the root lattice".into()));
    }
    let mut out = vec![0; n];
    for (r, &p) in pivots.iter().enumerate() {
        out[p] = m[r][n].to_i64().ok_or_else(|| Error::InvalidInput("non-integral root".into()))?;
    }
    Ok(out)
}
