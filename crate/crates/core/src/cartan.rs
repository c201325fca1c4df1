//! Finite Cartan data for the untwisted affine families, with the
//! symmetrizers restricted to the finite nodes `1..=N`.
//!
//! Labeling follows Bourbaki:
//!
//! | family | diagram |
//! |--------|---------|
//! | A_N    | `1 - 2 - ... - N` |
//! | B_N    | `1 - 2 - ... - (N-1) => N` (node N short) |
//! | C_N    | `1 - 2 - ... - (N-1) <= N` (node N long) |
//! | D_N    | `1 - 2 - ... - (N-2)` with both `N-1` and `N` attached to `N-2` |
//! | E_6/7/8| `1 - 3 - 4 - 5 - 6 (- 7 (- 8))` with `2` attached to `4` |
//! | F_4    | `1 - 2 => 3 - 4` |
//! | G_2    | `1 => 2` (triple bond, node 1 long) |
//!
//! Matrix entries use `a[i][j] = 2 (α_i|α_j) / (α_i|α_i)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcoeff::LaurentQ;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl Family {
    pub const ALL: [Family; 9] =
        [Family::A, Family::B, Family::C, Family::D, Family::E6, Family::E7, Family::E8, Family::F4, Family::G2];

    fn fixed_rank(self) -> Option<usize> {
        match self {
            Family::E6 => Some(6),
            Family::E7 => Some(7),
            Family::E8 => Some(8),
            Family::F4 => Some(4),
            Family::G2 => Some(2),
            _ => None,
        }
    }

    fn min_rank(self) -> usize {
        match self {
            Family::A => 1,
            Family::B | Family::C => 2,
            Family::D => 4,
            other => other.fixed_rank().unwrap(),
        }
    }

    pub fn is_valid_rank(self, rank: usize) -> bool {
        match self.fixed_rank() {
            Some(r) => rank == r,
            None => rank >= self.min_rank(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E6 => "E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
            Family::F4 => "F4",
            Family::G2 => "G2",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts `A`..`D`, the exceptional names, and `E`/`F`/`G` alone.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E6" => Ok(Family::E6),
            "E7" => Ok(Family::E7),
            "E8" => Ok(Family::E8),
            "F" | "F4" => Ok(Family::F4),
            "G" | "G2" => Ok(Family::G2),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

/// Resolves a family name and rank, letting `E` pick E6/E7/E8 from the rank.
pub fn resolve_family(name: &str, rank: usize) -> Result<Family> {
    if name.trim().eq_ignore_ascii_case("E") {
        return match rank {
            6 => Ok(Family::E6),
            7 => Ok(Family::E7),
            8 => Ok(Family::E8),
            _ => Err(Error::InvalidRank { family: "E".into(), rank }),
        };
    }
    name.parse()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanData {
    family: Option<Family>,
    rank: usize,
    a: Vec<Vec<i64>>,
    d: Vec<i64>,
}

/// Pairing values present in the g-function table.
pub const G_TABLE_DOMAIN: [i64; 7] = [6, 4, 2, 0, -1, -2, -3];

fn edges_for(family: Family, n: usize) -> Vec<(usize, usize)> {
    let chain = |upto: usize| (1..upto).map(|i| (i, i + 1)).collect::<Vec<_>>();
    match family {
        Family::A | Family::B | Family::C => chain(n),
        Family::D => {
            let mut e = chain(n - 1);
            e.push((n - 2, n));
            e
        }
        Family::E6 | Family::E7 | Family::E8 => {
            let mut e = vec![(1, 3), (2, 4)];
            e.extend((3..n).map(|i| (i, i + 1)));
            e
        }
        Family::F4 => chain(4),
        Family::G2 => vec![(1, 2)],
    }
}

fn symmetrizer_for(family: Family, n: usize) -> Vec<i64> {
    match family {
        Family::A | Family::D | Family::E6 | Family::E7 | Family::E8 => vec![1; n],
        Family::B => (1..=n).map(|i| if i == n { 1 } else { 2 }).collect(),
        Family::C => (1..=n).map(|i| if i == n { 2 } else { 1 }).collect(),
        Family::F4 => vec![2, 2, 1, 1],
        Family::G2 => vec![3, 1],
    }
}

pub fn build_cartan(family: Family, rank: usize) -> Result<CartanData> {
    if !family.is_valid_rank(rank) {
        return Err(Error::InvalidRank { family: family.to_string(), rank });
    }
    let d = symmetrizer_for(family, rank);
    let mut a = vec![vec![0i64; rank]; rank];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    // Off-diagonal pairing on an edge is -max(d_i, d_j) in every family.
    for (i, j) in edges_for(family, rank) {
        let (i, j) = (i - 1, j - 1);
        let b = -d[i].max(d[j]);
        a[i][j] = b / d[i];
        a[j][i] = b / d[j];
    }
    let data = CartanData { family: Some(family), rank, a, d };
    data.validate()?;
    Ok(data)
}

impl CartanData {
    /// Arbitrary symmetrizable data; rows and columns are nodes `1..=N`.
    pub fn custom(a: Vec<Vec<i64>>, d: Vec<i64>) -> Result<CartanData> {
        let rank = d.len();
        if rank == 0 || a.len() != rank || a.iter().any(|r| r.len() != rank) {
            return Err(Error::InvalidCartan("matrix must be N×N with N = len(d) ≥ 1".into()));
        }
        let data = CartanData { family: None, rank, a, d };
        data.validate()?;
        Ok(data)
    }

    fn validate(&self) -> Result<()> {
        let n = self.rank;
        for i in 0..n {
            if self.d[i] <= 0 {
                return Err(Error::InvalidCartan(format!("d[{}] must be positive", i + 1)));
            }
            if self.a[i][i] != 2 {
                return Err(Error::InvalidCartan(format!("a[{0}][{0}] must be 2", i + 1)));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if self.a[i][j] > 0 {
                    return Err(Error::InvalidCartan(format!("a[{}][{}] > 0", i + 1, j + 1)));
                }
                if (self.a[i][j] == 0) != (self.a[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!("zero pattern not symmetric at ({}, {})", i + 1, j + 1)));
                }
                if self.d[i] * self.a[i][j] != self.d[j] * self.a[j][i] {
                    return Err(Error::InvalidCartan(format!("not symmetrized by d at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nodes(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.rank
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.d
    }

    pub fn check_node(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank {
            return Err(Error::IndexOutOfRange { index: i, rank: self.rank });
        }
        Ok(())
    }

    pub fn entry(&self, i: usize, j: usize) -> Result<i64> {
        self.check_node(i)?;
        self.check_node(j)?;
        Ok(self.a[i - 1][j - 1])
    }

    pub fn d(&self, i: usize) -> Result<i64> {
        self.check_node(i)?;
        Ok(self.d[i - 1])
    }

    /// `(α_i|α_j) = d_i a_ij`.
    pub fn pairing_value(&self, i: usize, j: usize) -> Result<i64> {
        self.check_node(i)?;
        self.check_node(j)?;
        Ok(self.d[i - 1] * self.a[i - 1][j - 1])
    }

    pub fn pairing_matrix(&self) -> Vec<Vec<i64>> {
        (1..=self.rank).map(|i| (1..=self.rank).map(|j| self.d[i - 1] * self.a[i - 1][j - 1]).collect()).collect()
    }

    /// Coefficient `g_{ij,q^{-1}}(r)` of the Taylor expansion at `t = 0` of
    /// `(q^p t - 1)/(t - q^p)`, `p = (α_i|α_j)`.
    pub fn g_qinv(&self, i: usize, j: usize, r: u32) -> Result<LaurentQ> {
        let p = self.pairing_value(i, j)?;
        if !G_TABLE_DOMAIN.contains(&p) {
            return Err(Error::UnsupportedPairing { i, j, value: p });
        }
        Ok(g_for_pairing(p, r))
    }

    /// Human-readable Dynkin diagram in the documented labeling.
    pub fn diagram(&self) -> String {
        let n = self.rank;
        let chain = |upto: usize| (1..=upto).map(|i| i.to_string()).collect::<Vec<_>>().join(" - ");
        match self.family {
            Some(Family::A) => chain(n),
            Some(Family::B) if n >= 2 => format!("{} => {}", chain(n - 1), n),
            Some(Family::C) if n >= 2 => format!("{} <= {}", chain(n - 1), n),
            Some(Family::D) => {
                let head = chain(n - 2);
                let pad = " ".repeat(head.len() - 1);
                format!("{} - {}\n{}\\- {}", head, n - 1, pad, n)
            }
            Some(Family::E6) | Some(Family::E7) | Some(Family::E8) => {
                let tail: Vec<String> = (3..=n).map(|i| i.to_string()).collect();
                format!("1 - {}\n        |\n        2", tail.join(" - "))
            }
            Some(Family::F4) => "1 - 2 => 3 - 4".to_string(),
            Some(Family::G2) => "1 ≡> 2".to_string(),
            _ => {
                let mut lines = Vec::new();
                for i in 1..=n {
                    for j in (i + 1)..=n {
                        if self.a[i - 1][j - 1] != 0 {
                            lines.push(format!(
                                "{} -- {}  (a_ij = {}, a_ji = {})",
                                i,
                                j,
                                self.a[i - 1][j - 1],
                                self.a[j - 1][i - 1]
                            ));
                        }
                    }
                }
                lines.join("\n")
            }
        }
    }
}

/// Closed form of the g-table entry keyed on the pairing value:
/// `q^p` at `r = 0`, else `q^{p(r+1)} - q^{p(r-1)}`.
pub fn g_for_pairing(p: i64, r: u32) -> LaurentQ {
    let r = r as i64;
    if r == 0 {
        return LaurentQ::q(p);
    }
    &LaurentQ::q(p * (r + 1)) - &LaurentQ::q(p * (r - 1))
}
