//! The nilpotent monodromy `N: Ψ → Ψ(1)` on the graded grid of Ψ.
//!
//! Cell `(h, k)` stands for `⊕_{♯J=h} IC(J; h − 1 − 2(k − 1))`, the level-`h`
//! part of the block `gr^k_!`. On graded pieces `N` moves a cell one block
//! down and raises its twist by 2. Every arc carries the scalar 1; any other
//! choice of nonzero scalars gives the same kernel and Jordan type.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kgroup::{psi_twist, strata_of_size, Generator, KClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridCell {
    pub h: u32,
    pub k: u32,
}

impl GridCell {
    pub fn new(h: u32, k: u32) -> Result<Self> {
        if k < 1 || k > h {
            return Err(Error::Index(format!(
                "grid cells need 1 <= k <= h, got ({h},{k})"
            )));
        }
        Ok(GridCell { h, k })
    }

    pub fn twist(&self) -> i32 {
        psi_twist(self.h, self.k)
    }

    /// `⊕_{♯J=h} IC(J; twist)` on a configuration with `r` branches.
    pub fn class(&self, r: u32) -> Result<KClass> {
        let mut out = KClass::zero(r);
        for j in strata_of_size(r, self.h)? {
            out.add_term(Generator::new(j, self.twist()), 1);
        }
        Ok(out)
    }
}

impl fmt::Display for GridCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.h, self.k)
    }
}

#[derive(Serialize, Deserialize)]
struct CellWire {
    h: u32,
    k: u32,
    twist: i32,
}

impl Serialize for GridCell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CellWire {
            h: self.h,
            k: self.k,
            twist: self.twist(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridCell {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CellWire::deserialize(d)?;
        let cell = GridCell::new(w.h, w.k).map_err(serde::de::Error::custom)?;
        if cell.twist() != w.twist {
            return Err(serde::de::Error::custom(format!(
                "cell {cell} has twist {}, not {}",
                cell.twist(),
                w.twist
            )));
        }
        Ok(cell)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub from: GridCell,
    pub to: GridCell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GridWire")]
pub struct MonodromyGrid {
    r: u32,
    cells: Vec<GridCell>,
}

#[derive(Deserialize)]
struct GridWire {
    r: u32,
    cells: Vec<GridCell>,
}

impl TryFrom<GridWire> for MonodromyGrid {
    type Error = Error;
    fn try_from(w: GridWire) -> Result<Self> {
        let g = grid(w.r)?;
        if g.cells != w.cells {
            return Err(Error::Malformed(format!(
                "cells do not form the grid for r = {}",
                w.r
            )));
        }
        Ok(g)
    }
}

/// All cells `(h, k)` with `1 ≤ k ≤ h ≤ r`, ordered by level then block.
pub fn grid(r: u32) -> Result<MonodromyGrid> {
    crate::kgroup::stratum::check_branches(r)?;
    let cells = (1..=r)
        .flat_map(|h| (1..=h).map(move |k| GridCell { h, k }))
        .collect();
    Ok(MonodromyGrid { r, cells })
}

impl MonodromyGrid {
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn cells(&self) -> &[GridCell] {
        &self.cells
    }

    pub fn contains(&self, c: &GridCell) -> bool {
        1 <= c.k && c.k <= c.h && c.h <= self.r
    }

    /// Sum of the cell classes.
    pub fn class(&self) -> Result<KClass> {
        let mut out = KClass::zero(self.r);
        for c in &self.cells {
            out += &c.class(self.r)?;
        }
        Ok(out)
    }

    /// `N` on a cell: `(h, k) ↦ (h, k − 1)`, and zero on the first block.
    pub fn apply_n(&self, c: &GridCell) -> Result<Option<GridCell>> {
        if !self.contains(c) {
            return Err(Error::Index(format!(
                "cell {c} is not in the grid for r = {}",
                self.r
            )));
        }
        Ok((c.k > 1).then(|| GridCell { h: c.h, k: c.k - 1 }))
    }

    /// `N^j` as a map from cells to images, `None` meaning zero.
    pub fn power_n(&self, j: u32) -> BTreeMap<GridCell, Option<GridCell>> {
        self.cells
            .iter()
            .map(|c| (*c, (c.k > j).then(|| GridCell { h: c.h, k: c.k - j })))
            .collect()
    }

    /// Number of cells with a nonzero image under `N^j`.
    pub fn rank_n(&self, j: u32) -> usize {
        self.power_n(j).values().filter(|v| v.is_some()).count()
    }

    pub fn arcs(&self) -> Vec<Arc> {
        self.cells
            .iter()
            .filter(|c| c.k > 1)
            .map(|c| Arc {
                from: *c,
                to: GridCell { h: c.h, k: c.k - 1 },
            })
            .collect()
    }

    pub fn kernel_n(&self) -> Vec<GridCell> {
        self.cells.iter().filter(|c| c.k == 1).copied().collect()
    }

    /// The Jordan strings of `N`, traced from each cell outside the image.
    /// Each is listed from its top `(h, h)` down to `(h, 1)`.
    pub fn jordan_strings(&self) -> Vec<Vec<GridCell>> {
        let mut out = Vec::new();
        for start in self.cells.iter().filter(|c| c.k == c.h) {
            let mut string = vec![*start];
            let mut cur = *start;
            while let Some(next) = self.apply_n(&cur).expect("cell from the grid") {
                string.push(next);
                cur = next;
            }
            out.push(string);
        }
        out
    }

    /// Pairs `(length, level)` of the Jordan strings.
    pub fn jordan_type(&self) -> Vec<JordanBlock> {
        self.jordan_strings()
            .iter()
            .map(|s| JordanBlock {
                length: s.len() as u32,
                level: s[0].h,
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JordanBlock {
    pub length: u32,
    pub level: u32,
}

/// Jordan block sizes recovered from the ranks of the powers of `N` alone:
/// the number of strings of length at least `j` is `rank N^{j−1} − rank N^j`.
pub fn jordan_partition_from_ranks(g: &MonodromyGrid) -> Vec<u32> {
    let ranks: Vec<usize> = (0..=g.r + 1).map(|j| g.rank_n(j)).collect();
    let mut sizes = Vec::new();
    for j in 1..=g.r as usize {
        let at_least_j = ranks[j - 1] - ranks[j];
        let at_least_next = ranks[j] - ranks[j + 1];
        for _ in 0..(at_least_j - at_least_next) {
            sizes.push(j as u32);
        }
    }
    sizes
}
