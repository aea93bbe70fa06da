use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::class::{Generator, KClass};
use super::stratum::{check_branches, Stratum};
use crate::error::{Error, Result};

/// Stratum-wise description of a class: for each open stratum `Y_K^0`, a
/// virtual multiset of constant sheaves indexed by (codegree, twist).
///
/// An entry at codegree `m` with twist numerator `t` stands for
/// `Λ[d − m](t/2)` on `Y_K^0`, i.e. a sheaf in true cohomological degree
/// `m − d`. Multiplicities may be negative. Two tables that differ by moving
/// an entry one codegree over with its sign flipped have the same class in the
/// Grothendieck group; [`SheafTable::same_class`] compares up to that
/// relation, while `==` compares entries literally.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "TableWire", try_from = "TableWire")]
pub struct SheafTable {
    r: u32,
    d: i32,
    entries: BTreeMap<Stratum, BTreeMap<(i32, i32), i64>>,
}

fn check_dimension(d: i32, r: u32) -> Result<()> {
    if d < r as i32 {
        return Err(Error::DimensionTooSmall { d, r });
    }
    Ok(())
}

fn parity_sign(n: i32) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl SheafTable {
    pub fn empty(r: u32, d: i32) -> Result<Self> {
        check_branches(r)?;
        check_dimension(d, r)?;
        Ok(SheafTable {
            r,
            d,
            entries: BTreeMap::new(),
        })
    }

    /// The stratum-wise table of a class. `IC(J; a)` is the constant sheaf
    /// `Λ[d − ♯J]((d − ♯J + a)/2)` on the smooth closure `Y_J`, so it puts one
    /// entry `(♯J, d − ♯J + a)` on every stratum `K ⊇ J`.
    pub fn from_class(x: &KClass, d: i32) -> Result<Self> {
        let mut table = Self::empty(x.r(), d)?;
        for (g, c) in x.terms() {
            let codegree = g.stratum.len() as i32;
            let twist = d - codegree + g.twist;
            for k in g.stratum.supersets() {
                table.add_entry(k, codegree, twist, c);
            }
        }
        Ok(table)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn d(&self) -> i32 {
        self.d
    }

    pub fn add_entry(&mut self, stratum: Stratum, codegree: i32, twist: i32, mult: i64) {
        debug_assert_eq!(stratum.r(), self.r);
        if mult == 0 {
            return;
        }
        let row = self.entries.entry(stratum).or_default();
        let slot = row.entry((codegree, twist)).or_insert(0);
        *slot += mult;
        if *slot == 0 {
            row.remove(&(codegree, twist));
            if row.is_empty() {
                self.entries.remove(&stratum);
            }
        }
    }

    /// Entries on one stratum, keyed by `(codegree, twist)`.
    pub fn at(&self, stratum: &Stratum) -> BTreeMap<(i32, i32), i64> {
        self.entries.get(stratum).cloned().unwrap_or_default()
    }

    pub fn strata(&self) -> impl Iterator<Item = &Stratum> {
        self.entries.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Stratum, (i32, i32), i64)> {
        self.entries
            .iter()
            .flat_map(|(s, row)| row.iter().map(move |(&key, &m)| (s, key, m)))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Keeps only the strata satisfying `keep`. Restricting to the strata
    /// avoiding a closed union models `j_! j^*`; restricting to the strata
    /// inside `Y_I` models `i_{I,*} i_I^*`.
    pub fn restricted<F: Fn(&Stratum) -> bool>(&self, keep: F) -> Self {
        SheafTable {
            r: self.r,
            d: self.d,
            entries: self
                .entries
                .iter()
                .filter(|(s, _)| keep(s))
                .map(|(s, row)| (*s, row.clone()))
                .collect(),
        }
    }

    /// Applies a cohomological shift: codegrees move by `delta`.
    pub fn shifted(&self, delta: i32) -> Self {
        let mut out = Self {
            r: self.r,
            d: self.d,
            entries: BTreeMap::new(),
        };
        for (s, (m, t), mult) in self.entries() {
            out.add_entry(*s, m + delta, t, mult);
        }
        out
    }

    pub fn scaled(&self, factor: i64) -> Self {
        let mut out = Self {
            r: self.r,
            d: self.d,
            entries: BTreeMap::new(),
        };
        for (s, (m, t), mult) in self.entries() {
            out.add_entry(*s, m, t, mult * factor);
        }
        out
    }

    pub fn add_table(&mut self, other: &SheafTable) -> Result<()> {
        if self.r != other.r {
            return Err(Error::MismatchedBranchCount {
                left: self.r,
                right: other.r,
            });
        }
        if self.d != other.d {
            return Err(Error::Index(format!(
                "tables with d = {} and d = {}",
                self.d, other.d
            )));
        }
        for (s, (m, t), mult) in other.entries() {
            self.add_entry(*s, m, t, mult);
        }
        Ok(())
    }

    /// Image in the Grothendieck group of locally constant sheaves on each
    /// stratum: for every `(K, twist)` the alternating sum `Σ (−1)^{m−d} mult`.
    pub fn euler(&self) -> BTreeMap<(Stratum, i32), i64> {
        let mut out = BTreeMap::new();
        for (s, (m, t), mult) in self.entries() {
            *out.entry((*s, t)).or_insert(0) += parity_sign(m - self.d) * mult;
        }
        out.retain(|_, v| *v != 0);
        out
    }

    pub fn same_class(&self, other: &SheafTable) -> bool {
        self.r == other.r && self.d == other.d && self.euler() == other.euler()
    }

    /// Recovers the class from its stratum-wise table.
    ///
    /// The table map is unitriangular when strata are ordered by size: the
    /// piece `IC(K; a)` is the only basis element whose table is nonzero on
    /// `K` and vanishes on every smaller stratum. Peeling strata off in
    /// increasing size therefore inverts it on the nose.
    pub fn decompose(&self) -> KClass {
        let mut remaining = self.euler();
        let mut out = KClass::zero(self.r);
        // Peeling can create entries on larger strata that were zero before,
        // so the next stratum is always re-read from what remains.
        while let Some(k) = remaining
            .keys()
            .map(|(s, _)| *s)
            .min_by_key(|s| (s.len(), *s))
        {
            let twists: Vec<(i32, i64)> = remaining
                .range((k, i32::MIN)..=(k, i32::MAX))
                .map(|((_, t), v)| (*t, *v))
                .collect();
            let size = k.len() as i32;
            for (t, v) in twists {
                out.add_term(
                    Generator::new(k, t - self.d + size),
                    v * parity_sign(size - self.d),
                );
                for sup in k.supersets() {
                    let slot = remaining.entry((sup, t)).or_insert(0);
                    *slot -= v;
                    if *slot == 0 {
                        remaining.remove(&(sup, t));
                    }
                }
            }
        }
        out
    }

    /// Canonical representative with one entry per `(stratum, twist)`: every
    /// group is collapsed onto its lowest codegree, and moved one codegree up
    /// when that makes the multiplicity positive.
    pub fn reduced(&self) -> Self {
        let mut out = Self {
            r: self.r,
            d: self.d,
            entries: BTreeMap::new(),
        };
        for (s, row) in &self.entries {
            let mut by_twist: BTreeMap<i32, Vec<(i32, i64)>> = BTreeMap::new();
            for (&(m, t), &mult) in row {
                by_twist.entry(t).or_default().push((m, mult));
            }
            for (t, group) in by_twist {
                let base = group.iter().map(|(m, _)| *m).min().unwrap();
                let value: i64 = group
                    .iter()
                    .map(|(m, mult)| parity_sign(m - base) * mult)
                    .sum();
                if value > 0 {
                    out.add_entry(*s, base, t, value);
                } else if value < 0 {
                    out.add_entry(*s, base + 1, t, -value);
                }
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TableTermWire {
    stratum: Vec<u32>,
    codegree: i32,
    twist: i32,
    coeff: i64,
}

#[derive(Serialize, Deserialize)]
struct TableWire {
    r: u32,
    d: i32,
    terms: Vec<TableTermWire>,
}

impl From<SheafTable> for TableWire {
    fn from(t: SheafTable) -> Self {
        TableWire {
            r: t.r,
            d: t.d,
            terms: t
                .entries()
                .map(|(s, (codegree, twist), coeff)| TableTermWire {
                    stratum: s.to_vec(),
                    codegree,
                    twist,
                    coeff,
                })
                .collect(),
        }
    }
}

impl TryFrom<TableWire> for SheafTable {
    type Error = Error;

    fn try_from(w: TableWire) -> Result<Self> {
        let mut t = SheafTable::empty(w.r, w.d)?;
        for term in w.terms {
            let s = Stratum::new(term.stratum, w.r)?;
            t.add_entry(s, term.codegree, term.twist, term.coeff);
        }
        Ok(t)
    }
}
