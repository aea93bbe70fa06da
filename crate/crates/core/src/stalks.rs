//! Stalks of Ψ at a point of `Y_I^0` and the spectral sequence of its
//! stratification filtration.
//!
//! The `E_1` page splits into one row per graded block `gr^k_!`; rows do not
//! talk to each other, and inside a row the differential is the signed
//! subset-inclusion matrix. Its cohomology is read off by exact ranks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::psi_filtration;
use crate::kgroup::{binomial, IcClass, KClass, SheafTable, Stratum};
use crate::linalg::{rank, Characteristic, IntMatrix};

/// Stalk of a complex at a point of `Y_I^0`: multiplicities indexed by
/// `(q, twist)`, where `q` sits in true degree `q − (d − 1)`.
///
/// Tables produced from honest objects have positive multiplicities; the
/// linear extension to classes ([`kclass_stalk`]) may produce negative ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "StalkWire", try_from = "StalkWire")]
pub struct StalkTable {
    stratum: Stratum,
    d: i32,
    entries: BTreeMap<(i32, i32), i64>,
}

impl StalkTable {
    pub fn empty(stratum: Stratum, d: i32) -> Result<Self> {
        if d < stratum.r() as i32 {
            return Err(Error::DimensionTooSmall { d, r: stratum.r() });
        }
        Ok(StalkTable {
            stratum,
            d,
            entries: BTreeMap::new(),
        })
    }

    pub fn stratum(&self) -> Stratum {
        self.stratum
    }

    pub fn d(&self) -> i32 {
        self.d
    }

    pub fn add(&mut self, q: i32, twist: i32, mult: i64) {
        if mult == 0 {
            return;
        }
        let slot = self.entries.entry((q, twist)).or_insert(0);
        *slot += mult;
        if *slot == 0 {
            self.entries.remove(&(q, twist));
        }
    }

    pub fn get(&self, q: i32, twist: i32) -> i64 {
        self.entries.get(&(q, twist)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((i32, i32), i64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.entries.values().all(|&m| m > 0)
    }

    /// Alternating sum over `q` for each twist.
    pub fn euler(&self) -> BTreeMap<i32, i64> {
        let mut out = BTreeMap::new();
        for ((q, t), m) in self.entries() {
            *out.entry(t).or_insert(0) += if q.rem_euclid(2) == 0 { m } else { -m };
        }
        out.retain(|_, v| *v != 0);
        out
    }

    pub fn same_class(&self, other: &StalkTable) -> bool {
        self.stratum == other.stratum && self.d == other.d && self.euler() == other.euler()
    }
}

#[derive(Serialize, Deserialize)]
struct StalkEntryWire {
    q: i32,
    twist: i32,
    mult: i64,
}

#[derive(Serialize, Deserialize)]
struct StalkWire {
    r: u32,
    #[serde(rename = "I")]
    stratum: Vec<u32>,
    d: i32,
    entries: Vec<StalkEntryWire>,
}

impl From<StalkTable> for StalkWire {
    fn from(t: StalkTable) -> Self {
        StalkWire {
            r: t.stratum.r(),
            stratum: t.stratum.to_vec(),
            d: t.d,
            entries: t
                .entries()
                .map(|((q, twist), mult)| StalkEntryWire { q, twist, mult })
                .collect(),
        }
    }
}

impl TryFrom<StalkWire> for StalkTable {
    type Error = Error;
    fn try_from(w: StalkWire) -> Result<Self> {
        let mut t = StalkTable::empty(Stratum::new(w.stratum, w.r)?, w.d)?;
        for e in w.entries {
            t.add(e.q, e.twist, e.mult);
        }
        Ok(t)
    }
}

/// Stalk of `IC(J; a) = Λ_{Y_J}[d − ♯J]((d − ♯J + a)/2)` at a point of `Y_I^0`.
pub fn ic_stalk(c: &IcClass, i: &Stratum, d: i32) -> Result<StalkTable> {
    let mut out = StalkTable::empty(*i, d)?;
    if c.stratum.is_subset(i) {
        let size = c.stratum.len() as i32;
        out.add(size - 1, d - size + c.twist, 1);
    }
    Ok(out)
}

/// Linear extension of [`ic_stalk`] to classes.
pub fn kclass_stalk(x: &KClass, i: &Stratum, d: i32) -> Result<StalkTable> {
    let table = SheafTable::from_class(x, d)?;
    let mut out = StalkTable::empty(*i, d)?;
    for ((m, t), mult) in table.at(i) {
        out.add(m - 1, t, mult);
    }
    Ok(out)
}

/// Stalks of `R^qΨ(Λ)` after the normalization `[d − 1]((d − 1)/2)`:
/// `R^q Ψ = ∧^q R^1 Ψ` with `R^1 Ψ` of rank `♯I − 1` and twist `(−1)`.
pub fn psi_stalk_oracle(i: &Stratum, d: i32) -> Result<StalkTable> {
    let mut out = StalkTable::empty(*i, d)?;
    let n = i.len() - 1;
    for q in 0..=n {
        out.add(q as i32, d - 1 - 2 * q as i32, binomial(n, q));
    }
    Ok(out)
}

/// Cochain complex with terms at positions `k..=m`; the differential out of
/// position `p` is `differentials[p - k]`, of shape `dim(p + 1) × dim(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ComplexWire", try_from = "ComplexWire")]
pub struct ChainComplex {
    m: u32,
    k: u32,
    dims: Vec<usize>,
    differentials: Vec<IntMatrix>,
}

impl ChainComplex {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn positions(&self) -> std::ops::RangeInclusive<u32> {
        self.k..=self.m
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differential(&self, p: u32) -> Option<&IntMatrix> {
        p.checked_sub(self.k)
            .and_then(|i| self.differentials.get(i as usize))
    }

    pub fn differentials(&self) -> &[IntMatrix] {
        &self.differentials
    }

    /// `D_{p+1} · D_p = 0` for every consecutive pair, over ℤ.
    pub fn squares_to_zero(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|w| w[1].mul(&w[0]).map(|m| m.is_zero()).unwrap_or(false))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &n)| if i % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, i64)>,
}

#[derive(Serialize, Deserialize)]
struct ComplexWire {
    m: u32,
    k: u32,
    terms: Vec<usize>,
    differentials: Vec<MatrixWire>,
}

impl From<ChainComplex> for ComplexWire {
    fn from(c: ChainComplex) -> Self {
        ComplexWire {
            m: c.m,
            k: c.k,
            terms: c.dims,
            differentials: c
                .differentials
                .iter()
                .map(|d| MatrixWire {
                    rows: d.rows(),
                    cols: d.cols(),
                    entries: d.nonzero().collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<ComplexWire> for ChainComplex {
    type Error = Error;
    fn try_from(w: ComplexWire) -> Result<Self> {
        if w.k > w.m || w.terms.len() != (w.m - w.k + 1) as usize {
            return Err(Error::Malformed(
                "complex positions and terms disagree".into(),
            ));
        }
        let mut differentials = Vec::new();
        for (i, dw) in w.differentials.into_iter().enumerate() {
            if dw.cols != w.terms[i] || dw.rows != w.terms[i + 1] {
                return Err(Error::Malformed(format!(
                    "differential {i} has the wrong shape"
                )));
            }
            let mut mat = IntMatrix::zeros(dw.rows, dw.cols);
            for (r, c, v) in dw.entries {
                if r >= dw.rows || c >= dw.cols {
                    return Err(Error::Malformed("matrix entry out of range".into()));
                }
                mat.set(r, c, v);
            }
            differentials.push(mat);
        }
        if differentials.len() + 1 != w.terms.len() {
            return Err(Error::Malformed("wrong number of differentials".into()));
        }
        Ok(ChainComplex {
            m: w.m,
            k: w.k,
            dims: w.terms,
            differentials,
        })
    }
}

/// Size-`p` subsets of `{0, …, m−1}` as bitmasks, lexicographic on sorted
/// member lists.
fn subsets_lex(m: u32, p: u32) -> Vec<u32> {
    fn go(start: u32, m: u32, left: u32, acc: u32, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for x in start..=(m - left) {
            go(x + 1, m, left - 1, acc | (1 << x), out);
        }
    }
    let mut out = Vec::new();
    if p <= m {
        go(0, m, p, 0, &mut out);
    }
    out
}

/// Signed inclusion matrix from size-`p` to size-`p+1` subsets: the entry at
/// `(K, J)` with `K = J ⊔ {x}` is `(−1)^{#{j ∈ J : j < x}}`.
fn inclusion_matrix(sources: &[u32], targets: &[u32]) -> IntMatrix {
    let mut mat = IntMatrix::zeros(targets.len(), sources.len());
    for (row, &big) in targets.iter().enumerate() {
        for (col, &small) in sources.iter().enumerate() {
            if small & !big != 0 {
                continue;
            }
            let added = big & !small;
            if added.count_ones() != 1 {
                continue;
            }
            let below = (small & (added - 1)).count_ones();
            mat.set(row, col, if below % 2 == 0 { 1 } else { -1 });
        }
    }
    mat
}

fn subset_complex(m: u32, k: u32, bases: Vec<Vec<u32>>) -> ChainComplex {
    let dims = bases.iter().map(Vec::len).collect();
    let differentials = bases
        .windows(2)
        .map(|w| inclusion_matrix(&w[0], &w[1]))
        .collect();
    ChainComplex {
        m,
        k,
        dims,
        differentials,
    }
}

/// Terms are spanned by the size-`p` subsets of an `m`-set, `k ≤ p ≤ m`, with
/// the signed inclusion differential.
pub fn koszul_complex(m: u32, k: u32) -> Result<ChainComplex> {
    if k < 1 || k > m || m > 31 {
        return Err(Error::Index(format!(
            "koszul complex needs 1 <= k <= m <= 31, got m={m} k={k}"
        )));
    }
    Ok(subset_complex(
        m,
        k,
        (k..=m).map(|p| subsets_lex(m, p)).collect(),
    ))
}

/// The same complex including the empty subset at position 0; exact for `n ≥ 1`.
pub fn augmented_koszul_complex(n: u32) -> Result<ChainComplex> {
    if !(1..=31).contains(&n) {
        return Err(Error::Index(format!(
            "augmented complex needs 1 <= n <= 31, got {n}"
        )));
    }
    Ok(subset_complex(
        n,
        0,
        (0..=n).map(|p| subsets_lex(n, p)).collect(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyProfile {
    /// First position of the complex; `dims[i]` is the cohomology at `first + i`.
    pub first: u32,
    pub dims: Vec<usize>,
    pub char: Characteristic,
}

impl CohomologyProfile {
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &n)| if i % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}

pub fn complex_cohomology(c: &ChainComplex, char: Characteristic) -> Result<CohomologyProfile> {
    if !c.squares_to_zero() {
        return Err(Error::Index("differentials do not square to zero".into()));
    }
    let ranks: Vec<usize> = c.differentials.iter().map(|d| rank(d, char)).collect();
    let dims = c
        .dims
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let out = ranks.get(i).copied().unwrap_or(0);
            let inc = if i > 0 { ranks[i - 1] } else { 0 };
            n - out - inc
        })
        .collect();
    Ok(CohomologyProfile {
        first: c.k,
        dims,
        char,
    })
}

/// One row of the `E_1` page: the stalks at `z_I` of the graded pieces of the
/// block `gr^k_!`, all carrying the same twist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E1Row {
    pub block: u32,
    pub twist: i32,
    /// Strata indexing the basis at each position, lexicographic.
    pub basis: Vec<Vec<Vec<u32>>>,
    pub complex: ChainComplex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E1Page {
    pub r: u32,
    #[serde(rename = "I")]
    pub stratum: Vec<u32>,
    pub d: i32,
    pub rows: Vec<E1Row>,
}

/// Assembles the `E_1` page at a point of `Y_I^0` from the graded pieces of
/// the stratification filtration of Ψ. Blocks `k > ♯I` have no stalk there and
/// are omitted; differentials between blocks vanish.
pub fn e1_page(i: &Stratum, d: i32) -> Result<E1Page> {
    let r = i.r();
    if d < r as i32 {
        return Err(Error::DimensionTooSmall { d, r });
    }
    let filtration = psi_filtration(r)?;
    let members: Vec<u32> = i.to_vec();
    let mut rows = Vec::new();
    for block in filtration.blocks() {
        let mut by_position: BTreeMap<u32, Vec<Stratum>> = BTreeMap::new();
        let mut twist = None;
        for layer in &filtration.layers()[block.from..=block.to] {
            for (piece, _) in layer.pieces() {
                let stalk = ic_stalk(piece, i, d)?;
                for ((q, t), _) in stalk.entries() {
                    if *twist.get_or_insert(t) != t {
                        return Err(Error::Index(format!(
                            "mixed twists in block {}",
                            block.name
                        )));
                    }
                    by_position
                        .entry(q as u32 + 1)
                        .or_default()
                        .push(piece.stratum);
                }
            }
        }
        let Some(twist) = twist else { continue };
        let k = *by_position.keys().next().unwrap();
        let m = *by_position.keys().last().unwrap();
        let mut basis = Vec::new();
        let mut masks = Vec::new();
        for p in k..=m {
            let mut strata = by_position.remove(&p).unwrap_or_default();
            strata.sort();
            // Relabel through the order-preserving bijection I ≅ {0, …, ♯I − 1}.
            masks.push(
                strata
                    .iter()
                    .map(|s| {
                        s.members()
                            .map(|x| 1u32 << members.iter().position(|&y| y == x).unwrap())
                            .fold(0, |a, b| a | b)
                    })
                    .collect::<Vec<u32>>(),
            );
            basis.push(strata.iter().map(Stratum::to_vec).collect());
        }
        rows.push(E1Row {
            block: rows.len() as u32 + 1,
            twist,
            basis,
            complex: subset_complex(m, k, masks),
        });
    }
    Ok(E1Page {
        r,
        stratum: members,
        d,
        rows,
    })
}

/// Cohomology of each `E_1` row, assembled into a stalk table. The page
/// degenerates at `E_2`, so this is the stalk of Ψ at `z_I`.
pub fn e2_abutment(i: &Stratum, d: i32, char: Characteristic) -> Result<StalkTable> {
    let page = e1_page(i, d)?;
    let mut out = StalkTable::empty(*i, d)?;
    for row in &page.rows {
        let profile = complex_cohomology(&row.complex, char)?;
        for (offset, &dim) in profile.dims.iter().enumerate() {
            let position = profile.first as i32 + offset as i32;
            out.add(position - 1, row.twist, dim as i64);
        }
    }
    Ok(out)
}
