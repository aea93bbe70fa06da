//! Graded data of the filtrations carried by Ψ and by the extensions
//! `j_{I,!}` / `j_{I,*}`, and the order constraints that non-split
//! extensions impose on any filtration with irreducible graded pieces.
//!
//! Layers are listed socle first: index 0 is the deepest subobject and the
//! last layer is the top quotient.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kgroup::{
    binomial, psi_class, psi_twist, strata_of_size, Generator, IcClass, KClass, Stratum,
};

/// One graded piece of a filtration: a finite multiset of irreducibles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedLayer {
    pieces: BTreeMap<IcClass, u64>,
}

impl GradedLayer {
    pub fn new() -> Self {
        GradedLayer::default()
    }

    pub fn add(&mut self, piece: IcClass, mult: u64) {
        if mult > 0 {
            *self.pieces.entry(piece).or_insert(0) += mult;
        }
    }

    pub fn with(mut self, piece: IcClass, mult: u64) -> Self {
        self.add(piece, mult);
        self
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&IcClass, u64)> {
        self.pieces.iter().map(|(g, &m)| (g, m))
    }

    pub fn mult(&self, piece: &IcClass) -> u64 {
        self.pieces.get(piece).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn dual(&self) -> Self {
        GradedLayer {
            pieces: self.pieces.iter().map(|(g, &m)| (g.dual(), m)).collect(),
        }
    }

    /// Adds `delta` to every twist numerator.
    pub fn twisted(&self, delta: i32) -> Self {
        GradedLayer {
            pieces: self
                .pieces
                .iter()
                .map(|(g, &m)| (Generator::new(g.stratum, g.twist + delta), m))
                .collect(),
        }
    }
}

impl fmt::Display for GradedLayer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, m) in self.pieces() {
            if !first {
                f.write_str(" ⊕ ")?;
            }
            first = false;
            if m != 1 {
                write!(f, "{m}·")?;
            }
            write!(f, "IC({g})")?;
        }
        Ok(())
    }
}

/// A named run of consecutive layers, `from..=to`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub name: String,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "FiltrationWire", try_from = "FiltrationWire")]
pub struct Filtration {
    label: String,
    r: u32,
    layers: Vec<GradedLayer>,
    blocks: Vec<Block>,
}

impl Filtration {
    /// Rejects empty layers, pieces from another configuration, and blocks
    /// that overlap, leave gaps, or run past the end.
    pub fn new(
        label: impl Into<String>,
        r: u32,
        layers: Vec<GradedLayer>,
        blocks: Vec<Block>,
    ) -> Result<Self> {
        crate::kgroup::stratum::check_branches(r)?;
        for (i, layer) in layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(Error::Filtration(format!("layer {i} is empty")));
            }
            if let Some((g, _)) = layer.pieces().find(|(g, _)| g.stratum.r() != r) {
                return Err(Error::MismatchedBranchCount {
                    left: r,
                    right: g.stratum.r(),
                });
            }
        }
        if !blocks.is_empty() {
            let mut next = 0;
            for b in &blocks {
                if b.from != next || b.to < b.from || b.to >= layers.len() {
                    return Err(Error::Filtration(format!(
                        "block {} does not tile the layers",
                        b.name
                    )));
                }
                next = b.to + 1;
            }
            if next != layers.len() {
                return Err(Error::Filtration("blocks do not cover every layer".into()));
            }
        }
        Ok(Filtration {
            label: label.into(),
            r,
            layers,
            blocks,
        })
    }

    pub fn empty(label: impl Into<String>, r: u32) -> Result<Self> {
        Filtration::new(label, r, Vec::new(), Vec::new())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn layers(&self) -> &[GradedLayer] {
        &self.layers
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_layers(&self, block: &Block) -> &[GradedLayer] {
        &self.layers[block.from..=block.to]
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// Layerwise Verdier dual with the order reversed; block names are kept.
    pub fn reversed_dual(&self, label: impl Into<String>) -> Filtration {
        let n = self.layers.len();
        Filtration {
            label: label.into(),
            r: self.r,
            layers: self.layers.iter().rev().map(GradedLayer::dual).collect(),
            blocks: self
                .blocks
                .iter()
                .rev()
                .map(|b| Block {
                    name: b.name.clone(),
                    from: n - 1 - b.to,
                    to: n - 1 - b.from,
                })
                .collect(),
        }
    }

    /// Exchanges layers `i` and `j`; the block structure is dropped.
    pub fn with_layers_swapped(&self, i: usize, j: usize) -> Result<Filtration> {
        if i >= self.len() || j >= self.len() {
            return Err(Error::Index(format!(
                "layers {i} and {j} out of 0..{}",
                self.len()
            )));
        }
        let mut layers = self.layers.clone();
        layers.swap(i, j);
        Ok(Filtration {
            label: format!("{} (swapped {i},{j})", self.label),
            r: self.r,
            layers,
            blocks: Vec::new(),
        })
    }

    /// Every piece that occurs, with its total multiplicity.
    pub fn pieces(&self) -> BTreeMap<IcClass, u64> {
        let mut out = BTreeMap::new();
        for layer in &self.layers {
            for (g, m) in layer.pieces() {
                *out.entry(*g).or_insert(0) += m;
            }
        }
        out
    }
}

impl fmt::Display for Filtration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (r = {}, socle first)", self.label, self.r)?;
        for (i, layer) in self.layers.iter().enumerate() {
            let block = self.blocks.iter().find(|b| b.from <= i && i <= b.to);
            match block {
                Some(b) => writeln!(f, "  {i:>3} [{}]  {layer}", b.name)?,
                None => writeln!(f, "  {i:>3}  {layer}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PieceWire {
    stratum: Vec<u32>,
    twist: i32,
    mult: u64,
}

#[derive(Serialize, Deserialize)]
struct FiltrationWire {
    label: String,
    r: u32,
    layers: Vec<Vec<PieceWire>>,
    blocks: Vec<Block>,
}

impl From<Filtration> for FiltrationWire {
    fn from(f: Filtration) -> Self {
        FiltrationWire {
            label: f.label,
            r: f.r,
            layers: f
                .layers
                .iter()
                .map(|l| {
                    l.pieces()
                        .map(|(g, mult)| PieceWire {
                            stratum: g.stratum.to_vec(),
                            twist: g.twist,
                            mult,
                        })
                        .collect()
                })
                .collect(),
            blocks: f.blocks,
        }
    }
}

impl TryFrom<FiltrationWire> for Filtration {
    type Error = Error;
    fn try_from(w: FiltrationWire) -> Result<Self> {
        let mut layers = Vec::with_capacity(w.layers.len());
        for lw in w.layers {
            let mut layer = GradedLayer::new();
            for p in lw {
                if p.mult == 0 {
                    return Err(Error::Malformed("piece with multiplicity 0".into()));
                }
                layer.add(
                    Generator::new(Stratum::new(p.stratum, w.r)?, p.twist),
                    p.mult,
                );
            }
            layers.push(layer);
        }
        Filtration::new(w.label, w.r, layers, w.blocks)
    }
}

fn level_layer(r: u32, h: u32, twist: i32, mult: u64) -> Result<GradedLayer> {
    let mut layer = GradedLayer::new();
    for j in strata_of_size(r, h)? {
        layer.add(Generator::new(j, twist), mult);
    }
    Ok(layer)
}

/// Weight filtration of `i_{I,*} j_{I,!} Λ_I`: for `k = r` down to `♯I` the
/// layer `⊕_{J ⊇ I, ♯J = k} IC(J; k − ♯I)`.
pub fn weight_filtration_shriek(i: &Stratum) -> Filtration {
    let base = i.len();
    let supersets = i.supersets();
    let mut layers = Vec::new();
    let mut blocks = Vec::new();
    for k in (base..=i.r()).rev() {
        let mut layer = GradedLayer::new();
        for j in supersets.iter().filter(|j| j.len() == k) {
            layer.add(Generator::new(*j, (k - base) as i32), 1);
        }
        blocks.push(Block {
            name: format!("gr^W_-{k}"),
            from: layers.len(),
            to: layers.len(),
        });
        layers.push(layer);
    }
    Filtration {
        label: format!("W(j_!,{i})"),
        r: i.r(),
        layers,
        blocks,
    }
}

/// Weight filtration of `i_{I,*} j_{I,*} Λ_I`: for `k = ♯I` up to `r` the
/// layer `⊕_{J ⊇ I, ♯J = k} IC(J; −(k − ♯I))`.
pub fn weight_cofiltration_star(i: &Stratum) -> Filtration {
    let mut f = weight_filtration_shriek(i).reversed_dual(format!("W(j_*,{i})"));
    for b in &mut f.blocks {
        b.name = b.name.replace("_-", "_");
    }
    f
}

/// The stratification filtration of Ψ refined inside each graded block:
/// block `gr^k_!` (`k = 1..r`) has layers `h = r` down to `k`, the level-`h`
/// layer being `⊕_{♯J=h} IC(J; h − 1 − 2(k − 1))`.
pub fn psi_filtration(r: u32) -> Result<Filtration> {
    crate::kgroup::stratum::check_branches(r)?;
    let mut layers = Vec::new();
    let mut blocks = Vec::new();
    for k in 1..=r {
        let from = layers.len();
        for h in (k..=r).rev() {
            layers.push(level_layer(r, h, psi_twist(h, k), 1)?);
        }
        blocks.push(Block {
            name: format!("gr^{k}_!"),
            from,
            to: layers.len() - 1,
        });
    }
    Ok(Filtration {
        label: format!("Fil_!(Psi), r={r}"),
        r,
        layers,
        blocks,
    })
}

/// The cofiltration of stratification of Ψ, socle first: block `cogr_{*,k}`
/// for `k = 1..r` has layers `h = r − k + 1` up to `r` with twist
/// `1 − h + 2(r − k)`. It coincides with the reversed dual of
/// [`psi_filtration`].
pub fn psi_cofiltration(r: u32) -> Result<Filtration> {
    crate::kgroup::stratum::check_branches(r)?;
    let ri = r as i32;
    let mut layers = Vec::new();
    let mut blocks = Vec::new();
    for k in 1..=r {
        let from = layers.len();
        for h in (r - k + 1)..=r {
            layers.push(level_layer(r, h, 1 - h as i32 + 2 * (ri - k as i32), 1)?);
        }
        blocks.push(Block {
            name: format!("cogr_*,{k}"),
            from,
            to: layers.len() - 1,
        });
    }
    Ok(Filtration {
        label: format!("coFil_*(Psi), r={r}"),
        r,
        layers,
        blocks,
    })
}

fn check_kh(k: u32, h: u32, r: u32) -> Result<()> {
    crate::kgroup::stratum::check_branches(r)?;
    if h < 1 || h > k || k > r {
        return Err(Error::Index(format!(
            "need 1 <= h <= k <= r, got k={k} h={h} r={r}"
        )));
    }
    Ok(())
}

/// `Fill^{−k}(gr^h_!(Ψ))`: the layers of block `h` at levels `i ≥ k`.
pub fn fill_piece(k: u32, h: u32, r: u32) -> Result<Filtration> {
    check_kh(k, h, r)?;
    let layers = (k..=r)
        .rev()
        .map(|i| level_layer(r, i, psi_twist(i, h), 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(Filtration {
        label: format!("Fill^-{k}(gr^{h}_!)"),
        r,
        layers,
        blocks: Vec::new(),
    })
}

/// Kernel `K(k, h)` of `j^{(k)}_! Λ^{(k)}` twisted onto `Fill^{−k}(gr^h_!)`:
/// levels `i = r` down to `k + 1`, each `IC^{(i)}` at twist
/// `i − 1 − 2(h − 1)` with multiplicity `C(i, k) − 1`.
pub fn kernel_k(k: u32, h: u32, r: u32) -> Result<Filtration> {
    check_kh(k, h, r)?;
    let layers = ((k + 1)..=r)
        .rev()
        .map(|i| level_layer(r, i, psi_twist(i, h), (binomial(i, k) - 1) as u64))
        .collect::<Result<Vec<_>>>()?;
    Ok(Filtration {
        label: format!("K({k},{h})"),
        r,
        layers,
        blocks: Vec::new(),
    })
}

/// `earlier` must sit in a strictly lower layer than `later`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub earlier: IcClass,
    pub later: IcClass,
}

impl Constraint {
    /// `+1` when the larger stratum comes first, `−1` otherwise.
    pub fn slope(&self) -> i32 {
        if self.earlier.stratum.len() > self.later.stratum.len() {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IC({}) < IC({})", self.earlier, self.later)
    }
}

#[derive(Serialize, Deserialize)]
struct EndWire {
    stratum: Vec<u32>,
    twist: i32,
}

#[derive(Serialize, Deserialize)]
struct ConstraintWire {
    r: u32,
    earlier: EndWire,
    later: EndWire,
}

impl Serialize for Constraint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let end = |g: &IcClass| EndWire {
            stratum: g.stratum.to_vec(),
            twist: g.twist,
        };
        ConstraintWire {
            r: self.earlier.stratum.r(),
            earlier: end(&self.earlier),
            later: end(&self.later),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Constraint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = ConstraintWire::deserialize(d)?;
        let end = |e: EndWire| Stratum::new(e.stratum, w.r).map(|s| Generator::new(s, e.twist));
        let earlier = end(w.earlier).map_err(serde::de::Error::custom)?;
        let later = end(w.later).map_err(serde::de::Error::custom)?;
        Ok(Constraint { earlier, later })
    }
}

/// Non-split extensions among the given pieces, for adjacent strata
/// `I ⊂ J` and any twist `δ`:
/// `IC(J; δ)` precedes `IC(I; δ − 1)`, and `IC(I; δ)` precedes `IC(J; δ − 1)`.
pub fn constraints_among<'a>(
    pieces: impl IntoIterator<Item = &'a IcClass>,
) -> BTreeSet<Constraint> {
    let present: BTreeSet<IcClass> = pieces.into_iter().copied().collect();
    let mut out = BTreeSet::new();
    for g in &present {
        for x in g.stratum.members() {
            let Ok(smaller) = Stratum::from_mask(g.stratum.mask() & !(1 << (x - 1)), g.stratum.r())
            else {
                continue;
            };
            let later = Generator::new(smaller, g.twist - 1);
            if present.contains(&later) {
                out.insert(Constraint { earlier: *g, later });
            }
        }
        for x in 1..=g.stratum.r() {
            if g.stratum.contains(x) {
                continue;
            }
            let later = Generator::new(
                g.stratum.with_member(x).expect("member in range"),
                g.twist - 1,
            );
            if present.contains(&later) {
                out.insert(Constraint { earlier: *g, later });
            }
        }
    }
    out
}

/// Constraints between constituents of Ψ.
pub fn constraints(r: u32) -> Result<BTreeSet<Constraint>> {
    let psi = psi_class(r)?;
    Ok(constraints_among(psi.terms().map(|(g, _)| g)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: Constraint,
    pub earlier_layer: usize,
    pub later_layer: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

/// Checks that every constraint whose two pieces both occur is respected.
///
/// Each piece must occur once, in a single layer with multiplicity one;
/// anything else is rejected instead of guessed at.
pub fn check_admissible(f: &Filtration, cs: &BTreeSet<Constraint>) -> Result<Admissibility> {
    let mut position = BTreeMap::new();
    for (i, layer) in f.layers.iter().enumerate() {
        for (g, m) in layer.pieces() {
            if m != 1 {
                return Err(Error::Filtration(format!(
                    "IC({g}) has multiplicity {m} in layer {i}"
                )));
            }
            if let Some(prev) = position.insert(*g, i) {
                return Err(Error::Filtration(format!(
                    "IC({g}) occurs in layers {prev} and {i}"
                )));
            }
        }
    }
    let mut checked = 0;
    let mut violations = Vec::new();
    for c in cs {
        let (Some(&a), Some(&b)) = (position.get(&c.earlier), position.get(&c.later)) else {
            continue;
        };
        checked += 1;
        if a >= b {
            violations.push(Violation {
                constraint: *c,
                earlier_layer: a,
                later_layer: b,
            });
        }
    }
    Ok(Admissibility {
        admissible: violations.is_empty(),
        checked,
        violations,
    })
}

/// Sum of all layers with multiplicities.
pub fn class_of(f: &Filtration) -> KClass {
    let mut out = KClass::zero(f.r);
    for layer in &f.layers {
        for (g, m) in layer.pieces() {
            out.add_term(*g, m as i64);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kgroup::shriek_to_ic;

    fn s(members: &[u32], r: u32) -> Stratum {
        Stratum::new(members.iter().copied(), r).unwrap()
    }

    fn ic(members: &[u32], r: u32, a: i32) -> IcClass {
        Generator::new(s(members, r), a)
    }

    fn layer(pieces: &[IcClass]) -> GradedLayer {
        pieces.iter().fold(GradedLayer::new(), |l, g| l.with(*g, 1))
    }

    #[test]
    fn weight_filtration_examples() {
        let f = weight_filtration_shriek(&s(&[1, 2], 2));
        assert_eq!(f.layers(), &[layer(&[ic(&[1, 2], 2, 0)])]);
        let f = weight_filtration_shriek(&s(&[1], 2));
        assert_eq!(
            f.layers(),
            &[layer(&[ic(&[1, 2], 2, 1)]), layer(&[ic(&[1], 2, 0)])]
        );
        let f = weight_filtration_shriek(&s(&[1], 3));
        assert_eq!(
            f.layers(),
            &[
                layer(&[ic(&[1, 2, 3], 3, 2)]),
                layer(&[ic(&[1, 2], 3, 1), ic(&[1, 3], 3, 1)]),
                layer(&[ic(&[1], 3, 0)]),
            ]
        );
        let f = weight_cofiltration_star(&s(&[1], 2));
        assert_eq!(
            f.layers(),
            &[layer(&[ic(&[1], 2, 0)]), layer(&[ic(&[1, 2], 2, -1)])]
        );
    }

    #[test]
    fn psi_filtration_r2() {
        let f = psi_filtration(2).unwrap();
        assert_eq!(
            f.layers(),
            &[
                layer(&[ic(&[1, 2], 2, 1)]),
                layer(&[ic(&[1], 2, 0), ic(&[2], 2, 0)]),
                layer(&[ic(&[1, 2], 2, -1)]),
            ]
        );
        assert_eq!(f.blocks().len(), 2);
        assert_eq!(
            f.blocks()[0],
            Block {
                name: "gr^1_!".into(),
                from: 0,
                to: 1
            }
        );
        assert_eq!(
            psi_filtration(1).unwrap().layers(),
            &[layer(&[ic(&[1], 1, 0)])]
        );
        assert!(psi_filtration(0).is_err());
    }

    #[test]
    fn later_blocks_are_lowered_tails_of_the_first() {
        for r in 1..=6 {
            let f = psi_filtration(r).unwrap();
            let first = f.block_layers(&f.blocks()[0]);
            for (idx, block) in f.blocks().iter().enumerate() {
                let k = idx + 1;
                let expected: Vec<GradedLayer> = first[..=(r as usize - k)]
                    .iter()
                    .map(|l| l.twisted(-2 * (k as i32 - 1)))
                    .collect();
                assert_eq!(f.block_layers(block), expected.as_slice());
            }
        }
    }

    #[test]
    fn cofiltration_is_reversed_dual() {
        for r in 1..=6 {
            let fil = psi_filtration(r).unwrap();
            let cofil = psi_cofiltration(r).unwrap();
            assert_eq!(cofil.layers(), fil.reversed_dual("x").layers());
            assert_eq!(class_of(&cofil), psi_class(r).unwrap());
        }
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_k(1, 1, 2).unwrap();
        assert_eq!(k.layers(), &[GradedLayer::new().with(ic(&[1, 2], 2, 1), 1)]);
        assert!(kernel_k(3, 2, 3).unwrap().is_empty());
        assert!(kernel_k(1, 2, 3).is_err());
        assert!(kernel_k(4, 1, 3).is_err());
    }

    #[test]
    fn constraints_r2() {
        let cs = constraints(2).unwrap();
        let expected: BTreeSet<Constraint> = [
            (ic(&[1, 2], 2, 1), ic(&[1], 2, 0)),
            (ic(&[1, 2], 2, 1), ic(&[2], 2, 0)),
            (ic(&[1], 2, 0), ic(&[1, 2], 2, -1)),
            (ic(&[2], 2, 0), ic(&[1, 2], 2, -1)),
        ]
        .into_iter()
        .map(|(earlier, later)| Constraint { earlier, later })
        .collect();
        assert_eq!(cs, expected);
        assert!(constraints(1).unwrap().is_empty());
    }

    #[test]
    fn admissibility_r2() {
        let f = psi_filtration(2).unwrap();
        let cs = constraints(2).unwrap();
        let ok = check_admissible(&f, &cs).unwrap();
        assert!(ok.admissible);
        assert_eq!(ok.checked, 4);
        let bad = check_admissible(&f.with_layers_swapped(0, 2).unwrap(), &cs).unwrap();
        assert_eq!(bad.violations.len(), 4);
    }

    #[test]
    fn duplicated_piece_is_rejected() {
        let g = ic(&[1], 2, 0);
        let f = Filtration::new("dup", 2, vec![layer(&[g]), layer(&[g])], Vec::new()).unwrap();
        assert!(matches!(
            check_admissible(&f, &BTreeSet::new()),
            Err(Error::Filtration(_))
        ));
        let f =
            Filtration::new("double", 2, vec![GradedLayer::new().with(g, 2)], Vec::new()).unwrap();
        assert!(check_admissible(&f, &BTreeSet::new()).is_err());
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        assert!(Filtration::new("e", 2, vec![GradedLayer::new()], Vec::new()).is_err());
        let l = layer(&[ic(&[1], 2, 0)]);
        let gap = vec![Block {
            name: "b".into(),
            from: 1,
            to: 1,
        }];
        assert!(Filtration::new("g", 2, vec![l.clone(), l.clone()], gap).is_err());
        assert!(Filtration::new("m", 3, vec![l], Vec::new()).is_err());
    }

    #[test]
    fn class_of_weight_filtration() {
        for i in crate::kgroup::all_strata(4).unwrap() {
            assert_eq!(class_of(&weight_filtration_shriek(&i)), shriek_to_ic(&i, 0));
        }
        assert!(class_of(&Filtration::empty("e", 3).unwrap()).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let f = psi_filtration(3).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<Filtration>(&text).unwrap(), f);
    }
}
