//! Degree bounds for the cohomology of character-twisted nearby cycles.
//!
//! A character of the torus factoring through the coordinates in `I` only
//! sees the strata `J ⊆ I`. Assuming the open strata behave like affine
//! varieties, the cohomology of `IC_J χ` sits in degrees `|i| ≤ ♯I − ♯J`,
//! proved by descending induction on `♯J`. Degrees are normalized so that
//! the middle degree is 0.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::psi_filtration;
use crate::kgroup::{all_strata, psi_class, KClass, Stratum};

/// A character up to the only data that matters here: the set of branch
/// coordinates it factors through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CharacterDatum {
    support: Stratum,
    generic: bool,
}

impl CharacterDatum {
    /// Fails when the `generic` flag disagrees with the support size.
    pub fn new(support: Stratum, generic: bool) -> Result<Self> {
        if generic != (support.len() == 1) {
            return Err(Error::Character(format!(
                "a character supported on {support} is {}generic",
                if generic { "not " } else { "" }
            )));
        }
        Ok(CharacterDatum { support, generic })
    }

    pub fn from_support(support: Stratum) -> Self {
        CharacterDatum {
            support,
            generic: support.len() == 1,
        }
    }

    /// The trivial character factors through every coordinate.
    pub fn trivial(r: u32) -> Result<Self> {
        Ok(CharacterDatum::from_support(Stratum::full(r)?))
    }

    pub fn support(&self) -> Stratum {
        self.support
    }

    pub fn generic(&self) -> bool {
        self.generic
    }

    pub fn r(&self) -> u32 {
        self.support.r()
    }
}

/// A closed range of degrees, or nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DegreeInterval {
    Empty,
    Range { lo: i32, hi: i32 },
}

impl DegreeInterval {
    pub fn new(lo: i32, hi: i32) -> Self {
        if lo <= hi {
            DegreeInterval::Range { lo, hi }
        } else {
            DegreeInterval::Empty
        }
    }

    /// `[−n, n]`.
    pub fn symmetric(n: i32) -> Self {
        DegreeInterval::new(-n, n)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, DegreeInterval::Empty)
    }

    pub fn bounds(&self) -> Option<(i32, i32)> {
        match *self {
            DegreeInterval::Empty => None,
            DegreeInterval::Range { lo, hi } => Some((lo, hi)),
        }
    }

    pub fn contains(&self, i: i32) -> bool {
        self.bounds().is_some_and(|(lo, hi)| lo <= i && i <= hi)
    }

    pub fn hull(&self, other: &DegreeInterval) -> DegreeInterval {
        match (self.bounds(), other.bounds()) {
            (None, _) => *other,
            (_, None) => *self,
            (Some((a, b)), Some((c, d))) => DegreeInterval::new(a.min(c), b.max(d)),
        }
    }

    pub fn is_subset(&self, other: &DegreeInterval) -> bool {
        match (self.bounds(), other.bounds()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some((a, b)), Some((c, d))) => c <= a && b <= d,
        }
    }

    /// Image under Verdier duality, `i ↦ −i`.
    pub fn dual(&self) -> DegreeInterval {
        match self.bounds() {
            None => DegreeInterval::Empty,
            Some((lo, hi)) => DegreeInterval::new(-hi, -lo),
        }
    }
}

impl fmt::Display for DegreeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bounds() {
            None => f.write_str("∅"),
            Some((lo, hi)) => write!(f, "[{lo},{hi}]"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalWire {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    lo: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    hi: Option<i32>,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    empty: bool,
}

impl From<DegreeInterval> for IntervalWire {
    fn from(d: DegreeInterval) -> Self {
        match d.bounds() {
            None => IntervalWire {
                lo: None,
                hi: None,
                empty: true,
            },
            Some((lo, hi)) => IntervalWire {
                lo: Some(lo),
                hi: Some(hi),
                empty: false,
            },
        }
    }
}

impl TryFrom<IntervalWire> for DegreeInterval {
    type Error = Error;
    fn try_from(w: IntervalWire) -> Result<Self> {
        match (w.lo, w.hi, w.empty) {
            (None, None, true) => Ok(DegreeInterval::Empty),
            (Some(lo), Some(hi), false) if lo <= hi => Ok(DegreeInterval::Range { lo, hi }),
            _ => Err(Error::Malformed(
                "an interval needs lo <= hi or empty: true".into(),
            )),
        }
    }
}

impl Serialize for DegreeInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IntervalWire::from(*self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DegreeInterval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        DegreeInterval::try_from(IntervalWire::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Strata on which `Ψ_χ` can be nonzero: every nonempty `J ⊆ I`.
pub fn chi_support_strata(chi: &CharacterDatum) -> Vec<Stratum> {
    chi.support.subsets()
}

/// `[Ψ_χ]`: the constituents of `[Ψ]` on strata inside the support.
pub fn psi_chi_class(chi: &CharacterDatum) -> Result<KClass> {
    let support = chi.support;
    Ok(psi_class(chi.r())?.restricted(|j| j.is_subset(&support)))
}

/// Descending induction on `♯J` for `J ⊆ I`.
///
/// The weight filtration of `j_{J,!} χ` has `IC_J χ` as top quotient and a
/// kernel built from the `IC_K χ` with `J ⊊ K ⊆ I`. Affineness kills
/// `H^i(j_{J,!} χ)` for `i < 0`, so the long exact sequence gives
/// `H^i(IC_J χ) = 0` below `min(0, lo − 1)` where `lo` bounds the kernel
/// from below. Duality reflects this to the upper bound.
pub fn run_vanishing_induction(chi: &CharacterDatum) -> Result<BTreeMap<Stratum, DegreeInterval>> {
    let support = chi.support;
    let mut out: BTreeMap<Stratum, DegreeInterval> = all_strata(chi.r())?
        .into_iter()
        .map(|j| (j, DegreeInterval::Empty))
        .collect();
    let mut inside = chi_support_strata(chi);
    inside.sort_by_key(|j| std::cmp::Reverse(j.len()));
    for j in inside {
        let kernel = out
            .iter()
            .filter(|(k, _)| j.is_subset(k) && **k != j && k.is_subset(&support))
            .fold(DegreeInterval::Empty, |acc, (_, iv)| acc.hull(iv));
        let lo = match kernel.bounds() {
            None => 0,
            Some((klo, _)) => 0.min(klo - 1),
        };
        // IC_J χ is self-dual up to the dual character, so the bound is symmetric.
        out.insert(j, DegreeInterval::new(lo, -lo));
    }
    Ok(out)
}

/// Outer bound on the degrees of `H^*(Ψ_χ)`: the spectral sequence of the
/// refined stratification filtration has `E_1` terms only where a graded
/// piece allows them, so the abutment lies in the hull of those ranges.
pub fn psi_chi_concentration(chi: &CharacterDatum) -> Result<DegreeInterval> {
    let intervals = run_vanishing_induction(chi)?;
    let filtration = psi_filtration(chi.r())?;
    let mut out = DegreeInterval::Empty;
    for layer in filtration.layers() {
        for (piece, _) in layer.pieces() {
            out = out.hull(&intervals[&piece.stratum]);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumInterval {
    pub stratum: Vec<u32>,
    #[serde(flatten)]
    pub interval: DegreeInterval,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub r: u32,
    pub support: Vec<u32>,
    pub generic: bool,
    pub intervals: Vec<StratumInterval>,
    pub concentration: DegreeInterval,
}

pub fn vanishing_report(chi: &CharacterDatum) -> Result<VanishingReport> {
    let intervals = run_vanishing_induction(chi)?
        .into_iter()
        .map(|(j, interval)| StratumInterval {
            stratum: j.to_vec(),
            interval,
        })
        .collect();
    Ok(VanishingReport {
        r: chi.r(),
        support: chi.support.to_vec(),
        generic: chi.generic,
        intervals,
        concentration: psi_chi_concentration(chi)?,
    })
}
