//! A fixed catalog of Grothendieck-group identities, each checked by
//! evaluating both sides exactly for every admissible index choice.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::class::{pi_class, psi_class, star_to_ic, Generator, KClass, ShriekClass};
use super::stratum::{all_strata, binomial, check_branches, strata_of_size};
use super::table::SheafTable;
use crate::error::{Error, Result};
use crate::stalks::psi_stalk_oracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `1 = Σ_{k=1}^{δ} (−1)^{k−1} C(δ, k)`.
    AlternatingBinomial,
    /// Level-`h` intermediate extension in the `j^{(h+k)}_!` basis.
    LevelIcInShriek,
    /// Level-`h` extension by zero in the intermediate-extension basis.
    LevelShriekInIc,
    /// Class identity of `0 → IC^{(h+1)}_s(1/2) → j_{≠s,!} j_{≠s}^* P → P → 0`.
    AvoidBranch,
    /// Class identity of `0 → j_{I⁺∖J₀,!} j^* P_I → P_I → IC_{J₀}(1/2) → 0`.
    KernelOfShriek,
    /// `ᵖh⁰ i_J^* j_{I,*} Λ_I ≅ j_{J,*} Λ_J(−1/2)` for `♯J∖I = 1`.
    RestrictedStar,
    /// `i_{I,*} i_I^* Ψ ≅ j_{I,*} j_I^* Ψ` on stratum tables.
    RestrictionIsDirectImage,
    /// The class of Ψ reproduces the stalks of `R^qΨ` on every stratum.
    PsiStalks,
}

impl Identity {
    pub const ALL: [Identity; 8] = [
        Identity::AlternatingBinomial,
        Identity::LevelIcInShriek,
        Identity::LevelShriekInIc,
        Identity::AvoidBranch,
        Identity::KernelOfShriek,
        Identity::RestrictedStar,
        Identity::RestrictionIsDirectImage,
        Identity::PsiStalks,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::AlternatingBinomial => "binom",
            Identity::LevelIcInShriek => "eq-jh!*",
            Identity::LevelShriekInIc => "eq-jh!",
            Identity::AvoidBranch => "lem-important",
            Identity::KernelOfShriek => "lem-jneq!",
            Identity::RestrictedStar => "prop-ij",
            Identity::RestrictionIsDirectImage => "datlem",
            Identity::PsiStalks => "psi-formula",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub r: u32,
    pub passed: bool,
    pub instances: usize,
    pub counterexample: Option<Counterexample>,
}

struct Checker {
    instances: usize,
    failure: Option<Counterexample>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            instances: 0,
            failure: None,
        }
    }

    fn check<T: PartialEq + fmt::Display>(
        &mut self,
        instance: impl FnOnce() -> String,
        lhs: &T,
        rhs: &T,
    ) {
        self.instances += 1;
        if self.failure.is_none() && lhs != rhs {
            self.failure = Some(Counterexample {
                instance: instance(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    fn check_bool(&mut self, instance: impl FnOnce() -> String, ok: bool, detail: &str) {
        self.instances += 1;
        if self.failure.is_none() && !ok {
            self.failure = Some(Counterexample {
                instance: instance(),
                lhs: detail.to_string(),
                rhs: "true".to_string(),
            });
        }
    }

    fn finish(self, id: Identity, r: u32) -> IdentityReport {
        IdentityReport {
            identity: id.name().to_string(),
            r,
            passed: self.failure.is_none(),
            instances: self.instances,
            counterexample: self.failure,
        }
    }
}

pub fn verify_identity_named(name: &str, r: u32) -> Result<IdentityReport> {
    verify_identity(name.parse()?, r)
}

pub fn verify_identity(id: Identity, r: u32) -> Result<IdentityReport> {
    check_branches(r)?;
    let mut c = Checker::new();
    match id {
        Identity::AlternatingBinomial => alternating_binomial(&mut c, r),
        Identity::LevelIcInShriek => level_ic_in_shriek(&mut c, r)?,
        Identity::LevelShriekInIc => level_shriek_in_ic(&mut c, r)?,
        Identity::AvoidBranch => avoid_branch(&mut c, r)?,
        Identity::KernelOfShriek => kernel_of_shriek(&mut c, r)?,
        Identity::RestrictedStar => restricted_star(&mut c, r)?,
        Identity::RestrictionIsDirectImage => restriction_is_direct_image(&mut c, r)?,
        Identity::PsiStalks => psi_stalks(&mut c, r)?,
    }
    Ok(c.finish(id, r))
}

pub fn verify_all(r: u32) -> Result<Vec<IdentityReport>> {
    Identity::ALL
        .into_iter()
        .map(|id| verify_identity(id, r))
        .collect()
}

/// Dimensions on which the d-independent table identities are evaluated.
fn dimensions(r: u32) -> [i32; 2] {
    [r as i32, r as i32 + 1]
}

fn level_sum(r: u32, h: u32, twist: i32) -> Result<Vec<Generator>> {
    Ok(strata_of_size(r, h)?
        .into_iter()
        .map(|s| Generator::new(s, twist))
        .collect())
}

fn alternating_binomial(c: &mut Checker, r: u32) {
    for delta in 1..=r {
        let sum: i64 = (1..=delta)
            .map(|k| {
                if k % 2 == 1 {
                    binomial(delta, k)
                } else {
                    -binomial(delta, k)
                }
            })
            .sum();
        c.check(|| format!("delta={delta}"), &sum, &1);
    }
}

fn level_ic_in_shriek(c: &mut Checker, r: u32) -> Result<()> {
    for h in 1..=r {
        let lhs = KClass::from_terms(r, level_sum(r, h, 0)?.into_iter().map(|g| (g, 1)))?;
        let mut rhs = ShriekClass::zero(r);
        for k in 0..=(r - h) {
            let coeff = binomial(h + k, h) * if k % 2 == 0 { 1 } else { -1 };
            for g in level_sum(r, h + k, k as i32)? {
                rhs.add_term(g, coeff);
            }
        }
        c.check(|| format!("h={h} (shriek basis)"), &lhs.to_shriek(), &rhs);
        c.check(|| format!("h={h} (ic basis)"), &lhs, &rhs.to_ic());
    }
    Ok(())
}

fn level_shriek_in_ic(c: &mut Checker, r: u32) -> Result<()> {
    for h in 1..=r {
        let lhs = ShriekClass::from_terms(r, level_sum(r, h, 0)?.into_iter().map(|g| (g, 1)))?;
        let mut rhs = KClass::zero(r);
        for k in 0..=(r - h) {
            for g in level_sum(r, h + k, k as i32)? {
                rhs.add_term(g, binomial(h + k, h));
            }
        }
        c.check(|| format!("h={h}"), &lhs.to_ic(), &rhs);
        c.check(|| format!("h={h} (shriek basis)"), &lhs, &rhs.to_shriek());
    }
    Ok(())
}

fn avoid_branch(c: &mut Checker, r: u32) -> Result<()> {
    for d in dimensions(r) {
        for h in 1..=r {
            for s in 1..=r {
                let p = KClass::from_terms(
                    r,
                    level_sum(r, h, 0)?
                        .into_iter()
                        .filter(|g| !g.stratum.contains(s))
                        .map(|g| (g, 1)),
                )?;
                let middle = SheafTable::from_class(&p, d)?
                    .restricted(|k| !k.contains(s))
                    .decompose();
                let sub = KClass::from_terms(
                    r,
                    level_sum(r, h + 1, 1)?
                        .into_iter()
                        .filter(|g| g.stratum.contains(s))
                        .map(|g| (g, 1)),
                )?;
                let instance = || format!("d={d} h={h} s={s}");
                c.check(instance, &middle, &(&p + &sub));
                c.check_bool(
                    instance,
                    middle.is_zero() || middle.is_effective(),
                    "effective middle term",
                );
            }
        }
    }
    Ok(())
}

fn kernel_of_shriek(c: &mut Checker, r: u32) -> Result<()> {
    for d in dimensions(r) {
        for i in all_strata(r)? {
            let p = pi_class(&i);
            let table = SheafTable::from_class(&p, d)?;

            // P_I is the constant sheaf Λ[d − ♯I − 1]((d − ♯I)/2) on Y_{I⁺}.
            let mut constant = SheafTable::empty(r, d)?;
            for k in i.supersets().into_iter().filter(|k| *k != i) {
                constant.add_entry(k, i.len() as i32 + 1, d - i.len() as i32, 1);
            }
            c.check_bool(
                || format!("d={d} I={i} constant on Y_I+"),
                table.reduced() == constant,
                "P_I table is the shifted constant sheaf",
            );

            for t in (1..=r).filter(|t| !i.contains(*t)) {
                let j0 = i.with_member(t)?;
                let sub = table.restricted(|k| !k.contains(t)).decompose();
                let quotient = KClass::single(Generator::new(j0, 1));
                let instance = || format!("d={d} I={i} J0={j0}");
                c.check(instance, &p, &(&sub + &quotient));
                c.check_bool(
                    instance,
                    sub.is_zero() || sub.is_effective(),
                    "effective kernel",
                );
            }
        }
    }
    Ok(())
}

fn restricted_star(c: &mut Checker, r: u32) -> Result<()> {
    for d in dimensions(r) {
        for i in all_strata(r)? {
            let star = star_to_ic(&i, 0);
            let table = SheafTable::from_class(&star, d)?;
            for t in (1..=r).filter(|t| !i.contains(*t)) {
                let j = i.with_member(t)?;
                let instance = || format!("d={d} I={i} J={j}");
                // Constituents of j_{I,*}Λ_I supported on Y_J form ᵖh⁰ i_J^*.
                let top = star.restricted(|h| j.is_subset(h));
                c.check(instance, &top, &star_to_ic(&j, -1));
                // The full restriction also carries ᵖh^{-1} = j_{J,*}Λ_J(1/2) in degree −1.
                let restriction = table.restricted(|k| j.is_subset(k)).decompose();
                c.check(
                    instance,
                    &restriction,
                    &(&star_to_ic(&j, -1) - &star_to_ic(&j, 1)),
                );
            }
        }
    }
    Ok(())
}

fn restriction_is_direct_image(c: &mut Checker, r: u32) -> Result<()> {
    let psi = psi_class(r)?;
    for d in dimensions(r) {
        let psi_table = SheafTable::from_class(&psi, d)?;
        for i in all_strata(r)? {
            let lhs = psi_table.restricted(|k| i.is_subset(k));
            let mut rhs = SheafTable::empty(r, d)?;
            let size = i.len() as i32;
            // Each entry Λ[d − m](t/2) on Y_I^0 is Λ_I((t − d + ♯I)/2) shifted by ♯I − m.
            for ((m, t), mult) in psi_table.at(&i) {
                let expanded = SheafTable::from_class(&star_to_ic(&i, t - d + size), d)?;
                rhs.add_table(&expanded.shifted(m - size).scaled(mult))?;
            }
            let instance = || format!("d={d} I={i}");
            c.check_bool(
                instance,
                lhs.reduced() == rhs.reduced(),
                "reduced tables agree entry by entry",
            );
            c.check_bool(instance, lhs.same_class(&rhs), "tables agree in K-theory");
        }
    }
    Ok(())
}

fn psi_stalks(c: &mut Checker, r: u32) -> Result<()> {
    let psi = psi_class(r)?;
    for d in dimensions(r) {
        let table = SheafTable::from_class(&psi, d)?.reduced();
        for i in all_strata(r)? {
            let oracle = psi_stalk_oracle(&i, d)?;
            let expected: std::collections::BTreeMap<(i32, i32), i64> = oracle
                .entries()
                .map(|((q, t), m)| ((q + 1, t), m))
                .collect();
            c.check_bool(
                || format!("d={d} I={i}"),
                table.at(&i) == expected,
                "reduced stalk table equals the R^qΨ ranks",
            );
        }
    }
    Ok(())
}
