use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::stratum::{check_branches, strata_of_size, Stratum};
use crate::error::{Error, Result};

/// A stratum together with a Tate-twist numerator.
///
/// In the intermediate-extension basis `(J, a)` names the irreducible
/// perverse constituent `i_{J,*} ᵖj_{J,!*} Λ_J(a/2)`; in the shriek (resp.
/// star) basis the same label names `i_{J,*} j_{J,!} Λ_J(a/2)` (resp.
/// `i_{J,*} j_{J,*} Λ_J(a/2)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub stratum: Stratum,
    pub twist: i32,
}

/// An irreducible constituent `i_{J,*} ᵖj_{J,!*} Λ_J(a/2)`.
pub type IcClass = Generator;

impl Generator {
    pub fn new(stratum: Stratum, twist: i32) -> Self {
        Generator { stratum, twist }
    }

    pub fn weight(&self) -> i32 {
        -self.twist
    }

    pub fn dual(&self) -> Self {
        Generator {
            stratum: self.stratum,
            twist: -self.twist,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.stratum, format_twist(self.twist))
    }
}

/// Renders a twist numerator `a` as the fraction `a/2`.
pub fn format_twist(a: i32) -> String {
    if a % 2 == 0 {
        (a / 2).to_string()
    } else {
        format!("{a}/2")
    }
}

/// Marker for a basis of the Grothendieck group.
pub trait Basis: Copy + fmt::Debug + Eq + Default {
    /// The basis that Verdier duality sends this one to.
    type Dual: Basis;
    const NAME: &'static str;
    const SYMBOL: &'static str;
}

/// Intermediate extensions `i_{J,*} ᵖj_{J,!*} Λ_J(a/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Ic;

/// Extensions by zero `i_{J,*} j_{J,!} Λ_J(a/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Shriek;

/// Full direct images `i_{J,*} j_{J,*} Λ_J(a/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Star;

impl Basis for Ic {
    type Dual = Ic;
    const NAME: &'static str = "ic";
    const SYMBOL: &'static str = "IC";
}

impl Basis for Shriek {
    type Dual = Star;
    const NAME: &'static str = "shriek";
    const SYMBOL: &'static str = "Sh";
}

impl Basis for Star {
    type Dual = Shriek;
    const NAME: &'static str = "star";
    const SYMBOL: &'static str = "St";
}

/// An integer combination of basis elements of one fixed basis.
///
/// Classes in different bases are different types, so mixing them requires
/// an explicit conversion through [`Class::to_ic`] or the `to_*` methods on
/// [`KClass`]. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Class<B: Basis> {
    r: u32,
    coeffs: BTreeMap<Generator, i64>,
    basis: PhantomData<B>,
}

pub type KClass = Class<Ic>;
pub type ShriekClass = Class<Shriek>;
pub type StarClass = Class<Star>;

impl<B: Basis> Class<B> {
    pub fn zero(r: u32) -> Self {
        Class {
            r,
            coeffs: BTreeMap::new(),
            basis: PhantomData,
        }
    }

    pub fn single(g: Generator) -> Self {
        let mut c = Self::zero(g.stratum.r());
        c.add_term(g, 1);
        c
    }

    pub fn from_terms<I: IntoIterator<Item = (Generator, i64)>>(r: u32, terms: I) -> Result<Self> {
        check_branches(r)?;
        let mut c = Self::zero(r);
        for (g, coeff) in terms {
            if g.stratum.r() != r {
                return Err(Error::MismatchedBranchCount {
                    left: r,
                    right: g.stratum.r(),
                });
            }
            c.add_term(g, coeff);
        }
        Ok(c)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn add_term(&mut self, g: Generator, coeff: i64) {
        debug_assert_eq!(g.stratum.r(), self.r);
        if coeff == 0 {
            return;
        }
        let entry = self.coeffs.entry(g).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.coeffs.remove(&g);
        }
    }

    pub fn coeff(&self, g: &Generator) -> i64 {
        self.coeffs.get(g).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Generator, i64)> {
        self.coeffs.iter().map(|(g, &c)| (g, c))
    }

    /// Number of distinct basis elements with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Every coefficient is positive (the class of an honest object).
    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|&c| c > 0)
    }

    pub fn scaled(&self, factor: i64) -> Self {
        let mut out = Self::zero(self.r);
        for (g, c) in self.terms() {
            out.add_term(*g, c * factor);
        }
        out
    }

    /// Multiplies by a Tate twist `(t/2)`.
    pub fn twisted(&self, t: i32) -> Self {
        let mut out = Self::zero(self.r);
        for (g, c) in self.terms() {
            out.add_term(Generator::new(g.stratum, g.twist + t), c);
        }
        out
    }

    /// Keeps only the terms whose stratum satisfies `keep`.
    pub fn restricted<F: Fn(&Stratum) -> bool>(&self, keep: F) -> Self {
        let mut out = Self::zero(self.r);
        for (g, c) in self.terms().filter(|(g, _)| keep(&g.stratum)) {
            out.add_term(*g, c);
        }
        out
    }

    /// Verdier duality: negates every twist and swaps `j_!` with `j_*`.
    pub fn dual(&self) -> Class<B::Dual> {
        let mut out = Class::<B::Dual>::zero(self.r);
        for (g, c) in self.terms() {
            out.add_term(g.dual(), c);
        }
        out
    }

    fn expand<T: Basis, F: Fn(&Generator) -> Class<T>>(&self, image: F) -> Class<T> {
        let mut out = Class::<T>::zero(self.r);
        for (g, c) in self.terms() {
            out += &image(g).scaled(c);
        }
        out
    }
}

impl ShriekClass {
    pub fn to_ic(&self) -> KClass {
        self.expand(|g| shriek_to_ic(&g.stratum, g.twist))
    }
}

impl StarClass {
    pub fn to_ic(&self) -> KClass {
        self.expand(|g| star_to_ic(&g.stratum, g.twist))
    }
}

impl KClass {
    pub fn to_ic(&self) -> KClass {
        self.clone()
    }

    pub fn to_shriek(&self) -> ShriekClass {
        self.expand(|g| ic_to_shriek(&g.stratum, g.twist))
    }

    pub fn to_star(&self) -> StarClass {
        self.expand(|g| ic_to_star(&g.stratum, g.twist))
    }
}

impl<'a, B: Basis> std::ops::AddAssign<&'a Class<B>> for Class<B> {
    fn add_assign(&mut self, rhs: &'a Class<B>) {
        assert_eq!(self.r, rhs.r, "adding classes with different branch counts");
        for (g, c) in rhs.terms() {
            self.add_term(*g, c);
        }
    }
}

impl<'a, B: Basis> std::ops::SubAssign<&'a Class<B>> for Class<B> {
    fn sub_assign(&mut self, rhs: &'a Class<B>) {
        assert_eq!(
            self.r, rhs.r,
            "subtracting classes with different branch counts"
        );
        for (g, c) in rhs.terms() {
            self.add_term(*g, -c);
        }
    }
}

impl<B: Basis> Add for &Class<B> {
    type Output = Class<B>;
    fn add(self, rhs: Self) -> Class<B> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<B: Basis> Sub for &Class<B> {
    type Output = Class<B>;
    fn sub(self, rhs: Self) -> Class<B> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<B: Basis> Add for Class<B> {
    type Output = Class<B>;
    fn add(self, rhs: Self) -> Class<B> {
        &self + &rhs
    }
}

impl<B: Basis> Sub for Class<B> {
    type Output = Class<B>;
    fn sub(self, rhs: Self) -> Class<B> {
        &self - &rhs
    }
}

impl<B: Basis> Neg for &Class<B> {
    type Output = Class<B>;
    fn neg(self) -> Class<B> {
        self.scaled(-1)
    }
}

impl<B: Basis> fmt::Display for Class<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (g, c)) in self.terms().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if i > 0 {
                f.write_str(" ")?;
            }
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{}({g})", B::SYMBOL)?;
            } else {
                write!(f, "{sign}{mag}·{}({g})", B::SYMBOL)?;
            }
        }
        Ok(())
    }
}

impl<B: Basis> fmt::Debug for Class<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Class<{}>[r={}] {}", B::NAME, self.r, self)
    }
}

/// `i_{I,*} j_{I,!} Λ_I(a/2) = Σ_{J ⊇ I} i_{J,*} ᵖj_{J,!*} Λ_J((a + ♯J − ♯I)/2)`.
pub fn shriek_to_ic(i: &Stratum, a: i32) -> KClass {
    let mut out = KClass::zero(i.r());
    for j in i.supersets() {
        let extra = (j.len() - i.len()) as i32;
        out.add_term(Generator::new(j, a + extra), 1);
    }
    out
}

/// Inverse of [`shriek_to_ic`]: inclusion–exclusion over the strata above `I`.
pub fn ic_to_shriek(i: &Stratum, a: i32) -> ShriekClass {
    let mut out = ShriekClass::zero(i.r());
    for j in i.supersets() {
        let extra = j.len() - i.len();
        let sign = if extra.is_multiple_of(2) { 1 } else { -1 };
        out.add_term(Generator::new(j, a + extra as i32), sign);
    }
    out
}

/// `i_{I,*} j_{I,*} Λ_I(a/2) = Σ_{J ⊇ I} i_{J,*} ᵖj_{J,!*} Λ_J((a − (♯J − ♯I))/2)`.
pub fn star_to_ic(i: &Stratum, a: i32) -> KClass {
    let mut out = KClass::zero(i.r());
    for j in i.supersets() {
        let extra = (j.len() - i.len()) as i32;
        out.add_term(Generator::new(j, a - extra), 1);
    }
    out
}

pub fn ic_to_star(i: &Stratum, a: i32) -> StarClass {
    let mut out = StarClass::zero(i.r());
    for j in i.supersets() {
        let extra = j.len() - i.len();
        let sign = if extra.is_multiple_of(2) { 1 } else { -1 };
        out.add_term(Generator::new(j, a - extra as i32), sign);
    }
    out
}

/// Class of the nearby-cycles perverse sheaf Ψ:
/// `Σ_{h=1}^{r} Σ_{k=1}^{h} Σ_{♯J=h} IC(J; h − 1 − 2(k − 1))`.
pub fn psi_class(r: u32) -> Result<KClass> {
    check_branches(r)?;
    let mut out = KClass::zero(r);
    for h in 1..=r {
        let level = strata_of_size(r, h)?;
        for k in 1..=h {
            let twist = psi_twist(h, k);
            for j in &level {
                out.add_term(Generator::new(*j, twist), 1);
            }
        }
    }
    Ok(out)
}

/// Twist numerator of the level-`h` pieces in the `k`-th graded block of Ψ.
pub fn psi_twist(h: u32, k: u32) -> i32 {
    h as i32 - 1 - 2 * (k as i32 - 1)
}

/// `P_I = ker(j_{I,!} Λ_I → ᵖj_{I,!*} Λ_I)`.
pub fn pi_class(i: &Stratum) -> KClass {
    let mut out = shriek_to_ic(i, 0);
    out.add_term(Generator::new(*i, 0), -1);
    out
}

#[derive(Serialize, Deserialize)]
pub(crate) struct TermWire {
    pub stratum: Vec<u32>,
    pub twist: i32,
    pub coeff: i64,
}

#[derive(Serialize, Deserialize)]
struct ClassWire {
    basis: String,
    r: u32,
    terms: Vec<TermWire>,
}

impl<B: Basis> Serialize for Class<B> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ClassWire {
            basis: B::NAME.to_string(),
            r: self.r,
            terms: self
                .terms()
                .map(|(g, c)| TermWire {
                    stratum: g.stratum.to_vec(),
                    twist: g.twist,
                    coeff: c,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, B: Basis> Deserialize<'de> for Class<B> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = ClassWire::deserialize(deserializer)?;
        if wire.basis != B::NAME {
            return Err(serde::de::Error::custom(format!(
                "expected a class in the {} basis, found {}",
                B::NAME,
                wire.basis
            )));
        }
        let terms = wire
            .terms
            .into_iter()
            .map(|t| Stratum::new(t.stratum, wire.r).map(|s| (Generator::new(s, t.twist), t.coeff)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Class::from_terms(wire.r, terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(members: &[u32], r: u32) -> Stratum {
        Stratum::new(members.iter().copied(), r).unwrap()
    }

    fn ic(members: &[u32], r: u32, a: i32) -> Generator {
        Generator::new(s(members, r), a)
    }

    #[test]
    fn shriek_expansion_small_cases() {
        assert_eq!(shriek_to_ic(&s(&[1], 1), 0), KClass::single(ic(&[1], 1, 0)));
        let expected =
            KClass::from_terms(2, [(ic(&[1], 2, 0), 1), (ic(&[1, 2], 2, 1), 1)]).unwrap();
        assert_eq!(shriek_to_ic(&s(&[1], 2), 0), expected);
    }

    #[test]
    fn ic_to_shriek_r2() {
        let expected =
            ShriekClass::from_terms(2, [(ic(&[1], 2, 0), 1), (ic(&[1, 2], 2, 1), -1)]).unwrap();
        assert_eq!(ic_to_shriek(&s(&[1], 2), 0), expected);
    }

    #[test]
    fn star_expansion_r2() {
        let expected =
            KClass::from_terms(2, [(ic(&[1], 2, 0), 1), (ic(&[1, 2], 2, -1), 1)]).unwrap();
        assert_eq!(star_to_ic(&s(&[1], 2), 0), expected);
        assert_eq!(
            star_to_ic(&s(&[1, 2], 2), 0),
            KClass::single(ic(&[1, 2], 2, 0))
        );
    }

    #[test]
    fn psi_small() {
        assert_eq!(psi_class(1).unwrap(), KClass::single(ic(&[1], 1, 0)));
        let expected = KClass::from_terms(
            2,
            [
                (ic(&[1], 2, 0), 1),
                (ic(&[2], 2, 0), 1),
                (ic(&[1, 2], 2, 1), 1),
                (ic(&[1, 2], 2, -1), 1),
            ],
        )
        .unwrap();
        assert_eq!(psi_class(2).unwrap(), expected);
        assert!(psi_class(0).is_err());
    }

    #[test]
    fn pi_examples() {
        assert!(pi_class(&Stratum::full(3).unwrap()).is_zero());
        assert_eq!(pi_class(&s(&[1], 2)), KClass::single(ic(&[1, 2], 2, 1)));
    }

    #[test]
    fn dual_swaps_shriek_and_star() {
        let i = s(&[2], 3);
        let d: StarClass = ic_to_shriek(&i, 1).dual();
        assert_eq!(d.to_ic(), KClass::single(ic(&[2], 3, -1)));
        assert_eq!(
            KClass::single(ic(&[1], 2, 3)).dual(),
            KClass::single(ic(&[1], 2, -3))
        );
    }

    #[test]
    fn zero_terms_are_dropped() {
        let g = ic(&[1], 2, 0);
        let mut c = KClass::single(g);
        c.add_term(g, -1);
        assert!(c.is_zero());
        assert_eq!(c.len(), 0);
    }

    #[test]
    fn display_uses_half_twists() {
        let c = KClass::from_terms(2, [(ic(&[1, 2], 2, 1), 1), (ic(&[1], 2, -2), -3)]).unwrap();
        assert_eq!(c.to_string(), "-3·IC({1};-1) +IC({1,2};1/2)");
    }

    #[test]
    fn mismatched_r_rejected() {
        assert!(KClass::from_terms(3, [(ic(&[1], 2, 0), 1)]).is_err());
    }
}
