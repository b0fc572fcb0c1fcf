//! Exact degree and residue calculus for filtered objects over a Fuchsian
//! curve with cusps.
//!
//! Jumps on the representation side are arbitrary rationals `β`; on the
//! bundle side they are reduced to the window `[0, 1)`. The residue table
//! relates one Jordan block across the three sides of the correspondence:
//!
//! | side            | jump    | eigenvalue            |
//! |-----------------|---------|-----------------------|
//! | representation  | `β`     | `exp(2πi(u + v i))`   |
//! | flat connection | `β + u` | `-(u + v i)`          |
//! | Higgs bundle    | `-u`    | `-(β + v i) / 2`      |
//!
//! with `u` normalized to `[0, 1)`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::{self, fract, in_unit_window, ComplexRational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Representation,
    Bundle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Jump {
    #[serde(with = "ratio::as_string")]
    pub value: Rational,
    /// Dimension of the graded piece at this jump.
    pub dim: u32,
}

impl Jump {
    pub fn new(value: Rational, dim: u32) -> Self {
        Self { value, dim }
    }
}

/// Jumps of a filtration at each cusp.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredJumpData {
    side: Side,
    cusps: Vec<Vec<Jump>>,
}

impl FilteredJumpData {
    pub fn representation(cusps: Vec<Vec<Jump>>) -> Result<Self> {
        Self::new(Side::Representation, cusps)
    }

    pub fn bundle(cusps: Vec<Vec<Jump>>) -> Result<Self> {
        Self::new(Side::Bundle, cusps)
    }

    pub fn new(side: Side, cusps: Vec<Vec<Jump>>) -> Result<Self> {
        for jump in cusps.iter().flatten() {
            if jump.dim == 0 {
                return Err(Error::FilteredData(format!("jump {} has zero graded dimension", jump.value)));
            }
            if side == Side::Bundle && !in_unit_window(jump.value) {
                return Err(Error::FilteredData(format!("bundle-side jump {} is outside [0,1)", jump.value)));
            }
        }
        Ok(Self { side, cusps })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn cusps(&self) -> &[Vec<Jump>] {
        &self.cusps
    }

    /// `Σ_s Σ_jump value · dim`.
    pub fn weighted_sum(&self) -> Rational {
        self.cusps
            .iter()
            .flatten()
            .map(|j| j.value * Rational::from_integer(j.dim.into()))
            .sum()
    }
}

/// Degree of a filtered representation: the sum of its jumps with multiplicity.
pub fn filtered_degree_rep(data: &FilteredJumpData) -> Result<Rational> {
    if data.side != Side::Representation {
        return Err(Error::WrongSide { expected: "representation" });
    }
    Ok(data.weighted_sum())
}

/// A filtered bundle, with the degree of its zeroth extension supplied
/// directly (the normalization of `deg O(k)` is left to the caller).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredBundleData {
    #[serde(with = "ratio::as_string")]
    base_degree: Rational,
    rank: u32,
    jumps: FilteredJumpData,
}

impl FilteredBundleData {
    /// A cusp with no listed jumps carries the trivial filtration.
    pub fn new(base_degree: Rational, rank: u32, jumps: FilteredJumpData) -> Result<Self> {
        if rank == 0 {
            return Err(Error::FilteredData("rank must be at least 1".into()));
        }
        if jumps.side != Side::Bundle {
            return Err(Error::WrongSide { expected: "bundle" });
        }
        for (s, cusp) in jumps.cusps.iter().enumerate() {
            let total: u32 = cusp.iter().map(|j| j.dim).sum();
            if !cusp.is_empty() && total != rank {
                return Err(Error::FilteredData(format!(
                    "graded dimensions at cusp {s} sum to {total}, rank is {rank}"
                )));
            }
        }
        Ok(Self { base_degree, rank, jumps })
    }

    pub fn base_degree(&self) -> Rational {
        self.base_degree
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn jumps(&self) -> &FilteredJumpData {
        &self.jumps
    }
}

pub fn filtered_degree_bundle(data: &FilteredBundleData) -> Rational {
    data.base_degree + data.jumps.weighted_sum()
}

pub fn slope_bundle(data: &FilteredBundleData) -> Rational {
    filtered_degree_bundle(data) / Rational::from_integer(data.rank.into())
}

fn check_exponent(a: i64) -> Result<()> {
    if (0..=5).contains(&a) {
        Ok(())
    } else {
        Err(Error::CharacterExponent(a))
    }
}

// Rank-one filtered characters (χ^a, b) of PSL_2(Z), where χ(T) = e^{2πi/6}.

/// The jump of `V(χ^a, b)` in `[0, 1)`: `{b - a/6}`.
pub fn rank1_jump(a: i64, b: Rational) -> Result<Rational> {
    check_exponent(a)?;
    Ok(fract(b - Rational::new(a, 6)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank1Degrees {
    /// Degree of the zeroth extension, `b - {b - a/6}`.
    #[serde(with = "ratio::as_string")]
    pub unfiltered: Rational,
    #[serde(with = "ratio::as_string")]
    pub filtered: Rational,
}

pub fn rank1_degrees(a: i64, b: Rational) -> Result<Rank1Degrees> {
    let jump = rank1_jump(a, b)?;
    // canonical extension with exponent a/6, twisted by O(floor(b - a/6))
    let unfiltered = Rational::new(a, 6) + (b - Rational::new(a, 6)).floor();
    debug_assert_eq!(unfiltered, b - jump);
    let bundle = rank1_bundle(a, b)?;
    Ok(Rank1Degrees { unfiltered, filtered: filtered_degree_bundle(&bundle) })
}

/// Residue angle `a/6`: the residue at the cusp is `exp(2πi·a/6)`.
pub fn rank1_residue_angle(a: i64) -> Result<Rational> {
    check_exponent(a)?;
    Ok(Rational::new(a, 6))
}

/// `(χ^a, b)` as one-cusp representation-side jump data.
pub fn rank1_representation(a: i64, b: Rational) -> Result<FilteredJumpData> {
    check_exponent(a)?;
    FilteredJumpData::representation(vec![vec![Jump::new(b, 1)]])
}

/// The filtered line bundle attached to `(χ^a, b)`.
pub fn rank1_bundle(a: i64, b: Rational) -> Result<FilteredBundleData> {
    let jump = rank1_jump(a, b)?;
    let base = Rational::new(a, 6) + (b - Rational::new(a, 6)).floor();
    FilteredBundleData::new(base, 1, FilteredJumpData::bundle(vec![vec![Jump::new(jump, 1)]])?)
}

/// One Jordan block on the representation side: jump `β` and eigenvalue
/// `exp(2πi(u + v i))` with `u` in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueBlockData {
    #[serde(with = "ratio::as_string")]
    beta: Rational,
    #[serde(with = "ratio::as_string")]
    u: Rational,
    #[serde(with = "ratio::as_string")]
    v: Rational,
}

impl ResidueBlockData {
    pub fn new(beta: Rational, u: Rational, v: Rational) -> Result<Self> {
        if !in_unit_window(u) {
            return Err(Error::Branch(format!("u = {u} is outside [0,1)")));
        }
        Ok(Self { beta, u, v })
    }

    pub fn beta(&self) -> Rational {
        self.beta
    }

    pub fn u(&self) -> Rational {
        self.u
    }

    pub fn v(&self) -> Rational {
        self.v
    }

    /// `u + v i`, the exponent of the eigenvalue divided by `2πi`.
    pub fn exponent(&self) -> ComplexRational {
        ComplexRational::new(self.u, self.v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideResidue {
    #[serde(with = "ratio::as_string")]
    pub jump: Rational,
    #[serde(rename = "eig")]
    pub eigenvalue: ComplexRational,
}

pub fn residue_rep_to_connection(blk: &ResidueBlockData) -> SideResidue {
    SideResidue {
        jump: blk.beta + blk.u,
        eigenvalue: ComplexRational::new(-blk.u, -blk.v),
    }
}

pub fn residue_rep_to_higgs(blk: &ResidueBlockData) -> SideResidue {
    let half = Rational::new(1, 2);
    SideResidue {
        jump: -blk.u,
        eigenvalue: ComplexRational::new(-blk.beta * half, -blk.v * half),
    }
}

pub fn residue_connection_to_rep(res: &SideResidue) -> Result<ResidueBlockData> {
    let u = -res.eigenvalue.re;
    if !in_unit_window(u) {
        return Err(Error::Branch(format!(
            "connection eigenvalue real part {} does not come from u in [0,1)",
            res.eigenvalue.re
        )));
    }
    ResidueBlockData::new(res.jump - u, u, -res.eigenvalue.im)
}

pub fn residue_higgs_to_rep(res: &SideResidue) -> Result<ResidueBlockData> {
    let u = -res.jump;
    if !in_unit_window(u) {
        return Err(Error::Branch(format!("Higgs jump {} does not come from u in [0,1)", res.jump)));
    }
    let two = Rational::from_integer(2);
    ResidueBlockData::new(-two * res.eigenvalue.re, u, -two * res.eigenvalue.im)
}

impl Default for SideResidue {
    fn default() -> Self {
        Self { jump: Rational::zero(), eigenvalue: ComplexRational::zero() }
    }
}
