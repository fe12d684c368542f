//! Central charges and slopes for the three weak stability notions in play:
//! Mumford slope, tilt stability, and its rotation.
//!
//! The tilt charge of `E` at `(s, beta)` with `s = alpha^2` is
//!
//! ```text
//! Z(E) = -H Ch2^b(E) + (s/2) H^3 Ch0(E) + i (H^2 Ch1(E) - b H^3 Ch0(E))
//! ```
//!
//! so in coefficient form `re = -d a2^b + (s/2) d a0`, `im = d a1^b`, where
//! `a^b` is the `twist` of the class. The rotated charge is `Z0 = -i Z`.
//! Keeping `s = alpha^2` instead of `alpha` keeps every wall and slope in `Q`.

use crate::numclass::{ChernCharacter, FanoContext};
use crate::rat::{rat, rat_string, Rat};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeakStabError {
    #[error("alpha^2 must be positive, got {0}")]
    NonPositiveAlphaSq(String),
    #[error("zero charge has no slope order")]
    DegenerateCharge,
}

/// A point of the upper half-plane, stored as `(s, beta)` with `s = alpha^2 > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TiltPoint {
    #[serde(with = "rat_string")]
    pub s: Rat,
    #[serde(with = "rat_string")]
    pub beta: Rat,
}

impl TiltPoint {
    pub fn new(s: Rat, beta: Rat) -> Result<Self, WeakStabError> {
        if s.is_positive() {
            Ok(TiltPoint { s, beta })
        } else {
            Err(WeakStabError::NonPositiveAlphaSq(s.to_string()))
        }
    }
}

impl fmt::Display for TiltPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(s={}, beta={})", self.s, self.beta)
    }
}

/// Exact value of a charge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeValue {
    #[serde(with = "rat_string")]
    pub re: Rat,
    #[serde(with = "rat_string")]
    pub im: Rat,
}

impl ChargeValue {
    pub fn new(re: Rat, im: Rat) -> Self {
        ChargeValue { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `Z0 = -iZ`: `(re, im) -> (im, -re)`.
    pub fn rotated(&self) -> ChargeValue {
        ChargeValue::new(self.im.clone(), -self.re.clone())
    }

    /// Slope `-re/im`, `+infinity` on the `im = 0` axis (including the zero
    /// charge, which is the weak-stability convention for points).
    pub fn slope(&self) -> SlopeValue {
        if self.im.is_zero() {
            SlopeValue::Infinite
        } else {
            SlopeValue::Finite(-(&self.re / &self.im))
        }
    }

    /// Slope order by cross-multiplication on `(-re, im)`. The zero charge
    /// is not ordered.
    pub fn cmp_slope(&self, other: &ChargeValue) -> Result<Ordering, WeakStabError> {
        if self.is_zero() || other.is_zero() {
            return Err(WeakStabError::DegenerateCharge);
        }
        Ok(self.slope().cmp(&other.slope()))
    }
}

impl fmt::Display for ChargeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

/// Finite rational slope or the `+infinity` marker, ordered with infinity on top.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlopeValue {
    #[serde(rename = "finite", with = "rat_string")]
    Finite(Rat),
    #[serde(rename = "infinite")]
    Infinite,
}

impl PartialOrd for SlopeValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SlopeValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use SlopeValue::*;
        match (self, other) {
            (Infinite, Infinite) => Ordering::Equal,
            (Infinite, Finite(_)) => Ordering::Greater,
            (Finite(_), Infinite) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for SlopeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeValue::Finite(x) => write!(f, "{x}"),
            SlopeValue::Infinite => write!(f, "+inf"),
        }
    }
}

/// Mumford slope `a1/a0`, `+infinity` on torsion classes.
pub fn slope_mumford(_ctx: &FanoContext, e: &ChernCharacter) -> SlopeValue {
    if e.a0.is_zero() {
        SlopeValue::Infinite
    } else {
        SlopeValue::Finite(&e.a1 / &e.a0)
    }
}

/// Tilt charge at `p`.
pub fn z_tilt(ctx: &FanoContext, e: &ChernCharacter, p: &TiltPoint) -> ChargeValue {
    z_tilt_at(ctx, e, &p.s, &p.beta)
}

/// Same as `z_tilt` but admits the `s = 0` boundary, which the inequality
/// evaluations use.
pub fn z_tilt_at(ctx: &FanoContext, e: &ChernCharacter, s: &Rat, beta: &Rat) -> ChargeValue {
    let d = ctx.d();
    let t = e.twist(beta);
    ChargeValue::new(
        -(&d * &t.a2) + s / rat(2) * &d * &t.a0,
        &d * &t.a1,
    )
}

/// Tilt slope at `p`.
pub fn mu_tilt(ctx: &FanoContext, e: &ChernCharacter, p: &TiltPoint) -> SlopeValue {
    z_tilt(ctx, e, p).slope()
}

/// Rotated slope: the slope of `Z0 = -iZ`.
pub fn mu_zero(ctx: &FanoContext, e: &ChernCharacter, p: &TiltPoint) -> SlopeValue {
    z_tilt(ctx, e, p).rotated().slope()
}

/// Support quadratic form `Q(E) = (H^2 Ch1^b)^2 - 2 (H Ch2^b)(H^3 Ch0)`,
/// evaluated literally at `beta` although the value does not depend on it.
pub fn q_form(ctx: &FanoContext, e: &ChernCharacter, beta: &Rat) -> Rat {
    let d = ctx.d();
    let t = e.twist(beta);
    let c1 = &d * &t.a1;
    let c2 = &d * &t.a2;
    let c0 = &d * &t.a0;
    &c1 * &c1 - rat(2) * c2 * c0
}

/// Left side of the generalized Bogomolov-Gieseker inequality,
/// `s Q(E) + 4 (H Ch2^b)^2 - 6 (H^2 Ch1^b)(Ch3^b)`, with `Ch3^b` the
/// integrated degree-3 twisted character `d a3^b`. The caller checks
/// nonnegativity. `s = 0` is allowed; that boundary is where the sharp
/// third-Chern bounds come from.
pub fn bms_inequality(ctx: &FanoContext, e: &ChernCharacter, s: &Rat, beta: &Rat) -> Rat {
    assert!(!s.is_negative(), "bms_inequality needs s >= 0");
    let d = ctx.d();
    let t = e.twist(beta);
    let ch2 = &d * &t.a2;
    let ch1 = &d * &t.a1;
    let ch3 = &d * &t.a3;
    s * q_form(ctx, e, beta) + rat(4) * &ch2 * &ch2 - rat(6) * ch1 * ch3
}

/// The open region `-1 < beta < 0`, `0 < s < min(beta^2, (beta+1)^2)`,
/// i.e. `0 < alpha < min(-beta, beta + 1)`.
pub fn in_region_v(p: &TiltPoint) -> bool {
    let (s, b) = (&p.s, &p.beta);
    if !(b > &rat(-1) && b.is_negative()) {
        return false;
    }
    let b1 = b + rat(1);
    s.is_positive() && s < &(b * b) && s < &(&b1 * &b1)
}
