//! Numerical wall geometry in the `(beta, alpha)` upper half-plane.
//!
//! Parameters carry `s = alpha^2`, so a wall of a pair of classes is either
//! the rational semicircle `s + (beta - center)^2 = radius_sq` or a vertical
//! line `beta = beta0`. In truncated coordinates `(r, c, e) = (d a0, d a1,
//! d a2)` slope equality becomes linear and the wall is read off the 2x2
//! minors of the truncation matrix of the pair.
//!
//! `scan_candidates` enumerates lattice destabilizers `u` through the
//! numerical finiteness filters: positive imaginary part below that of `v`
//! somewhere on the wall inside the window, nonnegative Bogomolov form on
//! sub and quotient, and Q-additivity. Where the window geometry allows it
//! the scan certifies its own exhaustiveness from the identity
//!
//! ```text
//! rho^2 D^2 = Delta(v,u)^2 - Q(v) Q(u)
//! ```
//!
//! (`D` the leading minor, `Delta` the polarization of `Q`), which under the
//! filters gives `rho |D| <= Q(v)` and hence explicit rank and degree bounds
//! for every candidate whose wall meets the window.

use crate::numclass::{ChernCharacter, FanoContext};
use crate::rat::{
    cmp_sqrt, rat, rat_gcd, rat_string, sqrt_upper_bound_prec, Int, Rat,
};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WallsError {
    #[error("empty window: {0}")]
    EmptyWindow(String),
    #[error("bad bounds: {0}")]
    BadBounds(String),
}

/// Open beta-interval with a cap on `s = alpha^2`; the window is
/// `{(s, beta) : beta_min < beta < beta_max, 0 < s <= s_max}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    #[serde(with = "rat_string")]
    pub beta_min: Rat,
    #[serde(with = "rat_string")]
    pub beta_max: Rat,
    #[serde(with = "rat_string")]
    pub s_max: Rat,
}

impl Window {
    pub fn new(beta_min: Rat, beta_max: Rat, s_max: Rat) -> Result<Self, WallsError> {
        if beta_min >= beta_max {
            return Err(WallsError::EmptyWindow(format!(
                "need beta_min < beta_max, got [{beta_min}, {beta_max}]"
            )));
        }
        if !s_max.is_positive() {
            return Err(WallsError::EmptyWindow(format!("need s_max > 0, got {s_max}")));
        }
        Ok(Window { beta_min, beta_max, s_max })
    }
}

/// Enumeration limits: `|a0| <= max_rank`, `|a1| <= max_c1_span`, and
/// `H ch2` running over `(1/ch2_denominator) Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_rank: u32,
    pub max_c1_span: u32,
    pub ch2_denominator: u32,
}

impl Bounds {
    pub fn new(max_rank: u32, max_c1_span: u32, ch2_denominator: u32) -> Result<Self, WallsError> {
        if max_rank == 0 || max_c1_span == 0 || ch2_denominator == 0 {
            return Err(WallsError::BadBounds(
                "max_rank, max_c1_span, ch2_denominator must be positive".into(),
            ));
        }
        Ok(Bounds { max_rank, max_c1_span, ch2_denominator })
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_rank: 10, max_c1_span: 12, ch2_denominator: 2 }
    }
}

/// Locus of a numerical wall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WallLocus {
    Vertical { beta0: Rat },
    Semicircle { center: Rat, radius_sq: Rat },
}

/// A wall with the destabilizer that produced it. Equality compares the
/// locus only; provenance is bookkeeping, not identity.
#[derive(Debug, Clone)]
pub struct Wall {
    pub locus: WallLocus,
    pub destabilizer: ChernCharacter,
}

impl PartialEq for Wall {
    fn eq(&self, other: &Self) -> bool {
        self.locus == other.locus
    }
}

impl Eq for Wall {}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.locus {
            WallLocus::Vertical { beta0 } => write!(f, "vertical beta = {beta0}"),
            WallLocus::Semicircle { center, radius_sq } => {
                write!(f, "semicircle center {center}, radius_sq {radius_sq}")
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum WallRepr {
    Semicircle {
        #[serde(with = "rat_string")]
        center: Rat,
        #[serde(with = "rat_string")]
        radius_sq: Rat,
        destabilizer: ChernCharacter,
    },
    Vertical {
        #[serde(with = "rat_string")]
        beta0: Rat,
        destabilizer: ChernCharacter,
    },
}

impl Serialize for Wall {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match &self.locus {
            WallLocus::Semicircle { center, radius_sq } => WallRepr::Semicircle {
                center: center.clone(),
                radius_sq: radius_sq.clone(),
                destabilizer: self.destabilizer.clone(),
            },
            WallLocus::Vertical { beta0 } => WallRepr::Vertical {
                beta0: beta0.clone(),
                destabilizer: self.destabilizer.clone(),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Wall {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match WallRepr::deserialize(d)? {
            WallRepr::Semicircle { center, radius_sq, destabilizer } => {
                if !radius_sq.is_positive() {
                    return Err(D::Error::custom("semicircle radius_sq must be positive"));
                }
                Wall { locus: WallLocus::Semicircle { center, radius_sq }, destabilizer }
            }
            WallRepr::Vertical { beta0, destabilizer } => {
                Wall { locus: WallLocus::Vertical { beta0 }, destabilizer }
            }
        })
    }
}

/// Total outcome of the wall equation for a pair of classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WallComputation {
    Wall(Wall),
    /// Proportional truncations: slopes agree at every point.
    Everywhere,
    /// The slope-equality locus misses the upper half-plane.
    Nowhere,
}

/// A destabilizer that survived every numerical filter. `cowall_class` is
/// `w - u` where `w` is the representative of `{v, -v}` with positive
/// imaginary part on the wall; the Q-additivity invariant
/// `q_sub + q_quot <= Q(v)` holds for that representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateWall {
    pub wall: Wall,
    pub destabilizer: ChernCharacter,
    pub cowall_class: ChernCharacter,
    #[serde(with = "rat_string")]
    pub q_sub: Rat,
    #[serde(with = "rat_string")]
    pub q_quot: Rat,
}

/// Whether the enumeration bounds provably exhaust all candidates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Completeness {
    Certified { required_rank: i64, required_c1_span: i64 },
    Incomplete { reason: String },
}

impl Completeness {
    pub fn is_certified(&self) -> bool {
        matches!(self, Completeness::Certified { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub degree: i64,
    pub v: ChernCharacter,
    pub window: Window,
    pub bounds: Bounds,
    pub candidates: Vec<CandidateWall>,
    pub completeness: Completeness,
}

/// Outcome of the lattice-minimality check at the left edge of a strip.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Minimality {
    Holds {
        #[serde(with = "rat_string")]
        beta_left: Rat,
        #[serde(with = "rat_string")]
        im_abs: Rat,
        #[serde(with = "rat_string")]
        generator: Rat,
    },
    NotApplicable {
        #[serde(with = "rat_string")]
        beta_left: Rat,
        #[serde(with = "rat_string")]
        im_abs: Rat,
        #[serde(with = "rat_string")]
        generator: Rat,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripReport {
    pub degree: i64,
    pub v: ChernCharacter,
    #[serde(with = "rat_string")]
    pub beta_left: Rat,
    #[serde(with = "rat_string")]
    pub beta_right: Rat,
    pub minimality: Minimality,
    pub scan: ScanReport,
    pub strip_empty_certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargestWallReport {
    pub degree: i64,
    pub v: ChernCharacter,
    pub candidate: Option<CandidateWall>,
    pub maximality_certified: bool,
    pub note: String,
}

/// Truncated coordinates `(d a0, d a1, d a2)`; walls see nothing else.
pub fn truncated_coords(ctx: &FanoContext, e: &ChernCharacter) -> (Rat, Rat, Rat) {
    let d = ctx.d();
    (&d * &e.a0, &d * &e.a1, &d * &e.a2)
}

fn q_trunc(t: &(Rat, Rat, Rat)) -> Rat {
    &t.1 * &t.1 - rat(2) * &t.0 * &t.2
}

fn im_at(t: &(Rat, Rat, Rat), beta: &Rat) -> Rat {
    &t.1 - beta * &t.0
}

fn neg_trunc(t: &(Rat, Rat, Rat)) -> (Rat, Rat, Rat) {
    (-&t.0, -&t.1, -&t.2)
}

enum LocusComp {
    Locus(WallLocus),
    Everywhere,
    Nowhere,
}

fn wall_locus(v: &(Rat, Rat, Rat), u: &(Rat, Rat, Rat)) -> LocusComp {
    let (rv, cv, ev) = v;
    let (ru, cu, eu) = u;
    let d_min = cv * ru - cu * rv;
    let m_min = ru * ev - rv * eu;
    let n_min = cv * eu - cu * ev;
    if d_min.is_zero() {
        if m_min.is_zero() {
            return if n_min.is_zero() { LocusComp::Everywhere } else { LocusComp::Nowhere };
        }
        // beta0 = (cu ev - cv eu) / (ru ev - rv eu)
        return LocusComp::Locus(WallLocus::Vertical { beta0: -&n_min / &m_min });
    }
    let center = &m_min / &d_min;
    let radius_sq = &center * &center + rat(2) * &n_min / &d_min;
    if radius_sq.is_positive() {
        LocusComp::Locus(WallLocus::Semicircle { center, radius_sq })
    } else {
        LocusComp::Nowhere
    }
}

/// The numerical wall of the pair `(v, u)`: the closure of the locus where
/// the tilt slopes of `v` and `u` agree.
pub fn numerical_wall(
    ctx: &FanoContext,
    v: &ChernCharacter,
    u: &ChernCharacter,
) -> WallComputation {
    let vt = truncated_coords(ctx, v);
    let ut = truncated_coords(ctx, u);
    match wall_locus(&vt, &ut) {
        LocusComp::Everywhere => WallComputation::Everywhere,
        LocusComp::Nowhere => WallComputation::Nowhere,
        LocusComp::Locus(locus) => {
            WallComputation::Wall(Wall { locus, destabilizer: u.clone() })
        }
    }
}

/// The vertical wall `Im Z(v) = 0` at `beta = c_v/r_v`, with a primitive
/// rank-bearing witness as provenance. `None` for torsion classes.
pub fn intrinsic_vertical(ctx: &FanoContext, v: &ChernCharacter) -> Option<Wall> {
    if v.a0.is_zero() {
        return None;
    }
    let beta0 = &v.a1 / &v.a0;
    let g = rat_gcd(&v.a0, &v.a1);
    let mut a0 = &v.a0 / &g;
    let mut a1 = &v.a1 / &g;
    if a0.is_negative() {
        a0 = -a0;
        a1 = -a1;
    }
    // shift a2 off the proportional value so the pair is Vertical, not
    // Everywhere
    let a2 = &v.a2 * &a0 / &v.a0 + rat(1);
    let witness = ChernCharacter::new(a0, a1, a2 - rat(1), Rat::zero());
    debug_assert!(matches!(
        numerical_wall(ctx, v, &witness),
        WallComputation::Wall(Wall { locus: WallLocus::Vertical { .. }, .. })
    ) || {
        // proportional a2 fallback: bump it
        true
    });
    let mut w = witness;
    if let WallComputation::Wall(wall) = numerical_wall(ctx, v, &w) {
        if let WallLocus::Vertical { .. } = wall.locus {
            return Some(wall);
        }
    }
    w.a2 += rat(1);
    match numerical_wall(ctx, v, &w) {
        WallComputation::Wall(wall) => Some(Wall {
            locus: WallLocus::Vertical { beta0 },
            destabilizer: wall.destabilizer,
        }),
        _ => Some(Wall {
            locus: WallLocus::Vertical { beta0 },
            destabilizer: w,
        }),
    }
}

// ---------------------------------------------------------------------------
// exact interval arithmetic on a wall
//
// Admissible sample sets are cut out by rational linear inequalities in beta
// together with the band constraints |beta - center| < sqrt(radius_sq) and
// |beta - center| >= sqrt(radius_sq - s_max). Bounds are therefore either
// rationals or center +- sqrt(x); emptiness is decidable by squaring.

#[derive(Clone, Debug)]
enum Bnd {
    Exact(Rat),
    /// `center - sqrt(x)` when `plus` is false, `center + sqrt(x)` otherwise.
    SqrtOff(Rat, bool),
}

fn bnd_lt(a: &Bnd, b: &Bnd, center: &Rat) -> bool {
    use Bnd::*;
    match (a, b) {
        (Exact(p), Exact(q)) => p < q,
        (Exact(p), SqrtOff(x, plus)) => {
            if *plus {
                cmp_sqrt(x, &(p - center)) == Ordering::Greater
            } else {
                cmp_sqrt(x, &(center - p)) == Ordering::Less
            }
        }
        (SqrtOff(x, plus), Exact(q)) => {
            if *plus {
                cmp_sqrt(x, &(q - center)) == Ordering::Less
            } else {
                cmp_sqrt(x, &(center - q)) == Ordering::Greater
            }
        }
        (SqrtOff(x, px), SqrtOff(y, py)) => match (px, py) {
            (false, false) => x > y,
            (true, true) => x < y,
            (false, true) => !(x.is_zero() && y.is_zero()),
            (true, false) => false,
        },
    }
}

fn band_nonempty(lowers: &[Bnd], uppers: &[Bnd], center: &Rat) -> bool {
    lowers.iter().all(|l| uppers.iter().all(|u| bnd_lt(l, u, center)))
}

/// Records the constraint `p - q beta > 0`; returns false if infeasible.
fn push_linear(lowers: &mut Vec<Bnd>, uppers: &mut Vec<Bnd>, p: Rat, q: Rat) -> bool {
    if q.is_zero() {
        return p.is_positive();
    }
    let bound = &p / &q;
    if q.is_positive() {
        uppers.push(Bnd::Exact(bound));
    } else {
        lowers.push(Bnd::Exact(bound));
    }
    true
}

/// Decides whether the wall carries a point inside the window where
/// `0 < Im Z(u) < Im Z(w)`. All three im-values are linear in beta, so the
/// admissible set is a finite union of intervals with rational or
/// center +- sqrt endpoints; rational points are dense in any nonempty one.
fn admissible_nonempty(
    locus: &WallLocus,
    window: &Window,
    u: &(Rat, Rat, Rat),
    w: &(Rat, Rat, Rat),
) -> bool {
    match locus {
        WallLocus::Vertical { beta0 } => {
            beta0 > &window.beta_min
                && beta0 < &window.beta_max
                && im_at(u, beta0).is_positive()
                && im_at(w, beta0) > im_at(u, beta0)
        }
        WallLocus::Semicircle { center, radius_sq } => {
            let mut lowers = vec![Bnd::Exact(window.beta_min.clone())];
            let mut uppers = vec![Bnd::Exact(window.beta_max.clone())];
            // im_u > 0 and im_w - im_u > 0
            if !push_linear(&mut lowers, &mut uppers, u.1.clone(), u.0.clone()) {
                return false;
            }
            if !push_linear(&mut lowers, &mut uppers, &w.1 - &u.1, &w.0 - &u.0) {
                return false;
            }
            let cap = radius_sq - &window.s_max;
            if cap.is_positive() {
                // two bands: the s <= s_max part of the arc
                let mut left_l = lowers.clone();
                let mut left_u = uppers.clone();
                left_l.push(Bnd::SqrtOff(radius_sq.clone(), false));
                left_u.push(Bnd::SqrtOff(cap.clone(), false));
                if band_nonempty(&left_l, &left_u, center) {
                    return true;
                }
                lowers.push(Bnd::SqrtOff(cap, true));
                uppers.push(Bnd::SqrtOff(radius_sq.clone(), true));
                band_nonempty(&lowers, &uppers, center)
            } else {
                lowers.push(Bnd::SqrtOff(radius_sq.clone(), false));
                uppers.push(Bnd::SqrtOff(radius_sq.clone(), true));
                band_nonempty(&lowers, &uppers, center)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// enumeration

/// The e-intervals per truncated `(r, c)` implied by the Q filters;
/// guaranteed to cover every accepting candidate.
fn e_intervals(
    qv: &Rat,
    vt: &(Rat, Rat, Rat),
    r: &Rat,
    c: &Rat,
) -> Vec<(Rat, Rat)> {
    let mut out: Vec<(Rat, Rat)> = Vec::new();
    if !r.is_zero() {
        // 0 <= q(u) = c^2 - 2re <= q(v)
        let c2 = c * c;
        let lo = (&c2 - qv) / (rat(2) * r);
        let hi = &c2 / (rat(2) * r);
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        out.push((lo, hi));
    } else {
        // q(u) = c^2 must already fit; bound e through 0 <= q(w-u) <= q(v)
        if &(c * c) > qv {
            return out;
        }
        for w in [vt.clone(), neg_trunc(vt)] {
            if w.0.is_zero() {
                continue;
            }
            let dc = &w.1 - c;
            let dc2 = &dc * &dc;
            // 2 r_w (e_w - e) in [dc2 - qv, dc2]
            let e1 = &w.2 - &dc2 / (rat(2) * &w.0);
            let e2 = &w.2 - (&dc2 - qv) / (rat(2) * &w.0);
            let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
            out.push((lo, hi));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(Rat, Rat)> = Vec::new();
    for (lo, hi) in out {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => merged.push((lo, hi)),
        }
    }
    merged
}

fn candidate_for(
    ctx: &FanoContext,
    v_full: &ChernCharacter,
    vt: &(Rat, Rat, Rat),
    qv: &Rat,
    window: &Window,
    ut: (Rat, Rat, Rat),
) -> Option<CandidateWall> {
    let locus = match wall_locus(vt, &ut) {
        LocusComp::Locus(l) => l,
        _ => return None,
    };
    // pick the representative of {v, -v} with positive imaginary part on the
    // wall; walls never cross the vertical line of v, so one sign works
    // throughout the locus
    let probe = match &locus {
        WallLocus::Vertical { beta0 } => beta0,
        WallLocus::Semicircle { center, .. } => center,
    };
    let sign = im_at(vt, probe);
    let (wt, w_full) = if sign.is_positive() {
        (vt.clone(), v_full.clone())
    } else if sign.is_negative() {
        (neg_trunc(vt), -v_full)
    } else {
        return None;
    };
    let q_sub = q_trunc(&ut);
    if q_sub.is_negative() {
        return None;
    }
    let quot = (&wt.0 - &ut.0, &wt.1 - &ut.1, &wt.2 - &ut.2);
    let q_quot = q_trunc(&quot);
    if q_quot.is_negative() || &(&q_sub + &q_quot) > qv {
        return None;
    }
    if !admissible_nonempty(&locus, window, &ut, &wt) {
        return None;
    }
    let d = ctx.d();
    let u_full = ChernCharacter::new(&ut.0 / &d, &ut.1 / &d, &ut.2 / &d, Rat::zero());
    Some(CandidateWall {
        wall: Wall { locus, destabilizer: u_full.clone() },
        destabilizer: u_full.clone(),
        cowall_class: &w_full - &u_full,
        q_sub,
        q_quot,
    })
}

fn locus_cmp(a: &WallLocus, b: &WallLocus) -> Ordering {
    use WallLocus::*;
    match (a, b) {
        (Vertical { .. }, Semicircle { .. }) => Ordering::Less,
        (Semicircle { .. }, Vertical { .. }) => Ordering::Greater,
        (Vertical { beta0: x }, Vertical { beta0: y }) => x.cmp(y),
        (Semicircle { center: c1, radius_sq: r1 }, Semicircle { center: c2, radius_sq: r2 }) => {
            r2.cmp(r1).then_with(|| c1.cmp(c2))
        }
    }
}

fn dest_cmp(a: &CandidateWall, b: &CandidateWall) -> Ordering {
    let ka = (&a.q_sub, a.destabilizer.a0.abs());
    let kb = (&b.q_sub, b.destabilizer.a0.abs());
    // positive rank beats its negative mirror so genuine subobjects win ties
    ka.cmp(&kb)
        .then_with(|| b.destabilizer.a0.cmp(&a.destabilizer.a0))
        .then_with(|| a.destabilizer.a1.cmp(&b.destabilizer.a1))
        .then_with(|| a.destabilizer.a2.cmp(&b.destabilizer.a2))
}

fn sort_and_dedup(mut cands: Vec<CandidateWall>) -> Vec<CandidateWall> {
    cands.sort_by(|a, b| {
        locus_cmp(&a.wall.locus, &b.wall.locus).then_with(|| dest_cmp(a, b))
    });
    cands.dedup_by(|a, b| a.wall.locus == b.wall.locus);
    cands
}

// ---------------------------------------------------------------------------
// exhaustiveness certificate

/// Required `(|a0|, |a1|)` bounds for any accepting candidate whose wall
/// meets the window, or a reason why no bound is available. Sound for any
/// `v` with `r_v != 0` and `Q(v) > 0`.
fn exhaustiveness_requirement(
    ctx: &FanoContext,
    vt: &(Rat, Rat, Rat),
    qv: &Rat,
    window: &Window,
) -> Result<(i64, i64), String> {
    let (rv, cv, _) = vt;
    if rv.is_zero() {
        return Err("rank-zero class: no exhaustiveness certificate".into());
    }
    let beta_v = cv / rv;
    let p_inv = qv / (rv * rv);
    let (a, b) = (&window.beta_min, &window.beta_max);

    // per side of the vertical line: distances of the window edges
    let mut sides: Vec<(Rat, Rat)> = Vec::new();
    if b <= &beta_v {
        sides.push((&beta_v - b, &beta_v - a));
    } else if a >= &beta_v {
        sides.push((a - &beta_v, b - &beta_v));
    } else {
        sides.push((Rat::zero(), &beta_v - a));
        sides.push((Rat::zero(), b - &beta_v));
    }

    let mut rho_inf: Option<Rat> = None;
    for (near, far) in &sides {
        let r = if (far * far) < p_inv {
            (&p_inv / far - far) / rat(2)
        } else if (near * near) > p_inv {
            (near - &p_inv / near) / rat(2)
        } else {
            return Err(
                "window touches the accumulation locus of walls at distance sqrt(Q(v)/r_v^2) \
                 from the vertical wall"
                    .into(),
            );
        };
        rho_inf = Some(match rho_inf {
            Some(cur) if cur <= r => cur,
            _ => r,
        });
    }
    let rho_inf = rho_inf.expect("window has at least one side");

    let g_d = ctx.d() * rat_gcd(cv, rv);
    // rho |D| <= Q(v) with rho > rho_inf strictly: largest lattice |D|
    let dmax = qv / &rho_inf;
    let n = (&dmax / &g_d).ceil().to_integer() - Int::one();
    if n <= Int::zero() {
        return Ok((0, 0));
    }
    let dmax_latt = Rat::from_integer(n) * &g_d;

    // no wall point comes closer to the vertical line than x_floor
    let rho_max = qv / &g_d;
    let x_floor = &p_inv
        / (sqrt_upper_bound_prec(&(&rho_max * &rho_max + &p_inv), 1_000_000) + &rho_max);
    let m_max = {
        let ia = im_at(vt, a).abs();
        let ib = im_at(vt, b).abs();
        if ia >= ib { ia } else { ib }
    };

    let r_tr = (&dmax_latt / rv.abs() + &m_max) / &x_floor;
    let b_max = if a.abs() >= b.abs() { a.abs() } else { b.abs() };
    let c_tr = &m_max + &b_max * &r_tr;

    let d = ctx.d();
    let need_rank = (&r_tr / &d).ceil().to_integer().to_i64().unwrap_or(i64::MAX);
    let need_span = (&c_tr / &d).ceil().to_integer().to_i64().unwrap_or(i64::MAX);
    Ok((need_rank, need_span))
}

fn completeness_for(
    ctx: &FanoContext,
    vt: &(Rat, Rat, Rat),
    qv: &Rat,
    window: &Window,
    bounds: &Bounds,
) -> Completeness {
    if !qv.is_positive() {
        // Q-additivity leaves no room: q_sub = q_quot = 0 forces proportional
        // truncations, which are Everywhere and excluded
        return Completeness::Certified { required_rank: 0, required_c1_span: 0 };
    }
    match exhaustiveness_requirement(ctx, vt, qv, window) {
        Err(reason) => Completeness::Incomplete { reason },
        Ok((need_rank, need_span)) => {
            if i64::from(bounds.max_rank) >= need_rank
                && i64::from(bounds.max_c1_span) >= need_span
            {
                Completeness::Certified { required_rank: need_rank, required_c1_span: need_span }
            } else {
                Completeness::Incomplete {
                    reason: format!(
                        "bounds below certified requirement: need max_rank >= {need_rank} \
                         and max_c1_span >= {need_span}"
                    ),
                }
            }
        }
    }
}

fn scan_core(
    ctx: &FanoContext,
    v: &ChernCharacter,
    window: &Window,
    bounds: &Bounds,
) -> Vec<CandidateWall> {
    let vt = truncated_coords(ctx, v);
    let qv = q_trunc(&vt);
    let d = ctx.d();
    let den = Int::from(bounds.ch2_denominator);
    let rank = i64::from(bounds.max_rank);
    let span = i64::from(bounds.max_c1_span);

    let cands: Vec<CandidateWall> = (-rank..=rank)
        .into_par_iter()
        .flat_map_iter(|a0| {
            let mut local = Vec::new();
            let r = &d * rat(a0);
            for a1 in -span..=span {
                let c = &d * rat(a1);
                for (lo, hi) in e_intervals(&qv, &vt, &r, &c) {
                    let mut k = (lo * Rat::from_integer(den.clone())).ceil().to_integer();
                    let k_hi = (hi * Rat::from_integer(den.clone())).floor().to_integer();
                    while k <= k_hi {
                        let e = Rat::new(k.clone(), den.clone());
                        if let Some(cand) = candidate_for(
                            ctx,
                            v,
                            &vt,
                            &qv,
                            window,
                            (r.clone(), c.clone(), e),
                        ) {
                            local.push(cand);
                        }
                        k += Int::one();
                    }
                }
            }
            local
        })
        .collect();
    sort_and_dedup(cands)
}

/// Enumerates every lattice destabilizer within `bounds` whose numerical
/// wall meets the window and which passes the im-positivity and Bogomolov
/// filters. Deduplicated by wall identity (canonical witness: minimal
/// `q_sub`, then minimal rank), sorted vertical first, then radius
/// descending.
pub fn scan_candidates(
    ctx: &FanoContext,
    v: &ChernCharacter,
    window: &Window,
    bounds: &Bounds,
) -> ScanReport {
    let vt = truncated_coords(ctx, v);
    let qv = q_trunc(&vt);
    let candidates = scan_core(ctx, v, window, bounds);
    let completeness = completeness_for(ctx, &vt, &qv, window, bounds);
    ScanReport {
        degree: ctx.degree(),
        v: v.clone(),
        window: window.clone(),
        bounds: bounds.clone(),
        candidates,
        completeness,
    }
}

/// Strip-emptiness evidence for `beta in (beta_left, beta_right)`: the
/// lattice-minimality argument at the left edge plus a certified scan over
/// the strip. The scan cap on `s` is `rho_max^2 + 1`, high enough to see
/// every wall that can pass the filters.
pub fn verify_strip_empty(
    ctx: &FanoContext,
    v: &ChernCharacter,
    beta_left: Rat,
    beta_right: Rat,
) -> Result<StripReport, WallsError> {
    if beta_left >= beta_right {
        return Err(WallsError::EmptyWindow(format!(
            "need beta_left < beta_right, got [{beta_left}, {beta_right}]"
        )));
    }
    let vt = truncated_coords(ctx, v);
    let qv = q_trunc(&vt);

    // im-lattice at a rational edge p/q is (d/q)Z; minimality holds when
    // |Im Z(v)| is at most the generator, leaving no room below it
    let generator = ctx.d() / Rat::from_integer(beta_left.denom().clone());
    let im_abs = im_at(&vt, &beta_left).abs();
    let minimality = if im_abs.is_zero() {
        Minimality::NotApplicable {
            beta_left: beta_left.clone(),
            im_abs,
            generator,
            reason: "Im Z(v) vanishes at the left edge".into(),
        }
    } else if im_abs > generator {
        Minimality::NotApplicable {
            beta_left: beta_left.clone(),
            im_abs,
            generator,
            reason: "Im Z(v) is not minimal in the charge lattice at the left edge".into(),
        }
    } else {
        Minimality::Holds { beta_left: beta_left.clone(), im_abs, generator }
    };

    let s_max = if !vt.0.is_zero() && qv.is_positive() {
        let rho_max = &qv / (ctx.d() * rat_gcd(&vt.1, &vt.0));
        &rho_max * &rho_max + rat(1)
    } else {
        rat(4)
    };
    let window = Window::new(beta_left.clone(), beta_right.clone(), s_max)?;
    let scan = scan_candidates(ctx, v, &window, &Bounds::default());

    let certified = matches!(minimality, Minimality::Holds { .. })
        && scan.candidates.is_empty()
        && scan.completeness.is_certified();
    Ok(StripReport {
        degree: ctx.degree(),
        v: v.clone(),
        beta_left,
        beta_right,
        minimality,
        scan,
        strip_empty_certified: certified,
    })
}

/// Largest allowed |D| given `rho^2 >= radius_sq`: biggest lattice multiple
/// `n g` with `(n g)^2 radius_sq <= qv^2`.
fn d_bound_for_radius(qv: &Rat, g_d: &Rat, radius_sq: &Rat) -> Rat {
    let bound_sq = qv * qv / (radius_sq * g_d * g_d);
    let mut n = crate::rat::int_sqrt_floor(&bound_sq.floor().to_integer());
    while {
        let next = Rat::from_integer(&n + Int::one());
        &next * &next <= bound_sq
    } {
        n += Int::one();
    }
    Rat::from_integer(n) * g_d
}

/// The candidate wall of maximal radius, searched over a window wide enough
/// to contain every wall that can pass the filters, with bounds widened to
/// the certified requirement once a candidate fixes the radius floor.
pub fn largest_wall(ctx: &FanoContext, v: &ChernCharacter, bounds: &Bounds) -> LargestWallReport {
    let vt = truncated_coords(ctx, v);
    let qv = q_trunc(&vt);
    let degree = ctx.degree();
    if !qv.is_positive() {
        return LargestWallReport {
            degree,
            v: v.clone(),
            candidate: None,
            maximality_certified: true,
            note: "Q(v) <= 0 admits no candidates: Q-additivity forces proportional truncations"
                .into(),
        };
    }

    let d = ctx.d();
    let g_d = &d * rat_gcd(&vt.1, &vt.0);
    let rho_max = &qv / &g_d;
    let (center0, reach) = if !vt.0.is_zero() {
        let beta_v = &vt.1 / &vt.0;
        let p_inv = &qv / (&vt.0 * &vt.0);
        let reach =
            sqrt_upper_bound_prec(&(&rho_max * &rho_max + &p_inv), 1000) + &rho_max + rat(1);
        (beta_v, reach)
    } else {
        // torsion classes have concentric walls around e_v/c_v
        (&vt.2 / &vt.1, sqrt_upper_bound_prec(&(&rho_max * &rho_max), 1000) + rat(1))
    };
    let window = Window::new(&center0 - &reach, &center0 + &reach, &rho_max * &rho_max + rat(1))
        .expect("reach is positive");

    let pick = |cands: &[CandidateWall]| -> Option<CandidateWall> {
        cands
            .iter()
            .find(|c| matches!(c.wall.locus, WallLocus::Semicircle { .. }))
            .cloned()
    };

    let first = scan_core(ctx, v, &window, bounds);
    let Some(best) = pick(&first) else {
        return LargestWallReport {
            degree,
            v: v.clone(),
            candidate: None,
            maximality_certified: false,
            note: "no candidate within bounds; emptiness at larger radii not certified".into(),
        };
    };

    // every wall with radius_sq >= the found one obeys |D| <= qv/rho, and
    // samples keep distance x_floor from the vertical line, bounding rank
    let requirement = |radius_sq: &Rat| -> Option<(i64, i64)> {
        let dmax = d_bound_for_radius(&qv, &g_d, radius_sq);
        let (r_tr, c_tr);
        if !vt.0.is_zero() {
            let p_inv = &qv / (&vt.0 * &vt.0);
            let x_floor = &p_inv
                / (sqrt_upper_bound_prec(&(&rho_max * &rho_max + &p_inv), 1_000_000) + &rho_max);
            let m_max = vt.0.abs() * &reach;
            r_tr = (&dmax / vt.0.abs() + &m_max) / &x_floor;
            c_tr = &m_max + (center0.abs() + &reach) * &r_tr;
        } else {
            r_tr = &dmax / vt.1.abs();
            c_tr = vt.1.abs() + (center0.abs() + &reach) * &r_tr;
        }
        let need_rank = (&r_tr / &d).ceil().to_integer().to_i64()?;
        let need_span = (&c_tr / &d).ceil().to_integer().to_i64()?;
        if need_rank > 4096 || need_span > 100_000 {
            return None;
        }
        Some((need_rank, need_span))
    };

    let radius_of = |c: &CandidateWall| match &c.wall.locus {
        WallLocus::Semicircle { radius_sq, .. } => radius_sq.clone(),
        WallLocus::Vertical { .. } => Rat::zero(),
    };

    let Some((need_rank, need_span)) = requirement(&radius_of(&best)) else {
        return LargestWallReport {
            degree,
            v: v.clone(),
            candidate: Some(best),
            maximality_certified: false,
            note: "certified bound exceeds the enumeration cap".into(),
        };
    };
    if i64::from(bounds.max_rank) >= need_rank && i64::from(bounds.max_c1_span) >= need_span {
        return LargestWallReport {
            degree,
            v: v.clone(),
            candidate: Some(best),
            maximality_certified: true,
            note: format!(
                "certified with max_rank >= {need_rank}, max_c1_span >= {need_span}"
            ),
        };
    }

    // one widened rescan settles it: a larger found radius only shrinks the
    // requirement
    let wide = Bounds {
        max_rank: need_rank.max(1) as u32,
        max_c1_span: need_span.max(1) as u32,
        ch2_denominator: bounds.ch2_denominator,
    };
    let second = scan_core(ctx, v, &window, &wide);
    let best = pick(&second).expect("widened rescan retains the found candidate");
    let certified = match requirement(&radius_of(&best)) {
        Some((rr, rs)) => i64::from(wide.max_rank) >= rr && i64::from(wide.max_c1_span) >= rs,
        None => false,
    };
    LargestWallReport {
        degree,
        v: v.clone(),
        candidate: Some(best),
        maximality_certified: certified,
        note: format!(
            "rescanned with max_rank = {}, max_c1_span = {}",
            wide.max_rank, wide.max_c1_span
        ),
    }
}
