//! Numerical Chern classes on an index-2 Fano threefold.
//!
//! A class is the coefficient vector `(a0, a1, a2, a3)` of
//! `ch(E) = a0 + a1 H + a2 H^2 + a3 H^3` where `H` is the ample generator,
//! `H^3 = d` in 1..=5, and `-K_Y = 2H`. The second Chern class of `Y` is
//! pinned by `chi(O_Y) = 1`: `c1 c2 = 24`, hence `H c2 = 12`.
//!
//! Riemann-Roch collapses to a weighted sum of the coefficients:
//!
//! ```text
//! chi(E) = d a3 + d a2 + (4d+12)/12 a1 + a0
//! ```
//!
//! All arithmetic is exact; the only floats in this crate live in the SVG
//! renderer.

use crate::rat::{rat, rat_string, Int, Rat};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumClassError {
    #[error("unsupported degree {0}: expected 1..=5")]
    UnsupportedDegree(i64),
    #[error("no class of dimension {dim} has Hilbert polynomial {poly}")]
    InconsistentDimension { dim: u8, poly: String },
    #[error("reduced Hilbert order undefined: leading coefficient of {0} not positive")]
    UndefinedOrder(String),
}

/// Degree context: everything else about the threefold is forced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoContext {
    degree: i64,
}

impl FanoContext {
    pub fn new(degree: i64) -> Result<Self, NumClassError> {
        if (1..=5).contains(&degree) {
            Ok(FanoContext { degree })
        } else {
            Err(NumClassError::UnsupportedDegree(degree))
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// `H^3` as a rational, for formulas.
    pub fn d(&self) -> Rat {
        rat(self.degree)
    }

    /// Todd pairing weights `(t0, t1, t2, t3)` against `(d a3, a2, a1, a0)`:
    /// `chi = t0 (d a3) + t1 a2 + t2 a1 + t3 a0` with
    /// `(1, d, (4d+12)/12, 1)`. Kept as data so the `chi(O_Y) = 1`
    /// normalization is testable on its own.
    pub fn todd_weights(&self) -> [Rat; 4] {
        [
            rat(1),
            self.d(),
            Rat::new(Int::from(4 * self.degree + 12), Int::from(12)),
            rat(1),
        ]
    }

    /// Euler characteristic by Riemann-Roch.
    pub fn chi(&self, e: &ChernCharacter) -> Rat {
        let [t0, t1, t2, t3] = self.todd_weights();
        t0 * self.d() * &e.a3 + t1 * &e.a2 + t2 * &e.a1 + t3 * &e.a0
    }

    /// `chi(E, F) = chi(E^vee tensor F)`, the Euler pairing.
    pub fn euler_pairing(&self, e: &ChernCharacter, f: &ChernCharacter) -> Rat {
        self.chi(&e.dual().product(f))
    }

    /// Hilbert polynomial `P_E(t) = chi(E(t))`, exact in `t`.
    pub fn hilbert_polynomial(&self, e: &ChernCharacter) -> HilbertPolynomial {
        let d = self.d();
        let third = Rat::new(Int::from(self.degree + 3), Int::from(3));
        HilbertPolynomial {
            coeffs: [
                self.chi(e),
                &d * &e.a2 + &d * &e.a1 + &third * &e.a0,
                &d * (&e.a1 + &e.a0) / rat(2),
                &d * &e.a0 / rat(6),
            ],
        }
    }

    /// Inverts `hilbert_polynomial` on classes supported in dimension
    /// `<= dim`: coefficients `a_i` with `i < 3 - dim` must vanish.
    pub fn class_from_hilbert(
        &self,
        p: &HilbertPolynomial,
        dim: u8,
    ) -> Result<ChernCharacter, NumClassError> {
        assert!(dim <= 3, "dimension must be 0..=3");
        let d = self.d();
        let third = Rat::new(Int::from(self.degree + 3), Int::from(3));
        // The system is triangular from the top coefficient down.
        let a0 = rat(6) * &p.coeffs[3] / &d;
        let a1 = rat(2) * &p.coeffs[2] / &d - &a0;
        let a2 = (&p.coeffs[1] - &d * &a1 - &third * &a0) / &d;
        let a3 = (&p.coeffs[0] - &d * &a2 - &third * &a1 - &a0) / &d;
        let e = ChernCharacter { a0, a1, a2, a3 };
        let low = [&e.a0, &e.a1, &e.a2];
        if low.iter().take(3 - dim as usize).any(|a| !a.is_zero()) {
            return Err(NumClassError::InconsistentDimension {
                dim,
                poly: p.to_string(),
            });
        }
        Ok(e)
    }

    /// Total preorder by reduced Hilbert polynomial, the numerical shadow of
    /// the Gieseker order: compare `P/lc(P)` coefficientwise from degree 3
    /// down. Errors unless both leading coefficients are positive.
    pub fn compare_reduced_hilbert(
        &self,
        e: &ChernCharacter,
        f: &ChernCharacter,
    ) -> Result<Ordering, NumClassError> {
        let pe = self.hilbert_polynomial(e).reduced()?;
        let pf = self.hilbert_polynomial(f).reduced()?;
        for i in (0..4).rev() {
            match pe.coeffs[i].cmp(&pf.coeffs[i]) {
                Ordering::Equal => continue,
                ord => return Ok(ord),
            }
        }
        Ok(Ordering::Equal)
    }

    /// `ch(O_Y(kH)) = e^{kH}`.
    pub fn line_bundle(&self, k: i64) -> ChernCharacter {
        ChernCharacter::unit().tensor_line(k)
    }

    /// Class of a point, `H^3/d`.
    pub fn point_class(&self) -> ChernCharacter {
        ChernCharacter {
            a0: rat(0),
            a1: rat(0),
            a2: rat(0),
            a3: rat(1) / self.d(),
        }
    }

    /// Class of a line (degree-1 curve), `H^2/d`.
    pub fn line_class(&self) -> ChernCharacter {
        ChernCharacter {
            a0: rat(0),
            a1: rat(0),
            a2: rat(1) / self.d(),
            a3: rat(0),
        }
    }
}

/// `ch(E)` as an `H`-power coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChernCharacter {
    #[serde(with = "rat_string")]
    pub a0: Rat,
    #[serde(with = "rat_string")]
    pub a1: Rat,
    #[serde(with = "rat_string")]
    pub a2: Rat,
    #[serde(with = "rat_string")]
    pub a3: Rat,
}

impl ChernCharacter {
    pub fn new(a0: Rat, a1: Rat, a2: Rat, a3: Rat) -> Self {
        ChernCharacter { a0, a1, a2, a3 }
    }

    pub fn of_ints(a0: i64, a1: i64, a2: i64, a3: i64) -> Self {
        ChernCharacter::new(rat(a0), rat(a1), rat(a2), rat(a3))
    }

    pub fn zero() -> Self {
        ChernCharacter::of_ints(0, 0, 0, 0)
    }

    /// `ch(O_Y) = 1`.
    pub fn unit() -> Self {
        ChernCharacter::of_ints(1, 0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.a1.is_zero() && self.a2.is_zero() && self.a3.is_zero()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        ChernCharacter::new(c * &self.a0, c * &self.a1, c * &self.a2, c * &self.a3)
    }

    /// Truncation to the part walls can see.
    pub fn with_zero_a3(&self) -> Self {
        ChernCharacter::new(self.a0.clone(), self.a1.clone(), self.a2.clone(), Rat::zero())
    }

    /// Twisted character `ch^beta = e^{-beta H} ch`.
    pub fn twist(&self, beta: &Rat) -> Self {
        let b2 = beta * beta;
        let b3 = &b2 * beta;
        ChernCharacter::new(
            self.a0.clone(),
            &self.a1 - beta * &self.a0,
            &self.a2 - beta * &self.a1 + &b2 / rat(2) * &self.a0,
            &self.a3 - beta * &self.a2 + &b2 / rat(2) * &self.a1 - &b3 / rat(6) * &self.a0,
        )
    }

    /// Multiplication by `e^{kH}`, i.e. tensoring with `O_Y(kH)`.
    pub fn tensor_line(&self, k: i64) -> Self {
        self.twist(&rat(-k))
    }

    /// Dual class: signs alternate in cohomological degree.
    pub fn dual(&self) -> Self {
        ChernCharacter::new(
            self.a0.clone(),
            -self.a1.clone(),
            self.a2.clone(),
            -self.a3.clone(),
        )
    }

    /// Cup product truncated beyond `H^3`.
    pub fn product(&self, other: &ChernCharacter) -> Self {
        let a = [&self.a0, &self.a1, &self.a2, &self.a3];
        let b = [&other.a0, &other.a1, &other.a2, &other.a3];
        let mut c = [rat(0), rat(0), rat(0), rat(0)];
        for i in 0..4 {
            for j in 0..4 - i {
                c[i + j] += a[i] * b[j];
            }
        }
        let [c0, c1, c2, c3] = c;
        ChernCharacter::new(c0, c1, c2, c3)
    }
}

impl std::ops::Add for &ChernCharacter {
    type Output = ChernCharacter;
    fn add(self, rhs: &ChernCharacter) -> ChernCharacter {
        ChernCharacter::new(
            &self.a0 + &rhs.a0,
            &self.a1 + &rhs.a1,
            &self.a2 + &rhs.a2,
            &self.a3 + &rhs.a3,
        )
    }
}

impl std::ops::Sub for &ChernCharacter {
    type Output = ChernCharacter;
    fn sub(self, rhs: &ChernCharacter) -> ChernCharacter {
        ChernCharacter::new(
            &self.a0 - &rhs.a0,
            &self.a1 - &rhs.a1,
            &self.a2 - &rhs.a2,
            &self.a3 - &rhs.a3,
        )
    }
}

impl std::ops::Neg for &ChernCharacter {
    type Output = ChernCharacter;
    fn neg(self) -> ChernCharacter {
        self.scale(&rat(-1))
    }
}

impl fmt::Display for ChernCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ch({}, {}, {}, {})", self.a0, self.a1, self.a2, self.a3)
    }
}

/// Polynomial of degree at most 3, coefficients ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertPolynomial {
    #[serde(with = "rat_vec")]
    pub coeffs: [Rat; 4],
}

mod rat_vec {
    use super::*;
    use serde::{de::Error, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &[Rat; 4], ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = ser.serialize_seq(Some(4))?;
        for x in c {
            seq.serialize_element(&crate::rat::rat_to_string(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<[Rat; 4], D::Error> {
        let v = Vec::<String>::deserialize(de)?;
        if v.len() != 4 {
            return Err(D::Error::custom("expected 4 coefficients"));
        }
        let mut out = [rat(0), rat(0), rat(0), rat(0)];
        for (i, s) in v.iter().enumerate() {
            out[i] = crate::rat::rat_from_str(s).map_err(D::Error::custom)?;
        }
        Ok(out)
    }
}

impl HilbertPolynomial {
    pub fn new(coeffs: [Rat; 4]) -> Self {
        HilbertPolynomial { coeffs }
    }

    pub fn constant(c: Rat) -> Self {
        HilbertPolynomial::new([c, rat(0), rat(0), rat(0)])
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        // Horner, degree 3.
        let mut acc = self.coeffs[3].clone();
        for i in (0..3).rev() {
            acc = acc * t + &self.coeffs[i];
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Leading (highest-degree nonzero) coefficient, if any.
    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.iter().rev().find(|c| !c.is_zero())
    }

    fn reduced(&self) -> Result<HilbertPolynomial, NumClassError> {
        match self.leading() {
            Some(lc) if lc.is_positive() => {
                let lc = lc.clone();
                let mut c = self.coeffs.clone();
                for x in &mut c {
                    *x /= &lc;
                }
                Ok(HilbertPolynomial::new(c))
            }
            _ => Err(NumClassError::UndefinedOrder(self.to_string())),
        }
    }
}

impl fmt::Display for HilbertPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in (0..4).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Componentwise denominator gate. The default `(1, 1, 2, 6)` covers the
/// classes that drive the low-degree examples; legitimate classes can carry
/// other denominators (kappa2 at even degree, curve classes in (1/d)Z), so
/// the gate is advisory and never blocks a computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenomGate {
    pub denoms: [Int; 4],
}

impl Default for DenomGate {
    fn default() -> Self {
        DenomGate {
            denoms: [Int::from(1), Int::from(1), Int::from(2), Int::from(6)],
        }
    }
}

impl DenomGate {
    /// Parses `"1,1,2,6"`-style overrides (the `FANO_WALLS_DENOM_GATE`
    /// format). Each entry must be a positive integer.
    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(format!("expected 4 comma-separated integers, got {s:?}"));
        }
        let mut denoms = [Int::from(1), Int::from(1), Int::from(1), Int::from(1)];
        for (i, p) in parts.iter().enumerate() {
            let n: Int = p
                .parse()
                .map_err(|e| format!("bad gate entry {p:?}: {e}"))?;
            if !n.is_positive() {
                return Err(format!("gate entry {p:?} must be positive"));
            }
            denoms[i] = n;
        }
        Ok(DenomGate { denoms })
    }

    /// Indices of components `a_i` with `denoms[i] * a_i` non-integral.
    pub fn violations(&self, e: &ChernCharacter) -> Vec<usize> {
        let comps = [&e.a0, &e.a1, &e.a2, &e.a3];
        (0..4)
            .filter(|&i| !crate::rat::is_integer(&(comps[i] * Rat::from_integer(self.denoms[i].clone()))))
            .collect()
    }

    pub fn passes(&self, e: &ChernCharacter) -> bool {
        self.violations(e).is_empty()
    }
}
