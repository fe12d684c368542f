//! The rank-2 numerical lattice of the residual component.
//!
//! Basis classes embed into Chern characters as
//!
//! ```text
//! k1 = 1 - H^2/d          k2 = H - H^2/2 - (6-d) H^3 / (6d)
//! ```
//!
//! and the Euler form in this basis is the integer matrix
//! `E = [[-1, -1], [1-d, -d]]` with determinant 1. The rotation operator
//! `R = L_O( - tensor O(1))` is computed honestly through the mutation
//! formula and re-expressed in the basis; its matrix is
//! `[[1-d, -d], [1, 1]]`, which preserves `E` and satisfies the numerical
//! Serre relation `S^{-1} = -R^2` in every degree. Only at d = 1 does it
//! collapse to the constant `[[0, -1], [1, 1]]`.

use crate::numclass::{ChernCharacter, FanoContext, NumClassError};
use crate::rat::{is_integer, rat, ratio, Rat};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KuLatticeError {
    #[error("not an exceptional class: chi(e,e) = {0}, need 1")]
    NotExceptional(String),
    #[error("class {0} does not lie in the k1,k2 span")]
    BasisResolution(String),
    #[error(transparent)]
    Degree(#[from] NumClassError),
}

/// Integer point `x k1 + y k2` of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KuClass {
    pub x: i64,
    pub y: i64,
}

impl KuClass {
    pub fn new(x: i64, y: i64) -> Self {
        KuClass { x, y }
    }
}

impl fmt::Display for KuClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x == 0 && self.y == 0 {
            return write!(f, "0");
        }
        let mut first = true;
        for (coef, name) in [(self.x, "k1"), (self.y, "k2")] {
            if coef == 0 {
                continue;
            }
            if first {
                match coef {
                    1 => write!(f, "{name}")?,
                    -1 => write!(f, "-{name}")?,
                    c => write!(f, "{c} {name}")?,
                }
                first = false;
            } else {
                let sign = if coef > 0 { '+' } else { '-' };
                match coef.abs() {
                    1 => write!(f, " {sign} {name}")?,
                    c => write!(f, " {sign} {c} {name}")?,
                }
            }
        }
        Ok(())
    }
}

/// 2x2 integer operator on column vectors `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeOperator {
    pub name: String,
    pub m: [[i64; 2]; 2],
}

impl LatticeOperator {
    pub fn new(name: &str, m: [[i64; 2]; 2]) -> Self {
        LatticeOperator { name: name.into(), m }
    }

    pub fn identity() -> Self {
        LatticeOperator::new("id", [[1, 0], [0, 1]])
    }

    pub fn apply(&self, k: &KuClass) -> KuClass {
        KuClass::new(
            self.m[0][0] * k.x + self.m[0][1] * k.y,
            self.m[1][0] * k.x + self.m[1][1] * k.y,
        )
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &LatticeOperator) -> LatticeOperator {
        let a = &self.m;
        let b = &other.m;
        LatticeOperator::new(
            &format!("{}*{}", self.name, other.name),
            [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        )
    }

    pub fn det(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn neg(&self) -> LatticeOperator {
        let m = self.m;
        LatticeOperator::new(
            &format!("-{}", self.name),
            [[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]],
        )
    }

    /// Integral inverse; defined exactly when `det = +-1`.
    pub fn inverse(&self) -> Option<LatticeOperator> {
        let det = self.det();
        if det != 1 && det != -1 {
            return None;
        }
        let m = self.m;
        Some(LatticeOperator::new(
            &format!("{}^-1", self.name),
            [
                [det * m[1][1], det * -m[0][1]],
                [det * -m[1][0], det * m[0][0]],
            ],
        ))
    }

    pub fn transpose(&self) -> LatticeOperator {
        let m = self.m;
        LatticeOperator::new(
            &format!("{}^T", self.name),
            [[m[0][0], m[1][0]], [m[0][1], m[1][1]]],
        )
    }
}

pub fn kappa1(ctx: &FanoContext) -> ChernCharacter {
    ChernCharacter::new(rat(1), rat(0), -rat(1) / ctx.d(), rat(0))
}

pub fn kappa2(ctx: &FanoContext) -> ChernCharacter {
    let d = ctx.degree();
    ChernCharacter::new(rat(0), rat(1), ratio(-1, 2), ratio(-(6 - d), 6 * d))
}

/// `x k1 + y k2` as a Chern character.
pub fn embed(ctx: &FanoContext, k: &KuClass) -> ChernCharacter {
    &kappa1(ctx).scale(&rat(k.x)) + &kappa2(ctx).scale(&rat(k.y))
}

/// The Euler matrix in the `k1, k2` basis.
pub fn euler_matrix(d: i64) -> [[i64; 2]; 2] {
    [[-1, -1], [1 - d, -d]]
}

/// `a^T E b`.
pub fn euler_form_ku(d: i64, a: &KuClass, b: &KuClass) -> i64 {
    let e = euler_matrix(d);
    a.x * (e[0][0] * b.x + e[0][1] * b.y) + a.y * (e[1][0] * b.x + e[1][1] * b.y)
}

/// Numerical left mutation across an exceptional class:
/// `L_e(g) = g - chi(e, g) e`.
pub fn left_mutation(
    ctx: &FanoContext,
    e: &ChernCharacter,
    g: &ChernCharacter,
) -> Result<ChernCharacter, KuLatticeError> {
    let self_chi = ctx.euler_pairing(e, e);
    if self_chi != rat(1) {
        return Err(KuLatticeError::NotExceptional(self_chi.to_string()));
    }
    Ok(g - &e.scale(&ctx.euler_pairing(e, g)))
}

/// Writes a character as `x k1 + y k2`; fails when the higher coefficients
/// disagree with the span.
fn express_in_kappa(ctx: &FanoContext, e: &ChernCharacter) -> Result<(Rat, Rat), KuLatticeError> {
    let x = e.a0.clone();
    let y = e.a1.clone();
    let back = &kappa1(ctx).scale(&x) + &kappa2(ctx).scale(&y);
    if &back == e {
        Ok((x, y))
    } else {
        Err(KuLatticeError::BasisResolution(e.to_string()))
    }
}

fn integer_pair(ctx: &FanoContext, e: &ChernCharacter) -> Result<(i64, i64), KuLatticeError> {
    let (x, y) = express_in_kappa(ctx, e)?;
    if !is_integer(&x) || !is_integer(&y) {
        return Err(KuLatticeError::BasisResolution(e.to_string()));
    }
    let xi = x.to_integer().to_i64();
    let yi = y.to_integer().to_i64();
    match (xi, yi) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(KuLatticeError::BasisResolution(e.to_string())),
    }
}

/// Integer lattice coordinates of a character in the `k1, k2` span.
pub fn to_ku_class(ctx: &FanoContext, e: &ChernCharacter) -> Result<KuClass, KuLatticeError> {
    let (x, y) = integer_pair(ctx, e)?;
    Ok(KuClass::new(x, y))
}

/// The rotation `R = L_O( - tensor O(1))`, computed by pushing the basis
/// through tensor-and-mutate and re-expressing, not by quoting a matrix.
pub fn rotation(ctx: &FanoContext) -> Result<LatticeOperator, KuLatticeError> {
    let o = ChernCharacter::unit();
    let mut cols = [[0i64; 2]; 2];
    for (j, k) in [KuClass::new(1, 0), KuClass::new(0, 1)].iter().enumerate() {
        let image = left_mutation(ctx, &o, &embed(ctx, k).tensor_line(1))?;
        let (x, y) = integer_pair(ctx, &image)?;
        cols[0][j] = x;
        cols[1][j] = y;
    }
    Ok(LatticeOperator::new("R", cols))
}

/// Numerical Serre operator `S = E^{-1} E^T` from `chi(a,b) = chi(b, S a)`;
/// integral because `det E = 1`.
pub fn serre_operator(d: i64) -> LatticeOperator {
    let e = LatticeOperator::new("E", euler_matrix(d));
    let inv = e.inverse().expect("det E = 1");
    let mut s = inv.compose(&e.transpose());
    s.name = "S".into();
    s
}

/// All `(x, y)` with `|x|, |y| <= box_size` and self-pairing `-1`, sorted.
pub fn minus_one_classes(d: i64, box_size: i64) -> Vec<KuClass> {
    assert!(box_size >= 2, "box must be at least 2");
    let mut out = Vec::new();
    for x in -box_size..=box_size {
        for y in -box_size..=box_size {
            let k = KuClass::new(x, y);
            if euler_form_ku(d, &k, &k) == -1 {
                out.push(k);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub degree: i64,
    pub start: KuClass,
    pub classes: Vec<KuClass>,
    /// `None` when the orbit did not close within `max_steps`.
    pub period: Option<usize>,
}

/// Iterates the rotation from `start` until the orbit closes or
/// `max_steps` applications have been made.
pub fn rotation_orbit(
    d: i64,
    start: &KuClass,
    max_steps: usize,
) -> Result<OrbitReport, KuLatticeError> {
    let ctx = FanoContext::new(d)?;
    let r = rotation(&ctx)?;
    let mut classes = vec![*start];
    let mut period = None;
    for _ in 0..max_steps {
        let next = r.apply(classes.last().expect("nonempty"));
        if next == *start {
            period = Some(classes.len());
            break;
        }
        classes.push(next);
    }
    Ok(OrbitReport { degree: d, start: *start, classes, period })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numclass::HilbertPolynomial;

    fn ctx(d: i64) -> FanoContext {
        FanoContext::new(d).unwrap()
    }

    #[test]
    fn embedding_of_the_basis() {
        let c = ctx(1);
        assert_eq!(
            embed(&c, &KuClass::new(1, 0)),
            ChernCharacter::of_ints(1, 0, -1, 0)
        );
        assert_eq!(
            embed(&c, &KuClass::new(0, 1)),
            ChernCharacter::new(rat(0), rat(1), ratio(-1, 2), ratio(-5, 6))
        );
        for d in 1..=5 {
            assert!(embed(&ctx(d), &KuClass::new(0, 0)).is_zero());
        }
    }

    #[test]
    fn euler_matrix_entries() {
        assert_eq!(euler_form_ku(1, &KuClass::new(1, 0), &KuClass::new(1, 0)), -1);
        assert_eq!(euler_form_ku(5, &KuClass::new(0, 1), &KuClass::new(1, 0)), -4);
        assert_eq!(euler_form_ku(3, &KuClass::new(0, 0), &KuClass::new(2, -5)), 0);
    }

    #[test]
    fn euler_form_matches_the_chern_level_pairing() {
        // keystone cross-module check: the quoted matrix against
        // Riemann-Roch through the embedding, over a full box in every degree
        for d in 1..=5 {
            let c = ctx(d);
            for ax in -3..=3 {
                for ay in -3..=3 {
                    for bx in -3..=3 {
                        for by in -3..=3 {
                            let a = KuClass::new(ax, ay);
                            let b = KuClass::new(bx, by);
                            assert_eq!(
                                rat(euler_form_ku(d, &a, &b)),
                                c.euler_pairing(&embed(&c, &a), &embed(&c, &b)),
                                "d={d} a=({ax},{ay}) b=({bx},{by})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn left_mutation_of_twisted_ideal() {
        let c = ctx(1);
        let o = ChernCharacter::unit();
        let g = ChernCharacter::new(rat(1), rat(1), ratio(1, 2), ratio(-5, 6));
        assert_eq!(c.euler_pairing(&o, &g), rat(2));
        let m = left_mutation(&c, &o, &g).unwrap();
        assert_eq!(m, ChernCharacter::new(rat(-1), rat(1), ratio(1, 2), ratio(-5, 6)));
        assert_eq!(m, embed(&c, &KuClass::new(-1, 1)));
    }

    #[test]
    fn left_mutation_edge_cases() {
        let c = ctx(1);
        let o = ChernCharacter::unit();
        // orthogonal class passes through
        let g = ChernCharacter::of_ints(0, 0, 1, -1);
        assert_eq!(c.euler_pairing(&o, &g), rat(0));
        assert_eq!(left_mutation(&c, &o, &g).unwrap(), g);
        // self-mutation kills the class
        assert!(left_mutation(&c, &o, &o).unwrap().is_zero());
        // non-exceptional e rejected
        let e2 = o.scale(&rat(2));
        assert!(matches!(
            left_mutation(&c, &e2, &g),
            Err(KuLatticeError::NotExceptional(_))
        ));
    }

    #[test]
    fn rotation_matrix_by_degree() {
        for d in 1..=5 {
            let r = rotation(&ctx(d)).unwrap();
            assert_eq!(r.m, [[1 - d, -d], [1, 1]]);
            assert_eq!(r.det(), 1);
        }
        // degree 1 collapses to the familiar constant
        assert_eq!(rotation(&ctx(1)).unwrap().m, [[0, -1], [1, 1]]);
    }

    #[test]
    fn rotation_chain_on_the_basis() {
        let r = rotation(&ctx(1)).unwrap();
        assert_eq!(r.apply(&KuClass::new(0, 1)), KuClass::new(-1, 1));
        assert_eq!(r.apply(&KuClass::new(-1, 1)), KuClass::new(-1, 0));
        let r3 = r.compose(&r).compose(&r);
        assert_eq!(r3.m, [[-1, 0], [0, -1]]);
        let r6 = r3.compose(&r3);
        assert_eq!(r6.m, LatticeOperator::identity().m);
    }

    #[test]
    fn rotation_preserves_the_euler_form() {
        for d in 1..=5 {
            let r = rotation(&ctx(d)).unwrap();
            let e = LatticeOperator::new("E", euler_matrix(d));
            assert_eq!(r.transpose().compose(&e).compose(&r).m, e.m, "d={d}");
        }
    }

    #[test]
    fn serre_operator_and_the_rotation_square() {
        let s1 = serre_operator(1);
        assert_eq!(s1.m, [[0, -1], [1, 1]]);
        assert_eq!(s1.inverse().unwrap().m, [[1, 1], [-1, 0]]);
        for d in 1..=5 {
            let s = serre_operator(d);
            assert_eq!(s.det().abs(), 1, "invertible over Q");
            let r = rotation(&ctx(d)).unwrap();
            let minus_r2 = r.compose(&r).neg();
            // numerical Serre relation S^{-1} = -R^2
            assert_eq!(s.compose(&minus_r2).m, LatticeOperator::identity().m, "d={d}");
        }
    }

    #[test]
    fn serre_adjointness() {
        for d in 1..=5 {
            let s = serre_operator(d);
            for ax in -4..=4 {
                for ay in -4..=4 {
                    let a = KuClass::new(ax, ay);
                    let sa = s.apply(&a);
                    for (bx, by) in [(1, 0), (0, 1), (2, -3), (-1, 4)] {
                        let b = KuClass::new(bx, by);
                        assert_eq!(
                            euler_form_ku(d, &a, &b),
                            euler_form_ku(d, &b, &sa),
                            "d={d}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn minus_one_classes_by_degree() {
        let expect = vec![
            KuClass::new(-1, 0),
            KuClass::new(-1, 1),
            KuClass::new(0, -1),
            KuClass::new(0, 1),
            KuClass::new(1, -1),
            KuClass::new(1, 0),
        ];
        assert_eq!(minus_one_classes(1, 10), expect);
        assert_eq!(minus_one_classes(1, 2), expect);
        // d=2: x^2 + 2xy + 2y^2 = (x+y)^2 + y^2 = 1
        assert_eq!(
            minus_one_classes(2, 3),
            vec![
                KuClass::new(-1, 0),
                KuClass::new(-1, 1),
                KuClass::new(1, -1),
                KuClass::new(1, 0),
            ]
        );
    }

    #[test]
    fn orbit_of_kappa1_has_period_six() {
        let report = rotation_orbit(1, &KuClass::new(1, 0), 50).unwrap();
        assert_eq!(report.period, Some(6));
        assert_eq!(
            report.classes,
            vec![
                KuClass::new(1, 0),
                KuClass::new(0, 1),
                KuClass::new(-1, 1),
                KuClass::new(-1, 0),
                KuClass::new(0, -1),
                KuClass::new(1, -1),
            ]
        );
    }

    #[test]
    fn orbit_edge_cases() {
        let fixed = rotation_orbit(1, &KuClass::new(0, 0), 10).unwrap();
        assert_eq!(fixed.period, Some(1));
        assert_eq!(fixed.classes.len(), 1);

        let doubled = rotation_orbit(1, &KuClass::new(2, 0), 50).unwrap();
        assert_eq!(doubled.period, Some(6));
        assert_eq!(doubled.classes[1], KuClass::new(0, 2));

        // unipotent-type rotation in degree 4 never closes
        let open = rotation_orbit(4, &KuClass::new(1, 0), 25).unwrap();
        assert_eq!(open.period, None);
        assert_eq!(open.classes.len(), 26);
    }

    #[test]
    fn e_p_class_consistency() {
        // embed(k2) = [I_p] - [O(-1)] in degree 1
        let c = ctx(1);
        let i_p = ChernCharacter::of_ints(1, 0, 0, -1);
        let o_minus = c.line_bundle(-1);
        assert_eq!(embed(&c, &KuClass::new(0, 1)), &i_p - &o_minus);
    }

    #[test]
    fn f_p_class_consistency() {
        // the ideal-of-a-line pipeline: class_from_hilbert(t+1, dim 1) is
        // [O_l], and [O_Y] - [I_l] = -(embed k1) in degree 1
        let c = ctx(1);
        let p = HilbertPolynomial::new([rat(1), rat(1), rat(0), rat(0)]);
        let o_l = c.class_from_hilbert(&p, 1).unwrap();
        assert_eq!(o_l, ChernCharacter::of_ints(0, 0, 1, 0));
        assert_eq!(&o_l - &ChernCharacter::unit(), embed(&c, &KuClass::new(-1, 0)));
    }

    #[test]
    fn chi_matrix_consistency_for_the_point_objects() {
        // chi between the F_p and E_p classes via Riemann-Roch equals the
        // lattice pairing of (-1,0) and (0,1)
        let c = ctx(1);
        let f = embed(&c, &KuClass::new(-1, 0));
        let e = embed(&c, &KuClass::new(0, 1));
        let by_matrix = euler_form_ku(1, &KuClass::new(-1, 0), &KuClass::new(0, 1));
        assert_eq!(c.euler_pairing(&f, &e), rat(by_matrix));
        assert_eq!(by_matrix, 1);
    }

    #[test]
    fn json_shapes() {
        assert_eq!(
            serde_json::to_string(&KuClass::new(-1, 1)).unwrap(),
            r#"{"x":-1,"y":1}"#
        );
        let op = serre_operator(1);
        assert_eq!(
            serde_json::to_string(&op).unwrap(),
            r#"{"name":"S","m":[[0,-1],[1,1]]}"#
        );
        assert_eq!(KuClass::new(-1, 1).to_string(), "-k1 + k2");
        assert_eq!(KuClass::new(0, 0).to_string(), "0");
        assert_eq!(KuClass::new(2, -3).to_string(), "2 k1 - 3 k2");
    }
}
