//! The bundled verification suite: every acceptance identity as one named
//! check, shared between `cargo test` and the `verify` subcommand. All
//! comparisons are exact; randomized checks run from fixed seeds.

use crate::expr::parse_class_expr;
use crate::kulattice::{
    embed, euler_form_ku, kappa1, left_mutation, minus_one_classes, rotation, rotation_orbit,
    serre_operator, KuClass, LatticeOperator,
};
use crate::numclass::{ChernCharacter, FanoContext, HilbertPolynomial};
use crate::rat::{rat, ratio, Rat};
use crate::specseq::{
    abutment_dims, euler_check, next_page, Dim, DifferentialSpec, PageTable,
};
use crate::walls::{
    numerical_wall, scan_candidates, verify_strip_empty, Bounds, Minimality, Wall,
    WallComputation, WallLocus, Window,
};
use crate::weakstab::{bms_inequality, q_form};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

/// Fixed-seed generator for the randomized suites.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `lo..=hi`.
    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    fn rat(&mut self, denom_max: i64) -> Rat {
        ratio(self.int(-24, 24), self.int(1, denom_max))
    }

    fn class(&mut self) -> ChernCharacter {
        ChernCharacter::new(
            rat(self.int(-4, 4)),
            rat(self.int(-4, 4)),
            self.rat(2),
            self.rat(6),
        )
    }
}

fn ctx(d: i64) -> FanoContext {
    FanoContext::new(d).expect("degree in range")
}

fn check<F>(id: u32, name: &str, body: F) -> CheckResult
where
    F: FnOnce() -> Result<String, String>,
{
    match body() {
        Ok(detail) => CheckResult { id, name: name.into(), passed: true, detail },
        Err(detail) => CheckResult { id, name: name.into(), passed: false, detail },
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn chk_euler_matrix() -> Result<String, String> {
    for d in 1..=5 {
        let c = ctx(d);
        let basis = [KuClass::new(1, 0), KuClass::new(0, 1)];
        let expect = [[rat(-1), rat(-1)], [rat(1 - d), rat(-d)]];
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let got = c.euler_pairing(&embed(&c, a), &embed(&c, b));
                ensure(
                    got == expect[i][j],
                    format!("d={d}: chi(k{},k{}) = {got}, want {}", i + 1, j + 1, expect[i][j]),
                )?;
            }
        }
    }
    Ok("chi-matrix [[-1,-1],[1-d,-d]] reproduced for d=1..5".into())
}

fn chk_sections() -> Result<String, String> {
    let c = ctx(1);
    let chi1 = c.chi(&c.line_bundle(1));
    let chi2 = c.chi(&c.line_bundle(2));
    ensure(chi1 == rat(3), format!("chi(O(1)) = {chi1}, want 3"))?;
    ensure(chi2 == rat(7), format!("chi(O(2)) = {chi2}, want 7"))?;
    Ok("chi(O(1)) = 3 and chi(O(2)) = 7 at d=1".into())
}

fn chk_ideal_class() -> Result<String, String> {
    let p = HilbertPolynomial::new([rat(1), rat(1), rat(0), rat(0)]);
    for d in 1..=5 {
        let c = ctx(d);
        let line = c.class_from_hilbert(&p, 1).map_err(|e| e.to_string())?;
        let ideal = &ChernCharacter::unit() - &line;
        let k1 = embed(&c, &KuClass::new(1, 0));
        ensure(ideal == k1, format!("d={d}: [O]-[O_l] = {ideal}, want {k1}"))?;
    }
    Ok("unit minus class_from_hilbert(1+t, dim 1) = k1 for d=1..5".into())
}

fn chk_chi_ideal_point() -> Result<String, String> {
    let c = ctx(1);
    let got = c.euler_pairing(&embed(&c, &KuClass::new(1, 0)), &c.point_class());
    ensure(got == rat(1), format!("chi(I_Z, O_p) = {got}, want 1"))?;
    Ok("chi(I_Z, O_p) = 1 at d=1".into())
}

fn chk_wall_geometry() -> Result<String, String> {
    let c = ctx(1);
    let v = embed(&c, &KuClass::new(-1, 0));
    match numerical_wall(&c, &v, &c.line_bundle(-1)) {
        WallComputation::Wall(Wall {
            locus: WallLocus::Semicircle { center, radius_sq },
            ..
        }) if center == ratio(-3, 2) && radius_sq == ratio(1, 4) => {}
        other => return Err(format!("wall vs O(-1): {other:?}, want semicircle -3/2, 1/4")),
    }
    match numerical_wall(&c, &v, &ChernCharacter::unit()) {
        WallComputation::Wall(Wall { locus: WallLocus::Vertical { beta0 }, .. })
            if beta0 == rat(0) => {}
        other => return Err(format!("wall vs O_Y: {other:?}, want vertical at 0")),
    }
    Ok("O(-1) wall is the semicircle (-3/2, 1/4); O_Y wall is vertical at 0".into())
}

fn chk_strip_empty() -> Result<String, String> {
    let c = ctx(1);
    let v = embed(&c, &KuClass::new(-1, 0));
    let window = Window::new(rat(-1), rat(0), rat(4)).map_err(|e| e.to_string())?;
    let scan = scan_candidates(&c, &v, &window, &Bounds::default());
    ensure(scan.candidates.is_empty(), format!("{} candidates in the strip", scan.candidates.len()))?;
    ensure(scan.completeness.is_certified(), "scan bounds not certified".to_string())?;
    let strip = verify_strip_empty(&c, &v, rat(-1), rat(0)).map_err(|e| e.to_string())?;
    match &strip.minimality {
        Minimality::Holds { im_abs, generator, .. } => {
            ensure(
                im_abs == &rat(1) && generator == &rat(1),
                format!("im minimality: |im| = {im_abs}, generator {generator}"),
            )?;
        }
        m => return Err(format!("minimality not applicable: {m:?}")),
    }
    ensure(strip.strip_empty_certified, "strip emptiness not certified".to_string())?;
    Ok("strip (-1,0) certified empty; |Im Z| = 1 = lattice generator at beta = -1".into())
}

fn chk_bms_thresholds() -> Result<String, String> {
    let c = ctx(1);
    let zero = rat(0);
    let cases = [
        (ratio(-1, 2), ratio(3, 2)),
        (rat(-1), rat(1)),
    ];
    for (beta, m_max) in cases {
        let at = |m: &Rat| {
            bms_inequality(
                &c,
                &ChernCharacter::new(rat(1), rat(0), rat(-1), m.clone()),
                &zero,
                &beta,
            )
        };
        let at_bound = at(&m_max);
        ensure(
            at_bound == rat(0),
            format!("beta={beta}: value at m={m_max} is {at_bound}, want 0"),
        )?;
        ensure(
            at(&(&m_max - rat(1))).is_positive(),
            format!("beta={beta}: inequality not satisfied below the bound"),
        )?;
        ensure(
            at(&(&m_max + rat(1))).is_negative(),
            format!("beta={beta}: inequality not violated above the bound"),
        )?;
    }
    Ok("thresholds m <= 3/2 at beta=-1/2 and m <= 1 at beta=-1 on (1,0,-1,m), s=0".into())
}

fn chk_rotation() -> Result<String, String> {
    for d in 1..=5 {
        let c = ctx(d);
        let r = rotation(&c).map_err(|e| e.to_string())?;
        ensure(
            r.m == [[1 - d, -d], [1, 1]],
            format!("d={d}: computed R = {:?}", r.m),
        )?;
        // [M_p] = k2 - d k1 through the defining mutation
        let i_p1 = (&ChernCharacter::unit() - &c.point_class()).tensor_line(1);
        let m_p = left_mutation(&c, &ChernCharacter::unit(), &i_p1).map_err(|e| e.to_string())?;
        let want = embed(&c, &KuClass::new(-d, 1));
        ensure(m_p == want, format!("d={d}: [M_p] = {m_p}, want {want}"))?;
    }
    let r1 = rotation(&ctx(1)).map_err(|e| e.to_string())?;
    ensure(r1.m == [[0, -1], [1, 1]], format!("d=1 matrix {:?}", r1.m))?;
    ensure(
        r1.apply(&KuClass::new(0, 1)) == KuClass::new(-1, 1)
            && r1.apply(&KuClass::new(-1, 1)) == KuClass::new(-1, 0),
        "rotation chain k2 -> k2-k1 -> -k1 failed".to_string(),
    )?;
    Ok("R = [[1-d,-d],[1,1]] (d=1: [[0,-1],[1,1]]); [M_p] = k2 - d k1 for d=1..5".into())
}

fn chk_orbit() -> Result<String, String> {
    let report = rotation_orbit(1, &KuClass::new(1, 0), 10).map_err(|e| e.to_string())?;
    ensure(report.period == Some(6), format!("period {:?}, want 6", report.period))?;
    let mut orbit = report.classes.clone();
    orbit.sort_by_key(|k| (k.x, k.y));
    let minus_ones = minus_one_classes(1, 50);
    ensure(
        orbit == minus_ones,
        format!("orbit {orbit:?} != (-1)-classes {minus_ones:?}"),
    )?;
    let expect: Vec<KuClass> = [(-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0)]
        .iter()
        .map(|&(x, y)| KuClass::new(x, y))
        .collect();
    ensure(minus_ones == expect, format!("(-1)-classes in box 50: {minus_ones:?}"))?;
    Ok("orbit of k1 has period 6 and equals the six (-1)-classes (box 50)".into())
}

fn chk_serre() -> Result<String, String> {
    let c = ctx(1);
    let s = serre_operator(1);
    let r = rotation(&c).map_err(|e| e.to_string())?;
    let minus_r2 = r.compose(&r).neg();
    ensure(
        s.compose(&minus_r2).m == LatticeOperator::identity().m,
        format!("S * (-R^2) = {:?}", s.compose(&minus_r2).m),
    )?;
    let mut rng = SplitMix64(0x5eed_0010);
    for _ in 0..100 {
        let a = KuClass::new(rng.int(-50, 50), rng.int(-50, 50));
        let b = KuClass::new(rng.int(-50, 50), rng.int(-50, 50));
        let lhs = euler_form_ku(1, &a, &b);
        let rhs = euler_form_ku(1, &b, &s.apply(&a));
        ensure(lhs == rhs, format!("chi({a},{b}) = {lhs} but chi({b}, S {a}) = {rhs}"))?;
    }
    Ok("S^-1 = -R^2 at d=1; chi(a,b) = chi(b,Sa) on 100 seeded pairs".into())
}

fn chk_spectral_sequences() -> Result<String, String> {
    // ideal-sheaf self-exts
    let e1 = PageTable::with_entries(
        1,
        &[
            (0, 0, 2),
            (1, 0, 2),
            (0, 1, 5),
            (1, 1, 1),
            (-1, 2, 1),
            (0, 2, 3),
            (-1, 3, 2),
            (0, 3, 1),
        ],
    );
    let d1 = DifferentialSpec::new()
        .rank(0, 0, 1)
        .rank(0, 1, 1)
        .rank(-1, 2, 1)
        .unknown_rank(-1, 3);
    let e2 = next_page(&e1, &d1).map_err(|e| e.to_string())?;
    let ext1 = abutment_dims(&e2).get(&1).copied();
    ensure(ext1 == Some(Dim::Known(5)), format!("ext1(I_Z,I_Z) = {ext1:?}, want 5"))?;
    let chi1 = euler_check(&e1);
    ensure(
        chi1.exact() == Some(-1),
        format!("first-page alternating sum {chi1:?}, want -1"),
    )?;
    for rho in 0..=1 {
        let concrete = DifferentialSpec::new()
            .rank(0, 0, 1)
            .rank(0, 1, 1)
            .rank(-1, 2, 1)
            .rank(-1, 3, rho);
        let page = next_page(&e1, &concrete).map_err(|e| e.to_string())?;
        ensure(
            euler_check(&page).exact() == Some(-1),
            format!("alternating sum not conserved at rho={rho}"),
        )?;
    }

    // pencil-of-conics complex
    let mut g1 = PageTable::with_entries(1, &[(0, 0, 2), (1, 0, 1), (0, 1, 2), (-1, 2, 1)]);
    g1.set(0, 2, Dim::Unknown);
    let g2 = next_page(&g1, &DifferentialSpec::new().rank(0, 0, 1)).map_err(|e| e.to_string())?;
    let ext1 = abutment_dims(&g2).get(&1).copied();
    ensure(ext1 == Some(Dim::Known(3)), format!("ext1(G_x,G_x) = {ext1:?}, want 3"))?;
    let (c1, c2) = (euler_check(&g1), euler_check(&g2));
    ensure(
        c1.known_sum == c2.known_sum && c1.unknown_cells == c2.unknown_cells,
        format!("known sums drifted: {c1:?} vs {c2:?}"),
    )?;
    Ok("ext1(I_Z,I_Z) = 5, ext1(G_x,G_x) = 3, alternating sums conserved".into())
}

fn chk_property_suites() -> Result<String, String> {
    let mut rng = SplitMix64(0x5eed_0012);

    // twist group law
    for _ in 0..50 {
        let d = rng.int(1, 5);
        let c = ctx(d);
        let e = rng.class();
        let (b1, b2) = (rng.rat(4), rng.rat(4));
        ensure(
            e.twist(&b1).twist(&b2) == e.twist(&(&b1 + &b2)),
            format!("twist group law failed at d={d}"),
        )?;
        // Q is beta-independent
        let q1 = q_form(&c, &e, &b1);
        let q2 = q_form(&c, &e, &b2);
        ensure(q1 == q2, format!("Q({e}) moved: {q1} at {b1}, {q2} at {b2}"))?;
    }

    // nesting among scan outputs, several classes
    let c = ctx(1);
    let window = Window::new(rat(-3), rat(3), rat(9)).map_err(|e| e.to_string())?;
    for v in [
        embed(&c, &KuClass::new(-1, 0)),
        ChernCharacter::of_ints(2, -1, 0, 0),
        embed(&c, &KuClass::new(-2, 0)),
    ] {
        let scan = scan_candidates(&c, &v, &window, &Bounds::default());
        let semis: Vec<(Rat, Rat)> = scan
            .candidates
            .iter()
            .filter_map(|cand| match &cand.wall.locus {
                WallLocus::Semicircle { center, radius_sq } => {
                    Some((center.clone(), radius_sq.clone()))
                }
                _ => None,
            })
            .collect();
        for (i, (c1, r1)) in semis.iter().enumerate() {
            for (c2, r2) in &semis[i + 1..] {
                let dist_sq = (c1 - c2) * (c1 - c2);
                let lhs = (&dist_sq - r1 - r2) * (&dist_sq - r1 - r2);
                ensure(
                    lhs >= rat(4) * r1 * r2,
                    format!("transversal walls ({c1},{r1}) and ({c2},{r2}) for v={v}"),
                )?;
            }
        }
        // order-independence: repeated parallel scans agree exactly
        let again = scan_candidates(&c, &v, &window, &Bounds::default());
        ensure(again == scan, format!("scan of {v} not deterministic"))?;
    }

    // JSON round-trips, exact strings
    for _ in 0..25 {
        let e = rng.class();
        let j = serde_json::to_string(&e).map_err(|e| e.to_string())?;
        let back: ChernCharacter = serde_json::from_str(&j).map_err(|e| e.to_string())?;
        ensure(back == e, format!("class round-trip failed: {j}"))?;
    }
    let scan = scan_candidates(
        &c,
        &embed(&c, &KuClass::new(-1, 0)),
        &Window::new(rat(-2), rat(0), rat(4)).map_err(|e| e.to_string())?,
        &Bounds::default(),
    );
    let j = serde_json::to_string(&scan).map_err(|e| e.to_string())?;
    let back: crate::walls::ScanReport = serde_json::from_str(&j).map_err(|e| e.to_string())?;
    ensure(back == scan, "scan report round-trip failed".to_string())?;

    // expression parser speaks both notations
    let k1_direct = kappa1(&c);
    let k1_parsed = parse_class_expr(&c, "k1").map_err(|e| e.to_string())?;
    let k1_raw = parse_class_expr(&c, "ch(1,0,-1,0)").map_err(|e| e.to_string())?;
    ensure(k1_direct == k1_parsed && k1_parsed == k1_raw, "expression notations disagree".to_string())?;

    // embedding cross-check, 200 seeded pairs per degree
    for d in 1..=5 {
        let cd = ctx(d);
        for _ in 0..200 {
            let a = KuClass::new(rng.int(-20, 20), rng.int(-20, 20));
            let b = KuClass::new(rng.int(-20, 20), rng.int(-20, 20));
            ensure(
                rat(euler_form_ku(d, &a, &b))
                    == cd.euler_pairing(&embed(&cd, &a), &embed(&cd, &b)),
                format!("lattice/Chern pairing mismatch at d={d}: {a:?}, {b:?}"),
            )?;
        }
    }
    Ok("twist law, Q invariance, nesting, determinism, JSON, pairing cross-check".into())
}

/// Runs the full acceptance suite in order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        check(1, "euler matrix, all degrees", chk_euler_matrix),
        check(2, "sections of O(1) and O(2)", chk_sections),
        check(3, "ideal-sheaf class from its Hilbert polynomial", chk_ideal_class),
        check(4, "chi(I_Z, O_p)", chk_chi_ideal_point),
        check(5, "wall geometry of -k1", chk_wall_geometry),
        check(6, "strip emptiness with minimality evidence", chk_strip_empty),
        check(7, "bms thresholds at s=0", chk_bms_thresholds),
        check(8, "rotation matrix and [M_p]", chk_rotation),
        check(9, "rotation orbit and (-1)-classes", chk_orbit),
        check(10, "serre operator", chk_serre),
        check(11, "spectral-sequence pipelines", chk_spectral_sequences),
        check(12, "property suites, fixed seeds", chk_property_suites),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_green_and_stable() {
        let a = run_all();
        assert_eq!(a.len(), 12);
        for r in &a {
            assert!(r.passed, "check {} ({}) failed: {}", r.id, r.name, r.detail);
        }
        let b = run_all();
        assert_eq!(a, b);
    }
}
