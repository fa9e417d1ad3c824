use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thetawh::cli::golden::{self, GoldenRow};
use thetawh::lattice::CoverSpec;
use thetawh::orbits::{survey, Setting};
use thetawh::rootdata::RootDatum;
use thetawh::theta::{bisector_check, cocycle_check, ThetaContext};

/// Every reference instance small enough for the orbit survey.
fn instances() -> Vec<GoldenRow> {
    golden::TABLES
        .iter()
        .flat_map(|(_, t)| golden::parse(t).unwrap())
        .filter(|g| g.expected.bounds.is_some())
        .collect()
}

fn cover(g: &GoldenRow) -> CoverSpec {
    CoverSpec::new(RootDatum::build(g.family, g.rank).unwrap(), g.degree, g.qform).unwrap()
}

fn label(g: &GoldenRow) -> String {
    format!("{}{} n={}", g.family, g.rank, g.degree)
}

#[test]
fn shifted_action_is_an_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for g in instances().iter().filter(|g| g.rank <= 4) {
        let s = Setting::new(cover(g)).unwrap();
        let m = s.cover.datum.y_rank;
        for _ in 0..50 {
            let a = rng.gen_range(0..s.weyl.len());
            let b = rng.gen_range(0..s.weyl.len());
            let y: Vec<i64> = (0..m).map(|_| rng.gen_range(-20..=20)).collect();
            let ab = s.weyl.compose(a, b);
            assert_eq!(s.weyl.shifted_apply(ab, &y), s.weyl.shifted_apply(a, &s.weyl.shifted_apply(b, &y)), "{}", label(g));
        }
        assert_eq!(s.weyl.shifted_apply(0, &vec![3; m]), vec![3; m]);
    }
}

#[test]
fn lattices_are_stable_and_nested() {
    for g in instances() {
        let s = Setting::new(cover(&g)).unwrap();
        assert!(s.lat.weyl_stable(&s.weyl), "{}", label(&g));
        assert!(s.lat.sandwich_holds(&s.cover), "{}", label(&g));
    }
}

#[test]
fn orbit_flags_form_a_chain() {
    for g in instances() {
        let s = Setting::new(cover(&g)).unwrap();
        let sv = survey(&s);
        let mut classes = 0;
        for o in &sv.orbits {
            assert!(!o.flags.qn_free || o.flags.sc_free, "{}: {:?}", label(&g), o.base);
            assert!(!o.flags.sc_free || o.flags.free, "{}: {:?}", label(&g), o.base);
            classes += o.image_key.len();
        }
        assert_eq!(classes, sv.total_classes, "{}", label(&g));
        assert!(sv.lower <= sv.upper);
    }
}

#[test]
fn branch_dims_within_bounds() {
    for g in instances() {
        let ctx = ThetaContext::new(cover(&g)).unwrap();
        let t = ctx.branches().unwrap();
        for b in &t.branches {
            assert_eq!(b.undetermined, 0, "{}", label(&g));
            assert!(t.lower <= b.dim && b.dim <= t.upper, "{}: {:?} dim {}", label(&g), b.key_strings(), b.dim);
        }
    }
}

#[test]
fn tau_translation_rule() {
    for g in instances().iter().filter(|g| g.rank <= 4) {
        let ctx = ThetaContext::new(cover(g)).unwrap();
        if ctx.cc.cover.datum.rank == 0 {
            continue;
        }
        let rep = cocycle_check(&ctx.cc, 100, 3);
        assert_eq!(rep.checked, 100);
        assert!(rep.failures.is_empty(), "{}: {:?}", label(g), rep.failures.first());
    }
}

#[test]
fn dims_do_not_depend_on_the_bisector() {
    for g in instances() {
        let bad = bisector_check(g.family, g.rank, g.degree, g.qform).unwrap();
        assert!(bad.is_empty(), "{}: {bad:?}", label(&g));
    }
}
