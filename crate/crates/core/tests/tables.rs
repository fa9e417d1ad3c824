use thetawh::cli::golden;
use thetawh::lattice::{CoverSpec, QForm};
use thetawh::orbits::{survey, Setting};
use thetawh::rootdata::{Family, RootDatum};

fn check(name: &str) {
    let r = golden::reproduce(name).unwrap();
    let bad: Vec<_> = r.rows.iter().filter(|x| !x.pass).collect();
    assert!(bad.is_empty(), "{name}: {bad:#?}");
}

#[test]
fn type_a_table() {
    check("t-A");
}

#[test]
fn type_c_table() {
    check("t-C");
}

#[test]
fn type_b_table() {
    check("t-B");
}

#[test]
fn g2_table() {
    check("t-G2");
}

#[test]
fn kp_table() {
    check("kp");
}

#[test]
fn kp_free_orbits_coincide() {
    for r in 1..=5 {
        for n in 1..=(r as i64 + 1) {
            let cover = CoverSpec::new(RootDatum::build(Family::GL, r).unwrap(), n, QForm::Kp { p: 0, q: -1 }).unwrap();
            let sv = survey(&Setting::new(cover).unwrap());
            for o in &sv.orbits {
                assert_eq!(o.flags.sc_free, o.flags.qn_free, "GL{r} n={n} {:?}", o.base);
            }
            assert_eq!(sv.lower, sv.upper);
            if n == r as i64 {
                assert_eq!(sv.lower, 1, "GL{r} n={r}");
            }
        }
    }
}

#[test]
fn rows_named_in_the_docs() {
    let row = |f, r, n| golden::compute(f, r, n, QForm::Short(1)).unwrap();
    assert_eq!(row(Family::B, 3, 7).dims, vec![1]);
    assert_eq!(row(Family::A, 4, 6).dims, vec![1]);
    assert_eq!(row(Family::G, 2, 6).dims, vec![0]);
    assert_eq!(row(Family::C, 3, 7).dims, vec![1]);
}
