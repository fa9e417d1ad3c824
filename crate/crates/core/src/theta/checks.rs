//! Consistency checks on the scattering factors: rank-2 braid and inverse
//! laws, independence of the reduced word, and the translation rule of the
//! local coefficient matrix τ.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CoverCtx, Mono};
use crate::orbits::{OrbitSurvey, Setting};
use crate::rootdata::Vector;
use crate::symfield::SymVal;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank2Report {
    pub samples: usize,
    pub braid_checks: usize,
    pub inverse_checks: usize,
    pub failures: Vec<String>,
}

impl Rank2Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Braid order m_ij from the Cartan product C_ij C_ji.
fn braid_order(c: &[Vec<i64>], i: usize, j: usize) -> usize {
    match c[i][j] * c[j][i] {
        0 => 2,
        1 => 3,
        2 => 4,
        3 => 6,
        p => panic!("not a finite Cartan matrix: product {p}"),
    }
}

fn add(a: &[i64], b: &[i64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// A point of a shifted orbit: w[base + λ] with λ ∈ Y_{Q,n} small.
fn sample_point(s: &Setting, sv: &OrbitSurvey, rng: &mut ChaCha8Rng) -> Vector {
    let sc: Vec<_> = sv.sc_free().collect();
    let m = s.cover.datum.y_rank;
    let base: Vector = if sc.is_empty() {
        (0..m).map(|_| rng.gen_range(-2 * s.cover.n..=2 * s.cover.n)).collect()
    } else {
        sc[rng.gen_range(0..sc.len())].base.clone()
    };
    let c: Vector = (0..m).map(|_| rng.gen_range(-2..=2)).collect();
    let y = add(&base, &s.lat.yqn.combine(&c));
    s.weyl.shifted_apply(rng.gen_range(0..s.weyl.len()), &y)
}

/// Checks Π_{k<m} T(s_i s_j, u^k[y]) = 1 and t(i, s_i[y]) t(i, y) = 1 on random points.
pub fn verify_rank2(s: &Setting, sv: &OrbitSurvey, cc: &CoverCtx, samples: usize, seed: u64) -> Rank2Report {
    let d = &cc.cover.datum;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Rank2Report { samples, ..Default::default() };
    for _ in 0..samples {
        let y = sample_point(s, sv, &mut rng);
        for i in 0..d.rank {
            let back = cc.tfactor(i, &d.shifted_reflect(i, &y)).mul(&cc.tfactor(i, &y));
            rep.inverse_checks += 1;
            if !back.is_one() {
                rep.failures.push(format!("inverse law at i={i} y={y:?}: {back}"));
            }
            for j in i + 1..d.rank {
                let m = braid_order(&d.cartan, i, j);
                let mut cur = y.clone();
                let mut acc = SymVal::one(cc.n());
                for _ in 0..m {
                    let mid = d.shifted_reflect(j, &cur);
                    acc = acc.mul(&cc.tfactor(i, &mid)).mul(&cc.tfactor(j, &cur));
                    cur = d.shifted_reflect(i, &mid);
                }
                rep.braid_checks += 1;
                if !acc.is_one() || cur != y {
                    rep.failures.push(format!("braid ({i},{j}) at y={y:?}: {acc}"));
                }
            }
        }
    }
    rep
}

/// T(w_0, y) agrees along every reduced word of the longest element, for all
/// y in sc-free orbits. Returns the number of comparisons and the mismatches.
pub fn word_independence(s: &Setting, sv: &OrbitSurvey, cc: &CoverCtx) -> (usize, Vec<String>) {
    let words = s.weyl.all_reduced_words(s.weyl.longest());
    let mut checked = 0;
    let mut bad = Vec::new();
    for o in sv.sc_free() {
        for y in o.elements(s) {
            let first = cc.big_t_word(&words[0], &y);
            for w in &words[1..] {
                checked += 1;
                let t = cc.big_t_word(w, &y);
                if t != first {
                    bad.push(format!("y={y:?} word {w:?}: {t} vs {first}"));
                }
            }
        }
    }
    (checked, bad)
}

/// An entry of τ: zero, or a monomial in the character unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tau {
    Zero,
    Val(Mono),
}

/// (^{w_α}χ)(s_z) = eps^{<z,α> D(z,α∨)} χ(s_{w_α z}).
fn twisted_chi(cc: &CoverCtx, i: usize, z: &[i64]) -> Mono {
    let d = &cc.cover.datum;
    let e = d.pair(z, i) * cc.cover.d(z, &d.coroots[i]);
    let m = cc.chi(&d.reflect(i, z)).expect("Y_Q,n is Weyl stable");
    Mono { coef: m.coef.mul_sym(&cc.eps_pow(e)), exps: m.exps }
}

fn scaled(m: Mono, s: &SymVal) -> Mono {
    Mono { coef: m.coef.mul_sym(s), exps: m.exps }
}

/// (τ¹, τ²) at (s_{y1}, s_y) for the simple reflection w_{α_i}.
pub fn tau_entry(cc: &CoverCtx, i: usize, y1: &[i64], y: &[i64]) -> (Tau, Tau) {
    let d = &cc.cover.datum;
    let n = cc.n();
    let l = &cc.lat.yqn;
    let lam1 = sub(y1, y);
    let t1 = if l.member(&lam1) {
        let k = num_integer::Integer::div_ceil(&d.pair(y, i), &cc.cover.n_alpha(i));
        let base = SymVal::q_pow(n, -k).mul(&cc.eps_pow(cc.cover.d(y, &lam1)));
        Tau::Val(scaled(cc.space.inv(&twisted_chi(cc, i, &lam1)), &base))
    } else {
        Tau::Zero
    };
    let wy = d.shifted_reflect(i, y);
    let lam2 = sub(y1, &wy);
    let t2 = if l.member(&lam2) {
        let a = d.pair(y, i) - 1;
        let base = cc
            .eps_pow(a * cc.cover.d(y, &d.coroots[i]) + cc.cover.d(&wy, &lam2))
            .mul(&SymVal::gauss(n, a * cc.cover.q_simple[i]));
        Tau::Val(scaled(cc.space.inv(&twisted_chi(cc, i, &lam2)), &base))
    } else {
        Tau::Zero
    };
    (t1, t2)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

/// Compares τ(y1+λ, y+λ') with eps^{D(y1,λ)+D(y,λ')} (^wχ)^{-1}(s_λ) χ(s_λ') τ(y1, y)
/// on random data.
pub fn cocycle_check(cc: &CoverCtx, instances: usize, seed: u64) -> CocycleReport {
    let d = &cc.cover.datum;
    let m = d.y_rank;
    let l = &cc.lat.yqn;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = CocycleReport::default();
    if d.rank == 0 {
        return rep;
    }
    let small = |rng: &mut ChaCha8Rng| -> Vector { l.combine(&(0..m).map(|_| rng.gen_range(-2..=2)).collect::<Vector>()) };
    for _ in 0..instances {
        let i = rng.gen_range(0..d.rank);
        let y: Vector = (0..m).map(|_| rng.gen_range(-3 * cc.cover.n..=3 * cc.cover.n)).collect();
        let start = if rng.gen_bool(0.5) { y.clone() } else { d.shifted_reflect(i, &y) };
        let y1 = add(&start, &small(&mut rng));
        let lam = small(&mut rng);
        let lam2 = small(&mut rng);
        let direct = tau_entry(cc, i, &add(&y1, &lam), &add(&y, &lam2));
        let base = tau_entry(cc, i, &y1, &y);
        let factor = {
            let e = cc.eps_pow(cc.cover.d(&y1, &lam) + cc.cover.d(&y, &lam2));
            let m = cc.space.mul(&cc.space.inv(&twisted_chi(cc, i, &lam)), &cc.chi(&lam2).expect("λ' in Y_Q,n"));
            scaled(m, &e)
        };
        let compose = |t: Tau| match t {
            Tau::Zero => Tau::Zero,
            Tau::Val(v) => Tau::Val(cc.space.mul(&factor, &v)),
        };
        let composed = (compose(base.0), compose(base.1));
        rep.checked += 1;
        if composed != direct {
            rep.failures.push(format!("i={i} y={y:?} y1={y1:?} λ={lam:?} λ'={lam2:?}"));
        }
    }
    rep
}

impl std::fmt::Display for Tau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tau::Zero => f.write_str("0"),
            Tau::Val(m) => write!(f, "{m}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{CoverSpec, QForm};
    use crate::orbits::survey;
    use crate::rootdata::{Family, RootDatum};
    use crate::theta::Val;

    fn setup(f: Family, r: usize, n: i64) -> (Setting, OrbitSurvey, CoverCtx) {
        let cover = CoverSpec::new(RootDatum::build(f, r).unwrap(), n, QForm::Short(1)).unwrap();
        let s = Setting::new(cover.clone()).unwrap();
        let sv = survey(&s);
        (s, sv, CoverCtx::new(cover))
    }

    #[test]
    fn braid_laws_small() {
        for (f, r, n) in [(Family::A, 2, 3), (Family::C, 2, 6), (Family::G, 2, 7)] {
            let (s, sv, cc) = setup(f, r, n);
            let rep = verify_rank2(&s, &sv, &cc, 200, 7);
            assert!(rep.ok(), "{f}{r} n={n}: {:?}", &rep.failures[..rep.failures.len().min(3)]);
        }
    }

    #[test]
    fn longest_word_independent() {
        for (f, r, n) in [(Family::A, 2, 3), (Family::C, 2, 6), (Family::C, 2, 10), (Family::G, 2, 7)] {
            let (s, sv, cc) = setup(f, r, n);
            let (checked, bad) = word_independence(&s, &sv, &cc);
            assert!(checked > 0);
            assert!(bad.is_empty(), "{f}{r} n={n}: {:?}", &bad[..bad.len().min(3)]);
        }
    }

    #[test]
    fn tau_diagonal_and_cocycle() {
        for (f, r, n) in [(Family::A, 2, 3), (Family::C, 2, 10), (Family::B, 3, 8), (Family::G, 2, 12)] {
            let (_, _, cc) = setup(f, r, n);
            let rep = cocycle_check(&cc, 100, 11);
            assert!(rep.failures.is_empty(), "{f}{r} n={n}: {:?}", &rep.failures[..rep.failures.len().min(3)]);
        }
        let (_, _, cc) = setup(Family::A, 1, 2);
        let (t1, _) = tau_entry(&cc, 0, &[1], &[1]);
        assert_eq!(t1, Tau::Val(Mono::constant(Val::new(SymVal::q_pow(2, -1)), cc.space.len())));
    }
}
