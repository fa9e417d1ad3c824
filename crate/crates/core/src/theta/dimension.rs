//! Conditions imposed by sc-free orbits that are not Y_{Q,n}-free, and the
//! Whittaker dimension on each branch of exceptional characters.
//!
//! For an orbit image with base y and w[y] ≡ y mod Y_{Q,n}, the functional
//! survives only if χ(s_v) = eps^{D(v,y)} T(w, y) with v = w[y] - y.

use std::collections::{BTreeSet, HashSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{CoverCtx, Distinguished, Mono, ThetaError, Twist, Val};
use crate::exec;
use crate::lattice::{Bisector, CoverSpec, QForm};
use crate::orbits::{survey, OrbitSurvey, Setting};
use crate::rootdata::{Family, RootDatum, Vector};
use crate::symfield::SymVal;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub word: Vec<usize>,
    pub y: Vector,
    pub v: Vector,
    pub lhs: Mono,
    pub required: SymVal,
}

fn l1(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).sum()
}

impl Condition {
    pub fn new(cc: &CoverCtx, word: &[usize], y: &[i64]) -> Result<Condition, ThetaError> {
        let img = cc.apply_word(word, y);
        let v: Vector = img.iter().zip(y).map(|(a, b)| a - b).collect();
        let lhs = cc.chi(&v)?;
        let required = cc.eps_pow(cc.cover.d(&v, y)).mul(&cc.big_t_word(word, y));
        Ok(Condition { word: word.to_vec(), y: y.to_vec(), v, lhs, required })
    }

    fn order_key(&self) -> (i64, Vector) {
        (l1(&self.v), self.v.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Undetermined,
}

impl Verdict {
    /// Compares a value against 1: off the unit circle, or a bare root of
    /// unity other than 1, decides; otherwise the symbols may conspire.
    pub fn of_ratio(r: &Val) -> Verdict {
        if r.is_one() {
            Verdict::Holds
        } else if r.sym().modulus_q2() != 0 || r.sym().is_real_power() {
            Verdict::Fails
        } else {
            Verdict::Undetermined
        }
    }

    pub fn all(it: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Holds;
        for v in it {
            match v {
                Verdict::Fails => return Verdict::Fails,
                Verdict::Undetermined => out = Verdict::Undetermined,
                Verdict::Holds => {}
            }
        }
        out
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undetermined => "undetermined",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ImageConditions {
    /// Index into the survey's orbit list.
    pub orbit: usize,
    pub base: Vector,
    /// One condition per distinct (lhs, required) over the class stabiliser.
    pub all: Vec<Condition>,
    /// Conditions for a generating set of the class stabiliser.
    pub generators: Vec<Condition>,
}

impl ImageConditions {
    pub fn verdict(&self, value: &(dyn Fn(&Condition) -> Option<Val> + Sync)) -> Verdict {
        Verdict::all(self.all.iter().map(|c| match value(c) {
            None => Verdict::Fails,
            Some(x) => Verdict::of_ratio(&x.div(&Val::new(c.required.clone()))),
        }))
    }
}

fn dedup(conds: Vec<Condition>) -> Vec<Condition> {
    let mut seen = HashSet::new();
    conds.into_iter().filter(|c| seen.insert((c.lhs.clone(), c.required.clone()))).collect()
}

/// Greedy generators of a subgroup given as a sorted list of Weyl indices.
fn generating_set(s: &Setting, group: &[usize]) -> Vec<usize> {
    let mut closure = BTreeSet::from([0usize]);
    let mut gens = Vec::new();
    for &w in group {
        if closure.contains(&w) {
            continue;
        }
        gens.push(w);
        let mut stack: Vec<usize> = closure.iter().copied().collect();
        while let Some(x) = stack.pop() {
            for &g in &gens {
                let y = s.weyl.compose(x, g);
                if closure.insert(y) {
                    stack.push(y);
                }
            }
        }
    }
    gens
}

fn stabilizer(s: &Setting, y: &[i64]) -> Vec<usize> {
    (1..s.weyl.len())
        .filter(|&w| {
            let img = s.weyl.shifted_apply(w, y);
            let v: Vector = img.iter().zip(y).map(|(a, b)| a - b).collect();
            s.lat.yqn.member(&v)
        })
        .collect()
}

fn image_conditions(cc: &CoverCtx, s: &Setting, orbit: usize, base: &[i64]) -> Result<ImageConditions, ThetaError> {
    let stab = stabilizer(s, base);
    let word = |w: usize| &s.weyl.elements[w].reduced_word;
    let all = stab.iter().map(|&w| Condition::new(cc, word(w), base)).collect::<Result<Vec<_>, _>>()?;
    let generators = generating_set(s, &stab)
        .into_iter()
        .map(|w| Condition::new(cc, word(w), base))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ImageConditions { orbit, base: base.to_vec(), all: dedup(all), generators })
}

#[derive(Clone, Debug)]
pub struct Branch {
    /// x_i per generator; `None` is a generic value of a free direction.
    pub assignment: Vec<Option<Val>>,
    /// (generator, v, χ(s_v)) naming the branch.
    pub keys: Vec<(usize, Vector, Option<Val>)>,
    pub verdicts: Vec<Verdict>,
    pub dim: usize,
    pub undetermined: usize,
}

impl Branch {
    pub fn key_strings(&self) -> Vec<String> {
        self.keys
            .iter()
            .map(|(_, v, x)| match x {
                Some(x) => format!("chi(s_{v:?}) = {x}"),
                None => format!("chi(s_{v:?}) generic"),
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct DimTable {
    pub lower: usize,
    pub upper: usize,
    pub relevant: Vec<usize>,
    pub branches: Vec<Branch>,
}

/// Everything needed for dimension questions on one cover.
#[derive(Clone, Debug)]
pub struct ThetaContext {
    pub cc: CoverCtx,
    pub setting: Setting,
    pub survey: OrbitSurvey,
    pub images: Vec<ImageConditions>,
}

impl ThetaContext {
    pub fn new(cover: CoverSpec) -> Result<ThetaContext, ThetaError> {
        let setting = Setting::new(cover.clone())?;
        let sv = survey(&setting);
        let cc = CoverCtx::new(cover);
        let idx: Vec<usize> =
            (0..sv.orbits.len()).filter(|&k| sv.orbits[k].flags.sc_free && !sv.orbits[k].flags.qn_free).collect();
        let images = exec::map_slice(&idx, |&k| image_conditions(&cc, &setting, k, &sv.orbits[k].base))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ThetaContext { cc, setting, survey: sv, images })
    }

    pub fn lower(&self) -> usize {
        self.survey.lower
    }

    pub fn upper(&self) -> usize {
        self.survey.upper
    }

    /// Conditions from every point of the orbit image, not just its base.
    pub fn full_conditions(&self, image: usize) -> Result<Vec<Condition>, ThetaError> {
        let o = &self.survey.orbits[self.images[image].orbit];
        let mut out = Vec::new();
        for y in o.elements(&self.setting) {
            for w in stabilizer(&self.setting, &y) {
                out.push(Condition::new(&self.cc, &self.setting.weyl.elements[w].reduced_word, &y)?);
            }
        }
        Ok(dedup(out))
    }

    pub fn solver(&self) -> Solver<'_> {
        Solver { cc: &self.cc, images: &self.images, lower: self.lower(), upper: self.upper() }
    }

    /// (per-image verdicts, dim, undetermined) for a way of valuing conditions.
    pub fn evaluate(&self, value: &(dyn Fn(&Condition) -> Option<Val> + Sync)) -> (Vec<Verdict>, usize, usize) {
        self.solver().evaluate(value)
    }

    /// Every branch of exceptional characters with its dimension.
    pub fn branches(&self) -> Result<DimTable, ThetaError> {
        self.solver().branches()
    }

    /// χ(s_v) on a branch, for any v ∈ Y_{Q,n}.
    pub fn branch_value_at(&self, b: &Branch, v: &[i64]) -> Result<Option<Val>, ThetaError> {
        Ok(self.cc.space.eval(&self.cc.chi(v)?, &b.assignment))
    }
}

/// Branch enumeration over a fixed list of orbit images.
#[derive(Clone, Copy)]
pub struct Solver<'a> {
    pub cc: &'a CoverCtx,
    pub images: &'a [ImageConditions],
    pub lower: usize,
    pub upper: usize,
}

impl Solver<'_> {
    /// (per-image verdicts, dim, undetermined) for a way of valuing conditions.
    pub fn evaluate(&self, value: &(dyn Fn(&Condition) -> Option<Val> + Sync)) -> (Vec<Verdict>, usize, usize) {
        let verdicts: Vec<Verdict> = exec::map_slice(self.images, |im| im.verdict(value));
        let holds = verdicts.iter().filter(|&&v| v == Verdict::Holds).count();
        let und = verdicts.iter().filter(|&&v| v == Verdict::Undetermined).count();
        (verdicts, self.lower + holds, und)
    }

    fn conditions(&self) -> impl Iterator<Item = &Condition> {
        self.images.iter().flat_map(|im| im.all.iter())
    }

    /// The condition with the smallest v whose lhs is x_i^e with e a unit mod d_i.
    fn single_condition(&self, i: usize) -> Option<&Condition> {
        let d = self.cc.space.orders[i];
        self.conditions()
            .filter(|c| match c.lhs.single() {
                Some((j, e)) => j == i && if d == 0 { e.abs() == 1 } else { e.gcd(&d) == 1 },
                None => false,
            })
            .min_by_key(|c| c.order_key())
    }

    /// A value of x_i with x_i^{d_i} right, preferring one that meets a condition.
    fn anchor(&self, i: usize, dist: &mut Option<Option<Distinguished>>) -> Result<Val, ThetaError> {
        let sp = &self.cc.space;
        let d = sp.orders[i];
        let power = sp.powers[i].clone().expect("finite order");
        if let Some(c) = self.single_condition(i) {
            let (_, e) = c.lhs.single().expect("single generator");
            let r = Val::new(c.required.clone()).div(&c.lhs.coef);
            let x = (1..d).find(|x| (e * x).rem_euclid(d) == 1).expect("e is a unit mod d");
            let t = (e * x - 1) / d;
            let a = r.pow(x).mul(&power.pow(-t));
            if a.pow(d) == power {
                return Ok(a);
            }
        }
        let dist = dist.get_or_insert_with(|| Distinguished::new(self.cc, Twist::Abstract).ok());
        match dist {
            Some(dc) => {
                let a = dc.eval(&self.cc.cover, &sp.gens[i])?;
                if a.pow(d) == power {
                    Ok(a)
                } else {
                    Err(ThetaError::NoAnchor(i))
                }
            }
            None => Err(ThetaError::NoAnchor(i)),
        }
    }

    fn options(&self, i: usize, dist: &mut Option<Option<Distinguished>>) -> Result<Vec<Option<Val>>, ThetaError> {
        let d = self.cc.space.orders[i];
        if d > 0 {
            let a = self.anchor(i, dist)?;
            return Ok((0..d).map(|j| Some(a.rotate(j, d))).collect());
        }
        let mut seen = BTreeSet::new();
        for c in self.conditions() {
            if let Some((j, e)) = c.lhs.single() {
                if j == i && e.abs() == 1 {
                    seen.insert(Val::new(c.required.clone()).div(&c.lhs.coef).pow(e));
                }
            }
        }
        let mut out: Vec<Option<Val>> = seen.into_iter().map(Some).collect();
        out.push(None);
        Ok(out)
    }

    /// Every branch of exceptional characters with its dimension.
    pub fn branches(&self) -> Result<DimTable, ThetaError> {
        let sp = &self.cc.space;
        let relevant = sp.relevant();
        let mut dist = None;
        let opts = relevant.iter().map(|&i| self.options(i, &mut dist)).collect::<Result<Vec<_>, _>>()?;
        let base: Vec<Option<Val>> = sp.powers.iter().zip(&sp.orders).map(|(p, &d)| if d == 1 { p.clone() } else { None }).collect();
        let mut assignments = vec![base];
        for (k, &i) in relevant.iter().enumerate() {
            assignments = assignments
                .into_iter()
                .flat_map(|a| {
                    opts[k].iter().map(move |o| {
                        let mut a = a.clone();
                        a[i] = o.clone();
                        a
                    })
                })
                .collect();
        }
        let branches = assignments
            .into_iter()
            .map(|x| {
                let (verdicts, dim, undetermined) = self.evaluate(&|c| sp.eval(&c.lhs, &x));
                let keys = relevant
                    .iter()
                    .map(|&i| match self.single_condition(i) {
                        Some(c) => (i, c.v.clone(), sp.eval(&c.lhs, &x)),
                        None => (i, sp.gens[i].clone(), x[i].clone()),
                    })
                    .collect();
                Branch { assignment: x, keys, verdicts, dim, undetermined }
            })
            .collect();
        Ok(DimTable { lower: self.lower, upper: self.upper, relevant, branches })
    }
}

/// The single condition for SL_n^(n) at y = 0 along w_{α_{r}} ... w_{α_1},
/// built without the Weyl group.
pub fn light_sl_images(n: i64) -> Result<(CoverCtx, Vec<ImageConditions>), ThetaError> {
    let r = (n - 1) as usize;
    let cover = CoverSpec::new(RootDatum::build(Family::A, r)?, n, QForm::Short(1))?;
    let cc = CoverCtx::new(cover);
    let word: Vec<usize> = (0..r).rev().collect();
    let c = Condition::new(&cc, &word, &vec![0; r])?;
    let im = ImageConditions { orbit: 0, base: vec![0; r], all: vec![c.clone()], generators: vec![c] };
    Ok((cc, vec![im]))
}

/// Transports each lower-bisector branch to the upper bisector by
/// x'_i = eps^{φ(u_i)} x_i and compares dimensions. Returns mismatches.
pub fn bisector_check(family: Family, rank: usize, n: i64, qform: QForm) -> Result<Vec<String>, ThetaError> {
    let datum = RootDatum::build(family, rank)?;
    let lo = ThetaContext::new(CoverSpec::with_bisector(datum.clone(), n, qform, Bisector::Lower)?)?;
    let up = ThetaContext::new(CoverSpec::with_bisector(datum, n, qform, Bisector::Upper)?)?;
    let mut bad = Vec::new();
    if lo.cc.space.gens != up.cc.space.gens {
        return Err(ThetaError::GeneratorMismatch);
    }
    let (tl, tu) = (lo.branches()?, up.branches()?);
    let g = &lo.cc.cover.gram;
    let phi = |y: &[i64]| -> i64 {
        let mut e = 0;
        for i in 0..y.len() {
            for j in i + 1..y.len() {
                e += y[i] * y[j] * g[i][j];
            }
        }
        e
    };
    for b in &tl.branches {
        let moved: Vec<Option<Val>> = b
            .assignment
            .iter()
            .zip(&lo.cc.space.gens)
            .map(|(x, u)| x.as_ref().map(|x| x.mul_sym(&lo.cc.eps_pow(phi(u)))))
            .collect();
        let same = |c: &Branch| tl.relevant.iter().all(|&i| c.assignment[i] == moved[i]);
        match tu.branches.iter().find(|c| same(c)) {
            None => bad.push(format!("no upper branch for {:?}", b.key_strings())),
            Some(c) if (c.dim, c.undetermined) != (b.dim, b.undetermined) => bad.push(format!(
                "{:?}: lower dim {} (+{}), upper dim {} (+{})",
                b.key_strings(),
                b.dim,
                b.undetermined,
                c.dim,
                c.undetermined
            )),
            Some(_) => {}
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta(f: Family, r: usize, n: i64) -> ThetaContext {
        ThetaContext::new(CoverSpec::new(RootDatum::build(f, r).unwrap(), n, QForm::Short(1)).unwrap()).unwrap()
    }

    fn dims(t: &DimTable) -> Vec<usize> {
        let mut d: Vec<usize> = t.branches.iter().map(|b| b.dim).collect();
        d.sort();
        d
    }

    #[test]
    fn sl3_degree3_branches() {
        let ctx = theta(Family::A, 2, 3);
        let t = ctx.branches().unwrap();
        assert_eq!(dims(&t), vec![0, 0, 1]);
        assert!(t.branches.iter().all(|b| b.undetermined == 0));
        let good = t.branches.iter().find(|b| b.dim == 1).unwrap();
        let v = ctx.cc.apply_word(&[0, 1], &[0, 0]);
        assert_eq!(v, vec![2, 1]);
        assert_eq!(ctx.branch_value_at(good, &v).unwrap(), Some(Val::new(SymVal::q_pow(3, -1))));
        for b in t.branches.iter().filter(|b| b.dim == 0) {
            let x = ctx.branch_value_at(b, &v).unwrap().unwrap();
            let r = x.div(&Val::new(SymVal::q_pow(3, -1)));
            assert!(!r.is_one() && r.pow(3).is_one(), "{x} / q^-1 = {r}");
        }
        assert_eq!(good.keys[0].1, vec![1, 2]);
    }

    #[test]
    fn sp4_degree10_branches() {
        let ctx = theta(Family::C, 2, 10);
        let t = ctx.branches().unwrap();
        assert_eq!(dims(&t), vec![1, 3]);
        let n = 10;
        let gamma = SymVal::gamma(n).unwrap();
        for b in &t.branches {
            let v = &b.keys[0].1;
            assert_eq!(v, &vec![0, -5]);
            let x = b.keys[0].2.clone().unwrap();
            let plus = Val::new(SymVal::q_half(n, 1).mul(&gamma));
            let want = if b.dim == 3 { plus } else { plus.mul_sym(&SymVal::minus_one(n)) };
            assert_eq!(x, want, "{:?}", b.key_strings());
        }
    }

    #[test]
    fn base_conditions_match_full_orbit() {
        for (f, r, n) in [(Family::A, 2, 3), (Family::C, 2, 10), (Family::A, 3, 4), (Family::B, 2, 10), (Family::G, 2, 8)] {
            let ctx = theta(f, r, n);
            let t = ctx.branches().unwrap();
            for (k, im) in ctx.images.iter().enumerate() {
                let full = ctx.full_conditions(k).unwrap();
                let full_im = ImageConditions { all: full, ..im.clone() };
                for b in &t.branches {
                    let val = |c: &Condition| ctx.cc.space.eval(&c.lhs, &b.assignment);
                    assert_eq!(im.verdict(&val), full_im.verdict(&val), "{f}{r} n={n} image {k}");
                }
            }
        }
    }

    #[test]
    fn generators_give_same_verdicts() {
        for (f, r, n) in [(Family::C, 2, 10), (Family::A, 3, 4), (Family::G, 2, 10)] {
            let ctx = theta(f, r, n);
            let t = ctx.branches().unwrap();
            for im in &ctx.images {
                let gen_im = ImageConditions { all: im.generators.clone(), ..im.clone() };
                for b in &t.branches {
                    let val = |c: &Condition| ctx.cc.space.eval(&c.lhs, &b.assignment);
                    assert_eq!(im.verdict(&val), gen_im.verdict(&val), "{f}{r} n={n}");
                }
            }
        }
    }

    #[test]
    fn light_route_matches_full() {
        for n in 2..=6 {
            let ctx = theta(Family::A, (n - 1) as usize, n);
            assert_eq!(ctx.images.len(), 1);
            let (cc, light) = light_sl_images(n).unwrap();
            let t = ctx.branches().unwrap();
            for b in &t.branches {
                let val = |c: &Condition| cc.space.eval(&c.lhs, &b.assignment);
                let full = |c: &Condition| ctx.cc.space.eval(&c.lhs, &b.assignment);
                assert_eq!(light[0].verdict(&val), ctx.images[0].verdict(&full), "n={n}");
            }
            let lt = Solver { cc: &cc, images: &light, lower: 0, upper: 1 }.branches().unwrap();
            assert_eq!(dims(&lt), dims(&t), "n={n}");
        }
    }

    #[test]
    fn bisectors_agree() {
        for (f, r, n) in [(Family::A, 2, 3), (Family::C, 2, 10), (Family::G, 2, 8)] {
            let bad = bisector_check(f, r, n, QForm::Short(1)).unwrap();
            assert!(bad.is_empty(), "{f}{r} n={n}: {bad:?}");
        }
    }
}
