//! The distinguished exceptional character and the class of twisting units
//! for which its theta representation has a unique Whittaker functional.

use serde::Serialize;

use super::{fold_eps, CoverCtx, ImageConditions, ThetaError, Val};
use crate::lattice::{CoverSpec, LatticeKind, Sublattice};
use crate::rootdata::{Family, Vector};
use crate::symfield::SymVal;

/// How the residue symbol omega = (a, ϖ)_n of the twisting unit enters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Twist {
    /// Keep omega as a symbol.
    Abstract,
    /// omega = exp(2πi k / n).
    Omega(i64),
}

/// χ on an adapted basis y_i of Y_{Q,n} relative to J = Y_{Q,n}^sc + nY:
/// χ(s_{y_i}) = γ'^{2(k_i - 1)Q(y_i)/n}, then twisted by q^{-<y, x>}.
#[derive(Clone, Debug)]
pub struct Distinguished {
    pub basis: Vec<(Vector, i64)>,
    values: Vec<Val>,
    coords: Sublattice,
}

fn gamma_prime(n: u32, e: i64, twist: Twist) -> Result<Val, ThetaError> {
    if n % 2 == 1 {
        if e.rem_euclid(4) != 0 {
            return Err(ThetaError::OddDegreeWeil(n, e));
        }
        return Ok(Val::one(n));
    }
    let g = SymVal::gamma_pow(n, e)?;
    let half = (n / 2) as i64;
    Ok(match twist {
        Twist::Abstract => Val::new(g.mul(&SymVal::omega(n, e * half))),
        Twist::Omega(k) => Val::new(g).rotate(e * k * half, n as i64),
    })
}

/// Twice <y, x> with x = Σ ω_j / n_j (ρ/n-type weight for GL).
fn twist_q2(cover: &CoverSpec, y: &[i64]) -> Result<i64, ThetaError> {
    let d = &cover.datum;
    let bad = || ThetaError::NonIntegralTwist(y.to_vec());
    if d.family == Family::GL {
        let s: i64 = d.two_rho_x.iter().zip(y).map(|(a, b)| a * b).sum();
        return if s % cover.n == 0 { Ok(s / cover.n) } else { Err(bad()) };
    }
    let l = cover.n_alpha.iter().fold(1i64, |acc, &x| num_integer::lcm(acc, x));
    let s: i64 = y.iter().zip(&cover.n_alpha).map(|(c, na)| c * (l / na)).sum();
    if (2 * s) % l == 0 {
        Ok(2 * s / l)
    } else {
        Err(bad())
    }
}

impl Distinguished {
    pub fn new(cc: &CoverCtx, twist: Twist) -> Result<Distinguished, ThetaError> {
        let cover = &cc.cover;
        let n = cc.n();
        let basis = cc.lat.yqn.adapted_basis(&cc.lat.j);
        let mut values = Vec::with_capacity(basis.len());
        for (y, k) in &basis {
            let num = 2 * (k - 1) * cover.q(y);
            if num % cover.n != 0 {
                return Err(ThetaError::NonIntegralWeil(y.clone(), *k));
            }
            values.push(gamma_prime(n, num / cover.n, twist)?);
        }
        let gens: Vec<Vector> = basis.iter().map(|(y, _)| y.clone()).collect();
        let coords = Sublattice::from_generators(LatticeKind::Custom, cover.datum.y_rank, &gens);
        let dc = Distinguished { basis, values, coords };
        let q1 = Val::new(SymVal::q_pow(n, -1));
        for (i, b) in cover.sc_generators().iter().enumerate() {
            if dc.eval(cover, b)? != q1 {
                return Err(ThetaError::NotExceptional(i));
            }
        }
        Ok(dc)
    }

    /// The untwisted character χ⁰(s_y).
    pub fn eval0(&self, cover: &CoverSpec, y: &[i64]) -> Result<Val, ThetaError> {
        let c = self.coords.gen_coords(y).ok_or_else(|| ThetaError::NotInLattice(y.to_vec()))?;
        let gens: Vec<Vector> = self.basis.iter().map(|(y, _)| y.clone()).collect();
        let n = cover.n as u32;
        let mut acc = Val::new(SymVal::eps_pow(n, fold_eps(cover, &gens, &c)));
        for (v, &ci) in self.values.iter().zip(&c) {
            acc = acc.mul(&v.pow(ci));
        }
        Ok(acc)
    }

    pub fn eval(&self, cover: &CoverSpec, y: &[i64]) -> Result<Val, ThetaError> {
        let t = twist_q2(cover, y)?;
        Ok(self.eval0(cover, y)?.mul_sym(&SymVal::q_half(cover.n as u32, -t)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DistinguishedVerdict {
    /// (eps, (a, ϖ)_2, dim) for every admissible sign pattern.
    pub rows: Vec<(i8, i8, usize)>,
    /// Condition on the unit a for dim = 1.
    pub unit_condition: String,
}

/// A condition ratio reduced to sign · eps^e · s^f with s = omega^{n/2} = (a, ϖ)_2.
enum Pattern {
    Sign { neg: bool, eps: bool, s: bool },
    Never,
}

fn pattern(n: u32, v: &[i64], r: &Val) -> Result<Pattern, ThetaError> {
    let (rest, om) = r.sym().strip_omega();
    let plain = r.phase().0 == 0 && rest.q2() == 0 && rest.gamma_exp() == 0 && rest.gauss_exps().is_empty();
    if plain && (om == 0 || 2 * om == n) {
        return Ok(Pattern::Sign { neg: rest.is_negative(), eps: rest.eps_exp() == 1, s: om != 0 });
    }
    if r.sym().modulus_q2() != 0 {
        return Ok(Pattern::Never);
    }
    Err(ThetaError::Undecidable(v.to_vec(), r.to_string()))
}

fn solved_form(n: u32, s1: &[(i8, Vec<i8>)]) -> String {
    let all = |want: &[i8]| s1.iter().all(|(_, s)| s == want);
    if all(&[1, -1]) {
        return "any unit a".into();
    }
    if all(&[]) {
        return "never".into();
    }
    if all(&[1]) {
        return "a ∈ (O^×)^2".into();
    }
    if all(&[-1]) {
        return "a ∉ (O^×)^2".into();
    }
    let v = n.trailing_zeros();
    let follows = |sign: i8| s1.iter().all(|(e, s)| s == &vec![sign * e]);
    if n.is_multiple_of(2) && follows(1) {
        return match v {
            1 => "a ∈ -(O^×)^2".into(),
            2 => "a^2 ∈ -(O^×)^4".into(),
            _ => format!("(a,ϖ)_2 = (-1,ϖ)_{}", 1u32 << v),
        };
    }
    if n.is_multiple_of(2) && follows(-1) {
        return match v {
            1 => "a ∉ -(O^×)^2".into(),
            2 => "a^2 ∉ -(O^×)^4".into(),
            _ => format!("(a,ϖ)_2 = -(-1,ϖ)_{}", 1u32 << v),
        };
    }
    s1.iter().map(|(e, s)| format!("eps={e}: (a,ϖ)_2 ∈ {s:?}")).collect::<Vec<_>>().join("; ")
}

/// Dimension of the distinguished theta representation for every value of
/// eps = (-1, ϖ)_n and (a, ϖ)_2, and the resulting condition on a.
pub fn decide_distinguished(
    cc: &CoverCtx,
    lower: usize,
    images: &[ImageConditions],
    dist: &Distinguished,
) -> Result<DistinguishedVerdict, ThetaError> {
    let n = cc.n();
    let mut pats: Vec<Vec<Pattern>> = Vec::with_capacity(images.len());
    for im in images {
        let mut ps = Vec::with_capacity(im.all.len());
        for c in &im.all {
            let r = dist.eval(&cc.cover, &c.v)?.div(&Val::new(c.required.clone()));
            ps.push(pattern(n, &c.v, &r)?);
        }
        pats.push(ps);
    }
    let eps_values: &[i8] = if n.is_multiple_of(2) { &[1, -1] } else { &[1] };
    let mut rows = Vec::new();
    let mut s1 = Vec::new();
    for &e in eps_values {
        let mut ones = Vec::new();
        for s in [1i8, -1] {
            let holds = |p: &Pattern| match p {
                Pattern::Never => false,
                Pattern::Sign { neg, eps, s: f } => {
                    let mut x: i8 = if *neg { -1 } else { 1 };
                    if *eps {
                        x *= e;
                    }
                    if *f {
                        x *= s;
                    }
                    x == 1
                }
            };
            let dim = lower + pats.iter().filter(|ps| ps.iter().all(holds)).count();
            rows.push((e, s, dim));
            if dim == 1 {
                ones.push(s);
            }
        }
        s1.push((e, ones));
    }
    Ok(DistinguishedVerdict { rows, unit_condition: solved_form(n, &s1) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::QForm;
    use crate::rootdata::RootDatum;
    use crate::theta::ThetaContext;

    fn cc(f: Family, r: usize, n: i64) -> CoverCtx {
        CoverCtx::new(CoverSpec::new(RootDatum::build(f, r).unwrap(), n, QForm::Short(1)).unwrap())
    }

    #[test]
    fn sl_n_value_at_y_qn() {
        for n in 2..=8i64 {
            let c = cc(Family::A, (n - 1) as usize, n);
            let d = Distinguished::new(&c, Twist::Abstract).unwrap();
            let y: Vector = (1..n).collect();
            let nu = n as u32;
            let e = (n - 1) * (n - 1);
            let g = gamma_prime(nu, e, Twist::Abstract).unwrap();
            let want = g.mul_sym(&SymVal::q_half(nu, -(n - 1)));
            assert_eq!(d.eval(&c.cover, &y).unwrap(), want, "n={n}");
        }
    }

    #[test]
    fn sp_long_root_multiples() {
        for (r, n) in [(2usize, 6i64), (2, 10), (3, 10), (3, 14), (2, 4), (3, 8)] {
            let c = cc(Family::C, r, n);
            let d = Distinguished::new(&c, Twist::Abstract).unwrap();
            assert_eq!(c.cover.q_simple[r - 1], 1, "alpha_r^vee is the short coroot");
            let m = n / 2;
            let mut y = vec![0; r];
            y[r - 1] = m;
            assert!(c.lat.yqn.member(&y));
            let g = gamma_prime(n as u32, m, Twist::Abstract).unwrap();
            assert_eq!(d.eval0(&c.cover, &y).unwrap(), g, "r={r} n={n}");
        }
    }

    #[test]
    fn sl_table() {
        for n in 2..=7i64 {
            let ctx = ThetaContext::new(cc(Family::A, (n - 1) as usize, n).cover).unwrap();
            let d = Distinguished::new(&ctx.cc, Twist::Abstract).unwrap();
            let v = decide_distinguished(&ctx.cc, ctx.lower(), &ctx.images, &d).unwrap();
            let want = match n % 8 {
                0 | 2 => "a ∈ (O^×)^2",
                6 => "a ∈ -(O^×)^2",
                4 => "a^2 ∈ -(O^×)^4",
                _ => "any unit a",
            };
            assert_eq!(v.unit_condition, want, "n={n} rows={:?}", v.rows);
        }
    }

    #[test]
    fn concrete_twist_is_exceptional() {
        let c = cc(Family::C, 2, 10);
        for k in 0..10 {
            assert!(Distinguished::new(&c, Twist::Omega(k)).is_ok());
        }
    }
}
