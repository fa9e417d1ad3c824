//! Covering data (B_Q, bisector D, n_α) and the sublattices Y_{Q,n},
//! Y_{Q,n}^sc and J = nY + Y_{Q,n}^sc, with quotient enumeration through
//! Smith normal form.

#![allow(clippy::needless_range_loop)]

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rootdata::{dot, Family, RootDatum, Vector, WeylGroup};

pub type IMat = Vec<Vec<i64>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("degree must be at least 1, got {0}")]
    BadDegree(i64),
    #[error("q_short must be nonzero")]
    ZeroQ,
    #[error("Kazhdan-Patterson parameters need 2p - q = ±1, got p = {0}, q = {1}")]
    KpConstraint(i64, i64),
    #[error("GL family needs kp_p and kp_q")]
    MissingKp,
    #[error("kp parameters only apply to the GL family")]
    UnexpectedKp,
    #[error("quadratic form is not Weyl invariant")]
    NotInvariant,
    #[error("sublattice has infinite index")]
    InfiniteIndex,
}

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_vec(m: &IMat, v: &[i64]) -> Vector {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let k = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..k).map(|j| row.iter().zip(b).map(|(x, br)| x * br[j]).sum()).collect())
        .collect()
}

/// Smith normal form `u · a · v = diag(d)`, with `uinv = u^{-1}`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IMat,
    pub uinv: IMat,
    pub v: IMat,
    /// Nonzero elementary divisors, each dividing the next.
    pub d: Vec<i64>,
}

/// Smith normal form of an m×k integer matrix given by rows.
pub fn snf(a: &IMat, m: usize) -> Snf {
    let k = a.first().map_or(0, |r| r.len());
    let mut a = a.clone();
    let mut u = identity(m);
    let mut uinv = identity(m);
    let mut v = identity(k);
    let mut d = Vec::new();

    let swap_rows = |a: &mut IMat, u: &mut IMat, uinv: &mut IMat, i: usize, j: usize| {
        a.swap(i, j);
        u.swap(i, j);
        for row in uinv.iter_mut() {
            row.swap(i, j);
        }
    };
    let swap_cols = |a: &mut IMat, v: &mut IMat, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    // row_i -= q·row_t
    let row_sub = |a: &mut IMat, u: &mut IMat, uinv: &mut IMat, i: usize, t: usize, q: i64| {
        for c in 0..a[i].len() {
            a[i][c] -= q * a[t][c];
        }
        for c in 0..m {
            u[i][c] -= q * u[t][c];
        }
        for row in uinv.iter_mut() {
            row[t] += q * row[i];
        }
    };
    // col_j -= q·col_t
    let col_sub = |a: &mut IMat, v: &mut IMat, j: usize, t: usize, q: i64| {
        for row in a.iter_mut() {
            row[j] -= q * row[t];
        }
        for row in v.iter_mut() {
            row[j] -= q * row[t];
        }
    };

    for t in 0..m.min(k) {
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|(b, _, _)| x.abs() < b) {
                    best = Some((x.abs(), i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        swap_rows(&mut a, &mut u, &mut uinv, t, pi);
        swap_cols(&mut a, &mut v, t, pj);
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t] != 0 {
                    let q = Integer::div_floor(&a[i][t], &p);
                    row_sub(&mut a, &mut u, &mut uinv, i, t, q);
                    dirty |= a[i][t] != 0;
                }
            }
            for j in t + 1..k {
                if a[t][j] != 0 {
                    let q = Integer::div_floor(&a[t][j], &p);
                    col_sub(&mut a, &mut v, j, t, q);
                    dirty |= a[t][j] != 0;
                }
            }
            if dirty {
                let mut best = (a[t][t].abs(), t, t);
                for i in t + 1..m {
                    if a[i][t] != 0 && a[i][t].abs() < best.0 {
                        best = (a[i][t].abs(), i, t);
                    }
                }
                for j in t + 1..k {
                    if a[t][j] != 0 && a[t][j].abs() < best.0 {
                        best = (a[t][j].abs(), t, j);
                    }
                }
                swap_rows(&mut a, &mut u, &mut uinv, t, best.1);
                swap_cols(&mut a, &mut v, t, best.2);
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..k).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    // row_t += row_i, then keep reducing
                    row_sub(&mut a, &mut u, &mut uinv, t, i, -1);
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
            for row in uinv.iter_mut() {
                row[t] = -row[t];
            }
        }
        d.push(a[t][t]);
    }
    Snf { u, uinv, v, d }
}

fn columns_to_rows(cols: &[Vector], m: usize) -> IMat {
    (0..m).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

fn column(m: &IMat, j: usize) -> Vector {
    m.iter().map(|r| r[j]).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeKind {
    Yqn,
    YqnSc,
    J,
    Custom,
}

/// A sublattice of Z^m with its Smith normal form data.
#[derive(Clone, Debug)]
pub struct Sublattice {
    pub kind: LatticeKind,
    pub ambient: usize,
    /// Basis vectors (columns).
    pub basis: Vec<Vector>,
    ngens: usize,
    snf: Snf,
}

impl Sublattice {
    pub fn from_generators(kind: LatticeKind, ambient: usize, gens: &[Vector]) -> Sublattice {
        let snf = snf(&columns_to_rows(gens, ambient), ambient);
        let basis = snf
            .d
            .iter()
            .enumerate()
            .map(|(i, &di)| column(&snf.uinv, i).into_iter().map(|x| x * di).collect())
            .collect();
        Sublattice { kind, ambient, basis, ngens: gens.len(), snf }
    }

    pub fn rank(&self) -> usize {
        self.snf.d.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient
    }

    /// Coordinates in `basis`, or `None` when y is not in the lattice.
    pub fn coords(&self, y: &[i64]) -> Option<Vector> {
        let z = mat_vec(&self.snf.u, y);
        let r = self.rank();
        if z[r..].iter().any(|&x| x != 0) {
            return None;
        }
        z[..r]
            .iter()
            .zip(&self.snf.d)
            .map(|(&zi, &di)| if zi % di == 0 { Some(zi / di) } else { None })
            .collect()
    }

    pub fn member(&self, y: &[i64]) -> bool {
        let z = mat_vec(&self.snf.u, y);
        let r = self.rank();
        z[r..].iter().all(|&x| x == 0) && z[..r].iter().zip(&self.snf.d).all(|(&zi, &di)| zi % di == 0)
    }

    pub fn combine(&self, c: &[i64]) -> Vector {
        let mut y = vec![0; self.ambient];
        for (ci, b) in c.iter().zip(&self.basis) {
            for (t, x) in y.iter_mut().zip(b) {
                *t += ci * x;
            }
        }
        y
    }

    pub fn quotient(&self) -> Result<QuotientEnum, LatticeError> {
        if !self.is_full_rank() {
            return Err(LatticeError::InfiniteIndex);
        }
        Ok(QuotientEnum { snf: self.snf.d.clone(), u: self.snf.u.clone(), uinv: self.snf.uinv.clone() })
    }

    /// Coordinates along the original generators, which must be independent.
    pub fn gen_coords(&self, y: &[i64]) -> Option<Vector> {
        assert_eq!(self.rank(), self.ngens, "generators are not independent");
        let z = mat_vec(&self.snf.u, y);
        let r = self.rank();
        if z[r..].iter().any(|&x| x != 0) {
            return None;
        }
        let w: Option<Vector> = z[..r]
            .iter()
            .zip(&self.snf.d)
            .map(|(&zi, &di)| if zi % di == 0 { Some(zi / di) } else { None })
            .collect();
        w.map(|w| mat_vec(&self.snf.v, &w))
    }

    /// Basis y_i of `self` with multipliers k_i such that {k_i y_i} spans `sub`.
    /// A multiplier 0 marks a direction outside the span of `sub`.
    pub fn adapted_basis(&self, sub: &Sublattice) -> Vec<(Vector, i64)> {
        let r = self.rank();
        let coords: Vec<Vector> = sub
            .basis
            .iter()
            .map(|b| self.coords(b).expect("sublattice must be contained"))
            .collect();
        let s = snf(&columns_to_rows(&coords, r), r);
        (0..r)
            .map(|i| {
                let y = self.combine(&column(&s.uinv, i));
                (y, s.d.get(i).copied().unwrap_or(0))
            })
            .collect()
    }
}

/// Y / L for a full-rank sublattice L; representatives are built on demand.
#[derive(Clone, Debug)]
pub struct QuotientEnum {
    pub snf: Vec<i64>,
    u: IMat,
    uinv: IMat,
}

impl QuotientEnum {
    fn digits(&self, mut idx: usize) -> Vector {
        let mut z = vec![0; self.snf.len()];
        for (i, &di) in self.snf.iter().enumerate().rev() {
            let di = di as usize;
            z[i] = (idx % di) as i64;
            idx /= di;
        }
        z
    }

    pub fn len(&self) -> usize {
        self.snf.iter().map(|&d| d as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rep(&self, idx: usize) -> Vector {
        mat_vec(&self.uinv, &self.digits(idx))
    }

    pub fn class_of(&self, y: &[i64]) -> usize {
        let z = mat_vec(&self.u, y);
        let mut idx = 0usize;
        for (zi, &di) in z.iter().zip(&self.snf) {
            idx = idx * di as usize + zi.rem_euclid(di) as usize;
        }
        idx
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QForm {
    /// Q = q_short on short coroots, extended Weyl-invariantly.
    Short(i64),
    /// B_Q(e_i, e_i) = 2p, B_Q(e_i, e_j) = q.
    Kp { p: i64, q: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bisector {
    Lower,
    Upper,
}

#[derive(Clone, Debug)]
pub struct CoverSpec {
    pub datum: RootDatum,
    pub n: i64,
    pub qform: QForm,
    pub gram: IMat,
    pub bisector: IMat,
    pub bisector_kind: Bisector,
    /// Q(α_i∨) for simple coroots.
    pub q_simple: Vec<i64>,
    pub n_alpha: Vec<i64>,
}

fn simple_q_values(d: &RootDatum, q_short: i64) -> Vec<i64> {
    // relative lengths via Q_j / Q_i = C[j][i] / C[i][j], starting from 6
    let r = d.rank;
    let mut q = vec![0i64; r];
    for start in 0..r {
        if q[start] != 0 {
            continue;
        }
        let mut comp = vec![start];
        q[start] = 6;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..r {
                if j != i && d.cartan[i][j] != 0 && q[j] == 0 {
                    q[j] = q[i] * d.cartan[j][i] / d.cartan[i][j];
                    comp.push(j);
                    stack.push(j);
                }
            }
        }
        let min = comp.iter().map(|&i| q[i]).min().unwrap();
        for &i in &comp {
            q[i] = q[i] / min * q_short;
        }
    }
    q
}

impl CoverSpec {
    pub fn new(datum: RootDatum, n: i64, qform: QForm) -> Result<CoverSpec, LatticeError> {
        Self::with_bisector(datum, n, qform, Bisector::Lower)
    }

    pub fn with_bisector(datum: RootDatum, n: i64, qform: QForm, kind: Bisector) -> Result<CoverSpec, LatticeError> {
        if n < 1 {
            return Err(LatticeError::BadDegree(n));
        }
        let m = datum.y_rank;
        let gram: IMat = match (datum.family, qform) {
            (Family::GL, QForm::Kp { p, q }) => {
                if (2 * p - q).abs() != 1 {
                    return Err(LatticeError::KpConstraint(p, q));
                }
                (0..m).map(|i| (0..m).map(|j| if i == j { 2 * p } else { q }).collect()).collect()
            }
            (Family::GL, QForm::Short(_)) => return Err(LatticeError::MissingKp),
            (_, QForm::Kp { .. }) => return Err(LatticeError::UnexpectedKp),
            (_, QForm::Short(qs)) => {
                if qs == 0 {
                    return Err(LatticeError::ZeroQ);
                }
                let qv = simple_q_values(&datum, qs);
                (0..m).map(|i| (0..m).map(|j| qv[j] * datum.cartan[i][j]).collect()).collect()
            }
        };
        let bisector: IMat = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let below = match kind {
                            Bisector::Lower => i > j,
                            Bisector::Upper => i < j,
                        };
                        if i == j {
                            gram[i][i] / 2
                        } else if below {
                            gram[i][j]
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        let mut cover = CoverSpec {
            datum,
            n,
            qform,
            gram,
            bisector,
            bisector_kind: kind,
            q_simple: vec![],
            n_alpha: vec![],
        };
        cover.q_simple = cover.datum.coroots.iter().map(|c| cover.q(c)).collect();
        cover.n_alpha = cover.q_simple.iter().map(|&q| n / n.gcd(&q)).collect();
        cover.check_invariants()?;
        Ok(cover)
    }

    fn check_invariants(&self) -> Result<(), LatticeError> {
        let m = self.datum.y_rank;
        let basis: Vec<Vector> = (0..m).map(|i| column(&identity(m), i)).collect();
        for i in 0..m {
            if self.gram[i][i] % 2 != 0 {
                return Err(LatticeError::NotInvariant);
            }
            for j in 0..m {
                if self.gram[i][j] != self.gram[j][i]
                    || self.bisector[i][j] + self.bisector[j][i] != self.gram[i][j]
                {
                    return Err(LatticeError::NotInvariant);
                }
            }
        }
        for a in 0..self.datum.rank {
            for b in &basis {
                for c in &basis {
                    let (wb, wc) = (self.datum.reflect(a, b), self.datum.reflect(a, c));
                    if self.b_q(&wb, &wc) != self.b_q(b, c) {
                        return Err(LatticeError::NotInvariant);
                    }
                }
                let lhs = self.b_q(&self.datum.coroots[a], b);
                if lhs != self.q_simple[a] * self.datum.pair(b, a) {
                    return Err(LatticeError::NotInvariant);
                }
            }
        }
        Ok(())
    }

    pub fn b_q(&self, a: &[i64], b: &[i64]) -> i64 {
        dot(a, &mat_vec(&self.gram, b))
    }

    pub fn q(&self, y: &[i64]) -> i64 {
        self.b_q(y, y) / 2
    }

    /// D(a, b) for the chosen bisector.
    pub fn d(&self, a: &[i64], b: &[i64]) -> i64 {
        dot(a, &mat_vec(&self.bisector, b))
    }

    pub fn n_alpha(&self, i: usize) -> i64 {
        self.n_alpha[i]
    }

    /// Y_{Q,n} = {y : B_Q(y, b) ∈ nZ for all basis vectors b}.
    pub fn sublattice_yqn(&self) -> Sublattice {
        let m = self.datum.y_rank;
        let s = snf(&self.gram, m);
        let gens: Vec<Vector> = (0..m)
            .map(|i| {
                let di = s.d.get(i).copied().unwrap_or(0);
                let f = self.n / self.n.gcd(&di);
                column(&s.v, i).into_iter().map(|x| x * f).collect()
            })
            .collect();
        Sublattice::from_generators(LatticeKind::Yqn, m, &gens)
    }

    pub fn sc_generators(&self) -> Vec<Vector> {
        self.datum
            .coroots
            .iter()
            .zip(&self.n_alpha)
            .map(|(c, &na)| c.iter().map(|x| x * na).collect())
            .collect()
    }

    pub fn sublattice_yqn_sc(&self) -> Sublattice {
        Sublattice::from_generators(LatticeKind::YqnSc, self.datum.y_rank, &self.sc_generators())
    }

    pub fn sublattice_j(&self) -> Sublattice {
        let m = self.datum.y_rank;
        let mut gens = self.sc_generators();
        gens.extend((0..m).map(|i| column(&identity(m), i).into_iter().map(|x| x * self.n).collect::<Vector>()));
        Sublattice::from_generators(LatticeKind::J, m, &gens)
    }
}

/// The three lattices of a cover together with the quotient Y/Y_{Q,n}.
#[derive(Clone, Debug)]
pub struct Lattices {
    pub yqn: Sublattice,
    pub sc: Sublattice,
    pub j: Sublattice,
    pub quotient: QuotientEnum,
}

impl Lattices {
    pub fn new(cover: &CoverSpec) -> Lattices {
        let yqn = cover.sublattice_yqn();
        let sc = cover.sublattice_yqn_sc();
        let j = cover.sublattice_j();
        let quotient = yqn.quotient().expect("nY is inside Y_{Q,n}, so the index is finite");
        Lattices { yqn, sc, j, quotient }
    }

    /// |Y_{Q,n} / Y_{Q,n}^sc| measured inside the span of the coroots.
    pub fn center_order(&self) -> i64 {
        self.yqn.adapted_basis(&self.sc).iter().map(|&(_, k)| k).filter(|&k| k != 0).product()
    }

    /// Generators of every lattice map into the next larger one.
    pub fn sandwich_holds(&self, cover: &CoverSpec) -> bool {
        let m = cover.datum.y_rank;
        let ny: Vec<Vector> = (0..m).map(|i| column(&identity(m), i).into_iter().map(|x| x * cover.n).collect()).collect();
        ny.iter().all(|v| self.j.member(v))
            && self.sc.basis.iter().all(|v| self.j.member(v))
            && self.j.basis.iter().all(|v| self.yqn.member(v))
            && self.yqn.basis.iter().all(|v| v.len() == m)
    }

    /// Every Weyl image of a basis vector stays in the same lattice.
    pub fn weyl_stable(&self, weyl: &WeylGroup) -> bool {
        weyl.elements.iter().all(|w| {
            [&self.yqn, &self.sc, &self.j]
                .iter()
                .all(|l| l.basis.iter().all(|b| l.member(&w.matrix.apply(b))))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cover(f: Family, r: usize, n: i64) -> CoverSpec {
        CoverSpec::new(RootDatum::build(f, r).unwrap(), n, QForm::Short(1)).unwrap()
    }

    #[test]
    fn snf_reconstructs() {
        let a: IMat = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = snf(&a, 3);
        let d = mat_mul(&mat_mul(&s.u, &a), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.d[i] } else { 0 };
                assert_eq!(d[i][j], want);
            }
        }
        assert_eq!(s.d, vec![2, 6, 12]);
        assert_eq!(mat_mul(&s.u, &s.uinv), identity(3));
    }

    #[test]
    fn gram_examples() {
        let a = cover(Family::A, 3, 2);
        assert_eq!(a.gram[0], vec![2, -1, 0]);
        let g = cover(Family::G, 2, 7);
        assert_eq!(g.gram[0][1], -3);
        assert_eq!(g.gram[1][1], 6);
        let c = cover(Family::C, 2, 4);
        assert_eq!(c.gram[0][0], 4);
        assert_eq!(c.bisector, vec![vec![2, 0], vec![-2, 1]]);
    }

    #[test]
    fn n_alpha_examples() {
        assert_eq!(cover(Family::G, 2, 7).n_alpha(1), 7);
        assert_eq!(cover(Family::C, 3, 6).n_alpha(0), 3);
        assert_eq!(cover(Family::B, 3, 1).n_alpha(2), 1);
    }

    #[test]
    fn sl3_degree3() {
        let c = cover(Family::A, 2, 3);
        let l = c.sublattice_yqn();
        assert!(l.member(&[2, 1]));
        assert!(l.member(&[3, 0]));
        assert!(l.member(&[0, 0]));
        assert!(!l.member(&[1, 0]));
        let q = l.quotient().unwrap();
        assert_eq!(q.len(), 3);
        let paper = Sublattice::from_generators(LatticeKind::Custom, 2, &[vec![2, 1], vec![3, 0]]);
        assert!(l.basis.iter().all(|b| paper.member(b)));
    }

    #[test]
    fn quotient_sizes() {
        assert_eq!(cover(Family::A, 4, 1).sublattice_yqn().quotient().unwrap().len(), 1);
        assert_eq!(cover(Family::C, 2, 10).sublattice_yqn().quotient().unwrap().len(), 25);
        let c = cover(Family::B, 3, 4);
        let q = c.sublattice_yqn().quotient().unwrap();
        for i in 0..q.len() {
            let r = q.rep(i);
            assert_eq!(q.class_of(&r), i);
            let shifted: Vector = r.iter().zip(&c.sublattice_yqn().basis[0]).map(|(a, b)| a + b).collect();
            assert_eq!(q.class_of(&shifted), i);
        }
    }

    #[test]
    fn g2_and_sp_lattices() {
        for n in 2..10 {
            let g = cover(Family::G, 2, n);
            let ls = Lattices::new(&g);
            assert_eq!(ls.center_order(), 1);
        }
        let c = cover(Family::C, 3, 6);
        let ls = Lattices::new(&c);
        for i in 0..3 {
            let mut v = vec![0; 3];
            v[i] = 3;
            assert!(ls.yqn.member(&v));
        }
        assert!(!ls.sc.member(&[0, 0, 3]));
        assert!(ls.sc.member(&[0, 0, 6]));
        assert_eq!(ls.center_order(), 2);
    }

    #[test]
    fn gl_sc_is_not_full_rank() {
        let d = RootDatum::build(Family::GL, 3).unwrap();
        let c = CoverSpec::new(d, 3, QForm::Kp { p: 0, q: 1 }).unwrap();
        let ls = Lattices::new(&c);
        assert!(!ls.sc.is_full_rank());
        assert!(ls.sc.quotient().is_err());
        assert!(ls.sandwich_holds(&c));
        let bad = CoverSpec::new(RootDatum::build(Family::GL, 3).unwrap(), 3, QForm::Kp { p: 1, q: 0 });
        assert_eq!(bad.unwrap_err(), LatticeError::KpConstraint(1, 0));
    }

    #[test]
    fn adapted_basis_multipliers() {
        let c = cover(Family::A, 2, 3);
        let ls = Lattices::new(&c);
        let ad = ls.yqn.adapted_basis(&ls.j);
        let prod: i64 = ad.iter().map(|&(_, k)| k).product();
        assert_eq!(prod, 3);
        for (y, k) in &ad {
            let ky: Vector = y.iter().map(|x| x * k).collect();
            assert!(ls.j.member(&ky));
        }
    }
}
