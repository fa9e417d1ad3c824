//! Exceptional characters, the scattering factors t and T, and the Whittaker
//! dimension of the theta representation.
//!
//! An exceptional character is pinned down on Y_{Q,n}^sc; on the rest of
//! Y_{Q,n} it is free up to finitely many roots of unity. `CharSpace` keeps
//! those unknowns as monomials in the values x_i = χ(s_{u_i}) on an adapted
//! basis u_i of Y_{Q,n}.

mod checks;
mod dimension;
mod distinguished;
mod value;

pub use checks::{cocycle_check, tau_entry, verify_rank2, word_independence, CocycleReport, Rank2Report, Tau};
pub use dimension::{
    bisector_check, light_sl_images, Branch, Condition, DimTable, ImageConditions, Solver, ThetaContext, Verdict,
};
pub use distinguished::{decide_distinguished, DistinguishedVerdict, Distinguished, Twist};
pub use value::{Mono, Val};

use num_integer::Integer;
use thiserror::Error;

use crate::lattice::{CoverSpec, LatticeError, LatticeKind, Lattices, Sublattice};
use crate::rootdata::{RootError, Vector};
use crate::symfield::{SymError, SymVal};

#[derive(Debug, Error)]
pub enum ThetaError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("{0:?} is not in Y_Q,n")]
    NotInLattice(Vector),
    #[error("gamma exponent 2(k-1)Q(y)/n is not integral for y = {0:?}, k = {1}")]
    NonIntegralWeil(Vector, i64),
    #[error("odd degree {0}: gamma exponent {1} is not divisible by 4")]
    OddDegreeWeil(u32, i64),
    #[error("twist exponent <y, x> is not a half-integer for y = {0:?}")]
    NonIntegralTwist(Vector),
    #[error("character is not exceptional at simple root {0}")]
    NotExceptional(usize),
    #[error("no anchor value for generator {0}")]
    NoAnchor(usize),
    #[error("the two bisectors give different generators")]
    GeneratorMismatch,
    #[error("cannot decide condition at {0:?}: ratio {1}")]
    Undecidable(Vector, String),
}

/// Unknowns of an exceptional character and the relations x_i^{d_i} = powers[i].
#[derive(Clone, Debug)]
pub struct CharSpace {
    pub gens: Vec<Vector>,
    /// d_i with d_i·u_i ∈ Y_{Q,n}^sc; 0 for a direction with no relation.
    pub orders: Vec<i64>,
    pub powers: Vec<Option<Val>>,
    coords: Sublattice,
}

impl CharSpace {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Generators whose value is not fixed by the relations.
    pub fn relevant(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.orders[i] != 1).collect()
    }

    pub fn reduce(&self, mut m: Mono) -> Mono {
        for i in 0..self.len() {
            let d = self.orders[i];
            if d > 0 {
                let (qt, r) = m.exps[i].div_mod_floor(&d);
                if qt != 0 {
                    m.coef = m.coef.mul(&self.powers[i].as_ref().expect("finite order").pow(qt));
                }
                m.exps[i] = r;
            }
        }
        m
    }

    pub fn mul(&self, a: &Mono, b: &Mono) -> Mono {
        let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
        self.reduce(Mono { coef: a.coef.mul(&b.coef), exps })
    }

    pub fn pow(&self, a: &Mono, k: i64) -> Mono {
        self.reduce(Mono { coef: a.coef.pow(k), exps: a.exps.iter().map(|e| e * k).collect() })
    }

    pub fn inv(&self, a: &Mono) -> Mono {
        self.pow(a, -1)
    }

    /// Value under an assignment of the x_i; `None` when a generic unknown remains.
    pub fn eval(&self, m: &Mono, x: &[Option<Val>]) -> Option<Val> {
        let mut acc = m.coef.clone();
        for (i, &e) in m.exps.iter().enumerate() {
            if e != 0 {
                acc = acc.mul(&x[i].as_ref()?.pow(e));
            }
        }
        Some(acc)
    }
}

/// eps exponent of the product Π s_{c_i b_i} rewritten as s_{Σ c_i b_i}.
pub(crate) fn fold_eps(cover: &CoverSpec, gens: &[Vector], c: &[i64]) -> i64 {
    let mut e = 0i64;
    for i in 0..gens.len() {
        e += (cover.q(&gens[i]) % 2) * ((c[i] * (c[i] - 1) / 2) % 2);
        for j in i + 1..gens.len() {
            e += (c[i] * c[j] % 2) * (cover.d(&gens[i], &gens[j]) % 2);
        }
    }
    e.rem_euclid(2)
}

/// A cover with its lattices and character unknowns; no Weyl group needed.
#[derive(Clone, Debug)]
pub struct CoverCtx {
    pub cover: CoverSpec,
    pub lat: Lattices,
    pub space: CharSpace,
}

impl CoverCtx {
    pub fn new(cover: CoverSpec) -> CoverCtx {
        let lat = Lattices::new(&cover);
        let m = cover.datum.y_rank;
        let n = cover.n as u32;
        let adapted = lat.yqn.adapted_basis(&lat.sc);
        let gens: Vec<Vector> = adapted.iter().map(|(u, _)| u.clone()).collect();
        let orders: Vec<i64> = adapted.iter().map(|&(_, d)| d).collect();
        let coords = Sublattice::from_generators(LatticeKind::Custom, m, &gens);
        let mut ctx = CoverCtx {
            cover,
            lat,
            space: CharSpace { gens: gens.clone(), orders: orders.clone(), powers: vec![None; gens.len()], coords },
        };
        for i in 0..gens.len() {
            let d = orders[i];
            if d > 0 {
                let y: Vector = gens[i].iter().map(|x| x * d).collect();
                let f = ctx.forced(&y).expect("d_i u_i lies in Y_Q,n^sc");
                let hat = SymVal::eps_pow(n, ctx.cover.q(&gens[i]) * (d * (d - 1) / 2));
                ctx.space.powers[i] = Some(Val::new(f.mul(&hat)));
            }
        }
        ctx
    }

    pub fn n(&self) -> u32 {
        self.cover.n as u32
    }

    pub fn eps_pow(&self, k: i64) -> SymVal {
        SymVal::eps_pow(self.n(), k)
    }

    /// Value of every exceptional character on s_y, y ∈ Y_{Q,n}^sc.
    pub fn forced(&self, y: &[i64]) -> Option<SymVal> {
        let gens = self.cover.sc_generators();
        let sc = Sublattice::from_generators(LatticeKind::Custom, self.cover.datum.y_rank, &gens);
        let a = sc.gen_coords(y)?;
        let e = fold_eps(&self.cover, &gens, &a);
        Some(SymVal::q_pow(self.n(), -a.iter().sum::<i64>()).mul(&self.eps_pow(e)))
    }

    /// χ(s_y) as a monomial in the unknowns.
    pub fn chi(&self, y: &[i64]) -> Result<Mono, ThetaError> {
        let c = self.space.coords.gen_coords(y).ok_or_else(|| ThetaError::NotInLattice(y.to_vec()))?;
        let e = fold_eps(&self.cover, &self.space.gens, &c);
        Ok(self.space.reduce(Mono { coef: Val::new(self.eps_pow(e)), exps: c }))
    }

    /// t(w_α, y) for the simple root α_i.
    pub fn tfactor(&self, i: usize, y: &[i64]) -> SymVal {
        let d = &self.cover.datum;
        let p = d.pair(y, i);
        let a = p - 1;
        let k = Integer::div_ceil(&p, &self.cover.n_alpha(i));
        let e = a * self.cover.d(y, &d.coroots[i]);
        SymVal::q_pow(self.n(), k - 1)
            .mul(&self.eps_pow(e))
            .mul(&SymVal::gauss_pow(self.n(), a * self.cover.q_simple[i], -1))
    }

    /// The shifted action of a word; the rightmost letter acts first.
    pub fn apply_word(&self, word: &[usize], y: &[i64]) -> Vector {
        word.iter().rev().fold(y.to_vec(), |cur, &i| self.cover.datum.shifted_reflect(i, &cur))
    }

    /// T(w, y) along a reduced word of w.
    pub fn big_t_word(&self, word: &[usize], y: &[i64]) -> SymVal {
        let mut cur = y.to_vec();
        let mut acc = SymVal::one(self.n());
        for &i in word.iter().rev() {
            acc = acc.mul(&self.tfactor(i, &cur));
            cur = self.cover.datum.shifted_reflect(i, &cur);
        }
        acc
    }
}
