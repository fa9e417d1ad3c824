//! Character values: a symbolic scalar times an explicit root of unity, and
//! monomials in the unknown values of a character on free generators.

use std::fmt;

use num_integer::Integer;

use crate::symfield::SymVal;

/// `exp(2πi·num/den) · sym` with the phase kept in `[0, 1/2)`; a phase of a
/// half or more is folded into the sign of `sym`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Val {
    sym: SymVal,
    num: i64,
    den: i64,
}

impl Val {
    pub fn new(sym: SymVal) -> Val {
        Val { sym, num: 0, den: 1 }
    }

    pub fn one(n: u32) -> Val {
        Val::new(SymVal::one(n))
    }

    /// `exp(2πi·num/den)`.
    pub fn root_of_unity(n: u32, num: i64, den: i64) -> Val {
        Val::one(n).rotate(num, den)
    }

    /// Multiplies by `exp(2πi·num/den)`.
    pub fn rotate(&self, num: i64, den: i64) -> Val {
        assert!(den > 0, "phase denominator must be positive");
        let l = 2 * self.den.lcm(&den);
        let mut a = (self.num * (l / self.den) + num * (l / den)).rem_euclid(l);
        let mut sym = self.sym.clone();
        if 2 * a >= l {
            a -= l / 2;
            sym = sym.mul(&SymVal::minus_one(sym.degree()));
        }
        let g = a.gcd(&l).max(1);
        let (num, den) = if a == 0 { (0, 1) } else { (a / g, l / g) };
        Val { sym, num, den }
    }

    pub fn sym(&self) -> &SymVal {
        &self.sym
    }

    pub fn phase(&self) -> (i64, i64) {
        (self.num, self.den)
    }

    pub fn degree(&self) -> u32 {
        self.sym.degree()
    }

    pub fn is_one(&self) -> bool {
        self.num == 0 && self.sym.is_one()
    }

    pub fn mul(&self, o: &Val) -> Val {
        Val { sym: self.sym.mul(&o.sym), num: self.num, den: self.den }.rotate(o.num, o.den)
    }

    pub fn mul_sym(&self, s: &SymVal) -> Val {
        Val { sym: self.sym.mul(s), num: self.num, den: self.den }
    }

    pub fn inv(&self) -> Val {
        Val::new(self.sym.inv()).rotate(-self.num, self.den)
    }

    pub fn div(&self, o: &Val) -> Val {
        self.mul(&o.inv())
    }

    pub fn pow(&self, k: i64) -> Val {
        Val::new(self.sym.pow(k)).rotate(self.num * k, self.den)
    }
}

impl From<SymVal> for Val {
    fn from(s: SymVal) -> Val {
        Val::new(s)
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            return write!(f, "{}", self.sym);
        }
        write!(f, "zeta_{}^{}", self.den, self.num)?;
        if !self.sym.is_one() {
            write!(f, " · {}", self.sym)?;
        }
        Ok(())
    }
}

/// `coef · Π x_i^{exps[i]}` where x_i is the unknown value on the i-th generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub coef: Val,
    pub exps: Vec<i64>,
}

impl Mono {
    pub fn constant(v: Val, gens: usize) -> Mono {
        Mono { coef: v, exps: vec![0; gens] }
    }

    /// The single generator carrying a nonzero exponent, if exactly one does.
    pub fn single(&self) -> Option<(usize, i64)> {
        let mut it = self.exps.iter().enumerate().filter(|(_, &e)| e != 0);
        let first = it.next()?;
        it.next().is_none().then_some((first.0, *first.1))
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.coef.is_one() || self.is_constant() {
            parts.push(self.coef.to_string());
        }
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{}", i + 1, e)),
            }
        }
        f.write_str(&parts.join(" · "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases_fold_into_sign() {
        let z = Val::root_of_unity(4, 3, 4);
        assert_eq!(z.phase(), (1, 4));
        assert!(z.sym().is_negative());
        assert!(z.pow(4).is_one());
        assert!(Val::root_of_unity(6, 1, 2).sym().is_negative());
        assert!(z.mul(&z.inv()).is_one());
    }

    #[test]
    fn roots_of_unity_cycle() {
        for d in 1..12 {
            let z = Val::root_of_unity(d as u32, 1, d);
            let mut acc = Val::one(d as u32);
            for k in 1..=d {
                acc = acc.mul(&z);
                assert_eq!(acc.is_one(), k == d, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn display() {
        let v = Val::new(SymVal::q_half(4, -1)).rotate(1, 8);
        assert_eq!(v.to_string(), "zeta_8^1 · q^{-1/2}");
        let m = Mono { coef: Val::one(4), exps: vec![0, 2, 1] };
        assert_eq!(m.to_string(), "x2^2 · x3");
        assert_eq!(m.single(), None);
    }
}
