//! Canonical symbolic scalars: signed half-integral powers of q, the sign
//! symbol eps, the Weil index gamma, the residue symbol omega of a twisting
//! unit, and formal Gauss sums g(j).
//!
//! Every value is kept in a canonical form so that equality is structural.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("gamma is only defined for even degree (n = {0})")]
    GammaOddDegree(u32),
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("cannot parse symbolic value {0:?}")]
    Parse(String),
}

/// A canonical product `sign · q^{q2/2} · eps^e · gamma^c · omega^k · Π g(j)^{m_j}`.
///
/// Canonical means: `eps ∈ {0,1}` (always 0 for odd n), `gamma ∈ {0,1}`,
/// `omega ∈ [0,n)`, and Gauss keys `1 ≤ j < n/2` with nonzero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymVal {
    n: u32,
    neg: bool,
    q2: i64,
    eps: u8,
    gamma: u8,
    omega: u32,
    gauss: BTreeMap<u32, i64>,
}

/// Unreduced exponent data; `normalize` turns it into a `SymVal`.
#[derive(Clone, Debug, Default)]
pub struct RawProduct {
    pub neg: bool,
    pub q2: i64,
    pub eps: i64,
    pub gamma: i64,
    pub omega: i64,
    pub gauss: BTreeMap<i64, i64>,
}

impl RawProduct {
    pub fn gauss_atom(mut self, j: i64, e: i64) -> Self {
        *self.gauss.entry(j).or_insert(0) += e;
        self
    }
}

/// Rewrites a raw product into canonical form.
pub fn normalize(n: u32, raw: RawProduct) -> Result<SymVal, SymError> {
    if n == 0 {
        return Err(SymError::ZeroDegree);
    }
    let ni = n as i64;
    let even = n.is_multiple_of(2);
    let RawProduct { mut neg, mut q2, mut eps, mut gamma, omega, gauss } = raw;
    let mut out: BTreeMap<u32, i64> = BTreeMap::new();
    for (j, e) in gauss {
        if e == 0 {
            continue;
        }
        let j = j.rem_euclid(ni);
        if j == 0 {
            // g(0) = -q^{-1}
            if e % 2 != 0 {
                neg = !neg;
            }
            q2 -= 2 * e;
        } else if even && 2 * j == ni {
            // g(n/2) = q^{-1/2} gamma^{-1}
            q2 -= e;
            gamma -= e;
        } else if 2 * j > ni {
            // g(j) = eps^j q^{-1} g(n-j)^{-1}
            eps += j * e;
            q2 -= 2 * e;
            *out.entry((ni - j) as u32).or_insert(0) -= e;
        } else {
            *out.entry(j as u32).or_insert(0) += e;
        }
    }
    out.retain(|_, e| *e != 0);
    if !even && gamma.rem_euclid(4) != 0 {
        return Err(SymError::GammaOddDegree(n));
    }
    let g = gamma.rem_euclid(4);
    if even {
        // gamma^2 = eps^{n/2}
        eps += (g / 2) * (ni / 2);
    }
    let eps = if even { eps.rem_euclid(2) as u8 } else { 0 };
    Ok(SymVal {
        n,
        neg,
        q2,
        eps,
        gamma: (g % 2) as u8,
        omega: omega.rem_euclid(ni) as u32,
        gauss: out,
    })
}

impl SymVal {
    pub fn one(n: u32) -> Self {
        assert!(n > 0, "degree must be positive");
        SymVal { n, neg: false, q2: 0, eps: 0, gamma: 0, omega: 0, gauss: BTreeMap::new() }
    }

    pub fn minus_one(n: u32) -> Self {
        SymVal { neg: true, ..Self::one(n) }
    }

    /// `q^{k/2}`.
    pub fn q_half(n: u32, k: i64) -> Self {
        SymVal { q2: k, ..Self::one(n) }
    }

    pub fn q_pow(n: u32, k: i64) -> Self {
        Self::q_half(n, 2 * k)
    }

    pub fn eps(n: u32) -> Self {
        Self::eps_pow(n, 1)
    }

    pub fn eps_pow(n: u32, k: i64) -> Self {
        normalize(n, RawProduct { eps: k, ..Default::default() }).expect("eps")
    }

    pub fn gamma(n: u32) -> Result<Self, SymError> {
        Self::gamma_pow(n, 1)
    }

    pub fn gamma_pow(n: u32, k: i64) -> Result<Self, SymError> {
        normalize(n, RawProduct { gamma: k, ..Default::default() })
    }

    pub fn omega(n: u32, k: i64) -> Self {
        normalize(n, RawProduct { omega: k, ..Default::default() }).expect("omega")
    }

    /// The formal Gauss sum `g(j)`, reduced.
    pub fn gauss(n: u32, j: i64) -> Self {
        Self::gauss_pow(n, j, 1)
    }

    pub fn gauss_pow(n: u32, j: i64, e: i64) -> Self {
        normalize(n, RawProduct::default().gauss_atom(j, e)).expect("gauss")
    }

    pub fn degree(&self) -> u32 {
        self.n
    }
    pub fn is_negative(&self) -> bool {
        self.neg
    }
    /// Twice the exponent of q.
    pub fn q2(&self) -> i64 {
        self.q2
    }
    pub fn eps_exp(&self) -> u8 {
        self.eps
    }
    pub fn gamma_exp(&self) -> u8 {
        self.gamma
    }
    pub fn omega_exp(&self) -> u32 {
        self.omega
    }
    pub fn gauss_exps(&self) -> &BTreeMap<u32, i64> {
        &self.gauss
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.n)
    }

    /// True when the value is `±q^{k/2}` with no unit-circle atoms.
    pub fn is_real_power(&self) -> bool {
        self.eps == 0 && self.gamma == 0 && self.omega == 0 && self.gauss.is_empty()
    }

    /// Twice the exponent of q in the absolute value (|g(j)| = q^{-1/2}).
    pub fn modulus_q2(&self) -> i64 {
        self.q2 - self.gauss.values().sum::<i64>()
    }

    fn raw(&self) -> RawProduct {
        RawProduct {
            neg: self.neg,
            q2: self.q2,
            eps: self.eps as i64,
            gamma: self.gamma as i64,
            omega: self.omega as i64,
            gauss: self.gauss.iter().map(|(&j, &e)| (j as i64, e)).collect(),
        }
    }

    fn check_degree(&self, other: &SymVal) {
        assert_eq!(self.n, other.n, "mixing symbolic values of different degree");
    }

    pub fn mul(&self, other: &SymVal) -> SymVal {
        self.check_degree(other);
        let mut r = self.raw();
        let o = other.raw();
        r.neg ^= o.neg;
        r.q2 += o.q2;
        r.eps += o.eps;
        r.gamma += o.gamma;
        r.omega += o.omega;
        for (j, e) in o.gauss {
            *r.gauss.entry(j).or_insert(0) += e;
        }
        normalize(self.n, r).expect("canonical inputs stay canonical")
    }

    pub fn inv(&self) -> SymVal {
        self.pow(-1)
    }

    pub fn div(&self, other: &SymVal) -> SymVal {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i64) -> SymVal {
        let r = self.raw();
        let raw = RawProduct {
            neg: self.neg && k % 2 != 0,
            q2: r.q2 * k,
            eps: r.eps * k,
            gamma: r.gamma * k,
            omega: r.omega * k,
            gauss: r.gauss.into_iter().map(|(j, e)| (j, e * k)).collect(),
        };
        normalize(self.n, raw).expect("canonical inputs stay canonical")
    }

    /// Complex conjugation: gamma and omega invert, `conj g(j) = eps^j g(-j)`.
    pub fn conj(&self) -> SymVal {
        let mut raw = RawProduct {
            neg: self.neg,
            q2: self.q2,
            eps: self.eps as i64,
            gamma: -(self.gamma as i64),
            omega: -(self.omega as i64),
            gauss: BTreeMap::new(),
        };
        for (&j, &e) in &self.gauss {
            raw.eps += j as i64 * e;
            *raw.gauss.entry(-(j as i64)).or_insert(0) += e;
        }
        normalize(self.n, raw).expect("canonical inputs stay canonical")
    }

    /// Effect of replacing the character psi by psi_a: gamma -> gamma · omega^{n/2}.
    pub fn twist(&self) -> SymVal {
        if self.n % 2 == 1 || self.gamma == 0 {
            return self.clone();
        }
        self.mul(&SymVal::omega(self.n, (self.n / 2) as i64))
    }

    /// Splits off the omega factor: returns the value without omega and its exponent.
    pub fn strip_omega(&self) -> (SymVal, u32) {
        (SymVal { omega: 0, ..self.clone() }, self.omega)
    }

    /// Parses the display grammar, e.g. `-1 · q^{-3/2} · eps · gamma^3 · g(2)^-1`.
    pub fn parse(n: u32, s: &str) -> Result<SymVal, SymError> {
        if n == 0 {
            return Err(SymError::ZeroDegree);
        }
        let bad = || SymError::Parse(s.to_string());
        let mut raw = RawProduct::default();
        for tok in s.split(['·', '*']) {
            let tok = tok.trim();
            if tok.is_empty() {
                return Err(bad());
            }
            let (base, exp) = split_exp(tok).ok_or_else(bad)?;
            match base {
                "1" if exp.is_none() => {}
                "-1" if exp.is_none() => raw.neg = !raw.neg,
                "q" => match exp {
                    None => raw.q2 += 2,
                    Some(e) => raw.q2 += parse_half(e).ok_or_else(bad)?,
                },
                "eps" | "gamma" | "omega" => {
                    let k = match exp {
                        None => 1,
                        Some(e) => e.parse::<i64>().map_err(|_| bad())?,
                    };
                    match base {
                        "eps" => raw.eps += k,
                        "gamma" => raw.gamma += k,
                        _ => raw.omega += k,
                    }
                }
                _ => {
                    let inner = base
                        .strip_prefix("g(")
                        .and_then(|r| r.strip_suffix(')'))
                        .ok_or_else(bad)?;
                    let j = inner.trim().parse::<i64>().map_err(|_| bad())?;
                    let e = match exp {
                        None => 1,
                        Some(e) => e.parse::<i64>().map_err(|_| bad())?,
                    };
                    *raw.gauss.entry(j).or_insert(0) += e;
                }
            }
        }
        normalize(n, raw)
    }
}

fn split_exp(tok: &str) -> Option<(&str, Option<&str>)> {
    match tok.split_once('^') {
        None => Some((tok, None)),
        Some((b, e)) => {
            let e = e.trim();
            let e = match e.strip_prefix('{') {
                Some(r) => r.strip_suffix('}')?,
                None => e,
            };
            Some((b.trim(), Some(e.trim())))
        }
    }
}

/// Parses `a` or `a/2` into twice its value.
fn parse_half(e: &str) -> Option<i64> {
    match e.split_once('/') {
        None => e.parse::<i64>().ok().map(|k| 2 * k),
        Some((a, "2")) => a.trim().parse::<i64>().ok(),
        Some(_) => None,
    }
}

fn push_pow(parts: &mut Vec<String>, name: &str, k: i64) {
    match k {
        0 => {}
        1 => parts.push(name.to_string()),
        _ => parts.push(format!("{name}^{k}")),
    }
}

impl fmt::Display for SymVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.neg {
            parts.push("-1".to_string());
        }
        match self.q2 {
            0 => {}
            2 => parts.push("q".to_string()),
            k if k % 2 == 0 => parts.push(format!("q^{{{}}}", k / 2)),
            k => parts.push(format!("q^{{{k}/2}}")),
        }
        push_pow(&mut parts, "eps", self.eps as i64);
        push_pow(&mut parts, "gamma", self.gamma as i64);
        push_pow(&mut parts, "omega", self.omega as i64);
        for (&j, &e) in &self.gauss {
            if e == 1 {
                parts.push(format!("g({j})"));
            } else {
                parts.push(format!("g({j})^{e}"));
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" · "))
        }
    }
}

/// Symbolic value of the Gauss sum `G(a, b)`; `None` for the additive cases
/// `1 - 1/q` and `0`, which never enter a product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaussValue {
    Zero,
    OneMinusInvQ,
    Product(SymVal),
}

pub fn gauss_table(n: u32, a: i64, b: i64) -> GaussValue {
    let divides = a.rem_euclid(n as i64) == 0;
    match b {
        b if b < -1 => GaussValue::Zero,
        -1 if divides => GaussValue::Product(SymVal::minus_one(n).mul(&SymVal::q_pow(n, -1))),
        -1 => GaussValue::Product(SymVal::gauss(n, a)),
        _ if divides => GaussValue::OneMinusInvQ,
        _ => GaussValue::Zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_pair_collapses() {
        for n in 2..12u32 {
            for j in 1..n as i64 {
                if 2 * j == n as i64 {
                    continue;
                }
                let p = SymVal::gauss(n, j).mul(&SymVal::gauss(n, -j));
                let want = SymVal::eps_pow(n, j).mul(&SymVal::q_pow(n, -1));
                assert_eq!(p, want, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn gauss_multiple_of_n() {
        let v = SymVal::gauss(5, 10);
        assert_eq!(v.to_string(), "-1 · q^{-1}");
    }

    #[test]
    fn gauss_half_is_weil_index() {
        let n = 6;
        let lhs = SymVal::q_half(n, 1).mul(&SymVal::gamma(n).unwrap());
        assert_eq!(lhs, SymVal::gauss(n, 3).inv());
    }

    #[test]
    fn gamma_has_order_four() {
        for n in [2u32, 4, 6, 8] {
            let g = SymVal::gamma(n).unwrap();
            assert!(g.mul(&g).mul(&g).mul(&g).is_one());
            assert_eq!(g.mul(&g), SymVal::eps_pow(n, n as i64 / 2));
        }
    }

    #[test]
    fn odd_degree_rejects_gamma_and_kills_eps() {
        assert_eq!(SymVal::gamma(5), Err(SymError::GammaOddDegree(5)));
        assert!(SymVal::eps(7).is_one());
        assert_ne!(SymVal::gauss(5, 1), SymVal::gauss(5, 2));
    }

    #[test]
    fn display_and_parse() {
        let n = 10;
        let s = "-1 · q^{-3/2} · eps · gamma^3 · g(2)^-1";
        let v = SymVal::parse(n, s).unwrap();
        let back = SymVal::parse(n, &v.to_string()).unwrap();
        assert_eq!(v, back);
        assert_eq!(SymVal::one(3).to_string(), "1");
        assert_eq!(SymVal::q_pow(3, 1).to_string(), "q");
        assert_eq!(SymVal::parse(3, "1").unwrap(), SymVal::one(3));
        assert!(SymVal::parse(3, "q^{1/3}").is_err());
        assert!(SymVal::parse(3, "zeta").is_err());
    }

    #[test]
    fn conj_and_modulus() {
        let n = 7;
        let g = SymVal::gauss(n, 2);
        assert_eq!(g.mul(&g.conj()), SymVal::q_pow(n, -1));
        assert_eq!(g.conj().conj(), g);
        assert_eq!(g.modulus_q2(), -1);
    }

    #[test]
    fn twist_moves_gamma() {
        let n = 6;
        let g = SymVal::gamma(n).unwrap();
        assert_eq!(g.twist(), g.mul(&SymVal::omega(n, 3)));
        assert_eq!(SymVal::q_pow(n, 2).twist(), SymVal::q_pow(n, 2));
    }

    #[test]
    fn table_cases() {
        assert_eq!(gauss_table(4, 3, -2), GaussValue::Zero);
        assert_eq!(gauss_table(4, 8, 0), GaussValue::OneMinusInvQ);
        assert_eq!(gauss_table(4, 3, 1), GaussValue::Zero);
        assert_eq!(gauss_table(4, 1, -1), GaussValue::Product(SymVal::gauss(4, 1)));
    }
}
