//! Root data, Weyl groups with reduced words, and the rho-shifted action on Y.
//!
//! Semisimple families use the simple-coroot basis of Y. `GL` uses the
//! standard basis e_1..e_r with α_i∨ = e_i − e_{i+1}.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vector = Vec<i64>;

/// Refuse to materialize Weyl groups larger than this.
pub const MAX_WEYL_ORDER: usize = 400_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("unsupported family/rank combination {0}{1}")]
    Unsupported(Family, usize),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("Weyl group of {0}{1} has more than {2} elements")]
    TooLarge(Family, usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    GL,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
            Family::GL => "GL",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "E" => Family::E,
            "F" => Family::F,
            "G" | "G2" => Family::G,
            "GL" => Family::GL,
            _ => return Err(RootError::UnknownFamily(s.to_string())),
        })
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub family: Family,
    /// The rank as named by the user (r in GL_r, A_r, ...).
    pub label_rank: usize,
    /// Number of simple roots.
    pub rank: usize,
    pub y_rank: usize,
    /// `cartan[i][j] = ⟨α_i∨, α_j⟩`.
    pub cartan: Vec<Vec<i64>>,
    pub coroots: Vec<Vector>,
    /// Simple roots as row functionals on Y.
    pub roots: Vec<Vector>,
    pub pos_coroots: Vec<Vector>,
    pub pos_roots: Vec<Vector>,
    pub two_rho: Vector,
    pub two_rho_x: Vector,
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cartan_matrix(family: Family, r: usize) -> Result<Vec<Vec<i64>>, RootError> {
    let bad = Err(RootError::Unsupported(family, r));
    let mut c = vec![vec![0i64; r]; r];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let link = |c: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match family {
        Family::A | Family::GL => {
            for i in 1..r {
                link(&mut c, i - 1, i);
            }
        }
        Family::B | Family::C => {
            if r < 2 {
                return bad;
            }
            for i in 1..r {
                link(&mut c, i - 1, i);
            }
            if family == Family::B {
                c[r - 1][r - 2] = -2;
            } else {
                c[r - 2][r - 1] = -2;
            }
        }
        Family::D => {
            if r < 4 {
                return bad;
            }
            for i in 1..r - 1 {
                link(&mut c, i - 1, i);
            }
            link(&mut c, r - 3, r - 1);
        }
        Family::E => {
            if !(6..=8).contains(&r) {
                return bad;
            }
            for (i, j) in [(0, 2), (2, 3), (3, 4), (1, 3)] {
                link(&mut c, i, j);
            }
            for i in 5..r {
                link(&mut c, i - 1, i);
            }
        }
        Family::F => {
            if r != 4 {
                return bad;
            }
            link(&mut c, 0, 1);
            link(&mut c, 1, 2);
            link(&mut c, 2, 3);
            c[2][1] = -2;
        }
        Family::G => {
            if r != 2 {
                return bad;
            }
            c[0][1] = -1;
            c[1][0] = -3;
        }
    }
    Ok(c)
}

/// Closure of `seeds` under `reflect(i, v)` for every simple index i.
fn reflection_closure(seeds: &[Vector], rank: usize, reflect: impl Fn(usize, &[i64]) -> Vector) -> Vec<Vector> {
    let mut seen: HashSet<Vector> = seeds.iter().cloned().collect();
    let mut queue: VecDeque<Vector> = seeds.iter().cloned().collect();
    let mut out = seeds.to_vec();
    while let Some(v) = queue.pop_front() {
        for i in 0..rank {
            let u = reflect(i, &v);
            if seen.insert(u.clone()) {
                out.push(u.clone());
                queue.push_back(u);
            }
        }
    }
    out
}

impl RootDatum {
    pub fn build(family: Family, rank: usize) -> Result<RootDatum, RootError> {
        if rank == 0 {
            return Err(RootError::Unsupported(family, rank));
        }
        let (sr, y_rank) = match family {
            Family::GL => (rank - 1, rank),
            _ => (rank, rank),
        };
        let cartan = cartan_matrix(family, sr)?;
        let (coroots, roots): (Vec<Vector>, Vec<Vector>) = if family == Family::GL {
            (0..sr)
                .map(|i| {
                    let mut v = vec![0; y_rank];
                    v[i] = 1;
                    v[i + 1] = -1;
                    (v.clone(), v)
                })
                .unzip()
        } else {
            (0..sr)
                .map(|i| {
                    let mut e = vec![0; y_rank];
                    e[i] = 1;
                    let col: Vector = (0..sr).map(|k| cartan[k][i]).collect();
                    (e, col)
                })
                .unzip()
        };
        let height: Vector = if family == Family::GL {
            (0..y_rank).map(|i| (y_rank - 1 - i) as i64).collect()
        } else {
            vec![1; y_rank]
        };

        let all_coroots = reflection_closure(&coroots, sr, |i, v| {
            let p = dot(v, &roots[i]);
            v.iter().zip(&coroots[i]).map(|(a, b)| a - p * b).collect()
        });
        let mut pos_coroots: Vec<Vector> = all_coroots.into_iter().filter(|v| dot(v, &height) > 0).collect();
        pos_coroots.sort();
        let mut two_rho = vec![0; y_rank];
        for v in &pos_coroots {
            for (t, x) in two_rho.iter_mut().zip(v) {
                *t += x;
            }
        }
        let all_roots = reflection_closure(&roots, sr, |i, v| {
            let p = dot(&coroots[i], v);
            v.iter().zip(&roots[i]).map(|(a, b)| a - p * b).collect()
        });
        let mut pos_roots: Vec<Vector> = all_roots.into_iter().filter(|v| dot(v, &two_rho) > 0).collect();
        pos_roots.sort();
        let mut two_rho_x = vec![0; y_rank];
        for v in &pos_roots {
            for (t, x) in two_rho_x.iter_mut().zip(v) {
                *t += x;
            }
        }
        Ok(RootDatum {
            family,
            label_rank: rank,
            rank: sr,
            y_rank,
            cartan,
            coroots,
            roots,
            pos_coroots,
            pos_roots,
            two_rho,
            two_rho_x,
        })
    }

    /// ⟨y, α_i⟩.
    pub fn pair(&self, y: &[i64], i: usize) -> i64 {
        dot(y, &self.roots[i])
    }

    pub fn height(&self, y: &[i64]) -> i64 {
        if self.family == Family::GL {
            y.iter().enumerate().map(|(i, x)| (self.y_rank - 1 - i) as i64 * x).sum()
        } else {
            y.iter().sum()
        }
    }

    /// Plain simple reflection w_i(y) = y − ⟨y, α_i⟩ α_i∨.
    pub fn reflect(&self, i: usize, y: &[i64]) -> Vector {
        let p = self.pair(y, i);
        y.iter().zip(&self.coroots[i]).map(|(a, b)| a - p * b).collect()
    }

    /// Shifted simple reflection w_i[y] = y + (1 − ⟨y, α_i⟩) α_i∨.
    pub fn shifted_reflect(&self, i: usize, y: &[i64]) -> Vector {
        let p = 1 - self.pair(y, i);
        y.iter().zip(&self.coroots[i]).map(|(a, b)| a + p * b).collect()
    }

    /// Matrix of the simple reflection i acting on column vectors.
    pub fn reflection_matrix(&self, i: usize) -> Mat {
        let n = self.y_rank;
        let mut m = Mat::identity(n);
        for r in 0..n {
            for c in 0..n {
                m.data[r * n + c] -= self.coroots[i][r] * self.roots[i][c];
            }
        }
        m
    }

    pub fn weyl_group(&self) -> Result<WeylGroup, RootError> {
        WeylGroup::build(self)
    }

    /// Order of the Weyl group from the number of positive roots, without enumeration.
    pub fn weyl_order_estimate(&self) -> Option<u128> {
        let (f, r) = (self.family, self.rank as u128);
        let fact = |k: u128| (1..=k).product::<u128>();
        Some(match f {
            Family::A | Family::GL => fact(r + 1),
            Family::B | Family::C => (1u128 << r) * fact(r),
            Family::D => (1u128 << (r - 1)) * fact(r),
            Family::E => match r {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        })
    }
}

/// Dense square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    pub n: usize,
    pub data: Vec<i64>,
}

impl Mat {
    pub fn identity(n: usize) -> Mat {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Mat { n, data }
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        Mat { n, data }
    }

    pub fn apply(&self, y: &[i64]) -> Vector {
        let n = self.n;
        (0..n).map(|i| dot(&self.data[i * n..(i + 1) * n], y)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct WeylElement {
    pub index: usize,
    pub matrix: Mat,
    pub reduced_word: Vec<usize>,
    pub length: usize,
    /// ρ − w(ρ), an integral vector.
    pub shift: Vector,
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    lookup: HashMap<Mat, usize>,
    /// `right[w][i]` = index of w·s_i.
    right: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl WeylGroup {
    fn build(d: &RootDatum) -> Result<WeylGroup, RootError> {
        if let Some(est) = d.weyl_order_estimate() {
            if est > MAX_WEYL_ORDER as u128 {
                return Err(RootError::TooLarge(d.family, d.label_rank, MAX_WEYL_ORDER));
            }
        }
        let gens: Vec<Mat> = (0..d.rank).map(|i| d.reflection_matrix(i)).collect();
        let id = Mat::identity(d.y_rank);
        let mut lookup = HashMap::new();
        lookup.insert(id.clone(), 0);
        let mut mats = vec![id];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut layer = vec![0usize];
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &w in &layer {
                for (i, s) in gens.iter().enumerate() {
                    let m = mats[w].mul(s);
                    if lookup.contains_key(&m) {
                        continue;
                    }
                    if mats.len() >= MAX_WEYL_ORDER {
                        return Err(RootError::TooLarge(d.family, d.label_rank, MAX_WEYL_ORDER));
                    }
                    let idx = mats.len();
                    lookup.insert(m.clone(), idx);
                    mats.push(m);
                    let mut word = words[w].clone();
                    word.push(i);
                    words.push(word);
                    next.push(idx);
                }
            }
            layer = next;
        }
        let right: Vec<Vec<usize>> = mats
            .iter()
            .map(|m| gens.iter().map(|s| lookup[&m.mul(s)]).collect())
            .collect();
        let elements: Vec<WeylElement> = mats
            .into_iter()
            .zip(words)
            .enumerate()
            .map(|(index, (matrix, reduced_word))| {
                let w2 = matrix.apply(&d.two_rho);
                let shift = d.two_rho.iter().zip(&w2).map(|(a, b)| (a - b) / 2).collect();
                WeylElement { index, length: reduced_word.len(), matrix, reduced_word, shift }
            })
            .collect();
        let mut g = WeylGroup { elements, lookup, right, inverse: vec![] };
        g.inverse = (0..g.len())
            .map(|w| {
                let mut rev = g.elements[w].reduced_word.clone();
                rev.reverse();
                g.from_word(&rev)
            })
            .collect();
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, m: &Mat) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    /// Index of w·s_i.
    pub fn times_simple(&self, w: usize, i: usize) -> usize {
        self.right[w][i]
    }

    /// Element w_{a1}···w_{al} for the word [a1..al].
    pub fn from_word(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |w, &i| self.right[w][i])
    }

    pub fn compose(&self, a: usize, b: usize) -> usize {
        self.elements[b].reduced_word.iter().fold(a, |w, &i| self.right[w][i])
    }

    pub fn inverse(&self, w: usize) -> usize {
        self.inverse[w]
    }

    /// w[y] = w(y) + ρ − w(ρ).
    pub fn shifted_apply(&self, w: usize, y: &[i64]) -> Vector {
        let e = &self.elements[w];
        let mut v = e.matrix.apply(y);
        for (a, b) in v.iter_mut().zip(&e.shift) {
            *a += b;
        }
        v
    }

    /// Every reduced word of w, in lexicographic order.
    pub fn all_reduced_words(&self, w: usize) -> Vec<Vec<usize>> {
        let len = self.elements[w].length;
        if len == 0 {
            return vec![vec![]];
        }
        let rank = self.right[0].len();
        let mut out = Vec::new();
        // the last letter i is valid when w·s_i is shorter
        for i in 0..rank {
            let p = self.right[w][i];
            if self.elements[p].length + 1 == len {
                for mut word in self.all_reduced_words(p) {
                    word.push(i);
                    out.push(word);
                }
            }
        }
        out.sort();
        out
    }

    pub fn longest(&self) -> usize {
        (0..self.len()).max_by_key(|&w| self.elements[w].length).unwrap_or(0)
    }
}
