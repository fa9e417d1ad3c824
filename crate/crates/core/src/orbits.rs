//! Shifted Weyl orbits on Y / Y_{Q,n}: freeness flags and the lower/upper
//! bounds on the Whittaker dimension.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exec;
use crate::lattice::{CoverSpec, Lattices};
use crate::rootdata::{RootError, Vector, WeylGroup};

/// A cover with its Weyl group and lattices, shared by the orbit and theta code.
#[derive(Clone, Debug)]
pub struct Setting {
    pub cover: CoverSpec,
    pub weyl: WeylGroup,
    pub lat: Lattices,
}

impl Setting {
    pub fn new(cover: CoverSpec) -> Result<Setting, RootError> {
        let weyl = cover.datum.weyl_group()?;
        let lat = Lattices::new(&cover);
        Ok(Setting { cover, weyl, lat })
    }

    pub fn class_of(&self, y: &[i64]) -> usize {
        self.lat.quotient.class_of(y)
    }

    pub fn rep(&self, class: usize) -> Vector {
        self.lat.quotient.rep(class)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub w: usize,
    pub word: Vec<usize>,
    pub y: Vector,
    pub image: Vector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub free: bool,
    pub sc_free: bool,
    pub qn_free: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sc: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qn: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub base: Vector,
    /// Sorted classes of Y / Y_{Q,n} met by the orbit.
    pub image_key: Vec<usize>,
    /// Size of the orbit of `base` in Y.
    pub size: usize,
    pub flags: Flags,
    pub witness: Witnesses,
}

impl OrbitRecord {
    /// Every element w[base], in Weyl-element order, with duplicates collapsed.
    pub fn elements(&self, s: &Setting) -> Vec<Vector> {
        let mut seen = std::collections::BTreeSet::new();
        (0..s.weyl.len())
            .map(|w| s.weyl.shifted_apply(w, &self.base))
            .filter(|y| seen.insert(y.clone()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSurvey {
    pub lower: usize,
    pub upper: usize,
    pub total_classes: usize,
    pub weyl_order: usize,
    pub orbits: Vec<OrbitRecord>,
}

impl OrbitSurvey {
    pub fn sc_free(&self) -> impl Iterator<Item = &OrbitRecord> {
        self.orbits.iter().filter(|o| o.flags.sc_free)
    }
}

fn witness(s: &Setting, w: usize, y: &[i64], image: Vector) -> Witness {
    Witness { w, word: s.weyl.elements[w].reduced_word.clone(), y: y.to_vec(), image }
}

/// Freeness flags of the orbit of `base`, whose image in Y / Y_{Q,n} is `image_key`.
pub fn analyze(s: &Setting, base: &[i64], image_key: Vec<usize>) -> OrbitRecord {
    let mut fixed = 0usize;
    let mut wit = Witnesses::default();
    for w in 0..s.weyl.len() {
        let img = s.weyl.shifted_apply(w, base);
        let d: Vector = img.iter().zip(base).map(|(a, b)| a - b).collect();
        if d.iter().all(|&x| x == 0) {
            fixed += 1;
            if w != 0 && wit.free.is_none() {
                wit.free = Some(witness(s, w, base, img.clone()));
            }
        }
        if w == 0 {
            continue;
        }
        if wit.qn.is_none() && s.class_of(&d) == 0 {
            wit.qn = Some(witness(s, w, base, img.clone()));
        }
        if wit.sc.is_none() && s.lat.sc.member(&d) {
            wit.sc = Some(witness(s, w, base, img));
        }
    }
    OrbitRecord {
        base: base.to_vec(),
        image_key,
        size: s.weyl.len() / fixed,
        flags: Flags { free: wit.free.is_none(), sc_free: wit.sc.is_none(), qn_free: wit.qn.is_none() },
        witness: wit,
    }
}

/// The image of a class under the shifted simple reflections.
fn neighbours(s: &Setting, class: usize) -> Vec<usize> {
    let y = s.rep(class);
    (0..s.cover.datum.rank).map(|i| s.class_of(&s.cover.datum.shifted_reflect(i, &y))).collect()
}

/// The orbit through the representative of `start_class`.
pub fn orbit(s: &Setting, start_class: usize) -> OrbitRecord {
    let mut seen = std::collections::BTreeSet::from([start_class]);
    let mut stack = vec![start_class];
    while let Some(c) = stack.pop() {
        for nb in neighbours(s, c) {
            if seen.insert(nb) {
                stack.push(nb);
            }
        }
    }
    analyze(s, &s.rep(start_class), seen.into_iter().collect())
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Partition of Y / Y_{Q,n} into orbit images, sorted by smallest class.
pub fn components(s: &Setting) -> Vec<Vec<usize>> {
    let total = s.lat.quotient.len();
    let edges = exec::map_range(total, |c| neighbours(s, c));
    let mut parent: Vec<usize> = (0..total).collect();
    for (c, nbs) in edges.iter().enumerate() {
        for &nb in nbs {
            let (a, b) = (find(&mut parent, c), find(&mut parent, nb));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..total {
        let r = find(&mut parent, c);
        groups.entry(r).or_default().push(c);
    }
    let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
    comps.sort_by_key(|c| c[0]);
    comps
}

pub fn survey(s: &Setting) -> OrbitSurvey {
    let comps = components(s);
    let orbits: Vec<OrbitRecord> = exec::map_slice(&comps, |c| analyze(s, &s.rep(c[0]), c.clone()));
    OrbitSurvey {
        lower: orbits.iter().filter(|o| o.flags.qn_free).count(),
        upper: orbits.iter().filter(|o| o.flags.sc_free).count(),
        total_classes: s.lat.quotient.len(),
        weyl_order: s.weyl.len(),
        orbits,
    }
}

/// A non-sc-free orbit has a point fixed modulo Y_{Q,n}^sc by a simple reflection.
pub fn simple_stabilizer(s: &Setting, o: &OrbitRecord) -> Option<(usize, usize)> {
    let d = &s.cover.datum;
    o.image_key.iter().find_map(|&c| {
        let y = s.rep(c);
        (0..d.rank).find_map(|i| {
            let t = 1 - d.pair(&y, i);
            let v: Vector = d.coroots[i].iter().map(|x| x * t).collect();
            s.lat.sc.member(&v).then_some((c, i))
        })
    })
}
