//! Shared computations behind the subcommands.

use crate::lattice::{CoverSpec, Lattices, QForm};
use crate::rootdata::{Family, RootDatum};
use crate::theta::{
    decide_distinguished, light_sl_images, CoverCtx, Distinguished, ImageConditions, Solver, ThetaContext, ThetaError,
    Twist, Val, Verdict,
};

use super::report::{
    Bounds, BranchEntry, ConditionEntry, DimReport, DistRow, DistinguishedReport, GeneratorEntry, InstanceEcho,
};
use super::CliError;

/// Above this many classes of Y / Y_{Q,n} the orbit survey is not attempted.
pub const MAX_CLASSES: usize = 1_000_000;

/// Either the full orbit survey or, for SL_n^(n) beyond the class limit,
/// the single condition at y = 0.
#[allow(clippy::large_enum_variant)]
pub enum Route {
    Full(ThetaContext),
    Light { cc: CoverCtx, images: Vec<ImageConditions> },
}

impl Route {
    pub fn build(cover: CoverSpec) -> Result<Route, CliError> {
        let classes = Lattices::new(&cover).quotient.len();
        if classes <= MAX_CLASSES {
            return Ok(Route::Full(ThetaContext::new(cover)?));
        }
        let d = &cover.datum;
        if d.family == Family::A && cover.n == d.rank as i64 + 1 && cover.qform == QForm::Short(1) {
            let (cc, images) = light_sl_images(cover.n)?;
            return Ok(Route::Light { cc, images });
        }
        Err(CliError::Instance(format!("{classes} classes of Y/Y_Q,n exceed the limit of {MAX_CLASSES}")))
    }

    pub fn cc(&self) -> &CoverCtx {
        match self {
            Route::Full(t) => &t.cc,
            Route::Light { cc, .. } => cc,
        }
    }

    pub fn images(&self) -> &[ImageConditions] {
        match self {
            Route::Full(t) => &t.images,
            Route::Light { images, .. } => images,
        }
    }

    pub fn bounds(&self) -> Option<Bounds> {
        match self {
            Route::Full(t) => Some(Bounds { lower: t.lower(), upper: t.upper() }),
            Route::Light { .. } => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Route::Full(_) => "full",
            Route::Light { .. } => "light",
        }
    }

    /// The light route knows only the image of 0, so it counts from 0.
    pub fn solver(&self) -> Solver<'_> {
        match self {
            Route::Full(t) => t.solver(),
            Route::Light { cc, images } => Solver { cc, images, lower: 0, upper: images.len() },
        }
    }
}

pub fn cover(family: Family, rank: usize, n: i64, qform: QForm) -> Result<CoverSpec, CliError> {
    let datum = RootDatum::build(family, rank).map_err(ThetaError::from)?;
    Ok(CoverSpec::new(datum, n, qform).map_err(ThetaError::from)?)
}

pub fn dim_report(route: &Route, instance: InstanceEcho) -> Result<DimReport, CliError> {
    let cc = route.cc();
    let sp = &cc.space;
    let table = route.solver().branches()?;
    let generators = table.relevant.iter().map(|&i| GeneratorEntry { u: sp.gens[i].clone(), order: sp.orders[i] }).collect();
    let branches = table
        .branches
        .iter()
        .map(|b| {
            let mut conditions = Vec::new();
            for (k, im) in route.images().iter().enumerate() {
                for c in &im.generators {
                    let value = sp.eval(&c.lhs, &b.assignment);
                    let verdict = match &value {
                        Some(x) => Verdict::of_ratio(&x.div(&Val::new(c.required.clone()))),
                        None => Verdict::Fails,
                    };
                    conditions.push(ConditionEntry {
                        image: k,
                        word: c.word.clone(),
                        y: c.y.clone(),
                        v: c.v.clone(),
                        lhs: c.lhs.to_string(),
                        required: c.required.to_string(),
                        value: value.map(|v| v.to_string()),
                        verdict,
                    });
                }
            }
            BranchEntry {
                generator_assignments: b.key_strings(),
                dim: b.dim,
                undetermined: b.undetermined,
                image_verdicts: b.verdicts.clone(),
                conditions,
            }
        })
        .collect();
    Ok(DimReport { instance, route: route.name().into(), bounds: route.bounds(), generators, branches })
}

pub fn distinguished(route: &Route, twist_omega: Option<i64>) -> Result<DistinguishedReport, ThetaError> {
    let cc = route.cc();
    let twist = match twist_omega {
        Some(k) => Twist::Omega(k.rem_euclid(cc.cover.n)),
        None => Twist::Abstract,
    };
    let dist = Distinguished::new(cc, twist)?;
    let v = decide_distinguished(cc, route.solver().lower, route.images(), &dist)?;
    let twist = match twist {
        Twist::Abstract => "abstract".to_string(),
        Twist::Omega(k) => format!("omega = zeta_{}^{}", cc.cover.n, k),
    };
    Ok(DistinguishedReport {
        twist,
        rows: v.rows.iter().map(|&(eps, a_symbol, dim)| DistRow { eps, a_symbol, dim }).collect(),
        unit_condition: v.unit_condition,
    })
}
