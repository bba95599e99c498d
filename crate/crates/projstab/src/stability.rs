//! Slope and Gieseker comparisons, and the ruled-surface destabiliser scan
//! over candidate line subbundles.

use std::cmp::Ordering;

use thiserror::Error;

use crate::chern::{euler_char, slope, ChernError, NsClass, SheafData, SurfaceGeometry};
use crate::poly::{Poly, Var};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("ruled scan requires Néron–Severi rank 2 with f^2 = 0 and b.f = 1")]
    NotRuled,
    #[error("ruled scan requires at least one case")]
    EmptyCases,
    #[error(transparent)]
    Chern(#[from] ChernError),
}

/// How the normalised Hilbert polynomial of the subsheaf compares to that of
/// the ambient sheaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    SubStrictlySmaller,
    Equal,
    SubStrictlyLarger,
}

/// The coefficient at which a Gieseker comparison was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    LeadingK2,
    LinearK,
    ConstantTerm,
    Identical,
}

/// Outcome of a Gieseker comparison: `margin` is the first nonzero
/// coefficient of `χ(E⊗L^k)/rk(E) - χ(F⊗L^k)/rk(F)` scanning from `k^2` down
/// (zero when the polynomials coincide), and `level` records where the tie
/// broke. A positive margin means the subsheaf side is strictly smaller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareVerdict {
    pub relation: Relation,
    pub margin: Rat,
    pub level: Level,
}

/// Exact comparison of slopes `μ(F)` against `μ(E)`.
pub fn mumford_compare(
    f: &SheafData,
    e: &SheafData,
    geom: &SurfaceGeometry,
    omega: &NsClass,
) -> Result<Ordering, ChernError> {
    Ok(slope(f, geom, omega)?.cmp(&slope(e, geom, omega)?))
}

/// Lexicographic comparison of normalised Hilbert polynomials
/// `χ(·⊗L^k)/rank` from the `k^2` coefficient down.
pub fn gieseker_compare(
    f: &SheafData,
    e: &SheafData,
    geom: &SurfaceGeometry,
    omega: &NsClass,
) -> Result<CompareVerdict, ChernError> {
    let t = Poly::var(Var::K);
    let chi_f = euler_char(f, geom, omega, &t)?.scale(&Rat::new(1, i64::from(f.rank())));
    let chi_e = euler_char(e, geom, omega, &t)?.scale(&Rat::new(1, i64::from(e.rank())));
    let diff = &chi_e - &chi_f;

    for (deg, level) in [
        (2, Level::LeadingK2),
        (1, Level::LinearK),
        (0, Level::ConstantTerm),
    ] {
        let c = diff.coeff_of(Var::K, deg).constant_term();
        if !c.is_zero() {
            let relation = if c.is_positive() {
                Relation::SubStrictlySmaller
            } else {
                Relation::SubStrictlyLarger
            };
            return Ok(CompareVerdict {
                relation,
                margin: c,
                level,
            });
        }
    }
    Ok(CompareVerdict {
        relation: Relation::Equal,
        margin: Rat::zero(),
        level: Level::Identical,
    })
}

/// One region of candidate line subbundle classes `x b + y f` with
/// `x <= bound_x`, `y <= bound_y`, cut out by the nef-cone necessary condition
/// for effectivity.
///
/// When `corner_excluded` is set, the corner class itself is known not to
/// occur as a subsheaf (it is the quotient class of a non-split extension, so
/// at least one of the effectivity inequalities is strict) and the scan
/// certifies the punctured region instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanCase {
    pub bound_x: i64,
    pub bound_y: i64,
    pub corner_excluded: bool,
}

impl ScanCase {
    pub fn corner(bound_x: i64, bound_y: i64) -> Self {
        ScanCase {
            bound_x,
            bound_y,
            corner_excluded: false,
        }
    }

    pub fn punctured(bound_x: i64, bound_y: i64) -> Self {
        ScanCase {
            bound_x,
            bound_y,
            corner_excluded: true,
        }
    }
}

/// A Gieseker check at one lattice point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCheck {
    pub class: (i64, i64),
    pub sub_slope: Rat,
    pub verdict: CompareVerdict,
}

/// Scan result for one case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseReport {
    pub case: ScanCase,
    /// `ω` pairs strictly positively with both basis moves, so the slope of
    /// `x b + y f` is increasing in `x` and `y` and is maximised at the corner
    /// of the region.
    pub corner_dominance: bool,
    /// Gieseker verdicts at the extremal attainable classes: the corner, or
    /// the two sub-corners when the corner is excluded.
    pub corner_checks: Vec<PointCheck>,
    /// Window points where the candidate is not strictly smaller.
    pub violations: Vec<PointCheck>,
    pub points_checked: usize,
    pub pass: bool,
}

/// Scan result over all cases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub ambient_slope: Rat,
    pub cases: Vec<CaseReport>,
    pub pass: bool,
}

fn is_ruled(geom: &SurfaceGeometry) -> bool {
    if geom.ns_rank() != 2 {
        return false;
    }
    let m = geom.intersection_matrix();
    m[1][1].is_zero() && m[0][1] == Rat::one()
}

/// Scans the candidate subbundle regions for Gieseker destabilisers of `e`.
///
/// For each case this (a) certifies by exact linear reasoning that the slope
/// over the region is maximised at the corner, (b) runs the Gieseker
/// comparison at the extremal attainable classes and (c) exhaustively checks
/// the `window`-sized lattice box below the corner. A case passes when every
/// checked class is strictly smaller than `e` in the Gieseker order.
pub fn ruled_scan(
    e: &SheafData,
    cases: &[ScanCase],
    geom: &SurfaceGeometry,
    omega: &NsClass,
    window: u32,
) -> Result<ScanReport, ScanError> {
    if !is_ruled(geom) {
        return Err(ScanError::NotRuled);
    }
    if cases.is_empty() {
        return Err(ScanError::EmptyCases);
    }

    let ambient_slope = slope(e, geom, omega)?;
    let check_point = |x: i64, y: i64| -> Result<PointCheck, ScanError> {
        let d = NsClass::from_ints(&[x, y]);
        let line = SheafData::line_bundle(&d, geom)?;
        Ok(PointCheck {
            class: (x, y),
            sub_slope: slope(&line, geom, omega)?,
            verdict: gieseker_compare(&line, e, geom, omega)?,
        })
    };

    let mut case_reports = Vec::new();
    for case in cases {
        let corner_dominance = (0..2).all(|idx| {
            geom.intersect(omega, &geom.basis_class(idx))
                .map(|p| p.is_positive())
                .unwrap_or(false)
        });

        let corner_classes: Vec<(i64, i64)> = if case.corner_excluded {
            vec![
                (case.bound_x - 1, case.bound_y),
                (case.bound_x, case.bound_y - 1),
            ]
        } else {
            vec![(case.bound_x, case.bound_y)]
        };
        let mut corner_checks = Vec::new();
        for &(x, y) in &corner_classes {
            corner_checks.push(check_point(x, y)?);
        }

        let mut violations = Vec::new();
        let mut points_checked = 0usize;
        let w = i64::from(window);
        for x in (case.bound_x - w)..=case.bound_x {
            for y in (case.bound_y - w)..=case.bound_y {
                if case.corner_excluded && (x, y) == (case.bound_x, case.bound_y) {
                    continue;
                }
                let pc = check_point(x, y)?;
                points_checked += 1;
                if pc.verdict.relation != Relation::SubStrictlySmaller {
                    violations.push(pc);
                }
            }
        }

        let pass = corner_dominance
            && corner_checks
                .iter()
                .all(|c| c.verdict.relation == Relation::SubStrictlySmaller)
            && violations.is_empty();
        case_reports.push(CaseReport {
            case: *case,
            corner_dominance,
            corner_checks,
            violations,
            points_checked,
            pass,
        });
    }

    let pass = case_reports.iter().all(|c| c.pass);
    Ok(ScanReport {
        ambient_slope,
        cases: case_reports,
        pass,
    })
}
