use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::identities::{
    check_scale, compare, default_k, default_variant, evaluate, keven_pair_constant, load_system, Side,
};
use super::weights::{WeightSpec, DEFAULT_BOUND};
use super::{Identity, Mode, Parameters, SystemSpec, SYMBOLIC_TERM_BUDGET};
use crate::enumerate::enumerate_bbasic;
use crate::error::{Error, Result};
use crate::ring::{pow2, render_rational, Poly, Radical, Rational, Var, VarKind};
use crate::rootsystems::{Family, FamilySpec};

/// `name=lo..hi` (or `name=v`), inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamRange {
    pub name: String,
    pub lo: usize,
    pub hi: usize,
}

impl FromStr for ParamRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Unknown {
            kind: "range",
            value: s.into(),
        };
        let (name, span) = s.split_once('=').ok_or_else(bad)?;
        let (lo, hi) = match span.split_once("..") {
            Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => {
                let v = span.trim().parse().map_err(|_| bad())?;
                (v, v)
            }
        };
        if lo > hi || !matches!(name, "n" | "m") {
            return Err(bad());
        }
        Ok(ParamRange {
            name: name.to_string(),
            lo,
            hi,
        })
    }
}

impl std::fmt::Display for ParamRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}={}..{}", self.name, self.lo, self.hi)
    }
}

/// Ratio of the left side to the graph terms of one `(loops, components)` class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassFit {
    pub loops: usize,
    pub components: usize,
    pub graphs: usize,
    /// Common ratio of the graphs in the class, or `"non-constant"`.
    pub ratio: String,
    pub log2_ratio: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationRow {
    pub parameters: Parameters,
    /// `lhs / rhs`, or `"non-constant"`; absent when the right side vanishes.
    pub ratio: Option<String>,
    /// For keven-pf: `lhs` over the unscaled matching sum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_ratio: Option<String>,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ClassFit>>,
}

/// Correction `2^(alpha*l + beta*d)` that turns the compared factor into the
/// observed one for every class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentFit {
    pub alpha: i64,
    pub beta: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationReport {
    pub identity: String,
    pub range: String,
    pub rows: Vec<CalibrationRow>,
    /// The single ratio shared by all non-degenerate rows, if any.
    pub constant: Option<String>,
    pub stable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent_fit: Option<ExponentFit>,
    pub notes: Vec<String>,
}

impl CalibrationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Default)]
pub struct CalibrateOptions {
    /// Family for the identities that accept several; `an` by default, `bn` for bn-tree.
    pub family: Option<Family>,
    pub k: Option<usize>,
    /// Defaults to `u` for mv and to `stated` for bn-tree.
    pub variant: Option<String>,
}

fn class_fits(lhs: &Poly, n: usize, family: Family) -> (Vec<ClassFit>, usize) {
    let coeffs: HashMap<_, _> = lhs.terms().collect();
    let mut classes: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
    let mut matched = 0;
    for g in enumerate_bbasic(n) {
        if family == Family::D && g.loop_count() > 0 {
            continue;
        }
        let mut term = Poly::one();
        for &(i, j) in &g.minus_edges {
            term = &term * &Poly::var(Var::new(VarKind::WMinus, &[i + 1, j + 1]));
        }
        for &(i, j) in &g.plus_edges {
            term = &term * &Poly::var(Var::new(VarKind::WPlus, &[i + 1, j + 1]));
        }
        for &i in &g.loops {
            term = &term * &Poly::var(Var::new(VarKind::W, &[i + 1]));
        }
        let (m, _) = term.terms().next().expect("graph monomial");
        let c = coeffs.get(m).map(|c| (*c).clone()).unwrap_or_default();
        if coeffs.contains_key(m) {
            matched += 1;
        }
        classes
            .entry((g.loop_count(), g.components))
            .or_default()
            .push(c / pow2(2 * g.components as i64));
    }
    let extra = coeffs.len() - matched;
    let fits = classes
        .into_iter()
        .map(|((loops, components), ratios)| {
            let same = ratios.iter().all(|r| *r == ratios[0]);
            let log2 = if same { log2_exact(&ratios[0]) } else { None };
            ClassFit {
                loops,
                components,
                graphs: ratios.len(),
                ratio: if same {
                    render_rational(&ratios[0])
                } else {
                    "non-constant".into()
                },
                log2_ratio: log2,
            }
        })
        .collect();
    (fits, extra)
}

fn log2_exact(r: &Rational) -> Option<i64> {
    (-64..=64).find(|&e| pow2(e) == *r)
}

fn fit_exponents(classes: &[ClassFit]) -> Option<ExponentFit> {
    if classes.is_empty() || classes.iter().any(|c| c.log2_ratio.is_none()) {
        return None;
    }
    let mut candidates: Vec<(i64, i64)> = Vec::new();
    for alpha in -4i64..=4 {
        for beta in -4i64..=4 {
            candidates.push((alpha, beta));
        }
    }
    candidates.sort_by_key(|&(a, b)| (a.abs() + b.abs(), a, b));
    candidates
        .into_iter()
        .find(|&(a, b)| {
            classes
                .iter()
                .all(|c| c.log2_ratio == Some(a * c.loops as i64 + b * c.components as i64))
        })
        .map(|(alpha, beta)| ExponentFit { alpha, beta })
}

fn raw_keven_ratio(lhs: &Side, rhs: &Side, n: usize) -> Option<String> {
    let (Side::Radical(l), Side::Radical(r)) = (lhs, rhs) else {
        return None;
    };
    if r.is_zero() {
        return None;
    }
    let c = (0..n / 2).fold(Rational::from_integer(1.into()), |acc, _| acc * keven_pair_constant());
    let raw: Radical = r.scale(&c.recip());
    Some(
        l.constant_ratio(&raw)
            .map(|x| x.to_string())
            .unwrap_or_else(|| "non-constant".into()),
    )
}

/// Ratios `lhs / rhs` over a parameter range with symbolic weights.
pub fn calibrate_constants(
    id: Identity,
    range: &ParamRange,
    opts: &CalibrateOptions,
) -> Result<CalibrationReport> {
    if (id == Identity::Mv) != (range.name == "m") {
        return Err(Error::Precondition(format!(
            "{id} is calibrated over {}",
            if id == Identity::Mv { "m" } else { "n" }
        )));
    }
    let family = opts.family.unwrap_or(match id {
        Identity::BnTree => Family::B,
        _ => Family::A,
    });
    let k = default_k(id, opts.k)?;
    let variant = default_variant(
        id,
        opts.variant
            .as_deref()
            .or(if id == Identity::BnTree { Some("stated") } else { None }),
    )?;
    let mut notes = Vec::new();
    let mut values: Vec<usize> = (range.lo..=range.hi).collect();
    if id == Identity::KevenPf {
        let odd: Vec<usize> = values.iter().copied().filter(|v| v % 2 == 1).collect();
        if !odd.is_empty() {
            notes.push(format!("odd n skipped: {odd:?}"));
        }
        values.retain(|v| v % 2 == 0);
        notes.push("ratio compares against (-1/2)^(n/2) times the matching sum".into());
    }

    let rows: Vec<Result<(CalibrationRow, Vec<ClassFit>, Vec<String>)>> = values
        .par_iter()
        .map(|&v| {
            let rank = if id == Identity::Mv { 2 * v } else { v };
            let sys = SystemSpec::Family(FamilySpec { family, rank });
            let setup = load_system(&sys, 0)?;
            check_scale(id, &setup, k)?;
            let mut row_notes = Vec::new();
            let spec = if super::identities::symbolic_cost(id, &setup, k) > SYMBOLIC_TERM_BUDGET as f64 {
                row_notes.push(format!("{sys}: random rational weights (symbolic budget exceeded)"));
                WeightSpec::RandomRational {
                    seed: 0,
                    bound: DEFAULT_BOUND,
                }
            } else {
                WeightSpec::Symbolic
            };
            let out = evaluate(id, &setup, k, &spec, variant.as_deref(), Mode::Exact, 0)?;
            let cmp = compare(&out.lhs, &out.rhs, 1e-9);
            let degenerate = match &out.rhs {
                Side::Poly(p) => p.is_zero(),
                Side::Radical(r) => r.is_zero(),
                Side::Float(x) => *x == 0.0,
            };
            for (name, ok) in &out.checks {
                if !ok {
                    row_notes.push(format!("{sys}: check {name} FAILED"));
                }
            }
            let mut classes = Vec::new();
            if id == Identity::BnTree {
                if let Side::Poly(l) = &out.lhs {
                    let (c, extra) = class_fits(l, rank, family);
                    if extra > 0 {
                        row_notes.push(format!("{sys}: {extra} left-side monomials match no graph"));
                    }
                    classes = c;
                }
            }
            let row = CalibrationRow {
                parameters: Parameters {
                    family: sys.to_string(),
                    n: setup.system.span_dim(),
                    big_n: setup.system.len(),
                    k,
                    seed: 0,
                    mode: Mode::Exact.name().into(),
                    weights: spec.to_string(),
                    variant: variant.clone(),
                },
                ratio: cmp.ratio,
                raw_ratio: if id == Identity::KevenPf {
                    raw_keven_ratio(&out.lhs, &out.rhs, setup.system.span_dim())
                } else {
                    None
                },
                degenerate,
                classes: (id == Identity::BnTree).then(|| classes.clone()),
            };
            Ok((row, classes, row_notes))
        })
        .collect();

    let mut out_rows = Vec::new();
    let mut all_classes: Vec<ClassFit> = Vec::new();
    for r in rows {
        let (row, classes, row_notes) = r?;
        out_rows.push(row);
        notes.extend(row_notes);
        for c in classes {
            if !all_classes
                .iter()
                .any(|x| x.loops == c.loops && x.components == c.components && x.ratio == c.ratio)
            {
                all_classes.push(c);
            }
        }
    }
    if !out_rows.is_empty() && out_rows.iter().all(|r| r.degenerate) {
        return Err(Error::DegenerateRhs(format!("{id} over {range}")));
    }
    let live: Vec<&CalibrationRow> = out_rows.iter().filter(|r| !r.degenerate).collect();
    let first = live.first().and_then(|r| r.ratio.clone());
    let constant = first.filter(|c| c != "non-constant" && live.iter().all(|r| r.ratio.as_deref() == Some(c)));
    let exponent_fit = if id == Identity::BnTree {
        let fit = fit_exponents(&all_classes);
        match &fit {
            Some(f) => notes.push(format!(
                "observed factor = compared factor * 2^({}*l + {}*d)",
                f.alpha, f.beta
            )),
            None => notes.push("no exponent pair in -4..4 fits every class".into()),
        }
        fit
    } else {
        None
    };
    let stable = if id == Identity::BnTree {
        exponent_fit.is_some()
    } else {
        constant.is_some()
    };
    Ok(CalibrationReport {
        identity: id.name().into(),
        range: range.to_string(),
        rows: out_rows,
        constant,
        stable,
        exponent_fit,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(
            "n=1..4".parse::<ParamRange>().unwrap(),
            ParamRange {
                name: "n".into(),
                lo: 1,
                hi: 4
            }
        );
        assert_eq!("m=2".parse::<ParamRange>().unwrap().hi, 2);
        assert!("n=3..1".parse::<ParamRange>().is_err());
        assert!("q=1..2".parse::<ParamRange>().is_err());
    }

    #[test]
    fn k1_ratio_is_one() {
        let r = calibrate_constants(Identity::K1, &"n=1..3".parse().unwrap(), &Default::default()).unwrap();
        assert!(r.stable);
        assert_eq!(r.constant.as_deref(), Some("1"));
        assert_eq!(r.rows.len(), 3);
    }

    #[test]
    fn bn_tree_stated_factor_needs_two_to_minus_l() {
        let r = calibrate_constants(Identity::BnTree, &"n=1..2".parse().unwrap(), &Default::default()).unwrap();
        assert_eq!(r.rows[0].ratio.as_deref(), Some("1/2"));
        assert_eq!(r.exponent_fit, Some(ExponentFit { alpha: -1, beta: 0 }));
        assert!(r.stable);
    }
}
