use std::time::Instant;

use num_traits::One;

use super::weights::{instantiate_weights, random_system, random_weights, WeightSpec, DEFAULT_BOUND};
use super::{Identity, Mode, Parameters, SystemSpec, VerificationReport, VerifyParams, SYMBOLIC_TERM_BUDGET};
use crate::commutators::{build_p_nested, build_p_via_q, resolve_convention};
use crate::enumerate::{
    combinations, enumerate_3trees, enumerate_bbasic, enumerate_doombs, keven_pf_terms, rhs_gendet, rhs_k1,
    rhs_keven_pf, three_tree_sum, tree_sum, GenDetForm, PfMode, PfValue,
};
use crate::error::{Error, Result};
use crate::linalg::{det_on_subspace, orthonormal_matrix_f64, pfaffian_f64, pfaffian_on_subspace};
use crate::ring::{pow2, rat, render_rational, to_f64, Poly, Radical, Rational, Var, VarKind};
use crate::rootsystems::{
    bn_matrix, build_family, kirchhoff_matrix, lambda, mv_matrix, mv_root_pair_weights, Family, RootFamily,
};
use crate::system::VectorSystem;

const MAX_VECTORS: usize = 16;
const MAX_SPAN: usize = 6;
const MAX_K: usize = 4;
const MAX_TUPLES: f64 = 5e7;

/// Constant per matched pair between the Pfaffian and the matching sum:
/// `Pf = (-1/2)^(n/2) Σ`.
pub fn keven_pair_constant() -> Rational {
    rat(-1, 2)
}

#[derive(Debug, Clone)]
pub(super) enum Side {
    Poly(Poly),
    Radical(Radical),
    Float(f64),
}

impl Side {
    fn render(&self) -> String {
        match self {
            Side::Poly(p) => p.to_string(),
            Side::Radical(r) => r.to_string(),
            Side::Float(x) => format!("{x:e}"),
        }
    }
}

pub(super) struct Outcome {
    pub lhs: Side,
    pub rhs: Side,
    pub term_count: usize,
    pub checks: Vec<(&'static str, bool)>,
    pub notes: Vec<String>,
    /// Weights actually used when they differ from the requested ones.
    pub weights_used: Option<WeightSpec>,
}

impl Outcome {
    fn new(lhs: Side, rhs: Side, term_count: usize) -> Self {
        Outcome {
            lhs,
            rhs,
            term_count,
            checks: Vec::new(),
            notes: Vec::new(),
            weights_used: None,
        }
    }

    fn is_float(&self) -> bool {
        matches!(self.lhs, Side::Float(_))
    }
}

pub(super) struct Comparison {
    pub equal: bool,
    pub ratio: Option<String>,
    pub residual: Option<f64>,
}

pub(super) fn compare(lhs: &Side, rhs: &Side, tol: f64) -> Comparison {
    match (lhs, rhs) {
        (Side::Poly(l), Side::Poly(r)) => Comparison {
            equal: l == r,
            ratio: poly_ratio(l, r),
            residual: None,
        },
        (Side::Radical(l), Side::Radical(r)) => Comparison {
            equal: l == r,
            ratio: if r.is_zero() {
                None
            } else if l.is_zero() {
                Some("0".into())
            } else {
                Some(
                    l.constant_ratio(r)
                        .map(|c| c.to_string())
                        .unwrap_or_else(|| "non-constant".into()),
                )
            },
            residual: None,
        },
        (Side::Float(l), Side::Float(r)) => {
            let scale = l.abs().max(r.abs());
            let residual = if scale == 0.0 { 0.0 } else { (l - r).abs() / scale };
            Comparison {
                equal: residual <= tol,
                ratio: (*r != 0.0).then(|| format!("{:e}", l / r)),
                residual: Some(residual),
            }
        }
        _ => unreachable!("both sides are evaluated in the same domain"),
    }
}

pub(super) fn poly_ratio(l: &Poly, r: &Poly) -> Option<String> {
    if r.is_zero() {
        return None;
    }
    if l.is_zero() {
        return Some("0".into());
    }
    Some(
        l.constant_ratio(r)
            .map(|c| render_rational(&c))
            .unwrap_or_else(|| "non-constant".into()),
    )
}

pub(super) struct Setup {
    pub system: VectorSystem,
    pub family: Option<RootFamily>,
    pub label: String,
}

pub(super) fn load_system(spec: &SystemSpec, seed: u64) -> Result<Setup> {
    let label = spec.to_string();
    match spec {
        SystemSpec::Family(fs) => {
            let fam = build_family(fs.family, fs.rank)?;
            Ok(Setup {
                system: fam.system.clone(),
                family: Some(fam),
                label,
            })
        }
        SystemSpec::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::FileFormat(format!("{path}: {e}")))?;
            Ok(Setup {
                system: VectorSystem::from_json(&text)?,
                family: None,
                label,
            })
        }
        SystemSpec::Random { dim, count } => {
            if *dim > MAX_SPAN || *count > MAX_VECTORS {
                return Err(Error::ScaleLimit(format!(
                    "random systems are limited to dimension {MAX_SPAN} and {MAX_VECTORS} vectors"
                )));
            }
            Ok(Setup {
                system: random_system(seed, *dim, *count)?,
                family: None,
                label,
            })
        }
    }
}

fn family_of<'a>(setup: &'a Setup, id: Identity, allowed: &[Family]) -> Result<&'a RootFamily> {
    match &setup.family {
        Some(f) if allowed.contains(&f.family) => Ok(f),
        _ => Err(Error::Precondition(format!(
            "{id} needs a family among {}",
            allowed.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
        ))),
    }
}

pub(super) fn default_k(id: Identity, k: Option<usize>) -> Result<usize> {
    let fixed = |want: usize| match k {
        None => Ok(want),
        Some(x) if x == want => Ok(want),
        Some(x) => Err(Error::Precondition(format!("{id} is defined for k = {want}, not {x}"))),
    };
    match id {
        Identity::GenDet => {
            let k = k.unwrap_or(2);
            if k < 2 {
                return Err(Error::Precondition("gendet needs k >= 2; use k1 for k = 1".into()));
            }
            Ok(k)
        }
        Identity::KevenPf => {
            let k = k.unwrap_or(2);
            if k == 0 || k % 2 != 0 {
                return Err(Error::Precondition(format!("keven-pf needs even k, got {k}")));
            }
            Ok(k)
        }
        Identity::K1 | Identity::MatrixTree | Identity::BnTree => fixed(1),
        Identity::Mv => fixed(2),
    }
}

pub(super) fn default_variant(id: Identity, v: Option<&str>) -> Result<Option<String>> {
    let pick = |choices: &[&str]| match v {
        None => Ok(Some(choices[0].to_string())),
        Some(x) if choices.contains(&x) => Ok(Some(x.to_string())),
        Some(x) => Err(Error::Unknown {
            kind: "variant",
            value: x.into(),
        }),
    };
    match id {
        Identity::Mv => pick(&["u", "lambda"]),
        Identity::BnTree => pick(&["derived", "stated"]),
        _ => match v {
            None => Ok(None),
            Some(x) => Err(Error::Unknown {
                kind: "variant",
                value: x.into(),
            }),
        },
    }
}

fn binomial(n: usize, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Rough count of path tuples and of symbolic monomials produced by them.
fn cost(id: Identity, setup: &Setup, k: usize) -> (f64, f64) {
    let big_n = setup.system.len();
    let n = setup.system.span_dim();
    match id {
        Identity::GenDet => {
            let tuples = binomial(big_n, n) * (big_n as f64).powi(((k - 1) * n) as i32);
            (tuples, tuples * 2f64.powi(((k - 1) * n) as i32))
        }
        Identity::KevenPf => {
            let pairs = (n / 2) as i32;
            let tuples = ((big_n * big_n) as f64).powi(pairs) * (big_n as f64).powi((k - 2) as i32 * pairs);
            (tuples, tuples * 2f64.powi((k - 1) as i32 * pairs))
        }
        _ => (0.0, 0.0),
    }
}

pub(super) fn check_scale(id: Identity, setup: &Setup, k: usize) -> Result<()> {
    if k > MAX_K {
        return Err(Error::ScaleLimit(format!("k = {k} exceeds {MAX_K}")));
    }
    let sys = &setup.system;
    if sys.span_dim() > MAX_SPAN {
        return Err(Error::ScaleLimit(format!("span dimension {} exceeds {MAX_SPAN}", sys.span_dim())));
    }
    if matches!(id, Identity::GenDet | Identity::K1 | Identity::KevenPf) && sys.len() > MAX_VECTORS {
        return Err(Error::ScaleLimit(format!("{} vectors exceed {MAX_VECTORS}", sys.len())));
    }
    if let Some(f) = &setup.family {
        let limit = match (id, f.family) {
            (Identity::Mv, _) => 6,
            (_, Family::A) => 5,
            _ => 4,
        };
        if f.rank > limit {
            return Err(Error::ScaleLimit(format!("{id} on {}:{} exceeds rank {limit}", f.family, f.rank)));
        }
    }
    let (tuples, _) = cost(id, setup, k);
    if tuples > MAX_TUPLES {
        return Err(Error::ScaleLimit(format!("about {tuples:.0} path tuples")));
    }
    Ok(())
}

pub(super) fn evaluate(
    id: Identity,
    setup: &Setup,
    k: usize,
    spec: &WeightSpec,
    variant: Option<&str>,
    mode: Mode,
    seed: u64,
) -> Result<Outcome> {
    match id {
        Identity::GenDet => gendet(setup, k, spec),
        Identity::K1 => k1(setup, spec),
        Identity::KevenPf => keven(setup, k, spec, mode, seed),
        Identity::MatrixTree => matrix_tree(setup, spec),
        Identity::Mv => mv(setup, spec, variant.unwrap_or("u")),
        Identity::BnTree => bn_tree(setup, spec, variant.unwrap_or("derived")),
    }
}

fn gendet(setup: &Setup, k: usize, spec: &WeightSpec) -> Result<Outcome> {
    let sys = &setup.system;
    let conv = resolve_convention()?;
    let w = random_weights(spec, k, sys.len())?;
    let p = build_p_nested(sys, &w, k)?;
    let pq = build_p_via_q(sys, &w, k, conv)?;
    let lhs = det_on_subspace(&p, &sys.reference_vectors())?;
    let rhs = rhs_gendet(sys, &w, k, conv, GenDetForm::MultiIndex)?;
    let rhs_doomb = rhs_gendet(sys, &w, k, conv, GenDetForm::Doomb)?;
    let mut out = Outcome::new(
        Side::Poly(lhs),
        Side::Poly(rhs.clone()),
        enumerate_doombs(sys.len(), sys.span_dim()).len(),
    );
    out.checks.push(("nested commutators equal the Q expansion", p == pq));
    out.checks.push(("multi-index and DOOMB forms agree", rhs == rhs_doomb));
    Ok(out)
}

fn k1(setup: &Setup, spec: &WeightSpec) -> Result<Outcome> {
    let sys = &setup.system;
    let w = match &setup.family {
        Some(f) => instantiate_weights(spec, &f.symbolic_weights(), sys.len())?,
        None => random_weights(spec, 1, sys.len())?,
    };
    let p = build_p_nested(sys, &w, 1)?;
    let lhs = det_on_subspace(&p, &sys.reference_vectors())?;
    let rhs = rhs_k1(sys, &w)?;
    Ok(Outcome::new(
        Side::Poly(lhs),
        Side::Poly(rhs),
        combinations(sys.len(), sys.span_dim()).len(),
    ))
}

fn keven(setup: &Setup, k: usize, spec: &WeightSpec, mode: Mode, seed: u64) -> Result<Outcome> {
    let sys = &setup.system;
    let n = sys.span_dim();
    if n % 2 != 0 {
        return Err(Error::OddSize(n));
    }
    let conv = resolve_convention()?;
    let c = pow_rational(&keven_pair_constant(), n / 2);
    let basis = sys.reference_vectors();
    let w = random_weights(spec, k, sys.len())?;
    let p = build_p_nested(sys, &w, k)?;
    let det = det_on_subspace(&p, &basis)?;
    let pf = pfaffian_on_subspace(&p, &basis)?;
    let det_check = det == pf.square();
    let mut notes = vec![format!("matching sum scaled by c' = {}", render_rational(&c))];

    if mode == Mode::Exact {
        let terms = keven_pf_terms(sys, &w, k, conv)?;
        let mut total = Radical::zero();
        let mut mixed = false;
        for (_, t) in &terms {
            match total.add(t) {
                Ok(x) => total = x,
                Err(Error::MixedRadicand(..)) => {
                    mixed = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if !mixed {
            let mut out = Outcome::new(Side::Radical(pf), Side::Radical(total.scale(&c)), terms.len());
            out.checks.push(("det P = Pf^2", det_check));
            out.notes = notes;
            return Ok(out);
        }
        notes.push("radicands mix across terms; forced float mode".into());
    }

    let mut weights_used = None;
    let (wn, pn) = if spec.is_symbolic() {
        let ws = WeightSpec::RandomRational {
            seed,
            bound: DEFAULT_BOUND,
        };
        let wn = random_weights(&ws, k, sys.len())?;
        let pn = build_p_nested(sys, &wn, k)?;
        notes.push(format!("float comparison uses random rational weights, seed {seed}"));
        weights_used = Some(ws);
        (wn, pn)
    } else {
        (w, p)
    };
    let numeric = pn.map(|e| e.as_constant().expect("instantiated weights are numeric"));
    let lhs = pfaffian_f64(&orthonormal_matrix_f64(&numeric, &basis));
    let terms = keven_pf_terms(sys, &wn, k, conv)?.len();
    let rhs = match rhs_keven_pf(sys, &wn, k, conv, PfMode::Float)? {
        PfValue::Float(x) => x * to_f64(&c),
        PfValue::Exact(_) => unreachable!(),
    };
    let mut out = Outcome::new(Side::Float(lhs), Side::Float(rhs), terms);
    out.checks.push(("det P = Pf^2", det_check));
    out.notes = notes;
    out.weights_used = weights_used;
    Ok(out)
}

fn pow_rational(c: &Rational, e: usize) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * c)
}

/// `table[i][j]` for `i < j`: the weight of the `A_n` root `f_i - f_j`.
fn pair_table(v: usize, spec: &WeightSpec) -> Result<Vec<Vec<Poly>>> {
    let mut t = vec![vec![Poly::zero(); v]; v];
    for i in 0..v {
        for j in i + 1..v {
            t[i][j] = spec.weight(Var::new(VarKind::W, &[i, j]))?;
        }
    }
    Ok(t)
}

fn matrix_tree(setup: &Setup, spec: &WeightSpec) -> Result<Outcome> {
    let fam = family_of(setup, Identity::MatrixTree, &[Family::A])?;
    let n = fam.rank;
    let t = pair_table(n + 1, spec)?;
    let l = kirchhoff_matrix(n, |i, j| t[i][j].clone());
    let lhs = l.principal_submatrix(0)?.determinant()?;
    let mut minors_agree = true;
    for i in 1..=n {
        minors_agree &= l.principal_submatrix(i)?.determinant()? == lhs;
    }
    let rhs = tree_sum(n + 1, |a, b| t[a.min(b)][a.max(b)].clone());
    let w1 = instantiate_weights(spec, &fam.symbolic_weights(), fam.system.len())?;
    let p1 = build_p_nested(&fam.system, &w1, 1)?;
    let det_v = det_on_subspace(&p1, &fam.system.reference_vectors())?;
    let mut out = Outcome::new(Side::Poly(lhs.clone()), Side::Poly(rhs), (n + 1).pow(n as u32 - 1));
    out.checks.push(("all principal minors agree", minors_agree));
    out.checks.push((
        "minor = det_V(P^(1)) / (n+1)",
        det_v.scale(&Rational::new(1.into(), (n as i64 + 1).into())) == lhs,
    ));
    out.checks.push(("L_w = P^(1)", l == p1));
    Ok(out)
}

fn mv(setup: &Setup, spec: &WeightSpec, variant: &str) -> Result<Outcome> {
    let fam = family_of(setup, Identity::Mv, &[Family::A])?;
    let n = fam.rank;
    if n % 2 != 0 {
        return Err(Error::Precondition(format!("mv needs an even number of 3-tree edges, A_{n} has {} vertices", n + 1)));
    }
    let m = n / 2;
    let v = n + 1;
    let mut table = vec![vec![vec![Poly::zero(); v]; v]; v];
    for i in 0..v {
        for j in 0..v {
            for k in 0..v {
                if i != j && j != k && i != k {
                    table[i][j][k] = spec.weight(Var::new(VarKind::W, &[i, j, k]))?;
                }
            }
        }
    }
    let w = |i: usize, j: usize, k: usize| table[i][j][k].clone();
    let t = mv_matrix(n, w);
    let minor = t.principal_submatrix(0)?;
    let lhs = minor.pfaffian()?;
    let pf_check = &lhs * &lhs == minor.determinant()?;
    let p2 = build_p_nested(&fam.system, &mv_root_pair_weights(fam, w)?, 2)?;
    let conv = resolve_convention()?.composition;
    let u_form = |i: usize, j: usize, k: usize| &w(i, j, k) - &w(k, j, i);
    let lambda_form = |i: usize, j: usize, k: usize| lambda(&w, i, j, k);
    let rhs = if variant == "lambda" {
        three_tree_sum(m, conv, lambda_form)?
    } else {
        three_tree_sum(m, conv, u_form)?
    };
    let mut out = Outcome::new(Side::Poly(lhs.clone()), Side::Poly(rhs), enumerate_3trees(m, v)?.len());
    out.checks.push(("Pf^2 = det", pf_check));
    out.checks.push(("T = P^(2)", t == p2));
    out.notes.push(format!("delta uses {} composition", conv.name()));
    if variant == "u" {
        let alt = three_tree_sum(m, conv, lambda_form)?;
        out.notes.push(format!(
            "with the alternating weights lambda in place of u the ratio is {}",
            poly_ratio(&lhs, &alt).unwrap_or_else(|| "undefined".into())
        ));
    }
    Ok(out)
}

fn bn_tree(setup: &Setup, spec: &WeightSpec, variant: &str) -> Result<Outcome> {
    let fam = family_of(setup, Identity::BnTree, &[Family::B, Family::D])?;
    let n = fam.rank;
    let mut plus = vec![vec![Poly::zero(); n]; n];
    let mut minus = vec![vec![Poly::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            plus[i][j] = spec.weight(Var::new(VarKind::WPlus, &[i + 1, j + 1]))?;
            minus[i][j] = spec.weight(Var::new(VarKind::WMinus, &[i + 1, j + 1]))?;
        }
    }
    let loops: Vec<Poly> = (0..n)
        .map(|i| match fam.family {
            Family::D => Ok(Poly::zero()),
            _ => spec.weight(Var::new(VarKind::W, &[i + 1])),
        })
        .collect::<Result<_>>()?;
    let tw = bn_matrix(n, |i, j| plus[i][j].clone(), |i, j| minus[i][j].clone(), |i| loops[i].clone());
    let lhs = tw.determinant()?;
    let graphs = enumerate_bbasic(n);
    let mut rhs = Poly::zero();
    for g in &graphs {
        let mut term = Poly::one();
        for &(i, j) in &g.minus_edges {
            term = &term * &minus[i][j];
        }
        for &(i, j) in &g.plus_edges {
            term = &term * &plus[i][j];
        }
        for &i in &g.loops {
            term = &term * &loops[i];
        }
        let d = g.components as i64;
        let e = if variant == "stated" { 2 * d } else { 2 * d - g.loop_count() as i64 };
        rhs.add_scaled(&term, &pow2(e));
    }
    let w1 = instantiate_weights(spec, &fam.symbolic_weights(), fam.system.len())?;
    let p1 = build_p_nested(&fam.system, &w1, 1)?;
    let mut out = Outcome::new(Side::Poly(lhs), Side::Poly(rhs), graphs.len());
    out.checks.push(("T_w = P^(1)", tw == p1));
    out.notes.push(format!(
        "graph factor {}",
        if variant == "stated" { "2^(2d)" } else { "2^(2d-l)" }
    ));
    Ok(out)
}

fn reverify_seed(seed: u64, s: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0xC0FFEE + s)
}

/// Runs one identity end to end and assembles its report.
pub fn verify_identity(id: Identity, params: &VerifyParams) -> Result<VerificationReport> {
    let start = Instant::now();
    let setup = load_system(&params.system, params.seed)?;
    let k = default_k(id, params.k)?;
    let variant = default_variant(id, params.variant.as_deref())?;
    check_scale(id, &setup, k)?;

    let mut notes = Vec::new();
    if matches!(id, Identity::GenDet | Identity::KevenPf | Identity::Mv) {
        notes.push(format!("u convention: {}", resolve_convention()?.describe()));
    }
    let mut spec = params.weights.clone();
    if spec.is_symbolic() && cost(id, &setup, k).1 > SYMBOLIC_TERM_BUDGET as f64 {
        spec = WeightSpec::RandomRational {
            seed: params.seed,
            bound: DEFAULT_BOUND,
        };
        notes.push(format!(
            "symbolic term budget {SYMBOLIC_TERM_BUDGET} exceeded; random rational weights used"
        ));
    }
    let out = evaluate(id, &setup, k, &spec, variant.as_deref(), params.mode, params.seed)?;
    let cmp = compare(&out.lhs, &out.rhs, params.tol);
    let checks_ok = out.checks.iter().all(|c| c.1);
    let mut equal = cmp.equal && checks_ok;
    for (name, ok) in &out.checks {
        notes.push(format!("check {name}: {}", if *ok { "pass" } else { "FAIL" }));
    }
    notes.extend(out.notes.iter().cloned());

    if equal && spec.is_symbolic() && !out.is_float() {
        let mut passed = 0;
        for s in 1..=3 {
            let ws = WeightSpec::RandomRational {
                seed: reverify_seed(params.seed, s),
                bound: DEFAULT_BOUND,
            };
            let o = evaluate(id, &setup, k, &ws, variant.as_deref(), Mode::Exact, params.seed)?;
            let c = compare(&o.lhs, &o.rhs, params.tol);
            if c.equal && o.checks.iter().all(|c| c.1) {
                passed += 1;
            }
        }
        notes.push(format!("re-verified under random rational substitutions: {passed}/3"));
        equal = passed == 3;
    }

    let mode = if out.is_float() { Mode::Float } else { Mode::Exact };
    let weights = out.weights_used.as_ref().unwrap_or(&spec).to_string();
    Ok(VerificationReport {
        identity: id.name().to_string(),
        parameters: Parameters {
            family: setup.label.clone(),
            n: setup.system.span_dim(),
            big_n: setup.system.len(),
            k,
            seed: params.seed,
            mode: mode.name().to_string(),
            weights,
            variant,
        },
        lhs: out.lhs.render(),
        rhs: out.rhs.render(),
        equal,
        ratio: cmp.ratio,
        term_count: out.term_count,
        elapsed_ms: params.timing.then(|| start.elapsed().as_millis() as u64),
        residual: cmp.residual,
        notes,
    })
}

pub(super) fn symbolic_cost(id: Identity, setup: &Setup, k: usize) -> f64 {
    cost(id, setup, k).1
}
