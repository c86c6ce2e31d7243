use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commutators::WeightAssignment;
use crate::error::{Error, Result};
use crate::linalg::{is_independent, VectorQ};
use crate::ring::{parse_rational, Poly, Rational, Var};
use crate::system::VectorSystem;

pub const DEFAULT_BOUND: i64 = 9;

/// How weight indeterminates are instantiated.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Symbolic,
    Unit,
    /// Nonzero rationals `±p/q` with `1 <= p, q <= bound`, drawn per indeterminate.
    RandomRational { seed: u64, bound: i64 },
    /// Values read from a JSON object mapping names like `"w[1,2]"` to `"p/q"`.
    Explicit { path: String, values: BTreeMap<String, Rational> },
}

impl WeightSpec {
    /// Parses `symbolic`, `unit`, `random`, `random:BOUND` or `file:PATH`.
    pub fn parse(s: &str, seed: u64) -> Result<Self> {
        match s {
            "symbolic" => Ok(WeightSpec::Symbolic),
            "unit" => Ok(WeightSpec::Unit),
            "random" => Ok(WeightSpec::RandomRational {
                seed,
                bound: DEFAULT_BOUND,
            }),
            _ => {
                if let Some(b) = s.strip_prefix("random:") {
                    let bound: i64 = b.parse().map_err(|_| Error::Unknown {
                        kind: "weights",
                        value: s.into(),
                    })?;
                    if bound < 1 {
                        return Err(Error::Precondition("random weight bound must be positive".into()));
                    }
                    return Ok(WeightSpec::RandomRational { seed, bound });
                }
                if let Some(path) = s.strip_prefix("file:") {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::FileFormat(format!("{path}: {e}")))?;
                    return Self::explicit_from_json(path, &text);
                }
                Err(Error::Unknown {
                    kind: "weights",
                    value: s.into(),
                })
            }
        }
    }

    pub fn explicit_from_json(path: &str, text: &str) -> Result<Self> {
        let raw: BTreeMap<String, serde_json::Value> =
            serde_json::from_str(text).map_err(|e| Error::FileFormat(format!("{path}: {e}")))?;
        let mut values = BTreeMap::new();
        for (k, v) in raw {
            let s = match &v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                _ => return Err(Error::FileFormat(format!("{path}: value of {k} is not a rational"))),
            };
            let r = parse_rational(&s).map_err(|_| Error::FileFormat(format!("{path}: bad rational {s:?}")))?;
            values.insert(k, r);
        }
        Ok(WeightSpec::Explicit {
            path: path.to_string(),
            values,
        })
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, WeightSpec::Symbolic)
    }

    /// Value of one indeterminate, or `None` when it stays symbolic.
    pub fn value(&self, v: Var) -> Result<Option<Rational>> {
        match self {
            WeightSpec::Symbolic => Ok(None),
            WeightSpec::Unit => Ok(Some(Rational::from_integer(1.into()))),
            WeightSpec::RandomRational { seed, bound } => Ok(Some(random_value(*seed, *bound, v))),
            WeightSpec::Explicit { path, values } => values
                .get(&v.to_string())
                .cloned()
                .map(Some)
                .ok_or_else(|| Error::FileFormat(format!("{path}: no value for {v}"))),
        }
    }

    pub fn weight(&self, v: Var) -> Result<Poly> {
        Ok(match self.value(v)? {
            Some(r) => Poly::constant(r),
            None => Poly::var(v),
        })
    }

    /// Instantiates every indeterminate of `p`.
    pub fn instantiate(&self, p: &Poly) -> Result<Poly> {
        if self.is_symbolic() {
            return Ok(p.clone());
        }
        for v in p.variables() {
            self.value(v)?;
        }
        Ok(Poly::constant(p.evaluate(|v| self.value(v).ok().flatten().unwrap())))
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Symbolic => f.write_str("symbolic"),
            WeightSpec::Unit => f.write_str("unit"),
            WeightSpec::RandomRational { bound, .. } => write!(f, "random:{bound}"),
            WeightSpec::Explicit { path, .. } => write!(f, "file:{path}"),
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Value attached to `v` by the seed, independent of the order in which
/// indeterminates are visited.
fn random_value(seed: u64, bound: i64, v: Var) -> Rational {
    let mut h = splitmix(seed);
    h = splitmix(h ^ v.kind() as u64);
    for i in v.index() {
        h = splitmix(h ^ (i as u64 + 1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(h);
    let p: i64 = rng.gen_range(1..=bound);
    let q: i64 = rng.gen_range(1..=bound);
    let s = if rng.gen_bool(0.5) { 1 } else { -1 };
    Rational::new((s * p).into(), q.into())
}

/// Weights of the given arity over `n_vectors`, named `w[i_1,...,i_k]` by
/// 1-based system position and instantiated by `spec`.
pub fn random_weights(spec: &WeightSpec, arity: usize, n_vectors: usize) -> Result<WeightAssignment> {
    if spec.is_symbolic() {
        return Ok(WeightAssignment::symbolic(arity));
    }
    let proto = WeightAssignment::symbolic(arity);
    let mut err = None;
    let w = WeightAssignment::from_fn(arity, n_vectors, |idx| match spec.weight(proto.var_for(idx)) {
        Ok(p) => p,
        Err(e) => {
            err.get_or_insert(e);
            Poly::zero()
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(w),
    }
}

/// Applies `spec` to every entry of an existing assignment.
pub fn instantiate_weights(
    spec: &WeightSpec,
    w: &WeightAssignment,
    n_vectors: usize,
) -> Result<WeightAssignment> {
    if spec.is_symbolic() {
        return Ok(w.clone());
    }
    let mut err = None;
    let out = WeightAssignment::from_fn(w.arity(), n_vectors, |idx| match spec.instantiate(&w.get(idx)) {
        Ok(p) => p,
        Err(e) => {
            err.get_or_insert(e);
            Poly::zero()
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `count` vectors in `Q^dim` with entries `p/q`, `|p| <= 3`, `1 <= q <= 3`,
/// spanning the whole space (or as much of it as `count` allows).
pub fn random_system(seed: u64, dim: usize, count: usize) -> Result<VectorSystem> {
    if dim == 0 || count == 0 {
        return Err(Error::Precondition("random systems need positive dimension and size".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed ^ 0x5eed));
    let target = dim.min(count);
    for _ in 0..1000 {
        let vectors: Vec<VectorQ> = (0..count)
            .map(|_| {
                VectorQ::new(
                    (0..dim)
                        .map(|_| Rational::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=3).into()))
                        .collect(),
                )
            })
            .collect();
        if vectors.iter().any(VectorQ::is_zero) {
            continue;
        }
        if !is_independent(&vectors[..target]) {
            continue;
        }
        return VectorSystem::new(dim, vectors);
    }
    Err(Error::Precondition("could not draw a spanning random system".into()))
}

impl FromStr for WeightSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WeightSpec::parse(s, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commutators::multi_indices;
    use crate::ring::int;

    #[test]
    fn unit_weights_are_ones() {
        let w = random_weights(&WeightSpec::Unit, 1, 3).unwrap();
        for i in 0..3 {
            assert_eq!(w.get(&[i]), Poly::constant(int(1)));
        }
    }

    #[test]
    fn random_weights_are_reproducible() {
        let spec = WeightSpec::RandomRational { seed: 7, bound: 9 };
        let a = random_weights(&spec, 2, 3).unwrap();
        let b = random_weights(&spec, 2, 3).unwrap();
        assert_eq!(a, b);
        let other = random_weights(&WeightSpec::RandomRational { seed: 8, bound: 9 }, 2, 3).unwrap();
        assert_ne!(a, other);
        for idx in multi_indices(3, 2) {
            let c = a.get(&idx).as_constant().unwrap();
            assert!(c.denom() <= &9.into() && c.numer().magnitude() <= &9u32.into());
            assert!(c != int(0));
        }
    }

    #[test]
    fn symbolic_names() {
        let w = random_weights(&WeightSpec::Symbolic, 2, 2).unwrap();
        let names: Vec<String> = multi_indices(2, 2).map(|i| w.get(&i).to_string()).collect();
        assert_eq!(names, ["w[1,1]", "w[1,2]", "w[2,1]", "w[2,2]"]);
    }

    #[test]
    fn explicit_file_values() {
        let spec = WeightSpec::explicit_from_json("mem", r#"{"w[1]": "1/2", "w[2]": 3}"#).unwrap();
        let w = random_weights(&spec, 1, 2).unwrap();
        assert_eq!(w.get(&[0]), Poly::constant(crate::ring::rat(1, 2)));
        assert!(matches!(random_weights(&spec, 1, 3), Err(Error::FileFormat(_))));
        assert!(matches!(
            WeightSpec::explicit_from_json("mem", "[1,2]"),
            Err(Error::FileFormat(_))
        ));
    }

    #[test]
    fn random_systems_span() {
        let s = random_system(3, 3, 4).unwrap();
        assert_eq!(s.span_dim(), 3);
        assert_eq!(random_system(3, 3, 4).unwrap().vectors(), s.vectors());
    }
}
