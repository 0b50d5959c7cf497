//! Problem files: a TOML document describing a field, DG rings, modules and ring homomorphisms.

use std::collections::BTreeMap;
use std::sync::Arc;

use dgcalc_core::linalg::{Field, Matrix, Scalar};
use dgcalc_core::module::{Actor, BasisElement, Boundary, CoinducedModule, Module, SemiFreeModule, WindowedModule};
use dgcalc_core::ring::{parse_field, DegreeZeroAlgebra, DgRing, DgRingHom, Generator, RingElement};
use dgcalc_core::classify::simple_modules;
use dgcalc_core::sample::bar_module;
use dgcalc_core::squaring::k_dual_of_ring;
use serde::Deserialize;

use crate::grammar;
use crate::CliError;

/// An integer or a field literal in quotes.
#[derive(Deserialize, Clone, Debug)]
#[serde(untagged)]
enum Literal {
    Int(i64),
    Text(String),
}

impl Literal {
    fn scalar(&self, f: &Field) -> Result<Scalar, String> {
        match self {
            Literal::Int(n) => Ok(f.int(*n)),
            Literal::Text(s) => f.parse(s).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    field: String,
    ring: RawRing,
    #[serde(default)]
    rings: BTreeMap<String, RawRing>,
    #[serde(default)]
    modules: BTreeMap<String, RawModule>,
    #[serde(default)]
    homs: BTreeMap<String, RawHom>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct RawRing {
    name: Option<String>,
    #[serde(default)]
    degree_zero: RawDegreeZero,
    #[serde(default)]
    generators: Vec<RawGenerator>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct RawDegreeZero {
    quotient_univariate: Option<RawUnivariate>,
    basis: Option<Vec<String>>,
    /// `products[i][j]` are the coordinates of `b_i · b_j`.
    products: Option<Vec<Vec<Vec<Literal>>>>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawUnivariate {
    variable: String,
    power: Option<usize>,
    /// Coefficients of the modulus, constant term first.
    modulus: Option<Vec<Literal>>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    name: String,
    degree: i64,
    #[serde(default = "zero_string")]
    d: String,
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Deserialize, Debug)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawModule {
    Semifree {
        ring: Option<String>,
        basis: Vec<RawBasis>,
    },
    Windowed {
        ring: Option<String>,
        lo: i64,
        hi: i64,
        dims: Vec<usize>,
        /// `d[i − lo]` is `d^i` as a list of rows.
        #[serde(default)]
        d: Vec<Vec<Vec<Literal>>>,
        /// Per actor symbol, one matrix per degree of the window.
        #[serde(default)]
        actions: BTreeMap<String, Vec<Vec<Vec<Literal>>>>,
        #[serde(default)]
        below: RawBoundary,
        #[serde(default)]
        above: RawBoundary,
    },
    Coinduced {
        ring: Option<String>,
        coefficients: Vec<i64>,
    },
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawBasis {
    name: String,
    degree: i64,
    #[serde(default = "zero_string")]
    d: String,
}

#[derive(Deserialize, Debug, Default, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum RawBoundary {
    #[default]
    Zero,
    Truncated,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawHom {
    source: String,
    target: String,
    /// Image of each `A⁰` basis symbol of the source. Missing entries map to the unit (for the unit) or to
    /// the target symbol of the same name.
    #[serde(default)]
    degree_zero: BTreeMap<String, String>,
    #[serde(default)]
    generators: BTreeMap<String, String>,
}

/// A loaded and verified problem.
pub struct Problem {
    pub field: Field,
    /// Name of the primary ring.
    pub primary: String,
    pub rings: BTreeMap<String, Arc<DgRing>>,
    pub modules: BTreeMap<String, Module>,
    pub homs: BTreeMap<String, Arc<DgRingHom>>,
}

fn input(at: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{at}: {e}"))
}

fn core_error(at: &str, e: dgcalc_core::Error) -> CliError {
    match e {
        dgcalc_core::Error::Verification(m) | dgcalc_core::Error::Precondition(m) => CliError::Precondition(format!("{at}: verification failed: {m}")),
        e => input(at, e),
    }
}

fn degree_zero(field: &Field, raw: &RawDegreeZero, at: &str) -> Result<DegreeZeroAlgebra, CliError> {
    match (&raw.quotient_univariate, &raw.basis, &raw.products) {
        (None, None, None) => Ok(DegreeZeroAlgebra::base(field)),
        (Some(q), None, None) => {
            let modulus = match (&q.modulus, q.power) {
                (Some(m), _) => m.iter().map(|c| c.scalar(field)).collect::<Result<Vec<_>, _>>().map_err(|e| input(at, e))?,
                (None, Some(n)) => {
                    let mut m = vec![field.zero(); n + 1];
                    m[n] = field.one();
                    m
                }
                (None, None) => return Err(input(at, "quotient_univariate needs `power` or `modulus`")),
            };
            DegreeZeroAlgebra::quotient_univariate(field, &q.variable, &modulus).map_err(|e| core_error(at, e))
        }
        (None, Some(basis), Some(products)) => {
            let table = products
                .iter()
                .map(|row| row.iter().map(|cell| cell.iter().map(|c| c.scalar(field)).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| input(at, e))?;
            let a = DegreeZeroAlgebra::new(field, basis.clone(), table).map_err(|e| core_error(at, e))?;
            a.verify().map_err(|e| CliError::Precondition(format!("{at}: verification failed: {e}")))?;
            Ok(a)
        }
        _ => Err(input(at, "give either `quotient_univariate` or both `basis` and `products`")),
    }
}

fn ring(field: &Field, raw: &RawRing, at: &str) -> Result<DgRing, CliError> {
    let a0 = degree_zero(field, &raw.degree_zero, &format!("{at}.degree_zero"))?;
    let gens: Vec<Generator> = raw.generators.iter().map(|g| Generator { name: g.name.clone(), degree: g.degree }).collect();
    for (k, g) in gens.iter().enumerate() {
        if a0.symbol_index(&g.name).is_some() || gens[..k].iter().any(|h| h.name == g.name) {
            return Err(input(&format!("{at}.generators[{k}]"), format!("duplicate symbol `{}`", g.name)));
        }
    }
    let scaffold = DgRing::new_unchecked(a0.clone(), gens.clone(), gens.iter().map(|g| RingElement::zero(g.degree + 1)).collect());
    let diffs = raw
        .generators
        .iter()
        .enumerate()
        .map(|(k, g)| grammar::ring_element(&scaffold, &g.d, g.degree + 1).map_err(|e| input(&format!("{at}.generators[{k}].d"), e)))
        .collect::<Result<Vec<_>, _>>()?;
    DgRing::new(a0, gens, diffs).map_err(|e| core_error(at, e))
}

fn matrix(field: &Field, rows: usize, cols: usize, raw: &[Vec<Literal>], at: &str) -> Result<Matrix, CliError> {
    if raw.is_empty() && (rows == 0 || cols == 0) {
        return Ok(Matrix::zeros(field, rows, cols));
    }
    if raw.len() != rows || raw.iter().any(|r| r.len() != cols) {
        return Err(input(at, format!("expected a {rows}×{cols} matrix")));
    }
    let rows = raw.iter().map(|r| r.iter().map(|c| c.scalar(field)).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>().map_err(|e| input(at, e))?;
    Matrix::from_rows(field, rows).map_err(|e| input(at, e))
}

#[allow(clippy::too_many_arguments)]
fn windowed(
    ring: &Arc<DgRing>,
    lo: i64,
    hi: i64,
    dims: &[usize],
    d: &[Vec<Vec<Literal>>],
    actions: &BTreeMap<String, Vec<Vec<Vec<Literal>>>>,
    boundaries: (RawBoundary, RawBoundary),
    at: &str,
) -> Result<WindowedModule, CliError> {
    let field = ring.field();
    if lo > hi || dims.len() as i64 != hi - lo + 1 {
        return Err(input(at, "`dims` must list one dimension per degree of lo..=hi"));
    }
    let dim = |i: i64| if (lo..=hi).contains(&i) { dims[(i - lo) as usize] } else { 0 };
    let n = dims.len();
    let diffs = (0..n)
        .map(|k| {
            let i = lo + k as i64;
            let raw = d.get(k).map(Vec::as_slice).unwrap_or(&[]);
            matrix(field, dim(i + 1), dim(i), raw, &format!("{at}.d[{k}]"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let a0 = ring.degree_zero();
    for name in actions.keys() {
        if a0.symbol_index(name).is_none() && ring.generator_index(name).is_none() {
            return Err(input(&format!("{at}.actions"), format!("unknown actor `{name}`")));
        }
    }
    let unit_is_first = a0.dim() > 0 && a0.unit() == a0.basis_vec(0);
    let mut acts = Vec::new();
    for actor in Actor::all(ring) {
        let (name, delta) = match actor {
            Actor::Basis(i) => (a0.symbols()[i].clone(), 0),
            Actor::Gen(g) => (ring.generators()[g].name.clone(), ring.generators()[g].degree),
        };
        let per_degree = (0..n)
            .map(|k| {
                let i = lo + k as i64;
                match actions.get(&name) {
                    Some(ms) => {
                        let raw = ms.get(k).map(Vec::as_slice).unwrap_or(&[]);
                        matrix(field, dim(i + delta), dim(i), raw, &format!("{at}.actions.{name}[{k}]"))
                    }
                    None if actor == Actor::Basis(0) && unit_is_first => Ok(Matrix::identity(field, dim(i))),
                    None => Ok(Matrix::zeros(field, dim(i + delta), dim(i))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        acts.push(per_degree);
    }
    let b = |r: RawBoundary| match r {
        RawBoundary::Zero => Boundary::ExactlyZero,
        RawBoundary::Truncated => Boundary::Truncated,
    };
    WindowedModule::new(ring.clone(), lo, hi, dims.to_vec(), diffs, acts, b(boundaries.0), b(boundaries.1)).map_err(|e| core_error(at, e))
}

fn hom(rings: &BTreeMap<String, Arc<DgRing>>, raw: &RawHom, at: &str) -> Result<DgRingHom, CliError> {
    let get = |n: &str| rings.get(n).cloned().ok_or_else(|| input(at, format!("unknown ring `{n}`")));
    let (s, t) = (get(&raw.source)?, get(&raw.target)?);
    let a0 = s.degree_zero();
    for k in raw.degree_zero.keys() {
        if a0.symbol_index(k).is_none() {
            return Err(input(&format!("{at}.degree_zero"), format!("unknown symbol `{k}`")));
        }
    }
    for k in raw.generators.keys() {
        if s.generator_index(k).is_none() {
            return Err(input(&format!("{at}.generators"), format!("unknown generator `{k}`")));
        }
    }
    let unit_is_first = a0.dim() > 0 && a0.unit() == a0.basis_vec(0);
    let a0_images = (0..a0.dim())
        .map(|i| {
            let sym = &a0.symbols()[i];
            match raw.degree_zero.get(sym) {
                Some(e) => grammar::ring_element(&t, e, 0).map_err(|e| input(&format!("{at}.degree_zero.{sym}"), e)),
                None if i == 0 && unit_is_first => Ok(t.one()),
                None if t.degree_zero().symbol_index(sym).is_some() => Ok(t.a0_basis(t.degree_zero().symbol_index(sym).expect("symbol"))),
                None => Err(input(&format!("{at}.degree_zero"), format!("missing image of `{sym}`"))),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let gen_images = s
        .generators()
        .iter()
        .map(|g| match raw.generators.get(&g.name) {
            Some(e) => grammar::ring_element(&t, e, g.degree).map_err(|e| input(&format!("{at}.generators.{}", g.name), e)),
            None => Err(input(&format!("{at}.generators"), format!("missing image of `{}`", g.name))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    DgRingHom::new(s, t, a0_images, gen_images).map_err(|e| core_error(at, e))
}

/// The direct sum of the simple modules, one per component; the residue field over a local ring.
fn simples(r: &Arc<DgRing>, at: &str) -> Result<Module, CliError> {
    let parts: Vec<Module> = simple_modules(r).map_err(|e| core_error(at, e))?.into_iter().map(|(_, m)| m).collect();
    match parts.len() {
        1 => Ok(parts.into_iter().next().expect("one simple module")),
        _ => Module::sum(&parts).map_err(|e| core_error(at, e)),
    }
}

impl Problem {
    pub fn parse(text: &str) -> Result<Problem, CliError> {
        let raw: RawProblem = toml::from_str(text).map_err(|e| CliError::Input(format!("parse error: {}", e.to_string().trim_end())))?;
        let field = parse_field(&raw.field).map_err(|e| input("field", e))?;
        let primary = raw.ring.name.clone().unwrap_or_else(|| "A".into());
        let mut rings = BTreeMap::new();
        rings.insert(primary.clone(), Arc::new(ring(&field, &raw.ring, "ring")?));
        for (name, r) in &raw.rings {
            if rings.contains_key(name) {
                return Err(input(&format!("rings.{name}"), "duplicate ring name"));
            }
            if r.name.as_ref().is_some_and(|n| n != name) {
                return Err(input(&format!("rings.{name}"), "`name` must match the table key"));
            }
            rings.insert(name.clone(), Arc::new(ring(&field, r, &format!("rings.{name}"))?));
        }
        let ring_of = |r: &Option<String>, at: &str| -> Result<Arc<DgRing>, CliError> {
            let n = r.as_deref().unwrap_or(&primary);
            rings.get(n).cloned().ok_or_else(|| input(at, format!("unknown ring `{n}`")))
        };
        let mut modules = BTreeMap::new();
        for (name, m) in &raw.modules {
            let at = format!("modules.{name}");
            let module = match m {
                RawModule::Semifree { ring, basis } => {
                    let ring = ring_of(ring, &at)?;
                    let elems: Vec<BasisElement> = basis.iter().map(|b| BasisElement { name: b.name.clone(), degree: b.degree }).collect();
                    for (k, b) in elems.iter().enumerate() {
                        if elems[..k].iter().any(|c| c.name == b.name) {
                            return Err(input(&format!("{at}.basis[{k}]"), format!("duplicate basis name `{}`", b.name)));
                        }
                    }
                    let diff = basis
                        .iter()
                        .enumerate()
                        .map(|(k, b)| grammar::free_element(&ring, &elems, &b.d, b.degree).map_err(|e| input(&format!("{at}.basis[{k}].d"), e)))
                        .collect::<Result<Vec<_>, _>>()?;
                    Module::semifree(SemiFreeModule::new(ring, elems, diff).map_err(|e| core_error(&at, e))?)
                }
                RawModule::Windowed { ring, lo, hi, dims, d, actions, below, above } => {
                    let ring = ring_of(ring, &at)?;
                    Module::windowed(windowed(&ring, *lo, *hi, dims, d, actions, (*below, *above), &at)?)
                }
                RawModule::Coinduced { ring, coefficients } => {
                    Module::Coinduced(Arc::new(CoinducedModule::new(ring_of(ring, &at)?, coefficients.clone())))
                }
            };
            modules.insert(name.clone(), module);
        }
        let mut homs = BTreeMap::new();
        for (name, h) in &raw.homs {
            homs.insert(name.clone(), Arc::new(hom(&rings, h, &format!("homs.{name}"))?));
        }
        Ok(Problem { field, primary, rings, modules, homs })
    }

    pub fn load(path: &std::path::Path) -> Result<Problem, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Problem::parse(&text)
    }

    pub fn primary_ring(&self) -> &Arc<DgRing> {
        &self.rings[&self.primary]
    }

    pub fn ring(&self, name: Option<&str>) -> Result<&Arc<DgRing>, CliError> {
        let n = name.unwrap_or(&self.primary);
        self.rings.get(n).ok_or_else(|| CliError::Input(format!("unknown ring `{n}`")))
    }

    fn atom(&self, s: &str) -> Result<Module, CliError> {
        if let Some(m) = self.modules.get(s) {
            return Ok(m.clone());
        }
        if let Some(r) = self.rings.get(s) {
            return Ok(Module::semifree(SemiFreeModule::ring_module(r.clone())));
        }
        if let Some(r) = s.strip_prefix("bar").and_then(|n| self.rings.get(n)) {
            return bar_module(r).map_err(|e| core_error(s, e));
        }
        if let Some(r) = s.strip_prefix("R_").and_then(|n| self.rings.get(n)) {
            return Ok(k_dual_of_ring(r));
        }
        if let Some(r) = s.strip_prefix("k_").and_then(|n| self.rings.get(n)) {
            return simples(r, s);
        }
        if s == "k" {
            return simples(self.primary_ring(), s);
        }
        if s == "R" {
            return Ok(k_dual_of_ring(self.primary_ring()));
        }
        Err(CliError::Input(format!("unknown object `{s}`")))
    }

    /// Resolves an object expression: `name`, `name[k]` for a shift, and `+` for direct sums.
    ///
    /// Besides the modules of the file, every ring `X` provides `X` (free of rank one), `barX` (`H⁰(X)`),
    /// `R_X` (`Hom_K(X, K)`) and `k_X` (the sum of the simple modules). `R` and `k` refer to the primary ring.
    /// File modules shadow these names.
    pub fn object(&self, expr: &str) -> Result<Module, CliError> {
        let mut parts = Vec::new();
        for p in expr.split('+') {
            let p = p.trim();
            let (name, shift) = match p.strip_suffix(']').and_then(|q| q.split_once('[')) {
                Some((n, k)) => (n.trim(), k.trim().parse::<i64>().map_err(|_| CliError::Input(format!("bad shift in `{p}`")))?),
                None => (p, 0),
            };
            let m = self.atom(name)?;
            parts.push(if shift == 0 { m } else { m.shift(shift) });
        }
        if parts.len() == 1 {
            return Ok(parts.pop().expect("one part"));
        }
        Module::sum(&parts).map_err(|e| core_error(expr, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dgcalc_core::module::DgModule;

    const POLY: &str = r#"
field = "Q"
[ring]
generators = [{ name = "t", degree = -2 }]
"#;

    #[test]
    fn loads_polynomial_ring() {
        let p = Problem::parse(POLY).unwrap();
        let a = p.primary_ring();
        assert_eq!(a.generators()[0].degree, -2);
        assert!(p.modules.is_empty());
        assert_eq!(p.object("A").unwrap().dim(-4), 1);
        assert_eq!(p.object("A[2]").unwrap().dim(-6), 1);
        assert_eq!(p.object("A + A[1]").unwrap().dim(-1), 1);
    }

    #[test]
    fn wrong_differential_degree_names_the_generator() {
        let text = r#"
field = "GF(3)"
[ring]
degree_zero = { quotient_univariate = { variable = "x", power = 2 } }
generators = [{ name = "e", degree = -1, d = "x*x" }, { name = "f", degree = -2, d = "x" }]
"#;
        match Problem::parse(text) {
            Err(CliError::Precondition(m)) => assert!(m.contains("d(f)"), "{m}"),
            Err(e) => panic!("unexpected error {e}"),
            Ok(_) => panic!("accepted a bad presentation"),
        }
    }

    #[test]
    fn parse_errors_are_positioned() {
        let Err(CliError::Input(m)) = Problem::parse("field = \"Q\"\n[ring\n") else { panic!() };
        assert!(m.contains("line 2"), "{m}");
        let Err(CliError::Input(m)) = Problem::parse("field = \"Q\"\n[ring]\ngenerators = [{ name = \"t\", degree = -2, d = \"u\" }]\n") else {
            panic!()
        };
        assert!(m.starts_with("ring.generators[0].d"), "{m}");
    }

    #[test]
    fn loads_modules_and_homs() {
        let text = r#"
field = "GF(5)"
[ring]
name = "B"
degree_zero = { quotient_univariate = { variable = "x", power = 3 } }
generators = [{ name = "e", degree = -1, d = "x" }]

[rings.A0]
degree_zero = { quotient_univariate = { variable = "x", power = 3 } }

[homs.f]
source = "A0"
target = "B"
degree_zero = { x = "x" }

[modules.M]
kind = "semifree"
basis = [{ name = "u", degree = 0 }, { name = "v", degree = -1, d = "x^2*u" }]

[modules.K]
kind = "windowed"
lo = 0
hi = 0
dims = [1]

[modules.R]
kind = "coinduced"
coefficients = [0]
"#;
        let p = Problem::parse(text).unwrap();
        assert_eq!(p.primary, "B");
        assert_eq!(p.modules["M"].dim(0), 3);
        assert_eq!(p.modules["K"].dim(0), 1);
        assert_eq!(p.object("barB").unwrap().dim(0), 1);
        assert!(p.homs.contains_key("f"));
    }
}
