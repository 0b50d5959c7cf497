use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::functors::{hom_complex, same_ring};
use super::{act_monomial, Actor, Boundary, Bounds, DgModule, Module, SemiFreeModule, WindowedModule};
use crate::linalg::{Matrix, Scalar, Solver, Subquotient};
use crate::Error;

/// Cohomology of a realized module, with the `H⁰(A)`-relevant `A⁰` actions.
#[derive(Clone, Debug)]
pub struct CohomologyTable {
    lo: i64,
    hi: i64,
    below: Boundary,
    above: Boundary,
    trusted: Vec<bool>,
    pieces: Vec<Subquotient>,
    a0_actions: Vec<Vec<Matrix>>,
}

pub fn cohomology(w: &WindowedModule) -> CohomologyTable {
    let field = w.ring().field().clone();
    let ext = w.extent();
    let (lo, hi) = (w.lo(), w.hi());
    let mut trusted = Vec::new();
    let mut pieces = Vec::new();
    let mut a0_actions = Vec::new();
    for i in lo..=hi {
        let n = w.dim(i);
        let z = w.differential(i).kernel();
        let b = w.differential(i - 1).columns();
        let sq = Subquotient::new(&field, n, &z, &b);
        let acts = (0..w.ring().degree_zero().dim())
            .map(|x| {
                let m = w.action(Actor::Basis(x), i);
                let cols: Vec<Vec<Scalar>> = sq.reps.iter().map(|r| sq.reduce(&m.mul_vec(r)).expect("cycles are A⁰-stable")).collect();
                Matrix::from_columns(&field, sq.dim(), &cols)
            })
            .collect();
        trusted.push(ext.cohomology_trusted(i));
        pieces.push(sq);
        a0_actions.push(acts);
    }
    CohomologyTable { lo, hi, below: w.below(), above: w.above(), trusted, pieces, a0_actions }
}

impl CohomologyTable {
    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn is_trusted(&self, i: i64) -> bool {
        if i < self.lo {
            return self.below == Boundary::ExactlyZero;
        }
        if i > self.hi {
            return self.above == Boundary::ExactlyZero;
        }
        self.trusted[(i - self.lo) as usize]
    }

    /// `dim H^i`, or `None` where the window does not determine it.
    pub fn dim(&self, i: i64) -> Option<usize> {
        if !self.is_trusted(i) {
            return None;
        }
        if i < self.lo || i > self.hi {
            return Some(0);
        }
        Some(self.pieces[(i - self.lo) as usize].dim())
    }

    pub fn piece(&self, i: i64) -> Option<&Subquotient> {
        (self.lo..=self.hi).contains(&i).then(|| &self.pieces[(i - self.lo) as usize])
    }

    /// Action of the `x`-th `A⁰` basis element on `H^i`.
    pub fn action(&self, i: i64, x: usize) -> Option<&Matrix> {
        (self.lo..=self.hi).contains(&i).then(|| &self.a0_actions[(i - self.lo) as usize][x])
    }

    /// Trusted degrees inside the window.
    pub fn trusted_degrees(&self) -> Vec<i64> {
        (self.lo..=self.hi).filter(|&i| self.is_trusted(i)).collect()
    }

    /// Highest and lowest trusted degrees with nonzero cohomology.
    pub fn nonzero_range(&self) -> Option<(i64, i64)> {
        let nz: Vec<i64> = self.trusted_degrees().into_iter().filter(|&i| self.dim(i) != Some(0)).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    /// `true` when every degree is trusted and all cohomology vanishes.
    pub fn is_acyclic_everywhere(&self) -> bool {
        self.below == Boundary::ExactlyZero
            && self.above == Boundary::ExactlyZero
            && (self.lo..=self.hi).all(|i| self.is_trusted(i) && self.dim(i) == Some(0))
    }
}

/// A degree-zero map of realized modules, given on `[lo, hi]` and zero elsewhere.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: Arc<WindowedModule>,
    target: Arc<WindowedModule>,
    lo: i64,
    hi: i64,
    maps: Vec<Matrix>,
}

impl ChainMap {
    pub fn new(source: Arc<WindowedModule>, target: Arc<WindowedModule>, lo: i64, hi: i64, maps: Vec<Matrix>) -> Result<ChainMap, Error> {
        if !same_ring(source.ring(), target.ring()) {
            return Err(Error::InvalidInput("chain map between modules over different rings".into()));
        }
        if lo > hi || maps.len() != (hi - lo + 1) as usize {
            return Err(Error::DimensionMismatch("chain map components do not match the window".into()));
        }
        for (k, m) in maps.iter().enumerate() {
            let i = lo + k as i64;
            if (m.rows(), m.cols()) != (target.dim(i), source.dim(i)) {
                return Err(Error::DimensionMismatch(format!("chain map component at degree {i} has the wrong shape")));
            }
        }
        let f = ChainMap { source, target, lo, hi, maps };
        f.verify()?;
        Ok(f)
    }

    pub fn identity(w: &Arc<WindowedModule>) -> ChainMap {
        let maps = (w.lo()..=w.hi()).map(|i| Matrix::identity(w.ring().field(), w.dim(i))).collect();
        ChainMap { source: w.clone(), target: w.clone(), lo: w.lo(), hi: w.hi(), maps }
    }

    pub fn source(&self) -> &WindowedModule {
        &self.source
    }

    pub fn target(&self) -> &WindowedModule {
        &self.target
    }

    pub fn source_arc(&self) -> &Arc<WindowedModule> {
        &self.source
    }

    pub fn target_arc(&self) -> &Arc<WindowedModule> {
        &self.target
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn window(&self) -> Bounds {
        Bounds::new(self.lo, self.hi)
    }

    pub fn component(&self, i: i64) -> Matrix {
        if (self.lo..=self.hi).contains(&i) {
            self.maps[(i - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.source.ring().field(), self.target.dim(i), self.source.dim(i))
        }
    }

    /// Commutes with `d` and with every action inside the window.
    pub fn verify(&self) -> Result<(), Error> {
        let ring = self.source.ring().clone();
        for i in self.lo..=self.hi {
            if i < self.hi && self.target.differential(i).mul(&self.component(i)) != self.component(i + 1).mul(&self.source.differential(i)) {
                return Err(Error::Verification(format!("chain map does not commute with d at degree {i}")));
            }
            for a in Actor::all(&ring) {
                let t = i + a.degree(&ring);
                if t < self.lo {
                    continue;
                }
                if self.target.action(a, i).mul(&self.component(i)) != self.component(t).mul(&self.source.action(a, i)) {
                    return Err(Error::Verification(format!("chain map is not A-linear at degree {i}")));
                }
            }
        }
        Ok(())
    }

    pub fn scale(&self, c: &Scalar) -> ChainMap {
        let mut f = self.clone();
        f.maps = f.maps.iter().map(|m| m.scale(c)).collect();
        f
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap, Error> {
        if (self.lo, self.hi) != (other.lo, other.hi) {
            return Err(Error::DimensionMismatch("chain maps on different windows".into()));
        }
        let mut f = self.clone();
        f.maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.sub(b)).collect();
        Ok(f)
    }

    /// `other ∘ self` on the common window.
    pub fn then(&self, other: &ChainMap) -> Result<ChainMap, Error> {
        let (lo, hi) = (self.lo.max(other.lo), self.hi.min(other.hi));
        if lo > hi {
            return Err(Error::WindowUnderflow("chain maps have disjoint windows".into()));
        }
        let maps = (lo..=hi).map(|i| other.component(i).mul(&self.component(i))).collect();
        ChainMap::new(self.source.clone(), other.target.clone(), lo, hi, maps)
    }

    /// `H^i(φ)` where both cohomologies are trusted.
    pub fn induced(&self, hs: &CohomologyTable, ht: &CohomologyTable, i: i64) -> Option<Matrix> {
        if !(hs.is_trusted(i) && ht.is_trusted(i) && (self.lo..=self.hi).contains(&i)) {
            return None;
        }
        let field = self.source.ring().field();
        let (ps, pt) = (hs.piece(i)?, ht.piece(i)?);
        let m = self.component(i);
        let cols: Vec<Vec<Scalar>> = ps.reps.iter().map(|r| pt.reduce(&m.mul_vec(r)).expect("cycles map to cycles")).collect();
        Some(Matrix::from_columns(field, pt.dim(), &cols))
    }
}

/// Outcome of a quasi-isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QisVerdict {
    pub holds: bool,
    /// Degrees at which both cohomologies and the map were compared.
    pub checked: Vec<i64>,
    /// `true` when the checked degrees cover all possibly nonzero cohomology.
    pub complete: bool,
    pub failing: Option<i64>,
}

pub fn is_quasi_iso(f: &ChainMap) -> QisVerdict {
    let hs = cohomology(f.source());
    let ht = cohomology(f.target());
    let mut checked = Vec::new();
    let mut complete = true;
    let lo = f.source().lo().min(f.target().lo());
    let hi = f.source().hi().max(f.target().hi());
    for i in lo..=hi {
        if !(f.lo..=f.hi).contains(&i) || !hs.is_trusted(i) || !ht.is_trusted(i) {
            complete = false;
            continue;
        }
        checked.push(i);
        let m = f.induced(&hs, &ht, i).expect("trusted degree");
        let iso = m.rows() == m.cols() && m.rank() == m.rows();
        if !iso {
            return QisVerdict { holds: false, checked, complete, failing: Some(i) };
        }
    }
    let open_ends = [f.source().below(), f.source().above(), f.target().below(), f.target().above()].contains(&Boundary::Truncated);
    QisVerdict { holds: true, checked, complete: complete && !open_ends, failing: None }
}

/// Result of a nullhomotopy search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homotopy {
    /// A homotopy `h` with `D h = f`, as an element of `Hom^{-1}`.
    Null(Vec<Scalar>),
    NotNull,
}

/// A degree-zero map out of a semi-free module, given by the images of the basis.
#[derive(Clone)]
pub struct SemiFreeMap {
    source: Arc<SemiFreeModule>,
    target: Module,
    images: Vec<Vec<Scalar>>,
}

impl SemiFreeMap {
    /// `images[k]` are coordinates in `target^{|b_k|}`.
    pub fn new(source: Arc<SemiFreeModule>, target: Module, images: Vec<Vec<Scalar>>) -> Result<SemiFreeMap, Error> {
        let f = SemiFreeMap::new_unchecked(source, target, images)?;
        f.verify()?;
        Ok(f)
    }

    pub fn new_unchecked(source: Arc<SemiFreeModule>, target: Module, images: Vec<Vec<Scalar>>) -> Result<SemiFreeMap, Error> {
        if !same_ring(source.ring_arc(), target.ring()) {
            return Err(Error::InvalidInput("map between modules over different rings".into()));
        }
        if images.len() != source.rank() {
            return Err(Error::DimensionMismatch("one image per basis element is required".into()));
        }
        for (k, b) in source.basis().iter().enumerate() {
            if images[k].len() != target.dim(b.degree) {
                return Err(Error::DimensionMismatch(format!("image of {} has the wrong length", b.name)));
            }
        }
        Ok(SemiFreeMap { source, target, images })
    }

    pub fn source(&self) -> &Arc<SemiFreeModule> {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn image(&self, k: usize) -> &[Scalar] {
        &self.images[k]
    }

    /// The map as a degree-zero element of `Hom_A(P, N)`.
    pub fn as_hom_element(&self) -> Vec<Scalar> {
        self.images.concat()
    }

    pub fn from_hom_element(source: Arc<SemiFreeModule>, target: Module, v: &[Scalar]) -> Result<SemiFreeMap, Error> {
        let mut images = Vec::new();
        let mut off = 0;
        for b in source.basis() {
            let n = target.dim(b.degree);
            images.push(v[off..off + n].to_vec());
            off += n;
        }
        SemiFreeMap::new_unchecked(source, target, images)
    }

    /// Cycle condition `D f = 0` in the Hom complex, where computable.
    pub fn verify(&self) -> Result<(), Error> {
        let h = hom_complex(&self.source, &self.target)?;
        let e = h.extent();
        if !(e.computable(0) && e.computable(1)) {
            return Err(Error::WindowUnderflow("cannot check the chain map condition on the known window".into()));
        }
        if !h.differential(0).mul_vec(&self.as_hom_element()).iter().all(Scalar::is_zero) {
            return Err(Error::Verification("map does not commute with the differentials".into()));
        }
        Ok(())
    }

    /// Matrix `P^i → N^i`.
    pub fn matrix(&self, i: i64) -> Matrix {
        let piece = self.source.piece(i);
        let field = self.source.ring_arc().field();
        let cols: Vec<Vec<Scalar>> = piece
            .entries()
            .map(|(k, m)| act_monomial(self.target.inner(), m, self.source.basis()[k].degree).mul_vec(&self.images[k]))
            .collect();
        Matrix::from_columns(field, self.target.dim(i), &cols)
    }

    /// Realizes source and target on `[lo, hi]` and the map between them.
    pub fn realize(&self, lo: i64, hi: i64) -> Result<ChainMap, Error> {
        let s = Arc::new(Module::SemiFree(self.source.clone()).realize(lo, hi)?);
        let t = Arc::new(self.target.realize(lo, hi)?);
        let maps = (lo..=hi).map(|i| self.matrix(i)).collect();
        ChainMap::new(s, t, lo, hi, maps)
    }

    /// Post-composition with a chain map out of a realization of the target.
    pub fn then(&self, g: &ChainMap) -> Result<SemiFreeMap, Error> {
        let images = self
            .source
            .basis()
            .iter()
            .enumerate()
            .map(|(k, b)| {
                if !(g.lo()..=g.hi()).contains(&b.degree) {
                    return Err(Error::WindowUnderflow(format!("degree {} is outside the chain map window", b.degree)));
                }
                Ok(g.component(b.degree).mul_vec(&self.images[k]))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        SemiFreeMap::new_unchecked(self.source.clone(), Module::Windowed(g.target_arc().clone()), images)
    }

    pub fn scale(&self, c: &Scalar) -> SemiFreeMap {
        let images = self.images.iter().map(|v| v.iter().map(|x| x * c).collect()).collect();
        SemiFreeMap { source: self.source.clone(), target: self.target.clone(), images }
    }

    pub fn sub(&self, other: &SemiFreeMap) -> SemiFreeMap {
        let images = self.images.iter().zip(&other.images).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
        SemiFreeMap { source: self.source.clone(), target: self.target.clone(), images }
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|v| v.iter().all(Scalar::is_zero))
    }

    /// Solves `D h = f` in `Hom_A(P, N)`; this decides whether `f` vanishes in the derived category.
    pub fn nullhomotopy(&self) -> Result<Homotopy, Error> {
        let h = hom_complex(&self.source, &self.target)?;
        let e = h.extent();
        if !(e.computable(-1) && e.computable(0)) {
            return Err(Error::WindowUnderflow("Hom complex is not known in degrees −1 and 0".into()));
        }
        let d = h.differential(-1);
        Ok(match Solver::new(&d).solve(&self.as_hom_element()) {
            Some(x) => Homotopy::Null(x),
            None => Homotopy::NotNull,
        })
    }

    pub fn is_nullhomotopic(&self) -> Result<bool, Error> {
        Ok(matches!(self.nullhomotopy()?, Homotopy::Null(_)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;
    use crate::module::CoinducedModule;
    use crate::ring::fixtures::{gf, koszul_x3, poly_t};

    #[test]
    fn koszul_cohomology_and_dual() {
        let f = Field::Rational;
        let b = koszul_x3(&f);
        let m = Module::semifree(SemiFreeModule::ring_module(b.clone()));
        let h = cohomology(&m.realize(-1, 0).unwrap());
        assert_eq!(h.dim(0), Some(1));
        assert_eq!(h.dim(-1), Some(1));
        assert_eq!(h.dim(-2), Some(0));
        let c = Module::Coinduced(Arc::new(CoinducedModule::new(b, alloc::vec![0])));
        let hc = cohomology(&c.realize(0, 1).unwrap());
        assert_eq!((hc.dim(0), hc.dim(1)), (Some(1), Some(1)));
    }

    #[test]
    fn window_trust() {
        let a = poly_t(&gf(3));
        let w = Module::semifree(SemiFreeModule::ring_module(a)).realize(-4, 0).unwrap();
        let h = cohomology(&w);
        assert_eq!(h.dim(-4), None);
        assert_eq!(h.dim(-2), Some(1));
        assert_eq!(h.dim(3), Some(0));
        assert_eq!(h.dim(-7), None);
    }

    #[test]
    fn identity_is_quasi_iso_and_multiplication_is_not_null() {
        let f = gf(5);
        let a = poly_t(&f);
        let p = Arc::new(SemiFreeModule::ring_module(a.clone()));
        let target = Module::SemiFree(p.clone());
        let id = SemiFreeMap::new(p.clone(), target.clone(), alloc::vec![alloc::vec![f.one()]]).unwrap();
        let w = id.realize(-6, 0).unwrap();
        let v = is_quasi_iso(&w);
        assert!(v.holds);
        assert!(!v.complete);
        assert!(!id.is_nullhomotopic().unwrap());
        let zero = id.scale(&f.zero());
        assert!(zero.is_nullhomotopic().unwrap());
    }

    #[test]
    fn identity_of_acyclic_cone_is_null() {
        // Cone of the identity of A is contractible.
        let f = gf(2);
        let a = poly_t(&f);
        let p = Arc::new(SemiFreeModule::ring_module(a));
        let id = SemiFreeMap::new(p.clone(), Module::SemiFree(p.clone()), alloc::vec![alloc::vec![f.one()]]).unwrap();
        let c = Arc::new(crate::module::cone_semifree(&id).unwrap());
        let idc = SemiFreeMap::new(
            c.clone(),
            Module::SemiFree(c.clone()),
            (0..c.rank()).map(|k| c.to_vector(c.basis()[k].degree, &c.generator_element(k))).collect(),
        )
        .unwrap();
        assert!(idc.is_nullhomotopic().unwrap());
    }
}
