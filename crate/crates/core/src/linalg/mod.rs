//! Exact scalars and dense linear algebra.

mod field;
mod matrix;
pub mod poly;

use alloc::vec::Vec;

pub use field::{Field, Scalar};
pub use matrix::{axpy, is_zero_vec, scale_vec, unit_vec, zero_vec, Matrix, RankData, Solver};

/// A subquotient `Z / B` of a coordinate space, with chosen representatives for a basis of the quotient.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub ambient: usize,
    /// Basis of `B`.
    pub zeros: Vec<Vec<Scalar>>,
    /// Representatives in `Z` of a basis of `Z / B`.
    pub reps: Vec<Vec<Scalar>>,
    solver: Solver,
    nzeros: usize,
}

impl Subquotient {
    /// `sub` must lie in the span of `total`; neither needs to be independent.
    pub fn new(field: &Field, ambient: usize, total: &[Vec<Scalar>], sub: &[Vec<Scalar>]) -> Subquotient {
        let zeros = independent(ambient, sub, &[]);
        let reps = independent(ambient, total, &zeros);
        let mut all = zeros.clone();
        all.extend(reps.iter().cloned());
        let solver = Solver::new(&Matrix::from_columns(field, ambient, &all));
        Subquotient { ambient, nzeros: zeros.len(), zeros, reps, solver }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of `v` in the quotient basis, or `None` if `v` is not in `Z`.
    pub fn reduce(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        self.solver.solve(v).map(|x| x[self.nzeros..].to_vec())
    }
}

/// Greedily picks vectors of `candidates` independent modulo `base`.
pub fn independent(ambient: usize, candidates: &[Vec<Scalar>], base: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut ech = Echelon::new(ambient);
    for b in base {
        ech.insert(b);
    }
    candidates.iter().filter(|c| ech.insert(c)).cloned().collect()
}

/// Incrementally maintained echelon basis of a subspace.
#[derive(Clone, Debug)]
pub struct Echelon {
    ambient: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    pub fn new(ambient: usize) -> Echelon {
        Echelon { ambient, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if !w[*p].is_zero() {
                let c = -&w[*p];
                axpy(&mut w, &c, row);
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Adds `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().unwrap();
        let w = scale_vec(&inv, &w);
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = -&row[p];
                axpy(row, &c, &w);
            }
        }
        self.rows.push((p, w));
        true
    }
}
