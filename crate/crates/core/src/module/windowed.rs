use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{Actor, Bounds, DgModule, Extent};
use crate::linalg::Matrix;
use crate::ring::DgRing;
use crate::Error;

/// What lies beyond one end of a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// The module vanishes there.
    ExactlyZero,
    /// Unknown; the window was cut.
    Truncated,
}

/// Explicit matrices for the degrees `lo..=hi`.
#[derive(Clone, Debug)]
pub struct WindowedModule {
    ring: Arc<DgRing>,
    lo: i64,
    hi: i64,
    below: Boundary,
    above: Boundary,
    dims: Vec<usize>,
    /// `d^i` for `i` in the window; the last one maps to the zero space.
    diffs: Vec<Matrix>,
    /// `[actor][i − lo]`; matrices leaving the window map to the zero space.
    actions: Vec<Vec<Matrix>>,
}

impl WindowedModule {
    /// Builds from explicit data and checks all relations. `diffs[i − lo]` is `d^i` and
    /// `actions[actor][i − lo]` the action on `M^i`; entries leaving the window are ignored.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ring: Arc<DgRing>,
        lo: i64,
        hi: i64,
        dims: Vec<usize>,
        diffs: Vec<Matrix>,
        actions: Vec<Vec<Matrix>>,
        below: Boundary,
        above: Boundary,
    ) -> Result<WindowedModule, Error> {
        let n = (hi - lo + 1) as usize;
        let nact = Actor::all(&ring).len();
        if lo > hi || dims.len() != n || diffs.len() != n || actions.len() != nact || actions.iter().any(|a| a.len() != n) {
            return Err(Error::DimensionMismatch("windowed module data does not match its window".into()));
        }
        let mut w = WindowedModule { ring, lo, hi, below, above, dims, diffs, actions };
        w.normalize_shapes()?;
        super::verify_module(&w, lo, hi).map_err(Error::Verification)?;
        Ok(w)
    }

    fn normalize_shapes(&mut self) -> Result<(), Error> {
        let field = self.ring.field().clone();
        for i in self.lo..=self.hi {
            let k = (i - self.lo) as usize;
            let (r, c) = (self.dim(i + 1), self.dims[k]);
            if i == self.hi {
                self.diffs[k] = Matrix::zeros(&field, r, c);
            } else if (self.diffs[k].rows(), self.diffs[k].cols()) != (r, c) {
                return Err(Error::DimensionMismatch(format!("differential at degree {i} has the wrong shape")));
            }
            for a in Actor::all(&self.ring) {
                let t = i + a.degree(&self.ring);
                let m = &mut self.actions[a.index(&self.ring)][k];
                if t < self.lo {
                    *m = Matrix::zeros(&field, 0, c);
                } else if (m.rows(), m.cols()) != (self.dim(t), c) {
                    return Err(Error::DimensionMismatch(format!("action at degree {i} has the wrong shape")));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn from_module(m: &dyn DgModule, lo: i64, hi: i64) -> Result<WindowedModule, Error> {
        let ring = m.ring().clone();
        let ext = m.extent();
        let below = if ext.support.is_empty() || ext.support.lo.is_some_and(|s| s >= lo) { Boundary::ExactlyZero } else { Boundary::Truncated };
        let above = if ext.support.is_empty() || ext.support.hi.is_some_and(|s| s <= hi) { Boundary::ExactlyZero } else { Boundary::Truncated };
        let dims: Vec<usize> = (lo..=hi).map(|i| m.dim(i)).collect();
        let field = ring.field().clone();
        let diffs = (lo..=hi)
            .map(|i| if i < hi { m.differential(i) } else { Matrix::zeros(&field, 0, dims[(i - lo) as usize]) })
            .collect();
        let actions = Actor::all(&ring)
            .into_iter()
            .map(|a| {
                (lo..=hi)
                    .map(|i| {
                        if i + a.degree(&ring) < lo {
                            Matrix::zeros(&field, 0, dims[(i - lo) as usize])
                        } else {
                            m.action(a, i)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(WindowedModule { ring, lo, hi, below, above, dims, diffs, actions })
    }

    /// A module concentrated in one degree on which the generators act by zero.
    /// `a0_actions[b]` is the action of the `b`-th `A⁰` basis element.
    pub fn concentrated(ring: Arc<DgRing>, degree: i64, a0_actions: Vec<Matrix>) -> Result<WindowedModule, Error> {
        let n = a0_actions.first().map_or(0, Matrix::cols);
        let field = ring.field().clone();
        let mut actions: Vec<Vec<Matrix>> = a0_actions.into_iter().map(|m| alloc::vec![m]).collect();
        for _ in ring.generators() {
            actions.push(alloc::vec![Matrix::zeros(&field, 0, n)]);
        }
        WindowedModule::new(
            ring,
            degree,
            degree,
            alloc::vec![n],
            alloc::vec![Matrix::zeros(&field, 0, n)],
            actions,
            Boundary::ExactlyZero,
            Boundary::ExactlyZero,
        )
    }

    pub(crate) fn set_boundaries(&mut self, below: Boundary, above: Boundary) {
        self.below = below;
        self.above = above;
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn below(&self) -> Boundary {
        self.below
    }

    pub fn above(&self) -> Boundary {
        self.above
    }

    pub fn in_window(&self, i: i64) -> bool {
        (self.lo..=self.hi).contains(&i)
    }

    /// The sub-window `[lo, hi] ∩ [self.lo, self.hi]`.
    pub fn restrict_window(&self, lo: i64, hi: i64) -> Result<WindowedModule, Error> {
        let (l, h) = (lo.max(self.lo), hi.min(self.hi));
        if l > h {
            return Err(Error::InvalidInput("empty window".into()));
        }
        let mut w = WindowedModule::from_module(self, l, h)?;
        if l > self.lo {
            w.below = Boundary::Truncated;
        } else {
            w.below = self.below;
        }
        if h < self.hi {
            w.above = Boundary::Truncated;
        } else {
            w.above = self.above;
        }
        Ok(w)
    }
}

impl DgModule for WindowedModule {
    fn ring(&self) -> &Arc<DgRing> {
        &self.ring
    }

    fn extent(&self) -> Extent {
        let support = Bounds {
            lo: (self.below == Boundary::ExactlyZero).then_some(self.lo),
            hi: (self.above == Boundary::ExactlyZero).then_some(self.hi),
        };
        Extent { support, known: Bounds::new(self.lo, self.hi) }
    }

    fn dim(&self, i: i64) -> usize {
        if self.in_window(i) {
            self.dims[(i - self.lo) as usize]
        } else {
            0
        }
    }

    fn differential(&self, i: i64) -> Matrix {
        if self.in_window(i) && i < self.hi {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.ring.field(), self.dim(i + 1), self.dim(i))
        }
    }

    fn action(&self, actor: Actor, i: i64) -> Matrix {
        let t = i + actor.degree(&self.ring);
        if self.in_window(i) && self.in_window(t) {
            self.actions[actor.index(&self.ring)][(i - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.ring.field(), self.dim(t), self.dim(i))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{Module, SemiFreeModule};
    use crate::ring::fixtures::{gf, poly_t};

    #[test]
    fn realize_polynomial_ring() {
        let a = poly_t(&gf(7));
        let m = Module::semifree(SemiFreeModule::ring_module(a));
        let w = m.realize(-4, 0).unwrap();
        let dims: Vec<usize> = (-4..=0).map(|i| w.dim(i)).collect();
        assert_eq!(dims, alloc::vec![1, 0, 1, 0, 1]);
        assert_eq!(w.below(), Boundary::Truncated);
        assert_eq!(w.above(), Boundary::ExactlyZero);
        assert!(w.extent().computable(3));
        assert!(!w.extent().computable(-5));
    }

    #[test]
    fn residue_field_as_concentrated_module() {
        let f = gf(3);
        let a = poly_t(&f);
        let k = WindowedModule::concentrated(a.clone(), 0, alloc::vec![Matrix::identity(&f, 1)]).unwrap();
        assert_eq!(k.dim(0), 1);
        assert_eq!(k.extent().support, Bounds::new(0, 0));
        let bad = WindowedModule::concentrated(a, 0, alloc::vec![Matrix::zeros(&f, 1, 1)]);
        assert!(bad.is_err());
    }
}
