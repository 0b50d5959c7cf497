use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::presentation::{DgRing, RingElement};
use crate::linalg::Scalar;
use crate::Error;

/// A DG ring homomorphism, given on the `A⁰` basis and on the generators.
#[derive(Clone, Debug)]
pub struct DgRingHom {
    source: Arc<DgRing>,
    target: Arc<DgRing>,
    a0_images: Vec<RingElement>,
    gen_images: Vec<RingElement>,
}

impl DgRingHom {
    pub fn new_unchecked(
        source: Arc<DgRing>,
        target: Arc<DgRing>,
        a0_images: Vec<RingElement>,
        gen_images: Vec<RingElement>,
    ) -> DgRingHom {
        assert_eq!(a0_images.len(), source.degree_zero().dim());
        assert_eq!(gen_images.len(), source.generators().len());
        DgRingHom { source, target, a0_images, gen_images }
    }

    pub fn new(
        source: Arc<DgRing>,
        target: Arc<DgRing>,
        a0_images: Vec<RingElement>,
        gen_images: Vec<RingElement>,
    ) -> Result<DgRingHom, Error> {
        if a0_images.len() != source.degree_zero().dim() || gen_images.len() != source.generators().len() {
            return Err(Error::InvalidInput("ring homomorphism needs one image per basis element and generator".into()));
        }
        let f = DgRingHom { source, target, a0_images, gen_images };
        f.verify()?;
        Ok(f)
    }

    pub fn identity(ring: &Arc<DgRing>) -> DgRingHom {
        let a0 = (0..ring.degree_zero().dim()).map(|i| ring.a0_basis(i)).collect();
        let gens = (0..ring.generators().len()).map(|g| ring.generator(g)).collect();
        DgRingHom::new_unchecked(ring.clone(), ring.clone(), a0, gens)
    }

    pub fn source(&self) -> &Arc<DgRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DgRing> {
        &self.target
    }

    pub fn a0_image(&self, i: usize) -> &RingElement {
        &self.a0_images[i]
    }

    pub fn generator_image(&self, g: usize) -> &RingElement {
        &self.gen_images[g]
    }

    pub fn apply(&self, x: &RingElement) -> RingElement {
        let t = &self.target;
        let mut out = RingElement::zero(x.degree());
        for (m, c) in x.terms() {
            let mut img = self.a0_images[m.a0].scale(c);
            for (g, &e) in m.exps.iter().enumerate() {
                for _ in 0..e {
                    img = t.mul(&img, &self.gen_images[g]);
                }
            }
            out.add_scaled(&t.field().one(), &img);
        }
        out
    }

    /// Composite `other ∘ self`.
    pub fn then(&self, other: &DgRingHom) -> DgRingHom {
        let a0 = self.a0_images.iter().map(|x| other.apply(x)).collect();
        let gens = self.gen_images.iter().map(|x| other.apply(x)).collect();
        DgRingHom::new_unchecked(self.source.clone(), other.target.clone(), a0, gens)
    }

    /// Checks unit, multiplicativity on `A⁰`, degrees and compatibility with `d`.
    pub fn verify(&self) -> Result<(), Error> {
        let (s, t) = (&self.source, &self.target);
        if s.field() != t.field() {
            return Err(Error::Verification("ring homomorphism between different fields".into()));
        }
        let n = s.degree_zero().dim();
        if n > 0 && self.a0_images[0] != t.one() {
            return Err(Error::Verification("unit is not preserved".into()));
        }
        for x in &self.a0_images {
            if !x.is_zero() && x.degree() != 0 {
                return Err(Error::Verification("degree-zero basis image of nonzero degree".into()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = t.mul(&self.a0_images[i], &self.a0_images[j]);
                let mut rhs = RingElement::zero(0);
                for (k, c) in s.degree_zero().product_coords(i, j).iter().enumerate() {
                    rhs.add_scaled(c, &self.a0_images[k]);
                }
                if lhs != rhs {
                    return Err(Error::Verification(format!("not multiplicative on basis pair ({i}, {j})")));
                }
            }
        }
        for (g, gen) in s.generators().iter().enumerate() {
            let img = &self.gen_images[g];
            if !img.is_zero() && img.degree() != gen.degree {
                return Err(Error::Verification(format!("image of {} has the wrong degree", gen.name)));
            }
            if self.apply(s.differential_of(g)) != t.d(img) {
                return Err(Error::Verification(format!("does not commute with d on {}", gen.name)));
            }
        }
        Ok(())
    }

    /// Image of an `A⁰` vector as target `A⁰` coordinates.
    pub fn apply_a0(&self, v: &[Scalar]) -> Vec<Scalar> {
        let x = self.source.from_a0(v);
        self.target.to_a0(&self.apply(&x))
    }
}
