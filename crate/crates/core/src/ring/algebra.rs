use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{axpy, is_zero_vec, poly, unit_vec, zero_vec, Echelon, Field, Matrix, Scalar, Solver};
use crate::Error;

/// A finite-dimensional commutative algebra given by structure constants.
/// Basis element 0 is the unit. The zero algebra has an empty basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeZeroAlgebra {
    field: Field,
    symbols: Vec<String>,
    products: Vec<Vec<Scalar>>,
}

/// A quotient `A / I`, with basis the classes of a subset of the basis of `A`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: DegreeZeroAlgebra,
    /// Indices of the basis elements of `A` whose classes form the quotient basis.
    pub kept: Vec<usize>,
    /// `dim(A/I) × dim(A)` matrix of the projection.
    pub projection: Matrix,
}

impl Quotient {
    /// The representative `Σ v_i b_{kept[i]}` of a class.
    pub fn lift(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vec(self.algebra.field(), self.projection.cols());
        for (i, &k) in self.kept.iter().enumerate() {
            out[k] = v[i].clone();
        }
        out
    }
}

/// Result of splitting an algebra into local factors.
#[derive(Clone, Debug)]
pub struct Splitting {
    /// Orthogonal primitive idempotents summing to one (as coordinate vectors).
    pub idempotents: Vec<Vec<Scalar>>,
    /// Whether every factor was certified local.
    pub complete: bool,
}

impl DegreeZeroAlgebra {
    /// `table[i][j]` holds the coordinates of `b_i · b_j`.
    pub fn new(field: &Field, symbols: Vec<String>, table: Vec<Vec<Vec<Scalar>>>) -> Result<Self, Error> {
        let n = symbols.len();
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::DimensionMismatch("structure constant table has the wrong shape".into()));
        }
        if table.iter().flatten().flatten().any(|x| x.field() != *field) {
            return Err(Error::InvalidInput("structure constants from a different field".into()));
        }
        let products = table.into_iter().flatten().collect();
        Ok(DegreeZeroAlgebra { field: field.clone(), symbols, products })
    }

    /// The base field itself.
    pub fn base(field: &Field) -> Self {
        DegreeZeroAlgebra { field: field.clone(), symbols: vec!["1".into()], products: vec![vec![field.one()]] }
    }

    pub fn zero(field: &Field) -> Self {
        DegreeZeroAlgebra { field: field.clone(), symbols: Vec::new(), products: Vec::new() }
    }

    /// `K[var]/(f)` for a polynomial `f` (constant term first) of positive degree.
    pub fn quotient_univariate(field: &Field, var: &str, modulus: &[Scalar]) -> Result<Self, Error> {
        let f = poly::monic(poly::trim(modulus.to_vec()));
        let n = match poly::degree(&f) {
            Some(d) if d > 0 => d,
            _ => return Err(Error::InvalidInput("modulus must have positive degree".into())),
        };
        let symbols = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            })
            .collect();
        let mut table = vec![vec![zero_vec(field, n); n]; n];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut p = zero_vec(field, i + j + 1);
                p[i + j] = field.one();
                let (_, r) = poly::divrem(&p, &f, field);
                for (k, c) in r.into_iter().enumerate() {
                    cell[k] = c;
                }
            }
        }
        Self::new(field, symbols, table)
    }

    /// `K[x]/(x^n)`.
    pub fn truncated(field: &Field, var: &str, n: usize) -> Result<Self, Error> {
        let mut f = zero_vec(field, n + 1);
        f[n] = field.one();
        Self::quotient_univariate(field, var, &f)
    }

    /// `K[vars]/(monomials)`; the monomial ideal must contain a pure power of every variable.
    pub fn monomial_quotient(field: &Field, vars: &[&str], ideal: &[Vec<u32>]) -> Result<Self, Error> {
        let in_ideal = |e: &[u32]| ideal.iter().any(|g| g.iter().zip(e).all(|(a, b)| a <= b));
        let mut bounds = Vec::new();
        for v in 0..vars.len() {
            let pure = ideal
                .iter()
                .filter(|g| g.iter().enumerate().all(|(w, &k)| w == v || k == 0))
                .map(|g| g[v])
                .min();
            bounds.push(pure.ok_or_else(|| Error::InvalidInput(format!("no pure power of {} in the ideal", vars[v])))?);
        }
        let mut monos: Vec<Vec<u32>> = vec![Vec::new()];
        for &b in &bounds {
            monos = monos.into_iter().flat_map(|m| (0..b).map(move |k| [m.clone(), vec![k]].concat())).collect();
        }
        monos.retain(|m| !in_ideal(m));
        monos.sort_by_key(|m| (m.iter().sum::<u32>(), core::cmp::Reverse(m.clone())));
        let n = monos.len();
        let symbols = monos
            .iter()
            .map(|m| {
                let parts: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(v, &k)| if k == 1 { vars[v].to_string() } else { format!("{}^{}", vars[v], k) })
                    .collect();
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("")
                }
            })
            .collect();
        let mut table = vec![vec![zero_vec(field, n); n]; n];
        for i in 0..n {
            for j in 0..n {
                let e: Vec<u32> = monos[i].iter().zip(&monos[j]).map(|(a, b)| a + b).collect();
                if let Some(k) = monos.iter().position(|m| *m == e) {
                    table[i][j][k] = field.one();
                }
            }
        }
        Self::new(field, symbols, table)
    }

    /// Direct product; the unit is the sum of the factor units, so it is placed first by a change of basis:
    /// basis `1, e_2, …` where the first factor's unit is replaced by the global unit.
    pub fn product(field: &Field, factors: &[DegreeZeroAlgebra]) -> Result<Self, Error> {
        let dims: Vec<usize> = factors.iter().map(|f| f.dim()).collect();
        let n: usize = dims.iter().sum();
        if n == 0 {
            return Ok(Self::zero(field));
        }
        // Naive block basis first.
        let mut offs = Vec::new();
        let mut o = 0;
        for d in &dims {
            offs.push(o);
            o += d;
        }
        let mut naive = vec![vec![zero_vec(field, n); n]; n];
        let mut names = Vec::new();
        for (f, fac) in factors.iter().enumerate() {
            for i in 0..fac.dim() {
                names.push(format!("{}_{}", fac.symbols[i], f + 1));
                for j in 0..fac.dim() {
                    for (k, c) in fac.product_coords(i, j).iter().enumerate() {
                        naive[offs[f] + i][offs[f] + j][offs[f] + k] = c.clone();
                    }
                }
            }
        }
        // New basis: global unit, then every naive basis vector except the first nonempty factor's unit.
        let first = factors.iter().position(|f| f.dim() > 0).unwrap();
        let mut unit = zero_vec(field, n);
        for (f, fac) in factors.iter().enumerate() {
            if fac.dim() > 0 {
                unit[offs[f]] = field.one();
            }
        }
        let mut basis = vec![unit];
        let mut symbols = vec!["1".to_string()];
        for (k, name) in names.iter().enumerate().take(n) {
            if k != offs[first] {
                basis.push(unit_vec(field, n, k));
                symbols.push(name.clone());
            }
        }
        let to_naive = Matrix::from_columns(field, n, &basis);
        let from_naive = to_naive.inverse().unwrap();
        let naive_mul = |x: &[Scalar], y: &[Scalar]| {
            let mut out = zero_vec(field, n);
            for (i, a) in x.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in y.iter().enumerate() {
                    if !b.is_zero() {
                        axpy(&mut out, &(a * b), &naive[i][j]);
                    }
                }
            }
            out
        };
        let mut table = vec![vec![zero_vec(field, n); n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = from_naive.mul_vec(&naive_mul(&basis[i], &basis[j]));
            }
        }
        Self::new(field, symbols, table)
    }

    /// `A ⊗_K B` with basis pairs `(i, j)` at index `i · dim B + j`.
    pub fn tensor(a: &Self, b: &Self) -> Result<Self, Error> {
        if a.field != b.field {
            return Err(Error::InvalidInput("tensor of algebras over different fields".into()));
        }
        let field = &a.field;
        let (na, nb) = (a.dim(), b.dim());
        let n = na * nb;
        let mut symbols = Vec::with_capacity(n);
        for i in 0..na {
            for j in 0..nb {
                symbols.push(match (i, j) {
                    (0, 0) => "1".to_string(),
                    (_, 0) => format!("{}:1", a.symbols[i]),
                    (0, _) => format!("1:{}", b.symbols[j]),
                    _ => format!("{}:{}", a.symbols[i], b.symbols[j]),
                });
            }
        }
        let mut table = vec![vec![zero_vec(field, n); n]; n];
        for i1 in 0..na {
            for j1 in 0..nb {
                for i2 in 0..na {
                    for j2 in 0..nb {
                        let pa = a.product_coords(i1, i2);
                        let pb = b.product_coords(j1, j2);
                        let cell = &mut table[i1 * nb + j1][i2 * nb + j2];
                        for (k, x) in pa.iter().enumerate() {
                            if x.is_zero() {
                                continue;
                            }
                            for (l, y) in pb.iter().enumerate() {
                                if !y.is_zero() {
                                    cell[k * nb + l] = x * y;
                                }
                            }
                        }
                    }
                }
            }
        }
        Self::new(field, symbols, table)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol_index(&self, s: &str) -> Option<usize> {
        self.symbols.iter().position(|x| x == s)
    }

    pub fn product_coords(&self, i: usize, j: usize) -> &[Scalar] {
        &self.products[i * self.dim() + j]
    }

    pub fn unit(&self) -> Vec<Scalar> {
        if self.dim() == 0 {
            Vec::new()
        } else {
            unit_vec(&self.field, self.dim(), 0)
        }
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        unit_vec(&self.field, self.dim(), i)
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vec(&self.field, self.dim());
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    axpy(&mut out, &(a * b), self.product_coords(i, j));
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &[Scalar], mut e: u64) -> Vec<Scalar> {
        let mut acc = self.unit();
        let mut b = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Matrix of `y ↦ x·y`.
    pub fn mult_matrix(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| self.mul(x, &self.basis_vec(j))).collect();
        Matrix::from_columns(&self.field, n, &cols)
    }

    pub fn inverse(&self, x: &[Scalar]) -> Option<Vec<Scalar>> {
        self.mult_matrix(x).solve(&self.unit()).ok().flatten()
    }

    pub fn is_unit(&self, x: &[Scalar]) -> bool {
        self.inverse(x).is_some()
    }

    /// Checks unitality, commutativity and associativity on basis elements.
    pub fn verify(&self) -> Result<(), String> {
        let n = self.dim();
        for i in 0..n {
            if self.product_coords(0, i) != self.basis_vec(i).as_slice() {
                return Err(format!("1 * {} is not {}", self.symbols[i], self.symbols[i]));
            }
            for j in 0..n {
                if self.product_coords(i, j) != self.product_coords(j, i) {
                    return Err(format!("{} * {} is not commutative", self.symbols[i], self.symbols[j]));
                }
                for k in 0..n {
                    let l = self.mul(self.product_coords(i, j), &self.basis_vec(k));
                    let r = self.mul(&self.basis_vec(i), self.product_coords(j, k));
                    if l != r {
                        return Err(format!(
                            "({} * {}) * {} differs from {} * ({} * {})",
                            self.symbols[i], self.symbols[j], self.symbols[k], self.symbols[i], self.symbols[j], self.symbols[k]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Span of `I·g` for the given generators.
    pub fn ideal_span(&self, gens: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
        let mut ech = Echelon::new(self.dim());
        let mut out = Vec::new();
        for g in gens {
            for j in 0..self.dim() {
                let v = self.mul(g, &self.basis_vec(j));
                if ech.insert(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Quotient by an ideal given as a spanning set of vectors (which must span an ideal).
    pub fn quotient(&self, ideal: &[Vec<Scalar>]) -> Quotient {
        let n = self.dim();
        let field = &self.field;
        let mut ech = Echelon::new(n);
        let mut ideal_basis = Vec::new();
        for v in ideal {
            if ech.insert(v) {
                ideal_basis.push(v.clone());
            }
        }
        let mut kept = Vec::new();
        for i in 0..n {
            if ech.insert(&self.basis_vec(i)) {
                kept.push(i);
            }
        }
        let m = kept.len();
        let mut cols: Vec<Vec<Scalar>> = kept.iter().map(|&i| self.basis_vec(i)).collect();
        cols.extend(ideal_basis.iter().cloned());
        let solver = Solver::new(&Matrix::from_columns(field, n, &cols));
        let coords = |v: &[Scalar]| -> Vec<Scalar> { solver.solve(v).expect("quotient basis spans")[..m].to_vec() };
        let proj_cols: Vec<Vec<Scalar>> = (0..n).map(|j| coords(&self.basis_vec(j))).collect();
        let projection = Matrix::from_columns(field, m, &proj_cols);
        let mut table = vec![vec![zero_vec(field, m); m]; m];
        for (a, &i) in kept.iter().enumerate() {
            for (b, &j) in kept.iter().enumerate() {
                table[a][b] = projection.mul_vec(self.product_coords(i, j));
            }
        }
        let symbols = kept.iter().map(|&i| self.symbols[i].clone()).collect();
        let algebra = DegreeZeroAlgebra { field: field.clone(), symbols, products: table.into_iter().flatten().collect() };
        Quotient { algebra, kept, projection }
    }

    /// Basis of the nilradical.
    pub fn radical(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        match &self.field {
            Field::Prime(p) => {
                let cols: Vec<Vec<Scalar>> = (0..n).map(|i| self.pow(&self.basis_vec(i), *p as u64)).collect();
                Matrix::from_columns(&self.field, n, &cols).stable_kernel().unwrap()
            }
            Field::Rational => {
                let mut form = Matrix::zeros(&self.field, n, n);
                for i in 0..n {
                    for j in 0..n {
                        let tr = trace(&self.mult_matrix(self.product_coords(i, j)));
                        form.set(i, j, tr);
                    }
                }
                form.kernel()
            }
        }
    }

    /// Minimal polynomial of `x` (monic, constant term first).
    pub fn min_poly(&self, x: &[Scalar]) -> poly::Poly {
        let field = &self.field;
        let n = self.dim();
        if n == 0 {
            return vec![field.one()];
        }
        let mut powers = vec![self.unit()];
        loop {
            let next = self.mul(powers.last().unwrap(), x);
            let sol = Matrix::from_columns(field, n, &powers).solve(&next).unwrap();
            if let Some(c) = sol {
                let mut p: Vec<Scalar> = c.iter().map(|a| -a).collect();
                p.push(field.one());
                return p;
            }
            powers.push(next);
        }
    }

    /// Orthogonal primitive idempotents summing to one.
    pub fn primitive_idempotents(&self) -> Splitting {
        let field = &self.field;
        if self.dim() == 0 {
            return Splitting { idempotents: Vec::new(), complete: true };
        }
        let q = self.quotient(&self.radical());
        let s = &q.algebra;
        let ns = s.dim();
        // Splitting elements of the semisimple quotient.
        let probes: Vec<Vec<Scalar>> = match field {
            Field::Prime(p) => {
                let cols: Vec<Vec<Scalar>> = (0..ns).map(|i| s.pow(&s.basis_vec(i), *p as u64)).collect();
                let frob = Matrix::from_columns(field, ns, &cols).sub(&Matrix::identity(field, ns));
                frob.kernel()
            }
            Field::Rational => (0..ns).map(|i| s.basis_vec(i)).collect(),
        };
        let mut pieces = vec![s.unit()];
        for y in &probes {
            let mut next = Vec::new();
            for e in &pieces {
                next.extend(s.split_piece(e, y));
            }
            pieces = next;
        }
        let complete = pieces.iter().all(|e| s.piece_is_field(e));
        let idempotents = pieces.iter().map(|e| self.lift_idempotent(&lift_coords(field, self.dim(), &q.kept, e))).collect();
        Splitting { idempotents, complete }
    }

    /// Splits the idempotent `e` of a reduced algebra along the rational eigenvalues of `e·y`.
    fn split_piece(&self, e: &[Scalar], y: &[Scalar]) -> Vec<Vec<Scalar>> {
        let field = &self.field;
        let ey = self.mul(e, y);
        let m = self.min_poly_relative(e, &ey);
        let Some(roots) = poly::roots(&m, field) else {
            return vec![e.to_vec()];
        };
        let mut out = Vec::new();
        let mut rest = e.to_vec();
        for lam in &roots {
            // m = (x - λ)·q, idempotent q(y)/q(λ) inside eA.
            let (qp, _) = poly::divrem(&m, &[-lam, field.one()], field);
            let qy = self.eval_relative(e, &ey, &qp);
            let inv = poly::eval(&qp, lam).inv().unwrap();
            let f: Vec<Scalar> = qy.iter().map(|c| c * &inv).collect();
            if !is_zero_vec(&f) {
                rest = rest.iter().zip(&f).map(|(a, b)| a - b).collect();
                out.push(f);
            }
        }
        if !is_zero_vec(&rest) {
            out.push(rest);
        }
        out
    }

    /// Minimal polynomial of `x ∈ eA` over the unital algebra `eA`.
    fn min_poly_relative(&self, e: &[Scalar], x: &[Scalar]) -> poly::Poly {
        let field = &self.field;
        let n = self.dim();
        let mut powers = vec![e.to_vec()];
        loop {
            let next = self.mul(powers.last().unwrap(), x);
            if let Some(c) = Matrix::from_columns(field, n, &powers).solve(&next).unwrap() {
                let mut p: Vec<Scalar> = c.iter().map(|a| -a).collect();
                p.push(field.one());
                return p;
            }
            powers.push(next);
        }
    }

    fn eval_relative(&self, e: &[Scalar], x: &[Scalar], p: &[Scalar]) -> Vec<Scalar> {
        let mut acc = zero_vec(&self.field, self.dim());
        for c in p.iter().rev() {
            acc = self.mul(&acc, x);
            axpy(&mut acc, c, e);
        }
        acc
    }

    /// Whether `eA` (for `A` reduced) is a field: some element generates it with an irreducible minimal polynomial.
    fn piece_is_field(&self, e: &[Scalar]) -> bool {
        let n = self.dim();
        let d = self.mult_matrix(e).rank();
        if d <= 1 {
            return true;
        }
        let field = &self.field;
        for j in 0..n {
            let y = self.mul(e, &self.basis_vec(j));
            let m = self.min_poly_relative(e, &y);
            if poly::degree(&m) == Some(d) {
                match field {
                    Field::Prime(_) => return true,
                    Field::Rational => {
                        if d <= 3 && poly::roots(&m, field).is_some_and(|r| r.is_empty()) {
                            return true;
                        }
                    }
                }
            }
        }
        // Over a prime field the Frobenius probes already separate all factors.
        matches!(field, Field::Prime(_))
    }

    /// Newton iteration `e ↦ 3e² − 2e³`, converging to the idempotent lifting the class of `e` modulo the radical.
    pub fn lift_idempotent(&self, e: &[Scalar]) -> Vec<Scalar> {
        let field = &self.field;
        let (three, two) = (field.int(3), field.int(2));
        let mut e = e.to_vec();
        for _ in 0..64 {
            let e2 = self.mul(&e, &e);
            if e2 == e {
                return e;
            }
            let e3 = self.mul(&e2, &e);
            e = e2.iter().zip(&e3).map(|(a, b)| &(&three * a) - &(&two * b)).collect();
        }
        panic!("idempotent lifting did not converge");
    }
}

fn lift_coords(field: &Field, n: usize, kept: &[usize], v: &[Scalar]) -> Vec<Scalar> {
    let mut out = zero_vec(field, n);
    for (a, &i) in kept.iter().enumerate() {
        out[i] = v[a].clone();
    }
    out
}

pub(crate) fn trace(m: &Matrix) -> Scalar {
    let mut t = m.field().zero();
    for i in 0..m.rows().min(m.cols()) {
        t += m.get(i, i);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn x2_minus_x(f: &Field) -> DegreeZeroAlgebra {
        DegreeZeroAlgebra::quotient_univariate(f, "x", &[f.zero(), f.int(-1), f.one()]).unwrap()
    }

    #[test]
    fn univariate_quotient_is_valid() {
        let f = gf(5);
        let a = DegreeZeroAlgebra::truncated(&f, "x", 3).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.symbols(), &["1", "x", "x^2"]);
        a.verify().unwrap();
        let x = a.basis_vec(1);
        assert!(is_zero_vec(&a.pow(&x, 3)));
    }

    #[test]
    fn monomial_quotient_basis() {
        let q = Field::Rational;
        let a = DegreeZeroAlgebra::monomial_quotient(&q, &["x", "y"], &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap();
        assert_eq!(a.symbols(), &["1", "x", "y"]);
        a.verify().unwrap();
        assert_eq!(a.radical().len(), 2);
    }

    #[test]
    fn verify_detects_noncommutative_table() {
        let q = Field::Rational;
        let mut t = vec![vec![zero_vec(&q, 2); 2]; 2];
        t[0][0] = unit_vec(&q, 2, 0);
        t[0][1] = unit_vec(&q, 2, 1);
        t[1][0] = unit_vec(&q, 2, 0);
        let a = DegreeZeroAlgebra::new(&q, vec!["1".into(), "y".into()], t).unwrap();
        assert!(a.verify().is_err());
    }

    #[test]
    fn splits_x2_minus_x() {
        for f in [gf(2), gf(5), Field::Rational] {
            let a = x2_minus_x(&f);
            let s = a.primitive_idempotents();
            assert!(s.complete);
            assert_eq!(s.idempotents.len(), 2);
            let sum: Vec<Scalar> = s.idempotents[0].iter().zip(&s.idempotents[1]).map(|(x, y)| x + y).collect();
            assert_eq!(sum, a.unit());
        }
    }

    #[test]
    fn splits_x3_minus_x_into_three() {
        let f = gf(5);
        let a = DegreeZeroAlgebra::quotient_univariate(&f, "x", &[f.zero(), f.int(-1), f.zero(), f.one()]).unwrap();
        let s = a.primitive_idempotents();
        assert_eq!(s.idempotents.len(), 3);
        for (i, e) in s.idempotents.iter().enumerate() {
            assert_eq!(&a.mul(e, e), e);
            for (j, g) in s.idempotents.iter().enumerate() {
                if i != j {
                    assert!(is_zero_vec(&a.mul(e, g)));
                }
            }
        }
    }

    #[test]
    fn lifts_through_nilpotents() {
        // K[x]/(x^2 (x-1)) = K[x]/(x^2) × K
        let q = Field::Rational;
        let a = DegreeZeroAlgebra::quotient_univariate(&q, "x", &[q.zero(), q.zero(), q.int(-1), q.one()]).unwrap();
        let s = a.primitive_idempotents();
        assert!(s.complete);
        assert_eq!(s.idempotents.len(), 2);
        let ranks: Vec<usize> = s.idempotents.iter().map(|e| a.mult_matrix(e).rank()).collect();
        let mut sorted = ranks.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2]);
    }

    #[test]
    fn field_extension_stays_whole() {
        // GF(2)[x]/(x^2+x+1) is GF(4); Q[x]/(x^2+1) is Q(i).
        let f = gf(2);
        let a = DegreeZeroAlgebra::quotient_univariate(&f, "x", &[f.one(), f.one(), f.one()]).unwrap();
        let s = a.primitive_idempotents();
        assert_eq!(s.idempotents.len(), 1);
        assert!(s.complete);
        let q = Field::Rational;
        let b = DegreeZeroAlgebra::quotient_univariate(&q, "x", &[q.one(), q.zero(), q.one()]).unwrap();
        let s = b.primitive_idempotents();
        assert_eq!(s.idempotents.len(), 1);
        assert!(s.complete);
    }

    #[test]
    fn product_and_tensor_dimensions() {
        let q = Field::Rational;
        let k = DegreeZeroAlgebra::base(&q);
        let p = DegreeZeroAlgebra::product(&q, &[k.clone(), k.clone(), k.clone()]).unwrap();
        p.verify().unwrap();
        assert_eq!(p.primitive_idempotents().idempotents.len(), 3);
        let t = DegreeZeroAlgebra::truncated(&q, "x", 3).unwrap();
        let tt = DegreeZeroAlgebra::tensor(&t, &t).unwrap();
        assert_eq!(tt.dim(), 9);
        tt.verify().unwrap();
    }

    #[test]
    fn quotient_by_everything_is_zero() {
        let q = Field::Rational;
        let t = DegreeZeroAlgebra::truncated(&q, "x", 2).unwrap();
        let z = t.quotient(&t.ideal_span(&[t.unit()]));
        assert_eq!(z.algebra.dim(), 0);
        let r = t.quotient(&t.radical());
        assert_eq!(r.algebra.dim(), 1);
        assert_eq!(r.kept, vec![0]);
    }
}
