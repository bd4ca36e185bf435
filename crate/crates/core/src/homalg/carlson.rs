//! Kernel modules `L_ζ` of cohomology classes.

use crate::error::{Error, Result};
use crate::exactalg::{EchelonSpan, Elem, Matrix};
use crate::homalg::products::CohomologyClass;
use crate::lattices::{EquivariantMapBuilder, Lattice};

/// `L_ζ = ker(Ω^n k → k)`, where the map is the chain-level representative
/// of `ζ ∈ H^n(G; k)` and `Ω^n k = im(d_n) ⊆ P_{n-1}`.
///
/// Only offered over fields: over a minimal resolution nonzero cocycles are
/// exactly the nonzero classes.
pub fn carlson_module(zeta: &CohomologyClass) -> Result<Lattice> {
    let res = zeta.resolution();
    let ring = res.ring();
    if !ring.is_field() || ring.characteristic() == 0 {
        return Err(Error::UnsupportedRing("kernel modules are built over finite fields".into()));
    }
    let n = zeta.degree();
    if n == 0 {
        return Err(Error::InvalidLattice("kernel modules need a class of positive degree".into()));
    }
    if zeta.is_zero_cochain() || zeta.is_coboundary().unwrap_or(false) {
        return Err(Error::ZeroClass);
    }
    let order = res.group().order();
    let d = res.unrolled(n);
    // Independent columns of d_n give a basis of Ω^n; ζ̂ on the column of
    // g·e_i is ζ_i.
    let mut span = EchelonSpan::new(ring, d.rows());
    let mut basis = Vec::new();
    let mut values: Vec<Elem> = Vec::new();
    for c in 0..d.cols() {
        let v = d.col(c);
        if span.insert(v.clone()) {
            basis.push(v);
            values.push(zeta.cocycle()[c / order]);
        }
    }
    let dim = basis.len();
    let pivot = values
        .iter()
        .position(|x| !ring.is_zero(x))
        .ok_or(Error::ZeroClass)?;
    let inv = ring.inv(&values[pivot]).expect("field element");
    let mut kernel_cols = Vec::with_capacity(dim - 1);
    for t in 0..dim {
        if t == pivot {
            continue;
        }
        // basis_t - (ζ̂_t / ζ̂_pivot) basis_pivot
        let c = ring.mul(&values[t], &inv);
        let v: Vec<Elem> = basis[t].iter().zip(&basis[pivot]).map(|(a, b)| ring.sub(a, &ring.mul(&c, b))).collect();
        kernel_cols.push(v);
    }
    let ambient = res.term_lattice(n - 1);
    let m = Matrix::from_columns(ring, d.rows(), &kernel_cols);
    EquivariantMapBuilder::sublattice(&ambient, &m)
}

/// `Ω^n k` as a lattice (image of `d_n`).
pub fn syzygy_of_trivial(res: &crate::homalg::Resolution, n: usize) -> Result<Lattice> {
    if n == 0 {
        return Ok(Lattice::trivial(res.group(), res.ring()));
    }
    if n > res.cap() {
        return Err(Error::CapExceeded { requested: n as i64, cap: res.cap() });
    }
    let ring = res.ring();
    if !ring.is_field() {
        // Over a PID the kernel of d_{n-1} is saturated and equals the image.
        let k = res.kernel(n - 1)?;
        return EquivariantMapBuilder::sublattice(&res.term_lattice(n - 1), &k);
    }
    let d = res.unrolled(n);
    let mut span = EchelonSpan::new(ring, d.rows());
    let mut basis = Vec::new();
    for c in 0..d.cols() {
        let v = d.col(c);
        if span.insert(v.clone()) {
            basis.push(v);
        }
    }
    let m = Matrix::from_columns(ring, d.rows(), &basis);
    EquivariantMapBuilder::sublattice(&res.term_lattice(n - 1), &m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::CoeffRing;
    use crate::groups::FiniteGroup;
    use crate::homalg::{cohomology, Resolution, Strategy};
    use std::sync::Arc;

    #[test]
    fn degree_one_kernel_modules_of_v4() {
        let f = CoeffRing::PrimeField(2);
        let g = Arc::new(FiniteGroup::builtin("V4").unwrap());
        let res = Arc::new(Resolution::build(&g, f, 4, Strategy::Minimal).unwrap());
        let h1 = cohomology(&res, &Lattice::trivial(&g, f), 1).unwrap();
        for k in 0..2 {
            let zeta = CohomologyClass::new(&res, 1, h1.generator(k)).unwrap();
            let l = carlson_module(&zeta).unwrap();
            // Ω¹k has dimension 3; L_ζ is a 2-dimensional module.
            assert_eq!(l.rank(), 2);
        }
        let zero = CohomologyClass::zero(&res, 1).unwrap();
        assert!(matches!(carlson_module(&zero), Err(Error::ZeroClass)));
    }

    #[test]
    fn syzygy_dimensions() {
        let f = CoeffRing::PrimeField(2);
        let g = Arc::new(FiniteGroup::builtin("V4").unwrap());
        let res = Resolution::build(&g, f, 4, Strategy::Minimal).unwrap();
        // dim Ω^n k = 2n + 1 for the Klein four group.
        for n in 1..4 {
            assert_eq!(syzygy_of_trivial(&res, n).unwrap().rank(), 2 * n + 1);
        }
        let z = CoeffRing::Integers;
        let c2 = Arc::new(FiniteGroup::builtin("C2").unwrap());
        let res = Resolution::build(&c2, z, 3, Strategy::Periodic).unwrap();
        assert_eq!(syzygy_of_trivial(&res, 1).unwrap().rank(), 1);
    }
}
