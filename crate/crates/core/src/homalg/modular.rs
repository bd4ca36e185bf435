//! Cohomology of the trivial module `Z/m` computed on an integral resolution,
//! with products via chain maps lifted modulo `m`.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::exactalg::{kernel_basis, solve_mod, CoeffRing, Elem, Matrix, Solver};
use crate::homalg::grmatrix::{evaluate_trivial, GrMatrix};
use crate::homalg::resolution::Resolution;

#[derive(Debug)]
pub struct ModularCohomology {
    res: Arc<Resolution>,
    m: u64,
    // solvers[k - 1] solves [d_k | m I] (x, y) = b over Z.
    solvers: Vec<OnceLock<Solver>>,
}

impl ModularCohomology {
    pub fn new(res: &Arc<Resolution>, m: u64) -> Result<Self> {
        if res.ring() != CoeffRing::Integers {
            return Err(Error::UnsupportedRing("mod-m cohomology needs an integral resolution".into()));
        }
        if m < 2 {
            return Err(Error::InvalidRing(format!("modulus {m}")));
        }
        Ok(ModularCohomology { res: res.clone(), m, solvers: (0..res.cap()).map(|_| OnceLock::new()).collect() })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn resolution(&self) -> &Arc<Resolution> {
        &self.res
    }

    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let z = CoeffRing::Integers;
        v.iter().map(|x| z.from_int(x.numerator().rem_euclid(self.m as i128))).collect()
    }

    fn is_zero_mod(&self, v: &[Elem]) -> bool {
        v.iter().all(|x| x.numerator().rem_euclid(self.m as i128) == 0)
    }

    /// `δ^n: C^n → C^{n+1}`, integer matrix of shape `r_{n+1} × r_n`.
    pub fn coboundary(&self, n: usize) -> Result<Matrix> {
        if n + 1 > self.res.cap() {
            return Err(Error::CapExceeded { requested: n as i64, cap: self.res.cap() });
        }
        Ok(self.res.differential(n + 1).augmented(CoeffRing::Integers))
    }

    pub fn is_cocycle(&self, n: usize, c: &[Elem]) -> Result<bool> {
        Ok(self.is_zero_mod(&self.coboundary(n)?.apply(c)))
    }

    pub fn is_coboundary(&self, n: usize, c: &[Elem]) -> Result<bool> {
        if n == 0 {
            return Ok(self.is_zero_mod(c));
        }
        Ok(solve_mod(&self.coboundary(n - 1)?, c, self.m)?.is_some())
    }

    /// Generators (reduced, nonzero) of the cocycles mod `m` in degree `n`.
    pub fn cocycle_generators(&self, n: usize) -> Result<Vec<Vec<Elem>>> {
        let a = self.coboundary(n)?;
        let z = CoeffRing::Integers;
        let aug = a.hstack(&Matrix::scalar(z, a.rows(), z.from_int(self.m as i128)));
        let k = kernel_basis(&aug)?;
        let r = a.cols();
        let mut out: Vec<Vec<Elem>> = Vec::new();
        for j in 0..k.cols() {
            let c = self.reduce(&k.col(j)[..r]);
            if !self.is_zero_mod(&c) && !out.contains(&c) {
                out.push(c);
            }
        }
        Ok(out)
    }

    fn solver(&self, k: usize) -> Result<&Solver> {
        if let Some(s) = self.solvers[k - 1].get() {
            return Ok(s);
        }
        let z = CoeffRing::Integers;
        let d = self.res.unrolled(k);
        let aug = d.hstack(&Matrix::scalar(z, d.rows(), z.from_int(self.m as i128)));
        let s = Solver::new(&aug)?;
        Ok(self.solvers[k - 1].get_or_init(|| s))
    }

    /// Components `F_0..=F_depth` of a chain map `P_{n+k} → P_k ⊗ Z/m` lifting
    /// the cocycle `c` of degree `n`.
    pub fn lift(&self, n: usize, c: &[Elem], depth: usize) -> Result<Vec<GrMatrix>> {
        if n + depth > self.res.cap() {
            return Err(Error::CapExceeded { requested: (n + depth) as i64, cap: self.res.cap() });
        }
        if !(n == self.res.cap() || self.is_cocycle(n, c)?) {
            return Err(Error::NotACocycle(n as i64));
        }
        let z = CoeffRing::Integers;
        let g = self.res.group();
        let order = g.order();
        let mut f0 = GrMatrix::zeros(z, self.res.rank(n), 1, order);
        for (j, x) in self.reduce(c).into_iter().enumerate() {
            f0.entry_mut(j, 0)[0] = x;
        }
        let mut out = vec![f0];
        for k in 1..=depth {
            let target = self.res.differential(n + k).mul(&out[k - 1], g, z);
            let solver = self.solver(k)?;
            let width = self.res.rank(k) * order;
            let rows: Vec<Vec<Elem>> = (0..target.rows())
                .map(|j| {
                    let b = self.reduce(target.row(j));
                    let x = solver.solve(&b)?.ok_or(Error::LiftFailed(k))?;
                    Ok(self.reduce(&x[..width]))
                })
                .collect::<Result<_>>()?;
            out.push(GrMatrix::from_rows(self.res.rank(k), order, &rows));
        }
        Ok(out)
    }

    /// `a · b = a ∘ F^b_{|a|}`.
    pub fn product(&self, a_deg: usize, a: &[Elem], b_deg: usize, b: &[Elem]) -> Result<Vec<Elem>> {
        let f = self.lift(b_deg, b, a_deg)?;
        Ok(self.evaluate(&f[a_deg], a))
    }

    fn evaluate(&self, f: &GrMatrix, a: &[Elem]) -> Vec<Elem> {
        let z = CoeffRing::Integers;
        let order = self.res.group().order();
        let v: Vec<Elem> = (0..f.rows()).map(|j| evaluate_trivial(f.row(j), a, order, z)).collect();
        self.reduce(&v)
    }

    /// `x^k` for a cocycle `x` of degree `n`, as a cocycle of degree `k n`.
    pub fn power(&self, n: usize, x: &[Elem], k: usize) -> Result<Vec<Elem>> {
        if k == 0 {
            return Ok(self.reduce(&[CoeffRing::Integers.one()]));
        }
        if n == 0 {
            let z = CoeffRing::Integers;
            let v = z.from_int(x[0].numerator().rem_euclid(self.m as i128));
            let mut acc = z.one();
            for _ in 0..k {
                acc = z.mul(&acc, &v);
            }
            return Ok(self.reduce(&[acc]));
        }
        let f = self.lift(n, x, (k - 1) * n)?;
        let mut acc = self.reduce(x);
        for j in 1..k {
            acc = self.evaluate(&f[j * n], &acc);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;
    use crate::homalg::Strategy;

    fn z_res(name: &str, cap: usize) -> Arc<Resolution> {
        let g = Arc::new(FiniteGroup::builtin(name).unwrap());
        Arc::new(Resolution::build(&g, CoeffRing::Integers, cap, Strategy::Auto).unwrap())
    }

    #[test]
    fn cyclic_groups_mod_p_squared() {
        // H^n(C_2; Z/4) = Z/2 for n ≥ 1: the 2-torsion of Z/4 and its quotient by 2.
        let res = z_res("C2", 6);
        let mc = ModularCohomology::new(&res, 4).unwrap();
        let z = CoeffRing::Integers;
        for n in 1..5 {
            let gens = mc.cocycle_generators(n).unwrap();
            assert!(!gens.is_empty());
            let nonzero: Vec<_> = gens.iter().filter(|c| !mc.is_coboundary(n, c).unwrap()).collect();
            assert!(!nonzero.is_empty(), "degree {n}");
            for c in &nonzero {
                let twice: Vec<Elem> = c.iter().map(|x| z.mul(x, &z.from_int(2))).collect();
                assert!(mc.is_coboundary(n, &twice).unwrap());
            }
        }
    }

    #[test]
    fn products_match_integral_periodicity() {
        // The degree-2 class of C_3 with Z/9 coefficients generates: u^2 ≠ 0.
        let res = z_res("C3", 6);
        let mc = ModularCohomology::new(&res, 9).unwrap();
        let u = mc
            .cocycle_generators(2)
            .unwrap()
            .into_iter()
            .find(|c| !mc.is_coboundary(2, c).unwrap())
            .unwrap();
        let u2 = mc.power(2, &u, 2).unwrap();
        assert!(mc.is_cocycle(4, &u2).unwrap());
        assert!(!mc.is_coboundary(4, &u2).unwrap());
        let z = CoeffRing::Integers;
        let three: Vec<Elem> = u.iter().map(|x| z.mul(x, &z.from_int(3))).collect();
        assert!(mc.is_coboundary(4, &mc.power(2, &three, 2).unwrap()).unwrap());
        assert_eq!(mc.power(0, &[z.from_int(3)], 2).unwrap(), vec![z.zero()]);
    }
}
