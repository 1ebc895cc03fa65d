//! Ribbon structure on typical modules: morphisms between tensor words of
//! upward strands, the R-matrix and braiding, the twist, the four duality maps
//! and the left/right partial traces they induce.
//!
//! Dual objects never appear in a [`ObjectSignature`]. The duality maps are
//! stored as coefficient matrices and only ever consumed by the trace
//! operations, which contract the dual index on the spot.

use std::fmt;

use crate::error::{Error, Result};
use crate::qscalar::{RootContext, Scalar};
use crate::uqsl2::{max_abs, Action, CMatrix, HighestWeight, WeightModule};

/// Ordered list of strand colors; the empty list is the unit object.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObjectSignature(pub Vec<HighestWeight>);

impl ObjectSignature {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn single(w: HighestWeight) -> Self {
        Self(vec![w])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension `N^len` of the underlying vector space.
    pub fn dim(&self, ctx: &RootContext) -> usize {
        ctx.n().pow(self.0.len() as u32)
    }

    pub fn concat(&self, other: &ObjectSignature) -> ObjectSignature {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        ObjectSignature(v)
    }
}

impl fmt::Display for ObjectSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "I");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|w| format!("V({}{:+}i)", w.0.re, w.0.im))
            .collect();
        write!(f, "{}", parts.join("⊗"))
    }
}

/// A linear map between tensor words of typical modules.
///
/// Basis ordering is lexicographic with the leftmost strand most significant,
/// matching `kronecker`.
#[derive(Debug, Clone, PartialEq)]
pub struct Morphism {
    domain: ObjectSignature,
    codomain: ObjectSignature,
    matrix: CMatrix,
}

impl Morphism {
    pub fn new(
        ctx: &RootContext,
        domain: ObjectSignature,
        codomain: ObjectSignature,
        matrix: CMatrix,
    ) -> Result<Self> {
        let (rows, cols) = (codomain.dim(ctx), domain.dim(ctx));
        if matrix.shape() != (rows, cols) {
            return Err(Error::SignatureMismatch(format!(
                "matrix of shape {:?} for {} -> {} (expected {:?})",
                matrix.shape(),
                domain,
                codomain,
                (rows, cols)
            )));
        }
        Ok(Self {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn identity(ctx: &RootContext, sig: ObjectSignature) -> Self {
        let d = sig.dim(ctx);
        Self {
            domain: sig.clone(),
            codomain: sig,
            matrix: CMatrix::identity(d, d),
        }
    }

    pub fn domain(&self) -> &ObjectSignature {
        &self.domain
    }

    pub fn codomain(&self) -> &ObjectSignature {
        &self.codomain
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Morphism) -> Result<Morphism> {
        if self.domain != first.codomain {
            return Err(Error::SignatureMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.domain, self.codomain, first.domain, first.codomain
            )));
        }
        Ok(Morphism {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: &self.matrix * &first.matrix,
        })
    }

    /// `self ⊗ right`.
    pub fn tensor(&self, right: &Morphism) -> Morphism {
        Morphism {
            domain: self.domain.concat(&right.domain),
            codomain: self.codomain.concat(&right.codomain),
            matrix: self.matrix.kronecker(&right.matrix),
        }
    }

    pub fn scale(&self, s: Scalar) -> Morphism {
        Morphism {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: &self.matrix * s,
        }
    }

    /// Entrywise max-norm distance; `None` if the signatures differ.
    pub fn distance(&self, other: &Morphism) -> Option<f64> {
        (self.domain == other.domain && self.codomain == other.codomain)
            .then(|| max_abs(&(&self.matrix - &other.matrix)))
    }
}

/// Coefficient of `E^n ⊗ F^n` in the R-matrix: `{1}^{2n} q^{n(n-1)/2} / {n}!`.
pub(crate) fn r_coefficient(ctx: &RootContext, n: usize) -> Scalar {
    let b1 = ctx.qbracket(Scalar::new(1.0, 0.0));
    let fact = ctx
        .qbracket_factorial(n)
        .expect("R-matrix sum runs over n < N");
    b1.powu(2 * n as u32) * ctx.q_pow_re((n * (n.saturating_sub(1))) as f64 / 2.0) / fact
}

/// `R_t = q^{H⊗H/2} Σ_n c_n E^n ⊗ F^n` on `a ⊗ b` for arbitrary weight-module actions.
///
/// `q^{H⊗H/2}` multiplies the component `v ⊗ w` by `q^{μμ'/2}` where `μ, μ'`
/// are the weights of the basis vectors themselves.
pub fn r_matrix_action(ctx: &RootContext, a: &Action, b: &Action) -> CMatrix {
    let n = ctx.n();
    let (da, db) = (a.dim(), b.dim());
    let mut sum = CMatrix::zeros(da * db, da * db);
    let mut e_pow = CMatrix::identity(da, da);
    let mut f_pow = CMatrix::identity(db, db);
    for k in 0..n {
        sum += e_pow.kronecker(&f_pow) * r_coefficient(ctx, k);
        e_pow = &e_pow * &a.e;
        f_pow = &f_pow * &b.f;
    }
    let (wa, wb) = (a.weights(), b.weights());
    for (i, &x) in wa.iter().enumerate() {
        for (j, &y) in wb.iter().enumerate() {
            let mut row = sum.row_mut(i * db + j);
            row *= ctx.q_pow(x * y / 2.0);
        }
    }
    sum
}

/// The permutation `τ(x ⊗ y) = y ⊗ x` from `A ⊗ B` to `B ⊗ A`.
pub fn flip(da: usize, db: usize) -> CMatrix {
    let mut p = CMatrix::zeros(da * db, da * db);
    for i in 0..da {
        for j in 0..db {
            p[(j * da + i, i * db + j)] = Scalar::new(1.0, 0.0);
        }
    }
    p
}

/// The R-matrix on `V ⊗ W` as an endomorphism.
pub fn r_matrix(ctx: &RootContext, v: &WeightModule, w: &WeightModule) -> Morphism {
    let sig = ObjectSignature(vec![v.lambda(), w.lambda()]);
    Morphism {
        domain: sig.clone(),
        codomain: sig,
        matrix: r_matrix_action(ctx, v.action(), w.action()),
    }
}

/// `c_{V,W} = τ ∘ R_t : V ⊗ W -> W ⊗ V`.
pub fn braiding(ctx: &RootContext, v: &WeightModule, w: &WeightModule) -> Morphism {
    Morphism {
        domain: ObjectSignature(vec![v.lambda(), w.lambda()]),
        codomain: ObjectSignature(vec![w.lambda(), v.lambda()]),
        matrix: flip(v.dim(), w.dim()) * r_matrix_action(ctx, v.action(), w.action()),
    }
}

/// `c_{V,W}^{-1} : W ⊗ V -> V ⊗ W`, by numerical inversion with a residual check.
pub fn braiding_inv(ctx: &RootContext, v: &WeightModule, w: &WeightModule) -> Result<Morphism> {
    let c = braiding(ctx, v, w);
    let inv = invert_checked(ctx, c.matrix())?;
    Ok(Morphism {
        domain: c.codomain,
        codomain: c.domain,
        matrix: inv,
    })
}

pub(crate) fn invert_checked(ctx: &RootContext, m: &CMatrix) -> Result<CMatrix> {
    let inv = m
        .clone()
        .try_inverse()
        .ok_or(Error::SingularMatrix(f64::INFINITY))?;
    let id = CMatrix::identity(m.nrows(), m.ncols());
    let residual = max_abs(&(m * &inv - &id)).max(max_abs(&(&inv * m - &id)));
    let scale = max_abs(m) * max_abs(&inv);
    if !residual.is_finite() || residual > ctx.tolerance_at(scale) {
        return Err(Error::SingularMatrix(residual));
    }
    Ok(inv)
}

/// The ribbon element `θ = u K^{N-1}` acting on a weight module, where
/// `u = Σ_n c_n S(F^n) q^{-H²/2} E^n` is read off the R-matrix
/// `R_t = q^{H⊗H/2} Σ_n c_n E^n ⊗ F^n`.
///
/// The Cartan factor sits between `S(F^n)` and `E^n`: applying the antipode to
/// the second leg of `q^{H⊗H/2}` produces `q^{-H²/2}` at that position.
pub fn theta_action(ctx: &RootContext, a: &Action) -> CMatrix {
    let n = ctx.n();
    let dim = a.dim();
    let cartan = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        a.weights().into_iter().map(|mu| ctx.q_pow(-mu * mu / 2.0)),
    ));
    let s_f = a.antipode(crate::uqsl2::Generator::F);
    let mut u = CMatrix::zeros(dim, dim);
    let mut s_f_pow = CMatrix::identity(dim, dim);
    let mut e_pow = CMatrix::identity(dim, dim);
    for k in 0..n {
        u += &s_f_pow * &cartan * &e_pow * r_coefficient(ctx, k);
        s_f_pow = &s_f_pow * &s_f;
        e_pow = &e_pow * &a.e;
    }
    u * a.k.pow((n - 1) as u32)
}

/// The twist `θ_V : v ↦ θ^{-1} v` on a single typical module.
pub fn twist(ctx: &RootContext, v: &WeightModule) -> Result<Morphism> {
    let inv = invert_checked(ctx, &theta_action(ctx, v.action()))?;
    Ok(Morphism {
        domain: ObjectSignature::single(v.lambda()),
        codomain: ObjectSignature::single(v.lambda()),
        matrix: inv,
    })
}

/// The twist on `V_1 ⊗ ... ⊗ V_k`, computed from the coproduct action rather
/// than from braidings.
pub fn twist_on_tensor(ctx: &RootContext, modules: &[WeightModule]) -> Result<Morphism> {
    let action = crate::uqsl2::tensor_product_action(ctx, modules)?;
    let sig = ObjectSignature(modules.iter().map(|m| m.lambda()).collect());
    let inv = invert_checked(ctx, &theta_action(ctx, &action))?;
    Morphism::new(ctx, sig.clone(), sig, inv)
}

/// The scalar by which `θ_V` acts. Equals `q^{λ²/2 - (N-1)λ}`.
pub fn twist_scalar(ctx: &RootContext, v: &WeightModule) -> Result<Scalar> {
    scalar_of_matrix(ctx, twist(ctx, v)?.matrix())
}

/// `s` with `m = s·Id`, or a simplicity error.
pub(crate) fn scalar_of_matrix(ctx: &RootContext, m: &CMatrix) -> Result<Scalar> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::SignatureMismatch(format!(
            "expected a square endomorphism, got shape {:?}",
            m.shape()
        )));
    }
    let dim = m.nrows();
    let mean = m.diagonal().iter().sum::<Scalar>() / dim as f64;
    let mut off = 0.0f64;
    let mut spread = 0.0f64;
    for r in 0..dim {
        for c in 0..dim {
            if r == c {
                spread = spread.max((m[(r, c)] - mean).norm());
            } else {
                off = off.max(m[(r, c)].norm());
            }
        }
    }
    let tol = ctx.tolerance_at(mean.norm());
    if off > tol || spread > tol {
        return Err(Error::Simplicity {
            off_diagonal: off,
            spread,
        });
    }
    Ok(mean)
}

/// Which of the four duality maps a [`DualityMap`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualityKind {
    /// `b_V : I -> V ⊗ V*`; entry `(i, a)` is the coefficient of `v_i ⊗ v_a*`.
    Coev,
    /// `d_V : V* ⊗ V -> I`; entry `(a, i)` is `d(v_a* ⊗ v_i)`.
    Ev,
    /// `b'_V : I -> V* ⊗ V`; entry `(a, i)` is the coefficient of `v_a* ⊗ v_i`.
    CoevPrime,
    /// `d'_V : V ⊗ V* -> I`; entry `(i, a)` is `d'(v_i ⊗ v_a*)`.
    EvPrime,
}

/// A duality morphism in the dual basis `{v_a*}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityMap {
    pub kind: DualityKind,
    pub color: HighestWeight,
    pub coefficients: CMatrix,
}

/// `b_V(1) = Σ v_i ⊗ v_i*`.
pub fn coev(v: &WeightModule) -> DualityMap {
    DualityMap {
        kind: DualityKind::Coev,
        color: v.lambda(),
        coefficients: CMatrix::identity(v.dim(), v.dim()),
    }
}

/// `d_V(f ⊗ w) = f(w)`.
pub fn ev(v: &WeightModule) -> DualityMap {
    DualityMap {
        kind: DualityKind::Ev,
        color: v.lambda(),
        coefficients: CMatrix::identity(v.dim(), v.dim()),
    }
}

/// `b'_V(1) = Σ v_i* ⊗ K^{N-1} v_i`.
pub fn coev_prime(v: &WeightModule) -> DualityMap {
    let k = v.action().k.pow((v.dim() - 1) as u32);
    DualityMap {
        kind: DualityKind::CoevPrime,
        color: v.lambda(),
        coefficients: k.transpose(),
    }
}

/// `d'_V(v ⊗ f) = f(K^{1-N} v)`.
pub fn ev_prime(v: &WeightModule) -> DualityMap {
    let k = v.action().k_inv.pow((v.dim() - 1) as u32);
    DualityMap {
        kind: DualityKind::EvPrime,
        color: v.lambda(),
        coefficients: k.transpose(),
    }
}

/// Contraction weights for closing a strand on the right: entry `(k, j)` pairs
/// output index `k` with input index `j`. Equal to `diag(K^{1-N})`.
pub fn right_pivot(v: &WeightModule) -> CMatrix {
    &ev_prime(v).coefficients * coev(v).coefficients.transpose()
}

/// Contraction weights for closing a strand on the left. Equal to `diag(K^{N-1})`.
pub fn left_pivot(v: &WeightModule) -> CMatrix {
    ev(v).coefficients.transpose() * &coev_prime(v).coefficients
}

/// Diagonal of a pivot matrix; both pivots are diagonal in the weight basis.
pub(crate) fn pivot_diagonal(p: &CMatrix) -> Vec<Scalar> {
    debug_assert!(
        (0..p.nrows())
            .flat_map(|r| (0..p.ncols()).map(move |c| (r, c)))
            .all(|(r, c)| r == c || p[(r, c)].norm() == 0.0),
        "pivot must be diagonal"
    );
    p.diagonal().iter().copied().collect()
}

/// `tr_R(f) = (Id_X ⊗ d'_Z)(f ⊗ Id_{Z*})(Id_X ⊗ b_Z)` for `f : X ⊗ Z -> Y ⊗ Z`,
/// where `Z` is the last strand.
pub fn partial_trace_right(ctx: &RootContext, f: &Morphism) -> Result<Morphism> {
    let (z_in, z_out) = match (f.domain.0.last(), f.codomain.0.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => {
            return Err(Error::SignatureMismatch(
                "right trace needs a strand on both sides".into(),
            ))
        }
    };
    if z_in != z_out {
        return Err(Error::SignatureMismatch(format!(
            "right trace pairs different colors {z_in:?} and {z_out:?}"
        )));
    }
    let z = crate::uqsl2::typical_module(ctx, z_in)?;
    let w = right_pivot(&z);
    let n = ctx.n();
    let x = ObjectSignature(f.domain.0[..f.domain.len() - 1].to_vec());
    let y = ObjectSignature(f.codomain.0[..f.codomain.len() - 1].to_vec());
    let (dx, dy) = (x.dim(ctx), y.dim(ctx));
    let m = &f.matrix;
    let out = CMatrix::from_fn(dy, dx, |yi, xi| {
        let mut acc = Scalar::new(0.0, 0.0);
        for k in 0..n {
            for j in 0..n {
                let wkj = w[(k, j)];
                if wkj.norm() != 0.0 {
                    acc += wkj * m[(yi * n + k, xi * n + j)];
                }
            }
        }
        acc
    });
    Morphism::new(ctx, x, y, out)
}

/// `tr_L(f) = (d_X ⊗ Id_Z)(Id_{X*} ⊗ f)(b'_X ⊗ Id_Y)` for `f : X ⊗ Y -> X ⊗ Z`,
/// where `X` is the first strand.
pub fn partial_trace_left(ctx: &RootContext, f: &Morphism) -> Result<Morphism> {
    let (x_in, x_out) = match (f.domain.0.first(), f.codomain.0.first()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => {
            return Err(Error::SignatureMismatch(
                "left trace needs a strand on both sides".into(),
            ))
        }
    };
    if x_in != x_out {
        return Err(Error::SignatureMismatch(format!(
            "left trace pairs different colors {x_in:?} and {x_out:?}"
        )));
    }
    let xm = crate::uqsl2::typical_module(ctx, x_in)?;
    let w = left_pivot(&xm);
    let n = ctx.n();
    let y = ObjectSignature(f.domain.0[1..].to_vec());
    let z = ObjectSignature(f.codomain.0[1..].to_vec());
    let (dy, dz) = (y.dim(ctx), z.dim(ctx));
    let m = &f.matrix;
    let out = CMatrix::from_fn(dz, dy, |zi, yi| {
        let mut acc = Scalar::new(0.0, 0.0);
        for k in 0..n {
            for i in 0..n {
                let wki = w[(k, i)];
                if wki.norm() != 0.0 {
                    acc += wki * m[(k * dz + zi, i * dy + yi)];
                }
            }
        }
        acc
    });
    Morphism::new(ctx, y, z, out)
}

/// The quantum trace `tr_C(f)` of an endomorphism, closing every strand on the right.
pub fn quantum_trace(ctx: &RootContext, f: &Morphism) -> Result<Scalar> {
    if f.domain != f.codomain {
        return Err(Error::SignatureMismatch(
            "quantum trace of a non-endomorphism".into(),
        ));
    }
    let mut cur = f.clone();
    while !cur.domain.is_empty() {
        cur = partial_trace_right(ctx, &cur)?;
    }
    Ok(cur.matrix[(0, 0)])
}

/// `dim_C(V) = d'_V ∘ b_V`, evaluated from the duality coefficients.
pub fn quantum_dimension(v: &WeightModule) -> Scalar {
    let b = coev(v).coefficients;
    let dp = ev_prime(v).coefficients;
    b.iter().zip(dp.iter()).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uqsl2::{tensor_product_action, typical_module, Generator};

    fn ctx(n: usize) -> RootContext {
        RootContext::new(n).unwrap()
    }

    fn module(c: &RootContext, re: f64, im: f64) -> WeightModule {
        typical_module(c, HighestWeight::new(re, im)).unwrap()
    }

    #[test]
    fn composition_and_tensor_identities() {
        let c = ctx(2);
        let v = module(&c, 0.3, 0.0);
        let w = module(&c, 0.7, 0.1);
        let f = braiding(&c, &v, &w);
        let id_cod = Morphism::identity(&c, f.codomain().clone());
        assert_eq!(id_cod.compose(&f).unwrap(), f);

        let id_v = Morphism::identity(&c, ObjectSignature::single(v.lambda()));
        let id_w = Morphism::identity(&c, ObjectSignature::single(w.lambda()));
        assert_eq!(
            id_v.tensor(&id_w),
            Morphism::identity(&c, ObjectSignature(vec![v.lambda(), w.lambda()]))
        );
    }

    #[test]
    fn compose_rejects_mismatch() {
        let c = ctx(2);
        let v = module(&c, 0.3, 0.0);
        let w = module(&c, 0.7, 0.0);
        let f = braiding(&c, &v, &w);
        assert!(matches!(f.compose(&f), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn interchange_law() {
        let c = ctx(2);
        let v = module(&c, 0.3, 0.0);
        let w = module(&c, 0.7, 0.0);
        let f = braiding(&c, &v, &w);
        let g = braiding(&c, &w, &v);
        let h = r_matrix(&c, &v, &v);
        let k = r_matrix(&c, &v, &v).scale(Scalar::new(0.5, -1.0));
        let lhs = g.compose(&f).unwrap().tensor(&h.compose(&k).unwrap());
        let rhs = g.tensor(&h).compose(&f.tensor(&k)).unwrap();
        assert!(lhs.distance(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn r_matrix_on_extremal_vectors() {
        let c = ctx(3);
        let v = module(&c, 0.3, 0.2);
        let w = module(&c, -0.9, 0.0);
        let r = r_matrix(&c, &v, &w).into_matrix();
        let (lv, lw) = (v.lambda().0, w.lambda().0);
        // v_0 ⊗ w_0 is index 0
        assert!((r[(0, 0)] - c.q_pow(lv * lw / 2.0)).norm() < 1e-13);
        for row in 1..9 {
            assert!(r[(row, 0)].norm() < 1e-15);
        }
        // v_i ⊗ w_{N-1}
        for i in 0..3 {
            let col = i * 3 + 2;
            let expected = c.q_pow((lv - 2.0 * i as f64) * (lw - 4.0) / 2.0);
            assert!((r[(col, col)] - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn r_matrix_by_hand_n2() {
        // N = 2: R = q^{H⊗H/2}(1 + ({1}^2/{1}!) E⊗F), {1} = 2i, so c_1 = 2i.
        let c = ctx(2);
        let v = module(&c, 0.3, 0.0);
        let w = module(&c, 0.7, 0.0);
        let r = r_matrix(&c, &v, &w).into_matrix();
        let (l, lp) = (0.3, 0.7);
        let weights = |i: usize, j: usize| (l - 2.0 * i as f64, lp - 2.0 * j as f64);
        let phase = |i: usize, j: usize| {
            let (a, b) = weights(i, j);
            c.q_pow_re(a * b / 2.0)
        };
        // E v_1 = [1][λ] v_0 = [λ] v_0, F w_0 = w_1; the only off-diagonal entry maps v_1⊗w_0 (2) to v_0⊗w_1 (1).
        let qn_l = (c.q_pow_re(l) - c.q_pow_re(-l)) / Scalar::new(0.0, 2.0);
        let mut expected = CMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                expected[(i * 2 + j, i * 2 + j)] = phase(i, j);
            }
        }
        expected[(1, 2)] = phase(0, 1) * Scalar::new(0.0, 2.0) * qn_l;
        assert!(max_abs(&(r - expected)) < 1e-13);
    }

    #[test]
    fn braiding_inverse() {
        let c = ctx(3);
        let v = module(&c, 0.3, 0.2);
        let w = module(&c, -0.9, 0.0);
        let b = braiding(&c, &v, &w);
        let bi = braiding_inv(&c, &v, &w).unwrap();
        let id = Morphism::identity(&c, b.domain().clone());
        assert!(bi.compose(&b).unwrap().distance(&id).unwrap() < 1e-9);
    }

    #[test]
    fn braiding_is_natural() {
        for n in [2, 3, 4] {
            let c = ctx(n);
            let v = module(&c, 0.41, -0.2);
            let w = module(&c, -1.3, 0.1);
            let b = braiding(&c, &v, &w).into_matrix();
            let vw = tensor_product_action(&c, &[v.clone(), w.clone()]).unwrap();
            let wv = tensor_product_action(&c, &[w, v]).unwrap();
            for g in Generator::ALL {
                let res = &b * vw.generator(g) - wv.generator(g) * &b;
                assert!(max_abs(&res) < 1e-8, "N={n} {g:?}");
            }
        }
    }

    #[test]
    fn twist_matches_highest_weight_formula() {
        for n in 2..=5 {
            let c = ctx(n);
            for (re, im) in [(0.37, 0.1), (1.7, 0.0), (-1.0, 0.0), (0.5, -0.3)] {
                let v = module(&c, re, im);
                let lam = v.lambda().0;
                let expected = c.q_pow(lam * lam / 2.0 - (n as f64 - 1.0) * lam);
                let got = twist_scalar(&c, &v).unwrap();
                assert!((got - expected).norm() < 1e-9, "N={n} λ={lam}");
                assert!(got.norm() > 0.0);
            }
        }
    }

    #[test]
    fn ribbon_compatibility() {
        for n in [2, 3] {
            let c = ctx(n);
            let v = module(&c, 0.37, 0.1);
            let w = module(&c, -0.81, 0.2);
            let lhs = twist_on_tensor(&c, &[v.clone(), w.clone()]).unwrap();
            let double = braiding(&c, &w, &v).compose(&braiding(&c, &v, &w)).unwrap();
            let rhs = double
                .compose(&twist(&c, &v).unwrap().tensor(&twist(&c, &w).unwrap()))
                .unwrap();
            assert!(lhs.distance(&rhs).unwrap() < 1e-8);
        }
    }

    #[test]
    fn zig_zag_identities() {
        let c = ctx(4);
        let v = module(&c, 0.37, 0.1);
        let id = CMatrix::identity(4, 4);
        let (b, d) = (coev(&v).coefficients, ev(&v).coefficients);
        let (bp, dp) = (coev_prime(&v).coefficients, ev_prime(&v).coefficients);
        // (Id_V ⊗ d)(b ⊗ Id_V) = Id_V and (d ⊗ Id_{V*})(Id_{V*} ⊗ b) = Id_{V*}
        assert!(max_abs(&(&b * &d - &id)) < 1e-12);
        assert!(max_abs(&(&d * &b - &id)) < 1e-12);
        // (d' ⊗ Id_V)(Id_V ⊗ b') = Id_V and (Id_{V*} ⊗ d')(b' ⊗ Id_{V*}) = Id_{V*}
        assert!(max_abs(&(&dp * &bp - &id)) < 1e-12);
        assert!(max_abs(&(&bp * &dp - &id)) < 1e-12);
    }

    #[test]
    fn pivots_are_diagonal_powers_of_k() {
        let c = ctx(3);
        let v = module(&c, 0.37, 0.1);
        let r = right_pivot(&v);
        let l = left_pivot(&v);
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert!((r[(i, i)] - c.q_pow(-2.0 * v.weight(i))).norm() < 1e-12);
                    assert!((l[(i, i)] - c.q_pow(2.0 * v.weight(i))).norm() < 1e-12);
                } else {
                    assert_eq!(r[(i, j)].norm(), 0.0);
                    assert_eq!(l[(i, j)].norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn quantum_dimension_vanishes() {
        for n in 2..=6 {
            let c = ctx(n);
            for (re, im) in [(0.37, 0.1), (1.7, 0.0), (-1.0, 0.0), (2.5, 0.3)] {
                let v = module(&c, re, im);
                assert!(quantum_dimension(&v).norm() < 1e-12);
                let id = Morphism::identity(&c, ObjectSignature::single(v.lambda()));
                assert!(quantum_trace(&c, &id).unwrap().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn trace_of_single_strand_uses_k_power() {
        let c = ctx(3);
        let v = module(&c, 0.37, 0.1);
        let f = Morphism::new(
            &c,
            ObjectSignature::single(v.lambda()),
            ObjectSignature::single(v.lambda()),
            CMatrix::from_fn(3, 3, |r, col| Scalar::new((r * 3 + col) as f64, 1.0)),
        )
        .unwrap();
        let k_pow = v.action().k_inv.pow(2);
        let expected = (k_pow * f.matrix()).trace();
        assert!((quantum_trace(&c, &f).unwrap() - expected).norm() < 1e-12);
    }

    #[test]
    fn right_trace_of_identity_vanishes() {
        let c = ctx(3);
        let v = module(&c, 0.37, 0.1);
        let id = Morphism::identity(&c, ObjectSignature(vec![v.lambda(), v.lambda()]));
        let t = partial_trace_right(&c, &id).unwrap();
        assert!(max_abs(t.matrix()) < 1e-12);
        let t = partial_trace_left(&c, &id).unwrap();
        assert!(max_abs(t.matrix()) < 1e-12);
    }

    #[test]
    fn full_trace_is_order_independent() {
        let c = ctx(3);
        let v = module(&c, 0.37, 0.1);
        let w = module(&c, -1.21, 0.0);
        let f = braiding(&c, &w, &v)
            .compose(&braiding(&c, &v, &w))
            .unwrap()
            .scale(Scalar::new(0.3, 0.4));
        let g = Morphism::identity(&c, f.domain().clone()).scale(Scalar::new(2.0, 0.0));
        let f = Morphism::new(
            &c,
            f.domain().clone(),
            f.codomain().clone(),
            f.matrix() + g.matrix(),
        )
        .unwrap();
        // trace right strand on the right, then the remaining one via the left pivot
        let a = partial_trace_right(&c, &f).unwrap();
        let via_right_then_left = partial_trace_left(&c, &a).unwrap().matrix()[(0, 0)];
        let b = partial_trace_left(&c, &f).unwrap();
        let via_left_then_right = partial_trace_right(&c, &b).unwrap().matrix()[(0, 0)];
        assert!((via_right_then_left - via_left_then_right).norm() < 1e-10);
    }

    #[test]
    fn traces_reject_mismatched_strands() {
        let c = ctx(2);
        let v = module(&c, 0.3, 0.0);
        let w = module(&c, 0.7, 0.0);
        let b = braiding(&c, &v, &w);
        assert!(matches!(
            partial_trace_right(&c, &b),
            Err(Error::SignatureMismatch(_))
        ));
        assert!(partial_trace_left(&c, &b).is_err());
        let unit = Morphism::identity(&c, ObjectSignature::unit());
        assert!(partial_trace_right(&c, &unit).is_err());
    }
}
