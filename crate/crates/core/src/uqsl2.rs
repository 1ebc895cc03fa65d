//! The restricted quantum group and its typical weight modules.
//!
//! A typical module `V_lambda` has basis `v_0, ..., v_{N-1}` with `v_i` of
//! weight `lambda - 2i`. `F` lowers (`F v_i = v_{i+1}`, `F v_{N-1} = 0`) and
//! `E` raises with `E v_i = [i][lambda - i + 1] v_{i-1}`, `E v_0 = 0`. Any
//! rescaling of the basis gives an isomorphic module; [`check_relations`]
//! validates the convention against the defining relations instead of
//! trusting it.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qscalar::{RootContext, Scalar};

pub type CMatrix = DMatrix<Scalar>;

/// Highest weight of a module, an arbitrary complex number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighestWeight(pub Scalar);

impl HighestWeight {
    pub fn new(re: f64, im: f64) -> Self {
        Self(Scalar::new(re, im))
    }

    pub fn value(self) -> Scalar {
        self.0
    }

    /// The nearest integer, if the weight is integral within `eps`.
    pub fn as_integer(self, eps: f64) -> Option<i64> {
        let r = self.0.re.round();
        (self.0.im.abs() <= eps && (self.0.re - r).abs() <= eps).then_some(r as i64)
    }

    /// Typical weights are `(C \ Z) ∪ {-1 + kN}`.
    pub fn is_typical(self, ctx: &RootContext) -> bool {
        match self.as_integer(ctx.eps_abs) {
            None => true,
            Some(k) => (k + 1).rem_euclid(ctx.n() as i64) == 0,
        }
    }

    pub fn ensure_typical(self, ctx: &RootContext) -> Result<Self> {
        if self.is_typical(ctx) {
            Ok(self)
        } else {
            Err(Error::Typicality {
                re: self.0.re,
                im: self.0.im,
                n: ctx.n(),
            })
        }
    }
}

impl From<f64> for HighestWeight {
    fn from(re: f64) -> Self {
        Self::new(re, 0.0)
    }
}

impl From<Scalar> for HighestWeight {
    fn from(z: Scalar) -> Self {
        Self(z)
    }
}

/// Algebra generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    E,
    F,
    K,
    KInv,
    H,
}

impl Generator {
    pub const ALL: [Generator; 5] = [
        Generator::E,
        Generator::F,
        Generator::K,
        Generator::KInv,
        Generator::H,
    ];
}

/// Matrices of the five generators on some finite-dimensional weight module.
///
/// This is also the carrier of the Hopf structure: [`Action::tensor`] applies
/// the coproduct, [`Action::antipode`] the antipode and [`Action::trivial`]
/// realizes the counit.
#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    pub e: CMatrix,
    pub f: CMatrix,
    pub k: CMatrix,
    pub k_inv: CMatrix,
    pub h: CMatrix,
}

impl Action {
    pub fn dim(&self) -> usize {
        self.e.nrows()
    }

    /// The one-dimensional module given by the counit: `E, F, H -> 0`, `K -> 1`.
    pub fn trivial() -> Self {
        let zero = CMatrix::zeros(1, 1);
        let one = CMatrix::identity(1, 1);
        Self {
            e: zero.clone(),
            f: zero.clone(),
            k: one.clone(),
            k_inv: one,
            h: zero,
        }
    }

    pub fn generator(&self, g: Generator) -> &CMatrix {
        match g {
            Generator::E => &self.e,
            Generator::F => &self.f,
            Generator::K => &self.k,
            Generator::KInv => &self.k_inv,
            Generator::H => &self.h,
        }
    }

    /// Matrix of the product `g_1 g_2 ... g_m`.
    pub fn word(&self, word: &[Generator]) -> CMatrix {
        word.iter()
            .fold(CMatrix::identity(self.dim(), self.dim()), |acc, &g| {
                acc * self.generator(g)
            })
    }

    /// `S(E) = -E K^{-1}`, `S(F) = -K F`, `S(K) = K^{-1}`, `S(H) = -H`.
    pub fn antipode(&self, g: Generator) -> CMatrix {
        match g {
            Generator::E => -(&self.e * &self.k_inv),
            Generator::F => -(&self.k * &self.f),
            Generator::K => self.k_inv.clone(),
            Generator::KInv => self.k.clone(),
            Generator::H => -self.h.clone(),
        }
    }

    /// Action on `self ⊗ other` through the coproduct
    /// `Δ(E) = 1⊗E + E⊗K`, `Δ(F) = K^{-1}⊗F + F⊗1`, `Δ(H) = H⊗1 + 1⊗H`,
    /// `Δ(K^{±1}) = K^{±1}⊗K^{±1}`.
    pub fn tensor(&self, other: &Action) -> Action {
        let id_l = CMatrix::identity(self.dim(), self.dim());
        let id_r = CMatrix::identity(other.dim(), other.dim());
        Action {
            e: id_l.kronecker(&other.e) + self.e.kronecker(&other.k),
            f: self.k_inv.kronecker(&other.f) + self.f.kronecker(&id_r),
            k: self.k.kronecker(&other.k),
            k_inv: self.k_inv.kronecker(&other.k_inv),
            h: self.h.kronecker(&id_r) + id_l.kronecker(&other.h),
        }
    }

    /// Diagonal of `H`, the weights of the basis vectors.
    pub fn weights(&self) -> Vec<Scalar> {
        self.h.diagonal().iter().copied().collect()
    }
}

/// A typical module `V_lambda` of dimension `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightModule {
    ctx: RootContext,
    lambda: HighestWeight,
    action: Action,
}

impl WeightModule {
    pub fn ctx(&self) -> &RootContext {
        &self.ctx
    }

    pub fn lambda(&self) -> HighestWeight {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.ctx.n()
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    /// Weight `lambda - 2i` of the basis vector `v_i`.
    pub fn weight(&self, i: usize) -> Scalar {
        self.lambda.0 - 2.0 * i as f64
    }

    /// Replace the generator matrices. Used to exercise the relation checker
    /// on deliberately broken modules.
    pub fn with_action(mut self, action: Action) -> Self {
        self.action = action;
        self
    }
}

/// Build the typical module with highest weight `lambda`.
pub fn typical_module(ctx: &RootContext, lambda: HighestWeight) -> Result<WeightModule> {
    lambda.ensure_typical(ctx)?;
    let n = ctx.n();
    let lam = lambda.0;
    let weight = |i: usize| lam - 2.0 * i as f64;

    let mut e = CMatrix::zeros(n, n);
    let mut f = CMatrix::zeros(n, n);
    for i in 1..n {
        let fi = i as f64;
        e[(i - 1, i)] = ctx.qnumber(Scalar::new(fi, 0.0)) * ctx.qnumber(lam - fi + 1.0);
    }
    for i in 0..n - 1 {
        f[(i + 1, i)] = Scalar::new(1.0, 0.0);
    }
    let k = CMatrix::from_fn(n, n, |r, c| {
        if r == c {
            ctx.q_pow(weight(r))
        } else {
            Scalar::new(0.0, 0.0)
        }
    });
    let k_inv = CMatrix::from_fn(n, n, |r, c| {
        if r == c {
            ctx.q_pow(-weight(r))
        } else {
            Scalar::new(0.0, 0.0)
        }
    });
    let h = CMatrix::from_fn(n, n, |r, c| {
        if r == c {
            weight(r)
        } else {
            Scalar::new(0.0, 0.0)
        }
    });

    Ok(WeightModule {
        ctx: *ctx,
        lambda,
        action: Action { e, f, k, k_inv, h },
    })
}

/// Max-norm residual of every defining relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationReport {
    /// `HK = KH` and `HK^{-1} = K^{-1}H`.
    pub h_k_commute: f64,
    /// `[H, E] = 2E`.
    pub h_e: f64,
    /// `[H, F] = -2F`.
    pub h_f: f64,
    /// `KK^{-1} = K^{-1}K = 1`.
    pub k_inverse: f64,
    /// `KEK^{-1} = q^2 E`.
    pub k_e_conjugation: f64,
    /// `KFK^{-1} = q^{-2} F`.
    pub k_f_conjugation: f64,
    /// `[E, F] = (K - K^{-1}) / (q - q^{-1})`.
    pub e_f_commutator: f64,
    /// `E^N = F^N = 0`.
    pub nilpotency: f64,
    /// `q^H = K`, the weight-module condition.
    pub weight_condition: f64,
}

impl RelationReport {
    pub fn entries(&self) -> [(&'static str, f64); 9] {
        [
            ("HK=KH", self.h_k_commute),
            ("[H,E]=2E", self.h_e),
            ("[H,F]=-2F", self.h_f),
            ("KK^-1=1", self.k_inverse),
            ("KEK^-1=q^2E", self.k_e_conjugation),
            ("KFK^-1=q^-2F", self.k_f_conjugation),
            ("[E,F]=(K-K^-1)/(q-q^-1)", self.e_f_commutator),
            ("E^N=F^N=0", self.nilpotency),
            ("q^H=K", self.weight_condition),
        ]
    }

    pub fn max(&self) -> f64 {
        self.entries().iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Evaluate the defining relations of the algebra on `m`.
pub fn check_relations(m: &WeightModule) -> RelationReport {
    check_action_relations(m.ctx(), m.action())
}

/// Relation residuals for an arbitrary action (tensor products included).
pub fn check_action_relations(ctx: &RootContext, a: &Action) -> RelationReport {
    let n = ctx.n();
    let dim = a.dim();
    let id = CMatrix::identity(dim, dim);
    let q = ctx.q();
    let comm = |x: &CMatrix, y: &CMatrix| x * y - y * x;

    let h_k_commute = max_abs(&comm(&a.h, &a.k)).max(max_abs(&comm(&a.h, &a.k_inv)));
    let h_e = max_abs(&(comm(&a.h, &a.e) - &a.e * Scalar::new(2.0, 0.0)));
    let h_f = max_abs(&(comm(&a.h, &a.f) + &a.f * Scalar::new(2.0, 0.0)));
    let k_inverse = max_abs(&(&a.k * &a.k_inv - &id)).max(max_abs(&(&a.k_inv * &a.k - &id)));
    let k_e_conjugation = max_abs(&(&a.k * &a.e * &a.k_inv - &a.e * (q * q)));
    let k_f_conjugation = max_abs(&(&a.k * &a.f * &a.k_inv - &a.f * (q * q).inv()));
    let e_f_commutator = max_abs(&(comm(&a.e, &a.f) - (&a.k - &a.k_inv) / (q - q.inv())));
    let nilpotency = max_abs(&a.e.pow(n as u32)).max(max_abs(&a.f.pow(n as u32)));

    // q^H is only meaningful on an H-diagonal basis; off-diagonal H is itself a violation.
    let mut weight_condition = 0.0f64;
    for r in 0..dim {
        for c in 0..dim {
            let expected = if r == c {
                ctx.q_pow(a.h[(r, r)])
            } else {
                weight_condition = weight_condition.max(a.h[(r, c)].norm());
                Scalar::new(0.0, 0.0)
            };
            weight_condition = weight_condition.max((a.k[(r, c)] - expected).norm());
        }
    }

    RelationReport {
        h_k_commute,
        h_e,
        h_f,
        k_inverse,
        k_e_conjugation,
        k_f_conjugation,
        e_f_commutator,
        nilpotency,
        weight_condition,
    }
}

/// Matrix of `word` acting on `V_1 ⊗ ... ⊗ V_k` through the iterated coproduct.
pub fn tensor_action(
    ctx: &RootContext,
    modules: &[WeightModule],
    word: &[Generator],
) -> Result<CMatrix> {
    Ok(tensor_product_action(ctx, modules)?.word(word))
}

/// The iterated-coproduct action on `V_1 ⊗ ... ⊗ V_k`, associated from the left.
pub fn tensor_product_action(ctx: &RootContext, modules: &[WeightModule]) -> Result<Action> {
    let (first, rest) = modules
        .split_first()
        .ok_or_else(|| Error::SignatureMismatch("tensor action over zero modules".into()))?;
    for m in modules {
        if m.dim() != ctx.n() {
            return Err(Error::SignatureMismatch(format!(
                "module of dimension {} in a context with N = {}",
                m.dim(),
                ctx.n()
            )));
        }
    }
    Ok(rest
        .iter()
        .fold(first.action().clone(), |acc, m| acc.tensor(m.action())))
}
