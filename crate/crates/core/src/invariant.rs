//! The renormalized invariant `F'`.
//!
//! Every typical module has vanishing quantum dimension, so the usual
//! invariant is zero on any link with a typical color. `F'` instead cuts one
//! strand open, evaluates the resulting (1,1)-tangle to a scalar `<T_V>`, and
//! multiplies by the modified dimension
//! `d(V_λ) = 1 / Π_{j=0}^{N-2} {λ + N - j}`. The product does not depend on
//! which strand is cut; [`f_prime`] cuts every strand and checks that.

use nalgebra::DVector;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qscalar::{ensure_finite, RootContext, Scalar};
use crate::ribbon::{
    braiding, left_pivot, partial_trace_left, partial_trace_right, pivot_diagonal,
    quantum_dimension, quantum_trace, right_pivot, scalar_of_matrix, twist_scalar, Morphism,
    ObjectSignature,
};
use crate::tangle::{ColoredLink, CompiledBraid};
use crate::uqsl2::{
    max_abs, tensor_product_action, typical_module, CMatrix, Generator, HighestWeight,
};

/// `s` such that `m = s · Id_V` for a single-strand endomorphism.
pub fn scalar_of_endo(ctx: &RootContext, m: &Morphism) -> Result<Scalar> {
    if m.domain() != m.codomain() || m.domain().len() != 1 {
        return Err(Error::SignatureMismatch(format!(
            "expected an endomorphism of one strand, got {} -> {}",
            m.domain(),
            m.codomain()
        )));
    }
    scalar_of_matrix(ctx, m.matrix())
}

/// Open the closure of `link` at bottom position `strand`: every other
/// position is closed, those left of the cut around the left (pivot
/// `K^{N-1}`) and those right of it around the right (pivot `K^{1-N}`).
///
/// The braid is propagated one basis column at a time, so memory stays at
/// `O(N^k)` per worker.
pub fn cut_endomorphism(ctx: &RootContext, link: &ColoredLink, strand: usize) -> Result<Morphism> {
    let k = link.braid().strands();
    if strand >= k {
        return Err(Error::Range {
            what: "cut strand",
            index: strand,
            bound: k,
        });
    }
    let n = ctx.n();
    let colors = link.strand_colors();
    let compiled = CompiledBraid::new(ctx, link.braid(), &colors)?;
    debug_assert_eq!(compiled.top_colors(), &colors[..]);

    let pivots: Vec<Vec<Scalar>> = colors
        .iter()
        .enumerate()
        .map(|(q, &c)| {
            let v = typical_module(ctx, c)?;
            Ok(if q < strand {
                pivot_diagonal(&left_pivot(&v))
            } else {
                pivot_diagonal(&right_pivot(&v))
            })
        })
        .collect::<Result<_>>()?;

    let stride = |q: usize| n.pow((k - 1 - q) as u32);
    let cut_stride = stride(strand);
    let closed: Vec<usize> = (0..k).filter(|&q| q != strand).collect();
    let rest = n.pow((k - 1) as u32);

    let zero = || CMatrix::zeros(n, n);
    let endo = (0..n * rest)
        .into_par_iter()
        .fold(zero, |mut acc, job| {
            let (x, m) = (job / rest, job % rest);
            // digits of m, most significant first, fill the closed positions
            let mut offset = 0;
            let mut weight = Scalar::new(1.0, 0.0);
            let mut rem = m;
            for &q in closed.iter().rev() {
                let digit = rem % n;
                rem /= n;
                offset += digit * stride(q);
                weight *= pivots[q][digit];
            }
            let out = compiled.column(offset + x * cut_stride);
            for y in 0..n {
                acc[(y, x)] += weight * out[offset + y * cut_stride];
            }
            acc
        })
        .reduce(zero, |a, b| a + b);

    let sig = ObjectSignature::single(colors[strand]);
    Morphism::new(ctx, sig.clone(), sig, endo)
}

/// `<T_V>`: the scalar of the (1,1)-tangle obtained by cutting `strand`.
pub fn cut_value(ctx: &RootContext, link: &ColoredLink, strand: usize) -> Result<Scalar> {
    scalar_of_endo(ctx, &cut_endomorphism(ctx, link, strand)?)
}

/// The same cut computed from the dense compiled morphism and the
/// [`partial_trace_left`]/[`partial_trace_right`] operations.
pub fn cut_endomorphism_dense(
    ctx: &RootContext,
    link: &ColoredLink,
    strand: usize,
) -> Result<Morphism> {
    let k = link.braid().strands();
    if strand >= k {
        return Err(Error::Range {
            what: "cut strand",
            index: strand,
            bound: k,
        });
    }
    let mut m = crate::tangle::compile(ctx, link)?;
    for _ in strand + 1..k {
        m = partial_trace_right(ctx, &m)?;
    }
    for _ in 0..strand {
        m = partial_trace_left(ctx, &m)?;
    }
    Ok(m)
}

fn check_pole(ctx: &RootContext, factor: Scalar) -> Result<Scalar> {
    if factor.norm() < ctx.eps_abs {
        Err(Error::Pole {
            re: factor.re,
            im: factor.im,
        })
    } else {
        Ok(factor)
    }
}

/// `Π_{j=0}^{N-2} {λ + N - j}`.
pub fn modified_dim_denominator(ctx: &RootContext, lambda: HighestWeight) -> Result<Scalar> {
    let n = ctx.n() as f64;
    (0..ctx.n() - 1)
        .map(|j| check_pole(ctx, ctx.qbracket(lambda.0 + n - j as f64)))
        .product()
}

/// Modified dimension `d(V_λ) = 1 / Π_{j=0}^{N-2} {λ + N - j}`.
pub fn modified_dim(ctx: &RootContext, lambda: HighestWeight) -> Result<Scalar> {
    lambda.ensure_typical(ctx)?;
    ensure_finite(
        modified_dim_denominator(ctx, lambda)?.inv(),
        "modified dimension",
    )
}

/// `{N x} / {x}` as the Laurent polynomial `Σ_{m=0}^{N-1} q^{(N-1-2m) x}`.
pub fn bracket_ratio(ctx: &RootContext, x: Scalar) -> Scalar {
    let n = ctx.n() as f64;
    (0..ctx.n())
        .map(|m| ctx.q_pow((n - 1.0 - 2.0 * m as f64) * x))
        .sum()
}

/// Closed form of `S'(V_λ, V_λ')`, the scalar of a `V_λ`-colored loop around an
/// open `V_λ'` strand:
/// `q^{(λ+1-N)(λ'+1-N)} {N(λ'+1-N)} / {λ'+1-N}`.
pub fn s_prime_formula(
    ctx: &RootContext,
    lambda: HighestWeight,
    lambda_prime: HighestWeight,
) -> Result<Scalar> {
    lambda.ensure_typical(ctx)?;
    let n = ctx.n() as f64;
    let x = lambda_prime.0 + 1.0 - n;
    let value = ctx.q_pow((lambda.0 + 1.0 - n) * x) * bracket_ratio(ctx, x);
    ensure_finite(value, "S' formula")
}

/// `d_J(V) = d_0 S'(V, J) / S'(J, V)` for the reference `J = V_{λ0}` with
/// `d_0 = d(V_{λ0})`.
pub fn modified_dim_via_reference(
    ctx: &RootContext,
    lambda: HighestWeight,
    reference: HighestWeight,
) -> Result<Scalar> {
    let d0 = modified_dim(ctx, reference)?;
    let num = s_prime_formula(ctx, lambda, reference)?;
    let den = check_pole(ctx, s_prime_formula(ctx, reference, lambda)?)?;
    ensure_finite(d0 * num / den, "reference modified dimension")
}

/// Whether `V_μ` belongs to the class `{V : S'(J, V) ≠ 0}` of the reference `J = V_{λ0}`.
pub fn in_reference_class(
    ctx: &RootContext,
    reference: HighestWeight,
    mu: HighestWeight,
) -> Result<bool> {
    let s = s_prime_formula(ctx, reference, mu)?;
    Ok(s.norm() > ctx.tolerance_at(1.0))
}

/// One cut of a link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutRecord {
    pub component: usize,
    pub strand: usize,
    /// `<T_V>`.
    pub cut: Scalar,
    pub modified_dim: Scalar,
    /// `d(V) <T_V>`.
    pub product: Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    /// `F'(L)` of the blackboard-framed closure.
    pub value: Scalar,
    pub per_cut: Vec<CutRecord>,
    /// Largest pairwise distance between cut products.
    pub max_disagreement: f64,
    /// Threshold `max_disagreement` was checked against.
    pub tolerance: f64,
    /// Blackboard writhe per component.
    pub framing: Vec<i64>,
    /// `value · Π_c θ_c^{-w_c}`: the invariant at zero framing on every component.
    pub unframed_value: Scalar,
}

/// `Π_c θ_{V_c}^{-w_c}`. A positive kink on a component colored `V`
/// multiplies `F'` by the twist scalar of `V`, so this factor removes the
/// blackboard framing.
pub fn framing_correction(ctx: &RootContext, link: &ColoredLink) -> Result<Scalar> {
    link.colors()
        .iter()
        .zip(link.framing())
        .map(|(&c, &w)| {
            let theta = twist_scalar(ctx, &typical_module(ctx, c)?)?;
            Ok(theta.powi(-(w as i32)))
        })
        .product()
}

/// `d(V) <T_V>` for a cut at every strand.
pub fn cut_records(ctx: &RootContext, link: &ColoredLink) -> Result<Vec<CutRecord>> {
    for &c in link.colors() {
        c.ensure_typical(ctx)?;
    }
    (0..link.braid().strands())
        .map(|strand| {
            let color = link.strand_color(strand);
            let cut = cut_value(ctx, link, strand)?;
            let d = modified_dim(ctx, color)?;
            Ok(CutRecord {
                component: link.component_of(strand),
                strand,
                cut,
                modified_dim: d,
                product: ensure_finite(d * cut, "cut product")?,
            })
        })
        .collect()
}

/// Check that the cut products agree to within ten times the composite
/// tolerance and average them.
pub fn assemble_report(
    ctx: &RootContext,
    link: &ColoredLink,
    per_cut: Vec<CutRecord>,
) -> Result<InvariantReport> {
    if per_cut.is_empty() {
        return Err(Error::SignatureMismatch("no cuts to assemble".into()));
    }
    let mut spread = 0.0f64;
    let mut scale = 0.0f64;
    for a in &per_cut {
        scale = scale.max(a.product.norm());
        for b in &per_cut {
            spread = spread.max((a.product - b.product).norm());
        }
    }
    let tolerance = 10.0 * ctx.tolerance_at(scale);
    if spread > tolerance {
        return Err(Error::Disagreement { spread, tolerance });
    }
    let value = per_cut.iter().map(|c| c.product).sum::<Scalar>() / per_cut.len() as f64;
    let unframed_value = value * framing_correction(ctx, link)?;
    Ok(InvariantReport {
        value,
        per_cut,
        max_disagreement: spread,
        tolerance,
        framing: link.framing().to_vec(),
        unframed_value,
    })
}

/// `F'(L) = d(V) <T_V>`, evaluated at every strand.
pub fn f_prime(ctx: &RootContext, link: &ColoredLink) -> Result<InvariantReport> {
    assemble_report(ctx, link, cut_records(ctx, link)?)
}

/// `dim_C(V_λ) = d'_V ∘ b_V`, zero for every typical `λ`.
pub fn qdim_via_diagram(ctx: &RootContext, lambda: HighestWeight) -> Result<Scalar> {
    Ok(quantum_dimension(&typical_module(ctx, lambda)?))
}

/// `q^{(1-N)λ} (1 - q^{-2N}) / (1 - q^{-2})`, the geometric-series form of
/// `Σ_i q^{(1-N)(λ-2i)}` before using `q^{2N} = 1`.
pub fn qdim_geometric_form(ctx: &RootContext, lambda: HighestWeight) -> Scalar {
    let n = ctx.n() as f64;
    ctx.q_pow((1.0 - n) * lambda.0) * (1.0 - ctx.q_pow_re(-2.0 * n)) / (1.0 - ctx.q_pow_re(-2.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbidextrousReport {
    /// Dimension of `End(J ⊗ J)`.
    pub commutant_dimension: usize,
    /// Max over the basis of `‖tr_L(f) - tr_R(f)‖`.
    pub max_trace_residual: f64,
    /// Max over the basis of `|tr_C(tr_L(f) - tr_R(f))|`.
    pub max_scalar_trace_residual: f64,
    /// Max over the basis of `‖c_{J,J} f - f c_{J,J}‖`.
    pub max_braiding_commutator: f64,
    /// Max over the basis of `‖[f, x]‖`, `x ∈ {E, F, K, H}`.
    pub max_commutant_residual: f64,
    /// Smallest singular value kept outside the null space, relative to the largest.
    pub spectral_gap: f64,
}

/// Relative singular-value threshold separating the commutant from the rest.
const NULL_SPACE_THRESHOLD: f64 = 1e-8;

/// A basis of `End(J ⊗ J)`: the common solutions of `[f, x] = 0` for
/// `x ∈ {E, F, K, H}` acting through the coproduct.
pub fn commutant_basis(ctx: &RootContext, lambda0: HighestWeight) -> Result<(Vec<CMatrix>, f64)> {
    let j = typical_module(ctx, lambda0)?;
    let action = tensor_product_action(ctx, &[j.clone(), j])?;
    let d = action.dim();
    let id = CMatrix::identity(d, d);
    let gens = [Generator::E, Generator::F, Generator::K, Generator::H];
    let mut system = CMatrix::zeros(gens.len() * d * d, d * d);
    for (b, g) in gens.iter().enumerate() {
        let x = action.generator(*g);
        // column-major vec: vec(fX) = (X^T ⊗ I) vec f, vec(Xf) = (I ⊗ X) vec f
        let block = x.transpose().kronecker(&id) - id.kronecker(x);
        system
            .view_mut((b * d * d, 0), (d * d, d * d))
            .copy_from(&block);
    }
    let svd = system.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let sigma_max = svd.singular_values.max();
    let cutoff = NULL_SPACE_THRESHOLD * sigma_max.max(1.0);
    let mut basis = Vec::new();
    let mut smallest_kept = f64::INFINITY;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff {
            let v: DVector<Scalar> = v_t.row(i).adjoint();
            basis.push(CMatrix::from_column_slice(d, d, v.as_slice()));
        } else {
            smallest_kept = smallest_kept.min(s);
        }
    }
    Ok((basis, smallest_kept / sigma_max.max(1.0)))
}

/// Verify that `J = V_{λ0}` is ambidextrous: compute `End(J ⊗ J)` and compare
/// the left and right partial traces on every basis element.
pub fn ambidextrous_check(ctx: &RootContext, lambda0: HighestWeight) -> Result<AmbidextrousReport> {
    let doubled = HighestWeight(lambda0.0 * 2.0);
    if doubled.as_integer(ctx.eps_abs).is_some() {
        return Err(Error::Genericity {
            re: lambda0.0.re,
            im: lambda0.0.im,
        });
    }
    let j = typical_module(ctx, lambda0)?;
    let (basis, spectral_gap) = commutant_basis(ctx, lambda0)?;
    let sig = ObjectSignature(vec![lambda0, lambda0]);
    let c = braiding(ctx, &j, &j).into_matrix();
    let action = tensor_product_action(ctx, &[j.clone(), j])?;

    let mut report = AmbidextrousReport {
        commutant_dimension: basis.len(),
        max_trace_residual: 0.0,
        max_scalar_trace_residual: 0.0,
        max_braiding_commutator: 0.0,
        max_commutant_residual: 0.0,
        spectral_gap,
    };
    for f in basis {
        for g in [Generator::E, Generator::F, Generator::K, Generator::H] {
            let x = action.generator(g);
            report.max_commutant_residual = report
                .max_commutant_residual
                .max(max_abs(&(&f * x - x * &f)));
        }
        report.max_braiding_commutator = report
            .max_braiding_commutator
            .max(max_abs(&(&c * &f - &f * &c)));
        let morph = Morphism::new(ctx, sig.clone(), sig.clone(), f)?;
        let left = partial_trace_left(ctx, &morph)?;
        let right = partial_trace_right(ctx, &morph)?;
        report.max_trace_residual = report
            .max_trace_residual
            .max(max_abs(&(left.matrix() - right.matrix())));
        let diff = Morphism::new(
            ctx,
            left.domain().clone(),
            left.codomain().clone(),
            left.matrix() - right.matrix(),
        )?;
        report.max_scalar_trace_residual = report
            .max_scalar_trace_residual
            .max(quantum_trace(ctx, &diff)?.norm());
    }
    Ok(report)
}
