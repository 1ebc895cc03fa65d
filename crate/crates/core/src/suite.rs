//! Randomized verification suite over the structural identities of the
//! engine. Every check reports its worst residual against a fixed threshold.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::invariant::{
    ambidextrous_check, cut_value, f_prime, modified_dim, modified_dim_denominator,
    qdim_via_diagram, s_prime_formula,
};
use crate::qscalar::{relative_residual, RootContext, Scalar};
use crate::ribbon::{braiding, twist, twist_on_tensor, Morphism, ObjectSignature};
use crate::tangle::{BraidGenerator, BraidWord, ColoredLink};
use crate::uqsl2::{check_relations, typical_module, CMatrix, HighestWeight};

/// Floor below which residuals are measured absolutely.
const RELATIVE_FLOOR: f64 = 1e-12;

/// Uniform-ish typical weight: real part in (-3, 3) at least 0.05 from any
/// integer when the imaginary part is zero; imaginary part in (-0.4, 0.4) half
/// of the time.
pub fn random_typical<R: Rng>(rng: &mut R) -> HighestWeight {
    loop {
        let re: f64 = rng.random_range(-3.0..3.0);
        let im: f64 = if rng.random_bool(0.5) {
            rng.random_range(-0.4..0.4)
        } else {
            0.0
        };
        let z = Scalar::new(re - re.round(), im);
        if z.norm() >= 0.05 {
            return HighestWeight::new(re, im);
        }
    }
}

/// Typical weight with `2λ` at least 0.05 away from every integer.
pub fn random_generic<R: Rng>(rng: &mut R) -> HighestWeight {
    loop {
        let w = random_typical(rng);
        let twice = w.0 * 2.0;
        if Scalar::new(twice.re - twice.re.round(), twice.im).norm() >= 0.05 {
            return w;
        }
    }
}

/// Random braid on `2..=max_strands` strands with `1..=max_len` generators.
pub fn random_braid<R: Rng>(rng: &mut R, max_strands: usize, max_len: usize) -> BraidWord {
    let strands = rng.random_range(2..=max_strands);
    let len = rng.random_range(1..=max_len);
    let word = (0..len)
        .map(|_| BraidGenerator {
            index: rng.random_range(1..strands),
            positive: rng.random_bool(0.5),
        })
        .collect();
    BraidWord::new(strands, word).expect("generated indices are in range")
}

pub fn random_link<R: Rng>(rng: &mut R, max_strands: usize, max_len: usize) -> ColoredLink {
    let braid = random_braid(rng, max_strands, max_len);
    let colors = (0..braid.closure_components().len())
        .map(|_| random_typical(rng))
        .collect();
    ColoredLink::new(braid, colors).expect("one color per component")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub n: usize,
    pub samples: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub error: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.max_residual <= self.threshold
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub orders: Vec<usize>,
    pub seed: u64,
    pub eps_abs: f64,
    pub eps_rel: f64,
    /// Zero out `E` before the relation check, to exercise the failure path.
    pub corrupt_relations: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            orders: vec![2, 3],
            seed: 42,
            eps_abs: crate::qscalar::DEFAULT_EPS_ABS,
            eps_rel: crate::qscalar::DEFAULT_EPS_REL,
            corrupt_relations: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

fn check<F>(name: &'static str, n: usize, samples: usize, threshold: f64, body: F) -> CheckResult
where
    F: FnOnce() -> Result<f64>,
{
    match body() {
        Ok(max_residual) => CheckResult {
            name,
            n,
            samples,
            max_residual,
            threshold,
            error: None,
        },
        Err(e) => CheckResult {
            name,
            n,
            samples,
            max_residual: f64::NAN,
            threshold,
            error: Some(e.to_string()),
        },
    }
}

/// Worst `(c⊗1)(1⊗c)(c⊗1) - (1⊗c)(c⊗1)(1⊗c)` on `U⊗V⊗W`.
pub fn yang_baxter_residual(ctx: &RootContext, colors: [HighestWeight; 3]) -> Result<f64> {
    let [u, v, w] = colors.map(|c| typical_module(ctx, c));
    let (u, v, w) = (u?, v?, w?);
    let id = |m: &crate::uqsl2::WeightModule| {
        Morphism::identity(ctx, ObjectSignature::single(m.lambda()))
    };
    let lhs = braiding(ctx, &v, &w)
        .tensor(&id(&u))
        .compose(&id(&v).tensor(&braiding(ctx, &u, &w)))?
        .compose(&braiding(ctx, &u, &v).tensor(&id(&w)))?;
    let rhs = id(&w)
        .tensor(&braiding(ctx, &u, &v))
        .compose(&braiding(ctx, &u, &w).tensor(&id(&v)))?
        .compose(&id(&u).tensor(&braiding(ctx, &v, &w)))?;
    Ok(lhs.distance(&rhs).unwrap_or(f64::INFINITY))
}

/// Worst `θ_{V⊗W} - c_{W,V} c_{V,W} (θ_V ⊗ θ_W)`.
pub fn ribbon_residual(ctx: &RootContext, a: HighestWeight, b: HighestWeight) -> Result<f64> {
    let v = typical_module(ctx, a)?;
    let w = typical_module(ctx, b)?;
    let lhs = twist_on_tensor(ctx, &[v.clone(), w.clone()])?;
    let rhs = braiding(ctx, &w, &v)
        .compose(&braiding(ctx, &v, &w))?
        .compose(&twist(ctx, &v)?.tensor(&twist(ctx, &w)?))?;
    Ok(lhs.distance(&rhs).unwrap_or(f64::INFINITY))
}

/// Relative residual between the cut products of `F'` at every strand, and
/// between `F'` of the link and of its rotation at `at`.
pub fn cut_independence_residual(
    ctx: &RootContext,
    link: &ColoredLink,
    at: usize,
) -> Result<(f64, f64)> {
    let report = f_prime(ctx, link)?;
    let scale = report
        .per_cut
        .iter()
        .map(|c| c.product.norm())
        .fold(0.0, f64::max);
    let cut_res = if scale <= RELATIVE_FLOOR {
        report.max_disagreement
    } else {
        report.max_disagreement / scale
    };
    let rotated = f_prime(ctx, &link.rotated(at)?)?;
    Ok((
        cut_res,
        relative_residual(report.value, rotated.value, RELATIVE_FLOOR),
    ))
}

/// Run the full suite.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut checks = Vec::new();
    for &n in &config.orders {
        let ctx = RootContext::with_tolerances(n, config.eps_abs, config.eps_rel)?;

        checks.push(check("algebra relations", n, 20, 1e-9, || {
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let mut m = typical_module(&ctx, random_typical(&mut rng))?;
                if config.corrupt_relations {
                    let mut a = m.action().clone();
                    a.e = CMatrix::zeros(n, n);
                    m = m.with_action(a);
                }
                worst = worst.max(check_relations(&m).max());
            }
            Ok(worst)
        }));

        checks.push(check("quantum dimension vanishes", n, 50, 1e-12, || {
            let mut worst = 0.0f64;
            for _ in 0..50 {
                worst = worst.max(qdim_via_diagram(&ctx, random_typical(&mut rng))?.norm());
            }
            Ok(worst)
        }));

        checks.push(check("Yang-Baxter", n, 10, 1e-8, || {
            let mut worst = 0.0f64;
            for _ in 0..10 {
                let colors = [(); 3].map(|_| random_typical(&mut rng));
                worst = worst.max(yang_baxter_residual(&ctx, colors)?);
            }
            Ok(worst)
        }));

        if n <= 4 {
            checks.push(check("ribbon compatibility", n, 5, 1e-8, || {
                let mut worst = 0.0f64;
                for _ in 0..5 {
                    let (a, b) = (random_typical(&mut rng), random_typical(&mut rng));
                    worst = worst.max(ribbon_residual(&ctx, a, b)?);
                }
                Ok(worst)
            }));
        }

        checks.push(check(
            "Hopf symmetry d(a)S'(b,a) = d(b)S'(a,b)",
            n,
            50,
            1e-9,
            || {
                let mut worst = 0.0f64;
                for _ in 0..50 {
                    let (a, b) = (random_typical(&mut rng), random_typical(&mut rng));
                    let lhs = modified_dim(&ctx, a)? * s_prime_formula(&ctx, b, a)?;
                    let rhs = modified_dim(&ctx, b)? * s_prime_formula(&ctx, a, b)?;
                    worst = worst.max(relative_residual(lhs, rhs, RELATIVE_FLOOR));
                }
                Ok(worst)
            },
        ));

        checks.push(check(
            "modified dimension ratio identity",
            n,
            50,
            1e-9,
            || {
                let mut worst = 0.0f64;
                for _ in 0..50 {
                    let (l0, l) = (random_typical(&mut rng), random_typical(&mut rng));
                    let lhs = modified_dim_denominator(&ctx, l0)? * s_prime_formula(&ctx, l0, l)?;
                    let rhs = modified_dim_denominator(&ctx, l)? * s_prime_formula(&ctx, l, l0)?;
                    worst = worst.max(relative_residual(lhs, rhs, RELATIVE_FLOOR));
                }
                Ok(worst)
            },
        ));

        checks.push(check("S' formula vs Hopf diagram", n, 20, 1e-8, || {
            let hopf = crate::tangle::parse_braid("1 1")?;
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let (a, b) = (random_typical(&mut rng), random_typical(&mut rng));
                let link = ColoredLink::new(hopf.clone(), vec![a, b])?;
                let diagram = cut_value(&ctx, &link, 0)?;
                let formula = s_prime_formula(&ctx, b, a)?;
                worst = worst.max(relative_residual(diagram, formula, RELATIVE_FLOOR));
            }
            Ok(worst)
        }));

        if n <= 3 {
            let mut markov = 0.0f64;
            let cut = check("cut independence", n, 10, 1e-8, || {
                let mut worst = 0.0f64;
                for _ in 0..10 {
                    let link = random_link(&mut rng, 4, 8);
                    let at = rng.random_range(0..=link.braid().len());
                    let (c, m) = cut_independence_residual(&ctx, &link, at)?;
                    worst = worst.max(c);
                    markov = markov.max(m);
                }
                Ok(worst)
            });
            let failed = cut.error.is_some();
            checks.push(cut);
            checks.push(CheckResult {
                name: "Markov conjugation",
                n,
                samples: 10,
                max_residual: if failed { f64::NAN } else { markov },
                threshold: 1e-8,
                error: failed.then(|| "cut independence check failed".to_string()),
            });
        }

        if n <= 4 {
            let lambda0 = random_generic(&mut rng);
            checks.push(check("ambidexterity of J0", n, 1, 1e-8, || {
                let r = ambidextrous_check(&ctx, lambda0)?;
                if r.commutant_dimension != n {
                    return Ok(f64::INFINITY);
                }
                Ok(r.max_trace_residual.max(r.max_braiding_commutator))
            }));
        }
    }
    Ok(SuiteReport {
        seed: config.seed,
        checks,
    })
}
