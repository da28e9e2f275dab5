//! Verification stages over a parameter grid.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::rational::{frac, int, to_pq, Rational};
use crate::exactalg::RatFunc;
use crate::laguerre::{
    eigen_polys, first_kind_relations, gram_schmidt_support, rayleigh_quotients, restricted_matrix,
    second_kind_relations,
};
use crate::models::{
    gauge_self_check, gd_self_test, make_model, scaling_relation_check, sector_preservation_numeric,
    shape_invariance_check, singularity_scan, susy_breaking_classification, ExampleId, Grid,
    SusyStatus,
};
use crate::qalgebra::{verify_intertwining, Sign};
use crate::quasiops::{
    action_expansion, build, build_check_h_plus, build_h_minus, build_j, restricted_columns, Family,
};
use crate::report::{CheckRecord, Status, VerificationReport};
use crate::susybuild::{
    build_gauged_pair, build_p_plus, charge_kernel_report, verify_preservation_plus, w_tilde_closed,
    w_tilde_general,
};
use crate::x2spaces::{
    degenerate_checks, o_plus_factorizations, phi_factorization_holds, x2a_basis, x2b_basis,
    ParamContext,
};

/// A group of related checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Spaces,
    Quasiops,
    Gauged,
    Physical,
    Models,
    Laguerre,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Spaces,
        Stage::Quasiops,
        Stage::Gauged,
        Stage::Physical,
        Stage::Models,
        Stage::Laguerre,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Spaces => "spaces",
            Stage::Quasiops => "quasiops",
            Stage::Gauged => "gauged",
            Stage::Physical => "physical",
            Stage::Models => "models",
            Stage::Laguerre => "laguerre",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown stage {s:?} (expected one of spaces, quasiops, gauged, physical, models, laguerre)"
                ))
            })
    }
}

/// What to verify and where.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub stages: Vec<Stage>,
    pub enns: Vec<u32>,
    /// Explicit `α` values; when empty, `samples` values are drawn from `seed`.
    pub alphas: Vec<Rational>,
    pub samples: usize,
    pub seed: u64,
    /// Weights of the generic cells; `None` uses a fixed all-nonzero set.
    pub weights: Option<[Rational; 4]>,
    pub c0: Rational,
    pub timings: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            stages: Stage::ALL.to_vec(),
            enns: vec![3, 4, 5],
            alphas: Vec::new(),
            samples: 8,
            seed: 0,
            weights: None,
            c0: Rational::zero(),
            timings: false,
        }
    }
}

impl VerifyConfig {
    /// `N ∈ 3..=8` and 25 samples.
    pub fn thorough() -> Self {
        VerifyConfig {
            enns: (3..=8).collect(),
            samples: 25,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            return Err(Error::Domain("no stage selected".into()));
        }
        if self.enns.is_empty() {
            return Err(Error::Domain("no N value selected".into()));
        }
        for &n in &self.enns {
            if n < 3 {
                return Err(Error::Domain(format!("N = {n} is not allowed: N > 2 is required")));
            }
        }
        for a in &self.alphas {
            let n_max = *self.enns.iter().max().expect("non-empty");
            if !alpha_is_generic(a, n_max) {
                return Err(Error::Domain(format!(
                    "degenerate alpha = {}: the constraint alpha != 0, 1 (and alpha + k != 0, 1 for k <= N) is violated",
                    to_pq(a)
                )));
            }
        }
        if self.alphas.is_empty() && self.samples == 0 {
            return Err(Error::Domain("samples must be positive".into()));
        }
        Ok(())
    }

    fn generic_weights(&self) -> [Rational; 4] {
        self.weights
            .clone()
            .unwrap_or_else(|| [int(1), frac(1, 3), int(-2), frac(2, 5)])
    }

    fn alpha_grid(&self) -> Vec<Rational> {
        if self.alphas.is_empty() {
            let n_max = *self.enns.iter().max().unwrap_or(&3);
            sample_alphas(self.seed, self.samples, n_max)
        } else {
            self.alphas.clone()
        }
    }
}

/// `α ± k ∉ {0, 1}` for `k ≤ N+1`, and `2α ± N − 1 ≠ 0`.
pub fn alpha_is_generic(alpha: &Rational, n_max: u32) -> bool {
    let n = n_max as i64;
    let hits_integer = alpha.is_integer() && {
        let v = alpha.to_integer();
        v >= num_bigint::BigInt::from(-n - 2) && v <= num_bigint::BigInt::from(n + 2)
    };
    let two = int(2) * alpha;
    let hits_half = two.is_integer() && two.abs() <= int(2 * n + 4);
    !hits_integer && !hits_half
}

/// `count` distinct generic rationals `p/q`, `1 ≤ q ≤ 9`, `|p/q| ≤ 12`, from
/// a ChaCha stream seeded with `seed`.
pub fn sample_alphas(seed: u64, count: usize, n_max: u32) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    while out.len() < count {
        let q: i64 = rng.gen_range(1..=9);
        let p: i64 = rng.gen_range(-12 * q..=12 * q);
        let a = frac(p, q);
        if alpha_is_generic(&a, n_max) && !out.contains(&a) {
            out.push(a);
        }
    }
    out
}

/// `1 + |α|` keeps the models and Laguerre stages on their `α > 1` branch.
fn physical_alpha(a: &Rational) -> Rational {
    Rational::one() + a.abs()
}

struct Recorder {
    stage: Stage,
    timings: bool,
}

type CheckOutcome = (bool, Option<f64>, Option<String>);

impl Recorder {
    fn run(
        &self,
        id: &str,
        anchor: &str,
        params: &[(&str, String)],
        f: impl FnOnce() -> Result<CheckOutcome>,
    ) -> CheckRecord {
        let t = Instant::now();
        let (ok, residual, witness) = match f() {
            Ok(x) => x,
            Err(e) => (false, None, Some(e.to_string())),
        };
        CheckRecord {
            stage: self.stage.name().into(),
            id: id.into(),
            anchor: anchor.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            status: Status::from_bool(ok),
            residual,
            witness,
            wall_ms: self.timings.then(|| t.elapsed().as_secs_f64() * 1e3),
        }
    }
}

fn cell_params(n: u32, a: &Rational) -> Vec<(&'static str, String)> {
    vec![("N", n.to_string()), ("alpha", to_pq(a))]
}

fn flag(ok: bool) -> Result<CheckOutcome> {
    Ok((ok, None, None))
}

fn flag_with(ok: bool, witness: String) -> Result<CheckOutcome> {
    Ok((ok, None, (!ok).then_some(witness)))
}

fn spaces_cell(rec: &Recorder, n: u32, a: &Rational, w: &[Rational; 4]) -> Vec<CheckRecord> {
    let p = cell_params(n, a);
    let ctx = || Ok::<_, Error>(ParamContext::new(a.clone(), n)?.with_weights(w.clone()));
    vec![
        rec.run("x2-bases", "phi_n and chi_n are independent of degree n+1", &p, || {
            let xa = x2a_basis(a, n)?;
            let xb = x2b_basis(a, n)?;
            let degrees = xa.elements().iter().chain(xb.elements()).enumerate().all(|(k, e)| {
                e.degree() == Some(k % n as usize + 2)
            });
            flag(degrees)
        }),
        rec.run("phi-factorization", "factorization under the action of d - 1", &p, || {
            flag((1..=n).all(|k| phi_factorization_holds(k, a)))
        }),
        rec.run("o-plus-factorization", "O1+ and O2+ factorization properties", &p, || {
            for k in 1..=n {
                o_plus_factorizations(a, k)?;
            }
            flag(true)
        }),
        rec.run("exceptional-witness", "some J_i 1 is not a polynomial", &p, || {
            let c = ctx()?;
            let one = crate::exactalg::Poly::one();
            let mut any = false;
            for i in 1..=4 {
                any |= !build_j(i, &c)?.apply_poly(&one).is_polynomial();
            }
            flag(any)
        }),
        rec.run("flag-boundary", "J2..J4, K2..K4 leave the N+1 dimensional span", &p, || {
            let c = ctx()?;
            let bases = [
                (Family::J, x2a_basis(a, n + 1)?),
                (Family::K, x2b_basis(a, n + 1)?),
            ];
            let mut bad = Vec::new();
            for (fam, basis) in &bases {
                for i in 2..=4 {
                    let op = build(*fam, i, &c)?;
                    let top = basis.elements().last().expect("non-empty");
                    if basis.membership_rat(&op.apply_poly(top)).is_some() {
                        bad.push(format!("{fam}{i}"));
                    }
                }
            }
            flag_with(bad.is_empty(), format!("still preserved: {}", bad.join(", ")))
        }),
    ]
}

fn quasiops_cell(rec: &Recorder, n: u32, a: &Rational, w: &[Rational; 4], c0: &Rational) -> Vec<CheckRecord> {
    let p = cell_params(n, a);
    let ctx = || Ok::<_, Error>(ParamContext::new(a.clone(), n)?.with_weights(w.clone()).with_c0(c0.clone()));
    let mut out = Vec::new();
    for fam in [Family::J, Family::K] {
        out.push(rec.run(
            &format!("{fam}-invariance"),
            "each operator maps the N-dimensional space into itself",
            &p,
            || {
                let c = ctx()?;
                let basis = match fam {
                    Family::J => x2a_basis(a, n)?,
                    Family::K => x2b_basis(a, n)?,
                };
                let mut bad = Vec::new();
                for i in 1..=4 {
                    if restricted_columns(&build(fam, i, &c)?, &basis).is_none() {
                        bad.push(i);
                    }
                }
                flag_with(bad.is_empty(), format!("indices leaving the space: {bad:?}"))
            },
        ));
        out.push(rec.run(
            &format!("{fam}-action-formulas"),
            "expansion coordinates equal s, t1, t2 action formulas",
            &p,
            || {
                let c = ctx()?;
                let mut undefined = 0;
                for i in 1..=4 {
                    for k in 1..=n {
                        match action_expansion(fam, i, k, &c) {
                            Ok(_) => {}
                            Err(Error::CoefficientFormUnavailable(_)) => undefined += 1,
                            Err(e) => return Err(e),
                        }
                    }
                }
                Ok((true, None, (undefined > 0).then(|| format!("{undefined} closed forms undefined"))))
            },
        ));
    }
    out.push(rec.run("h-minus", "H-minus from J sums equals the A, B, C, D closed form", &p, || {
        build_h_minus(&ctx()?)?;
        flag(true)
    }));
    out.push(rec.run(
        "h-plus",
        "conjugated H-plus equals the B+, C+ closed forms up to c0+",
        &p,
        || {
            let (_, parts) = build_check_h_plus(&ctx()?)?;
            let c0p = parts.plus.map(|x| to_pq(&x.c0_plus)).unwrap_or_default();
            Ok((true, None, Some(format!("c0+ = {c0p}"))))
        },
    ));
    out
}

fn gauged_cell(rec: &Recorder, n: u32, a: &Rational, w: &[Rational; 4]) -> Vec<CheckRecord> {
    let p = cell_params(n, a);
    let ctx = || Ok::<_, Error>(ParamContext::new(a.clone(), n)?.with_weights(w.clone()));
    vec![
        rec.run("charge-kernels", "P- and P+ annihilate exactly the N basis functions", &p, || {
            let r = charge_kernel_report(&ctx()?)?;
            let ok = r.minus_annihilates
                && r.plus_annihilates
                && r.minus_next_is_gamma_multiple
                && r.plus_next_nonzero
                && r.leading_is_one
                && (n > 6 || r.kernel_dimension == n as usize);
            flag_with(ok, format!("{r:?}"))
        }),
        rec.run("w-tilde", "w_{N-1} = -(N-1) f'/f(alpha) - f'/f(alpha+N)", &p, || {
            let r = charge_kernel_report(&ctx()?)?;
            flag(r.w_matches_coefficient && w_tilde_closed(a, n) == w_tilde_general(a, n))
        }),
        rec.run("p-plus-transpose", "product form equals the transpose-sum form", &p, || {
            build_p_plus(&ctx()?)?;
            flag(true)
        }),
        rec.run("gauged-pair", "lower sign of H-bar reproduces H-tilde-minus", &p, || {
            build_gauged_pair(&ctx()?)?;
            flag(true)
        }),
        rec.run("plus-preservation", "H-check-plus preserves the chi space at alpha+N", &p, || {
            flag(verify_preservation_plus(&ctx()?)?.preserved)
        }),
    ]
}

fn physical_cell(rec: &Recorder, n: u32, a: &Rational, w: &[Rational; 4]) -> Vec<CheckRecord> {
    let pa = physical_alpha(a);
    let sets: [(&str, Result<ParamContext>); 3] = [
        ("example1", ParamContext::example1(pa.clone(), n)),
        ("example2", ParamContext::example2(pa.clone(), n)),
        ("generic", ParamContext::new(a.clone(), n).map(|c| c.with_weights(w.clone()))),
    ];
    sets.into_iter()
        .map(|(name, ctx)| {
            let alpha = if name == "generic" { a.clone() } else { pa.clone() };
            let mut p = cell_params(n, &alpha);
            p.push(("weights", name.to_string()));
            rec.run("intertwining", "P-H- - H+P- = 0 and P+H+ - H-P+ = 0", &p, || {
                let r = verify_intertwining(&ctx?)?;
                flag_with(r.passed(), format!("{r:?}"))
            })
        })
        .collect()
}

fn models_cell(rec: &Recorder, n: u32, a: &Rational) -> Vec<CheckRecord> {
    let pa = physical_alpha(a);
    let mut out = Vec::new();
    for ex in [ExampleId::Rational, ExampleId::Hyperbolic] {
        let mut p = cell_params(n, &pa);
        p.push(("example", ex.to_string()));
        let model = || make_model(ex, &ex.context(pa.clone(), n, Rational::zero())?);
        let grid = match ex {
            ExampleId::Rational => Grid::new(0.2, 4.0, 60),
            ExampleId::Hyperbolic => Grid::new(-3.0, 3.0, 61),
        }
        .expect("fixed grid is valid");
        out.push(rec.run("closed-form-potentials", "displayed V+- equal the assembled potentials", &p, || {
            let m = model()?;
            Ok((true, Some(m.closed_form_deviation), None))
        }));
        out.push(rec.run("gauge-consistency", "W' = (N-1)/2 E -+ W and sector gauges", &p, || {
            let r = gauge_self_check(&model()?, &grid, 1e-4);
            let worst = r.derivative_match.max_residual.max(r.e_w_match.max_residual);
            Ok((r.e_w_match.passed && r.derivative_match.passed && r.factor_match.passed, Some(worst), None))
        }));
        for sign in [Sign::Minus, Sign::Plus] {
            out.push(rec.run(
                &format!("sector-preservation-{sign}"),
                "H preserves the solvable sector",
                &p,
                || {
                    let r = sector_preservation_numeric(&model()?, sign, &grid, 1e-3, 1e-6)?;
                    Ok((r.residual.passed, Some(r.residual.max_residual), None))
                },
            ));
        }
        out.push(rec.run("susy-classification", "example 1 unbroken, example 2 broken", &p, || {
            let c = susy_breaking_classification(&model()?);
            let want = match ex {
                ExampleId::Rational => SusyStatus::Unbroken,
                ExampleId::Hyperbolic => SusyStatus::Broken,
            };
            flag_with(c.status == want, format!("{:?}", c.status))
        }));
        out.push(rec.run("scaling", "V(q; nu a, nu c0) = nu V(sqrt(nu) q; a, c0)", &p, || {
            let m = model()?;
            let mut worst: f64 = 0.0;
            let mut ok = true;
            for nu in [frac(1, 2), int(4)] {
                let r = scaling_relation_check(&m, &nu)?;
                ok &= r.potentials.passed && r.change_of_variable.passed;
                worst = worst.max(r.potentials.max_residual);
            }
            Ok((ok, Some(worst), None))
        }));
        out.push(rec.run("singularities", "no finite-q singularity; pole at 0 for example 1", &p, || {
            let r = singularity_scan(&model()?, &Grid::new(-6.0, 6.0, 241)?);
            let ok = match ex {
                ExampleId::Rational => r.f_has_no_real_roots && r.pole_at_origin == Some(true),
                ExampleId::Hyperbolic => r.f_has_no_real_roots && r.all_finite_on_grid,
            };
            flag_with(ok, format!("{r:?}"))
        }));
    }
    let mut p = cell_params(n, &pa);
    p.push(("example", "1".into()));
    out.push(rec.run("shape-invariance", "V+(alpha) - V-(alpha+N) = 2N", &p, || {
        let r = shape_invariance_check(&ParamContext::example1(pa.clone(), n)?)?;
        Ok((r.passed, Some(r.std_dev), None))
    }));
    out.push(rec.run("restricted-spectrum", "solvable spectrum 2(n+1)", &p, || {
        let m = restricted_matrix(&ParamContext::example1(pa.clone(), n)?, Sign::Minus)?;
        let want: Vec<Rational> = (1..=n as i64).map(|k| int(2 * (k + 1))).collect();
        flag(m.is_triangular() && m.diagonal() == want)
    }));
    out
}

fn laguerre_cell(rec: &Recorder, a: &Rational) -> Vec<CheckRecord> {
    let pa = physical_alpha(a);
    let p = vec![("alpha", to_pq(a))];
    let pp = vec![("alpha", to_pq(&pa))];
    vec![
        rec.run("second-kind", "phi-combinations are J1 eigenvectors", &p, || {
            let r = second_kind_relations(a)?;
            flag_with(r.passed(), format!("{r:?}"))
        }),
        rec.run("first-kind", "chi(-z;-alpha) combinations are reflected K1 eigenvectors", &p, || {
            let r = first_kind_relations(a)?;
            flag_with(r.passed(), format!("{r:?}"))
        }),
        rec.run("eigen-combinations", "eigenpolynomials n <= 6 are J1 eigenvectors", &pp, || {
            let ctx = ParamContext::example1(pa.clone(), 6)?;
            let j1 = build_j(1, &ctx)?;
            let ok = eigen_polys(&ctx)?.iter().all(|e| {
                j1.apply_poly(&e.poly) == RatFunc::from_poly(e.poly.scale(&-int(e.n as i64 + 1)))
            });
            flag(ok)
        }),
    ]
}

fn global_checks(rec_for: impl Fn(Stage) -> Recorder, stages: &[Stage]) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    if stages.contains(&Stage::Spaces) {
        let rec = rec_for(Stage::Spaces);
        for (a, name) in [(int(0), "alpha=0 summation identity"), (int(1), "alpha=1 collapse to (n-1) z^(n+1)")] {
            out.push(rec.run("degenerate", name, &[("alpha", to_pq(&a)), ("n_max", "10".into())], || {
                let r = degenerate_checks(&a, 10)?;
                flag(r.passed)
            }));
        }
    }
    if stages.contains(&Stage::Models) {
        let rec = rec_for(Stage::Models);
        out.push(rec.run("example1-value", "V-(1) = 547/200", &[("alpha", "2".into()), ("N", "3".into())], || {
            let v = make_model(ExampleId::Rational, &ParamContext::example1(int(2), 3)?)?.v(Sign::Minus, 1.0);
            let r = (v - 2.735).abs();
            Ok((r < 1e-12, Some(r), None))
        }));
        out.push(rec.run("example2-value", "V-(0) = 25/4", &[("alpha", "2".into()), ("N", "3".into())], || {
            let v = make_model(ExampleId::Hyperbolic, &ParamContext::example2(int(2), 3)?)?.v(Sign::Minus, 0.0);
            let r = (v - 6.25).abs();
            Ok((r < 1e-12, Some(r), None))
        }));
        out.push(rec.run("gd-kernel", "gd' = sech", &[], || {
            let r = gd_self_test(&Grid::new(-5.0, 5.0, 101)?, 1e-3);
            Ok((r.passed, Some(r.max_residual), None))
        }));
    }
    if stages.contains(&Stage::Laguerre) {
        let rec = rec_for(Stage::Laguerre);
        for a in [int(2), frac(5, 2), int(3)] {
            let p = [("alpha", to_pq(&a)), ("n_max", "6".into())];
            out.push(rec.run("gram-schmidt", "orthogonalized phi basis equals eigenpolynomials", &p, || {
                let r = gram_schmidt_support(&ParamContext::example1(a.clone(), 6)?, 6)?;
                Ok((r.max_deviation < 1e-8, Some(r.max_deviation), Some(r.caveat)))
            }));
            let p = [("alpha", to_pq(&a)), ("N", "4".into())];
            out.push(rec.run("rayleigh", "Rayleigh quotients equal restricted eigenvalues", &p, || {
                let r = rayleigh_quotients(&ParamContext::example1(a.clone(), 4)?)?;
                let worst = r.iter().map(|e| e.relative_gap).fold(0.0, f64::max);
                Ok((worst < 1e-6, Some(worst), None))
            }));
        }
    }
    out
}

/// Runs the selected stages; cells within a stage run in parallel and are
/// collected in grid order.
pub fn run(config: &VerifyConfig) -> Result<VerificationReport> {
    config.validate()?;
    let mut stages = config.stages.clone();
    stages.sort();
    stages.dedup();
    let alphas = config.alpha_grid();
    let weights = config.generic_weights();
    let cells: Vec<(u32, Rational)> = config
        .enns
        .iter()
        .flat_map(|&n| alphas.iter().map(move |a| (n, a.clone())))
        .collect();
    let rec_for = |stage| Recorder {
        stage,
        timings: config.timings,
    };
    let mut records = Vec::new();
    for &stage in &stages {
        let rec = rec_for(stage);
        let per_cell: Vec<Vec<CheckRecord>> = match stage {
            Stage::Laguerre => alphas.par_iter().map(|a| laguerre_cell(&rec, a)).collect(),
            _ => cells
                .par_iter()
                .map(|(n, a)| match stage {
                    Stage::Spaces => spaces_cell(&rec, *n, a, &weights),
                    Stage::Quasiops => quasiops_cell(&rec, *n, a, &weights, &config.c0),
                    Stage::Gauged => gauged_cell(&rec, *n, a, &weights),
                    Stage::Physical => physical_cell(&rec, *n, a, &weights),
                    Stage::Models => models_cell(&rec, *n, a),
                    Stage::Laguerre => unreachable!(),
                })
                .collect(),
        };
        records.extend(per_cell.into_iter().flatten());
    }
    records.extend(global_checks(rec_for, &stages));
    Ok(VerificationReport::new(
        stages.iter().map(|s| s.name().to_string()).collect(),
        config.seed,
        records,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_deterministic_and_generic() {
        let a = sample_alphas(0, 8, 5);
        assert_eq!(a, sample_alphas(0, 8, 5));
        assert_ne!(a, sample_alphas(1, 8, 5));
        assert!(a.iter().all(|x| alpha_is_generic(x, 5)));
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = VerifyConfig {
            enns: vec![2],
            ..Default::default()
        };
        assert!(matches!(run(&cfg), Err(Error::Domain(m)) if m.contains("N > 2")));
        let cfg = VerifyConfig {
            alphas: vec![int(1)],
            ..Default::default()
        };
        assert!(matches!(run(&cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn small_spaces_run() {
        let cfg = VerifyConfig {
            stages: vec![Stage::Spaces, Stage::Gauged],
            enns: vec![3],
            samples: 2,
            ..Default::default()
        };
        let r = run(&cfg).unwrap();
        assert!(r.is_pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}
