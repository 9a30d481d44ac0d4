//! Axiom checkers.  Failures are reports, not errors; `Err` means the check
//! could not be evaluated at all.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::frames::{classify_gacs, gacx_eigenframe, check_closed};
use super::{gphi_tilde, GacmsRecord, GacsRecord, GacxRecord};
use crate::bigtangent::{pairing, Bracket, BundleEndomorphism, GeneralizedSection, tensor_endo};
use crate::chart::SamplePlan;
use crate::error::Result;
use crate::expr::ScalarField;
use crate::linalg::{symmetric_eigenvalues, PD_THRESHOLD};
use crate::report::{CheckReport, ResidualTracker};

/// Worst block-entry magnitude of an endomorphism over the points.
fn endo_residual(
    m: &BundleEndomorphism,
    points: &[Vec<f64>],
    name: &str,
    tol: f64,
) -> Result<CheckReport> {
    let mut t = ResidualTracker::new();
    for p in points {
        let e = m.evaluate(p)?;
        t.observe(crate::linalg::max_abs(&e), p, "matrix entry");
    }
    Ok(t.into_report(name, tol))
}

/// Worst component magnitude of sections over the points.
fn section_residual(
    sections: &[(&GeneralizedSection, &str)],
    points: &[Vec<f64>],
    name: &str,
    tol: f64,
) -> Result<CheckReport> {
    let mut t = ResidualTracker::new();
    for p in points {
        for (s, detail) in sections {
            for c in s.evaluate(p)? {
                t.observe(c.norm(), p, *detail);
            }
        }
    }
    Ok(t.into_report(name, tol))
}

fn scalar_residual(
    fields: &[(&ScalarField, &str)],
    points: &[Vec<f64>],
    name: &str,
    tol: f64,
) -> Result<CheckReport> {
    let mut t = ResidualTracker::new();
    for p in points {
        for (f, detail) in fields {
            t.observe(f.evaluate(p)?.norm(), p, *detail);
        }
    }
    Ok(t.into_report(name, tol))
}

/// The five GACS axiom residuals: skewness, the Φ² identity, isotropy,
/// normalization, and the derived `Φ(E±) = 0`.
pub fn check_gacs(rec: &GacsRecord, plan: &SamplePlan) -> Result<CheckReport> {
    let chart = rec.chart();
    let points = chart.sample_points(plan)?;
    let tol = plan.tolerance;

    let skew = rec.phi.add(&rec.phi.adjoint());
    let id_axes = BundleEndomorphism::identity_on_axes(chart, &rec.axes);
    let phi_sq = rec
        .phi
        .compose(&rec.phi)
        .add(&id_axes)
        .sub(&tensor_endo(&rec.e_plus, &rec.e_minus)?)
        .sub(&tensor_endo(&rec.e_minus, &rec.e_plus)?);

    let pp = pairing(&rec.e_plus, &rec.e_plus)?;
    let mm = pairing(&rec.e_minus, &rec.e_minus)?;
    let norm = &pairing(&rec.e_plus, &rec.e_minus)?.scale(Complex64::new(2.0, 0.0))
        - &ScalarField::one(chart);

    let phi_ep = rec.phi.apply(&rec.e_plus);
    let phi_em = rec.phi.apply(&rec.e_minus);

    let parts = vec![
        endo_residual(&skew, &points, "phi_skew", tol)?,
        endo_residual(&phi_sq, &points, "phi_squared", tol)?,
        scalar_residual(
            &[(&pp, "<E+,E+>"), (&mm, "<E-,E->")],
            &points,
            "isotropy",
            tol,
        )?,
        scalar_residual(&[(&norm, "2<E+,E-> - 1")], &points, "normalization", tol)?,
        section_residual(
            &[(&phi_ep, "Phi(E+)"), (&phi_em, "Phi(E-)")],
            &points,
            "kernel",
            tol,
        )?,
    ];
    Ok(CheckReport::combine(
        format!("gacs({})", rec.label),
        tol,
        parts,
    ))
}

/// Generalized-metric axioms on the sub-bundle spanned by `axes`:
/// self-adjointness, involutivity, and positive definiteness of `⟨G·,·⟩`.
pub fn metric_axioms(
    g: &BundleEndomorphism,
    axes: &[usize],
    label: &str,
    plan: &SamplePlan,
) -> Result<CheckReport> {
    let chart = g.chart();
    let points = chart.sample_points(plan)?;
    let tol = plan.tolerance;
    let n = chart.dim();

    let self_adjoint = g.sub(&g.adjoint());
    let id_axes = BundleEndomorphism::identity_on_axes(chart, axes);
    let involution = g.compose(g).sub(&id_axes);

    // Gram matrix b(e_k, e_l) = <G e_k, e_l> over the sub-bundle's basis
    let bundle: Vec<usize> = axes
        .iter()
        .map(|&a| a)
        .chain(axes.iter().map(|&a| a + n))
        .collect();
    let gram: Vec<Vec<ScalarField>> = bundle
        .iter()
        .map(|&k| {
            let ge = g.apply(&GeneralizedSection::basis(chart, k));
            bundle
                .iter()
                .map(|&l| pairing(&ge, &GeneralizedSection::basis(chart, l)).expect("same chart"))
                .collect()
        })
        .collect();

    let mut pd = ResidualTracker::new();
    for p in &points {
        let dim = bundle.len();
        let mut real = DMatrix::zeros(dim, dim);
        let mut imag_max = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                let v = gram[r][c].evaluate(p)?;
                real[(r, c)] = v.re;
                imag_max = imag_max.max(v.im.abs());
            }
        }
        // symmetrize away round-off before the eigensolve
        let sym = (&real + real.transpose()) * 0.5;
        let min_eig = symmetric_eigenvalues(&sym)[0];
        let margin = if min_eig > PD_THRESHOLD {
            0.0
        } else {
            PD_THRESHOLD - min_eig
        };
        pd.observe(
            margin.max(imag_max),
            p,
            format!("min eigenvalue {:.3e}", min_eig),
        );
    }

    let parts = vec![
        endo_residual(&self_adjoint, &points, "self_adjoint", tol)?,
        endo_residual(&involution, &points, "involution", tol)?,
        pd.into_report("positive_definite", tol),
    ];
    Ok(CheckReport::combine(label.to_string(), tol, parts))
}

/// Standalone generalized-metric check over the whole bundle.
pub fn check_generalized_metric(
    g: &BundleEndomorphism,
    label: &str,
    plan: &SamplePlan,
) -> Result<CheckReport> {
    let axes: Vec<usize> = (0..g.chart().dim()).collect();
    metric_axioms(g, &axes, &format!("generalized_metric({})", label), plan)
}

/// GACMS: the GACS axioms, the metric axioms, the compatibility identity
/// `-ΦGΦ = G - E₊⊗E₊ - E₋⊗E₋`, and the derived `G E± = E∓`.
pub fn check_gacms(rec: &GacmsRecord, plan: &SamplePlan) -> Result<CheckReport> {
    let chart = rec.chart();
    let points = chart.sample_points(plan)?;
    let tol = plan.tolerance;
    let gacs = &rec.gacs;
    let g = &rec.metric;

    let compat = gacs
        .phi
        .compose(g)
        .compose(&gacs.phi)
        .neg()
        .sub(g)
        .add(&tensor_endo(&gacs.e_plus, &gacs.e_plus)?)
        .add(&tensor_endo(&gacs.e_minus, &gacs.e_minus)?);

    let ge_plus = g.apply(&gacs.e_plus).sub(&gacs.e_minus);
    let ge_minus = g.apply(&gacs.e_minus).sub(&gacs.e_plus);

    let parts = vec![
        check_gacs(gacs, plan)?,
        metric_axioms(g, &gacs.axes, "metric_axioms", plan)?,
        endo_residual(&compat, &points, "compatibility", tol)?,
        section_residual(
            &[(&ge_plus, "G E+ - E-"), (&ge_minus, "G E- - E+")],
            &points,
            "metric_sections",
            tol,
        )?,
    ];
    Ok(CheckReport::combine(
        format!("gacms({})", gacs.label),
        tol,
        parts,
    ))
}

/// GACx axioms: `J + J* = 0` and `J² = -Id`.
pub fn check_gacx(rec: &GacxRecord, plan: &SamplePlan) -> Result<CheckReport> {
    let chart = rec.chart();
    let points = chart.sample_points(plan)?;
    let tol = plan.tolerance;
    let skew = rec.j.add(&rec.j.adjoint());
    let sq = rec
        .j
        .compose(&rec.j)
        .add(&BundleEndomorphism::identity(chart));
    let parts = vec![
        endo_residual(&skew, &points, "j_skew", tol)?,
        endo_residual(&sq, &points, "j_squared", tol)?,
    ];
    Ok(CheckReport::combine(
        format!("gacx({})", rec.label),
        tol,
        parts,
    ))
}

/// Courant integrability of a GACx: closure of the `+i` eigenbundle frame.
pub fn check_integrable_gacx(
    rec: &GacxRecord,
    bracket: &Bracket,
    plan: &SamplePlan,
) -> Result<CheckReport> {
    let frame = gacx_eigenframe(rec, plan)?;
    check_closed(&frame, bracket, plan)
}

/// Generalized Kähler: both GACx valid and integrable, commuting, and
/// `-J₁J₂` a generalized metric.
pub fn check_generalized_kahler(
    j1: &GacxRecord,
    j2: &GacxRecord,
    plan: &SamplePlan,
) -> Result<CheckReport> {
    let points = j1.chart().sample_points(plan)?;
    let tol = plan.tolerance;
    let commutator = j1.j.compose(&j2.j).sub(&j2.j.compose(&j1.j));
    let product = j1.j.compose(&j2.j).neg();
    let parts = vec![
        check_gacx(j1, plan)?,
        check_gacx(j2, plan)?,
        endo_residual(&commutator, &points, "commutator", tol)?,
        check_integrable_gacx(j1, &Bracket::Courant, plan)?
            .with_notes(format!("integrability of {}", j1.label)),
        check_integrable_gacx(j2, &Bracket::Courant, plan)?
            .with_notes(format!("integrability of {}", j2.label)),
        check_generalized_metric(&product, "-J1 J2", plan)?,
    ];
    Ok(CheckReport::combine(
        format!("generalized_kahler({},{})", j1.label, j2.label),
        tol,
        parts,
    ))
}

/// Generalized co-Kähler: the pair `(Φ, GΦ)` commutes, the tilde record is a
/// valid GACS with swapped sections, and both classify as normal under the
/// Courant bracket.
pub fn check_co_kahler(rec: &GacmsRecord, plan: &SamplePlan) -> Result<CheckReport> {
    let points = rec.chart().sample_points(plan)?;
    let tol = plan.tolerance;
    let tilde = gphi_tilde(rec, true)?;

    let phi = &rec.gacs.phi;
    let phi_t = &tilde.gacs.phi;
    let comm = phi.compose(phi_t).sub(&phi_t.compose(phi));

    let c_phi = classify_gacs(&rec.gacs, &Bracket::Courant, plan)?;
    let c_tilde = classify_gacs(&tilde.gacs, &Bracket::Courant, plan)?;

    let parts = vec![
        check_gacms(rec, plan)?,
        check_gacs(&tilde.gacs, plan)?,
        endo_residual(&comm, &points, "phi_commutes_with_gphi", tol)?,
        c_phi
            .report
            .clone()
            .with_verdict(c_phi.is_normal())
            .with_notes(format!("requires normal; {}", c_phi.flags_string())),
        c_tilde
            .report
            .clone()
            .with_verdict(c_tilde.is_normal())
            .with_notes(format!("requires normal; {}", c_tilde.flags_string())),
    ];
    Ok(CheckReport::combine(
        format!("co_kahler({})", rec.label()),
        tol,
        parts,
    ))
}
