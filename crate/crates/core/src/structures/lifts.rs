//! Lifts of classical structures into the big tangent bundle.
//!
//! Classical preconditions are evaluated at the plan's sample points before
//! the lift is assembled; the lifted records then pass their own axiom
//! checkers, which the catalog and tests treat as the source of truth.

use num_complex::Complex64;

use super::{GacmsRecord, GacsRecord, GacxRecord};
use crate::bigtangent::BundleEndomorphism;
use crate::calculus::{
    exterior_derivative, interior_product, invert_matrix_field, two_form_block, KForm,
    MatrixField, MetricTensor, VectorField,
};
use crate::chart::SamplePlan;
use crate::error::{Error, Result};
use crate::expr::ScalarField;
use crate::bigtangent::GeneralizedSection;

fn precondition(
    what: &str,
    fields: Vec<ScalarField>,
    plan: &SamplePlan,
) -> Result<()> {
    if fields.is_empty() {
        return Ok(());
    }
    let chart = fields[0].chart().clone();
    for p in chart.sample_points(plan)? {
        for f in &fields {
            let r = f.evaluate(&p)?.norm();
            if r > plan.tolerance {
                return Err(Error::ClassicalPrecondition {
                    what: what.to_string(),
                    residual: r,
                    point: p,
                });
            }
        }
    }
    Ok(())
}

fn matrix_entries(m: &MatrixField) -> Vec<ScalarField> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.push(m.get(r, c).clone());
        }
    }
    out
}

/// Lift of a classical almost contact metric structure `(φ, ξ, η, g)`:
/// `Φ = (φ 0; 0 -φ*)`, `E₊ = ξ`, `E₋ = η`, `G = (0 g⁻¹; g 0)`.
pub fn lift_almost_contact(
    label: impl Into<String>,
    phi: &MatrixField,
    xi: &VectorField,
    eta: &KForm,
    g: &MetricTensor,
    plan: &SamplePlan,
) -> Result<GacmsRecord> {
    let chart = phi.chart().clone();
    let n = chart.dim();

    // φ² = -I + ξ⊗η (as maps: φ²X = -X + η(X)ξ)
    let eta_c = eta.one_form_components();
    let xi_eta = MatrixField::from_fn(&chart, n, n, |r, c| xi.component(r) * &eta_c[c]);
    let phi_sq = phi
        .mul(phi)
        .add(&MatrixField::identity(&chart, n))
        .sub(&xi_eta);
    precondition("phi^2 = -I + eta (x) xi", matrix_entries(&phi_sq), plan)?;

    // η(ξ) = 1
    let pairing = &eta.apply(&[xi])? - &ScalarField::one(&chart);
    precondition("eta(xi) = 1", vec![pairing], plan)?;

    // g(φX, φY) = g(X,Y) - η(X)η(Y)
    let eta_eta = MatrixField::from_fn(&chart, n, n, |r, c| &eta_c[r] * &eta_c[c]);
    let compat = phi
        .transpose()
        .mul(g.matrix())
        .mul(phi)
        .sub(g.matrix())
        .add(&eta_eta);
    precondition("g(phi.,phi.) = g - eta(x)eta", matrix_entries(&compat), plan)?;
    g.check_positive_definite(plan)?;

    let big_phi = BundleEndomorphism::from_blocks(
        phi.clone(),
        MatrixField::zero(&chart, n, n),
        MatrixField::zero(&chart, n, n),
        phi.transpose().neg(),
    )?;
    let e_plus = GeneralizedSection::from_vector(xi.clone());
    let e_minus = GeneralizedSection::from_form(eta.clone())?;
    let metric = metric_lift(g, plan)?;
    GacmsRecord::new(GacsRecord::new(label, big_phi, e_plus, e_minus)?, metric)
}

/// `G = (0 g⁻¹; g 0)` for a classical Riemannian metric.
pub fn metric_lift(g: &MetricTensor, plan: &SamplePlan) -> Result<BundleEndomorphism> {
    let chart = g.chart().clone();
    let n = chart.dim();
    let g_inv = invert_matrix_field(g.matrix(), plan)?;
    BundleEndomorphism::from_blocks(
        MatrixField::zero(&chart, n, n),
        g_inv,
        g.matrix().clone(),
        MatrixField::zero(&chart, n, n),
    )
}

/// Lift of a contact form with its Reeb field:
/// `Φ = (0 π; dη 0)`, `E₊ = η`, `E₋ = ξ`, where
/// `ρ(X) = ι_X dη - η(X) η` and `π(α,β) = dη(ρ⁻¹α, ρ⁻¹β)`.
pub fn lift_contact(
    label: impl Into<String>,
    eta: &KForm,
    xi: &VectorField,
    plan: &SamplePlan,
) -> Result<GacsRecord> {
    let chart = eta.chart().clone();
    let n = chart.dim();
    let d_eta = exterior_derivative(eta)?;

    // Reeb conditions
    let reeb = &eta.apply(&[xi])? - &ScalarField::one(&chart);
    precondition("eta(xi) = 1", vec![reeb], plan)?;
    let ixi = interior_product(xi, &d_eta)?;
    precondition(
        "iota_xi d eta = 0",
        ixi.one_form_components().to_vec(),
        plan,
    )?;

    // ρ = dη♭ - η⊗η as a map T -> T*
    let d_eta_block = two_form_block(&d_eta);
    let eta_c = eta.one_form_components();
    let eta_eta = MatrixField::from_fn(&chart, n, n, |r, c| &eta_c[r] * &eta_c[c]);
    let rho = d_eta_block.sub(&eta_eta);
    let rho_inv = invert_matrix_field(&rho, plan)?;

    // π♯ with (π♯ α)_i = π(α, dx_i) = dη(ρ⁻¹α, ρ⁻¹ dx_i)
    let rho_cols: Vec<VectorField> = (0..n)
        .map(|j| {
            VectorField::new(
                &chart,
                (0..n).map(|i| rho_inv.get(i, j).clone()).collect(),
            )
        })
        .collect::<Result<_>>()?;
    let pi = MatrixField::from_fn(&chart, n, n, |i, j| {
        d_eta
            .apply(&[&rho_cols[j], &rho_cols[i]])
            .expect("2-form on two vectors")
    });

    let big_phi = BundleEndomorphism::from_blocks(
        MatrixField::zero(&chart, n, n),
        pi,
        d_eta_block,
        MatrixField::zero(&chart, n, n),
    )?;
    let e_plus = GeneralizedSection::from_form(eta.clone())?;
    let e_minus = GeneralizedSection::from_vector(xi.clone());
    GacsRecord::new(label, big_phi, e_plus, e_minus)
}

/// Lift of a classical complex structure: `J_J = (-J 0; 0 J*)`.
pub fn lift_complex(
    label: impl Into<String>,
    j: &MatrixField,
    plan: &SamplePlan,
) -> Result<GacxRecord> {
    let chart = j.chart().clone();
    let n = chart.dim();
    let j_sq = j.mul(j).add(&MatrixField::identity(&chart, n));
    precondition("J^2 = -I", matrix_entries(&j_sq), plan)?;
    let big = BundleEndomorphism::from_blocks(
        j.neg(),
        MatrixField::zero(&chart, n, n),
        MatrixField::zero(&chart, n, n),
        j.transpose(),
    )?;
    Ok(GacxRecord::new(label, big))
}

/// Lift of a symplectic form: `J_ω = (0 -ω⁻¹; ω 0)`.
pub fn lift_symplectic(
    label: impl Into<String>,
    omega: &KForm,
    plan: &SamplePlan,
) -> Result<GacxRecord> {
    let chart = omega.chart().clone();
    let n = chart.dim();
    let w = two_form_block(omega);
    let w_inv = invert_matrix_field(&w, plan)?; // nondegeneracy
    let big = BundleEndomorphism::from_blocks(
        MatrixField::zero(&chart, n, n),
        w_inv.neg(),
        w,
        MatrixField::zero(&chart, n, n),
    )?;
    Ok(GacxRecord::new(label, big))
}

/// Scale a section of a record by a constant (used by perturbation tests).
pub fn scale_e_plus(rec: &GacsRecord, c: f64) -> GacsRecord {
    let mut out = rec.clone();
    out.e_plus = rec.e_plus.scale_const(Complex64::new(c, 0.0));
    out.label = format!("{}*E+[{}]", rec.label, c);
    out
}
