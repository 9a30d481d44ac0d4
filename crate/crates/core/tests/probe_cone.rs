//! Scratch probes for the warped-cone construction (temporary).

use gengeo::bigtangent::Bracket;
use gengeo::calculus::{d_scalar, exterior_derivative, wedge, KForm};
use gengeo::catalog;
use gengeo::products::{warp_transform, ProductChart, Side};
use gengeo::structures::{
    build_eigenframe, check_closed, check_integrable_gacx, gacx_eigenframe, lift_symplectic,
    FrameSide,
};
use gengeo::{SamplePlan, ScalarField};

#[test]
fn probe_symplectic_cone_lift() {
    let plan = SamplePlan::default();
    let pair = catalog::sasakian_times_rplus(&plan).unwrap();
    let product = ProductChart::new(pair.left.chart(), pair.right.chart()).unwrap();
    let chart = product.chart().clone();

    // omega = d(e^t eta) on the product chart
    let eta = product.lift_kform(
        &KForm::parse_one_form(pair.left.chart(), &["-y", "0", "1"]).unwrap(),
        Side::Left,
    );
    let et = ScalarField::parse("exp(t)", &chart).unwrap();
    let omega = exterior_derivative(&eta.scale(&et)).unwrap();
    println!("omega = {}", omega);
    let d_omega = exterior_derivative(&omega).unwrap();
    println!("d omega structurally zero: {}", d_omega.is_structurally_zero());

    let jw = lift_symplectic("J_cone", &omega, &plan).unwrap();
    let int = check_integrable_gacx(&jw, &Bracket::Courant, &plan).unwrap();
    println!("{}", int.render_text(0));

    // compare with the warp's J2
    let outcome = warp_transform(&pair, &plan).unwrap();
    let diff = outcome.j2.j.sub(&jw.j);
    let (d, _) = diff.sup_norm(&plan).unwrap();
    println!("sup |J2 - J_omega(cone)| = {:.3e}", d);

    let diff_neg = outcome.j2.j.add(&jw.j);
    let (dn, _) = diff_neg.sup_norm(&plan).unwrap();
    println!("sup |J2 + J_omega(cone)| = {:.3e}", dn);
}

#[test]
fn probe_derived_closure_variants() {
    let plan = SamplePlan::default();
    let pair = catalog::sasakian_times_rplus(&plan).unwrap();
    let outcome = warp_transform(&pair, &plan).unwrap();
    let chart = outcome.product.chart().clone();
    let t_axis = outcome.product.axes(Side::Right)[0];
    let theta = KForm::dx(&chart, t_axis);
    let derived = Bracket::derived(theta.clone(), Some(&plan)).unwrap();

    // warped tilde frames under derived bracket, printing the worst pairs
    for side in [FrameSide::LPlus, FrameSide::LMinus] {
        let frame = build_eigenframe(&outcome.tilde_left.gacs, side, &plan).unwrap();
        let rep = check_closed(&frame, &derived, &plan).unwrap();
        println!("warped tilde {:?}: {}", side, rep.render_text(0));
    }

    // unwarped tilde (Phi_eta with plain sections) on the product chart
    let (product, lifted_left, _lifted_right) = pair.lift().unwrap();
    let tilde_unwarped = gengeo::structures::gphi_tilde(&lifted_left, true).unwrap();
    for side in [FrameSide::LPlus, FrameSide::LMinus] {
        let frame = build_eigenframe(&tilde_unwarped.gacs, side, &plan).unwrap();
        let c = check_closed(&frame, &Bracket::Courant, &plan).unwrap();
        let d = check_closed(&frame, &derived, &plan).unwrap();
        println!(
            "unwarped tilde {:?}: courant {:.3e}, derived {:.3e}",
            side, c.max_residual, d.max_residual
        );
    }
    let _ = product;

    // J1's frame under derived for orientation
    let f = gacx_eigenframe(&outcome.j1, &plan).unwrap();
    let rep = check_closed(&f, &derived, &plan).unwrap();
    println!("J1 frame under derived: {:.3e}", rep.max_residual);

    // sanity: theta closed, e^t killed
    let et = ScalarField::parse("exp(t)", &chart).unwrap();
    let det = d_scalar(&et).sub(&wedge(&theta, &KForm::from_scalar(&et)).unwrap());
    println!("d_theta(e^t) structurally zero: {}", det.is_structurally_zero());
}
