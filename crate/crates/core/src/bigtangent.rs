//! The big tangent bundle `TM ⊕ T*M`: sections, the neutral pairing, the
//! Courant bracket and its derived (θ-twisted) variant, block endomorphisms
//! with their pairing adjoints, tensor-product endomorphisms and B-field
//! transformations.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::calculus::{
    d_scalar, exterior_derivative, interior_product, lie_bracket, two_form_block, KForm,
    MatrixField, VectorField, wedge,
};
use crate::chart::{Chart, SamplePlan};
use crate::error::{Error, Result};
use crate::expr::ScalarField;

/// A section `X + α` of `TM ⊕ T*M`: a vector part and a 1-form part.
#[derive(Clone, Debug)]
pub struct GeneralizedSection {
    chart: Chart,
    vec: VectorField,
    form: KForm,
}

impl GeneralizedSection {
    pub fn new(vec: VectorField, form: KForm) -> Result<GeneralizedSection> {
        if !vec.chart().compatible(form.chart()) {
            return Err(Error::ChartMismatch(
                vec.chart().describe(),
                form.chart().describe(),
            ));
        }
        if form.degree() != 1 {
            return Err(Error::invalid("section form part must have degree 1"));
        }
        Ok(GeneralizedSection {
            chart: vec.chart().clone(),
            vec,
            form,
        })
    }

    pub fn from_vector(vec: VectorField) -> GeneralizedSection {
        let form = KForm::zero(vec.chart(), 1);
        GeneralizedSection {
            chart: vec.chart().clone(),
            vec,
            form,
        }
    }

    pub fn from_form(form: KForm) -> Result<GeneralizedSection> {
        if form.degree() != 1 {
            return Err(Error::invalid("section form part must have degree 1"));
        }
        Ok(GeneralizedSection {
            chart: form.chart().clone(),
            vec: VectorField::zero(form.chart()),
            form,
        })
    }

    pub fn zero(chart: &Chart) -> GeneralizedSection {
        GeneralizedSection {
            chart: chart.clone(),
            vec: VectorField::zero(chart),
            form: KForm::zero(chart, 1),
        }
    }

    /// The standard basis section with bundle index `k`: `∂/∂x_k` for
    /// `k < n`, `dx_{k-n}` for `k >= n`.
    pub fn basis(chart: &Chart, k: usize) -> GeneralizedSection {
        let n = chart.dim();
        if k < n {
            Self::from_vector(VectorField::basis(chart, k))
        } else {
            Self::from_form(KForm::dx(chart, k - n)).expect("degree 1")
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn vector_part(&self) -> &VectorField {
        &self.vec
    }

    pub fn form_part(&self) -> &KForm {
        &self.form
    }

    pub fn add(&self, other: &GeneralizedSection) -> GeneralizedSection {
        GeneralizedSection {
            chart: self.chart.clone(),
            vec: self.vec.add(&other.vec),
            form: self.form.add(&other.form),
        }
    }

    pub fn sub(&self, other: &GeneralizedSection) -> GeneralizedSection {
        GeneralizedSection {
            chart: self.chart.clone(),
            vec: self.vec.sub(&other.vec),
            form: self.form.sub(&other.form),
        }
    }

    pub fn scale(&self, f: &ScalarField) -> GeneralizedSection {
        GeneralizedSection {
            chart: self.chart.clone(),
            vec: self.vec.scale(f),
            form: self.form.scale(f),
        }
    }

    pub fn scale_const(&self, c: Complex64) -> GeneralizedSection {
        self.scale(&ScalarField::constant(&self.chart, c))
    }

    /// All 2n components at a point, vector part first.
    pub fn evaluate(&self, p: &[f64]) -> Result<Vec<Complex64>> {
        let mut out = self.vec.evaluate(p)?;
        for c in self.form.one_form_components() {
            out.push(c.evaluate(p)?);
        }
        Ok(out)
    }

    pub fn evaluate_vector(&self, p: &[f64]) -> Result<DVector<Complex64>> {
        Ok(DVector::from_vec(self.evaluate(p)?))
    }

    /// Sup-norm of the components over the plan's sample points.
    pub fn sup_norm(&self, plan: &SamplePlan) -> Result<f64> {
        let mut m = 0.0f64;
        for p in self.chart.sample_points(plan)? {
            for c in self.evaluate(&p)? {
                m = m.max(c.norm());
            }
        }
        Ok(m)
    }
}

impl fmt::Display for GeneralizedSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords = self.chart.coords();
        let vecs: Vec<String> = self
            .vec
            .components()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})*∂{}", c, coords[i]))
            .collect();
        write!(f, "({}, {})", vecs.join(" + "), self.form)
    }
}

/// The neutral pairing `⟨X+α, Y+β⟩ = (β(X) + α(Y)) / 2`.
pub fn pairing(u: &GeneralizedSection, v: &GeneralizedSection) -> Result<ScalarField> {
    if !u.chart.compatible(&v.chart) {
        return Err(Error::ChartMismatch(u.chart.describe(), v.chart.describe()));
    }
    let half = ScalarField::real(&u.chart, 0.5);
    let mut acc = ScalarField::zero(&u.chart);
    let ua = u.form.one_form_components();
    let va = v.form.one_form_components();
    for i in 0..u.chart.dim() {
        acc = &acc + &(&va[i] * u.vec.component(i));
        acc = &acc + &(&ua[i] * v.vec.component(i));
    }
    Ok(&acc * &half)
}

/// Which bracket a closure check runs against.
#[derive(Clone, Debug)]
pub enum Bracket {
    Courant,
    /// Courant bracket with `d` replaced by `d_θ = d - θ∧` for a closed
    /// one-form θ.
    Derived(KForm),
}

impl Bracket {
    /// Twisted bracket, validating that θ is closed: structurally, or at the
    /// plan's sample points when a plan is given.
    pub fn derived(theta: KForm, plan: Option<&SamplePlan>) -> Result<Bracket> {
        if theta.degree() != 1 {
            return Err(Error::invalid("twist must be a one-form"));
        }
        let chart = theta.chart().clone();
        if chart.dim() > 1 {
            let d = exterior_derivative(&theta)?;
            if !d.is_structurally_zero() {
                match plan {
                    Some(plan) => {
                        let mut worst = 0.0f64;
                        for p in chart.sample_points(plan)? {
                            worst = worst.max(d.max_abs_at(&p)?);
                        }
                        if worst > plan.tolerance {
                            return Err(Error::NotClosed {
                                what: "twist one-form".into(),
                                residual: worst,
                            });
                        }
                    }
                    None => {
                        return Err(Error::NotClosed {
                            what: "twist one-form".into(),
                            residual: f64::INFINITY,
                        })
                    }
                }
            }
        }
        Ok(Bracket::Derived(theta))
    }

    pub fn label(&self) -> String {
        match self {
            Bracket::Courant => "courant".to_string(),
            Bracket::Derived(theta) => format!("derived({})", theta),
        }
    }

    /// The twisted differential `d_θ ω = dω - θ∧ω` (plain `d` for Courant).
    /// On degree 0 this is `df - f θ`.
    fn differential(&self, omega: &KForm) -> Result<KForm> {
        let n = omega.chart().dim();
        let base = if omega.degree() == 0 {
            d_scalar(&omega.scalar_part())
        } else if omega.degree() < n {
            exterior_derivative(omega)?
        } else {
            KForm::zero(omega.chart(), omega.degree() + 1)
        };
        match self {
            Bracket::Courant => Ok(base),
            Bracket::Derived(theta) => {
                if omega.degree() + 1 > n {
                    // θ∧ω exceeds the top degree and vanishes
                    return Ok(base);
                }
                Ok(base.sub(&wedge(theta, omega)?))
            }
        }
    }

    /// Twisted Lie derivative `L^θ_X = ι_X d_θ + d_θ ι_X` on a 1-form.
    fn lie_one_form(&self, x: &VectorField, alpha: &KForm) -> Result<KForm> {
        let d_alpha = self.differential(alpha)?;
        let first = interior_product(x, &d_alpha)?;
        let inner = interior_product(x, alpha)?; // degree 0
        let second = self.differential(&inner)?;
        Ok(first.add(&second))
    }

    /// The (possibly twisted) Courant bracket
    /// `[[X+α, Y+β]] = [X,Y] + L_X β - L_Y α - d(ι_X β - ι_Y α)/2`.
    pub fn bracket(
        &self,
        u: &GeneralizedSection,
        v: &GeneralizedSection,
    ) -> Result<GeneralizedSection> {
        if !u.chart.compatible(&v.chart) {
            return Err(Error::ChartMismatch(u.chart.describe(), v.chart.describe()));
        }
        let x = &u.vec;
        let y = &v.vec;
        let alpha = &u.form;
        let beta = &v.form;

        let vec = lie_bracket(x, y)?;
        let lxb = self.lie_one_form(x, beta)?;
        let lya = self.lie_one_form(y, alpha)?;
        let ixb = interior_product(x, beta)?.scalar_part();
        let iya = interior_product(y, alpha)?.scalar_part();
        let half = ScalarField::real(&u.chart, 0.5);
        let correction = self
            .differential(&KForm::from_scalar(&(&ixb - &iya)))?
            .scale(&half);
        let form = lxb.sub(&lya).sub(&correction);
        GeneralizedSection::new(vec, form)
    }
}

/// Courant bracket of two sections.
pub fn courant_bracket(
    u: &GeneralizedSection,
    v: &GeneralizedSection,
) -> Result<GeneralizedSection> {
    Bracket::Courant.bracket(u, v)
}

/// Derived bracket: every `d` in the Courant bracket becomes `d_θ = d - θ∧`.
/// θ must be closed (checked structurally after folding).
pub fn derived_courant_bracket(
    u: &GeneralizedSection,
    v: &GeneralizedSection,
    theta: &KForm,
) -> Result<GeneralizedSection> {
    Bracket::derived(theta.clone(), None)?.bracket(u, v)
}

/// Block endomorphism of `TM ⊕ T*M`:
/// `(X, α) ↦ (A X + P α, S X + B α)` with `A: T→T`, `P: T*→T`,
/// `S: T→T*`, `B: T*→T*`.
#[derive(Clone, Debug)]
pub struct BundleEndomorphism {
    chart: Chart,
    a: MatrixField,
    p: MatrixField,
    s: MatrixField,
    b: MatrixField,
}

impl BundleEndomorphism {
    pub fn from_blocks(
        a: MatrixField,
        p: MatrixField,
        s: MatrixField,
        b: MatrixField,
    ) -> Result<BundleEndomorphism> {
        let chart = a.chart().clone();
        let n = chart.dim();
        for (m, name) in [(&a, "A"), (&p, "P"), (&s, "S"), (&b, "B")] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::invalid(format!("block {} must be {}x{}", name, n, n)));
            }
            if !m.chart().compatible(&chart) {
                return Err(Error::ChartMismatch(chart.describe(), m.chart().describe()));
            }
        }
        Ok(BundleEndomorphism { chart, a, p, s, b })
    }

    pub fn zero(chart: &Chart) -> BundleEndomorphism {
        let n = chart.dim();
        let z = || MatrixField::zero(chart, n, n);
        BundleEndomorphism {
            chart: chart.clone(),
            a: z(),
            p: z(),
            s: z(),
            b: z(),
        }
    }

    pub fn identity(chart: &Chart) -> BundleEndomorphism {
        let n = chart.dim();
        BundleEndomorphism {
            chart: chart.clone(),
            a: MatrixField::identity(chart, n),
            p: MatrixField::zero(chart, n, n),
            s: MatrixField::zero(chart, n, n),
            b: MatrixField::identity(chart, n),
        }
    }

    /// Identity on the sub-bundle spanned by the given coordinate axes.
    pub fn identity_on_axes(chart: &Chart, axes: &[usize]) -> BundleEndomorphism {
        let n = chart.dim();
        let diag = |_: &Chart| {
            MatrixField::from_fn(chart, n, n, |r, c| {
                if r == c && axes.contains(&r) {
                    ScalarField::one(chart)
                } else {
                    ScalarField::zero(chart)
                }
            })
        };
        BundleEndomorphism {
            chart: chart.clone(),
            a: diag(chart),
            p: MatrixField::zero(chart, n, n),
            s: MatrixField::zero(chart, n, n),
            b: diag(chart),
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn block_a(&self) -> &MatrixField {
        &self.a
    }

    pub fn block_p(&self) -> &MatrixField {
        &self.p
    }

    pub fn block_s(&self) -> &MatrixField {
        &self.s
    }

    pub fn block_b(&self) -> &MatrixField {
        &self.b
    }

    pub fn apply(&self, u: &GeneralizedSection) -> GeneralizedSection {
        assert!(self.chart.compatible(&u.chart), "endomorphism chart mismatch");
        let alpha = u.form.one_form_components();
        let mut vec_out = self.a.apply_vector(&u.vec);
        let p_alpha = self.p.apply_components(&alpha);
        for (a, b) in vec_out.iter_mut().zip(p_alpha) {
            *a = &*a + &b;
        }
        let mut form_out = self.s.apply_vector(&u.vec);
        let b_alpha = self.b.apply_components(&alpha);
        for (a, b) in form_out.iter_mut().zip(b_alpha) {
            *a = &*a + &b;
        }
        let vec = VectorField::new(&self.chart, vec_out).expect("component count");
        let form = KForm::one_form(&self.chart, form_out).expect("component count");
        GeneralizedSection::new(vec, form).expect("same chart")
    }

    pub fn compose(&self, other: &BundleEndomorphism) -> BundleEndomorphism {
        assert!(self.chart.compatible(&other.chart));
        BundleEndomorphism {
            chart: self.chart.clone(),
            a: self.a.mul(&other.a).add(&self.p.mul(&other.s)),
            p: self.a.mul(&other.p).add(&self.p.mul(&other.b)),
            s: self.s.mul(&other.a).add(&self.b.mul(&other.s)),
            b: self.s.mul(&other.p).add(&self.b.mul(&other.b)),
        }
    }

    pub fn add(&self, other: &BundleEndomorphism) -> BundleEndomorphism {
        BundleEndomorphism {
            chart: self.chart.clone(),
            a: self.a.add(&other.a),
            p: self.p.add(&other.p),
            s: self.s.add(&other.s),
            b: self.b.add(&other.b),
        }
    }

    pub fn sub(&self, other: &BundleEndomorphism) -> BundleEndomorphism {
        BundleEndomorphism {
            chart: self.chart.clone(),
            a: self.a.sub(&other.a),
            p: self.p.sub(&other.p),
            s: self.s.sub(&other.s),
            b: self.b.sub(&other.b),
        }
    }

    pub fn neg(&self) -> BundleEndomorphism {
        BundleEndomorphism {
            chart: self.chart.clone(),
            a: self.a.neg(),
            p: self.p.neg(),
            s: self.s.neg(),
            b: self.b.neg(),
        }
    }

    pub fn scale(&self, f: &ScalarField) -> BundleEndomorphism {
        BundleEndomorphism {
            chart: self.chart.clone(),
            a: self.a.scale(f),
            p: self.p.scale(f),
            s: self.s.scale(f),
            b: self.b.scale(f),
        }
    }

    pub fn scale_const(&self, c: Complex64) -> BundleEndomorphism {
        self.scale(&ScalarField::constant(&self.chart, c))
    }

    /// Pairing adjoint: `⟨M u, v⟩ = ⟨u, M* v⟩`.  In blocks this is the
    /// swap-transpose `(A,P,S,B) ↦ (Bᵀ, Pᵀ, Sᵀ, Aᵀ)`.
    pub fn adjoint(&self) -> BundleEndomorphism {
        BundleEndomorphism {
            chart: self.chart.clone(),
            a: self.b.transpose(),
            p: self.p.transpose(),
            s: self.s.transpose(),
            b: self.a.transpose(),
        }
    }

    /// Evaluate as a dense 2n x 2n complex matrix (vector block first).
    pub fn evaluate(&self, point: &[f64]) -> Result<DMatrix<Complex64>> {
        let n = self.chart.dim();
        let mut out = DMatrix::zeros(2 * n, 2 * n);
        let blocks = [
            (&self.a, 0, 0),
            (&self.p, 0, n),
            (&self.s, n, 0),
            (&self.b, n, n),
        ];
        for (m, r0, c0) in blocks {
            let e = m.evaluate(point)?;
            for r in 0..n {
                for c in 0..n {
                    out[(r0 + r, c0 + c)] = e[(r, c)];
                }
            }
        }
        Ok(out)
    }

    /// Largest block-entry magnitude over the plan's sample points, with the
    /// point achieving it.
    pub fn sup_norm(&self, plan: &SamplePlan) -> Result<(f64, Vec<f64>)> {
        let mut worst = 0.0f64;
        let mut witness = Vec::new();
        for p in self.chart.sample_points(plan)? {
            let m = self.evaluate(&p)?;
            let v = crate::linalg::max_abs(&m);
            if v >= worst {
                worst = v;
                witness = p;
            }
        }
        Ok((worst, witness))
    }
}

/// Rank-one tensor endomorphism `(a ⊗ b)(u) = 2 ⟨b, u⟩ a`.
///
/// The factor 2 makes `Φ² = -Id + E₊⊗E₋ + E₋⊗E₊` consistent with
/// `2⟨E₊,E₋⟩ = 1` and `Φ(E±) = 0`; see [`tensor_convention_self_check`].
pub fn tensor_endo(a: &GeneralizedSection, b: &GeneralizedSection) -> Result<BundleEndomorphism> {
    if !a.chart.compatible(&b.chart) {
        return Err(Error::ChartMismatch(a.chart.describe(), b.chart.describe()));
    }
    let chart = a.chart.clone();
    let xa = a.vec.components();
    let aa = a.form.one_form_components();
    let xb = b.vec.components();
    let ab = b.form.one_form_components();
    // 2<b,u> = Σ_j (αb_j Y_j + Xb_j β_j) for u = Y + β
    let blk = |left: &[ScalarField], right: &[ScalarField]| {
        MatrixField::from_fn(&chart, chart.dim(), chart.dim(), |r, c| &left[r] * &right[c])
    };
    BundleEndomorphism::from_blocks(blk(xa, &ab), blk(xa, xb), blk(&aa, &ab), blk(&aa, xb))
}

/// The shear `e^B = (1 0; B 1)`, `X + ξ ↦ X + ξ + ι_X B`.
pub fn bfield_endo(b2: &KForm) -> Result<BundleEndomorphism> {
    if b2.degree() != 2 {
        return Err(Error::invalid("B-field must be a 2-form"));
    }
    let chart = b2.chart().clone();
    let n = chart.dim();
    BundleEndomorphism::from_blocks(
        MatrixField::identity(&chart, n),
        MatrixField::zero(&chart, n, n),
        two_form_block(b2),
        MatrixField::identity(&chart, n),
    )
}

/// Validate that a 2-form is closed: structurally, or at sample points when
/// a plan is supplied.
pub fn check_two_form_closed(b2: &KForm, plan: Option<&SamplePlan>) -> Result<()> {
    if b2.degree() != 2 {
        return Err(Error::invalid("B-field must be a 2-form"));
    }
    if b2.chart().dim() <= 2 {
        return Ok(()); // top degree, automatically closed
    }
    let d = exterior_derivative(b2)?;
    if d.is_structurally_zero() {
        return Ok(());
    }
    if let Some(plan) = plan {
        let mut worst = 0.0f64;
        for p in b2.chart().sample_points(plan)? {
            worst = worst.max(d.max_abs_at(&p)?);
        }
        if worst <= plan.tolerance {
            return Ok(());
        }
        return Err(Error::NotClosed {
            what: "B-field".into(),
            residual: worst,
        });
    }
    Err(Error::NotClosed {
        what: "B-field".into(),
        residual: f64::INFINITY,
    })
}

/// B-field transformation of an endomorphism: `e^B M e^{-B}` for closed B.
pub fn bfield_transform(
    m: &BundleEndomorphism,
    b2: &KForm,
    plan: Option<&SamplePlan>,
) -> Result<BundleEndomorphism> {
    check_two_form_closed(b2, plan)?;
    let eb = bfield_endo(b2)?;
    let emb = bfield_endo(&b2.neg())?;
    Ok(eb.compose(m).compose(&emb))
}

/// B-field transformation of a section: `e^B u`.
pub fn bfield_transform_section(
    u: &GeneralizedSection,
    b2: &KForm,
    plan: Option<&SamplePlan>,
) -> Result<GeneralizedSection> {
    check_two_form_closed(b2, plan)?;
    Ok(bfield_endo(b2)?.apply(u))
}

/// Startup self-test for the factor-2 tensor convention: on a line chart
/// with `E₊ = dt`, `E₋ = ∂t`, the combination `-Id + E₊⊗E₋ + E₋⊗E₊`
/// must annihilate both sections.
pub fn tensor_convention_self_check() -> Result<()> {
    let chart = Chart::new(&["t"], &[(0.1, 2.0)])?;
    let e_plus = GeneralizedSection::from_form(KForm::dx(&chart, 0))?;
    let e_minus = GeneralizedSection::from_vector(VectorField::basis(&chart, 0));
    let phi_sq = BundleEndomorphism::identity(&chart)
        .neg()
        .add(&tensor_endo(&e_plus, &e_minus)?)
        .add(&tensor_endo(&e_minus, &e_plus)?);
    let plan = SamplePlan::new(7, 5, 1e-12);
    for section in [&e_plus, &e_minus] {
        let image = phi_sq.apply(section);
        if image.sup_norm(&plan)? > 1e-12 {
            return Err(Error::invalid(
                "tensor convention self-check failed: Φ²(E±) != 0",
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart3() -> Chart {
        Chart::new(&["x", "y", "z"], &[(-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)]).unwrap()
    }

    fn sf(c: &Chart, t: &str) -> ScalarField {
        ScalarField::parse(t, c).unwrap()
    }

    fn contact_eta_xi(c: &Chart) -> (GeneralizedSection, GeneralizedSection) {
        let eta = KForm::parse_one_form(c, &["-y", "0", "1"]).unwrap();
        let xi = VectorField::basis(c, 2);
        (
            GeneralizedSection::from_form(eta).unwrap(),
            GeneralizedSection::from_vector(xi),
        )
    }

    #[test]
    fn pairing_examples() {
        let c = chart3();
        let (e_eta, e_xi) = contact_eta_xi(&c);
        // <(ξ,0),(0,η)> = η(ξ)/2 = 1/2
        let p = pairing(&e_xi, &e_eta).unwrap();
        assert_eq!(format!("{}", p), "0.5");

        // pure vectors pair to zero
        let ex = GeneralizedSection::from_vector(VectorField::basis(&c, 0));
        let ey = GeneralizedSection::from_vector(VectorField::basis(&c, 1));
        assert!(pairing(&ex, &ey).unwrap().is_zero());

        // <(∂x, dy), (∂y, dx)> = 1
        let u = GeneralizedSection::new(VectorField::basis(&c, 0), KForm::dx(&c, 1)).unwrap();
        let v = GeneralizedSection::new(VectorField::basis(&c, 1), KForm::dx(&c, 0)).unwrap();
        assert_eq!(format!("{}", pairing(&u, &v).unwrap()), "1");
    }

    #[test]
    fn courant_bracket_examples() {
        let c = chart3();
        // [[(∂x, 0), (0, x dy)]] = (0, dy)
        let u = GeneralizedSection::from_vector(VectorField::basis(&c, 0));
        let v = GeneralizedSection::from_form(
            KForm::parse_one_form(&c, &["0", "x", "0"]).unwrap(),
        )
        .unwrap();
        let b = courant_bracket(&u, &v).unwrap();
        assert!(b.vector_part().components().iter().all(|f| f.is_zero()));
        assert_eq!(format!("{}", b.form_part().coefficient(&[1])), "1");

        // [[u, u]] = 0 for a field-coefficient section
        let w = GeneralizedSection::new(
            VectorField::parse(&c, &["y", "x*z", "1"]).unwrap(),
            KForm::parse_one_form(&c, &["z", "0", "x^2"]).unwrap(),
        )
        .unwrap();
        let ww = courant_bracket(&w, &w).unwrap();
        let plan = SamplePlan::default();
        assert!(ww.sup_norm(&plan).unwrap() < 1e-12);

        // [[(0,η),(ξ,0)]] = 0 on the contact chart
        let (e_eta, e_xi) = contact_eta_xi(&c);
        let z = courant_bracket(&e_eta, &e_xi).unwrap();
        assert!(z.sup_norm(&plan).unwrap() < 1e-12);
    }

    #[test]
    fn derived_bracket_reduces_at_zero_twist() {
        let c = chart3();
        let theta = KForm::zero(&c, 1);
        let u = GeneralizedSection::new(
            VectorField::parse(&c, &["y", "1", "x"]).unwrap(),
            KForm::parse_one_form(&c, &["0", "z", "x*y"]).unwrap(),
        )
        .unwrap();
        let v = GeneralizedSection::new(
            VectorField::parse(&c, &["0", "x^2", "1"]).unwrap(),
            KForm::parse_one_form(&c, &["1", "0", "y"]).unwrap(),
        )
        .unwrap();
        let plain = courant_bracket(&u, &v).unwrap();
        let twisted = derived_courant_bracket(&u, &v, &theta).unwrap();
        let diff = plain.sub(&twisted);
        assert!(diff.vector_part().components().iter().all(|f| f.is_zero()));
        assert!(diff.form_part().is_structurally_zero());
    }

    #[test]
    fn twisted_differential_kills_exp_t() {
        // d_{dt}(e^t) = d(e^t) - e^t dt = 0
        let c = Chart::new(&["t"], &[(0.1, 2.0)]).unwrap();
        let theta = KForm::dx(&c, 0);
        let bracket = Bracket::derived(theta, None).unwrap();
        let et = KForm::from_scalar(&sf(&c, "exp(t)"));
        let d = bracket.differential(&et).unwrap();
        assert!(d.is_structurally_zero());
    }

    #[test]
    fn non_closed_twist_is_rejected() {
        let c = chart3();
        let theta = KForm::parse_one_form(&c, &["0", "x", "0"]).unwrap(); // d = dx^dy
        assert!(matches!(
            Bracket::derived(theta, None),
            Err(Error::NotClosed { .. })
        ));
    }

    #[test]
    fn adjoint_is_swap_transpose_and_involution() {
        let c = chart3();
        let phi = MatrixField::parse(
            &c,
            &[
                vec!["0", "1", "0"],
                vec!["-1", "0", "0"],
                vec!["0", "y", "0"],
            ],
        )
        .unwrap();
        let n = c.dim();
        let m = BundleEndomorphism::from_blocks(
            phi.clone(),
            MatrixField::zero(&c, n, n),
            MatrixField::zero(&c, n, n),
            phi.transpose().neg(),
        )
        .unwrap();
        // classical lift shape is skew: M + M* = 0
        let skew = m.add(&m.adjoint());
        let plan = SamplePlan::default();
        assert!(skew.sup_norm(&plan).unwrap().0 < 1e-14);

        // involution on a generic endomorphism
        let generic = BundleEndomorphism::from_blocks(
            MatrixField::parse(&c, &[vec!["x", "1", "0"], vec!["0", "y", "2"], vec!["1", "0", "z"]])
                .unwrap(),
            MatrixField::parse(&c, &[vec!["1", "0", "y"], vec!["0", "0", "0"], vec!["x", "0", "1"]])
                .unwrap(),
            MatrixField::parse(&c, &[vec!["0", "z", "0"], vec!["z", "1", "0"], vec!["0", "0", "x"]])
                .unwrap(),
            MatrixField::parse(&c, &[vec!["y", "0", "0"], vec!["1", "x", "0"], vec!["0", "2", "1"]])
                .unwrap(),
        )
        .unwrap();
        let twice = generic.adjoint().adjoint().sub(&generic);
        assert!(twice.sup_norm(&plan).unwrap().0 < 1e-14);
    }

    #[test]
    fn adjoint_matches_pairing_numerically() {
        let c = chart3();
        let plan = SamplePlan::new(11, 8, 1e-10);
        let m = BundleEndomorphism::from_blocks(
            MatrixField::parse(&c, &[vec!["x", "1", "0"], vec!["0", "y", "2"], vec!["1", "0", "z"]])
                .unwrap(),
            MatrixField::parse(&c, &[vec!["1", "0", "y"], vec!["0", "3", "0"], vec!["x", "0", "1"]])
                .unwrap(),
            MatrixField::parse(&c, &[vec!["0", "z", "0"], vec!["z", "1", "0"], vec!["0", "0", "x"]])
                .unwrap(),
            MatrixField::parse(&c, &[vec!["y", "0", "0"], vec!["1", "x", "0"], vec!["0", "2", "1"]])
                .unwrap(),
        )
        .unwrap();
        let ms = m.adjoint();
        let u = GeneralizedSection::new(
            VectorField::parse(&c, &["1", "x", "y*z"]).unwrap(),
            KForm::parse_one_form(&c, &["z", "1", "0"]).unwrap(),
        )
        .unwrap();
        let v = GeneralizedSection::new(
            VectorField::parse(&c, &["y", "0", "1"]).unwrap(),
            KForm::parse_one_form(&c, &["0", "x^2", "1"]).unwrap(),
        )
        .unwrap();
        let lhs = pairing(&m.apply(&u), &v).unwrap();
        let rhs = pairing(&u, &ms.apply(&v)).unwrap();
        for p in c.sample_points(&plan).unwrap() {
            let d = (lhs.evaluate(&p).unwrap() - rhs.evaluate(&p).unwrap()).norm();
            assert!(d < 1e-10);
        }
    }

    #[test]
    fn adjoint_of_shear_is_inverse_shear() {
        let c = chart3();
        let b = KForm::from_terms(
            &c,
            2,
            vec![(vec![0, 1], sf(&c, "1")), (vec![1, 2], sf(&c, "x"))],
        )
        .unwrap();
        let eb = bfield_endo(&b).unwrap();
        let emb = bfield_endo(&b.neg()).unwrap();
        let plan = SamplePlan::default();
        let diff = eb.adjoint().sub(&emb);
        assert!(diff.sup_norm(&plan).unwrap().0 < 1e-14);
    }

    #[test]
    fn tensor_convention() {
        tensor_convention_self_check().unwrap();

        // (a ⊗ b)(u) = 0 when <b, u> = 0
        let c = chart3();
        let a = GeneralizedSection::from_vector(VectorField::basis(&c, 0));
        let b = GeneralizedSection::from_vector(VectorField::basis(&c, 1));
        let u = GeneralizedSection::from_vector(VectorField::basis(&c, 2));
        let t = tensor_endo(&a, &b).unwrap();
        let out = t.apply(&u);
        assert!(out.sup_norm(&SamplePlan::default()).unwrap() < 1e-15);
    }

    #[test]
    fn bfield_moves_sections_by_interior_product() {
        let c = chart3();
        let b = KForm::from_terms(&c, 2, vec![(vec![0, 1], sf(&c, "1"))]).unwrap();
        let x = VectorField::parse(&c, &["1", "z", "0"]).unwrap();
        let u = GeneralizedSection::from_vector(x.clone());
        let moved = bfield_transform_section(&u, &b, None).unwrap();
        let expect = interior_product(&x, &b).unwrap();
        let got = moved.form_part().sub(&expect);
        assert!(got.is_structurally_zero());

        // B = 0 leaves an endomorphism unchanged
        let m = BundleEndomorphism::identity(&c).scale_const(Complex64::new(3.0, 0.0));
        let same = bfield_transform(&m, &KForm::zero(&c, 2), None).unwrap();
        assert!(same.sub(&m).sup_norm(&SamplePlan::default()).unwrap().0 < 1e-15);

        // non-closed B is rejected
        let bad = KForm::from_terms(&c, 2, vec![(vec![0, 1], sf(&c, "z"))]).unwrap();
        assert!(matches!(
            bfield_transform(&m, &bad, None),
            Err(Error::NotClosed { .. })
        ));
    }

    #[test]
    fn shear_preserves_pairing() {
        let c = chart3();
        let b = KForm::from_terms(
            &c,
            2,
            vec![(vec![0, 2], sf(&c, "y")), (vec![0, 1], sf(&c, "2"))],
        )
        .unwrap();
        let eb = bfield_endo(&b).unwrap();
        let u = GeneralizedSection::new(
            VectorField::parse(&c, &["1", "x", "0"]).unwrap(),
            KForm::parse_one_form(&c, &["z", "0", "1"]).unwrap(),
        )
        .unwrap();
        let v = GeneralizedSection::new(
            VectorField::parse(&c, &["0", "1", "y"]).unwrap(),
            KForm::parse_one_form(&c, &["1", "x", "0"]).unwrap(),
        )
        .unwrap();
        let before = pairing(&u, &v).unwrap();
        let after = pairing(&eb.apply(&u), &eb.apply(&v)).unwrap();
        for p in c.sample_points(&SamplePlan::default()).unwrap() {
            let d = (before.evaluate(&p).unwrap() - after.evaluate(&p).unwrap()).norm();
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn metric_lift_applies_blockwise() {
        // G = (0 g^{-1}; g 0) sends (X, 0) to (0, gX)
        let c = chart3();
        let g = MatrixField::identity(&c, 3);
        let n = c.dim();
        let gm = BundleEndomorphism::from_blocks(
            MatrixField::zero(&c, n, n),
            g.clone(),
            g.clone(),
            MatrixField::zero(&c, n, n),
        )
        .unwrap();
        let x = GeneralizedSection::from_vector(VectorField::basis(&c, 1));
        let out = gm.apply(&x);
        assert!(out.vector_part().components().iter().all(|f| f.is_zero()));
        assert_eq!(format!("{}", out.form_part().coefficient(&[1])), "1");
    }

    #[test]
    fn commuting_diagonal_blocks_commute() {
        let c = chart3();
        let m1 = BundleEndomorphism::identity(&c).scale(&sf(&c, "x"));
        let m2 = BundleEndomorphism::identity(&c).scale(&sf(&c, "y + 1"));
        let comm = m1.compose(&m2).sub(&m2.compose(&m1));
        assert!(comm.sup_norm(&SamplePlan::default()).unwrap().0 < 1e-15);
    }
}
