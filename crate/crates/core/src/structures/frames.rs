//! Eigenbundle frames, bracket closure, and contact/strong/normal
//! classification.
//!
//! Subbundle membership is numeric: at each sample point the frame columns
//! are reduced to an orthonormal basis with a relative singular-value
//! threshold, and a bracket lands inside iff its distance from that span is
//! below tolerance.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{GacsRecord, GacxRecord, SpanningFrame};
use crate::bigtangent::{pairing, Bracket, GeneralizedSection};
use crate::chart::SamplePlan;
use crate::error::{Error, Result};
use crate::linalg::{column_space_basis, numeric_rank, span_distance};
use crate::report::{CheckReport, ResidualTracker};

/// Which maximal isotropic to build: `L⁺ = L_{E₊} ⊕ E^{(1,0)}` or
/// `L⁻ = L_{E₋} ⊕ E^{(1,0)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameSide {
    LPlus,
    LMinus,
}

impl FrameSide {
    fn label(self) -> &'static str {
        match self {
            FrameSide::LPlus => "L+",
            FrameSide::LMinus => "L-",
        }
    }
}

/// Project onto the pairing-orthogonal complement of `span{E₊, E₋}`:
/// `P(u) = u - 2⟨E₋,u⟩E₊ - 2⟨E₊,u⟩E₋`.
fn project_off_kernel(
    g: &GacsRecord,
    u: &GeneralizedSection,
) -> Result<GeneralizedSection> {
    let two = Complex64::new(2.0, 0.0);
    let c_plus = pairing(&g.e_minus, u)?.scale(two);
    let c_minus = pairing(&g.e_plus, u)?.scale(two);
    Ok(u.sub(&g.e_plus.scale(&c_plus)).sub(&g.e_minus.scale(&c_minus)))
}

fn frame_matrix(frame: &SpanningFrame, p: &[f64]) -> Result<DMatrix<Complex64>> {
    let rows = 2 * frame.sections[0].chart().dim();
    let mut m = DMatrix::zeros(rows, frame.sections.len());
    for (k, s) in frame.sections.iter().enumerate() {
        for (r, v) in s.evaluate(p)?.into_iter().enumerate() {
            m[(r, k)] = v;
        }
    }
    Ok(m)
}

fn validate_rank(frame: &SpanningFrame, plan: &SamplePlan) -> Result<()> {
    let chart = frame.sections[0].chart().clone();
    for p in chart.sample_points(plan)? {
        let m = frame_matrix(frame, &p)?;
        let found = numeric_rank(&m);
        if found != frame.expected_rank {
            return Err(Error::RankDeficient {
                expected: frame.expected_rank,
                found,
                point: p,
            });
        }
    }
    Ok(())
}

/// Spanning frame for `L⁺` or `L⁻`: the chosen null section together with
/// `P(e) - i Φ P(e)` over the sub-bundle's basis sections.  Pointwise
/// complex rank must equal the number of structure axes.
pub fn build_eigenframe(
    g: &GacsRecord,
    side: FrameSide,
    plan: &SamplePlan,
) -> Result<SpanningFrame> {
    let chart = g.chart().clone();
    let n = chart.dim();
    let i = Complex64::new(0.0, 1.0);
    let mut sections = Vec::with_capacity(1 + 2 * g.axes.len());
    sections.push(match side {
        FrameSide::LPlus => g.e_plus.clone(),
        FrameSide::LMinus => g.e_minus.clone(),
    });
    for &a in &g.axes {
        for k in [a, a + n] {
            let e = GeneralizedSection::basis(&chart, k);
            let pe = project_off_kernel(g, &e)?;
            let v = pe.sub(&g.phi.apply(&pe).scale_const(i));
            sections.push(v);
        }
    }
    let frame = SpanningFrame {
        label: format!("{}({})", side.label(), g.label),
        sections,
        expected_rank: g.axes.len(),
    };
    validate_rank(&frame, plan)?;
    Ok(frame)
}

/// The `+i` eigenbundle frame `{(Id - iJ) e_k}` of a GACx; pointwise rank
/// equals the chart dimension.
pub fn gacx_eigenframe(rec: &GacxRecord, plan: &SamplePlan) -> Result<SpanningFrame> {
    let chart = rec.chart().clone();
    let n = chart.dim();
    let i = Complex64::new(0.0, 1.0);
    let mut sections = Vec::with_capacity(2 * n);
    for k in 0..2 * n {
        let e = GeneralizedSection::basis(&chart, k);
        sections.push(e.sub(&rec.j.apply(&e).scale_const(i)));
    }
    let frame = SpanningFrame {
        label: format!("L({})", rec.label),
        sections,
        expected_rank: n,
    };
    validate_rank(&frame, plan)?;
    Ok(frame)
}

/// Closure of a frame under a bracket: for every unordered section pair the
/// bracket must lie in the pointwise complex span of the frame.
pub fn check_closed(
    frame: &SpanningFrame,
    bracket: &Bracket,
    plan: &SamplePlan,
) -> Result<CheckReport> {
    let chart = frame.sections[0].chart().clone();
    let points = chart.sample_points(plan)?;
    let bases: Vec<DMatrix<Complex64>> = points
        .iter()
        .map(|p| Ok(column_space_basis(&frame_matrix(frame, p)?)))
        .collect::<Result<_>>()?;

    let mut t = ResidualTracker::new();
    let k = frame.sections.len();
    for i in 0..k {
        for j in (i + 1)..k {
            let w = bracket.bracket(&frame.sections[i], &frame.sections[j])?;
            for (p, basis) in points.iter().zip(&bases) {
                let wv = w.evaluate_vector(p)?;
                t.observe(span_distance(basis, &wv), p, format!("pair ({},{})", i, j));
            }
        }
    }
    Ok(t
        .into_report(format!("closure({})", frame.label), plan.tolerance)
        .with_bracket(bracket))
}

/// Contact / strong / normal flags of a GACS relative to a named bracket.
#[derive(Clone, Debug)]
pub struct Classification {
    pub l_plus_closed: bool,
    pub l_minus_closed: bool,
    pub sections_bracket_vanishes: bool,
    pub report: CheckReport,
}

impl Classification {
    pub fn is_contact(&self) -> bool {
        self.l_plus_closed || self.l_minus_closed
    }

    pub fn is_strong(&self) -> bool {
        self.l_plus_closed && self.l_minus_closed
    }

    pub fn is_normal(&self) -> bool {
        self.is_strong() && self.sections_bracket_vanishes
    }

    pub fn level_name(&self) -> &'static str {
        if self.is_normal() {
            "normal"
        } else if self.is_strong() {
            "strong"
        } else if self.is_contact() {
            "contact"
        } else {
            "almost"
        }
    }

    pub fn flags_string(&self) -> String {
        format!(
            "contact={} strong={} normal={} (L+ closed={}, L- closed={}, [[E+,E-]]=0: {})",
            self.is_contact(),
            self.is_strong(),
            self.is_normal(),
            self.l_plus_closed,
            self.l_minus_closed,
            self.sections_bracket_vanishes
        )
    }
}

/// Classify a GACS: contact iff one of `L±` closes, strong iff both, normal
/// iff strong and `[[E₊, E₋]]` vanishes at the sample points.
pub fn classify_gacs(
    g: &GacsRecord,
    bracket: &Bracket,
    plan: &SamplePlan,
) -> Result<Classification> {
    let plus = check_closed(&build_eigenframe(g, FrameSide::LPlus, plan)?, bracket, plan)?;
    let minus = check_closed(&build_eigenframe(g, FrameSide::LMinus, plan)?, bracket, plan)?;

    let eb = bracket.bracket(&g.e_plus, &g.e_minus)?;
    let mut t = ResidualTracker::new();
    for p in g.chart().sample_points(plan)? {
        for c in eb.evaluate(&p)? {
            t.observe(c.norm(), &p, "[[E+,E-]] component");
        }
    }
    let sections = t
        .into_report("sections_bracket", plan.tolerance)
        .with_bracket(bracket);

    let l_plus_closed = plus.passed();
    let l_minus_closed = minus.passed();
    let sections_bracket_vanishes = sections.passed();
    // classification is a measurement; closure failures are data, not errors
    let report = CheckReport::combine(
        format!("classify({})", g.label),
        plan.tolerance,
        vec![plus, minus, sections],
    )
    .with_bracket(bracket)
    .with_verdict(true);
    let mut c = Classification {
        l_plus_closed,
        l_minus_closed,
        sections_bracket_vanishes,
        report,
    };
    c.report.notes = Some(c.flags_string());
    Ok(c)
}

/// Isotropy of a frame: all mutual pairings vanish at the sample points.
pub fn check_frame_isotropic(frame: &SpanningFrame, plan: &SamplePlan) -> Result<CheckReport> {
    let chart = frame.sections[0].chart().clone();
    let points = chart.sample_points(plan)?;
    let mut t = ResidualTracker::new();
    for i in 0..frame.sections.len() {
        for j in i..frame.sections.len() {
            let p_ij = pairing(&frame.sections[i], &frame.sections[j])?;
            for p in &points {
                t.observe(
                    p_ij.evaluate(p)?.norm(),
                    p,
                    format!("<v{},v{}>", i, j),
                );
            }
        }
    }
    Ok(t.into_report(format!("isotropy({})", frame.label), plan.tolerance))
}
