//! Structure records and checkers: generalized almost contact (metric)
//! structures, generalized almost complex structures, generalized metrics,
//! eigenbundle frames and bracket-closure classification.

mod checks;
mod frames;
mod lifts;

pub use checks::{
    check_co_kahler, check_gacms, check_gacs, check_gacx, check_generalized_kahler,
    check_generalized_metric, check_integrable_gacx, metric_axioms,
};
pub use frames::{
    build_eigenframe, check_closed, check_frame_isotropic, classify_gacs, gacx_eigenframe,
    Classification, FrameSide,
};
pub use lifts::{
    lift_almost_contact, lift_complex, lift_contact, lift_symplectic, metric_lift, scale_e_plus,
};

use crate::bigtangent::{BundleEndomorphism, GeneralizedSection};
use crate::chart::Chart;
use crate::error::{Error, Result};

/// Sekiya triple `(Φ, E₊, E₋)`.
///
/// `axes` lists the coordinate directions whose `∂/∂x` and `dx` span the
/// sub-bundle the structure lives on.  Plain chart structures use all axes;
/// structures carried along a product factor restrict to that factor's
/// coordinates while their coefficients may depend on all of them.
#[derive(Clone, Debug)]
pub struct GacsRecord {
    pub label: String,
    pub phi: BundleEndomorphism,
    pub e_plus: GeneralizedSection,
    pub e_minus: GeneralizedSection,
    pub axes: Vec<usize>,
}

impl GacsRecord {
    pub fn new(
        label: impl Into<String>,
        phi: BundleEndomorphism,
        e_plus: GeneralizedSection,
        e_minus: GeneralizedSection,
    ) -> Result<GacsRecord> {
        let axes = (0..phi.chart().dim()).collect();
        Self::with_axes(label, phi, e_plus, e_minus, axes)
    }

    pub fn with_axes(
        label: impl Into<String>,
        phi: BundleEndomorphism,
        e_plus: GeneralizedSection,
        e_minus: GeneralizedSection,
        axes: Vec<usize>,
    ) -> Result<GacsRecord> {
        let chart = phi.chart();
        for s in [&e_plus, &e_minus] {
            if !s.chart().compatible(chart) {
                return Err(Error::ChartMismatch(
                    chart.describe(),
                    s.chart().describe(),
                ));
            }
        }
        if axes.is_empty() || axes.iter().any(|&a| a >= chart.dim()) {
            return Err(Error::invalid("bad axis list"));
        }
        Ok(GacsRecord {
            label: label.into(),
            phi,
            e_plus,
            e_minus,
            axes,
        })
    }

    pub fn chart(&self) -> &Chart {
        self.phi.chart()
    }

    /// Relabel, keeping everything else.
    pub fn renamed(&self, label: impl Into<String>) -> GacsRecord {
        let mut r = self.clone();
        r.label = label.into();
        r
    }
}

/// A GACS together with a compatible generalized metric.
#[derive(Clone, Debug)]
pub struct GacmsRecord {
    pub gacs: GacsRecord,
    pub metric: BundleEndomorphism,
}

impl GacmsRecord {
    pub fn new(gacs: GacsRecord, metric: BundleEndomorphism) -> Result<GacmsRecord> {
        if !metric.chart().compatible(gacs.chart()) {
            return Err(Error::ChartMismatch(
                gacs.chart().describe(),
                metric.chart().describe(),
            ));
        }
        Ok(GacmsRecord { gacs, metric })
    }

    pub fn chart(&self) -> &Chart {
        self.gacs.chart()
    }

    pub fn label(&self) -> &str {
        &self.gacs.label
    }
}

/// Generalized almost complex structure: a single pairing-skew square root
/// of `-Id`.
#[derive(Clone, Debug)]
pub struct GacxRecord {
    pub label: String,
    pub j: BundleEndomorphism,
}

impl GacxRecord {
    pub fn new(label: impl Into<String>, j: BundleEndomorphism) -> GacxRecord {
        GacxRecord {
            label: label.into(),
            j,
        }
    }

    pub fn chart(&self) -> &Chart {
        self.j.chart()
    }
}

/// A generating set of complex sections for one of the eigenbundles
/// `L⁺`, `L⁻` or `L`.  May be over-complete; `expected_rank` is the
/// pointwise complex rank the span must have.
#[derive(Clone, Debug)]
pub struct SpanningFrame {
    pub label: String,
    pub sections: Vec<GeneralizedSection>,
    pub expected_rank: usize,
}

/// The second structure of a commuting pair: `Φ̃ = G ∘ Φ` with the sections
/// relabeled (`swap` exchanges the ± labels, matching `Ẽ₊ = G E₊ = E₋` on
/// valid records).
pub fn gphi_tilde(record: &GacmsRecord, swap: bool) -> Result<GacmsRecord> {
    let gacs = &record.gacs;
    let phi_tilde = record.metric.compose(&gacs.phi);
    let (e_plus, e_minus) = if swap {
        (gacs.e_minus.clone(), gacs.e_plus.clone())
    } else {
        (gacs.e_plus.clone(), gacs.e_minus.clone())
    };
    let tilde = GacsRecord::with_axes(
        format!("{}~", gacs.label),
        phi_tilde,
        e_plus,
        e_minus,
        gacs.axes.clone(),
    )?;
    GacmsRecord::new(tilde, record.metric.clone())
}
