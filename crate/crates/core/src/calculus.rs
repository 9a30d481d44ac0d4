//! Tensor calculus on a chart: vector fields, k-forms, exterior derivative,
//! interior product, Lie derivative, Lie bracket, wedge, and symbolic
//! matrices of scalar fields.
//!
//! Forms are stored on strictly increasing multi-indices only; full
//! antisymmetry is materialized during evaluation.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::chart::{Chart, SamplePlan};
use crate::error::{Error, Result};
use crate::expr::ScalarField;

/// A vector field: one coefficient per coordinate direction.
#[derive(Clone, Debug)]
pub struct VectorField {
    chart: Chart,
    components: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(chart: &Chart, components: Vec<ScalarField>) -> Result<VectorField> {
        if components.len() != chart.dim() {
            return Err(Error::invalid(format!(
                "vector field needs {} components on {}",
                chart.dim(),
                chart.describe()
            )));
        }
        for c in &components {
            if !c.chart().compatible(chart) {
                return Err(Error::ChartMismatch(
                    chart.describe(),
                    c.chart().describe(),
                ));
            }
        }
        Ok(VectorField {
            chart: chart.clone(),
            components,
        })
    }

    pub fn parse(chart: &Chart, texts: &[&str]) -> Result<VectorField> {
        let components = texts
            .iter()
            .map(|t| ScalarField::parse(t, chart))
            .collect::<Result<Vec<_>>>()?;
        Self::new(chart, components)
    }

    pub fn zero(chart: &Chart) -> VectorField {
        VectorField {
            chart: chart.clone(),
            components: vec![ScalarField::zero(chart); chart.dim()],
        }
    }

    /// The coordinate basis field `∂/∂x_i`.
    pub fn basis(chart: &Chart, i: usize) -> VectorField {
        let mut v = Self::zero(chart);
        v.components[i] = ScalarField::one(chart);
        v
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &ScalarField {
        &self.components[i]
    }

    pub fn scale(&self, f: &ScalarField) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            components: self.components.iter().map(|c| c * f).collect(),
        }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn evaluate(&self, p: &[f64]) -> Result<Vec<Complex64>> {
        self.components.iter().map(|c| c.evaluate(p)).collect()
    }

    /// Directional derivative of a scalar: `X(f)`.
    pub fn apply_scalar(&self, f: &ScalarField) -> VectorFieldApply {
        let mut acc = ScalarField::zero(&self.chart);
        for (i, xi) in self.components.iter().enumerate() {
            acc = &acc + &(xi * &f.diff_index(i));
        }
        VectorFieldApply(acc)
    }
}

/// Thin wrapper so `X.apply_scalar(f).0` reads as a scalar.
pub struct VectorFieldApply(pub ScalarField);

/// A differential k-form stored on strictly increasing index tuples.
#[derive(Clone, Debug)]
pub struct KForm {
    chart: Chart,
    degree: usize,
    terms: BTreeMap<Vec<u8>, ScalarField>,
}

impl KForm {
    pub fn zero(chart: &Chart, degree: usize) -> KForm {
        KForm {
            chart: chart.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Degree-0 form from a scalar.
    pub fn from_scalar(f: &ScalarField) -> KForm {
        let mut k = KForm::zero(f.chart(), 0);
        k.insert(vec![], f.clone());
        k
    }

    /// One-form from per-coordinate components.
    pub fn one_form(chart: &Chart, components: Vec<ScalarField>) -> Result<KForm> {
        if components.len() != chart.dim() {
            return Err(Error::invalid("one component per coordinate"));
        }
        let mut k = KForm::zero(chart, 1);
        for (i, c) in components.into_iter().enumerate() {
            k.insert(vec![i as u8], c);
        }
        Ok(k)
    }

    pub fn parse_one_form(chart: &Chart, texts: &[&str]) -> Result<KForm> {
        let comps = texts
            .iter()
            .map(|t| ScalarField::parse(t, chart))
            .collect::<Result<Vec<_>>>()?;
        Self::one_form(chart, comps)
    }

    /// The coordinate differential `dx_i`.
    pub fn dx(chart: &Chart, i: usize) -> KForm {
        let mut k = KForm::zero(chart, 1);
        k.insert(vec![i as u8], ScalarField::one(chart));
        k
    }

    /// Build a form term by term; indices must be strictly increasing.
    pub fn from_terms(
        chart: &Chart,
        degree: usize,
        terms: Vec<(Vec<usize>, ScalarField)>,
    ) -> Result<KForm> {
        if degree > chart.dim() {
            return Err(Error::invalid("degree exceeds chart dimension"));
        }
        let mut k = KForm::zero(chart, degree);
        for (idx, f) in terms {
            if idx.len() != degree
                || !idx.windows(2).all(|w| w[0] < w[1])
                || idx.iter().any(|&i| i >= chart.dim())
            {
                return Err(Error::invalid(format!("bad index tuple {:?}", idx)));
            }
            let key: Vec<u8> = idx.iter().map(|&i| i as u8).collect();
            let sum = match k.terms.get(&key) {
                Some(existing) => existing + &f,
                None => f,
            };
            k.terms.remove(&key);
            k.insert(key, sum);
        }
        Ok(k)
    }

    fn insert(&mut self, key: Vec<u8>, f: ScalarField) {
        if !f.is_zero() {
            self.terms.insert(key, f);
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &ScalarField)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Coefficient on an increasing index tuple (zero when absent).
    pub fn coefficient(&self, idx: &[usize]) -> ScalarField {
        let key: Vec<u8> = idx.iter().map(|&i| i as u8).collect();
        self.terms
            .get(&key)
            .cloned()
            .unwrap_or_else(|| ScalarField::zero(&self.chart))
    }

    /// Components of a 1-form as a dense covector.
    pub fn one_form_components(&self) -> Vec<ScalarField> {
        assert_eq!(self.degree, 1, "one_form_components on degree {}", self.degree);
        (0..self.chart.dim())
            .map(|i| self.coefficient(&[i]))
            .collect()
    }

    /// The degree-0 payload.
    pub fn scalar_part(&self) -> ScalarField {
        assert_eq!(self.degree, 0);
        self.coefficient(&[])
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &KForm) -> KForm {
        assert_eq!(self.degree, other.degree, "degree mismatch in add");
        let mut out = self.clone();
        for (k, f) in &other.terms {
            let sum = match out.terms.get(k) {
                Some(existing) => existing + f,
                None => f.clone(),
            };
            out.terms.remove(k);
            out.insert(k.clone(), sum);
        }
        out
    }

    pub fn sub(&self, other: &KForm) -> KForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KForm {
        self.map(|f| -f)
    }

    pub fn scale(&self, f: &ScalarField) -> KForm {
        self.map(|g| g * f)
    }

    fn map(&self, op: impl Fn(&ScalarField) -> ScalarField) -> KForm {
        let mut out = KForm::zero(&self.chart, self.degree);
        for (k, f) in &self.terms {
            out.insert(k.clone(), op(f));
        }
        out
    }

    /// Evaluate the form on k vector fields.
    pub fn apply(&self, args: &[&VectorField]) -> Result<ScalarField> {
        if args.len() != self.degree {
            return Err(Error::invalid(format!(
                "degree {} form applied to {} vectors",
                self.degree,
                args.len()
            )));
        }
        let mut acc = ScalarField::zero(&self.chart);
        for (idx, f) in &self.terms {
            // determinant of the k x k matrix of argument components
            let k = idx.len();
            let m = MatrixField::from_fn(&self.chart, k, k, |a, b| {
                args[b].component(idx[a] as usize).clone()
            });
            acc = &acc + &(f * &m.det());
        }
        Ok(acc)
    }

    /// Max coefficient magnitude at a point.
    pub fn max_abs_at(&self, p: &[f64]) -> Result<f64> {
        let mut m = 0.0f64;
        for f in self.terms.values() {
            m = m.max(f.evaluate(p)?.norm());
        }
        Ok(m)
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let coords = self.chart.coords();
        let mut first = true;
        for (idx, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if idx.is_empty() {
                write!(f, "{}", coeff)?;
            } else {
                let basis = idx
                    .iter()
                    .map(|&i| format!("d{}", coords[i as usize]))
                    .collect::<Vec<_>>()
                    .join("^");
                write!(f, "({})*{}", coeff, basis)?;
            }
        }
        Ok(())
    }
}

/// Exterior derivative; raises degree by one, `d ∘ d = 0`.
pub fn exterior_derivative(omega: &KForm) -> Result<KForm> {
    let n = omega.chart.dim();
    if omega.degree >= n {
        return Err(Error::TopDegree);
    }
    let mut out = KForm::zero(&omega.chart, omega.degree + 1);
    for (idx, f) in &omega.terms {
        for m in 0..n {
            let mu = m as u8;
            if idx.contains(&mu) {
                continue;
            }
            let df = f.diff_index(m);
            if df.is_zero() {
                continue;
            }
            let below = idx.iter().filter(|&&i| i < mu).count();
            let signed = if below % 2 == 0 { df } else { -df };
            let mut key = idx.clone();
            key.push(mu);
            key.sort_unstable();
            let sum = match out.terms.get(&key) {
                Some(existing) => existing + &signed,
                None => signed,
            };
            out.terms.remove(&key);
            out.insert(key, sum);
        }
    }
    Ok(out)
}

/// Exterior derivative of a scalar as a 1-form.
pub fn d_scalar(f: &ScalarField) -> KForm {
    exterior_derivative(&KForm::from_scalar(f)).expect("degree 0 always differentiates")
}

/// Interior product; drops degree by one, `ι_X ι_X = 0`.
pub fn interior_product(x: &VectorField, omega: &KForm) -> Result<KForm> {
    if omega.degree == 0 {
        return Err(Error::ZeroDegree);
    }
    if !x.chart.compatible(&omega.chart) {
        return Err(Error::ChartMismatch(
            x.chart.describe(),
            omega.chart.describe(),
        ));
    }
    let mut out = KForm::zero(&omega.chart, omega.degree - 1);
    for (idx, f) in &omega.terms {
        for (j, &i) in idx.iter().enumerate() {
            let term = f * x.component(i as usize);
            if term.is_zero() {
                continue;
            }
            let signed = if j % 2 == 0 { term } else { -term };
            let mut key = idx.clone();
            key.remove(j);
            let sum = match out.terms.get(&key) {
                Some(existing) => existing + &signed,
                None => signed,
            };
            out.terms.remove(&key);
            out.insert(key, sum);
        }
    }
    Ok(out)
}

/// Lie derivative via the Cartan identity `L_X = ι_X d + d ι_X`.
pub fn lie_derivative(x: &VectorField, omega: &KForm) -> Result<KForm> {
    if !x.chart.compatible(&omega.chart) {
        return Err(Error::ChartMismatch(
            x.chart.describe(),
            omega.chart.describe(),
        ));
    }
    let n = omega.chart.dim();
    let mut acc = KForm::zero(&omega.chart, omega.degree);
    if omega.degree < n {
        acc = acc.add(&interior_product(x, &exterior_derivative(omega)?)?);
    }
    if omega.degree > 0 {
        let inner = interior_product(x, omega)?;
        let d_inner = if inner.degree() == 0 {
            d_scalar(&inner.scalar_part())
        } else {
            exterior_derivative(&inner)?
        };
        acc = acc.add(&d_inner);
    } else {
        acc = acc.add(&KForm::from_scalar(&x.apply_scalar(&omega.scalar_part()).0));
    }
    Ok(acc)
}

/// Lie bracket of vector fields.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    if !x.chart.compatible(&y.chart) {
        return Err(Error::ChartMismatch(x.chart.describe(), y.chart.describe()));
    }
    let n = x.chart.dim();
    let mut comps = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = ScalarField::zero(&x.chart);
        for j in 0..n {
            acc = &acc + &(x.component(j) * &y.component(i).diff_index(j));
            acc = &acc - &(y.component(j) * &x.component(i).diff_index(j));
        }
        comps.push(acc);
    }
    VectorField::new(&x.chart, comps)
}

/// Wedge product with graded antisymmetry.
pub fn wedge(a: &KForm, b: &KForm) -> Result<KForm> {
    if !a.chart.compatible(&b.chart) {
        return Err(Error::ChartMismatch(a.chart.describe(), b.chart.describe()));
    }
    let n = a.chart.dim();
    if a.degree + b.degree > n {
        return Err(Error::DegreeOverflow(a.degree, b.degree, n));
    }
    let mut out = KForm::zero(&a.chart, a.degree + b.degree);
    for (ia, fa) in &a.terms {
        for (ib, fb) in &b.terms {
            if ib.iter().any(|i| ia.contains(i)) {
                continue;
            }
            // inversions between the concatenated tuples give the shuffle sign
            let inversions: usize = ib
                .iter()
                .map(|&bidx| ia.iter().filter(|&&aidx| aidx > bidx).count())
                .sum();
            let coeff = fa * fb;
            if coeff.is_zero() {
                continue;
            }
            let signed = if inversions % 2 == 0 { coeff } else { -coeff };
            let mut key: Vec<u8> = ia.iter().chain(ib.iter()).cloned().collect();
            key.sort_unstable();
            let sum = match out.terms.get(&key) {
                Some(existing) => existing + &signed,
                None => signed,
            };
            out.terms.remove(&key);
            out.insert(key, sum);
        }
    }
    Ok(out)
}

/// A rows x cols matrix of scalar fields, row major.
#[derive(Clone, Debug)]
pub struct MatrixField {
    chart: Chart,
    rows: usize,
    cols: usize,
    data: Vec<ScalarField>,
}

impl MatrixField {
    pub fn from_fn(
        chart: &Chart,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> ScalarField,
    ) -> MatrixField {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        MatrixField {
            chart: chart.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn zero(chart: &Chart, rows: usize, cols: usize) -> MatrixField {
        Self::from_fn(chart, rows, cols, |_, _| ScalarField::zero(chart))
    }

    pub fn identity(chart: &Chart, n: usize) -> MatrixField {
        Self::from_fn(chart, n, n, |r, c| {
            if r == c {
                ScalarField::one(chart)
            } else {
                ScalarField::zero(chart)
            }
        })
    }

    /// Parse a full matrix from rows of expression strings.
    pub fn parse(chart: &Chart, rows: &[Vec<&str>]) -> Result<MatrixField> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::invalid("ragged or empty matrix"));
        }
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            for text in row {
                data.push(ScalarField::parse(text, chart)?);
            }
        }
        Ok(MatrixField {
            chart: chart.clone(),
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &ScalarField {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, f: ScalarField) {
        self.data[r * self.cols + c] = f;
    }

    pub fn transpose(&self) -> MatrixField {
        Self::from_fn(&self.chart, self.cols, self.rows, |r, c| {
            self.get(c, r).clone()
        })
    }

    pub fn mul(&self, other: &MatrixField) -> MatrixField {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        Self::from_fn(&self.chart, self.rows, other.cols, |r, c| {
            let mut acc = ScalarField::zero(&self.chart);
            for k in 0..self.cols {
                acc = &acc + &(self.get(r, k) * other.get(k, c));
            }
            acc
        })
    }

    pub fn add(&self, other: &MatrixField) -> MatrixField {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(&self.chart, self.rows, self.cols, |r, c| {
            self.get(r, c) + other.get(r, c)
        })
    }

    pub fn sub(&self, other: &MatrixField) -> MatrixField {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(&self.chart, self.rows, self.cols, |r, c| {
            self.get(r, c) - other.get(r, c)
        })
    }

    pub fn neg(&self) -> MatrixField {
        Self::from_fn(&self.chart, self.rows, self.cols, |r, c| -self.get(r, c))
    }

    pub fn scale(&self, f: &ScalarField) -> MatrixField {
        Self::from_fn(&self.chart, self.rows, self.cols, |r, c| self.get(r, c) * f)
    }

    pub fn apply_vector(&self, x: &VectorField) -> Vec<ScalarField> {
        assert_eq!(self.cols, x.components().len());
        (0..self.rows)
            .map(|r| {
                let mut acc = ScalarField::zero(&self.chart);
                for c in 0..self.cols {
                    acc = &acc + &(self.get(r, c) * x.component(c));
                }
                acc
            })
            .collect()
    }

    pub fn apply_components(&self, x: &[ScalarField]) -> Vec<ScalarField> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = ScalarField::zero(&self.chart);
                for c in 0..self.cols {
                    acc = &acc + &(self.get(r, c) * &x[c]);
                }
                acc
            })
            .collect()
    }

    /// Symbolic determinant by cofactor expansion along the first column,
    /// skipping structural zeros.
    pub fn det(&self) -> ScalarField {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        match self.rows {
            0 => ScalarField::one(&self.chart),
            1 => self.get(0, 0).clone(),
            _ => {
                let mut acc = ScalarField::zero(&self.chart);
                for r in 0..self.rows {
                    let pivot = self.get(r, 0);
                    if pivot.is_zero() {
                        continue;
                    }
                    let minor = self.minor(r, 0).det();
                    let term = pivot * &minor;
                    acc = if r % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> MatrixField {
        Self::from_fn(&self.chart, self.rows - 1, self.cols - 1, |r, c| {
            let rr = if r < skip_r { r } else { r + 1 };
            let cc = if c < skip_c { c } else { c + 1 };
            self.get(rr, cc).clone()
        })
    }

    /// Adjugate (transposed cofactor matrix), so `m * adj(m) = det(m) * I`.
    pub fn adjugate(&self) -> MatrixField {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 1 {
            return Self::identity(&self.chart, 1);
        }
        Self::from_fn(&self.chart, n, n, |r, c| {
            // adj[r][c] = (-1)^{r+c} det(minor(c, r))
            let m = self.minor(c, r).det();
            if (r + c) % 2 == 0 {
                m
            } else {
                -m
            }
        })
    }

    pub fn evaluate(&self, p: &[f64]) -> Result<DMatrix<Complex64>> {
        let mut out = DMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self.get(r, c).evaluate(p)?;
            }
        }
        Ok(out)
    }
}

/// Symbolic inverse via adjugate over determinant; the determinant is
/// required to stay away from zero on the plan's sample points, and the
/// first offending point is reported.
pub fn invert_matrix_field(m: &MatrixField, plan: &SamplePlan) -> Result<MatrixField> {
    assert_eq!(m.rows, m.cols, "inverse of non-square matrix");
    let det = m.det();
    for p in m.chart.sample_points(plan)? {
        let v = det.evaluate(&p)?;
        if v.norm() <= plan.tolerance {
            return Err(Error::SingularMatrix { point: p });
        }
    }
    let adj = m.adjugate();
    Ok(MatrixField::from_fn(&m.chart, m.rows, m.cols, |r, c| {
        adj.get(r, c) / &det
    }))
}

/// An exactly symmetric matrix of scalar fields: the lower triangle shares
/// the upper triangle's expression nodes.
#[derive(Clone, Debug)]
pub struct MetricTensor {
    mat: MatrixField,
}

impl MetricTensor {
    /// Symmetrize from the upper triangle of `m` (entries below the diagonal
    /// are ignored and replaced by shared clones of their mirror).
    pub fn new(m: MatrixField) -> Result<MetricTensor> {
        if m.rows != m.cols {
            return Err(Error::invalid("metric must be square"));
        }
        let sym = MatrixField::from_fn(&m.chart, m.rows, m.cols, |r, c| {
            if r <= c {
                m.get(r, c).clone()
            } else {
                m.get(c, r).clone()
            }
        });
        Ok(MetricTensor { mat: sym })
    }

    pub fn parse(chart: &Chart, rows: &[Vec<&str>]) -> Result<MetricTensor> {
        Self::new(MatrixField::parse(chart, rows)?)
    }

    pub fn matrix(&self) -> &MatrixField {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows
    }

    pub fn chart(&self) -> &Chart {
        &self.mat.chart
    }

    /// Positive definiteness at the plan's sample points.
    pub fn check_positive_definite(&self, plan: &SamplePlan) -> Result<()> {
        for p in self.chart().sample_points(plan)? {
            let m = self.mat.evaluate(&p)?;
            let real = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)].re);
            let min = crate::linalg::symmetric_eigenvalues(&real)[0];
            if min <= crate::linalg::PD_THRESHOLD {
                return Err(Error::ClassicalPrecondition {
                    what: "metric positive definiteness".into(),
                    residual: -min,
                    point: p,
                });
            }
        }
        Ok(())
    }
}

/// A 2-form as the block map `T -> T*`, `X ↦ ι_X ω`:
/// entry `(row j, col i)` is `ω(e_i, e_j)`.
pub fn two_form_block(omega: &KForm) -> MatrixField {
    assert_eq!(omega.degree(), 2, "two_form_block needs a 2-form");
    let chart = omega.chart().clone();
    let n = chart.dim();
    let mut m = MatrixField::zero(&chart, n, n);
    for (idx, f) in omega.terms.iter() {
        let (a, b) = (idx[0] as usize, idx[1] as usize);
        // ω(e_a, e_b) = f, ω(e_b, e_a) = -f
        m.set(b, a, f.clone());
        m.set(a, b, -f);
    }
    m
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

    #[test]
    fn exterior_derivative_examples() {
        let c = chart3();
        // d(x dy) = dx ^ dy
        let xdy = KForm::parse_one_form(&c, &["0", "x", "0"]).unwrap();
        let d = exterior_derivative(&xdy).unwrap();
        assert_eq!(format!("{}", d.coefficient(&[0, 1])), "1");
        assert!(d.coefficient(&[0, 2]).is_zero());

        // d(dz - y dx) = dx ^ dy
        let eta = KForm::parse_one_form(&c, &["-y", "0", "1"]).unwrap();
        let deta = exterior_derivative(&eta).unwrap();
        assert_eq!(format!("{}", deta.coefficient(&[0, 1])), "1");
        assert!(deta.coefficient(&[0, 2]).is_zero());
        assert!(deta.coefficient(&[1, 2]).is_zero());

        // d(df) = 0 for f = x^2 y
        let f = sf(&c, "x^2*y");
        let ddf = exterior_derivative(&d_scalar(&f)).unwrap();
        assert!(ddf.is_structurally_zero());

        // top-degree input errors
        let top = KForm::from_terms(&c, 3, vec![(vec![0, 1, 2], sf(&c, "x"))]).unwrap();
        assert!(matches!(exterior_derivative(&top), Err(Error::TopDegree)));
    }

    #[test]
    fn interior_product_examples() {
        let c = chart3();
        let dx_dy = KForm::from_terms(&c, 2, vec![(vec![0, 1], sf(&c, "1"))]).unwrap();
        let e0 = VectorField::basis(&c, 0);
        let got = interior_product(&e0, &dx_dy).unwrap();
        assert_eq!(format!("{}", got.coefficient(&[1])), "1");
        assert!(got.coefficient(&[0]).is_zero());

        // ι_{∂x}(dy) = 0
        let dy = KForm::dx(&c, 1);
        assert!(interior_product(&e0, &dy).unwrap().is_structurally_zero());

        // ι_ξ dη = 0 for η = dz - y dx, ξ = ∂z
        let eta = KForm::parse_one_form(&c, &["-y", "0", "1"]).unwrap();
        let xi = VectorField::basis(&c, 2);
        let r = interior_product(&xi, &exterior_derivative(&eta).unwrap()).unwrap();
        assert!(r.is_structurally_zero());

        // degree-0 input errors
        let f = KForm::from_scalar(&sf(&c, "x"));
        assert!(matches!(
            interior_product(&e0, &f),
            Err(Error::ZeroDegree)
        ));

        // ι_X ι_X = 0 on a 2-form with coefficients
        let om = KForm::from_terms(
            &c,
            2,
            vec![(vec![0, 1], sf(&c, "x*y")), (vec![1, 2], sf(&c, "z"))],
        )
        .unwrap();
        let x = VectorField::parse(&c, &["y", "x^2", "1"]).unwrap();
        let twice = interior_product(&x, &interior_product(&x, &om).unwrap());
        // degree would drop to 0 via a 1-form; evaluate instead of matching structure
        let once = interior_product(&x, &om).unwrap();
        let again = once.apply(&[&x]).unwrap();
        assert!(again.evaluate(&[0.3, -0.5, 0.8]).unwrap().norm() < 1e-14);
        drop(twice);
    }

    #[test]
    fn lie_derivative_examples() {
        let c = chart3();
        // L_{∂x}(x dy) = dy
        let e0 = VectorField::basis(&c, 0);
        let xdy = KForm::parse_one_form(&c, &["0", "x", "0"]).unwrap();
        let l = lie_derivative(&e0, &xdy).unwrap();
        assert_eq!(format!("{}", l.coefficient(&[1])), "1");

        // L_X 0 = 0
        let zero = KForm::zero(&c, 1);
        assert!(lie_derivative(&e0, &zero).unwrap().is_structurally_zero());

        // L_{∂x}(dx) = 0
        let dx = KForm::dx(&c, 0);
        assert!(lie_derivative(&e0, &dx).unwrap().is_structurally_zero());
    }

    #[test]
    fn lie_bracket_examples() {
        let c = chart3();
        let e0 = VectorField::basis(&c, 0);
        let e1 = VectorField::basis(&c, 1);
        assert!(lie_bracket(&e0, &e1)
            .unwrap()
            .components()
            .iter()
            .all(|f| f.is_zero()));

        // [∂x, x ∂y] = ∂y
        let xe1 = e1.scale(&sf(&c, "x"));
        let b = lie_bracket(&e0, &xe1).unwrap();
        assert_eq!(format!("{}", b.component(1)), "1");

        // [X, X] = 0
        let x = VectorField::parse(&c, &["y*z", "x^2", "sin(x)"]).unwrap();
        let xx = lie_bracket(&x, &x).unwrap();
        assert!(xx.components().iter().all(|f| f.is_zero()));
    }

    #[test]
    fn wedge_examples() {
        let c = chart3();
        // (dx ^ dy)(∂x, ∂y) = 1
        let w = wedge(&KForm::dx(&c, 0), &KForm::dx(&c, 1)).unwrap();
        let v = w
            .apply(&[&VectorField::basis(&c, 0), &VectorField::basis(&c, 1)])
            .unwrap();
        assert_eq!(format!("{}", v), "1");

        // dt ^ dt = 0
        let same = wedge(&KForm::dx(&c, 2), &KForm::dx(&c, 2)).unwrap();
        assert!(same.is_structurally_zero());

        // (y dx) ^ dz = y dx ^ dz
        let ydx = KForm::parse_one_form(&c, &["y", "0", "0"]).unwrap();
        let got = wedge(&ydx, &KForm::dx(&c, 2)).unwrap();
        assert_eq!(format!("{}", got.coefficient(&[0, 2])), "y");

        // graded antisymmetry on 1-forms: a^b = -b^a (pointwise; the two
        // orders multiply coefficients in opposite order)
        let a = KForm::parse_one_form(&c, &["x", "0", "z^2"]).unwrap();
        let b = KForm::parse_one_form(&c, &["0", "y", "1"]).unwrap();
        let ab = wedge(&a, &b).unwrap();
        let ba = wedge(&b, &a).unwrap();
        let sum = ab.add(&ba);
        for p in c.sample_points(&SamplePlan::default()).unwrap() {
            assert!(sum.max_abs_at(&p).unwrap() < 1e-14);
        }

        // overflow
        let two = wedge(&a, &b).unwrap();
        assert!(matches!(
            wedge(&two, &two),
            Err(Error::DegreeOverflow(2, 2, 3))
        ));
    }

    #[test]
    fn matrix_inverse_examples() {
        let plan = SamplePlan::default();
        let c = chart3();
        let id = MatrixField::identity(&c, 3);
        let inv = invert_matrix_field(&id, &plan).unwrap();
        for p in c.sample_points(&plan).unwrap().iter().take(3) {
            let m = inv.evaluate(p).unwrap();
            assert!(crate::linalg::max_abs(&(m - DMatrix::identity(3, 3))) < 1e-12);
        }

        // diag(e^t, 1) inverse is diag(e^{-t}, 1)
        let ct = Chart::new(&["t", "s"], &[(0.1, 2.0), (-1.0, 1.0)]).unwrap();
        let m = MatrixField::parse(&ct, &[vec!["exp(t)", "0"], vec!["0", "1"]]).unwrap();
        let minv = invert_matrix_field(&m, &plan).unwrap();
        for p in [[0.5, 0.0], [1.5, 0.3]] {
            let v = minv.get(0, 0).evaluate(&p).unwrap();
            assert!((v.re - (-p[0]).exp()).abs() < 1e-12);
        }

        // 2x2 shear by adjugate
        let cxy = Chart::new(&["x", "y"], &[(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        let m = MatrixField::parse(&cxy, &[vec!["1", "y"], vec!["0", "1"]]).unwrap();
        let inv = invert_matrix_field(&m, &plan).unwrap();
        assert_eq!(format!("{}", inv.get(0, 1)), "-y");
        assert_eq!(format!("{}", inv.get(0, 0)), "1");

        // singular matrix reports a witness
        let sing = MatrixField::parse(&cxy, &[vec!["x", "0"], vec!["x", "0"]]).unwrap();
        assert!(matches!(
            invert_matrix_field(&sing, &plan),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn metric_tensor_shares_asts() {
        let c = chart3();
        let g = MetricTensor::parse(
            &c,
            &[
                vec!["1 + y^2", "0", "-y"],
                vec!["999", "1", "0"], // lower triangle is ignored
                vec!["999", "999", "1"],
            ],
        )
        .unwrap();
        assert_eq!(format!("{}", g.matrix().get(2, 0)), "-y");
        assert_eq!(format!("{}", g.matrix().get(0, 2)), "-y");
        g.check_positive_definite(&SamplePlan::default()).unwrap();
    }
}
