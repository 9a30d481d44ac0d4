//! Symbolic scalar fields: complex-valued expressions over chart coordinates,
//! closed under exact differentiation.
//!
//! ```
//! use gengeo::{Chart, ScalarField};
//! let chart = Chart::new(&["x", "y"], &[(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
//! let f = ScalarField::parse("x^2*y + exp(x)", &chart).unwrap();
//! let fx = f.differentiate("x").unwrap();
//! let v = fx.evaluate(&[0.0, 3.0]).unwrap();
//! assert!((v.re - 1.0).abs() < 1e-15); // 2xy + e^x at (0,3)
//! ```

pub(crate) mod ast;
mod parser;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::chart::Chart;
use crate::error::{Error, Result};

use ast::Node;

/// A complex-valued symbolic function of the chart coordinates.
///
/// Immutable and cheap to clone; safe to share across threads.
#[derive(Clone, Debug)]
pub struct ScalarField {
    chart: Chart,
    node: Node,
}

impl ScalarField {
    /// Parse an expression in the grammar documented on [`ScalarField::parse`]'s
    /// module; every identifier must be a coordinate of `chart`.
    pub fn parse(text: &str, chart: &Chart) -> Result<ScalarField> {
        Ok(ScalarField {
            chart: chart.clone(),
            node: parser::parse(text, chart)?,
        })
    }

    pub fn constant(chart: &Chart, c: Complex64) -> ScalarField {
        ScalarField {
            chart: chart.clone(),
            node: ast::constant(c),
        }
    }

    pub fn real(chart: &Chart, x: f64) -> ScalarField {
        Self::constant(chart, Complex64::new(x, 0.0))
    }

    pub fn zero(chart: &Chart) -> ScalarField {
        Self::real(chart, 0.0)
    }

    pub fn one(chart: &Chart) -> ScalarField {
        Self::real(chart, 1.0)
    }

    /// The imaginary unit as a field.
    pub fn imag(chart: &Chart) -> ScalarField {
        Self::constant(chart, Complex64::new(0.0, 1.0))
    }

    pub fn coord(chart: &Chart, name: &str) -> Result<ScalarField> {
        match chart.coord_index(name) {
            Some(i) => Ok(ScalarField {
                chart: chart.clone(),
                node: ast::var(i),
            }),
            None => Err(Error::UnknownCoordinate(name.to_string())),
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// Structurally the zero constant (after folding).  Sparse containers use
    /// this to drop entries; correctness never depends on it.
    pub fn is_zero(&self) -> bool {
        ast::is_zero(&self.node)
    }

    pub fn as_constant(&self) -> Option<Complex64> {
        match &*self.node {
            ast::Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Exact symbolic partial derivative along a named coordinate.
    pub fn differentiate(&self, coord: &str) -> Result<ScalarField> {
        match self.chart.coord_index(coord) {
            Some(i) => Ok(self.diff_index(i)),
            None => Err(Error::UnknownCoordinate(coord.to_string())),
        }
    }

    pub(crate) fn diff_index(&self, i: usize) -> ScalarField {
        ScalarField {
            chart: self.chart.clone(),
            node: ast::diff(&self.node, i),
        }
    }

    /// Evaluate at a real point (one value per chart coordinate).
    pub fn evaluate(&self, point: &[f64]) -> Result<Complex64> {
        if point.len() != self.chart.dim() {
            return Err(Error::invalid(format!(
                "point has {} values, chart {} needs {}",
                point.len(),
                self.chart.describe(),
                self.chart.dim()
            )));
        }
        ast::eval(&self.node, point)
    }

    /// Move the field onto `chart`, sending coordinate `k` to `map[k]`.
    pub(crate) fn reindex(&self, map: &[usize], chart: &Chart) -> ScalarField {
        ScalarField {
            chart: chart.clone(),
            node: ast::reindex(&self.node, map),
        }
    }

    pub fn exp(&self) -> ScalarField {
        self.apply("exp")
    }

    pub fn powi(&self, e: i32) -> ScalarField {
        ScalarField {
            chart: self.chart.clone(),
            node: ast::pow(self.node.clone(), e),
        }
    }

    fn apply(&self, f: &str) -> ScalarField {
        ScalarField {
            chart: self.chart.clone(),
            node: ast::apply_fn(f, self.node.clone()).expect("known function"),
        }
    }

    pub fn scale(&self, c: Complex64) -> ScalarField {
        ScalarField {
            chart: self.chart.clone(),
            node: ast::mul(ast::constant(c), self.node.clone()),
        }
    }

    fn assert_chart(&self, other: &ScalarField) {
        assert!(
            self.chart.compatible(&other.chart),
            "scalar fields on different charts: {} vs {}",
            self.chart.describe(),
            other.chart.describe()
        );
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            ast::DisplayExpr {
                node: &self.node,
                coords: self.chart.coords(),
            }
        )
    }
}

macro_rules! field_binop {
    ($trait:ident, $method:ident, $ctor:path) => {
        impl $trait for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                self.assert_chart(rhs);
                ScalarField {
                    chart: self.chart.clone(),
                    node: $ctor(self.node.clone(), rhs.node.clone()),
                }
            }
        }
        impl $trait for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: ScalarField) -> ScalarField {
                (&self).$method(&rhs)
            }
        }
    };
}

field_binop!(Add, add, ast::add);
field_binop!(Sub, sub, ast::sub);
field_binop!(Mul, mul, ast::mul);
field_binop!(Div, div, ast::div);

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        ScalarField {
            chart: self.chart.clone(),
            node: ast::neg(self.node.clone()),
        }
    }
}

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart_xy() -> Chart {
        Chart::new(&["x", "y"], &[(-1.0, 1.0), (-1.0, 1.0)]).unwrap()
    }

    #[test]
    fn parses_sum_and_product_shapes() {
        let c = chart_xy();
        let f = ScalarField::parse("x + 2*y", &c).unwrap();
        assert_eq!(f.evaluate(&[1.0, 2.0]).unwrap(), Complex64::new(5.0, 0.0));

        let ct = Chart::new(&["x", "t"], &[(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        let g = ScalarField::parse("exp(t)*sin(x)", &ct).unwrap();
        let v = g.evaluate(&[0.5, 0.25]).unwrap();
        assert!((v.re - 0.25f64.exp() * 0.5f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn incomplete_input_reports_position() {
        let c = chart_xy();
        match ScalarField::parse("x + ", &c) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {:?}", other),
        }
    }

    #[test]
    fn unknown_variable_names_the_offender() {
        let c = chart_xy();
        match ScalarField::parse("x + z", &c) {
            Err(Error::UnknownVariable { name, pos }) => {
                assert_eq!(name, "z");
                assert_eq!(pos, 4);
            }
            other => panic!("expected unknown-variable error, got {:?}", other),
        }
    }

    #[test]
    fn unknown_function_is_a_syntax_error() {
        let c = chart_xy();
        assert!(matches!(
            ScalarField::parse("tan(x)", &c),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn derivative_examples() {
        let c = chart_xy();
        let x2 = ScalarField::parse("x^2", &c).unwrap();
        let d = x2.differentiate("x").unwrap();
        assert_eq!(d.evaluate(&[3.0, 0.0]).unwrap(), Complex64::new(6.0, 0.0));

        let ct = Chart::new(&["t"], &[(-1.0, 1.0)]).unwrap();
        let et = ScalarField::parse("exp(t)", &ct).unwrap();
        let det = et.differentiate("t").unwrap();
        assert_eq!(format!("{}", det), "exp(t)");

        let xy = ScalarField::parse("x*y", &c).unwrap();
        let dy = xy.differentiate("y").unwrap();
        assert_eq!(format!("{}", dy), "x");

        assert!(x2.differentiate("q").is_err());
    }

    #[test]
    fn imaginary_unit_evaluates() {
        let c = chart_xy();
        let f = ScalarField::parse("i*x", &c).unwrap();
        assert_eq!(f.evaluate(&[2.0, 0.0]).unwrap(), Complex64::new(0.0, 2.0));
        let e = ScalarField::parse("exp(0)", &c).unwrap();
        assert_eq!(e.evaluate(&[0.0, 0.0]).unwrap(), Complex64::ONE);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let c = chart_xy();
        let f = ScalarField::parse("1/x", &c).unwrap();
        assert!(matches!(
            f.evaluate(&[0.0, 0.0]),
            Err(Error::DivisionByZero { .. })
        ));
        assert!(f.evaluate(&[2.0, 0.0]).is_ok());
    }

    #[test]
    fn print_parse_is_a_fixed_point() {
        let c = chart_xy();
        for src in [
            "x + 2*y",
            "-x^2 + (x - y)/(1 + x^2)",
            "exp(x)*sin(y) - cosh(x*y)",
            "(2 + 3*i)*x^-2",
            "-(x*y)",
            "1.5e-3*x",
        ] {
            let f = ScalarField::parse(src, &c).unwrap();
            let printed = format!("{}", f);
            let g = ScalarField::parse(&printed, &c).unwrap();
            assert_eq!(printed, format!("{}", g), "fixed point for `{}`", src);
            for p in [[0.3, -0.7], [0.9, 0.2]] {
                let a = f.evaluate(&p).unwrap();
                let b = g.evaluate(&p).unwrap();
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
