//! Generalized trigonometric and hyperbolic functions with parameter
//! derivatives and numerical convexity certification.

// `!(x <= bound)` is used on purpose so that NaN takes the failure branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod error;
pub mod gtrig;
pub mod lab;
pub mod numeric;
pub mod quadrature;
pub mod report;
pub mod roots;

pub use calculus::{derivative_report, derivative_report_with, DerivativeReport, KernelBundle};
pub use error::{Error, Result};
pub use gtrig::{Evaluation, Evaluator, FunctionKind, HalfPeriod, Parameter};
pub use lab::{Margin, Mode, Property, ScanConfig, ScanReport, Verdict};
pub use quadrature::{QuadResult, QuadratureConfig};
