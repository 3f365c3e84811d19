//! Div-curl experiments on periodic grids.
//!
//! Weak convergence is emulated by oscillatory families `U(x) + W(k x)` and
//! observed two ways: through the global pairing `⟨u_k, v_k⟩` and through
//! pairings against a fixed set of smooth test functions. Quadrature is the
//! grid sum with weight `h^d`, exact for trigonometric polynomials below
//! the Nyquist mode.

mod experiments;
mod expr;
mod family;
mod friedrichs;
mod table;

pub use experiments::{
    closed_form_divergence, counterexample_family, gradient_family, projection_convergence, run_counterexample,
    run_positive, sawtooth_pair, trig_pair, ProjectionRow, ProjectionTable, TEST_FUNCTIONS,
};
pub use expr::Expr;
pub use family::{sample_exprs, OscillatoryFamily};
pub use friedrichs::{friedrichs_check, friedrichs_terms, FriedrichsReport, FriedrichsTrial};
pub use table::{fit_slope, ConvergenceRow, ConvergenceTable, CSV_HEADER};
