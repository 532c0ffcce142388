//! `log theta`, the bound chain and sign certification.

pub mod bounds;
pub mod subdivide;
pub mod tangent;
pub mod theta;

pub use bounds::{
    bound_function, bound_function_derivative, derivative_negative_from, derivative_sign_report, f_at_3k,
    kth_sign_threshold, paper_bound_terms, tail_bound_report, BoundFunction, DerivativeSignReport, TailReport,
    ThresholdCertificate, PRINTED_TOTAL_AT_6,
};
pub use subdivide::{
    certify_d2_log_theta, certify_negative, replay, CertLeaf, CertStatus, CertifyOptions, D2LogTheta,
    SignCertificate, SignTarget,
};
pub use tangent::{
    finite_difference, kth_sign_tangent, log4x_derivs, log_4x_deriv_bound, tangent_interp, Log4xReport, SignFlag,
    TangentSignReport, TangentVariant,
};
pub use theta::{
    d2_log_theta, kth_deriv_log_theta, log_theta, log_zeta_derivs, log_zeta_from_derivs, logx_over_x_deriv,
    theta, BoundBreakdown,
};
