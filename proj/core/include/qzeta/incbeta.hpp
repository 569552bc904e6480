#pragma once

#include "qzeta/qcore.hpp"

namespace qzeta {

// Integration request for b_q(alpha, beta) = int_0^q u^{a-1}(1-u)^{b-1} du.
struct IncBetaRequest {
    double upper_limit; // q in (0,1)
    Cx alpha;
    Cx beta;
};

// Direct adaptive quadrature; requires Re(alpha) > 0. The integrable
// endpoint singularity at u = 0 (when Re(alpha) < 1) is removed by the
// substitution u = v^{1/Re(alpha)}.
Cx incomplete_beta(const IncBetaRequest& req, double tol = 1e-12);

// b_q(alpha, beta) through `steps` upward integrations by parts:
// finite sum of q^{alpha+l-1}(1-q)^{beta-l} terms plus a Pochhammer
// multiple of b_q(alpha+steps, beta-steps). This is the route into
// Re(alpha) <= 0.
Cx raise_alpha_recurrence(double q, Cx alpha, Cx beta, int steps, double tol = 1e-12);

// The mirrored recurrence through b_q(alpha-steps, beta+steps);
// requires Re(alpha) > steps.
Cx lower_alpha_recurrence(double q, Cx alpha, Cx beta, int steps, double tol = 1e-12);

// Elementary closed form of b_q(alpha-nu+1, -alpha):
//   -sum_{r=0}^{nu-1} (-nu+1)_r / (-alpha)_{r+1} q^{alpha-nu+1} (1-q)^{-alpha+r}
Cx closed_form_special(double q, Cx alpha, int nu);

// Complete beta function Gamma(a)Gamma(b)/Gamma(a+b).
Cx complete_beta(Cx alpha, Cx beta);

// Complex log-gamma (Lanczos with reflection); principal-ish branch,
// adequate wherever only exp(log_gamma(...)) combinations are used.
Cx log_gamma(Cx z);

// |(x)_k| below this is treated as a pole of the continuation.
inline constexpr double kPochhammerPoleThreshold = 1e-12;

} // namespace qzeta
