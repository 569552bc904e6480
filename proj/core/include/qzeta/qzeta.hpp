#pragma once

#include <optional>
#include <utility>

#include "qzeta/qcore.hpp"

namespace qzeta {

enum class SeriesKind {
    F_CHI,     // f_q(s, t, chi)
    G_HURWITZ, // g_q(s, t, a)
    L_NU,      // L_q^{(nu)}(s, chi) = f_q(s, s - nu, chi)
    ZETA_NU,   // zeta_q^{(nu)}(s) = L with trivial character
    L_MU,      // L_q^{mu}(s, chi) = f_q(s, mu, chi)
    TSUMURA    // zeta_q^{mu}(s, a)
};

// One member of the q-series family, pinned down by kind plus the
// parameters that kind uses; build through the factory helpers below.
struct SeriesSpec {
    SeriesKind kind = SeriesKind::ZETA_NU;
    Cx s;
    Cx t;       // F_CHI / G_HURWITZ exponent parameter
    int order = 1;  // nu (L_NU / ZETA_NU) or mu (L_MU / TSUMURA)
    double a = 1.0; // Hurwitz shift in (0,1]
    std::optional<DirichletCharacter> chi;

    // Exponent parameter t of the underlying f/g series.
    Cx effective_t() const;
    // Character actually summed over (trivial mod 1 when absent).
    const DirichletCharacter& character() const;
    void validate() const;
};

SeriesSpec f_chi_spec(Cx s, Cx t, DirichletCharacter chi);
SeriesSpec g_hurwitz_spec(Cx s, Cx t, double a);
SeriesSpec l_nu_spec(Cx s, int nu, DirichletCharacter chi);
SeriesSpec zeta_nu_spec(Cx s, int nu);
SeriesSpec l_mu_spec(Cx s, int mu, DirichletCharacter chi);
SeriesSpec tsumura_spec(Cx s, int mu, double a);

enum class Strategy { DIRECT, EXPANSION, EULER_MACLAURIN };

struct EvalOutput {
    Cx value;
    std::optional<double> bound; // certified |remainder|, EM route only
    Strategy strategy = Strategy::DIRECT;
    int terms_used = 0;
};

// Parameter tuple of the Euler-Maclaurin evaluator: head cutoff N,
// beta-recursion depth M, Bernoulli order n, Fourier window [l0, l1]
// excluding 0, and the requested remainder target.
struct EvalParams {
    int N = 1;
    int M = 2;
    int n = 1;
    int l0 = -1;
    int l1 = 1;
    double target = 1e-5;

    void validate() const; // throws ParamError
};

// Table of the Leibniz-diagram coefficients a_j^{(n)} for j = 0..n at
// fixed (s, t), built by a_j^{(n)} = (t+j) a_j^{(n-1)} + (s+j-1) a_{j-1}^{(n-1)}.
struct ACoeffTable {
    int n = 0;
    Cx s;
    Cx t;
    std::vector<Cx> entries; // size n + 1
};

ACoeffTable a_coeffs(int n, Cx s, Cx t);

// Plain partial summation of the defining series; needs Re(t) > 0.
EvalOutput f_direct(const SeriesSpec& spec, const QParam& q, double tol = 1e-12,
                    int max_terms = 2000000);

// Binomial-expansion continuation
//   L_q^{(nu)}(s,chi) = (1-q)^s sum_r C(s+r-1, r) g_chi(q^{s-nu+r}),
// valid for all s away from the pole set; the default strategy.
// Accepts kinds L_NU, ZETA_NU, L_MU.
EvalOutput zeta_expansion(const SeriesSpec& spec, const QParam& q, double tol = 1e-12,
                          int max_terms = 2000000);

// Euler-Maclaurin evaluation of zeta_q^{(nu)}(s) (trivial character)
// with a certified remainder bound; needs Re(s) > nu + 1 - M.
EvalOutput zeta_em(Cx s, int nu, const QParam& q, const EvalParams& params);

// The certified upper bound on the EM remainder for these parameters.
double remainder_bound(Cx s, int nu, const QParam& q, const EvalParams& params);

// Deterministic search for a parameter tuple with
// remainder_bound < target; cheapest admissible tuple wins.
EvalParams auto_params(Cx s, int nu, const QParam& q, double target);

// L_q^{(nu)}(-m, chi) by the finite special-value formula.
Cx special_value_neg_int(int m, int nu, const DirichletCharacter& chi, const QParam& q);

// The crystal (q -> 0) limit on its domain of existence.
Cx crystal_value(Cx s, int nu, const DirichletCharacter& chi);

// zeta_q^{mu}(s, a) = (mu-1)!/(1-s)_mu (1-q)^s / log q + g_q(s, mu, a).
Cx tsumura_zeta(Cx s, int mu, double a, const QParam& q, double tol = 1e-12);

// Jackson q-gamma and its logarithmic derivative.
Cx q_gamma(Cx s, const QParam& q, double tol = 1e-14);
Cx q_digamma(Cx s, const QParam& q, double tol = 1e-14);

// L_q^{(nu)}(1, chi) for non-principal chi through the q-gamma identity.
Cx L_at_one_via_qgamma(int nu, const DirichletCharacter& chi, const QParam& q,
                       double tol = 1e-12);

// Term-wise derivatives of the expansion, in s and in q.
Cx dzeta_ds(const SeriesSpec& spec, const QParam& q, double tol = 1e-12);
Cx dzeta_dq(const SeriesSpec& spec, const QParam& q, double tol = 1e-12);

// Value and s-derivative from one pass over the expansion (Newton).
std::pair<Cx, Cx> zeta_and_ds(const SeriesSpec& spec, const QParam& q, double tol = 1e-12);

// |1 - q^{N(s-nu+r)}| below this inside an expansion term raises
// PoleProximity (the removable cases are taken analytically first).
inline constexpr double kExpansionPoleThreshold = 1e-8;

} // namespace qzeta
