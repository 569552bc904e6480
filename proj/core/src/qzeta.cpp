#include "qzeta/qzeta.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <sstream>
#include <tuple>
#include <vector>

namespace qzeta {

namespace {

// Subtract the nearest multiple of 2*pi*i; exp() is invariant under it
// and the reduced argument keeps expm1_complex accurate.
Cx reduce_2pii(Cx z) {
    double k = std::round(z.imag() / (2.0 * kPi));
    return Cx(z.real(), z.imag() - 2.0 * kPi * k);
}

// (1 - q)^e through the real log.
Cx one_minus_q_pow(double q, Cx e) { return std::exp(e * std::log1p(-q)); }

const DirichletCharacter& trivial_character() {
    static const DirichletCharacter chi = principal_character(1);
    return chi;
}

} // namespace

Cx SeriesSpec::effective_t() const {
    switch (kind) {
    case SeriesKind::F_CHI:
    case SeriesKind::G_HURWITZ:
        return t;
    case SeriesKind::L_NU:
    case SeriesKind::ZETA_NU:
        return s - static_cast<double>(order);
    case SeriesKind::L_MU:
    case SeriesKind::TSUMURA:
        return Cx(static_cast<double>(order), 0.0);
    }
    return t;
}

const DirichletCharacter& SeriesSpec::character() const {
    if (chi.has_value()) return *chi;
    return trivial_character();
}

void SeriesSpec::validate() const {
    switch (kind) {
    case SeriesKind::G_HURWITZ:
    case SeriesKind::TSUMURA:
        if (!(a > 0.0 && a <= 1.0))
            throw DomainError("SeriesSpec: Hurwitz shift a must lie in (0,1]");
        break;
    default:
        break;
    }
    switch (kind) {
    case SeriesKind::L_NU:
    case SeriesKind::ZETA_NU:
    case SeriesKind::L_MU:
    case SeriesKind::TSUMURA:
        if (order < 1) throw DomainError("SeriesSpec: order parameter must be >= 1");
        break;
    default:
        break;
    }
}

SeriesSpec f_chi_spec(Cx s, Cx t, DirichletCharacter chi) {
    SeriesSpec spec;
    spec.kind = SeriesKind::F_CHI;
    spec.s = s;
    spec.t = t;
    spec.chi = std::move(chi);
    return spec;
}

SeriesSpec g_hurwitz_spec(Cx s, Cx t, double a) {
    SeriesSpec spec;
    spec.kind = SeriesKind::G_HURWITZ;
    spec.s = s;
    spec.t = t;
    spec.a = a;
    spec.validate();
    return spec;
}

SeriesSpec l_nu_spec(Cx s, int nu, DirichletCharacter chi) {
    SeriesSpec spec;
    spec.kind = SeriesKind::L_NU;
    spec.s = s;
    spec.order = nu;
    spec.chi = std::move(chi);
    spec.validate();
    return spec;
}

SeriesSpec zeta_nu_spec(Cx s, int nu) {
    SeriesSpec spec;
    spec.kind = SeriesKind::ZETA_NU;
    spec.s = s;
    spec.order = nu;
    spec.validate();
    return spec;
}

SeriesSpec l_mu_spec(Cx s, int mu, DirichletCharacter chi) {
    SeriesSpec spec;
    spec.kind = SeriesKind::L_MU;
    spec.s = s;
    spec.order = mu;
    spec.chi = std::move(chi);
    spec.validate();
    return spec;
}

SeriesSpec tsumura_spec(Cx s, int mu, double a) {
    SeriesSpec spec;
    spec.kind = SeriesKind::TSUMURA;
    spec.s = s;
    spec.order = mu;
    spec.a = a;
    spec.validate();
    return spec;
}

void EvalParams::validate() const {
    if (N < 1) throw ParamError("EvalParams: N must be >= 1");
    if (M < 2) throw ParamError("EvalParams: M must be >= 2");
    if (n < 1) throw ParamError("EvalParams: n must be >= 1");
    if (!(l0 < l1)) throw ParamError("EvalParams: needs l0 < l1");
    if (!(target > 0.0)) throw ParamError("EvalParams: target must be positive");
}

ACoeffTable a_coeffs(int n, Cx s, Cx t) {
    if (n < 0) throw DomainError("a_coeffs: n must be >= 0");
    ACoeffTable table;
    table.n = n;
    table.s = s;
    table.t = t;
    table.entries.assign(static_cast<size_t>(n) + 1, Cx(0.0));
    std::vector<Cx> prev{Cx(1.0)};
    for (int level = 1; level <= n; ++level) {
        std::vector<Cx> cur(static_cast<size_t>(level) + 1, Cx(0.0));
        for (int j = 0; j <= level; ++j) {
            if (j <= level - 1)
                cur[static_cast<size_t>(j)] +=
                    (t + static_cast<double>(j)) * prev[static_cast<size_t>(j)];
            if (j >= 1)
                cur[static_cast<size_t>(j)] +=
                    (s + static_cast<double>(j - 1)) * prev[static_cast<size_t>(j - 1)];
        }
        prev = std::move(cur);
    }
    table.entries = std::move(prev);
    return table;
}

EvalOutput f_direct(const SeriesSpec& spec, const QParam& qp, double tol, int max_terms) {
    spec.validate();
    if (spec.kind == SeriesKind::TSUMURA)
        throw DomainError("f_direct: Tsumura variant is served by tsumura_zeta");

    const Cx s = spec.s;
    const Cx t = spec.effective_t();
    if (!(t.real() > 0.0)) {
        if (spec.kind == SeriesKind::L_NU || spec.kind == SeriesKind::ZETA_NU)
            throw NotConvergent("f_direct: needs Re(s) > nu");
        throw NotConvergent("f_direct: needs Re(t) > 0");
    }

    const double q = qp.q();
    const double lq = qp.log_q();
    const double sigma = s.real();
    const double rt = t.real();
    const bool hurwitz = spec.kind == SeriesKind::G_HURWITZ;
    const double a = hurwitz ? spec.a : 1.0;
    const DirichletCharacter& chi = spec.character();

    // sup over the summation range of [x]_q^{-Re(s)}; [x]_q increases
    // from [a]_q toward 1/(1-q).
    const double qa = -std::expm1(a * lq) / (1.0 - q);
    const double cap = sigma >= 0.0 ? std::pow(qa, -sigma) : std::pow(1.0 - q, sigma);
    const double tail_ratio = std::exp(rt * lq); // q^{Re t}

    Cx acc(0.0);
    for (int n = 0; n < max_terms; ++n) {
        // Summation index: n + a for the Hurwitz kind, n + 1 otherwise.
        const double x = hurwitz ? n + a : n + 1.0;
        Cx coef = hurwitz ? Cx(1.0) : chi(n + 1);
        if (std::abs(coef) != 0.0) {
            const double qx = -std::expm1(x * lq); // 1 - q^x
            acc += coef * std::exp(t * (x * lq) -
                                   s * (std::log(qx) - std::log1p(-q)));
        }
        // Geometric tail bound: sum_{m>n} |q^{(m+a')t}| * cap.
        const double head = std::exp((x + 1.0) * rt * lq);
        if (cap * head / (1.0 - tail_ratio) < tol)
            return {acc, std::nullopt, Strategy::DIRECT, n + 1};
    }
    throw BudgetExceeded("f_direct: term budget exhausted before tail bound met");
}

namespace {

// E(x) = (e^x - 1)/x with E(0) = 1, and its derivative.
Cx expm1_over(Cx x) {
    if (std::abs(x) < 1e-150) return Cx(1.0);
    return expm1_complex(x) / x;
}

Cx expm1_over_deriv(Cx x) {
    if (std::abs(x) < 0.5) {
        // sum_{m>=1} m x^{m-1} / (m+1)!
        Cx acc(0.5);
        Cx p(1.0);
        double fact = 2.0;
        for (int m = 2; m <= 18; ++m) {
            p *= x;
            fact *= m + 1.0;
            acc += static_cast<double>(m) * p / fact;
        }
        return acc;
    }
    return ((x - 1.0) * std::exp(x) + 1.0) / (x * x);
}

// g_chi(e^v) and d/dv at z = e^v for non-principal chi with z near 1,
// where numerator and denominator vanish together: formal power-series
// quotient in v, stable uniformly down to v = 0.
void g_chi_series_near_one(const DirichletCharacter& chi, Cx v, Cx& g, Cx& dgdv) {
    const int N = chi.modulus();
    constexpr int P = 12;
    // Coefficients of v^{p+1}, p = 0..P-1.
    Cx A[P];
    double B[P];
    double fact = 1.0;
    for (int p = 0; p < P; ++p) {
        fact *= p + 1.0;
        Cx acc(0.0);
        for (int k = 1; k <= N; ++k)
            acc += chi(k) * std::pow(static_cast<double>(k), p + 1);
        A[p] = acc / fact;
        B[p] = -std::pow(static_cast<double>(N), p + 1) / fact;
    }
    Cx C[P];
    for (int j = 0; j < P; ++j) {
        Cx acc = A[j];
        for (int i = 0; i < j; ++i) acc -= C[i] * B[j - i];
        C[j] = acc / B[0];
    }
    g = Cx(0.0);
    dgdv = Cx(0.0);
    for (int j = P - 1; j >= 1; --j) {
        g = g * v + C[j];
        dgdv = dgdv * v + static_cast<double>(j) * C[j];
    }
    g = g * v + C[0];
}

// g_chi(e^v) and d/dv on the generic branch (away from the z^N = 1
// lattice); xr = reduced N*v.
void g_chi_generic(const DirichletCharacter& chi, Cx vr, Cx xr, Cx& g, Cx& dgdv) {
    const int N = chi.modulus();
    if (static_cast<double>(N) * vr.real() > 300.0) {
        // |z^N| would overflow; work in powers of w = 1/z.
        const Cx den = -expm1_complex(-xr); // 1 - w^N
        Cx n2(0.0), dn2(0.0);
        for (int k = 1; k <= N; ++k) {
            Cx c = chi(k);
            if (std::abs(c) == 0.0) continue;
            Cx wp = std::exp(-static_cast<double>(N - k) * vr);
            n2 += c * wp;
            dn2 += c * static_cast<double>(-(N - k)) * wp;
        }
        const Cx wN = std::exp(-xr);
        const Cx dden = -static_cast<double>(N) * wN; // d(1 - w^N)/dv
        g = -n2 / den;
        dgdv = -(dn2 * den - n2 * dden) / (den * den);
        return;
    }
    const Cx z = std::exp(vr);
    const Cx den = -expm1_complex(xr); // 1 - z^N
    const Cx zN = 1.0 + expm1_complex(xr);
    Cx num(0.0), dnum(0.0);
    Cx zk(1.0);
    for (int k = 1; k <= N; ++k) {
        zk *= z;
        Cx c = chi(k);
        if (std::abs(c) == 0.0) continue;
        num += c * zk;
        dnum += c * static_cast<double>(k) * zk;
    }
    g = num / den;
    dgdv = dnum / den + num * static_cast<double>(N) * zN / (den * den);
}

struct CoreSums {
    Cx sum{0.0};
    Cx dsum_ds{0.0};
    Cx dsum_dq{0.0};
    int terms = 0;
};

// Shared engine behind zeta_expansion / dzeta_ds / dzeta_dq:
//   sum_r C(s+r-1, r) g_chi(q^{t0+r})
// with optional term-wise derivatives in s and q.
//
// Convergence: the term ratio tends to q (kernels decay like q^{t0+r},
// binomials grow subexponentially), so the tail after a term of size m
// is below m*q/(1-q); poles live on the lattice t0 + r in delta*Z,
// which for the principal character at r >= order is removable against
// the vanishing binomial factor and is evaluated by its limit.
CoreSums expansion_core(const SeriesSpec& spec, const QParam& qp, double tol, int max_terms,
                        bool need_ds, bool need_dq) {
    const DirichletCharacter& chi = spec.character();
    const int N = chi.modulus();
    const double q = qp.q();
    const double lq = qp.log_q();
    const Cx s = spec.s;
    const bool s_kind = spec.kind != SeriesKind::L_MU;
    const int order = spec.order;
    const Cx t0 = spec.effective_t();
    const double duds = s_kind ? 1.0 : 0.0;

    // All pole / removable indices satisfy r ~ order - Re(s); do not
    // trust the tail estimate before passing them.
    int r_min = 2;
    if (s_kind)
        r_min = std::max(order + 2,
                         static_cast<int>(std::ceil(order - s.real())) + 2);

    CoreSums out;
    Cx c(1.0), dc(0.0); // C(s+r-1, r) and d/ds
    int streak = 0;
    for (int r = 0;; ++r) {
        if (r > 0) {
            const Cx f = s + static_cast<double>(r - 1);
            if (need_ds) dc = (dc * f + c) / static_cast<double>(r);
            c = c * f / static_cast<double>(r);
        }
        const Cx u = t0 + static_cast<double>(r);
        const int i0 = r - order;

        Cx term(0.0), dterm_ds(0.0), dterm_dq(0.0);
        if (s_kind && chi.is_principal() && i0 >= 0 && std::abs(u) < 0.2) {
            // u = s + i0 multiplies both the binomial (factor s + i0)
            // and the kernel pole 1/(1 - q^{Nu}); their product has a
            // finite limit. With E(x) = (e^x - 1)/x and x = N u log q:
            //   C(s+r-1,r) g(q^u) = c_over * num(q^u) * (-1/(N log q E(x)))
            // where c_over omits the vanishing factor.
            Cx c_over(1.0);
            for (int i = 0; i < r; ++i)
                c_over *= (i == i0 ? Cx(1.0) : s + static_cast<double>(i)) /
                          static_cast<double>(i + 1);
            const Cx x = static_cast<double>(N) * u * lq;
            const Cx E = expm1_over(x);
            const Cx F = -1.0 / (static_cast<double>(N) * lq * E);
            const Cx z = std::exp(u * lq);
            Cx num(0.0), knum(0.0);
            Cx zk(1.0);
            for (int k = 1; k <= N; ++k) {
                zk *= z;
                Cx cv = chi(k);
                if (std::abs(cv) == 0.0) continue;
                num += cv * zk;
                knum += cv * static_cast<double>(k) * zk;
            }
            term = c_over * num * F;
            if (need_ds || need_dq) {
                const Cx Ep = expm1_over_deriv(x);
                if (need_ds) {
                    Cx dlog(0.0);
                    for (int i = 0; i < r; ++i)
                        if (i != i0) dlog += 1.0 / (s + static_cast<double>(i));
                    const Cx dc_over = c_over * dlog;
                    const Cx dnum_ds = knum * lq;
                    const Cx dF_ds = Ep / (E * E);
                    dterm_ds = dc_over * num * F + c_over * (dnum_ds * F + num * dF_ds);
                }
                if (need_dq) {
                    const Cx dnum_dq = knum * u / q;
                    const Cx dF_dq =
                        -F * (1.0 / (q * lq) + (Ep / E) * (static_cast<double>(N) * u / q));
                    dterm_dq = c_over * (dnum_dq * F + num * dF_dq);
                }
            }
        } else {
            const Cx v = u * lq;
            const Cx vr = reduce_2pii(v);
            const Cx xr = reduce_2pii(static_cast<double>(N) * v);
            Cx g, dgdv;
            if (!chi.is_principal() && std::abs(vr) * N < 0.3) {
                g_chi_series_near_one(chi, vr, g, dgdv);
            } else {
                if (std::abs(expm1_complex(xr)) < kExpansionPoleThreshold) {
                    std::ostringstream os;
                    os << "zeta_expansion: term r=" << r
                       << " sits on the pole lattice (q^{t+r})^N = 1";
                    throw PoleProximity(os.str());
                }
                g_chi_generic(chi, vr, xr, g, dgdv);
            }
            term = c * g;
            if (need_ds) dterm_ds = dc * g + c * dgdv * lq * duds;
            if (need_dq) dterm_dq = c * dgdv * u / q;
        }

        out.sum += term;
        if (need_ds) out.dsum_ds += dterm_ds;
        if (need_dq) out.dsum_dq += dterm_dq;
        if (!is_finite(out.sum))
            throw DomainError("zeta_expansion: overflow while summing");

        if (r >= r_min) {
            double mag = std::abs(term);
            if (need_ds) mag = std::max(mag, std::abs(dterm_ds));
            if (need_dq) mag = std::max(mag, std::abs(dterm_dq));
            if (mag * q / (1.0 - q) < tol) {
                if (++streak >= 2) {
                    out.terms = r + 1;
                    return out;
                }
            } else {
                streak = 0;
            }
        }
        if (r + 1 >= max_terms)
            throw BudgetExceeded("zeta_expansion: term budget exhausted");
    }
}

void require_expansion_kind(const SeriesSpec& spec, const char* who) {
    if (spec.kind != SeriesKind::L_NU && spec.kind != SeriesKind::ZETA_NU &&
        spec.kind != SeriesKind::L_MU) {
        std::ostringstream os;
        os << who << ": kind must be L_NU, ZETA_NU, or L_MU";
        throw DomainError(os.str());
    }
    spec.validate();
}

} // namespace

EvalOutput zeta_expansion(const SeriesSpec& spec, const QParam& qp, double tol, int max_terms) {
    require_expansion_kind(spec, "zeta_expansion");
    const Cx pref = one_minus_q_pow(qp.q(), spec.s);
    const double core_tol = tol / std::max(std::abs(pref), 1e-300);
    CoreSums core = expansion_core(spec, qp, core_tol, max_terms, false, false);
    return {pref * core.sum, std::nullopt, Strategy::EXPANSION, core.terms};
}

std::pair<Cx, Cx> zeta_and_ds(const SeriesSpec& spec, const QParam& qp, double tol) {
    require_expansion_kind(spec, "zeta_and_ds");
    const Cx pref = one_minus_q_pow(qp.q(), spec.s);
    const double core_tol = tol / std::max(std::abs(pref), 1e-300);
    CoreSums core = expansion_core(spec, qp, core_tol, 2000000, true, false);
    const Cx value = pref * core.sum;
    return {value, std::log1p(-qp.q()) * value + pref * core.dsum_ds};
}

Cx dzeta_ds(const SeriesSpec& spec, const QParam& qp, double tol) {
    return zeta_and_ds(spec, qp, tol).second;
}

Cx dzeta_dq(const SeriesSpec& spec, const QParam& qp, double tol) {
    require_expansion_kind(spec, "dzeta_dq");
    const double q = qp.q();
    const Cx pref = one_minus_q_pow(q, spec.s);
    const double core_tol = tol / std::max(std::abs(pref), 1e-300);
    CoreSums core = expansion_core(spec, qp, core_tol, 2000000, false, true);
    return -spec.s / (1.0 - q) * (pref * core.sum) + pref * core.dsum_dq;
}

Cx special_value_neg_int(int m, int nu, const DirichletCharacter& chi, const QParam& qp) {
    if (m < 0) throw DomainError("special_value_neg_int: m must be >= 0");
    if (nu < 1) throw DomainError("special_value_neg_int: nu must be >= 1");
    const double lq = qp.log_q();
    Cx acc(0.0);
    double binom = 1.0; // C(m, r)
    for (int r = 0; r <= m; ++r) {
        const double z = std::exp((r - m - nu) * lq); // q^{-m+r-nu} > 1
        const double sign = (r % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binom * g_chi(chi, Cx(z, 0.0));
        binom *= static_cast<double>(m - r) / static_cast<double>(r + 1);
    }
    // (-1)^{m+1} m! (nu-1)! / (m+nu)! / log q * B_{0,chi}
    double ratio = 1.0; // m! (nu-1)! / (m+nu)!
    for (int i = 1; i <= nu; ++i) ratio *= static_cast<double>(i) / (m + i);
    ratio /= static_cast<double>(nu);
    ratio *= (m % 2 == 0) ? -1.0 : 1.0;
    acc += ratio / lq * gen_bernoulli(0, chi);
    return one_minus_q_pow(qp.q(), Cx(-m, 0.0)) * acc;
}

Cx crystal_value(Cx s, int nu, const DirichletCharacter& chi) {
    if (nu < 1) throw DomainError("crystal_value: nu must be >= 1");
    constexpr double eps = 1e-9;
    const double rr = std::round(s.real());
    const bool re_int = std::abs(s.real() - rr) <= eps;
    const bool neg_int = re_int && std::abs(s.imag()) <= eps && rr <= 0.0;

    if (!chi.is_principal()) {
        if (neg_int) return Cx(0.0);
        if (re_int && rr <= static_cast<double>(nu))
            throw OutsideCrystalDomain("crystal_value: Re(s) on the excluded integer set");
        return Cx(0.0);
    }
    if (chi.modulus() != 1)
        throw DomainError(
            "crystal_value: defined for the trivial and non-principal characters only");

    if (neg_int) return rr == 0.0 ? Cx(-1.0) : Cx(0.0);
    if (re_int && rr <= static_cast<double>(nu))
        throw OutsideCrystalDomain("crystal_value: Re(s) on the excluded integer set");
    if (s.real() > static_cast<double>(nu)) return Cx(0.0);

    // Strip nu - m - 1 < Re(s) < nu - m: limit is -(s+1)_m / m!.
    const int f = static_cast<int>(std::floor(s.real()));
    const int m = nu - f - 1;
    Cx p = pochhammer(s + 1.0, m);
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    return -p / fact;
}

Cx tsumura_zeta(Cx s, int mu, double a, const QParam& qp, double tol) {
    if (mu < 1) throw DomainError("tsumura_zeta: mu must be >= 1");
    if (!(a > 0.0 && a <= 1.0)) throw DomainError("tsumura_zeta: a must lie in (0,1]");
    const Cx p = pochhammer(1.0 - s, mu);
    if (std::abs(p) < kExpansionPoleThreshold)
        throw PoleProximity("tsumura_zeta: s within guard radius of a pole in {1..mu}");
    double fact = 1.0;
    for (int i = 2; i < mu; ++i) fact *= i;
    const Cx head = fact / p * one_minus_q_pow(qp.q(), s) / qp.log_q();
    EvalOutput g = f_direct(g_hurwitz_spec(s, Cx(static_cast<double>(mu), 0.0), a), qp, tol);
    return head + g.value;
}

Cx q_gamma(Cx s, const QParam& qp, double tol) {
    const double q = qp.q();
    const double lq = qp.log_q();
    Cx prod(1.0);
    for (int j = 0;; ++j) {
        const Cx qs = std::exp((s + static_cast<double>(j)) * lq);
        const double qj = std::exp((j + 1.0) * lq);
        const Cx den = 1.0 - qs;
        if (std::abs(den) < 1e-12)
            throw PoleProximity("q_gamma: pole, q^{s+j} = 1");
        prod *= (1.0 - qj) / den;
        // Remaining log-factors are bounded by (|q^{s+j}| + q^{j+1})
        // summed geometrically.
        if (std::abs(qs) < 0.5 && (std::abs(qs) + qj) * q / (1.0 - q) < 0.25 * tol) break;
        if (j > 20000000) throw BudgetExceeded("q_gamma: factor budget exhausted");
    }
    return one_minus_q_pow(q, 1.0 - s) * prod;
}

Cx q_digamma(Cx s, const QParam& qp, double tol) {
    const double q = qp.q();
    const double lq = qp.log_q();
    Cx acc(0.0);
    for (int j = 0;; ++j) {
        const Cx qs = std::exp((s + static_cast<double>(j)) * lq);
        const Cx den = 1.0 - qs;
        if (std::abs(den) < 1e-12)
            throw PoleProximity("q_digamma: pole, q^{s+j} = 1");
        acc += qs / den;
        if (std::abs(qs) < 0.5 &&
            2.0 * std::abs(lq) * std::abs(qs) * q / (1.0 - q) < tol)
            break;
        if (j > 20000000) throw BudgetExceeded("q_digamma: term budget exhausted");
    }
    return -std::log1p(-q) + lq * acc;
}

Cx L_at_one_via_qgamma(int nu, const DirichletCharacter& chi, const QParam& qp, double tol) {
    if (chi.is_principal())
        throw DomainError("L_at_one_via_qgamma: needs a non-principal character");
    if (nu < 1) throw DomainError("L_at_one_via_qgamma: nu must be >= 1");
    const int N = chi.modulus();
    const double q = qp.q();
    const double lq = qp.log_q();
    Cx acc(0.0);
    for (int r = 1; r <= nu - 1; ++r)
        acc += g_chi(chi, Cx(std::exp((r - nu) * lq), 0.0));
    // Removable z = 1 term of the expansion at s = 1. It vanishes for
    // even characters (sum k chi(k) = 0) but not for odd ones, where
    // dropping it would not reproduce L_q^{(nu)}(1, chi).
    acc += g_chi(chi, Cx(1.0, 0.0));
    acc *= (1.0 - q);
    const QParam qN(std::exp(N * lq));
    Cx psum(0.0);
    for (int k = 1; k <= N; ++k) {
        Cx c = chi(k);
        if (std::abs(c) == 0.0) continue;
        psum += c * q_digamma(Cx(static_cast<double>(k) / N, 0.0), qN, tol);
    }
    return acc + (1.0 - q) / (static_cast<double>(N) * lq) * psum;
}

namespace {

void check_em_preconditions(Cx s, int nu, const EvalParams& p, const char* who) {
    p.validate();
    if (nu < 1) {
        std::ostringstream os;
        os << who << ": nu must be >= 1";
        throw ParamError(os.str());
    }
    if (!(s.real() > static_cast<double>(nu) + 1.0 - p.M)) {
        std::ostringstream os;
        os << who << ": requires Re(s) > nu + 1 - M";
        throw ParamError(os.str());
    }
}

double odd_power(double x, int e) {
    double r = std::pow(std::abs(x), static_cast<double>(e));
    return x < 0.0 && (e % 2) ? -r : r;
}

} // namespace

EvalOutput zeta_em(Cx s, int nu, const QParam& qp, const EvalParams& p) {
    check_em_preconditions(s, nu, p, "zeta_em");
    const double q = qp.q();
    const double lq = qp.log_q();
    const Cx t = s - static_cast<double>(nu);
    const int N = p.N;
    const double log1mqN = std::log(-std::expm1(N * lq)); // log(1 - q^N)
    // q^{e1} (1-q^N)^{e2}
    auto piece = [&](Cx e1, Cx e2) { return std::exp(e1 * lq + e2 * log1mqN); };

    Cx head(0.0);
    for (int m = 1; m <= N; ++m)
        head += std::exp(t * (m * lq) - s * std::log(-std::expm1(m * lq)));
    head -= 0.5 * piece(static_cast<double>(N) * t, -s);

    Cx beta_term(0.0);
    for (int r = 0; r < nu; ++r) {
        const Cx den = pochhammer(1.0 - s, r + 1);
        if (std::abs(den) < kExpansionPoleThreshold)
            throw PoleProximity("zeta_em: s within guard radius of a real pole in {1..nu}");
        beta_term += pochhammer(Cx(1.0 - nu, 0.0), r) / den *
                     piece(static_cast<double>(N) * t, -s + 1.0 + static_cast<double>(r));
    }
    head += beta_term / lq;

    // Bernoulli derivative corrections.
    double lq_pow = lq;  // (log q)^{2k-1}
    double fact = 2.0;   // (2k)!
    for (int k = 1; k <= p.n; ++k) {
        const ACoeffTable tab = a_coeffs(2 * k - 1, s, t);
        Cx inner(0.0);
        for (int j = 0; j <= 2 * k - 1; ++j)
            inner += tab.entries[static_cast<size_t>(j)] *
                     piece(static_cast<double>(N) * (t + static_cast<double>(j)),
                           -s - static_cast<double>(j));
        head -= bernoulli(2 * k) / fact * lq_pow * inner;
        lq_pow *= lq * lq;
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }

    // Windowed Fourier sum.
    const ACoeffTable tab = a_coeffs(2 * p.n, s, t);
    const Cx delta = qp.delta();
    Cx window(0.0);
    int window_terms = 0;
    for (int l = p.l0; l <= p.l1; ++l) {
        if (l == 0) continue;
        // (2 pi i l)^{2n} = (-(2 pi l)^2)^n, purely real.
        const double denl =
            std::pow(-(2.0 * kPi * l) * (2.0 * kPi * l), static_cast<double>(p.n));
        const Cx base = t + delta * static_cast<double>(l);
        for (int j = 0; j <= 2 * p.n; ++j) {
            const Cx aj = tab.entries[static_cast<size_t>(j)];
            if (std::abs(aj) == 0.0) continue;
            for (int k = 1; k <= p.M - 1; ++k) {
                const Cx num = pochhammer(s + static_cast<double>(j), k - 1);
                const Cx den = pochhammer(base + static_cast<double>(j), k);
                if (std::abs(den) < 1e-12) {
                    if (std::abs(num) == 0.0) continue;
                    throw PoleProximity("zeta_em: Fourier denominator Pochhammer vanishes");
                }
                const double sign = (k % 2 == 0) ? 1.0 : -1.0;
                window += aj / denl * sign * num / den *
                          piece(static_cast<double>(N) *
                                    (t + static_cast<double>(j + k) - 1.0),
                                -(s + static_cast<double>(j + k) - 1.0));
                ++window_terms;
            }
        }
    }
    head += odd_power(lq, 2 * p.n - 1) * window;

    EvalOutput out;
    out.value = one_minus_q_pow(q, s) * head;
    out.bound = remainder_bound(s, nu, qp, p);
    out.strategy = Strategy::EULER_MACLAURIN;
    out.terms_used = N + window_terms;
    if (!is_finite(out.value)) throw DomainError("zeta_em: overflow in evaluation");
    return out;
}

double remainder_bound(Cx s, int nu, const QParam& qp, const EvalParams& p) {
    check_em_preconditions(s, nu, p, "remainder_bound");
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const double q = qp.q();
    const double lq = qp.log_q();
    const double sigma = s.real();
    const int N = p.N;
    const int n2 = 2 * p.n;
    const double log1mqN = std::log(-std::expm1(N * lq));
    const double log1mq = std::log1p(-q);
    const ACoeffTable tab = a_coeffs(n2, s, s - static_cast<double>(nu));

    // Window-complement part: l-free inner sum.
    double part1 = 0.0;
    for (int j = 0; j <= n2; ++j) {
        const double aj = std::abs(tab.entries[static_cast<size_t>(j)]);
        if (aj == 0.0) continue;
        for (int k = 1; k <= p.M - 1; ++k) {
            const double num = std::abs(pochhammer(s + static_cast<double>(j), k - 1));
            if (num == 0.0) continue;
            const double den =
                std::abs(pochhammer(s - static_cast<double>(nu) + static_cast<double>(j), k));
            if (den < 1e-300) return kInf;
            part1 += aj * num / den *
                     std::exp(N * (sigma - nu - 1.0 + j + k) * lq -
                              (sigma + j - 1.0 + k) * log1mqN);
        }
    }

    // Residual incomplete-beta part (signed; enters with a minus).
    double part2 = 0.0;
    for (int j = 0; j <= n2; ++j) {
        const double aj = std::abs(tab.entries[static_cast<size_t>(j)]);
        if (aj == 0.0) continue;
        const double num = std::abs(pochhammer(s + static_cast<double>(j), p.M - 1));
        if (num == 0.0) continue;
        const double den =
            std::abs(pochhammer(Cx(sigma - nu + j, 0.0), p.M - 1));
        if (den < 1e-300) return kInf;
        double inner = 0.0;
        for (int r = 0; r < nu; ++r) {
            const Cx pd = pochhammer(Cx(-sigma - j - p.M + 2.0, 0.0), r + 1);
            if (std::abs(pd) < 1e-300) return kInf;
            inner += pochhammer(Cx(1.0 - nu, 0.0), r).real() / pd.real() *
                     std::exp((sigma + j + p.M - nu - 1.0) * lq -
                              (sigma + j + p.M - 2.0 - r) * log1mq);
        }
        part2 += aj * num / den * inner;
    }

    // sum over l of l^{-2n}: exact up to |l| = B, integral bound beyond.
    const int B = std::max({64, std::abs(p.l0), std::abs(p.l1)});
    double w_out = 0.0, w_all = 0.0;
    for (int l = -B; l <= B; ++l) {
        if (l == 0) continue;
        const double w = std::pow(std::abs(static_cast<double>(l)),
                                  -static_cast<double>(n2));
        w_all += w;
        if (l < p.l0 || l > p.l1) w_out += w;
    }
    const double tail = 2.0 * std::pow(static_cast<double>(B),
                                       1.0 - static_cast<double>(n2)) /
                        (static_cast<double>(n2) - 1.0);
    w_all += tail;
    w_out += tail;

    const double pref = std::pow(std::abs(lq), static_cast<double>(n2 - 1)) *
                        std::exp(sigma * log1mq) /
                        std::pow(2.0 * kPi, static_cast<double>(n2));
    const double bound = pref * (w_out * part1 - w_all * part2);
    if (std::isnan(bound)) return kInf;
    return std::max(bound, 0.0);
}

EvalParams auto_params(Cx s, int nu, const QParam& qp, double target) {
    if (!(target > 0.0)) throw DomainError("auto_params: target must be positive");
    const double sigma = s.real();
    int m_min = 2;
    while (!(sigma > static_cast<double>(nu) + 1.0 - m_min)) ++m_min;

    struct Cand {
        long cost;
        int N, M, n, L;
        bool operator<(const Cand& o) const {
            return std::tie(cost, N, M, n, L) < std::tie(o.cost, o.N, o.M, o.n, o.L);
        }
    };
    static constexpr int kOrders[] = {1, 2, 3, 4, 5, 6, 8, 10, 12};
    static constexpr int kWindows[] = {1, 2, 4, 8, 16, 32, 64};
    static constexpr int kDepthBump[] = {0, 1, 2, 4, 6, 8, 12, 16};
    static constexpr int kHeads[] = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 4096};

    std::vector<Cand> cands;
    cands.reserve(std::size(kOrders) * std::size(kWindows) * std::size(kDepthBump) *
                  std::size(kHeads));
    for (int n : kOrders)
        for (int L : kWindows)
            for (int dM : kDepthBump)
                for (int N : kHeads) {
                    const int M = m_min + dM;
                    const long cost =
                        N + static_cast<long>(2) * L * (2 * n + 1) * (M - 1);
                    cands.push_back({cost, N, M, n, L});
                }
    std::sort(cands.begin(), cands.end());

    for (const Cand& c : cands) {
        EvalParams p{c.N, c.M, c.n, -c.L, c.L, target};
        const double b = remainder_bound(s, nu, qp, p);
        if (b < target) return p;
    }
    throw BudgetExceeded("auto_params: no parameter tuple within budget meets the target");
}

} // namespace qzeta
