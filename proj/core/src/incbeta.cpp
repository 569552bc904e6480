#include "qzeta/incbeta.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace qzeta {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
void gauss_kronrod(const F& f, double a, double b, Cx& result, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    Cx fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    Cx kr(0.0), gs(0.0);
    for (int i = 0; i < 7; ++i) kr += kWgk[i] * (fv[i] + fv[14 - i]);
    kr += kWgk[7] * fv[7];
    // Gauss nodes are the odd-index Kronrod nodes.
    for (int i = 0; i < 3; ++i) gs += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    gs += kWg[3] * fv[7];
    result = kr * h;
    err = std::abs((kr - gs) * h);
}

template <typename F>
Cx adaptive_quad(const F& f, double a, double b, double tol) {
    struct Piece {
        double a, b, err;
        Cx val;
    };
    Cx v0;
    double e0;
    gauss_kronrod(f, a, b, v0, e0);
    std::vector<Piece> heap{{a, b, e0, v0}};
    Cx total = v0;
    double total_err = e0;
    const int kMaxPieces = 4000;
    auto worse = [](const Piece& x, const Piece& y) { return x.err < y.err; };
    std::make_heap(heap.begin(), heap.end(), worse);
    while (total_err > tol && static_cast<int>(heap.size()) < kMaxPieces) {
        std::pop_heap(heap.begin(), heap.end(), worse);
        Piece p = heap.back();
        heap.pop_back();
        double m = 0.5 * (p.a + p.b);
        Piece l{p.a, m, 0.0, Cx(0.0)};
        Piece r{m, p.b, 0.0, Cx(0.0)};
        gauss_kronrod(f, l.a, l.b, l.val, l.err);
        gauss_kronrod(f, r.a, r.b, r.val, r.err);
        total += l.val + r.val - p.val;
        total_err += l.err + r.err - p.err;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end(), worse);
    }
    if (total_err > tol)
        throw BudgetExceeded("incomplete_beta: quadrature budget exhausted");
    return total;
}

} // namespace

Cx incomplete_beta(const IncBetaRequest& req, double tol) {
    const double q = req.upper_limit;
    const Cx alpha = req.alpha;
    const Cx beta = req.beta;
    if (!(q > 0.0 && q < 1.0))
        throw DomainError("incomplete_beta: upper limit must lie in (0,1)");
    if (!(alpha.real() > 0.0))
        throw DomainError("incomplete_beta: Re(alpha) must be positive");

    if (alpha.real() >= 1.0) {
        auto f = [&](double u) {
            return std::exp((alpha - 1.0) * std::log(u) + (beta - 1.0) * std::log1p(-u));
        };
        return adaptive_quad(f, 0.0, q, tol);
    }

    // 0 < Re(alpha) < 1: substitute u = v^{1/Re(alpha)} so the power of
    // v at the lower endpoint has real exponent 0 and the integrand
    // stays bounded.
    const double p = 1.0 / alpha.real();
    const double vq = std::pow(q, alpha.real());
    auto f = [&](double v) {
        const double lv = std::log(v);
        const double u = std::exp(p * lv); // v^p
        return p * std::exp((p * alpha - 1.0) * lv + (beta - 1.0) * std::log1p(-u));
    };
    return adaptive_quad(f, 0.0, vq, tol);
}

namespace {

// q^e and (1-q)^e for complex e, through real logs.
Cx cpow(double base, Cx e) { return std::exp(e * std::log(base)); }

void check_poch(Cx p, const char* which, const char* who) {
    if (std::abs(p) < kPochhammerPoleThreshold) {
        std::ostringstream os;
        os << who << ": Pochhammer factor on " << which << " vanishes";
        if (which[0] == 'a') throw PoleAtAlpha(os.str());
        throw PoleAtBeta(os.str());
    }
}

} // namespace

Cx raise_alpha_recurrence(double q, Cx alpha, Cx beta, int steps, double tol) {
    if (steps < 0) throw DomainError("raise_alpha_recurrence: steps must be >= 0");
    if (!(alpha.real() + steps > 0.0))
        throw DomainError("raise_alpha_recurrence: Re(alpha) + steps must be positive");
    Cx acc(0.0);
    for (int l = 1; l <= steps; ++l) {
        Cx pa = pochhammer(alpha, l);
        check_poch(pa, "alpha", "raise_alpha_recurrence");
        Cx coef = pochhammer(1.0 - beta, l - 1) / pa;
        if (l % 2 == 0) coef = -coef;
        acc += coef * cpow(q, alpha + static_cast<double>(l - 1)) *
               cpow(1.0 - q, beta - static_cast<double>(l));
    }
    Cx pa = pochhammer(alpha, steps);
    check_poch(pa, "alpha", "raise_alpha_recurrence");
    Cx tail = pochhammer(1.0 - beta, steps) / pa;
    if (steps % 2 == 1) tail = -tail;
    acc += tail * incomplete_beta(
                      {q, alpha + static_cast<double>(steps), beta - static_cast<double>(steps)},
                      tol);
    return acc;
}

Cx lower_alpha_recurrence(double q, Cx alpha, Cx beta, int steps, double tol) {
    if (steps < 0) throw DomainError("lower_alpha_recurrence: steps must be >= 0");
    if (!(alpha.real() > static_cast<double>(steps)))
        throw DomainError("lower_alpha_recurrence: needs Re(alpha) > steps");
    Cx acc(0.0);
    for (int l = 1; l <= steps; ++l) {
        Cx pb = pochhammer(beta, l);
        check_poch(pb, "beta", "lower_alpha_recurrence");
        Cx coef = pochhammer(1.0 - alpha, l - 1) / pb;
        if (l % 2 == 1) coef = -coef;
        acc += coef * cpow(q, alpha - static_cast<double>(l)) *
               cpow(1.0 - q, beta + static_cast<double>(l - 1));
    }
    Cx pb = pochhammer(beta, steps);
    check_poch(pb, "beta", "lower_alpha_recurrence");
    Cx tail = pochhammer(1.0 - alpha, steps) / pb;
    if (steps % 2 == 1) tail = -tail;
    acc += tail * incomplete_beta(
                      {q, alpha - static_cast<double>(steps), beta + static_cast<double>(steps)},
                      tol);
    return acc;
}

Cx closed_form_special(double q, Cx alpha, int nu) {
    if (nu < 1) throw DomainError("closed_form_special: nu must be >= 1");
    if (!(q > 0.0 && q < 1.0))
        throw DomainError("closed_form_special: q must lie in (0,1)");
    Cx acc(0.0);
    for (int r = 0; r < nu; ++r) {
        Cx pa = pochhammer(-alpha, r + 1);
        if (std::abs(pa) < kPochhammerPoleThreshold)
            throw PoleAtAlpha("closed_form_special: (-alpha)_{r+1} vanishes");
        acc += pochhammer(Cx(1.0 - nu), r) / pa * cpow(q, alpha - static_cast<double>(nu) + 1.0) *
               cpow(1.0 - q, -alpha + static_cast<double>(r));
    }
    return -acc;
}

namespace {

// Lanczos g = 7, n = 9, good to ~15 digits for Re(z) >= 0.5.
constexpr double kLanczos[9] = {
    0.99999999999980993,    676.5203681218851,    -1259.1392167224028,
    771.32342877765313,     -176.61502916214059,  12.507343278686905,
    -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};

Cx log_gamma_positive(Cx z) {
    // valid for Re(z) >= 0.5
    Cx x(kLanczos[0], 0.0);
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i - 1));
    Cx t = z + 6.5;
    return 0.5 * std::log(2.0 * kPi) + (z - 0.5) * std::log(t) - t + std::log(x);
}

bool near_nonpositive_int(Cx z, double tol = 1e-12) {
    if (std::abs(z.imag()) > tol) return false;
    double r = std::round(z.real());
    return r <= 0.0 && std::abs(z.real() - r) <= tol;
}

bool near_positive_int(Cx z, int& n, double tol = 1e-12) {
    if (std::abs(z.imag()) > tol) return false;
    double r = std::round(z.real());
    if (r < 1.0 || r > 60.0 || std::abs(z.real() - r) > tol) return false;
    n = static_cast<int>(r);
    return true;
}

} // namespace

Cx log_gamma(Cx z) {
    if (near_nonpositive_int(z)) throw PoleError("log_gamma: pole at non-positive integer");
    if (z.real() >= 0.5) return log_gamma_positive(z);
    // Reflection; the branch of the result is unspecified, which is
    // fine because only exponentiated combinations are consumed.
    Cx s = std::sin(kPi * z);
    return std::log(kPi) - std::log(s) - log_gamma_positive(1.0 - z);
}

Cx complete_beta(Cx alpha, Cx beta) {
    // Integer second (or first) argument: B(a, n) = (n-1)! / (a)_n,
    // the finite-limit value even when a is at a gamma pole.
    int n = 0;
    Cx other(0.0);
    if (near_positive_int(beta, n)) {
        other = alpha;
    } else if (near_positive_int(alpha, n)) {
        other = beta;
    }
    if (n > 0) {
        Cx p = pochhammer(other, n);
        if (std::abs(p) < kPochhammerPoleThreshold)
            throw PoleError("complete_beta: diverges at non-positive integer argument");
        double fact = 1.0;
        for (int i = 2; i < n; ++i) fact *= i;
        return fact / p;
    }
    if (near_nonpositive_int(alpha) || near_nonpositive_int(beta))
        throw PoleError("complete_beta: gamma pole at non-positive integer argument");
    if (near_nonpositive_int(alpha + beta)) return Cx(0.0);
    return std::exp(log_gamma(alpha) + log_gamma(beta) - log_gamma(alpha + beta));
}

} // namespace qzeta
