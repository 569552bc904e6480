#include "qzeta/reference.hpp"

#include <array>
#include <cmath>

namespace qzeta::reference {

Cx hurwitz_zeta(Cx s, double a, int M) {
    if (!(a > 0.0 && a <= 1.0))
        throw DomainError("hurwitz_zeta: a must lie in (0,1]");
    if (std::abs(s - Cx(1.0)) < 1e-12)
        throw PoleAtOne("hurwitz_zeta: pole at s = 1");
    if (M == 0) M = std::max(24, static_cast<int>(std::ceil(-s.real())) + 10);
    if (M + 1 > 64) throw DomainError("hurwitz_zeta: order exceeds Bernoulli table");
    if (!(s.real() > -static_cast<double>(M)))
        throw DomainError("hurwitz_zeta: Re(s) too negative for requested order");

    // Head shift: push the expansion point to x = a + K with K large
    // enough that the Bernoulli tail contracts at rate ~ |s|/(2 pi K).
    const int K = std::max({10, static_cast<int>(std::ceil(std::abs(s.imag()))),
                            static_cast<int>(std::ceil(std::abs(s) / 3.0))});
    Cx head(0.0);
    for (int n = 0; n < K; ++n) head += std::exp(-s * std::log(a + n));

    const double x = a + K;
    const double lx = std::log(x);
    Cx tail = std::exp((1.0 - s) * lx) / (s - 1.0) + 0.5 * std::exp(-s * lx);
    // sum_{l=1}^{M} B_{l+1}/(l+1)! (s)_l x^{-s-l}; only even l+1 survive.
    Cx poch(1.0);
    double fact = 1.0;
    for (int l = 1; l <= M; ++l) {
        poch *= s + static_cast<double>(l - 1);
        fact *= static_cast<double>(l + 1);
        if ((l + 1) % 2) continue;
        tail += bernoulli(l + 1) / fact * poch * std::exp(-(s + static_cast<double>(l)) * lx);
    }
    return head + tail;
}

Cx riemann_zeta(Cx s) { return hurwitz_zeta(s, 1.0); }

Cx dirichlet_L(Cx s, const DirichletCharacter& chi) {
    const int N = chi.modulus();
    if (std::abs(s - Cx(1.0)) < 1e-12) {
        // Each Hurwitz term diverges at s = 1; for non-principal chi the
        // poles cancel and L(1, chi) = -(1/N) sum_k chi(k) psi(k/N).
        if (chi.is_principal()) throw PoleAtOne("dirichlet_L: pole at s = 1");
        Cx acc(0.0);
        for (int k = 1; k <= N; ++k) {
            Cx c = chi(k);
            if (std::abs(c) == 0.0) continue;
            acc += c * digamma(static_cast<double>(k) / N);
        }
        return -acc / static_cast<double>(N);
    }
    Cx acc(0.0);
    for (int k = 1; k <= N; ++k) {
        Cx c = chi(k);
        if (std::abs(c) == 0.0) continue;
        acc += c * hurwitz_zeta(s, static_cast<double>(k) / N);
    }
    return acc * std::exp(-s * std::log(static_cast<double>(N)));
}

double digamma(double x) {
    if (x <= 0.0 && x == std::floor(x))
        throw PoleError("digamma: pole at non-positive integer");
    double acc = 0.0;
    // Reflection for negative arguments, then recurrence to x >= 10.
    if (x < 0.0) {
        // psi(1-x) - psi(x) = pi cot(pi x)
        return digamma(1.0 - x) - kPi / std::tan(kPi * x);
    }
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv2 = 1.0 / (x * x);
    // psi(x) ~ ln x - 1/(2x) - sum B_{2k}/(2k x^{2k})
    double series = 0.0;
    double p = inv2;
    for (int k = 1; k <= 7; ++k) {
        series += bernoulli(2 * k) / (2.0 * k) * p;
        p *= inv2;
    }
    return acc + std::log(x) - 0.5 / x - series;
}

namespace {
constexpr std::array<double, 5> kNontrivialIm = {14.13472, 21.02203, 25.01085, 30.42487,
                                                 32.93506};
}

Cx trivial_zero(int j) {
    if (j < 1) throw DomainError("trivial_zero: j must be >= 1");
    return Cx(-2.0 * j, 0.0);
}

Cx nontrivial_zero(int j) {
    if (j < 1 || j > nontrivial_zero_count())
        throw DomainError("nontrivial_zero: only the first five are tabulated");
    return Cx(0.5, kNontrivialIm[static_cast<size_t>(j - 1)]);
}

int nontrivial_zero_count() { return static_cast<int>(kNontrivialIm.size()); }

} // namespace qzeta::reference
