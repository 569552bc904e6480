#include "qzeta/qcore.hpp"
#include "qzeta/rational.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace qzeta {

bool is_finite(Cx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

QParam::QParam(double q) : q_(q) {
    if (!(q > 0.0 && q < 1.0)) {
        std::ostringstream os;
        os << "QParam: q must lie in (0,1), got " << q;
        throw DomainError(os.str());
    }
    log_q_ = std::log(q);
    delta_ = Cx(0.0, 2.0 * kPi / log_q_);
}

double qint(int64_t n, const QParam& q) {
    if (n < 1) throw DomainError("qint: n must be >= 1");
    return -std::expm1(static_cast<double>(n) * q.log_q()) / (1.0 - q.q());
}

Cx pochhammer(Cx s, int k) {
    Cx p(1.0, 0.0);
    for (int i = 0; i < k; ++i) p *= s + static_cast<double>(i);
    return p;
}

Cx complex_binomial(Cx s, int r) {
    Cx p(1.0, 0.0);
    for (int i = 0; i < r; ++i) p *= (s + static_cast<double>(i)) / static_cast<double>(i + 1);
    return p;
}

namespace {

constexpr int kBernoulliCap = 64;

// Exact table up to kBernoulliCap, filled on first use.
// B_n from sum_{j=0}^{n} C(n+1,j) B_j = 0.
const std::vector<Rational>& bernoulli_table() {
    static std::vector<Rational> table = [] {
        std::vector<Rational> t;
        t.reserve(kBernoulliCap + 1);
        t.emplace_back(1);
        for (int n = 1; n <= kBernoulliCap; ++n) {
            Rational acc(0);
            Rational binom(1); // C(n+1, j), j = 0
            for (int j = 0; j < n; ++j) {
                acc += binom * t[static_cast<size_t>(j)];
                binom *= Rational(n + 1 - j, j + 1);
            }
            // here binom == C(n+1, n) == n+1
            t.push_back(-acc / binom);
        }
        return t;
    }();
    return table;
}

} // namespace

Rational bernoulli_rational(int n) {
    if (n < 0) throw DomainError("bernoulli: n must be >= 0");
    if (n > kBernoulliCap) throw DomainError("bernoulli: index above exact-table cap 64");
    return bernoulli_table()[static_cast<size_t>(n)];
}

double bernoulli(int n) {
    return static_cast<double>(bernoulli_rational(n));
}

double bernoulli_poly(int n, double x) {
    if (n < 0) throw DomainError("bernoulli_poly: n must be >= 0");
    // Horner in x over coefficients C(n,j) B_j, j = 0..n.
    double acc = 0.0;
    double binom = 1.0; // C(n, j)
    std::vector<double> coeff(static_cast<size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        coeff[static_cast<size_t>(j)] = binom * bernoulli(j);
        binom *= static_cast<double>(n - j) / static_cast<double>(j + 1);
    }
    for (int j = 0; j <= n; ++j) acc = acc * x + coeff[static_cast<size_t>(j)];
    return acc;
}

double periodic_bernoulli(int n, double x) {
    return bernoulli_poly(n, x - std::floor(x));
}

namespace {

// Carmichael function lambda(N): exponent of (Z/N)^x.
int64_t carmichael(int64_t n) {
    int64_t result = 1;
    auto lcm = [](int64_t a, int64_t b) { return a / std::gcd(a, b) * b; };
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        int64_t pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        int64_t lam = (p == 2 && e >= 3) ? pe / 4 : pe / p * (p - 1);
        result = lcm(result, lam);
    }
    if (n > 1) result = lcm(result, n - 1);
    return result;
}

constexpr double kCharTol = 1e-9;

} // namespace

DirichletCharacter make_character(int modulus, std::vector<Cx> values) {
    if (modulus < 1) throw InvalidCharacter("modulus must be positive");
    if (values.size() != static_cast<size_t>(modulus))
        throw InvalidCharacter("value table length must equal modulus");

    auto val = [&](int64_t k) {
        int64_t r = k % modulus;
        if (r <= 0) r += modulus;
        return values[static_cast<size_t>(r - 1)];
    };

    if (std::abs(val(1) - Cx(1.0)) > kCharTol)
        throw InvalidCharacter("chi(1) must equal 1");

    for (int k = 1; k <= modulus; ++k) {
        bool coprime = std::gcd(static_cast<int64_t>(k), static_cast<int64_t>(modulus)) == 1;
        double mag = std::abs(val(k));
        if (!coprime && mag > kCharTol) {
            std::ostringstream os;
            os << "chi(" << k << ") must be 0 (gcd(" << k << "," << modulus << ") > 1)";
            throw InvalidCharacter(os.str());
        }
        if (coprime && std::abs(mag - 1.0) > kCharTol)
            throw InvalidCharacter("nonzero character values must have modulus 1");
    }

    // Multiplicativity on coprime residues.
    for (int m = 1; m <= modulus; ++m) {
        if (std::gcd<int64_t>(m, modulus) != 1) continue;
        for (int n = m; n <= modulus; ++n) {
            if (std::gcd<int64_t>(n, modulus) != 1) continue;
            if (std::abs(val(static_cast<int64_t>(m) * n) - val(m) * val(n)) > kCharTol)
                throw InvalidCharacter("multiplicativity chi(mn) = chi(m)chi(n) violated");
        }
    }

    // Nonzero values are roots of unity of order dividing lambda(N).
    int64_t lam = carmichael(modulus);
    for (int k = 1; k <= modulus; ++k) {
        if (std::gcd<int64_t>(k, modulus) != 1) continue;
        Cx p = std::pow(val(k), static_cast<double>(lam));
        if (std::abs(p - Cx(1.0)) > 1e-7)
            throw InvalidCharacter("character value is not a root of unity of admissible order");
    }

    bool principal = true;
    Cx sum(0.0);
    for (int k = 1; k <= modulus; ++k) {
        sum += val(k);
        if (std::gcd<int64_t>(k, modulus) == 1 && std::abs(val(k) - Cx(1.0)) > kCharTol)
            principal = false;
    }
    if (!principal && std::abs(sum) > 1e-9)
        throw InvalidCharacter("non-principal character values must sum to 0");

    return DirichletCharacter(modulus, std::move(values), principal);
}

DirichletCharacter principal_character(int modulus) {
    if (modulus < 1) throw InvalidCharacter("modulus must be positive");
    std::vector<Cx> values(static_cast<size_t>(modulus));
    for (int k = 1; k <= modulus; ++k)
        values[static_cast<size_t>(k - 1)] =
            (std::gcd<int64_t>(k, modulus) == 1) ? Cx(1.0) : Cx(0.0);
    return DirichletCharacter(modulus, std::move(values), true);
}

Cx gen_bernoulli(int n, const DirichletCharacter& chi) {
    if (n < 0) throw DomainError("gen_bernoulli: n must be >= 0");
    const int N = chi.modulus();
    Cx acc(0.0);
    for (int k = 1; k <= N; ++k)
        acc += chi(k) * bernoulli_poly(n, static_cast<double>(k) / N);
    return acc * std::pow(static_cast<double>(N), n - 1);
}

Cx expm1_complex(Cx z) {
    if (std::abs(z) < 0.25) {
        Cx term = z, acc = z;
        for (int k = 2; k <= 20; ++k) {
            term *= z / static_cast<double>(k);
            acc += term;
            if (std::abs(term) < 1e-18 * std::abs(acc)) break;
        }
        return acc;
    }
    return std::exp(z) - 1.0;
}

Cx g_chi(const DirichletCharacter& chi, Cx z) {
    const int N = chi.modulus();
    Cx zN = std::pow(z, static_cast<double>(N));
    Cx den = 1.0 - zN;

    if (std::abs(den) < 1e-4 && std::abs(z - 1.0) < 1e-4 && !chi.is_principal()) {
        // Removable singularity at z = 1: both numerator and 1 - z^N
        // vanish to first order. Evaluate the ratio through series in
        // log z; accurate uniformly down to z == 1.
        Cx lz = std::log(z);
        Cx num(0.0);
        for (int k = 1; k <= N; ++k)
            num += chi(k) * expm1_complex(static_cast<double>(k) * lz);
        Cx d = -expm1_complex(static_cast<double>(N) * lz);
        if (std::abs(d) == 0.0) {
            // z exactly 1: L'Hopital.
            Cx slope(0.0);
            for (int k = 1; k <= N; ++k) slope += chi(k) * static_cast<double>(k);
            return -slope / static_cast<double>(N);
        }
        return num / d;
    }

    if (std::abs(den) < kGChiPoleThreshold)
        throw PoleProximity("g_chi: z^N too close to 1");

    Cx num(0.0);
    Cx zk(1.0);
    for (int k = 1; k <= N; ++k) {
        zk *= z;
        num += chi(k) * zk;
    }
    return num / den;
}

} // namespace qzeta
