#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qzeta/errors.hpp"

namespace qzeta {

using Cx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

bool is_finite(Cx z);

// The deformation parameter q in (0,1) with its natural log and the
// vertical quasi-period delta = 2*pi*i/log(q) cached.
class QParam {
public:
    explicit QParam(double q);

    double q() const { return q_; }
    double log_q() const { return log_q_; }
    Cx delta() const { return delta_; }

private:
    double q_;
    double log_q_;
    Cx delta_;
};

// q-integer [n]_q = (1-q^n)/(1-q).
double qint(int64_t n, const QParam& q);

// Ascending factorial (s)_k = s(s+1)...(s+k-1); (s)_0 = 1.
Cx pochhammer(Cx s, int k);

// Binomial coefficient with complex top argument:
// C(s+r-1, r) = (s)_r / r!.
Cx complex_binomial(Cx s, int r);

// Bernoulli numbers, convention B_1 = -1/2. Computed once in exact
// rational arithmetic (see rational.hpp) and rendered to double.
// Indices above 64 are rejected.
double bernoulli(int n);

// Bernoulli polynomial B_n(x) = sum_j C(n,j) B_j x^{n-j}.
double bernoulli_poly(int n, double x);

// B_n evaluated at the fractional part of x.
double periodic_bernoulli(int n, double x);

// A Dirichlet character modulo N given by its value table
// chi(1), ..., chi(N). Construct through make_character or
// principal_character; the constructors validate the axioms.
class DirichletCharacter {
public:
    int modulus() const { return modulus_; }
    const std::vector<Cx>& values() const { return values_; }
    bool is_principal() const { return is_principal_; }

    // chi(n) for any n >= 1, reduced mod N.
    Cx operator()(int64_t n) const {
        int64_t r = n % modulus_;
        if (r <= 0) r += modulus_;
        return values_[static_cast<size_t>(r - 1)];
    }

private:
    DirichletCharacter(int modulus, std::vector<Cx> values, bool principal)
        : modulus_(modulus), values_(std::move(values)), is_principal_(principal) {}

    friend DirichletCharacter make_character(int modulus, std::vector<Cx> values);
    friend DirichletCharacter principal_character(int modulus);

    int modulus_;
    std::vector<Cx> values_;
    bool is_principal_;
};

// Validates the table against the character axioms; throws
// InvalidCharacter naming the violated axiom.
DirichletCharacter make_character(int modulus, std::vector<Cx> values);

// chi(k) = 1 on residues coprime to N, 0 elsewhere.
DirichletCharacter principal_character(int modulus);

// Generalized Bernoulli number B_{n,chi}, computed from the modular
// Bernoulli-polynomial route B_{n,chi} = N^{n-1} sum_k chi(k) B_n(k/N).
Cx gen_bernoulli(int n, const DirichletCharacter& chi);

// exp(z) - 1 without cancellation for small |z|.
Cx expm1_complex(Cx z);

// g_chi(z) = sum_{k=1}^{N} chi(k) z^k / (1 - z^N).
//
// For non-principal characters the singularity at z = 1 is removable
// and is evaluated analytically; elsewhere |1 - z^N| below the pole
// threshold raises PoleProximity.
Cx g_chi(const DirichletCharacter& chi, Cx z);

inline constexpr double kGChiPoleThreshold = 1e-12;

} // namespace qzeta
