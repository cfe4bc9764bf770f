#pragma once

// Variational lower bounds for M_k = sup k J(F) / I(F) over symmetric F on the
// simplex R_k = {t_i >= 0, sum t_i <= 1}, using the basis
// (1 - P1)^a P2^b with P1 = sum t_i, P2 = sum t_i^2, a + 2b <= degree.
//
// The quadratic forms are assembled exactly in rational arithmetic from
//   int_{R_k} (1 - P1)^A prod t_i^{c_i} dt = A! prod c_i! / (k + A + sum c_i)!
// and converted to floating point only for the eigen-solve.

#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace hecke {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Highest basis degree accepted by build_forms and optimize_Mk.
inline constexpr int kMaxSieveDegree = 11;

struct SieveBasis {
    int k = 2;
    int degree = 0;
    std::vector<std::pair<int, int>> elements;  ///< (a, b) for (1 - P1)^a P2^b

    static SieveBasis make(int k, int degree) {
        SieveBasis s{k, degree, {}};
        for (int b = 0; 2 * b <= degree; ++b)
            for (int a = 0; a + 2 * b <= degree; ++a) s.elements.emplace_back(a, b);
        return s;
    }
    std::size_t size() const { return elements.size(); }
};

struct SieveForms {
    SieveBasis basis;
    std::vector<std::vector<Rational>> I;
    std::vector<std::vector<Rational>> J;
};

struct VariationalResult {
    int k = 2;
    int degree = 0;
    std::size_t basis_size = 0;
    double lambda = 0.0;     ///< largest generalized eigenvalue of J c = lambda I c
    double Mk_lower = 0.0;   ///< k * lambda
    std::vector<double> coefficients;
    int iterations = 0;
};

class SieveError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when the iteration budget runs out; carries the best iterate.
class ConvergenceError : public SieveError {
public:
    ConvergenceError(const std::string& what, VariationalResult best)
        : SieveError(what), best_(std::move(best)) {}
    const VariationalResult& best() const { return best_; }

private:
    VariationalResult best_;
};

inline BigInt factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

/// int_{R_k} prod t_i^{e_i} dt = prod e_i! / (k + sum e_i)!, exactly.
inline Rational simplex_integral(const std::vector<unsigned>& exponents) {
    if (exponents.empty()) throw std::domain_error("simplex_integral: need k >= 1");
    BigInt num = 1;
    unsigned total = 0;
    for (unsigned e : exponents) {
        num *= factorial(e);
        total += e;
    }
    return Rational(num, factorial(static_cast<unsigned>(exponents.size()) + total));
}

namespace detail {

inline void partitions_into(unsigned n, unsigned max_part, std::vector<unsigned>& cur,
                            std::vector<std::vector<unsigned>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (unsigned p = std::min(n, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions_into(n - p, p, cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

/// int_{R_k} (1 - P1)^A P2^B dt. P2^B expands over partitions lambda of B into
/// at most k parts: multinomial B!/prod lambda_j! times the number of ways to
/// place the parts on distinct coordinates, each monomial prod t^{2 lambda_j}
/// integrating to A! prod (2 lambda_j)! / (k + A + 2B)!.
class PowerSumIntegrals {
public:
    const Rational& operator()(unsigned k, unsigned A, unsigned B) {
        const auto key = std::make_tuple(k, A, B);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        std::vector<std::vector<unsigned>> parts;
        std::vector<unsigned> cur;
        detail::partitions_into(B, B, cur, parts);
        BigInt total = 0;
        for (const auto& lam : parts) {
            if (lam.size() > k) continue;
            BigInt term = factorial(B);
            for (unsigned x : lam) term /= factorial(x);
            BigInt placements = 1;
            for (unsigned i = 0; i < lam.size(); ++i) placements *= (k - i);
            for (std::size_t i = 0; i < lam.size();) {
                std::size_t j = i;
                while (j < lam.size() && lam[j] == lam[i]) ++j;
                placements /= factorial(static_cast<unsigned>(j - i));
                i = j;
            }
            term *= placements;
            for (unsigned x : lam) term *= factorial(2 * x);
            total += term;
        }
        Rational value(total * factorial(A), factorial(k + A + 2 * B));
        return cache_.emplace(key, std::move(value)).first->second;
    }

private:
    std::map<std::tuple<unsigned, unsigned, unsigned>, Rational> cache_;
};

/// Exact Gram matrices I_ij = int F_i F_j and J_ij = int (int F_i dt_k)(int F_j dt_k).
/// Integrating (1-P1)^a P2^b over t_k in [0, s] with s = 1 - sum_{i<k} t_i gives
///   sum_j C(b,j) P2'^{b-j} s^{a+2j+1} a! (2j)! / (a+2j+1)!
/// so J reduces to the same integrals in k-1 variables.
inline SieveForms build_forms(int k, int degree) {
    if (k < 2 || k > 200) throw std::domain_error("build_forms: k must lie in [2, 200]");
    if (degree < 0 || degree > kMaxSieveDegree)
        throw std::domain_error("build_forms: degree must lie in [0, 11]");
    SieveForms f;
    f.basis = SieveBasis::make(k, degree);
    const std::size_t n = f.basis.size();
    PowerSumIntegrals G;

    struct Term {
        Rational coeff;
        unsigned s_power;
        unsigned p2_power;
    };
    std::vector<std::vector<Term>> inner(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [a, b] = f.basis.elements[i];
        for (int j = 0; j <= b; ++j) {
            BigInt binom = factorial(b) / (factorial(j) * factorial(b - j));
            Rational c(binom * factorial(a) * factorial(2 * j), factorial(a + 2 * j + 1));
            inner[i].push_back({c, static_cast<unsigned>(a + 2 * j + 1), static_cast<unsigned>(b - j)});
        }
    }

    f.I.assign(n, std::vector<Rational>(n));
    f.J.assign(n, std::vector<Rational>(n));
    const auto ku = static_cast<unsigned>(k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const auto [ai, bi] = f.basis.elements[i];
            const auto [aj, bj] = f.basis.elements[j];
            f.I[i][j] = G(ku, static_cast<unsigned>(ai + aj), static_cast<unsigned>(bi + bj));
            Rational acc = 0;
            for (const auto& u : inner[i])
                for (const auto& v : inner[j])
                    acc += u.coeff * v.coeff * G(ku - 1, u.s_power + v.s_power, u.p2_power + v.p2_power);
            f.J[i][j] = acc;
            f.I[j][i] = f.I[i][j];
            f.J[j][i] = f.J[i][j];
        }
    }
    return f;
}

inline Eigen::MatrixXd to_double(const std::vector<std::vector<Rational>>& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = static_cast<double>(m[i][j]);
    return out;
}

/// Exact c^T J c / c^T I c for floating-point coefficients (each double is an
/// exact rational, so only the final division rounds).
inline double exact_rayleigh(const SieveForms& f, const std::vector<double>& c) {
    const std::size_t n = c.size();
    if (n != f.basis.size()) throw std::invalid_argument("exact_rayleigh: coefficient size mismatch");
    std::vector<Rational> rc;
    rc.reserve(n);
    for (double x : c) rc.emplace_back(x);
    Rational num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Rational w = rc[i] * rc[j];
            num += w * f.J[i][j];
            den += w * f.I[i][j];
        }
    if (den <= 0) throw SieveError("exact_rayleigh: I form is not positive on this vector");
    return static_cast<double>(Rational(num / den));
}

inline constexpr int kSieveIterationBudget = 10000;
inline constexpr double kSieveTolerance = 1e-12;

/// Largest lambda with J c = lambda I c. I is Cholesky-factored (after diagonal
/// scaling) and the symmetric matrix L^-1 J L^-T is formed by triangular
/// solves. Power iteration from the all-ones vector runs until lambda changes
/// by less than 1e-12 relative, then a few Rayleigh-quotient-iteration steps
/// polish the eigenvector.
inline VariationalResult optimize_Mk(const SieveForms& f) {
    const auto n = static_cast<Eigen::Index>(f.basis.size());
    const Eigen::MatrixXd I = to_double(f.I);
    const Eigen::MatrixXd J = to_double(f.J);
    const Eigen::VectorXd scale = I.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd Is = scale.asDiagonal() * I * scale.asDiagonal();
    const Eigen::MatrixXd Js = scale.asDiagonal() * J * scale.asDiagonal();

    Eigen::LLT<Eigen::MatrixXd> llt(Is);
    if (llt.info() != Eigen::Success) throw SieveError("optimize_Mk: I form is singular or indefinite");
    const auto L = llt.matrixL();
    Eigen::MatrixXd X = L.solve(Js);
    Eigen::MatrixXd A = L.solve(X.transpose()).transpose();
    A = 0.5 * (A + A.transpose());

    VariationalResult r;
    r.k = f.basis.k;
    r.degree = f.basis.degree;
    r.basis_size = f.basis.size();

    Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
    double lambda = v.dot(A * v);
    bool converged = false;
    int it = 0;
    while (it < kSieveIterationBudget) {
        ++it;
        Eigen::VectorXd w = A * v;
        const double norm = w.norm();
        if (norm == 0.0) break;
        v = w / norm;
        const double next = v.dot(A * v);
        const bool done = std::abs(next - lambda) <= kSieveTolerance * std::abs(next);
        lambda = next;
        if (done) {
            converged = true;
            break;
        }
    }

    const auto to_coefficients = [&](const Eigen::VectorXd& y) {
        Eigen::VectorXd c = L.transpose().solve(y);
        c = scale.asDiagonal() * c;
        if (c(0) < 0) c = -c;
        c /= c.cwiseAbs().maxCoeff();
        return std::vector<double>(c.data(), c.data() + c.size());
    };

    if (!converged) {
        r.lambda = lambda;
        r.Mk_lower = r.k * lambda;
        r.coefficients = to_coefficients(v);
        r.iterations = it;
        throw ConvergenceError("optimize_Mk: no convergence within the iteration budget", r);
    }

    for (int step = 0; step < 3 && n > 1; ++step) {
        const Eigen::MatrixXd shifted = A - lambda * Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd w = shifted.fullPivLu().solve(v);
        if (!w.allFinite() || w.norm() == 0.0) break;
        w.normalize();
        const double next = w.dot(A * w);
        if (next < lambda) break;
        v = w;
        lambda = next;
        ++it;
    }

    r.lambda = lambda;
    r.Mk_lower = r.k * lambda;
    r.coefficients = to_coefficients(v);
    r.iterations = it;
    return r;
}

inline VariationalResult optimize_Mk(int k, int degree) { return optimize_Mk(build_forms(k, degree)); }

/// Largest m >= 0 with 2m / theta < Mk, i.e. ceil(theta Mk / 2) - 1.
inline int dhl_m(double Mk_lower, double theta) {
    if (!(Mk_lower > 0.0)) throw std::domain_error("dhl_m: Mk must be positive");
    if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("dhl_m: theta must lie in (0, 1)");
    const int m = static_cast<int>(std::ceil(theta * Mk_lower / 2.0)) - 1;
    return std::max(m, 0);
}

}  // namespace hecke
