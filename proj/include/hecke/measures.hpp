#pragma once

// Probability laws on [-1, 1]: the arcsine law, the CM mixture
// (half arcsine, half point mass at 0) and piecewise-uniform empirical laws.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hecke {

enum class MeasureKind { arcsine, cm_mixture, empirical };

inline const char* to_string(MeasureKind k) {
    switch (k) {
        case MeasureKind::arcsine: return "arcsine";
        case MeasureKind::cm_mixture: return "cm_mixture";
        case MeasureKind::empirical: return "empirical";
    }
    return "unknown";
}

class Measure {
public:
    static Measure arcsine() { return Measure(MeasureKind::arcsine); }
    static Measure cm_mixture() { return Measure(MeasureKind::cm_mixture); }

    /// Piecewise-uniform law from ascending bin edges and per-bin masses.
    /// Masses are renormalized once their sum is within 1e-12 of 1.
    static Measure empirical(std::vector<double> edges, std::vector<double> masses) {
        if (edges.size() < 2 || masses.size() + 1 != edges.size())
            throw std::invalid_argument("empirical measure: need n+1 edges for n masses");
        if (edges.front() < -1.0 || edges.back() > 1.0)
            throw std::domain_error("empirical measure: edges must lie in [-1, 1]");
        double total = 0.0;
        for (std::size_t i = 0; i < masses.size(); ++i) {
            if (!(edges[i] < edges[i + 1]))
                throw std::invalid_argument("empirical measure: edges must increase");
            if (masses[i] < 0.0) throw std::invalid_argument("empirical measure: negative mass");
            total += masses[i];
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("empirical measure: masses must sum to 1");
        Measure m(MeasureKind::empirical);
        m.edges_ = std::move(edges);
        m.masses_ = std::move(masses);
        m.cumulative_.assign(m.masses_.size() + 1, 0.0);
        for (std::size_t i = 0; i < m.masses_.size(); ++i)
            m.cumulative_[i + 1] = m.cumulative_[i] + m.masses_[i];
        return m;
    }

    /// Histogram of samples in [-1, 1] over `bins` equal-width bins.
    static Measure from_samples(const std::vector<double>& samples, std::size_t bins) {
        if (samples.empty()) throw std::domain_error("empirical measure: no samples");
        if (bins == 0) throw std::invalid_argument("empirical measure: bins must be positive");
        std::vector<double> edges(bins + 1);
        for (std::size_t i = 0; i <= bins; ++i)
            edges[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(bins);
        std::vector<double> counts(bins, 0.0);
        for (double s : samples) {
            if (s < -1.0 || s > 1.0) throw std::domain_error("empirical measure: sample outside [-1, 1]");
            auto idx = static_cast<std::size_t>((s + 1.0) / 2.0 * static_cast<double>(bins));
            counts[std::min(idx, bins - 1)] += 1.0;
        }
        for (double& c : counts) c /= static_cast<double>(samples.size());
        return empirical(std::move(edges), std::move(counts));
    }

    MeasureKind kind() const { return kind_; }
    const std::vector<double>& edges() const { return edges_; }
    const std::vector<double>& masses() const { return masses_; }

    /// mu([-1, t]), right-continuous.
    double cdf(double t) const {
        t = std::clamp(t, -1.0, 1.0);
        switch (kind_) {
            case MeasureKind::arcsine: return arcsine_cdf(t);
            case MeasureKind::cm_mixture: return 0.5 * arcsine_cdf(t) + (t >= 0.0 ? 0.5 : 0.0);
            case MeasureKind::empirical: return empirical_cdf(t);
        }
        return 0.0;
    }

    /// mu([-1, t)), the left limit of the cdf.
    double cdf_left(double t) const { return cdf(t) - atom(t); }

    /// Point mass at t.
    double atom(double t) const {
        return kind_ == MeasureKind::cm_mixture && t == 0.0 ? 0.5 : 0.0;
    }

    /// mu([lo, hi]) for a closed interval inside [-1, 1].
    double mass(double lo, double hi) const {
        if (lo < -1.0 || hi > 1.0 || lo > hi)
            throw std::domain_error("mass: interval must be a closed subinterval of [-1, 1]");
        return std::clamp(cdf(hi) - cdf_left(lo), 0.0, 1.0);
    }

    /// Inverse cdf for the continuous kinds (arcsine only).
    double quantile(double u) const {
        if (kind_ != MeasureKind::arcsine)
            throw std::domain_error("quantile: only available for the arcsine measure");
        u = std::clamp(u, 0.0, 1.0);
        return std::sin(std::numbers::pi * (u - 0.5));
    }

    void write_csv(std::ostream& os) const {
        if (kind_ != MeasureKind::empirical)
            throw std::domain_error("write_csv: only empirical measures serialize");
        os << "bin_lo,bin_hi,mass\n";
        std::ostringstream line;
        line << std::setprecision(17);
        for (std::size_t i = 0; i < masses_.size(); ++i)
            line << edges_[i] << ',' << edges_[i + 1] << ',' << masses_[i] << '\n';
        os << line.str();
    }

    static Measure read_csv(std::istream& is) {
        std::string line;
        if (!std::getline(is, line) || line != "bin_lo,bin_hi,mass")
            throw std::runtime_error("empirical measure csv: missing header");
        std::vector<double> edges, masses;
        std::size_t lineno = 1;
        while (std::getline(is, line)) {
            ++lineno;
            if (line.empty()) continue;
            double lo = 0, hi = 0, m = 0;
            char c1 = 0, c2 = 0;
            std::istringstream ls(line);
            if (!(ls >> lo >> c1 >> hi >> c2 >> m) || c1 != ',' || c2 != ',')
                throw std::runtime_error("empirical measure csv: malformed line " + std::to_string(lineno));
            if (edges.empty()) edges.push_back(lo);
            else if (edges.back() != lo)
                throw std::runtime_error("empirical measure csv: bins not contiguous at line " +
                                         std::to_string(lineno));
            edges.push_back(hi);
            masses.push_back(m);
        }
        return empirical(std::move(edges), std::move(masses));
    }

private:
    explicit Measure(MeasureKind k) : kind_(k) {}

    static double arcsine_cdf(double t) { return 0.5 + std::asin(t) / std::numbers::pi; }

    double empirical_cdf(double t) const {
        if (t < edges_.front()) return 0.0;
        if (t >= edges_.back()) return 1.0;
        const auto it = std::upper_bound(edges_.begin(), edges_.end(), t);
        const auto i = static_cast<std::size_t>(it - edges_.begin()) - 1;
        const double frac = (t - edges_[i]) / (edges_[i + 1] - edges_[i]);
        return cumulative_[i] + frac * masses_[i];
    }

    MeasureKind kind_;
    std::vector<double> edges_;
    std::vector<double> masses_;
    std::vector<double> cumulative_;
};

/// Density of P_eps among all primes: arcsin(eps)/pi. The arcsine law has unit
/// mass over split primes, which are half of all primes.
inline double density_P_eps(double eps) {
    if (!(eps > 0.0) || eps > 1.0) throw std::domain_error("density_P_eps: eps must lie in (0, 1]");
    return std::asin(eps) / std::numbers::pi;
}

/// Uniform law on the angle circle [0, 1); used for Hecke angles.
struct UniformAngleMeasure {
    double mass(double lo, double hi) const {
        if (lo < 0.0 || hi > 1.0 || lo > hi)
            throw std::domain_error("UniformAngleMeasure: interval must lie in [0, 1]");
        return hi - lo;
    }
};

}  // namespace hecke
