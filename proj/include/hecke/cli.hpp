#pragma once

// Command-line front end. Every experiment is one subcommand; all parameters
// are flags. dispatch() never calls exit(), so it can be driven from tests.
//
// Exit status: 0 success, 1 computation error, 2 usage error.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hecke/hecke.hpp"

namespace hecke::cli {

enum class Format { text, csv, json };

class UsageError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Parses a non-negative integer, accepting scientific notation ("1e6").
inline u64 parse_count(const std::string& text, const char* flag) {
    try {
        std::size_t used = 0;
        if (text.find_first_of("eE.") == std::string::npos) {
            const auto v = std::stoull(text, &used);
            if (used == text.size() && text.front() != '-') return v;
        } else {
            const long double v = std::stold(text, &used);
            if (used == text.size() && v >= 0 && v < 1.8e19L && std::floor(v) == v)
                return static_cast<u64>(v);
        }
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("--") + flag + ": expected a non-negative integer, got '" + text + "'");
}

inline double parse_real(const std::string& text, const char* flag) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("--") + flag + ": expected a number, got '" + text + "'");
}

inline std::pair<double, double> parse_interval(const std::string& text, const char* flag) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError(std::string("--") + flag + ": expected lo,hi");
    const double lo = parse_real(text.substr(0, comma), flag);
    const double hi = parse_real(text.substr(comma + 1), flag);
    if (lo > hi) throw UsageError(std::string("--") + flag + ": lo must not exceed hi");
    return {lo, hi};
}

inline CurveSpec parse_curve_flag(const std::string& text) {
    try {
        return parse_curve(text);
    } catch (const CurveError& e) {
        throw UsageError(std::string("--curve: ") + e.what());
    }
}

inline std::string fixed(double v, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

inline std::string json_number(double v) { return nlohmann::json(v).dump(); }

struct RunConfig {
    std::string subcommand;
    Format format = Format::text;
    std::string output_path;
    unsigned threads = 1;
};

namespace detail {

/// Output sink: the --output file when given, else the caller's stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::trunc);
            if (!file_) throw std::runtime_error("cannot open output file " + path);
            out_ = &file_;
        }
    }
    std::ostream& operator*() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

inline void emit_json(std::ostream& os, const nlohmann::json& j) { os << j.dump(2) << '\n'; }

inline std::unique_ptr<PrimeSet> make_set(const std::string& kind, double eps, const std::string& curve_text,
                                          const std::string& interval_text, const std::string& cache_path,
                                          std::shared_ptr<TraceCache>* cache_out) {
    if (kind == "all") return std::make_unique<AllPrimes>();
    if (kind == "mod4") return std::make_unique<PrimesInClass>(1, 4);
    if (kind == "peps") return std::make_unique<PEpsSet>(eps);
    if (kind == "curve") {
        if (curve_text.empty()) throw UsageError("--set curve requires --curve a,b,c,alpha,beta");
        const auto curve = parse_curve_flag(curve_text);
        double lo = -1.0, hi = 1.0;
        if (!interval_text.empty()) std::tie(lo, hi) = parse_interval(interval_text, "interval");
        else if (curve.g >= 1) std::tie(lo, hi) = eps_interval(curve, eps);
        auto cache = std::make_shared<TraceCache>(curve, cache_path);
        if (cache_out) *cache_out = cache;
        return std::make_unique<CurveTraceSet>(curve, lo, hi, cache);
    }
    throw UsageError("--set: expected one of all, mod4, peps, curve");
}

}  // namespace detail

/// Runs one subcommand. `args` excludes the program name.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constrained prime sets: construction, search and equidistribution checks", "hecke"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    RunConfig cfg;
    std::string format_text = "text";
    bool seedless = false;
    const auto add_common = [&](CLI::App* sub, const std::string& default_format) {
        sub->add_option("--format", format_text, "csv, json or text (default " + default_format + ")")
            ->check(CLI::IsMember({"csv", "json", "text"}));
        sub->add_option("--output", cfg.output_path, "write results to this file instead of stdout");
        sub->add_option("--threads", cfg.threads, "worker threads (results never depend on this)")
            ->check(CLI::Range(1u, 256u));
        sub->add_flag("--seedless", seedless, "accepted for reproducibility scripts; every run is deterministic");
    };

    // primes
    std::string lo_text = "2", hi_text, count_text;
    auto* primes = app.add_subcommand("primes", "list primes in [lo, hi) or count primes up to x");
    primes->add_option("--lo", lo_text, "range start (default 2)");
    primes->add_option("--hi", hi_text, "range end, exclusive");
    primes->add_option("--count", count_text, "print pi(x) for this x instead of a list");
    add_common(primes, "text");

    // split
    std::string p_text, D_text = "1";
    auto* split = app.add_subcommand("split", "decompose a prime as a^2 + D b^2");
    split->add_option("--p", p_text, "the prime")->required();
    split->add_option("--D", D_text, "field parameter (class number one; default 1)");
    add_common(split, "text");

    // curve-trace
    std::string curve_text, pmin_text = "2", pmax_text, cache_path, bins_text = "0", measure_out;
    auto* curve_trace = app.add_subcommand("curve-trace", "traces of Frobenius of a diagonal curve");
    curve_trace->add_option("--curve", curve_text, "a,b,c,alpha,beta for a X^alpha + b Y^beta = c")->required();
    curve_trace->add_option("--pmin", pmin_text, "smallest prime (default 2)");
    curve_trace->add_option("--pmax", pmax_text, "largest prime")->required();
    curve_trace->add_option("--cache", cache_path, "trace cache file (read and extended)");
    curve_trace->add_option("--bins", bins_text, "also build an empirical measure with this many bins");
    curve_trace->add_option("--measure-out", measure_out, "CSV file for the empirical measure");
    add_common(curve_trace, "csv");

    // equidist
    std::string set_kind = "split", eps_text = "0.5", x_text, measure_kind = "arcsine", measure_file,
                interval_text;
    auto* equidist = app.add_subcommand("equidist", "Kolmogorov-Smirnov distance of a sample to a measure");
    equidist->add_option("--set", set_kind, "split, peps or curve (default split)")
        ->check(CLI::IsMember({"split", "peps", "curve"}));
    equidist->add_option("--eps", eps_text, "eps for --set peps (default 0.5)");
    equidist->add_option("--x", x_text, "upper bound for primes")->required();
    equidist->add_option("--measure", measure_kind, "arcsine, cm_mixture or empirical")
        ->check(CLI::IsMember({"arcsine", "cm_mixture", "empirical"}));
    equidist->add_option("--measure-file", measure_file, "CSV for --measure empirical");
    equidist->add_option("--curve", curve_text, "curve for --set curve");
    equidist->add_option("--cache", cache_path, "trace cache for --set curve");
    add_common(equidist, "json");

    // bv-check
    std::string Q_text = "30", grid_text = "16", bv_set = "peps";
    auto* bv = app.add_subcommand("bv-check", "discrepancy of a prime set in progressions q <= Q");
    bv->add_option("--set", bv_set, "peps or all (default peps)")->check(CLI::IsMember({"peps", "all"}));
    bv->add_option("--eps", eps_text, "eps for P_eps (default 0.5)");
    bv->add_option("--x", x_text, "upper cutoff")->required();
    bv->add_option("--Q", Q_text, "largest modulus (default 30)");
    bv->add_option("--grid", grid_text, "number of geometric cutoffs (default 16)");
    add_common(bv, "csv");

    // tuple
    std::string k_text, check_text;
    auto* tuple = app.add_subcommand("tuple", "build a narrow admissible tuple or check one");
    auto* k_opt = tuple->add_option("--k", k_text, "tuple size to construct");
    auto* check_opt = tuple->add_option("--check", check_text, "comma-separated offsets to test");
    k_opt->excludes(check_opt);
    add_common(tuple, "text");

    // sieve-opt
    std::string degree_text = "4", theta_text = "0.5,0.25,0.0555555555555556";
    auto* sieve = app.add_subcommand("sieve-opt", "variational lower bound for M_k");
    sieve->add_option("--k", k_text, "tuple size")->required();
    sieve->add_option("--degree", degree_text, "basis degree a + 2b (default 4)");
    sieve->add_option("--theta", theta_text, "comma-separated levels of distribution for m(theta)");
    add_common(sieve, "json");

    // gap-scan
    std::string gap_set = "all", tuple_text, mode = "scan", windows_csv, limit_text = "10";
    auto* gap = app.add_subcommand("gap-scan", "cluster histogram over a tuple, or record gaps");
    gap->add_option("--set", gap_set, "all, mod4, peps or curve (default all)")
        ->check(CLI::IsMember({"all", "mod4", "peps", "curve"}));
    gap->add_option("--eps", eps_text, "eps for peps, or for the curve interval [-eps/2g, eps/2g]");
    gap->add_option("--curve", curve_text, "curve for --set curve");
    gap->add_option("--interval", interval_text, "lo,hi normalized-trace interval for --set curve");
    gap->add_option("--cache", cache_path, "trace cache for --set curve");
    gap->add_option("--mode", mode, "scan or gaps (default scan)")->check(CLI::IsMember({"scan", "gaps"}));
    gap->add_option("--tuple", tuple_text, "offsets, e.g. 0,2,6");
    gap->add_option("--k", k_text, "use narrow_tuple(k) instead of --tuple");
    gap->add_option("--x", x_text, "scan n in (x, 2x], or gaps up to x")->required();
    gap->add_option("--limit", limit_text, "number of records for --mode gaps (default 10)");
    gap->add_option("--windows-csv", windows_csv, "also write best windows as CSV here");
    add_common(gap, "json");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "hecke: " << e.what() << '\n';
        return 2;
    }

    try {
        if (format_text == "csv") cfg.format = Format::csv;
        else if (format_text == "json") cfg.format = Format::json;
        else cfg.format = Format::text;
        const auto explicit_format = [&](CLI::App* sub) { return sub->count("--format") > 0; };
        const auto pick = [&](CLI::App* sub, Format fallback) {
            if (!explicit_format(sub)) cfg.format = fallback;
        };
        const unsigned threads = cfg.threads;

        // Validate every flag before computing anything.
        if (*primes) {
            pick(primes, Format::text);
            std::optional<u64> count_x, lo, hi;
            if (!count_text.empty()) count_x = parse_count(count_text, "count");
            else {
                if (hi_text.empty()) throw UsageError("primes: give --hi or --count");
                lo = parse_count(lo_text, "lo");
                hi = parse_count(hi_text, "hi");
                if (*lo < 2 || *lo >= *hi) throw UsageError("primes: need 2 <= lo < hi");
            }
            detail::Sink sink(cfg.output_path, out);
            if (count_x) {
                const u64 c = prime_count(*count_x, threads);
                if (cfg.format == Format::json) detail::emit_json(*sink, {{"x", *count_x}, {"pi", c}});
                else if (cfg.format == Format::csv) *sink << "x,pi\n" << *count_x << ',' << c << '\n';
                else *sink << "pi(" << *count_x << ") = " << c << '\n';
                return 0;
            }
            const auto range = sieve_range(*lo, *hi, threads);
            if (cfg.format == Format::json) {
                detail::emit_json(*sink, {{"lo", *lo}, {"hi", *hi}, {"count", range.primes.size()},
                                          {"primes", range.primes}});
            } else {
                if (cfg.format == Format::csv) *sink << "p\n";
                for (u64 p : range.primes) *sink << p << '\n';
            }
            return 0;
        }

        if (*split) {
            pick(split, Format::text);
            const u64 p = parse_count(p_text, "p");
            const u64 D = parse_count(D_text, "D");
            if (!is_prime(p)) throw UsageError("split: --p must be prime");
            if (!is_class_number_one(D))
                throw UsageError("split: --D must be one of 1,2,3,7,11,19,43,67,163");
            detail::Sink sink(cfg.output_path, out);
            std::optional<SplitPrime> s;
            if (D == 1) {
                s = canonical_split(p);
            } else if (const auto rep = cornacchia(p, D)) {
                SplitPrime sp;
                sp.p = p;
                sp.D = D;
                sp.a = static_cast<i64>(rep->first);
                sp.b = static_cast<i64>(rep->second);
                sp.ratio = static_cast<double>(sp.a) / std::sqrt(static_cast<double>(p));
                s = sp;
            }
            if (cfg.format == Format::json) {
                nlohmann::json j = {{"p", p}, {"D", D}, {"representable", s.has_value()}};
                if (s) {
                    j["a"] = s->a;
                    j["b"] = s->b;
                    j["ratio"] = s->ratio;
                    j["theta"] = D == 1 ? nlohmann::json(s->theta) : nlohmann::json(nullptr);
                }
                detail::emit_json(*sink, j);
            } else if (cfg.format == Format::csv) {
                *sink << "p,D,a,b,ratio,theta\n";
                if (s)
                    *sink << p << ',' << D << ',' << s->a << ',' << s->b << ',' << json_number(s->ratio) << ','
                          << (D == 1 ? json_number(s->theta) : "") << '\n';
            } else if (!s) {
                *sink << p << " is not of the form a^2 + " << D << " b^2\n";
            } else {
                *sink << p << " = (" << s->a << ")^2 + " << (D == 1 ? "" : std::to_string(D) + "*") << "(" << s->b
                      << ")^2  ratio=" << fixed(s->ratio);
                if (D == 1) *sink << "  theta=" << fixed(s->theta);
                *sink << '\n';
            }
            return 0;
        }

        if (*curve_trace) {
            pick(curve_trace, Format::csv);
            const auto curve = parse_curve_flag(curve_text);
            const u64 pmin = parse_count(pmin_text, "pmin");
            const u64 pmax = parse_count(pmax_text, "pmax");
            const u64 bins = parse_count(bins_text, "bins");
            if (pmax < pmin || pmax < 2) throw UsageError("curve-trace: need pmin <= pmax");
            if (pmax > 10'000'000) throw UsageError("curve-trace: --pmax is capped at 1e7");
            if (!measure_out.empty() && bins == 0) throw UsageError("curve-trace: --measure-out needs --bins");
            detail::Sink sink(cfg.output_path, out);

            TraceCache cache(curve, cache_path);
            std::vector<u64> good;
            for (u64 p : sieve_range(std::max<u64>(pmin, 2), pmax + 1, threads).primes)
                if (is_good_prime(curve, p)) good.push_back(p);
            std::vector<TraceRecord> recs(good.size());
            std::vector<char> cached(good.size(), 0);
            for (std::size_t i = 0; i < good.size(); ++i)
                if (const auto* r = cache.find(good[i])) {
                    recs[i] = *r;
                    cached[i] = 1;
                }
            parallel_for(good.size(), threads, [&](std::size_t i) {
                if (!cached[i]) recs[i] = trace(curve, good[i]);
            });
            std::size_t misses = 0, violations = 0;
            for (std::size_t i = 0; i < good.size(); ++i) {
                if (!cached[i]) {
                    ++misses;
                    cache.insert(recs[i]);
                }
                if (!within_hasse(curve, recs[i])) ++violations;
            }
            cache.flush();
            if (misses > 0 && !cache_path.empty())
                err << "hecke: trace cache " << cache_path << ": " << misses << " records computed\n";

            if (bins > 0) {
                if (curve.g < 1) throw CurveError("curve-trace: empirical measure needs genus >= 1");
                std::vector<double> samples;
                for (const auto& r : recs) samples.push_back(std::clamp(r.normalized, -1.0, 1.0));
                const auto m = Measure::from_samples(samples, bins);
                if (!measure_out.empty()) {
                    std::ofstream mo(measure_out, std::ios::trunc);
                    if (!mo) throw std::runtime_error("cannot open " + measure_out);
                    m.write_csv(mo);
                }
            }

            if (cfg.format == Format::json) {
                nlohmann::json rows = nlohmann::json::array();
                for (const auto& r : recs)
                    rows.push_back({{"p", r.p}, {"nd", r.nd}, {"affine_count", r.affine_count},
                                    {"trace", r.trace}, {"normalized", r.normalized}});
                detail::emit_json(*sink, {{"curve", curve.key()}, {"d", curve.d}, {"M", curve.M}, {"g", curve.g},
                                          {"count", recs.size()}, {"hasse_violations", violations},
                                          {"records", rows}});
            } else if (cfg.format == Format::csv) {
                *sink << "p,nd,affine_count,trace,normalized\n";
                for (const auto& r : recs)
                    *sink << r.p << ',' << r.nd << ',' << r.affine_count << ',' << r.trace << ','
                          << json_number(r.normalized) << '\n';
            } else {
                *sink << "curve " << curve.key() << ": d=" << curve.d << " M=" << curve.M << " g=" << curve.g
                      << (curve.g == 0 ? " (genus 0)" : "") << '\n'
                      << recs.size() << " primes p = 1 mod " << curve.M << " in [" << pmin << ", " << pmax
                      << "], Hasse violations: " << violations << '\n';
            }
            return 0;
        }

        if (*equidist) {
            pick(equidist, Format::json);
            const u64 x = parse_count(x_text, "x");
            const double eps = parse_real(eps_text, "eps");
            if (x < 5) throw UsageError("equidist: --x must be at least 5");
            if (set_kind == "peps" && !(eps > 0.0 && eps <= 1.0)) throw UsageError("equidist: --eps must lie in (0, 1]");
            std::optional<Measure> measure;
            if (measure_kind == "arcsine") measure = Measure::arcsine();
            else if (measure_kind == "cm_mixture") measure = Measure::cm_mixture();
            else {
                if (measure_file.empty()) throw UsageError("equidist: --measure empirical needs --measure-file");
                std::ifstream mf(measure_file);
                if (!mf) throw UsageError("equidist: cannot open " + measure_file);
                measure = Measure::read_csv(mf);
            }
            std::optional<CurveSpec> curve;
            if (set_kind == "curve") {
                if (curve_text.empty()) throw UsageError("equidist: --set curve needs --curve");
                curve = parse_curve_flag(curve_text);
                if (curve->g < 1) throw UsageError("equidist: curve genus must be positive");
            }
            detail::Sink sink(cfg.output_path, out);

            const auto primes = primes_up_to(x, threads);
            std::vector<double> samples;
            double ks = 0.0;
            if (set_kind == "curve") {
                TraceCache cache(*curve, cache_path);
                std::vector<u64> good;
                for (u64 p : primes)
                    if (is_good_prime(*curve, p)) good.push_back(p);
                std::vector<TraceRecord> recs(good.size());
                parallel_for(good.size(), threads, [&](std::size_t i) {
                    const auto* r = cache.find(good[i]);
                    recs[i] = r ? *r : trace(*curve, good[i]);
                });
                for (const auto& r : recs) {
                    cache.insert(r);
                    samples.push_back(std::clamp(r.normalized, -1.0, 1.0));
                }
                cache.flush();
                ks = ks_distance(EmpiricalDist(samples), *measure);
            } else {
                std::vector<std::optional<SplitPrime>> splits(primes.size());
                parallel_for(primes.size(), threads, [&](std::size_t i) { splits[i] = canonical_split(primes[i]); });
                for (const auto& s : splits)
                    if (s && (set_kind == "split" || within_eps(*s, eps))) samples.push_back(s->ratio);
                if (samples.empty()) throw std::domain_error("equidist: no primes in the requested set");
                const EmpiricalDist dist(samples);
                ks = set_kind == "split" ? ks_distance(dist, *measure)
                                         : ks_distance_conditioned(dist, *measure, -eps, eps);
            }
            nlohmann::json j = {{"n", samples.size()}, {"ks", ks}, {"measure_kind", to_string(measure->kind())},
                                {"set", set_kind}, {"x", x}};
            if (set_kind == "peps") j["conditioned_on"] = {-eps, eps};
            if (cfg.format == Format::json) detail::emit_json(*sink, j);
            else if (cfg.format == Format::csv)
                *sink << "n,ks,measure_kind\n" << samples.size() << ',' << json_number(ks) << ','
                      << to_string(measure->kind()) << '\n';
            else
                *sink << "KS(" << set_kind << ", " << to_string(measure->kind()) << ") over " << samples.size()
                      << " samples = " << fixed(ks, 8) << '\n';
            return 0;
        }

        if (*bv) {
            pick(bv, Format::csv);
            const u64 x = parse_count(x_text, "x");
            const u64 Q = parse_count(Q_text, "Q");
            const u64 grid_points = parse_count(grid_text, "grid");
            const double eps = parse_real(eps_text, "eps");
            if (x < 2 || Q < 1 || Q > x) throw UsageError("bv-check: need 1 <= Q <= x");
            if (grid_points < 1) throw UsageError("bv-check: --grid must be positive");
            if (bv_set == "peps" && !(eps > 0.0 && eps <= 1.0)) throw UsageError("bv-check: --eps must lie in (0, 1]");
            detail::Sink sink(cfg.output_path, out);

            const auto primes = primes_up_to(x, threads);
            BVSetSpec spec;
            if (bv_set == "all") {
                spec.members = primes;
                spec.density = 1.0;
                spec.d_E = 1;
            } else {
                spec.members = PEpsSet(eps).members(2, x, threads);
                spec.density = density_P_eps(eps);
                spec.d_E = 4;
            }
            const auto table = bv_table(spec, primes, Q, geometric_grid(x, grid_points), threads);
            if (cfg.format == Format::json) detail::emit_json(*sink, bv_json(table));
            else if (cfg.format == Format::csv) write_bv_csv(*sink, table);
            else {
                write_bv_csv(*sink, table);
                *sink << "aggregate=" << json_number(table.aggregate)
                      << " aggregate_normalized=" << json_number(table.aggregate_normalized) << '\n';
            }
            return 0;
        }

        if (*tuple) {
            pick(tuple, Format::text);
            if (k_text.empty() && check_text.empty()) throw UsageError("tuple: give --k or --check");
            detail::Sink sink(cfg.output_path, out);
            AdmissibleTuple t;
            std::optional<i64> baseline;
            if (!k_text.empty()) {
                const u64 k = parse_count(k_text, "k");
                if (k < 1 || k > 10000) throw UsageError("tuple: --k must lie in [1, 10^4]");
                t = narrow_tuple(k);
                baseline = primes_past_k_tuple(k).back();
            } else {
                t = make_tuple(parse_tuple(check_text));
            }
            if (cfg.format == Format::json) {
                nlohmann::json j = {{"offsets", t.offsets}, {"k", t.k()}, {"diameter", t.diameter()},
                                    {"admissible", t.admissible()},
                                    {"witness", t.witness ? nlohmann::json(*t.witness) : nlohmann::json(nullptr)}};
                if (baseline) j["baseline_diameter"] = *baseline;
                detail::emit_json(*sink, j);
            } else if (cfg.format == Format::csv) {
                *sink << format_tuple(t.offsets) << '\n';
            } else {
                *sink << format_tuple(t.offsets) << '\n'
                      << "k=" << t.k() << " diameter=" << t.diameter() << ' '
                      << (t.admissible() ? std::string("admissible")
                                         : "inadmissible witness=" + std::to_string(*t.witness))
                      << '\n';
                if (baseline) *sink << "baseline diameter=" << *baseline << '\n';
            }
            return 0;
        }

        if (*sieve) {
            pick(sieve, Format::json);
            const u64 k = parse_count(k_text, "k");
            const u64 degree = parse_count(degree_text, "degree");
            if (k < 2 || k > 200) throw UsageError("sieve-opt: --k must lie in [2, 200]");
            if (degree > static_cast<u64>(kMaxSieveDegree)) throw UsageError("sieve-opt: --degree must be at most 11");
            std::vector<double> thetas;
            std::stringstream ts(theta_text);
            for (std::string item; std::getline(ts, item, ',');) {
                const double th = parse_real(item, "theta");
                if (!(th > 0.0 && th < 1.0)) throw UsageError("sieve-opt: each theta must lie in (0, 1)");
                thetas.push_back(th);
            }
            detail::Sink sink(cfg.output_path, out);
            const auto r = optimize_Mk(static_cast<int>(k), static_cast<int>(degree));
            nlohmann::json table = nlohmann::json::array();
            for (double th : thetas) table.push_back({{"theta", th}, {"m", dhl_m(r.Mk_lower, th)}});
            if (cfg.format == Format::json) {
                detail::emit_json(*sink, {{"k", r.k}, {"degree", r.degree}, {"basis_size", r.basis_size},
                                          {"Mk_lower", r.Mk_lower}, {"m_at_theta", table}, {"lambda", r.lambda},
                                          {"iterations", r.iterations}, {"coefficients", r.coefficients}});
            } else if (cfg.format == Format::csv) {
                *sink << "theta,m\n";
                for (double th : thetas) *sink << json_number(th) << ',' << dhl_m(r.Mk_lower, th) << '\n';
            } else {
                *sink << "M_" << r.k << " >= " << fixed(r.Mk_lower, 10) << " (degree " << r.degree << ", "
                      << r.basis_size << " basis functions, " << r.iterations << " iterations)\n";
                for (double th : thetas) *sink << "theta=" << fixed(th, 6) << " m=" << dhl_m(r.Mk_lower, th) << '\n';
            }
            return 0;
        }

        if (*gap) {
            pick(gap, Format::json);
            const u64 x = parse_count(x_text, "x");
            const double eps = parse_real(eps_text, "eps");
            const u64 limit = parse_count(limit_text, "limit");
            if (x > 100'000'000) throw UsageError("gap-scan: --x is capped at 1e8");
            std::shared_ptr<TraceCache> cache;
            auto set = detail::make_set(gap_set, eps, curve_text, interval_text, cache_path, &cache);
            if (mode == "gaps") {
                if (x < 100) throw UsageError("gap-scan: --mode gaps needs --x >= 100");
                detail::Sink sink(cfg.output_path, out);
                const auto gaps = record_gaps(*set, x, limit, threads);
                if (cache) cache->flush();
                if (cfg.format == Format::json) {
                    nlohmann::json rows = nlohmann::json::array();
                    for (const auto& g : gaps) rows.push_back({{"gap", g.gap}, {"p", g.p}, {"q", g.q}});
                    detail::emit_json(*sink, {{"set_label", set->label()}, {"x", x}, {"gaps", rows}});
                } else {
                    if (cfg.format == Format::csv) *sink << "gap,p,q\n";
                    for (const auto& g : gaps)
                        *sink << g.gap << (cfg.format == Format::csv ? "," : " ") << g.p
                              << (cfg.format == Format::csv ? "," : " ") << g.q << '\n';
                }
                return 0;
            }
            AdmissibleTuple H;
            if (!k_text.empty()) {
                const u64 k = parse_count(k_text, "k");
                if (k < 1 || k > 10000) throw UsageError("gap-scan: --k must lie in [1, 10^4]");
                H = narrow_tuple(k);
            } else if (!tuple_text.empty()) {
                H = make_tuple(parse_tuple(tuple_text));
                if (!H.admissible()) throw UsageError("gap-scan: tuple is not admissible");
            } else {
                throw UsageError("gap-scan: give --tuple or --k");
            }
            if (x < 1) throw UsageError("gap-scan: --x must be positive");
            detail::Sink sink(cfg.output_path, out);
            const auto rep = scan_tuple(*set, H, x, threads);
            if (cache) cache->flush();
            if (!windows_csv.empty()) {
                std::ofstream wc(windows_csv, std::ios::trunc);
                if (!wc) throw std::runtime_error("cannot open " + windows_csv);
                write_windows_csv(wc, rep);
            }
            if (cfg.format == Format::json) detail::emit_json(*sink, scan_json(rep));
            else if (cfg.format == Format::csv) write_windows_csv(*sink, rep);
            else {
                *sink << rep.set_label << ", tuple " << format_tuple(rep.tuple.offsets) << ", n in (" << rep.x
                      << ", " << 2 * rep.x << "]\n";
                for (std::size_t h = 0; h < rep.histogram.size(); ++h)
                    *sink << "  " << h << " hits: " << rep.histogram[h] << '\n';
                *sink << "max hits " << rep.max_hits << " in " << rep.best_window_count << " windows; min gap "
                      << rep.min_gap << '\n';
            }
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        err << "hecke: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "hecke: " << e.what() << '\n';
        return 1;
    }
    err << "hecke: no subcommand\n";
    return 2;
}

}  // namespace hecke::cli
