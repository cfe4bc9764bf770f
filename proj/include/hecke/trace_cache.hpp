#pragma once

// Persistent trace records. File layout:
//
//   # curve a,b,c,alpha,beta
//   p,nd,affine_count,trace
//   ...
//
// one record per line, ascending in p. A cache only loads for the exact curve
// named in its header.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hecke/diagonal_curve.hpp"

namespace hecke {

class CacheError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string cache_header(const CurveSpec& curve) { return "# curve " + curve.key(); }

inline void write_trace_cache(std::ostream& os, const CurveSpec& curve,
                              std::vector<TraceRecord> records) {
    std::sort(records.begin(), records.end(),
              [](const TraceRecord& x, const TraceRecord& y) { return x.p < y.p; });
    os << cache_header(curve) << '\n';
    for (const auto& r : records)
        os << r.p << ',' << r.nd << ',' << r.affine_count << ',' << r.trace << '\n';
}

inline std::vector<TraceRecord> read_trace_cache(std::istream& is, const CurveSpec& curve) {
    std::string line;
    if (!std::getline(is, line)) throw CacheError("trace cache: missing header (line 1)");
    if (line != cache_header(curve))
        throw CacheError("trace cache: header '" + line + "' does not match curve " + curve.key());
    std::vector<TraceRecord> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        u64 p = 0;
        i64 nd_value = 0, affine = 0, tr = 0;
        char c1 = 0, c2 = 0, c3 = 0;
        ls >> p >> c1 >> nd_value >> c2 >> affine >> c3 >> tr;
        std::string rest;
        if (!ls || c1 != ',' || c2 != ',' || c3 != ',' || (ls >> rest))
            throw CacheError("trace cache: malformed line " + std::to_string(lineno));
        auto rec = make_trace_record(curve, p, nd_value, affine);
        if (rec.trace != tr)
            throw CacheError("trace cache: inconsistent trace on line " + std::to_string(lineno));
        if (!out.empty() && out.back().p >= p)
            throw CacheError("trace cache: primes not ascending at line " + std::to_string(lineno));
        out.push_back(rec);
    }
    return out;
}

inline void save_trace_cache(const std::filesystem::path& path, const CurveSpec& curve,
                             const std::vector<TraceRecord>& records) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw CacheError("trace cache: cannot open " + path.string() + " for writing");
    write_trace_cache(os, curve, records);
}

inline std::vector<TraceRecord> load_trace_cache(const std::filesystem::path& path,
                                                 const CurveSpec& curve) {
    std::ifstream is(path);
    if (!is) throw CacheError("trace cache: cannot open " + path.string());
    return read_trace_cache(is, curve);
}

/// In-memory view of a cache file for one curve. Lookups that miss compute the
/// record and count the miss; flush() rewrites the file with everything known.
class TraceCache {
public:
    explicit TraceCache(CurveSpec curve, std::filesystem::path path = {})
        : curve_(std::move(curve)), path_(std::move(path)) {
        if (!path_.empty() && std::filesystem::exists(path_))
            for (const auto& r : load_trace_cache(path_, curve_)) records_.emplace(r.p, r);
    }

    const CurveSpec& curve() const { return curve_; }
    std::size_t size() const { return records_.size(); }
    std::size_t misses() const { return misses_; }

    const TraceRecord* find(u64 p) const {
        const auto it = records_.find(p);
        return it == records_.end() ? nullptr : &it->second;
    }

    void insert(const TraceRecord& r) {
        if (records_.emplace(r.p, r).second) dirty_ = true;
    }

    TraceRecord get(u64 p) {
        if (const auto* r = find(p)) return *r;
        ++misses_;
        auto r = trace(curve_, p);
        insert(r);
        return r;
    }

    std::vector<TraceRecord> records() const {
        std::vector<TraceRecord> out;
        out.reserve(records_.size());
        for (const auto& [p, r] : records_) out.push_back(r);
        return out;
    }

    void flush() {
        if (path_.empty() || !dirty_) return;
        save_trace_cache(path_, curve_, records());
        dirty_ = false;
    }

private:
    CurveSpec curve_;
    std::filesystem::path path_;
    std::map<u64, TraceRecord> records_;
    std::size_t misses_ = 0;
    bool dirty_ = false;
};

}  // namespace hecke
