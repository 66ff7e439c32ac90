#include "divtest/types_enum.hpp"

#include <cmath>
#include <sstream>

namespace divtest {

std::uint64_t count_types(std::int64_t n, int k) {
    if (n < 1 || k < 2) throw DomainError("count_types: need n >= 1 and k >= 2");
    // C(n+k-1, k-1) multiplicatively; the factors of C(a, b) with b = k-1.
    std::uint64_t result = 1;
    std::int64_t b = k - 1;
    for (std::int64_t i = 1; i <= b; ++i) {
        unsigned __int128 next = static_cast<unsigned __int128>(result) *
                                 static_cast<unsigned __int128>(n + i);
        next /= static_cast<unsigned __int128>(i);
        if (next > static_cast<unsigned __int128>(UINT64_MAX)) return UINT64_MAX;
        result = static_cast<std::uint64_t>(next);
    }
    return result;
}

namespace {

void enumerate_rec(std::vector<std::int64_t>& counts, int pos, std::int64_t remaining,
                   const std::function<void(const std::vector<std::int64_t>&)>& fn) {
    int k = static_cast<int>(counts.size());
    if (pos == k - 1) {
        counts[static_cast<std::size_t>(pos)] = remaining;
        fn(counts);
        return;
    }
    for (std::int64_t v = 0; v <= remaining; ++v) {
        counts[static_cast<std::size_t>(pos)] = v;
        enumerate_rec(counts, pos + 1, remaining - v, fn);
    }
}

}  // namespace

void for_each_type(std::int64_t n, int k,
                   const std::function<void(const std::vector<std::int64_t>&)>& fn,
                   std::uint64_t cap) {
    std::uint64_t total = count_types(n, k);
    if (total > cap) {
        std::ostringstream os;
        os << "type enumeration for n=" << n << ", k=" << k << " has " << total
           << " types, beyond the cap " << cap;
        throw SizeLimit(os.str());
    }
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
    enumerate_rec(counts, 0, n, fn);
}

double type_log_prob(const TypeDistribution& t, const Distribution& r) {
    if (t.size() != r.size()) {
        throw DimensionMismatch("type_log_prob: alphabet sizes differ");
    }
    double lp = std::lgamma(static_cast<double>(t.n()) + 1.0);
    for (int i = 0; i < t.size(); ++i) {
        double ci = static_cast<double>(t.count(i));
        lp -= std::lgamma(ci + 1.0);
        if (t.count(i) > 0) lp += ci * std::log(r[i]);
    }
    return lp;
}

}  // namespace divtest
