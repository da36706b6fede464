#include "episafe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "episafe/rng.hpp"

namespace episafe {

std::vector<double> average_ranks(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * (i + j) + 1.0;  // mean of 1-based positions i+1..j+1
        for (int t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const int n = static_cast<int>(a.size());
    double ma = 0.0, mb = 0.0;
    for (int i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double num = 0.0, da = 0.0, db = 0.0;
    for (int i = 0; i < n; ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        da += (a[i] - ma) * (a[i] - ma);
        db += (b[i] - mb) * (b[i] - mb);
    }
    if (da <= 0.0 || db <= 0.0) return 0.0;
    return num / std::sqrt(da * db);
}

}  // namespace

double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("mismatched sample sizes");
    if (xs.size() < 2) throw std::invalid_argument("need at least two samples");
    return pearson(average_ranks(xs), average_ranks(ys));
}

double spearman_pvalue_leq(const std::vector<double>& xs, const std::vector<double>& ys,
                           std::uint64_t seed, long samples) {
    const int n = static_cast<int>(xs.size());
    if (static_cast<int>(ys.size()) != n) throw std::invalid_argument("mismatched sample sizes");
    if (n < 2) throw std::invalid_argument("need at least two samples");

    const std::vector<double> rx = average_ranks(xs);
    const std::vector<double> ry = average_ranks(ys);
    const double observed = pearson(rx, ry);
    const double cutoff = observed + 1e-12;

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> shuffled(n);

    if (n <= 10) {
        long hits = 0, total = 0;
        do {
            for (int i = 0; i < n; ++i) shuffled[i] = ry[perm[i]];
            if (pearson(rx, shuffled) <= cutoff) ++hits;
            ++total;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return static_cast<double>(hits) / static_cast<double>(total);
    }

    CounterRng rng(seed);
    long hits = 0;
    for (long s = 0; s < samples; ++s) {
        rng.shuffle(perm);
        for (int i = 0; i < n; ++i) shuffled[i] = ry[perm[i]];
        if (pearson(rx, shuffled) <= cutoff) ++hits;
    }
    return static_cast<double>(hits + 1) / static_cast<double>(samples + 1);
}

}  // namespace episafe
