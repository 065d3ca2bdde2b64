#pragma once

// Test-only reference implementations. Each one recomputes a library result along an
// independent route (brute force, enumeration, naive search) and must not call into the
// code it checks.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace oracle {

struct Stats {
    double max, min, mean, std, var;
};

// Direct definitions in long double.
inline Stats brute_stats(const std::vector<double>& xs) {
    long double mx = -std::numeric_limits<long double>::infinity();
    long double mn = std::numeric_limits<long double>::infinity();
    long double sum = 0;
    for (double x : xs) {
        mx = std::max<long double>(mx, x);
        mn = std::min<long double>(mn, x);
        sum += x;
    }
    const long double mean = sum / xs.size();
    long double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const long double var = ss / xs.size();
    return {static_cast<double>(mx), static_cast<double>(mn), static_cast<double>(mean),
            static_cast<double>(std::sqrt(var)), static_cast<double>(var)};
}

// Break label by checking every second of the minute against every closed window.
// Times are seconds since midnight.
inline bool break_by_enumeration(long minute_start, const std::vector<long>& block_starts, long class_seconds,
                                 long tolerance) {
    for (std::size_t i = 0; i + 1 < block_starts.size(); ++i) {
        const long lo = block_starts[i] + class_seconds - tolerance;
        const long hi = block_starts[i + 1] + tolerance;
        for (long s = minute_start; s < minute_start + 60; ++s)
            if (lo <= s && s <= hi) return true;
    }
    return false;
}

inline bool end_of_class_by_enumeration(long minute_start, const std::vector<long>& block_starts, long class_seconds,
                                        long halfwidth) {
    for (long b : block_starts) {
        const long end = b + class_seconds;
        for (long s = end - halfwidth; s <= end + halfwidth; ++s)
            if (s == minute_start) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------------------
// Reference CART: exhaustive threshold scan with full recounts at every candidate.

struct RefNode {
    int feature = -1;
    double threshold = 0;
    int left = -1, right = -1;
    int label = 0;
};

inline std::vector<RefNode> reference_tree(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                                           const std::vector<double>& w, const std::vector<std::size_t>& rows,
                                           int max_splits) {
    std::vector<RefNode> nodes(1);
    std::vector<std::pair<int, std::vector<std::size_t>>> queue{{0, rows}};
    int splits = 0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
        auto id = queue[q].first;
        auto members = queue[q].second;
        double pos = 0, neg = 0;
        for (auto r : members) (y[r] ? pos : neg) += w[r];
        nodes[id].label = pos > neg ? 1 : 0;
        if (pos <= 0 || neg <= 0 || splits >= max_splits || members.size() < 2) continue;
        auto gini = [](double p, double t) { return t <= 0 ? 0.0 : t * 2.0 * (p / t) * (1.0 - p / t); };
        bool found = false;
        int best_f = -1;
        double best_t = 0, best_imp = 0;
        const std::size_t d = x.empty() ? 0 : x[0].size();
        for (std::size_t f = 0; f < d; ++f) {
            std::vector<double> vals;
            for (auto r : members) vals.push_back(x[r][f]);
            std::sort(vals.begin(), vals.end());
            vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                double t = vals[i] + (vals[i + 1] - vals[i]) / 2;
                if (!(t >= vals[i] && t < vals[i + 1])) t = vals[i];
                double lp = 0, lt = 0, rp = 0, rt = 0;
                for (auto r : members) {
                    if (x[r][f] <= t) {
                        lt += w[r];
                        if (y[r]) lp += w[r];
                    } else {
                        rt += w[r];
                        if (y[r]) rp += w[r];
                    }
                }
                const double imp = gini(lp, lt) + gini(rp, rt);
                if (!found || imp < best_imp - 1e-12 * std::max(1.0, std::abs(best_imp))) {
                    found = true;
                    best_f = static_cast<int>(f);
                    best_t = t;
                    best_imp = imp;
                }
            }
        }
        if (!found) continue;
        std::vector<std::size_t> l, r;
        for (auto m : members) (x[m][best_f] <= best_t ? l : r).push_back(m);
        const int li = static_cast<int>(nodes.size());
        nodes.resize(nodes.size() + 2);
        nodes[id].feature = best_f;
        nodes[id].threshold = best_t;
        nodes[id].left = li;
        nodes[id].right = li + 1;
        ++splits;
        queue.push_back({li, l});
        queue.push_back({li + 1, r});
    }
    return nodes;
}

inline int reference_tree_predict(const std::vector<RefNode>& nodes, const std::vector<double>& q) {
    int i = 0;
    while (nodes[i].feature >= 0) i = q[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    return nodes[i].label;
}

// Walks a serialized tree ({"nodes": [...]}) without going through the library's types.
inline int walk_serialized_tree(const nlohmann::json& state, const std::vector<double>& q) {
    const auto& nodes = state.at("nodes");
    std::size_t i = 0;
    while (!nodes[i].contains("leaf")) {
        const auto& n = nodes[i];
        i = q[n["feature"].get<std::size_t>()] <= n["threshold"].get<double>() ? n["left"].get<std::size_t>()
                                                                              : n["right"].get<std::size_t>();
    }
    return nodes[i]["leaf"] == "P" ? 1 : 0;
}

// ---------------------------------------------------------------------------------------
// kNN by full sort of all distances.

enum class Dist { Euclid, Cosine, Mink3 };

inline double dist(Dist m, const std::vector<double>& a, const std::vector<double>& b) {
    if (m == Dist::Cosine) {
        long double dot = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            dot += a[i] * b[i];
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        if (na == 0 && nb == 0) return 0;
        if (na == 0 || nb == 0) return 1;
        return static_cast<double>(1 - dot / (std::sqrt(na) * std::sqrt(nb)));
    }
    const double p = m == Dist::Euclid ? 2.0 : 3.0;
    long double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - b[i]), p);
    return static_cast<double>(std::pow(s, 1.0L / p));
}

inline int knn_predict(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                       const std::vector<double>& q, std::size_t k, Dist m, bool weighted) {
    // Cosine neighbours are ranked by the signed squared cosine, an exact rational on integer
    // data, so true ties stay ties whatever rounding the distance itself suffers.
    auto cosine_key = [&](const std::vector<double>& b) -> double {
        long double dot = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            dot += static_cast<long double>(q[i]) * b[i];
            na += static_cast<long double>(q[i]) * q[i];
            nb += static_cast<long double>(b[i]) * b[i];
        }
        if (na == 0 && nb == 0) return -1;
        if (na == 0 || nb == 0) return 0;
        return static_cast<double>(-(dot < 0 ? -1 : 1) * dot * dot / (na * nb));
    };
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < x.size(); ++i) all.emplace_back(m == Dist::Cosine ? cosine_key(x[i]) : dist(m, q, x[i]), i);
    std::sort(all.begin(), all.end());
    k = std::min(k, x.size());
    double pos = 0, neg = 0;
    bool exact = false;
    for (std::size_t j = 0; j < k; ++j) exact = exact || all[j].first == 0;
    for (std::size_t j = 0; j < k; ++j) {
        double wt = 1;
        if (weighted) {
            if (exact) wt = all[j].first == 0 ? 1 : 0;
            else wt = 1 / (all[j].first * all[j].first);
        }
        (y[all[j].second] ? pos : neg) += wt;
    }
    return pos > neg ? 1 : 0;
}

// ---------------------------------------------------------------------------------------
// Cyclic Jacobi eigenvalues of a symmetric matrix, returned in descending order.

inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a, int sweeps = 100) {
    const std::size_t n = a.size();
    for (int s = 0; s < sweeps; ++s) {
        double off = 0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                const double t = (theta >= 0 ? 1 : -1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - sn * akq;
                    a[k][q] = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - sn * aqk;
                    a[q][k] = sn * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.rbegin(), ev.rend());
    return ev;
}

// Central differences of f at x, step h.
template <typename F>
std::vector<double> central_gradient(F f, std::vector<double> x, double h) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = x[i];
        x[i] = orig + h;
        const double up = f(x);
        x[i] = orig - h;
        const double down = f(x);
        x[i] = orig;
        g[i] = (up - down) / (2 * h);
    }
    return g;
}

inline double max_relative_error(const std::vector<double>& a, const std::vector<double>& b, double floor = 1e-7) {
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]) / std::max({std::abs(a[i]), std::abs(b[i]), floor}));
    return worst;
}

// P(|X/n - 1/2| > dev) for X ~ Binomial(n, 1/2), summed exactly in log space.
inline double binomial_two_sided_tail(int n, double dev) {
    double total = 0;
    for (int k = 0; k <= n; ++k) {
        if (std::abs(static_cast<double>(k) / n - 0.5) <= dev) continue;
        total += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0));
    }
    return total;
}

}  // namespace oracle
