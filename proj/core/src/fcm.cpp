#include "retseg/fcm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace retseg {

namespace {

// Linear-interpolated percentile of sorted values with attached weights.
// With unit weights this reduces to the usual (n-1)*q rank interpolation.
double weighted_percentile(const std::vector<double>& sorted_vals,
                           const std::vector<double>& weights, double q) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    const double target = q * (total - 1.0);
    double cum = 0.0;
    for (size_t i = 0; i < sorted_vals.size(); ++i) {
        const double next = cum + weights[i];
        // Sample i occupies rank interval [cum, next); interpolate between the
        // last rank of i and the first rank of i+1.
        if (target < next - 1.0 || i + 1 == sorted_vals.size())
            return sorted_vals[i];
        if (target < next) {
            const double f = target - (next - 1.0);
            return sorted_vals[i] + f * (sorted_vals[i + 1] - sorted_vals[i]);
        }
        cum = next;
    }
    return sorted_vals.back();
}

// splitmix64: tiny deterministic generator for the optional random init.
uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double unit_double(uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

std::vector<double> init_centers(const std::vector<double>& sorted_vals,
                                 const std::vector<double>& weights, const FcmParams& p) {
    std::vector<double> centers(p.num_clusters);
    if (p.init_kind == FcmInit::random) {
        uint64_t state = p.seed;
        const double lo = sorted_vals.front(), hi = sorted_vals.back();
        for (double& c : centers) c = lo + unit_double(state) * (hi - lo);
        std::sort(centers.begin(), centers.end());
        return centers;
    }
    for (int j = 0; j < p.num_clusters; ++j)
        centers[j] = weighted_percentile(sorted_vals, weights,
                                         static_cast<double>(j + 1) / (p.num_clusters + 1));
    return centers;
}

FcmResult run_fcm(const std::vector<double>& vals, const std::vector<double>& wts,
                  const FcmParams& p) {
    const int C = p.num_clusters;
    const size_t n = vals.size();
    const double expo = 2.0 / (p.fuzzifier - 1.0);

    FcmResult res;
    res.centers = init_centers(vals, wts, p);
    res.memberships.assign(n * C, 0.0);

    std::vector<double> prev_u(n * C, 0.0);
    std::vector<double> dist(C), num(C), den(C);

    for (int iter = 0; iter < p.max_iters; ++iter) {
        std::swap(prev_u, res.memberships);

        // Membership update.
        for (size_t i = 0; i < n; ++i) {
            double* u = &res.memberships[i * C];
            int exact = -1;
            for (int j = 0; j < C; ++j) {
                dist[j] = std::abs(vals[i] - res.centers[j]);
                if (dist[j] == 0.0 && exact < 0) exact = j;
            }
            if (exact >= 0) {
                for (int j = 0; j < C; ++j) u[j] = 0.0;
                u[exact] = 1.0;
                continue;
            }
            for (int j = 0; j < C; ++j) {
                double s = 0.0;
                for (int k = 0; k < C; ++k)
                    s += std::pow(dist[j] / dist[k], expo);
                u[j] = 1.0 / s;
            }
        }

        // Center update with fuzzified weights.
        std::fill(num.begin(), num.end(), 0.0);
        std::fill(den.begin(), den.end(), 0.0);
        for (size_t i = 0; i < n; ++i) {
            const double* u = &res.memberships[i * C];
            for (int j = 0; j < C; ++j) {
                const double um = wts[i] * std::pow(u[j], p.fuzzifier);
                num[j] += um * vals[i];
                den[j] += um;
            }
        }
        for (int j = 0; j < C; ++j)
            if (den[j] > 0.0) res.centers[j] = num[j] / den[j];

        // Objective after the full alternating step; non-increasing.
        double q = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double* u = &res.memberships[i * C];
            for (int j = 0; j < C; ++j) {
                const double d = vals[i] - res.centers[j];
                q += wts[i] * std::pow(u[j], p.fuzzifier) * d * d;
            }
        }
        res.objective_trace.push_back(q);
        res.iterations_run = iter + 1;

        double max_du = 0.0;
        for (size_t k = 0; k < n * static_cast<size_t>(C); ++k)
            max_du = std::max(max_du, std::abs(res.memberships[k] - prev_u[k]));
        if (max_du < p.tol) break;
    }
    return res;
}

} // namespace

FcmResult fcm_cluster_weighted(std::span<const double> values,
                               std::span<const double> weights, const FcmParams& p) {
    p.validate();
    if (values.size() != weights.size())
        throw invalid_argument("fcm: values/weights size mismatch");
    if (values.empty()) throw invalid_argument("fcm: no samples");
    for (double v : values)
        if (!std::isfinite(v)) throw invalid_argument("fcm: samples must be finite");

    // Sort by value for deterministic accumulation; remember original slots.
    std::vector<size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return values[a] < values[b]; });
    std::vector<double> vals(values.size()), wts(values.size());
    for (size_t i = 0; i < order.size(); ++i) {
        vals[i] = values[order[i]];
        wts[i] = weights[order[i]];
    }

    if (static_cast<size_t>(p.num_clusters) >
        static_cast<size_t>(std::accumulate(wts.begin(), wts.end(), 0.0)))
        throw invalid_argument("fcm: fewer samples than clusters");
    if (vals.front() == vals.back() && p.num_clusters > 1)
        throw degenerate_error("fcm: all samples identical");

    FcmResult sorted_res = run_fcm(vals, wts, p);

    // Undo the sort so membership rows line up with the caller's samples.
    FcmResult res;
    res.centers = std::move(sorted_res.centers);
    res.objective_trace = std::move(sorted_res.objective_trace);
    res.iterations_run = sorted_res.iterations_run;
    res.memberships.assign(values.size() * p.num_clusters, 0.0);
    for (size_t i = 0; i < order.size(); ++i)
        for (int j = 0; j < p.num_clusters; ++j)
            res.memberships[order[i] * p.num_clusters + j] =
                sorted_res.memberships[i * p.num_clusters + j];
    return res;
}

FcmResult fcm_cluster(std::span<const double> samples, const FcmParams& p) {
    p.validate();
    if (samples.size() < static_cast<size_t>(p.num_clusters))
        throw invalid_argument("fcm: fewer samples than clusters");
    std::vector<double> unit(samples.size(), 1.0);
    return fcm_cluster_weighted(samples, unit, p);
}

BinaryImage classify_pixels(const RasterImage& img, const FovMask& mask,
                            const FcmParams& p, const ClusterSelect& select,
                            FcmResult* result_out) {
    p.validate();
    if (img.width() != mask.width() || img.height() != mask.height())
        throw invalid_argument("classify_pixels: mask dimensions do not match image");
    if (select.rank < 0 || select.rank >= p.num_clusters)
        throw invalid_argument("classify_pixels: cluster rank out of range");

    // 256-level weighted histogram; pixels sharing a quantized level share a
    // membership row, so this matches per-pixel clustering on quantized input.
    std::array<double, 256> hist{};
    std::vector<int> level(img.size(), -1);
    size_t inside = 0;
    for (size_t i = 0; i < img.size(); ++i) {
        if (!mask.get(i)) continue;
        const int q = std::clamp(static_cast<int>(img[i] * 255.0 + 0.5), 0, 255);
        level[i] = q;
        hist[q] += 1.0;
        ++inside;
    }
    if (inside == 0)
        throw degenerate_error("classify_pixels: field of view contains no pixels");

    std::vector<double> vals, wts;
    std::array<int, 256> bin_slot{};
    bin_slot.fill(-1);
    for (int q = 0; q < 256; ++q) {
        if (hist[q] > 0.0) {
            bin_slot[q] = static_cast<int>(vals.size());
            vals.push_back(q / 255.0);
            wts.push_back(hist[q]);
        }
    }
    FcmResult res = fcm_cluster_weighted(vals, wts, p);

    // Hard-assign each occupied level (argmax membership, lowest index wins
    // ties), then pick the cluster whose center has the requested rank.
    std::vector<int> rank_of(p.num_clusters);
    std::iota(rank_of.begin(), rank_of.end(), 0);
    std::stable_sort(rank_of.begin(), rank_of.end(), [&](int a, int b) {
        return res.centers[a] < res.centers[b];
    });
    const int vessel_cluster = rank_of[select.rank];

    std::vector<uint8_t> is_vessel_level(vals.size(), 0);
    for (size_t s = 0; s < vals.size(); ++s) {
        int best = 0;
        double best_u = res.membership(s, 0);
        for (int j = 1; j < p.num_clusters; ++j) {
            const double u = res.membership(s, j);
            if (u > best_u) { best_u = u; best = j; }
        }
        is_vessel_level[s] = best == vessel_cluster;
    }

    BinaryImage out(img.width(), img.height());
    for (size_t i = 0; i < img.size(); ++i)
        if (level[i] >= 0 && is_vessel_level[bin_slot[level[i]]]) out.set(i, true);
    if (result_out) *result_out = std::move(res);
    return out;
}

} // namespace retseg
