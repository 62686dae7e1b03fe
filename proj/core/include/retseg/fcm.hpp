#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "retseg/image.hpp"

namespace retseg {

enum class FcmInit { quantile, random };

struct FcmParams {
    int num_clusters = 3;
    double fuzzifier = 2.0;
    int max_iters = 100;
    double tol = 1e-5;
    uint64_t seed = 0;
    FcmInit init_kind = FcmInit::quantile;

    void validate() const {
        if (num_clusters < 1) throw invalid_argument("fcm: need at least one cluster");
        if (!(fuzzifier > 1.0)) throw invalid_argument("fcm: fuzzifier must be > 1");
        if (!(tol > 0.0)) throw invalid_argument("fcm: tol must be > 0");
        if (max_iters < 1) throw invalid_argument("fcm: max_iters must be >= 1");
    }
};

struct FcmResult {
    std::vector<double> centers;          // C values, 1-D intensity feature
    std::vector<double> memberships;      // n x C row-major, rows sum to 1
    std::vector<double> objective_trace;  // alternating-minimization objective per iteration
    int iterations_run = 0;

    double membership(size_t sample, int cluster) const {
        return memberships[sample * centers.size() + cluster];
    }
};

/// Fuzzy C-means on 1-D samples. Alternates the standard membership update
/// u_ij = 1 / sum_k (|v_i - c_j| / |v_i - c_k|)^(2/(m-1)) with the fuzzified
/// center update c_j = sum_i u_ij^m v_i / sum_i u_ij^m (the first-order
/// optimality conditions of the objective), stopping when max |du| < tol.
/// A sample sitting exactly on a center takes membership 1 there.
///
/// Deterministic: quantile init plus a fixed (sorted) accumulation order make
/// the result invariant to sample permutation.
FcmResult fcm_cluster(std::span<const double> samples, const FcmParams& p);

/// Weighted variant: sample i occurs weights[i] times. Equivalent to
/// replicating samples, at histogram cost.
FcmResult fcm_cluster_weighted(std::span<const double> values,
                               std::span<const double> weights, const FcmParams& p);

/// Which cluster is "vessel": rank into the ascending-sorted center list
/// (0 = darkest).
struct ClusterSelect {
    int rank = 0;
};

/// Cluster in-FOV intensities (256-level weighted histogram), hard-assign each
/// pixel to its argmax-membership cluster, and return the mask of the cluster
/// selected by rank. Pixels outside the FOV are false. result_out, when given,
/// receives the clustering result (centers, histogram-level memberships,
/// objective trace).
BinaryImage classify_pixels(const RasterImage& img, const FovMask& mask,
                            const FcmParams& p, const ClusterSelect& select,
                            FcmResult* result_out = nullptr);

} // namespace retseg
