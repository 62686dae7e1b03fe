#pragma once

#include <vector>

#include "retseg/pipeline.hpp"

namespace retseg {

/// Grid of the parameters the method leaves open: detail amplification,
/// vessel cluster rank, and the minimum surviving component area.
struct SweepGrid {
    std::vector<double> kappas = {2.0, 5.0, 10.0, 20.0};
    std::vector<int> ranks = {0, 1, 2};
    std::vector<int> min_areas = {30};
};

struct SweepRow {
    double kappa = 0.0;
    int rank = 0;
    int min_area = 0;
    Metrics mean;
    size_t images_failed = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;   // ranked by mean accuracy, best first
    PipelineConfig best_config;
};

/// Evaluate every grid point on the manifest (which must carry references)
/// and rank by mean accuracy. NaN accuracies rank last; ties keep grid order.
SweepResult sweep(const DatasetManifest& manifest, const PipelineConfig& base,
                  const SweepGrid& grid, int threads);

std::string sweep_csv(const SweepResult& result);

} // namespace retseg
