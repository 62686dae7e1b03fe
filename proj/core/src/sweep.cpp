#include "retseg/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace retseg {

SweepResult sweep(const DatasetManifest& manifest, const PipelineConfig& base,
                  const SweepGrid& grid, int threads) {
    if (grid.kappas.empty() || grid.ranks.empty() || grid.min_areas.empty())
        throw invalid_argument("sweep: empty parameter grid");
    if (manifest.records.empty())
        throw invalid_argument("sweep: empty manifest");
    for (const DatasetRecord& r : manifest.records)
        if (r.truth_path.empty())
            throw invalid_argument("sweep: record '" + r.image_id +
                                   "' has no reference segmentation");

    SweepResult result;
    for (double kappa : grid.kappas) {
        for (int rank : grid.ranks) {
            for (int min_area : grid.min_areas) {
                PipelineConfig cfg = base;
                cfg.curvelet.kappa_boost = kappa;
                cfg.select.rank = rank;
                cfg.morph.min_component_area = min_area;
                cfg.validate();
                RunReport report = run_dataset(manifest, cfg, threads, /*write_outputs=*/false);
                SweepRow row;
                row.kappa = kappa;
                row.rank = rank;
                row.min_area = min_area;
                row.mean = report.eval.mean;
                row.images_failed = report.failures.size();
                result.rows.push_back(row);
            }
        }
    }

    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [](const SweepRow& a, const SweepRow& b) {
                         const double aa = std::isnan(a.mean.accuracy) ? -1.0 : a.mean.accuracy;
                         const double bb = std::isnan(b.mean.accuracy) ? -1.0 : b.mean.accuracy;
                         return aa > bb;
                     });

    result.best_config = base;
    const SweepRow& best = result.rows.front();
    result.best_config.curvelet.kappa_boost = best.kappa;
    result.best_config.select.rank = best.rank;
    result.best_config.morph.min_component_area = best.min_area;
    return result;
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed;
    os << "kappa,rank,min_area,sensitivity,specificity,accuracy,failed\n";
    for (const SweepRow& r : result.rows) {
        os << r.kappa << ',' << r.rank << ',' << r.min_area << ',';
        if (!std::isnan(r.mean.sensitivity)) os << r.mean.sensitivity;
        os << ',';
        if (!std::isnan(r.mean.specificity)) os << r.mean.specificity;
        os << ',';
        if (!std::isnan(r.mean.accuracy)) os << r.mean.accuracy;
        os << ',' << r.images_failed << '\n';
    }
    return os.str();
}

} // namespace retseg
