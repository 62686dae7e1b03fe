#pragma once

#include <memory>
#include <optional>
#include <string>

#include "retseg/config.hpp"
#include "retseg/curvelet.hpp"
#include "retseg/dataset.hpp"
#include "retseg/image.hpp"
#include "retseg/metrics.hpp"

namespace retseg {

/// Every intermediate of one segmentation, for inspection dumps.
struct StageArtifacts {
    RgbImage resized;
    RgbImage enhanced;
    RasterImage weighted;
    RasterImage edge;
    RasterImage background;
    BinaryImage threshold;
    RasterImage suppressed;
    BinaryImage clusters;
    std::vector<double> fcm_objective;
    std::shared_ptr<CurveletCoeffs> coefficients;  // only with dump_coefficients
};

struct SegmentationOutput {
    BinaryImage mask;         // working resolution, inside-FOV vessels
    FovMask fov;              // working resolution
    BinaryImage mask_native;  // nearest-neighbor upsample to input resolution
    FovMask fov_native;
    int native_width = 0;
    int native_height = 0;
    double seconds = 0.0;
    std::shared_ptr<StageArtifacts> stages;  // set when keep_stages
};

/// Runs the full chain resize -> contrast enhancement -> weighted grayscale ->
/// curvelet edge boost -> bright-structure suppression -> fuzzy clustering ->
/// morphological cleanup. Holds the precomputed curvelet transform, so one
/// Pipeline instance serves many images (concurrently; it is immutable).
class Pipeline {
public:
    explicit Pipeline(PipelineConfig cfg);
    ~Pipeline();
    Pipeline(const Pipeline&) = delete;
    Pipeline& operator=(const Pipeline&) = delete;

    const PipelineConfig& config() const noexcept { return cfg_; }

    /// fov may be empty, in which case it is estimated from the image.
    /// Stage failures surface as stage_error naming the stage and image id.
    SegmentationOutput segment(const RgbImage& input, std::optional<FovMask> fov,
                               const std::string& image_id, bool keep_stages = false) const;

    SegmentationOutput segment_file(const std::string& image_path, const std::string& fov_path,
                                    const std::string& image_id, bool keep_stages = false) const;

private:
    PipelineConfig cfg_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper around Pipeline::segment_file.
SegmentationOutput segment_one(const std::string& image_path, const PipelineConfig& cfg);

struct RunReport {
    SetReport eval;                          // rows for images with references
    std::vector<std::string> failures;       // "id: message"
    std::vector<std::pair<std::string, double>> timings;  // id, seconds
    size_t images_total = 0;
};

/// Segment every manifest record (parallel across images), evaluate where a
/// reference exists, and optionally write masks, overlays, report.csv and a
/// run log under cfg.output_dir. Per-image failures are recorded and the run
/// continues. Results do not depend on the thread count.
RunReport run_dataset(const DatasetManifest& manifest, const PipelineConfig& cfg,
                      int threads, bool write_outputs = true);

} // namespace retseg
