#pragma once

#include <cstdint>
#include <string>

#include "retseg/background.hpp"
#include "retseg/clahe.hpp"
#include "retseg/curvelet.hpp"
#include "retseg/diffusion.hpp"
#include "retseg/fcm.hpp"
#include "retseg/morphology.hpp"

namespace retseg {

/// How the bright-structure suppression stage combines the edge image with
/// the background threshold: `binary` subtracts the boolean threshold map,
/// `residual` subtracts the signed negative residual (default; keeps vessels,
/// bright-structure borders and background in three separable intensity
/// bands).
enum class OdSuppression { binary, residual };

/// Where metrics are computed: `native` upsamples the predicted mask
/// (nearest-neighbor) to the reference resolution so ground truth is never
/// resampled; `working` downsamples truth and FOV to the working resolution.
enum class EvalResolution { native, working };

struct PipelineConfig {
    int working_width = 500;
    int working_height = 500;
    double fov_threshold = 0.1;
    OdSuppression od_suppression = OdSuppression::residual;
    EvalResolution eval_resolution = EvalResolution::native;
    uint64_t seed = 0;

    ClaheParams clahe;
    DiffusionParams diffusion;
    CurveletParams curvelet;
    BackgroundParams background;
    FcmParams fcm;
    ClusterSelect select;
    MorphParams morph;

    std::string output_dir = "out";
    bool debug_stages = false;
    bool dump_coefficients = false;
    bool dump_fcm_trace = false;

    void validate() const;
};

std::string config_to_json(const PipelineConfig& cfg);
PipelineConfig config_from_json(const std::string& json_text);

void save_config(const PipelineConfig& cfg, const std::string& path);
PipelineConfig load_config(const std::string& path);

} // namespace retseg
