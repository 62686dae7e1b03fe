#include "retseg/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "retseg/background.hpp"
#include "retseg/color.hpp"
#include "retseg/curvelet.hpp"
#include "retseg/enhance.hpp"
#include "retseg/fovmask.hpp"
#include "retseg/imageio.hpp"
#include "retseg/morphology.hpp"
#include "retseg/resize.hpp"

namespace retseg {

namespace fs = std::filesystem;

struct Pipeline::Impl {
    std::unique_ptr<CurveletTransform> transform;
};

Pipeline::Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)), impl_(std::make_unique<Impl>()) {
    cfg_.validate();
    impl_->transform = std::make_unique<CurveletTransform>(
        curvelet_canvas_size(cfg_.working_width, cfg_.working_height), cfg_.curvelet);
}

Pipeline::~Pipeline() = default;

namespace {

template <typename F>
auto run_stage(const char* stage, const std::string& id, F&& f) {
    try {
        return f();
    } catch (const stage_error&) {
        throw;
    } catch (const std::exception& e) {
        throw stage_error(stage, id, e.what());
    }
}

} // namespace

SegmentationOutput Pipeline::segment(const RgbImage& input, std::optional<FovMask> fov,
                                     const std::string& image_id, bool keep_stages) const {
    const auto t0 = std::chrono::steady_clock::now();
    const int W = cfg_.working_width, H = cfg_.working_height;

    SegmentationOutput out;
    out.native_width = input.width();
    out.native_height = input.height();
    if (keep_stages) out.stages = std::make_shared<StageArtifacts>();

    out.fov_native = run_stage("fov", image_id, [&] {
        if (fov) {
            if (fov->width() != input.width() || fov->height() != input.height())
                throw invalid_argument("fov mask dimensions do not match image");
            return std::move(*fov);
        }
        return estimate_fov_mask(input, cfg_.fov_threshold);
    });

    const RgbImage resized = run_stage("resize", image_id, [&] {
        return resize_image(input, W, H);
    });
    out.fov = run_stage("resize", image_id, [&] {
        FovMask m(resize_nearest(out.fov_native.as_binary(), W, H));
        if (m.count_true() == 0)
            throw degenerate_error("field of view vanished at working resolution");
        return m;
    });

    const RgbImage enhanced = run_stage("enhance_contrast", image_id, [&] {
        return enhance_contrast(resized, cfg_.clahe, cfg_.diffusion);
    });
    const RasterImage weighted = run_stage("weighted_grayscale", image_id, [&] {
        return weighted_grayscale(enhanced);
    });
    const bool want_coeffs = keep_stages && cfg_.dump_coefficients;
    CurveletCoeffs boosted_coeffs;
    const RasterImage edge = run_stage("edge_enhance", image_id, [&] {
        return edge_enhance(weighted, out.fov, cfg_.curvelet, *impl_->transform,
                            want_coeffs ? &boosted_coeffs : nullptr);
    });
    const RasterImage bg = run_stage("estimate_background", image_id, [&] {
        return estimate_background(weighted, cfg_.background);
    });
    const RasterImage suppressed = run_stage("od_suppression", image_id, [&] {
        if (cfg_.od_suppression == OdSuppression::binary)
            return remove_od(edge, threshold_mask(weighted, bg));
        return remove_od_residual(edge, weighted, bg);
    });
    FcmResult fcm_result;
    const BinaryImage clusters = run_stage("classify_pixels", image_id, [&] {
        return classify_pixels(suppressed, out.fov, cfg_.fcm, cfg_.select,
                               keep_stages ? &fcm_result : nullptr);
    });
    out.mask = run_stage("postprocess", image_id, [&] {
        MorphParams mp = cfg_.morph;
        // Area threshold tracks the working resolution (reference: 500x500).
        mp.min_component_area = static_cast<int>(std::lround(
            mp.min_component_area * (static_cast<double>(W) * H) / (500.0 * 500.0)));
        return postprocess(clusters, out.fov, mp);
    });
    out.mask_native = resize_nearest(out.mask, input.width(), input.height());

    if (keep_stages) {
        out.stages->resized = resized;
        out.stages->enhanced = enhanced;
        out.stages->weighted = weighted;
        out.stages->edge = edge;
        out.stages->background = bg;
        out.stages->threshold = threshold_mask(weighted, bg);
        out.stages->suppressed = suppressed;
        out.stages->clusters = clusters;
        out.stages->fcm_objective = fcm_result.objective_trace;
        if (want_coeffs)
            out.stages->coefficients = std::make_shared<CurveletCoeffs>(std::move(boosted_coeffs));
    }

    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

SegmentationOutput Pipeline::segment_file(const std::string& image_path,
                                          const std::string& fov_path,
                                          const std::string& image_id, bool keep_stages) const {
    const RgbImage img = run_stage("load", image_id, [&] { return load_image(image_path); });
    std::optional<FovMask> fov;
    if (!fov_path.empty())
        fov = run_stage("load_fov", image_id, [&] { return load_fov_mask(fov_path); });
    return segment(img, std::move(fov), image_id, keep_stages);
}

SegmentationOutput segment_one(const std::string& image_path, const PipelineConfig& cfg) {
    Pipeline pipe(cfg);
    return pipe.segment_file(image_path, "", fs::path(image_path).stem().string());
}

namespace {

void dump_stages(const StageArtifacts& st, const FovMask& fov, const std::string& dir,
                 const std::string& id) {
    fs::create_directories(dir);
    const std::string base = dir + "/" + id;
    save_png(st.resized, base + "_01_resized.png");
    save_png(st.enhanced, base + "_02_enhanced.png");
    save_png(st.weighted, base + "_03_weighted.png");
    save_png_normalized(st.edge, base + "_04_edge.png");
    save_png(st.background, base + "_05_background.png");
    save_png(st.threshold, base + "_06_threshold.png");
    save_png(st.suppressed, base + "_07_suppressed.png");
    save_png(st.clusters, base + "_08_clusters.png");
    save_png(fov.as_binary(), base + "_00_fov.png");
}

struct WorkerResult {
    bool ok = false;
    bool has_truth = false;
    std::string error;
    ImageEval eval;
    double seconds = 0.0;
};

} // namespace

RunReport run_dataset(const DatasetManifest& manifest, const PipelineConfig& cfg,
                      int threads, bool write_outputs) {
    if (manifest.records.empty())
        throw invalid_argument("run_dataset: empty manifest");
    if (threads < 1) threads = 1;
    cfg.validate();

    const Pipeline pipe(cfg);
    const std::string outdir = cfg.output_dir;
    if (write_outputs) {
        fs::create_directories(outdir + "/masks");
        fs::create_directories(outdir + "/overlays");
    }

    std::vector<WorkerResult> results(manifest.records.size());
    std::atomic<size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= manifest.records.size()) return;
            const DatasetRecord& rec = manifest.records[i];
            WorkerResult& wr = results[i];
            try {
                const RgbImage img = load_image(rec.image_path);
                std::optional<FovMask> fov;
                if (!rec.fov_path.empty()) fov = load_fov_mask(rec.fov_path);
                const bool keep_stages =
                    cfg.debug_stages || cfg.dump_coefficients || cfg.dump_fcm_trace;
                SegmentationOutput out =
                    pipe.segment(img, std::move(fov), rec.image_id, keep_stages);
                wr.seconds = out.seconds;

                if (write_outputs) {
                    save_png(out.mask_native, outdir + "/masks/" + rec.image_id + "_mask.png");
                    if (out.stages && cfg.debug_stages)
                        dump_stages(*out.stages, out.fov, outdir + "/stages", rec.image_id);
                    if (out.stages && cfg.dump_coefficients && out.stages->coefficients)
                        dump_coefficient_maps(*out.stages->coefficients,
                                              outdir + "/coefficients/" + rec.image_id);
                    if (out.stages && cfg.dump_fcm_trace) {
                        fs::create_directories(outdir + "/fcm");
                        std::ofstream trace(outdir + "/fcm/" + rec.image_id + "_objective.csv",
                                            std::ios::binary);
                        trace << "iteration,objective\n";
                        for (size_t k = 0; k < out.stages->fcm_objective.size(); ++k)
                            trace << k << ',' << out.stages->fcm_objective[k] << '\n';
                    }
                }

                if (!rec.truth_path.empty()) {
                    const RasterImage truth_gray = load_gray(rec.truth_path);
                    BinaryImage truth(truth_gray.width(), truth_gray.height());
                    for (size_t k = 0; k < truth.size(); ++k)
                        truth.set(k, truth_gray[k] > 0.5);

                    BinaryImage pred;
                    FovMask fov_eval;
                    if (cfg.eval_resolution == EvalResolution::native) {
                        if (truth.width() != out.native_width ||
                            truth.height() != out.native_height)
                            throw invalid_argument("reference dimensions do not match image");
                        pred = out.mask_native;
                        fov_eval = out.fov_native;
                    } else {
                        pred = out.mask;
                        truth = resize_nearest(truth, cfg.working_width, cfg.working_height);
                        fov_eval = out.fov;
                    }
                    wr.eval.image_id = rec.image_id;
                    wr.eval.counts = confusion(pred, truth, fov_eval);
                    wr.eval.metrics = metrics(wr.eval.counts);
                    wr.has_truth = true;

                    if (write_outputs) {
                        const RasterImage base =
                            cfg.eval_resolution == EvalResolution::native
                                ? weighted_grayscale(img)
                                : weighted_grayscale(resize_image(img, cfg.working_width,
                                                                  cfg.working_height));
                        save_png(overlay(pred, truth, fov_eval, base),
                                 outdir + "/overlays/" + rec.image_id + "_overlay.png");
                    }
                }
                wr.ok = true;
            } catch (const std::exception& e) {
                wr.error = e.what();
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    RunReport report;
    report.images_total = manifest.records.size();
    std::vector<ImageEval> rows;
    for (size_t i = 0; i < results.size(); ++i) {
        const WorkerResult& wr = results[i];
        const std::string& id = manifest.records[i].image_id;
        if (!wr.ok) {
            report.failures.push_back(id + ": " + wr.error);
            continue;
        }
        report.timings.emplace_back(id, wr.seconds);
        if (wr.has_truth) rows.push_back(wr.eval);
    }
    if (!rows.empty()) report.eval = evaluate_set(rows);

    if (write_outputs) {
        fs::create_directories(outdir);
        if (!rows.empty()) {
            std::ofstream csv(outdir + "/report.csv", std::ios::binary);
            csv << report_csv(report.eval);
        }
        std::ofstream log(outdir + "/run.log", std::ios::binary);
        log << "images: " << report.images_total << "\n";
        for (const auto& [id, sec] : report.timings)
            log << id << ": " << sec << " s\n";
        for (const std::string& f : report.failures) log << "FAILED " << f << "\n";
    }
    return report;
}

} // namespace retseg
