// Command line front end: segment single images or whole DRIVE-layout
// datasets, generate synthetic phantoms, sweep open parameters, and emit
// evaluation reports.
//
// Exit codes: 0 success, 1 partial per-image failures, 2 invalid invocation.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "retseg/dataset.hpp"
#include "retseg/imageio.hpp"
#include "retseg/phantom.hpp"
#include "retseg/pipeline.hpp"
#include "retseg/sweep.hpp"

namespace fs = std::filesystem;
using namespace retseg;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string input;
    std::string output = "out";
    bool debug_stages = false;
    int threads = 0;
    uint64_t seed = 0;
    bool seed_set = false;
};

PipelineConfig make_config(const CommonOpts& o) {
    PipelineConfig cfg;
    if (!o.config_path.empty()) cfg = load_config(o.config_path);
    if (!o.output.empty()) cfg.output_dir = o.output;
    if (o.debug_stages) cfg.debug_stages = true;
    if (o.seed_set) {
        cfg.seed = o.seed;
        cfg.fcm.seed = o.seed;
    }
    cfg.validate();
    return cfg;
}

int effective_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

// A run directory is DRIVE-like when it has <dir>/<split>/images.
bool looks_like_drive(const std::string& dir, const std::string& split) {
    return fs::is_directory(fs::path(dir) / split / "images");
}

DatasetManifest resolve_manifest(const std::string& input, const std::string& split) {
    if (fs::is_regular_file(input) && fs::path(input).extension() == ".json")
        return load_manifest(input);
    if (looks_like_drive(input, split)) return ingest_drive(input, split);
    if (fs::is_directory(input)) {
        // Plain directory of images: segment-only manifest.
        DatasetManifest m;
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(input))
            if (e.is_regular_file()) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const fs::path& f : files) {
            const std::string ext = f.extension().string();
            if (ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".bmp")
                m.records.push_back({f.stem().string(), f.string(), "", ""});
        }
        if (m.records.empty())
            throw invalid_argument("no decodable images under " + input);
        return m;
    }
    throw invalid_argument("input is neither a manifest .json, a DRIVE-layout root, "
                           "nor an image directory: " + input);
}

void print_report(const RunReport& report) {
    std::cout << "segmented " << report.timings.size() << "/" << report.images_total
              << " images\n";
    if (!report.eval.per_image.empty()) {
        std::cout << "mean over " << report.eval.per_image.size()
                  << " images:  SN " << report.eval.mean.sensitivity
                  << "  SP " << report.eval.mean.specificity
                  << "  Acc " << report.eval.mean.accuracy << "\n";
    }
    for (const std::string& f : report.failures) std::cerr << "FAILED " << f << "\n";
}

int cmd_segment(const CommonOpts& o, const std::string& fov_path) {
    PipelineConfig cfg = make_config(o);
    Pipeline pipe(cfg);
    const std::string id = fs::path(o.input).stem().string();
    SegmentationOutput out = pipe.segment_file(o.input, fov_path, id, cfg.debug_stages);
    fs::create_directories(cfg.output_dir);
    const std::string mask_path = cfg.output_dir + "/" + id + "_mask.png";
    save_png(out.mask_native, mask_path);
    if (out.stages) {
        fs::create_directories(cfg.output_dir + "/stages");
        save_png(out.stages->resized, cfg.output_dir + "/stages/" + id + "_01_resized.png");
        save_png(out.stages->enhanced, cfg.output_dir + "/stages/" + id + "_02_enhanced.png");
        save_png(out.stages->weighted, cfg.output_dir + "/stages/" + id + "_03_weighted.png");
        save_png_normalized(out.stages->edge, cfg.output_dir + "/stages/" + id + "_04_edge.png");
        save_png(out.stages->background, cfg.output_dir + "/stages/" + id + "_05_background.png");
        save_png(out.stages->threshold, cfg.output_dir + "/stages/" + id + "_06_threshold.png");
        save_png(out.stages->suppressed, cfg.output_dir + "/stages/" + id + "_07_suppressed.png");
        save_png(out.stages->clusters, cfg.output_dir + "/stages/" + id + "_08_clusters.png");
    }
    std::cout << mask_path << "  (" << out.seconds << " s)\n";
    return 0;
}

int cmd_run(const CommonOpts& o, const std::string& split) {
    PipelineConfig cfg = make_config(o);
    DatasetManifest manifest = resolve_manifest(o.input, split);
    for (const std::string& w : manifest.warnings) std::cerr << "warning: " << w << "\n";
    RunReport report = run_dataset(manifest, cfg, effective_threads(o.threads));
    print_report(report);
    return report.failures.empty() ? 0 : 1;
}

int cmd_ingest(const CommonOpts& o, const std::string& split) {
    DatasetManifest manifest = ingest_drive(o.input, split);
    for (const std::string& w : manifest.warnings) std::cerr << "warning: " << w << "\n";
    fs::create_directories(o.output);
    const std::string path = o.output + "/manifest_" + split + ".json";
    save_manifest(manifest, path);
    std::cout << path << "  (" << manifest.records.size() << " records)\n";
    return 0;
}

int cmd_phantom(const CommonOpts& o, int size, int count, int vessels) {
    fs::create_directories(o.output);
    PhantomParams params;
    params.size = size;
    params.num_vessels = vessels;
    DatasetManifest manifest;
    for (int i = 0; i < count; ++i) {
        const uint64_t seed = (o.seed_set ? o.seed : 1) + static_cast<uint64_t>(i);
        Phantom ph = make_phantom(seed, params);
        char id[32];
        std::snprintf(id, sizeof(id), "phantom%02d", i);
        const std::string img = o.output + "/" + id + ".png";
        const std::string truth = o.output + "/" + id + "_truth.png";
        const std::string fovp = o.output + "/" + id + "_fov.png";
        save_png(ph.image, img);
        save_png(ph.truth, truth);
        save_png(ph.fov.as_binary(), fovp);
        manifest.records.push_back({id, img, truth, fovp});
    }
    save_manifest(manifest, o.output + "/manifest.json");
    std::cout << o.output << "/manifest.json  (" << count << " phantoms)\n";
    return 0;
}

int cmd_sweep(const CommonOpts& o, const std::string& split, std::vector<double> kappas,
              std::vector<int> ranks, std::vector<int> min_areas) {
    PipelineConfig cfg = make_config(o);
    DatasetManifest manifest = resolve_manifest(o.input, split);
    SweepGrid grid;
    if (!kappas.empty()) grid.kappas = std::move(kappas);
    if (!ranks.empty()) grid.ranks = std::move(ranks);
    if (!min_areas.empty()) grid.min_areas = std::move(min_areas);
    SweepResult result = sweep(manifest, cfg, grid, effective_threads(o.threads));
    fs::create_directories(o.output);
    {
        std::ofstream csv(o.output + "/sweep.csv", std::ios::binary);
        csv << sweep_csv(result);
    }
    save_config(result.best_config, o.output + "/best_config.json");
    const SweepRow& best = result.rows.front();
    std::cout << "best: kappa " << best.kappa << ", rank " << best.rank << ", min_area "
              << best.min_area << "  ->  SN " << best.mean.sensitivity << "  SP "
              << best.mean.specificity << "  Acc " << best.mean.accuracy << "\n"
              << o.output << "/sweep.csv\n"
              << o.output << "/best_config.json\n";
    return 0;
}

int cmd_init_config(const CommonOpts& o) {
    PipelineConfig cfg;
    if (!o.output.empty()) cfg.output_dir = o.output;
    const std::string path = o.config_path.empty() ? "config.json" : o.config_path;
    save_config(cfg, path);
    std::cout << path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"retinal vessel segmentation pipeline"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string fov_path, split = "test";
    int size = 512, count = 10, vessels = 12;
    std::vector<double> kappas;
    std::vector<int> ranks, min_areas;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        sub->add_option("--config", o.config_path, "pipeline config JSON");
        auto* in = sub->add_option("--input,-i", o.input, "input image, directory or manifest");
        if (needs_input) in->required();
        sub->add_option("--output,-o", o.output, "output directory");
        sub->add_flag("--debug-stages", o.debug_stages, "write every stage image");
        sub->add_option("--threads", o.threads, "worker threads (0 = auto)");
        sub->add_option("--seed", o.seed, "seed for phantoms and random init")
            ->each([&](const std::string&) { o.seed_set = true; });
    };

    CLI::App* seg = app.add_subcommand("segment", "segment one image");
    add_common(seg, true);
    seg->add_option("--fov", fov_path, "field-of-view mask image");

    CLI::App* run = app.add_subcommand("run", "segment and evaluate a dataset");
    add_common(run, true);
    run->add_option("--split", split, "DRIVE split when input is a DRIVE root");

    CLI::App* ing = app.add_subcommand("ingest", "validate a DRIVE tree and write a manifest");
    add_common(ing, true);
    ing->add_option("--split", split, "test or training");

    CLI::App* pha = app.add_subcommand("phantom", "generate synthetic phantoms with truth");
    add_common(pha, false);
    pha->add_option("--size", size, "phantom side in pixels");
    pha->add_option("--count", count, "number of phantoms");
    pha->add_option("--vessels", vessels, "vessels per phantom (0 = none)");

    CLI::App* swp = app.add_subcommand("sweep", "grid-search open parameters on a split");
    add_common(swp, true);
    swp->add_option("--split", split, "DRIVE split when input is a DRIVE root");
    swp->add_option("--kappas", kappas, "detail amplification grid");
    swp->add_option("--ranks", ranks, "vessel cluster rank grid");
    swp->add_option("--min-areas", min_areas, "minimum component area grid");

    CLI::App* ini = app.add_subcommand("init-config", "write the default config");
    ini->add_option("--config", o.config_path, "where to write (default config.json)");
    ini->add_option("--output,-o", o.output, "default output directory to embed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (seg->parsed()) return cmd_segment(o, fov_path);
        if (run->parsed()) return cmd_run(o, split);
        if (ing->parsed()) return cmd_ingest(o, split);
        if (pha->parsed()) return cmd_phantom(o, size, count, vessels);
        if (swp->parsed()) return cmd_sweep(o, split, kappas, ranks, min_areas);
        if (ini->parsed()) return cmd_init_config(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
