#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "retseg/color.hpp"
#include "retseg/imageio.hpp"
#include "retseg/phantom.hpp"
#include "retseg/pipeline.hpp"
#include "retseg/sweep.hpp"

using namespace retseg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

PipelineConfig small_config(const std::string& outdir) {
    PipelineConfig cfg;
    cfg.working_width = 128;
    cfg.working_height = 128;
    cfg.background.median_window = 10;
    cfg.output_dir = outdir;
    return cfg;
}

} // namespace

TEST_CASE("config json round-trips exactly") {
    PipelineConfig cfg;
    cfg.curvelet.kappa_boost = 7.25;
    cfg.diffusion.kappa_conduction = 0.123456789012345;
    cfg.select.rank = 1;
    cfg.od_suppression = OdSuppression::binary;
    cfg.fcm.init_kind = FcmInit::random;
    cfg.fcm.seed = 0xdeadbeefull;
    const std::string text = config_to_json(cfg);
    PipelineConfig back = config_from_json(text);
    CHECK(config_to_json(back) == text);
    CHECK(back.curvelet.kappa_boost == cfg.curvelet.kappa_boost);
    CHECK(back.diffusion.kappa_conduction == cfg.diffusion.kappa_conduction);
    CHECK(back.od_suppression == OdSuppression::binary);
    CHECK(back.fcm.seed == cfg.fcm.seed);
}

TEST_CASE("config validation rejects bad values") {
    PipelineConfig cfg;
    cfg.select.rank = 3;
    CHECK_THROWS_AS(cfg.validate(), invalid_argument);
    cfg = PipelineConfig{};
    cfg.diffusion.lambda_step = 0.5;
    CHECK_THROWS_AS(cfg.validate(), invalid_argument);
    CHECK_THROWS_AS(config_from_json("{not json"), invalid_argument);
    CHECK_THROWS_AS(config_from_json("{}"), invalid_argument);
}

TEST_CASE("phantoms are deterministic in the seed") {
    Phantom a = make_phantom(42, 128);
    Phantom b = make_phantom(42, 128);
    CHECK(a.image.red().data() == b.image.red().data());
    CHECK(a.image.green().data() == b.image.green().data());
    CHECK(a.truth.data() == b.truth.data());

    Phantom c = make_phantom(43, 128);
    CHECK(a.image.red().data() != c.image.red().data());
}

TEST_CASE("phantom vessel density stays inside the configured band") {
    for (uint64_t seed : {1ull, 2ull, 3ull, 9ull}) {
        Phantom ph = make_phantom(seed, 256);
        const double density =
            static_cast<double>(ph.truth.count_true()) / ph.fov.count_true();
        CHECK(density >= 0.01);
        CHECK(density <= 0.12);
        // truth lives inside the fov
        for (size_t i = 0; i < ph.truth.size(); ++i)
            if (ph.truth.get(i)) CHECK(ph.fov.get(i));
    }
    Phantom none = make_phantom(5, PhantomParams{256, 0, 0.012});
    CHECK(none.truth.count_true() == 0);
}

TEST_CASE("pipeline segments a phantom end to end") {
    TempDir dir("retseg_pipe_test");
    PipelineConfig cfg = small_config(dir.str());
    Phantom ph = make_phantom(7, 256);
    Pipeline pipe(cfg);
    SegmentationOutput out = pipe.segment(ph.image, ph.fov, "ph", /*keep_stages=*/true);

    CHECK(out.mask.width() == 128);
    CHECK(out.mask_native.width() == 256);
    CHECK(out.seconds > 0.0);
    REQUIRE(out.stages != nullptr);
    CHECK(out.stages->weighted.width() == 128);

    // contrast enhancement increases in-fov spread of the weighted grayscale
    auto fov_stddev = [&](const RgbImage& img) {
        RasterImage g = weighted_grayscale(img);
        FovMask fov(resize_nearest(ph.fov.as_binary(), g.width(), g.height()));
        double sum = 0.0, n = 0.0;
        for (size_t i = 0; i < g.size(); ++i)
            if (fov.get(i)) { sum += g[i]; n += 1.0; }
        const double mean = sum / n;
        double var = 0.0;
        for (size_t i = 0; i < g.size(); ++i)
            if (fov.get(i)) var += (g[i] - mean) * (g[i] - mean);
        return std::sqrt(var / n);
    };
    CHECK(fov_stddev(out.stages->enhanced) > fov_stddev(out.stages->resized));

    // mask stays inside the fov
    for (size_t i = 0; i < out.mask.size(); ++i)
        if (out.mask.get(i)) CHECK(out.fov.get(i));
}

TEST_CASE("stage errors carry the stage name and image id") {
    PipelineConfig cfg = small_config("unused");
    cfg.background.median_window = 200;  // larger than the working image
    Pipeline pipe(cfg);
    Phantom ph = make_phantom(3, 128);
    try {
        pipe.segment(ph.image, ph.fov, "img7");
        FAIL("expected stage_error");
    } catch (const stage_error& e) {
        CHECK(e.stage() == "estimate_background");
        CHECK(e.image_id() == "img7");
        CHECK(std::string(e.what()).find("img7") != std::string::npos);
        CHECK(std::string(e.what()).find("estimate_background") != std::string::npos);
    }
}

TEST_CASE("segment_file reports io errors with the path") {
    PipelineConfig cfg = small_config("unused");
    Pipeline pipe(cfg);
    try {
        pipe.segment_file("/nonexistent/image.png", "", "gone");
        FAIL("expected stage_error");
    } catch (const stage_error& e) {
        CHECK(e.stage() == "load");
        CHECK(std::string(e.what()).find("/nonexistent/image.png") != std::string::npos);
    }
}

TEST_CASE("ingest builds manifests from a DRIVE-layout tree") {
    TempDir root("retseg_drive_test");
    const fs::path test = root.path / "test";
    fs::create_directories(test / "images");
    fs::create_directories(test / "1st_manual");
    fs::create_directories(test / "mask");

    Phantom ph = make_phantom(1, 64);
    for (const std::string id : {"01", "02"}) {
        save_png(ph.image, (test / "images" / (id + "_test.png")).string());
        save_png(ph.truth, (test / "1st_manual" / (id + "_manual1.png")).string());
        save_png(ph.fov.as_binary(), (test / "mask" / (id + "_test_mask.png")).string());
    }

    DatasetManifest m = ingest_drive(root.str(), "test");
    REQUIRE(m.records.size() == 2);
    CHECK(m.records[0].image_id == "01");
    CHECK(!m.records[0].truth_path.empty());
    CHECK(!m.records[0].fov_path.empty());
    CHECK(m.warnings.empty());

    // manifest round trip via json
    const std::string mpath = (root.path / "manifest.json").string();
    save_manifest(m, mpath);
    DatasetManifest back = load_manifest(mpath);
    REQUIRE(back.records.size() == 2);
    CHECK(back.records[1].image_path == m.records[1].image_path);

    // mask directory missing: fov degrades with a warning
    fs::remove_all(test / "mask");
    DatasetManifest degraded = ingest_drive(root.str(), "test");
    CHECK(degraded.records[0].fov_path.empty());
    CHECK(!degraded.warnings.empty());

    // empty tree: validation error
    TempDir empty("retseg_drive_empty");
    fs::create_directories(empty.path / "test" / "images");
    CHECK_THROWS_AS(ingest_drive(empty.str(), "test"), invalid_argument);
    CHECK_THROWS_AS(ingest_drive(empty.str(), "bogus"), invalid_argument);

    // tif-only tree: actionable error
    TempDir tifs("retseg_drive_tif");
    fs::create_directories(tifs.path / "test" / "images");
    std::ofstream(tifs.path / "test" / "images" / "01_test.tif") << "stub";
    try {
        ingest_drive(tifs.str(), "test");
        FAIL("expected invalid_argument");
    } catch (const invalid_argument& e) {
        CHECK(std::string(e.what()).find("convert") != std::string::npos);
    }
}

TEST_CASE("run_dataset segments, evaluates, and records failures") {
    TempDir dir("retseg_run_test");
    const std::string data = dir.str() + "/data";
    fs::create_directories(data);

    DatasetManifest manifest;
    for (int i = 0; i < 2; ++i) {
        Phantom ph = make_phantom(10 + i, 192);
        const std::string id = "p" + std::to_string(i);
        save_png(ph.image, data + "/" + id + ".png");
        save_png(ph.truth, data + "/" + id + "_truth.png");
        save_png(ph.fov.as_binary(), data + "/" + id + "_fov.png");
        manifest.records.push_back(
            {id, data + "/" + id + ".png", data + "/" + id + "_truth.png",
             data + "/" + id + "_fov.png"});
    }
    // one record without truth, one broken path
    Phantom extra = make_phantom(99, 192);
    save_png(extra.image, data + "/naked.png");
    manifest.records.push_back({"naked", data + "/naked.png", "", ""});
    manifest.records.push_back({"broken", data + "/missing.png", "", ""});

    PipelineConfig cfg = small_config(dir.str() + "/out");
    RunReport report = run_dataset(manifest, cfg, 2);

    CHECK(report.images_total == 4);
    CHECK(report.timings.size() == 3);
    REQUIRE(report.failures.size() == 1);
    CHECK(report.failures[0].find("broken") != std::string::npos);
    CHECK(report.eval.per_image.size() == 2);  // only records with truth

    CHECK(fs::exists(dir.path / "out" / "report.csv"));
    CHECK(fs::exists(dir.path / "out" / "masks" / "p0_mask.png"));
    CHECK(fs::exists(dir.path / "out" / "masks" / "naked_mask.png"));
    CHECK(fs::exists(dir.path / "out" / "overlays" / "p0_overlay.png"));
    CHECK(!fs::exists(dir.path / "out" / "overlays" / "naked_overlay.png"));

    DatasetManifest empty;
    CHECK_THROWS_AS(run_dataset(empty, cfg, 1), invalid_argument);
}

TEST_CASE("sweep ranks grid points and pins the winner") {
    TempDir dir("retseg_sweep_test");
    const std::string data = dir.str() + "/data";
    fs::create_directories(data);

    DatasetManifest manifest;
    Phantom ph = make_phantom(21, 160);
    save_png(ph.image, data + "/a.png");
    save_png(ph.truth, data + "/a_truth.png");
    save_png(ph.fov.as_binary(), data + "/a_fov.png");
    manifest.records.push_back({"a", data + "/a.png", data + "/a_truth.png",
                                data + "/a_fov.png"});

    PipelineConfig cfg = small_config(dir.str() + "/out");
    SweepGrid grid;
    grid.kappas = {5.0};
    grid.ranks = {0, 2};
    grid.min_areas = {10};
    SweepResult res = sweep(manifest, cfg, grid, 1);
    REQUIRE(res.rows.size() == 2);
    CHECK(res.rows[0].mean.accuracy >= res.rows[1].mean.accuracy);
    CHECK(res.best_config.select.rank == res.rows[0].rank);
    CHECK(res.best_config.curvelet.kappa_boost == 5.0);

    const std::string csv = sweep_csv(res);
    CHECK(csv.find("kappa,rank,min_area") == 0);

    // single-point grid reduces to one run
    grid.ranks = {0};
    SweepResult one = sweep(manifest, cfg, grid, 1);
    CHECK(one.rows.size() == 1);

    SweepGrid bad;
    bad.kappas = {};
    CHECK_THROWS_AS(sweep(manifest, cfg, bad, 1), invalid_argument);

    DatasetManifest no_truth = manifest;
    no_truth.records[0].truth_path.clear();
    CHECK_THROWS_AS(sweep(no_truth, cfg, SweepGrid{}, 1), invalid_argument);
}
