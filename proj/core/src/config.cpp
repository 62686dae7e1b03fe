#include "retseg/config.hpp"

#include <fstream>

#include <json.hpp>

namespace retseg {

namespace {

using nlohmann::json;

std::string to_string(OdSuppression v) {
    return v == OdSuppression::binary ? "binary" : "residual";
}
std::string to_string(EvalResolution v) {
    return v == EvalResolution::native ? "native" : "working";
}
std::string to_string(ConductionKind v) {
    return v == ConductionKind::exponential ? "exponential" : "rational";
}
std::string to_string(FcmInit v) { return v == FcmInit::quantile ? "quantile" : "random"; }

template <typename T>
T parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, T>> table,
             const char* what) {
    for (const auto& [name, value] : table)
        if (s == name) return value;
    throw invalid_argument(std::string("config: bad ") + what + " value '" + s + "'");
}

} // namespace

void PipelineConfig::validate() const {
    if (working_width < 64 || working_height < 64)
        throw invalid_argument("config: working resolution must be >= 64");
    if (!(fov_threshold > 0.0 && fov_threshold < 1.0))
        throw invalid_argument("config: fov_threshold must lie in (0,1)");
    clahe.validate();
    diffusion.validate();
    curvelet.validate();
    background.validate();
    fcm.validate();
    morph.validate();
    if (select.rank < 0 || select.rank >= fcm.num_clusters)
        throw invalid_argument("config: cluster rank out of range");
}

std::string config_to_json(const PipelineConfig& c) {
    json j;
    j["pipeline"] = {
        {"working_width", c.working_width},
        {"working_height", c.working_height},
        {"fov_threshold", c.fov_threshold},
        {"od_suppression", to_string(c.od_suppression)},
        {"eval_resolution", to_string(c.eval_resolution)},
        {"seed", c.seed},
    };
    j["clahe"] = {
        {"tiles_x", c.clahe.tiles_x},
        {"tiles_y", c.clahe.tiles_y},
        {"clip_limit", c.clahe.clip_limit},
    };
    j["diffusion"] = {
        {"iterations", c.diffusion.iterations},
        {"kappa_conduction", c.diffusion.kappa_conduction},
        {"lambda_step", c.diffusion.lambda_step},
        {"conduction_kind", to_string(c.diffusion.conduction_kind)},
    };
    j["curvelet"] = {
        {"num_scales", c.curvelet.num_scales},
        {"num_angles_coarse", c.curvelet.num_angles_coarse},
        {"kappa_boost", c.curvelet.kappa_boost},
        {"abs_inverse", c.curvelet.abs_inverse},
    };
    j["background"] = {{"median_window", c.background.median_window}};
    j["fcm"] = {
        {"num_clusters", c.fcm.num_clusters},
        {"fuzzifier", c.fcm.fuzzifier},
        {"max_iters", c.fcm.max_iters},
        {"tol", c.fcm.tol},
        {"seed", c.fcm.seed},
        {"init_kind", to_string(c.fcm.init_kind)},
        {"select_rank", c.select.rank},
    };
    j["morphology"] = {
        {"dilation_radius", c.morph.dilation_radius},
        {"do_bridge", c.morph.do_bridge},
        {"min_component_area", c.morph.min_component_area},
        {"connectivity", c.morph.connectivity},
    };
    j["output"] = {
        {"dir", c.output_dir},
        {"debug_stages", c.debug_stages},
        {"dump_coefficients", c.dump_coefficients},
        {"dump_fcm_trace", c.dump_fcm_trace},
    };
    return j.dump(2) + "\n";
}

PipelineConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw invalid_argument(std::string("config: JSON parse failed: ") + e.what());
    }
    PipelineConfig c;
    try {
        const json& p = j.at("pipeline");
        p.at("working_width").get_to(c.working_width);
        p.at("working_height").get_to(c.working_height);
        p.at("fov_threshold").get_to(c.fov_threshold);
        c.od_suppression = parse_enum<OdSuppression>(
            p.at("od_suppression").get<std::string>(),
            {{"binary", OdSuppression::binary}, {"residual", OdSuppression::residual}},
            "od_suppression");
        c.eval_resolution = parse_enum<EvalResolution>(
            p.at("eval_resolution").get<std::string>(),
            {{"native", EvalResolution::native}, {"working", EvalResolution::working}},
            "eval_resolution");
        p.at("seed").get_to(c.seed);

        const json& cl = j.at("clahe");
        cl.at("tiles_x").get_to(c.clahe.tiles_x);
        cl.at("tiles_y").get_to(c.clahe.tiles_y);
        cl.at("clip_limit").get_to(c.clahe.clip_limit);

        const json& d = j.at("diffusion");
        d.at("iterations").get_to(c.diffusion.iterations);
        d.at("kappa_conduction").get_to(c.diffusion.kappa_conduction);
        d.at("lambda_step").get_to(c.diffusion.lambda_step);
        c.diffusion.conduction_kind = parse_enum<ConductionKind>(
            d.at("conduction_kind").get<std::string>(),
            {{"exponential", ConductionKind::exponential}, {"rational", ConductionKind::rational}},
            "conduction_kind");

        const json& cv = j.at("curvelet");
        cv.at("num_scales").get_to(c.curvelet.num_scales);
        cv.at("num_angles_coarse").get_to(c.curvelet.num_angles_coarse);
        cv.at("kappa_boost").get_to(c.curvelet.kappa_boost);
        cv.at("abs_inverse").get_to(c.curvelet.abs_inverse);

        j.at("background").at("median_window").get_to(c.background.median_window);

        const json& f = j.at("fcm");
        f.at("num_clusters").get_to(c.fcm.num_clusters);
        f.at("fuzzifier").get_to(c.fcm.fuzzifier);
        f.at("max_iters").get_to(c.fcm.max_iters);
        f.at("tol").get_to(c.fcm.tol);
        f.at("seed").get_to(c.fcm.seed);
        c.fcm.init_kind = parse_enum<FcmInit>(
            f.at("init_kind").get<std::string>(),
            {{"quantile", FcmInit::quantile}, {"random", FcmInit::random}}, "init_kind");
        f.at("select_rank").get_to(c.select.rank);

        const json& m = j.at("morphology");
        m.at("dilation_radius").get_to(c.morph.dilation_radius);
        m.at("do_bridge").get_to(c.morph.do_bridge);
        m.at("min_component_area").get_to(c.morph.min_component_area);
        m.at("connectivity").get_to(c.morph.connectivity);

        const json& o = j.at("output");
        o.at("dir").get_to(c.output_dir);
        o.at("debug_stages").get_to(c.debug_stages);
        o.at("dump_coefficients").get_to(c.dump_coefficients);
        o.at("dump_fcm_trace").get_to(c.dump_fcm_trace);
    } catch (const json::exception& e) {
        throw invalid_argument(std::string("config: missing or mistyped field: ") + e.what());
    }
    c.validate();
    return c;
}

void save_config(const PipelineConfig& cfg, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot write config: " + path);
    f << config_to_json(cfg);
    if (!f) throw io_error("failed writing config: " + path);
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot read config: " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return config_from_json(text);
}

} // namespace retseg
