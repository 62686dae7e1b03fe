#include "retseg/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "retseg/errors.hpp"

namespace retseg {

namespace fs = std::filesystem;

namespace {

bool decodable(const fs::path& p) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
    return e == ".png" || e == ".ppm" || e == ".pgm" || e == ".bmp";
}

bool convertible(const fs::path& p) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
    return e == ".tif" || e == ".tiff" || e == ".gif";
}

// Leading digits of the filename ("02_test.png" -> "02"); empty if none.
std::string leading_id(const fs::path& p) {
    const std::string stem = p.stem().string();
    size_t k = 0;
    while (k < stem.size() && std::isdigit(static_cast<unsigned char>(stem[k]))) ++k;
    return stem.substr(0, k);
}

// id -> preferred file (decodable beats convertible; ties by name).
std::map<std::string, fs::path> scan_dir(const fs::path& dir, bool& saw_convertible_only) {
    std::map<std::string, fs::path> out;
    std::map<std::string, fs::path> fallback;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) {
        const std::string id = leading_id(f);
        if (id.empty()) continue;
        if (decodable(f)) {
            if (!out.count(id)) out.emplace(id, f);
        } else if (convertible(f)) {
            if (!fallback.count(id)) fallback.emplace(id, f);
        }
    }
    for (const auto& [id, f] : fallback)
        if (!out.count(id)) saw_convertible_only = true;
    return out;
}

} // namespace

DatasetManifest ingest_drive(const std::string& root_dir, const std::string& split) {
    if (split != "test" && split != "training")
        throw invalid_argument("ingest: split must be 'test' or 'training'");
    const fs::path root = fs::path(root_dir) / split;
    const fs::path images_dir = root / "images";
    const fs::path manual_dir = root / "1st_manual";
    const fs::path mask_dir = root / "mask";

    if (!fs::is_directory(images_dir))
        throw invalid_argument("ingest: missing directory " + images_dir.string());

    DatasetManifest manifest;
    bool tif_only = false;
    auto images = scan_dir(images_dir, tif_only);
    if (images.empty()) {
        if (tif_only)
            throw invalid_argument(
                "ingest: " + images_dir.string() +
                " holds only tif/gif files; convert them losslessly to PNG first "
                "(e.g. `magick 02_test.tif 02_test.png`, or mogrify -format png *.tif)");
        throw invalid_argument("ingest: no images found under " + images_dir.string());
    }
    if (tif_only)
        manifest.warnings.push_back("some images exist only as tif/gif and were skipped; "
                                    "convert them to PNG to include them");

    bool ignored = false;
    std::map<std::string, fs::path> manuals, masks;
    if (fs::is_directory(manual_dir)) manuals = scan_dir(manual_dir, ignored);
    bool manual_tif_only = ignored;
    ignored = false;
    if (fs::is_directory(mask_dir)) masks = scan_dir(mask_dir, ignored);
    else
        manifest.warnings.push_back("no mask/ directory; field-of-view masks will be "
                                    "estimated from the images");
    if (manual_tif_only || ignored)
        manifest.warnings.push_back("some reference/mask files exist only as tif/gif; "
                                    "convert them to PNG to use them");

    for (const auto& [id, image_path] : images) {
        DatasetRecord rec;
        rec.image_id = id;
        rec.image_path = image_path.string();
        if (auto it = manuals.find(id); it != manuals.end()) rec.truth_path = it->second.string();
        if (auto it = masks.find(id); it != masks.end()) rec.fov_path = it->second.string();
        manifest.records.push_back(std::move(rec));
    }
    if (fs::is_directory(manual_dir) && !manuals.empty()) {
        for (const DatasetRecord& rec : manifest.records)
            if (rec.truth_path.empty())
                throw invalid_argument("ingest: image id '" + rec.image_id +
                                       "' has no matching file in " + manual_dir.string());
    }
    return manifest;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
    nlohmann::json j;
    j["records"] = nlohmann::json::array();
    for (const DatasetRecord& r : manifest.records)
        j["records"].push_back({{"image_id", r.image_id},
                                {"image_path", r.image_path},
                                {"truth_path", r.truth_path},
                                {"fov_path", r.fov_path}});
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot write manifest: " + path);
    f << j.dump(2) << "\n";
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot read manifest: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw invalid_argument("manifest: JSON parse failed: " + std::string(e.what()));
    }
    DatasetManifest m;
    try {
        for (const auto& r : j.at("records")) {
            DatasetRecord rec;
            r.at("image_id").get_to(rec.image_id);
            r.at("image_path").get_to(rec.image_path);
            r.at("truth_path").get_to(rec.truth_path);
            r.at("fov_path").get_to(rec.fov_path);
            m.records.push_back(std::move(rec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw invalid_argument("manifest: missing or mistyped field: " + std::string(e.what()));
    }
    std::map<std::string, int> seen;
    for (const DatasetRecord& r : m.records) {
        if (++seen[r.image_id] > 1)
            throw invalid_argument("manifest: duplicate image id '" + r.image_id + "'");
        if (!fs::exists(r.image_path))
            throw invalid_argument("manifest: image path does not exist: " + r.image_path);
    }
    return m;
}

} // namespace retseg
