#pragma once

#include <string>
#include <vector>

namespace retseg {

struct DatasetRecord {
    std::string image_id;
    std::string image_path;
    std::string truth_path;  // empty = no reference segmentation
    std::string fov_path;    // empty = estimate from the image
};

struct DatasetManifest {
    std::vector<DatasetRecord> records;
    std::vector<std::string> warnings;
};

/// Build a manifest from one split ("test" or "training") of a DRIVE-layout
/// tree: <root>/<split>/{images,1st_manual,mask}. Files pair by their leading
/// numeric id. Only decodable formats (png/ppm/pgm/bmp) are accepted; trees
/// holding only tif/gif originals get an error telling the user to convert
/// them losslessly (e.g. `magick in.tif out.png`). A missing mask/ directory
/// degrades to estimated field-of-view masks with a warning.
DatasetManifest ingest_drive(const std::string& root_dir, const std::string& split);

void save_manifest(const DatasetManifest& manifest, const std::string& path);
DatasetManifest load_manifest(const std::string& path);

} // namespace retseg
