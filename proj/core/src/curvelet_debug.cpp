#include <filesystem>
#include <string>

#include "retseg/curvelet.hpp"
#include "retseg/imageio.hpp"

namespace retseg {

void dump_coefficient_maps(const CurveletCoeffs& coeffs, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (int s = 0; s < coeffs.num_scales(); ++s) {
        for (size_t w = 0; w < coeffs.scales[s].size(); ++w) {
            const WedgeGrid& g = coeffs.scales[s][w];
            RasterImage mag(g.cols, g.rows);
            for (size_t i = 0; i < g.data.size(); ++i) mag[i] = std::abs(g.data[i]);
            save_png_normalized(mag, dir + "/scale" + std::to_string(s) + "_wedge" +
                                         std::to_string(w) + ".png");
        }
    }
}

} // namespace retseg
