#include "retseg/morphology.hpp"

#include <array>
#include <numeric>
#include <vector>

namespace retseg {

namespace {

// Ring positions around a pixel, index = bit in the neighborhood code.
constexpr std::array<std::pair<int, int>, 8> kRing = {{
    {-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1},
}};

// Number of 8-connected components among the set ring cells of `code`.
int ring_components(unsigned code) {
    std::array<int, 8> comp{};
    comp.fill(-1);
    int count = 0;
    for (int i = 0; i < 8; ++i) {
        if (!(code & (1u << i)) || comp[i] >= 0) continue;
        // Depth-first over ring cells that touch each other (chebyshev <= 1).
        std::vector<int> stack{i};
        comp[i] = count;
        while (!stack.empty()) {
            const int a = stack.back();
            stack.pop_back();
            for (int b = 0; b < 8; ++b) {
                if (!(code & (1u << b)) || comp[b] >= 0) continue;
                const int dx = kRing[a].first - kRing[b].first;
                const int dy = kRing[a].second - kRing[b].second;
                if (dx >= -1 && dx <= 1 && dy >= -1 && dy <= 1) {
                    comp[b] = count;
                    stack.push_back(b);
                }
            }
        }
        ++count;
    }
    return count;
}

const std::array<bool, 256>& bridge_table() {
    static const std::array<bool, 256> table = [] {
        std::array<bool, 256> t{};
        for (unsigned code = 0; code < 256; ++code)
            t[code] = ring_components(code) >= 2;
        return t;
    }();
    return table;
}

struct UnionFind {
    std::vector<int> parent;
    int make() {
        parent.push_back(static_cast<int>(parent.size()));
        return parent.back();
    }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void merge(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

BinaryImage dilate(const BinaryImage& mask, int radius) {
    if (radius < 0) throw invalid_argument("dilate: radius must be >= 0");
    if (radius == 0) return mask;

    std::vector<std::pair<int, int>> offsets;
    const double r2 = (radius + 0.5) * (radius + 0.5);
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= r2) offsets.emplace_back(dx, dy);

    const int w = mask.width(), h = mask.height();
    BinaryImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) continue;
            for (auto [dx, dy] : offsets) {
                const int nx = x + dx, ny = y + dy;
                if (nx >= 0 && ny >= 0 && nx < w && ny < h) out.set(nx, ny, true);
            }
        }
    }
    return out;
}

BinaryImage bridge(const BinaryImage& mask) {
    const auto& table = bridge_table();
    const int w = mask.width(), h = mask.height();
    BinaryImage out = mask;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (mask.at(x, y)) continue;
            unsigned code = 0;
            for (int i = 0; i < 8; ++i) {
                const int nx = x + kRing[i].first, ny = y + kRing[i].second;
                if (nx >= 0 && ny >= 0 && nx < w && ny < h && mask.at(nx, ny))
                    code |= 1u << i;
            }
            if (table[code]) out.set(x, y, true);
        }
    }
    return out;
}

BinaryImage filter_components(const BinaryImage& mask, int min_area, int connectivity) {
    if (connectivity != 4 && connectivity != 8)
        throw invalid_argument("filter_components: connectivity must be 4 or 8");
    const int w = mask.width(), h = mask.height();

    // First pass: provisional labels, merging across prior neighbors.
    std::vector<int> labels(mask.size(), -1);
    UnionFind uf;
    const std::array<std::pair<int, int>, 4> prior4 = {{{-1, 0}, {0, -1}, {-1, -1}, {1, -1}}};
    const int nprior = connectivity == 8 ? 4 : 2;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            if (!mask.get(i)) continue;
            int label = -1;
            for (int k = 0; k < nprior; ++k) {
                const int nx = x + prior4[k].first, ny = y + prior4[k].second;
                if (nx < 0 || ny < 0 || nx >= w) continue;
                const int nl = labels[static_cast<size_t>(ny) * w + nx];
                if (nl < 0) continue;
                if (label < 0) label = nl;
                else uf.merge(label, nl);
            }
            labels[i] = label >= 0 ? label : uf.make();
        }
    }

    // Second pass: resolve roots and accumulate areas.
    std::vector<size_t> area(uf.parent.size(), 0);
    for (int& l : labels)
        if (l >= 0) ++area[static_cast<size_t>(l = uf.find(l))];

    BinaryImage out(w, h);
    for (size_t i = 0; i < out.size(); ++i)
        out.set(i, labels[i] >= 0 && area[labels[i]] >= static_cast<size_t>(min_area));
    return out;
}

BinaryImage postprocess(const BinaryImage& mask, const FovMask& fov, const MorphParams& p) {
    p.validate();
    if (mask.width() != fov.width() || mask.height() != fov.height())
        throw invalid_argument("postprocess: fov dimensions do not match mask");
    BinaryImage m = p.do_bridge ? bridge(mask) : mask;
    m = dilate(m, p.dilation_radius);
    m = filter_components(m, p.min_component_area, p.connectivity);
    for (size_t i = 0; i < m.size(); ++i)
        if (!fov.get(i)) m.set(i, false);
    return m;
}

} // namespace retseg
