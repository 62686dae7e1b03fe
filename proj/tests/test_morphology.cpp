#include <doctest.h>

#include <random>
#include <vector>

#include "retseg/morphology.hpp"

using namespace retseg;

namespace {

BinaryImage random_mask(int w, int h, double density, uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    BinaryImage m(w, h);
    for (size_t i = 0; i < m.size(); ++i) m.set(i, uni(rng) < density);
    return m;
}

BinaryImage dilate_oracle(const BinaryImage& m, int radius) {
    const double r2 = (radius + 0.5) * (radius + 0.5);
    BinaryImage out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            bool hit = false;
            for (int dy = -radius; dy <= radius && !hit; ++dy)
                for (int dx = -radius; dx <= radius && !hit; ++dx) {
                    if (dx * dx + dy * dy > r2) continue;
                    const int nx = x + dx, ny = y + dy;
                    if (nx >= 0 && ny >= 0 && nx < m.width() && ny < m.height() &&
                        m.at(nx, ny))
                        hit = true;
                }
            out.set(x, y, hit);
        }
    return out;
}

// Independent bridge reference: count connected groups of true ring cells by
// union-find over the 8 ring positions.
bool bridge_oracle_center(unsigned code) {
    static const int px[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
    static const int py[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
    int parent[8];
    for (int i = 0; i < 8; ++i) parent[i] = i;
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int a = 0; a < 8; ++a) {
        if (!(code & (1u << a))) continue;
        for (int b = a + 1; b < 8; ++b) {
            if (!(code & (1u << b))) continue;
            if (std::abs(px[a] - px[b]) <= 1 && std::abs(py[a] - py[b]) <= 1)
                parent[find(a)] = find(b);
        }
    }
    std::vector<int> roots;
    for (int i = 0; i < 8; ++i) {
        if (!(code & (1u << i))) continue;
        const int r = find(i);
        bool seen = false;
        for (int q : roots) seen = seen || q == r;
        if (!seen) roots.push_back(r);
    }
    return roots.size() >= 2;
}

BinaryImage bridge_oracle(const BinaryImage& m) {
    BinaryImage out = m;
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            if (m.at(x, y)) continue;
            static const int px[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
            static const int py[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
            unsigned code = 0;
            for (int i = 0; i < 8; ++i) {
                const int nx = x + px[i], ny = y + py[i];
                if (nx >= 0 && ny >= 0 && nx < m.width() && ny < m.height() && m.at(nx, ny))
                    code |= 1u << i;
            }
            if (bridge_oracle_center(code)) out.set(x, y, true);
        }
    return out;
}

// Flood-fill component filter used as the labeling reference.
BinaryImage filter_oracle(const BinaryImage& m, int min_area, int connectivity) {
    const int w = m.width(), h = m.height();
    std::vector<int> label(m.size(), -1);
    std::vector<size_t> areas;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            if (!m.get(i) || label[i] >= 0) continue;
            const int id = static_cast<int>(areas.size());
            size_t area = 0;
            std::vector<std::pair<int, int>> stack{{x, y}};
            label[i] = id;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                ++area;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        if (connectivity == 4 && dx != 0 && dy != 0) continue;
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const size_t ni = static_cast<size_t>(ny) * w + nx;
                        if (m.get(ni) && label[ni] < 0) {
                            label[ni] = id;
                            stack.emplace_back(nx, ny);
                        }
                    }
            }
            areas.push_back(area);
        }
    }
    BinaryImage out(w, h);
    for (size_t i = 0; i < m.size(); ++i)
        out.set(i, label[i] >= 0 && areas[label[i]] >= static_cast<size_t>(min_area));
    return out;
}

} // namespace

TEST_CASE("dilate identity and the 3x3 disk") {
    BinaryImage m(7, 7);
    m.set(3, 3, true);
    BinaryImage same = dilate(m, 0);
    for (size_t i = 0; i < m.size(); ++i) CHECK(same.get(i) == m.get(i));

    BinaryImage d = dilate(m, 1);
    CHECK(d.count_true() == 9);
    for (int y = 2; y <= 4; ++y)
        for (int x = 2; x <= 4; ++x) CHECK(d.at(x, y));

    CHECK_THROWS_AS(dilate(m, -1), invalid_argument);
}

TEST_CASE("dilate is extensive, monotone, and matches the scan oracle") {
    for (int trial = 0; trial < 12; ++trial) {
        BinaryImage a = random_mask(48, 32, 0.15, 500 + trial);
        const int radius = trial % 4;
        BinaryImage da = dilate(a, radius);
        BinaryImage oracle = dilate_oracle(a, radius);
        for (size_t i = 0; i < a.size(); ++i) CHECK(da.get(i) == oracle.get(i));
        for (size_t i = 0; i < a.size(); ++i)
            if (a.get(i)) CHECK(da.get(i));  // extensive

        // monotone: subset inputs give subset outputs
        BinaryImage b = a;
        std::mt19937 rng(900 + trial);
        for (size_t i = 0; i < b.size(); ++i)
            if (b.get(i) && rng() % 3 == 0) b.set(i, false);
        BinaryImage db = dilate(b, radius);
        for (size_t i = 0; i < a.size(); ++i)
            if (db.get(i)) CHECK(da.get(i));
    }
}

TEST_CASE("bridge closes canonical gaps") {
    BinaryImage m(5, 5);
    m.set(1, 2, true);
    m.set(3, 2, true);
    BinaryImage b = bridge(m);
    CHECK(b.at(2, 2));  // west/east pair bridges the center

    BinaryImage diag(5, 5);
    diag.set(1, 1, true);
    diag.set(3, 3, true);
    CHECK(bridge(diag).at(2, 2));

    // A solid block adds nothing anywhere.
    BinaryImage block(8, 8);
    for (int y = 2; y <= 5; ++y)
        for (int x = 2; x <= 5; ++x) block.set(x, y, true);
    BinaryImage bb = bridge(block);
    for (size_t i = 0; i < block.size(); ++i) CHECK(bb.get(i) == block.get(i));
}

TEST_CASE("bridge equals the union-find reference and never removes pixels") {
    for (int trial = 0; trial < 10; ++trial) {
        BinaryImage m = random_mask(40, 40, 0.25, 7000 + trial);
        BinaryImage ours = bridge(m);
        BinaryImage want = bridge_oracle(m);
        for (size_t i = 0; i < m.size(); ++i) CHECK(ours.get(i) == want.get(i));
        for (size_t i = 0; i < m.size(); ++i)
            if (m.get(i)) CHECK(ours.get(i));
    }
}

TEST_CASE("filter_components by area") {
    BinaryImage m(32, 16);
    for (int x = 2; x < 7; ++x) m.set(x, 2, true);        // 5 px line
    for (int y = 5; y < 15; ++y)
        for (int x = 12; x < 22; ++x) m.set(x, y, true);  // 100 px block

    BinaryImage keep_all = filter_components(m, 0, 8);
    for (size_t i = 0; i < m.size(); ++i) CHECK(keep_all.get(i) == m.get(i));

    BinaryImage filtered = filter_components(m, 30, 8);
    CHECK(filtered.count_true() == 100);
    CHECK_FALSE(filtered.at(3, 2));
    CHECK(filtered.at(15, 10));
}

TEST_CASE("filter_components matches the flood-fill oracle") {
    for (int trial = 0; trial < 10; ++trial) {
        BinaryImage m = random_mask(64, 64, 0.35, 1234 + trial);
        for (int connectivity : {4, 8}) {
            for (int min_area : {0, 3, 10}) {
                BinaryImage a = filter_components(m, min_area, connectivity);
                BinaryImage b = filter_oracle(m, min_area, connectivity);
                for (size_t i = 0; i < m.size(); ++i) CHECK(a.get(i) == b.get(i));
            }
        }
    }
    CHECK_THROWS_AS(filter_components(BinaryImage(4, 4), 1, 6), invalid_argument);
}

TEST_CASE("postprocess closes a small vessel gap and respects the fov") {
    const int n = 32;
    BinaryImage m(n, n);
    for (int x = 4; x < 14; ++x) m.set(x, 16, true);
    for (int x = 16; x < 28; ++x) m.set(x, 16, true);  // 2 px gap at 14,15

    FovMask fov = FovMask::full(n, n);
    MorphParams p;
    p.min_component_area = 20;
    BinaryImage out = postprocess(m, fov, p);
    CHECK(out.at(14, 16));
    CHECK(out.at(15, 16));

    // Empty stays empty.
    BinaryImage empty(n, n);
    CHECK(postprocess(empty, fov, p).count_true() == 0);

    // Output never escapes the fov.
    FovMask half(n, n, false);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n / 2; ++x) half.set(x, y, true);
    BinaryImage clipped = postprocess(m, half, p);
    for (int y = 0; y < n; ++y)
        for (int x = n / 2; x < n; ++x) CHECK_FALSE(clipped.at(x, y));
}
