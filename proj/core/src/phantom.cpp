#include "retseg/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace retseg {

namespace {

// Self-contained generator so phantoms are bit-identical across platforms
// and standard library versions.
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double range(double a, double b) { return a + uniform() * (b - a); }

    bool have_spare = false;
    double spare = 0.0;
    double normal() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare = mag * std::sin(6.283185307179586 * u2);
        have_spare = true;
        return mag * std::cos(6.283185307179586 * u2);
    }
};

struct Vec2 {
    double x, y;
};

Vec2 bezier(const Vec2& p0, const Vec2& p1, const Vec2& p2, const Vec2& p3, double t) {
    const double u = 1.0 - t;
    const double b0 = u * u * u, b1 = 3 * u * u * t, b2 = 3 * u * t * t, b3 = t * t * t;
    return {b0 * p0.x + b1 * p1.x + b2 * p2.x + b3 * p3.x,
            b0 * p0.y + b1 * p1.y + b2 * p2.y + b3 * p3.y};
}

double smoothstep(double e0, double e1, double x) {
    const double t = std::clamp((x - e0) / (e1 - e0), 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

struct Canvas {
    int size;
    std::vector<double> cov;    // vessel coverage in [0,1]
    std::vector<double> shade;  // per-pixel vessel shade
    BinaryImage truth;
    explicit Canvas(int n) : size(n), cov(static_cast<size_t>(n) * n, 0.0),
                             shade(static_cast<size_t>(n) * n, 1.0), truth(n, n) {}

    void stamp(double cx, double cy, double radius, double vessel_shade) {
        const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius - 1)));
        const int x1 = std::min(size - 1, static_cast<int>(std::ceil(cx + radius + 1)));
        const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius - 1)));
        const int y1 = std::min(size - 1, static_cast<int>(std::ceil(cy + radius + 1)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double d = std::hypot(x - cx, y - cy);
                const double c = std::clamp(radius + 0.5 - d, 0.0, 1.0);
                if (c <= 0.0) continue;
                const size_t i = static_cast<size_t>(y) * size + x;
                if (c > cov[i]) {
                    cov[i] = c;
                    shade[i] = vessel_shade;
                }
                if (d <= radius) truth.set(i, true);
            }
        }
    }
};

void draw_vessel(Canvas& canvas, Rng& rng, Vec2 p0, double heading, double length,
                 double width0, double shade, int depth) {
    const double wobble = 0.35;
    const Vec2 dir{std::cos(heading), std::sin(heading)};
    const Vec2 perp{-dir.y, dir.x};
    auto ctrl = [&](double along) {
        const double side = rng.range(-wobble, wobble) * length;
        return Vec2{p0.x + dir.x * along * length + perp.x * side,
                    p0.y + dir.y * along * length + perp.y * side};
    };
    const Vec2 p1 = ctrl(0.33), p2 = ctrl(0.67);
    const Vec2 p3{p0.x + dir.x * length + perp.x * rng.range(-wobble, wobble) * length,
                  p0.y + dir.y * length + perp.y * rng.range(-wobble, wobble) * length};

    const int steps = std::max(8, static_cast<int>(length * 3.0));
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        const Vec2 pt = bezier(p0, p1, p2, p3, t);
        const double w = width0 * (1.0 - 0.45 * t);
        canvas.stamp(pt.x, pt.y, w * 0.5, shade);
    }

    // Shorter, thinner side branches.
    if (depth > 0) {
        const int nb = rng.next() % 3;  // 0..2
        for (int b = 0; b < nb; ++b) {
            const double t = rng.range(0.25, 0.8);
            const Vec2 at = bezier(p0, p1, p2, p3, t);
            const double h = heading + rng.range(0.3, 0.9) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
            draw_vessel(canvas, rng, at, h, length * rng.range(0.35, 0.55),
                        std::max(1.2, width0 * 0.65), shade, depth - 1);
        }
    }
}

} // namespace

Phantom make_phantom(uint64_t seed, const PhantomParams& params) {
    params.validate();
    const int n = params.size;
    Rng rng(seed * 0x9e3779b97f4a7c15ull + 0xd1b54a32d192ed03ull);

    const double cx = n * 0.5, cy = n * 0.5;
    const double R = n * 0.47;

    Phantom ph;
    ph.fov = FovMask(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            ph.fov.set(x, y, std::hypot(x - cx, y - cy) <= R);

    // Illumination gradient and low-frequency texture.
    const double gx = rng.range(-0.08, 0.08), gy = rng.range(-0.08, 0.08);
    const int tex_n = n / 16 + 2;
    std::vector<double> tex(static_cast<size_t>(tex_n) * tex_n);
    for (double& t : tex) t = rng.range(-1.0, 1.0);
    auto texture_at = [&](double x, double y) {
        const double fx = x / 16.0, fy = y / 16.0;
        const int ix = std::min(tex_n - 2, static_cast<int>(fx));
        const int iy = std::min(tex_n - 2, static_cast<int>(fy));
        const double ax = fx - ix, ay = fy - iy;
        const double top = tex[static_cast<size_t>(iy) * tex_n + ix] * (1 - ax) +
                           tex[static_cast<size_t>(iy) * tex_n + ix + 1] * ax;
        const double bot = tex[static_cast<size_t>(iy + 1) * tex_n + ix] * (1 - ax) +
                           tex[static_cast<size_t>(iy + 1) * tex_n + ix + 1] * ax;
        return top * (1 - ay) + bot * ay;
    };

    // Bright disk off-center, like a real optic disk.
    const double od_angle = rng.range(0.0, 6.283185307179586);
    const double od_dist = rng.range(0.35, 0.55) * R;
    const double od_x = cx + std::cos(od_angle) * od_dist;
    const double od_y = cy + std::sin(od_angle) * od_dist;
    const double od_r = rng.range(0.11, 0.15) * R;

    // Vessels radiate from the disk.
    Canvas canvas(n);
    for (int v = 0; v < params.num_vessels; ++v) {
        const double heading = rng.range(0.0, 6.283185307179586);
        const double length = rng.range(0.55, 1.05) * R;
        const double width = rng.range(1.6, 5.0);
        const double shade = rng.range(0.8, 1.2);
        const Vec2 start{od_x + rng.range(-od_r, od_r) * 0.5,
                         od_y + rng.range(-od_r, od_r) * 0.5};
        draw_vessel(canvas, rng, start, heading, length, width, shade, 1);
    }

    ph.image = RgbImage(n, n);
    const double bg_r = 0.82, bg_g = 0.47, bg_b = 0.18;
    const double od_cr = 0.96, od_cg = 0.82, od_cb = 0.52;
    const double ve_r = 0.36, ve_g = 0.12, ve_b = 0.07;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const size_t i = static_cast<size_t>(y) * n + x;
            double r, g, b;
            if (!ph.fov.get(i)) {
                canvas.truth.set(i, false);
                r = g = b = 0.01;
            } else {
                const double rad = std::hypot(x - cx, y - cy) / R;
                const double illum = 1.0 - 0.18 * rad * rad +
                                     gx * (x - cx) / n + gy * (y - cy) / n;
                const double t = 1.0 + 0.03 * texture_at(x, y);
                r = bg_r * illum * t;
                g = bg_g * illum * t;
                b = bg_b * illum * t;

                const double od_d = std::hypot(x - od_x, y - od_y);
                const double od_mix = smoothstep(od_r + 2.0, od_r - 2.0, od_d);
                r += (od_cr - r) * od_mix;
                g += (od_cg - g) * od_mix;
                b += (od_cb - b) * od_mix;

                const double cov = canvas.cov[i];
                if (cov > 0.0) {
                    const double s = canvas.shade[i];
                    r += (ve_r * s - r) * cov;
                    g += (ve_g * s - g) * cov;
                    b += (ve_b * s - b) * cov;
                }
                r += params.noise_sigma * rng.normal();
                g += params.noise_sigma * rng.normal();
                b += params.noise_sigma * rng.normal();
            }
            ph.image.red().at(x, y) = std::clamp(r, 0.0, 1.0);
            ph.image.green().at(x, y) = std::clamp(g, 0.0, 1.0);
            ph.image.blue().at(x, y) = std::clamp(b, 0.0, 1.0);
        }
    }
    ph.truth = std::move(canvas.truth);
    return ph;
}

Phantom make_phantom(uint64_t seed, int size) {
    PhantomParams p;
    p.size = size;
    return make_phantom(seed, p);
}

} // namespace retseg
