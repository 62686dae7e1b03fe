#include "retseg/curvelet.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "retseg/fovmask.hpp"

namespace retseg {

namespace {

// FFTW plan creation/destruction is not thread safe; execution on distinct
// buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Smallest integer >= v whose factors are all in {2,3,5}; keeps the wedge
// rectangle FFTs on fast sizes.
int next_smooth(int v) {
    for (int c = std::max(v, 1);; ++c) {
        int r = c;
        for (int f : {2, 3, 5})
            while (r % f == 0) r /= f;
        if (r == 1) return c;
    }
}

// Smooth step pair with rising^2 + falling^2 == 1; rising goes 0 -> 1 on [0,1].
void step_pair(double x, double& rising, double& falling) {
    if (x <= 0.0) { rising = 0.0; falling = 1.0; return; }
    if (x >= 1.0) { rising = 1.0; falling = 0.0; return; }
    auto f = [](double t) {
        return std::exp(1.0 - 1.0 / (1.0 - std::exp(1.0 - 1.0 / t)));
    };
    const double a = f(1.0 - x);
    const double b = f(x);
    const double norm = std::sqrt(a * a + b * b);
    rising = a / norm;
    falling = b / norm;
}

// 1-D radial profile: 1 inside |u| <= m, smooth fall to 0 at |u| >= 2m.
double lowpass_1d(double u, double m) {
    const double a = std::abs(u);
    if (a <= m) return 1.0;
    if (a >= 2.0 * m) return 0.0;
    double rise, fall;
    step_pair(a / m - 1.0, rise, fall);
    return fall;
}

// Position along the square "angle": [0,8), zero on the NE diagonal, two
// units per quadrant side, counterclockwise. Continuous across diagonals.
double square_angle(int kx, int ky) {
    if (std::abs(ky) >= std::abs(kx)) {
        if (ky > 0) return 1.0 - static_cast<double>(kx) / ky;     // north
        if (ky < 0) return 5.0 + static_cast<double>(kx) / (-ky);  // south
        return 0.0;                                                // origin; never windowed
    }
    if (kx < 0) return 3.0 - static_cast<double>(ky) / (-kx);      // west
    return 7.0 + static_cast<double>(ky) / kx;                     // east
}

struct Entry {
    int kx, ky;
    double w;
};

// Sparse frequency window of one wedge plus its wrap onto a rectangle.
struct WedgeMap {
    int rows = 0, cols = 0;
    std::vector<uint32_t> src;   // index into the n*n spectrum (FFT layout)
    std::vector<uint32_t> dst;   // index into the rows*cols rectangle
    std::vector<double> weight;
};

} // namespace

double CurveletCoeffs::energy() const {
    double e = 0.0;
    for (const auto& scale : scales)
        for (const WedgeGrid& g : scale)
            for (const std::complex<double>& c : g.data) e += std::norm(c);
    return e;
}

struct CurveletTransform::Impl {
    int n = 0;
    int nscales = 0;
    CurveletParams params;
    std::vector<int> counts;
    std::vector<std::vector<WedgeMap>> wedges;
    double partition_err = 0.0;

    std::map<std::pair<int, int>, std::pair<fftw_plan, fftw_plan>> plans;

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        for (auto& [dims, pair] : plans) {
            fftw_destroy_plan(pair.first);
            fftw_destroy_plan(pair.second);
        }
    }

    const std::pair<fftw_plan, fftw_plan>& plan_for(int rows, int cols) const {
        return plans.at({rows, cols});
    }

    void make_plans() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        auto ensure = [&](int rows, int cols) {
            if (plans.count({rows, cols})) return;
            std::vector<std::complex<double>> tmp(static_cast<size_t>(rows) * cols);
            auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
            fftw_plan fwd = fftw_plan_dft_2d(rows, cols, p, p, FFTW_FORWARD,
                                             FFTW_ESTIMATE | FFTW_UNALIGNED);
            fftw_plan bwd = fftw_plan_dft_2d(rows, cols, p, p, FFTW_BACKWARD,
                                             FFTW_ESTIMATE | FFTW_UNALIGNED);
            plans.emplace(std::make_pair(rows, cols), std::make_pair(fwd, bwd));
        };
        ensure(n, n);
        for (const auto& scale : wedges)
            for (const WedgeMap& wm : scale) ensure(wm.rows, wm.cols);
    }

    uint32_t spectrum_index(int kx, int ky) const {
        const int ix = (kx + n) % n;
        const int iy = (ky + n) % n;
        return static_cast<uint32_t>(iy) * n + ix;
    }

    // Wrap the entries onto a compact rectangle. Rows map modulo the row
    // extent; each support row is a contiguous column interval no longer than
    // the rectangle width, so the map is injective (verified below).
    WedgeMap wrap_entries(const std::vector<Entry>& entries) const {
        WedgeMap wm;
        if (entries.empty())
            throw invalid_argument("curvelet: degenerate wedge (empty support)");

        auto measure = [&](bool transpose, int& rmin, int& rext, int& cmin, int& span) {
            int rlo = INT32_MAX, rhi = INT32_MIN, clo = INT32_MAX;
            std::map<int, std::pair<int, int>> row_cols;
            for (const Entry& e : entries) {
                const int r = transpose ? e.kx : e.ky;
                const int c = transpose ? e.ky : e.kx;
                rlo = std::min(rlo, r);
                rhi = std::max(rhi, r);
                clo = std::min(clo, c);
                auto it = row_cols.find(r);
                if (it == row_cols.end()) row_cols.emplace(r, std::make_pair(c, c));
                else {
                    it->second.first = std::min(it->second.first, c);
                    it->second.second = std::max(it->second.second, c);
                }
            }
            span = 0;
            for (const auto& [r, mm] : row_cols)
                span = std::max(span, mm.second - mm.first + 1);
            rmin = rlo;
            rext = rhi - rlo + 1;
            cmin = clo;
        };

        int rmin0, rext0, cmin0, span0, rmin1, rext1, cmin1, span1;
        measure(false, rmin0, rext0, cmin0, span0);
        measure(true, rmin1, rext1, cmin1, span1);
        const bool transpose =
            static_cast<int64_t>(rext1) * span1 < static_cast<int64_t>(rext0) * span0;
        const int rmin = transpose ? rmin1 : rmin0;
        const int cmin = transpose ? cmin1 : cmin0;
        int L1 = next_smooth(transpose ? rext1 : rext0);
        int L2 = next_smooth(transpose ? span1 : span0);

        for (;;) {
            std::vector<uint8_t> taken(static_cast<size_t>(L1) * L2, 0);
            bool collision = false;
            wm.src.clear();
            wm.dst.clear();
            wm.weight.clear();
            for (const Entry& e : entries) {
                const int r = transpose ? e.kx : e.ky;
                const int c = transpose ? e.ky : e.kx;
                const int rr = (r - rmin) % L1;
                const int cc = (c - cmin) % L2;
                const uint32_t d = static_cast<uint32_t>(rr) * L2 + cc;
                if (taken[d]) { collision = true; break; }
                taken[d] = 1;
                wm.src.push_back(spectrum_index(e.kx, e.ky));
                wm.dst.push_back(d);
                wm.weight.push_back(e.w);
            }
            if (!collision) break;
            L2 = next_smooth(L2 + 1);  // cannot exceed the bounding box width
        }
        wm.rows = L1;
        wm.cols = L2;
        return wm;
    }

    void build() {
        // Flat radii per scale; the finest transition ends at n/3 so the
        // highpass band covers the grid boundary.
        std::vector<double> M(nscales, 0.0);
        double m = n / 6.0;
        for (int s = nscales - 1; s >= 1; --s) {
            M[s] = m;
            m /= 2.0;
        }
        if (nscales >= 2 && M[1] < 1.0)
            throw invalid_argument("curvelet: too many scales for this image size");

        counts.assign(nscales, 1);
        for (int s = 1; s + 1 < nscales; ++s)
            counts[s] = params.num_angles_coarse << (s / 2);

        std::vector<double> sumsq(static_cast<size_t>(n) * n, 0.0);
        auto add_sq = [&](const Entry& e) {
            sumsq[spectrum_index(e.kx, e.ky)] += e.w * e.w;
        };

        wedges.assign(nscales, {});
        const int half = n / 2;

        // Coarse approximation: the residual lowpass square.
        {
            std::vector<Entry> entries;
            const int box = std::min(half - 1, static_cast<int>(std::ceil(2.0 * M[1])));
            for (int ky = -box; ky <= box; ++ky) {
                for (int kx = -box; kx <= box; ++kx) {
                    const double w = lowpass_1d(kx, M[1]) * lowpass_1d(ky, M[1]);
                    if (w == 0.0) continue;
                    entries.push_back({kx, ky, w});
                    add_sq(entries.back());
                }
            }
            wedges[0].push_back(wrap_entries(entries));
        }

        // Directional wedge scales.
        for (int s = 1; s + 1 < nscales; ++s) {
            const int nw = counts[s];
            const double delta = 8.0 / nw;
            std::vector<std::vector<Entry>> per_wedge(nw);
            const int box = std::min(half - 1, static_cast<int>(std::ceil(4.0 * M[s])));
            for (int ky = -box; ky <= box; ++ky) {
                for (int kx = -box; kx <= box; ++kx) {
                    const double lp_s = lowpass_1d(kx, M[s]) * lowpass_1d(ky, M[s]);
                    const double lp_next = lowpass_1d(kx, M[s + 1]) * lowpass_1d(ky, M[s + 1]);
                    if (lp_s >= 1.0 || lp_next == 0.0) continue;
                    const double radial = std::sqrt(std::max(0.0, 1.0 - lp_s * lp_s)) * lp_next;
                    if (radial == 0.0) continue;

                    const double v = square_angle(kx, ky) / delta - 0.5;
                    const double cell = std::floor(v);
                    double rise, fall;
                    step_pair(v - cell, rise, fall);
                    const int wa = (static_cast<int>(cell) % nw + nw) % nw;
                    const int wb = (wa + 1) % nw;
                    if (fall > 0.0) {
                        per_wedge[wa].push_back({kx, ky, radial * fall});
                        add_sq(per_wedge[wa].back());
                    }
                    if (rise > 0.0) {
                        per_wedge[wb].push_back({kx, ky, radial * rise});
                        add_sq(per_wedge[wb].back());
                    }
                }
            }
            for (int wdx = 0; wdx < nw; ++wdx)
                wedges[s].push_back(wrap_entries(per_wedge[wdx]));
        }

        // Finest scale: wavelet-style highpass over the whole grid.
        {
            std::vector<Entry> entries;
            const double mf = M[nscales - 1];
            for (int ky = -half; ky < half; ++ky) {
                for (int kx = -half; kx < half; ++kx) {
                    const double lp = lowpass_1d(kx, mf) * lowpass_1d(ky, mf);
                    if (lp >= 1.0) continue;
                    const double w = std::sqrt(std::max(0.0, 1.0 - lp * lp));
                    if (w == 0.0) continue;
                    entries.push_back({kx, ky, w});
                    add_sq(entries.back());
                }
            }
            wedges[nscales - 1].push_back(wrap_entries(entries));
        }

        partition_err = 0.0;
        for (double v : sumsq)
            partition_err = std::max(partition_err, std::abs(v - 1.0));
        if (partition_err > 1e-9)
            throw std::logic_error("curvelet: window partition broken");

        make_plans();
    }
};

CurveletTransform::CurveletTransform(int size, const CurveletParams& params)
    : impl_(std::make_unique<Impl>()) {
    params.validate();
    if (size < 16 || size % 2 != 0)
        throw invalid_argument("curvelet: transform size must be even and >= 16");
    impl_->n = size;
    impl_->params = params;
    impl_->nscales = params.num_scales
        ? params.num_scales
        : std::max(2, static_cast<int>(std::ceil(std::log2(static_cast<double>(size)))) - 3);
    impl_->build();
}

CurveletTransform::~CurveletTransform() = default;

int CurveletTransform::size() const noexcept { return impl_->n; }
int CurveletTransform::num_scales() const noexcept { return impl_->nscales; }
const std::vector<int>& CurveletTransform::wedge_counts() const noexcept { return impl_->counts; }
double CurveletTransform::partition_max_error() const noexcept { return impl_->partition_err; }

CurveletCoeffs CurveletTransform::forward(const RasterImage& img) const {
    const Impl& im = *impl_;
    if (img.width() != im.n || img.height() != im.n)
        throw invalid_argument("curvelet: image must be square with the transform size");

    std::vector<std::complex<double>> spec(static_cast<size_t>(im.n) * im.n);
    for (size_t i = 0; i < spec.size(); ++i) spec[i] = img[i];
    auto* sp = reinterpret_cast<fftw_complex*>(spec.data());
    fftw_execute_dft(im.plan_for(im.n, im.n).first, sp, sp);
    const double unit = 1.0 / im.n;  // 1/sqrt(n^2)
    for (auto& c : spec) c *= unit;

    CurveletCoeffs out;
    out.image_size = im.n;
    out.scales.resize(im.nscales);
    for (int s = 0; s < im.nscales; ++s) {
        for (const WedgeMap& wm : im.wedges[s]) {
            WedgeGrid g;
            g.rows = wm.rows;
            g.cols = wm.cols;
            g.data.assign(static_cast<size_t>(wm.rows) * wm.cols, {0.0, 0.0});
            for (size_t i = 0; i < wm.src.size(); ++i)
                g.data[wm.dst[i]] = wm.weight[i] * spec[wm.src[i]];
            auto* gp = reinterpret_cast<fftw_complex*>(g.data.data());
            fftw_execute_dft(im.plan_for(wm.rows, wm.cols).second, gp, gp);
            const double scale = 1.0 / std::sqrt(static_cast<double>(wm.rows) * wm.cols);
            for (auto& c : g.data) c *= scale;
            out.scales[s].push_back(std::move(g));
        }
    }
    return out;
}

RasterImage CurveletTransform::inverse(const CurveletCoeffs& coeffs, double* imag_residual) const {
    const Impl& im = *impl_;
    if (coeffs.image_size != im.n || coeffs.num_scales() != im.nscales)
        throw invalid_argument("curvelet: coefficient shape schedule mismatch");
    for (int s = 0; s < im.nscales; ++s) {
        if (coeffs.scales[s].size() != im.wedges[s].size())
            throw invalid_argument("curvelet: coefficient shape schedule mismatch");
        for (size_t w = 0; w < im.wedges[s].size(); ++w) {
            const WedgeGrid& g = coeffs.scales[s][w];
            if (g.rows != im.wedges[s][w].rows || g.cols != im.wedges[s][w].cols ||
                g.data.size() != static_cast<size_t>(g.rows) * g.cols)
                throw invalid_argument("curvelet: coefficient shape schedule mismatch");
        }
    }

    std::vector<std::complex<double>> spec(static_cast<size_t>(im.n) * im.n, {0.0, 0.0});
    std::vector<std::complex<double>> buf;
    for (int s = 0; s < im.nscales; ++s) {
        for (size_t w = 0; w < im.wedges[s].size(); ++w) {
            const WedgeMap& wm = im.wedges[s][w];
            buf = coeffs.scales[s][w].data;
            auto* bp = reinterpret_cast<fftw_complex*>(buf.data());
            fftw_execute_dft(im.plan_for(wm.rows, wm.cols).first, bp, bp);
            const double scale = 1.0 / std::sqrt(static_cast<double>(wm.rows) * wm.cols);
            for (size_t i = 0; i < wm.src.size(); ++i)
                spec[wm.src[i]] += wm.weight[i] * (buf[wm.dst[i]] * scale);
        }
    }

    auto* sp = reinterpret_cast<fftw_complex*>(spec.data());
    fftw_execute_dft(im.plan_for(im.n, im.n).second, sp, sp);
    const double unit = 1.0 / im.n;
    RasterImage out(im.n, im.n);
    double resid = 0.0;
    for (size_t i = 0; i < spec.size(); ++i) {
        out[i] = spec[i].real() * unit;
        resid = std::max(resid, std::abs(spec[i].imag()) * unit);
    }
    if (imag_residual) *imag_residual = resid;
    return out;
}

CurveletCoeffs fdct_forward(const RasterImage& img, const CurveletParams& p) {
    p.validate();
    if (img.width() != img.height() || img.width() % 2 != 0)
        throw invalid_argument("curvelet: image must be square with even dimensions");
    CurveletTransform t(img.width(), p);
    return t.forward(img);
}

RasterImage fdct_inverse(const CurveletCoeffs& coeffs, const CurveletParams& p) {
    p.validate();
    CurveletTransform t(coeffs.image_size, p);
    return t.inverse(coeffs);
}

CurveletCoeffs boost_details(CurveletCoeffs coeffs, double kappa) {
    if (!(kappa > 0.0)) throw invalid_argument("boost_details: kappa must be > 0");
    if (coeffs.scales.empty()) return coeffs;
    for (WedgeGrid& g : coeffs.scales[0])
        std::fill(g.data.begin(), g.data.end(), std::complex<double>{0.0, 0.0});
    for (size_t s = 1; s < coeffs.scales.size(); ++s)
        for (WedgeGrid& g : coeffs.scales[s])
            for (auto& c : g.data) c *= kappa;
    return coeffs;
}

int curvelet_canvas_size(int w, int h) {
    int p = 64;
    while (p < std::max(w, h)) p *= 2;
    return p;
}

RasterImage edge_enhance(const RasterImage& weighted, const FovMask& mask,
                         const CurveletParams& p, const CurveletTransform& transform,
                         CurveletCoeffs* boosted_out) {
    if (weighted.width() != mask.width() || weighted.height() != mask.height())
        throw invalid_argument("edge_enhance: mask dimensions do not match image");
    const int w = weighted.width(), h = weighted.height();
    const int canvas = transform.size();
    if (canvas < std::max(w, h))
        throw invalid_argument("edge_enhance: transform smaller than the image");

    RasterImage padded(canvas, canvas, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            padded.at(x, y) = mask.at(x, y) ? weighted.at(x, y) : 0.0;

    CurveletCoeffs coeffs = boost_details(transform.forward(padded), p.kappa_boost);
    double imag_resid = 0.0;
    RasterImage boosted = transform.inverse(coeffs, &imag_resid);
    if (imag_resid > 1e-10 * std::max(1.0, p.kappa_boost))
        throw std::logic_error("edge_enhance: inverse produced a non-real image");
    if (boosted_out) *boosted_out = std::move(coeffs);

    RasterImage out(w, h, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) continue;
            double v = boosted.at(x, y);
            if (p.abs_inverse) v = std::abs(v);
            out.at(x, y) = std::clamp(v * weighted.at(x, y), 0.0, 1.0);
        }
    }
    return out;
}

RasterImage edge_enhance(const RasterImage& weighted, const FovMask& mask,
                         const CurveletParams& p) {
    p.validate();
    CurveletTransform t(curvelet_canvas_size(weighted.width(), weighted.height()), p);
    return edge_enhance(weighted, mask, p, t);
}

} // namespace retseg
