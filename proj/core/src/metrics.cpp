#include "retseg/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace retseg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ratio(uint64_t num, uint64_t den) {
    return den == 0 ? kNaN : static_cast<double>(num) / static_cast<double>(den);
}

void append_metric(std::ostringstream& os, double v) {
    os << ',';
    if (!std::isnan(v)) os << v;
}

} // namespace

ConfusionCounts confusion(const BinaryImage& pred, const BinaryImage& truth, const FovMask& fov) {
    if (!pred.same_dims(truth) || pred.width() != fov.width() || pred.height() != fov.height())
        throw invalid_argument("confusion: mask dimensions differ");
    ConfusionCounts c;
    const size_t n = pred.size();
    for (size_t i = 0; i < n; ++i) {
        if (!fov.get(i)) continue;
        const bool p = pred.get(i), t = truth.get(i);
        if (p && t) ++c.tp;
        else if (p && !t) ++c.fp;
        else if (!p && t) ++c.fn;
        else ++c.tn;
    }
    return c;
}

Metrics metrics(const ConfusionCounts& c) {
    Metrics m;
    m.sensitivity = ratio(c.tp, c.tp + c.fn);
    m.specificity = ratio(c.tn, c.tn + c.fp);
    m.accuracy = ratio(c.tp + c.tn, c.total());
    return m;
}

double dice(const ConfusionCounts& c) {
    return ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
}

SetReport evaluate_set(const std::vector<ImageEval>& per_image) {
    if (per_image.empty())
        throw invalid_argument("evaluate_set: no images to evaluate");
    SetReport report;
    report.per_image = per_image;
    double sn = 0, sp = 0, acc = 0;
    size_t nsn = 0, nsp = 0, nacc = 0;
    for (const ImageEval& e : per_image) {
        if (!std::isnan(e.metrics.sensitivity)) { sn += e.metrics.sensitivity; ++nsn; }
        if (!std::isnan(e.metrics.specificity)) { sp += e.metrics.specificity; ++nsp; }
        if (!std::isnan(e.metrics.accuracy)) { acc += e.metrics.accuracy; ++nacc; }
    }
    report.mean.sensitivity = nsn ? sn / nsn : kNaN;
    report.mean.specificity = nsp ? sp / nsp : kNaN;
    report.mean.accuracy = nacc ? acc / nacc : kNaN;
    return report;
}

std::string report_csv(const SetReport& report) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed;
    os << "image_id,tp,tn,fp,fn,sensitivity,specificity,accuracy\n";
    for (const ImageEval& e : report.per_image) {
        os << e.image_id << ',' << e.counts.tp << ',' << e.counts.tn << ','
           << e.counts.fp << ',' << e.counts.fn;
        append_metric(os, e.metrics.sensitivity);
        append_metric(os, e.metrics.specificity);
        append_metric(os, e.metrics.accuracy);
        os << '\n';
    }
    ConfusionCounts total;
    for (const ImageEval& e : report.per_image) total += e.counts;
    os << "mean," << total.tp << ',' << total.tn << ',' << total.fp << ',' << total.fn;
    append_metric(os, report.mean.sensitivity);
    append_metric(os, report.mean.specificity);
    append_metric(os, report.mean.accuracy);
    os << '\n';
    return os.str();
}

RgbImage overlay(const BinaryImage& pred, const BinaryImage& truth, const FovMask& fov,
                 const RasterImage& base) {
    if (!pred.same_dims(truth) || pred.width() != base.width() || pred.height() != base.height())
        throw invalid_argument("overlay: dimensions differ");
    RgbImage out(pred.width(), pred.height());
    for (size_t i = 0; i < pred.size(); ++i) {
        const bool in = fov.get(i);
        const bool p = in && pred.get(i), t = in && truth.get(i);
        double r = base[i], g = base[i], b = base[i];
        if (p && t) { r = 0.0; g = 1.0; b = 0.0; }
        else if (p) { r = 1.0; g = 0.0; b = 0.0; }
        else if (t) { r = 0.0; g = 0.0; b = 1.0; }
        out.red()[i] = r;
        out.green()[i] = g;
        out.blue()[i] = b;
    }
    return out;
}

} // namespace retseg
