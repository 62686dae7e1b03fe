#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "retseg/image.hpp"

namespace retseg {

struct ConfusionCounts {
    uint64_t tp = 0, tn = 0, fp = 0, fn = 0;

    uint64_t total() const noexcept { return tp + tn + fp + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp; tn += o.tn; fp += o.fp; fn += o.fn;
        return *this;
    }
};

/// Sensitivity TP/(TP+FN), specificity TN/(TN+FP), accuracy (TP+TN)/total.
/// A zero denominator yields NaN ("undefined"), never a throw.
struct Metrics {
    double sensitivity = 0.0;
    double specificity = 0.0;
    double accuracy = 0.0;
};

/// Pixel counts over the field of view only; positive class = vessel.
ConfusionCounts confusion(const BinaryImage& pred, const BinaryImage& truth, const FovMask& fov);

Metrics metrics(const ConfusionCounts& c);

/// Dice overlap 2 TP / (2 TP + FP + FN); NaN when both masks are empty.
double dice(const ConfusionCounts& c);

struct ImageEval {
    std::string image_id;
    ConfusionCounts counts;
    Metrics metrics;
};

struct SetReport {
    std::vector<ImageEval> per_image;
    /// Unweighted mean across images; undefined (NaN) entries are skipped
    /// per metric.
    Metrics mean;
};

SetReport evaluate_set(const std::vector<ImageEval>& per_image);

/// CSV with the stable column set
/// image_id,tp,tn,fp,fn,sensitivity,specificity,accuracy and a final
/// summary row ("mean"). Undefined metrics print empty fields.
std::string report_csv(const SetReport& report);

/// Diagnostic overlay: TP green, FP red, FN blue, TN gray from `base`.
RgbImage overlay(const BinaryImage& pred, const BinaryImage& truth, const FovMask& fov,
                 const RasterImage& base);

} // namespace retseg
