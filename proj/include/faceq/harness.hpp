#ifndef FACEQ_HARNESS_HPP
#define FACEQ_HARNESS_HPP

#include "faceq/degrade.hpp"
#include "faceq/image.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace faceq {

struct VariantGroup {
    std::string identity_id;
    int clean_index = 0;
    std::vector<GrayImage> images;
    std::vector<Degradation> labels;

    DegradationKind kind() const { return labels.front().kind; }
};

struct EvalReport {
    std::vector<std::pair<DegradationKind, double>> per_kind;
    double overall = 0.0;
};

using ImageScorer = std::function<double(const GrayImage&)>;
using GroupScorer = std::function<std::vector<double>(const VariantGroup&)>;

GroupScorer per_image_scorer(ImageScorer f);
GroupScorer cheating_scorer();

std::vector<VariantGroup> build_variant_groups(
    const std::vector<GrayImage>& images,
    const std::vector<DegradationKind>& kinds,
    const std::map<DegradationKind, std::vector<double>>& grids);

EvalReport best_variant_accuracy(const std::vector<VariantGroup>& groups, const GroupScorer& scorer);

struct CurvePoint {
    int n = 0;
    double clean_or_mild_fraction = 0.0;
};

std::vector<CurvePoint> subset_quality_curve(const std::vector<VariantGroup>& groups,
                                             const GroupScorer& scorer,
                                             const std::vector<int>& n_values);

} // namespace faceq

#endif
