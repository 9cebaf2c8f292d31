#include "faceq/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace faceq {

namespace {

// Distance of a degradation from its kind's identity magnitude, so mildness is
// comparable across kinds (blur counts down from the full side, scale from 1).
double identity_distance(const Degradation& deg, int side)
{
    return std::abs(deg.magnitude - identity_magnitude(deg.kind, side));
}

std::vector<bool> clean_or_mild_flags(const VariantGroup& group)
{
    const int side = group.images.front().width;
    double mildest = 0.0;
    bool any = false;
    for (const Degradation& deg : group.labels) {
        const double dist = identity_distance(deg, side);
        if (dist <= 0.0)
            continue;
        if (!any || dist < mildest) {
            mildest = dist;
            any = true;
        }
    }
    std::vector<bool> flags(group.labels.size(), false);
    for (std::size_t i = 0; i < group.labels.size(); ++i) {
        const double dist = identity_distance(group.labels[i], side);
        flags[i] = dist <= 0.0 || (any && dist <= mildest * (1.0 + 1e-9));
    }
    return flags;
}

} // namespace

GroupScorer per_image_scorer(ImageScorer f)
{
    return [f = std::move(f)](const VariantGroup& group) {
        std::vector<double> scores;
        scores.reserve(group.images.size());
        for (const GrayImage& img : group.images)
            scores.push_back(f(img));
        return scores;
    };
}

GroupScorer cheating_scorer()
{
    return [](const VariantGroup& group) {
        const GrayImage& clean = group.images[static_cast<std::size_t>(group.clean_index)];
        std::vector<double> scores;
        scores.reserve(group.images.size());
        for (const GrayImage& img : group.images) {
            double dist = 0.0;
            for (std::size_t i = 0; i < img.pixels.size(); ++i)
                dist += std::abs(img.pixels[i] - clean.pixels[i]);
            scores.push_back(-dist);
        }
        return scores;
    };
}

std::vector<VariantGroup> build_variant_groups(
    const std::vector<GrayImage>& images,
    const std::vector<DegradationKind>& kinds,
    const std::map<DegradationKind, std::vector<double>>& grids)
{
    if (images.empty())
        throw std::invalid_argument("build_variant_groups: no images");

    const int side = images.front().width;
    for (DegradationKind kind : kinds) {
        const auto it = grids.find(kind);
        if (it == grids.end())
            throw std::invalid_argument("build_variant_groups: missing grid for " + std::string(kind_name(kind)));
        const double identity = identity_magnitude(kind, side);
        const bool has_identity = std::any_of(it->second.begin(), it->second.end(),
                                              [&](double m) { return m == identity; });
        if (!has_identity)
            throw std::invalid_argument("build_variant_groups: grid for " + std::string(kind_name(kind))
                                        + " lacks the identity entry");
    }

    std::vector<VariantGroup> groups;
    groups.reserve(images.size() * kinds.size());
    for (std::size_t idx = 0; idx < images.size(); ++idx) {
        for (DegradationKind kind : kinds) {
            const double identity = identity_magnitude(kind, side);
            VariantGroup group;
            group.identity_id = std::to_string(idx);
            group.clean_index = 0;
            group.images.push_back(images[idx]);
            group.labels.push_back(Degradation{kind, identity});
            for (double magnitude : grids.at(kind)) {
                if (magnitude == identity)
                    continue;
                group.images.push_back(apply_degradation(images[idx], Degradation{kind, magnitude}));
                group.labels.push_back(Degradation{kind, magnitude});
            }
            groups.push_back(std::move(group));
        }
    }
    return groups;
}

EvalReport best_variant_accuracy(const std::vector<VariantGroup>& groups, const GroupScorer& scorer)
{
    if (groups.empty())
        throw std::invalid_argument("best_variant_accuracy: no groups");

    std::map<DegradationKind, int> totals;
    std::map<DegradationKind, int> successes;
    for (const VariantGroup& group : groups) {
        const std::vector<double> scores = scorer(group);
        if (scores.size() != group.images.size())
            throw std::invalid_argument("best_variant_accuracy: scorer returned wrong count");
        const double clean_score = scores[static_cast<std::size_t>(group.clean_index)];
        bool strict_max = true;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (static_cast<int>(i) == group.clean_index)
                continue;
            if (!(clean_score > scores[i])) {
                strict_max = false;
                break;
            }
        }
        ++totals[group.kind()];
        if (strict_max)
            ++successes[group.kind()];
    }

    EvalReport report;
    double sum = 0.0;
    for (const auto& [kind, total] : totals) {
        const double pct = 100.0 * successes[kind] / total;
        report.per_kind.emplace_back(kind, pct);
        sum += pct;
    }
    report.overall = sum / static_cast<double>(report.per_kind.size());
    return report;
}

std::vector<CurvePoint> subset_quality_curve(const std::vector<VariantGroup>& groups,
                                             const GroupScorer& scorer,
                                             const std::vector<int>& n_values)
{
    if (groups.empty())
        throw std::invalid_argument("subset_quality_curve: no groups");
    if (n_values.empty())
        throw std::invalid_argument("subset_quality_curve: no N values");

    struct Entry {
        double score;
        bool clean_or_mild;
    };

    std::vector<std::string> identity_order;
    std::map<std::string, std::vector<Entry>> sets;
    for (const VariantGroup& group : groups) {
        const std::vector<double> scores = scorer(group);
        if (scores.size() != group.images.size())
            throw std::invalid_argument("subset_quality_curve: scorer returned wrong count");
        const std::vector<bool> flags = clean_or_mild_flags(group);
        auto it = sets.find(group.identity_id);
        if (it == sets.end()) {
            identity_order.push_back(group.identity_id);
            it = sets.emplace(group.identity_id, std::vector<Entry>{}).first;
        }
        for (std::size_t i = 0; i < scores.size(); ++i)
            it->second.push_back(Entry{scores[i], flags[i]});
    }

    std::vector<CurvePoint> curve;
    curve.reserve(n_values.size());
    for (int n : n_values) {
        if (n < 1)
            throw std::invalid_argument("subset_quality_curve: N must be >= 1");
        long long selected = 0;
        long long good = 0;
        for (const std::string& id : identity_order) {
            std::vector<Entry> entries = sets.at(id);
            std::stable_sort(entries.begin(), entries.end(),
                             [](const Entry& a, const Entry& b) { return a.score > b.score; });
            const int take = std::min<int>(n, static_cast<int>(entries.size()));
            for (int i = 0; i < take; ++i) {
                ++selected;
                if (entries[static_cast<std::size_t>(i)].clean_or_mild)
                    ++good;
            }
        }
        curve.push_back(CurvePoint{n, static_cast<double>(good) / static_cast<double>(selected)});
    }
    return curve;
}

} // namespace faceq
