#include "faceq/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace faceq {

SelectionResult rank_by_quality(const std::vector<ScoredImage>& scored)
{
    for (const ScoredImage& s : scored)
        if (!std::isfinite(s.score))
            throw std::invalid_argument("rank_by_quality: non-finite score for " + s.image_id);

    SelectionResult result;
    result.ordered = scored;
    std::stable_sort(result.ordered.begin(), result.ordered.end(),
                     [](const ScoredImage& a, const ScoredImage& b) { return a.score > b.score; });
    for (std::size_t i = 0; i < result.ordered.size(); ++i) {
        result.ordered[i].rank = i;
        result.selected_ids.push_back(result.ordered[i].image_id);
    }
    return result;
}

SelectionResult select_top_n(SelectionResult result, std::size_t n)
{
    if (n < 1)
        throw std::invalid_argument("select_top_n: n must be >= 1");
    const std::size_t keep = std::min(n, result.ordered.size());
    result.selected_ids.clear();
    for (std::size_t i = 0; i < keep; ++i)
        result.selected_ids.push_back(result.ordered[i].image_id);
    return result;
}

SelectionResult select_by_threshold(SelectionResult result, double tau)
{
    result.selected_ids.clear();
    for (const ScoredImage& s : result.ordered)
        if (s.score >= tau)
            result.selected_ids.push_back(s.image_id);
    return result;
}

double calibrate_threshold(std::vector<double> training_scores, double reject_fraction)
{
    if (training_scores.empty())
        throw std::invalid_argument("calibrate_threshold: no training scores");
    if (!(reject_fraction >= 0.0 && reject_fraction < 1.0))
        throw std::invalid_argument("calibrate_threshold: reject_fraction must be in [0, 1)");
    for (double s : training_scores)
        if (!std::isfinite(s))
            throw std::invalid_argument("calibrate_threshold: non-finite score");

    std::sort(training_scores.begin(), training_scores.end());
    const std::size_t m = training_scores.size();
    if (m == 1)
        return training_scores[0];
    const double pos = reject_fraction * static_cast<double>(m - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= m)
        return training_scores[m - 1];
    return training_scores[lo] + frac * (training_scores[lo + 1] - training_scores[lo]);
}

} // namespace faceq
