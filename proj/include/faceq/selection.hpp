#ifndef FACEQ_SELECTION_HPP
#define FACEQ_SELECTION_HPP

#include "faceq/quality_model.hpp"

#include <string>
#include <vector>

namespace faceq {

// Ranking output: images in descending score order plus the retained subset.
// `selected_ids` is a prefix of the ordering in top-N mode, or exactly the
// ids with score >= tau in threshold mode.
struct SelectionResult {
    std::vector<ScoredImage> ordered; // rank = position, scores non-increasing
    std::vector<std::string> selected_ids;
};

// Stable descending sort; equal scores keep their input order. Rejects
// non-finite scores.
SelectionResult rank_by_quality(const std::vector<ScoredImage>& scored);

SelectionResult select_top_n(SelectionResult result, std::size_t n);

// Keep every image scoring at least tau.
SelectionResult select_by_threshold(SelectionResult result, double tau);

// Empirical quantile (linear interpolation between order statistics) of the
// training scores at `reject_fraction`. Accept rule at scoring time:
// score >= tau.
double calibrate_threshold(std::vector<double> training_scores, double reject_fraction);

} // namespace faceq

#endif
