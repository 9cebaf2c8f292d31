#ifndef FACEQ_MODEL_IO_HPP
#define FACEQ_MODEL_IO_HPP

#include "faceq/dffs.hpp"
#include "faceq/quality_model.hpp"

#include <string>

namespace faceq {

enum class ModelKind {
    patch_gaussian,
    eigenface,
};

// Models are stored as a single JSON document. Doubles use the shortest
// decimal form that parses back to the identical bits, so a save/load round
// trip is exact.
std::string save_quality_model(const QualityModel& model);
std::string save_eigenface_model(const EigenfaceModel& model);

QualityModel load_quality_model(const std::string& text);
EigenfaceModel load_eigenface_model(const std::string& text);

void save_model_file(const QualityModel& model, const std::string& path);
void save_model_file(const EigenfaceModel& model, const std::string& path);

QualityModel load_quality_model_file(const std::string& path);
EigenfaceModel load_eigenface_model_file(const std::string& path);

ModelKind peek_model_kind(const std::string& text);
ModelKind peek_model_kind_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace faceq

#endif
