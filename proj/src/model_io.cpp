#include "faceq/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace faceq {

namespace {

using nlohmann::json;

constexpr const char* kFormatName = "faceq-model";
constexpr int kFormatVersion = 1;

json meta_to_json(const TrainingMeta& meta)
{
    return json{{"sample_count", meta.sample_count},
                {"ridge_scale", meta.ridge_scale},
                {"ridge_floor", meta.ridge_floor},
                {"created_at", meta.created_at}};
}

TrainingMeta meta_from_json(const json& j)
{
    TrainingMeta meta;
    meta.sample_count = j.at("sample_count").get<long>();
    meta.ridge_scale = j.at("ridge_scale").get<double>();
    meta.ridge_floor = j.at("ridge_floor").get<double>();
    meta.created_at = j.at("created_at").get<std::string>();
    return meta;
}

json parse_document(const std::string& text)
{
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw std::runtime_error("model file is not valid JSON");
    if (!doc.is_object())
        throw std::runtime_error("model file is not a JSON object");
    if (doc.value("format", "") != kFormatName)
        throw std::runtime_error("not a model file (missing format marker)");
    const int version = doc.value("format_version", -1);
    if (version != kFormatVersion)
        throw std::runtime_error("unsupported model format_version "
                                 + std::to_string(version) + " (expected "
                                 + std::to_string(kFormatVersion) + ")");
    return doc;
}

ModelKind kind_from_document(const json& doc)
{
    const std::string kind = doc.value("kind", "");
    if (kind == "patch-gaussian")
        return ModelKind::patch_gaussian;
    if (kind == "eigenface")
        return ModelKind::eigenface;
    throw std::runtime_error("unknown model kind \"" + kind + "\"");
}

std::vector<double> finite_numbers(const json& j, std::size_t expected, const char* what)
{
    if (!j.is_array() || j.size() != expected)
        throw std::runtime_error(std::string(what) + ": expected " + std::to_string(expected)
                                 + " numbers");
    std::vector<double> out;
    out.reserve(expected);
    for (const json& v : j) {
        if (!v.is_number())
            throw std::runtime_error(std::string(what) + ": non-numeric entry");
        const double x = v.get<double>();
        if (!std::isfinite(x))
            throw std::runtime_error(std::string(what) + ": non-finite entry");
        out.push_back(x);
    }
    return out;
}

} // namespace

std::string save_quality_model(const QualityModel& model)
{
    json locations = json::array();
    for (const LocationGaussian& g : model.gaussians) {
        json mean = json::array();
        for (double v : g.mean)
            mean.push_back(v);
        json cov = json::array();
        for (double v : g.covariance.values())
            cov.push_back(v);
        locations.push_back(json{{"mean", std::move(mean)}, {"cov", std::move(cov)}});
    }
    json doc{{"format", kFormatName},
             {"format_version", kFormatVersion},
             {"kind", "patch-gaussian"},
             {"image_side", model.image_side},
             {"patch_size", model.patch.patch_size},
             {"overlap", model.patch.overlap},
             {"d", model.d},
             {"n", static_cast<int>(model.gaussians.size())},
             {"locations", std::move(locations)},
             {"training_meta", meta_to_json(model.meta)}};
    return doc.dump();
}

QualityModel load_quality_model(const std::string& text)
{
    const json doc = parse_document(text);
    if (kind_from_document(doc) != ModelKind::patch_gaussian)
        throw std::runtime_error("model file holds a different model kind");

    QualityModel model;
    model.image_side = doc.at("image_side").get<int>();
    model.patch.patch_size = doc.at("patch_size").get<int>();
    model.patch.overlap = doc.at("overlap").get<int>();
    model.d = doc.at("d").get<int>();
    model.patch.validate();
    if (model.image_side < model.patch.patch_size)
        throw std::runtime_error("model image_side smaller than patch_size");
    if (model.d < 1 || model.d > model.patch.patch_size * model.patch.patch_size - 1)
        throw std::runtime_error("model d out of range");

    const int n = doc.at("n").get<int>();
    if (n != model.location_count())
        throw std::runtime_error("model location count does not match its geometry");
    const json& locations = doc.at("locations");
    if (!locations.is_array() || static_cast<int>(locations.size()) != n)
        throw std::runtime_error("model locations array has the wrong length");

    const std::size_t d = static_cast<std::size_t>(model.d);
    model.gaussians.reserve(static_cast<std::size_t>(n));
    for (const json& loc : locations) {
        std::vector<double> mean = finite_numbers(loc.at("mean"), d, "location mean");
        const std::vector<double> cov_values = finite_numbers(loc.at("cov"), d * d, "location cov");
        Mat cov(model.d, model.d);
        std::copy(cov_values.begin(), cov_values.end(), cov.data());
        model.gaussians.push_back(make_location_gaussian(std::move(mean), std::move(cov)));
    }
    model.meta = meta_from_json(doc.at("training_meta"));
    return model;
}

std::string save_eigenface_model(const EigenfaceModel& model)
{
    const int dim = model.dimension();
    const int k = model.component_count();
    json mean = json::array();
    for (double v : model.mean_face)
        mean.push_back(v);
    json components = json::array();
    for (int c = 0; c < k; ++c) {
        json column = json::array();
        for (int i = 0; i < dim; ++i)
            column.push_back(model.basis(i, c));
        components.push_back(std::move(column));
    }
    json doc{{"format", kFormatName},
             {"format_version", kFormatVersion},
             {"kind", "eigenface"},
             {"image_side", model.image_side},
             {"k", k},
             {"mean_face", std::move(mean)},
             {"components", std::move(components)},
             {"training_meta", meta_to_json(model.meta)}};
    return doc.dump();
}

EigenfaceModel load_eigenface_model(const std::string& text)
{
    const json doc = parse_document(text);
    if (kind_from_document(doc) != ModelKind::eigenface)
        throw std::runtime_error("model file holds a different model kind");

    EigenfaceModel model;
    model.image_side = doc.at("image_side").get<int>();
    if (model.image_side < 1)
        throw std::runtime_error("model image_side out of range");
    const std::size_t dim = static_cast<std::size_t>(model.image_side)
                            * static_cast<std::size_t>(model.image_side);
    const int k = doc.at("k").get<int>();
    if (k < 1)
        throw std::runtime_error("model k out of range");

    model.mean_face = finite_numbers(doc.at("mean_face"), dim, "mean_face");
    const json& components = doc.at("components");
    if (!components.is_array() || static_cast<int>(components.size()) != k)
        throw std::runtime_error("model components array has the wrong length");
    model.basis = Mat(static_cast<int>(dim), k);
    for (int c = 0; c < k; ++c) {
        const std::vector<double> column = finite_numbers(components[static_cast<std::size_t>(c)],
                                                          dim, "component");
        for (std::size_t i = 0; i < dim; ++i)
            model.basis(static_cast<int>(i), c) = column[i];
    }

    // Orthonormality check mirrors the training invariant.
    for (int a = 0; a < k; ++a) {
        for (int b = a; b < k; ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < dim; ++i)
                dot += model.basis(static_cast<int>(i), a) * model.basis(static_cast<int>(i), b);
            const double want = a == b ? 1.0 : 0.0;
            if (std::abs(dot - want) > 1e-8)
                throw std::runtime_error("model basis is not orthonormal");
        }
    }
    model.meta = meta_from_json(doc.at("training_meta"));
    return model;
}

ModelKind peek_model_kind(const std::string& text)
{
    return kind_from_document(parse_document(text));
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (!in)
        throw std::runtime_error("failed reading " + path);
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out)
        throw std::runtime_error("failed writing " + path);
}

void save_model_file(const QualityModel& model, const std::string& path)
{
    write_text_file(path, save_quality_model(model));
}

void save_model_file(const EigenfaceModel& model, const std::string& path)
{
    write_text_file(path, save_eigenface_model(model));
}

QualityModel load_quality_model_file(const std::string& path)
{
    return load_quality_model(read_text_file(path));
}

EigenfaceModel load_eigenface_model_file(const std::string& path)
{
    return load_eigenface_model(read_text_file(path));
}

ModelKind peek_model_kind_file(const std::string& path)
{
    return peek_model_kind(read_text_file(path));
}

} // namespace faceq
