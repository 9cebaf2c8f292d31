#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "faceq/degrade.hpp"
#include "faceq/dffs.hpp"
#include "faceq/harness.hpp"
#include "faceq/image_io.hpp"
#include "faceq/model_io.hpp"
#include "faceq/quality_model.hpp"
#include "faceq/selection.hpp"
#include "faceq/synthetic.hpp"

namespace fs = std::filesystem;
using namespace faceq;

namespace {

std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

// Directories expand to their image files in lexicographic order; plain file
// arguments pass through unchanged and in place.
std::vector<std::string> expand_inputs(const std::vector<std::string>& args)
{
    std::vector<std::string> paths;
    for (const std::string& arg : args) {
        if (fs::is_directory(arg)) {
            std::vector<std::string> entries;
            for (const fs::directory_entry& entry : fs::directory_iterator(arg))
                if (entry.is_regular_file() && has_image_extension(entry.path().string()))
                    entries.push_back(entry.path().string());
            std::sort(entries.begin(), entries.end());
            paths.insert(paths.end(), entries.begin(), entries.end());
        } else {
            paths.push_back(arg);
        }
    }
    return paths;
}

GrayImage load_for_model(const std::string& path, int image_side)
{
    GrayImage img = read_image(path);
    if (img.width == image_side && img.height == image_side)
        return img;
    return resize_bilinear(img, image_side, image_side);
}

// Either model kind behind one scoring call, so score/rank/select work with
// both the patch-Gaussian model and the eigenface baseline.
struct LoadedModel {
    ModelKind kind = ModelKind::patch_gaussian;
    QualityModel quality;
    EigenfaceModel eigen;

    int side() const
    {
        return kind == ModelKind::patch_gaussian ? quality.image_side : eigen.image_side;
    }

    double score(const GrayImage& img) const
    {
        return kind == ModelKind::patch_gaussian ? quality_score(quality, img)
                                                 : dffs_quality(eigen, img);
    }
};

LoadedModel load_any_model(const std::string& path)
{
    LoadedModel m;
    const std::string text = read_text_file(path);
    m.kind = peek_model_kind(text);
    if (m.kind == ModelKind::patch_gaussian)
        m.quality = load_quality_model(text);
    else
        m.eigen = load_eigenface_model(text);
    return m;
}

std::vector<ScoredImage> score_paths(const LoadedModel& model, const std::vector<std::string>& paths)
{
    std::vector<ScoredImage> scored;
    scored.reserve(paths.size());
    for (const std::string& path : paths) {
        const GrayImage img = load_for_model(path, model.side());
        scored.push_back(ScoredImage{path, model.score(img), 0});
    }
    return scored;
}

struct TrainArgs {
    std::string input_dir;
    std::string output;
    std::string kind = "patch-gaussian";
    int image_side = 64;
    int patch_size = 8;
    int overlap = 7;
    int d = 3;
    double ridge_scale = 1e-6;
    double ridge_floor = 1e-10;
    int components = 0;
};

int run_train(const TrainArgs& args)
{
    const std::vector<std::string> paths = expand_inputs({args.input_dir});
    std::vector<GrayImage> images;
    images.reserve(paths.size());
    for (const std::string& path : paths) {
        try {
            images.push_back(load_for_model(path, args.image_side));
        } catch (const std::exception& e) {
            std::cerr << "warning: skipping " << path << ": " << e.what() << "\n";
        }
    }
    if (images.empty()) {
        std::cerr << "error: no readable images in " << args.input_dir << "\n";
        return 1;
    }

    if (args.kind == "patch-gaussian") {
        TrainConfig cfg;
        cfg.patch.patch_size = args.patch_size;
        cfg.patch.overlap = args.overlap;
        cfg.image_side = args.image_side;
        cfg.d = args.d;
        cfg.ridge_scale = args.ridge_scale;
        cfg.ridge_floor = args.ridge_floor;
        QualityModel model = train(images, cfg);
        model.meta.created_at = utc_timestamp();
        save_model_file(model, args.output);
        std::cout << "trained on " << images.size() << " images, "
                  << model.gaussians.size() << " patch locations\n";
    } else {
        EigenfaceModel model = train_dffs_baseline(images, args.components);
        model.meta.created_at = utc_timestamp();
        save_model_file(model, args.output);
        std::cout << "trained on " << images.size() << " images, "
                  << model.component_count() << " components\n";
    }
    return 0;
}

int run_score(const std::string& model_path, const std::vector<std::string>& inputs)
{
    const LoadedModel model = load_any_model(model_path);
    for (const ScoredImage& s : score_paths(model, expand_inputs(inputs)))
        std::cout << s.image_id << "\t" << fmt_double(s.score) << "\n";
    return 0;
}

int run_rank(const std::string& model_path, const std::vector<std::string>& inputs)
{
    const LoadedModel model = load_any_model(model_path);
    const SelectionResult result = rank_by_quality(score_paths(model, expand_inputs(inputs)));
    for (const ScoredImage& s : result.ordered)
        std::cout << s.rank + 1 << "\t" << s.image_id << "\t" << fmt_double(s.score) << "\n";
    return 0;
}

int run_select(const std::string& model_path, const std::vector<std::string>& inputs,
               int top_n, double reject_fraction, const std::string& calibration_path)
{
    const bool use_n = top_n > 0;
    const bool use_threshold = !calibration_path.empty();
    if (use_n == use_threshold) {
        std::cerr << "error: pass exactly one of -n or --calibration with --reject-fraction\n";
        return 1;
    }

    const LoadedModel model = load_any_model(model_path);
    SelectionResult result = rank_by_quality(score_paths(model, expand_inputs(inputs)));
    if (use_n) {
        result = select_top_n(std::move(result), static_cast<std::size_t>(top_n));
    } else {
        std::ifstream in(calibration_path);
        if (!in) {
            std::cerr << "error: cannot open " << calibration_path << "\n";
            return 1;
        }
        std::vector<double> calibration;
        double value = 0.0;
        while (in >> value)
            calibration.push_back(value);
        const double tau = calibrate_threshold(std::move(calibration), reject_fraction);
        result = select_by_threshold(std::move(result), tau);
        std::cerr << "threshold: " << fmt_double(tau) << "\n";
    }

    std::map<std::string, double> scores;
    for (const ScoredImage& s : result.ordered)
        scores[s.image_id] = s.score;
    for (const std::string& id : result.selected_ids)
        std::cout << id << "\t" << fmt_double(scores[id]) << "\n";
    return 0;
}

int run_degrade(const std::string& input, const std::string& kind_str, double magnitude,
                const std::string& output, int image_side)
{
    const DegradationKind kind = parse_kind(kind_str);
    const GrayImage img = load_for_model(input, image_side);

    const std::vector<double> grid = preset_grid(kind, image_side);
    if (std::find(grid.begin(), grid.end(), magnitude) == grid.end())
        std::cerr << "warning: magnitude " << fmt_double(magnitude)
                  << " is off the canonical " << kind_name(kind) << " grid\n";

    save_image(apply_degradation(img, Degradation{kind, magnitude}), output);
    return 0;
}

struct EvalArgs {
    std::string out_dir;
    std::uint64_t seed = 42;
    int train_count = 200;
    int test_count = 50;
    int image_side = 64;
    std::string scorer = "proposed";
    int patch_size = 8;
    int overlap = 7;
    int d = 3;
    double ridge_scale = 1e-6;
    double ridge_floor = 1e-10;
    std::vector<int> top_n = {1, 2, 4, 8};
};

int run_eval(const EvalArgs& args)
{
    const std::vector<GrayImage> train_faces =
        generate_synthetic_faces(args.seed, args.train_count, args.image_side);
    const std::vector<GrayImage> test_faces =
        generate_synthetic_faces(args.seed + 1, args.test_count, args.image_side);

    GroupScorer scorer;
    if (args.scorer == "proposed") {
        TrainConfig cfg;
        cfg.patch.patch_size = args.patch_size;
        cfg.patch.overlap = args.overlap;
        cfg.image_side = args.image_side;
        cfg.d = args.d;
        cfg.ridge_scale = args.ridge_scale;
        cfg.ridge_floor = args.ridge_floor;
        QualityModel model = train(train_faces, cfg);
        scorer = per_image_scorer(
            [model = std::move(model)](const GrayImage& img) { return quality_score(model, img); });
    } else if (args.scorer == "dffs") {
        EigenfaceModel model = train_dffs_baseline(train_faces, 0);
        scorer = per_image_scorer(
            [model = std::move(model)](const GrayImage& img) { return dffs_quality(model, img); });
    } else if (args.scorer == "cheat") {
        scorer = cheating_scorer();
    } else {
        std::cerr << "error: unknown scorer " << args.scorer << "\n";
        return 1;
    }

    std::map<DegradationKind, std::vector<double>> grids;
    for (DegradationKind kind : all_kinds())
        grids[kind] = preset_grid(kind, args.image_side);
    const std::vector<VariantGroup> groups = build_variant_groups(test_faces, all_kinds(), grids);

    const EvalReport report = best_variant_accuracy(groups, scorer);
    const std::vector<CurvePoint> curve = subset_quality_curve(groups, scorer, args.top_n);

    fs::create_directories(args.out_dir);

    std::ostringstream accuracy_csv;
    accuracy_csv << "kind,accuracy_percent\n";
    for (const auto& [kind, pct] : report.per_kind)
        accuracy_csv << kind_name(kind) << "," << fmt_double(pct) << "\n";
    accuracy_csv << "overall," << fmt_double(report.overall) << "\n";
    write_text_file((fs::path(args.out_dir) / "accuracy.csv").string(), accuracy_csv.str());

    std::ostringstream curve_csv;
    curve_csv << "n,clean_or_mild_fraction\n";
    for (const CurvePoint& point : curve)
        curve_csv << point.n << "," << fmt_double(point.clean_or_mild_fraction) << "\n";
    write_text_file((fs::path(args.out_dir) / "curve.csv").string(), curve_csv.str());

    std::ostringstream txt;
    txt << "synthetic benchmark\n";
    txt << "seed: " << args.seed << "\n";
    txt << "training faces: " << args.train_count << "\n";
    txt << "test faces: " << args.test_count << "\n";
    txt << "image side: " << args.image_side << "\n";
    txt << "scorer: " << args.scorer << "\n";
    txt << "\nbest-variant accuracy (percent)\n";
    for (const auto& [kind, pct] : report.per_kind)
        txt << "  " << kind_name(kind) << ": " << fmt_double(pct) << "\n";
    txt << "  overall: " << fmt_double(report.overall) << "\n";
    txt << "\ntop-N clean-or-mild fraction\n";
    for (const CurvePoint& point : curve)
        txt << "  N=" << point.n << ": " << fmt_double(point.clean_or_mild_fraction) << "\n";
    write_text_file((fs::path(args.out_dir) / "report.txt").string(), txt.str());

    std::cout << txt.str();
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"patch-based probabilistic face image quality"};
    app.require_subcommand(1);

    TrainArgs train_args;
    CLI::App* cmd_train = app.add_subcommand("train", "fit a model on a directory of face images");
    cmd_train->add_option("--input", train_args.input_dir, "directory of images")->required();
    cmd_train->add_option("--output", train_args.output, "model file to write")->required();
    cmd_train->add_option("--kind", train_args.kind, "model kind")
        ->check(CLI::IsMember({"patch-gaussian", "eigenface"}));
    cmd_train->add_option("--image-side", train_args.image_side, "working face size");
    cmd_train->add_option("--patch-size", train_args.patch_size, "patch side length");
    cmd_train->add_option("--overlap", train_args.overlap, "patch overlap in pixels");
    cmd_train->add_option("-d,--coefficients", train_args.d, "feature coefficients per patch");
    cmd_train->add_option("--ridge-scale", train_args.ridge_scale, "relative covariance ridge");
    cmd_train->add_option("--ridge-floor", train_args.ridge_floor, "absolute covariance ridge floor");
    cmd_train->add_option("-k,--components", train_args.components,
                          "eigenface components (0 = auto)");

    std::string model_path;
    std::vector<std::string> inputs;
    CLI::App* cmd_score = app.add_subcommand("score", "print a quality score per image");
    cmd_score->add_option("--model", model_path, "model file")->required();
    cmd_score->add_option("inputs", inputs, "image files or directories")->required();

    CLI::App* cmd_rank = app.add_subcommand("rank", "print all images in descending quality order");
    cmd_rank->add_option("--model", model_path, "model file")->required();
    cmd_rank->add_option("inputs", inputs, "image files or directories")->required();

    int top_n = 0;
    double reject_fraction = 0.05;
    std::string calibration_path;
    CLI::App* cmd_select = app.add_subcommand("select", "keep the top-N or above-threshold subset");
    cmd_select->add_option("--model", model_path, "model file")->required();
    cmd_select->add_option("inputs", inputs, "image files or directories")->required();
    cmd_select->add_option("-n,--top-n", top_n, "keep the N best images");
    cmd_select->add_option("--reject-fraction", reject_fraction,
                           "calibration quantile rejected by the threshold");
    cmd_select->add_option("--calibration", calibration_path,
                           "file of calibration scores, one per line");

    std::string degrade_input, degrade_kind, degrade_output;
    double degrade_magnitude = 0.0;
    int degrade_side = 64;
    CLI::App* cmd_degrade = app.add_subcommand("degrade", "apply one synthetic degradation");
    cmd_degrade->add_option("--input", degrade_input, "input image")->required();
    cmd_degrade->add_option("--kind", degrade_kind, "degradation kind")->required();
    cmd_degrade->add_option("--magnitude", degrade_magnitude, "degradation magnitude")->required();
    cmd_degrade->add_option("--output", degrade_output, "output image")->required();
    cmd_degrade->add_option("--image-side", degrade_side, "working face size");

    EvalArgs eval_args;
    CLI::App* cmd_eval = app.add_subcommand("eval", "run the synthetic degradation benchmark");
    cmd_eval->add_option("--out-dir", eval_args.out_dir, "report directory")->required();
    cmd_eval->add_option("--seed", eval_args.seed, "generator seed");
    cmd_eval->add_option("--train-count", eval_args.train_count, "training face count");
    cmd_eval->add_option("--test-count", eval_args.test_count, "held-out face count");
    cmd_eval->add_option("--image-side", eval_args.image_side, "working face size");
    cmd_eval->add_option("--scorer", eval_args.scorer, "proposed, dffs, or cheat (oracle)")
        ->check(CLI::IsMember({"proposed", "dffs", "cheat"}));
    cmd_eval->add_option("--patch-size", eval_args.patch_size, "patch side length");
    cmd_eval->add_option("--overlap", eval_args.overlap, "patch overlap in pixels");
    cmd_eval->add_option("-d,--coefficients", eval_args.d, "feature coefficients per patch");
    cmd_eval->add_option("--ridge-scale", eval_args.ridge_scale, "relative covariance ridge");
    cmd_eval->add_option("--ridge-floor", eval_args.ridge_floor, "absolute covariance ridge floor");
    cmd_eval->add_option("--top-n", eval_args.top_n, "subset sizes for the selection curve");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_train->parsed())
            return run_train(train_args);
        if (cmd_score->parsed())
            return run_score(model_path, inputs);
        if (cmd_rank->parsed())
            return run_rank(model_path, inputs);
        if (cmd_select->parsed())
            return run_select(model_path, inputs, top_n, reject_fraction, calibration_path);
        if (cmd_degrade->parsed())
            return run_degrade(degrade_input, degrade_kind, degrade_magnitude,
                               degrade_output, degrade_side);
        if (cmd_eval->parsed())
            return run_eval(eval_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
