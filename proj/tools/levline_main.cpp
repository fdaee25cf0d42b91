#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "levline/datasets.hpp"
#include "levline/detector.hpp"
#include "levline/evaluation.hpp"
#include "levline/record.hpp"
#include "levline/svg.hpp"

namespace fs = std::filesystem;
using namespace levline;

namespace {

constexpr double kEvalMinLength = 15.0; // applied to every record before matching

void add_param_flags(CLI::App* cmd, DetectorParams& p) {
    cmd->add_option("--grad-thresh", p.grad_thresh, "Normalized gradient magnitude threshold");
    cmd->add_option("--radius", p.equalize_radius, "Anchor equalization radius (px)");
    cmd->add_option("--inlier-ratio", p.inlier_ratio, "Validation inlier ratio");
    cmd->add_option("--dist-thresh", p.dist_thresh, "Validation distance threshold (px)");
    cmd->add_option("--angle-thresh", p.angle_thresh, "Validation angle threshold (deg)");
    cmd->add_option("--rho", p.rho, "Angle term weight in the fitting loss");
    cmd->add_option("--min-length", p.min_length, "Minimum segment length (px)");
    cmd->add_option("--init-window", p.init_window, "Seed window size (points)");
    cmd->add_flag("--no-init-refine", [&p](size_t) { p.init_refine = false; },
                  "Skip the seed-window refinement");
    cmd->add_flag("--no-angle-check", [&p](size_t) { p.angle_validation = false; },
                  "Validate with coordinates only");
}

struct EvalConfigCli {
    std::string preset = "strict";
    double ed = -1.0, ea = -1.0, eo = -1.0;

    EvalConfig resolve() const {
        EvalConfig cfg = (preset == "loose") ? EvalConfig::loose() : EvalConfig::strict();
        if (ed > 0.0) cfg.dist_thresh = ed;
        if (ea > 0.0) cfg.angle_thresh = ea;
        if (eo > 0.0) cfg.overlap_thresh = eo;
        return cfg;
    }
};

void add_eval_flags(CLI::App* cmd, EvalConfigCli& c) {
    cmd->add_option("--config", c.preset, "Threshold preset")
        ->check(CLI::IsMember({"strict", "loose"}));
    cmd->add_option("--ed", c.ed, "Matching distance threshold (px)");
    cmd->add_option("--ea", c.ea, "Matching angle threshold (deg)");
    cmd->add_option("--eo", c.eo, "Matching overlap threshold (0..1]");
}

int run_detect(const std::string& image_path, const DetectorParams& params,
               const std::string& out_path, const std::string& svg_path) {
    const GrayImage img = load_grayscale(image_path);
    const DetectionResult res = detect_segments(img, params);

    DetectionRecord rec;
    rec.image = image_path;
    rec.width = img.width;
    rec.height = img.height;
    rec.params = params;
    rec.segments = res.segments;
    save_record(rec, out_path);

    if (!svg_path.empty()) save_svg_overlay(img, res.segments, &res.field, svg_path);

    std::cout << image_path << ": " << res.segments.size() << " segments ("
              << res.chains.size() << " chains) -> " << out_path << "\n";
    return 0;
}

MatchReport eval_records(const DetectionRecord& ref, const DetectionRecord& test,
                         const Homography& H, const EvalConfig& cfg) {
    const auto ref_segs = filter_min_length(ref.segments, kEvalMinLength);
    const auto test_segs = filter_min_length(test.segments, kEvalMinLength);
    return match_segments(ref_segs, test_segs, H, cfg);
}

void print_report(const MatchReport& r) {
    std::cout << "n_r=" << r.n_r << " n_t=" << r.n_t << " n_m=" << r.n_m << " rep=" << r.rep
              << "\n";
}

int run_eval(const std::string& ref_path, const std::string& test_path,
             const std::string& homog_path, const EvalConfig& cfg,
             const std::string& out_path) {
    const DetectionRecord ref = load_record(ref_path);
    const DetectionRecord test = load_record(test_path);
    const Homography H =
        homog_path.empty() ? Homography::identity() : parse_homography_file(homog_path);

    const MatchReport r = eval_records(ref, test, H, cfg);
    print_report(r);

    if (!out_path.empty()) {
        nlohmann::json pairs = nlohmann::json::array();
        for (auto [i, j] : r.pairs) pairs.push_back({i, j});
        nlohmann::json j{{"n_r", r.n_r}, {"n_t", r.n_t}, {"n_m", r.n_m},
                         {"rep", r.rep}, {"pairs", pairs}};
        std::ofstream out(out_path);
        if (!out) throw IoError(out_path + ": cannot open for writing");
        out << j.dump(2) << "\n";
    }
    return 0;
}

int run_bench(const std::string& root, const DetectorParams& params, const EvalConfig& cfg,
              const std::string& csv_path) {
    std::vector<Sequence> sequences;
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(root))
        if (e.is_directory()) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());

    for (const fs::path& d : dirs) {
        try {
            sequences.push_back(load_sequence(d));
        } catch (const std::exception& e) {
            std::cerr << "warning: skipping " << d.string() << ": " << e.what() << "\n";
        }
    }
    if (sequences.empty()) throw IoError(root + ": no loadable sequences");

    struct Row {
        std::string sequence, transform;
        int pairs = 0;
        double mean_rep = 0.0;
    };
    std::vector<Row> rows;
    std::map<std::string, std::pair<double, int>> by_transform; // sum, count over pairs

    for (const Sequence& seq : sequences) {
        const GrayImage ref_img = load_grayscale(seq.ref_image.string());
        const DetectionResult ref_det = detect_segments(ref_img, params);
        const auto ref_segs = filter_min_length(ref_det.segments, kEvalMinLength);

        double sum = 0.0;
        for (const auto& t : seq.tests) {
            const GrayImage test_img = load_grayscale(t.image.string());
            const DetectionResult test_det = detect_segments(test_img, params);
            const auto test_segs = filter_min_length(test_det.segments, kEvalMinLength);
            const MatchReport r = match_segments(ref_segs, test_segs, t.href_to_test, cfg);
            sum += r.rep;
            auto& agg = by_transform[seq.transformation];
            agg.first += r.rep;
            agg.second += 1;
        }
        rows.push_back(Row{seq.name, seq.transformation, static_cast<int>(seq.tests.size()),
                           sum / static_cast<double>(seq.tests.size())});
    }

    std::printf("%-24s %-16s %6s %10s\n", "sequence", "transform", "pairs", "mean_rep");
    for (const Row& r : rows)
        std::printf("%-24s %-16s %6d %10.4f\n", r.sequence.c_str(), r.transform.c_str(), r.pairs,
                    r.mean_rep);
    std::printf("\n%-24s %6s %10s\n", "transform", "pairs", "mean_rep");
    for (const auto& [label, agg] : by_transform)
        std::printf("%-24s %6d %10.4f\n", label.c_str(), agg.second, agg.first / agg.second);

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw IoError(csv_path + ": cannot open for writing");
        csv << "sequence,transform,pairs,mean_rep\n";
        csv.precision(10);
        for (const Row& r : rows)
            csv << r.sequence << "," << r.transform << "," << r.pairs << "," << r.mean_rep << "\n";
        csv << "\ntransform,pairs,mean_rep\n";
        for (const auto& [label, agg] : by_transform)
            csv << label << "," << agg.second << "," << agg.first / agg.second << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Line segment detection via level-line guided edge drawing"};
    app.require_subcommand(1);

    // detect
    auto* detect = app.add_subcommand("detect", "Detect segments in one image");
    std::string image_path, record_out, svg_out;
    DetectorParams params;
    detect->add_option("image", image_path, "Input image (PNG/PGM/PPM)")->required();
    detect->add_option("-o,--out", record_out, "Output record file")->required();
    detect->add_option("--svg", svg_out, "Optional SVG overlay");
    add_param_flags(detect, params);

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate two detection records");
    std::string ref_path, test_path, homog_path, report_out;
    EvalConfigCli eval_cfg;
    eval->add_option("ref", ref_path, "Reference record")->required();
    eval->add_option("test", test_path, "Test record")->required();
    eval->add_option("-H,--homography", homog_path, "Homography file (default: identity)");
    eval->add_option("-o,--out", report_out, "Optional JSON report");
    add_eval_flags(eval, eval_cfg);

    // bench
    auto* bench = app.add_subcommand("bench", "Evaluate every sequence under a dataset root");
    std::string bench_root, csv_out;
    DetectorParams bench_params;
    EvalConfigCli bench_cfg;
    bench->add_option("root", bench_root, "Dataset root directory")->required();
    bench->add_option("--csv", csv_out, "Optional CSV output");
    add_param_flags(bench, bench_params);
    add_eval_flags(bench, bench_cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (detect->parsed()) return run_detect(image_path, params, record_out, svg_out);
        if (eval->parsed())
            return run_eval(ref_path, test_path, homog_path, eval_cfg.resolve(), report_out);
        if (bench->parsed())
            return run_bench(bench_root, bench_params, bench_cfg.resolve(), csv_out);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
