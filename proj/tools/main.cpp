// pcd — grid-projection outlier detection toolkit.
//
// Subcommands: generate (synthetic datasets), detect (score a CSV with the
// projected-cell detector or LOF), eval (score file vs labels), bench (run
// an experiment plan). JSON goes to stdout, diagnostics to stderr.
// Exit codes: 0 success, 2 usage/validation error, 1 internal error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcd/bench.hpp"
#include "pcd/csv.hpp"
#include "pcd/dataset.hpp"
#include "pcd/eval.hpp"
#include "pcd/grid.hpp"
#include "pcd/lof.hpp"
#include "pcd/parallel.hpp"
#include "pcd/pcd.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int thread_default() {
    if (const char* env = std::getenv("PCD_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return pcd::resolve_threads(0);
}

struct GenerateArgs {
    std::string mode = "highdim";
    std::string out = "dataset";
    std::size_t dims = 100;
    std::size_t points = 500;
    std::size_t clusters = 5;
    std::size_t outliers = 10;
    std::vector<double> mean_range{pcd::GenSpec{}.mean_range.lo, pcd::GenSpec{}.mean_range.hi};
    std::vector<double> sd_range{pcd::GenSpec{}.sd_range.lo, pcd::GenSpec{}.sd_range.hi};
    std::vector<double> outlier_range{pcd::GenSpec{}.outlier_range.lo,
                                      pcd::GenSpec{}.outlier_range.hi};
    std::uint64_t seed = 0;
};

int run_generate(const GenerateArgs& args) {
    pcd::Dataset ds;
    std::string metadata;
    if (args.mode == "2d") {
        ds = pcd::generate_2d(args.seed);
        metadata = pcd::twod_metadata_json(args.seed);
    } else {
        pcd::GenSpec spec;
        spec.dims = args.dims;
        spec.points = args.points;
        spec.cluster_count = args.clusters;
        spec.outlier_count = args.outliers;
        spec.mean_range = {args.mean_range[0], args.mean_range[1]};
        spec.sd_range = {args.sd_range[0], args.sd_range[1]};
        spec.outlier_range = {args.outlier_range[0], args.outlier_range[1]};
        spec.seed = args.seed;
        ds = pcd::generate_highdim(spec);
        metadata = pcd::highdim_metadata_json(spec);
    }

    const fs::path csv_path = args.out + ".csv";
    const fs::path label_path = args.out + ".labels";
    const fs::path meta_path = args.out + ".meta.json";
    pcd::write_csv(ds, csv_path);
    pcd::write_labels(ds, label_path);
    std::ofstream meta(meta_path);
    if (!meta) throw std::runtime_error("cannot write " + meta_path.string());
    meta << metadata;

    json out;
    out["csv"] = csv_path.string();
    out["labels"] = label_path.string();
    out["metadata"] = meta_path.string();
    out["n"] = ds.n;
    out["m"] = ds.m;
    std::cout << out.dump(2) << "\n";
    return 0;
}

struct DetectArgs {
    std::string input;
    std::string labels;
    std::string detector = "pcd";
    int cn = 0;  // 0 = ceil(sqrt(n))
    std::string schedule = "full";
    int rounds = 5;
    std::uint64_t seed = 0;
    int top_k = 0;
    double threshold = 0.0;
    bool has_top_k = false;
    bool has_threshold = false;
    int min_pts = 10;
    int threads = 0;
    std::string dump_grid;
};

void dump_grid_json(const pcd::GridIndex& g, const std::string& path) {
    json j;
    j["cn"] = g.cn();
    j["n"] = g.n;
    j["m"] = g.m;
    j["ranges"] = json::array();
    j["counts"] = json::array();
    j["avg_density"] = g.avg_density;
    j["cell_of"] = json::array();
    for (std::size_t i = 0; i < g.m; ++i) {
        j["ranges"].push_back({g.config.ranges[i].lo, g.config.ranges[i].hi});
        const auto counts = g.cell_counts(i);
        j["counts"].push_back(std::vector<int>(counts.begin(), counts.end()));
        const auto cells = g.cells(i);
        j["cell_of"].push_back(std::vector<int>(cells.begin(), cells.end()));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump() << "\n";
}

int run_detect(const DetectArgs& args) {
    std::optional<fs::path> label_path;
    if (!args.labels.empty()) label_path = args.labels;
    const pcd::Dataset ds = pcd::load_csv(args.input, label_path);

    const int threads = args.threads > 0 ? args.threads : thread_default();
    std::vector<double> scores;
    json out;
    out["detector"] = args.detector;
    out["n"] = ds.n;
    out["m"] = ds.m;

    if (args.detector == "pcd") {
        const int cn = args.cn > 0 ? args.cn : pcd::default_cn(ds.n);
        pcd::ProjectionSchedule schedule;
        if (args.schedule == "full") {
            schedule = pcd::ProjectionSchedule::full();
            out["schedule"] = {{"mode", "full"}};
        } else {
            schedule = pcd::ProjectionSchedule::sampled(args.rounds, args.seed);
            out["schedule"] = {{"mode", "sampled"}, {"rounds", args.rounds}, {"seed", args.seed}};
        }
        const pcd::GridIndex grid = pcd::build_grid(ds, cn, threads);
        if (!args.dump_grid.empty()) dump_grid_json(grid, args.dump_grid);
        scores = pcd::score_grid(grid, schedule, threads).si;
        out["cn"] = cn;
    } else {
        pcd::LofConfig cfg;
        cfg.min_pts = args.min_pts;
        scores = pcd::lof_scores(ds, cfg, threads);
        out["min_pts"] = args.min_pts;
    }

    const auto ranking = pcd::rank_scores(scores);
    json ranked = json::array();
    for (const auto& [id, score] : ranking) ranked.push_back({id, score});
    out["ranking"] = std::move(ranked);

    if (args.has_top_k) {
        if (args.top_k < 1 || static_cast<std::size_t>(args.top_k) > ds.n) {
            throw std::invalid_argument("--top-k must be in [1, n]");
        }
        out["rule"] = {{"type", "top_k"}, {"k", args.top_k}};
        json ids = json::array();
        for (int i = 0; i < args.top_k; ++i) ids.push_back(ranking[static_cast<std::size_t>(i)].first);
        out["top_ids"] = std::move(ids);
    } else {
        out["rule"] = {{"type", "threshold"}, {"value", args.threshold}};
        json ids = json::array();
        for (const auto& [id, score] : ranking) {
            if (score >= args.threshold) ids.push_back(id);
        }
        out["predicted_ids"] = std::move(ids);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

struct EvalArgs {
    std::string scores;
    std::string result;
    std::string labels;
    std::string detector;
    int top_k = 0;
    double threshold = 0.0;
    bool has_top_k = false;
    bool has_threshold = false;
    bool sweep = false;
};

std::vector<double> read_scores(const EvalArgs& args) {
    std::vector<double> scores;
    if (!args.result.empty()) {
        std::ifstream in(args.result);
        if (!in) throw std::runtime_error("cannot open " + args.result);
        json j;
        in >> j;
        const auto& ranking = j.at("ranking");
        scores.resize(ranking.size());
        for (const auto& entry : ranking) {
            const auto id = entry.at(0).get<std::size_t>();
            if (id >= scores.size()) throw std::runtime_error("ranking id out of range");
            scores[id] = entry.at(1).get<double>();
        }
        return scores;
    }
    std::ifstream in(args.scores);
    if (!in) throw std::runtime_error("cannot open " + args.scores);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            scores.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw pcd::ParseError(line_no, "score '" + line + "' is not a number");
        }
    }
    return scores;
}

int run_eval(const EvalArgs& args) {
    const std::vector<double> scores = read_scores(args);
    const auto labels = pcd::load_labels(args.labels, scores.size());

    pcd::EvalReport report;
    if (args.sweep) {
        report = pcd::best_f_sweep(scores, labels, args.detector).second;
    } else if (args.has_top_k) {
        report = pcd::evaluate(scores, labels, pcd::DecisionRule::top_k(args.top_k), args.detector);
    } else {
        report = pcd::evaluate(scores, labels, pcd::DecisionRule::threshold(args.threshold),
                               args.detector);
    }
    std::cout << report.to_json() << "\n";
    return 0;
}

struct BenchArgs {
    std::string plan;
    std::string out_json;
    std::string out_csv;
    int threads = 0;
};

int run_bench(const BenchArgs& args) {
    const auto plan = pcd::ExperimentPlan::load(args.plan);
    const int threads = args.threads > 0 ? args.threads : thread_default();
    const auto report = pcd::run_plan(plan, threads);

    const std::string report_json = report.to_json();
    if (!args.out_json.empty()) {
        std::ofstream out(args.out_json);
        if (!out) throw std::runtime_error("cannot write " + args.out_json);
        out << report_json << "\n";
    }
    if (!args.out_csv.empty()) {
        std::ofstream out(args.out_csv);
        if (!out) throw std::runtime_error("cannot write " + args.out_csv);
        out << report.to_csv();
    }
    std::cout << report_json << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid-projection outlier detection toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* cmd_gen = app.add_subcommand("generate", "Write a synthetic dataset to disk");
    cmd_gen->add_option("--mode", gen.mode, "highdim or 2d")
        ->check(CLI::IsMember({"highdim", "2d"}));
    cmd_gen->add_option("--out", gen.out, "Output path prefix");
    auto* op_dims = cmd_gen->add_option("--dims", gen.dims, "Dimensions (highdim)");
    auto* op_points = cmd_gen->add_option("--points", gen.points, "Points (highdim)");
    cmd_gen->add_option("--clusters", gen.clusters, "Gaussian components (highdim)");
    cmd_gen->add_option("--outliers", gen.outliers, "Planted outliers (highdim)");
    cmd_gen->add_option("--mean-range", gen.mean_range, "Component mean range lo hi")
        ->expected(2);
    cmd_gen->add_option("--sd-range", gen.sd_range, "Component sd range lo hi")->expected(2);
    cmd_gen->add_option("--outlier-range", gen.outlier_range, "Outlier coordinate range lo hi")
        ->expected(2);
    cmd_gen->add_option("--seed", gen.seed, "RNG seed");

    DetectArgs det;
    auto* cmd_det = app.add_subcommand("detect", "Score a CSV dataset and rank the points");
    cmd_det->add_option("--input", det.input, "Input CSV")->required();
    cmd_det->add_option("--labels", det.labels, "Optional label file");
    cmd_det->add_option("--detector", det.detector, "pcd or lof")
        ->check(CLI::IsMember({"pcd", "lof"}));
    cmd_det->add_option("--cn", det.cn, "Cells per dimension (default ceil(sqrt(n)))");
    cmd_det->add_option("--schedule", det.schedule, "full or sampled")
        ->check(CLI::IsMember({"full", "sampled"}));
    cmd_det->add_option("--rounds", det.rounds, "Rounds for the sampled schedule");
    cmd_det->add_option("--seed", det.seed, "Seed for the sampled schedule");
    auto* op_topk = cmd_det->add_option("--top-k", det.top_k, "Report the k highest scores");
    auto* op_thresh =
        cmd_det->add_option("--threshold", det.threshold, "Report scores at or above a cut");
    op_topk->excludes(op_thresh);
    op_thresh->excludes(op_topk);
    cmd_det->add_option("--min-pts", det.min_pts, "LOF neighborhood size");
    cmd_det->add_option("--threads", det.threads, "Worker threads (default $PCD_THREADS or cores)");
    cmd_det->add_option("--dump-grid", det.dump_grid, "Write the grid index as JSON (debug)");

    EvalArgs ev;
    auto* cmd_eval = app.add_subcommand("eval", "Evaluate scores against ground truth");
    auto* op_scores = cmd_eval->add_option("--scores", ev.scores, "Score file, one per line");
    auto* op_result = cmd_eval->add_option("--result", ev.result, "detect output JSON");
    op_scores->excludes(op_result);
    op_result->excludes(op_scores);
    cmd_eval->add_option("--labels", ev.labels, "Label file")->required();
    cmd_eval->add_option("--detector", ev.detector, "Detector tag for the report");
    auto* op_ek = cmd_eval->add_option("--top-k", ev.top_k, "Top-k decision rule");
    auto* op_et = cmd_eval->add_option("--threshold", ev.threshold, "Threshold decision rule");
    auto* op_sweep = cmd_eval->add_flag("--sweep", ev.sweep, "Best-F threshold sweep");
    op_ek->excludes(op_et)->excludes(op_sweep);
    op_et->excludes(op_ek)->excludes(op_sweep);
    op_sweep->excludes(op_ek)->excludes(op_et);

    BenchArgs bench;
    auto* cmd_bench = app.add_subcommand("bench", "Run an experiment plan");
    cmd_bench->add_option("--plan", bench.plan, "Plan JSON file")->required();
    cmd_bench->add_option("--out-json", bench.out_json, "Write the report JSON here too");
    cmd_bench->add_option("--out-csv", bench.out_csv, "Write one CSV row per run");
    cmd_bench->add_option("--threads", bench.threads, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            return app.exit(e);
        }
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (cmd_gen->parsed()) {
            if (gen.mode == "2d" && (op_dims->count() > 0 || op_points->count() > 0)) {
                throw std::invalid_argument("--dims/--points do not apply to --mode 2d");
            }
            return run_generate(gen);
        }
        if (cmd_det->parsed()) {
            det.has_top_k = op_topk->count() > 0;
            det.has_threshold = op_thresh->count() > 0;
            if (!det.has_top_k && !det.has_threshold) {
                throw std::invalid_argument("detect requires --top-k or --threshold");
            }
            return run_detect(det);
        }
        if (cmd_eval->parsed()) {
            ev.has_top_k = op_ek->count() > 0;
            ev.has_threshold = op_et->count() > 0;
            if (ev.scores.empty() && ev.result.empty()) {
                throw std::invalid_argument("eval requires --scores or --result");
            }
            if (!ev.sweep && !ev.has_top_k && !ev.has_threshold) {
                throw std::invalid_argument("eval requires --top-k, --threshold, or --sweep");
            }
            return run_eval(ev);
        }
        if (cmd_bench->parsed()) {
            return run_bench(bench);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {  // parse/IO/validation, incl. ParseError
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
