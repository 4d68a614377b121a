#include "pcd/bench.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pcd/grid.hpp"

namespace pcd {

namespace {

using nlohmann::json;

Interval interval_from(const json& j, const char* key, Interval fallback) {
    if (!j.contains(key)) return fallback;
    const auto& arr = j.at(key);
    if (!arr.is_array() || arr.size() != 2) {
        throw std::invalid_argument(std::string(key) + " must be a [lo, hi] pair");
    }
    return {arr[0].get<double>(), arr[1].get<double>()};
}

ProjectionSchedule schedule_from(const json& j) {
    ProjectionSchedule s;
    const std::string mode = j.value("mode", "full");
    if (mode == "full") {
        s = ProjectionSchedule::full();
    } else if (mode == "sampled") {
        s = ProjectionSchedule::sampled(j.value("rounds", 5), j.value("seed", std::uint64_t{0}));
    } else {
        throw std::invalid_argument("schedule mode must be 'full' or 'sampled'");
    }
    return s;
}

std::string csv_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

StatSummary summarize(const std::vector<double>& xs) {
    StatSummary s;
    if (xs.empty()) return s;
    s.min = xs[0];
    s.max = xs[0];
    double sum = 0.0;
    for (const double x : xs) {
        sum += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = sum / static_cast<double>(xs.size());
    return s;
}

json summary_json(const StatSummary& s) {
    return {{"mean", s.mean}, {"min", s.min}, {"max", s.max}};
}

}  // namespace

void ExperimentPlan::validate() const {
    if (rows.empty()) throw std::invalid_argument("plan needs at least one row");
    if (detectors.empty()) throw std::invalid_argument("plan needs at least one detector");
    if (seeds.empty()) throw std::invalid_argument("plan needs at least one seed");
    for (const auto& d : detectors) {
        if (d != "pcd" && d != "lof") {
            throw std::invalid_argument("unknown detector '" + d + "'");
        }
    }
    for (const auto& row : rows) row.gen.validate();
    if (schedule) schedule->validate();
}

ExperimentPlan ExperimentPlan::from_json_text(const std::string& text) {
    const json j = json::parse(text);

    ExperimentPlan plan;
    plan.detectors = j.value("detectors", std::vector<std::string>{"pcd", "lof"});
    plan.seeds = j.value("seeds", std::vector<std::uint64_t>{1});
    if (j.contains("cn") && !j.at("cn").is_null()) plan.cn_override = j.at("cn").get<int>();
    if (j.contains("schedule") && !j.at("schedule").is_null()) {
        plan.schedule = schedule_from(j.at("schedule"));
    }
    if (j.contains("top_k") && !j.at("top_k").is_null()) plan.top_k = j.at("top_k").get<int>();
    plan.lof.min_pts = j.value("min_pts", 10);

    if (!j.contains("rows")) throw std::invalid_argument("plan has no rows");
    for (const auto& row : j.at("rows")) {
        PlanRow r;
        r.gen.dims = row.at("m").get<std::size_t>();
        r.gen.points = row.at("n").get<std::size_t>();
        r.gen.cluster_count = row.value("clusters", std::size_t{5});
        r.gen.outlier_count = row.value("outliers", std::size_t{10});
        r.gen.mean_range = interval_from(row, "mean_range", GenSpec{}.mean_range);
        r.gen.sd_range = interval_from(row, "sd_range", GenSpec{}.sd_range);
        r.gen.outlier_range = interval_from(row, "outlier_range", GenSpec{}.outlier_range);
        if (row.contains("cn") && !row.at("cn").is_null()) r.cn = row.at("cn").get<int>();
        plan.rows.push_back(std::move(r));
    }
    plan.validate();
    return plan;
}

ExperimentPlan ExperimentPlan::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open plan " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

BenchReport run_plan(const ExperimentPlan& plan, int threads) {
    plan.validate();

    BenchReport report;
    for (std::size_t r = 0; r < plan.rows.size(); ++r) {
        for (const auto seed : plan.seeds) {
            GenSpec gen = plan.rows[r].gen;
            gen.seed = seed;

            Dataset ds;
            std::string gen_error;
            try {
                ds = generate_highdim(gen);
            } catch (const std::exception& e) {
                gen_error = e.what();
            }

            for (const auto& detector : plan.detectors) {
                RunRecord rec;
                rec.row = r;
                rec.m = gen.dims;
                rec.n = gen.points;
                rec.seed = seed;
                rec.detector = detector;
                rec.cn = plan.cn_override.value_or(
                    plan.rows[r].cn.value_or(default_cn(gen.points)));
                if (!gen_error.empty()) {
                    rec.error = gen_error;
                    report.runs.push_back(std::move(rec));
                    continue;
                }
                try {
                    const auto started = std::chrono::steady_clock::now();
                    std::vector<double> scores;
                    if (detector == "pcd") {
                        const ProjectionSchedule schedule = plan.schedule.value_or(
                            ProjectionSchedule::default_for(gen.dims, seed));
                        scores = score(ds, rec.cn, schedule, threads).si;
                    } else {
                        scores = lof_scores(ds, plan.lof, threads);
                    }
                    rec.elapsed_seconds =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                            .count();

                    if (detector == "pcd") {
                        const int k = plan.top_k.value_or(static_cast<int>(gen.outlier_count));
                        rec.report = evaluate(scores, ds.labels, DecisionRule::top_k(k), detector);
                    } else {
                        rec.report = best_f_sweep(scores, ds.labels, detector).second;
                    }
                    rec.ok = true;
                } catch (const std::exception& e) {
                    rec.error = e.what();
                }
                report.runs.push_back(std::move(rec));
            }
        }
    }

    // Aggregate successful runs per (row, detector), preserving plan order.
    std::map<std::pair<std::size_t, std::string>, std::vector<const RunRecord*>> cells;
    for (const auto& rec : report.runs) {
        if (rec.ok) cells[{rec.row, rec.detector}].push_back(&rec);
    }
    for (std::size_t r = 0; r < plan.rows.size(); ++r) {
        for (const auto& detector : plan.detectors) {
            const auto it = cells.find({r, detector});
            if (it == cells.end()) continue;
            Aggregate agg;
            agg.row = r;
            agg.m = plan.rows[r].gen.dims;
            agg.n = plan.rows[r].gen.points;
            agg.detector = detector;
            agg.run_count = it->second.size();
            std::vector<double> p, rc, f, el;
            for (const auto* rec : it->second) {
                p.push_back(rec->report.precision);
                rc.push_back(rec->report.recall);
                f.push_back(rec->report.f_measure);
                el.push_back(rec->elapsed_seconds);
            }
            agg.precision = summarize(p);
            agg.recall = summarize(rc);
            agg.f_measure = summarize(f);
            agg.elapsed_seconds = summarize(el);
            report.aggregates.push_back(std::move(agg));
        }
    }
    return report;
}

std::string BenchReport::to_json() const {
    json j;
    j["runs"] = json::array();
    for (const auto& rec : runs) {
        json run;
        run["row"] = rec.row;
        run["m"] = rec.m;
        run["n"] = rec.n;
        run["seed"] = rec.seed;
        run["detector"] = rec.detector;
        run["cn"] = rec.cn;
        run["elapsed_seconds"] = rec.elapsed_seconds;
        run["ok"] = rec.ok;
        if (rec.ok) {
            run["report"] = json::parse(rec.report.to_json());
        } else {
            run["error"] = rec.error;
        }
        j["runs"].push_back(std::move(run));
    }
    j["aggregates"] = json::array();
    for (const auto& agg : aggregates) {
        json a;
        a["row"] = agg.row;
        a["m"] = agg.m;
        a["n"] = agg.n;
        a["detector"] = agg.detector;
        a["runs"] = agg.run_count;
        a["precision"] = summary_json(agg.precision);
        a["recall"] = summary_json(agg.recall);
        a["f_measure"] = summary_json(agg.f_measure);
        a["elapsed_seconds"] = summary_json(agg.elapsed_seconds);
        j["aggregates"].push_back(std::move(a));
    }
    return j.dump(2);
}

std::string BenchReport::to_csv() const {
    std::string out =
        "row,m,n,seed,detector,cn,elapsed_seconds,ok,tp,fp,fn,tn,precision,recall,f_measure,"
        "rule,error\n";
    for (const auto& rec : runs) {
        out += std::to_string(rec.row) + ',' + std::to_string(rec.m) + ',' +
               std::to_string(rec.n) + ',' + std::to_string(rec.seed) + ',' + rec.detector + ',' +
               std::to_string(rec.cn) + ',' + csv_double(rec.elapsed_seconds) + ',' +
               (rec.ok ? "1" : "0") + ',';
        if (rec.ok) {
            out += std::to_string(rec.report.tp) + ',' + std::to_string(rec.report.fp) + ',' +
                   std::to_string(rec.report.fn) + ',' + std::to_string(rec.report.tn) + ',' +
                   csv_double(rec.report.precision) + ',' + csv_double(rec.report.recall) + ',' +
                   csv_double(rec.report.f_measure) + ',' +
                   csv_escape(rec.report.decision_rule.describe()) + ",";
        } else {
            out += ",,,,,,,," + csv_escape(rec.error);
        }
        out += '\n';
    }
    return out;
}

}  // namespace pcd
