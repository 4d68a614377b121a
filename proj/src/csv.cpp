#include "pcd/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>
#include <system_error>

#include <json.hpp>

namespace pcd {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool parse_double(std::string_view field, double& out) {
    field = trim(field);
    if (field.empty()) return false;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

void split_fields(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

}  // namespace

Dataset load_csv(const std::filesystem::path& data_path,
                 const std::optional<std::filesystem::path>& label_path) {
    std::ifstream in(data_path);
    if (!in) throw std::runtime_error("cannot open " + data_path.string());

    Dataset ds;
    std::string line;
    std::vector<std::string_view> fields;
    std::size_t line_no = 0;
    std::size_t pending_blank = 0;  // blank line that is an error unless at EOF
    bool saw_data = false;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty()) {
            if (saw_data && pending_blank == 0) pending_blank = line_no;
            continue;
        }
        if (pending_blank != 0) throw ParseError(pending_blank, "blank line inside data");
        split_fields(text, fields);

        if (!saw_data) {
            // Header auto-detection: a first row with any non-numeric field
            // is a header.
            bool all_numeric = true;
            double tmp = 0.0;
            for (const auto f : fields) {
                if (!parse_double(f, tmp)) {
                    all_numeric = false;
                    break;
                }
            }
            if (!all_numeric) continue;
            ds.m = fields.size();
            saw_data = true;
        }

        if (fields.size() != ds.m) {
            throw ParseError(line_no, "expected " + std::to_string(ds.m) + " fields, got " +
                                          std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            double v = 0.0;
            if (!parse_double(fields[c], v)) {
                throw ParseError(line_no, "field " + std::to_string(c + 1) + " '" +
                                              std::string(trim(fields[c])) + "' is not a number");
            }
            if (!std::isfinite(v)) {
                throw ParseError(line_no,
                                 "field " + std::to_string(c + 1) + " is not finite");
            }
            ds.values.push_back(v);
        }
        ++ds.n;
    }
    if (!saw_data) throw ParseError(line_no == 0 ? 1 : line_no, "no data rows");

    if (label_path) {
        ds.labels = load_labels(*label_path, ds.n);
    }
    ds.validate();
    return ds;
}

std::vector<std::uint8_t> load_labels(const std::filesystem::path& path, std::size_t expected_n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    std::vector<std::uint8_t> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty()) continue;
        if (text == "0") {
            labels.push_back(0);
        } else if (text == "1") {
            labels.push_back(1);
        } else {
            throw ParseError(line_no, "label must be 0 or 1, got '" + std::string(text) + "'");
        }
    }
    if (labels.size() != expected_n) {
        throw std::runtime_error("label file " + path.string() + " has " +
                                 std::to_string(labels.size()) + " entries, expected " +
                                 std::to_string(expected_n));
    }
    return labels;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::string row;
    for (std::size_t r = 0; r < ds.n; ++r) {
        row.clear();
        for (std::size_t c = 0; c < ds.m; ++c) {
            if (c > 0) row += ',';
            row += format_double(ds.at(r, c));
        }
        row += '\n';
        out << row;
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_labels(const Dataset& ds, const std::filesystem::path& path) {
    if (!ds.has_labels()) throw std::invalid_argument("dataset has no labels to write");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto l : ds.labels) out << int(l) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string highdim_metadata_json(const GenSpec& spec) {
    nlohmann::json j;
    j["generator"] = "highdim";
    j["seed"] = spec.seed;
    j["dims"] = spec.dims;
    j["points"] = spec.points;
    j["clusters"] = spec.cluster_count;
    j["outliers"] = spec.outlier_count;
    j["mean_range"] = {spec.mean_range.lo, spec.mean_range.hi};
    j["sd_range"] = {spec.sd_range.lo, spec.sd_range.hi};
    j["outlier_range"] = {spec.outlier_range.lo, spec.outlier_range.hi};
    return j.dump(2) + "\n";
}

std::string twod_metadata_json(std::uint64_t seed) {
    nlohmann::json j;
    j["generator"] = "2d";
    j["seed"] = seed;
    j["dims"] = 2;
    j["points"] = 43;
    j["outliers"] = 3;
    return j.dump(2) + "\n";
}

}  // namespace pcd
