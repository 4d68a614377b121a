#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcd/dataset.hpp"

namespace pcd {

// File-format error carrying the 1-based line number it was found on.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Comma-separated decimals, one point per row, one dimension per column.
// A non-numeric first row is treated as a header and skipped. Every data
// row must have the same arity and every field must parse as a finite
// number; violations raise ParseError with the offending line.
Dataset load_csv(const std::filesystem::path& data_path,
                 const std::optional<std::filesystem::path>& label_path = std::nullopt);

// One integer 0/1 per line; the count must equal expected_n.
std::vector<std::uint8_t> load_labels(const std::filesystem::path& path, std::size_t expected_n);

// Values are written with shortest round-trip formatting, so
// load_csv(write_csv(ds)) reproduces ds exactly. No header row.
void write_csv(const Dataset& ds, const std::filesystem::path& path);

void write_labels(const Dataset& ds, const std::filesystem::path& path);

// Sidecar metadata written next to generated datasets (seed + generator
// parameters), serialized as JSON text.
std::string highdim_metadata_json(const GenSpec& spec);
std::string twod_metadata_json(std::uint64_t seed);

}  // namespace pcd
