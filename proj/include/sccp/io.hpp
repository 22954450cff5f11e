#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sccp/metrics.hpp"
#include "sccp/self_calibrating.hpp"
#include "sccp/synth.hpp"

namespace sccp {

// Shortest round-trip decimal representation, locale-independent.
std::string format_double(double v);
double parse_double(const std::string& text);

// Minimal CSV: header row, comma separators, no quoting.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(const std::string& name) const;
    std::vector<double> numeric_column(const std::string& name) const;
    std::vector<std::string> string_column(const std::string& name) const;
};

Table read_csv(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Dataset CSV (columns x1..xd, y, then optional f_pred and group) plus a JSON
// sidecar recording the generating configuration.
void write_dataset_csv(const std::string& path, const Dataset& ds);
void write_synth_sidecar(const std::string& path, const SynthConfig& cfg);
Dataset read_dataset_csv(const std::string& path);

std::string band_to_json(const PredictionBand& band);
PredictionBand band_from_json(const std::string& text);

std::string metrics_to_json(const MetricsReport& report);
std::string metrics_to_csv(const MetricsReport& report);

}  // namespace sccp
