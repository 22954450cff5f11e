#include "sccp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sccp {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    return v;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    out.push_back(field);
    return out;
}

}  // namespace

std::optional<std::size_t> Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

std::vector<double> Table::numeric_column(const std::string& name) const {
    const auto idx = column(name);
    if (!idx) throw std::invalid_argument("missing column: " + name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(parse_double(row[*idx]));
    return out;
}

std::vector<std::string> Table::string_column(const std::string& name) const {
    const auto idx = column(name);
    if (!idx) throw std::invalid_argument("missing column: " + name);
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[*idx]);
    return out;
}

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Table table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
    table.header = split_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != table.header.size()) {
            throw std::runtime_error("ragged row in " + path);
        }
        table.rows.push_back(std::move(fields));
    }
    return table;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_dataset_csv(const std::string& path, const Dataset& ds) {
    std::ostringstream out;
    for (std::size_t j = 0; j < ds.d; ++j) out << "x" << (j + 1) << ",";
    out << "y";
    const bool has_pred = !ds.predictions.empty();
    const bool has_group = !ds.group.empty();
    if (has_pred) out << ",f_pred";
    if (has_group) out << ",group";
    out << "\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto x = ds.row(i);
        for (double v : x) out << format_double(v) << ",";
        out << format_double(ds.outcomes[i]);
        if (has_pred) out << "," << format_double(ds.predictions[i]);
        if (has_group) out << "," << ds.group[i];
        out << "\n";
    }
    write_text_file(path, out.str());
}

void write_synth_sidecar(const std::string& path, const SynthConfig& cfg) {
    nlohmann::json j;
    j["a"] = cfg.a;
    j["b"] = cfg.b;
    j["d"] = cfg.d;
    j["kappa"] = cfg.kappa;
    j["n"] = cfg.n;
    j["seed"] = cfg.seed;
    write_text_file(path, j.dump(2) + "\n");
}

Dataset read_dataset_csv(const std::string& path) {
    const Table table = read_csv(path);
    Dataset ds;
    std::size_t d = 0;
    while (table.column("x" + std::to_string(d + 1))) ++d;
    ds.d = d;
    const std::size_t n = table.rows.size();
    ds.features.resize(n * d);
    for (std::size_t j = 0; j < d; ++j) {
        const auto col = table.numeric_column("x" + std::to_string(j + 1));
        for (std::size_t i = 0; i < n; ++i) ds.features[i * d + j] = col[i];
    }
    ds.outcomes = table.numeric_column("y");
    if (table.column("f_pred")) ds.predictions = table.numeric_column("f_pred");
    if (table.column("group")) ds.group = table.string_column("group");
    return ds;
}

namespace {

nlohmann::json row_to_json(const SccpOutput& row) {
    nlohmann::json j;
    j["point"] = row.point;
    j["empty"] = row.interval_empty;
    j["lower"] = row.interval_empty ? nlohmann::json() : nlohmann::json(row.lower);
    j["upper"] = row.interval_empty ? nlohmann::json() : nlohmann::json(row.upper);
    j["range_low"] = row.multi.range_low;
    j["range_high"] = row.multi.range_high;
    j["set_measure"] = row.set_measure;
    j["segment_id"] = row.segment_id;
    return j;
}

SccpOutput row_from_json(const nlohmann::json& j) {
    SccpOutput row;
    row.point = j.at("point").get<double>();
    row.interval_empty = j.at("empty").get<bool>();
    if (!row.interval_empty) {
        row.lower = j.at("lower").get<double>();
        row.upper = j.at("upper").get<double>();
    } else {
        row.lower = std::numeric_limits<double>::quiet_NaN();
        row.upper = std::numeric_limits<double>::quiet_NaN();
    }
    row.multi.range_low = j.at("range_low").get<double>();
    row.multi.range_high = j.at("range_high").get<double>();
    row.set_measure = j.at("set_measure").get<double>();
    row.segment_id = j.at("segment_id").get<std::size_t>();
    return row;
}

}  // namespace

std::string band_to_json(const PredictionBand& band) {
    nlohmann::json j;
    j["format"] = "sccp-band";
    j["version"] = 1;
    j["alpha"] = band.alpha;
    j["min_segment_mass"] = band.min_segment_mass;
    j["y_grid"]["values"] = band.y_grid.values;
    j["y_grid"]["y_min"] = band.y_grid.y_min;
    j["y_grid"]["y_max"] = band.y_grid.y_max;
    j["grid_fx"] = band.grid_fx;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : band.rows) j["rows"].push_back(row_to_json(row));
    return j.dump(2) + "\n";
}

PredictionBand band_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "sccp-band") {
        throw std::runtime_error("not a band file");
    }
    PredictionBand band;
    band.alpha = j.at("alpha").get<double>();
    band.min_segment_mass = j.at("min_segment_mass").get<double>();
    band.y_grid.values = j.at("y_grid").at("values").get<std::vector<double>>();
    band.y_grid.y_min = j.at("y_grid").at("y_min").get<double>();
    band.y_grid.y_max = j.at("y_grid").at("y_max").get<double>();
    band.grid_fx = j.at("grid_fx").get<std::vector<double>>();
    for (const auto& row : j.at("rows")) band.rows.push_back(row_from_json(row));
    if (band.rows.size() != band.grid_fx.size()) {
        throw std::runtime_error("band rows do not match grid");
    }
    return band;
}

namespace {

nlohmann::json group_to_json(const GroupMetrics& g) {
    nlohmann::json j;
    j["coverage"] = g.coverage;
    j["avg_width"] = g.avg_width;
    j["cal_error"] = g.cal_error;
    j["count"] = g.count;
    j["infinite_widths"] = g.infinite_widths;
    return j;
}

void append_metrics_row(std::ostringstream& out, const std::string& slice,
                        const std::string& label, const GroupMetrics& g) {
    out << slice << "," << label << "," << format_double(g.coverage) << ","
        << format_double(g.avg_width) << "," << format_double(g.cal_error) << ","
        << g.count << "," << g.infinite_widths << "\n";
}

}  // namespace

std::string metrics_to_json(const MetricsReport& report) {
    nlohmann::json j;
    j["coverage"] = report.coverage;
    j["avg_width"] = report.avg_width;
    j["cal_error"] = report.cal_error;
    j["count"] = report.count;
    j["infinite_widths"] = report.infinite_widths;
    j["by_group"] = nlohmann::json::object();
    for (const auto& [label, g] : report.by_group) {
        j["by_group"][label] = group_to_json(g);
    }
    j["by_bin"] = nlohmann::json::array();
    for (const auto& [bin, g] : report.by_bin) {
        nlohmann::json row = group_to_json(g);
        row["bin"] = bin;
        j["by_bin"].push_back(row);
    }
    return j.dump(2) + "\n";
}

std::string metrics_to_csv(const MetricsReport& report) {
    std::ostringstream out;
    out << "slice,label,coverage,avg_width,cal_error,count,infinite_widths\n";
    GroupMetrics overall;
    overall.coverage = report.coverage;
    overall.avg_width = report.avg_width;
    overall.cal_error = report.cal_error;
    overall.count = report.count;
    overall.infinite_widths = report.infinite_widths;
    append_metrics_row(out, "overall", "", overall);
    for (const auto& [label, g] : report.by_group) {
        append_metrics_row(out, "group", label, g);
    }
    for (const auto& [bin, g] : report.by_bin) {
        append_metrics_row(out, "bin", std::to_string(bin), g);
    }
    return out.str();
}

}  // namespace sccp
