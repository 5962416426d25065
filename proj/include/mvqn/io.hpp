#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mvqn/bargmann.hpp"
#include "mvqn/errors.hpp"
#include "mvqn/network.hpp"
#include "mvqn/neuron.hpp"
#include "mvqn/perceptron.hpp"

namespace mvqn {

/// File formats and renderers around the library: CSV datasets, canonical
/// JSON model documents, the spin-block text table, CSV reports, and the
/// SVG sector plot.

enum class DatasetFormat { sector_csv, complex_csv };

namespace detail {

inline std::string shortest(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        std::string_view field = comma == std::string_view::npos
                                     ? line.substr(start)
                                     : line.substr(start, comma - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
            field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t'))
            field.remove_suffix(1);
        fields.push_back(field);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

inline long parse_int(std::string_view field, int line_no) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError("line " + std::to_string(line_no) + ": expected an integer, got '" +
                         std::string(field) + "'");
    return value;
}

inline double parse_real(std::string_view field, int line_no) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError("line " + std::to_string(line_no) + ": expected a number, got '" +
                         std::string(field) + "'");
    return value;
}

inline int checked_sector_index(long j, int k, int line_no) {
    if (j < 0 || j >= k)
        throw ShapeError("line " + std::to_string(line_no) + ": sector index " + std::to_string(j) +
                         " out of range for order " + std::to_string(k));
    return static_cast<int>(j);
}

} // namespace detail

/// Parses dataset text. sector_csv rows are "j_1,...,j_n,target" with every
/// cell a sector index in 0..k-1; complex_csv rows are
/// "re_1,im_1,...,re_n,im_n,target" with each input within 1e-6 of the unit
/// circle (inputs are then snapped exactly onto it). Blank lines are ignored;
/// errors carry 1-based line numbers.
inline Dataset parse_dataset(std::string_view text, DatasetFormat format, int k,
                             bool skip_header = false) {
    if (k < 2) throw ShapeError("dataset order must be >= 2");
    Dataset ds{k, 0, {}};
    int line_no = 0;
    bool header_pending = skip_header;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line = nl == std::string_view::npos ? text.substr(pos)
                                                             : text.substr(pos, nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        auto fields = detail::split_fields(line);
        Sample sample;
        if (format == DatasetFormat::sector_csv) {
            if (fields.size() < 2)
                throw ParseError("line " + std::to_string(line_no) + ": need inputs and a target");
            int n = static_cast<int>(fields.size()) - 1;
            if (ds.n == 0) ds.n = n;
            if (n != ds.n)
                throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(ds.n + 1) + " fields, got " +
                                 std::to_string(fields.size()));
            for (int i = 0; i < n; ++i) {
                int j = detail::checked_sector_index(detail::parse_int(fields[static_cast<size_t>(i)], line_no), k, line_no);
                sample.inputs.push_back(sector_value(Sector(k, j)));
            }
            sample.target = Sector(k, detail::checked_sector_index(detail::parse_int(fields.back(), line_no), k, line_no));
        } else {
            if (fields.size() < 3 || fields.size() % 2 == 0)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": complex rows need re/im pairs plus a target");
            int n = static_cast<int>(fields.size() / 2);
            if (ds.n == 0) ds.n = n;
            if (n != ds.n)
                throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(2 * ds.n + 1) + " fields, got " +
                                 std::to_string(fields.size()));
            for (int i = 0; i < n; ++i) {
                double re = detail::parse_real(fields[static_cast<size_t>(2 * i)], line_no);
                double im = detail::parse_real(fields[static_cast<size_t>(2 * i + 1)], line_no);
                Complex x{re, im};
                double mag = std::abs(x);
                if (std::abs(mag - 1.0) > 1e-6)
                    throw ShapeError("line " + std::to_string(line_no) + ": input modulus " +
                                     detail::shortest(mag) + " is not 1");
                sample.inputs.push_back(x / mag);
            }
            sample.target = Sector(k, detail::checked_sector_index(detail::parse_int(fields.back(), line_no), k, line_no));
        }
        ds.samples.push_back(std::move(sample));
    }
    if (ds.samples.empty()) throw ShapeError("empty dataset");
    validate_dataset(ds);
    return ds;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

inline Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format, int k,
                            bool skip_header = false) {
    return parse_dataset(read_text_file(path), format, k, skip_header);
}

// ---------------------------------------------------------------------------
// Model persistence: canonical JSON, schema_version 1. Keys are emitted in
// sorted order and numbers in shortest-round-trip form, so save -> load ->
// save is byte-identical.

using AnyModel = std::variant<NeuronModel, NetworkModel, PerceptronModel>;

namespace detail {

inline nlohmann::json complex_to_json(Complex c) {
    return nlohmann::json::array({c.real(), c.imag()});
}

inline Complex complex_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("weight entries must be [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json weights_to_json(const std::vector<Complex>& w) {
    nlohmann::json arr = nlohmann::json::array();
    for (Complex c : w) arr.push_back(complex_to_json(c));
    return arr;
}

inline std::vector<Complex> weights_from_json(const nlohmann::json& arr) {
    if (!arr.is_array()) throw ParseError("weights must be an array");
    std::vector<Complex> w;
    for (const auto& entry : arr) w.push_back(complex_from_json(entry));
    return w;
}

} // namespace detail

inline nlohmann::json model_to_json(const AnyModel& model) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    if (const auto* neuron = std::get_if<NeuronModel>(&model)) {
        doc["kind"] = "neuron";
        doc["k"] = neuron->k;
        doc["arity"] = neuron->n;
        doc["weights"] = detail::weights_to_json(neuron->weights);
    } else if (const auto* net = std::get_if<NetworkModel>(&model)) {
        doc["kind"] = "network";
        doc["arity"] = net->input_arity;
        nlohmann::json layers = nlohmann::json::array();
        for (const Layer& layer : net->layers) {
            nlohmann::json jl;
            jl["k"] = layer.spec.k;
            nlohmann::json neurons = nlohmann::json::array();
            for (const NeuronModel& nm : layer.neurons)
                neurons.push_back(detail::weights_to_json(nm.weights));
            jl["neurons"] = neurons;
            layers.push_back(jl);
        }
        doc["layers"] = layers;
    } else {
        const auto& p = std::get<PerceptronModel>(model);
        doc["kind"] = "perceptron";
        doc["arity"] = p.arity();
        if (p.matrix_mode()) {
            doc["mode"] = "matrix";
            nlohmann::json ws = nlohmann::json::array();
            for (const MatrixWeight& m : std::get<0>(p.weights))
                ws.push_back(nlohmann::json::array({detail::complex_to_json(m.m00),
                                                    detail::complex_to_json(m.m01),
                                                    detail::complex_to_json(m.m10),
                                                    detail::complex_to_json(m.m11)}));
            doc["weights"] = ws;
        } else {
            doc["mode"] = "scalar";
            doc["weights"] = detail::weights_to_json(std::get<1>(p.weights));
        }
    }
    return doc;
}

inline AnyModel model_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ParseError("model document must be a JSON object");
    if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer())
        throw SchemaError("model document lacks a schema_version");
    if (doc["schema_version"].get<int>() != 1)
        throw SchemaError("unsupported schema_version " + doc["schema_version"].dump());
    if (!doc.contains("kind") || !doc["kind"].is_string())
        throw SchemaError("model document lacks a kind");
    std::string kind = doc["kind"].get<std::string>();

    if (kind == "neuron") {
        int k = doc.at("k").get<int>();
        int arity = doc.at("arity").get<int>();
        return NeuronModel(k, arity, detail::weights_from_json(doc.at("weights")));
    }
    if (kind == "network") {
        NetworkModel net{doc.at("arity").get<int>(), {}};
        int arity = net.input_arity;
        for (const auto& jl : doc.at("layers")) {
            int k = jl.at("k").get<int>();
            Layer layer{LayerSpec{0, k}, {}};
            for (const auto& jn : jl.at("neurons"))
                layer.neurons.push_back(NeuronModel(k, arity, detail::weights_from_json(jn)));
            layer.spec.neuron_count = static_cast<int>(layer.neurons.size());
            arity = layer.spec.neuron_count;
            net.layers.push_back(std::move(layer));
        }
        validate_network(net);
        return net;
    }
    if (kind == "perceptron") {
        std::string mode = doc.at("mode").get<std::string>();
        if (mode == "matrix") {
            std::vector<MatrixWeight> ws;
            for (const auto& jm : doc.at("weights")) {
                if (!jm.is_array() || jm.size() != 4)
                    throw ParseError("matrix weights must be arrays of four complex entries");
                ws.push_back(MatrixWeight{detail::complex_from_json(jm[0]),
                                          detail::complex_from_json(jm[1]),
                                          detail::complex_from_json(jm[2]),
                                          detail::complex_from_json(jm[3])});
            }
            return PerceptronModel{std::move(ws)};
        }
        if (mode == "scalar") return PerceptronModel{detail::weights_from_json(doc.at("weights"))};
        throw SchemaError("unknown perceptron mode '" + mode + "'");
    }
    throw SchemaError("unknown model kind '" + kind + "'");
}

inline std::string serialize_model(const AnyModel& model) { return model_to_json(model).dump(2) + "\n"; }

inline void save_model(const AnyModel& model, const std::filesystem::path& path) {
    write_text_file(path, serialize_model(model));
}

inline AnyModel load_model(const std::filesystem::path& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("model file " + path.string() + ": " + e.what());
    }
    try {
        return model_from_json(doc);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("model file " + path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Text renderings.

namespace detail {

inline std::string root_text(const Sector& s) {
    return "e_" + std::to_string(s.k) + "^" + std::to_string(s.j);
}

inline std::string half_integer_text(int doubled) {
    if (doubled % 2 == 0) return std::to_string(doubled / 2);
    return std::to_string(doubled) + "/2";
}

inline std::string state_label(int n1, int n2) {
    if (n1 < 10 && n2 < 10) return "f_" + std::to_string(n1) + std::to_string(n2);
    return "f_{" + std::to_string(n1) + "," + std::to_string(n2) + "}";
}

} // namespace detail

/// The spin block for the given 2j as a fixed-width three-column table,
/// one row per m from j down to -j.
inline std::string render_table(int two_j) {
    auto rows = table_rows(two_j);
    std::vector<std::array<std::string, 3>> cells;
    cells.push_back({"Roots of Unity", "State-Function", "Quantum Numbers"});
    for (const TableRow& row : rows) {
        std::string roots = "(" + detail::root_text(row.root_z) + ")_z (" +
                            detail::root_text(row.root_w) + ")_w = " +
                            detail::root_text(row.product);
        std::string state = detail::state_label(row.n1, row.n2) + " = " + row.monomial_description;
        std::string quantum = "j=" + detail::half_integer_text(row.spin.two_j) +
                              ", m=" + detail::half_integer_text(row.spin.two_m);
        cells.push_back({roots, state, quantum});
    }
    std::array<size_t, 3> width{0, 0, 0};
    for (const auto& row : cells)
        for (size_t c = 0; c < 3; ++c) width[c] = std::max(width[c], row[c].size());
    std::string out;
    for (const auto& row : cells) {
        for (size_t c = 0; c < 3; ++c) {
            out += row[c];
            if (c < 2) out += std::string(width[c] - row[c].size() + 2, ' ');
        }
        out += "\n";
    }
    return out;
}

/// Radix cost table over 2..r_max plus the arg-min row.
inline std::string render_radix_table(double range, int r_max) {
    std::string out = "radix  cost\n";
    for (int r = 2; r <= r_max; ++r)
        out += std::to_string(r) + "  " + detail::shortest(radix_cost({r, range, 1.0})) + "\n";
    out += "optimal radix: " + std::to_string(optimal_radix(range, r_max)) + "\n";
    return out;
}

/// Per-epoch training report as CSV.
inline std::string render_train_report_csv(const TrainReport& report, size_t sample_count) {
    std::string out = "epoch,misclassified,accuracy\n";
    for (size_t e = 0; e < report.per_epoch_errors.size(); ++e) {
        double acc = (static_cast<double>(sample_count) - report.per_epoch_errors[e]) /
                     static_cast<double>(sample_count);
        out += std::to_string(e + 1) + "," + std::to_string(report.per_epoch_errors[e]) + "," +
               detail::shortest(acc) + "\n";
    }
    return out;
}

/// Per-step perceptron trace as CSV; the ratio cell is empty until defined.
inline std::string render_perceptron_trace_csv(const PerceptronTrace& trace) {
    std::string out = "step,squared_error,contraction_ratio\n";
    for (size_t t = 0; t < trace.steps.size(); ++t) {
        const PerceptronStep& step = trace.steps[t];
        out += std::to_string(t + 1) + "," + detail::shortest(step.squared_error) + ",";
        if (step.contraction_ratio) out += detail::shortest(*step.contraction_ratio);
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// SVG sector plot.

struct PlotPoint {
    Complex position;
    bool correct = false;
};

/// Standalone SVG: the unit circle, exactly k sector-boundary lines, one dot
/// per sample weighted sum (green when the activation matches the target),
/// and an optional weighted-sum trajectory polyline.
inline std::string render_svg_plot(int k, const std::vector<PlotPoint>& points,
                                   const std::vector<Complex>& trajectory = {}) {
    if (k < 2) throw ShapeError("plot order must be >= 2");
    double radius = 1.3;
    for (const PlotPoint& p : points) radius = std::max(radius, 1.1 * std::abs(p.position));
    for (Complex z : trajectory) radius = std::max(radius, 1.1 * std::abs(z));

    auto num = [](double v) { return detail::shortest(v); };
    std::string r = num(radius);
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"-" +
           r + " -" + r + " " + num(2.0 * radius) + " " + num(2.0 * radius) + "\">\n";
    out += "  <circle class=\"unit-circle\" cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" "
           "stroke=\"#444444\" stroke-width=\"0.01\"/>\n";
    for (int j = 0; j < k; ++j) {
        double theta = two_pi * j / k;
        out += "  <line class=\"sector-boundary\" x1=\"0\" y1=\"0\" x2=\"" +
               num(radius * std::cos(theta)) + "\" y2=\"" + num(-radius * std::sin(theta)) +
               "\" stroke=\"#bbbbbb\" stroke-width=\"0.005\"/>\n";
    }
    if (trajectory.size() > 1) {
        out += "  <polyline class=\"trajectory\" fill=\"none\" stroke=\"#3366cc\" "
               "stroke-width=\"0.008\" points=\"";
        for (size_t i = 0; i < trajectory.size(); ++i) {
            if (i > 0) out += " ";
            out += num(trajectory[i].real()) + "," + num(-trajectory[i].imag());
        }
        out += "\"/>\n";
    }
    for (const PlotPoint& p : points) {
        out += "  <circle class=\"sample\" cx=\"" + num(p.position.real()) + "\" cy=\"" +
               num(-p.position.imag()) + "\" r=\"" + num(radius / 60.0) + "\" fill=\"" +
               (p.correct ? "#2a8f2a" : "#c03030") + "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace mvqn
