#include "rsnet/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "rsnet/error.hpp"

namespace rsnet {

namespace fs = std::filesystem;

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
    return buf;
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp, ec);
            throw IoError("failed writing " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " to " + path.string());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json to_json(const DeviceParams& p) {
    return Json{{"epsilon", p.epsilon}, {"theta", p.theta},   {"gamma", p.gamma},
                {"delta", p.delta},     {"lambda", p.lambda}, {"eta", p.eta},
                {"tau", p.tau},         {"th_low", p.th_low}, {"th_high", p.th_high},
                {"g_floor", p.g_floor}};
}

namespace {

template <class T>
T required(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw DataError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw DataError(std::string("field '") + key + "' has the wrong type");
    }
}

}  // namespace

DeviceParams device_params_from_json(const Json& j) {
    DeviceParams p;
    p.epsilon = required<double>(j, "epsilon");
    p.theta = required<double>(j, "theta");
    p.gamma = required<double>(j, "gamma");
    p.delta = required<double>(j, "delta");
    p.lambda = required<double>(j, "lambda");
    p.eta = required<double>(j, "eta");
    p.tau = required<double>(j, "tau");
    p.th_low = required<double>(j, "th_low");
    p.th_high = required<double>(j, "th_high");
    p.g_floor = required<double>(j, "g_floor");
    validate(p);
    return p;
}

Json to_json(const NetworkTopology& t) {
    Json edges = Json::array();
    for (const auto& e : t.edges)
        edges.push_back(Json{{"a", e.a},
                             {"b", e.b},
                             {"params", to_json(e.params)},
                             {"state", Json{{"w_prime", e.state.w_prime}, {"w", e.state.w}}}});
    return Json{{"format", "rsnet-topology"},
                {"version", 1},
                {"grid", Json{{"interface_dim", t.grid.interface_dim()}, {"subdivision", t.grid.subdivision()}}},
                {"input_index", t.input},
                {"ground_index", t.ground},
                {"seed", t.seed},
                {"generated_edges", t.generated_edges},
                {"edges", std::move(edges)}};
}

NetworkTopology topology_from_json(const Json& j) {
    if (!j.is_object() || j.value("format", "") != "rsnet-topology")
        throw DataError("not an rsnet topology document");
    const auto& g = j.at("grid");
    NetworkTopology t;
    try {
        t.grid = build_grid(required<std::size_t>(g, "interface_dim"), required<std::size_t>(g, "subdivision"));
    } catch (const ParameterError& e) {
        throw DataError(e.what());
    }
    t.input = required<std::size_t>(j, "input_index");
    t.ground = required<std::size_t>(j, "ground_index");
    t.seed = required<std::uint64_t>(j, "seed");
    t.generated_edges = required<std::size_t>(j, "generated_edges");
    if (t.input >= t.grid.interface_count() || t.ground >= t.grid.interface_count() || t.input == t.ground)
        throw DataError("invalid input/ground index");
    const auto& edges = j.at("edges");
    if (!edges.is_array()) throw DataError("'edges' must be an array");
    for (const auto& e : edges) {
        Edge edge;
        edge.a = required<NodeId>(e, "a");
        edge.b = required<NodeId>(e, "b");
        if (edge.a >= t.grid.node_count() || edge.b >= t.grid.node_count() || edge.a == edge.b)
            throw DataError("edge endpoint invalid");
        try {
            edge.params = device_params_from_json(e.at("params"));
        } catch (const ParameterError& err) {
            throw DataError(err.what());
        }
        const auto& s = e.at("state");
        edge.state.w_prime = required<double>(s, "w_prime");
        edge.state.w = required<int>(s, "w");
        if (!(edge.state.w_prime >= 0 && edge.state.w_prime <= 1) || (edge.state.w != 0 && edge.state.w != 1))
            throw DataError("edge state invalid");
        t.edges.push_back(edge);
    }
    return t;
}

void write_topology(const fs::path& path, const NetworkTopology& t) {
    write_file_atomic(path, to_json(t).dump(1) + "\n");
}

NetworkTopology read_topology(const fs::path& path) {
    const std::string text = read_file(path);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    try {
        return topology_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string trace_csv(const SimulationTrace& trace) {
    std::string out = "t,v_in,i_src";
    const long cols = trace.interface_voltages.cols();
    for (long c = 0; c < cols; ++c) out += ",node_" + std::to_string(c + 1);
    out += '\n';
    for (std::size_t k = 0; k < trace.steps(); ++k) {
        out += format_number(trace.times[k]);
        out += ',' + format_number(trace.applied_voltage[k]);
        out += ',' + format_number(trace.source_current[k]);
        for (long c = 0; c < cols; ++c) out += ',' + format_number(trace.interface_voltages(static_cast<long>(k), c));
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view s) {
    std::string tmp(s);
    char* end = nullptr;
    const double v = std::strtod(tmp.c_str(), &end);
    if (tmp.empty() || end != tmp.c_str() + tmp.size()) throw DataError("malformed number '" + tmp + "'");
    return v;
}

}  // namespace

SimulationTrace parse_trace_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw DataError("trace: empty file");
    const auto header = split(lines.front(), ',');
    if (header.size() < 4 || header[0] != "t" || header[1] != "v_in" || header[2] != "i_src")
        throw DataError("trace: unexpected header");
    const std::size_t nodes = header.size() - 3;

    SimulationTrace tr;
    tr.interface_voltages.resize(static_cast<long>(lines.size() - 1), static_cast<long>(nodes));
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto f = split(lines[r], ',');
        if (f.size() != header.size()) throw DataError("trace: row " + std::to_string(r) + " has wrong field count");
        tr.times.push_back(parse_double(f[0]));
        tr.applied_voltage.push_back(parse_double(f[1]));
        tr.source_current.push_back(parse_double(f[2]));
        for (std::size_t c = 0; c < nodes; ++c)
            tr.interface_voltages(static_cast<long>(r - 1), static_cast<long>(c)) = parse_double(f[c + 3]);
    }
    if (tr.times.size() >= 2) tr.dt = tr.times[1] - tr.times[0];
    for (std::size_t k = 2; k < tr.times.size(); ++k)
        if (std::abs((tr.times[k] - tr.times[k - 1]) - tr.dt) > 1e-6 * tr.dt)
            throw DataError("trace: time column is not uniformly spaced");
    return tr;
}

std::string records_csv(const std::vector<SweepRecord>& records) {
    std::string out(kRecordsHeader);
    out += '\n';
    for (const auto& r : records) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out += format_number(r.alpha) + ',' + format_number(r.beta) + ',' + format_number(r.xi) + ',' +
               format_number(r.v) + ',' + std::to_string(r.trial) + ',' + std::to_string(r.seed) + ',' +
               format_number(r.entropy_bits) + ',' + format_number(r.energy_joules) + ',' +
               std::to_string(r.switching_events) + ',' + std::to_string(r.edge_count) + ',' +
               (r.degenerate ? "1" : "0") + ',' + err + '\n';
    }
    return out;
}

std::string aggregates_csv(const std::vector<CellAggregate>& cells) {
    std::string out(kAggregateHeader);
    out += '\n';
    for (const auto& c : cells)
        out += format_number(c.alpha) + ',' + format_number(c.beta) + ',' + format_number(c.xi) + ',' +
               format_number(c.v) + ',' + std::to_string(c.trials_ok) + ',' + std::to_string(c.trials_failed) + ',' +
               format_number(c.mean_entropy) + ',' + format_number(c.sd_entropy) + ',' +
               format_number(c.mean_energy) + ',' + format_number(c.sd_energy) + '\n';
    return out;
}

namespace {

// Linear blue -> yellow ramp.
std::string color(double x) {
    x = std::clamp(std::isfinite(x) ? x : 0.0, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(68 + x * (253 - 68)));
    const int g = static_cast<int>(std::lround(1 + x * (231 - 1)));
    const int b = static_cast<int>(std::lround(84 + x * (37 - 84)));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

constexpr int kCell = 48;
constexpr int kMargin = 60;

}  // namespace

std::string heatmap_svg(const std::vector<double>& alphas, const std::vector<double>& betas,
                        const std::vector<double>& values, const std::string& title) {
    if (values.size() != alphas.size() * betas.size()) throw DataError("heatmap: value count mismatch");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : values)
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const double span = hi > lo ? hi - lo : 1.0;
    const int w = kMargin * 2 + kCell * static_cast<int>(alphas.size());
    const int h = kMargin * 2 + kCell * static_cast<int>(betas.size());
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    s << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    for (std::size_t bi = 0; bi < betas.size(); ++bi)
        for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
            const double v = values[bi * alphas.size() + ai];
            s << "<rect class=\"cell\" x=\"" << kMargin + kCell * static_cast<int>(ai) << "\" y=\""
              << kMargin + kCell * static_cast<int>(bi) << "\" width=\"" << kCell << "\" height=\"" << kCell
              << "\" fill=\"" << color((v - lo) / span) << "\"><title>" << format_number(v) << "</title></rect>\n";
        }
    for (std::size_t ai = 0; ai < alphas.size(); ++ai)
        s << "<text class=\"alpha\" x=\"" << kMargin + kCell * static_cast<int>(ai) + kCell / 2 << "\" y=\""
          << h - kMargin + 18 << "\" text-anchor=\"middle\" font-size=\"12\">" << format_number(alphas[ai])
          << "</text>\n";
    for (std::size_t bi = 0; bi < betas.size(); ++bi)
        s << "<text class=\"beta\" x=\"" << kMargin - 8 << "\" y=\"" << kMargin + kCell * static_cast<int>(bi) + kCell / 2 + 4
          << "\" text-anchor=\"end\" font-size=\"12\">" << format_number(betas[bi]) << "</text>\n";
    s << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-size=\"13\">alpha</text>\n";
    s << "<text x=\"14\" y=\"" << h / 2 << "\" font-size=\"13\">beta</text>\n";
    s << "</svg>\n";
    return s.str();
}

std::string energy_entropy_svg(const std::vector<CellAggregate>& cells, const std::string& title) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& c : cells)
        if (c.trials_ok > 0 && c.mean_energy > 0) pts.emplace_back(std::log10(c.mean_energy), c.mean_entropy);
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!pts.empty()) {
        x0 = y0 = std::numeric_limits<double>::infinity();
        x1 = y1 = -x0;
        for (auto [x, y] : pts) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
        if (x1 <= x0) x1 = x0 + 1;
        if (y1 <= y0) y1 = y0 + 1;
    }
    constexpr int W = 480, H = 360;
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    s << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    s << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << W - 2 * kMargin << "\" height=\""
      << H - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (auto [x, y] : pts) {
        const double px = kMargin + (x - x0) / (x1 - x0) * (W - 2 * kMargin);
        const double py = H - kMargin - (y - y0) / (y1 - y0) * (H - 2 * kMargin);
        s << "<circle cx=\"" << format_number(px) << "\" cy=\"" << format_number(py) << "\" r=\"3\"/>\n";
    }
    s << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\" font-size=\"13\">log10(E) ["
      << format_number(x0) << ", " << format_number(x1) << "]</text>\n";
    s << "<text x=\"10\" y=\"" << H / 2 << "\" font-size=\"13\">H [" << format_number(y0) << ", "
      << format_number(y1) << "]</text>\n";
    s << "</svg>\n";
    return s.str();
}

}  // namespace rsnet
