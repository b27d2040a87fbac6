#include "h2net/json_io.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "h2net/errors.hpp"

namespace h2net {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidInput("malformed JSON in " + path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

DenseMatrix parse_matrix(const json& j, const std::string& name) {
    if (!j.is_array() || j.empty()) {
        throw InvalidInput(name + " must be a non-empty 2-D array");
    }
    const std::size_t rows = j.size();
    if (!j[0].is_array()) throw InvalidInput(name + " must be a 2-D array");
    const std::size_t cols = j[0].size();
    std::vector<double> entries;
    entries.reserve(rows * cols);
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != cols) {
            throw InvalidInput(name + " has ragged rows");
        }
        for (const auto& v : row) {
            if (!v.is_number()) throw InvalidInput(name + " has a non-numeric entry");
            entries.push_back(v.get<double>());
        }
    }
    try {
        return DenseMatrix(rows, cols, std::move(entries));
    } catch (const InvalidInput&) {
        throw InvalidInput(name + " has a non-finite entry");
    }
}

json matrix_to_json(const DenseMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

const json& require(const json& j, const std::string& key, const std::string& what) {
    auto it = j.find(key);
    if (it == j.end()) throw InvalidInput(what + " is missing \"" + key + "\"");
    return *it;
}

} // namespace

AgentModel load_model(const std::string& path) {
    const json j = read_json_file(path);
    return AgentModel(parse_matrix(require(j, "A", "model"), "A"),
                      parse_matrix(require(j, "B", "model"), "B"),
                      parse_matrix(require(j, "C1", "model"), "C1"),
                      parse_matrix(require(j, "D1", "model"), "D1"),
                      parse_matrix(require(j, "C2", "model"), "C2"),
                      parse_matrix(require(j, "D2", "model"), "D2"),
                      parse_matrix(require(j, "E", "model"), "E"));
}

WeightedGraph load_graph(const std::string& path) {
    const json j = read_json_file(path);
    const json& nodes = require(j, "nodes", "graph");
    if (!nodes.is_number_integer() || nodes.get<int>() <= 0) {
        throw InvalidInput("graph \"nodes\" must be a positive integer");
    }
    std::vector<WeightedGraph::Edge> edges;
    const json& je = require(j, "edges", "graph");
    if (!je.is_array()) throw InvalidInput("graph \"edges\" must be an array");
    for (const auto& e : je) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
            !e[1].is_number_integer() || !e[2].is_number()) {
            throw InvalidInput("each edge must be [i, j, w]");
        }
        edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    return WeightedGraph(nodes.get<int>(), std::move(edges));
}

Scenario load_scenario(const std::string& path) {
    const json j = read_json_file(path);
    Scenario sc;
    sc.x0 = parse_matrix(require(j, "x0", "scenario"), "x0");
    if (auto it = j.find("w0"); it != j.end() && !(it->is_string() && *it == "zeros")) {
        sc.w0 = parse_matrix(*it, "w0");
    }
    const json& T = require(j, "T", "scenario");
    const json& dt = require(j, "dt", "scenario");
    if (!T.is_number() || !dt.is_number()) throw InvalidInput("T and dt must be numbers");
    sc.horizon = T.get<double>();
    sc.dt = dt.get<double>();
    if (!(sc.dt > 0.0) || sc.horizon < sc.dt) {
        throw InvalidInput("scenario needs dt > 0 and T >= dt");
    }

    if (auto it = j.find("disturbance"); it != j.end() && !it->is_null()) {
        const json& d = *it;
        const std::string type = require(d, "type", "disturbance").get<std::string>();
        if (type == "none") {
            sc.disturbance.type = Disturbance::Type::None;
        } else if (type == "pulse") {
            sc.disturbance.type = Disturbance::Type::Pulse;
            Disturbance::Pulse p;
            p.agent = require(d, "agent", "pulse").get<int>();
            p.channel = require(d, "channel", "pulse").get<int>();
            p.width = d.value("width", 1e-3);
            p.start = d.value("start", 0.0);
            p.height = d.contains("height") ? d["height"].get<double>() : 1.0 / p.width;
            if (!(p.width > 0.0)) throw InvalidInput("pulse width must be positive");
            sc.disturbance.pulses.push_back(p);
        } else if (type == "table") {
            sc.disturbance.type = Disturbance::Type::Table;
            for (const auto& ent : require(d, "entries", "table disturbance")) {
                Disturbance::TableEntry te;
                te.agent = require(ent, "agent", "table entry").get<int>();
                te.channel = require(ent, "channel", "table entry").get<int>();
                te.times = require(ent, "times", "table entry").get<std::vector<double>>();
                te.values = require(ent, "values", "table entry").get<std::vector<double>>();
                if (te.times.size() != te.values.size()) {
                    throw InvalidInput("table entry times/values length mismatch");
                }
                if (!std::is_sorted(te.times.begin(), te.times.end())) {
                    throw InvalidInput("table entry times must be ascending");
                }
                sc.disturbance.tables.push_back(std::move(te));
            }
        } else {
            throw InvalidInput("unknown disturbance type: " + type);
        }
    }
    return sc;
}

std::string case_name(CaseSelect c) {
    switch (c) {
        case CaseSelect::CaseI: return "i";
        case CaseSelect::CaseII: return "ii";
        case CaseSelect::Auto: return "auto";
    }
    return "auto";
}

std::string noise_form_name(NoiseForm f) {
    return f == NoiseForm::EEt ? "EEt" : "EtE";
}

NoiseForm parse_noise_form(const std::string& s) {
    if (s == "EEt") return NoiseForm::EEt;
    if (s == "EtE") return NoiseForm::EtE;
    throw InvalidInput("noise form must be EEt or EtE, got: " + s);
}

void save_gains(const std::string& path, const ProtocolGains& gains,
                const DesignCertificate& cert, bool feasible) {
    json j;
    j["F"] = matrix_to_json(gains.F);
    j["G"] = matrix_to_json(gains.G);
    json c;
    c["P"] = matrix_to_json(cert.P);
    c["Q"] = matrix_to_json(cert.Q);
    c["params"] = {{"gamma", cert.params.gamma},
                   {"c", cert.params.c},
                   {"case", case_name(cert.params.case_used)},
                   {"eps", cert.params.eps},
                   {"sigma", cert.params.sigma},
                   {"noise_form", noise_form_name(cert.params.noise_form)}};
    c["S_value"] = cert.S_value;
    c["bound_total"] = cert.bound_total;
    c["riccati_residuals"] = {cert.riccati_residual_P, cert.riccati_residual_Q};
    c["modal_hurwitz"] = cert.modal_hurwitz;
    c["observer_hurwitz"] = cert.observer_hurwitz;
    c["feasible"] = feasible;
    j["certificate"] = std::move(c);
    write_json_file(path, j);
}

ProtocolGains load_gains(const std::string& path) {
    const json j = read_json_file(path);
    ProtocolGains g;
    g.F = parse_matrix(require(j, "F", "gains"), "F");
    g.G = parse_matrix(require(j, "G", "gains"), "G");
    return g;
}

} // namespace h2net
