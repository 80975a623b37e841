#include "mixbnd/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mixbnd/error.hpp"

namespace mixbnd {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::BadFormat, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::BadFormat, "cannot write " + path);
    out << text;
    if (!out) throw Error(ErrorCode::BadFormat, "write failed for " + path);
}

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::BadFormat, e.what());
    }
}

template <class F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadFormat, std::string(what) + ": " + e.what());
    }
}

Dag dag_from(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw Error(ErrorCode::BadFormat, "graph needs fields \"n\" and \"edges\"");
    return guarded("graph", [&] {
        const int n = j.at("n").get<int>();
        if (n < 0) throw Error(ErrorCode::BadFormat, "negative vertex count");
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw Error(ErrorCode::BadFormat, "edge must be a [parent, child] pair");
            edges.push_back({VertexId{e[0].get<int>()}, VertexId{e[1].get<int>()}});
        }
        return Dag::create(n, std::move(edges));
    });
}

json dag_json(const Dag& g) {
    json edges = json::array();
    for (const Edge& e : g.edges()) edges.push_back({e.parent.value, e.child.value});
    return json{{"n", g.n()}, {"edges", edges}};
}

json vertex_list(const VertexSet& s) {
    json out = json::array();
    for (VertexId v : s) out.push_back(v.value);
    return out;
}

void check_parents(const Dag& g, int v, const json& cpt) {
    if (!cpt.contains("parents")) return;
    std::vector<int> listed = cpt.at("parents").get<std::vector<int>>();
    std::vector<int> actual;
    for (VertexId p : g.parents(VertexId{v})) actual.push_back(p.value);
    if (listed != actual)
        throw Error(ErrorCode::ShapeMismatch, "cpt parents of vertex " + std::to_string(v) + " disagree with graph");
}

json model_json(const MixtureModel& m) {
    json cpts = json::array();
    for (int v = 0; v < m.n(); ++v) {
        json tables = json::array();
        for (int u = 0; u < m.k(); ++u) tables.push_back(m.cpt(u, VertexId{v}).table);
        cpts.push_back({{"vertex", v}, {"parents", vertex_list(m.dag().parents(VertexId{v}))}, {"tables", tables}});
    }
    return json{{"graph", dag_json(m.dag())}, {"k", m.k()}, {"weights", m.weights()}, {"cpts", cpts}};
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

// Returns whether a trailing u column is present.
bool check_header(const std::string& header, int n) {
    const auto cells = split_cells(header);
    const bool with_u = static_cast<int>(cells.size()) == n + 1;
    if (static_cast<int>(cells.size()) != n && !with_u)
        throw Error(ErrorCode::BadFormat, "line 1: expected " + std::to_string(n) + " columns");
    for (int v = 0; v < n; ++v)
        if (cells[static_cast<std::size_t>(v)] != "v" + std::to_string(v))
            throw Error(ErrorCode::BadFormat, "line 1: column " + std::to_string(v) + " must be v" + std::to_string(v));
    if (with_u && cells.back() != "u") throw Error(ErrorCode::BadFormat, "line 1: last column must be u");
    return with_u;
}

int parse_cell(const std::string& cell, int limit, std::size_t line) {
    int value = -1;
    try {
        std::size_t used = 0;
        value = std::stoi(cell, &used);
        if (used != cell.size()) value = -1;
    } catch (const std::exception&) {
        value = -1;
    }
    if (value < 0 || value >= limit) {
        throw Error(ErrorCode::BadFormat,
                    "line " + std::to_string(line) + ": bad cell \"" + cell + "\"");
    }
    return value;
}

std::string csv_header(int n, bool with_u) {
    std::string out;
    for (int v = 0; v < n; ++v) out += (v ? ",v" : "v") + std::to_string(v);
    if (with_u) out += ",u";
    return out + "\n";
}

}  // namespace

Dag parse_dag(const std::string& text) { return dag_from(parse_json(text)); }

std::string dag_to_json(const Dag& g) { return dag_json(g).dump(2) + "\n"; }

MixtureModel parse_model(const std::string& text) {
    const json j = parse_json(text);
    if (!j.is_object() || !j.contains("graph"))
        throw Error(ErrorCode::BadFormat, "model needs a \"graph\" field");
    Dag g = dag_from(j.at("graph"));
    return guarded("model", [&] {
        const int k = j.at("k").get<int>();
        std::vector<double> weights = j.at("weights").get<std::vector<double>>();
        if (static_cast<int>(weights.size()) != k) throw Error(ErrorCode::ShapeMismatch, "weights length differs from k");
        std::vector<std::vector<std::vector<double>>> tables(static_cast<std::size_t>(k),
                                                             std::vector<std::vector<double>>(g.n()));
        const json& cpts = j.at("cpts");
        if (!cpts.is_array() || static_cast<int>(cpts.size()) != g.n())
            throw Error(ErrorCode::ShapeMismatch, "need one cpt entry per vertex");
        for (const auto& c : cpts) {
            const int v = c.at("vertex").get<int>();
            if (v < 0 || v >= g.n()) throw Error(ErrorCode::BadVertexIndex, "cpt vertex " + std::to_string(v));
            check_parents(g, v, c);
            const json& t = c.at("tables");
            if (static_cast<int>(t.size()) != k) throw Error(ErrorCode::ShapeMismatch, "need one table per source");
            for (int u = 0; u < k; ++u) tables[u][v] = t[static_cast<std::size_t>(u)].get<std::vector<double>>();
        }
        return MixtureModel(g, std::move(weights), std::move(tables));
    });
}

std::string model_to_json(const MixtureModel& m) { return model_json(m).dump(2) + "\n"; }

std::string recovered_to_json(const RecoveredModel& r, const RunCollection& coll) {
    json out = model_json(r.model);
    const Diagnostics& d = r.diagnostics;
    json runs = json::array();
    for (std::size_t i = 0; i < d.encodings.size(); ++i) {
        json entry{{"encoding", d.encodings[i]}, {"permutation", d.perms[i]}};
        if (i < coll.labels.size()) entry["label"] = coll.labels[i];
        runs.push_back(entry);
    }
    json tree = json::array();
    for (std::size_t e = 0; e < coll.tree.size(); ++e) {
        tree.push_back({{"parent", coll.tree[e].parent},
                        {"child", coll.tree[e].child},
                        {"variable", e < d.edge_variable.size() ? d.edge_variable[e] : -1}});
    }
    json params = json::array();
    for (std::size_t v = 0; v < d.plan.entries.size(); ++v) {
        for (std::size_t mask = 0; mask < d.plan.entries[v].size(); ++mask) {
            const ParameterSource& src = d.plan.entries[v][mask];
            params.push_back({{"vertex", v},
                              {"mask", mask},
                              {"run", src.run},
                              {"encoding", d.encodings[static_cast<std::size_t>(src.run)]},
                              {"bottom", src.bottom},
                              {"level", src.level},
                              {"bound", d.ledger.bound[v][mask]},
                              {"discrepancy", d.discrepancy[v][mask]}});
        }
    }
    out["diagnostics"] = json{
        {"oracle_calls", d.encodings.size()},
        {"root", coll.root},
        {"runs", runs},
        {"tree", tree},
        {"parameters", params},
        {"ledger",
         {{"eps", d.ledger.eps},
          {"max_degree", d.ledger.max_degree},
          {"parameter_bound", d.ledger.parameter_bound},
          {"weight_bound", d.ledger.weight_bound},
          {"weight_hypothesis_met", d.ledger.weight_hypothesis_met}}},
        {"unconverged_runs", d.unconverged_runs},
        {"max_discrepancy", d.max_discrepancy},
        {"coverage_gaps", 0}};
    return out.dump(2) + "\n";
}

SampleSet parse_samples_csv(const std::string& text, int n) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw Error(ErrorCode::BadFormat, "line 1: missing header");
    const bool with_u = check_header(lines[0], n);
    SampleSet s;
    s.n = n;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto cells = split_cells(lines[i]);
        if (cells.size() != static_cast<std::size_t>(n + (with_u ? 1 : 0)))
            throw Error(ErrorCode::BadFormat, "line " + std::to_string(i + 1) + ": wrong column count");
        for (int v = 0; v < n; ++v)
            s.cells.push_back(static_cast<std::uint8_t>(parse_cell(cells[static_cast<std::size_t>(v)], 2, i + 1)));
        if (with_u) s.sources.push_back(parse_cell(cells.back(), 1 << 20, i + 1));
    }
    return s;
}

std::string samples_to_csv(const SampleSet& s) {
    const bool with_u = !s.sources.empty();
    std::string out = csv_header(s.n, with_u);
    for (std::size_t r = 0; r < s.size(); ++r) {
        const std::uint8_t* row = s.row(r);
        for (int v = 0; v < s.n; ++v) {
            if (v) out += ',';
            out += row[v] ? '1' : '0';
        }
        if (with_u) out += "," + std::to_string(s.sources[r]);
        out += '\n';
    }
    return out;
}

DaryModel parse_dary_model(const std::string& text) {
    const json j = parse_json(text);
    if (!j.is_object() || !j.contains("graph"))
        throw Error(ErrorCode::BadFormat, "model needs a \"graph\" field");
    Dag g = dag_from(j.at("graph"));
    return guarded("d-ary model", [&] {
        const int d = j.at("d").get<int>();
        const int k = j.at("k").get<int>();
        std::vector<double> weights = j.at("weights").get<std::vector<double>>();
        if (static_cast<int>(weights.size()) != k) throw Error(ErrorCode::ShapeMismatch, "weights length differs from k");
        std::vector<std::vector<std::vector<std::vector<double>>>> tables(
            static_cast<std::size_t>(k), std::vector<std::vector<std::vector<double>>>(g.n()));
        const json& cpts = j.at("cpts");
        if (!cpts.is_array() || static_cast<int>(cpts.size()) != g.n())
            throw Error(ErrorCode::ShapeMismatch, "need one cpt entry per vertex");
        for (const auto& c : cpts) {
            const int v = c.at("vertex").get<int>();
            if (v < 0 || v >= g.n()) throw Error(ErrorCode::BadVertexIndex, "cpt vertex " + std::to_string(v));
            check_parents(g, v, c);
            const json& t = c.at("tables");
            if (static_cast<int>(t.size()) != k) throw Error(ErrorCode::ShapeMismatch, "need one table per source");
            for (int u = 0; u < k; ++u)
                tables[u][v] = t[static_cast<std::size_t>(u)].get<std::vector<std::vector<double>>>();
        }
        return DaryModel(g, d, std::move(weights), std::move(tables));
    });
}

std::string dary_model_to_json(const DaryModel& m) {
    json cpts = json::array();
    for (int v = 0; v < m.n(); ++v) {
        json tables = json::array();
        for (int u = 0; u < m.k(); ++u) {
            json rows = json::array();
            for (std::size_t c = 0; c < m.configs(VertexId{v}); ++c) rows.push_back(m.row(u, VertexId{v}, c));
            tables.push_back(rows);
        }
        cpts.push_back({{"vertex", v}, {"parents", vertex_list(m.dag().parents(VertexId{v}))}, {"tables", tables}});
    }
    json out{{"graph", dag_json(m.dag())}, {"d", m.d()}, {"k", m.k()}, {"weights", m.weights()}, {"cpts", cpts}};
    return out.dump(2) + "\n";
}

DarySamples parse_dary_csv(const std::string& text, int n, int d) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw Error(ErrorCode::BadFormat, "line 1: missing header");
    const bool with_u = check_header(lines[0], n);
    DarySamples s;
    s.n = n;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto cells = split_cells(lines[i]);
        if (cells.size() != static_cast<std::size_t>(n + (with_u ? 1 : 0)))
            throw Error(ErrorCode::BadFormat, "line " + std::to_string(i + 1) + ": wrong column count");
        for (int v = 0; v < n; ++v) s.cells.push_back(parse_cell(cells[static_cast<std::size_t>(v)], d, i + 1));
    }
    return s;
}

std::string dary_samples_to_csv(const DarySamples& s) {
    std::string out = csv_header(s.n, false);
    for (std::size_t r = 0; r < s.size(); ++r) {
        for (int v = 0; v < s.n; ++v) {
            if (v) out += ',';
            out += std::to_string(s.cells[r * static_cast<std::size_t>(s.n) + static_cast<std::size_t>(v)]);
        }
        out += '\n';
    }
    return out;
}

std::string dump_runs(const RunCollection& coll) {
    std::ostringstream out;
    out << "runs " << coll.runs.size() << "\n";
    for (std::size_t i = 0; i < coll.runs.size(); ++i) {
        out << "run " << i << " " << encode_run(coll.runs[i]);
        if (i < coll.labels.size()) out << " " << coll.labels[i];
        out << "\n";
    }
    out << "root " << coll.root << "\n";
    for (const TreeEdge& e : coll.tree)
        out << "edge " << e.parent << " " << e.child << " variables " << to_string(e.candidates) << "\n";
    return out.str();
}

}  // namespace mixbnd
