#include "teamlogic/io.hpp"

#include <fstream>
#include <sstream>

namespace teamlogic {

using nlohmann::json;

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(part);
    if (!s.empty() && s.back() == ',') out.push_back("");
    return out;
}

Tuple labels_to_tuple(const Model& m, const json& row) {
    Tuple t;
    for (const auto& v : row) t.push_back(m.element(v.get<std::string>()));
    return t;
}

}  // namespace

Model model_from_json(const json& j, bool allow_unit) {
    try {
        Model m(j.at("domain").get<std::vector<std::string>>(), allow_unit);
        if (j.contains("constants"))
            for (const auto& [name, v] : j["constants"].items()) m.set_constant(name, m.element(v.get<std::string>()));
        if (j.contains("functions"))
            for (const auto& [name, graph] : j["functions"].items()) {
                std::map<Tuple, Elem> g;
                int arity = -1;
                for (const auto& [key, v] : graph.items()) {
                    Tuple args;
                    for (const auto& lbl : split_commas(key)) args.push_back(m.element(lbl));
                    if (arity >= 0 && arity != static_cast<int>(args.size()))
                        throw IoError("function " + name + " has keys of different arity");
                    arity = static_cast<int>(args.size());
                    g[args] = m.element(v.get<std::string>());
                }
                if (arity < 0) throw IoError("function " + name + " has no entries");
                m.set_function(name, g, arity);
            }
        if (j.contains("relations"))
            for (const auto& [name, spec] : j["relations"].items()) {
                const json& rows = spec.is_object() ? spec.at("tuples") : spec;
                int arity = spec.is_object() ? spec.at("arity").get<int>() : -1;
                TupleSet ts;
                for (const auto& row : rows) {
                    Tuple t = labels_to_tuple(m, row);
                    if (arity < 0) arity = static_cast<int>(t.size());
                    if (arity != static_cast<int>(t.size())) throw IoError("relation " + name + " has tuples of different width");
                    ts.insert(t);
                }
                if (arity < 0) throw IoError("empty relation " + name + " needs an explicit arity");
                m.set_relation(name, arity, std::move(ts));
            }
        return m;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed model: ") + e.what());
    }
}

json model_to_json(const Model& m) {
    json j;
    j["domain"] = m.domain();
    json consts = json::object();
    for (const auto& [name, e] : m.constants()) consts[name] = m.label(e);
    j["constants"] = consts;
    json rels = json::object();
    for (const auto& [name, r] : m.relations()) {
        json rows = json::array();
        for (const auto& t : r.second) {
            json row = json::array();
            for (Elem e : t) row.push_back(m.label(e));
            rows.push_back(row);
        }
        rels[name] = {{"arity", r.first}, {"tuples", rows}};
    }
    j["relations"] = rels;
    json fns = json::object();
    for (const auto& [name, f] : m.functions()) {
        json g = json::object();
        for (std::size_t c = 0; c < f.table.size(); ++c) {
            std::string key;
            std::size_t rest = c;
            std::vector<std::string> parts(static_cast<std::size_t>(f.arity));
            for (int i = f.arity - 1; i >= 0; --i) {
                parts[static_cast<std::size_t>(i)] = m.label(static_cast<Elem>(rest % static_cast<std::size_t>(m.size())));
                rest /= static_cast<std::size_t>(m.size());
            }
            for (std::size_t i = 0; i < parts.size(); ++i) key += (i ? "," : "") + parts[i];
            g[key] = m.label(f.table[c]);
        }
        fns[name] = g;
    }
    j["functions"] = fns;
    return j;
}

Team team_from_json(const Model& m, const json& j) {
    try {
        std::vector<Tuple> rows;
        for (const auto& row : j.at("rows")) rows.push_back(labels_to_tuple(m, row));
        return Team(j.at("vars").get<std::vector<std::string>>(), std::move(rows));
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed team: ") + e.what());
    }
}

json team_to_json(const Model& m, const Team& x) {
    json rows = json::array();
    for (const auto& r : x.rows) {
        json row = json::array();
        for (Elem e : r) row.push_back(m.label(e));
        rows.push_back(row);
    }
    return {{"vars", x.vars}, {"rows", rows}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
}

Model load_model(const std::string& path, bool allow_unit) { return model_from_json(read_json_file(path), allow_unit); }

Team load_team(const Model& m, const std::string& path) { return team_from_json(m, read_json_file(path)); }

Fixture load_fixture(const std::string& path, bool allow_unit) {
    json j = read_json_file(path);
    Fixture f;
    f.raw = j;
    f.name = j.value("name", path);
    f.model = model_from_json(j.at("model"), allow_unit);
    f.team = j.contains("team") ? team_from_json(f.model, j["team"]) : empty_assignment_team();
    f.formula = j.value("formula", "");
    if (j.contains("expect"))
        for (const auto& [mode, v] : j["expect"].items()) f.expect[parse_mode(mode)] = v.get<std::string>();
    return f;
}

}  // namespace teamlogic
