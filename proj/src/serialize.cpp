#include <cctype>
#include <sstream>

#include "json.hpp"
#include "qspec/io.hpp"

namespace qspec {

namespace {

using nlohmann::json;

bool plain_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.' || c == '~'))
            return false;
    return true;
}

std::string quote(const std::string& s) {
    if (plain_identifier(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string label_text(const Label& l) {
    struct Printer {
        std::string operator()(const DiscreteLabel& d) const { return quote(d.name); }
        std::string operator()(const WeightedLabel& w) const { return quote(w.action) + to_string(w.interval); }
        std::string operator()(const SetLabel& s) const {
            std::string out = "{";
            for (std::size_t i = 0; i < s.members.size(); ++i) out += (i ? "," : "") + quote(s.members[i]);
            return out + "}";
        }
    };
    return std::visit(Printer{}, l);
}

std::string edge_set_text(const EdgeSet& edges, const std::vector<std::string>& names) {
    std::string out = "{";
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (k) out += ", ";
        out += "(" + label_text(edges[k].label) + ", " + quote(names[edges[k].target]) + ")";
    }
    return out + "}";
}

std::string list_text(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t k = 0; k < items.size(); ++k) out += (k ? ", " : "") + quote(items[k]);
    return out;
}

void write_states(std::ostream& os, const std::vector<std::string>& names, const std::vector<StateId>& initial) {
    if (!names.empty()) os << "  state " << list_text(names) << ";\n";
    std::vector<std::string> init;
    for (StateId s : initial) init.push_back(names[s]);
    if (!init.empty()) os << "  init " << list_text(init) << ";\n";
}

void write_text(std::ostream& os, const Lts& l) {
    write_states(os, l.names, {l.initial});
    for (StateId s = 0; s < l.size(); ++s)
        for (const auto& e : l.out[s])
            os << "  trans " << quote(l.names[s]) << " -> " << quote(l.names[e.target]) << " : "
               << label_text(e.label) << ";\n";
}

void write_text(std::ostream& os, const Dmts& d) {
    write_states(os, d.names, d.initial);
    for (StateId s = 0; s < d.size(); ++s)
        for (const auto& e : d.may[s])
            os << "  may " << quote(d.names[s]) << " -> " << quote(d.names[e.target]) << " : "
               << label_text(e.label) << ";\n";
    for (StateId s = 0; s < d.size(); ++s)
        for (const auto& n : d.must[s]) os << "  must " << quote(d.names[s]) << " -> " << edge_set_text(n, d.names) << ";\n";
}

void write_text(std::ostream& os, const AcceptanceAutomaton& a) {
    write_states(os, a.names, a.initial);
    for (StateId s = 0; s < a.size(); ++s) {
        if (a.tran[s].empty()) continue;
        os << "  tran " << quote(a.names[s]) << " = {";
        for (std::size_t k = 0; k < a.tran[s].size(); ++k) os << (k ? ", " : "") << edge_set_text(a.tran[s][k], a.names);
        os << "};\n";
    }
}

void write_text(std::ostream& os, const NuExpr& n) {
    write_states(os, n.names, n.initial);
    for (StateId x = 0; x < n.size(); ++x) {
        if (n.diamond[x].empty()) continue;
        os << "  diamond " << quote(n.names[x]) << " = {";
        for (std::size_t k = 0; k < n.diamond[x].size(); ++k)
            os << (k ? ", " : "") << edge_set_text(n.diamond[x][k], n.names);
        os << "};\n";
    }
    for (StateId x = 0; x < n.size(); ++x)
        for (const auto& e : n.box[x])
            os << "  box " << quote(n.names[x]) << " : " << label_text(e.label) << " -> " << quote(n.names[e.target])
               << ";\n";
}

json edge_json(const Edge& e, const std::vector<std::string>& names) {
    return json{{"label", label_text(e.label)}, {"to", names[e.target]}};
}

json edges_json(const EdgeSet& edges, const std::vector<std::string>& names) {
    json out = json::array();
    for (const auto& e : edges) out.push_back(edge_json(e, names));
    return out;
}

json initial_json(const std::vector<StateId>& initial, const std::vector<std::string>& names) {
    json out = json::array();
    for (StateId s : initial) out.push_back(names[s]);
    return out;
}

json system_json(const System& sys) {
    json j;
    j["type"] = std::string(to_string(formalism_of(sys)));
    j["states"] = state_names(sys);
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Lts>) {
                j["initial"] = json::array({x.names[x.initial]});
                json tr = json::array();
                for (StateId s = 0; s < x.size(); ++s)
                    for (const auto& e : x.out[s]) {
                        json t = edge_json(e, x.names);
                        t["from"] = x.names[s];
                        tr.push_back(t);
                    }
                j["transitions"] = tr;
            } else if constexpr (std::is_same_v<T, Dmts>) {
                j["initial"] = initial_json(x.initial, x.names);
                json may = json::array(), must = json::array();
                for (StateId s = 0; s < x.size(); ++s) {
                    for (const auto& e : x.may[s]) {
                        json t = edge_json(e, x.names);
                        t["from"] = x.names[s];
                        may.push_back(t);
                    }
                    for (const auto& n : x.must[s]) must.push_back({{"from", x.names[s]}, {"choices", edges_json(n, x.names)}});
                }
                j["may"] = may;
                j["must"] = must;
            } else if constexpr (std::is_same_v<T, AcceptanceAutomaton>) {
                j["initial"] = initial_json(x.initial, x.names);
                json tran = json::array();
                for (StateId s = 0; s < x.size(); ++s) {
                    json sets = json::array();
                    for (const auto& m : x.tran[s]) sets.push_back(edges_json(m, x.names));
                    tran.push_back({{"state", x.names[s]}, {"sets", sets}});
                }
                j["tran"] = tran;
            } else {
                j["initial"] = initial_json(x.initial, x.names);
                json diamond = json::array(), box = json::array();
                for (StateId v = 0; v < x.size(); ++v) {
                    for (const auto& n : x.diamond[v])
                        diamond.push_back({{"var", x.names[v]}, {"choices", edges_json(n, x.names)}});
                    for (const auto& e : x.box[v]) {
                        json t = edge_json(e, x.names);
                        t["var"] = x.names[v];
                        box.push_back(t);
                    }
                }
                j["diamond"] = diamond;
                j["box"] = box;
            }
        },
        sys);
    return j;
}

json number_json(double v) {
    if (v == kInfinity) return "inf";
    return v;
}

} // namespace

std::string serialize(const SpecDocument& doc, Format format) {
    const LabelStructure& ls = doc.labels;
    if (format == Format::json) {
        json order = json::array();
        for (const auto& [a, b] : ls.order()) order.push_back({a, b});
        json systems = json::object();
        for (const auto& [name, sys] : doc.systems) systems[name] = system_json(sys);
        json j{{"structure",
                {{"kind", std::string(to_string(ls.kind()))},
                 {"alphabet", ls.alphabet()},
                 {"order", order},
                 {"sync", std::string(to_string(ls.sync()))}}},
               {"systems", systems}};
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "structure {\n  kind " << to_string(ls.kind()) << ";\n  alphabet " << list_text(ls.alphabet()) << ";\n";
    if (!ls.order().empty()) {
        os << "  order ";
        for (std::size_t k = 0; k < ls.order().size(); ++k)
            os << (k ? ", " : "") << quote(ls.order()[k].first) << " <= " << quote(ls.order()[k].second);
        os << ";\n";
    }
    os << "  sync " << to_string(ls.sync()) << ";\n}\n";
    for (const auto& [name, sys] : doc.systems) {
        os << "\nsystem " << quote(name) << " : " << to_string(formalism_of(sys)) << " {\n";
        std::visit([&](const auto& x) { write_text(os, x); }, sys);
        os << "}\n";
    }
    return os.str();
}

std::string distance_table_json(const DistanceTable& table, const std::vector<std::string>& left_names,
                                const std::vector<std::string>& right_names) {
    json pairs = json::array();
    for (StateId s1 = 0; s1 < table.left_size; ++s1)
        for (StateId s2 = 0; s2 < table.right_size; ++s2)
            pairs.push_back({{"left", left_names.at(s1)}, {"right", right_names.at(s2)}, {"value", number_json(table.at(s1, s2))}});
    json j{{"pairs", pairs},
           {"converged", table.converged},
           {"error_bound", number_json(table.error_bound)},
           {"rounds", table.rounds}};
    return j.dump(2);
}

} // namespace qspec
