#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "qspec/errors.hpp"
#include "qspec/io.hpp"

namespace qspec {

namespace {

enum class Tok { ident, string, number, punct, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    double number = 0.0;
    std::size_t line = 1;
    std::size_t column = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.' || c == '~';
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.line = line_;
            t.column = col_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            const char c = src_[pos_];
            if (ident_start(c)) {
                t.kind = Tok::ident;
                while (pos_ < src_.size() && ident_char(src_[pos_])) t.text += advance();
            } else if (c == '"') {
                t.kind = Tok::string;
                advance();
                for (;;) {
                    if (pos_ >= src_.size() || src_[pos_] == '\n')
                        throw ParseError("unterminated string", t.line, t.column);
                    char d = advance();
                    if (d == '"') break;
                    if (d == '\\') {
                        if (pos_ >= src_.size()) throw ParseError("unterminated string", t.line, t.column);
                        d = advance();
                    }
                    t.text += d;
                }
            } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
                       ((c == '-' || c == '+') && pos_ + 1 < src_.size() &&
                        (std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) || src_[pos_ + 1] == '.' ||
                         src_.substr(pos_ + 1, 3) == "inf"))) {
                t.kind = Tok::number;
                t.number = lex_number(t);
            } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
                t.kind = Tok::punct;
                t.text = "->";
                advance();
                advance();
            } else if (c == '<' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
                t.kind = Tok::punct;
                t.text = "<=";
                advance();
                advance();
            } else if (std::string_view("{}()[],;:=").find(c) != std::string_view::npos) {
                t.kind = Tok::punct;
                t.text = std::string(1, advance());
            } else {
                throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
            }
            out.push_back(std::move(t));
        }
    }

private:
    char advance() {
        const char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    double lex_number(const Token& t) {
        bool negative = false;
        if (src_[pos_] == '-' || src_[pos_] == '+') negative = advance() == '-';
        if (src_.substr(pos_, 3) == "inf" && (pos_ + 3 >= src_.size() || !ident_char(src_[pos_ + 3]))) {
            for (int k = 0; k < 3; ++k) advance();
            return negative ? -kInfinity : kInfinity;
        }
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) advance();
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            advance();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        }
        const std::string_view digits = src_.substr(start, pos_ - start);
        double value = 0.0;
        auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc{} || end != digits.data() + digits.size())
            throw ParseError("malformed number '" + std::string(digits) + "'", t.line, t.column);
        return negative ? -value : value;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

// A label before the label structure is known.
struct RawLabel {
    std::string name;
    std::optional<Interval> interval;
    std::optional<std::vector<std::string>> members;
    std::size_t line = 0, column = 0;
};

struct RawEdge {
    RawLabel label;
    std::string target;
};

struct RawSystem {
    std::string name;
    Formalism formalism = Formalism::dmts;
    std::size_t line = 0, column = 0;
    std::vector<std::string> states;  // in order of first mention
    std::vector<std::string> initial;
    // (from, edges) statements; for may/trans/box one edge per entry
    std::vector<std::pair<std::string, RawEdge>> single;
    // (from, alternatives): must sets and diamond obligations
    std::vector<std::pair<std::string, std::vector<RawEdge>>> sets;
    // (from, acceptance sets)
    std::vector<std::pair<std::string, std::vector<std::vector<RawEdge>>>> tran;
};

struct RawDocument {
    bool has_structure = false;
    std::optional<LabelKind> kind;
    std::optional<std::vector<std::string>> alphabet;
    std::vector<std::pair<std::string, std::string>> order;
    std::optional<SyncOp> sync;
    std::size_t line = 1, column = 1;
    std::vector<RawSystem> systems;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    RawDocument document() {
        RawDocument doc;
        if (is_ident("structure")) structure(doc);
        while (peek().kind != Tok::end) {
            if (!is_ident("system")) fail("expected 'system'");
            doc.systems.push_back(system());
        }
        return doc;
    }

    RawLabel single_label() {
        RawLabel l = label();
        if (peek().kind != Tok::end) fail("unexpected text after label");
        return l;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    Token next() {
        Token t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool is_ident(std::string_view word) const { return peek().kind == Tok::ident && peek().text == word; }
    bool is_punct(std::string_view p) const { return peek().kind == Tok::punct && peek().text == p; }

    [[noreturn]] void fail(const std::string& message) const {
        const auto& t = peek();
        std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
        if (t.kind == Tok::number) found = "number";
        throw ParseError(message + ", found " + found, t.line, t.column);
    }

    void expect(std::string_view p) {
        if (!is_punct(p)) fail("expected '" + std::string(p) + "'");
        next();
    }

    std::string ident() {
        if (peek().kind != Tok::ident) fail("expected identifier");
        return next().text;
    }

    std::string name() {
        if (peek().kind == Tok::ident || peek().kind == Tok::string) return next().text;
        fail("expected state name");
    }

    double number() {
        if (peek().kind == Tok::number) return next().number;
        if (is_ident("inf")) {
            next();
            return kInfinity;
        }
        fail("expected number");
    }

    void structure(RawDocument& doc) {
        doc.has_structure = true;
        doc.line = peek().line;
        doc.column = peek().column;
        next();
        expect("{");
        while (!is_punct("}")) {
            const Token kw = peek();
            const std::string word = ident();
            if (word == "kind") {
                const Token t = peek();
                auto k = parse_label_kind(ident());
                if (!k) throw ParseError("unknown label kind '" + t.text + "'", t.line, t.column);
                doc.kind = k;
            } else if (word == "alphabet") {
                std::vector<std::string> syms;
                if (!is_punct(";")) {
                    syms.push_back(name());
                    while (is_punct(",")) {
                        next();
                        syms.push_back(name());
                    }
                }
                doc.alphabet = std::move(syms);
            } else if (word == "order") {
                for (;;) {
                    std::string a = name();
                    expect("<=");
                    std::string b = name();
                    doc.order.emplace_back(std::move(a), std::move(b));
                    if (!is_punct(",")) break;
                    next();
                }
            } else if (word == "sync") {
                const Token t = peek();
                auto s = parse_sync_op(ident());
                if (!s) throw ParseError("unknown synchronization '" + t.text + "'", t.line, t.column);
                doc.sync = s;
            } else {
                throw ParseError("unknown structure field '" + word + "'", kw.line, kw.column);
            }
            expect(";");
        }
        expect("}");
    }

    void mention(RawSystem& sys, const std::string& state) {
        if (std::find(sys.states.begin(), sys.states.end(), state) == sys.states.end()) sys.states.push_back(state);
    }

    RawSystem system() {
        RawSystem sys;
        next();
        sys.line = peek().line;
        sys.column = peek().column;
        sys.name = name();
        expect(":");
        const Token ft = peek();
        auto f = parse_formalism(ident());
        if (!f) throw ParseError("unknown formalism '" + ft.text + "'", ft.line, ft.column);
        sys.formalism = *f;
        expect("{");
        while (!is_punct("}")) statement(sys);
        expect("}");
        return sys;
    }

    std::vector<std::string> name_list() {
        std::vector<std::string> out{name()};
        while (is_punct(",")) {
            next();
            out.push_back(name());
        }
        return out;
    }

    void statement(RawSystem& sys) {
        const Token kw = peek();
        const std::string word = ident();
        auto wrong = [&] {
            throw ParseError("'" + word + "' is not allowed in a " + std::string(to_string(sys.formalism)) + " system",
                             kw.line, kw.column);
        };
        if (word == "state") {
            for (auto& s : name_list()) mention(sys, s);
        } else if (word == "init") {
            for (auto& s : name_list()) {
                mention(sys, s);
                sys.initial.push_back(s);
            }
        } else if (word == "trans" || word == "may") {
            if ((word == "trans") != (sys.formalism == Formalism::lts) ||
                (word == "may" && sys.formalism != Formalism::dmts))
                wrong();
            std::string from = name();
            expect("->");
            std::string to = name();
            expect(":");
            RawLabel l = label();
            mention(sys, from);
            mention(sys, to);
            sys.single.push_back({from, {std::move(l), to}});
        } else if (word == "box") {
            if (sys.formalism != Formalism::nu) wrong();
            std::string from = name();
            expect(":");
            RawLabel l = label();
            expect("->");
            std::string to = name();
            mention(sys, from);
            mention(sys, to);
            sys.single.push_back({from, {std::move(l), to}});
        } else if (word == "must") {
            if (sys.formalism != Formalism::dmts) wrong();
            std::string from = name();
            mention(sys, from);
            expect("->");
            sys.sets.push_back({from, edge_set(sys)});
        } else if (word == "diamond") {
            if (sys.formalism != Formalism::nu) wrong();
            std::string from = name();
            mention(sys, from);
            expect("=");
            expect("{");
            std::vector<std::vector<RawEdge>> obligations;
            if (!is_punct("}")) {
                obligations.push_back(edge_set(sys));
                while (is_punct(",")) {
                    next();
                    obligations.push_back(edge_set(sys));
                }
            }
            expect("}");
            for (auto& o : obligations) sys.sets.push_back({from, std::move(o)});
        } else if (word == "tran") {
            if (sys.formalism != Formalism::aa) wrong();
            std::string from = name();
            mention(sys, from);
            expect("=");
            expect("{");
            std::vector<std::vector<RawEdge>> choices;
            if (!is_punct("}")) {
                choices.push_back(edge_set(sys));
                while (is_punct(",")) {
                    next();
                    choices.push_back(edge_set(sys));
                }
            }
            expect("}");
            sys.tran.push_back({from, std::move(choices)});
        } else {
            throw ParseError("unknown statement '" + word + "'", kw.line, kw.column);
        }
        expect(";");
    }

    // { (LABEL, t), ... }
    std::vector<RawEdge> edge_set(RawSystem& sys) {
        std::vector<RawEdge> out;
        expect("{");
        if (!is_punct("}")) {
            for (;;) {
                expect("(");
                RawLabel l = label();
                expect(",");
                std::string t = name();
                expect(")");
                mention(sys, t);
                out.push_back({std::move(l), std::move(t)});
                if (!is_punct(",")) break;
                next();
            }
        }
        expect("}");
        return out;
    }

    RawLabel label() {
        RawLabel l;
        l.line = peek().line;
        l.column = peek().column;
        if (is_punct("{")) {
            next();
            std::vector<std::string> members;
            if (!is_punct("}")) {
                members.push_back(name());
                while (is_punct(",")) {
                    next();
                    members.push_back(name());
                }
            }
            expect("}");
            l.members = std::move(members);
            return l;
        }
        if (peek().kind != Tok::ident && peek().kind != Tok::string) fail("expected label");
        l.name = next().text;
        const bool opens = is_punct("[") || is_punct("(");
        const bool numeric = peek(1).kind == Tok::number || (peek(1).kind == Tok::ident && peek(1).text == "inf");
        if (opens && numeric) {
            const bool lo_open = next().text == "(";
            const double lo = number();
            expect(",");
            const double hi = number();
            if (!is_punct("]") && !is_punct(")")) fail("expected ']' or ')'");
            const bool hi_open = next().text == ")";
            l.interval = Interval::make(lo, hi, lo_open, hi_open);
        }
        return l;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::vector<const RawLabel*> all_labels(const RawDocument& doc) {
    std::vector<const RawLabel*> out;
    for (const auto& sys : doc.systems) {
        for (const auto& [from, e] : sys.single) out.push_back(&e.label);
        for (const auto& [from, set] : sys.sets)
            for (const auto& e : set) out.push_back(&e.label);
        for (const auto& [from, choices] : sys.tran)
            for (const auto& m : choices)
                for (const auto& e : m) out.push_back(&e.label);
    }
    return out;
}

Label convert(const RawLabel& raw, LabelKind kind) {
    auto bad = [&](const std::string& msg) { throw ParseError(msg, raw.line, raw.column); };
    switch (kind) {
    case LabelKind::discrete:
        if (raw.interval || raw.members) bad("discrete structure expects a bare label");
        return DiscreteLabel{raw.name};
    case LabelKind::weighted:
        if (raw.members) bad("weighted structure does not allow label sets");
        if (raw.interval && raw.interval->empty()) bad("empty interval");
        return WeightedLabel{raw.name, raw.interval.value_or(Interval::point(0.0))};
    case LabelKind::set:
        if (raw.interval) bad("set structure does not allow intervals");
        if (raw.members) {
            if (raw.members->empty()) bad("empty label set");
            return label_set(*raw.members);
        }
        return label_set({raw.name});
    }
    throw ParseError("unknown label kind", raw.line, raw.column);
}

LabelStructure make_structure(const RawDocument& doc) {
    const auto labels = all_labels(doc);
    LabelKind kind = LabelKind::discrete;
    if (doc.kind) {
        kind = *doc.kind;
    } else {
        for (const auto* l : labels) {
            if (l->interval) kind = LabelKind::weighted;
            if (l->members) kind = LabelKind::set;
        }
    }
    std::vector<std::string> alphabet;
    if (doc.alphabet) {
        alphabet = *doc.alphabet;
    } else {
        std::set<std::string> seen;
        for (const auto* l : labels) {
            if (l->members) seen.insert(l->members->begin(), l->members->end());
            else seen.insert(l->name);
        }
        for (const auto& [a, b] : doc.order) {
            seen.insert(a);
            seen.insert(b);
        }
        alphabet.assign(seen.begin(), seen.end());
    }
    SyncOp sync = doc.sync.value_or(kind == LabelKind::weighted ? SyncOp::plus : SyncOp::csp);
    try {
        return LabelStructure(kind, alphabet, doc.order, sync);
    } catch (const ValidationError& e) {
        throw ParseError(e.what(), doc.line, doc.column);
    }
}

System build(const RawSystem& raw, LabelKind kind) {
    std::map<std::string, StateId> id;
    for (std::size_t k = 0; k < raw.states.size(); ++k) id[raw.states[k]] = static_cast<StateId>(k);
    auto edges = [&](const std::vector<RawEdge>& in) {
        EdgeSet out;
        for (const auto& e : in) out.push_back({convert(e.label, kind), id.at(e.target)});
        return out;
    };
    std::vector<StateId> initial;
    for (const auto& s : raw.initial) initial.push_back(id.at(s));

    switch (raw.formalism) {
    case Formalism::lts: {
        Lts l;
        for (const auto& s : raw.states) l.add_state(s);
        if (initial.size() != 1)
            throw ParseError("an LTS needs exactly one initial state", raw.line, raw.column);
        l.initial = initial.front();
        for (const auto& [from, e] : raw.single) l.add_transition(id.at(from), convert(e.label, kind), id.at(e.target));
        l.normalize();
        return l;
    }
    case Formalism::dmts: {
        Dmts d;
        for (const auto& s : raw.states) d.add_state(s);
        d.initial = initial;
        for (const auto& [from, e] : raw.single) d.may[id.at(from)].push_back({convert(e.label, kind), id.at(e.target)});
        for (const auto& [from, set] : raw.sets) d.must[id.at(from)].push_back(edges(set));
        d.normalize();
        return d;
    }
    case Formalism::aa: {
        AcceptanceAutomaton a;
        for (const auto& s : raw.states) a.add_state(s);
        a.initial = initial;
        for (const auto& [from, choices] : raw.tran)
            for (const auto& m : choices) a.tran[id.at(from)].push_back(edges(m));
        a.normalize();
        return a;
    }
    case Formalism::nu: {
        NuExpr n;
        for (const auto& s : raw.states) n.add_state(s);
        n.initial = initial;
        for (const auto& [from, e] : raw.single) n.box[id.at(from)].push_back({convert(e.label, kind), id.at(e.target)});
        for (const auto& [from, set] : raw.sets) n.diamond[id.at(from)].push_back(edges(set));
        n.normalize();
        return n;
    }
    }
    throw ParseError("unknown formalism", raw.line, raw.column);
}


using nlohmann::json;

[[noreturn]] void json_fail(const std::string& where, const std::string& message) {
    throw ParseError(where + ": " + message, 1, 1);
}

const json& member(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) json_fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) json_fail(where, std::string("missing \"") + key + "\"");
    return *it;
}

std::string json_string(const json& v, const std::string& where) {
    if (!v.is_string()) json_fail(where, "expected a string");
    return v.get<std::string>();
}

std::vector<std::string> json_strings(const json& v, const std::string& where) {
    if (!v.is_array()) json_fail(where, "expected an array");
    std::vector<std::string> out;
    for (const auto& e : v) out.push_back(json_string(e, where));
    return out;
}

RawLabel json_label(const json& v, const std::string& where) {
    const std::string text = json_string(v, where);
    try {
        return Parser(Lexer(text).run()).single_label();
    } catch (const ParseError& e) {
        json_fail(where, "label \"" + text + "\": " + e.what());
    }
}

RawEdge json_edge(const json& v, RawSystem& sys, const std::string& where) {
    RawEdge e{json_label(member(v, "label", where), where + ".label"), json_string(member(v, "to", where), where + ".to")};
    if (std::find(sys.states.begin(), sys.states.end(), e.target) == sys.states.end()) sys.states.push_back(e.target);
    return e;
}

std::vector<RawEdge> json_edges(const json& v, RawSystem& sys, const std::string& where) {
    if (!v.is_array()) json_fail(where, "expected an array");
    std::vector<RawEdge> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(json_edge(v[k], sys, where + "[" + std::to_string(k) + "]"));
    return out;
}

void json_mention(RawSystem& sys, const std::string& s) {
    if (std::find(sys.states.begin(), sys.states.end(), s) == sys.states.end()) sys.states.push_back(s);
}

RawSystem json_system(const std::string& name, const json& v) {
    const std::string where = "systems." + name;
    RawSystem sys;
    sys.name = name;
    sys.line = sys.column = 1;
    auto f = parse_formalism(json_string(member(v, "type", where), where + ".type"));
    if (!f) json_fail(where + ".type", "unknown formalism");
    sys.formalism = *f;
    if (v.contains("states"))
        for (auto& s : json_strings(v["states"], where + ".states")) json_mention(sys, s);
    if (v.contains("initial")) {
        const json& init = v["initial"];
        std::vector<std::string> names =
            init.is_string() ? std::vector<std::string>{init.get<std::string>()} : json_strings(init, where + ".initial");
        for (auto& s : names) {
            json_mention(sys, s);
            sys.initial.push_back(s);
        }
    }
    auto each = [&](const char* key, auto&& fn) {
        if (!v.contains(key)) return;
        const json& arr = v[key];
        const std::string w = where + "." + key;
        if (!arr.is_array()) json_fail(w, "expected an array");
        for (std::size_t k = 0; k < arr.size(); ++k) fn(arr[k], w + "[" + std::to_string(k) + "]");
    };
    auto allow = [&](std::initializer_list<const char*> keys) {
        for (const auto& [key, value] : v.items()) {
            bool ok = key == "type" || key == "states" || key == "initial";
            for (const char* k : keys) ok = ok || key == k;
            if (!ok) json_fail(where, "unexpected key \"" + key + "\" for " + std::string(to_string(sys.formalism)));
        }
    };
    auto single = [&](const char* from_key, const json& e, const std::string& w) {
        std::string from = json_string(member(e, from_key, w), w + "." + from_key);
        json_mention(sys, from);
        RawEdge edge = json_edge(e, sys, w);
        sys.single.push_back({from, std::move(edge)});
    };
    switch (sys.formalism) {
    case Formalism::lts:
        allow({"transitions"});
        each("transitions", [&](const json& e, const std::string& w) { single("from", e, w); });
        break;
    case Formalism::dmts:
        allow({"may", "must"});
        each("may", [&](const json& e, const std::string& w) { single("from", e, w); });
        each("must", [&](const json& e, const std::string& w) {
            std::string from = json_string(member(e, "from", w), w + ".from");
            json_mention(sys, from);
            sys.sets.push_back({from, json_edges(member(e, "choices", w), sys, w + ".choices")});
        });
        break;
    case Formalism::aa:
        allow({"tran"});
        each("tran", [&](const json& e, const std::string& w) {
            std::string from = json_string(member(e, "state", w), w + ".state");
            json_mention(sys, from);
            const json& sets = member(e, "sets", w);
            if (!sets.is_array()) json_fail(w + ".sets", "expected an array");
            std::vector<std::vector<RawEdge>> choices;
            for (std::size_t k = 0; k < sets.size(); ++k)
                choices.push_back(json_edges(sets[k], sys, w + ".sets[" + std::to_string(k) + "]"));
            sys.tran.push_back({from, std::move(choices)});
        });
        break;
    case Formalism::nu:
        allow({"diamond", "box"});
        each("diamond", [&](const json& e, const std::string& w) {
            std::string from = json_string(member(e, "var", w), w + ".var");
            json_mention(sys, from);
            sys.sets.push_back({from, json_edges(member(e, "choices", w), sys, w + ".choices")});
        });
        each("box", [&](const json& e, const std::string& w) { single("var", e, w); });
        break;
    }
    return sys;
}

} // namespace

void validate_document(const SpecDocument& doc) {
    for (const auto& [name, sys] : doc.systems) {
        auto violations = validate(sys, doc.labels);
        if (!violations.empty())
            throw ValidationError("system " + name + ": " + violations.front().location + ": " +
                                  violations.front().rule);
    }
}

SpecDocument parse_spec(std::string_view text) {
    Parser parser(Lexer(text).run());
    RawDocument raw = parser.document();
    SpecDocument doc;
    doc.labels = make_structure(raw);
    for (const auto& sys : raw.systems) {
        if (doc.systems.count(sys.name))
            throw ParseError("duplicate system '" + sys.name + "'", sys.line, sys.column);
        doc.systems.emplace(sys.name, build(sys, doc.labels.kind()));
    }
    validate_document(doc);
    return doc;
}

SpecDocument parse_spec_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError("invalid JSON", line, column);
    }
    if (!j.is_object()) json_fail("document", "expected an object");
    RawDocument raw;
    for (const auto& [key, value] : j.items())
        if (key != "structure" && key != "systems") json_fail("document", "unexpected key \"" + key + "\"");
    if (j.contains("structure")) {
        const json& st = j["structure"];
        raw.has_structure = true;
        if (!st.is_object()) json_fail("structure", "expected an object");
        for (const auto& [key, value] : st.items()) {
            if (key == "kind") {
                auto k = parse_label_kind(json_string(value, "structure.kind"));
                if (!k) json_fail("structure.kind", "unknown label kind");
                raw.kind = k;
            } else if (key == "alphabet") {
                raw.alphabet = json_strings(value, "structure.alphabet");
            } else if (key == "order") {
                if (!value.is_array()) json_fail("structure.order", "expected an array");
                for (const auto& pair : value) {
                    auto ab = json_strings(pair, "structure.order");
                    if (ab.size() != 2) json_fail("structure.order", "expected [lower, upper] pairs");
                    raw.order.emplace_back(ab[0], ab[1]);
                }
            } else if (key == "sync") {
                auto s = parse_sync_op(json_string(value, "structure.sync"));
                if (!s) json_fail("structure.sync", "unknown synchronization");
                raw.sync = s;
            } else {
                json_fail("structure", "unexpected key \"" + key + "\"");
            }
        }
    }
    if (j.contains("systems")) {
        const json& systems = j["systems"];
        if (!systems.is_object()) json_fail("systems", "expected an object");
        for (const auto& [name, value] : systems.items()) raw.systems.push_back(json_system(name, value));
    }
    SpecDocument doc;
    doc.labels = make_structure(raw);
    for (const auto& sys : raw.systems) doc.systems.emplace(sys.name, build(sys, doc.labels.kind()));
    validate_document(doc);
    return doc;
}

Label parse_label(std::string_view text, const LabelStructure& ls) {
    Parser parser(Lexer(text).run());
    RawLabel raw = parser.single_label();
    Label l = convert(raw, ls.kind());
    ls.check_label(l);
    return l;
}

SpecDocument load_document(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return parse_spec_json(text);
    return parse_spec(text);
}

} // namespace qspec
