#include "taskfsa/io/documents.hpp"

#include "taskfsa/stepparse/parse.hpp"

#include <fstream>
#include <sstream>

namespace taskfsa {

namespace {

std::string ptr(const std::string& base, std::string_view key) {
    std::string k(key);
    std::string escaped;
    for (char c : k) {
        if (c == '~') escaped += "~0";
        else if (c == '/') escaped += "~1";
        else escaped += c;
    }
    return base + "/" + escaped;
}

std::string ptr(const std::string& base, std::size_t index) { return base + "/" + std::to_string(index); }

const json& member(const json& j, std::string_view key, const std::string& path) {
    if (!j.is_object()) throw schema_error(path, "expected an object");
    const auto it = j.find(std::string(key));
    if (it == j.end()) throw schema_error(ptr(path, key), "missing field");
    return *it;
}

std::string get_string(const json& j, std::string_view key, const std::string& path) {
    const auto& v = member(j, key, path);
    if (!v.is_string()) throw schema_error(ptr(path, key), "expected a string");
    return v.get<std::string>();
}

bool get_bool(const json& j, std::string_view key, const std::string& path) {
    const auto& v = member(j, key, path);
    if (!v.is_boolean()) throw schema_error(ptr(path, key), "expected a boolean");
    return v.get<bool>();
}

std::size_t get_count(const json& j, std::string_view key, const std::string& path) {
    const auto& v = member(j, key, path);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw schema_error(ptr(path, key), "expected a non-negative integer");
    return v.get<std::size_t>();
}

const json& get_array(const json& j, std::string_view key, const std::string& path) {
    const auto& v = member(j, key, path);
    if (!v.is_array()) throw schema_error(ptr(path, key), "expected an array");
    return v;
}

std::vector<std::string> string_list(const json& j, std::string_view key, const std::string& path) {
    const auto& arr = get_array(j, key, path);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string()) throw schema_error(ptr(ptr(path, key), i), "expected a string");
        out.push_back(arr[i].get<std::string>());
    }
    return out;
}

std::set<std::string> string_set(const json& j, std::string_view key, const std::string& path) {
    const auto list = string_list(j, key, path);
    return {list.begin(), list.end()};
}

json list_json(const auto& items) {
    json arr = json::array();
    for (const auto& s : items) arr.push_back(s);
    return arr;
}

formula formula_field(const json& j, std::string_view key, const std::string& path) {
    const auto text = get_string(j, key, path);
    try {
        return parse_formula(text);
    } catch (const syntax_error& e) {
        throw schema_error(ptr(path, key), e.what());
    }
}

void check_report(const validation_report& r, const std::string& path) {
    if (r.empty()) return;
    std::string msg = "invalid: " + r.front().code + ": " + r.front().message;
    throw schema_error(path, msg);
}

json envelope(std::string_view kind) {
    json j;
    j["kind"] = kind;
    j["version"] = document_version;
    return j;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw schema_error("", std::string("not valid JSON: ") + e.what());
    }
}

// Parses text and checks kind and version; returns the whole object.
json open_document(std::string_view text, std::string_view kind) {
    auto j = parse_json(text);
    const auto k = get_string(j, "kind", "");
    if (k != kind) throw schema_error("/kind", "expected \"" + std::string(kind) + "\", found \"" + k + "\"");
    const auto& v = member(j, "version", "");
    if (!v.is_number_integer() || v.get<long long>() != document_version)
        throw schema_error("/version", "unsupported version " + v.dump());
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json step_json(const trace_step& s) {
    json o;
    o["model"] = s.model_state;
    o["controller"] = s.controller_state;
    o["action"] = list_json(s.action);
    o["label"] = list_json(s.label);
    return o;
}

trace_step step_from_json(const json& j, const std::string& path) {
    return {get_string(j, "model", path), get_string(j, "controller", path), string_set(j, "action", path),
            string_set(j, "label", path)};
}

} // namespace

json to_json(const controller& c) {
    json j;
    j["props"] = list_json(c.props);
    j["actions"] = list_json(c.actions);
    json states = json::array();
    for (const auto& s : c.states) {
        json o;
        o["id"] = s.id;
        o["step"] = s.step ? json(*s.step) : json(nullptr);
        states.push_back(std::move(o));
    }
    j["states"] = std::move(states);
    j["initial"] = c.initial;
    j["absorbing"] = c.absorbing;
    json edges = json::array();
    for (const auto& t : c.transitions) {
        json o;
        o["from"] = t.from;
        o["cond"] = to_text(t.cond);
        o["out"] = list_json(t.out);
        o["to"] = t.to;
        edges.push_back(std::move(o));
    }
    j["transitions"] = std::move(edges);
    return j;
}

controller controller_from_json(const json& j, const std::string& path) {
    controller c;
    c.props = string_set(j, "props", path);
    c.actions = string_set(j, "actions", path);
    const auto& states = get_array(j, "states", path);
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto p = ptr(ptr(path, "states"), i);
        controller_state s{get_string(states[i], "id", p), std::nullopt};
        const auto& step = member(states[i], "step", p);
        if (step.is_string()) {
            s.step = step.get<std::string>();
        } else if (!step.is_null()) {
            throw schema_error(ptr(p, "step"), "expected a string or null");
        }
        c.states.push_back(std::move(s));
    }
    c.initial = get_string(j, "initial", path);
    c.absorbing = get_string(j, "absorbing", path);
    const auto& edges = get_array(j, "transitions", path);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto p = ptr(ptr(path, "transitions"), i);
        c.transitions.push_back({get_string(edges[i], "from", p), formula_field(edges[i], "cond", p),
                                 string_set(edges[i], "out", p), get_string(edges[i], "to", p)});
    }
    check_report(validate_controller(c), path);
    return c;
}

json to_json(const model& m) {
    json j;
    j["action_props"] = list_json(m.action_props);
    j["label_props"] = list_json(m.label_props);
    json states = json::array();
    for (const auto& s : m.states) {
        json o;
        o["id"] = s;
        const auto it = m.labels.find(s);
        o["labels"] = it == m.labels.end() ? json::array() : list_json(it->second);
        states.push_back(std::move(o));
    }
    j["states"] = std::move(states);
    j["initial"] = m.initial;
    json edges = json::array();
    for (const auto& t : m.transitions) {
        json o;
        o["from"] = t.from;
        o["guard"] = to_text(t.guard);
        o["to"] = t.to;
        edges.push_back(std::move(o));
    }
    j["transitions"] = std::move(edges);
    return j;
}

model model_from_json(const json& j, const std::string& path) {
    model m;
    m.action_props = string_set(j, "action_props", path);
    m.label_props = string_set(j, "label_props", path);
    const auto& states = get_array(j, "states", path);
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto p = ptr(ptr(path, "states"), i);
        const auto id = get_string(states[i], "id", p);
        m.states.push_back(id);
        m.labels[id] = string_set(states[i], "labels", p);
    }
    m.initial = get_string(j, "initial", path);
    const auto& edges = get_array(j, "transitions", path);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto p = ptr(ptr(path, "transitions"), i);
        m.transitions.push_back(
            {get_string(edges[i], "from", p), formula_field(edges[i], "guard", p), get_string(edges[i], "to", p)});
    }
    check_report(validate_model(m), path);
    return m;
}

json to_json(const step_tree& t) {
    json j;
    j["task"] = t.task();
    json steps = json::array();
    for (const auto& n : t.nodes()) {
        json o;
        o["number"] = n.number;
        o["text"] = n.text;
        steps.push_back(std::move(o));
    }
    j["steps"] = std::move(steps);
    json ex = json::array();
    for (const auto& [parent, text] : t.exchanges()) {
        json o;
        o["parent"] = parent;
        o["text"] = text;
        ex.push_back(std::move(o));
    }
    j["exchanges"] = std::move(ex);
    return j;
}

step_tree step_tree_from_json(const json& j, const std::string& path) {
    step_tree t(get_string(j, "task", path));
    std::map<std::string, std::vector<std::pair<std::string, std::string>>, dotted_order> groups;
    const auto& steps = get_array(j, "steps", path);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto p = ptr(ptr(path, "steps"), i);
        const auto number = get_string(steps[i], "number", p);
        if (!valid_step_number(number)) throw schema_error(ptr(p, "number"), "malformed step number");
        groups[parent_number(number)].emplace_back(number, get_string(steps[i], "text", p));
    }
    std::map<std::string, std::string> exchanges;
    const auto& ex = get_array(j, "exchanges", path);
    for (std::size_t i = 0; i < ex.size(); ++i) {
        const auto p = ptr(ptr(path, "exchanges"), i);
        exchanges[get_string(ex[i], "parent", p)] = get_string(ex[i], "text", p);
    }
    for (auto& [parent, kids] : groups) {
        std::sort(kids.begin(), kids.end(), [](const auto& a, const auto& b) { return dotted_less(a.first, b.first); });
        std::vector<std::string> texts;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (kids[i].first != child_number(parent, i + 1))
                throw schema_error(ptr(path, "steps"), "step numbers under \"" + parent + "\" are not consecutive");
            texts.push_back(kids[i].second);
        }
        if (!parent.empty() && !t.contains(parent))
            throw schema_error(ptr(path, "steps"), "step " + kids.front().first + " has no parent");
        const auto it = exchanges.find(parent);
        t.set_children(parent, texts, it == exchanges.end() ? std::string() : it->second);
    }
    return t;
}

json to_json(const counterexample& cex) {
    json j;
    j["projection"] = cex.projection_text();
    json stem = json::array();
    for (const auto& s : cex.stem) stem.push_back(step_json(s));
    j["stem"] = std::move(stem);
    json loop = json::array();
    for (const auto& s : cex.loop) loop.push_back(step_json(s));
    j["loop"] = std::move(loop);
    return j;
}

counterexample counterexample_from_json(const json& j, const std::string& path) {
    counterexample cex;
    const auto& stem = get_array(j, "stem", path);
    for (std::size_t i = 0; i < stem.size(); ++i) cex.stem.push_back(step_from_json(stem[i], ptr(ptr(path, "stem"), i)));
    const auto& loop = get_array(j, "loop", path);
    if (loop.empty()) throw schema_error(ptr(path, "loop"), "loop must not be empty");
    for (std::size_t i = 0; i < loop.size(); ++i) cex.loop.push_back(step_from_json(loop[i], ptr(ptr(path, "loop"), i)));
    return cex;
}

json to_json(const verdict& v) {
    json j;
    j["pass"] = v.pass;
    j["counterexample"] = v.cex ? to_json(*v.cex) : json(nullptr);
    return j;
}

verdict verdict_from_json(const json& j, const std::string& path) {
    verdict v;
    v.pass = get_bool(j, "pass", path);
    const auto& c = member(j, "counterexample", path);
    if (!c.is_null()) v.cex = counterexample_from_json(c, ptr(path, "counterexample"));
    if (!v.pass && !v.cex) throw schema_error(ptr(path, "counterexample"), "a failing verdict needs a counterexample");
    return v;
}

json to_json(const iteration& it) {
    json j;
    j["kind"] = iteration_kind_name(it.kind);
    j["instruction"] = it.instruction;
    j["prompts"] = list_json(it.prompts);
    j["tree"] = to_json(it.tree);
    j["frontier"] = list_json(it.frontier);
    j["bypassed"] = list_json(it.bypassed);
    j["controller"] = to_json(it.ctrl);
    json vs = json::array();
    for (const auto& v : it.verdicts) vs.push_back(to_json(v));
    j["verdicts"] = std::move(vs);
    return j;
}

namespace {

iteration iteration_from_json(const json& j, const std::string& path) {
    iteration it;
    try {
        it.kind = iteration_kind_from_name(get_string(j, "kind", path));
    } catch (const precondition_error& e) {
        throw schema_error(ptr(path, "kind"), e.what());
    }
    it.instruction = get_string(j, "instruction", path);
    it.prompts = string_list(j, "prompts", path);
    it.tree = step_tree_from_json(member(j, "tree", path), ptr(path, "tree"));
    it.frontier = string_list(j, "frontier", path);
    it.bypassed = string_list(j, "bypassed", path);
    it.ctrl = controller_from_json(member(j, "controller", path), ptr(path, "controller"));
    const auto& vs = get_array(j, "verdicts", path);
    for (std::size_t i = 0; i < vs.size(); ++i)
        it.verdicts.push_back(verdict_from_json(vs[i], ptr(ptr(path, "verdicts"), i)));
    return it;
}

} // namespace

json to_json(const refinement_session& s) {
    json j;
    j["task"] = s.task;
    j["status"] = status_name(s.status);
    j["max_depth"] = s.max_depth;
    json params;
    params["max_tokens"] = s.params.max_tokens;
    params["temperature"] = s.params.temperature;
    json bias;
    for (const auto& [k, v] : s.params.keyword_bias) bias[k] = v;
    params["keyword_bias"] = bias.is_null() ? json::object() : bias;
    j["params"] = std::move(params);
    j["model"] = to_json(s.mdl);
    j["specs"] = list_json(s.specs);
    json syn = json::object();
    for (const auto& [k, v] : s.synonyms.entries()) syn[k] = v;
    j["synonyms"] = std::move(syn);
    json hist = json::array();
    for (const auto& it : s.history) hist.push_back(to_json(it));
    j["history"] = std::move(hist);
    return j;
}

refinement_session session_from_json(const json& j, const std::string& path) {
    refinement_session s;
    s.task = get_string(j, "task", path);
    try {
        s.status = status_from_name(get_string(j, "status", path));
    } catch (const precondition_error& e) {
        throw schema_error(ptr(path, "status"), e.what());
    }
    s.max_depth = get_count(j, "max_depth", path);
    const auto pp = ptr(path, "params");
    const auto& params = member(j, "params", path);
    const auto& mt = member(params, "max_tokens", pp);
    if (!mt.is_number_integer()) throw schema_error(ptr(pp, "max_tokens"), "expected an integer");
    s.params.max_tokens = mt.get<int>();
    const auto& temp = member(params, "temperature", pp);
    if (!temp.is_number()) throw schema_error(ptr(pp, "temperature"), "expected a number");
    s.params.temperature = temp.get<double>();
    const auto& bias = member(params, "keyword_bias", pp);
    if (!bias.is_object()) throw schema_error(ptr(pp, "keyword_bias"), "expected an object");
    s.params.keyword_bias.clear();
    for (const auto& [k, v] : bias.items()) {
        if (!v.is_number()) throw schema_error(ptr(ptr(pp, "keyword_bias"), k), "expected a number");
        s.params.keyword_bias[k] = v.get<double>();
    }
    s.mdl = model_from_json(member(j, "model", path), ptr(path, "model"));
    s.specs = string_list(j, "specs", path);
    for (std::size_t i = 0; i < s.specs.size(); ++i) {
        try {
            (void)parse_ltl(s.specs[i]);
        } catch (const error& e) {
            throw schema_error(ptr(ptr(path, "specs"), i), e.what());
        }
    }
    const auto& syn = member(j, "synonyms", path);
    if (!syn.is_object()) throw schema_error(ptr(path, "synonyms"), "expected an object");
    for (const auto& [k, v] : syn.items()) {
        if (!v.is_string()) throw schema_error(ptr(ptr(path, "synonyms"), k), "expected a string");
        try {
            s.synonyms.add(k, v.get<std::string>());
        } catch (const precondition_error& e) {
            throw schema_error(ptr(ptr(path, "synonyms"), k), e.what());
        }
    }
    const auto& hist = get_array(j, "history", path);
    for (std::size_t i = 0; i < hist.size(); ++i) {
        auto it = iteration_from_json(hist[i], ptr(ptr(path, "history"), i));
        if (it.verdicts.size() != s.specs.size())
            throw schema_error(ptr(ptr(ptr(path, "history"), i), "verdicts"), "one verdict per spec expected");
        s.history.push_back(std::move(it));
    }
    return s;
}

std::string document_kind(std::string_view text) {
    const auto j = parse_json(text);
    return get_string(j, "kind", "");
}

std::string serialize(const controller& c) {
    auto j = envelope("controller");
    j["controller"] = to_json(c);
    return dump(j);
}

std::string serialize(const model& m) {
    auto j = envelope("model");
    j["model"] = to_json(m);
    return dump(j);
}

std::string serialize(const spec_document& s) {
    auto j = envelope("spec");
    j["name"] = s.name;
    j["ltl"] = s.ltl;
    return dump(j);
}

std::string serialize(const step_tree& t) {
    auto j = envelope("steps");
    j["tree"] = to_json(t);
    return dump(j);
}

std::string serialize(const verdict_document& v) {
    auto j = envelope("verdict");
    j["spec"] = v.spec;
    j["verdict"] = to_json(v.result);
    return dump(j);
}

std::string serialize(const refinement_session& s) {
    auto j = envelope("session");
    j["session"] = to_json(s);
    return dump(j);
}

std::string serialize(const transcript& t) { return t.to_json_text(); }

controller parse_controller_document(std::string_view text) {
    const auto j = open_document(text, "controller");
    return controller_from_json(member(j, "controller", ""), "/controller");
}

model parse_model_document(std::string_view text) {
    const auto j = open_document(text, "model");
    return model_from_json(member(j, "model", ""), "/model");
}

spec_document parse_spec_document(std::string_view text) {
    const auto j = open_document(text, "spec");
    spec_document s{get_string(j, "name", ""), get_string(j, "ltl", "")};
    try {
        (void)parse_ltl(s.ltl);
    } catch (const error& e) {
        throw schema_error("/ltl", e.what());
    }
    return s;
}

step_tree parse_steps_document(std::string_view text) {
    const auto j = open_document(text, "steps");
    return step_tree_from_json(member(j, "tree", ""), "/tree");
}

verdict_document parse_verdict_document(std::string_view text) {
    const auto j = open_document(text, "verdict");
    return {get_string(j, "spec", ""), verdict_from_json(member(j, "verdict", ""), "/verdict")};
}

refinement_session parse_session_document(std::string_view text) {
    const auto j = open_document(text, "session");
    return session_from_json(member(j, "session", ""), "/session");
}

transcript parse_transcript_document(std::string_view text) {
    (void)open_document(text, "transcript");
    try {
        return transcript::from_json_text(text);
    } catch (const precondition_error& e) {
        throw schema_error("/entries", e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw precondition_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw precondition_error("cannot write " + path);
    out << text;
    if (!out) throw precondition_error("write failed for " + path);
}

} // namespace taskfsa
