#include "effsum/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace effsum {

namespace {

Coord as_coord(const Json& j, const std::string& what)
{
    if (!j.is_number_integer()) {
        throw ParseError(what + " must be an integer, got " + j.dump());
    }
    return j.get<Coord>();
}

const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

std::size_t as_index(const Json& j, const std::string& what)
{
    const Coord v = as_coord(j, what);
    if (v < 0) {
        throw ValidationError(what + " must be nonnegative");
    }
    return static_cast<std::size_t>(v);
}

} // namespace

GroupElement decode_element(const Json& j, const GroupContext& g)
{
    GroupElement::Storage values;
    switch (g.kind()) {
    case CarrierKind::IntVec:
    case CarrierKind::Perm:
    case CarrierKind::FinSet: {
        if (!j.is_array()) {
            throw ParseError(to_string(g.kind()) + " element must be an array, got " + j.dump());
        }
        for (const auto& v : j) {
            values.push_back(as_coord(v, "element component"));
        }
        break;
    }
    case CarrierKind::CycInt:
    case CarrierKind::TableIdx: values.push_back(as_coord(j, to_string(g.kind()) + " element")); break;
    }
    GroupElement e(std::move(values));
    switch (g.kind()) {
    case CarrierKind::IntVec:
        if (e.size() != g.parameter()) {
            throw ValidationError("vector " + j.dump() + " has dimension " + std::to_string(e.size()) +
                                  ", expected " + std::to_string(g.parameter()));
        }
        break;
    case CarrierKind::Perm:
        if (!g.is_member(e)) {
            throw ValidationError("image array " + j.dump() + " is not a bijection of {1.." +
                                  std::to_string(g.parameter()) + "}");
        }
        break;
    case CarrierKind::CycInt:
        if (!g.is_member(e)) {
            throw ValidationError("residue " + j.dump() + " outside [0, " + std::to_string(g.parameter()) + ")");
        }
        break;
    case CarrierKind::FinSet:
        if (!g.is_member(e)) {
            throw ValidationError("finite set " + j.dump() + " must be strictly increasing and nonnegative");
        }
        break;
    case CarrierKind::TableIdx:
        if (!g.is_member(e)) {
            throw ValidationError("table index " + j.dump() + " outside the table");
        }
        break;
    }
    return e;
}

Json encode_element(const GroupElement& e, const GroupContext& g)
{
    if (g.kind() == CarrierKind::CycInt || g.kind() == CarrierKind::TableIdx) {
        return e[0];
    }
    Json out = Json::array();
    for (Coord v : e.values()) {
        out.push_back(v);
    }
    return out;
}

Json encode_set(const FiniteSet& s, const GroupContext& g)
{
    Json out = Json::array();
    for (const auto& e : s) {
        out.push_back(encode_element(e, g));
    }
    return out;
}

namespace {

FiniteSet decode_set(const Json& j, const GroupContext& g, const std::string& what,
                     std::vector<std::string>* warnings)
{
    if (!j.is_array()) {
        throw ParseError(what + " must be an array of elements");
    }
    std::vector<GroupElement> raw;
    for (const auto& e : j) {
        raw.push_back(decode_element(e, g));
    }
    const std::size_t dups = count_duplicates(raw);
    if (dups > 0 && warnings) {
        warnings->push_back(what + ": dropped " + std::to_string(dups) + " duplicate element" + (dups > 1 ? "s" : ""));
    }
    return FiniteSet(std::move(raw));
}

std::string rel_token(Rel r)
{
    switch (r) {
    case Rel::Equal: return "=";
    case Rel::Strict: return "P";
    case Rel::Weak: return "R";
    }
    return "?";
}

Rel rel_from_token(const std::string& s)
{
    if (s == "=") {
        return Rel::Equal;
    }
    if (s == "P") {
        return Rel::Strict;
    }
    if (s == "R") {
        return Rel::Weak;
    }
    throw ParseError("row relation must be \"=\" or \"P\", got \"" + s + "\"");
}

} // namespace

Json encode_group(const GroupContext& g)
{
    Json out;
    out["kind"] = to_string(g.kind());
    switch (g.kind()) {
    case CarrierKind::IntVec: out["dimension"] = g.parameter(); break;
    case CarrierKind::Perm: out["n"] = g.parameter(); break;
    case CarrierKind::CycInt: out["modulus"] = g.parameter(); break;
    case CarrierKind::FinSet: break;
    case CarrierKind::TableIdx:
        out["table"] = g.table()->product;
        out["identity"] = g.table()->identity;
        break;
    }
    return out;
}

GroupContext decode_group(const Json& j)
{
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "intvec") {
        const std::size_t q = as_index(field(j, "dimension"), "dimension");
        if (q == 0) {
            throw ValidationError("dimension must be positive");
        }
        return GroupContext::int_vec(q);
    }
    if (kind == "perm") {
        const std::size_t n = as_index(field(j, "n"), "n");
        if (n == 0) {
            throw ValidationError("permutation degree must be positive");
        }
        return GroupContext::permutations(n);
    }
    if (kind == "cyclic") {
        const Coord n = as_coord(field(j, "modulus"), "modulus");
        if (n < 1) {
            throw ValidationError("modulus must be positive");
        }
        return GroupContext::cyclic(n);
    }
    if (kind == "finset") {
        return GroupContext::finite_sets();
    }
    if (kind == "table") {
        const Json& t = field(j, "table");
        if (!t.is_array()) {
            throw ParseError("table must be an array of rows");
        }
        std::vector<std::vector<std::size_t>> rows;
        for (const auto& row : t) {
            if (!row.is_array()) {
                throw ParseError("table rows must be arrays");
            }
            std::vector<std::size_t> r;
            for (const auto& v : row) {
                r.push_back(as_index(v, "table entry"));
            }
            rows.push_back(std::move(r));
        }
        const std::size_t id = j.contains("identity") ? as_index(j.at("identity"), "identity") : 0;
        return GroupContext::cayley(std::move(rows), id);
    }
    throw ParseError("unknown group kind '" + kind + "'");
}

Json encode_relation(const RelationOracle& rel, const GroupContext& g)
{
    Json out;
    out["kind"] = to_string(rel.kind());
    if (rel.kind() == RelationKind::ExplicitMatrix) {
        out["carrier"] = encode_set(rel.carrier(), g);
        Json m = Json::array();
        for (const auto& row : rel.matrix()) {
            Json r = Json::array();
            for (bool v : row) {
                r.push_back(v ? 1 : 0);
            }
            m.push_back(std::move(r));
        }
        out["matrix"] = std::move(m);
    }
    return out;
}

RelationOracle decode_relation(const Json& j, const GroupContext& g)
{
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "product_order") {
        if (g.kind() != CarrierKind::IntVec) {
            throw ValidationError("product_order needs an intvec group");
        }
        return RelationOracle::product_order();
    }
    if (kind == "fixed_points") {
        if (g.kind() != CarrierKind::Perm) {
            throw ValidationError("fixed_points needs a perm group");
        }
        return RelationOracle::fixed_points();
    }
    if (kind == "equality") {
        return RelationOracle::equality();
    }
    if (kind == "superset") {
        if (g.kind() != CarrierKind::FinSet) {
            throw ValidationError("superset needs a finset group");
        }
        return RelationOracle::superset();
    }
    if (kind == "explicit_matrix") {
        const Json& carrier = field(j, "carrier");
        const Json& matrix = field(j, "matrix");
        if (!carrier.is_array() || !matrix.is_array()) {
            throw ParseError("explicit_matrix needs carrier and matrix arrays");
        }
        std::vector<GroupElement> elems;
        for (const auto& e : carrier) {
            elems.push_back(decode_element(e, g));
        }
        const std::size_t n = elems.size();
        if (matrix.size() != n) {
            throw ValidationError("explicit_matrix must be |carrier| x |carrier|");
        }
        std::vector<std::vector<bool>> cells(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!matrix[i].is_array() || matrix[i].size() != n) {
                throw ValidationError("explicit_matrix must be |carrier| x |carrier|");
            }
            for (const auto& v : matrix[i]) {
                if (v.is_boolean()) {
                    cells[i].push_back(v.get<bool>());
                } else {
                    const Coord c = as_coord(v, "matrix entry");
                    if (c != 0 && c != 1) {
                        throw ValidationError("matrix entries are 0/1 or booleans");
                    }
                    cells[i].push_back(c == 1);
                }
            }
        }
        // The file lists rows in carrier order; the oracle wants canonical order.
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return elems[x] < elems[y]; });
        std::vector<std::vector<bool>> canonical(n, std::vector<bool>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                canonical[i][k] = cells[order[i]][order[k]];
            }
        }
        return RelationOracle::explicit_matrix(std::move(elems), std::move(canonical));
    }
    throw ParseError("unknown relation kind '" + kind + "'");
}

Json encode_system(const SystemInstance& sys, const GroupContext& g)
{
    Json out;
    out["kind"] = to_string(sys.kind);
    Json pts = Json::array();
    for (const auto& p : sys.points) {
        pts.push_back(encode_element(p, g));
    }
    out["points"] = std::move(pts);
    Json bs = Json::array();
    for (const auto& b : sys.bs) {
        bs.push_back(encode_element(b, g));
    }
    out["bs"] = std::move(bs);
    if (sys.kind == SystemKind::S1 || sys.kind == SystemKind::S2) {
        out["k"] = sys.k;
    }
    Json rows = Json::array();
    for (const auto& r : sys.rows) {
        rows.push_back(Json::array({r.left, rel_token(r.relation), r.right, r.b}));
    }
    out["rows"] = std::move(rows);
    return out;
}

SystemInstance decode_system(const Json& j, const GroupContext& g)
{
    SystemInstance sys;
    sys.kind = system_kind_from_string(field(j, "kind").get<std::string>());
    for (const auto& p : field(j, "points")) {
        sys.points.push_back(decode_element(p, g));
    }
    for (const auto& b : field(j, "bs")) {
        sys.bs.push_back(decode_element(b, g));
    }
    if (j.contains("k")) {
        sys.k = as_index(j.at("k"), "k");
    }
    for (const auto& r : field(j, "rows")) {
        if (!r.is_array() || r.size() != 4) {
            throw ParseError("system rows read [left, \"=\"|\"P\", right, b]");
        }
        sys.rows.push_back({rel_from_token(r[1].get<std::string>()), as_index(r[0], "row left"),
                            as_index(r[2], "row right"), as_index(r[3], "row b")});
    }
    validate_system(sys);
    return sys;
}

Instance parse_instance_text(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    try {
        if (!j.is_object()) {
            throw ParseError("instance must be a JSON object");
        }
        if (j.contains("format") && j.at("format") != instance_format) {
            throw ParseError("unsupported instance format " + j.at("format").dump());
        }
        Instance inst;
        inst.name = j.value("name", "");
        inst.group = decode_group(field(j, "group"));
        inst.relation = decode_relation(field(j, "relation"), inst.group);
        if (j.contains("system")) {
            inst.system = decode_system(j.at("system"), inst.group);
        }
        if (j.contains("A")) {
            inst.a = decode_set(j.at("A"), inst.group, "A", &inst.warnings);
        }
        if (j.contains("B")) {
            inst.b = decode_set(j.at("B"), inst.group, "B", &inst.warnings);
        }
        if (j.contains("B_list")) {
            std::vector<FiniteSet> list;
            std::size_t i = 0;
            for (const auto& bi : j.at("B_list")) {
                list.push_back(decode_set(bi, inst.group, "B_list[" + std::to_string(i++) + "]", &inst.warnings));
                if (list.back().empty()) {
                    throw ValidationError("B_list summands must be nonempty");
                }
            }
            inst.b_list = std::move(list);
            if (inst.b.empty()) {
                inst.b = effective_summand(inst.b, inst.b_list, inst.group);
            }
        }
        if (!inst.system && (inst.a.empty() || inst.b.empty())) {
            throw ValidationError("A and B must be nonempty");
        }
        if (j.contains("audit")) {
            const Json& a = j.at("audit");
            if (a.contains("depth")) {
                inst.audit.depth = static_cast<int>(as_coord(a.at("depth"), "audit.depth"));
            }
            if (a.contains("cap")) {
                inst.audit.cap = as_index(a.at("cap"), "audit.cap");
            }
            if (a.contains("max_multiplicity")) {
                inst.audit.max_multiplicity = as_index(a.at("max_multiplicity"), "audit.max_multiplicity");
            }
            if (a.contains("combination_bound")) {
                inst.audit.combination_bound = as_index(a.at("combination_bound"), "audit.combination_bound");
            }
            if (a.contains("budget")) {
                inst.audit.budget = as_index(a.at("budget"), "audit.budget");
            }
        }
        if (j.contains("generator")) {
            inst.generator = j.at("generator");
        }
        return inst;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad instance field: ") + e.what());
    }
}

Instance parse_instance(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    Instance inst = parse_instance_text(buf.str());
    if (inst.name.empty()) {
        inst.name = path.parent_path().filename().string();
    }
    return inst;
}

Json instance_to_json(const Instance& inst)
{
    Json j;
    j["format"] = instance_format;
    if (!inst.name.empty()) {
        j["name"] = inst.name;
    }
    j["group"] = encode_group(inst.group);
    j["relation"] = encode_relation(inst.relation, inst.group);
    if (!inst.a.empty()) {
        j["A"] = encode_set(inst.a, inst.group);
    }
    if (!inst.b.empty()) {
        j["B"] = encode_set(inst.b, inst.group);
    }
    if (inst.b_list) {
        Json list = Json::array();
        for (const auto& bi : *inst.b_list) {
            list.push_back(encode_set(bi, inst.group));
        }
        j["B_list"] = std::move(list);
    }
    const AuditConfig defaults;
    if (!(inst.audit == defaults)) {
        Json a;
        a["depth"] = inst.audit.depth;
        a["cap"] = inst.audit.cap;
        if (inst.audit.max_multiplicity) {
            a["max_multiplicity"] = *inst.audit.max_multiplicity;
        }
        if (inst.audit.combination_bound) {
            a["combination_bound"] = *inst.audit.combination_bound;
        }
        a["budget"] = inst.audit.budget;
        j["audit"] = std::move(a);
    }
    if (inst.system) {
        j["system"] = encode_system(*inst.system, inst.group);
    }
    if (inst.generator) {
        j["generator"] = *inst.generator;
    }
    return j;
}

std::string dump_instance(const Instance& inst)
{
    return instance_to_json(inst).dump(2) + "\n";
}

Json status_to_json(const PropertyStatus& s, const GroupContext& g)
{
    Json j;
    j["property"] = to_string(s.property);
    j["outcome"] = to_string(s.outcome);
    if (s.witness) {
        Json w;
        Json elems = Json::array();
        for (const auto& e : s.witness->elements) {
            elems.push_back(encode_element(e, g));
        }
        w["elements"] = std::move(elems);
        if (!s.witness->multiplicities.empty()) {
            w["multiplicities"] = s.witness->multiplicities;
        }
        if (!s.witness->side.empty()) {
            w["side"] = s.witness->side;
        }
        j["witness"] = std::move(w);
    } else {
        j["witness"] = nullptr;
    }
    j["probe_size"] = s.probe_size;
    j["depth"] = s.depth;
    j["evidence"] = s.evidence;
    return j;
}

PropertyStatus status_from_json(const Json& j, const GroupContext& g)
{
    PropertyStatus s;
    s.property = property_from_string(field(j, "property").get<std::string>());
    s.outcome = outcome_from_string(field(j, "outcome").get<std::string>());
    if (j.contains("witness") && !j.at("witness").is_null()) {
        const Json& w = j.at("witness");
        Witness wit;
        for (const auto& e : field(w, "elements")) {
            wit.elements.push_back(decode_element(e, g));
        }
        if (w.contains("multiplicities")) {
            wit.multiplicities = w.at("multiplicities").get<std::vector<std::uint64_t>>();
        }
        wit.side = w.value("side", "");
        s.witness = std::move(wit);
    }
    s.probe_size = field(j, "probe_size").get<std::size_t>();
    s.depth = field(j, "depth").get<int>();
    s.evidence = field(j, "evidence").get<std::string>();
    return s;
}

Json audit_to_json(const std::vector<PropertyStatus>& statuses, const GroupContext& g)
{
    Json out = Json::array();
    for (const auto& s : statuses) {
        out.push_back(status_to_json(s, g));
    }
    return out;
}

Json report_to_json(const Report& r, const GroupContext& g)
{
    const Verdict& v = r.verdict;
    Json j;
    j["format"] = instance_format;
    j["name"] = r.name;
    j["group"] = r.group;
    j["relation"] = r.relation;
    j["rule"] = to_string(v.theorem.rule);
    j["direction"] = to_string(v.theorem.direction);
    j["conditional"] = v.theorem.conditional;
    j["consistent"] = v.consistent;
    Json conds = Json::array();
    for (const auto& c : v.theorem.conditions) {
        conds.push_back({{"condition", c.condition}, {"passed", c.passed}, {"evidence", c.evidence}});
    }
    j["conditions"] = std::move(conds);
    Json basis = Json::array();
    for (const auto& s : v.theorem.property_basis) {
        basis.push_back(to_string(s.property));
    }
    j["property_basis"] = std::move(basis);
    Json blocked = Json::array();
    for (const auto& b : v.theorem.blocked) {
        blocked.push_back({{"rule", to_string(b.rule)}, {"reason", b.reason}});
    }
    j["blocked"] = std::move(blocked);
    j["oracle"] = {{"efficient_A", encode_set(v.oracle.efficient_A, g)},
                   {"efficient_sum", encode_set(v.oracle.efficient_sum, g)},
                   {"equality_holds", v.oracle.equality_holds}};
    j["properties"] = audit_to_json(v.properties, g);
    if (r.timing_ms) {
        j["timing_ms"] = *r.timing_ms;
    }
    return j;
}

Report report_from_json(const Json& j, const GroupContext& g)
{
    try {
        Report r;
        r.name = field(j, "name").get<std::string>();
        r.group = field(j, "group").get<std::string>();
        r.relation = field(j, "relation").get<std::string>();
        Verdict& v = r.verdict;
        v.theorem.rule = rule_from_string(field(j, "rule").get<std::string>());
        v.theorem.direction = direction_from_string(field(j, "direction").get<std::string>());
        v.theorem.conditional = field(j, "conditional").get<bool>();
        v.consistent = field(j, "consistent").get<bool>();
        for (const auto& c : field(j, "conditions")) {
            v.theorem.conditions.push_back({field(c, "condition").get<std::string>(), field(c, "passed").get<bool>(),
                                            field(c, "evidence").get<std::string>()});
        }
        for (const auto& b : field(j, "blocked")) {
            v.theorem.blocked.push_back(
                {rule_from_string(field(b, "rule").get<std::string>()), field(b, "reason").get<std::string>()});
        }
        for (const auto& s : field(j, "properties")) {
            v.properties.push_back(status_from_json(s, g));
        }
        for (const auto& id : field(j, "property_basis")) {
            v.theorem.property_basis.push_back(find_status(v.properties, property_from_string(id.get<std::string>())));
        }
        const Json& o = field(j, "oracle");
        v.oracle.efficient_A = decode_set(field(o, "efficient_A"), g, "efficient_A", nullptr);
        v.oracle.efficient_sum = decode_set(field(o, "efficient_sum"), g, "efficient_sum", nullptr);
        v.oracle.equality_holds = field(o, "equality_holds").get<bool>();
        if (j.contains("timing_ms")) {
            r.timing_ms = j.at("timing_ms").get<double>();
        }
        return r;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad report field: ") + e.what());
    }
}

namespace {

std::string set_text(const FiniteSet& s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += (i ? ", " : "") + s[i].to_string();
    }
    return out + "}";
}

std::string witness_text(const PropertyStatus& s)
{
    if (!s.witness) {
        return "";
    }
    std::string out = "witness";
    for (std::size_t i = 0; i < s.witness->elements.size(); ++i) {
        out += " ";
        if (i < s.witness->multiplicities.size() && s.witness->multiplicities[i] != 1) {
            out += std::to_string(s.witness->multiplicities[i]) + "*";
        }
        out += s.witness->elements[i].to_string();
    }
    if (!s.witness->side.empty()) {
        out += " (" + s.witness->side + ")";
    }
    return out;
}

} // namespace

std::string audit_to_text(const std::vector<PropertyStatus>& statuses)
{
    std::ostringstream out;
    for (const auto& s : statuses) {
        out << "  " << std::left << std::setw(5) << to_string(s.property) << std::setw(18) << to_string(s.outcome)
            << s.evidence;
        if (s.witness) {
            out << "; " << witness_text(s);
        }
        out << "\n";
    }
    return out.str();
}

std::string report_to_text(const Report& r)
{
    const Verdict& v = r.verdict;
    std::ostringstream out;
    auto row = [&](const std::string& key, const std::string& value) {
        out << std::left << std::setw(14) << key << value << "\n";
    };
    row("instance", r.name);
    row("group", r.group);
    row("relation", r.relation);
    row("rule", to_string(v.theorem.rule));
    row("direction", to_string(v.theorem.direction) + (v.theorem.conditional ? " (conditional)" : ""));
    row("oracle", v.oracle.equality_holds ? "E(A+B) = E(A)" : "E(A+B) != E(A)");
    row("consistent", v.consistent ? "yes" : "NO");
    row("E(A)", set_text(v.oracle.efficient_A));
    row("E(A+B)", set_text(v.oracle.efficient_sum));
    if (r.timing_ms) {
        std::ostringstream t;
        t << std::fixed << std::setprecision(3) << *r.timing_ms << " ms";
        row("time", t.str());
    }
    out << "conditions\n";
    std::size_t width = 0;
    for (const auto& c : v.theorem.conditions) {
        width = std::max(width, c.condition.size());
    }
    for (const auto& c : v.theorem.conditions) {
        out << "  " << std::left << std::setw(static_cast<int>(width + 2)) << c.condition << std::setw(7) << (c.passed ? "pass" : "FAIL")
            << c.evidence << "\n";
    }
    if (!v.theorem.blocked.empty()) {
        out << "blocked\n";
        for (const auto& b : v.theorem.blocked) {
            out << "  " << std::left << std::setw(15) << to_string(b.rule) << b.reason << "\n";
        }
    }
    out << "properties\n" << audit_to_text(v.properties);
    return out.str();
}

} // namespace effsum
