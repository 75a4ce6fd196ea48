#include "effsum/generator.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace effsum;

namespace {

Instance load(const std::string& text)
{
    return parse_instance_text(text);
}

std::string verdict_json(const std::string& text)
{
    const Instance inst = load(text);
    Report r;
    r.name = inst.name;
    r.group = inst.group.describe();
    r.relation = inst.relation.describe();
    {
        py::gil_scoped_release release;
        r.verdict = combined_verdict(inst.a, inst.b, inst.group, inst.relation, inst.audit, inst.b_list);
    }
    return report_to_json(r, inst.group).dump();
}

std::string efficient_json(const std::string& text, const std::string& which)
{
    const Instance inst = load(text);
    FiniteSet s;
    if (which == "A") {
        s = inst.a;
    } else if (which == "B") {
        s = inst.b;
    } else if (which == "sum") {
        s = minkowski_sum(inst.a, inst.b, inst.group);
    } else {
        throw py::value_error("which must be A, B or sum");
    }
    const auto p = efficient_set(s, inst.relation);
    return Json{{"efficient", encode_set(p.efficient, inst.group)}, {"dominated", encode_set(p.dominated, inst.group)}}
        .dump();
}

std::string audit_json(const std::string& text)
{
    const Instance inst = load(text);
    const FiniteSet b = effective_summand(inst.b, inst.b_list, inst.group);
    std::vector<PropertyStatus> statuses;
    {
        py::gil_scoped_release release;
        statuses = audit_all(inst.a, b, inst.group, inst.relation, inst.audit);
    }
    return audit_to_json(statuses, inst.group).dump();
}

py::tuple trace_text(const std::string& text)
{
    const Instance inst = load(text);
    DerivationTrace trace;
    if (inst.system) {
        trace = derive(*inst.system, inst.group, &inst.relation);
    } else {
        const auto v = combined_verdict(inst.a, inst.b, inst.group, inst.relation, inst.audit, inst.b_list);
        const Rule r = v.theorem.rule;
        if (r != Rule::T7 && r != Rule::T8 && r != Rule::T9 && r != Rule::T10) {
            throw NotApplicable("no system given and rule " + to_string(r) + " has no bridge");
        }
        trace = build_bridge(inst.a, inst.b, inst.group, inst.relation, r == Rule::T9 || r == Rule::T10).trace;
    }
    const auto check = replay(trace, inst.group, &inst.relation);
    return py::make_tuple(serialize(trace), check.ok);
}

std::string minkowski_json(const std::string& group, const std::string& a, const std::string& b)
{
    const GroupContext g = decode_group(Json::parse(group));
    auto decode = [&](const std::string& s) {
        std::vector<GroupElement> out;
        for (const auto& e : Json::parse(s)) {
            out.push_back(decode_element(e, g));
        }
        return FiniteSet(std::move(out));
    };
    return encode_set(minkowski_sum(decode(a), decode(b), g), g).dump();
}

std::string generate_json(std::uint64_t seed, const std::string& family, std::size_t a_size, std::size_t b_size,
                          std::size_t dimension, Coord radius)
{
    return dump_instance(generate_instance(seed, family_from_string(family), {a_size, b_size, dimension, radius}));
}

std::vector<std::size_t> index_cycle(const std::vector<std::size_t>& images, std::size_t start)
{
    for (auto x : images) {
        if (x < 1 || x > images.size()) {
            throw py::value_error("images must lie in 1..n");
        }
    }
    if (start < 1 || start > images.size()) {
        throw py::value_error("start must lie in 1..n");
    }
    return find_index_cycle({images.size(), images}, start).indices;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Efficient points of Minkowski sums over groups";

    auto base = py::register_exception<Error>(m, "EffsumError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<NotApplicable>(m, "NotApplicable", base.ptr());
    py::register_exception<MalformedSystem>(m, "MalformedSystem", base.ptr());

    m.def("verdict_json", &verdict_json, py::arg("instance"));
    m.def("efficient_json", &efficient_json, py::arg("instance"), py::arg("which") = "A");
    m.def("audit_json", &audit_json, py::arg("instance"));
    m.def("trace_text", &trace_text, py::arg("instance"));
    m.def("minkowski_json", &minkowski_json, py::arg("group"), py::arg("a"), py::arg("b"));
    m.def("generate_json", &generate_json, py::arg("seed"), py::arg("family"), py::arg("a_size") = 5,
          py::arg("b_size") = 3, py::arg("dimension") = 2, py::arg("radius") = 5);
    m.def("find_index_cycle", &index_cycle, py::arg("images"), py::arg("start"));
}
