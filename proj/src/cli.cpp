#include "effsum/cli.hpp"

#include "effsum/bench.hpp"
#include "effsum/generator.hpp"
#include "effsum/io.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <optional>

namespace effsum {

namespace {

struct Options {
    std::string instance;
    std::string set = "A";
    std::optional<int> depth;
    std::optional<std::size_t> cap;
    std::optional<std::uint64_t> mult;
    std::optional<std::size_t> budget;
    std::uint64_t seed = 1;
    std::string family = "random";
    bool json = false;
    bool text = false;
    bool timing = false;
    std::string out_path;
    GenSizes sizes;
    std::size_t count = 50;
};

AuditConfig audit_config(const Instance& inst, const Options& o)
{
    AuditConfig c = inst.audit;
    if (o.depth) {
        c.depth = *o.depth;
    }
    if (o.cap) {
        c.cap = *o.cap;
    }
    if (o.mult) {
        c.max_multiplicity = *o.mult;
    }
    if (o.budget) {
        c.budget = *o.budget;
    }
    return c;
}

Instance load(const Options& o, std::ostream& err)
{
    if (o.instance.empty()) {
        throw ParseError("this subcommand needs an instance file");
    }
    Instance inst = parse_instance(o.instance);
    for (const auto& w : inst.warnings) {
        err << "warning: " << w << "\n";
    }
    return inst;
}

Json partition_json(const std::string& which, const EfficiencyPartition& p, const GroupContext& g)
{
    return Json{{"set", which}, {"efficient", encode_set(p.efficient, g)}, {"dominated", encode_set(p.dominated, g)}};
}

int cmd_verdict(const Options& o, std::string& text, std::ostream& err)
{
    const Instance inst = load(o, err);
    const auto start = std::chrono::steady_clock::now();
    Report r;
    r.name = inst.name;
    r.group = inst.group.describe();
    r.relation = inst.relation.describe();
    r.verdict = combined_verdict(inst.a, inst.b, inst.group, inst.relation, audit_config(inst, o), inst.b_list);
    if (o.timing) {
        r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    text = o.json ? report_to_json(r, inst.group).dump(2) + "\n" : report_to_text(r);
    return r.verdict.consistent ? 0 : 1;
}

int cmd_efficient(const Options& o, std::string& text, std::ostream& err)
{
    const Instance inst = load(o, err);
    FiniteSet s;
    if (o.set == "A") {
        s = inst.a;
    } else if (o.set == "B") {
        s = inst.b;
    } else if (o.set == "sum") {
        s = minkowski_sum(inst.a, inst.b, inst.group);
    } else {
        throw ParseError("--set takes A, B or sum");
    }
    const auto p = efficient_set(s, inst.relation);
    if (o.json) {
        text = partition_json(o.set, p, inst.group).dump(2) + "\n";
        return 0;
    }
    auto line = [](const FiniteSet& x) {
        std::string out;
        for (const auto& e : x) {
            out += " " + e.to_string();
        }
        return out;
    };
    text = "set        " + o.set + "\nefficient " + line(p.efficient) + "\ndominated " + line(p.dominated) + "\n";
    return 0;
}

int cmd_audit(const Options& o, std::string& text, std::ostream& err)
{
    const Instance inst = load(o, err);
    const FiniteSet b = effective_summand(inst.b, inst.b_list, inst.group);
    const auto statuses = audit_all(inst.a, b, inst.group, inst.relation, audit_config(inst, o));
    text = o.json ? audit_to_json(statuses, inst.group).dump(2) + "\n" : audit_to_text(statuses);
    return 0;
}

int cmd_trace(const Options& o, std::string& text, std::ostream& err)
{
    const Instance inst = load(o, err);
    DerivationTrace trace;
    if (inst.system) {
        trace = derive(*inst.system, inst.group, &inst.relation);
    } else {
        const Verdict v =
            combined_verdict(inst.a, inst.b, inst.group, inst.relation, audit_config(inst, o), inst.b_list);
        const Rule r = v.theorem.rule;
        if (r != Rule::T7 && r != Rule::T8 && r != Rule::T9 && r != Rule::T10) {
            throw NotApplicable("trace needs a system or an instance where T7-T10 fires; rule is " + to_string(r));
        }
        trace = build_bridge(inst.a, inst.b, inst.group, inst.relation, r == Rule::T9 || r == Rule::T10).trace;
    }
    const ReplayResult check = replay(trace, inst.group, &inst.relation);
    if (o.json) {
        Json lines = Json::array();
        std::istringstream in(serialize(trace));
        for (std::string line; std::getline(in, line);) {
            lines.push_back(line);
        }
        text = Json{{"kind", to_string(trace.kind)}, {"replayed", check.ok}, {"lines", lines}}.dump(2) + "\n";
    } else {
        text = serialize(trace);
    }
    if (!check.ok) {
        err << "replay failed: " << check.error << "\n";
        return 1;
    }
    return 0;
}

int cmd_gen(const Options& o, std::string& text)
{
    text = dump_instance(generate_instance(o.seed, family_from_string(o.family), o.sizes));
    return 0;
}

int cmd_bench(const Options& o, std::string& text)
{
    BenchConfig c;
    c.seed = o.seed;
    c.count = o.count;
    c.sizes = o.sizes;
    if (o.depth) {
        c.audit.depth = *o.depth;
    }
    if (o.cap) {
        c.audit.cap = *o.cap;
    }
    if (o.mult) {
        c.audit.max_multiplicity = *o.mult;
    }
    if (o.budget) {
        c.audit.budget = *o.budget;
    }
    const auto rows = run_bench(c);
    text = o.json ? bench_to_json(rows).dump(2) + "\n" : bench_to_text(rows);
    const bool agree = std::all_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.agree; });
    return agree ? 0 : 1;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Efficient points of Minkowski sums over groups", "effsum"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool needs_instance) {
        if (needs_instance) {
            sub->add_option("instance", o.instance, "Instance JSON file")->required();
        }
        auto* json = sub->add_flag("--json", o.json, "JSON output");
        sub->add_flag("--text", o.text, "Aligned text output (default)")->excludes(json);
        sub->add_option("--out", o.out_path, "Write output to this file");
        sub->add_option("--depth", o.depth, "Probe closure depth");
        sub->add_option("--cap", o.cap, "Probe size cap");
        sub->add_option("--mult", o.mult, "Largest multiplicity tried for P4/P5");
        sub->add_option("--budget", o.budget, "Tuples examined per property on non-enumerated carriers");
    };
    auto add_sizes = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "Generator seed");
        sub->add_option("--a-size", o.sizes.a_size, "Points in A");
        sub->add_option("--b-size", o.sizes.b_size, "Points in B");
        sub->add_option("--dim", o.sizes.dimension, "Vector dimension q");
        sub->add_option("--radius", o.sizes.radius, "Coordinates drawn from [-radius, radius]");
    };

    auto* verdict = app.add_subcommand("verdict", "Decide E(A+B) = E(A) by theorem rules and brute force");
    add_common(verdict, true);
    verdict->add_flag("--timing", o.timing, "Include wall time in the report");
    auto* efficient = app.add_subcommand("efficient", "Efficient and dominated points of A, B or A+B");
    add_common(efficient, true);
    efficient->add_option("--set", o.set, "A, B or sum")->check(CLI::IsMember({"A", "B", "sum"}));
    auto* audit = app.add_subcommand("audit", "Audit REFL and P1-P5 on the instance");
    add_common(audit, true);
    auto* trace = app.add_subcommand("trace", "Derive the contradiction behind a T7-T10 verdict or a stored system");
    add_common(trace, true);
    auto* gen = app.add_subcommand("gen", "Write a seeded random instance");
    add_common(gen, false);
    add_sizes(gen);
    gen->add_option("--family", o.family, "Generator family");
    auto* bench = app.add_subcommand("bench", "Time the naive oracle against the theorem shortcut");
    add_common(bench, false);
    add_sizes(bench);
    bench->add_option("--count", o.count, "Instances per family");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::ostringstream cli_out;
        const int code = app.exit(e, cli_out, err);
        out << cli_out.str();
        return code == 0 ? 0 : 2;
    }

    std::string text;
    int code = 0;
    try {
        if (*verdict) {
            code = cmd_verdict(o, text, err);
        } else if (*efficient) {
            code = cmd_efficient(o, text, err);
        } else if (*audit) {
            code = cmd_audit(o, text, err);
        } else if (*trace) {
            code = cmd_trace(o, text, err);
        } else if (*gen) {
            code = cmd_gen(o, text);
        } else if (*bench) {
            code = cmd_bench(o, text);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    if (o.out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(o.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << o.out_path << "\n";
            return 2;
        }
        file << text;
    }
    return code;
}

} // namespace effsum
