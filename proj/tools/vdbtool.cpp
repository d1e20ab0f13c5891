// Command-line front end: evaluate indices, certify property P* on a grid,
// construct and certify extremal graphs, verify the structure theorem by
// exhaustive search, and run swap descent from random starts.
//
// Exit codes: 0 success or verified, 1 a verification failed, 2 input or
// usage error, 3 domain or hypothesis error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vdb/extremal.hpp"
#include "vdb/graph_io.hpp"
#include "vdb/oracle.hpp"
#include "vdb/property.hpp"
#include "vdb/weights.hpp"

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitDomain = 3;

int exit_code_for(const vdb::error& e) {
    switch (e.code()) {
        case vdb::errc::parse_error:
        case vdb::errc::malformed_header:
        case vdb::errc::trailing_garbage:
        case vdb::errc::non_canonical_padding:
        case vdb::errc::index_out_of_range:
        case vdb::errc::self_loop:
        case vdb::errc::duplicate_edge:
            return kExitInput;
        default:
            return kExitDomain;
    }
}

struct IndexChoice {
    std::string name = "sombor";
    double alpha = 0.5;
    double p = 2.0;

    vdb::WeightFunction build() const {
        std::string base = name;
        bool exponential = false;
        if (base.rfind("exp:", 0) == 0) {
            exponential = true;
            base = base.substr(4);
        }
        vdb::WeightFunction w = vdb::WeightFunction::sombor();
        if (base == "sombor")
            w = vdb::WeightFunction::sombor();
        else if (base == "gsombor")
            w = vdb::WeightFunction::general_sombor(alpha);
        else if (base == "psombor")
            w = vdb::WeightFunction::p_sombor(p);
        else if (base == "gsc")
            w = vdb::WeightFunction::general_sum_connectivity(alpha);
        else if (base == "grandic")
            w = vdb::WeightFunction::general_randic(alpha);
        else
            vdb::fail(vdb::errc::parameter_error,
                      "unknown index \"" + name +
                          "\" (expected sombor, gsombor, psombor, gsc, grandic, "
                          "optionally prefixed exp:)");
        return exponential ? vdb::WeightFunction::exponential_of(std::move(w)) : w;
    }

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--index", name,
                        "index: sombor | gsombor | psombor | gsc | grandic, or exp:<name>");
        cmd->add_option("--alpha", alpha, "alpha for gsombor/gsc/grandic");
        cmd->add_option("--p", p, "p for psombor");
    }
};

struct OutputChoice {
    std::string out_path;
    bool as_json = false;
    bool pretty = false;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--out", out_path, "write the JSON report to this file");
        cmd->add_flag("--json", as_json, "print JSON instead of the text summary");
        cmd->add_flag("--pretty", pretty, "indent JSON output");
    }

    /// stdout gets the full report; the --out file omits elapsed_seconds so
    /// reruns with identical flags are byte-identical.
    void emit(const json& report, const std::string& human) const {
        if (as_json)
            std::cout << (pretty ? report.dump(2) : report.dump()) << '\n';
        else
            std::cout << human;
        if (!out_path.empty()) {
            json stable = report;
            if (stable.is_object()) stable.erase("elapsed_seconds");
            std::ofstream f(out_path);
            if (!f) vdb::fail(vdb::errc::parse_error, "cannot write " + out_path);
            f << (pretty ? stable.dump(2) : stable.dump()) << '\n';
        }
    }
};

vdb::Graph load_graph(const std::string& path, std::string format) {
    std::ifstream f(path);
    if (!f) vdb::fail(vdb::errc::parse_error, "cannot read " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    std::string text = buf.str();

    if (format == "auto") {
        std::string ext = std::filesystem::path(path).extension().string();
        if (ext == ".g6")
            format = "g6";
        else if (ext == ".edges")
            format = "edges";
        else
            vdb::fail(vdb::errc::parse_error,
                      "cannot infer format from \"" + ext + "\"; pass --format");
    }
    if (format == "g6") {
        // one graph per line; only the first line is read here
        return vdb::decode_graph6(text.substr(0, text.find('\n')));
    }
    if (format == "edges") return vdb::parse_edge_list_text(text);
    vdb::fail(vdb::errc::parse_error, "--format must be auto, g6 or edges");
}

std::string checkpoint_path_with_env(const std::string& flag_value) {
    if (flag_value.empty()) return flag_value;
    const char* dir = std::getenv("VDB_CHECKPOINT_DIR");
    std::filesystem::path p(flag_value);
    if (dir && *dir && p.is_relative()) return (std::filesystem::path(dir) / p).string();
    return flag_value;
}

// ---- compute -----------------------------------------------------------

int run_compute(const std::string& input, const std::string& format,
                const IndexChoice& index, bool exponential, const OutputChoice& output) {
    vdb::Graph g = load_graph(input, format);
    vdb::WeightFunction w = index.build();
    vdb::IndexValue ti = vdb::compute_ti(g, w);

    json report{{"index", w.id_json()},
                {"n", g.vertex_count()},
                {"m", g.edge_count()},
                {"graph_digest", ti.graph_digest},
                {"ti", ti.value}};
    report["k"] = vdb::is_connected(g) ? json(vdb::cyclomatic_number(g)) : json();
    std::ostringstream human;
    human << w.name() << " on " << g.vertex_count() << " vertices, " << g.edge_count()
          << " edges: ti = " << std::setprecision(15) << ti.value << '\n';
    if (exponential) {
        double e = vdb::compute_exponential_ti(g, w).value;
        report["exponential_ti"] = e;
        human << "exponential ti = " << e << '\n';
    }
    output.emit(report, human.str());
    return kExitPass;
}

// ---- property ----------------------------------------------------------

int run_property(const IndexChoice& index, int dmax, double step, double eps,
                 const std::string& sweep, const OutputChoice& output) {
    vdb::GridSpec grid{dmax, step, eps};

    if (!sweep.empty()) {
        double lo = 0, hi = 0, sstep = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(sweep);
        if (!(in >> lo >> c1 >> hi >> c2 >> sstep) || c1 != ':' || c2 != ':')
            vdb::fail(vdb::errc::parse_error, "--sweep expects lo:hi:step");
        vdb::weight_family family = index.build().family();
        auto entries = vdb::sweep_parameters(family, lo, hi, sstep, grid);
        bool all_pass = true;
        for (const auto& e : entries)
            all_pass = all_pass && e.report.pstar_holds == vdb::Verdict::pass;
        json report = json::array();
        for (const auto& e : entries) report.push_back(e);
        std::ostringstream human;
        human << entries.size() << " samples in [" << lo << ", " << hi
              << "]: " << (all_pass ? "all grid-certified" : "NOT all certified") << '\n';
        for (auto [a, b] : vdb::certified_ranges(entries))
            human << "  certified range: " << a << " .. " << b << '\n';
        output.emit(report, human.str());
        return all_pass ? kExitPass : kExitFail;
    }

    vdb::PropertyReport report = vdb::check_property_pstar(index.build(), grid);
    json j = report;
    std::ostringstream human;
    human << "property P: " << vdb::verdict_name(report.p_holds)
          << ", property P*: " << vdb::verdict_name(report.pstar_holds)
          << " (grid-certified, dmax=" << dmax << ")\n";
    if (report.counterexample) {
        human << "counterexample [" << report.counterexample->condition << "] at (";
        for (std::size_t i = 0; i < report.counterexample->args.size(); ++i)
            human << (i ? ", " : "") << report.counterexample->args[i];
        human << ")\n";
    }
    output.emit(j, human.str());
    return report.pstar_holds == vdb::Verdict::pass ? kExitPass : kExitFail;
}

// ---- construct ---------------------------------------------------------

int run_construct(int n, int k, const std::string& out_path, const std::string& format,
                  const IndexChoice& index, bool json_out, bool pretty) {
    vdb::Graph g = vdb::construct_minimizer(n, k);

    std::vector<vdb::WeightFunction> weights{vdb::WeightFunction::sombor()};
    vdb::WeightFunction chosen = index.build();
    if (chosen.name() != weights.front().name()) weights.push_back(chosen);
    vdb::ExtremalCertificate cert = vdb::check_certificate(g, weights);

    std::string blob =
        format == "edges" ? vdb::to_edge_list_text(g) : vdb::encode_graph6(g) + "\n";
    if (out_path.empty()) {
        std::cout << blob;
    } else {
        std::ofstream f(out_path);
        if (!f) vdb::fail(vdb::errc::parse_error, "cannot write " + out_path);
        f << blob;
    }

    json j = cert;
    if (json_out) {
        std::cout << (pretty ? j.dump(2) : j.dump()) << '\n';
    } else {
        std::cout << "certificate: " << (cert.pass() ? "pass" : "FAIL") << " (n=" << cert.n
                  << ", k=" << cert.k << ", m22=" << cert.m22 << ", m23=" << cert.m23
                  << ", m33=" << cert.m33 << ")\n";
        for (const auto& [name, ok] : cert.ti_matches_closed_form)
            std::cout << "  " << name << ": closed form " << (ok ? "matched" : "MISMATCH")
                      << '\n';
    }
    return cert.pass() ? kExitPass : kExitFail;
}

// ---- verify ------------------------------------------------------------

int run_verify(int n, int k, const IndexChoice& index, const std::string& cls, int workers,
               const std::string& checkpoint, const OutputChoice& output) {
    vdb::GraphClass gc = vdb::GraphClass::chemical;
    if (cls == "chemical")
        gc = vdb::GraphClass::chemical;
    else if (cls == "delta2")
        gc = vdb::GraphClass::delta2;
    else if (cls == "all")
        gc = vdb::GraphClass::all;
    else
        vdb::fail(vdb::errc::parse_error, "--class must be chemical, delta2 or all");

    vdb::OracleOptions opts;
    opts.workers = workers;
    opts.checkpoint_path = checkpoint_path_with_env(checkpoint);

    vdb::TheoremReport report = vdb::verify_theorem(n, k, index.build(), gc, opts);
    json j = report;
    std::ostringstream human;
    human << "class " << vdb::graph_class_name(gc) << ", n=" << n << ", k=" << k << ": "
          << (report.pass() ? "PASS" : "FAIL") << '\n'
          << "  enumerated min = " << std::setprecision(15) << report.result.min_value
          << ", closed form = " << report.closed_form << '\n'
          << "  graphs visited = " << report.result.graphs_visited
          << ", minimizing profiles = " << report.result.minimizer_profiles.size()
          << ", elapsed = " << std::setprecision(3) << report.result.elapsed_seconds
          << "s\n";
    output.emit(j, human.str());
    return report.pass() ? kExitPass : kExitFail;
}

// ---- descend -----------------------------------------------------------

int run_descend(int n, int k, const IndexChoice& index, int seeds, std::uint64_t seed_base,
                bool chemical, const std::string& start_path,
                const std::string& start_format, const std::string& trace_dir,
                const OutputChoice& output) {
    vdb::WeightFunction w = index.build();

    std::optional<vdb::Graph> fixed_start;
    if (!start_path.empty()) {
        fixed_start = load_graph(start_path, start_format);
        n = fixed_start->vertex_count();
        k = vdb::cyclomatic_number(*fixed_start);
        seeds = 1;
    }
    std::optional<double> closed;
    if (k >= 3 && n >= 5 * (k - 1)) closed = vdb::closed_form_min(n, k, w);

    if (seeds < 1) vdb::fail(vdb::errc::parameter_error, "--seeds must be positive");
    if (!trace_dir.empty()) std::filesystem::create_directories(trace_dir);

    std::vector<double> finals;
    std::uint64_t total_steps = 0;
    bool all_monotone = true;
    int zero_step_runs = 0;

    for (int i = 0; i < seeds; ++i) {
        const std::uint64_t seed = seed_base + static_cast<std::uint64_t>(i);
        vdb::Graph start =
            fixed_start ? *fixed_start : vdb::random_k_cyclic(n, k, seed, chemical);
        vdb::DescentResult r = vdb::greedy_descent(start, w);

        double prev = r.initial_ti;
        for (const auto& s : r.steps) {
            if (s.ti > prev + 1e-9) all_monotone = false;
            prev = s.ti;
        }
        finals.push_back(r.final_ti());
        total_steps += r.steps.size();
        if (r.steps.empty()) ++zero_step_runs;

        if (!trace_dir.empty()) {
            std::ofstream f(std::filesystem::path(trace_dir) /
                            ("descend_" + std::to_string(seed) + ".jsonl"));
            for (const auto& s : r.steps) f << json(s).dump() << '\n';
        }
    }

    std::sort(finals.begin(), finals.end());
    const double median = finals[finals.size() / 2];
    bool above_closed = true;
    if (closed)
        for (double v : finals) above_closed = above_closed && v >= *closed - 1e-9;

    json report{{"n", n},
                {"k", k},
                {"index", w.id_json()},
                {"starts", seeds},
                {"seed_base", seed_base},
                {"chemical", chemical},
                {"min_final", finals.front()},
                {"median_final", median},
                {"max_final", finals.back()},
                {"total_steps", total_steps},
                {"zero_step_runs", zero_step_runs},
                {"all_monotone", all_monotone},
                {"closed_form", closed ? json(*closed) : json()},
                {"all_at_or_above_closed_form", closed ? json(above_closed) : json()}};
    std::ostringstream human;
    human << seeds << " descents on (" << n << "," << k
          << "): median final = " << std::setprecision(15) << median
          << ", min final = " << finals.front() << '\n';
    if (closed)
        human << "closed form = " << *closed << " ("
              << (above_closed ? "no trace went below" : "VIOLATED") << ")\n";
    human << "monotone: " << (all_monotone ? "yes" : "NO") << '\n';
    output.emit(report, human.str());
    return all_monotone && above_closed ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vertex-degree-based index toolkit for k-cyclic graphs"};
    app.require_subcommand(1);

    // compute
    auto* compute = app.add_subcommand("compute", "evaluate an index on a graph file");
    std::string in_path, in_format = "auto";
    bool exponential = false;
    IndexChoice compute_index;
    OutputChoice compute_out;
    compute->add_option("input", in_path, "graph file (.g6 or .edges)")->required();
    compute->add_option("--format", in_format, "auto | g6 | edges");
    compute->add_flag("--exponential", exponential, "also report the exponential index");
    compute_index.add_flags(compute);
    compute_out.add_flags(compute);

    // property
    auto* property = app.add_subcommand("property", "grid-certify properties P and P*");
    IndexChoice property_index;
    OutputChoice property_out;
    int dmax = 50;
    double step = 0.05, eps = 1e-12;
    std::string sweep;
    property->add_option("--dmax", dmax, "largest integer degree checked");
    property->add_option("--step", step, "real-grid step");
    property->add_option("--eps", eps, "violation tolerance");
    property->add_option("--sweep", sweep, "parameter sweep lo:hi:step for the family");
    property_index.add_flags(property);
    property_out.add_flags(property);

    // construct
    auto* construct =
        app.add_subcommand("construct", "build a minimum graph and certify it");
    int cn = 0, ck = 0;
    std::string construct_out_path, construct_format = "g6";
    bool construct_json = false, construct_pretty = false;
    IndexChoice construct_index;
    construct->add_option("--n", cn, "vertex count")->required();
    construct->add_option("--k", ck, "cyclomatic number")->required();
    construct->add_option("--out", construct_out_path, "write the graph here");
    construct->add_option("--format", construct_format, "g6 | edges");
    construct->add_flag("--json", construct_json, "print the certificate as JSON");
    construct->add_flag("--pretty", construct_pretty, "indent JSON output");
    construct_index.add_flags(construct);

    // verify
    auto* verify =
        app.add_subcommand("verify", "exhaustively verify the minimum on one instance");
    int vn = 0, vk = 0, workers = 0;
    std::string vclass = "chemical", checkpoint;
    IndexChoice verify_index;
    OutputChoice verify_out;
    verify->add_option("--n", vn, "vertex count")->required();
    verify->add_option("--k", vk, "cyclomatic number")->required();
    verify->add_option("--class", vclass, "chemical | delta2 | all");
    verify->add_option("--workers", workers, "worker threads (0 = all cores)");
    verify->add_option("--checkpoint", checkpoint,
                       "resumable cursor file (VDB_CHECKPOINT_DIR prefixes relative paths)");
    verify_index.add_flags(verify);
    verify_out.add_flags(verify);

    // descend
    auto* descend = app.add_subcommand("descend", "swap descent from random starts");
    int dn = 0, dk = 0, seeds = 10;
    std::uint64_t seed_base = 1;
    bool chemical = false;
    std::string trace_dir, start_path, start_format = "auto";
    IndexChoice descend_index;
    OutputChoice descend_out;
    auto* dn_opt = descend->add_option("--n", dn, "vertex count");
    auto* dk_opt = descend->add_option("--k", dk, "cyclomatic number");
    descend->add_option("--seeds", seeds, "number of random starts");
    descend->add_option("--seed", seed_base, "base seed");
    descend->add_flag("--chemical", chemical, "restrict starts to max degree 4");
    descend->add_option("--start", start_path, "descend from this graph file instead")
        ->excludes(dn_opt)
        ->excludes(dk_opt);
    descend->add_option("--start-format", start_format, "auto | g6 | edges");
    descend->add_option("--trace-dir", trace_dir, "write one jsonl trace per start");
    descend_index.add_flags(descend);
    descend_out.add_flags(descend);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*compute)
            return run_compute(in_path, in_format, compute_index, exponential, compute_out);
        if (*property)
            return run_property(property_index, dmax, step, eps, sweep, property_out);
        if (*construct)
            return run_construct(cn, ck, construct_out_path, construct_format,
                                 construct_index, construct_json, construct_pretty);
        if (*verify)
            return run_verify(vn, vk, verify_index, vclass, workers, checkpoint, verify_out);
        if (*descend) {
            if (start_path.empty() && (!*dn_opt || !*dk_opt))
                vdb::fail(vdb::errc::parse_error, "descend needs --n and --k, or --start");
            return run_descend(dn, dk, descend_index, seeds, seed_base, chemical,
                               start_path, start_format, trace_dir, descend_out);
        }
    } catch (const vdb::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
