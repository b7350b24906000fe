#include "moment_bounds/cli.hpp"

#include "moment_bounds/census.hpp"
#include "moment_bounds/eigencount.hpp"
#include "moment_bounds/error.hpp"
#include "moment_bounds/estimators.hpp"
#include "moment_bounds/graph.hpp"
#include "moment_bounds/hankel.hpp"
#include "moment_bounds/moments.hpp"
#include "moment_bounds/report.hpp"
#include "moment_bounds/spectrum.hpp"
#include "moment_bounds/support_bounds.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace moment_bounds {

namespace {

constexpr const char* kModule = "cli";

using nlohmann::json;

struct Globals {
    std::string format = "json";
    double tol = 1e-9;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string moments_file;
    std::string generate;
    int index_base = 0;
    bool dedup = false;
    bool timestamps = false;
    std::size_t spectrum_cap = 5000;
};

struct Input {
    std::optional<Graph> graph;
    std::optional<MomentSequence> moments;
    std::string source;
};

double parse_number(std::string_view s, const char* what) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError(kModule, std::string("cannot parse ") + what + " '" + std::string(s) + "'");
    return v;
}

Interval parse_interval(std::string_view s, const char* what) {
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) throw ValidationError(kModule, std::string(what) + " must look like lo,hi");
    return {parse_number(s.substr(0, comma), what), parse_number(s.substr(comma + 1), what)};
}

Graph generate_graph(const std::string& spec, std::uint64_t seed) {
    std::vector<std::string_view> parts;
    std::string_view rest = spec;
    for (;;) {
        const auto colon = rest.find(':');
        parts.push_back(rest.substr(0, colon));
        if (colon == std::string_view::npos) break;
        rest.remove_prefix(colon + 1);
    }
    if (parts.size() < 2 || parts.size() > 3) throw ValidationError(kModule, "--generate expects kind:n[:p]");
    const GraphKind kind = parse_graph_kind(parts[0]);
    const double n = parse_number(parts[1], "node count");
    if (n < 0 || n != std::floor(n)) throw ValidationError(kModule, "node count must be a nonnegative integer");
    GenerateParams params;
    params.seed = seed;
    if (parts.size() == 3) params.p = parse_number(parts[2], "edge probability");
    else if (kind == GraphKind::erdos_renyi) throw ValidationError(kModule, "erdos_renyi needs kind:n:p");
    return generate(kind, static_cast<std::size_t>(n), params);
}

MomentSequence read_moments_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(kModule, "cannot open moments file '" + path + "'");
    try {
        return json::parse(in).get<MomentSequence>();
    } catch (const json::exception& e) {
        throw ParseError(kModule, "moments file '" + path + "': " + e.what());
    }
}

AggregateDensities read_aggregates_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(kModule, "cannot open aggregates file '" + path + "'");
    try {
        return json::parse(in).get<AggregateDensities>();
    } catch (const json::exception& e) {
        throw ParseError(kModule, "aggregates file '" + path + "': " + e.what());
    }
}

Input resolve(const Globals& g, const std::string& path, bool allow_moments) {
    const int sources = int(!g.generate.empty()) + int(!path.empty()) + int(!g.moments_file.empty());
    if (sources == 0) throw ValidationError(kModule, "no input: give an edge-list path, --generate or --moments-file");
    if (sources > 1) throw ValidationError(kModule, "give exactly one of an edge-list path, --generate, --moments-file");
    Input in;
    if (!g.generate.empty()) {
        in.graph = generate_graph(g.generate, g.seed);
        in.source = "generated:" + g.generate;
    } else if (!path.empty()) {
        in.graph = load_edge_list_file(path, {g.index_base, g.dedup});
        in.source = path;
    } else {
        if (!allow_moments) throw ValidationError(kModule, "this command needs a graph, not a moments file");
        in.moments = read_moments_file(g.moments_file);
        in.source = g.moments_file;
    }
    return in;
}

AnalysisConfig config_from(const Globals& g) {
    AnalysisConfig c;
    c.tol = g.tol;
    c.threads = g.threads;
    c.spectrum_cap = g.spectrum_cap;
    c.timestamp = g.timestamps;
    return c;
}

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

MomentSequence moments_of(const Input& in, const Globals& g) {
    if (in.moments) return *in.moments;
    return moments_from_census(node_census(*in.graph, g.threads));
}

json bound_json(const SupportBounds& b) { return b; }

int cmd_analyze(const Globals& g, const std::string& path, std::ostream& out) {
    const Input in = resolve(g, path, true);
    const auto config = config_from(g);
    const AnalysisReport r = in.graph ? analyze_graph(*in.graph, in.source, config)
                                      : analyze_moments(*in.moments, in.source, config);
    if (g.format == "csv") write_reports_csv(out, std::span(&r, 1));
    else print_json(out, r);
    return 0;
}

int cmd_census(const Globals& g, const std::string& path, std::ostream& out) {
    const Input in = resolve(g, path, false);
    const auto c = node_census(*in.graph, g.threads);
    if (g.format == "csv") {
        write_census_csv(out, *in.graph, c);
        return 0;
    }
    json nodes = json::array();
    for (NodeId v = 0; v < c.size(); ++v)
        nodes.push_back({{"node", in.graph->label(v)},
                         {"d", c.degree[v]},
                         {"t", c.triangles[v]},
                         {"q", c.quadrangles[v]},
                         {"p", c.pentagons[v]}});
    print_json(out, {{"aggregates", aggregates(c)}, {"nodes", nodes}});
    return 0;
}

int cmd_moments(const Globals& g, const std::string& path, const std::string& aggregates_file, bool with_spectrum,
                std::ostream& out) {
    std::vector<MomentSequence> all;
    if (!aggregates_file.empty()) {
        if (!path.empty() || !g.generate.empty() || !g.moments_file.empty())
            throw ValidationError(kModule, "--aggregates-file cannot be combined with another input");
        all.push_back(moments_from_aggregates(read_aggregates_file(aggregates_file)));
    } else {
        const Input in = resolve(g, path, true);
        if (in.moments) {
            all.push_back(*in.moments);
        } else {
            all.push_back(moments_from_census(node_census(*in.graph, g.threads)));
            all.push_back(moments_from_walks(*in.graph, 5, g.threads));
            if (with_spectrum) all.push_back(compute_spectrum(*in.graph, {g.spectrum_cap, 8}).moments);
        }
    }
    if (g.format == "csv") {
        out << "source,k,m\n";
        for (const auto& ms : all)
            for (std::size_t k = 0; k <= ms.order(); ++k)
                out << to_string(ms.source()) << ',' << k << ',' << format_double(ms[k]) << '\n';
    } else {
        print_json(out, all.size() == 1 ? json(all.front()) : json(all));
    }
    return 0;
}

int cmd_bounds(const Globals& g, const std::string& path, const std::string& level, const std::string& method,
               std::ostream& out) {
    const Input in = resolve(g, path, true);
    const MomentSequence ms = moments_of(in, g);
    std::vector<int> levels;
    if (level == "1") levels = {1};
    else if (level == "2") levels = {2};
    else levels = ms.order() >= 5 ? std::vector<int>{1, 2} : std::vector<int>{1};

    json feas = json::array();
    std::vector<SupportBounds> bounds;
    const std::vector<double> scaled = ms.order() >= 2 && ms[2] > 0.0
                                           ? ms.scaled(std::sqrt(ms[2]))
                                           : std::vector<double>(ms.values().begin(), ms.values().end());
    for (int s : levels) {
        if (ms.order() >= std::size_t(2 * s)) {
            const auto rep = check_hamburger(scaled, s);
            feas.push_back({{"level", s}, {"feasible", rep.feasible}, {"min_eigenvalue", rep.min_eigenvalue}});
        }
        if (method == "bisect") bounds.push_back(bounds_bisect(ms, s, std::max(g.tol, 1e-12)));
        else bounds.push_back(s == 1 ? bounds_s1(ms) : bounds_s2(ms));
    }
    if (g.format == "csv") {
        out << "level,alpha,beta,method,residual\n";
        for (const auto& b : bounds)
            out << b.level << ',' << format_double(b.alpha) << ',' << format_double(b.beta) << ','
                << to_string(b.method) << ',' << format_double(b.residual) << '\n';
    } else {
        json arr = json::array();
        for (const auto& b : bounds) arr.push_back(bound_json(b));
        print_json(out, {{"source", in.source}, {"n", ms.node_count()}, {"feasibility", feas}, {"bounds", arr}});
    }
    return 0;
}

int cmd_estimate(const Globals& g, const std::string& path, const std::string& aggregates_file, std::ostream& out) {
    json j;
    if (!aggregates_file.empty()) {
        if (!path.empty() || !g.generate.empty() || !g.moments_file.empty())
            throw ValidationError(kModule, "--aggregates-file cannot be combined with another input");
        const auto d = read_aggregates_file(aggregates_file);
        const auto s = social_estimators(d);
        j = {{"u1", nullptr}, {"u2", nullptr}, {"W", nullptr}};
        j["lambda_a"] = s.lambda_a ? json(*s.lambda_a) : json(nullptr);
        j["lambda_b"] = s.lambda_b ? json(*s.lambda_b) : json(nullptr);
        j["inputs_per_node"] = d;
    } else {
        const Input in = resolve(g, path, false);
        j = estimate(*in.graph, node_census(*in.graph, g.threads));
    }
    if (g.format == "csv") {
        out << "u1,u2,W,lambda_a,lambda_b\n";
        bool first = true;
        for (const char* key : {"u1", "u2", "W", "lambda_a", "lambda_b"}) {
            out << (first ? "" : ",") << (j[key].is_null() ? std::string() : format_double(j[key].get<double>()));
            first = false;
        }
        out << '\n';
    } else {
        print_json(out, j);
    }
    return 0;
}

int cmd_eigencount(const Globals& g, const std::string& path, const std::string& interval, const std::string& sweep,
                   const std::string& omega_spec, int k, std::ostream& out) {
    if (interval.empty() == sweep.empty()) throw ValidationError(kModule, "give exactly one of --interval and --sweep");
    const Input in = resolve(g, path, true);
    const MomentSequence ms = moments_of(in, g);
    if (k == 0) k = int(std::min<std::size_t>(5, ms.order()));
    Interval omega;
    if (omega_spec == "auto") omega = in.graph ? default_omega(*in.graph) : default_omega(ms);
    else omega = parse_interval(omega_spec, "--omega");

    std::optional<SpectrumSummary> spectrum;
    if (in.graph && in.graph->node_count() <= g.spectrum_cap) spectrum = compute_spectrum(*in.graph, {g.spectrum_cap, 8});
    EigencountOptions opt;
    opt.tol = std::max(g.tol, 1e-8);

    if (!interval.empty()) {
        const Interval t = parse_interval(interval, "--interval");
        const IntervalQuery q{t, omega, k};
        const auto res = eigencount_upper(ms, q, opt);
        std::optional<double> exact;
        if (spectrum) exact = spectral_fraction(*spectrum, t.lo, t.hi);
        if (g.format == "csv") {
            out << "lo,hi,Z_D,F_exact\n"
                << format_double(t.lo) << ',' << format_double(t.hi) << ',' << format_double(res.z_d) << ','
                << (exact ? format_double(*exact) : std::string()) << '\n';
        } else {
            json j{{"target", {t.lo, t.hi}},
                   {"omega", {omega.lo, omega.hi}},
                   {"k", k},
                   {"z_d", res.z_d},
                   {"y", res.y},
                   {"status", to_string(res.status)},
                   {"omega_margin", res.omega_margin},
                   {"target_margin", res.target_margin}};
            j["exact_fraction"] = exact ? json(*exact) : json(nullptr);
            if (!res.note.empty()) j["note"] = res.note;
            print_json(out, j);
        }
        return 0;
    }

    const auto alphas = parse_sweep(sweep);
    const auto points = cdf_bound_sweep(ms, alphas, omega, k, opt, g.threads);
    bool failed = false;
    if (g.format == "csv") {
        out << "alpha,Z_D,F_exact\n";
        for (const auto& p : points) {
            out << format_double(p.alpha) << ',' << (p.result ? format_double(p.result->z_d) : std::string()) << ','
                << (spectrum ? format_double(spectral_cdf(*spectrum, p.alpha)) : std::string()) << '\n';
            failed = failed || !p.result;
        }
    } else {
        json arr = json::array();
        for (const auto& p : points) {
            json item{{"alpha", p.alpha}};
            item["z_d"] = p.result ? json(p.result->z_d) : json(nullptr);
            item["status"] = p.result ? json(to_string(p.result->status)) : json("error");
            item["exact_cdf"] = spectrum ? json(spectral_cdf(*spectrum, p.alpha)) : json(nullptr);
            if (!p.error.empty()) item["error"] = p.error;
            failed = failed || !p.result;
            arr.push_back(std::move(item));
        }
        print_json(out, {{"omega", {omega.lo, omega.hi}}, {"k", k}, {"points", arr}});
    }
    return failed ? 1 : 0;
}

int cmd_spectrum(const Globals& g, const std::string& path, std::size_t bins, std::ostream& out) {
    const Input in = resolve(g, path, false);
    const auto s = compute_spectrum(*in.graph, {g.spectrum_cap, 8});
    std::optional<Histogram> h;
    if (bins > 0) h = histogram(s, bins);
    if (g.format == "csv") {
        if (h) {
            out << "bin_lo,bin_hi,count\n";
            for (std::size_t b = 0; b < h->counts.size(); ++b)
                out << format_double(h->edges[b]) << ',' << format_double(h->edges[b + 1]) << ',' << h->counts[b] << '\n';
        } else {
            out << "index,eigenvalue\n";
            for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) out << i << ',' << format_double(s.eigenvalues[i]) << '\n';
        }
        return 0;
    }
    json j{{"n", s.eigenvalues.size()},
           {"rho", s.rho},
           {"lambda_min", s.lambda_min},
           {"max_residual", s.max_residual},
           {"eigenvalues", s.eigenvalues},
           {"moments", s.moments}};
    if (h) j["histogram"] = {{"edges", h->edges}, {"counts", h->counts}};
    print_json(out, j);
    return 0;
}

int cmd_sample_ego(const Globals& g, const std::string& path, std::size_t count, unsigned radius, std::ostream& out,
                   std::ostream& err) {
    const Input in = resolve(g, path, false);
    EgoSampleOptions opt;
    opt.count = count;
    opt.radius = radius;
    opt.seed = g.seed;
    opt.threads = g.threads;
    opt.spectrum_cap = g.spectrum_cap;
    const auto batch = sample_ego(*in.graph, opt);
    for (const auto& w : batch.warnings) err << "warning: " << w << '\n';
    if (g.format == "csv") write_ego_csv(out, batch);
    else print_json(out, batch);
    return 0;
}

int cmd_report(const Globals& g, const std::vector<std::string>& files, bool json_requested, std::ostream& out) {
    std::vector<AnalysisReport> reports;
    for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) throw IoError(kModule, "cannot open report '" + f + "'");
        try {
            const json j = json::parse(in);
            if (j.is_array())
                for (const auto& item : j) reports.push_back(item.get<AnalysisReport>());
            else
                reports.push_back(j.get<AnalysisReport>());
        } catch (const json::exception& e) {
            throw ParseError(kModule, "report '" + f + "': " + e.what());
        }
    }
    if (json_requested && g.format == "json") print_json(out, reports);
    else write_reports_csv(out, reports);
    return 0;
}

unsigned default_threads() {
    if (const char* env = std::getenv("MB_THREADS")) {
        unsigned v = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc{} && ptr == s.data() + s.size() && v > 0) return v;
    }
    return 1;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral moments of graphs and the eigenvalue bounds they imply", "moment-bounds"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(kVersion));

    Globals g;
    g.threads = default_threads();
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--tol", g.tol, "Numerical tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Seed for generated graphs and sampling");
    app.add_option("--threads", g.threads, "Worker threads (default from MB_THREADS or 1)")->check(CLI::Range(1u, 1024u));
    app.add_option("--moments-file", g.moments_file, "JSON moment sequence {n, m, source}");
    app.add_option("--generate", g.generate, "Synthetic graph kind:n[:p] (ring, complete, star, path, er)");
    app.add_option("--index-base", g.index_base, "Smallest node id in edge lists")->check(CLI::IsMember({0, 1}));
    app.add_flag("--dedup", g.dedup, "Drop duplicate edges and self-loops instead of rejecting them");
    app.add_flag("--timestamps", g.timestamps, "Record the wall-clock time in reports");
    app.add_option("--spectrum-cap", g.spectrum_cap, "Largest graph handed to the dense eigensolver");

    std::string path;
    auto* analyze = app.add_subcommand("analyze", "Full pipeline report");
    analyze->add_option("input", path, "Edge list");

    auto* census = app.add_subcommand("census", "Per-node degree, triangle, 4-cycle, 5-cycle counts");
    census->add_option("input", path, "Edge list");

    std::string aggregates_file;
    bool with_spectrum = false;
    auto* moments = app.add_subcommand("moments", "Spectral moments m0..m5");
    moments->add_option("input", path, "Edge list");
    moments->add_option("--aggregates-file", aggregates_file, "Per-node aggregate densities as JSON");
    moments->add_flag("--spectrum", with_spectrum, "Also compute moments from the eigenvalues");

    std::string level = "auto", method = "closed";
    auto* bounds = app.add_subcommand("bounds", "Extreme-eigenvalue bounds from moments");
    bounds->add_option("input", path, "Edge list");
    bounds->add_option("--level", level, "1, 2 or auto")->check(CLI::IsMember({"1", "2", "auto"}));
    bounds->add_option("--method", method, "closed or bisect")->check(CLI::IsMember({"closed", "bisect"}));

    auto* estimate_cmd = app.add_subcommand("estimate", "Spectral-radius estimators and classical bounds");
    estimate_cmd->add_option("input", path, "Edge list");
    estimate_cmd->add_option("--aggregates-file", aggregates_file, "Per-node aggregate densities as JSON");

    std::string interval, sweep, omega = "auto";
    int k = 0;
    auto* eigencount = app.add_subcommand("eigencount", "Upper bound on the fraction of eigenvalues in an interval");
    eigencount->add_option("input", path, "Edge list");
    eigencount->add_option("--interval", interval, "Target interval a,b");
    eigencount->add_option("--sweep", sweep, "CDF sweep lo:step:hi over targets (-inf, alpha]");
    eigencount->add_option("--omega", omega, "auto or a,b containing every eigenvalue");
    eigencount->add_option("--k", k, "Highest moment used (2..5, default all available up to 5)")
        ->check(CLI::Range(2, 5));

    std::size_t bins = 0;
    auto* spectrum = app.add_subcommand("spectrum", "Dense eigendecomposition");
    spectrum->add_option("input", path, "Edge list");
    spectrum->add_option("--bins", bins, "Histogram bins");

    std::size_t count = 20;
    unsigned radius = 2;
    auto* ego = app.add_subcommand("sample-ego", "Analyze ego subgraphs around seeded random roots");
    ego->add_option("input", path, "Edge list");
    ego->add_option("--count", count, "Number of roots")->check(CLI::PositiveNumber);
    ego->add_option("--radius", radius, "Hops around each root");

    std::vector<std::string> files;
    auto* report = app.add_subcommand("report", "Tabulate saved JSON reports as CSV");
    report->add_option("files", files, "Report files")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*analyze) return cmd_analyze(g, path, out);
        if (*census) return cmd_census(g, path, out);
        if (*moments) return cmd_moments(g, path, aggregates_file, with_spectrum, out);
        if (*bounds) return cmd_bounds(g, path, level, method, out);
        if (*estimate_cmd) return cmd_estimate(g, path, aggregates_file, out);
        if (*eigencount) return cmd_eigencount(g, path, interval, sweep, omega, k, out);
        if (*spectrum) return cmd_spectrum(g, path, bins, out);
        if (*ego) return cmd_sample_ego(g, path, count, radius, out, err);
        if (*report) return cmd_report(g, files, app.get_option("--format")->count() > 0, out);
    } catch (const IoError& e) {
        err << "error [" << e.module() << "]: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        err << "error [" << e.module() << "]: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        err << "error [" << e.module() << "]: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error [" << e.module() << "]: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace moment_bounds
