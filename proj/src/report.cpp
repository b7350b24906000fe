#include "moment_bounds/report.hpp"

#include "moment_bounds/error.hpp"
#include "moment_bounds/hankel.hpp"
#include "moment_bounds/parallel.hpp"
#include "moment_bounds/spectrum.hpp"
#include "random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <numeric>
#include <ostream>

namespace moment_bounds {

namespace {

constexpr const char* kModule = "cli";

constexpr const char* kOmegaNote =
    "eigenvalue-count bounds use a compact omega ([-d_max, d_max] for graphs, [-r, r] with "
    "r = min_k (n m_k)^(1/k) over even k for moment input) instead of the whole real line, "
    "so that odd top-degree moments keep their information";

template <class T>
void put_optional(nlohmann::json& j, const char* key, const std::optional<T>& v) {
    j[key] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> get_optional(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

std::string now_iso8601() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    return std::string(buf, std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc));
}

nlohmann::json config_json(const AnalysisConfig& c) {
    return {{"tol", c.tol},
            {"threads", c.threads},
            {"spectrum_cap", c.spectrum_cap},
            {"eigencount_k", c.eigencount_k}};
}

std::vector<double> scaled_for_psd(const MomentSequence& ms) {
    if (ms.order() >= 2 && ms[2] > 0.0) return ms.scaled(std::sqrt(ms[2]));
    return {ms.values().begin(), ms.values().end()};
}

void add_bounds(AnalysisReport& r, const MomentSequence& ms) {
    const auto scaled = scaled_for_psd(ms);
    for (int s = 1; s <= 2; ++s) {
        if (ms.order() < std::size_t(2 * s)) break;
        const auto rep = check_hamburger(scaled, s);
        r.feasibility.push_back({s, rep.feasible, rep.min_eigenvalue, strong_duality_holds(scaled, s)});
    }
    auto attempt = [&](int level, auto&& fn) {
        try {
            r.bounds.push_back(fn());
        } catch (const Error& e) {
            r.diagnostics.push_back("level " + std::to_string(level) + " bounds: " + e.what());
        }
    };
    if (ms.order() >= 3) attempt(1, [&] { return bounds_s1(ms); });
    if (ms.order() >= 5) attempt(2, [&] { return bounds_s2(ms); });
    for (const auto& b : r.bounds)
        if (!b.diagnostic.empty()) r.diagnostics.push_back("level " + std::to_string(b.level) + " bounds: " + b.diagnostic);
}

void add_queries(AnalysisReport& r, const MomentSequence& ms, const AnalysisConfig& config,
                 const SpectrumSummary* spectrum) {
    for (const auto& q : config.queries) {
        EigencountRecord rec;
        rec.target = q.target;
        rec.omega = q.omega;
        rec.k = q.k;
        try {
            const auto res = eigencount_upper(ms, q);
            rec.z_d = res.z_d;
            rec.y = res.y;
            rec.status = std::string(to_string(res.status));
        } catch (const Error& e) {
            rec.status = "error";
            r.diagnostics.push_back(std::string("eigencount: ") + e.what());
        }
        if (spectrum) rec.exact_fraction = spectral_fraction(*spectrum, q.target.lo, q.target.hi);
        r.eigencount.push_back(std::move(rec));
    }
}

void require_agreement(const MomentSequence& a, const MomentSequence& b) {
    const std::size_t k = std::min(a.order(), b.order());
    for (std::size_t i = 0; i <= k; ++i) {
        const double tol = 1e-9 * std::max({std::abs(a[i]), std::abs(b[i]), 1.0});
        if (std::abs(a[i] - b[i]) > tol)
            throw ConsistencyError("moments", std::string("moment m") + std::to_string(i) + " differs between " +
                                                  std::string(to_string(a.source())) + " and " +
                                                  std::string(to_string(b.source())) + " routes");
    }
}

AnalysisReport start_report(GraphMeta meta, const AnalysisConfig& config) {
    AnalysisReport r;
    r.meta = std::move(meta);
    r.provenance.config = config_json(config);
    r.provenance.omega_note = kOmegaNote;
    if (config.timestamp) r.provenance.timestamp = now_iso8601();
    return r;
}

} // namespace

const SupportBounds* AnalysisReport::bound(int level) const {
    for (const auto& b : bounds)
        if (b.level == level) return &b;
    return nullptr;
}

AnalysisReport analyze_graph(const Graph& g, const std::string& source, const AnalysisConfig& config) {
    auto r = start_report({std::int64_t(g.node_count()), std::int64_t(g.edge_count()), source}, config);
    if (g.node_count() == 0) throw DomainError("graph-core", "graph has no nodes");

    const auto census = node_census(g, config.threads);
    r.aggregates = aggregates(census);
    const auto from_census = moments_from_census(census);
    const auto from_walks = moments_from_walks(g, 5, config.threads);
    if (from_census.numerators() != from_walks.numerators())
        throw ConsistencyError("moments", "census and walk moment numerators differ");
    r.moments = {from_census, from_walks};

    std::optional<SpectrumSummary> spectrum;
    if (g.node_count() <= config.spectrum_cap) {
        spectrum = compute_spectrum(g, {config.spectrum_cap, 8});
        require_agreement(from_census, spectrum->moments);
        r.moments.push_back(spectrum->moments);
        r.spectrum = SpectrumRecord{spectrum->rho, spectrum->lambda_min,
                                    config.keep_eigenvalues ? spectrum->eigenvalues : std::vector<double>{}};
    } else {
        r.diagnostics.push_back("spectrum skipped: " + std::to_string(g.node_count()) + " nodes exceed the cap of " +
                                std::to_string(config.spectrum_cap));
    }

    add_bounds(r, from_census);
    r.estimators = estimate(g, census);
    add_queries(r, from_census, config, spectrum ? &*spectrum : nullptr);
    return r;
}

AnalysisReport analyze_moments(const MomentSequence& ms, const std::string& source, const AnalysisConfig& config) {
    auto r = start_report({std::int64_t(ms.node_count()), -1, source}, config);
    r.moments = {ms};
    add_bounds(r, ms);
    add_queries(r, ms, config, nullptr);
    return r;
}

std::optional<double> pearson(std::span<const std::optional<double>> x, std::span<const std::optional<double>> y) {
    std::vector<double> a, b;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
        if (x[i] && y[i]) {
            a.push_back(*x[i]);
            b.push_back(*y[i]);
        }
    if (a.size() < 2) return std::nullopt;
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / double(a.size());
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / double(b.size());
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return std::nullopt;
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

EgoBatch sample_ego(const Graph& g, const EgoSampleOptions& opt) {
    if (g.node_count() == 0) throw DomainError("graph-core", "graph has no nodes");
    if (opt.count == 0) throw DomainError(kModule, "count must be at least 1");
    EgoBatch batch;
    std::size_t count = opt.count;
    if (count > g.node_count()) {
        batch.warnings.push_back("count " + std::to_string(count) + " exceeds node count, capped at " +
                                 std::to_string(g.node_count()));
        count = g.node_count();
    }

    std::vector<NodeId> perm(g.node_count());
    std::iota(perm.begin(), perm.end(), NodeId{0});
    SeededRandom rng(opt.seed);
    for (std::size_t i = 0; i < count; ++i) std::swap(perm[i], perm[i + rng.below(perm.size() - i)]);

    batch.rows.resize(count);
    std::vector<std::string> notes(count);
    AnalysisConfig config;
    config.spectrum_cap = opt.spectrum_cap;
    parallel_for(count, opt.threads, [&](std::size_t i) {
        const NodeId root = perm[i];
        const auto ego = ego_subgraph(g, {root, opt.radius});
        const auto rep = analyze_graph(ego.graph, "", config);
        EgoRow& row = batch.rows[i];
        row.root = g.label(root);
        row.n = rep.meta.n;
        row.e = rep.meta.e;
        if (rep.spectrum) row.rho = rep.spectrum->rho;
        if (const auto* b = rep.bound(1)) row.beta1 = b->beta;
        if (const auto* b = rep.bound(2)) row.beta2 = b->beta;
        if (rep.estimators) {
            row.w = rep.estimators->w;
            row.lambda_a = rep.estimators->lambda_a;
            row.lambda_b = rep.estimators->lambda_b;
        }
        if (!rep.diagnostics.empty()) notes[i] = "root " + std::to_string(row.root) + ": " + rep.diagnostics.front();
    });
    for (auto& n : notes)
        if (!n.empty()) batch.warnings.push_back(std::move(n));

    std::vector<std::optional<double>> rho;
    for (const auto& r : batch.rows) rho.push_back(r.rho);
    auto column = [&](auto member) {
        std::vector<std::optional<double>> v;
        for (const auto& r : batch.rows) v.push_back(r.*member);
        return pearson(v, rho);
    };
    batch.correlations = {{"beta1", column(&EgoRow::beta1)},
                          {"beta2", column(&EgoRow::beta2)},
                          {"W", column(&EgoRow::w)},
                          {"lambda_a", column(&EgoRow::lambda_a)},
                          {"lambda_b", column(&EgoRow::lambda_b)}};
    return batch;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

} // namespace

void write_reports_csv(std::ostream& out, std::span<const AnalysisReport> reports) {
    out << "source,n,e,m2,m3,m4,m5,alpha1,beta1,alpha2,beta2,rho,lambda_min,u1,u2,W,lambda_a,lambda_b\n";
    for (const auto& r : reports) {
        std::vector<std::string> row{csv_escape(r.meta.source), std::to_string(r.meta.n),
                                     r.meta.e >= 0 ? std::to_string(r.meta.e) : std::string()};
        for (std::size_t k = 2; k <= 5; ++k)
            row.push_back(!r.moments.empty() && r.moments.front().order() >= k ? format_double(r.moments.front()[k])
                                                                               : std::string());
        for (int level = 1; level <= 2; ++level) {
            const auto* b = r.bound(level);
            row.push_back(b ? format_double(b->alpha) : std::string());
            row.push_back(b ? format_double(b->beta) : std::string());
        }
        row.push_back(r.spectrum ? format_double(r.spectrum->rho) : std::string());
        row.push_back(r.spectrum ? format_double(r.spectrum->lambda_min) : std::string());
        const EstimatorReport est = r.estimators.value_or(EstimatorReport{});
        for (const auto* v : {&est.u1, &est.u2, &est.w, &est.lambda_a, &est.lambda_b}) row.push_back(cell(*v));
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

void write_ego_csv(std::ostream& out, const EgoBatch& batch) {
    out << "root,n,e,rho,beta1,beta2,W,lambda_a,lambda_b\n";
    for (const auto& r : batch.rows)
        out << r.root << ',' << r.n << ',' << r.e << ',' << cell(r.rho) << ',' << cell(r.beta1) << ','
            << cell(r.beta2) << ',' << cell(r.w) << ',' << cell(r.lambda_a) << ',' << cell(r.lambda_b) << '\n';
}

void to_json(nlohmann::json& j, const SupportBounds& b) {
    j = nlohmann::json{{"level", b.level},
                       {"alpha", b.alpha},
                       {"beta", b.beta},
                       {"method", to_string(b.method)},
                       {"residual", b.residual},
                       {"bracket_lo", b.bracket_lo},
                       {"bracket_hi", b.bracket_hi},
                       {"diagnostic", b.diagnostic}};
}

void from_json(const nlohmann::json& j, SupportBounds& b) {
    b.level = j.at("level").get<int>();
    b.alpha = j.at("alpha").get<double>();
    b.beta = j.at("beta").get<double>();
    const auto method = j.value("method", std::string("closed_form"));
    if (method != "closed_form" && method != "bisection") throw ParseError(kModule, "unknown bound method '" + method + "'");
    b.method = method == "bisection" ? BoundMethod::bisection : BoundMethod::closed_form;
    b.residual = j.value("residual", 0.0);
    b.bracket_lo = j.value("bracket_lo", 0.0);
    b.bracket_hi = j.value("bracket_hi", 0.0);
    b.diagnostic = j.value("diagnostic", std::string());
}

void to_json(nlohmann::json& j, const AnalysisReport& r) {
    j = nlohmann::json::object();
    j["schema_version"] = r.schema_version;
    j["graph"] = {{"n", r.meta.n}, {"e", r.meta.e}, {"source", r.meta.source}};
    put_optional(j, "aggregates", r.aggregates);
    j["moments"] = r.moments;
    auto& feas = j["feasibility"] = nlohmann::json::array();
    for (const auto& f : r.feasibility)
        feas.push_back({{"level", f.level},
                        {"feasible", f.feasible},
                        {"min_eigenvalue", f.min_eigenvalue},
                        {"strong_duality", f.strong_duality}});
    j["bounds"] = r.bounds;
    put_optional(j, "estimators", r.estimators);
    if (r.spectrum) {
        j["spectrum"] = {{"rho", r.spectrum->rho}, {"lambda_min", r.spectrum->lambda_min}};
        if (!r.spectrum->eigenvalues.empty()) j["spectrum"]["eigenvalues"] = r.spectrum->eigenvalues;
    } else {
        j["spectrum"] = nullptr;
    }
    auto& ec = j["eigencount"] = nlohmann::json::array();
    for (const auto& e : r.eigencount) {
        nlohmann::json item{{"target", {e.target.lo, e.target.hi}},
                            {"omega", {e.omega.lo, e.omega.hi}},
                            {"k", e.k},
                            {"z_d", e.z_d},
                            {"y", e.y},
                            {"status", e.status}};
        put_optional(item, "exact_fraction", e.exact_fraction);
        ec.push_back(std::move(item));
    }
    j["provenance"] = {{"version", r.provenance.version},
                       {"config", r.provenance.config},
                       {"omega_note", r.provenance.omega_note}};
    if (r.provenance.timestamp) j["provenance"]["timestamp"] = *r.provenance.timestamp;
    j["diagnostics"] = r.diagnostics;
}

void from_json(const nlohmann::json& j, AnalysisReport& r) {
    if (!j.is_object()) throw ParseError(kModule, "report must be a JSON object");
    r = AnalysisReport{};
    r.schema_version = j.value("schema_version", kReportSchemaVersion);
    const auto& g = j.at("graph");
    r.meta = {g.at("n").get<std::int64_t>(), g.at("e").get<std::int64_t>(), g.value("source", std::string())};
    r.aggregates = get_optional<CensusAggregates>(j, "aggregates");
    if (j.contains("moments")) r.moments = j.at("moments").get<std::vector<MomentSequence>>();
    if (j.contains("feasibility"))
        for (const auto& f : j.at("feasibility"))
            r.feasibility.push_back({f.at("level").get<int>(), f.at("feasible").get<bool>(),
                                     f.at("min_eigenvalue").get<double>(), f.value("strong_duality", false)});
    if (j.contains("bounds")) r.bounds = j.at("bounds").get<std::vector<SupportBounds>>();
    r.estimators = get_optional<EstimatorReport>(j, "estimators");
    if (j.contains("spectrum") && !j.at("spectrum").is_null()) {
        const auto& s = j.at("spectrum");
        r.spectrum = SpectrumRecord{s.at("rho").get<double>(), s.at("lambda_min").get<double>(),
                                    s.value("eigenvalues", std::vector<double>{})};
    }
    if (j.contains("eigencount"))
        for (const auto& e : j.at("eigencount")) {
            EigencountRecord rec;
            const auto t = e.at("target").get<std::vector<double>>();
            const auto o = e.at("omega").get<std::vector<double>>();
            if (t.size() != 2 || o.size() != 2) throw ParseError(kModule, "eigencount intervals need two endpoints");
            rec.target = {t[0], t[1]};
            rec.omega = {o[0], o[1]};
            rec.k = e.at("k").get<int>();
            rec.z_d = e.at("z_d").get<double>();
            rec.y = e.value("y", std::vector<double>{});
            rec.status = e.value("status", std::string());
            rec.exact_fraction = get_optional<double>(e, "exact_fraction");
            r.eigencount.push_back(std::move(rec));
        }
    if (j.contains("provenance")) {
        const auto& p = j.at("provenance");
        r.provenance.version = p.value("version", std::string());
        r.provenance.config = p.value("config", nlohmann::json::object());
        r.provenance.omega_note = p.value("omega_note", std::string());
        r.provenance.timestamp = get_optional<std::string>(p, "timestamp");
    }
    r.diagnostics = j.value("diagnostics", std::vector<std::string>{});
}

void to_json(nlohmann::json& j, const EgoBatch& b) {
    j = nlohmann::json::object();
    auto& rows = j["rows"] = nlohmann::json::array();
    for (const auto& r : b.rows) {
        nlohmann::json item{{"root", r.root}, {"n", r.n}, {"e", r.e}};
        put_optional(item, "rho", r.rho);
        put_optional(item, "beta1", r.beta1);
        put_optional(item, "beta2", r.beta2);
        put_optional(item, "W", r.w);
        put_optional(item, "lambda_a", r.lambda_a);
        put_optional(item, "lambda_b", r.lambda_b);
        rows.push_back(std::move(item));
    }
    auto& corr = j["correlations_with_rho"] = nlohmann::json::object();
    for (const auto& [name, v] : b.correlations) put_optional(corr, name.c_str(), v);
    j["warnings"] = b.warnings;
}

} // namespace moment_bounds
