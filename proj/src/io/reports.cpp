#include "io/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "analysis/entangle.hpp"
#include "common/error.hpp"
#include "json.hpp"
#include "model/operators.hpp"

namespace resonet {

namespace {

using ordered_json = nlohmann::ordered_json;

// JSON cannot carry NaN; report it as null.
ordered_json json_number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

ordered_json comparison_json(const ReducedComparison& cmp) {
    ordered_json j;
    j["concurrence"] = json_number(cmp.concurrence_eff);
    j["concurrence_deviation"] = json_number(cmp.concurrence_deviation);
    j["max_population_deviation"] = json_number(cmp.max_population_deviation);
    j["max_coherence_deviation"] = json_number(cmp.max_coherence_deviation);
    j["state_distance"] = json_number(cmp.state_distance);
    return j;
}

}  // namespace

std::string format_full(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17e", value);
    return buffer;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    require(!path.empty(), ErrorCode::InvalidArgument, "write: empty output path");
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(out.good(), ErrorCode::InvalidArgument, "write: cannot open " + tmp);
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        require(out.good(), ErrorCode::InvalidArgument, "write: failed writing " + tmp);
    }
    require(std::rename(tmp.c_str(), path.c_str()) == 0, ErrorCode::InvalidArgument,
            "write: cannot rename " + tmp + " to " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::InvalidArgument, "read: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string run_manifest_json(const RunManifest& manifest) {
    ordered_json j;
    j["command"] = manifest.command;
    j["scenario_hash"] = manifest.scenario_hash;
    j["seed"] = manifest.seed;
    j["tool_version"] = manifest.tool_version;
    j["wall_seconds"] = manifest.wall_seconds;
    j["outputs"] = manifest.outputs;
    return j.dump(2) + "\n";
}

std::string steady_report_json(const Topology& topology, const SteadyStateResult& result,
                               const std::vector<std::pair<int, int>>& pairs) {
    const int n = topology.node_count();
    const SiteOperators site = build_site_operators(n);
    require(result.rho.rows() == site.dim, ErrorCode::Dimension,
            "steady report: state does not match the topology");

    ordered_json j;
    j["nodes"] = n;
    ordered_json real_rows = ordered_json::array();
    ordered_json imag_rows = ordered_json::array();
    for (std::size_t r = 0; r < result.rho.rows(); ++r) {
        ordered_json re_row = ordered_json::array();
        ordered_json im_row = ordered_json::array();
        for (std::size_t c = 0; c < result.rho.cols(); ++c) {
            re_row.push_back(result.rho(r, c).real());
            im_row.push_back(result.rho(r, c).imag());
        }
        real_rows.push_back(std::move(re_row));
        imag_rows.push_back(std::move(im_row));
    }
    j["rho"]["real"] = std::move(real_rows);
    j["rho"]["imag"] = std::move(imag_rows);
    j["residual"] = result.residual;
    j["uniqueness_gap"] = result.uniqueness_gap;
    j["min_eigenvalue"] = result.min_eigenvalue;

    ordered_json pair_list = ordered_json::array();
    for (const auto& [a, b] : pairs) {
        require(a >= 0 && b >= 0 && a < n && b < n && a != b, ErrorCode::InvalidArgument,
                "steady report: pair indices out of range");
        ordered_json entry;
        entry["nodes"] = {a + 1, b + 1};
        entry["concurrence"] = concurrence(partial_trace_pair(result.rho, n, a, b));
        try {
            entry["cross_correlation"] = cross_correlation(result.rho, site, a, b);
            entry["cross_correlation_status"] = "ok";
        } catch (const Error& e) {
            entry["cross_correlation"] = nullptr;
            entry["cross_correlation_status"] = error_code_label(e.code());
        }
        pair_list.push_back(std::move(entry));
    }
    j["pairs"] = std::move(pair_list);

    ordered_json facts = ordered_json::array();
    if (n == 3) {
        for (int third = 0; third < 3; ++third) {
            const FactorizationDiagnostic d = factorization_diagnostic(result.rho, n, third);
            ordered_json entry;
            entry["node"] = third + 1;
            entry["purity"] = d.purity;
            entry["ground_fidelity"] = d.ground_fidelity;
            facts.push_back(std::move(entry));
        }
    }
    j["factorization"] = std::move(facts);
    return j.dump(2) + "\n";
}

std::string optimize_report_json(const std::vector<FreeParam>& params,
                                 const OptimizeOutcome& outcome, int pair_first, int pair_second) {
    require(params.size() == outcome.best_params.size(), ErrorCode::Dimension,
            "optimize report: parameter list does not match the outcome");
    ordered_json j;
    j["pair"] = {pair_first + 1, pair_second + 1};
    ordered_json best;
    best["value"] = outcome.best_value;
    best["restart"] = outcome.best_restart;
    ordered_json plist = ordered_json::array();
    for (std::size_t i = 0; i < params.size(); ++i) {
        ordered_json entry;
        entry["name"] = free_param_label(params[i]);
        entry["value"] = outcome.best_params[i];
        plist.push_back(std::move(entry));
    }
    best["parameters"] = std::move(plist);
    j["best"] = std::move(best);
    j["evaluations"] = outcome.evaluations;
    j["failed_points"] = outcome.failed_points;
    j["restart_values"] = outcome.restart_values;
    return j.dump(2) + "\n";
}

namespace {

void reject_unknown_keys(const ordered_json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        require(allowed.count(it.key()) == 1, ErrorCode::Parse,
                "unknown key '" + it.key() + "' in " + where);
}

double spec_number(const ordered_json& obj, const char* key, const std::string& where) {
    require(obj.contains(key), ErrorCode::Parse,
            "missing required key '" + std::string(key) + "' in " + where);
    const auto& v = obj.at(key);
    require(v.is_number(), ErrorCode::Parse,
            "key '" + std::string(key) + "' in " + where + " must be a number");
    const double d = v.get<double>();
    require(std::isfinite(d), ErrorCode::Parse,
            "key '" + std::string(key) + "' in " + where + " must be finite");
    return d;
}

// 1-based link reference -> 0-based index, bounds-checked.
std::size_t spec_link(const ordered_json& obj, const char* key, std::size_t n_links,
                      const std::string& where) {
    require(obj.contains(key) && obj.at(key).is_number_integer(), ErrorCode::Parse,
            "key '" + std::string(key) + "' in " + where + " must be a link index");
    const long long raw = obj.at(key).get<long long>();
    require(raw >= 1 && raw <= static_cast<long long>(n_links), ErrorCode::Parse,
            where + ": link index " + std::to_string(raw) + " out of range");
    return static_cast<std::size_t>(raw - 1);
}

void spec_bounds(const ordered_json& obj, FreeParam& param, const std::string& where) {
    param.lo = spec_number(obj, "lo", where);
    param.hi = spec_number(obj, "hi", where);
    require(param.lo < param.hi, ErrorCode::Parse, where + ": lo must be below hi");
}

}  // namespace

OptimizeSpecData parse_optimize_spec_json(const std::string& text, const Topology& scenario) {
    ordered_json doc = ordered_json::parse(text, nullptr, false);
    require(!doc.is_discarded(), ErrorCode::Parse, "optimize spec: invalid JSON");
    require(doc.is_object(), ErrorCode::Parse, "optimize spec: top level must be an object");
    reject_unknown_keys(doc, {"restarts", "seed", "max_evaluations", "pair", "free"},
                        "optimize spec");

    OptimizeSpecData spec;
    spec.scenario = scenario;
    const std::size_t n_links = scenario.mode == TopologyMode::Physical
                                    ? scenario.physical_links.size()
                                    : scenario.links.size();

    if (doc.contains("restarts")) {
        require(doc["restarts"].is_number_integer(), ErrorCode::Parse,
                "optimize spec: restarts must be an integer");
        spec.restarts = doc["restarts"].get<int>();
        require(spec.restarts >= 1, ErrorCode::Parse, "optimize spec: restarts must be >= 1");
    }
    if (doc.contains("seed")) {
        require(doc["seed"].is_number_unsigned(), ErrorCode::Parse,
                "optimize spec: seed must be a nonnegative integer");
        spec.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("max_evaluations")) {
        require(doc["max_evaluations"].is_number_integer() &&
                    doc["max_evaluations"].get<long long>() >= 1,
                ErrorCode::Parse, "optimize spec: max_evaluations must be a positive integer");
        spec.nm.max_evaluations = doc["max_evaluations"].get<std::size_t>();
    }
    if (doc.contains("pair")) {
        const auto& jp = doc["pair"];
        require(jp.is_array() && jp.size() == 2 && jp[0].is_number_integer() &&
                    jp[1].is_number_integer(),
                ErrorCode::Parse, "optimize spec: pair must be an array of two node indices");
        const int a = jp[0].get<int>();
        const int b = jp[1].get<int>();
        const int n = scenario.node_count();
        require(a >= 1 && a <= n && b >= 1 && b <= n && a != b, ErrorCode::Parse,
                "optimize spec: pair indices must name two distinct nodes");
        spec.pair_first = a - 1;
        spec.pair_second = b - 1;
    }

    require(doc.contains("free") && doc["free"].is_array() && !doc["free"].empty(),
            ErrorCode::Parse, "optimize spec: 'free' must be a non-empty array");
    for (std::size_t i = 0; i < doc["free"].size(); ++i) {
        const auto& jf = doc["free"][i];
        const std::string where = "free[" + std::to_string(i + 1) + "]";
        require(jf.is_object(), ErrorCode::Parse, where + " must be an object");
        require(jf.contains("kind") && jf.at("kind").is_string(), ErrorCode::Parse,
                where + ": missing string 'kind'");
        const std::string kind = jf.at("kind").get<std::string>();

        FreeParam param;
        if (kind == "amplitude") {
            reject_unknown_keys(jf, {"kind", "link", "lo", "hi"}, where);
            param.kind = FreeParamKind::Amplitude;
            param.link = spec_link(jf, "link", n_links, where);
            spec_bounds(jf, param, where);
        } else if (kind == "amplitude_pair") {
            reject_unknown_keys(jf, {"kind", "link", "tie_link", "tie_factor", "lo", "hi"}, where);
            param.kind = FreeParamKind::AmplitudePair;
            param.link = spec_link(jf, "link", n_links, where);
            param.tie_link = spec_link(jf, "tie_link", n_links, where);
            require(param.tie_link != param.link, ErrorCode::Parse,
                    where + ": tie_link must differ from link");
            if (jf.contains("tie_factor")) param.tie_factor = spec_number(jf, "tie_factor", where);
            spec_bounds(jf, param, where);
        } else if (kind == "phase") {
            reject_unknown_keys(jf, {"kind", "link"}, where);
            param.kind = FreeParamKind::Phase;
            param.link = spec_link(jf, "link", n_links, where);
        } else if (kind == "y") {
            reject_unknown_keys(jf, {"kind", "link", "lo", "hi"}, where);
            param.kind = FreeParamKind::YLink;
            param.link = spec_link(jf, "link", n_links, where);
            spec_bounds(jf, param, where);
        } else if (kind == "y_common") {
            reject_unknown_keys(jf, {"kind", "lo", "hi"}, where);
            param.kind = FreeParamKind::YCommon;
            spec_bounds(jf, param, where);
        } else if (kind == "z") {
            reject_unknown_keys(jf, {"kind", "link", "lo", "hi"}, where);
            param.kind = FreeParamKind::ZLink;
            param.link = spec_link(jf, "link", n_links, where);
            spec_bounds(jf, param, where);
            require(param.lo >= 1.0, ErrorCode::Parse, where + ": z bounds must be >= 1");
        } else if (kind == "gamma_ratio") {
            reject_unknown_keys(jf, {"kind", "link", "ref_link", "lo", "hi"}, where);
            param.kind = FreeParamKind::GammaRatio;
            param.link = spec_link(jf, "link", n_links, where);
            param.ref_link = spec_link(jf, "ref_link", n_links, where);
            spec_bounds(jf, param, where);
            require(param.lo > 0.0, ErrorCode::Parse, where + ": ratio bounds must be positive");
        } else {
            fail(ErrorCode::Parse, where + ": unknown kind '" + kind + "'");
        }
        spec.free_params.push_back(param);
    }
    return spec;
}

std::string phase_sweep_csv(const PhaseSweepResult& result) {
    std::string out = "phi_1,phi_3,concurrence,cross_correlation,status\n";
    for (const PhaseSweepCell& cell : result.cells) {
        out += format_full(cell.phi_a);
        out += ',';
        out += format_full(cell.phi_b);
        out += ',';
        out += format_full(cell.concurrence);
        out += ',';
        out += format_full(cell.cross_correlation);
        out += ',';
        out += cell.status;
        out += '\n';
    }
    return out;
}

std::string ratio_scan_csv(const RatioScanResult& result) {
    std::string out = "theta,best_concurrence,best_magnitude,status\n";
    for (const RatioScanPoint& point : result.points) {
        out += format_full(point.theta);
        out += ',';
        out += format_full(point.best_concurrence);
        out += ',';
        out += format_full(point.best_magnitude);
        out += ',';
        out += point.status;
        out += '\n';
    }
    return out;
}

std::string z_sweep_csv(const ZSweepResult& result) {
    std::string out = "config,z,concurrence,side_amplitude,middle_amplitude,y,status\n";
    for (const ZSweepPoint& point : result.points) {
        out += point.config;
        out += ',';
        out += format_full(point.z);
        out += ',';
        out += format_full(point.concurrence);
        out += ',';
        out += format_full(point.side_amplitude);
        out += ',';
        out += format_full(point.middle_amplitude);
        out += ',';
        out += format_full(point.y_value);
        out += ',';
        out += point.status;
        out += '\n';
    }
    return out;
}

std::string elimination_report_json(const EliminationReport& report) {
    ordered_json j;
    j["nodes"] = report.n_nodes;
    j["links"] = report.n_links;
    j["n_max"] = report.n_max;
    j["dimension"] = report.dim;
    j["pair"] = {report.pair_first + 1, report.pair_second + 1};
    j["scale_separation"] = json_number(report.scale_separation);
    j["deviation_limit"] = report.deviation_limit;

    ordered_json steady;
    steady["residual"] = json_number(report.residual);
    steady["initial_state_agreement"] = json_number(report.initial_state_agreement);
    steady["uniqueness_ok"] = report.uniqueness_ok;
    steady["direct_solve_distance"] =
        report.direct_solve_distance < 0.0 ? ordered_json(nullptr)
                                           : json_number(report.direct_solve_distance);
    steady["max_photon_number"] = json_number(report.max_photon_number);
    steady["photon_ok"] = report.photon_ok;
    j["steady_state"] = std::move(steady);

    j["truncation"] = {{"shift", json_number(report.truncation_shift)},
                       {"ok", report.truncation_ok}};

    ordered_json joint;
    joint["concurrence"] = json_number(report.concurrence_full);
    joint["populations"] = report.populations_full;
    j["joint_model"] = std::move(joint);

    ordered_json reduced;
    reduced["as_derived"] = comparison_json(report.mapped);
    reduced["with_induced_shifts"] = comparison_json(report.shifted);
    j["reduced_model"] = std::move(reduced);

    j["best_deviation"] = json_number(report.best_deviation);
    j["deviation_ok"] = report.deviation_ok;
    j["passed"] = report.passed;
    return j.dump(2) + "\n";
}

}  // namespace resonet
