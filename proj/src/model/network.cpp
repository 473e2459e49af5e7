#include "model/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

namespace resonet {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kMaxNodes = 5;

bool finite(double v) { return std::isfinite(v); }

void validate_endpoints(const std::vector<int>& endpoints, int n_nodes, const char* what) {
    require(endpoints.size() == 1 || endpoints.size() == 2, ErrorCode::InvalidArgument,
            std::string(what) + ": links need exactly 1 or 2 endpoints");
    for (int e : endpoints)
        require(e >= 0 && e < n_nodes, ErrorCode::InvalidArgument,
                std::string(what) + ": endpoint index out of range");
    if (endpoints.size() == 2)
        require(endpoints[0] != endpoints[1], ErrorCode::InvalidArgument,
                std::string(what) + ": endpoints must be distinct");
}

void reject_unknown_keys(const ordered_json& obj, const std::set<std::string>& allowed,
                         const char* where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        require(allowed.count(it.key()) == 1, ErrorCode::Parse,
                std::string("unknown key '") + it.key() + "' in " + where);
}

double get_number(const ordered_json& obj, const char* key, const char* where) {
    require(obj.contains(key), ErrorCode::Parse,
            std::string("missing required key '") + key + "' in " + where);
    const auto& v = obj.at(key);
    require(v.is_number(), ErrorCode::Parse,
            std::string("key '") + key + "' in " + where + " must be a number");
    double d = v.get<double>();
    require(finite(d), ErrorCode::Parse,
            std::string("key '") + key + "' in " + where + " must be finite");
    return d;
}

double get_number_or(const ordered_json& obj, const char* key, double fallback,
                     const char* where) {
    if (!obj.contains(key)) return fallback;
    return get_number(obj, key, where);
}

}  // namespace

void validate_topology(const Topology& topology) {
    int n = topology.node_count();
    require(n >= 1 && n <= kMaxNodes, ErrorCode::InvalidArgument,
            "topology: node count must be between 1 and 5");
    for (const NodeParams& node : topology.nodes) {
        require(finite(node.omega_p) && finite(node.gamma), ErrorCode::InvalidArgument,
                "topology: non-finite node parameter");
        require(node.gamma >= 0.0, ErrorCode::InvalidArgument, "topology: gamma must be >= 0");
    }

    if (topology.mode == TopologyMode::Physical) {
        require(topology.links.empty(), ErrorCode::InvalidArgument,
                "topology: physical mode must not carry effective links");
        require(topology.detunings.empty(), ErrorCode::InvalidArgument,
                "topology: detunings are an effective-mode feature");
        require(finite(topology.omega_d), ErrorCode::InvalidArgument,
                "topology: non-finite drive frequency");
        for (const PhysicalLink& link : topology.physical_links) {
            validate_endpoints(link.endpoints, n, "physical link");
            require(finite(link.J) && finite(link.alpha) && finite(link.phi) &&
                        finite(link.omega_c) && finite(link.kappa),
                    ErrorCode::InvalidArgument, "physical link: non-finite parameter");
            require(link.J >= 0.0, ErrorCode::InvalidArgument, "physical link: J must be >= 0");
            require(link.alpha >= 0.0, ErrorCode::InvalidArgument,
                    "physical link: alpha must be >= 0");
            require(link.kappa > 0.0, ErrorCode::InvalidArgument,
                    "physical link: kappa must be > 0");
        }
    } else {
        require(topology.physical_links.empty(), ErrorCode::InvalidArgument,
                "topology: effective mode must not carry physical links");
        require(topology.detunings.empty() ||
                    topology.detunings.size() == static_cast<std::size_t>(n),
                ErrorCode::InvalidArgument,
                "topology: detunings must list one value per node");
        for (double d : topology.detunings)
            require(finite(d), ErrorCode::InvalidArgument, "topology: non-finite detuning");
        for (const EffectiveLink& link : topology.links) {
            validate_endpoints(link.endpoints, n, "link");
            require(finite(link.Gamma) && finite(link.x.real()) && finite(link.x.imag()) &&
                        finite(link.y),
                    ErrorCode::InvalidArgument, "link: non-finite parameter");
            require(link.Gamma >= 0.0, ErrorCode::InvalidArgument, "link: Gamma must be >= 0");
            if (link.endpoints.size() == 1)
                require(link.y == 0.0, ErrorCode::InvalidArgument,
                        "link: y must be 0 for single-endpoint links");
        }
    }
}

Topology derive_effective(const Topology& physical) {
    require(physical.mode == TopologyMode::Physical, ErrorCode::InvalidArgument,
            "derive_effective: input must be a physical-mode topology");
    validate_topology(physical);

    Topology out;
    out.mode = TopologyMode::Effective;
    out.nodes = physical.nodes;
    out.detunings.clear();
    out.gamma_constrained.assign(physical.nodes.size(), false);

    for (const PhysicalLink& pl : physical.physical_links) {
        double mean_wp = 0.0;
        for (int e : pl.endpoints) mean_wp += physical.nodes[static_cast<std::size_t>(e)].omega_p;
        mean_wp /= static_cast<double>(pl.endpoints.size());
        const double delta = pl.omega_c - mean_wp;
        const double kappa = pl.kappa;

        EffectiveLink el;
        el.endpoints = pl.endpoints;
        if (pl.J == 0.0) {
            require(pl.alpha == 0.0, ErrorCode::DegenerateDenominator,
                    "derive_effective: drive on a link with J = 0 has no effective limit");
            el.Gamma = 0.0;
            el.x = cplx(0.0, 0.0);
        } else {
            el.Gamma = pl.J * pl.J * kappa / (kappa * kappa + delta * delta);
            el.x = pl.alpha * std::exp(cplx(0.0, pl.phi)) * cplx(delta, -kappa) / (pl.J * kappa);
        }
        el.y = (pl.endpoints.size() == 2) ? delta / kappa : 0.0;
        out.links.push_back(std::move(el));
    }

    validate_topology(out);
    return out;
}

Topology scenario_catalog(const std::string& name) {
    Topology t;
    t.mode = TopologyMode::Effective;
    if (name == "config_i") {
        t.nodes = {{0.0, 0.02}, {0.0, 0.02}};
        t.links = {{{0, 1}, 1.0, cplx(0.0, 0.0), 0.0}};
    } else if (name == "config_ii") {
        t.nodes = {{0.0, 1e8}, {0.0, 1e8}};
        t.links = {
            {{0}, 1.316e8, cplx(5.0, 0.0), 0.0},
            {{0, 1}, 1e10, cplx(0.0, 0.0), 0.0},
            {{1}, 1.316e8, cplx(-5.0, 0.0), 0.0},
        };
    } else if (name == "config_iii") {
        t.nodes = {{0.0, 0.02}, {0.0, 0.02}, {0.0, 0.02}};
        t.links = {
            {{0, 1}, 1.0, cplx(0.0, 0.0), 15.0},
            {{1, 2}, 1e-3, cplx(0.0, 0.0), 15.0},
            {{2, 0}, 1.0, cplx(0.0, 0.0), 15.0},
        };
    } else if (name == "config_iii_optimal") {
        t.nodes = {{0.0, 1e8}, {0.0, 1e8}, {0.0, 1e8}};
        t.links = {
            {{0, 1}, 4.42e8, cplx(1.82, 0.0), 15.0},
            {{1, 2}, 4.41e5, cplx(0.0, 0.0), 15.0},
            {{2, 0}, 4.42e8, cplx(-1.82, 0.0), 15.0},
        };
    } else {
        fail(ErrorCode::InvalidArgument, "scenario_catalog: unknown name '" + name + "'");
    }
    t.gamma_constrained.assign(t.nodes.size(), false);
    validate_topology(t);
    return t;
}

Topology set_z(const Topology& topology, std::size_t link_index, double z) {
    require(topology.mode == TopologyMode::Effective, ErrorCode::InvalidArgument,
            "set_z: requires an effective-mode topology");
    require(link_index < topology.links.size(), ErrorCode::InvalidArgument,
            "set_z: link index out of range");
    require(std::isfinite(z) && z >= 1.0, ErrorCode::InvalidArgument, "set_z: z must be >= 1");

    const EffectiveLink& link = topology.links[link_index];
    require(link.Gamma > 0.0, ErrorCode::InvalidArgument,
            "set_z: link has Gamma = 0, z is undefined");

    Topology out = topology;
    if (out.gamma_constrained.size() != out.nodes.size())
        out.gamma_constrained.assign(out.nodes.size(), false);

    const double gamma_new = 2.0 * link.Gamma * (z - 1.0);
    for (int e : link.endpoints) {
        auto idx = static_cast<std::size_t>(e);
        if (out.gamma_constrained[idx]) {
            const double old = out.nodes[idx].gamma;
            const double scale = std::max({std::abs(old), std::abs(gamma_new), 1e-300});
            require(std::abs(old - gamma_new) <= 1e-6 * scale, ErrorCode::InvalidArgument,
                    "set_z: conflicting z assignments constrain the same node decay rate");
        }
        out.nodes[idx].gamma = gamma_new;
        out.gamma_constrained[idx] = true;
    }
    return out;
}

double link_z(const Topology& topology, std::size_t link_index) {
    require(topology.mode == TopologyMode::Effective, ErrorCode::InvalidArgument,
            "link_z: requires an effective-mode topology");
    require(link_index < topology.links.size(), ErrorCode::InvalidArgument,
            "link_z: link index out of range");
    const EffectiveLink& link = topology.links[link_index];
    double mean_gamma = 0.0;
    for (int e : link.endpoints) mean_gamma += topology.nodes[static_cast<std::size_t>(e)].gamma;
    mean_gamma /= static_cast<double>(link.endpoints.size());
    if (link.Gamma == 0.0) {
        require(mean_gamma == 0.0, ErrorCode::DegenerateDenominator,
                "link_z: z is infinite for Gamma = 0 with nonzero gamma");
        return 1.0;
    }
    return 1.0 + mean_gamma / (2.0 * link.Gamma);
}

Topology parse_scenario_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const std::exception& e) {
        fail(ErrorCode::Parse, std::string("scenario: invalid JSON: ") + e.what());
    }
    require(doc.is_object(), ErrorCode::Parse, "scenario: top level must be a JSON object");
    reject_unknown_keys(doc, {"mode", "nodes", "links", "detunings", "omega_d"}, "scenario");

    require(doc.contains("mode") && doc.at("mode").is_string(), ErrorCode::Parse,
            "scenario: 'mode' must be \"physical\" or \"effective\"");
    const std::string mode = doc.at("mode").get<std::string>();
    require(mode == "physical" || mode == "effective", ErrorCode::Parse,
            "scenario: 'mode' must be \"physical\" or \"effective\"");

    Topology t;
    t.mode = (mode == "physical") ? TopologyMode::Physical : TopologyMode::Effective;

    require(doc.contains("nodes") && doc.at("nodes").is_array(), ErrorCode::Parse,
            "scenario: 'nodes' must be an array");
    for (const auto& jn : doc.at("nodes")) {
        require(jn.is_object(), ErrorCode::Parse, "scenario: each node must be an object");
        reject_unknown_keys(jn, {"omega_p", "gamma"}, "node");
        NodeParams node;
        node.omega_p = get_number_or(jn, "omega_p", 0.0, "node");
        node.gamma = get_number(jn, "gamma", "node");
        t.nodes.push_back(node);
    }
    const int n = t.node_count();
    require(n >= 1, ErrorCode::Parse, "scenario: at least one node required");

    require(doc.contains("links") && doc.at("links").is_array(), ErrorCode::Parse,
            "scenario: 'links' must be an array");
    for (const auto& jl : doc.at("links")) {
        require(jl.is_object(), ErrorCode::Parse, "scenario: each link must be an object");
        require(jl.contains("endpoints") && jl.at("endpoints").is_array(), ErrorCode::Parse,
                "link: 'endpoints' must be an array of 1-based node indices");
        std::vector<int> endpoints;
        for (const auto& je : jl.at("endpoints")) {
            require(je.is_number_integer(), ErrorCode::Parse,
                    "link: endpoints must be integers");
            int e = je.get<int>();
            require(e >= 1 && e <= n, ErrorCode::Parse,
                    "link: endpoint index out of range (indices are 1-based)");
            endpoints.push_back(e - 1);
        }
        if (t.mode == TopologyMode::Effective) {
            reject_unknown_keys(jl, {"endpoints", "Gamma", "x_re", "x_im", "y"}, "link");
            EffectiveLink link;
            link.endpoints = endpoints;
            link.Gamma = get_number(jl, "Gamma", "link");
            link.x = cplx(get_number_or(jl, "x_re", 0.0, "link"),
                          get_number_or(jl, "x_im", 0.0, "link"));
            link.y = get_number_or(jl, "y", 0.0, "link");
            t.links.push_back(std::move(link));
        } else {
            reject_unknown_keys(jl, {"endpoints", "J", "alpha", "phi", "omega_c", "kappa"},
                                "link");
            PhysicalLink link;
            link.endpoints = endpoints;
            link.J = get_number(jl, "J", "link");
            link.alpha = get_number_or(jl, "alpha", 0.0, "link");
            link.phi = get_number_or(jl, "phi", 0.0, "link");
            link.omega_c = get_number(jl, "omega_c", "link");
            link.kappa = get_number(jl, "kappa", "link");
            t.physical_links.push_back(std::move(link));
        }
    }

    if (doc.contains("detunings")) {
        require(t.mode == TopologyMode::Effective, ErrorCode::Parse,
                "scenario: 'detunings' is only valid in effective mode");
        require(doc.at("detunings").is_array(), ErrorCode::Parse,
                "scenario: 'detunings' must be an array");
        for (const auto& jd : doc.at("detunings")) {
            require(jd.is_number(), ErrorCode::Parse, "scenario: detunings must be numbers");
            t.detunings.push_back(jd.get<double>());
        }
    }
    if (doc.contains("omega_d")) {
        require(t.mode == TopologyMode::Physical, ErrorCode::Parse,
                "scenario: 'omega_d' is only valid in physical mode");
        t.omega_d = get_number(doc, "omega_d", "scenario");
    }

    t.gamma_constrained.assign(t.nodes.size(), false);
    try {
        validate_topology(t);
    } catch (const Error& e) {
        // Surface structural problems found in a file as parse failures.
        fail(ErrorCode::Parse, std::string("scenario: ") + e.what());
    }
    return t;
}

std::string scenario_to_canonical_json(const Topology& topology) {
    validate_topology(topology);
    ordered_json doc;
    doc["mode"] = (topology.mode == TopologyMode::Physical) ? "physical" : "effective";
    doc["nodes"] = ordered_json::array();
    for (const NodeParams& node : topology.nodes) {
        ordered_json jn;
        jn["omega_p"] = node.omega_p;
        jn["gamma"] = node.gamma;
        doc["nodes"].push_back(jn);
    }
    doc["links"] = ordered_json::array();
    if (topology.mode == TopologyMode::Effective) {
        for (const EffectiveLink& link : topology.links) {
            ordered_json jl;
            jl["endpoints"] = ordered_json::array();
            for (int e : link.endpoints) jl["endpoints"].push_back(e + 1);
            jl["Gamma"] = link.Gamma;
            jl["x_re"] = link.x.real();
            jl["x_im"] = link.x.imag();
            jl["y"] = link.y;
            doc["links"].push_back(jl);
        }
        if (!topology.detunings.empty()) doc["detunings"] = topology.detunings;
    } else {
        for (const PhysicalLink& link : topology.physical_links) {
            ordered_json jl;
            jl["endpoints"] = ordered_json::array();
            for (int e : link.endpoints) jl["endpoints"].push_back(e + 1);
            jl["J"] = link.J;
            jl["alpha"] = link.alpha;
            jl["phi"] = link.phi;
            jl["omega_c"] = link.omega_c;
            jl["kappa"] = link.kappa;
            doc["links"].push_back(jl);
        }
        doc["omega_d"] = topology.omega_d;
    }
    return doc.dump();
}

std::string scenario_hash(const Topology& topology) {
    const std::string text = scenario_to_canonical_json(topology);
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace resonet
