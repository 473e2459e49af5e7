#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "numeric/matrix.hpp"

namespace resonet {

// A network is a set of two-level emitter nodes connected by driven, lossy
// waveguide links. Physical mode carries raw waveguide parameters; effective
// mode carries the reduced link parameters (Gamma, x, y) obtained after the
// waveguides are adiabatically eliminated.
enum class TopologyMode { Physical, Effective };

struct NodeParams {
    double omega_p = 0.0;  // transition angular frequency (Hz)
    double gamma = 0.0;    // emitter decay rate (Hz), amplitude convention
};

struct PhysicalLink {
    std::vector<int> endpoints;  // 0-based node indices, 1 or 2 entries
    double J = 0.0;              // emitter-waveguide coupling (Hz)
    double alpha = 0.0;          // drive amplitude (Hz)
    double phi = 0.0;            // drive phase (rad)
    double omega_c = 0.0;        // waveguide mode frequency (Hz)
    double kappa = 0.0;          // waveguide decay rate (Hz), amplitude convention
};

struct EffectiveLink {
    std::vector<int> endpoints;  // 0-based node indices, 1 or 2 entries
    double Gamma = 0.0;          // induced collective decay rate (Hz)
    cplx x = cplx(0.0, 0.0);     // dimensionless effective drive
    double y = 0.0;              // dimensionless coherent coupling (0 for 1-endpoint links)
};

struct Topology {
    TopologyMode mode = TopologyMode::Effective;
    std::vector<NodeParams> nodes;
    std::vector<PhysicalLink> physical_links;  // populated in physical mode
    std::vector<EffectiveLink> links;          // populated in effective mode
    double omega_d = 0.0;                      // drive frequency (Hz), physical mode
    std::vector<double> detunings;             // optional per-node detuning term (Hz), effective mode

    // Bookkeeping for set_z consistency checks; never serialized.
    std::vector<bool> gamma_constrained;

    int node_count() const { return static_cast<int>(nodes.size()); }
};

// Structural validation shared by parsing and programmatic construction.
// Throws InvalidArgument / Dimension on violations.
void validate_topology(const Topology& topology);

// Physical -> effective parameter map. For each link, with the waveguide
// detuning Delta = omega_c - mean(omega_p over endpoints):
//   Gamma = J^2 kappa / (kappa^2 + Delta^2)
//   x     = alpha e^{i phi} (Delta - i kappa) / (J kappa)
//   y     = Delta / kappa   (two-endpoint links; 0 for single-endpoint links)
// Rotating-frame offsets (omega_p - omega_d) are dropped: the effective
// Hamiltonian carries no bare emitter term, and the optional per-node
// detunings knob remains available separately.
Topology derive_effective(const Topology& physical);

// Ready-to-run example networks:
//   config_i            two nodes, one driven connecting link
//   config_ii           two nodes, driven side links plus a strong undriven middle link
//   config_iii          three-node ring with a weak middle link (dimensionless defaults)
//   config_iii_optimal  the ring at its concurrence-optimal operating point (Hz units)
Topology scenario_catalog(const std::string& name);

// Sets the decay rate of the link's endpoint nodes so that the link's
// cooperativity parameter z = 1 + gamma/(2 Gamma_l) equals the requested
// value. If several set_z calls constrain the same node, the implied gammas
// must agree within 1e-6 relative.
Topology set_z(const Topology& topology, std::size_t link_index, double z);

// Reports z = 1 + mean(endpoint gamma)/(2 Gamma_l) for one link.
double link_z(const Topology& topology, std::size_t link_index);

// JSON scenario file support. The exact schema is documented in the README;
// unknown keys are rejected at every level. External node/link indices are
// 1-based.
Topology parse_scenario_json(const std::string& text);
std::string scenario_to_canonical_json(const Topology& topology);

// FNV-1a hash of the canonical serialization, as a fixed-width hex string.
std::string scenario_hash(const Topology& topology);

}  // namespace resonet
