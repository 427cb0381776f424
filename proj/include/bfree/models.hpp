#ifndef BFREE_MODELS_HPP
#define BFREE_MODELS_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bfree/core.hpp"
#include "bfree/liouville.hpp"
#include "bfree/types.hpp"

namespace bfree {

/// Scalar and list parameters of a catalog or user model.
struct Parameters {
    std::map<std::string, double> scalars;
    std::map<std::string, std::vector<double>> lists;

    double scalar_or(const std::string& key, double fallback) const {
        auto it = scalars.find(key);
        return it == scalars.end() ? fallback : it->second;
    }
    std::vector<double> list_or(const std::string& key, std::vector<double> fallback) const {
        auto it = lists.find(key);
        return it == lists.end() ? fallback : it->second;
    }
};

enum class ModelKind { closed_bipartite, gksl };

/// Closed bipartite Hamiltonian model. Basis order puts the qubit index
/// slowest; subsystem observables feed the two energy curves.
struct ClosedModel {
    ComplexMatrix h0;
    ComplexMatrix hI;
    ComplexMatrix subsystem_h1;  // qubit-side energy observable
    ComplexMatrix subsystem_h2;  // field-side energy observable
};

struct BuiltModel {
    std::string name;
    ModelKind kind = ModelKind::closed_bipartite;
    Parameters parameters;  // defaults merged with overrides
    std::string basis_order;
    std::optional<ClosedModel> closed;
    std::optional<GkslSpec> gksl;

    /// State-space pair (a = -i h0, b = -i hI) for closed models, the
    /// vectorized GKSL pair otherwise.
    GeneratorPair generator() const;
};

std::vector<std::string> catalog_names();
bool is_catalog_model(const std::string& name);

/// One-line description of a catalog entry, including any caveat attached
/// to it.
std::string catalog_description(const std::string& name);

BuiltModel build(const std::string& name, const Parameters& overrides = {});

/// Machine-checkable structural claims about a catalog model, evaluated on the
/// default parameters. Consumed by the acceptance suite.
struct ExpectedFact {
    std::string description;
    std::function<bool()> check;
};

std::vector<ExpectedFact> expected_facts(const std::string& name);

// --- basis helpers -------------------------------------------------------

/// Product-basis index for one qubit (index slowest, 0 = spin up) and one
/// truncated mode.
Index qubit_fock_index(int sigma_up, int photon, int n_max);

/// Product-basis index for one qubit and two truncated modes.
Index qubit_two_mode_index(int sigma_up, int n1, int n2, int n_max);

/// Exact combinatorial frame of the excitation-number eigenspace N = n of the
/// two-mode model (dimension 2n+1). Requires n <= n_max - 1 so truncation
/// cannot deform the sector.
Subspace two_mode_number_sector(int n, int n_max);

}  // namespace bfree

#endif
