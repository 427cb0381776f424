#include "bfree/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bfree/numkernel.hpp"
#include "bfree/operators.hpp"

namespace bfree {

namespace {

int as_int(const Parameters& p, const std::string& key, int fallback) {
    return static_cast<int>(std::llround(p.scalar_or(key, static_cast<double>(fallback))));
}

Parameters merge(const Parameters& defaults, const Parameters& overrides) {
    Parameters out = defaults;
    for (const auto& [k, v] : overrides.scalars) out.scalars[k] = v;
    for (const auto& [k, v] : overrides.lists) out.lists[k] = v;
    return out;
}

Parameters defaults_for(const std::string& name) {
    Parameters p;
    if (name == "example1") {
        p.scalars = {{"omega", 1.0}, {"n_max", 20.0}};
    } else if (name == "example2") {
        p.scalars = {{"omega", 1.0}, {"omega0", 1.0}, {"gamma1", 3.0}, {"gamma2", 4.0},
                     {"n_max", 8.0}};
    } else if (name == "qubit_dephasing") {
        p.scalars = {{"omega", 1.0}, {"gamma", 1.0}, {"h0_axis_x", 0.0}};
    } else if (name == "weyl_qudit") {
        p.scalars = {{"d", 3.0}, {"omega", 1.0}};
        p.lists = {{"gamma_n", {0.5, 1.2}}, {"energies", {1.0, 2.0}}};
    } else if (name == "phase_damping") {
        p.scalars = {{"n_max", 12.0}, {"omega", 1.0}, {"Gamma", 0.7}};
    } else {
        throw ValidationError("unknown catalog model: " + name);
    }
    return p;
}

BuiltModel build_example1(const Parameters& p) {
    const double omega = p.scalar_or("omega", 1.0);
    const int n_max = as_int(p, "n_max", 20);
    const FockSpace space(n_max);
    const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix i_f = ComplexMatrix::Identity(n_max, n_max);

    BuiltModel model;
    model.name = "example1";
    model.kind = ModelKind::closed_bipartite;
    model.parameters = p;
    model.basis_order = "qubit_slowest";

    ClosedModel closed;
    closed.h0 = omega * tensor(i2, number_operator(space));
    const auto np = parity_number(space, /*with_qubit=*/true);
    closed.hI = (omega / 2.0) * np.parity * tensor(pauli(Pauli::z), i_f);
    closed.subsystem_h1 = (omega / 2.0) * pauli(Pauli::z);
    closed.subsystem_h2 = omega * number_operator(space);
    model.closed = std::move(closed);
    return model;
}

BuiltModel build_example2(const Parameters& p) {
    const double omega = p.scalar_or("omega", 1.0);
    const double omega0 = p.scalar_or("omega0", omega);
    if (omega0 != omega)
        throw ValidationError("example2: the model assumes resonance (omega0 = omega)");
    const double gamma1 = p.scalar_or("gamma1", 3.0);
    const double gamma2 = p.scalar_or("gamma2", 4.0);
    if (gamma1 < 0.0 || gamma2 < 0.0)
        throw ValidationError("example2: couplings must be nonnegative");
    const int n_max = as_int(p, "n_max", 8);
    const FockSpace space(n_max);
    const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix i_f = ComplexMatrix::Identity(n_max, n_max);
    const ComplexMatrix i_ff = ComplexMatrix::Identity(n_max * n_max, n_max * n_max);
    const ComplexMatrix a = annihilation(space);
    const ComplexMatrix num = number_operator(space);

    const ComplexMatrix a1 = tensor(i2, tensor(a, i_f));
    const ComplexMatrix a2 = tensor(i2, tensor(i_f, a));
    const ComplexMatrix sp = tensor(pauli(Pauli::plus), i_ff);
    const ComplexMatrix sm = tensor(pauli(Pauli::minus), i_ff);
    const ComplexMatrix sz = tensor(pauli(Pauli::z), i_ff);

    BuiltModel model;
    model.name = "example2";
    model.kind = ModelKind::closed_bipartite;
    model.parameters = p;
    model.basis_order = "qubit_slowest_mode1_mode2";

    ClosedModel closed;
    closed.h0 = omega * (a1.adjoint() * a1 + a2.adjoint() * a2) + (omega0 / 2.0) * sz;
    closed.hI = gamma1 * (a1.adjoint() * sm + a1 * sp) + gamma2 * (a2.adjoint() * sm + a2 * sp);
    closed.subsystem_h1 = (omega0 / 2.0) * pauli(Pauli::z);
    closed.subsystem_h2 = omega * (tensor(num, i_f) + tensor(i_f, num));
    model.closed = std::move(closed);
    return model;
}

BuiltModel build_qubit_dephasing(const Parameters& p) {
    const double omega = p.scalar_or("omega", 1.0);
    const double gamma = p.scalar_or("gamma", 1.0);
    if (gamma < 0.0) throw ValidationError("qubit_dephasing: gamma must be nonnegative");
    const bool axis_x = p.scalar_or("h0_axis_x", 0.0) != 0.0;

    BuiltModel model;
    model.name = "qubit_dephasing";
    model.kind = ModelKind::gksl;
    model.parameters = p;
    model.basis_order = "computational";

    GkslSpec spec;
    spec.h0 = omega * pauli(axis_x ? Pauli::x : Pauli::z);
    spec.noise_ops.push_back({pauli(Pauli::z), gamma});
    model.gksl = std::move(spec);
    return model;
}

BuiltModel build_weyl_qudit(const Parameters& p) {
    const int d = as_int(p, "d", 3);
    if (d < 2) throw ValidationError("weyl_qudit: d must be >= 2");
    const double omega = p.scalar_or("omega", 1.0);
    std::vector<double> def_energies(d - 1);
    for (int n = 1; n < d; ++n) def_energies[n - 1] = omega * n;
    const auto gammas = p.list_or("gamma_n", std::vector<double>(d - 1, 1.0));
    const auto energies = p.list_or("energies", def_energies);
    if (static_cast<int>(gammas.size()) != d - 1)
        throw ValidationError("weyl_qudit: gamma_n must have d-1 entries");
    if (static_cast<int>(energies.size()) != d - 1)
        throw ValidationError("weyl_qudit: energies must have d-1 entries");
    for (double g : gammas)
        if (g < 0.0) throw ValidationError("weyl_qudit: rates must be nonnegative");

    BuiltModel model;
    model.name = "weyl_qudit";
    model.kind = ModelKind::gksl;
    model.parameters = p;
    model.parameters.lists["gamma_n"] = gammas;
    model.parameters.lists["energies"] = energies;
    model.basis_order = "computational";

    GkslSpec spec;
    spec.h0 = ComplexMatrix::Zero(d, d);
    for (int n = 1; n < d; ++n) spec.h0(n, n) = energies[n - 1];
    for (int n = 1; n < d; ++n) spec.noise_ops.push_back({weyl(WeylIndex(d, n, 0)), gammas[n - 1]});
    model.gksl = std::move(spec);
    return model;
}

BuiltModel build_phase_damping(const Parameters& p) {
    const int n_max = as_int(p, "n_max", 12);
    const double omega = p.scalar_or("omega", 1.0);
    const double big_gamma = p.scalar_or("Gamma", 0.7);
    if (big_gamma < 0.0) throw ValidationError("phase_damping: Gamma must be nonnegative");
    const FockSpace space(n_max);

    BuiltModel model;
    model.name = "phase_damping";
    model.kind = ModelKind::gksl;
    model.parameters = p;
    model.basis_order = "fock";

    GkslSpec spec;
    spec.h0 = omega * number_operator(space);
    spec.noise_ops.push_back({number_operator(space), big_gamma});
    model.gksl = std::move(spec);
    return model;
}

}  // namespace

GeneratorPair BuiltModel::generator() const {
    if (kind == ModelKind::closed_bipartite) {
        GeneratorPair pair;
        pair.a = -kImag * closed->h0;
        pair.b = -kImag * closed->hI;
        pair.space_kind = SpaceKind::state_vector;
        return pair;
    }
    return vectorize_generator(*gksl);
}

std::vector<std::string> catalog_names() {
    return {"example1", "example2", "qubit_dephasing", "weyl_qudit", "phase_damping"};
}

bool is_catalog_model(const std::string& name) {
    const auto names = catalog_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::string catalog_description(const std::string& name) {
    if (name == "example1")
        return "Single truncated bosonic mode coupled to a two-level atom through a "
               "parity-conditioned splitting; free and interaction parts commute and the "
               "interaction has exactly two eigenvalues +-omega/2.";
    if (name == "example2")
        return "Two-mode Jaynes-Cummings model at resonance; the excitation number is "
               "conserved and each number sector of eigenvalue n is (2n+1)-dimensional.";
    if (name == "qubit_dephasing")
        return "Pure dephasing of a qubit, noise operator sigma_z at rate gamma. With "
               "h0 along z the diagonal mixtures are decoherence free. With h0 along x "
               "(h0_axis_x=1) the computed subspace is the span of the identity: the "
               "maximally mixed state survives the kernel chain as the one stationary "
               "state, and the projection heuristic returns it.";
    if (name == "weyl_qudit")
        return "Pure dephasing of a qudit driven by diagonal shift-and-phase unitaries; "
               "every convex combination of the basis projectors is decoherence free and "
               "the evolution is an entrywise Hadamard factor.";
    if (name == "phase_damping")
        return "Phase-damped truncated oscillator; populations are exactly conserved, "
               "coherences decay as exp(-(n-m)^2 Gamma t / 2) times the free phase.";
    throw ValidationError("unknown catalog model: " + name);
}

BuiltModel build(const std::string& name, const Parameters& overrides) {
    const Parameters p = merge(defaults_for(name), overrides);
    if (name == "example1") return build_example1(p);
    if (name == "example2") return build_example2(p);
    if (name == "qubit_dephasing") return build_qubit_dephasing(p);
    if (name == "weyl_qudit") return build_weyl_qudit(p);
    if (name == "phase_damping") return build_phase_damping(p);
    throw ValidationError("unknown catalog model: " + name);
}

Index qubit_fock_index(int sigma_up, int photon, int n_max) {
    if (photon < 0 || photon >= n_max) throw ValidationError("qubit_fock_index: photon out of range");
    return static_cast<Index>((sigma_up ? 0 : 1) * n_max + photon);
}

Index qubit_two_mode_index(int sigma_up, int n1, int n2, int n_max) {
    if (n1 < 0 || n1 >= n_max || n2 < 0 || n2 >= n_max)
        throw ValidationError("qubit_two_mode_index: photon numbers out of range");
    return static_cast<Index>(((sigma_up ? 0 : 1) * n_max + n1) * n_max + n2);
}

Subspace two_mode_number_sector(int n, int n_max) {
    if (n < 1) throw ValidationError("two_mode_number_sector: n must be >= 1");
    if (n > n_max - 1)
        throw ValidationError("two_mode_number_sector: need n <= n_max - 1 to avoid truncation");
    const Index ambient = 2 * static_cast<Index>(n_max) * n_max;
    ComplexMatrix frame = ComplexMatrix::Zero(ambient, 2 * n + 1);
    Index col = 0;
    for (int n1 = 0; n1 <= n; ++n1)  // spin down, n1 + n2 = n
        frame(qubit_two_mode_index(0, n1, n - n1, n_max), col++) = 1.0;
    for (int m1 = 0; m1 <= n - 1; ++m1)  // spin up, m1 + m2 = n - 1
        frame(qubit_two_mode_index(1, m1, n - 1 - m1, n_max), col++) = 1.0;
    return {ambient, std::move(frame)};
}

namespace {

using Checker = std::function<bool()>;

std::vector<ExpectedFact> facts_example1() {
    std::vector<ExpectedFact> facts;
    facts.push_back({"free and interaction parts commute",
                     [] {
                         const auto m = build("example1");
                         return (m.closed->h0 * m.closed->hI - m.closed->hI * m.closed->h0).norm() <=
                                1e-12;
                     }});
    facts.push_back({"interaction spectrum is exactly two clusters at +-omega/2",
                     [] {
                         const auto m = build("example1");
                         const double omega = m.parameters.scalar_or("omega", 1.0);
                         const auto dec = sector_decompose(m.closed->h0, m.closed->hI, 1e-10);
                         return dec.sectors.size() == 2 &&
                                std::abs(dec.eigenvalues[0] + omega / 2.0) <= 1e-10 &&
                                std::abs(dec.eigenvalues[1] - omega / 2.0) <= 1e-10;
                     }});
    facts.push_back(
        {"each sector is parity invariant and a photon-parity eigenspace",
         [] {
             const auto m = build("example1");
             const int n_max = as_int(m.parameters, "n_max", 20);
             const auto np = parity_number(FockSpace(n_max), true);
             const auto photon_np = parity_number(FockSpace(n_max), false);
             const ComplexMatrix photon_parity =
                 tensor(ComplexMatrix::Identity(2, 2), photon_np.parity);
             const auto dec = sector_decompose(m.closed->h0, m.closed->hI, 1e-10);
             for (std::size_t k = 0; k < dec.sectors.size(); ++k) {
                 const ComplexMatrix& f = dec.sectors[k].frame;
                 const ComplexMatrix pf = np.parity * f;
                 if ((pf - f * (f.adjoint() * pf)).norm() > 1e-10) return false;  // invariance
                 // alpha = -omega/2 sector holds even photon numbers, +omega/2 odd.
                 const double sign = dec.eigenvalues[k] < 0 ? 1.0 : -1.0;
                 if ((photon_parity * f - sign * f).norm() > 1e-10) return false;
             }
             return dec.sectors.size() == 2;
         }});
    facts.push_back(
        {"sector dimensions under truncation are 2*ceil(n_max/2) and 2*floor(n_max/2)",
         [] {
             const auto m = build("example1");
             const int n_max = as_int(m.parameters, "n_max", 20);
             const auto dec = sector_decompose(m.closed->h0, m.closed->hI, 1e-10);
             if (dec.sectors.size() != 2) return false;
             const Index even_count = (n_max + 1) / 2, odd_count = n_max / 2;
             return dec.sectors[0].dim() == 2 * even_count &&  // alpha = -omega/2
                    dec.sectors[1].dim() == 2 * odd_count;     // alpha = +omega/2
         }});
    facts.push_back(
        {"single-sector states evolve by the free propagator times a global phase, termwise",
         [] {
             const auto m = build("example1");
             const double omega = m.parameters.scalar_or("omega", 1.0);
             const int n_max = as_int(m.parameters, "n_max", 20);
             std::mt19937 rng(11);
             std::normal_distribution<double> dist;
             // Support on odd photon numbers 2n+1, n <= 5; both spins.
             ComplexVector psi = ComplexVector::Zero(2 * n_max);
             std::vector<std::pair<Index, int>> support;
             for (int n = 0; n <= 5; ++n) {
                 for (int up : {0, 1}) {
                     const Index idx = qubit_fock_index(up, 2 * n + 1, n_max);
                     psi[idx] = Complex(dist(rng), dist(rng));
                     support.emplace_back(idx, 2 * n + 1);
                 }
             }
             psi /= psi.norm();
             const ComplexMatrix h = m.closed->h0 + m.closed->hI;
             for (double t : {0.7, 3.3, 10.0}) {
                 const ComplexVector evolved = expm((-kImag * t * h).eval()) * psi;
                 for (const auto& [idx, photon] : support) {
                     const Complex expected =
                         std::exp(-kImag * (omega / 2.0) * t) *
                         std::exp(-kImag * (omega * photon) * t) * psi[idx];
                     if (std::abs(evolved[idx] - expected) > 1e-9) return false;
                 }
             }
             return true;
         }});
    facts.push_back(
        {"subsystem energies stay constant along sector trajectories",
         [] {
             const auto m = build("example1");
             const int n_max = as_int(m.parameters, "n_max", 20);
             std::mt19937 rng(12);
             std::normal_distribution<double> dist;
             ComplexVector psi = ComplexVector::Zero(2 * n_max);
             for (int n = 0; n <= 5; ++n)
                 for (int up : {0, 1})
                     psi[qubit_fock_index(up, 2 * n + 1, n_max)] = Complex(dist(rng), dist(rng));
             psi /= psi.norm();
             const ComplexMatrix h = m.closed->h0 + m.closed->hI;
             const RealVector grid = time_grid(10.0, 101);
             std::vector<ComplexVector> traj;
             traj.reserve(grid.size());
             for (Index i = 0; i < grid.size(); ++i)
                 traj.push_back(expm((-kImag * grid[i] * h).eval()) * psi);
             const auto [e1, e2] = energy_curves(m.closed->subsystem_h1, m.closed->subsystem_h2, traj);
             const double v1 = (e1.array() - e1[0]).abs().maxCoeff();
             const double v2 = (e2.array() - e2[0]).abs().maxCoeff();
             return v1 <= 1e-9 && v2 <= 1e-9;
         }});
    return facts;
}

std::vector<ExpectedFact> facts_example2() {
    std::vector<ExpectedFact> facts;
    facts.push_back({"free and interaction parts commute at resonance",
                     [] {
                         const auto m = build("example2");
                         return (m.closed->h0 * m.closed->hI - m.closed->hI * m.closed->h0).norm() <=
                                1e-12;
                     }});
    facts.push_back({"the excitation number commutes with the interaction",
                     [] {
                         const auto m = build("example2");
                         const int n_max = as_int(m.parameters, "n_max", 8);
                         const FockSpace space(n_max);
                         const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
                         const ComplexMatrix i_f = ComplexMatrix::Identity(n_max, n_max);
                         const ComplexMatrix num = number_operator(space);
                         const ComplexMatrix big_n =
                             tensor(i2, tensor(num, i_f)) + tensor(i2, tensor(i_f, num)) +
                             tensor(((i2 + pauli(Pauli::z)) / 2.0).eval(),
                                    ComplexMatrix::Identity(n_max * n_max, n_max * n_max));
                         return (big_n * m.closed->hI - m.closed->hI * big_n).norm() <= 1e-12;
                     }});
    facts.push_back({"number sectors have dimension 2n+1 for n = 1..4",
                     [] {
                         const auto m = build("example2");
                         const int n_max = as_int(m.parameters, "n_max", 8);
                         for (int n = 1; n <= 4; ++n) {
                             const auto sector = two_mode_number_sector(n, n_max);
                             if (sector.dim() != 2 * n + 1) return false;
                             // The frame must actually span an eigenspace of the
                             // interaction-invariant grading: check H_I maps it to itself.
                             const ComplexMatrix hf = m.closed->hI * sector.frame;
                             if ((hf - sector.frame * (sector.frame.adjoint() * hf)).norm() > 1e-10)
                                 return false;
                         }
                         return true;
                     }});
    facts.push_back(
        {"interaction spectra in the n = 1 and n = 2 sectors follow the coupling norm",
         [] {
             const auto m = build("example2");
             const int n_max = as_int(m.parameters, "n_max", 8);
             const double g1 = m.parameters.scalar_or("gamma1", 3.0);
             const double g2 = m.parameters.scalar_or("gamma2", 4.0);
             const double g = std::hypot(g1, g2);
             for (int n : {1, 2}) {
                 const auto sector = two_mode_number_sector(n, n_max);
                 const ComplexMatrix hi_restricted =
                     sector.frame.adjoint() * m.closed->hI * sector.frame;
                 const auto [evals, vecs] = hermitian_eig(hi_restricted);
                 RealVector expected(2 * n + 1);
                 if (n == 1) expected << -g, 0.0, g;
                 else expected << -std::sqrt(2.0) * g, -g, 0.0, g, std::sqrt(2.0) * g;
                 if ((evals - expected).cwiseAbs().maxCoeff() > 1e-10) return false;
             }
             return true;
         }});
    facts.push_back(
        {"a top-eigenvalue sector state is interaction free but moves as a vector",
         [] {
             const auto m = build("example2");
             const int n_max = as_int(m.parameters, "n_max", 8);
             const double omega = m.parameters.scalar_or("omega", 1.0);
             const double g = std::hypot(m.parameters.scalar_or("gamma1", 3.0),
                                         m.parameters.scalar_or("gamma2", 4.0));
             const auto sector = two_mode_number_sector(1, n_max);
             const ComplexMatrix hi_restricted =
                 sector.frame.adjoint() * m.closed->hI * sector.frame;
             const auto [evals, vecs] = hermitian_eig(hi_restricted);
             const ComplexVector psi = sector.frame * vecs.col(2);  // eigenvalue +g
             const ComplexMatrix h = m.closed->h0 + m.closed->hI;
             const RealVector grid = time_grid(10.0, 101);
             double worst = 0.0;
             for (Index i = 0; i < grid.size(); ++i) {
                 const double t = grid[i];
                 const ComplexVector full = expm((-kImag * t * h).eval()) * psi;
                 const ComplexVector free =
                     std::exp(-kImag * g * t) * (expm((-kImag * t * m.closed->h0).eval()) * psi);
                 worst = std::max(worst, (full - free).norm());
             }
             const double t_star = std::numbers::pi / (2.0 * omega);
             const ComplexVector moved = expm((-kImag * t_star * h).eval()) * psi;
             return worst <= 1e-8 && (moved - psi).norm() > 1e-3;
         }});
    return facts;
}

std::vector<ExpectedFact> facts_qubit_dephasing() {
    std::vector<ExpectedFact> facts;
    facts.push_back(
        {"every diagonal mixture is inside the computed subspace",
         [] {
             const auto m = build("qubit_dephasing");
             const auto sub = decoherence_free_subspace(*m.gksl);
             for (double pr : {0.0, 0.3, 1.0}) {
                 ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
                 rho(0, 0) = pr;
                 rho(1, 1) = 1.0 - pr;
                 if (!sub.contains(vectorize(rho), 1e-8)) return false;
             }
             return true;
         }});
    facts.push_back({"the projection heuristic recovers the maximally mixed state and it verifies",
                     [] {
                         const auto m = build("qubit_dephasing");
                         const auto sub = decoherence_free_subspace(*m.gksl);
                         const auto state = find_df_state(sub, 1e-10);
                         if (!state) return false;
                         if ((state->matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm() > 1e-9)
                             return false;
                         const auto report =
                             verify_unitary_evolution(*m.gksl, *state, time_grid(10.0, 101), 1e-8);
                         return report.verdict;
                     }});
    facts.push_back(
        {"an equal superposition decoheres with the closed-form envelope",
         [] {
             const auto m = build("qubit_dephasing");
             const double gamma = m.parameters.scalar_or("gamma", 1.0);
             ComplexMatrix plus(2, 2);
             plus << 0.5, 0.5, 0.5, 0.5;
             const RealVector grid = time_grid(10.0, 101);
             const auto report =
                 verify_unitary_evolution(*m.gksl, DensityMatrix(plus), grid, 1e-8);
             if (report.verdict) return false;
             for (Index i = 0; i < grid.size(); ++i) {
                 const double envelope = 1.0 - std::exp(-2.0 * gamma * grid[i]);
                 if (std::abs(report.deviation[i] - envelope) > 1e-6) return false;
             }
             return true;
         }});
    facts.push_back(
        {"with the free Hamiltonian along x, only the identity span survives the chain",
         [] {
             Parameters p;
             p.scalars["h0_axis_x"] = 1.0;
             const auto m = build("qubit_dephasing", p);
             const auto sub = decoherence_free_subspace(*m.gksl);
             return sub.dim() == 1 &&
                    sub.contains(vectorize(ComplexMatrix::Identity(2, 2)), 1e-10);
         }});
    return facts;
}

std::vector<ExpectedFact> facts_weyl_qudit() {
    std::vector<ExpectedFact> facts;
    facts.push_back(
        {"all basis projectors and their mixtures are decoherence free",
         [] {
             const auto m = build("weyl_qudit");
             const int d = as_int(m.parameters, "d", 3);
             const auto sub = decoherence_free_subspace(*m.gksl);
             for (int k = 0; k < d; ++k) {
                 ComplexMatrix pk = ComplexMatrix::Zero(d, d);
                 pk(k, k) = 1.0;
                 if (!sub.contains(vectorize(pk), 1e-8)) return false;
             }
             ComplexMatrix mix = ComplexMatrix::Zero(d, d);
             mix(0, 0) = 0.2;
             mix(1, 1) = 0.5;
             mix(2, 2) = 0.3;
             const auto report = verify_unitary_evolution(*m.gksl, DensityMatrix(mix),
                                                          time_grid(10.0, 101), 1e-8);
             return report.verdict;
         }});
    facts.push_back(
        {"propagation matches the entrywise Hadamard factor",
         [] {
             const auto m = build("weyl_qudit");
             const int d = as_int(m.parameters, "d", 3);
             DephasingParams params;
             params.d = d;
             params.gamma = m.parameters.lists.at("gamma_n");
             params.energies = m.parameters.lists.at("energies");
             std::mt19937 rng(21);
             std::normal_distribution<double> dist;
             ComplexMatrix g(d, d);
             for (Index i = 0; i < d; ++i)
                 for (Index j = 0; j < d; ++j) g(i, j) = Complex(dist(rng), dist(rng));
             ComplexMatrix rho = g * g.adjoint();
             rho /= rho.trace().real();
             const auto pair = vectorize_generator(*m.gksl);
             const ComplexMatrix full = pair.a + pair.b;
             for (double t : {0.5, 2.0}) {
                 const ComplexMatrix propagated =
                     devectorize(expm((t * full).eval()) * vectorize(rho), d);
                 for (int k = 0; k < d; ++k)
                     for (int l = 0; l < d; ++l) {
                         const Complex expected =
                             dephasing_factor(DephasingModel::weyl_qudit, params, k, l, t) *
                             rho(k, l);
                         if (std::abs(propagated(k, l) - expected) > 1e-8) return false;
                     }
             }
             return true;
         }});
    return facts;
}

std::vector<ExpectedFact> facts_phase_damping() {
    std::vector<ExpectedFact> facts;
    facts.push_back(
        {"populations are conserved and coherences decay with the closed-form magnitude",
         [] {
             const auto m = build("phase_damping");
             const int n_max = as_int(m.parameters, "n_max", 12);
             const double big_gamma = m.parameters.scalar_or("Gamma", 0.7);
             std::mt19937 rng(31);
             std::normal_distribution<double> dist;
             ComplexMatrix g(n_max, n_max);
             for (Index i = 0; i < n_max; ++i)
                 for (Index j = 0; j < n_max; ++j) g(i, j) = Complex(dist(rng), dist(rng));
             ComplexMatrix rho = g * g.adjoint();
             rho /= rho.trace().real();
             const auto pair = vectorize_generator(*m.gksl);
             const ComplexMatrix full = pair.a + pair.b;
             for (double t : {0.5, 2.0, 10.0}) {
                 const ComplexMatrix propagated =
                     devectorize(expm((t * full).eval()) * vectorize(rho), n_max);
                 for (int n = 0; n < n_max; ++n) {
                     if (std::abs(propagated(n, n) - rho(n, n)) > 1e-9) return false;
                     for (int mm = 0; mm < n_max; ++mm) {
                         const double expected_mag =
                             std::exp(-0.5 * (n - mm) * (n - mm) * big_gamma * t) *
                             std::abs(rho(n, mm));
                         if (std::abs(std::abs(propagated(n, mm)) - expected_mag) > 1e-8)
                             return false;
                     }
                 }
             }
             return true;
         }});
    facts.push_back({"the projection heuristic returns a diagonal state annihilated by the dissipator",
                     [] {
                         const auto m = build("phase_damping");
                         const int n_max = as_int(m.parameters, "n_max", 12);
                         const auto sub = decoherence_free_subspace(*m.gksl);
                         const auto state = find_df_state(sub, 1e-10);
                         if (!state) return false;
                         ComplexMatrix off = state->matrix();
                         off.diagonal().setZero();
                         if (off.norm() > 1e-10) return false;
                         GkslSpec dissipator_only = *m.gksl;
                         dissipator_only.h0 = ComplexMatrix::Zero(n_max, n_max);
                         const auto pair = vectorize_generator(dissipator_only);
                         return (pair.b * vectorize(state->matrix())).norm() <= 1e-10;
                     }});
    facts.push_back({"the excitation number is a constant of motion",
                     [] {
                         const auto m = build("phase_damping");
                         const int n_max = as_int(m.parameters, "n_max", 12);
                         const auto pair = vectorize_generator(*m.gksl);
                         const ComplexVector vec_n =
                             vectorize(number_operator(FockSpace(n_max)));
                         return ((pair.a + pair.b) * vec_n).norm() <= 1e-10;
                     }});
    return facts;
}

}  // namespace

std::vector<ExpectedFact> expected_facts(const std::string& name) {
    if (name == "example1") return facts_example1();
    if (name == "example2") return facts_example2();
    if (name == "qubit_dephasing") return facts_qubit_dephasing();
    if (name == "weyl_qudit") return facts_weyl_qudit();
    if (name == "phase_damping") return facts_phase_damping();
    throw ValidationError("unknown catalog model: " + name);
}

}  // namespace bfree
