#include "bfree/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "bfree/liouville.hpp"
#include "bfree/model_io.hpp"
#include "bfree/numkernel.hpp"

namespace bfree::cli {

namespace {

RankTolerance rank_tolerance_from(const std::optional<double>& tol) {
    if (tol) return RankTolerance::explicit_value(*tol);
    if (const char* env = std::getenv("BFREE_TOL"))
        return RankTolerance::explicit_value(std::stod(env));
    return RankTolerance::automatic();
}

void write_tolerance_fields(JsonWriter& w, const RankTolerance& tol) {
    w.key("tolerance_mode")
        .value(tol.mode == RankTolerance::Mode::automatic ? "automatic" : "explicit");
    w.key("tolerance_value").value(tol.value);
}

void write_shemesh_fields(JsonWriter& w, const ShemeshResult& res) {
    w.key("nontrivial").value(res.nontrivial);
    w.key("subspace_dim").value(res.subspace_dim);
    if (res.witness) {
        w.key("eigenvalue_a").complex_value(*res.eigenvalue_a);
        w.key("eigenvalue_b").complex_value(*res.eigenvalue_b);
        w.key("witness_residual_a").value(res.witness_residual_a);
        w.key("witness_residual_b").value(res.witness_residual_b);
        w.key("witness").matrix_value(*res.witness);
    }
}

int default_max_power(Index ambient) {
    // The full criterion needs powers up to n-1; for operator-space ambients
    // that is numerically and computationally pointless, so cap it. The flag
    // overrides.
    return static_cast<int>(std::min<Index>(ambient - 1, 12));
}

struct ClosedVerifyInput {
    ComplexMatrix h0;
    ComplexMatrix hI;
    std::optional<ComplexMatrix> sub_h1;
    std::optional<ComplexMatrix> sub_h2;
};

void write_csv(const std::string& path, const RealVector& t, const RealVector& dev,
               const std::optional<RealVector>& e1, const std::optional<RealVector>& e2) {
    std::string csv = "t,deviation,E1,E2\n";
    char tmp[80];
    for (Index i = 0; i < t.size(); ++i) {
        std::snprintf(tmp, sizeof(tmp), "%.17g,%.17g,", t[i], dev[i]);
        csv += tmp;
        if (e1) {
            std::snprintf(tmp, sizeof(tmp), "%.17g", (*e1)[i]);
            csv += tmp;
        }
        csv += ',';
        if (e2) {
            std::snprintf(tmp, sizeof(tmp), "%.17g", (*e2)[i]);
            csv += tmp;
        }
        csv += '\n';
    }
    atomic_write(path, csv);
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace

double resolve_tolerance(const std::optional<double>& flag, double fallback) {
    if (flag) return *flag;
    if (const char* env = std::getenv("BFREE_TOL")) return std::stod(env);
    return fallback;
}

std::string csv_path_for(const std::string& json_path) {
    if (json_path.size() > 5 && json_path.substr(json_path.size() - 5) == ".json")
        return json_path.substr(0, json_path.size() - 5) + ".csv";
    return json_path + ".csv";
}

int cmd_subspace(const SubspaceOptions& opts, std::ostream& err) {
    return guarded(err, [&] {
        const LoadedModel model = load_model(opts.model);
        const RankTolerance tol = rank_tolerance_from(opts.tol);

        GeneratorPair pair = model.generator();
        std::optional<ComplexMatrix> h0_state, hI_state;  // sector analysis inputs
        if (model.kind == LoadedModel::Kind::closed_bipartite) {
            h0_state = model.closed->h0;
            hI_state = model.closed->hI;
        } else if (model.kind == LoadedModel::Kind::raw_pair) {
            // A raw pair of anti-Hermitian generators is a closed model in
            // disguise; recover the Hermitian pair for the sector table.
            const ComplexMatrix h0 = kImag * pair.a;
            const ComplexMatrix hI = kImag * pair.b;
            const double s = std::max(1.0, std::max(h0.norm(), hI.norm()));
            if ((h0 - h0.adjoint()).norm() <= 1e-10 * s &&
                (hI - hI.adjoint()).norm() <= 1e-10 * s) {
                h0_state = h0;
                hI_state = hI;
            }
        }

        if (opts.sector_n) {
            if (model.name != "example2")
                throw ValidationError(
                    "--sector-n is only meaningful for the two-mode model (catalog:example2)");
            const int n_max = static_cast<int>(model.parameters.scalar_or("n_max", 8.0));
            const Subspace sector = two_mode_number_sector(*opts.sector_n, n_max);
            const ComplexMatrix f = sector.frame;
            h0_state = (f.adjoint() * model.closed->h0 * f).eval();
            hI_state = (f.adjoint() * model.closed->hI * f).eval();
            pair.a = -kImag * *h0_state;
            pair.b = -kImag * *hI_state;
        }

        const KernelChain chain = compute_M_chain(pair, tol);

        JsonWriter w;
        w.begin_object();
        w.key("schema_version").value(1);
        w.key("report_kind").value("subspace");
        w.key("model").value(model.name.empty() ? opts.model : model.name);
        w.key("kind").value(LoadedModel::kind_name(model.kind));
        w.key("space").value(pair.space_kind == SpaceKind::state_vector ? "state_vector"
                                                                        : "density_operator");
        w.key("basis_order").value(model.basis_order);
        write_tolerance_fields(w, tol);
        w.key("ambient_dim").value(pair.ambient_dim());
        if (opts.sector_n) w.key("sector_n").value(*opts.sector_n);
        w.key("m_dim").value(chain.subspace.dim());
        w.key("chain_dims").begin_array();
        for (Index d : chain.chain_dims) w.value(d);
        w.end_array();

        if (h0_state && hI_state) {
            const SectorDecomposition dec = sector_decompose(*h0_state, *hI_state, -1.0, tol);
            w.key("sector_table").begin_array();
            for (std::size_t k = 0; k < dec.sectors.size(); ++k) {
                w.begin_object();
                w.key("alpha").value(dec.eigenvalues[static_cast<Index>(k)]);
                w.key("dim").value(dec.sectors[k].dim());
                w.key("eigenvalue_multiplicity").value(dec.cluster_multiplicity[k]);
                w.end_object();
            }
            w.end_array();
        }

        {
            const int mp = opts.max_power ? *opts.max_power : default_max_power(pair.ambient_dim());
            const ShemeshResult res = shemesh_nontrivial(pair, mp, tol);
            w.key("shemesh").begin_object();
            w.key("max_power").value(mp);
            write_shemesh_fields(w, res);
            w.end_object();
        }

        if (chain.subspace.dim() > 0) {
            RealVector ts(3);
            ts << 0.1, 1.0, 5.0;
            const auto pic = picture_deviations(pair, chain.subspace, ts);
            w.key("picture_invariance").begin_object();
            w.key("t_values").real_vector_value(ts);
            w.key("max_b_picture").value(pic.max_b_picture);
            w.key("max_a_picture").value(pic.max_a_picture);
            w.key("max_a_literal").value(pic.max_a_literal);
            w.end_object();
        }

        if (pair.space_kind == SpaceKind::density_operator) {
            DfDiagnostics diag;
            const auto state = find_df_state(chain.subspace, 1e-10, &diag);
            w.key("df_witness").begin_object();
            w.key("found").value(state.has_value());
            w.key("raw_min_eigenvalue").value(diag.raw_min_eigenvalue);
            w.key("projected_trace").value(diag.projected_trace);
            if (state) w.key("matrix").matrix_value(state->matrix());
            w.end_object();
        }

        w.key("m_frame").matrix_value(chain.subspace.frame);
        w.end_object();
        atomic_write(opts.out, w.str() + "\n");
        return kExitOk;
    });
}

int cmd_verify(const VerifyOptions& opts, std::ostream& err) {
    return guarded(err, [&] {
        const LoadedModel model = load_model(opts.model);
        const LoadedState state = load_state(opts.state);
        const double tol = resolve_tolerance(opts.tol, 1e-8);
        const RealVector grid = time_grid(opts.t_max, opts.t_steps);

        RealVector deviation(grid.size());
        std::optional<RealVector> e1, e2;
        std::optional<double> alpha;
        bool verdict = false;
        std::optional<double> trace_defect, herm_defect;

        if (model.kind == LoadedModel::Kind::gksl) {
            if (!state.is_density)
                throw ValidationError("gksl models require a density_matrix state");
            if (state.matrix.rows() != model.gksl->dim())
                throw ValidationError("state dimension does not match the model");
            const VerificationReport report =
                verify_unitary_evolution(*model.gksl, DensityMatrix(state.matrix), grid, tol);
            deviation = report.deviation;
            verdict = report.verdict;
            trace_defect = report.max_trace_defect;
            herm_defect = report.max_hermiticity_defect;
        } else if (model.kind == LoadedModel::Kind::closed_bipartite) {
            if (state.is_density)
                throw ValidationError("closed models take a state_vector here");
            if (state.matrix.rows() != model.closed->h0.rows())
                throw ValidationError("state dimension does not match the model");
            ComplexVector psi = state.matrix.col(0);
            const double norm = psi.norm();
            if (norm == 0.0) throw ValidationError("state vector must be nonzero");
            psi /= norm;
            // Interaction eigenvalue phase: Rayleigh quotient of the
            // interaction part on the state.
            alpha = (psi.adjoint() * model.closed->hI * psi)(0).real();
            const ComplexMatrix h = model.closed->h0 + model.closed->hI;
            std::vector<ComplexVector> traj;
            traj.reserve(grid.size());
            for (Index i = 0; i < grid.size(); ++i) {
                const double t = grid[i];
                const ComplexVector full = expm((-kImag * t * h).eval()) * psi;
                const ComplexVector free = std::exp(-kImag * *alpha * t) *
                                           (expm((-kImag * t * model.closed->h0).eval()) * psi);
                deviation[i] = (full - free).norm();
                traj.push_back(full);
            }
            verdict = deviation.maxCoeff() <= tol;
            if (model.closed->subsystem_h1.size() > 0 && model.closed->subsystem_h2.size() > 0) {
                auto curves =
                    energy_curves(model.closed->subsystem_h1, model.closed->subsystem_h2, traj);
                e1 = std::move(curves.first);
                e2 = std::move(curves.second);
            }
        } else {
            const GeneratorPair pair = *model.raw;
            ComplexVector x;
            if (state.is_density) {
                if (pair.space_kind != SpaceKind::density_operator ||
                    state.matrix.rows() * state.matrix.cols() != pair.ambient_dim())
                    throw ValidationError("density state does not match this raw pair");
                x = vectorize(state.matrix);
            } else {
                if (state.matrix.rows() != pair.ambient_dim())
                    throw ValidationError("state dimension does not match the model");
                x = state.matrix.col(0);
            }
            const ComplexMatrix full = pair.a + pair.b;
            for (Index i = 0; i < grid.size(); ++i) {
                const double t = grid[i];
                const ComplexVector lhs = expm((t * full).eval()) * x;
                const ComplexVector rhs = expm((t * pair.a).eval()) * x;
                if (state.is_density) {
                    const Index n = state.matrix.rows();
                    deviation[i] = trace_norm(devectorize(lhs, n) - devectorize(rhs, n));
                } else {
                    deviation[i] = (lhs - rhs).norm();
                }
            }
            verdict = deviation.maxCoeff() <= tol;
        }

        JsonWriter w;
        w.begin_object();
        w.key("schema_version").value(1);
        w.key("report_kind").value("verify");
        w.key("model").value(model.name.empty() ? opts.model : model.name);
        w.key("kind").value(LoadedModel::kind_name(model.kind));
        w.key("t_max").value(opts.t_max);
        w.key("t_steps").value(opts.t_steps);
        w.key("tolerance").value(tol);
        w.key("verdict").value(verdict);
        w.key("max_deviation").value(deviation.size() > 0 ? deviation.maxCoeff() : 0.0);
        if (alpha) w.key("alpha").value(*alpha);
        if (trace_defect) w.key("max_trace_defect").value(*trace_defect);
        if (herm_defect) w.key("max_hermiticity_defect").value(*herm_defect);
        w.key("deviation").real_vector_value(deviation);
        if (e1) w.key("energy1").real_vector_value(*e1);
        if (e2) w.key("energy2").real_vector_value(*e2);
        w.end_object();
        atomic_write(opts.out, w.str() + "\n");
        write_csv(csv_path_for(opts.out), grid, deviation, e1, e2);
        return verdict ? kExitOk : kExitVerdictFalse;
    });
}

int cmd_shemesh(const ShemeshOptions& opts, std::ostream& err) {
    return guarded(err, [&] {
        const LoadedModel model = load_model(opts.model);
        const GeneratorPair pair = model.generator();
        const int mp = opts.max_power ? *opts.max_power : default_max_power(pair.ambient_dim());
        const ShemeshResult res = shemesh_nontrivial(pair, mp, RankTolerance::automatic());

        JsonWriter w;
        w.begin_object();
        w.key("schema_version").value(1);
        w.key("report_kind").value("shemesh");
        w.key("model").value(model.name.empty() ? opts.model : model.name);
        w.key("kind").value(LoadedModel::kind_name(model.kind));
        w.key("max_power").value(mp);
        write_shemesh_fields(w, res);
        w.end_object();
        atomic_write(opts.out, w.str() + "\n");
        return kExitOk;  // the verdict is data, not an error
    });
}

int cmd_catalog_list(std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        for (const std::string& name : catalog_names()) {
            const BuiltModel m = build(name);
            out << name << "  ["
                << (m.kind == ModelKind::closed_bipartite ? "closed_bipartite" : "gksl") << "]\n";
        }
        return kExitOk;
    });
}

int cmd_catalog_show(const std::string& name, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const BuiltModel m = build(name);
        out << name << " ["
            << (m.kind == ModelKind::closed_bipartite ? "closed_bipartite" : "gksl") << "]\n";
        out << catalog_description(name) << "\n";
        out << "basis_order: " << m.basis_order << "\n";
        out << "parameters:\n";
        for (const auto& [k, v] : m.parameters.scalars) out << "  " << k << " = " << v << "\n";
        for (const auto& [k, list] : m.parameters.lists) {
            out << "  " << k << " = [";
            for (std::size_t i = 0; i < list.size(); ++i)
                out << (i ? ", " : "") << list[i];
            out << "]\n";
        }
        if (m.kind == ModelKind::gksl) {
            out << "generator: L rho = -i[H0, rho] + sum_k rate_k (V_k rho V_k^dag - "
                   "{V_k^dag V_k, rho}/2), "
                << m.gksl->noise_ops.size() << " noise operator(s) on dimension "
                << m.gksl->dim() << "\n";
        } else {
            out << "generator: -i(H0 + HI) on dimension " << m.closed->h0.rows() << "\n";
        }
        return kExitOk;
    });
}

int cmd_catalog_export(const std::string& name, const std::string& path, std::ostream& err) {
    return guarded(err, [&] {
        save_catalog_model(name, path);
        return kExitOk;
    });
}

}  // namespace bfree::cli
