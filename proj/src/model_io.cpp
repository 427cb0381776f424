#include "bfree/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace bfree {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed JSON in " + path + ": " + e.what());
    }
    return doc;
}

void require_schema_version(const json& doc, const std::string& path) {
    if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer())
        throw ValidationError(path + ": missing integer schema_version");
    if (doc["schema_version"].get<int>() != 1)
        throw ValidationError(path + ": unsupported schema_version");
}

ComplexMatrix parse_matrix(const json& rows, const std::string& where) {
    if (!rows.is_array() || rows.empty())
        throw ValidationError(where + ": matrix must be a nonempty array of rows");
    const std::size_t ncols = rows[0].is_array() ? rows[0].size() : 0;
    if (ncols == 0) throw ValidationError(where + ": matrix rows must be nonempty arrays");
    ComplexMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(ncols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const json& row = rows[i];
        if (!row.is_array() || row.size() != ncols)
            throw ValidationError(where + ": ragged matrix rows");
        for (std::size_t j = 0; j < ncols; ++j) {
            const json& entry = row[j];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                !entry[1].is_number())
                throw ValidationError(where + ": entries must be [re, im] pairs");
            m(static_cast<Index>(i), static_cast<Index>(j)) =
                Complex(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return m;
}

Parameters parse_parameters(const json& doc, const std::string& path) {
    Parameters p;
    if (!doc.contains("parameters")) return p;
    const json& params = doc["parameters"];
    if (!params.is_object()) throw ValidationError(path + ": parameters must be an object");
    for (const auto& [key, val] : params.items()) {
        if (val.is_number()) {
            p.scalars[key] = val.get<double>();
        } else if (val.is_array()) {
            std::vector<double> list;
            for (const json& x : val) {
                if (!x.is_number())
                    throw ValidationError(path + ": parameter list entries must be numbers");
                list.push_back(x.get<double>());
            }
            p.lists[key] = std::move(list);
        } else {
            throw ValidationError(path + ": parameter values must be numbers or number arrays");
        }
    }
    return p;
}

}  // namespace

GeneratorPair LoadedModel::generator() const {
    switch (kind) {
        case Kind::raw_pair:
            return *raw;
        case Kind::closed_bipartite: {
            GeneratorPair pair;
            pair.a = -kImag * closed->h0;
            pair.b = -kImag * closed->hI;
            pair.space_kind = SpaceKind::state_vector;
            return pair;
        }
        case Kind::gksl:
            return vectorize_generator(*gksl);
    }
    throw ValidationError("LoadedModel: invalid kind");
}

const char* LoadedModel::kind_name(Kind k) {
    switch (k) {
        case Kind::raw_pair: return "raw_pair";
        case Kind::closed_bipartite: return "closed_bipartite";
        case Kind::gksl: return "gksl";
    }
    return "?";
}

LoadedModel load_model(const std::string& path_or_catalog) {
    std::string name;
    Parameters overrides;
    json doc;
    std::string path = path_or_catalog;

    if (path_or_catalog.rfind("catalog:", 0) == 0) {
        name = path_or_catalog.substr(8);
    } else {
        doc = read_json_file(path);
        require_schema_version(doc, path);
        if (doc.contains("name")) {
            if (!doc["name"].is_string()) throw ValidationError(path + ": name must be a string");
            name = doc["name"].get<std::string>();
            if (doc.contains("matrices"))
                throw ValidationError(path + ": a catalog name and explicit matrices are mutually exclusive");
            overrides = parse_parameters(doc, path);
        }
    }

    LoadedModel out;
    if (!name.empty()) {
        if (!is_catalog_model(name)) throw ValidationError("unknown catalog model: " + name);
        BuiltModel built = build(name, overrides);
        out.name = built.name;
        out.basis_order = built.basis_order;
        out.parameters = built.parameters;
        if (built.kind == ModelKind::closed_bipartite) {
            out.kind = LoadedModel::Kind::closed_bipartite;
            out.closed = std::move(built.closed);
        } else {
            out.kind = LoadedModel::Kind::gksl;
            out.gksl = std::move(built.gksl);
        }
        return out;
    }

    if (!doc.contains("kind") || !doc["kind"].is_string())
        throw ValidationError(path + ": missing kind");
    const std::string kind = doc["kind"].get<std::string>();
    out.parameters = parse_parameters(doc, path);
    if (doc.contains("basis_order") && doc["basis_order"].is_string())
        out.basis_order = doc["basis_order"].get<std::string>();
    if (!doc.contains("matrices") || !doc["matrices"].is_object())
        throw ValidationError(path + ": missing matrices object");
    const json& mats = doc["matrices"];
    auto need = [&](const std::string& key) -> ComplexMatrix {
        if (!mats.contains(key)) throw ValidationError(path + ": missing matrix " + key);
        ComplexMatrix m = parse_matrix(mats[key], path + ":" + key);
        if (m.rows() != m.cols()) throw ValidationError(path + ": matrix " + key + " must be square");
        return m;
    };

    if (kind == "raw_pair") {
        out.kind = LoadedModel::Kind::raw_pair;
        GeneratorPair pair;
        pair.a = need("A");
        pair.b = need("B");
        std::string space = "state_vector";
        if (doc.contains("space")) {
            if (!doc["space"].is_string()) throw ValidationError(path + ": space must be a string");
            space = doc["space"].get<std::string>();
        }
        if (space == "state_vector") pair.space_kind = SpaceKind::state_vector;
        else if (space == "density_operator") pair.space_kind = SpaceKind::density_operator;
        else throw ValidationError(path + ": space must be state_vector or density_operator");
        pair.validate();
        out.raw = std::move(pair);
    } else if (kind == "closed_bipartite") {
        out.kind = LoadedModel::Kind::closed_bipartite;
        ClosedModel closed;
        closed.h0 = need("H0");
        closed.hI = need("HI");
        if (closed.h0.rows() != closed.hI.rows())
            throw ValidationError(path + ": H0 and HI dimensions differ");
        if (mats.contains("H1")) closed.subsystem_h1 = need("H1");
        if (mats.contains("H2")) closed.subsystem_h2 = need("H2");
        out.closed = std::move(closed);
    } else if (kind == "gksl") {
        out.kind = LoadedModel::Kind::gksl;
        GkslSpec spec;
        spec.h0 = need("H0");
        const auto rates = out.parameters.list_or("rates", {});
        for (int k = 0;; ++k) {
            const std::string key = "V" + std::to_string(k);
            if (!mats.contains(key)) break;
            NoiseOp nop;
            nop.op = need(key);
            nop.rate = k < static_cast<int>(rates.size()) ? rates[k] : 1.0;
            spec.noise_ops.push_back(std::move(nop));
        }
        spec.validate();
        out.gksl = std::move(spec);
    } else {
        throw ValidationError(path + ": kind must be raw_pair, closed_bipartite or gksl");
    }
    return out;
}

void save_catalog_model(const std::string& name, const std::string& path) {
    if (!is_catalog_model(name)) throw ValidationError("unknown catalog model: " + name);
    const BuiltModel built = build(name);
    JsonWriter w;
    w.begin_object();
    w.key("schema_version").value(1);
    w.key("kind").value(built.kind == ModelKind::closed_bipartite ? "closed_bipartite" : "gksl");
    w.key("name").value(built.name);
    w.key("basis_order").value(built.basis_order);
    w.key("parameters").begin_object();
    for (const auto& [k, v] : built.parameters.scalars) w.key(k).value(v);
    for (const auto& [k, list] : built.parameters.lists) {
        w.key(k).begin_array();
        for (double x : list) w.value(x);
        w.end_array();
    }
    w.end_object();
    w.end_object();
    atomic_write(path, w.str() + "\n");
}

LoadedState load_state(const std::string& path) {
    const json doc = read_json_file(path);
    require_schema_version(doc, path);
    if (!doc.contains("kind") || !doc["kind"].is_string())
        throw ValidationError(path + ": missing kind");
    const std::string kind = doc["kind"].get<std::string>();
    LoadedState out;
    if (kind == "density_matrix") out.is_density = true;
    else if (kind == "state_vector") out.is_density = false;
    else throw ValidationError(path + ": kind must be state_vector or density_matrix");
    if (!doc.contains("matrix")) throw ValidationError(path + ": missing matrix");
    out.matrix = parse_matrix(doc["matrix"], path + ":matrix");
    if (out.is_density && out.matrix.rows() != out.matrix.cols())
        throw ValidationError(path + ": density matrix must be square");
    if (!out.is_density && out.matrix.cols() != 1)
        throw ValidationError(path + ": state vector must be a single column");
    return out;
}

// --- JsonWriter -----------------------------------------------------------

void JsonWriter::separate() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (!need_comma_.empty()) {
        if (need_comma_.back()) buf_ += ',';
        need_comma_.back() = true;
    }
}

JsonWriter& JsonWriter::begin_object() {
    separate();
    buf_ += '{';
    need_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    buf_ += '}';
    need_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separate();
    buf_ += '[';
    need_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    buf_ += ']';
    need_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
    separate();
    buf_ += '"';
    buf_ += name;  // keys are plain identifiers, no escaping needed
    buf_ += "\":";
    after_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& s) {
    separate();
    buf_ += '"';
    for (char c : s) {
        if (c == '"' || c == '\\') buf_ += '\\';
        buf_ += c;
    }
    buf_ += '"';
    return *this;
}

JsonWriter& JsonWriter::value(const char* s) { return value(std::string(s)); }

JsonWriter& JsonWriter::value(double x) {
    separate();
    if (!std::isfinite(x)) {
        buf_ += "null";
        return *this;
    }
    char tmp[64];
    std::snprintf(tmp, sizeof(tmp), "%.17g", x);
    buf_ += tmp;
    return *this;
}

JsonWriter& JsonWriter::value(long long x) {
    separate();
    buf_ += std::to_string(x);
    return *this;
}

JsonWriter& JsonWriter::value(bool b) {
    separate();
    buf_ += b ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::complex_value(const Complex& z) {
    begin_array();
    value(z.real());
    value(z.imag());
    return end_array();
}

JsonWriter& JsonWriter::matrix_value(const ComplexMatrix& m) {
    begin_array();
    for (Index i = 0; i < m.rows(); ++i) {
        begin_array();
        for (Index j = 0; j < m.cols(); ++j) complex_value(m(i, j));
        end_array();
    }
    return end_array();
}

JsonWriter& JsonWriter::real_vector_value(const RealVector& v) {
    begin_array();
    for (Index i = 0; i < v.size(); ++i) value(v[i]);
    return end_array();
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot open for writing: " + tmp);
        out << content;
        if (!out) throw ValidationError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw ValidationError("rename failed: " + tmp + " -> " + path);
}

ComplexMatrix parse_complex_matrix_json(const std::string& json_array_text) {
    json doc;
    try {
        doc = json::parse(json_array_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed matrix JSON: ") + e.what());
    }
    return parse_matrix(doc, "matrix");
}

}  // namespace bfree
