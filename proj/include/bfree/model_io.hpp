#ifndef BFREE_MODEL_IO_HPP
#define BFREE_MODEL_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "bfree/core.hpp"
#include "bfree/models.hpp"
#include "bfree/types.hpp"

namespace bfree {

/// A model ingested from the catalog or from a JSON file.
struct LoadedModel {
    enum class Kind { raw_pair, closed_bipartite, gksl };

    Kind kind = Kind::raw_pair;
    std::string name;  // catalog name, empty for file-defined models
    std::string basis_order;
    Parameters parameters;
    std::optional<ClosedModel> closed;
    std::optional<GkslSpec> gksl;
    std::optional<GeneratorPair> raw;

    GeneratorPair generator() const;
    static const char* kind_name(Kind k);
};

/// Accepts "catalog:NAME" or a path to a model JSON document.
LoadedModel load_model(const std::string& path_or_catalog);

/// Writes a catalog entry as a model file (name + resolved parameters).
/// Loading it back rebuilds the identical model.
void save_catalog_model(const std::string& name, const std::string& path);

struct LoadedState {
    bool is_density = false;
    ComplexMatrix matrix;  // n x 1 for state vectors
};

LoadedState load_state(const std::string& path);

/// Deterministic JSON emitter: fixed field order (insertion order), floats
/// with 17 significant digits, no whitespace variation. Byte-identical output
/// for identical inputs.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& name);
    JsonWriter& value(const std::string& s);
    JsonWriter& value(const char* s);
    JsonWriter& value(double x);
    JsonWriter& value(long long x);
    JsonWriter& value(Index x) { return value(static_cast<long long>(x)); }
    JsonWriter& value(int x) { return value(static_cast<long long>(x)); }
    JsonWriter& value(bool b);
    JsonWriter& complex_value(const Complex& z);           // [re, im]
    JsonWriter& matrix_value(const ComplexMatrix& m);      // rows of [re, im]
    JsonWriter& real_vector_value(const RealVector& v);

    const std::string& str() const { return buf_; }

private:
    void separate();
    std::string buf_;
    std::vector<bool> need_comma_;
    bool after_key_ = false;
};

/// Writes content to path atomically (temp file + rename).
void atomic_write(const std::string& path, const std::string& content);

/// Row-major nested-array encoding used by model and report documents.
ComplexMatrix parse_complex_matrix_json(const std::string& json_array_text);

}  // namespace bfree

#endif
