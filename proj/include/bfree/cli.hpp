#ifndef BFREE_CLI_HPP
#define BFREE_CLI_HPP

#include <optional>
#include <ostream>
#include <string>

namespace bfree::cli {

// Exit codes shared by all commands: 0 success (verdict true for verify),
// 1 clean negative verdict (verify only), 2 validation error, 3 numerical
// failure. Diagnostics go to stderr; report data never does.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdictFalse = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct SubspaceOptions {
    std::string model;  // path or catalog:NAME
    std::optional<double> tol;
    std::string out;
    std::optional<int> sector_n;  // restrict to an excitation sector (two-mode model)
    std::optional<int> max_power;
};

struct VerifyOptions {
    std::string model;
    std::string state;
    double t_max = 10.0;
    int t_steps = 101;
    std::optional<double> tol;
    std::string out;
};

struct ShemeshOptions {
    std::string model;
    std::optional<int> max_power;
    std::string out;
};

int cmd_subspace(const SubspaceOptions& opts, std::ostream& err);
int cmd_verify(const VerifyOptions& opts, std::ostream& err);
int cmd_shemesh(const ShemeshOptions& opts, std::ostream& err);
int cmd_catalog_list(std::ostream& out, std::ostream& err);
int cmd_catalog_show(const std::string& name, std::ostream& out, std::ostream& err);
int cmd_catalog_export(const std::string& name, const std::string& path, std::ostream& err);

/// Default tolerance resolution: explicit flag, else BFREE_TOL, else fallback.
double resolve_tolerance(const std::optional<double>& flag, double fallback);

/// CSV companion path: replaces a .json extension, otherwise appends .csv.
std::string csv_path_for(const std::string& json_path);

}  // namespace bfree::cli

#endif
