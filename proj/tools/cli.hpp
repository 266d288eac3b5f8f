#pragma once

#include "rogers/core.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rogers::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;  // verification failures, numerical breakdowns
inline constexpr int kBadInput = 2;

// args excludes the program name. Artifacts go to --out when given, otherwise
// to out; usage text goes to err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Compact JSON with every float printed to 17 significant digits.
std::string dump_json(const nlohmann::json& j);

struct SuiteOptions {
    std::optional<double> tol;
    std::size_t mc_n = 200000;
    std::uint64_t seed = 1;
};

// suite: core | spine | wh | fluct | mc
VerifyReport run_suite(const std::string& suite, const RogersSpec& spec, const SuiteOptions& opt);

}  // namespace rogers::cli
