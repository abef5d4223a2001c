// Subcommand implementations for the `ttm` binary, split out of main so the
// test suite can drive them with in-memory streams.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "ttm/core_model.hpp"
#include "ttm/tournament.hpp"

namespace ttm::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_domain = 1;
inline constexpr int exit_usage = 2;

struct ElicitOptions {
    std::string objects;  ///< comma-separated names; ignored when resuming
    PairingPolicy policy = PairingPolicy::sequential;
    bool allow_ties = false;
    std::optional<Units> card_cap = 100;
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> match_matrix_out;
    std::filesystem::path session_file = "ttm-session.json";
    bool resume = false;
};

int elicit(const ElicitOptions& options, std::istream& in, std::ostream& out, std::ostream& err);

int build(const std::filesystem::path& match_matrix, const std::optional<std::string>& objects,
          const std::optional<std::filesystem::path>& out_path, std::ostream& out,
          std::ostream& err);

int eval(const std::filesystem::path& matrix, const std::optional<std::string>& objects,
         const std::optional<std::filesystem::path>& out_path, std::ostream& out,
         std::ostream& err);

int check(const std::filesystem::path& matrix, const std::optional<std::string>& objects,
          std::ostream& out, std::ostream& err);

int serve(const std::string& host, int port, const std::filesystem::path& data_dir,
          const std::optional<std::filesystem::path>& web_root, std::ostream& out,
          std::ostream& err);

/// Splits "a, b ,c" into trimmed names.
std::vector<std::string> parse_names(const std::string& list);

/// Set by the SIGINT handler; the elicitation loop saves and stops when set.
void install_interrupt_handler();
bool interrupted();

} // namespace ttm::cli
