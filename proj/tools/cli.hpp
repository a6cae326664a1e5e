#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pipir/pipir.hpp"

namespace pipir::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoResult = 3;

struct Config {
    DesignParams params{};
    Preset preset = Preset::Consistent;
    Tolerances tol{};
    int resolution = 256;
    unsigned threads = 0;
    int edge_samples = 7;
    std::string output_dir;
};

// Parses `key = value` lines with `#` comments on top of `base`.
// Throws ConfigurationError naming the source and line.
Config parse_config(std::string_view text, const std::string& source, Config base = {});
Config load_config_file(const std::string& path, Config base = {});

// Ten significant digits, locale independent, no negative zero.
std::string format_number(double v);

// Comma-separated list of exactly `count` numbers.
std::vector<double> parse_number_list(const std::string& text, std::size_t count,
                                      const std::string& what);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace pipir::cli
