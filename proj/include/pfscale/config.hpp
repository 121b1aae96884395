#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pfscale {

enum class Command { Constant, Lift, Sweep, Check };

std::string to_string(Command c);
std::optional<Command> parse_command(const std::string& name);

/// Validated run description. params holds the active command's section with
/// values as written; typed access goes through the getters below, which fall
/// back to the documented defaults.
struct RunConfig {
    Command command = Command::Constant;
    std::map<std::string, std::string> params;
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    int threads = 1;

    bool operator==(const RunConfig&) const = default;
};

/// line is 1-based; 0 when the problem has no single location.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

struct ParseOptions {
    std::optional<Command> command;  // overrides the file's command key
    bool require = true;             // check required keys
};

/// Format: top-level "key = value" lines (command, out, seed, threads), then
/// "[constant]", "[lift]", "[sweep]" or "[check]" sections. '#' starts a comment line.
RunConfig parse_config(const std::string& text, const ParseOptions& opt = {});

/// Sets one key (top-level or a parameter of the active command) with validation.
/// `where` prefixes error messages, e.g. "flag --R".
void set_value(RunConfig& cfg, const std::string& key, const std::string& value,
               const std::string& where);

/// Throws ConfigError listing the active command's missing required keys.
void check_required(const RunConfig& cfg);

/// Text that parse_config turns back into an equal RunConfig.
std::string echo_config(const RunConfig& cfg);

/// Keys, types and defaults for every section.
std::string config_reference();

std::string get_string(const RunConfig& cfg, const std::string& key);
double get_real(const RunConfig& cfg, const std::string& key);
std::optional<double> find_real(const RunConfig& cfg, const std::string& key);
int get_int(const RunConfig& cfg, const std::string& key);
bool get_bool(const RunConfig& cfg, const std::string& key);
std::vector<double> get_reals(const RunConfig& cfg, const std::string& key);
std::pair<double, double> get_pair(const RunConfig& cfg, const std::string& key);

}  // namespace pfscale
