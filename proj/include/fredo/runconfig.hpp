#ifndef FREDO_RUNCONFIG_HPP
#define FREDO_RUNCONFIG_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace fredo {

/// Flat key-value configuration with INI-style sections. Keys are stored as
/// "section.key"; keys before any section header have no prefix.
using ConfigMap = std::map<std::string, std::string>;

/// Parse `[section]` headers and `key = value` lines. `#` starts a comment.
/// Throws ConfigError on malformed or duplicate entries.
ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::filesystem::path& path);

/// Deterministic inverse of parse_config_text:
/// parse_config_text(serialize_config(m)) == m.
std::string serialize_config(const ConfigMap& map);

/// Consume-and-check helper: every key must be taken exactly once, and
/// finish() rejects leftovers so typos cannot silently pass.
class ConfigBinder {
public:
    explicit ConfigBinder(ConfigMap map) : map_(std::move(map)) {}

    std::optional<std::string> take(const std::string& key);
    void finish() const;  // throws ConfigError naming any unknown key

private:
    ConfigMap map_;
};

} // namespace fredo

#endif // FREDO_RUNCONFIG_HPP
