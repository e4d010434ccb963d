#include "fredo/runconfig.hpp"

#include <fstream>
#include <sstream>

#include "fredo/errors.hpp"

namespace fredo {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

} // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap map;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        }
        const std::string full = section.empty() ? key : section + "." + key;
        if (map.count(full)) {
            throw ConfigError("duplicate config key: " + full);
        }
        map[full] = value;
    }
    return map;
}

ConfigMap parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw MissingFile(path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string serialize_config(const ConfigMap& map) {
    // Unsectioned keys must come first: a parser cannot leave a section once
    // one is opened. std::map keeps the sectioned keys grouped and sorted.
    std::ostringstream out;
    for (const auto& [full, value] : map) {
        if (full.find('.') == std::string::npos) {
            out << full << " = " << value << "\n";
        }
    }
    std::string section;
    for (const auto& [full, value] : map) {
        const auto dot = full.find('.');
        if (dot == std::string::npos) continue;
        const std::string sec = full.substr(0, dot);
        if (sec != section) {
            if (out.tellp() > 0) out << "\n";
            out << "[" << sec << "]\n";
            section = sec;
        }
        out << full.substr(dot + 1) << " = " << value << "\n";
    }
    return out.str();
}

std::optional<std::string> ConfigBinder::take(const std::string& key) {
    const auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    std::string value = it->second;
    map_.erase(it);
    return value;
}

void ConfigBinder::finish() const {
    if (map_.empty()) return;
    std::string keys;
    for (const auto& [k, _] : map_) {
        if (!keys.empty()) keys += ", ";
        keys += k;
    }
    throw ConfigError("unknown config key(s): " + keys);
}

} // namespace fredo
