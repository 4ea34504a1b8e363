#ifndef BLX_CONFIG_HPP
#define BLX_CONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Plain-text experiment configuration: "[section]" headers and "key = value"
// lines, '#' comments. Keys are addressed as "section.key". The effective
// configuration is defaults, overlaid by the file, overlaid by environment
// variables BLX_SECTION_KEY, overlaid by explicit sets. Unknown file keys
// are rejected against the schema. The FNV-1a hash of the canonical
// serialization is stamped into every output.

namespace blx {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class Config {
  public:
    static Config parse_string(const std::string& text,
                               const std::string& origin = "<string>");
    static Config parse_file(const std::string& path);

    // Overlay: entries of other replace entries of *this.
    void merge(const Config& other);
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    // Replaces values for schema keys that have a BLX_SECTION_KEY variable.
    void apply_env_overrides(const std::vector<std::string>& schema_keys,
                             const std::string& prefix = "BLX_");

    // Throws ConfigError naming the first key absent from the schema.
    void validate_keys(const std::vector<std::string>& schema_keys) const;

    const std::string& get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& key) const;

    // Sorted "key=value" lines.
    std::string canonical() const;
    std::uint64_t hash() const;

    const std::map<std::string, std::string>& entries() const {
        return entries_;
    }

  private:
    std::map<std::string, std::string> entries_;
};

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace blx

#endif
