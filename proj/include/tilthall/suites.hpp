#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tilthall/catalog.hpp"
#include "tilthall/report.hpp"

namespace tilthall {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
    std::vector<std::string> algebras;
    std::string tilting;  // module over the first algebra; empty means T = A
    int dim_bound = 4;
    int submodule_cap = 0;  // 0 keeps the per-field defaults
    std::uint64_t exhaust_cap = 1u << 16;
    int syzygy_bound = 24;
    std::uint64_t seed = 0x5eed;
    std::string suite = "all";
    std::string out;
    std::string cache_dir;
    bool wall_time = false;

    /// Throws ConfigError.
    void validate() const;
    LabOptions lab_options() const;
    /// Echo for the report: everything that changes the records.
    nlohmann::json to_json() const;
};

const std::vector<std::string>& suite_names();

struct RunResult {
    Report report;
    nlohmann::json document;
    std::vector<std::string> warnings;  // cache misses on corrupt entries and the like
    int exit_code() const { return report.exit_code(); }
};

RunResult run(const RunConfig& cfg);

/// Content-addressed store of JSON payloads.  Keys are JSON documents; a
/// payload is returned only on exact key match with an intact hash.
class Cache {
public:
    explicit Cache(std::string dir);

    std::optional<nlohmann::json> get(const nlohmann::json& key);
    /// Atomic: written to a temporary file, then renamed.
    void put(const nlohmann::json& key, const nlohmann::json& payload);
    void invalidate(const nlohmann::json& key);
    std::string path_for(const nlohmann::json& key) const;

    std::vector<std::string> warnings;

private:
    std::string dir_;
};

/// Directory from the flag, else TILTHALL_CACHE, else empty (no caching).
std::string resolve_cache_dir(const std::string& flag);

nlohmann::json catalog_cache_key(const Lab& lab, const CatalogOptions& copt);
/// Catalog plus the indecomposables of the lab in id order.
nlohmann::json catalog_document(const IsoCatalog& cat);
/// Rebuilds a catalog into a fresh lab; throws CacheCorrupt when the stored
/// modules do not register to the stored ids.
IsoCatalog catalog_from_document(Lab& lab, const nlohmann::json& doc);
/// Cached build when `cache` is non-null.
IsoCatalog load_or_build_catalog(Lab& lab, const CatalogOptions& copt, Cache* cache);

}  // namespace tilthall
