#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "tilthall/algebra.hpp"
#include "tilthall/suites.hpp"

namespace tilthall {

using nlohmann::json;
namespace fs = std::filesystem;

Cache::Cache(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error("IoError", "cannot create cache directory " + dir_ + ": " + ec.message());
}

std::string Cache::path_for(const json& key) const { return (fs::path(dir_) / (fnv_hash(key.dump()) + ".json")).string(); }

std::optional<json> Cache::get(const json& key) {
    const std::string p = path_for(key);
    std::ifstream in(p);
    if (!in) return std::nullopt;
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        warnings.push_back("CacheCorrupt: " + p + " does not parse, recomputing");
        return std::nullopt;
    }
    if (!doc.is_object() || doc.value("key", json()) != key) return std::nullopt;
    const json& payload = doc["payload"];
    if (doc.value("payload_hash", std::string()) != fnv_hash(payload.dump())) {
        warnings.push_back("HashMismatch: " + p + ", recomputing");
        return std::nullopt;
    }
    return payload;
}

void Cache::put(const json& key, const json& payload) {
    static std::atomic<unsigned> counter{0};
    const std::string p = path_for(key);
    std::ostringstream tmp;
    tmp << p << ".tmp." << ::getpid() << "." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "."
        << counter++;
    {
        std::ofstream out(tmp.str(), std::ios::binary | std::ios::trunc);
        if (!out) throw Error("IoError", "cannot write " + tmp.str());
        out << json{{"key", key}, {"payload", payload}, {"payload_hash", fnv_hash(payload.dump())}}.dump();
        if (!out.flush()) throw Error("IoError", "cannot write " + tmp.str());
    }
    std::error_code ec;
    fs::rename(tmp.str(), p, ec);
    if (ec) {
        fs::remove(tmp.str(), ec);
        throw Error("IoError", "cannot rename into " + p);
    }
}

void Cache::invalidate(const json& key) {
    std::error_code ec;
    fs::remove(path_for(key), ec);
}

std::string resolve_cache_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    const char* env = std::getenv("TILTHALL_CACHE");
    return env ? env : "";
}

// ------------------------------------------------------------ catalogs

json catalog_cache_key(const Lab& lab, const CatalogOptions& copt) {
    return {{"kind", "catalog"},
            {"algebra", lab.alg->hash},
            {"dim_bound", copt.dim_bound},
            {"index_conflations", copt.index_conflations},
            {"aut_exhaust_cap", copt.aut_exhaust_cap},
            {"ext_enum_cap", copt.ext_enum_cap},
            {"submodule_caps", {lab.opt.submodule_caps.cap_f2, lab.opt.submodule_caps.cap_other}},
            {"exhaust_cap", lab.opt.exhaust_cap},
            {"retry_cap", lab.opt.retry_cap},
            {"syzygy_bound", lab.opt.syzygy_bound},
            {"seed", lab.opt.seed},
            {"version", kToolVersion}};
}

json catalog_document(const IsoCatalog& cat) {
    const Lab& lab = *cat.lab;
    json indecs = json::array();
    for (int i = 0; i < lab.size(); ++i) indecs.push_back(rep_to_json(lab.indec(i).rep));
    json cls = json::array();
    for (auto& c : cat.classes)
        cls.push_back({{"key", c.key}, {"dims", c.dims}, {"aut", c.aut.get_str()}, {"crosschecked", c.aut_crosschecked}});
    json conf = json::array();
    for (auto& r : cat.conflations)
        conf.push_back({{"sub", r.sub},
                        {"mid", r.mid},
                        {"quot", r.quot},
                        {"count", r.count},
                        {"rows", r.sub_basis.rows()},
                        {"cols", r.sub_basis.cols()},
                        {"basis", matrix_to_json(r.sub_basis)}});
    return {{"algebra", cat.algebra_hash}, {"dim_bound", cat.dim_bound},          {"complete", cat.complete},
            {"notes", cat.notes},          {"indecomposable_reps", indecs},      {"classes", cls},
            {"indecomposables", cat.indecomposables}, {"conflations", conf}};
}

IsoCatalog catalog_from_document(Lab& lab, const json& doc) {
    if (lab.size() != 0) throw Error("CacheCorrupt", "catalogs restore into a fresh lab only");
    if (doc.at("algebra").get<std::string>() != lab.alg->hash) throw Error("CacheCorrupt", "algebra hash differs");
    const auto& reps = doc.at("indecomposable_reps");
    for (std::size_t i = 0; i < reps.size(); ++i)
        if (lab.register_indec(rep_from_json(lab.alg, reps[i])) != int(i))
            throw Error("CacheCorrupt", "stored module " + std::to_string(i) + " registers to another id");
    IsoCatalog cat;
    cat.lab = &lab;
    cat.dim_bound = doc.at("dim_bound");
    cat.algebra_hash = doc.at("algebra");
    cat.complete = doc.at("complete");
    cat.notes = doc.at("notes").get<std::vector<std::string>>();
    for (auto& c : doc.at("classes")) {
        CatalogClass cc;
        cc.key = c.at("key").get<ClassKey>();
        cc.total = lab.total_of(cc.key);
        cc.dims = c.at("dims").get<std::vector<int>>();
        cc.aut = mpz_class(c.at("aut").get<std::string>());
        cc.aut_crosschecked = c.at("crosschecked");
        cat.index[cc.key] = cat.size();
        cat.classes.push_back(std::move(cc));
    }
    cat.indecomposables = doc.at("indecomposables").get<std::vector<int>>();
    for (auto& r : doc.at("conflations")) {
        ConflationRec rec;
        rec.sub = r.at("sub");
        rec.mid = r.at("mid");
        rec.quot = r.at("quot");
        rec.count = r.at("count");
        rec.sub_basis = matrix_from_json(lab.field(), r.at("basis"), r.at("rows"), r.at("cols"));
        cat.hall[{rec.mid, rec.quot, rec.sub}] = rec.count;
        cat.conflations.push_back(std::move(rec));
    }
    return cat;
}

IsoCatalog load_or_build_catalog(Lab& lab, const CatalogOptions& copt, Cache* cache) {
    if (!cache) return build_catalog(lab, copt);
    const json key = catalog_cache_key(lab, copt);
    if (lab.size() == 0) {
        if (auto doc = cache->get(key)) {
            try {
                return catalog_from_document(lab, *doc);
            } catch (const std::exception& e) {
                cache->warnings.push_back(std::string(e.what()) + ", recomputing");
                if (lab.size() != 0) throw Error("CacheCorrupt", "partially restored lab; rerun without the cache");
            }
        }
    }
    IsoCatalog cat = build_catalog(lab, copt);
    cache->put(key, catalog_document(cat));
    return cat;
}

}  // namespace tilthall
