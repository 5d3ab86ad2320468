#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tilthall/lab.hpp"

namespace tilthall {

/// One verified statement.  Yes = pass, No = fail.
struct CheckRecord {
    std::string id;
    std::string anchor;
    Status status = Status::Unknown;
    nlohmann::json certificate = nlohmann::json::object();
    double wall_ms = -1;  // negative: not recorded
};

const char* outcome_name(Status s);

struct Report {
    std::vector<CheckRecord> records;

    CheckRecord& add(std::string id, std::string anchor, Status s, nlohmann::json cert = nlohmann::json::object());
    CheckRecord& add(std::string id, std::string anchor, bool ok, nlohmann::json cert = nlohmann::json::object());
    /// Appends the records of `o`, prefixing their ids.
    void merge(const Report& o, const std::string& prefix = "");

    int count(Status s) const;
    bool passed() const { return count(Status::No) == 0 && count(Status::Unknown) == 0; }
    /// 0 all pass, 1 any fail, 2 unknowns only.
    int exit_code() const;
    /// Records sorted by id (stable).
    void sort();

    nlohmann::json to_json() const;
    static Report from_json(const nlohmann::json& j);
    std::string summary_table() const;
};

/// Counter behind one report record: failures dominate unknowns.
struct Tally {
    int checked = 0, failed = 0, unknown = 0;
    nlohmann::json failures = nlohmann::json::array();
    nlohmann::json unknowns = nlohmann::json::array();

    void fail(nlohmann::json w) {
        ++failed;
        if (failures.size() < 16) failures.push_back(std::move(w));
    }
    void undecided(nlohmann::json w) {
        ++unknown;
        if (unknowns.size() < 16) unknowns.push_back(std::move(w));
    }
    Status status() const { return failed ? Status::No : unknown ? Status::Unknown : Status::Yes; }
    nlohmann::json cert() const {
        nlohmann::json j = {{"checked", checked}, {"failed", failed}, {"unknown", unknown}};
        if (failed) j["failures"] = failures;
        if (unknown) j["unknowns"] = unknowns;
        return j;
    }
};

}  // namespace tilthall
