#include "tilthall/report.hpp"

#include <algorithm>
#include <cstdio>

namespace tilthall {

using nlohmann::json;

const char* outcome_name(Status s) {
    switch (s) {
        case Status::Yes: return "pass";
        case Status::No: return "fail";
        default: return "unknown";
    }
}

CheckRecord& Report::add(std::string id, std::string anchor, Status s, json cert) {
    CheckRecord r;
    r.id = std::move(id);
    r.anchor = std::move(anchor);
    r.status = s;
    r.certificate = std::move(cert);
    records.push_back(std::move(r));
    return records.back();
}

CheckRecord& Report::add(std::string id, std::string anchor, bool ok, json cert) {
    return add(std::move(id), std::move(anchor), ok ? Status::Yes : Status::No, std::move(cert));
}

void Report::merge(const Report& o, const std::string& prefix) {
    for (auto r : o.records) {
        r.id = prefix + r.id;
        records.push_back(std::move(r));
    }
}

int Report::count(Status s) const {
    return int(std::count_if(records.begin(), records.end(), [&](const CheckRecord& r) { return r.status == s; }));
}

int Report::exit_code() const {
    if (count(Status::No)) return 1;
    if (count(Status::Unknown)) return 2;
    return 0;
}

void Report::sort() {
    std::stable_sort(records.begin(), records.end(),
                     [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
}

json Report::to_json() const {
    json rs = json::array();
    for (auto& r : records) {
        json j = {{"id", r.id}, {"anchor", r.anchor}, {"status", outcome_name(r.status)}, {"certificate", r.certificate}};
        if (r.wall_ms >= 0) j["wall_ms"] = r.wall_ms;
        rs.push_back(std::move(j));
    }
    return {{"records", rs},
            {"summary", {{"pass", count(Status::Yes)}, {"fail", count(Status::No)}, {"unknown", count(Status::Unknown)}}}};
}

Report Report::from_json(const json& j) {
    Report out;
    for (auto& r : j.at("records")) {
        const std::string s = r.at("status");
        CheckRecord& c = out.add(r.at("id"), r.at("anchor"),
                                 s == "pass" ? Status::Yes : s == "fail" ? Status::No : Status::Unknown,
                                 r.value("certificate", json::object()));
        c.wall_ms = r.value("wall_ms", -1.0);
    }
    return out;
}

std::string Report::summary_table() const {
    std::size_t w = 5, wa = 6;
    for (auto& r : records) {
        w = std::max(w, r.id.size());
        wa = std::max(wa, r.anchor.size());
    }
    std::string out;
    char buf[512];
    auto line = [&](const std::string& a, const std::string& b, const std::string& c) {
        std::snprintf(buf, sizeof buf, "%-*s  %-*s  %s\n", int(w), a.c_str(), int(wa), b.c_str(), c.c_str());
        out += buf;
    };
    line("check", "anchor", "status");
    line(std::string(w, '-'), std::string(wa, '-'), "-------");
    for (auto& r : records) line(r.id, r.anchor, outcome_name(r.status));
    std::snprintf(buf, sizeof buf, "%d pass, %d fail, %d unknown\n", count(Status::Yes), count(Status::No),
                  count(Status::Unknown));
    out += buf;
    return out;
}

}  // namespace tilthall
