#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tilthall/suites.hpp"

namespace {

// Exit codes beyond the report contract: 0 pass, 1 fail, 2 unknown only.
constexpr int kUsage = 64;
constexpr int kInput = 65;
constexpr int kIo = 74;

void write_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out || !(out << text) || !out.flush()) throw tilthall::Error("IoError", "cannot write " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

int main(int argc, char** argv) {
    tilthall::RunConfig cfg;
    CLI::App app{"Hall algebras, Gorenstein-projective modules and tilting dualities over finite fields"};
    app.add_option("--algebra", cfg.algebras, "algebra document (repeatable)")->required();
    app.add_option("--tilting", cfg.tilting, "tilting module over the first algebra (default T = A)");
    app.add_option("--dim-bound", cfg.dim_bound, "catalog dimension bound D")->capture_default_str();
    app.add_option("--submodule-cap", cfg.submodule_cap, "submodule enumeration cap (0: per-field defaults)")
        ->capture_default_str();
    app.add_option("--exhaust-cap", cfg.exhaust_cap, "exhaustive search cap")->capture_default_str();
    app.add_option("--syzygy-bound", cfg.syzygy_bound, "syzygy chain bound")->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for randomized searches")->capture_default_str();
    app.add_option("--suite", cfg.suite, "suite to run")
        ->check(CLI::IsMember(tilthall::suite_names()))
        ->capture_default_str();
    app.add_option("--out", cfg.out, "report path (JSON)");
    app.add_option("--cache-dir", cfg.cache_dir, "catalog cache directory (env TILTHALL_CACHE)");
    app.add_flag("--wall-time", cfg.wall_time, "record wall time per check (reports stop being byte-stable)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    }

    tilthall::RunResult res;
    try {
        res = tilthall::run(cfg);
    } catch (const tilthall::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.kind() == "ConfigError" ? kUsage : kInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInput;
    }
    for (auto& w : res.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    if (!cfg.out.empty()) {
        try {
            write_atomic(cfg.out, res.document.dump(2) + "\n");
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return kIo;
        }
    }
    std::fputs(res.report.summary_table().c_str(), stdout);
    return res.exit_code();
}
