#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>

#include "tilthall/hallcore.hpp"
#include "tilthall/suites.hpp"
#include "tilthall/tiltdual.hpp"

namespace tilthall {

using nlohmann::json;

namespace {

const std::vector<std::string> kSuites = {"catalog",    "hall-table",    "certify-tilting", "certify-gp",
                                          "verify-duality", "verify-prop47", "verify-thm410",   "k0-compare",
                                          "weak-gorenstein", "all"};

json verdict_json(const Verdict& v) {
    return {{"verdict", status_name(v.status)}, {"bound", v.bound_used}, {"certificate", v.certificate}};
}

// One algebra with its catalog, and the tilting data built on demand.
struct AlgebraCtx {
    std::string label;
    AlgebraPtr alg;
    std::unique_ptr<Lab> lab;
    IsoCatalog cat;
    std::optional<Rep> tilt;  // given tilting module; T = A otherwise

    struct Tilt {
        Rep t;
        bool identity = false;
        TiltingCertificate cert;
        BimoduleData d;
        std::unique_ptr<Lab> le, lb;
        IsoCatalog ce, cb;
    };
    std::unique_ptr<Tilt> tilt_data;
    std::unique_ptr<TruncatedHall> hall;
};

class Runner {
public:
    explicit Runner(const RunConfig& cfg) : cfg_(cfg) {
        const std::string dir = resolve_cache_dir(cfg.cache_dir);
        if (!dir.empty()) cache_ = std::make_unique<Cache>(dir);
        for (std::size_t i = 0; i < cfg.algebras.size(); ++i) {
            auto c = std::make_unique<AlgebraCtx>();
            c->label = std::filesystem::path(cfg.algebras[i]).stem().string();
            for (auto& o : ctx_)
                if (o->label == c->label) c->label += "#" + std::to_string(i);
            c->alg = load_algebra(cfg.algebras[i]);
            c->lab = std::make_unique<Lab>(c->alg, cfg.lab_options());
            c->cat = load_or_build_catalog(*c->lab, catalog_options(), cache_.get());
            if (i == 0 && !cfg.tilting.empty()) c->tilt = load_rep(c->alg, cfg.tilting);
            ctx_.push_back(std::move(c));
        }
    }

    Report run_suite(const std::string& s) {
        if (s == "all") {
            Report r;
            for (auto& n : kSuites)
                if (n != "all") r.merge(run_suite(n));
            return r;
        }
        Report r;
        for (auto& c : ctx_) {
            Report one;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                if (s == "catalog") one = catalog(*c);
                else if (s == "hall-table") one = hall_table(*c);
                else if (s == "certify-tilting") one = certify_tilting_suite(*c);
                else if (s == "certify-gp") one = certify_gp(*c);
                else if (s == "verify-duality") one = verify_duality(*c);
                else if (s == "verify-prop47") one = prop47(*c);
                else if (s == "verify-thm410") one = thm410(*c);
                else if (s == "k0-compare") one = k0(*c);
                else if (s == "weak-gorenstein") one = weak_gorenstein(*c);
                else throw Error("ConfigError", "unknown suite " + s);
            } catch (const Error& e) {
                if (e.kind() == "ConfigError") throw;
                one = Report();
                one.add("error", "the suite could not run to completion", Status::Unknown,
                        {{"kind", e.kind()}, {"message", e.what()}});
            }
            if (cfg_.wall_time) {
                const double ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
                for (auto& rec : one.records) rec.wall_ms = ms / double(one.records.size());
            }
            r.merge(one, s + "." + c->label + ".");
        }
        return r;
    }

    std::vector<std::string> warnings() const { return cache_ ? cache_->warnings : std::vector<std::string>{}; }

private:
    CatalogOptions catalog_options() const {
        CatalogOptions o;
        o.dim_bound = cfg_.dim_bound;
        return o;
    }
    int bound() const { return cfg_.syzygy_bound; }

    TruncatedHall& hall(AlgebraCtx& c) {
        if (!c.hall) c.hall = std::make_unique<TruncatedHall>(c.cat);
        return *c.hall;
    }

    AlgebraCtx::Tilt& tilt(AlgebraCtx& c) {
        if (c.tilt_data) return *c.tilt_data;
        auto t = std::make_unique<AlgebraCtx::Tilt>();
        t->identity = !c.tilt;
        t->t = c.tilt ? *c.tilt : c.lab->regular().rep;
        t->cert = certify_tilting(*c.lab, t->t, bound(), c.cat.indecomposables);
        t->d = end_bimodule(t->t);
        t->le = std::make_unique<Lab>(t->d.e, cfg_.lab_options());
        t->lb = std::make_unique<Lab>(t->d.b, cfg_.lab_options());
        t->ce = load_or_build_catalog(*t->le, catalog_options(), cache_.get());
        t->cb = load_or_build_catalog(*t->lb, catalog_options(), cache_.get());
        c.tilt_data = std::move(t);
        return *c.tilt_data;
    }

    // ------------------------------------------------------------ suites

    Report catalog(AlgebraCtx& c) {
        Report r;
        json cert = {{"algebra", c.alg->hash},
                     {"dim_bound", c.cat.dim_bound},
                     {"classes", c.cat.size()},
                     {"indecomposables", c.cat.indecomposables.size()},
                     {"conflations", c.cat.conflations.size()},
                     {"notes", c.cat.notes}};
        r.add("complete", "every module up to the dimension bound has a representative", c.cat.complete, cert);
        return r;
    }

    Report hall_table(AlgebraCtx& c) {
        Report r;
        TruncatedHall& h = hall(c);
        r.merge(h.verify(), "table.");
        r.merge(verify_counting(*c.lab, c.cat, 1u << 12), "counting.");
        r.add("structure-constants", "Hall table within the dimension bound", Status::Yes, h.to_json());
        return r;
    }

    Report certify_tilting_suite(AlgebraCtx& c) {
        Report r;
        auto cert_json = [](const TiltingCertificate& tc) {
            json terms = json::array();
            for (auto& k : tc.term_keys) terms.push_back(k);
            return json{{"failure", tc.failure},          {"pd", tc.pd.value},      {"pd_status", status_name(tc.pd.status)},
                        {"rigid", verdict_json(tc.rigid)}, {"coresolution", terms}, {"strong", status_name(tc.strong.status)},
                        {"certificate", tc.certificate}};
        };
        TiltingCertificate reg = certify_tilting(*c.lab, c.lab->regular().rep, bound());
        r.add("regular", "the regular module is tilting of projective dimension zero",
              reg.yes() && reg.pd.value == 0 ? Status::Yes : reg.status == Status::Unknown ? Status::Unknown : Status::No,
              cert_json(reg));
        if (c.tilt) {
            AlgebraCtx::Tilt& t = tilt(c);
            r.add("T", "T satisfies the tilting axioms with an explicit coresolution of A", t.cert.status,
                  cert_json(t.cert));
            Lab& le = *t.le;
            WakamatsuCertificate w = certify_wakamatsu(*c.lab, le, t.d, bound());
            r.add("T.wakamatsu", "T is Wakamatsu tilting as a bimodule", w.status, w.to_json());
        }
        return r;
    }

    // Per-class verdicts are classifications: a record passes when both
    // verdicts are decided.  The consistency records are checks.
    Report certify_gp(AlgebraCtx& c) {
        Report r;
        Tally proj, implies;
        for (int id : c.cat.indecomposables) {
            const ClassKey k{id};
            Verdict g = gp_verdict(*c.lab, id, bound());
            Verdict s = sgp_verdict(*c.lab, k, bound());
            const bool decided = g.status != Status::Unknown && s.status != Status::Unknown;
            r.add("class-" + std::to_string(id), "Gorenstein-projective and semi-Gorenstein-projective verdicts",
                  decided ? Status::Yes : Status::Unknown,
                  {{"key", k}, {"dims", c.lab->dims_of(k)}, {"gp", verdict_json(g)}, {"sgp", verdict_json(s)}});
            if (c.lab->is_projective(id)) {
                ++proj.checked;
                if (g.no()) proj.fail(id);
                else if (!g.yes()) proj.undecided(id);
            }
            if (g.yes()) {
                ++implies.checked;
                if (s.no()) implies.fail(id);
                else if (!s.yes()) implies.undecided(id);
            }
        }
        r.add("projectives-are-gp", "every projective module is Gorenstein-projective", proj.status(), proj.cert());
        r.add("gp-implies-sgp", "Gorenstein-projective implies semi-Gorenstein-projective", implies.status(),
              implies.cert());
        return r;
    }

    Report verify_duality(AlgebraCtx& c) {
        AlgebraCtx::Tilt& t = tilt(c);
        Report r;
        DualitySetup s{c.lab.get(), t.le.get(), &c.cat, &t.ce, t.d, swap_sides(t.d), bound()};
        const SubcatSpec wa = w_spec(*c.lab, *t.le, t.d, bound());
        const SubcatSpec we = w_spec(*t.le, *c.lab, s.swapped, bound());
        r.merge(verify_resolving_duality(s, wa, we), "duality.");
        const int ell = t.cert.pd.status == Status::Yes ? t.cert.pd.value : -1;
        r.merge(subcategory_identities(*c.lab, *t.le, t.d, c.cat, ell, bound()), "identities.");
        return r;
    }

    ExactStructure prop47_structure(AlgebraCtx& c) {
        if (c.tilt) return perp_gp1_structure(*c.lab, c.cat, c.lab->key_of(*c.tilt), bound());
        ExactStructure m = module_structure(*c.lab, c.cat, bound());
        if (weakly_gorenstein_check(*c.lab, c.cat, m, bound()).yes()) return m;
        return gp_structure(*c.lab, c.cat, bound());
    }

    Report prop47(AlgebraCtx& c) {
        ExactStructure s = prop47_structure(c);
        FrobeniusSdh gp(*c.lab);
        return verify_prop47(*c.lab, c.cat, hall(c), s, gp, bound());
    }

    Report thm410(AlgebraCtx& c) {
        AlgebraCtx::Tilt& t = tilt(c);
        Report r;
        if (!t.cert.yes() || t.cert.pd.value > 1) {
            r.add("precondition", "T is a certified tilting module of projective dimension at most one",
                  t.cert.status == Status::Unknown ? Status::Unknown : Status::No, {{"failure", t.cert.failure}});
            return r;
        }
        XiSetup s{c.lab.get(), t.le.get(), t.lb.get(), &c.cat, t.d, bound()};
        FrobeniusSdh ga(*c.lab), gb(*t.lb);
        return verify_thm410(s, ga, gb, t.identity);
    }

    Report k0(AlgebraCtx& c) {
        AlgebraCtx::Tilt& t = tilt(c);
        const SubcatSpec gp = SubcatSpec::of(SubcatSpec::Tag::GP);
        K0Result a = k0_presentation(*c.lab, c.cat, gp, bound());
        K0Result b = k0_presentation(*t.lb, t.cb, gp, bound());
        Report r;
        r.add("gp", "Grothendieck groups of GP(A) and GP(B) agree (truncated presentations)", k0_equal(a, b),
              {{"A", a.to_json()}, {"B", b.to_json()}});
        return r;
    }

    Report weak_gorenstein(AlgebraCtx& c) {
        Report r;
        auto commutation = [&](const ExactStructure& s, const std::string& name) {
            TruncatedSdh sdh(*c.lab, hall(c), s);
            r.merge(sdh.verify_commutation(), name + ".");
        };
        ExactStructure mod = module_structure(*c.lab, c.cat, bound());
        Verdict vm = weakly_gorenstein_check(*c.lab, c.cat, mod, bound());
        r.add("mod", "classification: is the module category weakly 1-Gorenstein",
              vm.status == Status::Unknown ? Status::Unknown : Status::Yes, verdict_json(vm));
        if (vm.yes()) commutation(mod, "mod");
        ExactStructure gp = gp_structure(*c.lab, c.cat, bound());
        Verdict vg = weakly_gorenstein_check(*c.lab, c.cat, gp, bound());
        r.add("gp", "the Frobenius category GP(A) is weakly 1-Gorenstein", vg.status, verdict_json(vg));
        if (vg.yes()) commutation(gp, "gp");
        if (c.tilt) {
            ExactStructure pg = perp_gp1_structure(*c.lab, c.cat, c.lab->key_of(*c.tilt), bound());
            Verdict vp = weakly_gorenstein_check(*c.lab, c.cat, pg, bound());
            r.add("perp-gp1", "perp(T) meet GP<=1 is weakly 1-Gorenstein", vp.status, verdict_json(vp));
            if (vp.yes()) commutation(pg, "perp-gp1");
        }
        return r;
    }

    const RunConfig& cfg_;
    std::unique_ptr<Cache> cache_;
    std::vector<std::unique_ptr<AlgebraCtx>> ctx_;
};

}  // namespace

const std::vector<std::string>& suite_names() { return kSuites; }

void RunConfig::validate() const {
    if (algebras.empty()) throw Error("ConfigError", "at least one --algebra is required");
    if (dim_bound < 1) throw Error("ConfigError", "--dim-bound must be positive");
    if (submodule_cap < 0) throw Error("ConfigError", "--submodule-cap must be positive");
    if (exhaust_cap == 0) throw Error("ConfigError", "--exhaust-cap must be positive");
    if (syzygy_bound < 1) throw Error("ConfigError", "--syzygy-bound must be positive");
    if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end())
        throw Error("ConfigError", "unknown suite " + suite);
}

LabOptions RunConfig::lab_options() const {
    LabOptions o;
    o.seed = seed;
    o.exhaust_cap = exhaust_cap;
    o.syzygy_bound = syzygy_bound;
    if (submodule_cap > 0) o.submodule_caps = {submodule_cap, submodule_cap};
    return o;
}

json RunConfig::to_json() const {
    json algs = json::array();
    for (auto& a : algebras) algs.push_back(std::filesystem::path(a).filename().string());
    return {{"algebras", algs},
            {"tilting", tilting.empty() ? json() : json(std::filesystem::path(tilting).filename().string())},
            {"dim_bound", dim_bound},
            {"submodule_cap", submodule_cap},
            {"exhaust_cap", exhaust_cap},
            {"syzygy_bound", syzygy_bound},
            {"seed", seed},
            {"suite", suite}};
}

RunResult run(const RunConfig& cfg) {
    cfg.validate();
    Runner runner(cfg);
    RunResult res;
    res.report = runner.run_suite(cfg.suite);
    res.report.sort();
    res.warnings = runner.warnings();
    res.document = res.report.to_json();
    res.document["tool"] = {{"name", "tilthall"}, {"version", kToolVersion}};
    res.document["config"] = cfg.to_json();
    return res;
}

}  // namespace tilthall
