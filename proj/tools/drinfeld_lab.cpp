/*
   Copyright 2026 the drinfeld-lab authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Command-line front end: parses experiment configs, dispatches to the
// harness operations, and emits report.json (machine, replayable) plus
// summary.csv (human). Exit codes: 0 completed, 2 config error, 3 invariant
// violation.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"

#include "drinfeldlab/io.hpp"
#include "drinfeldlab/localglobal.hpp"
#include "drinfeldlab/version.hpp"

using json = nlohmann::ordered_json;
using namespace dlab;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Config schema helpers
// ---------------------------------------------------------------------------

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok |= (it.key() == k);
        if (!ok) throw ConfigError(path + ": unknown key '" + it.key() + "'");
    }
}

const json& require(const json& j, const std::string& path, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path + ": missing key '" + key + "'");
    return *it;
}

uint64_t get_uint(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) throw ConfigError(path + ": expected a nonnegative integer");
    return j.get<uint64_t>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path + ": expected a string");
    return j.get<std::string>();
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::string first_identifier(const std::string& s) {
    for (size_t i = 0; i < s.size(); ++i) {
        if (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_') {
            size_t j = i;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            return s.substr(i, j - i);
        }
    }
    return "";
}

FieldPtr load_field(const json& cfg) {
    const json& f = require(cfg, "config", "field");
    check_keys(f, "field", {"p", "m", "modulus"});
    uint64_t p = get_uint(require(f, "field", "p"), "field.p");
    if (!is_prime_u64(p)) throw ConfigError("field.p: " + std::to_string(p) + " is not prime");
    uint64_t m = f.contains("m") ? get_uint(f.at("m"), "field.m") : 1;
    if (m == 0) throw ConfigError("field.m: must be >= 1");
    FieldPtr fp = FiniteField::prime(p);
    if (m == 1) {
        if (f.contains("modulus"))
            throw ConfigError("field.modulus: a prime field takes no modulus");
        return fp;
    }
    if (!f.contains("modulus")) return extend_field(fp, m);
    std::string text = get_string(f.at("modulus"), "field.modulus");
    std::string var = first_identifier(text);
    if (var.empty()) throw ConfigError("field.modulus: no variable found in '" + text + "'");
    Poly mod;
    try {
        mod = parse_poly(fp, text, var);
    } catch (const ParseError& e) {
        throw ConfigError(std::string("field.modulus: ") + e.what());
    }
    if (mod.degree() != static_cast<long>(m))
        throw ConfigError("field.modulus: degree " + std::to_string(mod.degree()) +
                          " does not match field.m = " + std::to_string(m));
    try {
        return FiniteField::extension(fp, mod.monic().coeffs(), var);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("field.modulus: ") + e.what());
    }
}

using ModuleMap = std::map<std::string, DrinfeldModule>;

Poly parse_poly_cfg(const FieldPtr& fq, const json& j, const std::string& path) {
    std::string text = get_string(j, path);
    try {
        return parse_poly(fq, text);
    } catch (const ParseError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

ModuleMap load_modules(const FieldPtr& fq, const json& cfg) {
    const json& ms = require(cfg, "config", "modules");
    if (!ms.is_object() || ms.empty())
        throw ConfigError("modules: expected a nonempty object of named modules");
    ModuleMap out;
    for (auto it = ms.begin(); it != ms.end(); ++it) {
        const std::string path = "modules." + it.key();
        check_keys(*it, path, {"phi_t"});
        const json& cs = require(*it, path, "phi_t");
        if (!cs.is_array() || cs.size() < 2)
            throw ConfigError(path + ".phi_t: expected an array of >= 2 coefficient strings");
        std::vector<Poly> coeffs;
        for (size_t i = 0; i < cs.size(); ++i)
            coeffs.push_back(
                parse_poly_cfg(fq, cs[i], path + ".phi_t[" + std::to_string(i) + "]"));
        try {
            out.emplace(it.key(), DrinfeldModule(fq, std::move(coeffs)));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(path + ": " + e.what() +
                              " (the action of t must restrict to ordinary multiplication "
                              "by t in degree zero)");
        }
    }
    return out;
}

const DrinfeldModule& module_by_name(const ModuleMap& mods, const std::string& name,
                                     const std::string& path) {
    auto it = mods.find(name);
    if (it == mods.end()) throw ConfigError(path + ": no module named '" + name + "'");
    return it->second;
}

/// Single-module commands: take params.module if present, otherwise the
/// unique module in the config.
const DrinfeldModule& pick_module(const ModuleMap& mods, const json& params) {
    if (params.contains("module"))
        return module_by_name(mods, get_string(params.at("module"), "params.module"),
                              "params.module");
    if (mods.size() != 1)
        throw ConfigError("params.module: required when the config defines several modules");
    return mods.begin()->second;
}

struct Options {
    size_t degree_bound = 6;
    size_t coeff_bound = 3;
    size_t n_max = 8;
    uint64_t seed = 1;
    size_t jobs = 0;
};

Options load_options(const json& cfg) {
    Options o;
    if (!cfg.contains("options")) return o;
    const json& j = cfg.at("options");
    check_keys(j, "options", {"degree_bound", "coeff_bound", "n_max", "seed", "jobs"});
    if (j.contains("degree_bound"))
        o.degree_bound = get_uint(j.at("degree_bound"), "options.degree_bound");
    if (j.contains("coeff_bound"))
        o.coeff_bound = get_uint(j.at("coeff_bound"), "options.coeff_bound");
    if (j.contains("n_max")) o.n_max = get_uint(j.at("n_max"), "options.n_max");
    if (j.contains("seed")) o.seed = get_uint(j.at("seed"), "options.seed");
    if (j.contains("jobs")) o.jobs = get_uint(j.at("jobs"), "options.jobs");
    return o;
}

InstanceSpec load_instance(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                           const Options& o) {
    const json& in = require(cfg, "config", "instance");
    check_keys(in, "instance", {"components", "point", "lambda_gens"});
    InstanceSpec spec;
    spec.fq = fq;
    const json& comps = require(in, "instance", "components");
    if (!comps.is_array() || comps.empty())
        throw ConfigError("instance.components: expected a nonempty array");
    for (size_t i = 0; i < comps.size(); ++i) {
        const std::string path = "instance.components[" + std::to_string(i) + "]";
        check_keys(comps[i], path, {"module", "multiplicity"});
        const DrinfeldModule& m = module_by_name(
            mods, get_string(require(comps[i], path, "module"), path + ".module"),
            path + ".module");
        uint64_t mult = comps[i].contains("multiplicity")
                            ? get_uint(comps[i].at("multiplicity"), path + ".multiplicity")
                            : 1;
        if (mult == 0) throw ConfigError(path + ".multiplicity: must be >= 1");
        spec.modules.emplace_back(m, static_cast<size_t>(mult));
    }
    auto parse_point = [&](const json& j, const std::string& path) {
        if (!j.is_array()) throw ConfigError(path + ": expected an array of polynomials");
        std::vector<Poly> out;
        for (size_t c = 0; c < j.size(); ++c)
            out.push_back(parse_poly_cfg(fq, j[c], path + "[" + std::to_string(c) + "]"));
        return out;
    };
    spec.point = parse_point(require(in, "instance", "point"), "instance.point");
    if (in.contains("lambda_gens")) {
        const json& gs = in.at("lambda_gens");
        if (!gs.is_array()) throw ConfigError("instance.lambda_gens: expected an array");
        for (size_t g = 0; g < gs.size(); ++g)
            spec.lambda_gens.push_back(
                parse_point(gs[g], "instance.lambda_gens[" + std::to_string(g) + "]"));
    }
    spec.degree_bound = o.degree_bound;
    spec.coeff_bound = o.coeff_bound;
    spec.n_max = o.n_max;
    spec.seed = o.seed;
    spec.jobs = o.jobs;
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("instance: ") + e.what());
    }
    if (spec.rank_hypothesis_violated())
        spec.warnings.push_back("rank(phi) < multiplicity: outside the regime where local "
                                "membership everywhere forces global membership");
    return spec;
}

PrimeIdeal load_prime(const FieldPtr& fq, const json& params, const std::string& key,
                      const std::string& override_text) {
    std::string text = override_text;
    if (text.empty()) {
        if (!params.contains(key))
            throw ConfigError("params." + key + ": required (or pass --prime)");
        text = get_string(params.at(key), "params." + key);
    }
    Poly g;
    try {
        g = parse_poly(fq, text);
    } catch (const ParseError& e) {
        throw ConfigError("prime '" + text + "': " + e.what());
    }
    try {
        return PrimeIdeal(g.monic());
    } catch (const std::invalid_argument& e) {
        throw ConfigError("prime '" + text + "': " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

json records_to_json(const std::vector<PrimeRecord>& records) {
    json arr = json::array();
    for (const auto& r : records) {
        json rec;
        rec["prime"] = r.prime.gen().to_string();
        rec["good"] = r.good;
        for (const auto& [k, v] : r.fields) rec[k] = v;
        arr.push_back(std::move(rec));
    }
    return arr;
}

json kv_to_json(const std::vector<std::pair<std::string, std::string>>& kv) {
    json o = json::object();
    for (const auto& [k, v] : kv) o[k] = v;
    return o;
}

json scan_to_json(const ScanReport& rep) {
    json o;
    o["records"] = records_to_json(rep.records);
    o["aggregate"] = kv_to_json(rep.aggregate);
    return o;
}

json polys_to_json(const std::vector<Poly>& ps) {
    json arr = json::array();
    for (const auto& p : ps) arr.push_back(p.to_string());
    return arr;
}

json spec_to_json(const InstanceSpec& spec) {
    json o;
    json comps = json::array();
    for (const auto& [m, mult] : spec.modules) {
        json c;
        c["phi_t"] = skew_to_string(m.phi_t());
        c["rank"] = m.rank();
        c["multiplicity"] = mult;
        comps.push_back(std::move(c));
    }
    o["components"] = std::move(comps);
    o["point"] = polys_to_json(spec.point);
    json gens = json::array();
    for (const auto& g : spec.lambda_gens) gens.push_back(polys_to_json(g));
    o["lambda_gens"] = std::move(gens);
    o["degree_bound"] = spec.degree_bound;
    o["coeff_bound"] = spec.coeff_bound;
    o["n_max"] = spec.n_max;
    o["seed"] = spec.seed;
    o["warnings"] = spec.warnings;
    return o;
}

void csv_scan_rows(std::vector<std::string>& rows, const ScanReport& rep) {
    rows.push_back("prime,good,details");
    for (const auto& r : rep.records) {
        std::string d;
        for (const auto& [k, v] : r.fields) {
            if (!d.empty()) d += ";";
            d += k + "=" + v;
        }
        rows.push_back("\"" + r.prime.gen().to_string() + "\"," +
                       (r.good ? "true" : "false") + ",\"" + d + "\"");
    }
    rows.push_back("");
    for (const auto& [k, v] : rep.aggregate) rows.push_back(k + "," + v);
}

struct CommandOutput {
    json result;
    std::vector<std::string> csv;
};

// ---------------------------------------------------------------------------
// Command handlers
// ---------------------------------------------------------------------------

const json& params_of(const json& cfg, std::initializer_list<const char*> allowed) {
    static const json empty = json::object();
    if (!cfg.contains("params")) return empty;
    check_keys(cfg.at("params"), "params", allowed);
    return cfg.at("params");
}

CommandOutput cmd_info(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                       const Options& o) {
    params_of(cfg, {});
    CommandOutput out;
    json f;
    f["p"] = fq->p();
    f["q"] = fq->size();
    size_t deg = 1;
    for (FieldPtr t = fq; t && !t->is_prime_field(); t = t->base()) deg *= t->rel_degree();
    f["degree"] = deg;
    out.result["field"] = std::move(f);
    json ms = json::object();
    for (const auto& [name, m] : mods) {
        json mj;
        mj["phi_t"] = skew_to_string(m.phi_t());
        mj["rank"] = m.rank();
        ms[name] = std::move(mj);
    }
    out.result["modules"] = std::move(ms);
    if (cfg.contains("instance")) {
        InstanceSpec spec = load_instance(fq, mods, cfg, o);
        out.result["instance"] = spec_to_json(spec);
    }
    out.csv.push_back("key,value");
    out.csv.push_back("q," + std::to_string(fq->size()));
    out.csv.push_back("modules," + std::to_string(mods.size()));
    return out;
}

CommandOutput cmd_reduce(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                         const Options& o, const std::string& prime_flag) {
    const json& params = params_of(cfg, {"prime"});
    InstanceSpec spec = load_instance(fq, mods, cfg, o);
    PrimeIdeal w = load_prime(fq, params, "prime", prime_flag);
    CommandOutput out;
    out.result["prime"] = w.gen().to_string();
    auto ri = reduce_instance(spec, w);
    if (!ri) {
        out.result["good"] = false;
        out.csv = {"key,value", "good,false"};
        return out;
    }
    out.result["good"] = true;
    out.result["module_dimension"] = ri->mod.dim();
    out.result["invariant_factors"] = polys_to_json(ri->mod.structure());
    out.result["point_order"] = ri->mod.order_of(ri->point).to_string();
    out.result["lambda_rank"] = ri->lambda_basis.size();
    out.result["point_in_lambda"] = ri->mod.member(ri->point, ri->lambda_basis);
    out.csv = {"key,value",
               "good,true",
               "module_dimension," + std::to_string(ri->mod.dim()),
               "lambda_rank," + std::to_string(ri->lambda_basis.size()),
               std::string("point_in_lambda,") +
                   (ri->mod.member(ri->point, ri->lambda_basis) ? "true" : "false")};
    return out;
}

CommandOutput cmd_structure(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                            const std::string& prime_flag) {
    const json& params = params_of(cfg, {"module", "prime"});
    const DrinfeldModule& m = pick_module(mods, params);
    PrimeIdeal w = load_prime(fq, params, "prime", prime_flag);
    if (!is_good_prime(m, w))
        throw ConfigError("prime '" + w.gen().to_string() + "' is bad for the module");
    OperatorModule mod(reduce_at(m, w));
    CommandOutput out;
    out.result["prime"] = w.gen().to_string();
    out.result["invariant_factors"] = polys_to_json(mod.structure());
    out.result["exponent"] = mod.exponent().to_string();
    out.result["dimension"] = mod.dim();
    out.csv.push_back("key,value");
    out.csv.push_back("prime,\"" + w.gen().to_string() + "\"");
    std::string fs;
    for (const auto& f : mod.structure()) {
        if (!fs.empty()) fs += ";";
        fs += f.to_string();
    }
    out.csv.push_back("invariant_factors,\"" + fs + "\"");
    return out;
}

CommandOutput cmd_order(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                        const std::string& prime_flag) {
    const json& params = params_of(cfg, {"module", "x", "prime"});
    const DrinfeldModule& m = pick_module(mods, params);
    Poly x = parse_poly_cfg(fq, require(params, "params", "x"), "params.x");
    CommandOutput out;
    out.result["x"] = x.to_string();
    if (params.contains("prime") || !prime_flag.empty()) {
        PrimeIdeal w = load_prime(fq, params, "prime", prime_flag);
        if (!is_good_prime(m, w))
            throw ConfigError("prime '" + w.gen().to_string() + "' is bad for the module");
        auto red = reduce_at(m, w);
        OperatorModule mod(red);
        Poly ord = mod.order_of(mod.encode({reduce_point(red, x)}));
        out.result["prime"] = w.gen().to_string();
        out.result["local_order"] = ord.to_string();
        out.csv = {"key,value", "local_order,\"" + ord.to_string() + "\""};
        return out;
    }
    auto sample = default_sample_primes(m);
    out.result["sample_primes"] = json::array();
    for (const auto& w : sample) out.result["sample_primes"].push_back(w.gen().to_string());
    auto g = torsion_order_or_none(m, x, sample);
    out.result["torsion_order"] = g ? json(g->to_string()) : json(nullptr);
    out.csv = {"key,value", "torsion_order," + (g ? "\"" + g->to_string() + "\"" : "none")};
    return out;
}

CommandOutput cmd_scan(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                       const Options& o) {
    params_of(cfg, {});
    InstanceSpec spec = load_instance(fq, mods, cfg, o);
    ScanReport rep = scan_membership(spec);
    CommandOutput out;
    out.result["instance"] = spec_to_json(spec);
    out.result["scan"] = scan_to_json(rep);
    csv_scan_rows(out.csv, rep);
    return out;
}

CommandOutput cmd_witness(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                          const Options& o) {
    params_of(cfg, {});
    InstanceSpec spec = load_instance(fq, mods, cfg, o);
    auto w = find_witness(spec);
    CommandOutput out;
    out.result["instance"] = spec_to_json(spec);
    out.result["witness"] = w ? json(w->gen().to_string()) : json(nullptr);
    out.csv = {"key,value", "witness," + (w ? "\"" + w->gen().to_string() + "\"" : "none")};
    return out;
}

json membership_to_json(const MembershipCertificate& cert) {
    json o;
    o["found"] = cert.found;
    if (cert.found) {
        o["coefficients"] = polys_to_json(cert.coeffs);
        o["torsion_shift"] = polys_to_json(cert.torsion_shift);
    }
    return o;
}

CommandOutput cmd_global(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                         const Options& o) {
    params_of(cfg, {});
    InstanceSpec spec = load_instance(fq, mods, cfg, o);
    auto cert = global_membership_bounded(spec);
    CommandOutput out;
    out.result["instance"] = spec_to_json(spec);
    out.result["membership"] = membership_to_json(cert);
    out.csv = {"key,value", std::string("found,") + (cert.found ? "true" : "false")};
    return out;
}

json certificate_to_json(const CounterexampleCertificate& cert) {
    json o;
    o["alphas"] = polys_to_json(cert.alphas);
    json rows = json::array();
    for (const auto& row : cert.M) rows.push_back(polys_to_json(row));
    o["matrix"] = std::move(rows);
    return o;
}

/// Certify red(P) in red(Lambda) at every good prime of degree <= D.
ScanReport certify_sweep(const InstanceSpec& spec) {
    auto primes = primes_of_degree_up_to(spec.fq, spec.degree_bound);
    ScanReport rep;
    rep.records = scan_primes(primes, spec.jobs, [&](const PrimeIdeal& w) {
        PrimeRecord rec{w, false, {}};
        bool good = true;
        for (const auto& [m, mult] : spec.modules) good &= is_good_prime(m, w);
        if (!good) {
            rec.fields.push_back({"verdict", "bad-prime"});
            return rec;
        }
        rec.good = true;
        auto cert = certify_counterexample_at(spec, w);
        std::string alphas;
        for (const auto& a : cert.alphas) {
            if (!alphas.empty()) alphas += ";";
            alphas += a.to_string();
        }
        std::string mat;
        for (const auto& row : cert.M)
            for (const auto& x : row) {
                if (!mat.empty()) mat += ";";
                mat += x.to_string();
            }
        rec.fields.push_back({"alphas", alphas});
        rec.fields.push_back({"matrix", mat});
        return rec;
    });
    size_t good = 0;
    for (const auto& r : rep.records) good += r.good;
    rep.aggregate = {{"good_primes", std::to_string(good)},
                     {"certified", std::to_string(good)}};
    return rep;
}

CommandOutput cmd_counterexample(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                                 const Options& o) {
    const json& params = params_of(cfg, {"module", "points"});
    const DrinfeldModule& m = pick_module(mods, params);
    const json& pts = require(params, "params", "points");
    if (!pts.is_array() || pts.empty())
        throw ConfigError("params.points: expected a nonempty array");
    std::vector<Poly> points;
    for (size_t i = 0; i < pts.size(); ++i)
        points.push_back(parse_poly_cfg(fq, pts[i], "params.points[" + std::to_string(i) + "]"));
    InstanceSpec spec;
    try {
        spec = build_counterexample(m, points, o.degree_bound, o.coeff_bound, o.seed);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("params.points: ") + e.what());
    }
    spec.n_max = o.n_max;
    spec.jobs = o.jobs;
    CommandOutput out;
    out.result["instance"] = spec_to_json(spec);
    auto w = find_witness(spec);
    out.result["witness"] = w ? json(w->gen().to_string()) : json(nullptr);
    out.result["membership"] = membership_to_json(global_membership_bounded(spec));
    ScanReport rep = certify_sweep(spec);
    out.result["certificates"] = scan_to_json(rep);
    out.csv = {"key,value", "witness," + (w ? "\"" + w->gen().to_string() + "\"" : "none"),
               std::string("global_found,") +
                   (out.result["membership"]["found"].get<bool>() ? "true" : "false")};
    for (const auto& [k, v] : rep.aggregate) out.csv.push_back(k + "," + v);
    return out;
}

CommandOutput cmd_certify(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                          const Options& o, const std::string& prime_flag) {
    const json& params = params_of(cfg, {"prime"});
    InstanceSpec spec = load_instance(fq, mods, cfg, o);
    PrimeIdeal w = load_prime(fq, params, "prime", prime_flag);
    auto cert = certify_counterexample_at(spec, w);
    CommandOutput out;
    out.result["instance"] = spec_to_json(spec);
    out.result["prime"] = w.gen().to_string();
    out.result["certificate"] = certificate_to_json(cert);
    std::string alphas;
    for (const auto& a : cert.alphas) {
        if (!alphas.empty()) alphas += ";";
        alphas += a.to_string();
    }
    out.csv = {"key,value", "prime,\"" + w.gen().to_string() + "\"",
               "alphas,\"" + alphas + "\""};
    return out;
}

json density_to_json(const DensityReport& rep) {
    json o = scan_to_json(rep.scan);
    o["eligible"] = rep.eligible;
    o["hits"] = rep.hits;
    o["undecided"] = rep.undecided;
    o["fraction"] = rep.fraction();
    return o;
}

CommandOutput cmd_density(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                          const Options& o, const std::string& prime_flag) {
    const json& params = params_of(cfg, {"instances", "prime"});
    const json& insts = require(params, "params", "instances");
    if (!insts.is_array() || insts.empty())
        throw ConfigError("params.instances: expected a nonempty array");
    std::vector<std::pair<DrinfeldModule, std::vector<Poly>>> instances;
    for (size_t i = 0; i < insts.size(); ++i) {
        const std::string path = "params.instances[" + std::to_string(i) + "]";
        check_keys(insts[i], path, {"module", "points"});
        const DrinfeldModule& m = module_by_name(
            mods, get_string(require(insts[i], path, "module"), path + ".module"),
            path + ".module");
        const json& pts = require(insts[i], path, "points");
        if (!pts.is_array()) throw ConfigError(path + ".points: expected an array");
        std::vector<Poly> xs;
        for (size_t c = 0; c < pts.size(); ++c)
            xs.push_back(parse_poly_cfg(fq, pts[c], path + ".points[" + std::to_string(c) + "]"));
        instances.emplace_back(m, std::move(xs));
    }
    PrimeIdeal P = load_prime(fq, params, "prime", prime_flag);
    DensityReport rep = vanishing_density(instances, P, o.degree_bound, o.jobs);
    CommandOutput out;
    out.result["prime"] = P.gen().to_string();
    out.result["density"] = density_to_json(rep);
    csv_scan_rows(out.csv, rep.scan);
    return out;
}

CommandOutput cmd_torsion_density(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                                  const Options& o, const std::string& prime_flag) {
    const json& params = params_of(cfg, {"module", "x", "T", "m", "prime", "cap"});
    const DrinfeldModule& m = pick_module(mods, params);
    Poly x = parse_poly_cfg(fq, require(params, "params", "x"), "params.x");
    Poly T = parse_poly_cfg(fq, require(params, "params", "T"), "params.T");
    uint64_t tm = get_uint(require(params, "params", "m"), "params.m");
    uint64_t cap = params.contains("cap") ? get_uint(params.at("cap"), "params.cap") : 4;
    PrimeIdeal P = load_prime(fq, params, "prime", prime_flag);
    DensityReport rep;
    try {
        rep = torsion_matching_density(m, x, T, P, tm, o.degree_bound, cap, o.jobs);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    CommandOutput out;
    out.result["prime"] = P.gen().to_string();
    out.result["x"] = x.to_string();
    out.result["T"] = T.to_string();
    out.result["m"] = tm;
    out.result["density"] = density_to_json(rep);
    csv_scan_rows(out.csv, rep.scan);
    return out;
}

CommandOutput cmd_orbit(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                        const Options& o) {
    const json& params = params_of(cfg, {"w"});
    InstanceSpec spec = load_instance(fq, mods, cfg, o);
    Poly w = parse_poly_cfg(fq, require(params, "params", "w"), "params.w");
    OrbitReport rep;
    try {
        rep = orbit_scan(spec, w);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("params.w: ") + e.what());
    }
    CommandOutput out;
    out.result["instance"] = spec_to_json(spec);
    out.result["w"] = w.to_string();
    out.result["scan"] = scan_to_json(rep.scan);
    out.result["local_all_hit"] = rep.local_all_hit;
    out.result["global_hit_n"] = rep.global_hit_n ? json(*rep.global_hit_n) : json(nullptr);
    csv_scan_rows(out.csv, rep.scan);
    return out;
}

CommandOutput cmd_support(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                          const Options& o) {
    const json& params = params_of(cfg, {"Q", "w1", "w2"});
    InstanceSpec spec = load_instance(fq, mods, cfg, o);
    const json& qj = require(params, "params", "Q");
    if (!qj.is_array()) throw ConfigError("params.Q: expected an array of polynomials");
    std::vector<Poly> Q;
    for (size_t c = 0; c < qj.size(); ++c)
        Q.push_back(parse_poly_cfg(fq, qj[c], "params.Q[" + std::to_string(c) + "]"));
    Poly w1 = parse_poly_cfg(fq, require(params, "params", "w1"), "params.w1");
    Poly w2 = parse_poly_cfg(fq, require(params, "params", "w2"), "params.w2");
    SupportReport rep;
    try {
        rep = support_scan(spec, Q, w1, w2);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    CommandOutput out;
    out.result["instance"] = spec_to_json(spec);
    out.result["Q"] = polys_to_json(Q);
    out.result["w1"] = w1.to_string();
    out.result["w2"] = w2.to_string();
    out.result["scan"] = scan_to_json(rep.scan);
    out.result["global_n"] = rep.global_n ? json(*rep.global_n) : json(nullptr);
    out.result["global_T"] = polys_to_json(rep.global_T);
    csv_scan_rows(out.csv, rep.scan);
    return out;
}

CommandOutput cmd_detect(const FieldPtr& fq, const ModuleMap& mods, const json& cfg,
                         const Options& o) {
    const json& params = params_of(cfg, {"module", "points"});
    const DrinfeldModule& m = pick_module(mods, params);
    const json& pts = require(params, "params", "points");
    if (!pts.is_array() || pts.empty())
        throw ConfigError("params.points: expected a nonempty array");
    std::vector<Poly> points;
    for (size_t i = 0; i < pts.size(); ++i)
        points.push_back(parse_poly_cfg(fq, pts[i], "params.points[" + std::to_string(i) + "]"));
    auto rel = detect_relation(m, points, o.coeff_bound);
    CommandOutput out;
    out.result["points"] = polys_to_json(points);
    out.result["coeff_bound"] = o.coeff_bound;
    out.result["relation"] = rel ? polys_to_json(*rel) : json(nullptr);
    std::string rs = "none";
    if (rel) {
        rs.clear();
        for (const auto& a : *rel) {
            if (!rs.empty()) rs += ";";
            rs += a.to_string();
        }
        rs = "\"" + rs + "\"";
    }
    out.csv = {"key,value", "relation," + rs};
    return out;
}

// ---------------------------------------------------------------------------
// validate: schema and preflight diagnostics, no computation side effects
// ---------------------------------------------------------------------------

int cmd_validate(const json& cfg) {
    std::vector<std::string> diags;
    FieldPtr fq;
    try {
        check_keys(cfg, "config", {"field", "modules", "instance", "params", "options"});
        fq = load_field(cfg);
    } catch (const std::exception& e) {
        diags.push_back(e.what());
    }
    ModuleMap mods;
    if (fq) {
        try {
            mods = load_modules(fq, cfg);
        } catch (const std::exception& e) {
            diags.push_back(e.what());
        }
    }
    Options o;
    try {
        o = load_options(cfg);
    } catch (const std::exception& e) {
        diags.push_back(e.what());
    }
    if (fq && !mods.empty() && cfg.contains("instance")) {
        try {
            InstanceSpec spec = load_instance(fq, mods, cfg, o);
            // good/bad prime preflight over the scan horizon
            size_t bad = 0, total = 0;
            for (const auto& w : primes_of_degree_up_to(fq, spec.degree_bound)) {
                ++total;
                for (const auto& [m, mult] : spec.modules)
                    if (!is_good_prime(m, w)) {
                        ++bad;
                        break;
                    }
            }
            std::cout << "instance: " << (total - bad) << " good / " << bad << " bad primes up "
                      << "to degree " << spec.degree_bound << "\n";
            for (const auto& wmsg : spec.warnings) std::cout << "warning: " << wmsg << "\n";
        } catch (const std::exception& e) {
            diags.push_back(e.what());
        }
    }
    if (fq && !mods.empty() && cfg.contains("params") && cfg.at("params").is_object() &&
        cfg.at("params").contains("prime")) {
        try {
            PrimeIdeal w = load_prime(fq, cfg.at("params"), "prime", "");
            for (const auto& [name, m] : mods)
                if (!is_good_prime(m, w))
                    std::cout << "warning: prime '" << w.gen().to_string()
                              << "' is bad for module '" << name << "'\n";
        } catch (const std::exception& e) {
            diags.push_back(e.what());
        }
    }
    for (const auto& d : diags) std::cout << "error: " << d << "\n";
    if (diags.empty()) {
        std::cout << "ok: 0 diagnostics\n";
        return 0;
    }
    return 2;
}

// ---------------------------------------------------------------------------

void write_reports(const std::filesystem::path& outdir, const std::string& command,
                   const json& cfg, const Options& o, const CommandOutput& out,
                   double wall_seconds) {
    std::filesystem::create_directories(outdir);
    json rep;
    rep["tool"] = kToolName;
    rep["version"] = kToolVersion;
    rep["command"] = command;
    rep["seed"] = o.seed;
    json oj;
    oj["degree_bound"] = o.degree_bound;
    oj["coeff_bound"] = o.coeff_bound;
    oj["n_max"] = o.n_max;
    oj["seed"] = o.seed;
    rep["options"] = std::move(oj);
    // jobs is an execution detail (like wall time); keeping it out of the
    // replayable report makes report.json byte-identical across --jobs
    json cfg_replay = cfg;
    if (cfg_replay.contains("options")) cfg_replay["options"].erase("jobs");
    rep["config"] = std::move(cfg_replay);
    rep["result"] = out.result;
    {
        std::ofstream f(outdir / "report.json");
        f << rep.dump(2) << "\n";
    }
    {
        std::ofstream f(outdir / "summary.csv");
        f << "# " << kToolName << " " << kToolVersion << " " << command << "\n";
        for (const auto& row : out.csv) f << row << "\n";
        f << "\njobs," << o.jobs << "\n";
        f << "wall_seconds," << wall_seconds << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolName) + ": local-global experiments for Drinfeld modules"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    std::string config_path, prime_flag, out_dir = ".";
    long degree_bound = -1, coeff_bound = -1, n_max = -1, jobs = -1;
    long long seed = -1;

    const std::vector<std::string> commands = {
        "info",    "reduce",         "structure",      "order",  "scan",
        "witness", "global",         "counterexample", "certify", "density",
        "torsion-density", "orbit",  "support",        "detect", "validate"};
    for (const auto& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--prime", prime_flag, "prime ideal generator, e.g. \"t^2+t+1\"");
        sub->add_option("-D,--degree-bound", degree_bound, "prime degree horizon");
        sub->add_option("-B,--coeff-bound", coeff_bound, "coefficient degree bound");
        sub->add_option("--n-max", n_max, "orbit/support search horizon");
        sub->add_option("--seed", seed, "PRNG seed");
        sub->add_option("--jobs", jobs, "worker threads (0 = hardware)");
        sub->add_option("--out", out_dir, "output directory for reports");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().at(0)->get_name();

    if (const char* env = std::getenv("DRINFELD_LAB_OUT")) out_dir = env;

    try {
        json cfg;
        {
            std::ifstream f(config_path);
            if (!f) throw ConfigError("cannot open config '" + config_path + "'");
            try {
                cfg = json::parse(f);
            } catch (const json::exception& e) {
                throw ConfigError("config '" + config_path + "': " + e.what());
            }
        }
        // flag overrides land in the config's options block so the embedded
        // config replays exactly
        if (degree_bound >= 0) cfg["options"]["degree_bound"] = uint64_t(degree_bound);
        if (coeff_bound >= 0) cfg["options"]["coeff_bound"] = uint64_t(coeff_bound);
        if (n_max >= 0) cfg["options"]["n_max"] = uint64_t(n_max);
        if (seed >= 0) cfg["options"]["seed"] = uint64_t(seed);
        if (jobs >= 0) cfg["options"]["jobs"] = uint64_t(jobs);
        if (!prime_flag.empty()) cfg["params"]["prime"] = prime_flag;

        if (command == "validate") return cmd_validate(cfg);

        check_keys(cfg, "config", {"field", "modules", "instance", "params", "options"});
        FieldPtr fq = load_field(cfg);
        ModuleMap mods = load_modules(fq, cfg);
        Options o = load_options(cfg);

        auto t0 = std::chrono::steady_clock::now();
        CommandOutput out;
        if (command == "info") out = cmd_info(fq, mods, cfg, o);
        else if (command == "reduce") out = cmd_reduce(fq, mods, cfg, o, prime_flag);
        else if (command == "structure") out = cmd_structure(fq, mods, cfg, prime_flag);
        else if (command == "order") out = cmd_order(fq, mods, cfg, prime_flag);
        else if (command == "scan") out = cmd_scan(fq, mods, cfg, o);
        else if (command == "witness") out = cmd_witness(fq, mods, cfg, o);
        else if (command == "global") out = cmd_global(fq, mods, cfg, o);
        else if (command == "counterexample") out = cmd_counterexample(fq, mods, cfg, o);
        else if (command == "certify") out = cmd_certify(fq, mods, cfg, o, prime_flag);
        else if (command == "density") out = cmd_density(fq, mods, cfg, o, prime_flag);
        else if (command == "torsion-density")
            out = cmd_torsion_density(fq, mods, cfg, o, prime_flag);
        else if (command == "orbit") out = cmd_orbit(fq, mods, cfg, o);
        else if (command == "support") out = cmd_support(fq, mods, cfg, o);
        else if (command == "detect") out = cmd_detect(fq, mods, cfg, o);
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                          .count();

        write_reports(out_dir, command, cfg, o, out, wall);
        std::cout << command << ": reports written to " << out_dir << "\n";
        return 0;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
