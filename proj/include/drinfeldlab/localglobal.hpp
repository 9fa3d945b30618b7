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

#ifndef DRINFELDLAB_LOCALGLOBAL_HPP
#define DRINFELDLAB_LOCALGLOBAL_HPP

#include <atomic>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include "finmod.hpp"

namespace dlab {

/// Raised when a scan hits a state the underlying theory forbids
/// (e.g. gcd of minimal annihilators != 1 in a counterexample certificate).
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * A product module phi_1^{e_1} x ... x phi_t^{e_t} with a point P, a
 * finitely generated submodule Lambda given by generators, and scan options.
 */
struct InstanceSpec {
    FieldPtr fq;
    std::vector<std::pair<DrinfeldModule, size_t>> modules; // (phi_i, e_i)
    std::vector<Poly> point;                                // length E = sum e_i
    std::vector<std::vector<Poly>> lambda_gens;             // each of length E

    size_t degree_bound = 6; // D: "almost all primes" horizon
    size_t coeff_bound = 3;  // B: exhaustive certificate search bound
    size_t n_max = 8;        // orbit / support global search horizon
    uint64_t seed = 1;
    size_t jobs = 0; // 0 = hardware concurrency

    /// Failed bounded certificates (torsion points, detected relations,
    /// rank hypothesis). Carried into reports; never fatal, because the
    /// sharpness construction violates hypotheses on purpose.
    std::vector<std::string> warnings;

    size_t n_coords() const {
        size_t e = 0;
        for (const auto& [m, mult] : modules) e += mult;
        return e;
    }

    /// Module index owning each product coordinate.
    std::vector<size_t> coord_map() const {
        std::vector<size_t> map;
        for (size_t i = 0; i < modules.size(); ++i)
            for (size_t k = 0; k < modules[i].second; ++k) map.push_back(i);
        return map;
    }

    const DrinfeldModule& coord_module(size_t c) const { return modules[coord_map()[c]].first; }

    /// The positive local-global direction needs rank(phi_i) >= e_i; a
    /// violation is a warning, not an error (the sharpness construction
    /// violates it on purpose).
    bool rank_hypothesis_violated() const {
        for (const auto& [m, mult] : modules)
            if (m.rank() < mult) return true;
        return false;
    }

    void validate() const {
        size_t e = n_coords();
        if (point.size() != e) throw std::invalid_argument("point has wrong coordinate count");
        for (const auto& g : lambda_gens)
            if (g.size() != e)
                throw std::invalid_argument("lambda generator has wrong coordinate count");
        for (const auto& [m, mult] : modules)
            if (m.fq() != fq) throw std::invalid_argument("module over wrong F_q");
    }
};

/// Coordinatewise diagonal action of a in A on a product point.
inline std::vector<Poly> global_act(const InstanceSpec& spec, const Poly& a,
                                    const std::vector<Poly>& x) {
    auto map = spec.coord_map();
    std::vector<Poly> out;
    for (size_t c = 0; c < x.size(); ++c)
        out.push_back(spec.modules[map[c]].first.act(a, x[c]));
    return out;
}

inline std::vector<Poly> point_sub(const std::vector<Poly>& a, const std::vector<Poly>& b) {
    std::vector<Poly> out;
    for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
    return out;
}

inline bool point_is_zero(const std::vector<Poly>& a) {
    for (const auto& x : a)
        if (!x.is_zero()) return false;
    return true;
}

/// The instance reduced at a good prime: block operator module plus the
/// reduced point and reduced Lambda generators as flat F_q vectors.
struct ReducedInstance {
    OperatorModule mod;
    Vec point;
    std::vector<Vec> lambda;
    std::vector<Vec> lambda_basis; // F_q-basis of red(Lambda)
};

/// nullopt when W is bad for any component module.
inline std::optional<ReducedInstance> reduce_instance(const InstanceSpec& spec,
                                                      const PrimeIdeal& w) {
    std::vector<OperatorModule::Component> comps;
    std::vector<FiniteDrinfeldModule> reds;
    for (const auto& [m, mult] : spec.modules) {
        if (!is_good_prime(m, w)) return std::nullopt;
        reds.push_back(reduce_at(m, w));
        comps.push_back({reds.back(), mult});
    }
    OperatorModule mod(std::move(comps));
    auto map = spec.coord_map();
    auto reduce_pt = [&](const std::vector<Poly>& x) {
        OperatorModule::Point p;
        for (size_t c = 0; c < x.size(); ++c) p.push_back(reduce_point(reds[map[c]], x[c]));
        return mod.encode(p);
    };
    Vec point = reduce_pt(spec.point);
    std::vector<Vec> lambda;
    for (const auto& g : spec.lambda_gens) lambda.push_back(reduce_pt(g));
    std::vector<Vec> basis = mod.submodule(lambda);
    return ReducedInstance{std::move(mod), std::move(point), std::move(lambda),
                           std::move(basis)};
}

/// One per-prime record of a scan; `fields` is an ordered key/value list so
/// serialized reports are deterministic.
struct PrimeRecord {
    PrimeIdeal prime;
    bool good = false;
    std::vector<std::pair<std::string, std::string>> fields;
};

struct ScanReport {
    std::vector<PrimeRecord> records;
    std::vector<std::pair<std::string, std::string>> aggregate;
    double wall_seconds = 0; // informational; kept out of replayable output
};

/// Deterministic parallel map over the canonical prime stream: workers pull
/// indices from a shared counter, results land by index.
inline std::vector<PrimeRecord>
scan_primes(const std::vector<PrimeIdeal>& primes, size_t jobs,
            const std::function<PrimeRecord(const PrimeIdeal&)>& fn) {
    if (jobs == 0) jobs = std::max<size_t>(1, std::thread::hardware_concurrency());
    jobs = std::min(jobs, primes.size() ? primes.size() : size_t{1});
    std::vector<PrimeRecord> out(primes.size());
    if (jobs <= 1) {
        for (size_t i = 0; i < primes.size(); ++i) out[i] = fn(primes[i]);
        return out;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (size_t t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= primes.size()) return;
                try {
                    out[i] = fn(primes[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

/// Local membership sweep: red_W(P) in red_W(Lambda) at every good prime
/// of degree <= D.
inline ScanReport scan_membership(const InstanceSpec& spec) {
    spec.validate();
    auto primes = primes_of_degree_up_to(spec.fq, spec.degree_bound);
    ScanReport rep;
    rep.records = scan_primes(primes, spec.jobs, [&](const PrimeIdeal& w) {
        PrimeRecord rec{w, false, {}};
        auto ri = reduce_instance(spec, w);
        if (!ri) {
            rec.fields.push_back({"verdict", "bad-prime"});
            return rec;
        }
        rec.good = true;
        bool holds = in_span(spec.fq, ri->lambda_basis, ri->point);
        rec.fields.push_back({"member", holds ? "true" : "false"});
        return rec;
    });
    size_t good = 0, holds = 0;
    for (const auto& r : rep.records) {
        if (!r.good) continue;
        ++good;
        if (r.fields.at(0).second == "true") ++holds;
    }
    rep.aggregate = {{"good_primes", std::to_string(good)},
                     {"holding", std::to_string(holds)},
                     {"fraction", good ? std::to_string(double(holds) / double(good)) : "n/a"}};
    return rep;
}

/// First good prime (canonical order) where local membership fails; nullopt
/// within degree D is inconclusive, not a proof of membership.
inline std::optional<PrimeIdeal> find_witness(const InstanceSpec& spec) {
    spec.validate();
    auto primes = primes_of_degree_up_to(spec.fq, spec.degree_bound);
    for (const auto& w : primes) {
        auto ri = reduce_instance(spec, w);
        if (!ri) continue;
        if (!in_span(spec.fq, ri->lambda_basis, ri->point)) return w;
    }
    return std::nullopt;
}

/// All x in A with deg x <= deg_bound and phi_a(x) = 0. The search is
/// complete: beyond a computable degree the top term of phi_a(x) cannot
/// cancel, so only finitely many degrees matter.
inline std::vector<Poly> global_torsion(const DrinfeldModule& m, const Poly& a,
                                        size_t deg_bound) {
    if (a.is_zero()) throw std::invalid_argument("torsion of the zero ideal");
    SkewPoly<Poly> phi_a = m.phi_of(a);
    size_t nu = static_cast<size_t>(phi_a.degree());
    const FieldPtr& fq = m.fq();
    std::vector<Poly> out{Poly::zero(fq)};
    if (nu == 0) return out; // units act invertibly
    // max degree at which the leading term can still be cancelled
    long eff = -1;
    for (long d = 0;; ++d) {
        long top = phi_a.coeffs()[nu].degree() + static_cast<long>(detail::pow_u64(m.q(), nu)) * d;
        long best_other = -1;
        for (size_t i = 0; i < nu; ++i) {
            if (phi_a.coeffs()[i].is_zero()) continue;
            long v = phi_a.coeffs()[i].degree() + static_cast<long>(detail::pow_u64(m.q(), i)) * d;
            best_other = std::max(best_other, v);
        }
        if (best_other < top) {
            eff = d - 1;
            break;
        }
    }
    long bound = std::min<long>(eff, static_cast<long>(deg_bound));
    for (long d = 0; d <= bound; ++d) {
        for (uint64_t lead = 1; lead < fq->size(); ++lead)
            for (uint64_t idx = 0; idx < detail::pow_u64(fq->size(), static_cast<size_t>(d));
                 ++idx) {
                std::vector<FieldElem> c;
                uint64_t v = idx;
                for (long i = 0; i < d; ++i) {
                    c.push_back(fq->element_at(v % fq->size()));
                    v /= fq->size();
                }
                c.push_back(fq->element_at(lead));
                Poly x(fq, std::move(c));
                if (additive_eval(phi_a, x).is_zero()) out.push_back(x);
            }
    }
    std::sort(out.begin(), out.end(), [](const Poly& l, const Poly& r) { return l.canon_less(r); });
    return out;
}

/// Bounded torsion certificate: gcd of local orders over a sample of good
/// primes; returns that gcd if it annihilates x globally, else nullopt
/// (x certified non-torsion at this sample).
inline std::optional<Poly> torsion_order_or_none(const DrinfeldModule& m, const Poly& x,
                                                 const std::vector<PrimeIdeal>& sample) {
    if (x.is_zero()) return Poly::one(m.fq());
    size_t good = 0, used = 0;
    Poly g = Poly::zero(m.fq());
    for (const auto& w : sample) {
        if (!is_good_prime(m, w)) continue;
        ++good;
        auto red = reduce_at(m, w);
        FieldElem rx = reduce_point(red, x);
        if (rx.is_zero()) continue; // W | x: local order 1 carries no information
        OperatorModule mod(red);
        Poly ord = mod.order_of(mod.encode({rx}));
        g = used == 0 ? ord : poly_gcd(g, ord);
        ++used;
    }
    if (good < 2) throw std::invalid_argument("need at least 2 good sample primes");
    if (used == 0) return std::nullopt; // x vanished at every sampled prime
    if (m.act(g, x).is_zero()) return g;
    return std::nullopt;
}

/// Default sampling set for torsion certificates: the first few good primes.
inline std::vector<PrimeIdeal> default_sample_primes(const DrinfeldModule& m, size_t count = 4) {
    std::vector<PrimeIdeal> out;
    for (size_t D = 1; out.size() < count && D <= 8; ++D)
        for (const auto& w : primes_of_degree_up_to(m.fq(), D)) {
            if (static_cast<size_t>(w.degree()) != D) continue;
            if (!is_good_prime(m, w)) continue;
            bool seen = false;
            for (const auto& o : out) seen |= (o == w);
            if (!seen) out.push_back(w);
            if (out.size() == count) break;
        }
    return out;
}

/// All certified-torsion elements of phi(A) with deg <= deg_bound, by
/// exhaustive enumeration plus the bounded torsion certificate.
inline std::vector<Poly> torsion_points_bounded(const DrinfeldModule& m, size_t deg_bound) {
    auto sample = default_sample_primes(m);
    const FieldPtr& fq = m.fq();
    std::vector<Poly> out;
    uint64_t total = detail::pow_u64(fq->size(), deg_bound + 1);
    for (uint64_t idx = 0; idx < total; ++idx) {
        std::vector<FieldElem> c;
        uint64_t v = idx;
        for (size_t i = 0; i <= deg_bound; ++i) {
            c.push_back(fq->element_at(v % fq->size()));
            v /= fq->size();
        }
        Poly x(fq, std::move(c));
        if (x.is_zero()) {
            out.push_back(x);
            continue;
        }
        if (torsion_order_or_none(m, x, sample)) out.push_back(x);
    }
    return out;
}

namespace detail {

/// Odometer over tuples of polynomials of degree <= B. Canonical order.
class PolyTuples {
  public:
    PolyTuples(FieldPtr fq, size_t count, size_t max_deg)
        : fq_(std::move(fq)), count_(count), max_deg_(max_deg),
          per_(pow_u64(fq_->size(), max_deg + 1)) {}

    uint64_t total() const {
        uint64_t t = 1;
        for (size_t i = 0; i < count_; ++i) {
            if (per_ != 0 && t > UINT64_MAX / per_) throw std::overflow_error("tuple space");
            t *= per_;
        }
        return t;
    }

    std::vector<Poly> at(uint64_t idx) const {
        std::vector<Poly> out;
        for (size_t j = 0; j < count_; ++j) {
            uint64_t pidx = idx % per_;
            idx /= per_;
            std::vector<FieldElem> c;
            for (size_t i = 0; i <= max_deg_; ++i) {
                c.push_back(fq_->element_at(pidx % fq_->size()));
                pidx /= fq_->size();
            }
            out.emplace_back(fq_, std::move(c));
        }
        return out;
    }

  private:
    FieldPtr fq_;
    size_t count_, max_deg_;
    uint64_t per_;
};

} // namespace detail

/// Smallest nonzero coefficient tuple (deg <= B) with sum act(a_j, x_j) = 0,
/// or nullopt. Candidates are screened at 3 good primes before the exact
/// check.
inline std::optional<std::vector<Poly>> detect_relation(const DrinfeldModule& m,
                                                        const std::vector<Poly>& points,
                                                        size_t coeff_bound) {
    if (points.empty()) return std::nullopt;
    auto sample = default_sample_primes(m, 3);
    struct Local {
        OperatorModule mod;
        std::vector<Vec> pts;
    };
    std::vector<Local> locals;
    for (const auto& w : sample) {
        auto red = reduce_at(m, w);
        OperatorModule mod(red);
        std::vector<Vec> pts;
        for (const auto& x : points) pts.push_back(mod.encode({reduce_point(red, x)}));
        locals.push_back({std::move(mod), std::move(pts)});
    }
    detail::PolyTuples tuples(m.fq(), points.size(), coeff_bound);
    for (uint64_t idx = 1; idx < tuples.total(); ++idx) {
        auto coeffs = tuples.at(idx);
        bool nonzero = false;
        for (const auto& a : coeffs) nonzero |= !a.is_zero();
        if (!nonzero) continue;
        bool pass = true;
        for (const auto& loc : locals) {
            Vec acc(loc.mod.dim(), m.fq()->zero());
            for (size_t j = 0; j < points.size(); ++j) {
                Vec part = loc.mod.act_flat(coeffs[j], loc.pts[j]);
                for (size_t k = 0; k < acc.size(); ++k) acc[k] = acc[k] + part[k];
            }
            bool zero = true;
            for (const auto& x : acc) zero &= x.is_zero();
            if (!zero) {
                pass = false;
                break;
            }
        }
        if (!pass) continue;
        Poly acc = Poly::zero(m.fq());
        for (size_t j = 0; j < points.size(); ++j) acc = acc + m.act(coeffs[j], points[j]);
        if (acc.is_zero()) return coeffs;
    }
    return std::nullopt;
}

struct MembershipCertificate {
    bool found = false;
    std::vector<Poly> coeffs;          // one per Lambda generator
    std::vector<Poly> torsion_shift;   // the torsion translate T, per coordinate
};

/**
 * Exhaustive bounded search for P = sum act(a_j, g_j) + T with deg a_j <= B
 * and T a certified torsion point. "Not found" is a bounded statement, never
 * an unconditional negative.
 */
inline MembershipCertificate global_membership_bounded(const InstanceSpec& spec) {
    spec.validate();
    auto map = spec.coord_map();
    // torsion translates per module, then filtered coordinatewise below
    std::vector<std::vector<Poly>> tor_per_module;
    for (const auto& [m, mult] : spec.modules)
        tor_per_module.push_back(torsion_points_bounded(m, std::min<size_t>(spec.coeff_bound, 2)));

    detail::PolyTuples tuples(spec.fq, spec.lambda_gens.size(), spec.coeff_bound);
    if (tuples.total() > (uint64_t{1} << 26))
        throw std::invalid_argument("membership search space exceeds 2^26 tuples; "
                                    "lower the coefficient bound or generator count");
    auto torsion_ok = [&](const std::vector<Poly>& R) {
        for (size_t c = 0; c < R.size(); ++c) {
            const auto& tor = tor_per_module[map[c]];
            bool hit = false;
            for (const auto& t : tor) hit |= (t == R[c]);
            if (!hit) {
                // fall back to the sampling certificate for larger residuals
                const auto& m = spec.modules[map[c]].first;
                if (R[c].degree() > static_cast<long>(std::min<size_t>(spec.coeff_bound, 2))) {
                    auto s = default_sample_primes(m);
                    if (!torsion_order_or_none(m, R[c], s)) return false;
                } else {
                    return false;
                }
            }
        }
        return true;
    };

    for (uint64_t idx = 0; idx < tuples.total(); ++idx) {
        auto coeffs = tuples.at(idx);
        std::vector<Poly> residual = spec.point;
        for (size_t j = 0; j < coeffs.size(); ++j) {
            if (coeffs[j].is_zero()) continue;
            std::vector<Poly> part;
            for (size_t c = 0; c < spec.lambda_gens[j].size(); ++c)
                part.push_back(spec.modules[map[c]].first.act(coeffs[j], spec.lambda_gens[j][c]));
            residual = point_sub(residual, part);
        }
        if (torsion_ok(residual))
            return {true, coeffs, residual};
    }
    return {false, {}, {}};
}

/// The sharp counterexample instance: e = d+1 copies of phi, point
/// P = (P_1..P_e), Lambda generated by B_k P over the standard basis of
/// trace-zero e x e matrices.
inline InstanceSpec build_counterexample(const DrinfeldModule& m,
                                         const std::vector<Poly>& points,
                                         size_t degree_bound = 7, size_t coeff_bound = 3,
                                         uint64_t seed = 1) {
    size_t e = points.size();
    if (e != m.rank() + 1)
        throw std::invalid_argument("need exactly rank+1 points");
    // bounded independence certificate; failures are warnings because small
    // base fields admit unavoidable torsion (any point set over F_2 with
    // p | e degenerates) and the instance is still worth scanning
    std::vector<std::string> warnings;
    auto sample = default_sample_primes(m);
    for (const auto& x : points)
        if (torsion_order_or_none(m, x, sample))
            warnings.push_back("point certified torsion: " + x.to_string());
    if (auto rel = detect_relation(m, points, coeff_bound)) {
        std::string s = "A-relation at bound:";
        for (const auto& a : *rel) s += " " + a.to_string() + ";";
        warnings.push_back(s);
    }
    if ((e % m.fq()->p()) == 0)
        warnings.push_back("e = 0 in characteristic p: trace-zero identity fixes P, "
                           "so P lies in Lambda globally");

    InstanceSpec spec;
    spec.fq = m.fq();
    spec.modules = {{m, e}};
    spec.point = points;
    spec.degree_bound = degree_bound;
    spec.coeff_bound = coeff_bound;
    spec.seed = seed;
    spec.warnings = std::move(warnings);
    if (spec.rank_hypothesis_violated())
        spec.warnings.push_back("rank(phi) < multiplicity: outside the regime where local "
                                "membership everywhere forces global membership");
    // trace-zero basis: off-diagonal units E_{ij}, diagonal E_{ii}-E_{i+1,i+1}
    auto apply_basis = [&](size_t r, size_t c, bool diag_pair) {
        std::vector<Poly> g(e, Poly::zero(m.fq()));
        if (!diag_pair) {
            g[r] = points[c];
        } else {
            g[r] = points[r];
            g[r + 1] = -points[r + 1];
        }
        return g;
    };
    for (size_t i = 0; i < e; ++i)
        for (size_t j = 0; j < e; ++j)
            if (i != j) spec.lambda_gens.push_back(apply_basis(i, j, false));
    for (size_t i = 0; i + 1 < e; ++i) spec.lambda_gens.push_back(apply_basis(i, 0, true));
    return spec;
}

/// Certificate that red_W(P) lies in red_W(Lambda) for a counterexample
/// instance: a trace-zero matrix M over A with M red(P) = red(P).
struct CounterexampleCertificate {
    std::vector<Poly> alphas;           // minimal annihilators alpha_i
    std::vector<std::vector<Poly>> M;   // e x e over A, trace zero
};

inline CounterexampleCertificate certify_counterexample_at(const InstanceSpec& spec,
                                                           const PrimeIdeal& w) {
    spec.validate();
    if (spec.modules.size() != 1)
        throw std::invalid_argument("certificate requires a single-module power instance");
    const DrinfeldModule& m = spec.modules[0].first;
    size_t e = spec.modules[0].second;
    auto rio = reduce_instance(spec, w);
    if (!rio) throw std::invalid_argument("bad prime for certificate");
    const FieldPtr& fq = spec.fq;

    // all coordinates live in the same residue field, so relations among
    // the reduced points are computed in the single-component module
    auto red0 = rio->mod.components()[0].fdm;
    OperatorModule single(red0);
    std::vector<Vec> psingle;
    for (size_t i = 0; i < e; ++i)
        psingle.push_back(single.encode({reduce_point(red0, spec.point[i])}));

    // Krylov spans of each point in the single module
    size_t n = single.dim();
    auto krylov = [&](const Vec& v) {
        std::vector<Vec> vs;
        Vec cur = v;
        for (size_t k = 0; k < n; ++k) {
            vs.push_back(cur);
            cur = single.T().apply(cur);
        }
        return vs;
    };
    std::vector<std::vector<Vec>> kry;
    for (const auto& v : psingle) kry.push_back(krylov(v));

    CounterexampleCertificate cert;
    std::vector<std::vector<Poly>> relations(e, std::vector<Poly>(e, Poly::zero(fq)));
    for (size_t i = 0; i < e; ++i) {
        // submodule generated by the other points
        std::vector<Vec> others;
        for (size_t j = 0; j < e; ++j)
            if (j != i) others.push_back(psingle[j]);
        auto sbasis = single.submodule(others);
        // minimal monic alpha with alpha(T) p_i in the span of the others
        std::vector<Vec> combined = sbasis;
        Vec cur = psingle[i];
        size_t r = 0;
        Poly alpha = Poly::zero(fq);
        while (true) {
            auto coords = span_coords(fq, combined, cur);
            if (coords) {
                std::vector<FieldElem> c;
                for (size_t k = sbasis.size(); k < combined.size(); ++k)
                    c.push_back(-(*coords)[k]);
                c.push_back(fq->one());
                alpha = Poly(fq, std::move(c));
                break;
            }
            combined.push_back(cur);
            cur = single.T().apply(cur);
            ++r;
        }
        cert.alphas.push_back(alpha);
        // express alpha(T) p_i as an A-combination of the other points
        Vec target = single.act_flat(alpha, psingle[i]);
        std::vector<Vec> cols;
        std::vector<std::pair<size_t, size_t>> labels; // (point j, power k)
        for (size_t j = 0; j < e; ++j) {
            if (j == i) continue;
            for (size_t k = 0; k < n; ++k) {
                cols.push_back(kry[j][k]);
                labels.push_back({j, k});
            }
        }
        auto sol = span_coords(fq, cols, target);
        if (!sol) throw std::logic_error("combination solve failed");
        std::vector<Poly> mrow(e, Poly::zero(fq));
        for (size_t c = 0; c < cols.size(); ++c) {
            if ((*sol)[c].is_zero()) continue;
            auto [j, k] = labels[c];
            mrow[j] = mrow[j] + Poly::t(fq).pow(k) * Poly::constant(fq, (*sol)[c]);
        }
        // alpha_i p_i + sum_j m_{i,j} p_j = 0 with m_{i,j} = -solution
        for (size_t j = 0; j < e; ++j) relations[i][j] = -mrow[j];
    }

    // gcd of the alphas must be 1 (hard failure otherwise)
    Poly D = cert.alphas[0];
    for (size_t i = 1; i < e; ++i) D = poly_gcd(D, cert.alphas[i]);
    if (!D.is_one())
        throw InvariantViolation("gcd of minimal annihilators is not 1 at prime " +
                                 w.gen().to_string());

    // Bezout: sum a_i alpha_i = e (as an element of F_q), or all a_i = 0
    // when e vanishes in characteristic p
    uint64_t e_mod_p = e % fq->p();
    std::vector<Poly> a(e, Poly::zero(fq));
    if (e_mod_p != 0) {
        Poly g = cert.alphas[0];
        std::vector<Poly> cof{Poly::one(fq)};
        for (size_t i = 1; i < e; ++i) {
            auto [g2, s, u] = poly_xgcd(g, cert.alphas[i]);
            for (auto& c : cof) c = c * s;
            cof.push_back(u);
            g = g2;
        }
        if (!g.is_one()) throw InvariantViolation("Bezout combination failed");
        Poly scale = Poly::constant(fq, fq->from_int(e_mod_p));
        for (size_t i = 0; i < e; ++i) a[i] = cof[i] * scale;
    }

    // M_{ii} = 1 - a_i alpha_i, M_{ij} = -a_i m_{i,j}
    cert.M.assign(e, std::vector<Poly>(e, Poly::zero(fq)));
    for (size_t i = 0; i < e; ++i) {
        cert.M[i][i] = Poly::one(fq) - a[i] * cert.alphas[i];
        for (size_t j = 0; j < e; ++j)
            if (j != i) cert.M[i][j] = -(a[i] * relations[i][j]);
    }
    // exact verification: trace zero and M red(P) = red(P)
    Poly tr = Poly::zero(fq);
    for (size_t i = 0; i < e; ++i) tr = tr + cert.M[i][i];
    if (!tr.is_zero()) throw InvariantViolation("certificate trace nonzero");
    for (size_t i = 0; i < e; ++i) {
        Vec acc(single.dim(), fq->zero());
        for (size_t j = 0; j < e; ++j) {
            Vec part = single.act_flat(cert.M[i][j], psingle[j]);
            for (size_t k = 0; k < acc.size(); ++k) acc[k] = acc[k] + part[k];
        }
        if (acc != psingle[i]) throw InvariantViolation("certificate does not fix red(P)");
    }
    return cert;
}

struct DensityReport {
    ScanReport scan;
    size_t eligible = 0;  // good primes entering the denominator
    size_t hits = 0;
    size_t undecided = 0; // extension cap exceeded (torsion matching only)
    double fraction() const { return eligible ? double(hits) / double(eligible) : 0.0; }
};

/// Fraction of good primes W (deg <= D, W != P) at which every
/// red_W(x_{i,j}) has vanishing P-primary part.
inline DensityReport vanishing_density(
    const std::vector<std::pair<DrinfeldModule, std::vector<Poly>>>& instances,
    const PrimeIdeal& P, size_t D, size_t jobs = 0) {
    if (instances.empty()) throw std::invalid_argument("no modules given");
    const FieldPtr& fq = instances[0].first.fq();
    auto primes = primes_of_degree_up_to(fq, D);
    DensityReport rep;
    rep.scan.records = scan_primes(primes, jobs, [&](const PrimeIdeal& w) {
        PrimeRecord rec{w, false, {}};
        if (w == P) {
            rec.fields.push_back({"verdict", "skipped-P"});
            return rec;
        }
        for (const auto& [m, xs] : instances)
            if (!is_good_prime(m, w)) {
                rec.fields.push_back({"verdict", "bad-prime"});
                return rec;
            }
        rec.good = true;
        bool all_vanish = true;
        for (const auto& [m, xs] : instances) {
            auto red = reduce_at(m, w);
            OperatorModule mod(red);
            for (const auto& x : xs) {
                size_t po = mod.pi_order(mod.encode({reduce_point(red, x)}), P);
                if (po != 0) all_vanish = false;
            }
        }
        rec.fields.push_back({"vanishes", all_vanish ? "true" : "false"});
        return rec;
    });
    for (const auto& r : rep.scan.records) {
        if (!r.good) continue;
        ++rep.eligible;
        if (r.fields.at(0).second == "true") ++rep.hits;
    }
    rep.scan.aggregate = {{"eligible", std::to_string(rep.eligible)},
                          {"hits", std::to_string(rep.hits)},
                          {"fraction", std::to_string(rep.fraction())}};
    return rep;
}

/// For a base-rational torsion point T: fraction of good primes where the
/// P-primary part of red(x) matches red(T), compared inside the
/// torsion-splitting extension of the residue field.
inline DensityReport torsion_matching_density(const DrinfeldModule& m, const Poly& x,
                                              const Poly& T, const PrimeIdeal& P, size_t tor_m,
                                              size_t D, size_t cap = 4, size_t jobs = 0) {
    if (!m.act(P.gen().pow(tor_m), T).is_zero() && tor_m > 0)
        throw std::invalid_argument("T is not P^m-torsion");
    if (tor_m == 0 && !T.is_zero())
        throw std::invalid_argument("m = 0 forces T = 0");
    auto primes = primes_of_degree_up_to(m.fq(), D);
    DensityReport rep;
    rep.scan.records = scan_primes(primes, jobs, [&](const PrimeIdeal& w) {
        PrimeRecord rec{w, false, {}};
        if (w == P) {
            rec.fields.push_back({"verdict", "skipped-P"});
            return rec;
        }
        if (!is_good_prime(m, w)) {
            rec.fields.push_back({"verdict", "bad-prime"});
            return rec;
        }
        auto red = reduce_at(m, w);
        auto deg = torsion_field_degree(red, P, cap);
        if (!deg) {
            rec.fields.push_back({"verdict", "undecided-cap"});
            return rec;
        }
        rec.good = true;
        auto ext = red.extended(*deg);
        OperatorModule mod(ext);
        Vec vx = mod.encode({embed(reduce_point(red, x), ext.k())});
        Vec vt = mod.encode({embed(reduce_point(red, T), ext.k())});
        Vec px = mod.primary_part(vx, P);
        Vec pt = mod.primary_part(vt, P);
        rec.fields.push_back({"matches", px == pt ? "true" : "false"});
        rec.fields.push_back({"ext_degree", std::to_string(*deg)});
        return rec;
    });
    for (const auto& r : rep.scan.records) {
        if (!r.good) {
            if (!r.fields.empty() && r.fields.at(0).second == "undecided-cap") ++rep.undecided;
            continue;
        }
        ++rep.eligible;
        if (r.fields.at(0).second == "true") ++rep.hits;
    }
    rep.scan.aggregate = {{"eligible", std::to_string(rep.eligible)},
                          {"hits", std::to_string(rep.hits)},
                          {"undecided", std::to_string(rep.undecided)},
                          {"fraction", std::to_string(rep.fraction())}};
    return rep;
}

inline std::string vec_key(const Vec& v) {
    std::string s;
    for (const auto& x : v) {
        s += x.to_string();
        s += "|";
    }
    return s;
}

struct OrbitReport {
    ScanReport scan;
    bool local_all_hit = false;
    std::optional<size_t> global_hit_n; // first n <= n_max with w^n P in Lambda + tor
};

/// Per prime, exact decision whether the forward orbit of red(P) under
/// multiplication by w meets red(Lambda); globally, a bounded search for n
/// with act(w^n, P) in Lambda + torsion.
inline OrbitReport orbit_scan(const InstanceSpec& spec, const Poly& w_mult) {
    spec.validate();
    if (w_mult.is_zero()) throw std::invalid_argument("w must be nonzero");
    auto primes = primes_of_degree_up_to(spec.fq, spec.degree_bound);
    OrbitReport rep;
    rep.scan.records = scan_primes(primes, spec.jobs, [&](const PrimeIdeal& wp) {
        PrimeRecord rec{wp, false, {}};
        auto ri = reduce_instance(spec, wp);
        if (!ri) {
            rec.fields.push_back({"verdict", "bad-prime"});
            return rec;
        }
        rec.good = true;
        // exact: the orbit in a finite module is eventually periodic
        std::set<std::string> seen;
        Vec cur = ri->point;
        std::optional<size_t> hit;
        size_t nstep = 0;
        while (seen.insert(vec_key(cur)).second) {
            if (in_span(spec.fq, ri->lambda_basis, cur)) {
                hit = nstep;
                break;
            }
            cur = ri->mod.act_flat(w_mult, cur);
            ++nstep;
        }
        rec.fields.push_back({"orbit_hit", hit ? "true" : "false"});
        rec.fields.push_back({"orbit_n", hit ? std::to_string(*hit) : "-"});
        return rec;
    });
    rep.local_all_hit = true;
    size_t good = 0, hits = 0;
    for (const auto& r : rep.scan.records) {
        if (!r.good) continue;
        ++good;
        if (r.fields.at(0).second == "true") ++hits;
        else rep.local_all_hit = false;
    }
    // global bounded search
    std::vector<Poly> cur = spec.point;
    for (size_t n = 0; n <= spec.n_max; ++n) {
        InstanceSpec probe = spec;
        probe.point = cur;
        if (global_membership_bounded(probe).found) {
            rep.global_hit_n = n;
            break;
        }
        cur = global_act(spec, w_mult, cur);
    }
    rep.scan.aggregate = {{"good_primes", std::to_string(good)},
                          {"local_hits", std::to_string(hits)},
                          {"global_hit_n", rep.global_hit_n ? std::to_string(*rep.global_hit_n)
                                                            : "none"}};
    return rep;
}

struct SupportReport {
    ScanReport scan;
    std::optional<size_t> global_n;
    std::vector<Poly> global_T; // torsion difference at global_n
};

/// Support problem sweep: per prime, the minimal n >= 1 with
/// act(w1^n, red P) = act(w2^n, red Q) (exact, by cycle detection on the
/// pair); globally, a bounded search for n and torsion T with
/// w1^n P - w2^n Q = T and ord(T) | gcd(w1, w2)^k.
inline SupportReport support_scan(const InstanceSpec& spec, const std::vector<Poly>& Q,
                                  const Poly& w1, const Poly& w2) {
    spec.validate();
    if (Q.size() != spec.point.size()) throw std::invalid_argument("Q coordinate count");
    auto primes = primes_of_degree_up_to(spec.fq, spec.degree_bound);
    auto map = spec.coord_map();
    SupportReport rep;
    rep.scan.records = scan_primes(primes, spec.jobs, [&](const PrimeIdeal& wp) {
        PrimeRecord rec{wp, false, {}};
        auto ri = reduce_instance(spec, wp);
        if (!ri) {
            rec.fields.push_back({"verdict", "bad-prime"});
            return rec;
        }
        rec.good = true;
        Vec qv;
        {
            OperatorModule::Point qp;
            for (size_t c = 0; c < Q.size(); ++c)
                qp.push_back(reduce_point(ri->mod.coord_module(c), Q[c]));
            qv = ri->mod.encode(qp);
        }
        Vec u = ri->mod.act_flat(w1, ri->point);
        Vec v = ri->mod.act_flat(w2, qv);
        std::set<std::string> seen;
        std::optional<size_t> hit;
        size_t nstep = 1;
        while (seen.insert(vec_key(u) + "#" + vec_key(v)).second) {
            if (u == v) {
                hit = nstep;
                break;
            }
            u = ri->mod.act_flat(w1, u);
            v = ri->mod.act_flat(w2, v);
            ++nstep;
        }
        rec.fields.push_back({"support_hit", hit ? "true" : "false"});
        rec.fields.push_back({"support_n", hit ? std::to_string(*hit) : "-"});
        return rec;
    });

    // global bounded search
    Poly g = poly_gcd(w1, w2);
    std::vector<Poly> p1 = spec.point, q1 = Q;
    for (size_t n = 1; n <= spec.n_max && !rep.global_n; ++n) {
        p1 = global_act(spec, w1, p1);
        q1 = global_act(spec, w2, q1);
        std::vector<Poly> R = point_sub(p1, q1);
        if (g.is_constant()) {
            if (point_is_zero(R)) {
                rep.global_n = n;
                rep.global_T = R;
            }
            continue;
        }
        std::vector<Poly> cur = R;
        for (size_t k = 0; k <= spec.n_max + 4; ++k) {
            if (point_is_zero(cur)) {
                rep.global_n = n;
                rep.global_T = R;
                break;
            }
            for (size_t c = 0; c < cur.size(); ++c)
                cur[c] = spec.modules[map[c]].first.act(g, cur[c]);
        }
    }
    size_t good = 0, hits = 0;
    for (const auto& r : rep.scan.records) {
        if (!r.good) continue;
        ++good;
        if (r.fields.at(0).second == "true") ++hits;
    }
    rep.scan.aggregate = {{"good_primes", std::to_string(good)},
                          {"local_hits", std::to_string(hits)},
                          {"global_n", rep.global_n ? std::to_string(*rep.global_n) : "none"}};
    return rep;
}

} // namespace dlab

#endif
