// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "enriched/errors.hpp"
#include "enriched/io.hpp"
#include "enriched/operators.hpp"
#include "enriched/persistence.hpp"
#include "support.hpp"

using namespace enriched;
using namespace testing_support;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few messages are kept for the report.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (messages_.size() < 3 && std::find(messages_.begin(), messages_.end(), what) == messages_.end()) {
      messages_.push_back(what);
    }
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream out;
    out << summary << ", " << checks_ << " checks";
    if (failures_ > 0) {
      out << ", " << failures_ << " failed";
      for (const auto& m : messages_) out << "; " << m;
    }
    return {failures_ == 0, out.str()};
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::vector<std::string> messages_;
};

struct PhInstance {
  DataSet data;
  std::size_t phi;
  std::size_t degree;
};

// Every (data, φ, d) whose homology was computed by criteria 1 to 6.
std::vector<PhInstance> homology_log;

void log_grid(const DataSet& data, std::size_t phi, std::size_t degree) { homology_log.push_back({data, phi, degree}); }

std::string str(const Rational& q) {
  std::ostringstream out;
  out << q;
  return out.str();
}

std::string run_cli(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = cli::run(args, out, err);
  return out.str();
}

std::string data_file(const std::string& name) { return std::string(TEST_DATA_DIR) + "/" + name; }

// ------------------------------------------------------------------ criteria

Outcome golden_grids(Rng&) {
  Tally t;
  const auto flat = fixture_a_phi();
  const auto module_flat = ph_grid(flat, 0, 1);
  log_grid(flat, 0, 1);
  for (const auto& row : module_flat.dimensions()) {
    for (auto dim : row) t.expect(dim == 0, "PH_1 of {phi} is not zero");
  }

  const auto both = fixture_a_psi();
  const auto module = ph_grid(both, 0, 1);
  log_grid(both, 0, 1);
  t.expect(module.grid.r == std::vector<Rational>{0, 1, 2}, "r-grid differs from {0, 1, 2}");
  t.expect(module.grid.s == std::vector<Rational>{-2, -1, 0, 1}, "s-grid differs from {-2, -1, 0, 1}");
  auto expected = [](const Rational& r, const Rational& s) {
    return Rational(1) <= s && Rational(1) <= r && r < Rational(2) ? 1u : 0u;
  };
  for (std::size_t i = 0; i < module.grid.r.size(); ++i) {
    for (std::size_t j = 0; j < module.grid.s.size(); ++j) {
      t.expect(module.dimension(i, j) == expected(module.grid.r[i], module.grid.s[j]),
               "cell (" + str(module.grid.r[i]) + ", " + str(module.grid.s[j]) + ")");
    }
  }
  // Off-grid points on a 1/8 lattice.
  for (int a = 0; a <= 32; ++a) {
    for (int b = -32; b <= 32; ++b) {
      const Rational r(a, 8), s(b, 8);
      t.expect(module.dimension_at(r, s) == expected(r, s), "point (" + str(r) + ", " + str(s) + ")");
    }
  }
  return t.outcome("PH_1 of {phi} is zero, PH_1 of {phi, psi} supported on [1, 2) x [1, inf)");
}

Outcome golden_analysis(Rng&) {
  Tally t;
  int code = 0;
  const auto j = io::Json::parse(run_cli({"analyze", data_file("fixture_b.json")}, code));
  t.expect(code == 0, "analyze exited with " + std::to_string(code));
  t.expect(j["kind"] == "monoid", "kind is " + j["kind"].dump());
  t.expect(j["blocks"].size() == 1, "block count " + std::to_string(j["blocks"].size()));
  t.expect(j["basis"] == io::Json::array({"phi1", "phi3"}), "basis " + j["basis"].dump());
  t.expect(j["dimension"] == 2, "dimension " + j["dimension"].dump());
  return t.outcome("kind monoid, one block, basis {phi1, phi3}, dimension 2");
}

Outcome golden_units(Rng&) {
  Tally t;
  const auto f = ValueMap::clamp_sign();
  const auto source = fixture_c_source();
  const auto target = fixture_c_target();
  const auto fs = change_units(f, source);
  const auto ft = change_units(f, target);
  t.expect(fs.data.size() == 1 && fs.data.values(0) == ints({1, 1}), "f{1,2} is not {1}");
  t.expect(ft.data.same_set(target), "f{-1,1} is not {-1,1}");
  for (std::size_t k = 0; k < target.size(); ++k) {
    t.expect(ft.data.values(ft.transport[k]) == target.values(k), "f- is not the identity on {-1,1}");
  }
  // No map f{1,2} → f{-1,1} closes the square with α = (1 ↦ −1, 2 ↦ 1).
  const SetMap alpha{*target.find(ints({-1, -1})), *target.find(ints({1, 1}))};
  std::size_t closing = 0;
  for_each_function(fs.data.size(), ft.data.size(), [&](const std::vector<std::size_t>& mu) {
    bool ok = true;
    for (std::size_t k = 0; k < source.size(); ++k) ok = ok && mu[fs.transport[k]] == ft.transport[alpha[k]];
    closing += ok;
  });
  t.expect(closing == 0, "a square-closing map exists");

  int code = 0;
  const auto j = io::Json::parse(run_cli({"seo", "realize", "--source", data_file("fixture_c_source.json"), "--target",
                                          data_file("fixture_c_target.json"), "--alpha", data_file("fixture_c_alpha.json")},
                                         code));
  t.expect(code == 0, "realize exited with " + std::to_string(code));
  t.expect(j["status"] == "no realization", "realize status " + j["status"].dump());
  return t.outcome("f{1,2} = {1}, f- = id on {-1,1}, no closing map, no realization of alpha");
}

Outcome non_expansive(Rng& rng) {
  Tally t;
  std::size_t runs = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto data = random_dataset(rng, 6, 4);
    for (std::size_t degree : {0, 1}) {
      for (std::size_t phi = 0; phi < data.size(); ++phi) {
        log_grid(data, phi, degree);
        for (std::size_t psi = phi; psi < data.size(); ++psi) {
          const auto eps = oracle_sup(data.values(phi), data.values(psi));
          try {
            const auto result = interleave_upper(data, phi, psi, degree);
            ++runs;
            t.expect(result.upper == eps, "epsilon " + str(result.upper) + " != " + str(eps));
            t.expect(result.lower <= eps, "bottleneck " + str(result.lower) + " > " + str(eps));
          } catch (const Error& e) {
            t.expect(false, std::string("interleave_upper threw: ") + e.what());
          }
        }
      }
    }
  }
  return t.outcome("500 data sets, " + std::to_string(runs) + " interleavings certified");
}

Outcome basis_propositions(Rng& rng) {
  Tally t;
  std::size_t bases_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto inc = random_incarnation(rng, 4, 8, 4);
    const auto bases = enumerate_bases(inc);
    bases_seen += bases.size();
    t.expect(!bases.empty(), "no basis enumerated");
    const auto found = find_basis(inc);
    t.expect(oracle_is_basis(inc, found), "find_basis returned a non-basis");
    t.expect(std::find(bases.begin(), bases.end(), found) != bases.end(), "find_basis output not enumerated");
    for (const auto& b : bases) {
      t.expect(oracle_is_basis(inc, b), "enumerated set is not a basis");
      const auto& first = bases.front();
      t.expect(b.size() == first.size(), "bases of different size");
      if (b.size() != first.size()) continue;
      std::vector<std::vector<std::size_t>> adj(first.size());
      for (std::size_t i = 0; i < first.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
          if (indistinguishable(first[i], b[j], inc)) adj[i].push_back(j);
        }
      }
      t.expect(has_perfect_matching(adj, b.size()), "no indistinguishability bijection");
    }
  }
  return t.outcome("200 incarnations, " + std::to_string(bases_seen) + " bases");
}

// A geometric function Φ → Ψ: Ψ contains Φf plus possibly one more
// measurement on Y.
struct GeometricStep {
  DataSet target;
  SetMap alpha;
};

GeometricStep geometric_step(Rng& rng, const DataSet& source, std::size_t target_points, const std::string& prefix) {
  const PointMap f(points(target_points, prefix), source.domain(), random_image(rng, target_points, source.domain().size()));
  const auto changed = domain_change(source, f);
  std::vector<Values> values;
  for (std::size_t k = 0; k < changed.data.size(); ++k) values.push_back(changed.data.values(k));
  if (uniform(rng, 0, 1) == 1) values.push_back(random_values(rng, target_points));
  auto target = DataSet::from_values(f.source(), values, prefix == "y" ? "psi" : "pi");
  SetMap alpha(source.size());
  for (std::size_t k = 0; k < source.size(); ++k) alpha[k] = *target.find(changed.data.values(changed.transport[k]));
  return {std::move(target), std::move(alpha)};
}

Outcome ph_functoriality(Rng& rng) {
  Tally t;
  std::size_t pairs = 0, independence = 0;
  while (pairs < 100) {
    const auto phi_set = random_dataset(rng, 4, 3);
    const auto a = geometric_step(rng, phi_set, uniform(rng, 1, 4), "y");
    const auto b = geometric_step(rng, a.target, uniform(rng, 1, 4), "z");
    SetMap ba(phi_set.size());
    for (std::size_t k = 0; k < phi_set.size(); ++k) ba[k] = b.alpha[a.alpha[k]];
    const auto fa = all_realizations(phi_set, a.target, a.alpha);
    const auto fb = all_realizations(a.target, b.target, b.alpha);
    const auto fba = all_realizations(phi_set, b.target, ba);
    t.expect(!fa.empty() && !fb.empty() && !fba.empty(), "constructed function has no realization");
    if (fa.empty() || fb.empty() || fba.empty()) continue;
    ++pairs;
    const std::size_t degree = uniform(rng, 0, 1);
    for (std::size_t phi = 0; phi < phi_set.size(); ++phi) {
      log_grid(phi_set, phi, degree);
      log_grid(a.target, a.alpha[phi], degree);
      log_grid(b.target, ba[phi], degree);
      const auto ph_a = geometric_ph_map(phi_set, a.target, a.alpha, fa.front(), phi, degree);
      const auto ph_b = geometric_ph_map(a.target, b.target, b.alpha, fb.front(), a.alpha[phi], degree);
      const auto ph_ba = geometric_ph_map(phi_set, b.target, ba, fba.front(), phi, degree);
      t.expect(GridArrows::equal(ph_ba, GridArrows::compose(ph_a, ph_b)), "PH^(ba) != PH^a PH^b");
      for (std::size_t k = 1; k < fa.size(); ++k, ++independence) {
        t.expect(GridArrows::equal(geometric_ph_map(phi_set, a.target, a.alpha, fa[k], phi, degree), ph_a),
                 "PH^a depends on the realization");
      }
      for (std::size_t k = 1; k < fba.size(); ++k, ++independence) {
        t.expect(GridArrows::equal(geometric_ph_map(phi_set, b.target, ba, fba[k], phi, degree), ph_ba),
                 "PH^(ba) depends on the realization");
      }
    }
  }
  return t.outcome(std::to_string(pairs) + " composable pairs, " + std::to_string(independence) +
                   " alternative realizations compared");
}

bool oracle_equivariant(const Incarnation& src, const Incarnation& tgt, const SetMap& alpha, const SetMap& T) {
  for (std::size_t phi = 0; phi < src.size(); ++phi) {
    for (std::size_t g = 0; g < src.op_count(); ++g) {
      const auto moved = *src.data().find(pullback(src.data().values(phi), src.op(g).image()));
      const auto image = tgt.data().find(pullback(tgt.data().values(alpha[phi]), tgt.op(T[g]).image()));
      if (!image || alpha[moved] != *image) return false;
    }
  }
  return true;
}

bool bijective(const SetMap& f, std::size_t n) {
  std::vector<bool> hit(n, false);
  for (auto x : f) {
    if (x >= n || hit[x]) return false;
    hit[x] = true;
  }
  return f.size() == n;
}

Outcome decomposition(Rng& rng) {
  Tally t;
  for (int trial = 0; trial < 200; ++trial) {
    const auto inc = random_incarnation(rng, 4, 8, 4, uniform(rng, 0, 1) == 1);
    const auto d = decompose(inc);
    t.expect(d.seo.is_isomorphism(), "decompose did not report an isomorphism");
    t.expect(bijective(d.seo.alpha, d.incarnation.size()), "alpha is not a bijection");
    t.expect(bijective(d.seo.T, d.incarnation.op_count()), "T is not a bijection");
    t.expect(oracle_equivariant(inc, d.incarnation, d.seo.alpha, d.seo.T), "alpha is not equivariant");
    t.expect(dimension(d.incarnation) == dimension(inc), "dimension changed");
    t.expect(blocks(d.incarnation).size() == blocks(inc).size(), "block count changed");
    MeasurementSet image;
    for (auto w : find_basis(inc)) image.push_back(d.seo.alpha[w]);
    std::sort(image.begin(), image.end());
    t.expect(oracle_is_basis(d.incarnation, image), "image of a basis is not a basis");
  }
  return t.outcome("200 incarnations decomposed");
}

// Data set with k distinct measurements on n points, containing the zero
// measurement when asked.
DataSet shaped_dataset(Rng& rng, std::size_t n, std::size_t k, bool with_zero, const std::string& prefix) {
  std::set<Values> seen;
  std::vector<Values> values;
  if (with_zero) {
    values.push_back(Values(n, Rational(0)));
    seen.insert(values.back());
  }
  while (values.size() < k) {
    auto v = random_values(rng, n);
    if (seen.insert(v).second) values.push_back(v);
  }
  return DataSet::from_values(points(n, prefix), values, prefix);
}

Outcome universal_properties(Rng& rng) {
  Tally t;
  std::size_t instances = 0, missing_copair = 0;
  for (std::size_t np = 1; np <= 3; ++np) {
    for (std::size_t nq = 1; nq <= 3; ++nq) {
      for (std::size_t nr = 1; nr <= 3; ++nr) {
        for (int zeros = 0; zeros < 4; ++zeros) {
          ++instances;
          const auto phi = shaped_dataset(rng, uniform(rng, 1, 2), np, zeros & 1, "x");
          const auto psi = shaped_dataset(rng, uniform(rng, 1, 2), nq, zeros & 2, "y");
          const auto pi = shaped_dataset(rng, uniform(rng, 1, 2), nr, false, "z");
          const auto c = coproduct(phi, psi);
          const auto p = product(phi, psi);
          for_each_function(np, nr, [&](const std::vector<std::size_t>& alpha) {
            for_each_function(nq, nr, [&](const std::vector<std::size_t>& beta) {
              std::size_t solutions = 0;
              std::vector<std::size_t> found;
              for_each_function(c.data.size(), nr, [&](const std::vector<std::size_t>& mu) {
                for (std::size_t i = 0; i < np; ++i) {
                  if (mu[c.in_left[i]] != alpha[i]) return;
                }
                for (std::size_t i = 0; i < nq; ++i) {
                  if (mu[c.in_right[i]] != beta[i]) return;
                }
                ++solutions;
                found = mu;
              });
              t.expect(solutions <= 1, "copair is not unique");
              if (solutions == 0) {
                ++missing_copair;
                t.expect(false, "no copair when both sides contain 0 and alpha(0) != beta(0)");
                return;
              }
              try {
                t.expect(copair(c, alpha, beta) == found, "copair differs from the unique factorization");
              } catch (const Error& e) {
                t.expect(false, std::string("copair threw: ") + e.what());
              }
            });
          });
          for_each_function(nr, np, [&](const std::vector<std::size_t>& alpha) {
            for_each_function(nr, nq, [&](const std::vector<std::size_t>& beta) {
              std::size_t solutions = 0;
              std::vector<std::size_t> found;
              for_each_function(nr, p.data.size(), [&](const std::vector<std::size_t>& mu) {
                for (std::size_t i = 0; i < nr; ++i) {
                  if (p.pr_left[mu[i]] != alpha[i] || p.pr_right[mu[i]] != beta[i]) return;
                }
                ++solutions;
                found = mu;
              });
              t.expect(solutions == 1, "pair factorization count " + std::to_string(solutions));
              if (solutions == 1) t.expect(pair(p, alpha, beta) == found, "pair differs from the unique factorization");
            });
          });
        }
      }
    }
  }
  std::string summary = std::to_string(instances) + " instances with |Phi|, |Psi|, |Pi| <= 3";
  if (missing_copair > 0) summary += ", " + std::to_string(missing_copair) + " (alpha, beta) pairs without a copair";
  return t.outcome(summary);
}

Outcome geo_isotropy(Rng& rng) {
  Tally t;
  std::size_t accepted = 0, cyclic = 0, symmetric = 0, geos = 0;
  while (accepted < 60) {
    const std::size_t n = uniform(rng, 2, 5);
    const bool sym = accepted % 2 == 1;
    const auto group = sym ? group_closure(n, {rotation(n), transposition(n, 0, 1)}) : group_closure(n, {rotation(n)});
    Values seed;
    for (std::size_t i = 0; i < n; ++i) seed.emplace_back(static_cast<std::int64_t>(uniform(rng, 0, 2)));
    const auto source = orbit_incarnation(seed, group, "s");
    // Target: a union of orbits under the same group.
    std::vector<Values> seeds;
    for (std::size_t k = uniform(rng, 1, 2); k > 0; --k) {
      Values v;
      for (std::size_t i = 0; i < n; ++i) v.emplace_back(static_cast<std::int64_t>(uniform(rng, 0, 2)));
      seeds.push_back(v);
    }
    const auto closed = closure(seeds, group, 64);
    std::vector<Operation> ops;
    for (std::size_t k = 0; k < group.size(); ++k) ops.push_back({PointMap(points(n), points(n), group[k]), "h" + std::to_string(k)});
    const Incarnation target(DataSet::from_values(points(n), *closed, "t"), ops);

    double space = 1;
    for (std::size_t k = 0; k < source.size(); ++k) space *= static_cast<double>(target.size());
    if (space > 2e5) continue;
    ++accepted;
    (sym ? symmetric : cyclic) += 1;

    SetMap T(group.size());
    if (uniform(rng, 0, 3) == 0) {
      std::fill(T.begin(), T.end(), 0);  // trivial hom
    } else {
      std::iota(T.begin(), T.end(), 0);
    }
    const std::size_t omega = uniform(rng, 0, source.size() - 1);
    std::set<SetMap> listed;
    for (const auto& s : enumerate_geos(source, omega, target, T)) {
      listed.insert(s.alpha);
      t.expect(oracle_equivariant(source, target, s.alpha, T), "enumerated GEO is not equivariant");
    }
    std::set<SetMap> brute;
    for_each_function(source.size(), target.size(), [&](const std::vector<std::size_t>& alpha) {
      if (oracle_equivariant(source, target, alpha, T)) brute.insert(alpha);
    });
    geos += brute.size();
    t.expect(listed.size() == brute.size(), "count " + std::to_string(listed.size()) + " vs " + std::to_string(brute.size()));
    t.expect(listed == brute, "enumerated GEOs differ from brute force");
  }
  return t.outcome(std::to_string(cyclic) + " cyclic and " + std::to_string(symmetric) + " symmetric incarnations, " +
                   std::to_string(geos) + " GEOs");
}

Outcome oracle_equivalence(Rng&) {
  Tally t;
  std::size_t cells = 0;
  for (const auto& inst : homology_log) {
    const auto module = ph_grid(inst.data, inst.phi, inst.degree);
    const auto& values = inst.data.values(inst.phi);
    for (std::size_t i = 0; i < module.grid.r.size(); ++i) {
      for (std::size_t j = 0; j < module.grid.s.size(); ++j) {
        ++cells;
        t.expect(module.dimension(i, j) ==
                     oracle_ph(inst.data, values, module.grid.r[i], module.grid.s[j], inst.degree),
                 "grid cell disagrees with the boundary-matrix oracle");
      }
    }
  }
  return t.outcome(std::to_string(homology_log.size()) + " filtrations, " + std::to_string(cells) + " grid cells");
}

Outcome superlevel_duality(Rng& rng) {
  Tally t;
  auto check = [&](const DataSet& data, std::size_t phi, std::size_t degree) {
    t.expect(superlevel_duality_check(data, phi, degree).ok, "duality check failed");
    const auto neg = change_units(ValueMap::negate(), data);
    const auto sub = ph_grid(neg.data, neg.transport[phi], degree);
    const auto super = ph_grid(pseudometric(data), data.values(phi), degree, kDefaultPrime, LevelKind::superlevel_negated);
    t.expect(sub.grid == super.grid, "grids differ");
    t.expect(sub.dimensions() == super.dimensions(), "dimension grids differ");
    // Independent count: H_d(VR_r({φ ≥ −s})).
    const auto metric = oracle_metric(data);
    for (std::size_t i = 0; i < super.grid.r.size(); ++i) {
      for (std::size_t j = 0; j < super.grid.s.size(); ++j) {
        std::vector<std::size_t> pts;
        for (std::size_t x = 0; x < data.domain().size(); ++x) {
          if (data.values(phi)[x] >= -super.grid.s[j]) pts.push_back(x);
        }
        t.expect(super.dimension(i, j) == oracle_homology(pts, metric, super.grid.r[i], degree, kDefaultPrime),
                 "superlevel cell disagrees with the oracle");
      }
    }
  };
  const auto a = fixture_a_psi();
  for (std::size_t degree : {0, 1}) {
    check(a, 0, degree);
    check(a, 1, degree);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const auto data = random_dataset(rng, 6, 4);
    check(data, uniform(rng, 0, data.size() - 1), uniform(rng, 0, 1));
  }
  return t.outcome("four-point example and 100 random instances");
}

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome(Rng&)> run;
  double budget_seconds;  // 0 = no limit
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::uint64_t seed = 20261016;
  app.add_option("--seed", seed, "Seed for the random instance generators");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "golden grids", golden_grids, 1},
      {2, "golden analysis", golden_analysis, 1},
      {3, "change of units", golden_units, 0},
      {4, "non-expansiveness", non_expansive, 300},
      {5, "bases", basis_propositions, 0},
      {6, "PH functoriality", ph_functoriality, 0},
      {7, "decomposition", decomposition, 0},
      {8, "universal properties", universal_properties, 0},
      {9, "GEOs and isotropy", geo_isotropy, 0},
      {10, "oracle equivalence", oracle_equivalence, 0},
      {11, "superlevel duality", superlevel_duality, 0},
  };

  std::cout << "seed " << seed << "\n";
  int failed = 0;
  for (const auto& c : criteria) {
    Rng rng(seed + static_cast<std::uint64_t>(c.id));
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run(rng);
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds > c.budget_seconds) {
      outcome.pass = false;
      outcome.detail += ", over the " + std::to_string(static_cast<int>(c.budget_seconds)) + " s budget";
    }
    failed += !outcome.pass;
    std::cout << "criterion " << std::setw(2) << c.id << " " << (outcome.pass ? "PASS" : "FAIL") << "  " << c.name << " ("
              << std::fixed << std::setprecision(2) << seconds << " s): " << outcome.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
