#include "dlab/lab.hpp"
#include "dlab/matchpower.hpp"
#include "dlab/parallel.hpp"
#include "dlab/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace dlab {

const char* to_string(TrialOutcome o) {
  switch (o) {
    case TrialOutcome::found: return "1";
    case TrialOutcome::not_found: return "0";
    case TrialOutcome::budget: return "budget";
    case TrialOutcome::infeasible: return "infeasible";
  }
  return "?";
}

Hypergraph experiment_host(const ExperimentConfig& cfg) {
  if (cfg.host == "complete") return Hypergraph::complete(cfg.n, cfg.k);
  if (cfg.host == "space_barrier") return space_barrier(cfg.n, cfg.k, cfg.d);
  if (cfg.host == "parity_barrier") return parity_barrier(cfg.n, cfg.k, cfg.d);
  if (cfg.host == "random") return sample_hk(cfg.n, cfg.k, cfg.p, derive_seed(cfg.master_seed, 0, 7));
  throw SpecError("unknown host " + cfg.host);
}

namespace {

double edge_density(const Hypergraph& g) {
  auto all = binomial(static_cast<std::int64_t>(g.n()), static_cast<std::int64_t>(g.k()));
  return all ? static_cast<double>(g.edge_count()) / static_cast<double>(all) : 0.0;
}

std::size_t ceil_count(double x) { return x <= 0 ? 0 : static_cast<std::size_t>(std::ceil(x - 1e-9)); }

}  // namespace

std::size_t resilience_threshold(const ExperimentConfig& cfg, double p_hat) {
  const double mu = boost::rational_cast<double>(conjectured_density(cfg.d, cfg.k));
  const auto c = static_cast<double>(
      binomial(static_cast<std::int64_t>(cfg.n - cfg.d), static_cast<std::int64_t>(cfg.k - cfg.d)));
  // a zero target is vacuous; p̂ = 0 must read as infeasible
  return std::max<std::size_t>(1, ceil_count((mu + cfg.gamma) * p_hat * c));
}

ResilienceResult resilience_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ResilienceResult res;
  res.cfg = cfg;
  res.records.resize(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    TrialRecord& rec = res.records[t];
    rec.trial = t;
    rec.seed = derive_seed(cfg.master_seed, t);
    auto g = sample_hk(cfg.n, cfg.k, cfg.p, rec.seed);
    rec.threshold = resilience_threshold(cfg, cfg.empirical_p ? edge_density(g) : cfg.p);
    try {
      auto deg = degrade_to_degree(g, cfg.d, rec.threshold, cfg.policy, derive_seed(rec.seed, 0, 1));
      rec.min_deg = deg.min_degree;
      auto pm = find_perfect_matching(deg.graph, cfg.budget);
      rec.nodes = pm.nodes_explored;
      if (pm.status == MatchStatus::perfect) {
        if (!check_matching(deg.graph, pm.matching.edges(), true).empty())
          throw Error("oracle returned an invalid perfect matching");
        rec.outcome = TrialOutcome::found;
      } else {
        rec.outcome = pm.status == MatchStatus::partial ? TrialOutcome::budget : TrialOutcome::not_found;
      }
    } catch (const TargetInfeasible&) {
      rec.min_deg = min_d_degree(g, cfg.d).value;
      rec.outcome = TrialOutcome::infeasible;
    }
  });
  auto& s = res.summary;
  s.trials = cfg.trials;
  for (const auto& r : res.records) {
    if (r.outcome == TrialOutcome::infeasible) {
      ++s.infeasible;
      continue;
    }
    ++s.feasible;
    if (r.outcome == TrialOutcome::found) ++s.found;
    if (r.outcome == TrialOutcome::budget) ++s.budget;
  }
  s.frequency = s.feasible ? static_cast<double>(s.found) / static_cast<double>(s.feasible) : 0.0;
  s.wilson = wilson_interval(s.found, s.feasible);
  return res;
}

CsvTable ResilienceResult::table() const {
  CsvTable t;
  t.kind = "resilience";
  t.meta = {{"name", cfg.name},
            {"density_proxy", "conjectured_density"},
            {"density", format_double(boost::rational_cast<double>(conjectured_density(cfg.d, cfg.k)))},
            {"p_hat", cfg.empirical_p ? "empirical" : "nominal"},
            {"policy", to_string(cfg.policy)},
            {"master_seed", std::to_string(cfg.master_seed)},
            {"budget", std::to_string(cfg.budget)}};
  t.columns = {"trial", "seed", "n", "k", "d", "p", "gamma", "threshold", "min_deg", "pm_found", "nodes", "seconds"};
  for (const auto& r : records)
    t.rows.push_back({std::to_string(r.trial), std::to_string(r.seed), std::to_string(cfg.n), std::to_string(cfg.k),
                      std::to_string(cfg.d), format_double(cfg.p), format_double(cfg.gamma),
                      std::to_string(r.threshold), std::to_string(r.min_deg), to_string(r.outcome),
                      std::to_string(r.nodes), "0"});
  t.summary = {{"trials", std::to_string(summary.trials)},
               {"feasible", std::to_string(summary.feasible)},
               {"infeasible", std::to_string(summary.infeasible)},
               {"found", std::to_string(summary.found)},
               {"budget_exhausted", std::to_string(summary.budget)},
               {"frequency", summary.feasible ? format_double(summary.frequency) : ""},
               {"wilson_lo", summary.feasible ? format_double(summary.wilson.lo) : ""},
               {"wilson_hi", summary.feasible ? format_double(summary.wilson.hi) : ""}};
  return t;
}

InheritanceResult inheritance_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  InheritanceResult res;
  res.cfg = cfg;
  auto host = experiment_host(cfg);
  const std::size_t n = cfg.n, k = cfg.k, d = cfg.d;
  res.subset_size = cfg.rho > 0 ? static_cast<std::size_t>(std::llround(cfg.rho * static_cast<double>(n))) : cfg.q;
  if (res.subset_size < k || res.subset_size > n) throw SpecError("subset size must lie in [k, n]");
  res.host_min_degree = min_d_degree(host, d).value;
  const auto full = binomial(static_cast<std::int64_t>(n - d), static_cast<std::int64_t>(k - d));
  res.host_density = static_cast<double>(res.host_min_degree) / static_cast<double>(full);
  const auto sub = binomial(static_cast<std::int64_t>(res.subset_size - d), static_cast<std::int64_t>(k - d));
  res.threshold = ceil_count((res.host_density - cfg.eta / 2) * static_cast<double>(sub));

  std::vector<std::vector<Vertex>> subsets;
  std::vector<std::uint64_t> seeds;
  if (cfg.exhaustive) {
    subsets = combinations(n, res.subset_size);
    seeds.assign(subsets.size(), 0);
  } else {
    std::vector<Vertex> pool(n);
    std::iota(pool.begin(), pool.end(), Vertex{0});
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      auto seed = derive_seed(cfg.master_seed, t, 2);
      std::mt19937_64 rng(seed);
      std::shuffle(pool.begin(), pool.end(), rng);
      std::vector<Vertex> s(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(res.subset_size));
      std::sort(s.begin(), s.end());
      subsets.push_back(std::move(s));
      seeds.push_back(seed);
    }
  }
  res.records.resize(subsets.size());
  parallel_for(subsets.size(), cfg.threads, [&](std::size_t i) {
    auto& r = res.records[i];
    r.trial = i;
    r.seed = seeds[i];
    r.min_deg = min_d_degree(induced(host, subsets[i]).graph, d).value;
    r.pass = r.min_deg >= res.threshold;
  });
  res.failures = static_cast<std::size_t>(
      std::count_if(res.records.begin(), res.records.end(), [](const auto& r) { return !r.pass; }));
  return res;
}

CsvTable InheritanceResult::table() const {
  CsvTable t;
  t.kind = "inheritance";
  t.meta = {{"name", cfg.name},
            {"host", cfg.host},
            {"host_min_degree", std::to_string(host_min_degree)},
            {"host_density", format_double(host_density)},
            {"mode", cfg.exhaustive ? "exhaustive" : "sampled"},
            {"bound_form", "C(Q;d)*(delta+exp(-c*eta^2*Q)) with c symbolic"},
            {"master_seed", std::to_string(cfg.master_seed)}};
  t.columns = {"trial", "seed", "n", "k", "d", "q", "eta", "threshold", "min_deg", "pass"};
  for (const auto& r : records)
    t.rows.push_back({std::to_string(r.trial), std::to_string(r.seed), std::to_string(cfg.n), std::to_string(cfg.k),
                      std::to_string(cfg.d), std::to_string(subset_size), format_double(cfg.eta),
                      std::to_string(threshold), std::to_string(r.min_deg), r.pass ? "1" : "0"});
  const double freq = records.empty() ? 0.0 : static_cast<double>(failures) / static_cast<double>(records.size());
  t.summary = {{"subsets", std::to_string(records.size())},
               {"failures", std::to_string(failures)},
               {"failure_frequency", format_double(freq)}};
  return t;
}

std::size_t load_count(const Hypergraph& g, Vertex w, const VertexSet& x) {
  std::size_t c = 0;
  for (auto id : g.incident_edges(w)) {
    auto e = g.edge(id);
    if (std::any_of(e.begin(), e.end(), [&](Vertex u) { return u != w && x.contains(u); })) ++c;
  }
  return c;
}

LoadReport neighborhood_load_check(const Hypergraph& g, double lambda, std::size_t samples, std::uint64_t seed,
                                   double p_hat) {
  const std::size_t n = g.n(), k = g.k();
  if (k < 2) throw SizeError("load check needs k >= 2");
  if (!(lambda >= 0 && lambda <= 1)) throw PreconditionError("lambda outside [0, 1]");
  LoadReport rep;
  rep.p_hat = p_hat < 0 ? edge_density(g) : p_hat;
  const double ln = lambda * static_cast<double>(n);
  rep.bound = 2 * ln * rep.p_hat *
              static_cast<double>(binomial(static_cast<std::int64_t>(n) - 2, static_cast<std::int64_t>(k) - 2));
  const auto xs = std::min<std::size_t>(static_cast<std::size_t>(std::floor(ln + 1e-9)), n - 1);
  std::vector<Vertex> pool(n);
  for (std::size_t i = 0; i < samples; ++i) {
    std::mt19937_64 rng(derive_seed(seed, i, 3));
    std::iota(pool.begin(), pool.end(), Vertex{0});
    std::shuffle(pool.begin(), pool.end(), rng);
    LoadSample s;
    s.w = pool[0];
    s.x_size = xs;
    VertexSet x(n, std::vector<Vertex>(pool.begin() + 1, pool.begin() + 1 + static_cast<std::ptrdiff_t>(xs)));
    s.count = load_count(g, s.w, x);
    s.ratio = rep.bound > 0 ? static_cast<double>(s.count) / rep.bound : 0.0;
    rep.max_ratio = std::max(rep.max_ratio, s.ratio);
    rep.max_count = std::max(rep.max_count, s.count);
    rep.samples.push_back(s);
  }
  return rep;
}

CsvTable LoadReport::table(std::uint64_t seed) const {
  CsvTable t;
  t.kind = "load";
  t.meta = {{"p_hat", format_double(p_hat)}, {"bound", format_double(bound)}, {"master_seed", std::to_string(seed)}};
  t.columns = {"sample", "w", "x_size", "count", "ratio"};
  for (std::size_t i = 0; i < samples.size(); ++i)
    t.rows.push_back({std::to_string(i), std::to_string(samples[i].w), std::to_string(samples[i].x_size),
                      std::to_string(samples[i].count), format_double(samples[i].ratio)});
  t.summary = {{"samples", std::to_string(samples.size())},
               {"max_count", std::to_string(max_count)},
               {"max_ratio", format_double(max_ratio)}};
  return t;
}

}  // namespace dlab
