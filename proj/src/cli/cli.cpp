#include "dlab/cli.hpp"
#include "dlab/absorbing.hpp"
#include "dlab/lab.hpp"
#include "dlab/matchpower.hpp"
#include "dlab/pipeline.hpp"
#include "dlab/templates.hpp"
#include "dlab/thresholds.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace dlab {

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;  // tables: csv unless json is asked for
  unsigned threads = 1;
  std::optional<std::uint64_t> budget;
};

// A negative answer from a search or check (exit 1), as opposed to bad input.
struct Negative {
  std::string why;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot write " + path);
    f << text;
  }
  void emit(const std::string& text) { emit(text, g.out); }

  Globals g;
  std::ostream& out_;
  std::ostream& err_;
};

std::string table_text(const CsvTable& t, const std::string& format) {
  if (format == "json") return table_to_json(t) + "\n";
  std::ostringstream s;
  write_csv(s, t);
  return s.str();
}

std::vector<Vertex> parse_ids(const std::string& s) {
  std::vector<Vertex> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      auto v = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(static_cast<Vertex>(v));
    } catch (const std::logic_error&) {
      throw FormatError("bad vertex list: " + s);
    }
  }
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot read " + path);
  return f;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Runner run(out, err);
  auto& g = run.g;
  CLI::App app{"dlab: exact laboratory for hypergraph perfect matchings", "dlab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--out", g.out, "output path (stdout when absent)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--budget", g.budget, "search node budget");
  std::function<int()> action;
  auto seed = [&](std::uint64_t dflt = 0) { return g.seed.value_or(dflt); };
  auto budget = [&](std::uint64_t dflt = kDefaultBudget) { return g.budget.value_or(dflt); };

  // gen ---------------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a k-graph (.khg)");
  std::string model = "hk";
  std::size_t n = 0, k = 3, d = 1;
  double p = 0.5;
  gen->add_option("--model", model)->check(CLI::IsMember({"hk", "complete", "space", "parity"}));
  gen->add_option("-n,--n", n)->required();
  gen->add_option("-k,--k", k);
  gen->add_option("-d,--d", d);
  gen->add_option("-p,--p", p);
  gen->callback([&] {
    action = [&] {
      Hypergraph h;
      if (model == "hk") h = sample_hk(n, k, p, seed());
      else if (model == "complete") h = Hypergraph::complete(n, k);
      else if (model == "space") h = space_barrier(n, k, d);
      else h = parity_barrier(n, k, d);
      std::ostringstream s;
      write_khg(s, h);
      run.emit(s.str());
      return kExitOk;
    };
  });

  // pm ----------------------------------------------------------------------
  auto* pm = app.add_subcommand("pm", "exact perfect matching oracle");
  std::string in_path;
  pm->add_option("--in", in_path)->required();
  pm->callback([&] {
    action = [&] {
      auto h = load_khg(in_path);
      auto r = find_perfect_matching(h, budget());
      if (r.status != MatchStatus::perfect)
        throw Negative{std::string("no perfect matching (") + to_string(r.status) + ", " +
                       std::to_string(r.nodes_explored) + " nodes)"};
      std::ostringstream s;
      write_matching(s, r.matching.canonical().edges());
      run.emit(s.str());
      return kExitOk;
    };
  });

  // mdk ---------------------------------------------------------------------
  auto* mdk = app.add_subcommand("mdk", "exact Dirac threshold m_d(k,n) by full sweep");
  std::string sweep = "both";
  mdk->add_option("-n,--n", n)->required();
  mdk->add_option("-k,--k", k)->required();
  mdk->add_option("-d,--d", d)->required();
  mdk->add_option("--mode", sweep)->check(CLI::IsMember({"pruned", "unpruned", "both"}));
  mdk->callback([&] {
    action = [&] {
      std::optional<ThresholdRecord> pr, un;
      if (sweep != "unpruned") pr = exact_dirac_threshold(n, k, d, SweepMode::pruned, g.threads);
      if (sweep != "pruned") un = exact_dirac_threshold(n, k, d, SweepMode::unpruned, g.threads);
      const auto& rec = pr ? *pr : *un;
      const bool agree = !(pr && un) || pr->m_value == un->m_value;
      CsvTable t;
      t.kind = "mdk";
      t.columns = {"n", "k", "d", "mode", "m", "graphs_enumerated", "witness_edges"};
      for (const auto* r : {pr ? &*pr : nullptr, un ? &*un : nullptr})
        if (r)
          t.rows.push_back({std::to_string(n), std::to_string(k), std::to_string(d),
                            r->mode == SweepMode::pruned ? "pruned" : "unpruned", std::to_string(r->m_value),
                            std::to_string(r->graphs_enumerated), std::to_string(r->extremal_witness.edge_count())});
      auto dens = conjectured_density(d, k);
      t.summary = {{"m", std::to_string(rec.m_value)},
                   {"agree", agree ? "1" : "0"},
                   {"conjectured_density", std::to_string(dens.numerator()) + "/" + std::to_string(dens.denominator())}};
      run.emit(table_text(t, g.format));
      if (!agree) throw Negative{"pruned and unpruned sweeps disagree"};
      return kExitOk;
    };
  });

  // absorber ----------------------------------------------------------------
  auto* ab = app.add_subcommand("absorber", "rooted absorber search");
  std::string roots_arg;
  RootedSearchConfig rcfg;
  std::size_t sparse_k = 0;
  ab->add_option("--in", in_path)->required();
  ab->add_option("--roots", roots_arg, "comma-separated root ids")->required();
  ab->add_option("--max-order", rcfg.max_order);
  ab->add_option("--min-order", rcfg.min_order);
  ab->add_option("--sparse", sparse_k, "require K-sparsity");
  ab->callback([&] {
    action = [&] {
      auto h = load_khg(in_path);
      if (sparse_k) rcfg.require_sparse = sparse_k;
      rcfg.budget = budget(rcfg.budget);
      rcfg.seed = seed();
      auto r = find_rooted_absorber(h, parse_ids(roots_arg), VertexSet(h.n()), rcfg);
      if (!r) throw Negative{std::string("no absorber: ") + to_string(r.status) + " " + r.diagnostic};
      run.emit(absorber_to_json(*r) + "\n");
      return kExitOk;
    };
  });

  // template ----------------------------------------------------------------
  auto* tp = app.add_subcommand("template", "build a resilient template (writes <out>.khg and <out>.json)");
  std::size_t r_size = 6;
  std::string vmode = "exhaustive";
  TemplateParams tparams;
  tp->add_option("-r,--r", r_size)->required();
  tp->add_option("-k,--k", k);
  tp->add_option("--max-degree", tparams.max_degree);
  tp->add_option("--verify", vmode)->check(CLI::IsMember({"exhaustive", "sampled", "none"}));
  tp->callback([&] {
    action = [&] {
      if (g.out.empty()) throw FormatError("template needs --out <prefix>");
      tparams.threads = g.threads;
      auto t = build_resilient_template(r_size, k, tparams, seed());
      if (!t) throw Negative{"template search failed: " + t.diagnostic};
      std::string verdict_text = "unverified";
      int code = kExitOk;
      if (vmode != "none") {
        auto v = verify_resilient_template(*t, vmode == "exhaustive" ? VerifyMode::exhaustive : VerifyMode::sampled,
                                           2000, seed(), g.threads);
        verdict_text = std::string(to_string(v.mode)) + (v.ok ? " ok" : " FAILED") + " (" +
                       std::to_string(v.removals_checked) + " removals)";
        if (!v.ok) code = kExitFailed;
      }
      save_template(*t, g.out + ".khg", g.out + ".json", verdict_text);
      run.err_ << "template r=" << r_size << " k=" << k << " v=" << t->vertex_count() << " e=" << t->edge_count()
               << " " << verdict_text << "\n";
      return code;
    };
  });

  // pipeline ----------------------------------------------------------------
  auto* pl = app.add_subcommand("pipeline", "absorbing-method perfect matching (JSON report)");
  double gamma = 0.1;
  std::string params_path, matching_out;
  pl->add_option("--in", in_path)->required();
  pl->add_option("-d,--d", d);
  pl->add_option("--gamma", gamma);
  pl->add_option("--params", params_path, "key=value pipeline parameters");
  pl->add_option("--matching", matching_out, "write the matching here on success");
  pl->callback([&] {
    action = [&] {
      auto h = load_khg(in_path);
      PipelineParams pp;
      if (!params_path.empty()) {
        auto f = open_in(params_path);
        pp = read_pipeline_params(f);
      }
      pp.threads = g.threads;
      if (g.budget) pp.pm_budget = *g.budget;
      auto rep = dirac_perfect_matching(h, d, gamma, pp, seed());
      run.emit(report_to_json(rep) + "\n");
      if (rep.success && !matching_out.empty()) {
        std::ostringstream s;
        write_matching(s, rep.matching);
        run.emit(s.str(), matching_out);
      }
      if (!rep.success) throw Negative{"pipeline failed at " + rep.failure_stage};
      return kExitOk;
    };
  });

  // experiment --------------------------------------------------------------
  auto* ex = app.add_subcommand("experiment", "seeded statistical experiments");
  ex->require_subcommand(1);
  std::string config_path;
  ExperimentConfig cfg;
  auto load_cfg = [&](const std::string& kind) {
    if (!config_path.empty()) {
      auto f = open_in(config_path);
      cfg = read_config(f);
    }
    cfg.kind = kind;
    if (g.seed) cfg.master_seed = *g.seed;
    if (g.budget) cfg.budget = *g.budget;
    cfg.threads = g.threads;
    cfg.validate();
  };
  auto out_path = [&] { return g.out.empty() ? cfg.output : g.out; };
  for (const char* kind : {"resilience", "inheritance", "load"}) {
    auto* sub = ex->add_subcommand(kind);
    sub->add_option("--config", config_path, "key=value experiment config");
    sub->callback([&, kind = std::string(kind)] {
      action = [&, kind] {
        load_cfg(kind);
        CsvTable t;
        if (kind == "resilience") {
          t = resilience_experiment(cfg).table();
        } else if (kind == "inheritance") {
          t = inheritance_experiment(cfg).table();
        } else {
          auto host = experiment_host(cfg);
          double ph = cfg.host == "random" && !cfg.empirical_p ? cfg.p : -1;
          t = neighborhood_load_check(host, cfg.lambda, cfg.trials, cfg.master_seed, ph).table(cfg.master_seed);
        }
        run.emit(table_text(t, g.format), out_path());
        return kExitOk;
      };
    });
  }

  // verify ------------------------------------------------------------------
  auto* vf = app.add_subcommand("verify", "check a matching, absorbers or a template");
  std::string m_path, a_path, t_khg, t_json;
  bool perfect = false;
  vf->add_option("--in", in_path, "host .khg");
  vf->add_option("--matching", m_path);
  vf->add_flag("--perfect", perfect, "the matching must cover every vertex");
  vf->add_option("--absorbers", a_path, "JSON-lines absorbers");
  vf->add_option("--template", t_khg, "template .khg (sidecar from --sidecar)");
  vf->add_option("--sidecar", t_json);
  vf->callback([&] {
    action = [&] {
      int checked = 0;
      std::string verdict;
      if (!m_path.empty()) {
        if (in_path.empty()) throw FormatError("--matching needs --in");
        auto h = load_khg(in_path);
        auto f = open_in(m_path);
        auto why = check_matching(h, read_matching(f), perfect);
        if (!why.empty()) throw Negative{"matching rejected: " + why};
        ++checked;
      }
      if (!a_path.empty()) {
        std::optional<Hypergraph> h;
        if (!in_path.empty()) h = load_khg(in_path);
        auto f = open_in(a_path);
        std::string line;
        std::size_t idx = 0;
        while (std::getline(f, line)) {
          if (line.empty()) continue;
          auto a = absorber_from_json(line);
          auto v = h ? verify_absorber(a, *h) : verify_absorber(a, a.roots.size());
          if (!v) throw Negative{"absorber " + std::to_string(idx) + " rejected: " + v.reason};
          ++idx;
        }
        ++checked;
      }
      if (!t_khg.empty()) {
        if (t_json.empty()) throw FormatError("--template needs --sidecar");
        auto t = load_template(t_khg, t_json);
        auto v = verify_resilient_template(t, VerifyMode::exhaustive, 2000, seed(), g.threads);
        if (!v) throw Negative{"template fails a removal"};
        ++checked;
      }
      if (!checked) throw FormatError("verify needs --matching, --absorbers or --template");
      run.out_ << "ok\n";
      return kExitOk;
    };
  });

  std::vector<const char*> argv{"dlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "dlab: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    return action();
  } catch (const Negative& e) {
    err << "dlab: " << e.why << "\n";
    return kExitFailed;
  } catch (const FormatError& e) {
    err << "dlab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SizeError& e) {
    err << "dlab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SpecError& e) {
    err << "dlab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "dlab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "dlab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "dlab: " << e.what() << "\n";
    return kExitFailed;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace dlab
